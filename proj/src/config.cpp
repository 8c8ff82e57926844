#include "fracflow/config.hpp"

#include <fstream>
#include <sstream>

#include "fracflow/io.hpp"

namespace fracflow {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunManifest RunManifest::from_text(const std::string& text) {
  RunManifest m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) + ": empty key");
    m.kv_[key] = value;
  }
  return m;
}

RunManifest RunManifest::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_text(ss.str());
}

void RunManifest::set(const std::string& key, const std::string& value) { kv_[key] = value; }

void RunManifest::set_override(const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw config_error("--set expects key=value, got: " + assignment);
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool RunManifest::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunManifest::get(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double RunManifest::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + ": expected number, got '" + it->second + "'");
  }
}

int RunManifest::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw config_error("config key " + key + ": expected integer, got '" + it->second + "'");
  }
}

bool RunManifest::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw config_error("config key " + key + ": expected boolean, got '" + it->second + "'");
}

std::vector<double> RunManifest::get_double_list(const std::string& key) const {
  std::vector<double> out;
  auto it = kv_.find(key);
  if (it == kv_.end()) return out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw config_error("config key " + key + ": bad list element '" + tok + "'");
    }
  }
  return out;
}

std::vector<std::string> RunManifest::get_string_list(const std::string& key) const {
  std::vector<std::string> out;
  auto it = kv_.find(key);
  if (it == kv_.end()) return out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::string RunManifest::canonical_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv_) os << k << "=" << v << "\n";
  os << "profile=" << profile << "\n";
  os << "seed=" << seed << "\n";
  return os.str();
}

std::string RunManifest::hash() const {
  std::uint64_t h = fnv1a64(canonical_text());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

FractionalOrder RunManifest::order() const {
  FractionalOrder o;
  o.alpha = get_double("order.alpha", 0.5);
  o.ambient_dim = grid_d() + 1;
  o.validate();
  return o;
}

QuadratureSpec RunManifest::quadrature() const {
  QuadratureSpec q;
  q.r_inner = get_double("quad.r_inner", q.r_inner);  // 0 keeps the auto default
  q.r_outer = get_double("quad.r_outer", q.r_outer);
  q.n_radial = get_int("quad.n_radial", q.n_radial);
  q.n_angular = get_int("quad.n_angular", q.n_angular);
  q.tail_mode = tail_mode_from_string(get("quad.tail_mode", "grad-bound"));
  q.regularity_probe = get_bool("quad.regularity_probe", true);
  q.validate(grid_d());
  return q;
}

FlowConfig RunManifest::flow_config() const {
  FlowConfig f;
  f.order = order();
  f.scheme = scheme_from_string(get("flow.scheme", "imex"));
  f.dt = get_double("flow.dt", 0.0);
  f.cfl_factor = get_double("flow.cfl_factor", 0.5);
  f.T = get_double("flow.T", 1.0);
  f.spec = quadrature();
  f.monitor_every = get_int("flow.monitor_every", 1);
  f.relinearize_every = get_int("flow.relinearize_every", 0);
  f.snapshot_every = get_int("flow.snapshot_every", 0);
  f.holder_gammas = get_double_list("flow.holder_gammas");
  f.holder_max_lag = get_int("flow.holder_max_lag", 16);
  f.threads = threads;
  f.validate();
  return f;
}

ProfileParams RunManifest::profile_params() const {
  ProfileParams p;
  p.amplitude = get_double("profile.amplitude", p.amplitude);
  p.width = get_double("profile.width", p.width);
  p.center = {get_double("profile.center_x", 0.0), get_double("profile.center_y", 0.0)};
  p.slope = {get_double("profile.slope_x", 0.3), get_double("profile.slope_y", 0.0)};
  p.offset = get_double("profile.offset", p.offset);
  p.beta = get_double("profile.beta", p.beta);
  p.sigma = get_double("profile.sigma", 0.0);
  return p;
}

int RunManifest::grid_d() const {
  int d = get_int("grid.d", 1);
  if (d != 1 && d != 2) throw config_error("grid.d must be 1 or 2");
  return d;
}

double RunManifest::grid_h() const {
  double h = get_double("grid.h", 1.0 / 128.0);
  if (!(h > 0.0)) throw config_error("grid.h must be > 0");
  return h;
}

double RunManifest::box_halfwidth() const {
  double L = get_double("grid.box_halfwidth", 6.0);
  if (!(L > 0.0)) throw config_error("grid.box_halfwidth must be > 0");
  return L;
}

}  // namespace fracflow
