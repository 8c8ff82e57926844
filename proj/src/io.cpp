#include "fracflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fracflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw config_error("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot write " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void save_snapshot(const GridFunction& g, const std::string& path_base,
                   const std::string& manifest_hash) {
  const auto& s = g.spec();
  {
    std::ofstream f(path_base + ".f64", std::ios::binary);
    if (!f) throw config_error("cannot write " + path_base + ".f64");
    f.write(reinterpret_cast<const char*>(g.values().data()),
            static_cast<std::streamsize>(g.values().size() * sizeof(double)));
  }
  nlohmann::ordered_json j;
  j["d"] = s.d;
  j["h"] = s.h;
  j["origin"] = {s.origin[0], s.origin[1]};
  j["shape"] = {s.shape[0], s.shape[1]};
  j["extension"] = to_string(s.extension);
  j["affine_a"] = {s.affine_a[0], s.affine_a[1]};
  j["affine_b"] = s.affine_b;
  j["manifest_hash"] = manifest_hash;
  write_text_file(path_base + ".json", j.dump(2) + "\n");
}

GridFunction load_snapshot(const std::string& path_base) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path_base + ".json"));
  GridSpec s;
  s.d = j.at("d").get<int>();
  s.h = j.at("h").get<double>();
  s.origin = {j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()};
  s.shape = {j.at("shape")[0].get<int>(), j.at("shape")[1].get<int>()};
  s.extension = extension_from_string(j.at("extension").get<std::string>());
  s.affine_a = {j.at("affine_a")[0].get<double>(), j.at("affine_a")[1].get<double>()};
  s.affine_b = j.at("affine_b").get<double>();

  std::ifstream f(path_base + ".f64", std::ios::binary);
  if (!f) throw config_error("cannot read " + path_base + ".f64");
  std::vector<double> vals(static_cast<std::size_t>(s.shape[0]) * s.shape[1]);
  f.read(reinterpret_cast<char*>(vals.data()),
         static_cast<std::streamsize>(vals.size() * sizeof(double)));
  if (!f) throw config_error("snapshot payload truncated: " + path_base);
  return GridFunction(s, std::move(vals));
}

void write_grid_csv(const GridFunction& g, const std::string& path) {
  std::ostringstream os;
  if (g.d() == 1)
    os << "x,value\n";
  else
    os << "x,y,value\n";
  for (int i = 0; i < g.n(0); ++i)
    for (int j = 0; j < g.n(1); ++j) {
      Point p = g.node_coord(i, j);
      os << format_double(p[0]);
      if (g.d() == 2) os << "," << format_double(p[1]);
      os << "," << format_double(g.at(i, j)) << "\n";
    }
  write_text_file(path, os.str());
}

void write_trace_csv(const FlowTrace& t, const std::string& path) {
  std::ostringstream os;
  os << "t,sup_norm,lip_norm,sup_dtu,min_dtu,max_dtu";
  for (double g : t.gammas) os << ",holder_" << format_double(g);
  os << ",tail\n";
  for (std::size_t i = 0; i < t.rows(); ++i) {
    os << format_double(t.times[i]) << "," << format_double(t.sup_u[i]) << ","
       << format_double(t.lip_u[i]) << "," << format_double(t.sup_dtu[i]) << ","
       << format_double(t.min_dtu[i]) << "," << format_double(t.max_dtu[i]);
    for (const auto& col : t.holder) os << "," << format_double(col[i]);
    os << "," << format_double(t.tail[i]) << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace fracflow
