#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracflow/curvature.hpp"
#include "fracflow/flow.hpp"
#include "fracflow/profiles.hpp"

namespace fracflow {

/// Parsed run description: dotted key-value config, profile, output dir,
/// seed. The canonical text rendering is hashed into every JSON sidecar so
/// artifacts are traceable to the exact manifest.
class RunManifest {
 public:
  static RunManifest from_file(const std::string& path);
  static RunManifest from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  void set_override(const std::string& assignment);  // "key=value"

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  std::string profile = "cosine";
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;

  /// Sorted "key=value" lines plus profile/seed; input to the hash.
  std::string canonical_text() const;
  std::string hash() const;  // FNV-1a 64 in hex

  const std::map<std::string, std::string>& entries() const { return kv_; }

  // Derived module configs.
  FractionalOrder order() const;
  QuadratureSpec quadrature() const;
  FlowConfig flow_config() const;
  ProfileParams profile_params() const;
  int grid_d() const;
  double grid_h() const;
  double box_halfwidth() const;

 private:
  std::map<std::string, std::string> kv_;
};

std::uint64_t fnv1a64(const std::string& s);

}  // namespace fracflow
