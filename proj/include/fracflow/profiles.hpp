#pragma once

#include <map>
#include <string>

#include "fracflow/grid.hpp"

namespace fracflow {

/// Built-in initial profiles. Parameters come with usable defaults and can be
/// overridden through the profile.* config keys.
///   zero          u = 0                                   (compact support)
///   affine        u = a.x + b                              (affine far field)
///   cosine        u = eps cos(x0) [cos(x1)]                (periodic, [0,2pi)^d)
///   gaussian-bump u = A exp(-|x-c|^2 / 2w^2)               (compact support)
///   sum-of-bumps  two gaussians                            (compact support)
///   rough-cusp    u = -A W(x) (|x|^2 + sigma^2)^{(1+beta)/2}, sigma ~ grid
///                 scale: C^{1+beta}-like data for smoothing runs (compact)
struct ProfileParams {
  double amplitude = 0.5;
  double width = 0.5;
  Point center{0.0, 0.0};
  Point slope{0.3, 0.0};
  double offset = 0.1;
  double beta = 0.6;
  double sigma = 0.0;  // rough-cusp mollification scale; 0 = 2h
};

struct Profile {
  ScalarField field;
  GridSpec grid;
  std::string name;
};

bool is_known_profile(const std::string& name);

/// Build profile `name` on a d-dimensional grid of spacing h. box_halfwidth
/// applies to the compact profiles (box = [-L,L]^d); the periodic ones always
/// live on [0,2pi)^d.
Profile make_profile(const std::string& name, int d, double h, double box_halfwidth,
                     const ProfileParams& params = {});

GridFunction sample_profile(const Profile& p);

}  // namespace fracflow
