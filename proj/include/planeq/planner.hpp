#pragma once

#include <cstdint>
#include <string>

namespace planeq {

enum class OverlapStrategy { Nn, Nnn };

struct OverlapReport {
  OverlapStrategy strategy = OverlapStrategy::Nnn;
  double broadening_hz = 0.0;
  double splitting_hz = 0.0;
  double threshold_hz = 0.0;  // splitting (nn) or 2x splitting (nnn)
  bool pass = false;
  double margin_hz = 0.0;     // threshold - broadening
};

struct PlannerConfig {
  double gradient_T_per_m = 0.0;
  double bandwidth_hz = 0.0;
  double sample_thickness_m = 0.0;  // along the field axis
  double sample_width_m = 0.0;
  double sample_depth_m = 0.0;
  double chain_spacing_m = 0.0;
  double chain_separation_m = 0.0;
  OverlapStrategy strategy = OverlapStrategy::Nnn;
  double broadening_hz = 0.0;  // recoupled |D_AB| or a configured value
};

struct DevicePlan {
  double gradient_T_per_m = 0.0;
  double splitting_hz = 0.0;
  double decoupling_bandwidth_hz = 0.0;
  std::int64_t addressable_planes = 0;
  double sample_dims_m[3] = {0.0, 0.0, 0.0};  // thickness, width, depth
  std::int64_t physical_plane_limit = 0;
  double spins_per_plane = 0.0;
  double active_thickness_m = 0.0;  // addressable_planes x chain_spacing
  OverlapReport overlap;
  bool feasible = false;
};

// Delta f = (gamma / 2pi) * G * a
double plane_splitting_hz(double gradient_T_per_m, double chain_spacing_m);

// floor(bandwidth / splitting); a partially resolved plane is not a qubit
std::int64_t addressable_planes(double bandwidth_hz, double splitting_hz);

// floor(thickness / spacing)
std::int64_t physical_plane_limit(double sample_thickness_m, double chain_spacing_m);

// area / (sqrt(3)/2 * s^2): ideal hexagonal packing of chains, one hydrogen
// per chain per plane
double spins_per_plane(double width_m, double depth_m, double chain_separation_m);

OverlapReport overlap_check(OverlapStrategy strategy, double broadening_hz,
                            double splitting_hz);

DevicePlan device_plan(const PlannerConfig& config);

std::string plan_to_text(const DevicePlan& plan);  // 6 significant digits
std::string plan_to_json(const DevicePlan& plan);  // full precision

}  // namespace planeq
