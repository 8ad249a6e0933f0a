#include "planeq/planner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

double plane_splitting_hz(double gradient_T_per_m, double chain_spacing_m) {
  if (gradient_T_per_m < 0.0)
    throw ValidationError("plane_splitting_hz: gradient must be >= 0");
  return constants::gamma_H_hz_per_T * gradient_T_per_m * chain_spacing_m;
}

std::int64_t addressable_planes(double bandwidth_hz, double splitting_hz) {
  if (!(bandwidth_hz > 0.0))
    throw ValidationError("addressable_planes: bandwidth must be > 0");
  if (!(splitting_hz > 0.0))
    throw ValidationError("addressable_planes: splitting must be > 0");
  return static_cast<std::int64_t>(std::floor(bandwidth_hz / splitting_hz));
}

std::int64_t physical_plane_limit(double sample_thickness_m, double chain_spacing_m) {
  if (!(sample_thickness_m > 0.0))
    throw ValidationError("physical_plane_limit: thickness must be > 0");
  if (!(chain_spacing_m > 0.0))
    throw ValidationError("physical_plane_limit: spacing must be > 0");
  return static_cast<std::int64_t>(std::floor(sample_thickness_m / chain_spacing_m));
}

double spins_per_plane(double width_m, double depth_m, double chain_separation_m) {
  if (!(width_m > 0.0) || !(depth_m > 0.0))
    throw ValidationError("spins_per_plane: lateral dims must be > 0");
  if (!(chain_separation_m > 0.0))
    throw ValidationError("spins_per_plane: separation must be > 0");
  const double cell_area =
      std::sqrt(3.0) / 2.0 * chain_separation_m * chain_separation_m;
  return width_m * depth_m / cell_area;
}

OverlapReport overlap_check(OverlapStrategy strategy, double broadening_hz,
                            double splitting_hz) {
  if (broadening_hz < 0.0 || splitting_hz < 0.0)
    throw ValidationError("overlap_check: inputs must be >= 0");
  OverlapReport r;
  r.strategy = strategy;
  r.broadening_hz = broadening_hz;
  r.splitting_hz = splitting_hz;
  r.threshold_hz =
      strategy == OverlapStrategy::Nn ? splitting_hz : 2.0 * splitting_hz;
  r.pass = broadening_hz < r.threshold_hz;
  r.margin_hz = r.threshold_hz - broadening_hz;
  return r;
}

DevicePlan device_plan(const PlannerConfig& config) {
  std::string missing;
  auto require = [&](double v, const char* name) {
    if (!(v > 0.0)) missing += missing.empty() ? name : std::string(", ") + name;
  };
  require(config.gradient_T_per_m, "device.gradient");
  require(config.bandwidth_hz, "device.bandwidth");
  require(config.sample_thickness_m, "device.sample_thickness");
  require(config.sample_width_m, "device.sample_width");
  require(config.sample_depth_m, "device.sample_depth");
  require(config.chain_spacing_m, "lattice.chain_spacing");
  require(config.chain_separation_m, "lattice.chain_separation");
  if (config.broadening_hz < 0.0)
    missing += missing.empty() ? "device.broadening" : ", device.broadening";
  if (!missing.empty())
    throw ValidationError("device_plan: missing or invalid fields: " + missing);

  DevicePlan plan;
  plan.gradient_T_per_m = config.gradient_T_per_m;
  plan.decoupling_bandwidth_hz = config.bandwidth_hz;
  plan.splitting_hz =
      plane_splitting_hz(config.gradient_T_per_m, config.chain_spacing_m);
  plan.addressable_planes =
      addressable_planes(config.bandwidth_hz, plan.splitting_hz);
  plan.sample_dims_m[0] = config.sample_thickness_m;
  plan.sample_dims_m[1] = config.sample_width_m;
  plan.sample_dims_m[2] = config.sample_depth_m;
  plan.physical_plane_limit =
      physical_plane_limit(config.sample_thickness_m, config.chain_spacing_m);
  plan.spins_per_plane = spins_per_plane(config.sample_width_m, config.sample_depth_m,
                                         config.chain_separation_m);
  plan.active_thickness_m = plan.addressable_planes * config.chain_spacing_m;
  plan.overlap =
      overlap_check(config.strategy, config.broadening_hz, plan.splitting_hz);
  plan.feasible = plan.overlap.pass && plan.addressable_planes >= 1;
  return plan;
}

std::string plan_to_text(const DevicePlan& plan) {
  std::ostringstream out;
  char buf[128];
  auto line = [&](const char* key, const char* fmt, auto value) {
    std::snprintf(buf, sizeof(buf), fmt, value);
    out << key << " = " << buf << "\n";
  };
  line("gradient_T_per_m", "%.6g", plan.gradient_T_per_m);
  line("gradient_G_per_cm", "%.6g",
       plan.gradient_T_per_m / constants::gauss_per_cm_T_per_m);
  line("splitting_hz", "%.6g", plan.splitting_hz);
  line("decoupling_bandwidth_hz", "%.6g", plan.decoupling_bandwidth_hz);
  line("addressable_planes", "%lld",
       static_cast<long long>(plan.addressable_planes));
  line("sample_thickness_m", "%.6g", plan.sample_dims_m[0]);
  line("sample_width_m", "%.6g", plan.sample_dims_m[1]);
  line("sample_depth_m", "%.6g", plan.sample_dims_m[2]);
  line("physical_plane_limit", "%lld",
       static_cast<long long>(plan.physical_plane_limit));
  line("spins_per_plane", "%.6g", plan.spins_per_plane);
  line("active_thickness_m", "%.6g", plan.active_thickness_m);
  out << "overlap.strategy = "
      << (plan.overlap.strategy == OverlapStrategy::Nn ? "nn" : "nnn") << "\n";
  line("overlap.broadening_hz", "%.6g", plan.overlap.broadening_hz);
  line("overlap.splitting_hz", "%.6g", plan.overlap.splitting_hz);
  line("overlap.threshold_hz", "%.6g", plan.overlap.threshold_hz);
  out << "overlap.pass = " << (plan.overlap.pass ? "true" : "false") << "\n";
  line("overlap.margin_hz", "%.6g", plan.overlap.margin_hz);
  out << "feasible = " << (plan.feasible ? "true" : "false") << "\n";
  return out.str();
}

std::string plan_to_json(const DevicePlan& plan) {
  nlohmann::ordered_json j;
  j["gradient_T_per_m"] = plan.gradient_T_per_m;
  j["gradient_G_per_cm"] = plan.gradient_T_per_m / constants::gauss_per_cm_T_per_m;
  j["splitting_hz"] = plan.splitting_hz;
  j["decoupling_bandwidth_hz"] = plan.decoupling_bandwidth_hz;
  j["addressable_planes"] = plan.addressable_planes;
  j["sample_dims_m"] = {plan.sample_dims_m[0], plan.sample_dims_m[1],
                        plan.sample_dims_m[2]};
  j["physical_plane_limit"] = plan.physical_plane_limit;
  j["spins_per_plane"] = plan.spins_per_plane;
  j["active_thickness_m"] = plan.active_thickness_m;
  j["overlap"] = {
      {"strategy", plan.overlap.strategy == OverlapStrategy::Nn ? "nn" : "nnn"},
      {"broadening_hz", plan.overlap.broadening_hz},
      {"splitting_hz", plan.overlap.splitting_hz},
      {"threshold_hz", plan.overlap.threshold_hz},
      {"pass", plan.overlap.pass},
      {"margin_hz", plan.overlap.margin_hz},
  };
  j["feasible"] = plan.feasible;
  return j.dump(2) + "\n";
}

}  // namespace planeq
