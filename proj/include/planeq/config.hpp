#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "planeq/lattice.hpp"
#include "planeq/planner.hpp"

namespace planeq {

// Parsed run configuration. Config files are line-oriented
// `section.key = value` text; scalar values carry explicit unit suffixes
// (A/Angstrom, nm, m, cm, Hz, kHz, MHz, G/cm, T/m, s, ms, us).
// Unknown keys are errors.
struct RunConfig {
  LatticeSpec lattice;

  // device section
  double gradient_T_per_m = 0.0;
  double bandwidth_hz = 0.0;
  double sample_thickness_m = 0.0;
  double sample_width_m = 0.0;
  double sample_depth_m = 0.0;
  OverlapStrategy strategy = OverlapStrategy::Nnn;
  std::optional<double> broadening_hz;

  // simulation section
  int carrier_plane = 0;
  double lg_amplitude_hz = 0.0;
  double recouple_amplitude_hz = 0.0;
  int recouple_tilt_sign = +1;
  double mrev_tau_s = 0.0;
  double mrev_offset_hz = 100.0;
  double aht_rel_tolerance = 1e-9;
  int plane_a = 0;
  int plane_b = 0;
  double coupling_cutoff_hz = 0.0;

  // which config keys were present (for per-command requirement checks)
  std::map<std::string, bool> present;

  bool has(const std::string& key) const {
    auto it = present.find(key);
    return it != present.end() && it->second;
  }

  PlannerConfig planner_config() const;  // throws if device keys missing
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Scalar with unit suffix -> SI value of the named kind
// (kind: "length" | "frequency" | "gradient" | "time" | "number").
double parse_quantity(const std::string& text, const std::string& kind,
                      const std::string& key_for_error);

}  // namespace planeq
