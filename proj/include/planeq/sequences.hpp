#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planeq/spinsim.hpp"

namespace planeq {

// Which planes a channel or rotation addresses.
struct PlaneSelector {
  bool all = false;
  std::set<int> planes;

  static PlaneSelector every_plane() { return {true, {}}; }
  static PlaneSelector single(int plane) { return {false, {plane}}; }
  bool contains(int plane) const { return all || planes.count(plane) > 0; }
};

// One rf channel of a segment. The channel is tuned to the resonance of
// `anchor_plane` plus a deliberate detuning; `offset_hz` is the residual
// z-field (in Hz) seen by spins of the anchor plane in the channel frame.
// Spins of other targeted planes additionally see their gradient offset
// relative to the anchor.
struct PulseChannel {
  PlaneSelector target;
  int anchor_plane = 0;
  double offset_hz = 0.0;
  double amplitude_hz = 0.0;  // nu_1 = omega_1 / 2pi
  double phase_rad = 0.0;     // rf axis (cos phi, sin phi, 0)
};

// Instantaneous rotation substituting finite rf for one segment.
struct IdealRotation {
  PlaneSelector target;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  double angle_rad = 0.0;
};

struct PulseSegment {
  double duration_s = 0.0;  // 0 only for ideal rotations
  std::vector<PulseChannel> channels;
  std::optional<IdealRotation> ideal;
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  int n_repeats = 1;
  // residual phase (rad) left by the commensuration search, when applicable
  double commensuration_residual_rad = 0.0;

  double cycle_time_s() const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Sequence builders
// ---------------------------------------------------------------------------

// Continuous off-resonance irradiation of every plane with offset nu1/sqrt(2),
// so the effective field is tilted at the magic angle. One segment per cycle,
// cycle time 1/nu_eff with nu_eff = nu1 * sqrt(3/2).
PulseSequence lee_goldburg(double amplitude_hz, int n_cycles);

// Standard 8-pulse cycle, two mirror-related 4-pulse subcycles of 90 degree
// pulses with tau and 2tau windows; cycle time 12 tau. With ideal_pulses
// false, pulses have finite amplitude_hz and windows are center-to-center.
PulseSequence mrev8(double tau_s, int n_cycles, bool ideal_pulses,
                    double amplitude_hz = 0.0);

// Rotation `angle` about the in-plane axis set by `phase` on one plane.
// amplitude_hz <= 0 requests an ideal (instantaneous) rotation.
PulseSequence selective_pulse(int plane, double angle_rad, double phase_rad,
                              double amplitude_hz);

// Two simultaneous channels at the two planes' resonance frequencies, each
// detuned by tilt_sign * sqrt(2) * nu1 so that each effective field lies
// perpendicular to the magic-angle axis (tilt 35.26 or 144.74 degrees from
// the field). Duration is rounded to a commensurate number of effective
// precession periods (residual recorded on the sequence).
PulseSequence double_irradiation(int plane_a, int plane_b, double amplitude_hz,
                                 double duration_s, int tilt_sign = +1);

// ---------------------------------------------------------------------------
// Toggling-frame machinery
// ---------------------------------------------------------------------------

// Rotating-frame rf generator of one segment:
//   sum over channels, over targeted spins k:
//     2pi nu1 (cos phi Ix_k + sin phi Iy_k)
//   + 2pi (offset_hz + gradient offset of k relative to the anchor) Iz_k
Operator rf_hamiltonian(const PulseSequence& seq, int segment_index,
                        const SpinSystemModel& model);

// Static effective-field direction and magnitude seen by one spin in one
// segment (zero magnitude if the spin is not irradiated).
struct EffectiveField {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  double magnitude_hz = 0.0;
};
EffectiveField segment_effective_field(const PulseSequence& seq, int segment_index,
                                       const SpinSystemModel& model, int site_index);

// Per-spin decomposition frame: u along the spin's effective field (z when
// unirradiated), v/w completing the right-handed triad.
struct SpinFrame {
  Eigen::Vector3d u = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d v = Eigen::Vector3d::UnitX();
  Eigen::Vector3d w = Eigen::Vector3d::UnitY();
  bool irradiated = false;

  const Eigen::Vector3d& axis(char name) const;
};

// One term of the product-operator decomposition. Axis labels are per-spin:
// u = along that spin's effective field (z when unirradiated), v/w complete
// the right-handed triad.
struct ProductTerm {
  std::vector<int> sites;         // one or two site indexes
  std::vector<char> axes;         // 'u', 'v', 'w' per site
  double coefficient_hz = 0.0;
};

struct SuppressionEntry {
  std::string label;     // e.g. "pair 0-4 (plane 0-2)"
  int i = 0, j = 0;
  double before_hz = 0.0;          // norm of the bare two-spin block
  double after_hz = 0.0;           // norm of the averaged block
  double after_transfer_hz = 0.0;  // part able to flip an unirradiated spin
};

struct EffectiveHamiltonianReport {
  Operator h_bar;                       // zeroth-order average of H_int [rad/s]
  std::vector<ProductTerm> decomposition;
  double residual_norm_hz = 0.0;        // reconstruction defect
  std::vector<SuppressionEntry> suppression;
  std::vector<EffectiveField> effective_fields;  // per spin, from the rf
  std::vector<SpinFrame> frames;        // decomposition frames per spin
  double cycle_time_s = 0.0;
  double achieved_tolerance = 0.0;      // quadrature convergence estimate [Hz]

  // Largest |coefficient| over two-spin terms between the given site sets.
  double pair_coefficient_hz(const std::vector<int>& a,
                             const std::vector<int>& b) const;
  std::string to_csv() const;  // term_label, coefficient_hz
};

struct AhtOptions {
  double rel_tolerance = 1e-6;  // vs max |H_int| element
  int max_quadrature_order = 4096;
};

// Zeroth-order average Hamiltonian of H_int in the rf toggling frame over one
// cycle, by per-segment adaptive Gauss-Legendre quadrature.
EffectiveHamiltonianReport average_hamiltonian(const PulseSequence& seq,
                                               const Operator& h_int,
                                               const SpinSystemModel& model,
                                               const AhtOptions& opts = {});

// Exact time-ordered propagator of H_int + H_rf over the whole sequence
// (n_repeats applications).
Operator stroboscopic_propagator(const PulseSequence& seq,
                                 const SpinSystemModel& model,
                                 const Operator& h_int);

// Propagator predicted by the report for n_cycles cycles:
// [U_rf(t_c) exp(-i H_bar t_c)]^n_cycles.
Operator effective_propagator(const PulseSequence& seq, const SpinSystemModel& model,
                              const EffectiveHamiltonianReport& report, int n_cycles);

// Steady-state off-resonance response factor nu1^2 / (nu1^2 + delta^2).
double excitation_profile(double amplitude_hz, double offset_hz);

// ---------------------------------------------------------------------------
// Text serialization (one segment per line)
// ---------------------------------------------------------------------------

std::string sequence_to_text(const PulseSequence& seq);
PulseSequence sequence_from_text(const std::string& text);

}  // namespace planeq
