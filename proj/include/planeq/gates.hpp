#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planeq/sequences.hpp"
#include "planeq/spinsim.hpp"

namespace planeq {

// One step of a gate schedule: an instantaneous collective rotation on a
// plane, or evolution under the recoupled (dressed-frame) interaction.
struct GateStep {
  enum class Kind { Rotation, Evolution };
  Kind kind = Kind::Rotation;
  IdealRotation rotation;   // valid when kind == Rotation
  double duration_s = 0.0;  // valid when kind == Evolution
};

struct GateSchedule {
  std::vector<GateStep> steps;
  Cmatrix ideal_target;          // unitary on the participating spins
  std::set<int> planes_involved;
  double total_evolution_s = 0.0;
  std::string name;
};

// Axes and strength of the retained two-spin interaction, as read off a
// recoupling report.
struct RecoupledInteraction {
  double d_ab_hz = 0.0;              // retained product coefficient
  Eigen::Vector3d axis_a = Eigen::Vector3d::UnitX();
  Eigen::Vector3d axis_b = Eigen::Vector3d::UnitX();
};

// Extract the dominant retained A-B product term from a recoupling report.
RecoupledInteraction retained_interaction(const EffectiveHamiltonianReport& report,
                                          const SpinSystemModel& model, int plane_a,
                                          int plane_b);

// Evolution under H = 2pi D I_u I_u for t = 1/(2|D|): exp(-+i (pi/4) s_u x s_u),
// locally equivalent to CNOT.
GateSchedule synthesize_entangler(const RecoupledInteraction& coupling, int plane_a,
                                  int plane_b);

// Entangler dressed with ideal selective rotations into CNOT(plane_a -> plane_b).
GateSchedule cnot_schedule(int plane_a, int plane_b, const SpinSystemModel& model,
                           const RecoupledInteraction& coupling);

// Simulate a schedule on `model`: evolution steps run under h_effective
// (the dressed-frame interaction), rotations are exact unitaries.
Operator simulate_schedule(const GateSchedule& schedule, const SpinSystemModel& model,
                           const Operator& h_effective);

// The dressed two-spin gate generator implied by a recoupled interaction:
// sum over same-chain (a,b) pairs of 2pi D I_uA I_uB.
Operator gate_generator(const RecoupledInteraction& coupling,
                        const SpinSystemModel& model, int plane_a, int plane_b);

// SWAP chain moving plane_a's qubit to within `reach` of plane_b, one CNOT,
// then un-swap. Gate count 2*ceil((|dp|-reach)/reach)*3 + 1. Reach defaults
// to 2, the next-nearest-plane coupling strategy.
std::vector<GateSchedule> swap_route(int plane_a, int plane_b, int n_planes,
                                     double d_ab_hz, int reach = 2);
int swap_route_cnot_count(int delta_planes, int reach);

// Makhlin-type local invariants (g1 complex, g2 real) of a two-qubit unitary.
struct LocalInvariants {
  std::complex<double> g1;
  double g2 = 0.0;
};
LocalInvariants makhlin_invariants(const Cmatrix& u4);

Cmatrix cnot_matrix();  // CNOT(control=spin 0 -> target=spin 1)

// Schedule text export: sequences text format plus a header naming the
// ideal target and planes.
std::string schedule_to_text(const GateSchedule& schedule);

}  // namespace planeq
