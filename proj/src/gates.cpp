#include "planeq/gates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

namespace {

using Cd = std::complex<double>;

std::vector<int> plane_sites(const SpinSystemModel& model, int plane) {
  std::vector<int> out;
  for (int k = 0; k < model.n(); ++k)
    if (model.sites[k].plane_index == plane) out.push_back(k);
  if (out.empty())
    throw ValidationError("gates: plane " + std::to_string(plane) +
                          " absent from model");
  return out;
}

// Rotation (axis, angle) whose conjugation maps the operator along `from`
// onto the operator along `to`: U I_from U^dag = I_to.
IdealRotation rotation_taking(const Eigen::Vector3d& from, const Eigen::Vector3d& to,
                              const PlaneSelector& target) {
  IdealRotation rot;
  rot.target = target;
  const Eigen::Vector3d a = from.normalized();
  const Eigen::Vector3d b = to.normalized();
  const Eigen::Vector3d cross = a.cross(b);
  const double s = cross.norm();
  const double c = a.dot(b);
  if (s < 1e-14) {
    if (c > 0.0) {
      rot.axis = Eigen::Vector3d::UnitX();
      rot.angle_rad = 0.0;
    } else {
      Eigen::Vector3d perp = a.cross(Eigen::Vector3d::UnitZ());
      if (perp.norm() < 1e-9) perp = a.cross(Eigen::Vector3d::UnitX());
      rot.axis = perp.normalized();
      rot.angle_rad = constants::pi;
    }
    return rot;
  }
  rot.axis = cross / s;
  rot.angle_rad = std::atan2(s, c);
  return rot;
}

GateStep rotation_step(const IdealRotation& rot) {
  GateStep step;
  step.kind = GateStep::Kind::Rotation;
  step.rotation = rot;
  return step;
}

GateStep evolution_step(double duration_s) {
  GateStep step;
  step.kind = GateStep::Kind::Evolution;
  step.duration_s = duration_s;
  return step;
}

const Eigen::Vector3d kHadamardAxis =
    Eigen::Vector3d(1.0, 0.0, 1.0) / std::sqrt(2.0);

// CNOT steps in time order (first applied first). The evolution runs under
// the retained interaction along (axis_a, axis_b); everything else is ideal
// selective rotations.
std::vector<GateStep> cnot_steps(int plane_a, int plane_b,
                                 const RecoupledInteraction& c) {
  if (c.d_ab_hz == 0.0)
    throw ValidationError("cnot_schedule: retained coupling is zero");
  const PlaneSelector sel_a = PlaneSelector::single(plane_a);
  const PlaneSelector sel_b = PlaneSelector::single(plane_b);
  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();

  const IdealRotation wa = rotation_taking(c.axis_a, z, sel_a);
  const IdealRotation wb = rotation_taking(c.axis_b, z, sel_b);
  IdealRotation wa_inv = wa;
  wa_inv.angle_rad = -wa.angle_rad;
  IdealRotation wb_inv = wb;
  wb_inv.angle_rad = -wb.angle_rad;

  IdealRotation hadamard_b;
  hadamard_b.target = sel_b;
  hadamard_b.axis = kHadamardAxis;
  hadamard_b.angle_rad = constants::pi;

  // phase rotations completing CZ from the zz entangler
  const double zsign = c.d_ab_hz > 0.0 ? -1.0 : 1.0;
  IdealRotation rz_a;
  rz_a.target = sel_a;
  rz_a.axis = z;
  rz_a.angle_rad = zsign * constants::pi / 2.0;
  IdealRotation rz_b = rz_a;
  rz_b.target = sel_b;

  const double t_gate = 1.0 / (2.0 * std::abs(c.d_ab_hz));

  std::vector<GateStep> steps;
  steps.push_back(rotation_step(hadamard_b));
  steps.push_back(rotation_step(wa_inv));
  steps.push_back(rotation_step(wb_inv));
  steps.push_back(evolution_step(t_gate));
  steps.push_back(rotation_step(wa));
  steps.push_back(rotation_step(wb));
  steps.push_back(rotation_step(rz_a));
  steps.push_back(rotation_step(rz_b));
  steps.push_back(rotation_step(hadamard_b));
  return steps;
}

Cmatrix swap_matrix() {
  Cmatrix m = Cmatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = 1;
  return m;
}

}  // namespace

Cmatrix cnot_matrix() {
  Cmatrix m = Cmatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

RecoupledInteraction retained_interaction(const EffectiveHamiltonianReport& report,
                                          const SpinSystemModel& model, int plane_a,
                                          int plane_b) {
  const std::vector<int> sa = plane_sites(model, plane_a);
  const std::vector<int> sb = plane_sites(model, plane_b);
  RecoupledInteraction out;
  double best = 0.0;
  for (const auto& t : report.decomposition) {
    if (t.sites.size() != 2) continue;
    const int i = t.sites[0], j = t.sites[1];
    const bool ab = std::count(sa.begin(), sa.end(), i) &&
                    std::count(sb.begin(), sb.end(), j);
    const bool ba = std::count(sa.begin(), sa.end(), j) &&
                    std::count(sb.begin(), sb.end(), i);
    if (!ab && !ba) continue;
    if (std::abs(t.coefficient_hz) > std::abs(best)) {
      best = t.coefficient_hz;
      const int site_a = ab ? i : j;
      const int site_b = ab ? j : i;
      const char axis_a = ab ? t.axes[0] : t.axes[1];
      const char axis_b = ab ? t.axes[1] : t.axes[0];
      out.axis_a = report.frames.at(site_a).axis(axis_a);
      out.axis_b = report.frames.at(site_b).axis(axis_b);
    }
  }
  if (best == 0.0)
    throw ValidationError("retained_interaction: no nonzero plane " +
                          std::to_string(plane_a) + "-" + std::to_string(plane_b) +
                          " term in report");
  out.d_ab_hz = best;
  return out;
}

GateSchedule synthesize_entangler(const RecoupledInteraction& coupling, int plane_a,
                                  int plane_b) {
  if (coupling.d_ab_hz == 0.0)
    throw ValidationError("synthesize_entangler: coupling is zero");
  const double t = 1.0 / (2.0 * std::abs(coupling.d_ab_hz));
  GateSchedule sched;
  sched.name = "entangler(" + std::to_string(plane_a) + "," +
               std::to_string(plane_b) + ")";
  sched.steps.push_back(evolution_step(t));
  sched.planes_involved = {plane_a, plane_b};
  sched.total_evolution_s = t;
  // exp(-+i (pi/4) s_x x s_x) written in the pair's dressed frame
  const double alpha =
      (coupling.d_ab_hz > 0.0 ? 1.0 : -1.0) * constants::pi / 4.0;
  Cmatrix xx = Cmatrix::Zero(4, 4);
  xx(0, 3) = 1;
  xx(1, 2) = 1;
  xx(2, 1) = 1;
  xx(3, 0) = 1;
  sched.ideal_target =
      (std::cos(alpha) * Cmatrix::Identity(4, 4)) - Cd(0, 1) * std::sin(alpha) * xx;
  return sched;
}

GateSchedule cnot_schedule(int plane_a, int plane_b, const SpinSystemModel& model,
                           const RecoupledInteraction& coupling) {
  if (plane_a == plane_b)
    throw ValidationError("cnot_schedule: planes must differ");
  (void)plane_sites(model, plane_a);
  (void)plane_sites(model, plane_b);

  GateSchedule sched;
  sched.name = "CNOT(plane " + std::to_string(plane_a) + " -> plane " +
               std::to_string(plane_b) + ")";
  sched.steps = cnot_steps(plane_a, plane_b, coupling);
  sched.planes_involved = {plane_a, plane_b};
  for (const auto& s : sched.steps)
    if (s.kind == GateStep::Kind::Evolution) sched.total_evolution_s += s.duration_s;

  // ideal target: chain-wise CNOT on every chain present on both planes,
  // identity elsewhere
  const int n = model.n();
  const long dim = 1L << n;
  Cmatrix target = Cmatrix::Identity(dim, dim);
  const std::vector<int> sa = plane_sites(model, plane_a);
  const std::vector<int> sb = plane_sites(model, plane_b);
  for (int ia : sa) {
    for (int ib : sb) {
      if (model.sites[ia].chain_id != model.sites[ib].chain_id) continue;
      const Cmatrix id = Cmatrix::Identity(dim, dim);
      const Cmatrix pz_a = 0.5 * id + spin_operator(Axis::Z, ia, n).mat;
      const Cmatrix pz_a1 = 0.5 * id - spin_operator(Axis::Z, ia, n).mat;
      const Cmatrix x_b = 2.0 * spin_operator(Axis::X, ib, n).mat;
      target = (pz_a + pz_a1 * x_b) * target;
    }
  }
  sched.ideal_target = target;
  return sched;
}

Operator simulate_schedule(const GateSchedule& schedule, const SpinSystemModel& model,
                           const Operator& h_effective) {
  const int n = model.n();
  const long dim = 1L << n;
  if (h_effective.mat.rows() != dim)
    throw ValidationError("simulate_schedule: H dimension mismatch");
  Cmatrix u = Cmatrix::Identity(dim, dim);
  for (const auto& step : schedule.steps) {
    if (step.kind == GateStep::Kind::Rotation) {
      std::vector<int> targets;
      for (int k = 0; k < n; ++k)
        if (step.rotation.target.contains(model.sites[k].plane_index))
          targets.push_back(k);
      const Operator gen =
          collective_operator(step.rotation.axis.normalized(), targets, n);
      Operator scaled{gen.mat * step.rotation.angle_rad, "rot"};
      u = propagator(scaled, 1.0).mat * u;
    } else {
      u = propagator(h_effective, step.duration_s).mat * u;
    }
  }
  return Operator{u, schedule.name};
}

Operator gate_generator(const RecoupledInteraction& coupling,
                        const SpinSystemModel& model, int plane_a, int plane_b) {
  const int n = model.n();
  const long dim = 1L << n;
  Operator h;
  h.mat = Cmatrix::Zero(dim, dim);
  h.label = "H_gate";
  const std::vector<int> sa = plane_sites(model, plane_a);
  const std::vector<int> sb = plane_sites(model, plane_b);
  for (int ia : sa) {
    for (int ib : sb) {
      if (model.sites[ia].chain_id != model.sites[ib].chain_id) continue;
      h.mat += constants::two_pi * coupling.d_ab_hz *
               spin_operator(coupling.axis_a, ia, n).mat *
               spin_operator(coupling.axis_b, ib, n).mat;
    }
  }
  return h;
}

int swap_route_cnot_count(int delta_planes, int reach) {
  const int d = std::abs(delta_planes);
  if (d <= reach) return 1;
  const int hops = (d - reach + reach - 1) / reach;  // ceil((d - reach)/reach)
  return 2 * hops * 3 + 1;
}

std::vector<GateSchedule> swap_route(int plane_a, int plane_b, int n_planes,
                                     double d_ab_hz, int reach) {
  if (reach < 1) throw ValidationError("swap_route: reach must be >= 1");
  if (plane_a == plane_b)
    throw ValidationError("swap_route: self-gate (plane_a == plane_b)");
  if (plane_a < 0 || plane_b < 0 || plane_a >= n_planes || plane_b >= n_planes)
    throw ValidationError("swap_route: plane outside model");
  if (d_ab_hz == 0.0) throw ValidationError("swap_route: coupling is zero");

  RecoupledInteraction generic;
  generic.d_ab_hz = d_ab_hz;
  generic.axis_a = Eigen::Vector3d::UnitX();
  generic.axis_b = Eigen::Vector3d::UnitX();

  auto make_cnot = [&](int p, int q) {
    GateSchedule s;
    s.name = "CNOT(plane " + std::to_string(p) + " -> plane " + std::to_string(q) + ")";
    s.steps = cnot_steps(p, q, generic);
    s.planes_involved = {p, q};
    s.ideal_target = cnot_matrix();
    for (const auto& st : s.steps)
      if (st.kind == GateStep::Kind::Evolution) s.total_evolution_s += st.duration_s;
    return s;
  };
  auto make_swap = [&](int p, int q) {
    GateSchedule s;
    s.name = "SWAP(plane " + std::to_string(p) + " <-> plane " + std::to_string(q) + ")";
    for (auto [c, t] : {std::pair{p, q}, {q, p}, {p, q}}) {
      const auto steps = cnot_steps(c, t, generic);
      s.steps.insert(s.steps.end(), steps.begin(), steps.end());
    }
    s.planes_involved = {p, q};
    s.ideal_target = swap_matrix();
    for (const auto& st : s.steps)
      if (st.kind == GateStep::Kind::Evolution) s.total_evolution_s += st.duration_s;
    return s;
  };

  const int dir = plane_b > plane_a ? 1 : -1;
  std::vector<int> hops;  // positions the logical qubit occupies
  int pos = plane_a;
  while (std::abs(plane_b - pos) > reach) {
    hops.push_back(pos);
    pos += dir * reach;
  }

  std::vector<GateSchedule> route;
  for (size_t k = 0; k < hops.size(); ++k)
    route.push_back(make_swap(hops[k], hops[k] + dir * reach));
  route.push_back(make_cnot(pos, plane_b));
  for (size_t k = hops.size(); k-- > 0;)
    route.push_back(make_swap(hops[k], hops[k] + dir * reach));
  return route;
}

LocalInvariants makhlin_invariants(const Cmatrix& u4) {
  if (u4.rows() != 4 || u4.cols() != 4)
    throw ValidationError("makhlin_invariants: need a 4x4 unitary");
  Cmatrix q = Cmatrix::Zero(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  q(0, 0) = r;
  q(0, 3) = Cd(0, r);
  q(1, 1) = Cd(0, r);
  q(1, 2) = r;
  q(2, 1) = Cd(0, r);
  q(2, 2) = -r;
  q(3, 0) = r;
  q(3, 3) = Cd(0, -r);
  const Cmatrix ub = q.adjoint() * u4 * q;
  const Cmatrix m = ub.transpose() * ub;
  const Cd tr = m.trace();
  const Cd det = u4.determinant();
  LocalInvariants inv;
  inv.g1 = tr * tr / (16.0 * det);
  inv.g2 = ((tr * tr - (m * m).trace()) / (4.0 * det)).real();
  return inv;
}

std::string schedule_to_text(const GateSchedule& schedule) {
  std::ostringstream out;
  out << "# schedule: " << schedule.name << "\n";
  out << "# planes:";
  for (int p : schedule.planes_involved) out << " " << p;
  out << "\n";
  out << "# ideal_target: " << schedule.ideal_target.rows() << "x"
      << schedule.ideal_target.cols() << " unitary\n";
  PulseSequence seq;
  seq.n_repeats = 1;
  for (const auto& step : schedule.steps) {
    PulseSegment seg;
    if (step.kind == GateStep::Kind::Rotation) {
      seg.duration_s = 0.0;
      seg.ideal = step.rotation;
    } else {
      seg.duration_s = step.duration_s;  // free evolution under the recoupled term
    }
    seq.segments.push_back(seg);
  }
  out << sequence_to_text(seq);
  return out.str();
}

}  // namespace planeq
