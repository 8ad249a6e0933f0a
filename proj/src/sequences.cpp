#include "planeq/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

namespace {

using Cd = std::complex<double>;

constexpr char kAxisNames[3] = {'u', 'v', 'w'};

double plane_offset_hz(const SpinSystemModel& model, int plane) {
  if (plane < 0) return 0.0;  // carrier reference
  for (int k = 0; k < model.n(); ++k) {
    if (model.sites[k].plane_index == plane) return model.offset_hz(k);
  }
  throw ValidationError("sequence: plane " + std::to_string(plane) +
                        " absent from model");
}

void check_targets_exist(const PulseSequence& seq, const SpinSystemModel& model) {
  for (const auto& seg : seq.segments) {
    for (const auto& ch : seg.channels) {
      if (ch.target.all) continue;
      for (int p : ch.target.planes) (void)plane_offset_hz(model, p);
    }
    if (seg.ideal && !seg.ideal->target.all) {
      for (int p : seg.ideal->target.planes) (void)plane_offset_hz(model, p);
    }
  }
}

// Gauss-Legendre nodes/weights on [-1, 1] via the Jacobi matrix.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(order);
  weights.resize(order);
  for (int k = 0; k < order; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = 2.0 * v0 * v0;
  }
}

// Integral of e^{+iGx} K e^{-iGx} dx over [0, duration], adaptive in the
// quadrature order. G is given by its eigendecomposition.
Cmatrix toggled_integral(const Eigen::VectorXd& evals, const Cmatrix& evecs,
                         const Cmatrix& k_full, double duration, double tol_abs,
                         int max_order, double* achieved) {
  const Cmatrix k_eig = evecs.adjoint() * k_full * evecs;
  const long dim = k_eig.rows();

  auto evaluate = [&](int order) {
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    Cmatrix sum = Cmatrix::Zero(dim, dim);
    Cvector phase(dim);
    for (int q = 0; q < order; ++q) {
      const double t = 0.5 * duration * (x[q] + 1.0);
      for (long a = 0; a < dim; ++a) phase(a) = std::exp(Cd(0.0, evals(a) * t));
      sum += (0.5 * duration * w[q]) *
             (phase.asDiagonal() * k_eig * phase.conjugate().asDiagonal());
    }
    return sum;
  };

  int order = 4;
  Cmatrix current = evaluate(order);
  while (true) {
    order *= 2;
    if (order > max_order) break;
    const Cmatrix refined = evaluate(order);
    const double diff = (refined - current).cwiseAbs().maxCoeff();
    current = refined;
    if (diff <= tol_abs) {
      *achieved = diff;
      return evecs * current * evecs.adjoint();
    }
    if (order * 2 > max_order) {
      throw QuadratureError("average_hamiltonian: quadrature did not converge "
                            "(achieved " + std::to_string(diff) + ", wanted " +
                            std::to_string(tol_abs) + ")", diff);
    }
  }
  throw QuadratureError("average_hamiltonian: quadrature order cap too low", 0.0);
}

Operator ideal_rotation_unitary(const IdealRotation& rot, const SpinSystemModel& model) {
  const int n = model.n();
  std::vector<int> targets;
  for (int k = 0; k < n; ++k)
    if (rot.target.contains(model.sites[k].plane_index)) targets.push_back(k);
  const Operator gen = collective_operator(rot.axis.normalized(), targets, n);
  Operator scaled{gen.mat * rot.angle_rad, "rot_gen"};
  return propagator(scaled, 1.0);
}

std::vector<SpinFrame> spin_frames(const PulseSequence& seq,
                                   const SpinSystemModel& model) {
  const int n = model.n();
  std::vector<SpinFrame> frames(n);
  for (int k = 0; k < n; ++k) {
    Eigen::Vector3d u = Eigen::Vector3d::UnitZ();
    bool found = false;
    for (size_t s = 0; s < seq.segments.size() && !found; ++s) {
      if (seq.segments[s].channels.empty()) continue;
      const EffectiveField f =
          segment_effective_field(seq, static_cast<int>(s), model, k);
      if (f.magnitude_hz > 0.0) {
        u = f.axis;
        found = true;
      }
    }
    SpinFrame fr;
    fr.irradiated = found;
    fr.u = u;
    Eigen::Vector3d v = Eigen::Vector3d::UnitZ() - u.z() * u;
    if (v.norm() < 1e-9) v = Eigen::Vector3d::UnitX() - u.x() * u;
    fr.v = v.normalized();
    fr.w = u.cross(fr.v);
    frames[k] = fr;
  }
  return frames;
}

}  // namespace

const Eigen::Vector3d& SpinFrame::axis(char name) const {
  switch (name) {
    case 'u': return u;
    case 'v': return v;
    case 'w': return w;
  }
  throw ValidationError("SpinFrame::axis: unknown axis label");
}

double PulseSequence::cycle_time_s() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration_s;
  return t;
}

void PulseSequence::validate() const {
  if (n_repeats < 0) throw ValidationError("sequence.n_repeats: must be >= 0");
  bool any_rotation = false;
  for (const auto& s : segments) {
    if (s.duration_s < 0.0) throw ValidationError("segment.duration: must be >= 0");
    if (s.duration_s == 0.0 && !s.ideal)
      throw ValidationError("segment.duration: zero duration without ideal rotation");
    for (const auto& ch : s.channels) {
      if (ch.amplitude_hz < 0.0)
        throw ValidationError("channel.amplitude_hz: must be >= 0");
    }
    if (s.ideal) any_rotation = true;
  }
  if (cycle_time_s() <= 0.0 && !any_rotation)
    throw ValidationError("sequence.cycle_time: must be > 0");
}

PulseSequence lee_goldburg(double amplitude_hz, int n_cycles) {
  if (!(amplitude_hz > 0.0))
    throw ValidationError("lee_goldburg: amplitude_hz must be > 0");
  if (n_cycles < 0) throw ValidationError("lee_goldburg: n_cycles must be >= 0");
  const double nu_eff = amplitude_hz * std::sqrt(1.5);
  PulseSegment seg;
  seg.duration_s = 1.0 / nu_eff;
  PulseChannel ch;
  ch.target = PlaneSelector::every_plane();
  ch.anchor_plane = -1;
  ch.offset_hz = amplitude_hz / std::sqrt(2.0);
  ch.amplitude_hz = amplitude_hz;
  ch.phase_rad = 0.0;
  seg.channels.push_back(ch);
  PulseSequence seq;
  seq.segments.push_back(seg);
  seq.n_repeats = n_cycles;
  return seq;
}

PulseSequence mrev8(double tau_s, int n_cycles, bool ideal_pulses,
                    double amplitude_hz) {
  if (!(tau_s > 0.0)) throw ValidationError("mrev8: tau must be > 0");
  if (n_cycles < 0) throw ValidationError("mrev8: n_cycles must be >= 0");

  // pulse axes +x, -y, +y, -x | -x, -y, +y, +x as phases; two mirror-related
  // subcycles, windows in units of tau
  const double px = 0.0, py = constants::pi / 2.0;
  const double mx = constants::pi, my = -constants::pi / 2.0;
  const double phases[8] = {px, my, py, mx, mx, my, py, px};
  const double windows[9] = {1, 1, 2, 1, 2, 1, 2, 1, 1};

  PulseSequence seq;
  seq.n_repeats = n_cycles;

  const double t_p = ideal_pulses ? 0.0 : 1.0 / (4.0 * amplitude_hz);
  if (!ideal_pulses) {
    if (!(amplitude_hz > 0.0))
      throw ValidationError("mrev8: amplitude_hz must be > 0 for finite pulses");
    if (t_p >= tau_s)
      throw ValidationError("mrev8: pulse width exceeds tau window");
  }

  for (int k = 0; k < 9; ++k) {
    // center-to-center windows: shave half a pulse width per adjacent pulse
    double gap = windows[k] * tau_s;
    if (!ideal_pulses) {
      if (k > 0) gap -= 0.5 * t_p;
      if (k < 8) gap -= 0.5 * t_p;
    }
    PulseSegment free_seg;
    free_seg.duration_s = gap;
    seq.segments.push_back(free_seg);

    if (k == 8) break;
    const double phi = phases[k];
    if (ideal_pulses) {
      PulseSegment pulse;
      pulse.duration_s = 0.0;
      IdealRotation rot;
      rot.target = PlaneSelector::every_plane();
      rot.axis = Eigen::Vector3d(std::cos(phi), std::sin(phi), 0.0);
      rot.angle_rad = constants::pi / 2.0;
      pulse.ideal = rot;
      seq.segments.push_back(pulse);
    } else {
      PulseSegment pulse;
      pulse.duration_s = t_p;
      PulseChannel ch;
      ch.target = PlaneSelector::every_plane();
      ch.anchor_plane = -1;
      ch.offset_hz = 0.0;
      ch.amplitude_hz = amplitude_hz;
      ch.phase_rad = phi;
      pulse.channels.push_back(ch);
      seq.segments.push_back(pulse);
    }
  }
  return seq;
}

PulseSequence selective_pulse(int plane, double angle_rad, double phase_rad,
                              double amplitude_hz) {
  PulseSequence seq;
  PulseSegment seg;
  if (amplitude_hz <= 0.0) {
    seg.duration_s = 0.0;
    IdealRotation rot;
    rot.target = PlaneSelector::single(plane);
    rot.axis = Eigen::Vector3d(std::cos(phase_rad), std::sin(phase_rad), 0.0);
    rot.angle_rad = angle_rad;
    seg.ideal = rot;
  } else {
    double angle = angle_rad;
    double phase = phase_rad;
    if (angle < 0.0) {
      angle = -angle;
      phase += constants::pi;
    }
    seg.duration_s = angle / (constants::two_pi * amplitude_hz);
    if (seg.duration_s == 0.0) {
      IdealRotation rot;
      rot.target = PlaneSelector::single(plane);
      rot.axis = Eigen::Vector3d(std::cos(phase_rad), std::sin(phase_rad), 0.0);
      rot.angle_rad = 0.0;
      seg.ideal = rot;
    } else {
      PulseChannel ch;
      ch.target = PlaneSelector::single(plane);
      ch.anchor_plane = plane;
      ch.offset_hz = 0.0;
      ch.amplitude_hz = amplitude_hz;
      ch.phase_rad = phase;
      seg.channels.push_back(ch);
    }
  }
  seq.segments.push_back(seg);
  return seq;
}

PulseSequence double_irradiation(int plane_a, int plane_b, double amplitude_hz,
                                 double duration_s, int tilt_sign) {
  if (plane_a == plane_b)
    throw ValidationError("double_irradiation: planes must differ");
  if (!(amplitude_hz > 0.0))
    throw ValidationError("double_irradiation: amplitude_hz must be > 0");
  if (!(duration_s > 0.0))
    throw ValidationError("double_irradiation: duration must be > 0");
  if (tilt_sign != 1 && tilt_sign != -1)
    throw ValidationError("double_irradiation: tilt_sign must be +1 or -1");

  // offset sqrt(2)*nu1 puts the effective field perpendicular to the
  // magic-angle axis (tilt 35.26 or 144.74 degrees from the field)
  const double offset = tilt_sign * std::sqrt(2.0) * amplitude_hz;
  const double nu_eff = std::sqrt(amplitude_hz * amplitude_hz + offset * offset);

  // both channels share nu_eff here, so every whole period is commensurate;
  // the search below follows the general recipe and records the residual
  const int max_cycles = 10000;
  int k = std::max(1, static_cast<int>(std::llround(duration_s * nu_eff)));
  k = std::min(k, max_cycles);
  double residual = 0.0;  // phase mismatch of channel B over k periods of A
  const double phase_b = constants::two_pi * nu_eff * (k / nu_eff);
  residual = std::abs(phase_b - constants::two_pi * std::llround(phase_b / constants::two_pi));

  PulseSegment seg;
  seg.duration_s = 1.0 / nu_eff;
  for (int plane : {plane_a, plane_b}) {
    PulseChannel ch;
    ch.target = PlaneSelector::single(plane);
    ch.anchor_plane = plane;
    ch.offset_hz = offset;
    ch.amplitude_hz = amplitude_hz;
    ch.phase_rad = 0.0;
    seg.channels.push_back(ch);
  }
  PulseSequence seq;
  seq.segments.push_back(seg);
  seq.n_repeats = k;
  seq.commensuration_residual_rad = residual;
  return seq;
}

Operator rf_hamiltonian(const PulseSequence& seq, int segment_index,
                        const SpinSystemModel& model) {
  if (segment_index < 0 || segment_index >= static_cast<int>(seq.segments.size()))
    throw ValidationError("rf_hamiltonian: segment index out of range");
  const PulseSegment& seg = seq.segments[segment_index];
  const int n = model.n();
  const long dim = 1L << n;
  Operator h;
  h.mat = Cmatrix::Zero(dim, dim);
  h.label = "H_rf[" + std::to_string(segment_index) + "]";
  for (const auto& ch : seg.channels) {
    if (!ch.target.all) {
      for (int p : ch.target.planes) (void)plane_offset_hz(model, p);
    }
    const double anchor_offset = plane_offset_hz(model, ch.anchor_plane);
    for (int k = 0; k < n; ++k) {
      if (!ch.target.contains(model.sites[k].plane_index)) continue;
      const double w1 = constants::two_pi * ch.amplitude_hz;
      if (w1 != 0.0) {
        h.mat += w1 * std::cos(ch.phase_rad) * spin_operator(Axis::X, k, n).mat;
        h.mat += w1 * std::sin(ch.phase_rad) * spin_operator(Axis::Y, k, n).mat;
      }
      const double dz = ch.offset_hz + (model.offset_hz(k) - anchor_offset);
      if (dz != 0.0)
        h.mat += constants::two_pi * dz * spin_operator(Axis::Z, k, n).mat;
    }
  }
  return h;
}

EffectiveField segment_effective_field(const PulseSequence& seq, int segment_index,
                                       const SpinSystemModel& model, int site_index) {
  const PulseSegment& seg = seq.segments.at(segment_index);
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  for (const auto& ch : seg.channels) {
    if (!ch.target.contains(model.sites.at(site_index).plane_index)) continue;
    const double anchor_offset = plane_offset_hz(model, ch.anchor_plane);
    f.x() += ch.amplitude_hz * std::cos(ch.phase_rad);
    f.y() += ch.amplitude_hz * std::sin(ch.phase_rad);
    f.z() += ch.offset_hz + (model.offset_hz(site_index) - anchor_offset);
  }
  EffectiveField out;
  out.magnitude_hz = f.norm();
  out.axis = out.magnitude_hz > 0.0 ? Eigen::Vector3d(f.normalized())
                                    : Eigen::Vector3d::UnitZ();
  return out;
}

EffectiveHamiltonianReport average_hamiltonian(const PulseSequence& seq,
                                               const Operator& h_int,
                                               const SpinSystemModel& model,
                                               const AhtOptions& opts) {
  seq.validate();
  model.validate();
  check_targets_exist(seq, model);
  const double t_c = seq.cycle_time_s();
  if (!(t_c > 0.0))
    throw ValidationError("average_hamiltonian: sequence has zero cycle time");
  if (!is_hermitian(h_int.mat))
    throw ValidationError("average_hamiltonian: H_int is not Hermitian");

  const int n = model.n();
  const long dim = 1L << n;
  if (h_int.mat.rows() != dim)
    throw ValidationError("average_hamiltonian: H_int dimension mismatch");

  const double h_scale = std::max(h_int.mat.cwiseAbs().maxCoeff(), 1e-300);
  const double tol_abs = opts.rel_tolerance * h_scale;

  Cmatrix integral = Cmatrix::Zero(dim, dim);
  Cmatrix u_pre = Cmatrix::Identity(dim, dim);
  double achieved_max = 0.0;

  for (size_t s = 0; s < seq.segments.size(); ++s) {
    const PulseSegment& seg = seq.segments[s];
    if (seg.ideal) {
      u_pre = ideal_rotation_unitary(*seg.ideal, model).mat * u_pre;
      if (seg.duration_s == 0.0) continue;
    }
    if (seg.duration_s == 0.0) continue;

    const Operator g = rf_hamiltonian(seq, static_cast<int>(s), model);
    Eigen::SelfAdjointEigenSolver<Cmatrix> es(g.mat);
    double achieved = 0.0;
    const Cmatrix seg_integral = toggled_integral(
        es.eigenvalues(), es.eigenvectors(), h_int.mat, seg.duration_s,
        tol_abs * seg.duration_s, opts.max_quadrature_order, &achieved);
    achieved_max = std::max(achieved_max, achieved / std::max(seg.duration_s, 1e-300));
    integral += u_pre.adjoint() * seg_integral * u_pre;

    // advance the rf propagator past this segment
    Operator g_op{g.mat * seg.duration_s, "g_seg"};
    u_pre = propagator(g_op, 1.0).mat * u_pre;
  }

  EffectiveHamiltonianReport report;
  report.cycle_time_s = t_c;
  report.achieved_tolerance = achieved_max / constants::two_pi;
  Cmatrix h_bar = integral / t_c;
  h_bar = 0.5 * (h_bar + h_bar.adjoint().eval());
  report.h_bar = Operator{h_bar, "H_bar(" + h_int.label + ")"};

  // --- product-operator decomposition in per-spin effective-field frames ---
  const std::vector<SpinFrame> frames = spin_frames(seq, model);
  report.frames = frames;
  report.effective_fields.resize(n);
  for (int k = 0; k < n; ++k) {
    EffectiveField f;
    f.axis = frames[k].u;
    f.magnitude_hz = 0.0;
    if (frames[k].irradiated) {
      for (size_t s = 0; s < seq.segments.size(); ++s) {
        if (seq.segments[s].channels.empty()) continue;
        const EffectiveField sf =
            segment_effective_field(seq, static_cast<int>(s), model, k);
        if (sf.magnitude_hz > 0.0) {
          f = sf;
          break;
        }
      }
    }
    report.effective_fields[k] = f;
  }

  std::vector<std::vector<Cmatrix>> axis_ops(n);
  for (int k = 0; k < n; ++k) {
    axis_ops[k].resize(3);
    axis_ops[k][0] = spin_operator(frames[k].u, k, n).mat;
    axis_ops[k][1] = spin_operator(frames[k].v, k, n).mat;
    axis_ops[k][2] = spin_operator(frames[k].w, k, n).mat;
  }

  const double single_norm2 = static_cast<double>(dim) / 4.0;
  const double pair_norm2 = static_cast<double>(dim) / 16.0;

  Cmatrix reconstructed = Cmatrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < 3; ++a) {
      const double c =
          (axis_ops[k][a].adjoint() * h_bar).trace().real() / single_norm2;
      ProductTerm term;
      term.sites = {k};
      term.axes = {kAxisNames[a]};
      term.coefficient_hz = c / constants::two_pi;
      report.decomposition.push_back(term);
      reconstructed += c * axis_ops[k][a];
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const Cmatrix p = axis_ops[i][a] * axis_ops[j][b];
          const double c = (p.adjoint() * h_bar).trace().real() / pair_norm2;
          ProductTerm term;
          term.sites = {i, j};
          term.axes = {kAxisNames[a], kAxisNames[b]};
          term.coefficient_hz = c / constants::two_pi;
          report.decomposition.push_back(term);
          reconstructed += c * p;
        }
      }
    }
  }
  const Cd trace_part = h_bar.trace() / static_cast<double>(dim);
  reconstructed += trace_part * Cmatrix::Identity(dim, dim);
  report.residual_norm_hz =
      (h_bar - reconstructed).cwiseAbs().maxCoeff() / constants::two_pi;

  // --- per-pair suppression bookkeeping (bare vs averaged blocks) ---
  auto block_norms = [&](const Cmatrix& h, int i, int j, double* total,
                         double* transfer) {
    double t2 = 0.0, tr2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const Cmatrix p = axis_ops[i][a] * axis_ops[j][b];
        const double c =
            (p.adjoint() * h).trace().real() / pair_norm2 / constants::two_pi;
        t2 += c * c;
        const bool flips_unirradiated = (!frames[i].irradiated && a != 0) ||
                                        (!frames[j].irradiated && b != 0);
        const bool any_unirradiated = !frames[i].irradiated || !frames[j].irradiated;
        if (flips_unirradiated || !any_unirradiated) tr2 += c * c;
      }
    }
    *total = std::sqrt(t2);
    *transfer = std::sqrt(tr2);
  };

  for (const auto& e : model.couplings.entries) {
    SuppressionEntry entry;
    entry.i = e.i;
    entry.j = e.j;
    entry.label = "pair " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                  " (plane " + std::to_string(model.sites[e.i].plane_index) + "-" +
                  std::to_string(model.sites[e.j].plane_index) + ")";
    double dummy_transfer = 0.0;
    block_norms(h_int.mat, e.i, e.j, &entry.before_hz, &dummy_transfer);
    block_norms(h_bar, e.i, e.j, &entry.after_hz, &entry.after_transfer_hz);
    report.suppression.push_back(entry);
  }

  return report;
}

Operator stroboscopic_propagator(const PulseSequence& seq,
                                 const SpinSystemModel& model,
                                 const Operator& h_int) {
  seq.validate();
  model.validate();
  check_targets_exist(seq, model);
  const int n = model.n();
  const long dim = 1L << n;
  if (h_int.mat.rows() != dim)
    throw ValidationError("stroboscopic_propagator: H_int dimension mismatch");

  Cmatrix cycle = Cmatrix::Identity(dim, dim);
  for (size_t s = 0; s < seq.segments.size(); ++s) {
    const PulseSegment& seg = seq.segments[s];
    if (seg.ideal) cycle = ideal_rotation_unitary(*seg.ideal, model).mat * cycle;
    if (seg.duration_s == 0.0) continue;
    const Operator g = rf_hamiltonian(seq, static_cast<int>(s), model);
    Operator h_tot{h_int.mat + g.mat, "H_seg"};
    cycle = propagator(h_tot, seg.duration_s).mat * cycle;
  }

  Operator u;
  u.label = "U_strob";
  u.mat = Cmatrix::Identity(dim, dim);
  for (int r = 0; r < seq.n_repeats; ++r) u.mat = cycle * u.mat;
  return u;
}

Operator effective_propagator(const PulseSequence& seq, const SpinSystemModel& model,
                              const EffectiveHamiltonianReport& report, int n_cycles) {
  const int n = model.n();
  const long dim = 1L << n;
  Cmatrix u_rf = Cmatrix::Identity(dim, dim);
  for (size_t s = 0; s < seq.segments.size(); ++s) {
    const PulseSegment& seg = seq.segments[s];
    if (seg.ideal) u_rf = ideal_rotation_unitary(*seg.ideal, model).mat * u_rf;
    if (seg.duration_s == 0.0) continue;
    const Operator g = rf_hamiltonian(seq, static_cast<int>(s), model);
    u_rf = propagator(g, seg.duration_s).mat * u_rf;
  }
  const Cmatrix cycle =
      u_rf * propagator(report.h_bar, report.cycle_time_s).mat;
  Operator u;
  u.label = "U_eff";
  u.mat = Cmatrix::Identity(dim, dim);
  for (int r = 0; r < n_cycles; ++r) u.mat = cycle * u.mat;
  return u;
}

double excitation_profile(double amplitude_hz, double offset_hz) {
  const double a2 = amplitude_hz * amplitude_hz;
  return a2 / (a2 + offset_hz * offset_hz);
}

double EffectiveHamiltonianReport::pair_coefficient_hz(
    const std::vector<int>& a, const std::vector<int>& b) const {
  double best = 0.0;
  for (const auto& t : decomposition) {
    if (t.sites.size() != 2) continue;
    const bool match =
        (std::count(a.begin(), a.end(), t.sites[0]) &&
         std::count(b.begin(), b.end(), t.sites[1])) ||
        (std::count(a.begin(), a.end(), t.sites[1]) &&
         std::count(b.begin(), b.end(), t.sites[0]));
    if (match) best = std::max(best, std::abs(t.coefficient_hz));
  }
  return best;
}

std::string EffectiveHamiltonianReport::to_csv() const {
  std::ostringstream out;
  out << "term_label,coefficient_hz\n";
  char buf[160];
  for (const auto& t : decomposition) {
    std::string label;
    for (size_t k = 0; k < t.sites.size(); ++k) {
      if (k) label += "*";
      label += "s" + std::to_string(t.sites[k]) + ":" + t.axes[k];
    }
    std::snprintf(buf, sizeof(buf), "%s,%.10e\n", label.c_str(), t.coefficient_hz);
    out << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Text serialization
// ---------------------------------------------------------------------------

namespace {

std::string selector_to_text(const PlaneSelector& sel) {
  if (sel.all) return "all";
  std::string out = "planes:";
  bool first = true;
  for (int p : sel.planes) {
    if (!first) out += ";";
    out += std::to_string(p);
    first = false;
  }
  return out;
}

PlaneSelector selector_from_text(const std::string& text) {
  if (text == "all") return PlaneSelector::every_plane();
  const std::string prefix = "planes:";
  if (text.rfind(prefix, 0) != 0)
    throw ValidationError("sequence text: bad target '" + text + "'");
  PlaneSelector sel;
  std::stringstream ss(text.substr(prefix.size()));
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (!tok.empty()) sel.planes.insert(std::stoi(tok));
  }
  if (sel.planes.empty())
    throw ValidationError("sequence text: empty plane list in '" + text + "'");
  return sel;
}

std::map<std::string, std::string> parse_kv(const std::string& body,
                                            const std::string& context) {
  std::map<std::string, std::string> kv;
  int depth = 0;
  std::string current;
  std::vector<std::string> parts;
  for (char c : body) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  for (auto& part : parts) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw ValidationError("sequence text: bad field '" + part + "' in " + context);
    std::string key = part.substr(0, eq);
    std::string val = part.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    };
    strip(key);
    strip(val);
    kv[key] = val;
  }
  return kv;
}

}  // namespace

std::string sequence_to_text(const PulseSequence& seq) {
  std::ostringstream out;
  out << "# pulse sequence, one segment per line\n";
  out << "repeats = " << seq.n_repeats << "\n";
  char buf[256];
  for (const auto& seg : seq.segments) {
    std::snprintf(buf, sizeof(buf), "%.16e", seg.duration_s);
    out << buf;
    for (const auto& ch : seg.channels) {
      std::snprintf(buf, sizeof(buf),
                    " | channel(target=%s, anchor=%d, offset_hz=%.16e, "
                    "amp_hz=%.16e, phase_rad=%.16e)",
                    selector_to_text(ch.target).c_str(), ch.anchor_plane,
                    ch.offset_hz, ch.amplitude_hz, ch.phase_rad);
      out << buf;
    }
    if (seg.ideal) {
      std::snprintf(buf, sizeof(buf),
                    " | rotation(target=%s, axis=(%.16e;%.16e;%.16e), "
                    "angle_rad=%.16e)",
                    selector_to_text(seg.ideal->target).c_str(), seg.ideal->axis.x(),
                    seg.ideal->axis.y(), seg.ideal->axis.z(), seg.ideal->angle_rad);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

PulseSequence sequence_from_text(const std::string& text) {
  PulseSequence seq;
  seq.n_repeats = 1;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find("repeats") != std::string::npos &&
        line.find('|') == std::string::npos) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ValidationError("sequence text: bad repeats line");
      seq.n_repeats = std::stoi(line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> parts;
    std::string cur;
    for (char c : line) {
      if (c == '|') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    PulseSegment seg;
    seg.duration_s = std::stod(parts[0]);
    for (size_t k = 1; k < parts.size(); ++k) {
      std::string tok = parts[k];
      const auto open = tok.find('(');
      const auto close = tok.rfind(')');
      if (open == std::string::npos || close == std::string::npos)
        throw ValidationError("sequence text: bad segment item '" + tok + "'");
      std::string kind = tok.substr(0, open);
      auto strip = [](std::string& s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
          s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
          s.pop_back();
      };
      strip(kind);
      const auto kv = parse_kv(tok.substr(open + 1, close - open - 1), kind);
      if (kind == "channel") {
        PulseChannel ch;
        ch.target = selector_from_text(kv.at("target"));
        ch.anchor_plane = std::stoi(kv.at("anchor"));
        ch.offset_hz = std::stod(kv.at("offset_hz"));
        ch.amplitude_hz = std::stod(kv.at("amp_hz"));
        ch.phase_rad = std::stod(kv.at("phase_rad"));
        seg.channels.push_back(ch);
      } else if (kind == "rotation") {
        IdealRotation rot;
        rot.target = selector_from_text(kv.at("target"));
        std::string ax = kv.at("axis");
        if (ax.size() < 2 || ax.front() != '(' || ax.back() != ')')
          throw ValidationError("sequence text: bad axis '" + ax + "'");
        ax = ax.substr(1, ax.size() - 2);
        std::stringstream as(ax);
        std::string comp;
        std::vector<double> comps;
        while (std::getline(as, comp, ';')) comps.push_back(std::stod(comp));
        if (comps.size() != 3)
          throw ValidationError("sequence text: axis needs 3 components");
        rot.axis = Eigen::Vector3d(comps[0], comps[1], comps[2]);
        rot.angle_rad = std::stod(kv.at("angle_rad"));
        seg.ideal = rot;
      } else {
        throw ValidationError("sequence text: unknown item '" + kind + "'");
      }
    }
    seq.segments.push_back(seg);
  }
  if (seq.segments.empty())
    throw ValidationError("sequence text: no segments found");
  return seq;
}

}  // namespace planeq
