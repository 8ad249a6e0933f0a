#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "planeq/couplings.hpp"
#include "planeq/lattice.hpp"
#include "planeq/sequences.hpp"
#include "planeq/spinsim.hpp"

namespace planeq::testing {

// n_planes x n_chains cluster with chains in a row at the standard spacings.
inline std::vector<SpinSite> chain_sites(int n_planes, int n_chains,
                                         double spacing_m = 3.44e-10,
                                         double separation_m = 9.42e-10) {
  LatticeSpec spec;
  spec.chain_spacing_m = spacing_m;
  spec.chain_separation_m = separation_m;
  spec.n_planes = n_planes;
  if (n_chains == 1) {
    spec.pattern = ChainPattern::Single;
  } else {
    spec.pattern = ChainPattern::Explicit;
    for (int c = 0; c < n_chains; ++c)
      spec.chain_offsets.emplace_back(c * separation_m, 0.0);
  }
  return build_lattice(spec);
}

// Two planes x three chains at the corners of an equilateral triangle, so
// every in-plane pair sits at the chain separation.
inline std::vector<SpinSite> triangle_pair_sites(double plane_gap_m,
                                                 double separation_m = 9.42e-10) {
  LatticeSpec spec;
  spec.chain_spacing_m = plane_gap_m;
  spec.chain_separation_m = separation_m;
  spec.n_planes = 2;
  spec.pattern = ChainPattern::Explicit;
  spec.chain_offsets.emplace_back(0.0, 0.0);
  spec.chain_offsets.emplace_back(separation_m, 0.0);
  spec.chain_offsets.emplace_back(separation_m / 2.0,
                                  separation_m * std::sqrt(3.0) / 2.0);
  return build_lattice(spec);
}

inline SpinSystemModel make_model(std::vector<SpinSite> sites, double cutoff_hz = 0.0,
                                  double gradient_T_per_m = 0.0,
                                  int carrier_plane = 0) {
  SpinSystemModel model;
  model.field_axis = Eigen::Vector3d::UnitZ();
  model.couplings = coupling_table(sites, model.field_axis, cutoff_hz);
  model.sites = std::move(sites);
  model.gradient_T_per_m = gradient_T_per_m;
  model.carrier_plane = carrier_plane;
  return model;
}

// Independent oracle for the zeroth-order average Hamiltonian: per-segment
// closed-form integral of e^{+iGx} H e^{-iGx} in the eigenbasis of G
// (phi(w) = (e^{iw dt} - 1)/(iw)), no quadrature involved.
inline Cmatrix oracle_average_hamiltonian(const PulseSequence& seq,
                                          const Operator& h_int,
                                          const SpinSystemModel& model) {
  using Cd = std::complex<double>;
  const long dim = h_int.mat.rows();
  Cmatrix integral = Cmatrix::Zero(dim, dim);
  Cmatrix u_pre = Cmatrix::Identity(dim, dim);
  for (size_t s = 0; s < seq.segments.size(); ++s) {
    const PulseSegment& seg = seq.segments[s];
    if (seg.ideal) {
      std::vector<int> targets;
      for (int k = 0; k < model.n(); ++k)
        if (seg.ideal->target.contains(model.sites[k].plane_index))
          targets.push_back(k);
      const Operator gen =
          collective_operator(seg.ideal->axis.normalized(), targets, model.n());
      Operator scaled{gen.mat * seg.ideal->angle_rad, "rot"};
      u_pre = propagator(scaled, 1.0).mat * u_pre;
    }
    if (seg.duration_s == 0.0) continue;
    const Operator g = rf_hamiltonian(seq, static_cast<int>(s), model);
    Eigen::SelfAdjointEigenSolver<Cmatrix> es(g.mat);
    const Cmatrix k_eig =
        es.eigenvectors().adjoint() * h_int.mat * es.eigenvectors();
    Cmatrix phi(dim, dim);
    for (long a = 0; a < dim; ++a) {
      for (long b = 0; b < dim; ++b) {
        const double w = es.eigenvalues()(a) - es.eigenvalues()(b);
        if (std::abs(w * seg.duration_s) < 1e-9) {
          phi(a, b) = seg.duration_s;
        } else {
          phi(a, b) = (std::exp(Cd(0.0, w * seg.duration_s)) - Cd(1.0, 0.0)) /
                      Cd(0.0, w);
        }
      }
    }
    const Cmatrix seg_int = es.eigenvectors() * k_eig.cwiseProduct(phi).eval() *
                            es.eigenvectors().adjoint();
    integral += u_pre.adjoint() * seg_int * u_pre;
    Operator g_op{g.mat * seg.duration_s, "g"};
    u_pre = propagator(g_op, 1.0).mat * u_pre;
  }
  Cmatrix h_bar = integral / seq.cycle_time_s();
  return 0.5 * (h_bar + h_bar.adjoint().eval());
}

inline double max_abs(const Cmatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace planeq::testing
