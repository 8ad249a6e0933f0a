#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "planeq/couplings.hpp"
#include "planeq/lattice.hpp"

namespace planeq {

using Cmatrix = Eigen::MatrixXcd;
using Cvector = Eigen::VectorXcd;

// Dense operator on the 2^n product space, with a human-readable label.
struct Operator {
  Cmatrix mat;
  std::string label;

  int dim() const { return static_cast<int>(mat.rows()); }
};

enum class Axis { X, Y, Z, Plus, Minus };

enum class DipolarForm {
  FullSecular,  // 2pi d (3 IzIz - I.I), like-spin secular form
  ZzTruncated   // 2pi d 2 IzIz, the strong-offset ("heteronuclear") form
};

// A cluster of <= 14 spins in the frame rotating at the carrier plane's
// resonance; the gradient enters as per-plane frequency offsets.
struct SpinSystemModel {
  std::vector<SpinSite> sites;
  CouplingTable couplings;  // entries index into `sites`
  double gradient_T_per_m = 0.0;
  int carrier_plane = 0;
  Eigen::Vector3d field_axis = Eigen::Vector3d::UnitZ();

  int n() const { return static_cast<int>(sites.size()); }
  // resonance offset of site k relative to the carrier plane, in Hz
  double offset_hz(int site_index) const;
  void validate() const;

  static constexpr int max_spins = 14;
};

// Single-spin angular momentum component embedded at `site_index` of n spins.
// Eigenvalues of x/y/z are +-1/2; Plus/Minus are Ix +- i Iy.
Operator spin_operator(Axis axis, int site_index, int n);

// Component along an arbitrary unit vector.
Operator spin_operator(const Eigen::Vector3d& axis, int site_index, int n);

// Sum over a set of sites (collective operator).
Operator collective_operator(const Eigen::Vector3d& axis, const std::vector<int>& sites,
                             int n);

// H_Z = sum_i 2pi * offset_hz(i) * Iz_i  [rad/s]
Operator zeeman_hamiltonian(const SpinSystemModel& model);

// H_D = sum_{i<j} 2pi d_ij (3 IzIz - I.I)  or  sum 2pi d_ij 2 IzIz  [rad/s]
Operator dipolar_hamiltonian(const SpinSystemModel& model, DipolarForm form);

// Same, restricted to entries accepted by `keep`.
Operator dipolar_hamiltonian_filtered(
    const SpinSystemModel& model, DipolarForm form,
    const std::function<bool(const CouplingEntry&)>& keep);

// U = exp(-i H t) via Hermitian eigendecomposition.
Operator propagator(const Operator& hamiltonian, double t_s);

// Product-formula approximation to exp(-i (sum H_k) t).
Operator trotter_propagator(const std::vector<Operator>& hamiltonians, double t_s,
                            int n_steps, bool symmetrized);

// F = |Tr(U^dag V)| / 2^n, global-phase invariant.
double fidelity(const Operator& u, const Operator& v);

double expectation(const Cvector& state, const Operator& a);
double expectation_density(const Cmatrix& rho, const Operator& a);

bool is_hermitian(const Cmatrix& m, double rel_tol = 1e-12);
double unitarity_defect(const Cmatrix& u);  // max |U^dag U - 1|

// CSV with columns row, col, re, im (dense, row-major).
std::string operator_to_csv(const Operator& op);

}  // namespace planeq
