#include "planeq/spinsim.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

namespace {

using Cd = std::complex<double>;

Eigen::Matrix2cd half_spin_matrix(Axis axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case Axis::X:
      m << Cd(0, 0), Cd(0.5, 0), Cd(0.5, 0), Cd(0, 0);
      break;
    case Axis::Y:
      m << Cd(0, 0), Cd(0, -0.5), Cd(0, 0.5), Cd(0, 0);
      break;
    case Axis::Z:
      m << Cd(0.5, 0), Cd(0, 0), Cd(0, 0), Cd(-0.5, 0);
      break;
    case Axis::Plus:
      m << Cd(0, 0), Cd(1, 0), Cd(0, 0), Cd(0, 0);
      break;
    case Axis::Minus:
      m << Cd(0, 0), Cd(0, 0), Cd(1, 0), Cd(0, 0);
      break;
  }
  return m;
}

// Embed a 2x2 single-spin matrix at position k of n spins (site 0 is the
// leftmost Kronecker factor).
Cmatrix embed(const Eigen::Matrix2cd& s, int k, int n) {
  const long dim = 1L << n;
  Cmatrix out = Cmatrix::Zero(dim, dim);
  const long left = 1L << k;          // dimension of factors before k
  const long right = 1L << (n - k - 1);  // dimension after k
  for (long a = 0; a < left; ++a) {
    for (int sa = 0; sa < 2; ++sa) {
      for (int sb = 0; sb < 2; ++sb) {
        const Cd v = s(sa, sb);
        if (v == Cd(0, 0)) continue;
        for (long b = 0; b < right; ++b) {
          const long row = (a * 2 + sa) * right + b;
          const long col = (a * 2 + sb) * right + b;
          out(row, col) = v;
        }
      }
    }
  }
  return out;
}

void check_site_index(int site_index, int n) {
  if (n < 1 || n > SpinSystemModel::max_spins)
    throw ValidationError("spin_operator: n out of range (1.." +
                          std::to_string(SpinSystemModel::max_spins) + ")");
  if (site_index < 0 || site_index >= n)
    throw ValidationError("spin_operator: site index out of range");
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    case Axis::Plus: return "+";
    case Axis::Minus: return "-";
  }
  return "?";
}

}  // namespace

double SpinSystemModel::offset_hz(int site_index) const {
  const Eigen::Vector3d f = field_axis.normalized();
  const double z = sites.at(site_index).position_m.dot(f);
  double z_carrier = 0.0;
  bool found = false;
  for (const auto& s : sites) {
    if (s.plane_index == carrier_plane) {
      z_carrier = s.position_m.dot(f);
      found = true;
      break;
    }
  }
  if (!found)
    throw ValidationError("model.carrier_plane: no site on plane " +
                          std::to_string(carrier_plane));
  return constants::gamma_H_hz_per_T * gradient_T_per_m * (z - z_carrier);
}

void SpinSystemModel::validate() const {
  if (sites.empty()) throw ValidationError("model.sites: empty");
  if (n() > max_spins)
    throw ValidationError("model.sites: spin count " + std::to_string(n()) +
                          " exceeds cap " + std::to_string(max_spins));
  for (const auto& e : couplings.entries) {
    if (e.i < 0 || e.j < 0 || e.i >= n() || e.j >= n() || e.i >= e.j)
      throw ValidationError("model.couplings: entry references invalid site index");
  }
  if (!std::isfinite(gradient_T_per_m))
    throw ValidationError("model.gradient: not finite");
  (void)offset_hz(0);  // carrier plane must exist
}

Operator spin_operator(Axis axis, int site_index, int n) {
  check_site_index(site_index, n);
  Operator op;
  op.mat = embed(half_spin_matrix(axis), site_index, n);
  op.label = "I" + std::string(axis_name(axis)) + "[" + std::to_string(site_index) + "]";
  return op;
}

Operator spin_operator(const Eigen::Vector3d& axis, int site_index, int n) {
  check_site_index(site_index, n);
  const Eigen::Vector3d a = axis.normalized();
  Eigen::Matrix2cd s = a.x() * half_spin_matrix(Axis::X) +
                       a.y() * half_spin_matrix(Axis::Y) +
                       a.z() * half_spin_matrix(Axis::Z);
  Operator op;
  op.mat = embed(s, site_index, n);
  op.label = "In[" + std::to_string(site_index) + "]";
  return op;
}

Operator collective_operator(const Eigen::Vector3d& axis, const std::vector<int>& sites,
                             int n) {
  const long dim = 1L << n;
  Operator op;
  op.mat = Cmatrix::Zero(dim, dim);
  for (int k : sites) op.mat += spin_operator(axis, k, n).mat;
  op.label = "In[collective]";
  return op;
}

Operator zeeman_hamiltonian(const SpinSystemModel& model) {
  model.validate();
  const int n = model.n();
  const long dim = 1L << n;
  Operator h;
  h.mat = Cmatrix::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const double w = constants::two_pi * model.offset_hz(k);
    if (w != 0.0) h.mat += w * spin_operator(Axis::Z, k, n).mat;
  }
  h.label = "H_zeeman";
  return h;
}

Operator dipolar_hamiltonian_filtered(
    const SpinSystemModel& model, DipolarForm form,
    const std::function<bool(const CouplingEntry&)>& keep) {
  model.validate();
  const int n = model.n();
  const long dim = 1L << n;
  Operator h;
  h.mat = Cmatrix::Zero(dim, dim);
  for (const auto& e : model.couplings.entries) {
    if (keep && !keep(e)) continue;
    const double w = constants::two_pi * e.d_hz;
    const Cmatrix zz =
        spin_operator(Axis::Z, e.i, n).mat * spin_operator(Axis::Z, e.j, n).mat;
    if (form == DipolarForm::ZzTruncated) {
      h.mat += w * 2.0 * zz;
    } else {
      const Cmatrix xx =
          spin_operator(Axis::X, e.i, n).mat * spin_operator(Axis::X, e.j, n).mat;
      const Cmatrix yy =
          spin_operator(Axis::Y, e.i, n).mat * spin_operator(Axis::Y, e.j, n).mat;
      h.mat += w * (2.0 * zz - xx - yy);
    }
  }
  h.label = form == DipolarForm::ZzTruncated ? "H_dipolar_zz" : "H_dipolar_secular";
  return h;
}

Operator dipolar_hamiltonian(const SpinSystemModel& model, DipolarForm form) {
  return dipolar_hamiltonian_filtered(model, form, nullptr);
}

bool is_hermitian(const Cmatrix& m, double rel_tol) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double unitarity_defect(const Cmatrix& u) {
  const Cmatrix id = Cmatrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

Operator propagator(const Operator& hamiltonian, double t_s) {
  if (!std::isfinite(t_s)) throw ValidationError("propagator: t not finite");
  if (!is_hermitian(hamiltonian.mat))
    throw ValidationError("propagator: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Cmatrix> es(hamiltonian.mat);
  const Eigen::VectorXd& evals = es.eigenvalues();
  const Cmatrix& v = es.eigenvectors();
  Cvector phases(evals.size());
  for (int k = 0; k < evals.size(); ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -evals(k) * t_s));
  Operator u;
  u.mat = v * phases.asDiagonal() * v.adjoint();
  u.label = "U(" + hamiltonian.label + ")";
  return u;
}

Operator trotter_propagator(const std::vector<Operator>& hamiltonians, double t_s,
                            int n_steps, bool symmetrized) {
  if (n_steps < 1) throw ValidationError("trotter_propagator: n_steps must be >= 1");
  if (hamiltonians.empty()) {
    std::cerr << "trotter_propagator: empty Hamiltonian list, returning identity\n";
    Operator id;
    id.mat = Cmatrix::Identity(1, 1);
    id.label = "identity";
    return id;
  }
  const long dim = hamiltonians.front().mat.rows();
  const double dt = t_s / n_steps;

  Cmatrix step = Cmatrix::Identity(dim, dim);
  if (symmetrized) {
    const size_t m = hamiltonians.size();
    for (size_t k = 0; k < m; ++k) {
      const double frac = (k + 1 == m) ? 1.0 : 0.5;
      step = propagator(hamiltonians[k], frac * dt).mat * step;
    }
    for (size_t k = m - 1; k-- > 0;) {
      step = propagator(hamiltonians[k], 0.5 * dt).mat * step;
    }
  } else {
    for (const auto& h : hamiltonians) step = propagator(h, dt).mat * step;
  }

  Operator u;
  u.mat = Cmatrix::Identity(dim, dim);
  for (int s = 0; s < n_steps; ++s) u.mat = step * u.mat;
  u.label = symmetrized ? "U_trotter2" : "U_trotter1";
  return u;
}

double fidelity(const Operator& u, const Operator& v) {
  if (u.mat.rows() != v.mat.rows() || u.mat.cols() != v.mat.cols())
    throw ValidationError("fidelity: dimension mismatch");
  const std::complex<double> tr = (u.mat.adjoint() * v.mat).trace();
  return std::abs(tr) / static_cast<double>(u.mat.rows());
}

double expectation(const Cvector& state, const Operator& a) {
  if (state.size() != a.mat.rows())
    throw ValidationError("expectation: dimension mismatch");
  const std::complex<double> val = state.adjoint() * a.mat * state;
  return val.real();
}

double expectation_density(const Cmatrix& rho, const Operator& a) {
  if (rho.rows() != a.mat.rows())
    throw ValidationError("expectation: dimension mismatch");
  return (rho * a.mat).trace().real();
}

std::string operator_to_csv(const Operator& op) {
  std::ostringstream out;
  out << "row,col,re,im\n";
  char buf[120];
  for (long r = 0; r < op.mat.rows(); ++r) {
    for (long c = 0; c < op.mat.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%ld,%ld,%.12e,%.12e\n", r, c,
                    op.mat(r, c).real(), op.mat(r, c).imag());
      out << buf;
    }
  }
  return out.str();
}

}  // namespace planeq
