#pragma once

#include <string>
#include <vector>

#include "planeq/lattice.hpp"

namespace planeq {

struct CouplingEntry {
  int i = 0;  // site indexes into the originating site list, i < j
  int j = 0;
  double d_hz = 0.0;
  double r_m = 0.0;
  double theta_rad = 0.0;
};

struct CouplingTable {
  std::vector<CouplingEntry> entries;  // sorted by descending |d|, ties by (i,j)
  double cutoff_hz = 0.0;
  bool warning_too_few_sites = false;
};

// Secular dipolar coupling between two like spins, in Hz:
//   d = (mu0/4pi) * gamma^2 * hbar * (3 cos^2 theta - 1) / (2 * 2pi * r^3)
// The pair Hamiltonian built from d is 2pi * d * (3 IzIz - I.I); see spinsim.
double dipolar_coupling_hz(double r_m, double theta_rad);

CouplingTable coupling_table(const std::vector<SpinSite>& sites,
                             const Eigen::Vector3d& field_axis, double cutoff_hz);

// CSV with columns i, j, d_hz, r_m, theta_rad.
std::string couplings_to_csv(const CouplingTable& table);

}  // namespace planeq
