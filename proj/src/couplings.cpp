#include "planeq/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

double dipolar_coupling_hz(double r_m, double theta_rad) {
  if (!(r_m > 0.0)) throw ValidationError("dipolar_coupling_hz: r must be > 0");
  const double c = std::cos(theta_rad);
  return constants::dipolar_prefactor_hz_m3 * (3.0 * c * c - 1.0) / (r_m * r_m * r_m);
}

CouplingTable coupling_table(const std::vector<SpinSite>& sites,
                             const Eigen::Vector3d& field_axis, double cutoff_hz) {
  if (cutoff_hz < 0.0) throw ValidationError("coupling_table: cutoff must be >= 0");
  CouplingTable table;
  table.cutoff_hz = cutoff_hz;
  if (sites.size() < 2) {
    table.warning_too_few_sites = true;
    return table;
  }
  const int n = static_cast<int>(sites.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const PairGeometry g = pair_geometry(sites[i], sites[j], field_axis);
      const double d = dipolar_coupling_hz(g.r_m, g.theta_rad);
      if (std::abs(d) >= cutoff_hz) {
        table.entries.push_back({i, j, d, g.r_m, g.theta_rad});
      }
    }
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const CouplingEntry& a, const CouplingEntry& b) {
              const double ma = std::abs(a.d_hz), mb = std::abs(b.d_hz);
              if (ma != mb) return ma > mb;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });
  return table;
}

std::string couplings_to_csv(const CouplingTable& table) {
  std::ostringstream out;
  out << "i,j,d_hz,r_m,theta_rad\n";
  char buf[160];
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.10e,%.10e,%.10e\n", e.i, e.j, e.d_hz,
                  e.r_m, e.theta_rad);
    out << buf;
  }
  return out.str();
}

}  // namespace planeq
