#include "planeq/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"

namespace planeq {

void LatticeSpec::validate() const {
  if (!(chain_spacing_m > 0.0))
    throw ValidationError("lattice.chain_spacing: must be > 0");
  if (!(chain_separation_m > 0.0))
    throw ValidationError("lattice.chain_separation: must be > 0");
  if (n_planes < 1) throw ValidationError("lattice.n_planes: must be >= 1");
  if (std::abs(field_axis.norm() - 1.0) > 1e-12)
    throw ValidationError("lattice.field_axis: must have unit norm");
  if (pattern == ChainPattern::Explicit && chain_offsets.empty())
    throw ValidationError("lattice.chain_offsets: empty for explicit pattern");
}

std::vector<Eigen::Vector2d> chain_layout(const LatticeSpec& spec) {
  switch (spec.pattern) {
    case ChainPattern::Single:
      return {Eigen::Vector2d::Zero()};
    case ChainPattern::CentralPlusSixHex: {
      std::vector<Eigen::Vector2d> offsets;
      offsets.emplace_back(0.0, 0.0);
      for (int k = 0; k < 6; ++k) {
        const double phi = k * constants::pi / 3.0;
        offsets.emplace_back(spec.chain_separation_m * std::cos(phi),
                             spec.chain_separation_m * std::sin(phi));
      }
      return offsets;
    }
    case ChainPattern::Explicit:
      return spec.chain_offsets;
  }
  throw ValidationError("lattice.pattern: unknown pattern");
}

std::vector<SpinSite> build_lattice(const LatticeSpec& spec) {
  spec.validate();
  const auto offsets = chain_layout(spec);
  const int n_chains = static_cast<int>(offsets.size());

  // orthonormal in-plane basis completing the field axis
  const Eigen::Vector3d f = spec.field_axis;
  Eigen::Vector3d e1 = f.cross(Eigen::Vector3d::UnitZ());
  if (e1.norm() < 1e-8) e1 = f.cross(Eigen::Vector3d::UnitX());
  e1.normalize();
  const Eigen::Vector3d e2 = f.cross(e1).normalized();

  std::vector<SpinSite> sites;
  sites.reserve(static_cast<size_t>(spec.n_planes) * n_chains);
  for (int p = 0; p < spec.n_planes; ++p) {
    for (int c = 0; c < n_chains; ++c) {
      SpinSite s;
      s.id = p * n_chains + c;
      s.chain_id = c;
      s.plane_index = p;
      s.position_m =
          offsets[c].x() * e1 + offsets[c].y() * e2 + p * spec.chain_spacing_m * f;
      sites.push_back(s);
    }
  }
  return sites;
}

PairGeometry pair_geometry(const SpinSite& a, const SpinSite& b,
                           const Eigen::Vector3d& field_axis) {
  const Eigen::Vector3d d = a.position_m - b.position_m;
  const double r = d.norm();
  if (r <= 0.0)
    throw ValidationError("pair_geometry: coincident sites " + std::to_string(a.id) +
                          " and " + std::to_string(b.id));
  const Eigen::Vector3d f = field_axis.normalized();
  const double along = d.dot(f);
  const double perp = d.cross(f).norm();
  PairGeometry g;
  g.r_m = r;
  g.theta_rad = std::atan2(perp, along);  // in [0, pi]
  return g;
}

std::string sites_to_csv(const std::vector<SpinSite>& sites) {
  std::ostringstream out;
  out << "id,chain_id,plane_index,x_m,y_m,z_m\n";
  char buf[160];
  for (const auto& s : sites) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.12e,%.12e,%.12e\n", s.id, s.chain_id,
                  s.plane_index, s.position_m.x(), s.position_m.y(), s.position_m.z());
    out << buf;
  }
  return out.str();
}

}  // namespace planeq
