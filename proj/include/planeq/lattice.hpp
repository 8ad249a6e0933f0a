#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace planeq {

enum class ChainPattern { Single, CentralPlusSixHex, Explicit };

// Geometry of a hydroxyapatite-style hydrogen chain cluster: parallel 1-D
// chains along the field axis, planes of spins perpendicular to it.
struct LatticeSpec {
  double chain_spacing_m = 3.44e-10;     // spacing between planes along a chain
  double chain_separation_m = 9.42e-10;  // nearest-neighbor chain distance
  int n_planes = 1;
  ChainPattern pattern = ChainPattern::Single;
  // in-plane chain offsets [m], used when pattern == Explicit
  std::vector<Eigen::Vector2d> chain_offsets;
  Eigen::Vector3d field_axis = Eigen::Vector3d::UnitZ();

  void validate() const;  // throws ValidationError naming the offending field
};

struct SpinSite {
  int id = 0;
  int chain_id = 0;
  int plane_index = 0;  // 0-based along the field axis
  Eigen::Vector3d position_m = Eigen::Vector3d::Zero();
};

struct PairGeometry {
  double r_m = 0.0;
  double theta_rad = 0.0;  // angle between internuclear vector and field axis
};

// Plane-major, then chain: id = plane_index * n_chains + chain_index.
std::vector<SpinSite> build_lattice(const LatticeSpec& spec);

// In-plane chain offsets implied by a spec (1 for Single, 7 for hex, ...).
std::vector<Eigen::Vector2d> chain_layout(const LatticeSpec& spec);

PairGeometry pair_geometry(const SpinSite& a, const SpinSite& b,
                           const Eigen::Vector3d& field_axis);

// CSV with columns id, chain_id, plane_index, x_m, y_m, z_m.
std::string sites_to_csv(const std::vector<SpinSite>& sites);

}  // namespace planeq
