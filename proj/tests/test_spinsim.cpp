#include "doctest.h"

#include <cmath>
#include <random>

#include "planeq/constants.hpp"
#include "planeq/errors.hpp"
#include "planeq/spinsim.hpp"
#include "test_helpers.hpp"

using namespace planeq;
using namespace planeq::testing;
using Cd = std::complex<double>;

TEST_CASE("single-spin operators") {
  const Operator iz = spin_operator(Axis::Z, 0, 1);
  CHECK(iz.mat(0, 0) == Cd(0.5, 0));
  CHECK(iz.mat(1, 1) == Cd(-0.5, 0));

  const Operator ix = spin_operator(Axis::X, 0, 1);
  const Cmatrix sq = ix.mat * ix.mat;
  CHECK(max_abs(sq - 0.25 * Cmatrix::Identity(2, 2)) < 1e-15);

  // [Ix, Iy] = i Iz on the same site
  const Operator iy = spin_operator(Axis::Y, 0, 1);
  const Cmatrix comm = ix.mat * iy.mat - iy.mat * ix.mat;
  CHECK(max_abs(comm - Cd(0, 1) * iz.mat) < 1e-15);

  // plus/minus ladder
  const Operator ip = spin_operator(Axis::Plus, 0, 1);
  CHECK(max_abs(ip.mat - (ix.mat + Cd(0, 1) * iy.mat)) < 1e-15);
}

TEST_CASE("disjoint supports commute") {
  const Operator a = spin_operator(Axis::X, 0, 2);
  const Operator b = spin_operator(Axis::Y, 1, 2);
  CHECK(max_abs(a.mat * b.mat - b.mat * a.mat) < 1e-15);
}

TEST_CASE("operator index validation") {
  CHECK_THROWS_AS(spin_operator(Axis::X, 2, 2), ValidationError);
  CHECK_THROWS_AS(spin_operator(Axis::X, 0, 15), ValidationError);
}

TEST_CASE("zeeman hamiltonian: zero gradient gives zero operator") {
  auto model = make_model(chain_sites(2, 1), 0.0, 0.0);
  const Operator h = zeeman_hamiltonian(model);
  CHECK(max_abs(h.mat) == 0.0);
}

TEST_CASE("zeeman hamiltonian reproduces the gradient splitting") {
  // G = 2e4 T/m over one 3.44 A plane spacing: 292.93 Hz offset
  auto model = make_model(chain_sites(2, 1), 0.0, 2e4);
  const Operator h = zeeman_hamiltonian(model);
  const double expected_hz =
      constants::gamma_H_hz_per_T * 2e4 * 3.44e-10;  // trivial arithmetic oracle
  CHECK(expected_hz == doctest::Approx(292.93).epsilon(1e-4));
  CHECK(std::abs(expected_hz - 300.0) / 300.0 < 0.03);

  // carrier plane contributes zero diagonal offset
  const Operator iz1 = spin_operator(Axis::Z, 1, 2);
  CHECK(max_abs(h.mat - constants::two_pi * expected_hz * iz1.mat) < 1e-9);
}

TEST_CASE("dipolar pair eigenvalues 2pi d {1/2, 1/2, -1, 0}") {
  auto model = make_model(chain_sites(2, 1));
  const double d = model.couplings.entries[0].d_hz;
  const Operator h = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  Eigen::SelfAdjointEigenSolver<Cmatrix> es(h.mat);
  std::vector<double> evals(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(evals.begin(), evals.end());
  const double w = constants::two_pi * d;
  CHECK(evals[0] == doctest::Approx(-w).epsilon(1e-12));
  CHECK(evals[1] == doctest::Approx(0.0).scale(w));
  CHECK(evals[2] == doctest::Approx(0.5 * w).epsilon(1e-12));
  CHECK(evals[3] == doctest::Approx(0.5 * w).epsilon(1e-12));
}

TEST_CASE("empty coupling table gives zero dipolar operator") {
  auto model = make_model(chain_sites(2, 1));
  model.couplings.entries.clear();
  const Operator h = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  CHECK(max_abs(h.mat) == 0.0);
}

TEST_CASE("zz-truncated pair commutes with both Iz operators") {
  auto model = make_model(chain_sites(2, 1));
  const Operator h = dipolar_hamiltonian(model, DipolarForm::ZzTruncated);
  for (int k = 0; k < 2; ++k) {
    const Operator iz = spin_operator(Axis::Z, k, 2);
    CHECK(max_abs(h.mat * iz.mat - iz.mat * h.mat) < 1e-12);
  }
}

TEST_CASE("both dipolar forms conserve total Iz") {
  auto model = make_model(chain_sites(3, 2));
  const Operator total_iz =
      collective_operator(Eigen::Vector3d::UnitZ(), {0, 1, 2, 3, 4, 5}, 6);
  for (auto form : {DipolarForm::FullSecular, DipolarForm::ZzTruncated}) {
    const Operator h = dipolar_hamiltonian(model, form);
    const double comm = max_abs(h.mat * total_iz.mat - total_iz.mat * h.mat);
    CHECK(comm <= 1e-12 * max_abs(h.mat));
    CHECK(is_hermitian(h.mat));
  }
}

TEST_CASE("propagator basics") {
  const long dim = 4;
  Operator zero{Cmatrix::Zero(dim, dim), "zero"};
  CHECK(max_abs(propagator(zero, 1.0).mat - Cmatrix::Identity(dim, dim)) < 1e-15);

  // pi rotation about x: U = -i (2 Ix)
  const double nu = 12.5e3;
  Operator h{constants::two_pi * nu * spin_operator(Axis::X, 0, 1).mat, "hx"};
  const Operator u = propagator(h, 1.0 / (2.0 * nu));
  const Cmatrix expected = Cd(0, -1) * 2.0 * spin_operator(Axis::X, 0, 1).mat;
  CHECK(max_abs(u.mat - expected) < 1e-12);

  // group inverse
  auto model = make_model(chain_sites(2, 1), 0.0, 1e4);
  Operator hd = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  hd.mat += zeeman_hamiltonian(model).mat;
  const Operator fwd = propagator(hd, 1e-4);
  const Operator bwd = propagator(hd, -1e-4);
  CHECK(max_abs(fwd.mat * bwd.mat - Cmatrix::Identity(4, 4)) < 1e-10);
  CHECK(unitarity_defect(fwd.mat) < 1e-10);
}

TEST_CASE("propagator rejects non-Hermitian input") {
  Cmatrix bad = Cmatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(propagator(Operator{bad, "bad"}, 1.0), ValidationError);
}

TEST_CASE("rotation sense: exp(-i theta Ix) takes +z to -y") {
  // documents the right-handed, -i generator convention
  const Operator u =
      propagator(Operator{spin_operator(Axis::X, 0, 1).mat, "ix"}, constants::pi / 2);
  Cvector up(2);
  up << 1, 0;
  const Cvector rotated = u.mat * up;
  CHECK(expectation(rotated, spin_operator(Axis::Y, 0, 1)) ==
        doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(expectation(rotated, spin_operator(Axis::Z, 0, 1)) ==
        doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("trotter: commuting terms and single terms are exact") {
  const int n = 2;
  Operator h1{constants::two_pi * 300.0 * spin_operator(Axis::Z, 0, n).mat, "h1"};
  Operator h2{constants::two_pi * 500.0 * spin_operator(Axis::Z, 1, n).mat, "h2"};
  Operator sum{h1.mat + h2.mat, "sum"};
  const double t = 1.3e-3;
  const Operator exact = propagator(sum, t);
  for (bool symmetrized : {false, true}) {
    const Operator approx = trotter_propagator({h1, h2}, t, 3, symmetrized);
    CHECK(max_abs(approx.mat - exact.mat) < 1e-10);
  }
  const Operator single = trotter_propagator({h1}, t, 5, false);
  CHECK(max_abs(single.mat - propagator(h1, t).mat) < 1e-10);
}

TEST_CASE("trotter convergence order matches the symmetrization flag") {
  auto model = make_model(chain_sites(2, 1), 0.0, 2e4);
  const Operator hz = zeeman_hamiltonian(model);
  const Operator hd = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  Operator sum{hz.mat + hd.mat, "sum"};
  const double t = 2e-3;
  const Operator exact = propagator(sum, t);

  for (bool symmetrized : {false, true}) {
    const int n1 = 64, n2 = 128;
    const double e1 =
        max_abs(trotter_propagator({hz, hd}, t, n1, symmetrized).mat - exact.mat);
    const double e2 =
        max_abs(trotter_propagator({hz, hd}, t, n2, symmetrized).mat - exact.mat);
    const double slope = std::log2(e1 / e2);
    const double expected = symmetrized ? 2.0 : 1.0;
    CHECK(std::abs(slope - expected) < 0.2);
  }
}

TEST_CASE("fidelity metric") {
  auto model = make_model(chain_sites(2, 1), 0.0, 2e4);
  Operator h = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  const Operator u = propagator(h, 3e-4);
  CHECK(fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-12));

  // global phase invariance
  Operator v = u;
  v.mat *= std::exp(Cd(0, 0.731));
  CHECK(fidelity(u, v) == doctest::Approx(1.0).epsilon(1e-12));

  // identity vs pi rotation: traceless
  Operator id{Cmatrix::Identity(2, 2), "id"};
  Operator flip{2.0 * spin_operator(Axis::X, 0, 1).mat, "2Ix"};
  CHECK(fidelity(id, flip) == doctest::Approx(0.0).scale(1.0));

  Operator small{Cmatrix::Identity(4, 4), "id4"};
  CHECK_THROWS_AS(fidelity(id, small), ValidationError);
}

TEST_CASE("expectation values") {
  const int n = 1;
  Cvector up(2);
  up << 1, 0;
  CHECK(expectation(up, spin_operator(Axis::Z, 0, n)) == doctest::Approx(0.5));
  CHECK(expectation(up, spin_operator(Axis::X, 0, n)) ==
        doctest::Approx(0.0).scale(1.0));

  // maximally mixed state, traceless observable
  const Cmatrix rho = 0.5 * Cmatrix::Identity(2, 2);
  CHECK(expectation_density(rho, spin_operator(Axis::X, 0, n)) ==
        doctest::Approx(0.0).scale(1.0));
  CHECK(expectation_density(rho, spin_operator(Axis::Z, 0, n)) ==
        doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("density evolution preserves trace and positivity") {
  auto model = make_model(chain_sites(2, 1), 0.0, 2e4);
  Operator h = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  h.mat += zeeman_hamiltonian(model).mat;
  const Operator u = propagator(h, 4e-4);
  // mixed state: 0.7 |up,up> + 0.3 maximally mixed
  Cmatrix rho = 0.3 * 0.25 * Cmatrix::Identity(4, 4);
  rho(0, 0) += 0.7;
  for (int k = 0; k < 100; ++k) rho = u.mat * rho * u.mat.adjoint();
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Cmatrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("norm drift stays below 1e-10 over 1e4 segments") {
  auto model = make_model(chain_sites(3, 1), 0.0, 2e4);
  Operator h = dipolar_hamiltonian(model, DipolarForm::FullSecular);
  h.mat += zeeman_hamiltonian(model).mat;
  const Operator u = propagator(h, 1e-5);
  Cvector state = Cvector::Zero(8);
  state(0) = Cd(std::sqrt(0.5), 0);
  state(5) = Cd(0, std::sqrt(0.5));
  for (int k = 0; k < 10000; ++k) state = u.mat * state;
  CHECK(std::abs(state.norm() - 1.0) < 1e-10);
}

TEST_CASE("spin count cap is enforced") {
  auto model = make_model(chain_sites(15, 1));
  CHECK_THROWS_WITH_AS(model.validate(), doctest::Contains("cap"), ValidationError);
}

TEST_CASE("operator CSV round numbers") {
  const Operator iz = spin_operator(Axis::Z, 0, 1);
  const std::string csv = operator_to_csv(iz);
  CHECK(csv.rfind("row,col,re,im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
