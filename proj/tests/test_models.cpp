#include <doctest.h>

#include <cmath>
#include <vector>

#include "altproj/models.hpp"
#include "altproj/spectral.hpp"
#include "oracles.hpp"

using namespace altproj;

TEST_CASE("two_line_blocks examples") {
  const BlockAngleModel one = two_line_blocks({0.25});
  CHECK(one.a.ambient_dim() == 2);
  CHECK(angle_report(one.a, one.b).friedrichs_cosine == doctest::Approx(0.5).epsilon(1e-14));

  const BlockAngleModel two = two_line_blocks({0.25, 0.81});
  CHECK(two.a.ambient_dim() == 4);
  CHECK(std::abs(angle_report(two.a, two.b).friedrichs_cosine - 0.9) <= 1e-10);
  CHECK(two.spectral.values == std::vector<double>{0.25, 0.81});
  CHECK_FALSE(two.closed_sum.has_value());

  CHECK_THROWS_AS(two_line_blocks({}), std::invalid_argument);
  CHECK_THROWS_AS(two_line_blocks({0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(two_line_blocks({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(two_line_blocks({0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("block model realizes its schedule exactly") {
  const BlockAngleModel m = block_model(sigma_schedules(SigmaFamily::GeometricGap, 6));
  const Matrix t = t_from_projections(m.a, m.b);
  const auto eig = oracle::jacobi_eigen(t);
  // Six zero eigenvalues (the u_{2j+1} axes) followed by the sigmas.
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(std::abs(eig[j]) <= 1e-10);
    CHECK(std::abs(eig[6 + j] - m.sigmas[j]) <= 1e-10);
  }
  // Exact eigenpairs (sigma_j, a_j).
  for (Index j = 0; j < 6; ++j) {
    CHECK((t * m.a.basis_vector(j) - m.sigmas[j] * m.a.basis_vector(j)).norm() <= 1e-14);
  }
  CHECK(intersect(m.a, m.b).rank() == 0);
  const double pba = oracle::spectral_norm(m.b.projector() * m.a.projector());
  CHECK(std::abs(pba * pba - m.sigmas.back()) <= 1e-9);
  CHECK(m.closed_sum == false);
}

TEST_CASE("sigma_schedules examples") {
  const SigmaSchedule geo = sigma_schedules(SigmaFamily::GeometricGap, 4, {.q = 0.5});
  CHECK(geo.values == std::vector<double>{0.5, 0.75, 0.875, 0.9375});
  CHECK_FALSE(geo.closed_sum);

  const SigmaSchedule capped = sigma_schedules(SigmaFamily::Capped, 3, {.bound = 0.81});
  for (double v : capped.values) CHECK(v <= 0.81);
  CHECK(capped.values.back() == 0.81);
  CHECK(capped.closed_sum);

  const SigmaSchedule harm = sigma_schedules(SigmaFamily::HarmonicGap, 3);
  REQUIRE(harm.values.size() == 3);
  CHECK(harm.values[0] == doctest::Approx(0.5));
  CHECK(harm.values[1] == doctest::Approx(2.0 / 3.0));
  CHECK(harm.values[2] == doctest::Approx(0.75));
  CHECK_FALSE(harm.closed_sum);

  const SigmaSchedule power = sigma_schedules(SigmaFamily::PowerGap, 2, {.p = 2.0});
  CHECK(power.values[0] == doctest::Approx(0.75));
  CHECK(power.values[1] == doctest::Approx(1.0 - 1.0 / 9.0));

  CHECK_THROWS_AS(sigma_schedules(SigmaFamily::GeometricGap, 60), std::invalid_argument);
  CHECK_THROWS_AS(sigma_schedules(SigmaFamily::Capped, 3, {.bound = 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(sigma_schedules(SigmaFamily::PowerGap, 0), std::invalid_argument);
  CHECK_THROWS_AS(parse_sigma_family("cubic"), std::invalid_argument);
  CHECK(sigma_family_name(parse_sigma_family("harmonic-gap")) == "harmonic-gap");
}

TEST_CASE("counterexample examples") {
  const CounterexampleInstance inst = counterexample(12);
  CHECK(std::abs(inst.e_prime[0].dot(inst.f_prime[0]) - 0.8) <= 1e-12);
  CHECK(inst.rho[0] == doctest::Approx(0.8944271909999159).epsilon(1e-14));
  CHECK_THROWS_AS(counterexample(7), std::invalid_argument);

  const CounterexampleInstance big = counterexample(60);
  CHECK(intersect(big.c1, big.c2, 1e-6).rank() == 0);
  CHECK(big.c1.rank() == 30);
  CHECK(big.c2.rank() == 29);
  for (std::size_t n = 0; n < big.e_prime.size(); ++n) {
    const double nn = static_cast<double>(n + 1);
    CHECK(std::abs(big.e_prime[n].dot(big.f_prime[n]) - 1.0 / (1.0 + 1.0 / (4 * nn * nn))) <= 1e-12);
    CHECK(big.e_prime[n].norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("counterexample spanning vectors have disjoint supports") {
  for (Index N : {8, 13, 40}) {
    const CounterexampleInstance inst = counterexample(N);
    // Orthonormalizing mutually orthogonal vectors only rescales them, so each
    // basis vector has exactly two nonzero coordinates.
    for (const Subspace* s : {&inst.c1, &inst.c2}) {
      for (Index j = 0; j < s->rank(); ++j) {
        CHECK((s->basis().col(j).array().abs() > 0).count() == 2);
      }
    }
    CHECK(intersect(inst.c1, inst.c2, 1e-6).rank() == 0);
  }
}

TEST_CASE("refute_decomposition examples") {
  const CounterexampleInstance inst = counterexample(12);
  const RefutationReport r = refute_decomposition(inst);
  CHECK(r.x_dot_f1 == doctest::Approx(0.14907119849998599).epsilon(1e-14));
  CHECK(r.norm_pe_x == 0.0);
  CHECK(r.x_distance_to_c1 <= 1e-12);
  CHECK(r.decomposition_residual > 0.1);
  CHECK(r.all_pass());
  for (Index N = 8; N <= 64; ++N) CHECK(refute_decomposition(counterexample(N)).all_pass());
}

TEST_CASE("perp_basis_check examples") {
  const CounterexampleInstance inst = counterexample(12);
  const Vector u2 = Vector::Unit(12, 1);
  CHECK(u2.dot(inst.e_prime[0]) == 0.0);

  Vector g = Vector::Zero(12);
  g(2) = -2.0;
  g(3) = 1.0;
  g(4) = -2.0;
  g /= 3.0;
  CHECK(std::abs(g.dot(inst.e_prime[0])) <= 1e-16);
  CHECK((inst.perp_basis[inst.perp_basis.size() - 2] - g).norm() <= 1e-15);

  const Vector u1 = Vector::Unit(12, 0);
  for (const Vector& f : inst.f_prime) CHECK(u1.dot(f) == 0.0);

  const PerpCheckReport report = perp_basis_check(inst);
  CHECK(report.all_pass());
  CHECK(report.generators == inst.perp_basis.size());
}

TEST_CASE("random_pair examples") {
  auto [s1, s2] = random_pair(6, 2, 2, 1, 42);
  CHECK(intersect(s1, s2).rank() == 1);

  auto [g1, g2] = random_pair(6, 3, 3, 0, 42);
  const AngleReport r = angle_report(g1, g2);
  CHECK(r.intersection_rank == 0);
  CHECK(r.friedrichs_cosine < 1.0);

  auto [a1, a2] = random_pair(8, 3, 4, 2, 9);
  auto [b1, b2] = random_pair(8, 3, 4, 2, 9);
  CHECK(a1.basis() == b1.basis());
  CHECK(a2.basis() == b2.basis());

  CHECK_THROWS_AS(random_pair(4, 3, 3, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_pair(4, 1, 1, 2, 0), std::invalid_argument);
}
