#include "rbbr/games.hpp"

#include "support.hpp"

using namespace rbbr;
using testing::mat;
using testing::vec;

TEST_CASE("payoff examples") {
  const TypeSpace one = TypeSpace::uniform(1);
  CHECK(payoff(Game::common_matrix(Mat::Zero(3, 3), 1), BayesianStrategy::uniform(1, 3), 0, one).isZero());
  CHECK(payoff(Game::common_matrix(testing::rps(), 1), BayesianStrategy::uniform(1, 3), 0, one).norm() < 1e-15);
  CHECK((payoff(Game::common_matrix(Mat::Identity(2, 2), 1), BayesianStrategy(mat({{0.7, 0.3}})), 0, one) -
         vec({0.7, 0.3}))
            .norm() < 1e-15);
  CHECK_THROWS_AS(payoff(Game::common_matrix(Mat::Identity(2, 2), 1), BayesianStrategy(mat({{0.7, 0.3}})), 1, one),
                  Error);
}

TEST_CASE("payoff_all examples") {
  const TypeSpace two = TypeSpace::uniform(2);
  CHECK(payoff_all(Game::common_matrix(Mat::Zero(3, 3), 1), BayesianStrategy::uniform(1, 3), TypeSpace::uniform(1))
            .isZero());
  const BayesianStrategy s(mat({{0.2, 0.8}, {0.9, 0.1}}));
  const Mat p = payoff_all(Game::common_matrix(testing::mat({{1, 2}, {3, 4}}), 2), s, two);
  CHECK(p.row(0) == p.row(1));
  const Mat q = payoff_all(Game::matrix({Mat::Identity(2, 2), -Mat::Identity(2, 2)}), BayesianStrategy::uniform(2, 2), two);
  CHECK((q - mat({{0.5, 0.5}, {-0.5, -0.5}})).norm() < 1e-15);
}

TEST_CASE("game construction validates shapes") {
  CHECK_THROWS_AS(Game::matrix({}), Error);
  CHECK_THROWS_AS(Game::matrix({Mat::Zero(2, 3)}), Error);
  CHECK_THROWS_AS(Game::matrix({Mat::Zero(2, 2), Mat::Zero(3, 3)}), Error);
  Mat bad = Mat::Zero(2, 2);
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(Game::matrix({bad}), Error);
  CHECK_THROWS_AS(Game::congestion(Mat::Zero(2, 3), -1.0), Error);
}

TEST_CASE("strong Lipschitz estimate") {
  const TypeSpace one = TypeSpace::uniform(1);
  const LipschitzEstimate z = strong_lipschitz_estimate(Game::common_matrix(Mat::Zero(3, 3), 1), one, 100, 1);
  CHECK(z.empirical == 0.0);
  const LipschitzEstimate i = strong_lipschitz_estimate(Game::common_matrix(Mat::Identity(3, 3), 1), one, 1000, 2);
  REQUIRE(i.certified);
  CHECK_NEAR(*i.certified, 1.0, 1e-12);
  CHECK(i.empirical <= 1.0 + 1e-12);
  CHECK(i.empirical > 0.5);
  const LipschitzEstimate two = strong_lipschitz_estimate(Game::common_matrix(2 * Mat::Identity(3, 3), 1), one, 10, 3);
  CHECK_NEAR(*two.certified, 2.0, 1e-12);
  CHECK_THROWS_AS(strong_lipschitz_estimate(Game::common_matrix(Mat::Zero(3, 3), 1), one, 1, 1), Error);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Game g = Game::matrix({testing::random_matrix(rng, 3), testing::random_matrix(rng, 3)});
    const LipschitzEstimate e = strong_lipschitz_estimate(g, TypeSpace(vec({0.3, 0.7})), 200, rng.next());
    CHECK(e.empirical <= *e.certified + 1e-12);
  }
}

TEST_CASE("negative semidefiniteness") {
  const TypeSpace one = TypeSpace::uniform(1);
  const NsdReport r = is_negative_semidefinite(Game::common_matrix(testing::rps(), 1), one, 500, 1);
  CHECK(r.verdict);
  CHECK(std::abs(r.worst_value) < 1e-12);
  CHECK(is_negative_semidefinite(Game::common_matrix(-Mat::Identity(3, 3), 1), one, 500, 2).verdict);
  const NsdReport c = is_negative_semidefinite(Game::common_matrix(Mat::Identity(3, 3), 1), one, 500, 3);
  CHECK_FALSE(c.verdict);
  CHECK(c.worst_value > 0.0);
  REQUIRE(c.exact_verdict);
  CHECK_FALSE(*c.exact_verdict);
}

TEST_CASE("tangent eigenvalue matches an independent basis") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Mat a = testing::random_matrix(rng, 2 + static_cast<Eigen::Index>(rng.below(4)));
    CHECK_NEAR(max_tangent_eigenvalue(a), oracle::tangent_eigen_max(a), 1e-12);
  }
  for (int t = 0; t < 50; ++t) CHECK(max_tangent_eigenvalue(testing::random_nsd(rng, 4)) <= 1e-12);
}

TEST_CASE("heterogeneous matrix games use the block eigen test") {
  Rng rng(6);
  const TypeSpace t(vec({0.2, 0.3, 0.5}));
  // Type-specific payoffs that differ only by terms constant across
  // strategies leave the tangent form unchanged: NSD.
  const Mat base = testing::random_nsd(rng, 3);
  std::vector<Mat> shifted;
  for (int k = 0; k < 3; ++k) {
    Vec c(3);
    for (Eigen::Index j = 0; j < 3; ++j) c(j) = rng.uniform(-1, 1);
    shifted.push_back(base + Vec::Ones(3) * c.transpose());
  }
  const NsdReport a = is_negative_semidefinite(Game::matrix(shifted), t, 500, 7);
  REQUIRE(a.exact_verdict);
  CHECK(*a.exact_verdict);
  CHECK(a.verdict);
  // Distinct antisymmetric matrices per type are not NSD jointly: each type's
  // deviation can align with its own payoff gradient.
  std::vector<Mat> anti;
  for (int k = 0; k < 3; ++k) {
    const Mat c = testing::random_matrix(rng, 3);
    anti.push_back(c - c.transpose());
  }
  const NsdReport b = is_negative_semidefinite(Game::matrix(anti), t, 2000, 8);
  REQUIRE(b.exact_verdict);
  CHECK_FALSE(*b.exact_verdict);
  CHECK_FALSE(b.verdict);
}

TEST_CASE("self-defeating externalities form") {
  const TypeSpace one = TypeSpace::uniform(1);
  const BayesianStrategy mid = BayesianStrategy::uniform(1, 2);
  const SignedStrategy d(mat({{1, -1}}));
  CHECK(sde_directional_form(Game::common_matrix(Mat::Zero(2, 2), 1), one, mid, d, 0.1) == 0.0);
  CHECK_NEAR(sde_directional_form(Game::common_matrix(-Mat::Identity(2, 2), 1), one, mid, d, 0.1), -2.0, 1e-12);
  CHECK_NEAR(sde_directional_form(Game::common_matrix(Mat::Identity(2, 2), 1), one, mid, d, 0.1), 2.0, 1e-12);
  CHECK_THROWS_AS(sde_directional_form(Game::common_matrix(Mat::Identity(2, 2), 1), one, mid, d, 0.6), Error);
  try {
    sde_directional_form(Game::common_matrix(Mat::Identity(2, 2), 1), one, mid, d, 0.6);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Step);
  }
  CHECK_THROWS_AS(sde_directional_form(Game::common_matrix(Mat::Identity(2, 2), 1), one, mid,
                                       SignedStrategy(mat({{1, 0}})), 0.1),
                  Error);
  CHECK(admissible_step(mid, d) == 0.5);
}

TEST_CASE("sde form equals the quadratic form for matrix games") {
  Rng rng(9);
  const TypeSpace t(vec({0.25, 0.75}));
  for (int trial = 0; trial < 100; ++trial) {
    const Mat a = testing::random_matrix(rng, 3);
    const Mat b = testing::random_matrix(rng, 3);
    const Game g = Game::matrix({a, b});
    const BayesianStrategy s = random_probe_strategy(rng, t, 3);
    const SignedStrategy d = random_tangent_direction(rng, t, 3);
    const double room = admissible_step(s, d);
    if (room <= 0) continue;
    const Vec e = aggregate(d.rows(), t);
    const double exact = 0.25 * d.rows().row(0).dot(a * e) + 0.75 * d.rows().row(1).dot(b * e);
    CHECK_NEAR(sde_directional_form(g, t, s, d, std::min(1e-5, 0.5 * room)), exact, 1e-8);
  }
}

TEST_CASE("potential gradient check") {
  Rng rng(10);
  const TypeSpace one = TypeSpace::uniform(1);
  const Game zero = Game::common_matrix(Mat::Zero(3, 3), 1).with_potential(quadratic_potential(Mat::Zero(3, 3)), "q");
  CHECK(check_potential_gradient(zero, one, BayesianStrategy::uniform(1, 3), 50, 1).max_residual == 0.0);
  for (int t = 0; t < 10; ++t) {
    const Mat a = testing::random_symmetric(rng, 4);
    const TypeSpace ts = TypeSpace::uniform(3);
    const Game g = Game::common_matrix(a, 3).with_potential(quadratic_potential(a), "quadratic");
    const BayesianStrategy s(0.5 * random_strategy(ts, 4, rng.next()).rows() + 0.5 * BayesianStrategy::uniform(3, 4).rows());
    const PotentialGradientCheck c = check_potential_gradient(g, ts, s, 100, rng.next());
    CHECK(c.max_residual <= 1e-7);
    CHECK(c.probes_used == 100);
  }
  // A non-symmetric matrix with the symmetric-matrix formula is caught.
  const Mat ns = testing::mat({{0, 2, 0}, {0, 0, 0}, {0, 0, 0}});
  const Game bad = Game::common_matrix(ns, 1).with_potential(quadratic_potential(ns), "quadratic");
  CHECK(check_potential_gradient(bad, one, BayesianStrategy::uniform(1, 3), 100, 2).max_residual > 1e-3);
  // The directional derivative of 1/2 |E|^2 at the uniform point along (1,-1) is zero.
  const Game id = Game::common_matrix(Mat::Identity(2, 2), 1).with_potential(quadratic_potential(Mat::Identity(2, 2)), "q");
  const double h = 1e-5;
  const BayesianStrategy up(mat({{0.5 + h, 0.5 - h}})), dn(mat({{0.5 - h, 0.5 + h}}));
  CHECK_NEAR((id.potential(up, one) - id.potential(dn, one)) / (2 * h), 0.0, 1e-12);
}

TEST_CASE("congestion game and its potential") {
  const Mat base = mat({{1.0, 0.5, 0.0}, {0.2, 1.0, 0.4}});
  const TypeSpace t(vec({0.6, 0.4}));
  const Game g = Game::congestion(base, 1.5).with_potential(congestion_potential(base, 1.5), "congestion");
  CHECK(g.kind() == Game::Kind::Aggregative);
  REQUIRE(g.certified_lipschitz());
  CHECK(*g.certified_lipschitz() == 1.5);
  const BayesianStrategy s(mat({{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}}));
  const Vec e = expectation(s, t).entries();
  CHECK((payoff(g, s, 1, t) - (base.row(1).transpose() - 1.5 * e)).norm() < 1e-15);
  CHECK(check_potential_gradient(g, t, s, 100, 3).max_residual <= 1e-7);
  // Negative definite in the aggregate: NSD.
  CHECK(is_negative_semidefinite(g, t, 500, 4).verdict);
}

TEST_CASE("aggregative payoffs depend on the strategy only through the aggregate") {
  const Mat base = mat({{1.0, 0.5, 0.0}, {1.0, 0.5, 0.0}, {0.2, 1.0, 0.4}});
  const Game g = Game::congestion(base, 1.0);
  const TypeSpace t(vec({0.25, 0.25, 0.5}));
  const BayesianStrategy s(mat({{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.1, 0.1, 0.8}}));
  const BayesianStrategy swapped(mat({{0.6, 0.2, 0.2}, {0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}}));
  CHECK(payoff_all(g, s, t) == payoff_all(g, swapped, t));
}

TEST_CASE("operator-norm metric") {
  const Game g = Game::matrix({Mat::Identity(2, 2), -Mat::Identity(2, 2), Mat::Zero(2, 2)});
  const Mat d = operator_norm_metric(g);
  CHECK_NEAR(d(0, 1), 2.0, 1e-12);
  CHECK_NEAR(d(0, 2), 1.0, 1e-12);
  CHECK(d(1, 1) == 0.0);
  CHECK_NOTHROW(TypeSpace(Vec::Constant(3, 1.0 / 3), d));
}
