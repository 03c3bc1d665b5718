#include "rbbr/dynamics.hpp"

#include "rbbr/diagnostics.hpp"
#include "rbbr/equilibrium.hpp"
#include "support.hpp"

using namespace rbbr;
using testing::mat;
using testing::vec;

namespace {

const Regularizer kShannon = Regularizer::shannon();
const TypeSpace kOne = TypeSpace::uniform(1);

Game zero_game(std::size_t n, std::size_t k = 1) { return Game::common_matrix(Mat::Zero(n, n), k); }

}  // namespace

TEST_CASE("rbbr_map examples") {
  const BayesianStrategy s = random_strategy(TypeSpace::uniform(3), 4, 1);
  CHECK((rbbr_map(zero_game(4, 3), kShannon, NoiseLevel(1), s, TypeSpace::uniform(3)).rows().array() - 0.25)
            .abs()
            .maxCoeff() < 1e-15);
  for (const Regularizer& v : {Regularizer::shannon(), Regularizer::burg(), Regularizer::tsallis(0.3)})
    CHECK((rbbr_map(Game::common_matrix(testing::rps(), 1), v, NoiseLevel(0.2), BayesianStrategy::uniform(1, 3), kOne)
               .rows()
               .array() -
           1.0 / 3)
              .abs()
              .maxCoeff() < 1e-12);
  const Mat b = rbbr_map(Game::common_matrix(-Mat::Identity(2, 2), 1), kShannon, NoiseLevel(1),
                         BayesianStrategy(mat({{1, 0}})), kOne)
                    .rows();
  CHECK_NEAR(b(0, 0), 0.268941, 5e-7);
  CHECK_NEAR(b(0, 0), 1.0 / (1.0 + std::exp(1.0)), 1e-15);
}

TEST_CASE("rbbr_field examples") {
  CHECK(rbbr_field(zero_game(3), kShannon, NoiseLevel(1), BayesianStrategy::uniform(1, 3), kOne).rows().norm() <
        1e-15);
  const Mat f = rbbr_field(zero_game(2), kShannon, NoiseLevel(1), BayesianStrategy(mat({{1, 0}})), kOne).rows();
  CHECK((f - mat({{-0.5, 0.5}})).norm() < 1e-15);
  const Game c = Game::common_matrix(Mat::Identity(2, 2), 1);
  const EquilibriumResult eq =
      solve_fixed_point(c, kShannon, NoiseLevel(0.1), BayesianStrategy(mat({{0.9, 0.1}})), kOne, {0.5, 1e-12});
  REQUIRE(eq.converged);
  CHECK(strong_norm(rbbr_field(c, kShannon, NoiseLevel(0.1), eq.strategy, kOne), kOne) <= 1e-10);
}

TEST_CASE("field rows lie in the tangent space") {
  Rng rng(50);
  for (int t = 0; t < 200; ++t) {
    const TypeSpace ts = TypeSpace::uniform(1 + rng.below(4));
    const Game g = Game::common_matrix(testing::random_matrix(rng, 3), ts.size());
    const BayesianStrategy s = random_probe_strategy(rng, ts, 3);
    CHECK(rbbr_field(g, kShannon, NoiseLevel(0.3), s, ts).rows().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integrator configuration") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.steps() == 100);
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.dt = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.method = Method::RK4;
  CHECK_NOTHROW(c.validate());
  c = IntegratorConfig{};
  c.horizon = 0.01;
  CHECK_THROWS_AS(c.validate(), Error);
  c = IntegratorConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("Euler on the zero game follows the affine recursion") {
  IntegratorConfig c{Method::Euler, 0.5, 1.0, 1};
  const Trajectory tr = integrate(zero_game(2), kShannon, NoiseLevel(1), BayesianStrategy(mat({{1, 0}})), kOne, c);
  REQUIRE(tr.size() == 3);
  CHECK((tr.state(1).rows() - mat({{0.75, 0.25}})).norm() < 1e-15);
  CHECK((tr.state(2).rows() - mat({{0.625, 0.375}})).norm() < 1e-15);
  CHECK(tr.times()[2] == 1.0);
  const std::vector<double> r = tr.series("residual");
  CHECK_NEAR(r[0], std::sqrt(0.5), 1e-15);
  CHECK_NEAR(r[1], 0.5 * std::sqrt(0.5), 1e-15);
}

TEST_CASE("a fixed point is a constant trajectory") {
  for (Method m : {Method::Euler, Method::RK4}) {
    IntegratorConfig c{m, 0.1, 5.0, 1};
    const BayesianStrategy u = BayesianStrategy::uniform(2, 3);
    const Trajectory tr = integrate(Game::common_matrix(testing::rps(), 2), kShannon, NoiseLevel(1), u,
                                    TypeSpace::uniform(2), c);
    for (const BayesianStrategy& s : tr.states()) CHECK(strong_distance(s, u, TypeSpace::uniform(2)) <= 1e-9);
  }
}

TEST_CASE("RPS converges by T = 50") {
  IntegratorConfig c{Method::Euler, 0.1, 50.0, 10};
  const BayesianStrategy s0 = random_strategy(kOne, 3, 77);
  const Trajectory tr = integrate(Game::common_matrix(testing::rps(), 1), kShannon, NoiseLevel(1), s0, kOne, c);
  CHECK(tr.series("residual").back() < 1e-6);
  CHECK(tr.times().back() == doctest::Approx(50.0));
}

TEST_CASE("Euler preserves the simplex exactly; RK4 stays within drift tolerance") {
  Rng rng(51);
  for (int t = 0; t < 20; ++t) {
    const TypeSpace ts = TypeSpace::uniform(1 + rng.below(4));
    const Game g = Game::common_matrix(testing::random_matrix(rng, 4), ts.size());
    const BayesianStrategy s0 = random_strategy(ts, 4, rng.next());
    for (Method m : {Method::Euler, Method::RK4}) {
      const Trajectory tr = integrate(g, Regularizer::tsallis(0.5), NoiseLevel(0.5), s0, ts, {m, 0.1, 5.0, 1});
      for (const BayesianStrategy& s : tr.states()) {
        CHECK((s.rows().rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
        CHECK(s.rows().minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("RK4 agrees with fine Euler") {
  const Game g = Game::common_matrix(testing::rps(), 1);
  const BayesianStrategy s0(mat({{0.7, 0.2, 0.1}}));
  const Trajectory rk = integrate(g, kShannon, NoiseLevel(0.5), s0, kOne, {Method::RK4, 0.05, 2.0, 1});
  const Trajectory eu = integrate(g, kShannon, NoiseLevel(0.5), s0, kOne, {Method::Euler, 1e-4, 2.0, 20000});
  CHECK(strong_distance(rk.final_state(), eu.final_state(), kOne) < 1e-3);
}

TEST_CASE("recording decimation keeps the final sample") {
  const Trajectory tr = integrate(zero_game(2), kShannon, NoiseLevel(1), BayesianStrategy(mat({{1, 0}})), kOne,
                                  {Method::Euler, 0.1, 1.05, 4});
  CHECK(tr.times().front() == 0.0);
  CHECK(tr.times().back() == doctest::Approx(1.1));
  CHECK(tr.size() == 4);  // steps 0, 4, 8 and the final step 11
  CHECK_THROWS_AS(tr.series("phi_tilde"), Error);
}

TEST_CASE("trajectory times must increase") {
  Trajectory tr;
  tr.append(0.0, BayesianStrategy::uniform(1, 2), {});
  CHECK_THROWS_AS(tr.append(0.0, BayesianStrategy::uniform(1, 2), {}), Error);
}

TEST_CASE("Gronwall bound") {
  const TypeSpace ts = TypeSpace::uniform(1);
  const IntegratorConfig cfg{Method::Euler, 0.1, 10.0, 1};
  SUBCASE("identical starts") {
    const BayesianStrategy s = random_strategy(ts, 3, 1);
    const GronwallReport r = gronwall_check(Game::common_matrix(testing::rps(), 1), kShannon, NoiseLevel(1), s, s, ts, cfg);
    CHECK(r.holds);
    for (double d : r.distances) CHECK(d == 0.0);
  }
  SUBCASE("zero game contracts") {
    const GronwallReport r = gronwall_check(zero_game(3), kShannon, NoiseLevel(1), random_strategy(ts, 3, 1),
                                            random_strategy(ts, 3, 2), ts, cfg);
    CHECK(r.holds);
    CHECK(r.kappa == 0.0);
    CHECK(r.lipschitz_constant == 1.0);
  }
  SUBCASE("coordination starts straddling the basin boundary") {
    const GronwallReport r = gronwall_check(Game::common_matrix(Mat::Identity(2, 2), 1), kShannon, NoiseLevel(0.1),
                                            BayesianStrategy(mat({{0.5005, 0.4995}})),
                                            BayesianStrategy(mat({{0.4995, 0.5005}})), ts, cfg);
    CHECK(r.holds);
    CHECK(r.max_ratio < 1.0);
    CHECK(r.distances.back() > r.initial_distance);  // the starts separate
  }
}

TEST_CASE("forward invariance for matrix-type games") {
  Rng rng(52);
  const Game g = Game::matrix({testing::random_matrix(rng, 3), testing::random_matrix(rng, 3),
                               testing::random_matrix(rng, 3)});
  const TypeSpace ts = TypeSpace(vec({0.2, 0.5, 0.3})).with_metric(operator_norm_metric(g));
  const double alpha = 1.0;  // 1 / (eps gamma) with eps = 1
  SUBCASE("best responses are alpha-Lipschitz in type") {
    for (int t = 0; t < 1000; ++t) {
      const BayesianStrategy s = random_probe_strategy(rng, ts, 3);
      CHECK(lipschitz_in_type(rbbr_map(g, kShannon, NoiseLevel(1), s, ts), ts) <= alpha + 1e-9);
    }
  }
  SUBCASE("trajectory audit") {
    const BayesianStrategy s0 = BayesianStrategy::uniform(3, 3);
    const Trajectory tr = integrate(g, kShannon, NoiseLevel(1), s0, ts, {Method::Euler, 0.1, 20.0, 1});
    const InvarianceReport r = invariance_check(g, kShannon, NoiseLevel(1), tr, ts, alpha, 0.2);
    CHECK(r.type_lipschitz_game);
    CHECK(r.alpha_certified);
    CHECK(r.initial_lipschitz);
    CHECK(r.holds());
    CHECK(r.max_lipschitz <= alpha + 1e-9);
  }
  SUBCASE("constant-in-type game") {
    const Game c = Game::common_matrix(testing::random_matrix(rng, 3), 3);
    const TypeSpace tc = TypeSpace(vec({0.2, 0.5, 0.3}), mat({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    const BayesianStrategy s = random_strategy(tc, 3, 5);
    CHECK(lipschitz_in_type(rbbr_map(c, kShannon, NoiseLevel(1), s, tc), tc) < 1e-12);
  }
  SUBCASE("missing metric") {
    const Trajectory tr = integrate(g, kShannon, NoiseLevel(1), BayesianStrategy::uniform(3, 3), TypeSpace::uniform(3),
                                    {Method::Euler, 0.1, 1.0, 1});
    CHECK_THROWS_AS(invariance_check(g, kShannon, NoiseLevel(1), tr, TypeSpace::uniform(3), 1.0, 0.1), Error);
  }
}
