#include "support.hpp"

#include "maxent/envs.hpp"
#include "maxent/mdp.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace maxent;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

double linf(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

TabularMDP single_state(int n_actions) {
    return TabularMDP(std::vector<Matrix>(static_cast<std::size_t>(n_actions), Matrix::Ones(1, 1)), 0.9,
                      Vector::Ones(1));
}

} // namespace

TEST_CASE("constructors reject invalid models and policies") {
    Matrix bad(2, 2);
    bad << 0.5, 0.0, 0.6, 1.0; // column 0 sums to 1.1
    CHECK_THROWS_WITH_AS(TabularMDP({bad}, 0.9, Vector::Unit(2, 0)), doctest::Contains("s=0, a=0"),
                         std::invalid_argument);
    Matrix neg(2, 2);
    neg << 1.5, 0.0, -0.5, 1.0;
    CHECK_THROWS_AS(TabularMDP({neg}, 0.9, Vector::Unit(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(TabularMDP({Matrix::Identity(2, 2)}, 1.0, Vector::Unit(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(TabularMDP({Matrix::Identity(2, 2)}, -0.1, Vector::Unit(2, 0)), std::invalid_argument);
    CHECK_THROWS_AS(TabularMDP({Matrix::Identity(2, 2)}, 0.5, vec({0.5, 0.6})), std::invalid_argument);
    CHECK_THROWS_AS(TabularMDP({Matrix::Identity(2, 2)}, 0.5, Vector::Unit(3, 0)), std::invalid_argument);
    CHECK_THROWS_AS(StationaryPolicy(Matrix::Constant(2, 2, 0.6)), std::invalid_argument);
    CHECK_THROWS_AS(MixturePolicy({StationaryPolicy::uniform(2, 2)}, {0.7}), std::invalid_argument);
    CHECK_THROWS_AS(MixturePolicy({StationaryPolicy::uniform(2, 2), StationaryPolicy::uniform(2, 2)}, {1.2, -0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(StateDistribution(vec({0.5, 0.4})), std::invalid_argument);

    const TabularMDP mdp = support::swap_mdp(0.5);
    CHECK_THROWS_AS(transition_operator(mdp, StationaryPolicy::uniform(2, 2)), std::invalid_argument);
}

TEST_CASE("transition operator") {
    SUBCASE("figure1 root column under pi1") {
        const TabularMDP mdp = build(EnvSpec{});
        const Matrix p = transition_operator(mdp, figure1::pi1());
        CHECK(linf(p.col(figure1::kRoot), vec({0, 2.0 / 3.0, 1.0 / 3.0, 0, 0, 0})) <= 1e-12);
    }
    SUBCASE("identity dynamics") {
        const TabularMDP mdp({Matrix::Identity(3, 3)}, 0.5, Vector::Unit(3, 0));
        CHECK(transition_operator(mdp, StationaryPolicy::uniform(3, 1)) == Matrix::Identity(3, 3));
    }
    SUBCASE("columns are distributions on 1000 random pairs") {
        std::mt19937_64 rng(11);
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const int n = 1 + static_cast<int>(seed % 6), k = 1 + static_cast<int>(seed % 3);
            const TabularMDP mdp = support::random_mdp(seed, n, k, 0.9, seed % 2 == 0);
            const auto pi = support::random_policy(rng, n, k);
            const Matrix p = transition_operator(mdp, pi);
            for (int s = 0; s < n; ++s) REQUIRE(std::abs(p.col(s).sum() - 1.0) <= 1e-12);
            REQUIRE(p.minCoeff() >= 0.0);
            REQUIRE((p - support::policy_matrix(mdp, pi)).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
    SUBCASE("linear in the policy") {
        std::mt19937_64 rng(5);
        const TabularMDP mdp = support::random_mdp(3, 4, 3, 0.9);
        const auto a = support::random_policy(rng, 4, 3), b = support::random_policy(rng, 4, 3);
        const StationaryPolicy mix(0.3 * a.probs() + 0.7 * b.probs());
        const Matrix lhs = transition_operator(mdp, mix);
        const Matrix rhs = 0.3 * transition_operator(mdp, a) + 0.7 * transition_operator(mdp, b);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("t-step distributions on the tree") {
    const TabularMDP mdp = build(EnvSpec{});
    const Vector expected0 = vec({0, 0, 0, 3.0 / 8.0, 1.0 / 4.0, 3.0 / 8.0});
    const Vector expected12 = vec({0, 0, 0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    CHECK(linf(t_step_distribution(mdp, figure1::pi0(), 2).probs(), expected0) <= 1e-12);
    CHECK(linf(t_step_distribution(mdp, figure1::pi1(), 2).probs(), expected12) <= 1e-12);
    CHECK(linf(t_step_distribution(mdp, figure1::pi2(), 2).probs(), expected12) <= 1e-12);
    CHECK(t_step_distribution(mdp, figure1::pi0(), 0).probs() == mdp.d0());
    CHECK_THROWS_AS(t_step_distribution(mdp, figure1::pi0(), -1), std::invalid_argument);

    SUBCASE("entropy at t=2 is not concave in the policy") {
        const double h0 = support::entropy(expected0.tail(3));
        const double h12 = support::entropy(expected12.tail(3));
        CHECK(h0 == doctest::Approx(1.0822).epsilon(1e-4));
        CHECK(h12 == doctest::Approx(std::log(3.0)).epsilon(1e-12));
        CHECK(h0 < 0.5 * (h12 + h12));
        // pi0 is the average of pi1 and pi2
        CHECK((figure1::pi0().probs() - 0.5 * (figure1::pi1().probs() + figure1::pi2().probs())).cwiseAbs().maxCoeff() <=
              1e-15);
    }
}

TEST_CASE("discounted occupancy") {
    SUBCASE("single absorbing state") {
        CHECK(discounted_occupancy(single_state(2), StationaryPolicy::uniform(1, 2)).probs()[0] ==
              doctest::Approx(1.0));
    }
    SUBCASE("two-state swap, closed form") {
        const double g = 0.5;
        const Vector d = discounted_occupancy(support::swap_mdp(g), StationaryPolicy::uniform(2, 1)).probs();
        CHECK(linf(d, vec({1.0 / (1.0 + g), g / (1.0 + g)})) <= 1e-12);
    }
    SUBCASE("matches the truncated series on random models") {
        std::mt19937_64 rng(3);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const double gamma = 0.5 + 0.45 * (static_cast<double>(seed % 10) / 10.0);
            const TabularMDP mdp = support::random_mdp(seed, 5, 2, gamma, seed % 3 == 0);
            const auto pi = support::random_policy(rng, 5, 2);
            const Vector d = discounted_occupancy(mdp, pi).probs();
            for (int t0 : {0, 5, 50, 200}) {
                REQUIRE(linf(d, support::truncated_occupancy(mdp, pi, t0)) <= std::pow(gamma, t0 + 1) + 1e-12);
            }
        }
    }
    SUBCASE("gamma zero is d0") {
        const TabularMDP mdp = support::random_mdp(4, 4, 2, 0.0);
        CHECK(linf(discounted_occupancy(mdp, StationaryPolicy::uniform(4, 2)).probs(), mdp.d0()) <= 1e-15);
    }
}

TEST_CASE("state-action occupancy") {
    SUBCASE("single state") {
        Matrix p(1, 2);
        p << 0.3, 0.7;
        const Matrix d = discounted_occupancy_sa(single_state(2), StationaryPolicy(p)).probs();
        CHECK(d(0, 0) == doctest::Approx(0.3));
        CHECK(d(0, 1) == doctest::Approx(0.7));
    }
    SUBCASE("marginal recovers the state occupancy") {
        std::mt19937_64 rng(8);
        const TabularMDP mdp = support::random_mdp(9, 4, 3, 0.9);
        const auto pi = support::random_policy(rng, 4, 3);
        const StateActionOccupancy sa = discounted_occupancy_sa(mdp, pi);
        CHECK(linf(sa.state_marginal(), discounted_occupancy(mdp, pi).probs()) <= 1e-12);
    }
    SUBCASE("deterministic policy has one nonzero per visited state") {
        const TabularMDP mdp = support::random_mdp(2, 4, 3, 0.9);
        const std::vector<int> actions{2, 0, 1, 1};
        const Matrix d = discounted_occupancy_sa(mdp, StationaryPolicy::deterministic(actions, 3)).probs();
        for (int s = 0; s < 4; ++s) {
            int nonzero = 0;
            for (int a = 0; a < 3; ++a) nonzero += d(s, a) > 0.0;
            CHECK(nonzero <= 1);
            if (d.row(s).sum() > 0) CHECK(d(s, actions[static_cast<std::size_t>(s)]) > 0.0);
        }
    }
}

TEST_CASE("mixture occupancy") {
    std::mt19937_64 rng(21);
    const TabularMDP mdp = support::random_mdp(5, 4, 2, 0.8);
    const auto a = support::random_policy(rng, 4, 2), b = support::random_policy(rng, 4, 2);
    const Vector p = discounted_occupancy(mdp, a).probs(), q = discounted_occupancy(mdp, b).probs();

    CHECK(linf(mixture_occupancy(mdp, MixturePolicy(a)).probs(), p) <= 1e-15);
    CHECK(linf(mixture_occupancy(mdp, MixturePolicy({a, b}, {0.5, 0.5})).probs(), 0.5 * (p + q)) <= 1e-12);

    SUBCASE("affine in the weights") {
        const auto c = support::random_policy(rng, 4, 2);
        for (int trial = 0; trial < 20; ++trial) {
            const Vector w1 = support::random_distribution(rng, 3), w2 = support::random_distribution(rng, 3);
            const double lambda = std::uniform_real_distribution<double>(0, 1)(rng);
            auto occ = [&](const Vector& w) {
                return mixture_occupancy(mdp, MixturePolicy({a, b, c}, {w[0], w[1], w[2]})).probs();
            };
            const Vector w = lambda * w1 + (1 - lambda) * w2;
            REQUIRE(linf(occ(w), lambda * occ(w1) + (1 - lambda) * occ(w2)) <= 1e-12);
        }
    }
    SUBCASE("figure1 half-half mixture at gamma 0.999") {
        const TabularMDP tree = build(EnvSpec{}).with_gamma(0.999);
        const Vector d = mixture_occupancy(tree, MixturePolicy({figure1::pi1(), figure1::pi2()}, {0.5, 0.5})).probs();
        const Vector series = 0.5 * (support::truncated_occupancy(tree, figure1::pi1(), 40000) +
                                     support::truncated_occupancy(tree, figure1::pi2(), 40000));
        CHECK(linf(d, series) <= 1e-9);
        const double terminal = d.tail(3).sum();
        for (int s = 3; s < 6; ++s) CHECK(std::abs(d[s] - terminal / 3.0) <= 2e-3);
    }
}

TEST_CASE("policy from occupancy") {
    SUBCASE("ratio definition") {
        Matrix d(2, 2);
        d << 0.2, 0.6, 0.1, 0.1;
        const StationaryPolicy pi = policy_from_occupancy(StateActionOccupancy(d));
        CHECK(pi(0, 0) == doctest::Approx(0.25));
        CHECK(pi(0, 1) == doctest::Approx(0.75));
    }
    SUBCASE("zero rows become uniform") {
        Matrix d(2, 3);
        d << 0.5, 0.25, 0.25, 0, 0, 0;
        const StationaryPolicy pi = policy_from_occupancy(StateActionOccupancy(d));
        for (int a = 0; a < 3; ++a) CHECK(pi(1, a) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("round trip on full-support occupancies") {
        std::mt19937_64 rng(4);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const TabularMDP mdp = support::random_mdp(seed, 5, 3, 0.9);
            const auto pi = support::random_policy(rng, 5, 3);
            const StateActionOccupancy sa = discounted_occupancy_sa(mdp, pi);
            REQUIRE(sa.state_marginal().minCoeff() > 0.0);
            const StationaryPolicy back = policy_from_occupancy(sa);
            REQUIRE((back.probs() - pi.probs()).cwiseAbs().maxCoeff() <= 1e-9);
            REQUIRE(linf(discounted_occupancy(mdp, back).probs(), sa.state_marginal()) <= 1e-9);
        }
    }
}

TEST_CASE("flow constraints") {
    SUBCASE("exact occupancies satisfy them") {
        std::mt19937_64 rng(6);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const TabularMDP mdp = support::random_mdp(seed, 6, 3, 0.95, seed % 2 == 1);
            const FlowCheck check =
                check_flow_constraints(discounted_occupancy_sa(mdp, support::random_policy(rng, 6, 3)), mdp, 1e-9);
            REQUIRE(check.feasible);
        }
    }
    SUBCASE("uniform is infeasible for two self-loops") {
        const TabularMDP mdp({Matrix::Identity(2, 2)}, 0.9, Vector::Unit(2, 0));
        const FlowCheck check = check_flow_constraints(StateActionOccupancy(Matrix::Constant(2, 1, 0.5)), mdp, 1e-6);
        CHECK(check.residual[1] == doctest::Approx(0.05).epsilon(1e-12));
        CHECK_FALSE(check.feasible);
    }
    SUBCASE("single state") {
        Matrix d(1, 2);
        d << 0.4, 0.6;
        const FlowCheck check = check_flow_constraints(StateActionOccupancy(d), single_state(2), 1e-12);
        CHECK(check.residual.cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(check.feasible);
    }
}

TEST_CASE("policy value") {
    std::mt19937_64 rng(2);
    const TabularMDP mdp = support::random_mdp(12, 5, 2, 0.9);
    const auto a = support::random_policy(rng, 5, 2), b = support::random_policy(rng, 5, 2);
    CHECK(policy_value(mdp, a, Vector::Ones(5)) == doctest::Approx(1.0).epsilon(1e-12));

    const TabularMDP go_stay = support::go_stay_mdp(0.9);
    const Vector r = vec({0, 1});
    CHECK(policy_value(go_stay, support::deterministic({1, 0}, 2), r) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(policy_value(go_stay, support::deterministic({0, 0}, 2), r) == doctest::Approx(0.0));

    const Vector reward = support::random_distribution(rng, 5);
    const double mixed = policy_value(mdp, MixturePolicy({a, b}, {0.25, 0.75}), reward);
    CHECK(mixed == doctest::Approx(0.25 * policy_value(mdp, a, reward) + 0.75 * policy_value(mdp, b, reward)));
    CHECK(policy_value(mdp, a, reward) == doctest::Approx(support::bellman_value(mdp, a, reward)).epsilon(1e-12));
}

TEST_CASE("mixture update closed form") {
    const double eta = 0.1;
    const int t_max = 30;
    MixturePolicy mix(StationaryPolicy::uniform(2, 2));
    for (int t = 0; t < t_max; ++t) mix = mix.mixed_in(StationaryPolicy::uniform(2, 2), eta);
    REQUIRE(mix.size() == static_cast<std::size_t>(t_max + 1));
    CHECK(mix.weights()[0] == doctest::Approx(std::pow(1 - eta, t_max)).epsilon(1e-12));
    for (int i = 1; i <= t_max; ++i) {
        CHECK(mix.weights()[static_cast<std::size_t>(i)] ==
              doctest::Approx(eta * std::pow(1 - eta, t_max - i)).epsilon(1e-12));
    }
    double total = 0;
    for (double w : mix.weights()) total += w;
    CHECK(std::abs(total - 1.0) <= 1e-12);
}
