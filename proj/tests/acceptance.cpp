// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "maxent/commands.hpp"
#include "maxent/config.hpp"
#include "maxent/driver.hpp"
#include "maxent/envs.hpp"
#include "maxent/model_io.hpp"
#include "maxent/objectives.hpp"
#include "maxent/oracle_search.hpp"
#include "maxent/planning.hpp"
#include "maxent/sample_oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

using namespace maxent;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool ok;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Verdict()> body;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

EnvSpec random_spec(std::uint64_t seed, int n, int k, double gamma) {
    EnvSpec spec;
    spec.kind = EnvKind::Random;
    spec.n_states = n;
    spec.n_actions = k;
    spec.seed = seed;
    spec.gamma = gamma;
    return spec;
}

Verdict figure1_fidelity() {
    const TabularMDP mdp = build(EnvSpec{});
    Vector e0(6), e12(6);
    e0 << 0, 0, 0, 3.0 / 8, 1.0 / 4, 3.0 / 8;
    e12 << 0, 0, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3;
    const Vector d0 = t_step_distribution(mdp, figure1::pi0(), 2).probs();
    const Vector d1 = t_step_distribution(mdp, figure1::pi1(), 2).probs();
    const Vector d2 = t_step_distribution(mdp, figure1::pi2(), 2).probs();
    const double err = std::max({(d0 - e0).lpNorm<Eigen::Infinity>(), (d1 - e12).lpNorm<Eigen::Infinity>(),
                                 (d2 - e12).lpNorm<Eigen::Infinity>()});
    const double h0 = support::entropy(d0);
    const double h_avg = 0.5 * (support::entropy(d1) + support::entropy(d2));
    return {err <= 1e-12 && h0 < h_avg,
            fmt("max error %.2e, H(mix)=%.4f < mean H=%.4f, gap %.4f nats", err, h0, h_avg, h_avg - h0)};
}

Verdict planner_optimality() {
    std::mt19937_64 rng(2);
    double worst = 0.0;
    int checked = 0;
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const int k = 1 + static_cast<int>(seed % 3);
        const double gamma = seed % 2 ? 0.95 : 0.8;
        const TabularMDP mdp = support::random_mdp(1000 + seed, n, k, gamma, seed % 4 == 0);
        Vector r(n);
        for (int s = 0; s < n; ++s) r[s] = std::uniform_real_distribution<double>(-1, 1)(rng);
        const PlanResult plan = value_iteration_plan(mdp, r, 1e-4);
        const double best = support::best_deterministic_value(mdp, r);
        const double achieved = support::bellman_value(mdp, plan.policy, r);
        worst = std::max(worst, best - achieved);
        ok = ok && achieved >= best - 1e-4 && std::abs(achieved - plan.value) <= 1e-10;
        ++checked;
    }
    return {ok, fmt("%d models, worst shortfall %.2e", checked, worst)};
}

Verdict occupancy_correctness() {
    std::mt19937_64 rng(3);
    double worst_excess = -INFINITY, worst_residual = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const int k = 1 + static_cast<int>(seed % 3);
        const double gamma = 0.5 + 0.045 * static_cast<double>(seed % 10);
        const TabularMDP mdp = support::random_mdp(2000 + seed, n, k, gamma, seed % 3 == 0);
        const auto pi = support::random_policy(rng, n, k);
        const Vector d = discounted_occupancy(mdp, pi).probs();
        const double err = (d - support::truncated_occupancy(mdp, pi, 200)).lpNorm<Eigen::Infinity>();
        const double bound = std::pow(gamma, 201);
        worst_excess = std::max(worst_excess, err - bound);
        // flow residual computed from the definition
        const Matrix sa = discounted_occupancy_sa(mdp, pi).probs();
        Vector residual = sa.rowwise().sum() - (1 - gamma) * mdp.d0();
        for (int a = 0; a < k; ++a) residual -= gamma * mdp.action_matrix(a) * sa.col(a);
        worst_residual = std::max(worst_residual, residual.lpNorm<Eigen::Infinity>());
        ok = ok && err <= bound + 1e-15 && residual.lpNorm<Eigen::Infinity>() <= 1e-9 &&
             check_flow_constraints(StateActionOccupancy(sa), mdp, 1e-9).feasible;
    }
    return {ok, fmt("50 pairs, max(err - gamma^201) %.2e, max flow residual %.2e", worst_excess, worst_residual)};
}

Verdict gradient_suite() {
    std::mt19937_64 rng(4);
    const double sigmas[] = {1e-3, 1e-2, 0.1, 0.5};
    double worst_fd = 0.0, worst_concavity = 0.0, worst_smoothing = -INFINITY, worst_lipschitz = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 8;
        const double sigma = sigmas[trial % 4];
        const Vector d = support::random_distribution(rng, n, trial % 2 == 0);
        const Vector e = support::random_distribution(rng, n, trial % 3 == 0);
        const Vector q = support::random_distribution(rng, n);
        const RewardFunctional functionals[] = {RewardFunctional::smoothed_entropy(sigma),
                                                RewardFunctional::kl_to_target(sigma, StateDistribution(q)),
                                                RewardFunctional::cross_entropy_to_target(sigma, StateDistribution(q))};
        for (const auto& f : functionals) {
            const Vector g = f.gradient(d);
            const double h = 1e-7 * std::min(1.0, 100 * sigma);
            for (int i = 0; i < n; ++i) {
                Vector up = d, down = d;
                up[i] += h;
                down[i] -= h;
                const double fd = (f.value(up) - f.value(down)) / (2 * h);
                const double rel = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
                worst_fd = std::max(worst_fd, rel);
                ok = ok && rel <= 1e-4;
            }
            for (int j = 1; j <= 9; ++j) {
                const double lambda = 0.1 * j;
                const double shortfall =
                    lambda * f.value(d) + (1 - lambda) * f.value(e) - f.value(lambda * d + (1 - lambda) * e);
                worst_concavity = std::max(worst_concavity, shortfall);
                ok = ok && shortfall <= 1e-10;
            }
            const double beta = f.kind() == FunctionalKind::SmoothedEntropy ? 2.0 / sigma : f.smoothness(n).beta;
            const double moved = (g - f.gradient(e)).lpNorm<Eigen::Infinity>();
            const double allowed = beta * (d - e).lpNorm<Eigen::Infinity>();
            // the two draws can coincide, then the gradients must too
            if (allowed > 0.0) worst_lipschitz = std::max(worst_lipschitz, moved / allowed);
            ok = ok && moved <= allowed * (1 + 1e-12);
        }
        const double smoothing = std::abs(functionals[0].value(d) - support::entropy(d)) - n * sigma;
        worst_smoothing = std::max(worst_smoothing, smoothing);
        ok = ok && smoothing <= 0.0;
    }
    return {ok, fmt("fd rel err %.1e, concavity shortfall %.1e, max(|H_s-H|-|S|s) %.1e, lipschitz ratio %.3f",
                    worst_fd, worst_concavity, worst_smoothing, worst_lipschitz)};
}

struct OptimalityRun {
    std::string name;
    double grid_best;
    std::vector<double> values; ///< objective before each update, then the final objective
    double beta;
};

std::vector<OptimalityRun>& optimality_runs() {
    static std::vector<OptimalityRun> runs;
    return runs;
}

Verdict frank_wolfe_vs_brute_force() {
    auto& runs = optimality_runs();
    runs.clear();
    std::vector<std::pair<std::string, TabularMDP>> instances;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        instances.emplace_back("random-" + std::to_string(seed), build(random_spec(seed, 3, 2, 0.9)));
    }
    instances.emplace_back("figure1", build(EnvSpec{}));
    const auto h = RewardFunctional::smoothed_entropy(1e-3);
    DriverConfig config;
    config.eta = 0.05;
    config.iterations = 300;
    config.eps1 = 1e-9;
    double worst = -INFINITY;
    bool ok = true;
    for (const auto& [name, mdp] : instances) {
        const DriverResult res = run(mdp, h, config);
        const GridSearchResult grid = grid_search_oracle(mdp, h, 0.02);
        OptimalityRun r{name, grid.best_value, {}, h.smoothness(mdp.n_states()).beta};
        for (const auto& rec : res.trace) r.values.push_back(rec.objective);
        r.values.push_back(res.final_objective);
        worst = std::max(worst, grid.best_value - res.final_objective);
        ok = ok && res.final_objective >= grid.best_value - 0.05;
        runs.push_back(std::move(r));
    }
    return {ok, fmt("11 instances, worst (grid optimum - final) %.4f nats", worst)};
}

Verdict geometric_gap_decay() {
    const auto& runs = optimality_runs();
    if (runs.size() != 11) return {false, "optimality runs missing"};
    const double eta = 0.05;
    double worst = -INFINITY, tightest = -INFINITY;
    long checks = 0;
    for (const auto& r : runs) {
        double r_star = r.grid_best;
        for (double v : r.values) r_star = std::max(r_star, v);
        for (std::size_t t = 0; t + 1 < r.values.size(); ++t) {
            const double lhs = r_star - r.values[t + 1];
            const double rhs = (1 - eta) * (r_star - r.values[t]) + eta * eta * r.beta + 1e-9;
            worst = std::max(worst, lhs - rhs);
            tightest = std::max(tightest, lhs - (1 - eta) * (r_star - r.values[t]));
            ++checks;
        }
    }
    return {worst <= 0.0, fmt("%ld steps, max(G_t+1 - bound) %.3e, max(G_t+1 - (1-eta) G_t) %.3e", checks, worst,
                              tightest)};
}

Verdict density_estimator() {
    const TabularMDP swap = support::swap_mdp(0.5);
    Vector exact(2);
    exact << 2.0 / 3.0, 1.0 / 3.0;
    DensityParams params;
    params.eps0 = 0.05;
    params.delta = 0.1;
    int good = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EpisodicSimulator sim = make_simulator(swap, seed);
        const double err = (estimate_density(sim, StationaryPolicy::uniform(2, 1), params).probs() - exact)
                               .lpNorm<Eigen::Infinity>();
        worst = std::max(worst, err);
        good += err <= 0.05;
    }
    const DensitySettings s = density_settings(params, 2, 0.5);
    return {good >= 43, fmt("%d/50 within 0.05 (m=%llu, t0=%d, worst %.2e)", good,
                            static_cast<unsigned long long>(s.m), s.t0, worst)};
}

Verdict sample_planning() {
    EnvSpec spec;
    spec.kind = EnvKind::Chain;
    spec.length = 5;
    spec.gamma = 0.9;
    const TabularMDP chain = build(spec);
    const Vector r = Vector::Unit(5, 4);
    const double v_star = support::best_deterministic_value(chain, r);
    int good = 0;
    bool invariants = true;
    int most_exploration = 0;
    SamplePlanParams params;
    params.eps = 0.1;
    params.delta = 0.1;
    params.bonus = 1.0;
    // the default m (about 7e8 visits per pair) is out of reach; n, t0 and eps1 keep their defaults
    params.m = 10;
    const SamplePlanSettings settings = sample_plan_settings(params, 5, 2, 0.9);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EpisodicSimulator sim = make_simulator(chain, seed);
        TransitionCounts counts(5, 2);
        const SamplePlanResult res = sample_plan(sim, counts, r, params);
        good += support::bellman_value(chain, res.policy, r) >= v_star - 0.1;
        for (std::size_t i = 1; i < res.known_history.size(); ++i) {
            for (std::size_t s = 0; s < 5; ++s) {
                if (res.known_history[i - 1][s] && !res.known_history[i][s]) invariants = false;
            }
        }
        most_exploration = std::max(most_exploration, res.exploration_iterations);
        if (static_cast<std::uint64_t>(res.exploration_iterations) > settings.m * 5 * 2) invariants = false;
    }
    return {good >= 18 && invariants,
            fmt("%d/20 within 0.1 of V*=%.4f, known sets monotone: %s, max exploration steps %d <= %llu (m=%llu, "
                "n=%d, t0=%d)",
                good, v_star, invariants ? "yes" : "no", most_exploration,
                static_cast<unsigned long long>(settings.m * 10), static_cast<unsigned long long>(settings.m),
                settings.n, settings.t0)};
}

Verdict concentration() {
    std::mt19937_64 rng(9);
    const double delta = 0.1;
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + trial % 7;
        const std::uint64_t m = 10 + static_cast<std::uint64_t>(trial % 5) * 25;
        const Vector p = support::random_distribution(rng, d, trial % 2 == 0);
        std::discrete_distribution<int> draw(p.data(), p.data() + d);
        Vector freq = Vector::Zero(d);
        for (std::uint64_t i = 0; i < m; ++i) freq[draw(rng)] += 1.0 / static_cast<double>(m);
        violations += (freq - p).lpNorm<1>() > std::sqrt(8.0 * d * std::log(2.0 * d / delta) / static_cast<double>(m));
    }
    const double allowed = delta + 2 * std::sqrt(delta * (1 - delta) / 200);

    int sandwich = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(trial % 5);
        const TabularMDP truth = support::random_mdp(3000 + trial, n, 2, 0.9, trial % 2 == 0);
        std::vector<bool> members(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) members[static_cast<std::size_t>(s)] = rng() % 2 == 0;
        Vector r(n);
        for (int s = 0; s < n; ++s) r[s] = std::uniform_real_distribution<double>(-1, 1)(rng);
        const auto pi = support::random_policy(rng, n, 2);
        const InducedModel im = induced_model(truth, KnownSet(members), r, 1.0);
        sandwich += support::bellman_value(im.model, pi, im.reward) >= support::bellman_value(truth, pi, r) - 1e-12;
    }

    int simulation = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(trial % 5);
        const double gamma = trial % 2 ? 0.9 : 0.7;
        const TabularMDP truth = support::random_mdp(4000 + trial, n, 2, gamma, trial % 3 == 0);
        TransitionCounts counts(n, 2);
        for (int s = 0; s < n; ++s) {
            for (int a = 0; a < 2; ++a) {
                const Vector col = truth.action_matrix(a).col(s);
                std::discrete_distribution<int> next(col.data(), col.data() + n);
                for (int i = 0; i < 30; ++i) counts.record(s, a, next(rng));
            }
        }
        Vector r(n);
        for (int s = 0; s < n; ++s) r[s] = std::uniform_real_distribution<double>(-1, 1)(rng);
        const KnownSet all(std::vector<bool>(static_cast<std::size_t>(n), true));
        const TabularMDP est = empirical_induced_model(counts, all, r, 1.0, gamma).model.with_d0(truth.d0());
        double l1 = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int s = 0; s < n; ++s) {
                l1 = std::max(l1, (truth.action_matrix(a).col(s) - est.action_matrix(a).col(s)).lpNorm<1>());
            }
        }
        const auto pi = support::random_policy(rng, n, 2);
        const double gap = std::abs(support::bellman_value(truth, pi, r) - support::bellman_value(est, pi, r));
        simulation += gap <= l1 / (1 - gamma) * r.lpNorm<Eigen::Infinity>() + 1e-12;
    }
    const double rate = violations / 200.0;
    return {rate <= allowed && sandwich == 50 && simulation == 50,
            fmt("L1 bound violated in %.3f <= %.3f of 200 trials, sandwich %d/50, simulation bound %d/50", rate,
                allowed, sandwich, simulation)};
}

Verdict exploration_quality() {
    EnvSpec spec;
    spec.kind = EnvKind::Gridworld;
    spec.width = 10;
    spec.height = 10;
    spec.gamma = 0.9;
    for (int y = 0; y < 10; ++y) {
        if (y != 4) spec.walls.push_back({5, y});
    }
    const TabularMDP mdp = build(spec);
    const auto h = RewardFunctional::smoothed_entropy(1e-3);
    DriverConfig config;
    config.eta = 0.05;
    config.iterations = 300;
    const DriverResult res = run(mdp, h, config);
    const double uniform = support::entropy(discounted_occupancy(mdp, StationaryPolicy::uniform(100, 4)).probs());
    const double slack = config.eta * config.eta * h.smoothness(100).beta;
    std::vector<double> entropy;
    for (const auto& rec : res.trace) entropy.push_back(rec.raw_entropy);
    entropy.push_back(res.final_raw_entropy);
    double largest_drop = 0.0;
    for (std::size_t t = 1; t < entropy.size(); ++t) largest_drop = std::max(largest_drop, entropy[t - 1] - entropy[t]);
    const double gain = res.final_raw_entropy - uniform;
    return {gain >= 0.5 && largest_drop <= slack,
            fmt("final %.4f vs uniform policy %.4f nats (gain %.4f), largest per-step drop %.2e <= %.3g",
                res.final_raw_entropy, uniform, gain, largest_drop, slack)};
}

Verdict schedules_and_determinism() {
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::abs(b); };
    const SmoothSchedule a = schedule_smooth(0.1, 2.0, 5.0);
    const SmoothSchedule b = schedule_smooth(1.0, 1.0, std::exp(1.0) / 10);
    const EntropySchedule e = schedule_entropy(0.1, 64);
    const bool formulas = same(a.eps1, 0.01) && same(a.eps0, 0.005) && same(a.eta, 0.005) && a.iterations == 1243 &&
                          b.iterations == 10 && same(e.sigma, 7.8125e-5) && same(e.eta, 3.90625e-7) &&
                          same(e.eps1, 0.01);

    const fs::path root = fs::temp_directory_path() / "maxent_acceptance_determinism";
    fs::remove_all(root);
    bool identical = true;
    const char* configs[] = {
        "env: {kind: gridworld, gamma: 0.9, width: 6, height: 5, slip: 0.1, walls: [[3, 0], [3, 1], [3, 3]]}\n"
        "functional: {kind: smoothed_entropy, sigma: 0.001}\n"
        "driver: {eta: 0.05, iterations: 100}\nseed: 7\n",
        "env: {kind: chain, gamma: 0.8, length: 5, slip: 0.1}\n"
        "functional: {kind: smoothed_entropy, sigma: 0.01}\n"
        "driver: {mode: sampled, eta: 0.1, iterations: 6, eps0: 0.1, eps1: 0.1, plan_m: 8, plan_n: 20, "
        "density_m: 500}\nseed: 7\n"};
    for (int c = 0; c < 2; ++c) {
        const RunConfig config = parse_run_config(configs[c], "determinism");
        const fs::path first = root / std::to_string(c) / "a", second = root / std::to_string(c) / "b";
        execute_run(config, first);
        execute_run(config, second);
        identical = identical && read_text_file(first / "trace.csv") == read_text_file(second / "trace.csv");
    }
    fs::remove_all(root);
    return {formulas && identical,
            fmt("T=%lld and T=%lld, sigma=%.6g, eta=%.6g; trace.csv byte-identical: %s",
                static_cast<long long>(a.iterations), static_cast<long long>(b.iterations), e.sigma, e.eta,
                identical ? "yes" : "no")};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "figure1 two-step distributions and entropy gap", 1, figure1_fidelity},
        {2, "planner matches exhaustive enumeration", 10, planner_optimality},
        {3, "occupancy vs truncated series, flow constraints", 10, occupancy_correctness},
        {4, "gradients, concavity, smoothing and smoothness bounds", 10, gradient_suite},
        {5, "Frank-Wolfe reaches the brute-force optimum", 120, frank_wolfe_vs_brute_force},
        {6, "suboptimality gap decays geometrically", 1, geometric_gap_decay},
        {7, "density estimator accuracy", 60, density_estimator},
        {8, "sample-based planner on the 5-chain", 120, sample_planning},
        {9, "concentration, optimistic sandwich, simulation bound", 60, concentration},
        {10, "gridworld exploration beats the uniform policy", 120, exploration_quality},
        {11, "schedule formulas and byte-identical traces", 60, schedules_and_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v{false, ""};
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.time_limit_s;
        const bool ok = v.ok && in_time;
        failed += !ok;
        std::printf("%s criterion %2d: %s | %s | %.2f s (limit %g s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    v.detail.c_str(), seconds, c.time_limit_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
