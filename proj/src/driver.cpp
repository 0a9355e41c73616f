#include "maxent/driver.hpp"

#include "maxent/planning.hpp"

#include <chrono>
#include <cmath>

namespace maxent {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

int support_size(const Vector& d) { return static_cast<int>((d.array() > 1e-12).count()); }

/// ceil() that ignores rounding noise just above an integer.
std::int64_t robust_ceil(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9 * std::abs(x))); }

IterationRecord make_record(int t, const RewardFunctional& functional, const Vector& density) {
    IterationRecord rec;
    rec.iteration = t;
    rec.objective = functional.value(density);
    rec.raw_entropy = raw_entropy(density);
    rec.support_size = support_size(density);
    return rec;
}

/// Component occupancies combined with the mixture weights.
class OccupancyCache {
public:
    explicit OccupancyCache(const TabularMDP& mdp) : mdp_(&mdp) {}

    const Vector& add(const StationaryPolicy& policy) {
        occupancies_.push_back(discounted_occupancy(*mdp_, policy).probs());
        return occupancies_.back();
    }

    Vector combine(const std::vector<double>& weights) const {
        Vector d = Vector::Zero(mdp_->n_states());
        for (std::size_t i = 0; i < weights.size(); ++i) d += weights[i] * occupancies_[i];
        return d;
    }

private:
    const TabularMDP* mdp_;
    std::vector<Vector> occupancies_;
};

void check_shapes(const RewardFunctional& functional, int n_states) {
    if (functional.target() && functional.target()->size() != n_states) {
        throw std::invalid_argument("functional target has " + std::to_string(functional.target()->size()) +
                                    " states, environment has " + std::to_string(n_states));
    }
}

} // namespace

std::string_view to_string(OracleMode mode) { return mode == OracleMode::Exact ? "exact" : "sampled"; }

OracleMode oracle_mode_from_string(std::string_view name) {
    if (name == "exact") return OracleMode::Exact;
    if (name == "sampled") return OracleMode::Sampled;
    throw std::invalid_argument("unknown oracle mode '" + std::string(name) + "'");
}

void DriverConfig::validate() const {
    auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!open_unit(eta)) throw std::invalid_argument("eta must lie in (0, 1)");
    if (!open_unit(eps0)) throw std::invalid_argument("eps0 must lie in (0, 1)");
    if (!open_unit(eps1)) throw std::invalid_argument("eps1 must lie in (0, 1)");
    if (!open_unit(delta)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
}

DriverResult run(const TabularMDP& mdp, const RewardFunctional& functional, const DriverConfig& config,
                 const DriverHooks& hooks) {
    config.validate();
    check_shapes(functional, mdp.n_states());
    const auto started = Clock::now();

    MixturePolicy mixture(StationaryPolicy::uniform(mdp.n_states(), mdp.n_actions()));
    OccupancyCache cache(mdp);
    cache.add(mixture.component(0));

    IterationTrace trace;
    trace.reserve(static_cast<std::size_t>(config.iterations));
    for (int t = 0; t < config.iterations; ++t) {
        try {
            const Vector density = cache.combine(mixture.weights());
            IterationRecord rec = make_record(t, functional, density);
            rec.linf_density_error = 0.0;

            const Vector reward = functional.gradient(density);
            PlanResult plan = value_iteration_plan(mdp, reward, config.eps1);
            if (hooks.on_iteration) hooks.on_iteration({t, density, reward, plan.policy});

            cache.add(plan.policy);
            mixture = mixture.mixed_in(std::move(plan.policy), config.eta);
            rec.wall_ms = elapsed_ms(started);
            trace.push_back(rec);
        } catch (const OracleFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw OracleFailure(t, e.what());
        }
    }
    StateDistribution final_density(cache.combine(mixture.weights()));
    const double final_objective = functional.value(final_density);
    const double final_entropy = raw_entropy(final_density);
    return DriverResult{std::move(mixture), std::move(trace), std::move(final_density), final_objective,
                        final_entropy};
}

DriverResult run(EpisodicSimulator& sim, TransitionCounts& counts, const RewardFunctional& functional,
                 const DriverConfig& config, const DriverHooks& hooks) {
    config.validate();
    check_shapes(functional, sim.n_states());
    const auto started = Clock::now();

    const double bound = functional.smoothness(sim.n_states()).bound;
    DensityParams density_params{config.eps0, config.delta, config.density_m, config.density_t0};
    SamplePlanParams plan_params;
    plan_params.eps = config.eps1;
    plan_params.delta = config.delta;
    plan_params.bonus = bound;
    plan_params.m = config.plan_m;
    plan_params.n = config.plan_n;
    plan_params.t0 = config.plan_t0;

    MixturePolicy mixture(StationaryPolicy::uniform(sim.n_states(), sim.n_actions()));
    std::optional<OccupancyCache> reference;
    if (hooks.reference) {
        reference.emplace(*hooks.reference);
        reference->add(mixture.component(0));
    }

    IterationTrace trace;
    trace.reserve(static_cast<std::size_t>(config.iterations));
    for (int t = 0; t < config.iterations; ++t) {
        try {
            const Vector density = estimate_density(sim, mixture, density_params).probs();
            IterationRecord rec = make_record(t, functional, density);
            if (reference) {
                rec.linf_density_error = (density - reference->combine(mixture.weights())).lpNorm<Eigen::Infinity>();
            }

            const Vector reward = functional.gradient(density);
            SamplePlanResult plan = sample_plan(sim, counts, reward, plan_params);
            if (hooks.on_iteration) hooks.on_iteration({t, density, reward, plan.policy});

            if (reference) reference->add(plan.policy);
            mixture = mixture.mixed_in(std::move(plan.policy), config.eta);
            rec.wall_ms = elapsed_ms(started);
            trace.push_back(rec);
        } catch (const OracleFailure&) {
            throw;
        } catch (const std::exception& e) {
            throw OracleFailure(t, e.what());
        }
    }
    StateDistribution final_density = estimate_density(sim, mixture, density_params);
    const double final_objective = functional.value(final_density);
    const double final_entropy = raw_entropy(final_density);
    return DriverResult{std::move(mixture), std::move(trace), std::move(final_density), final_objective,
                        final_entropy};
}

SmoothSchedule schedule_smooth(double eps, double beta, double bound) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (!(beta > 0.0) || !(bound > 0.0)) throw std::invalid_argument("beta and B must be positive");
    SmoothSchedule s{};
    s.eps1 = 0.1 * eps;
    s.eps0 = 0.1 * eps / beta;
    s.eta = 0.1 * eps / beta;
    s.iterations = robust_ceil(10.0 * beta / eps * std::log(10.0 * bound / eps));
    return s;
}

EntropySchedule schedule_entropy(double eps, int n_states) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (n_states < 2) throw std::invalid_argument("entropy schedule needs at least two states");
    const double n = n_states;
    EntropySchedule s{};
    s.sigma = 0.1 * eps / (2.0 * n);
    s.eps1 = 0.1 * eps;
    s.eps0 = 0.1 * eps * eps / (80.0 * n);
    s.eta = 0.1 * eps * eps / (40.0 * n);
    s.iterations = robust_ceil(40.0 * n / (0.1 * eps * eps) * std::log(std::log(n) / (0.1 * eps)));
    return s;
}

} // namespace maxent
