#pragma once

#include "maxent/mdp.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace maxent {

enum class FunctionalKind { SmoothedEntropy, KLToTarget, CrossEntropyToTarget };

std::string_view to_string(FunctionalKind kind);
FunctionalKind functional_kind_from_string(std::string_view name);

struct SmoothnessBundle {
    double beta;  ///< sup-norm Lipschitz constant of the gradient
    double bound; ///< sup-norm bound on the gradient over the simplex
};

/**
 * Concave functional of a state distribution, always in maximization form.
 *
 * - SmoothedEntropy:       -sum d log(d + sigma)
 * - KLToTarget:            -sum d log((d + sigma) / Q)
 * - CrossEntropyToTarget:   sum Q log(d + sigma)
 *
 * The two target-based kinds are the negated minimization objectives, with the
 * same additive smoothing inside every logarithm of d.
 */
class RewardFunctional {
public:
    static RewardFunctional smoothed_entropy(double sigma);
    static RewardFunctional kl_to_target(double sigma, StateDistribution target);
    static RewardFunctional cross_entropy_to_target(double sigma, StateDistribution target);

    FunctionalKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    const std::optional<StateDistribution>& target() const { return target_; }

    double value(const Vector& d) const;
    double value(const StateDistribution& d) const { return value(d.probs()); }
    Vector gradient(const Vector& d) const;
    Vector gradient(const StateDistribution& d) const { return gradient(d.probs()); }
    SmoothnessBundle smoothness(int n_states) const;

    /// The un-negated textbook metric: H_sigma, KL(d || Q) or cross-entropy E_Q[-log(d + sigma)].
    double conventional_value(const Vector& d) const;

private:
    RewardFunctional(FunctionalKind kind, double sigma, std::optional<StateDistribution> target);
    void check_size(const Vector& d) const;

    FunctionalKind kind_;
    double sigma_;
    std::optional<StateDistribution> target_;
};

/// Shannon entropy in nats; zero entries contribute nothing.
double raw_entropy(const Vector& d);
inline double raw_entropy(const StateDistribution& d) { return raw_entropy(d.probs()); }

} // namespace maxent
