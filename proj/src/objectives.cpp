#include "maxent/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxent {

std::string_view to_string(FunctionalKind kind) {
    switch (kind) {
    case FunctionalKind::SmoothedEntropy: return "smoothed_entropy";
    case FunctionalKind::KLToTarget: return "kl_to_target";
    case FunctionalKind::CrossEntropyToTarget: return "cross_entropy_to_target";
    }
    return "unknown";
}

FunctionalKind functional_kind_from_string(std::string_view name) {
    if (name == "smoothed_entropy") return FunctionalKind::SmoothedEntropy;
    if (name == "kl_to_target") return FunctionalKind::KLToTarget;
    if (name == "cross_entropy_to_target") return FunctionalKind::CrossEntropyToTarget;
    throw std::invalid_argument("unknown functional kind '" + std::string(name) + "'");
}

RewardFunctional::RewardFunctional(FunctionalKind kind, double sigma, std::optional<StateDistribution> target)
    : kind_(kind), sigma_(sigma), target_(std::move(target)) {
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
        throw std::invalid_argument("sigma must be positive, got " + std::to_string(sigma_));
    }
    if (kind_ != FunctionalKind::SmoothedEntropy && !target_) {
        throw std::invalid_argument(std::string(to_string(kind_)) + " requires a target distribution");
    }
    if (kind_ == FunctionalKind::KLToTarget && (target_->probs().array() <= 0.0).any()) {
        throw std::invalid_argument("kl_to_target requires a strictly positive target");
    }
}

RewardFunctional RewardFunctional::smoothed_entropy(double sigma) {
    return RewardFunctional(FunctionalKind::SmoothedEntropy, sigma, std::nullopt);
}

RewardFunctional RewardFunctional::kl_to_target(double sigma, StateDistribution target) {
    return RewardFunctional(FunctionalKind::KLToTarget, sigma, std::move(target));
}

RewardFunctional RewardFunctional::cross_entropy_to_target(double sigma, StateDistribution target) {
    return RewardFunctional(FunctionalKind::CrossEntropyToTarget, sigma, std::move(target));
}

void RewardFunctional::check_size(const Vector& d) const {
    if (target_ && target_->size() != d.size()) {
        throw std::invalid_argument("distribution has " + std::to_string(d.size()) + " states but the target has " +
                                    std::to_string(target_->size()));
    }
}

double RewardFunctional::value(const Vector& d) const {
    check_size(d);
    const auto smoothed = (d.array() + sigma_);
    switch (kind_) {
    case FunctionalKind::SmoothedEntropy: return -(d.array() * smoothed.log()).sum();
    case FunctionalKind::KLToTarget: return -(d.array() * (smoothed / target_->probs().array()).log()).sum();
    case FunctionalKind::CrossEntropyToTarget: return (target_->probs().array() * smoothed.log()).sum();
    }
    return 0.0;
}

Vector RewardFunctional::gradient(const Vector& d) const {
    check_size(d);
    const auto smoothed = (d.array() + sigma_);
    switch (kind_) {
    case FunctionalKind::SmoothedEntropy: return -(smoothed.log() + d.array() / smoothed).matrix();
    case FunctionalKind::KLToTarget:
        return -((smoothed / target_->probs().array()).log() + d.array() / smoothed).matrix();
    case FunctionalKind::CrossEntropyToTarget: return (target_->probs().array() / smoothed).matrix();
    }
    return Vector();
}

SmoothnessBundle RewardFunctional::smoothness(int n_states) const {
    if (n_states < 1) throw std::invalid_argument("n_states must be positive");
    // |log(x + sigma) + x / (x + sigma)| on [0, 1] is largest at an endpoint.
    const double entropy_bound = std::max(std::log(1.0 / sigma_), std::log1p(sigma_)) + 1.0;
    switch (kind_) {
    case FunctionalKind::SmoothedEntropy: return {2.0 / sigma_, entropy_bound};
    case FunctionalKind::KLToTarget: {
        const double min_q = target_->probs().minCoeff();
        return {2.0 / sigma_, entropy_bound + std::log(1.0 / min_q)};
    }
    case FunctionalKind::CrossEntropyToTarget: {
        const double max_q = target_->probs().maxCoeff();
        return {max_q / (sigma_ * sigma_), max_q / sigma_};
    }
    }
    return {0.0, 0.0};
}

double RewardFunctional::conventional_value(const Vector& d) const {
    return kind_ == FunctionalKind::SmoothedEntropy ? value(d) : -value(d);
}

double raw_entropy(const Vector& d) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) h -= d[i] * std::log(d[i]);
    }
    return h;
}

} // namespace maxent
