#include "shuttercert/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shuttercert/rational.hpp"

namespace shuttercert {

std::string to_string(Assumption a) {
    switch (a) {
        case Assumption::Simple: return "simple";
        case Assumption::KnownDistribution: return "known";
        case Assumption::MeanConstraint: return "mean";
    }
    return "?";
}

void check_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
    }
}

SimpleSource::SimpleSource(double p_) : p(p_) {
    check_probability(p, "p");
}

MixedSource::MixedSource(std::vector<MixedComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw EmptySupport("mixed source has no components");
    double total = 0.0;
    for (const auto& c : components_) {
        if (c.gamma < 0.0) throw std::invalid_argument("component weight must be >= 0");
        check_probability(c.p, "component p");
        total += c.gamma;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw std::invalid_argument("component weights must sum to 1");
    }
    if (total <= 0.0) throw EmptySupport("mixed source has zero total weight");
    std::stable_sort(components_.begin(), components_.end(),
                     [](const MixedComponent& a, const MixedComponent& b) { return a.p < b.p; });
    positive_begin_ = components_.size();
    for (std::size_t i = 0; i < components_.size(); ++i) {
        mean_p_ += components_[i].gamma * components_[i].p;
        if (components_[i].p > 0.5 && positive_begin_ == components_.size()) {
            positive_begin_ = i;
        }
    }
}

MeanConstrainedSource::MeanConstrainedSource(double mu_, double pi_) : mu(mu_), pi(pi_) {
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("pi must lie in (0,1)");
}

StrategyMix::StrategyMix(double n, double y, double h, double nh)
    : never(n), always(y), honest(h), dishonest(nh) {
    for (double v : {never, always, honest, dishonest}) {
        if (v < -kSumTolerance) throw std::invalid_argument("strategy weight must be >= 0");
    }
    if (std::abs(sum() - 1.0) > kSumTolerance) {
        throw std::invalid_argument("strategy weights must sum to 1");
    }
}

CertificationResult make_result(Assumption assumption, double g_star, bool feasible,
                                bool degenerate) {
    CertificationResult r;
    r.assumption = assumption;
    r.g_star = std::min(1.0, std::max(0.0, g_star));
    r.per_bit_entropy = r.g_star > 0.0 ? std::max(0.0, -std::log2(r.g_star)) : 0.0;
    r.feasible = feasible;
    r.degenerate = degenerate;
    return r;
}

void ProtocolConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(test_rate >= 0.0 && test_rate <= 1.0)) {
        throw std::invalid_argument("test_rate must lie in [0,1]");
    }
    check_probability(shutter_split, "shutter_split");
}

OrientedStats normalize_orientation(double alpha, double beta) {
    check_probability(alpha, "alpha");
    check_probability(beta, "beta");
    if (alpha >= beta) return {alpha, beta, false};
    return {1.0 - alpha, 1.0 - beta, true};
}

bool feasible(double alpha, double beta, double p) {
    check_probability(p, "p");
    const OrientedStats s = normalize_orientation(alpha, beta);
    return 0.0 <= s.beta && s.beta <= s.alpha && s.alpha <= p + s.beta * (1.0 - p);
}

double max_alpha_given_beta(const MixedSource& source, double beta) {
    check_probability(beta, "beta");
    double bound = source.mean_signal_probability();
    double remaining = beta;
    for (const auto& c : source.components()) {  // ascending p
        const double take = std::min(c.gamma, remaining);
        bound += take * (1.0 - c.p);
        remaining -= take;
        if (remaining <= 0.0) break;
    }
    return std::min(1.0, bound);
}

bool feasible(const MixedSource& source, double alpha, double beta) {
    const OrientedStats s = normalize_orientation(alpha, beta);
    return s.beta <= s.alpha && s.alpha <= max_alpha_given_beta(source, s.beta);
}

bool feasible_exact(const Rat& alpha, const Rat& beta, const Rat& p) {
    const Rat zero(0), one(1);
    if (alpha < zero || one < alpha || beta < zero || one < beta || p < zero || one < p) {
        throw std::invalid_argument("feasible_exact expects probabilities");
    }
    // CCW quadrilateral (0,0), (p,0), (1,1), (1-p,1); membership holds when
    // every edge cross product is nonnegative.
    const Rat vx[4] = {zero, p, one, one - p};
    const Rat vy[4] = {zero, zero, one, one};
    for (int i = 0; i < 4; ++i) {
        const int j = (i + 1) % 4;
        const Rat ex = vx[j] - vx[i];
        const Rat ey = vy[j] - vy[i];
        const Rat cross = ex * (beta - vy[i]) - ey * (alpha - vx[i]);
        if (cross.sign() < 0) return false;
    }
    return true;
}

}  // namespace shuttercert
