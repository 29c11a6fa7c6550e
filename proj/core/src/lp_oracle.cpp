#include "shuttercert/lp_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <optional>

#include "shuttercert/simplex.hpp"

namespace shuttercert {

namespace {

constexpr double kTol = 1e-10;

struct Column {
    double obs_alpha;  // P(click | x=0)
    double obs_beta;   // P(click | x=1)
    double guess;      // objective coefficient
};

std::array<Column, 4> strategy_columns(double p) {
    const double g = std::max(p, 1.0 - p);
    return {{{0.0, 0.0, 1.0},          // never click
             {1.0, 1.0, 1.0},          // always click
             {p, 0.0, g},              // honest
             {1.0 - p, 1.0, g}}};      // dishonest
}

// Solves the 3xk system [obs_alpha; obs_beta; 1] * lambda = [alpha; beta; 1]
// restricted to a column subset. Returns the weights when the system is
// consistent with a unique nonnegative solution.
std::optional<std::vector<double>> solve_subset(const std::vector<Column>& cols,
                                                const std::vector<std::size_t>& subset,
                                                double alpha, double beta) {
    const std::size_t k = subset.size();
    double m[3][4];
    for (std::size_t j = 0; j < k; ++j) {
        m[0][j] = cols[subset[j]].obs_alpha;
        m[1][j] = cols[subset[j]].obs_beta;
        m[2][j] = 1.0;
    }
    m[0][k] = alpha;
    m[1][k] = beta;
    m[2][k] = 1.0;

    // Gaussian elimination with partial pivoting on the 3x(k+1) system.
    std::size_t pivot_rows[3];
    std::size_t rank = 0;
    bool row_used[3] = {false, false, false};
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t best = 3;
        double best_abs = 1e-12;
        for (std::size_t r = 0; r < 3; ++r) {
            if (!row_used[r] && std::abs(m[r][col]) > best_abs) {
                best = r;
                best_abs = std::abs(m[r][col]);
            }
        }
        if (best == 3) return std::nullopt;  // dependent columns; a smaller subset covers this
        row_used[best] = true;
        pivot_rows[rank++] = best;
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == best) continue;
            const double f = m[r][col] / m[best][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j <= k; ++j) m[r][j] -= f * m[best][j];
        }
    }
    // Consistency of the unpivoted rows.
    for (std::size_t r = 0; r < 3; ++r) {
        if (!row_used[r] && std::abs(m[r][k]) > 1e-9) return std::nullopt;
    }
    std::vector<double> lambda(k);
    for (std::size_t col = 0; col < k; ++col) {
        const std::size_t r = pivot_rows[col];
        lambda[col] = m[r][k] / m[r][col];
        if (lambda[col] < -kTol) return std::nullopt;
    }
    return lambda;
}

StrategyMix mix_from(const std::vector<std::size_t>& subset, const std::vector<double>& lambda,
                     bool include_not_h) {
    double v[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < subset.size(); ++j) v[subset[j]] = std::max(0.0, lambda[j]);
    if (!include_not_h) v[3] = 0.0;
    const double total = v[0] + v[1] + v[2] + v[3];
    return StrategyMix(v[0] / total, v[1] / total, v[2] / total, v[3] / total);
}

}  // namespace

SimpleLpResult solve_simple_lp(double p, double alpha, double beta, bool include_not_h) {
    check_probability(p, "p");
    check_probability(alpha, "alpha");
    check_probability(beta, "beta");

    const auto all = strategy_columns(p);
    std::vector<Column> cols(all.begin(), all.begin() + (include_not_h ? 4 : 3));

    // Vertices of {lambda : A lambda = b, lambda >= 0} have support of at
    // most rank(A) = 3 independent columns; enumerate them all.
    std::optional<SimpleLpResult> best;
    std::vector<std::size_t> subset;
    const std::size_t n = cols.size();
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) > 3) continue;
        subset.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (1u << j)) subset.push_back(j);
        }
        auto lambda = solve_subset(cols, subset, alpha, beta);
        if (!lambda) continue;
        double value = 0.0;
        for (std::size_t j = 0; j < subset.size(); ++j) {
            value += cols[subset[j]].guess * (*lambda)[j];
        }
        if (!best || value > best->g_star) {
            best = SimpleLpResult{value, mix_from(subset, *lambda, include_not_h)};
        }
    }
    if (!best) throw LpInfeasible("no strategy mixture reproduces the stats");
    return *best;
}

MixedLpResult solve_mixed_lp(const MixedSource& source, double alpha, double beta,
                             bool include_not_h) {
    check_probability(alpha, "alpha");
    check_probability(beta, "beta");
    const auto& comps = source.components();
    const std::size_t k = comps.size();
    if (k > 64) throw ScaleExceeded("mixed LP oracle limited to 64 components");

    const std::size_t per = include_not_h ? 4 : 3;
    DenseLp lp;
    lp.rows = 2 + k;
    lp.cols = per * k;
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);
    lp.c.assign(lp.cols, 0.0);

    for (std::size_t i = 0; i < k; ++i) {
        const auto sc = strategy_columns(comps[i].p);
        for (std::size_t j = 0; j < per; ++j) {
            const std::size_t col = per * i + j;
            lp.at(0, col) = comps[i].gamma * sc[j].obs_alpha;
            lp.at(1, col) = comps[i].gamma * sc[j].obs_beta;
            lp.at(2 + i, col) = 1.0;
            lp.c[col] = comps[i].gamma * sc[j].guess;
        }
    }
    lp.b[0] = alpha;
    lp.b[1] = beta;
    for (std::size_t i = 0; i < k; ++i) lp.b[2 + i] = 1.0;

    const LpSolution sol = simplex_maximize(lp);
    if (sol.status != LpStatus::Optimal) {
        throw LpInfeasible("no per-component strategy mixture reproduces the stats");
    }

    MixedLpResult result;
    result.g_star = sol.value;
    result.witness.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        double v[4] = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t j = 0; j < per; ++j) v[j] = std::max(0.0, sol.x[per * i + j]);
        const double total = v[0] + v[1] + v[2] + v[3];
        result.witness.emplace_back(v[0] / total, v[1] / total, v[2] / total, v[3] / total);
    }
    return result;
}

namespace {

// Necessary-condition prune: no strategy assignment stretches alpha - beta
// past the aggregate signal probability. Anything subtler is left to the
// simplex so the oracle stays independent of the certifier's feasibility
// logic.
bool stats_fit(double p_bar, double alpha, double beta) {
    const OrientedStats s = normalize_orientation(alpha, beta);
    return s.alpha - s.beta <= p_bar + 1e-12;
}

std::optional<double> score_mixture(const std::vector<MixedComponent>& comps, double alpha,
                                    double beta) {
    std::vector<MixedComponent> kept;
    double p_bar = 0.0;
    for (const auto& c : comps) {
        if (c.gamma > 1e-15) {
            kept.push_back(c);
            p_bar += c.gamma * c.p;
        }
    }
    if (kept.empty()) return std::nullopt;
    double total = 0.0;
    for (auto& c : kept) total += c.gamma;
    for (auto& c : kept) c.gamma /= total;
    if (!stats_fit(p_bar / total, alpha, beta)) return std::nullopt;
    try {
        return solve_mixed_lp(MixedSource(kept), alpha, beta, /*include_not_h=*/true).g_star;
    } catch (const LpInfeasible&) {
        return std::nullopt;
    }
}

}  // namespace

double solve_mean_constraint_bruteforce(double mu, double pi, double alpha, double beta,
                                        int support_max, double grid) {
    if (support_max < 1 || support_max > 16) {
        throw ScaleExceeded("mean-constraint brute force limited to support_max <= 16");
    }
    if (!(grid > 0.0)) throw std::invalid_argument("grid must be > 0");
    check_probability(pi, "pi");

    std::vector<double> p(support_max + 1);
    for (int i = 0; i <= support_max; ++i) {
        p[i] = 1.0 - std::pow(pi, static_cast<double>(i));
    }

    std::optional<double> best;
    const auto consider = [&](double v) {
        if (!best || v > *best) best = v;
    };

    // Singletons: the mean constraint pins them to mu itself.
    for (int a = 0; a <= support_max; ++a) {
        if (std::abs(static_cast<double>(a) - mu) < 1e-9) {
            if (auto v = score_mixture({{1.0, p[a]}}, alpha, beta)) consider(*v);
        }
    }

    // Pairs: both weights are fixed by the two equality constraints.
    for (int a = 0; a <= support_max; ++a) {
        for (int b = a + 1; b <= support_max; ++b) {
            const double gb = (mu - a) / static_cast<double>(b - a);
            if (gb < -1e-12 || gb > 1.0 + 1e-12) continue;
            const double w = std::clamp(gb, 0.0, 1.0);
            if (auto v = score_mixture({{1.0 - w, p[a]}, {w, p[b]}}, alpha, beta)) consider(*v);
        }
    }

    // Triples: one free weight t on the lowest support point; the others
    // solve the equalities exactly. Grid the feasible t-interval, then
    // refine around the best coarse point.
    struct TripleBest {
        int a, b, c;
        double t, value, step;
    };
    std::vector<TripleBest> leaders;

    const auto weights_at = [&](int a, int b, int c, double t, double& gb, double& gc) {
        gc = (mu - a * t - b * (1.0 - t)) / static_cast<double>(c - b);
        gb = 1.0 - t - gc;
    };

    for (int a = 0; a <= support_max; ++a) {
        for (int b = a + 1; b <= support_max; ++b) {
            for (int c = b + 1; c <= support_max; ++c) {
                // gamma_c(t) is affine increasing in t, gamma_b(t) affine;
                // intersect the four weight bounds with t in [0,1].
                double lo = 0.0, hi = 1.0;
                const double gc0 = (mu - b) / static_cast<double>(c - b);
                const double slope_c = static_cast<double>(b - a) / static_cast<double>(c - b);
                // 0 <= gc(t) <= 1
                lo = std::max(lo, (0.0 - gc0) / slope_c);
                hi = std::min(hi, (1.0 - gc0) / slope_c);
                // gb(t) = 1 - t - gc(t), decreasing with slope -(1 + slope_c)
                const double gb0 = 1.0 - gc0;
                const double slope_b = -(1.0 + slope_c);
                hi = std::min(hi, (0.0 - gb0) / slope_b);
                lo = std::max(lo, (1.0 - gb0) / slope_b);
                if (hi < lo - 1e-12) continue;
                hi = std::max(hi, lo);

                const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / grid)));
                std::optional<TripleBest> local;
                for (int s = 0; s <= steps; ++s) {
                    const double t = lo + (hi - lo) * s / steps;
                    double gb, gc;
                    weights_at(a, b, c, t, gb, gc);
                    auto v = score_mixture({{t, p[a]}, {gb, p[b]}, {gc, p[c]}}, alpha, beta);
                    if (v && (!local || *v > local->value)) {
                        local = TripleBest{a, b, c, t, *v, (hi - lo) / steps};
                    }
                }
                if (local) {
                    consider(local->value);
                    leaders.push_back(*local);
                }
            }
        }
    }

    // Local refinement of the most promising triples.
    std::sort(leaders.begin(), leaders.end(),
              [](const TripleBest& x, const TripleBest& y) { return x.value > y.value; });
    if (leaders.size() > 5) leaders.resize(5);
    for (auto lead : leaders) {
        for (int round = 0; round < 3; ++round) {
            const double lo = std::max(0.0, lead.t - lead.step);
            const double hi = std::min(1.0, lead.t + lead.step);
            const int steps = 20;
            for (int s = 0; s <= steps; ++s) {
                const double t = lo + (hi - lo) * s / steps;
                double gb, gc;
                weights_at(lead.a, lead.b, lead.c, t, gb, gc);
                if (gb < -1e-12 || gb > 1.0 + 1e-12 || gc < -1e-12 || gc > 1.0 + 1e-12) continue;
                auto v = score_mixture({{t, p[lead.a]}, {std::max(0.0, gb), p[lead.b]},
                                        {std::max(0.0, gc), p[lead.c]}},
                                       alpha, beta);
                if (v && *v > lead.value) {
                    lead.value = *v;
                    lead.t = t;
                }
            }
            lead.step = (hi - lo) / steps;
            consider(lead.value);
        }
    }

    if (!best) throw LpInfeasible("no gridded mixture reproduces the stats");
    return *best;
}

double bruteforce_response_functions(int n, double pi, double alpha, double beta) {
    if (n < 0 || n > 12) throw ScaleExceeded("response-function brute force limited to n <= 12");
    check_probability(pi, "pi");
    check_probability(alpha, "alpha");
    check_probability(beta, "beta");

    // P(T = i): i of the n photons pass the beam splitter.
    std::vector<double> pt(n + 1);
    for (int i = 0; i <= n; ++i) {
        double binom = 1.0;
        for (int j = 0; j < i; ++j) binom = binom * (n - j) / (j + 1);
        pt[i] = binom * std::pow(1.0 - pi, i) * std::pow(pi, n - i);
    }

    // One column per click-subset C of {0..n}: observable (p_C, [0 in C]),
    // guessing probability max(p_C, 1 - p_C).
    const std::size_t count = std::size_t{1} << (n + 1);
    DenseLp lp;
    lp.rows = 3;
    lp.cols = count;
    lp.a.assign(lp.rows * lp.cols, 0.0);
    lp.b = {alpha, beta, 1.0};
    lp.c.assign(lp.cols, 0.0);
    for (std::size_t c = 0; c < count; ++c) {
        double pc = 0.0;
        for (int i = 0; i <= n; ++i) {
            if (c & (std::size_t{1} << i)) pc += pt[i];
        }
        lp.at(0, c) = pc;
        lp.at(1, c) = (c & 1u) ? 1.0 : 0.0;
        lp.at(2, c) = 1.0;
        lp.c[c] = std::max(pc, 1.0 - pc);
    }

    const LpSolution sol = simplex_maximize(lp);
    if (sol.status != LpStatus::Optimal) {
        throw LpInfeasible("no response-function mixture reproduces the stats");
    }
    return sol.value;
}

}  // namespace shuttercert
