#include "edgeho/delay_analysis.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace edgeho {

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::ctHO: return "ctHO";
        case Strategy::tHO: return "tHO";
        case Strategy::cHO: return "cHO";
        case Strategy::fixedL: return "fixedL";
    }
    return "?";
}

double prefill_start_time(const Instance& instance, const PrefillProfile& profile) {
    profile.validate();
    const double q = instance.tau_last() / profile.t_cycle;
    double n = std::ceil(q);
    // Snap trigger times that sit on a cycle boundary up to fp noise.
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) n = r;
    return n * profile.t_cycle;
}

static void check_l_range(const Instance& instance, double l) {
    if (l < 0.0 || l > static_cast<double>(instance.c_max()))
        throw std::invalid_argument("prefill length outside [0, C_max]");
}

double worst_prefill_delay(const Instance& instance, const PrefillProfile& profile, double l,
                           const DelayOptions& opts) {
    check_l_range(instance, l);
    if (l == 0.0 && !opts.charge_prefill_overhead_at_zero) return 0.0;
    return prefill_start_time(instance, profile) + profile.delay(l) - instance.tau_first();
}

double cumulative_remaining(const Instance& instance, double l, std::size_t k) {
    if (k < 1 || k > instance.size()) throw std::invalid_argument("cumulative_remaining: k out of range");
    if (l < 0.0) throw std::invalid_argument("cumulative_remaining: negative L");
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        sum += std::max(static_cast<double>(instance[i].c_tokens) - l, 0.0);
    return sum;
}

// Busy-period bound over every arrival window [tau_j, tau_k]: the demand
// released inside the window cannot leave faster than R. Anchoring only at
// tau_1 is loose whenever the link goes idle between arrivals, so all pairs
// are checked; the earliest-deadline schedule attains this value exactly.
double min_transfer_delay(const Instance& instance, const BackhaulLink& link, double l) {
    check_l_range(instance, l);
    const double rate = normalized_rate(link);
    double worst = 0.0;
    for (std::size_t j = 0; j < instance.size(); ++j) {
        double sum = 0.0;
        for (std::size_t k = j; k < instance.size(); ++k) {
            sum += std::max(static_cast<double>(instance[k].c_tokens) - l, 0.0);
            worst = std::max(worst, sum / rate - (instance[k].tau - instance[j].tau));
        }
    }
    return std::max(worst, 0.0);
}

DelayBreakdown value_function(const Instance& instance, const BackhaulLink& link,
                              const PrefillProfile& profile, double l, const DelayOptions& opts) {
    DelayBreakdown out;
    out.d_prefill = worst_prefill_delay(instance, profile, l, opts);
    out.d_transfer = min_transfer_delay(instance, link, l);
    out.v = std::max(out.d_prefill, out.d_transfer);
    return out;
}

namespace {

HOPlan make_plan(Strategy strategy, const Instance& instance, const BackhaulLink& link,
                 const PrefillProfile& profile, double l, const DelayOptions& opts,
                 bool interior = false) {
    HOPlan plan;
    plan.strategy = strategy;
    plan.l_star = l;
    plan.breakdown = value_function(instance, link, profile, l, opts);
    plan.t_start_prefill = prefill_start_time(instance, profile);
    plan.interior = interior;
    plan.splits.reserve(instance.size());
    for (const auto& ue : instance.ues()) plan.splits.push_back(token_split(ue, l));
    return plan;
}

// Finds the smallest L in [lo, hi] with f(L) = g(L), given f affine increasing,
// g convex piecewise-linear non-increasing and affine between the cut points
// computed here, and a sign change of f - g across [lo, hi].
std::optional<double> solve_segment(const Instance& instance, const BackhaulLink& link, double f_slope,
                                    double f_icept, double lo, double hi) {
    const double rate = normalized_rate(link);

    // Affine pieces of each window term of g on (lo, hi): slope * L + icept,
    // one per arrival window [tau_j, tau_k].
    std::vector<double> slope, icept;
    for (std::size_t j = 0; j < instance.size(); ++j) {
        double s_lo = 0.0;
        int m = 0;
        for (std::size_t k = j; k < instance.size(); ++k) {
            const double c = static_cast<double>(instance[k].c_tokens);
            s_lo += std::max(c - lo, 0.0);
            if (c >= hi) ++m;  // token breakpoints guarantee no C_i inside (lo, hi)
            slope.push_back(-static_cast<double>(m) / rate);
            icept.push_back(s_lo / rate + static_cast<double>(m) * lo / rate -
                            (instance[k].tau - instance[j].tau));
        }
    }

    // Cut the segment wherever the active piece of g can change.
    std::vector<double> cuts{lo, hi};
    auto push_cut = [&](double x) {
        if (x > lo && x < hi) cuts.push_back(x);
    };
    for (std::size_t k = 0; k < slope.size(); ++k) {
        if (slope[k] != 0.0) push_cut(-icept[k] / slope[k]);  // clamp-to-zero kink
        for (std::size_t j = k + 1; j < slope.size(); ++j) {
            const double ds = slope[k] - slope[j];
            if (ds != 0.0) push_cut((icept[j] - icept[k]) / ds);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto g_at = [&](double l) { return min_transfer_delay(instance, link, l); };
    auto f_at = [&](double l) { return f_slope * l + f_icept; };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u = cuts[i];
        const double v = cuts[i + 1];
        const double gu = g_at(u);
        const double gv = g_at(v);
        const double hu = f_at(u) - gu;
        const double hv = f_at(v) - gv;
        const double tol = 1e-12 * std::max({1.0, std::abs(gu), std::abs(f_at(u))});
        if (hu > tol) return std::nullopt;   // f already above g; monotone => no later crossing
        if (hv < -tol) continue;
        const double g_slope = (gv - gu) / (v - u);
        const double denom = f_slope - g_slope;
        if (std::abs(denom) < 1e-300) return u;  // coincident pieces: smallest L wins
        double l = (gu - g_slope * u - f_icept) / denom;
        return std::clamp(l, u, v);
    }
    return std::nullopt;
}

std::optional<double> find_equalizer(const Instance& instance, const BackhaulLink& link,
                                     const PrefillProfile& profile, double t_start) {
    const double c_max = static_cast<double>(instance.c_max());
    const double f_slope = profile.a;
    const double f_icept = t_start + profile.b - instance.tau_first();

    std::vector<double> bps{0.0, c_max};
    for (const auto& ue : instance.ues()) {
        const double c = static_cast<double>(ue.c_tokens);
        if (c > 0.0 && c < c_max) bps.push_back(c);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    auto h_at = [&](double l) {
        return f_slope * l + f_icept - min_transfer_delay(instance, link, l);
    };

    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double lo = bps[i];
        const double hi = bps[i + 1];
        const double hlo = h_at(lo);
        const double hhi = h_at(hi);
        if (hlo > 0.0) break;  // h is non-decreasing; no equalizer anywhere
        if (hhi < 0.0) continue;
        if (auto l = solve_segment(instance, link, f_slope, f_icept, lo, hi)) return l;
    }
    return std::nullopt;
}

}  // namespace

HOPlan optimal_prefill_length(const Instance& instance, const BackhaulLink& link,
                              const PrefillProfile& profile, const DelayOptions& opts) {
    profile.validate();
    const double c_max = static_cast<double>(instance.c_max());
    if (c_max == 0.0) {
        HOPlan plan;
        plan.strategy = Strategy::ctHO;
        plan.l_star = 0.0;
        plan.t_start_prefill = prefill_start_time(instance, profile);
        plan.splits.assign(instance.size(), TokenSplit{});
        return plan;
    }

    const double t_start = prefill_start_time(instance, profile);
    const auto l_eq = find_equalizer(instance, link, profile, t_start);

    std::vector<double> candidates;
    if (l_eq) candidates.push_back(*l_eq);
    candidates.push_back(0.0);
    candidates.push_back(c_max);

    double best_l = 0.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (double l : candidates) {
        const double v = value_function(instance, link, profile, l, opts).v;
        if (v < best_v || (v == best_v && l < best_l)) {
            best_v = v;
            best_l = l;
        }
    }
    const bool interior = l_eq && best_l == *l_eq && best_l > 0.0 && best_l < c_max;
    HOPlan plan = make_plan(Strategy::ctHO, instance, link, profile, best_l, opts, interior);
    return plan;
}

HOPlan plan_for_strategy(Strategy strategy, const Instance& instance, const BackhaulLink& link,
                         const PrefillProfile& profile, const DelayOptions& opts, double fixed_l) {
    switch (strategy) {
        case Strategy::ctHO:
            return optimal_prefill_length(instance, link, profile, opts);
        case Strategy::tHO:
            return make_plan(strategy, instance, link, profile, static_cast<double>(instance.c_max()), opts);
        case Strategy::cHO:
            return make_plan(strategy, instance, link, profile, 0.0, opts);
        case Strategy::fixedL:
            check_l_range(instance, fixed_l);
            return make_plan(strategy, instance, link, profile, fixed_l, opts);
    }
    throw std::invalid_argument("plan_for_strategy: unknown strategy");
}

}  // namespace edgeho
