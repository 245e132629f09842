#pragma once

#include <string>
#include <vector>

#include "edgeho/core_model.hpp"

namespace edgeho {

enum class Strategy { ctHO, tHO, cHO, fixedL };

std::string strategy_name(Strategy s);

// Worst-user prefill delay, minimum worst-user transfer delay, and their max.
struct DelayBreakdown {
    double d_prefill = 0.0;
    double d_transfer = 0.0;
    double v = 0.0;
};

struct HOPlan {
    Strategy strategy = Strategy::ctHO;
    double l_star = 0.0;
    DelayBreakdown breakdown;
    std::vector<TokenSplit> splits;    // aligned with Instance order
    double t_start_prefill = 0.0;      // batch start t_s
    bool interior = false;             // true when l_star came from an interior equalizer
};

struct DelayOptions {
    // With L = 0 no batch is scheduled, so the batch-start wait and the constant
    // prefill term are not charged unless this flag is set.
    bool charge_prefill_overhead_at_zero = false;
};

// First cycle boundary at or after the latest trigger time.
double prefill_start_time(const Instance& instance, const PrefillProfile& profile);

// t_s + p(L) - tau_1 for L > 0; see DelayOptions for the L = 0 convention.
double worst_prefill_delay(const Instance& instance, const PrefillProfile& profile, double l,
                           const DelayOptions& opts = {});

// S_k(L): tokens still owed to the first k UEs (k is 1-based).
double cumulative_remaining(const Instance& instance, double l, std::size_t k);

// Minimum feasible worst-user cache transfer delay for a fixed L:
// max_k [S_k(L)/R - (tau_k - tau_1)]^+.
double min_transfer_delay(const Instance& instance, const BackhaulLink& link, double l);

DelayBreakdown value_function(const Instance& instance, const BackhaulLink& link,
                              const PrefillProfile& profile, double l,
                              const DelayOptions& opts = {});

// Minimizes V(L) on [0, C_max]: exact piecewise-linear intersection of the
// prefill and transfer delay curves, falling back to the better boundary.
// Ties are broken toward the smallest L.
HOPlan optimal_prefill_length(const Instance& instance, const BackhaulLink& link,
                              const PrefillProfile& profile, const DelayOptions& opts = {});

HOPlan plan_for_strategy(Strategy strategy, const Instance& instance, const BackhaulLink& link,
                         const PrefillProfile& profile, const DelayOptions& opts = {},
                         double fixed_l = 0.0);

}  // namespace edgeho
