#include "edgeho/oracle.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "edgeho/backhaul_scheduler.hpp"

namespace edgeho {

double oracle_transfer_delay(const Instance& instance, const BackhaulLink& link, double l,
                             const OracleConfig& cfg) {
    if (cfg.dt <= 0.0) throw std::invalid_argument("oracle_transfer_delay: dt must be positive");
    const double rate = normalized_rate(link);
    const std::size_t n = instance.size();

    std::vector<double> remaining(n);
    std::vector<double> completion(n);
    std::size_t pending = 0;
    for (std::size_t i = 0; i < n; ++i) {
        remaining[i] = token_split(instance[i], l).n_transfer;
        completion[i] = instance[i].tau;
        if (remaining[i] > 0.0) ++pending;
    }
    if (pending == 0) return 0.0;

    // Arrivals take effect at the first grid point at or after tau_i; UEs are
    // served in arrival order (equivalent to earliest static deadline first).
    std::size_t admitted = 0;
    double t = cfg.dt * std::ceil(instance.tau_first() / cfg.dt);
    while (pending > 0) {
        while (admitted < n && instance[admitted].tau <= t + 1e-15) ++admitted;
        double budget = cfg.dt;
        double offset = 0.0;
        while (budget > 0.0) {
            std::size_t serve = n;
            for (std::size_t i = 0; i < admitted; ++i)
                if (remaining[i] > 0.0) {
                    serve = i;
                    break;
                }
            if (serve == n) break;
            const double need = remaining[serve] / rate;
            const double slice = std::min(budget, need);
            remaining[serve] -= slice * rate;
            offset += slice;
            budget -= slice;
            if (remaining[serve] <= 1e-12) {
                remaining[serve] = 0.0;
                completion[serve] = t + offset;
                --pending;
            }
        }
        t += cfg.dt;
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, completion[i] - instance[i].tau);
    return worst;
}

std::pair<double, double> oracle_optimal_L(const Instance& instance, const BackhaulLink& link,
                                           const PrefillProfile& profile, const OracleConfig& cfg,
                                           const DelayOptions& opts) {
    if (cfg.l_grid <= 0.0) throw std::invalid_argument("oracle_optimal_L: l_grid must be positive");
    const double c_max = static_cast<double>(instance.c_max());
    double best_l = 0.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (double l = 0.0;; l += cfg.l_grid) {
        const double clamped = std::min(l, c_max);
        const double v = value_function(instance, link, profile, clamped, opts).v;
        if (v < best_v) {
            best_v = v;
            best_l = clamped;
        }
        if (l >= c_max) break;
    }
    return {best_l, best_v};
}

namespace {

// State-space DP over slotted schedules: each slot serves one active UE or
// idles, one token per slot; completions land mid-slot exactly.
class SlottedSearch {
public:
    SlottedSearch(const Instance& instance, double rate, double l, int horizon_slots)
        : instance_(instance), rate_(rate), horizon_(horizon_slots) {
        for (std::size_t i = 0; i < instance.size(); ++i) {
            const double d = token_split(instance[i], l).n_transfer;
            const auto tokens = static_cast<int>(std::llround(d));
            if (std::abs(d - tokens) > 1e-9 || tokens > 63)
                throw std::invalid_argument("SlottedSearch: demands must be whole tokens below 64");
            demand_.push_back(tokens);
        }
    }

    double min_worst_transfer_delay() { return solve(0, demand_); }

private:
    double solve(int slot, std::vector<int> rem) {
        bool done = true;
        for (int r : rem)
            if (r > 0) done = false;
        if (done) return 0.0;
        if (slot >= horizon_) return std::numeric_limits<double>::infinity();

        std::int64_t key = slot;
        for (int r : rem) key = key * 64 + r;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        const double t0 = static_cast<double>(slot) / rate_;  // slot length = 1/R
        double best = solve(slot + 1, rem);                   // idle
        for (std::size_t i = 0; i < rem.size(); ++i) {
            if (rem[i] <= 0 || instance_[i].tau > t0 + 1e-12) continue;
            std::vector<int> next = rem;
            next[i] -= 1;
            if (next[i] == 0) {
                const double completion = t0 + 1.0 / rate_;
                const double delay = completion - instance_[i].tau;
                best = std::min(best, std::max(delay, solve(slot + 1, next)));
            } else {
                best = std::min(best, solve(slot + 1, next));
            }
        }
        memo_[key] = best;
        return best;
    }

    const Instance& instance_;
    double rate_;
    int horizon_;
    std::vector<int> demand_;
    std::map<std::int64_t, double> memo_;
};

}  // namespace

double exhaustive_min_worst_delay(const Instance& instance, const BackhaulLink& link,
                                  const PrefillProfile& profile, double l,
                                  const DelayOptions& opts) {
    if (instance.size() > 3)
        throw std::invalid_argument("exhaustive_min_worst_delay: limited to K <= 3");
    const double rate = normalized_rate(link);

    double total_demand = 0.0;
    for (const auto& ue : instance.ues()) total_demand += token_split(ue, l).n_transfer;
    const int horizon =
        static_cast<int>(std::ceil(instance.tau_last() * rate + total_demand)) + 2;

    SlottedSearch search(instance, rate, l, horizon);
    const double transfer = search.min_worst_transfer_delay();
    return std::max(worst_prefill_delay(instance, profile, l, opts), transfer);
}

Instance random_instance(Rng& rng, int k, double tau_spread, std::int64_t c_lo, std::int64_t c_hi) {
    std::vector<UEContext> ues;
    ues.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        ues.push_back(UEContext{i, rng.uniform(0.0, tau_spread), rng.uniform_int(c_lo, c_hi)});
    return Instance(std::move(ues));
}

VerifyReport run_verification(std::ostream& os, int instances_per_class, std::uint64_t seed,
                              const OracleConfig& cfg) {
    VerifyReport report;
    Rng rng(seed);
    const int ks[] = {1, 2, 4, 8};

    for (int k : ks) {
        for (int trial = 0; trial < instances_per_class; ++trial) {
            Instance inst = random_instance(rng, k, rng.uniform(0.0, 2.0), 0, 2048);
            const double sum_c = [&] {
                double s = 0.0;
                for (const auto& ue : inst.ues()) s += static_cast<double>(ue.c_tokens);
                return s;
            }();
            // Keep the simulated horizon around a second or two.
            const double rate = std::max(rng.uniform(0.5, 2.0) * sum_c, 100.0);
            const BackhaulLink link{rate, 1.0};
            const double l = rng.uniform(0.0, static_cast<double>(inst.c_max()));
            ++report.instances;

            const double closed = min_transfer_delay(inst, link, l);
            const double simulated = oracle_transfer_delay(inst, link, l, cfg);
            report.worst_transfer_gap = std::max(report.worst_transfer_gap, std::abs(closed - simulated));
            if (std::abs(closed - simulated) > 2.0 * cfg.dt) ++report.violations;
            if (simulated < closed - 2.0 * cfg.dt) ++report.violations;  // lower-bound direction

            const auto sched = build_schedule(inst, link, l);
            for (std::size_t i = 0; i < inst.size(); ++i) {
                const double slack = sched.completion[i] - sched.deadlines[i];
                report.worst_schedule_slack = std::max(report.worst_schedule_slack, slack);
                if (slack > 1e-9) ++report.violations;
            }
            if (!verify_schedule(sched, inst, link, l).ok) ++report.violations;

            PrefillProfile prof{rng.uniform(0.0, 2e-4), rng.uniform(0.0, 5e-3), 0.01};
            const auto plan = optimal_prefill_length(inst, link, prof);
            const auto [grid_l, grid_v] = oracle_optimal_L(inst, link, prof, cfg);
            (void)grid_l;
            const double lipschitz = (prof.a + 1.0 / normalized_rate(link)) * cfg.l_grid;
            const double gap = plan.breakdown.v - (grid_v + lipschitz);
            report.worst_grid_gap = std::max(report.worst_grid_gap, gap);
            if (gap > 1e-9) ++report.violations;
        }
        os << "K=" << k << ": " << instances_per_class << " instances checked\n";
    }

    report.ok = report.violations == 0;
    os << (report.ok ? "PASS" : "FAIL") << " transfer-delay gap (worst " << report.worst_transfer_gap
       << " s, bound " << 2.0 * cfg.dt << " s)\n";
    os << (report.ok ? "PASS" : "FAIL") << " schedule deadlines (worst slack "
       << report.worst_schedule_slack << " s)\n";
    os << (report.ok ? "PASS" : "FAIL") << " optimizer vs grid (worst gap " << report.worst_grid_gap
       << " s)\n";
    return report;
}

}  // namespace edgeho
