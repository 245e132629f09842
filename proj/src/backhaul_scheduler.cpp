#include "edgeho/backhaul_scheduler.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "edgeho/delay_analysis.hpp"

namespace edgeho {

namespace {
constexpr double kCompletionEps = 1e-9;  // seconds
}

RateSchedule build_schedule(const Instance& instance, const BackhaulLink& link, double l) {
    if (l < 0.0 || l > static_cast<double>(instance.c_max()))
        throw std::invalid_argument("build_schedule: prefill length outside [0, C_max]");
    const double rate = normalized_rate(link);
    const double d_star = min_transfer_delay(instance, link, l);
    const std::size_t n = instance.size();

    RateSchedule sched;
    sched.completion.resize(n);
    sched.deadlines.resize(n);

    std::vector<double> remaining(n);
    for (std::size_t i = 0; i < n; ++i) {
        remaining[i] = token_split(instance[i], l).n_transfer;
        sched.deadlines[i] = instance[i].tau + d_star;
        sched.completion[i] = instance[i].tau;  // zero-demand completion
    }

    std::size_t next_arrival = 0;
    std::vector<std::size_t> active;  // indices with tau <= t and remaining demand
    double t = 0.0;

    auto admit_until = [&](double time) {
        while (next_arrival < n && instance[next_arrival].tau <= time) {
            if (remaining[next_arrival] > 0.0) active.push_back(next_arrival);
            ++next_arrival;
        }
    };

    auto emit = [&](double t0, double t1, int ue_id) {
        if (!sched.segments.empty() && sched.segments.back().ue_id == ue_id &&
            sched.segments.back().t_end == t0) {
            sched.segments.back().t_end = t1;
        } else {
            sched.segments.push_back(RateSegment{t0, t1, ue_id, rate});
        }
    };

    while (true) {
        if (active.empty()) {
            // Idle until the next UE with demand arrives.
            bool found = false;
            while (next_arrival < n) {
                const double tau = instance[next_arrival].tau;
                if (remaining[next_arrival] > 0.0) {
                    t = std::max(t, tau);
                    admit_until(t);
                    found = true;
                    break;
                }
                ++next_arrival;
            }
            if (!found) break;
        }

        // Earliest deadline among the active set, ties to the smaller id.
        std::size_t serve = active.front();
        for (std::size_t idx : active) {
            if (sched.deadlines[idx] < sched.deadlines[serve] ||
                (sched.deadlines[idx] == sched.deadlines[serve] &&
                 instance[idx].id < instance[serve].id))
                serve = idx;
        }

        const double t_finish = t + remaining[serve] / rate;
        const double t_arr = next_arrival < n ? instance[next_arrival].tau
                                              : std::numeric_limits<double>::infinity();
        if (t_finish <= t_arr) {
            if (t_finish > t) emit(t, t_finish, instance[serve].id);
            sched.completion[serve] = t_finish;
            remaining[serve] = 0.0;
            active.erase(std::find(active.begin(), active.end(), serve));
            t = t_finish;
            admit_until(t);
        } else {
            emit(t, t_arr, instance[serve].id);
            remaining[serve] -= rate * (t_arr - t);
            t = t_arr;
            if (remaining[serve] <= rate * kCompletionEps) {
                sched.completion[serve] = t;
                remaining[serve] = 0.0;
                active.erase(std::find(active.begin(), active.end(), serve));
            }
            admit_until(t);
        }
    }
    return sched;
}

ScheduleReport verify_schedule(const RateSchedule& schedule, const Instance& instance,
                               const BackhaulLink& link, double l) {
    ScheduleReport report;
    auto flag = [&](const std::string& msg) {
        report.ok = false;
        report.violations.push_back(msg);
    };

    const double rate = normalized_rate(link);
    const double d_star = min_transfer_delay(instance, link, l);
    const std::size_t n = instance.size();

    std::vector<double> delivered(n, 0.0);
    std::vector<double> last_delivery(n, 0.0);
    double prev_end = -std::numeric_limits<double>::infinity();
    for (const auto& seg : schedule.segments) {
        if (!(seg.t_start < seg.t_end)) flag("segment with non-positive duration");
        if (seg.t_start < prev_end - 1e-12) flag("overlapping segments (aggregate rate above R)");
        prev_end = std::max(prev_end, seg.t_end);
        if (seg.rate > rate * (1.0 + 1e-12)) flag("segment rate exceeds link capacity");

        std::size_t idx = n;
        for (std::size_t i = 0; i < n; ++i)
            if (instance[i].id == seg.ue_id) idx = i;
        if (idx == n) {
            flag("segment for unknown UE id");
            continue;
        }
        if (seg.t_start < instance[idx].tau - 1e-12) flag("segment starts before the UE's trigger time");
        delivered[idx] += seg.rate * (seg.t_end - seg.t_start);
        last_delivery[idx] = std::max(last_delivery[idx], seg.t_end);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double demand = token_split(instance[i], l).n_transfer;
        if (std::abs(delivered[i] - demand) > 1e-9 * std::max(1.0, demand) + 1e-9)
            flag("UE " + std::to_string(instance[i].id) + ": delivered amount differs from demand");
        const double completion = demand > 0.0 ? last_delivery[i] : instance[i].tau;
        if (completion > instance[i].tau + d_star + kCompletionEps)
            flag("UE " + std::to_string(instance[i].id) + ": deadline missed");
    }
    return report;
}

void write_schedule_csv(std::ostream& os, const RateSchedule& schedule) {
    os << "t_start,t_end,ue_id,rate_tokens_per_s\n";
    char buf[128];
    for (const auto& seg : schedule.segments) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%d,%.9g\n", seg.t_start, seg.t_end, seg.ue_id,
                      seg.rate);
        os << buf;
    }
}

}  // namespace edgeho
