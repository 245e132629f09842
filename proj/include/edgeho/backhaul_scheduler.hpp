#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "edgeho/core_model.hpp"

namespace edgeho {

// One contiguous stretch of backhaul time dedicated to a single UE at full rate.
struct RateSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    int ue_id = 0;
    double rate = 0.0;  // tokens/s, either 0 or R under the constructed policy
};

struct RateSchedule {
    std::vector<RateSegment> segments;
    std::vector<double> completion;  // per UE, instance order; tau_i for zero-demand UEs
    std::vector<double> deadlines;   // tau_i + D*_tx(L)
};

// Earliest-deadline, one-UE-at-a-time construction that attains the minimum
// feasible worst-user transfer delay. Deterministic; ties go to the smaller id.
RateSchedule build_schedule(const Instance& instance, const BackhaulLink& link, double l);

struct ScheduleReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks capacity, causality, delivered amounts, and deadlines of a schedule.
ScheduleReport verify_schedule(const RateSchedule& schedule, const Instance& instance,
                               const BackhaulLink& link, double l);

void write_schedule_csv(std::ostream& os, const RateSchedule& schedule);

}  // namespace edgeho
