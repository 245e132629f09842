#pragma once

#include <cstdint>
#include <ostream>
#include <utility>

#include "edgeho/core_model.hpp"
#include "edgeho/delay_analysis.hpp"
#include "edgeho/rng.hpp"

namespace edgeho {

struct OracleConfig {
    double dt = 1e-4;    // time step for the discrete backhaul simulator [s]
    double l_grid = 1.0; // grid spacing for the L search [tokens]
};

// Discrete-time earliest-arrival simulation of the backhaul; no closed forms.
// Returns the worst-user transfer delay.
double oracle_transfer_delay(const Instance& instance, const BackhaulLink& link, double l,
                             const OracleConfig& cfg = {});

// Grid search over L; returns (argmin L, min V) with first-minimum tie-breaking.
std::pair<double, double> oracle_optimal_L(const Instance& instance, const BackhaulLink& link,
                                           const PrefillProfile& profile, const OracleConfig& cfg = {},
                                           const DelayOptions& opts = {});

// Exhaustive slotted schedule search for micro instances (K <= 3, integer
// trigger times and token demands, one token per slot). Returns the minimum
// achievable worst-user HO delay at the given L over all slot assignments,
// including idling. Used to confirm that no schedule beats the closed form.
double exhaustive_min_worst_delay(const Instance& instance, const BackhaulLink& link,
                                  const PrefillProfile& profile, double l,
                                  const DelayOptions& opts = {});

// Random instance helper shared by the verification paths and the test suites.
Instance random_instance(Rng& rng, int k, double tau_spread, std::int64_t c_lo, std::int64_t c_hi);

struct VerifyReport {
    bool ok = true;
    int instances = 0;
    double worst_transfer_gap = 0.0;   // |closed form - discrete oracle|
    double worst_schedule_slack = 0.0; // completion overshoot past the deadline
    double worst_grid_gap = 0.0;       // V(L*) above the grid minimum plus Lipschitz slack
    int violations = 0;
};

// Cross-checks the closed forms, the constructed schedules, and the optimizer
// against the oracles on random instances. Prints one line per check.
VerifyReport run_verification(std::ostream& os, int instances_per_class, std::uint64_t seed,
                              const OracleConfig& cfg = {});

}  // namespace edgeho
