#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "edgeho/backhaul_scheduler.hpp"
#include "edgeho/core_model.hpp"
#include "edgeho/delay_analysis.hpp"

namespace edgeho {

// 1D line network: source BS at x=0, target BS at x=d_bs, UEs moving right.
struct MobilityConfig {
    double d_bs = 300.0;        // BS separation [m]
    double x_boundary = 150.0;  // HO trigger position [m]
    double x0_min = 120.0;      // initial position range [m]
    double x0_max = 130.0;
    double speed = 20.0;        // [m/s]

    void validate() const {
        if (!(x_boundary > 0.0 && x_boundary < d_bs))
            throw std::invalid_argument("MobilityConfig: need 0 < x_boundary < d_bs");
        if (x0_min > x0_max || x0_max > x_boundary)
            throw std::invalid_argument("MobilityConfig: x0 range must sit below the boundary");
        if (speed <= 0.0) throw std::invalid_argument("MobilityConfig: speed must be positive");
    }
};

struct RadioConfig {
    double gamma_ref = 10.0;     // linear SNR at the reference distance
    double d_ref = 20.0;         // [m]
    double pathloss_exp = 3.5;
    double bandwidth_hz = 2e6;
    double token_bits = 12.0;
    double d_min = 20.0;         // distance floor guarding the path-loss singularity
};

struct ScenarioSample {
    Instance instance;
    std::vector<double> initial_positions;  // aligned with instance order
    std::uint64_t seed = 0;
};

// Draws K UEs: C_i integer-uniform on [c_min, c_max], x_i(0) uniform on the
// configured range, trigger times from the mobility model. Deterministic per seed.
ScenarioSample sample_scenario(int k, std::int64_t c_min, std::int64_t c_max,
                               const MobilityConfig& mobility, std::uint64_t seed);

double snr_at(const RadioConfig& radio, double distance);

// Shannon-rate streaming throughput in tokens/s.
double token_rate(const RadioConfig& radio, double snr);

enum class ServingBS { source, target };

struct StreamingOptions {
    bool freeze_snr_at_handover = false;  // hold the SNR seen at stream start
    double dt = 1e-3;                     // integration step [s]
    double max_horizon_s = 3600.0;
};

// Smallest delta with integral of the streaming rate over [t0, t0+delta]
// covering g_tokens, for a UE that started at x0 and keeps moving.
double streaming_delay(const RadioConfig& radio, const MobilityConfig& mobility, double x0,
                       ServingBS serving, double g_tokens, double t0,
                       const StreamingOptions& opts = {});

// Per-UE total: HO completion wait plus post-HO streaming from the target BS.
// With serving == source this is the no-HO baseline (plan/schedule unused):
// streaming from the source BS starting at tau_i.
double total_streaming_delay(const HOPlan& plan, const RateSchedule& schedule,
                             const RadioConfig& radio, const MobilityConfig& mobility,
                             const Instance& instance, const std::vector<double>& initial_positions,
                             std::size_t ue_index, double g_tokens, ServingBS serving,
                             const StreamingOptions& opts = {});

void write_scenario_csv(std::ostream& os, const ScenarioSample& sample);

}  // namespace edgeho
