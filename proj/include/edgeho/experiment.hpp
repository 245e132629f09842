#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "edgeho/core_model.hpp"
#include "edgeho/scenario_gen.hpp"

namespace edgeho {

enum class SweepAxis { rate, compute, cache, users, bs_distance };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

struct ExperimentConfig {
    int k = 4;
    std::int64_t c_min = 1024;
    std::int64_t c_max = 3072;
    PrefillProfile profile{9.4267e-5, 2.4e-3, 0.01};
    double r_bh_bps = 4.5e9;
    KVCacheSpec kv{28, 4, 128, 16};
    MobilityConfig mobility;
    RadioConfig radio;
    std::int64_t g_tokens = 1024;
    int trials = 500;
    std::uint64_t base_seed = 12345;
    int jobs = 1;
    bool charge_prefill_overhead_at_zero = false;
    bool freeze_snr_at_handover = false;
    double stream_dt = 1e-3;

    BackhaulLink link() const {
        return BackhaulLink{r_bh_bps, static_cast<double>(kv_bits_per_token(kv))};
    }
    DelayOptions delay_options() const { return DelayOptions{charge_prefill_overhead_at_zero}; }
    StreamingOptions streaming_options() const {
        return StreamingOptions{freeze_snr_at_handover, stream_dt, 3600.0};
    }
};

// Applies one sweep-axis value to a copy of the config. Units by axis:
// rate Gbps, compute tokens/s (1/a), cache tokens, users count, bs_distance meters.
// The bs_distance axis keeps the HO boundary at the cell midpoint.
ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value);

// Worst-user HO delay of one seeded trial (rate/compute/cache/users sweeps).
double trial_worst_ho_delay(const ExperimentConfig& cfg, Strategy strategy, std::uint64_t trial);

// Worst-user total streaming delay of one seeded trial (bs_distance sweep).
// no_handover selects the source-BS baseline; strategy is ignored in that case.
double trial_worst_total_delay(const ExperimentConfig& cfg, Strategy strategy, bool no_handover,
                               std::uint64_t trial);

struct SweepRow {
    std::string sweep;
    double sweep_value = 0.0;
    std::string strategy;
    double mean_worst_delay_s = 0.0;
    double std_s = 0.0;
    int trials = 0;
    std::uint64_t base_seed = 0;
};

std::vector<SweepRow> run_sweep(SweepAxis axis, const std::vector<double>& values,
                                const ExperimentConfig& cfg);

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// One seeded scenario with per-strategy plans, the ctHO schedule, and per-UE delays.
std::string run_single(const ExperimentConfig& cfg);

std::vector<double> default_axis_values(SweepAxis axis);

// Flat key=value config file support.
void load_config_file(const std::string& path, ExperimentConfig& cfg);
void emit_config(std::ostream& os, const ExperimentConfig& cfg);

}  // namespace edgeho
