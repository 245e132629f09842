#include "edgeho/scenario_gen.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "edgeho/rng.hpp"

namespace edgeho {

ScenarioSample sample_scenario(int k, std::int64_t c_min, std::int64_t c_max,
                               const MobilityConfig& mobility, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("sample_scenario: k must be at least 1");
    if (c_min < 0 || c_min > c_max) throw std::invalid_argument("sample_scenario: bad token range");
    mobility.validate();

    Rng rng(seed);
    std::vector<UEContext> ues;
    std::vector<double> x0_by_id(static_cast<std::size_t>(k));
    ues.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const std::int64_t c = rng.uniform_int(c_min, c_max);
        const double x0 = rng.uniform(mobility.x0_min, mobility.x0_max);
        const double tau = (mobility.x_boundary - x0) / mobility.speed;
        ues.push_back(UEContext{i, tau, c});
        x0_by_id[static_cast<std::size_t>(i)] = x0;
    }

    ScenarioSample sample{Instance(std::move(ues)), {}, seed};
    sample.initial_positions.reserve(static_cast<std::size_t>(k));
    for (const auto& ue : sample.instance.ues())
        sample.initial_positions.push_back(x0_by_id[static_cast<std::size_t>(ue.id)]);
    return sample;
}

double snr_at(const RadioConfig& radio, double distance) {
    if (distance < 0.0) throw std::invalid_argument("snr_at: negative distance");
    const double d = std::max(distance, radio.d_min);
    return radio.gamma_ref * std::pow(radio.d_ref / d, radio.pathloss_exp);
}

double token_rate(const RadioConfig& radio, double snr) {
    if (snr < 0.0) throw std::invalid_argument("token_rate: negative SNR");
    return radio.bandwidth_hz * std::log2(1.0 + snr) / radio.token_bits;
}

double streaming_delay(const RadioConfig& radio, const MobilityConfig& mobility, double x0,
                       ServingBS serving, double g_tokens, double t0,
                       const StreamingOptions& opts) {
    if (g_tokens < 0.0) throw std::invalid_argument("streaming_delay: negative token demand");
    if (g_tokens == 0.0) return 0.0;

    const double x_bs = serving == ServingBS::source ? 0.0 : mobility.d_bs;
    auto rate_at = [&](double t) {
        const double d = std::abs(x0 + mobility.speed * t - x_bs);
        return token_rate(radio, snr_at(radio, d));
    };

    if (opts.freeze_snr_at_handover) {
        const double r = rate_at(t0);
        const double delta = g_tokens / r;
        if (!(delta <= opts.max_horizon_s))
            throw std::runtime_error("streaming_delay: demand not met within horizon of " +
                                     std::to_string(opts.max_horizon_s) + " s");
        return delta;
    }

    // Rectangle rule with final-step interpolation to land on the budget exactly.
    double acc = 0.0;
    double t = t0;
    while (true) {
        const double r = rate_at(t);
        if (acc + r * opts.dt >= g_tokens) return (t - t0) + (g_tokens - acc) / r;
        acc += r * opts.dt;
        t += opts.dt;
        if (t - t0 > opts.max_horizon_s)
            throw std::runtime_error("streaming_delay: demand not met within horizon of " +
                                     std::to_string(opts.max_horizon_s) + " s");
    }
}

double total_streaming_delay(const HOPlan& plan, const RateSchedule& schedule,
                             const RadioConfig& radio, const MobilityConfig& mobility,
                             const Instance& instance, const std::vector<double>& initial_positions,
                             std::size_t ue_index, double g_tokens, ServingBS serving,
                             const StreamingOptions& opts) {
    if (ue_index >= instance.size()) throw std::invalid_argument("total_streaming_delay: bad UE index");
    const double tau = instance[ue_index].tau;
    const double x0 = initial_positions.at(ue_index);

    if (serving == ServingBS::source)
        return streaming_delay(radio, mobility, x0, ServingBS::source, g_tokens, tau, opts);

    double t_done = schedule.completion.at(ue_index);
    if (plan.l_star > 0.0 || plan.breakdown.d_prefill > 0.0) {
        const double t_prefill_done = instance.tau_first() + plan.breakdown.d_prefill;
        t_done = std::max(t_done, t_prefill_done);
    }
    const double ho_delay = t_done - tau;
    return ho_delay + streaming_delay(radio, mobility, x0, ServingBS::target, g_tokens, t_done, opts);
}

void write_scenario_csv(std::ostream& os, const ScenarioSample& sample) {
    os << "ue_id,x0_m,tau_s,c_tokens,seed\n";
    char buf[160];
    for (std::size_t i = 0; i < sample.instance.size(); ++i) {
        const auto& ue = sample.instance[i];
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%lld,%llu\n", ue.id,
                      sample.initial_positions[i], ue.tau,
                      static_cast<long long>(ue.c_tokens),
                      static_cast<unsigned long long>(sample.seed));
        os << buf;
    }
}

}  // namespace edgeho
