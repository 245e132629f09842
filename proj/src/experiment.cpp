#include "edgeho/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "edgeho/backhaul_scheduler.hpp"
#include "edgeho/delay_analysis.hpp"
#include "edgeho/rng.hpp"

namespace edgeho {

SweepAxis parse_axis(const std::string& name) {
    if (name == "rate") return SweepAxis::rate;
    if (name == "compute") return SweepAxis::compute;
    if (name == "cache") return SweepAxis::cache;
    if (name == "users") return SweepAxis::users;
    if (name == "bs_distance" || name == "dbs") return SweepAxis::bs_distance;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::rate: return "rate";
        case SweepAxis::compute: return "compute";
        case SweepAxis::cache: return "cache";
        case SweepAxis::users: return "users";
        case SweepAxis::bs_distance: return "bs_distance";
    }
    return "?";
}

ExperimentConfig apply_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
    if (value <= 0.0) throw std::invalid_argument("sweep value must be positive");
    ExperimentConfig cfg = base;
    switch (axis) {
        case SweepAxis::rate:
            cfg.r_bh_bps = value * 1e9;
            break;
        case SweepAxis::compute:
            cfg.profile.a = 1.0 / value;
            break;
        case SweepAxis::cache:
            cfg.c_max = static_cast<std::int64_t>(std::llround(value));
            if (cfg.c_min > cfg.c_max) cfg.c_min = cfg.c_max;
            break;
        case SweepAxis::users:
            cfg.k = static_cast<int>(std::llround(value));
            break;
        case SweepAxis::bs_distance:
            cfg.mobility.d_bs = value;
            cfg.mobility.x_boundary = value / 2.0;
            break;
    }
    return cfg;
}

double trial_worst_ho_delay(const ExperimentConfig& cfg, Strategy strategy, std::uint64_t trial) {
    const auto sample =
        sample_scenario(cfg.k, cfg.c_min, cfg.c_max, cfg.mobility, derive_seed(cfg.base_seed, trial));
    const auto plan =
        plan_for_strategy(strategy, sample.instance, cfg.link(), cfg.profile, cfg.delay_options());
    return plan.breakdown.v;
}

double trial_worst_total_delay(const ExperimentConfig& cfg, Strategy strategy, bool no_handover,
                               std::uint64_t trial) {
    const auto sample =
        sample_scenario(cfg.k, cfg.c_min, cfg.c_max, cfg.mobility, derive_seed(cfg.base_seed, trial));
    const auto g = static_cast<double>(cfg.g_tokens);
    const auto opts = cfg.streaming_options();

    double worst = 0.0;
    if (no_handover) {
        for (std::size_t i = 0; i < sample.instance.size(); ++i)
            worst = std::max(worst, streaming_delay(cfg.radio, cfg.mobility,
                                                    sample.initial_positions[i], ServingBS::source, g,
                                                    sample.instance[i].tau, opts));
        return worst;
    }

    const auto link = cfg.link();
    const auto plan =
        plan_for_strategy(strategy, sample.instance, link, cfg.profile, cfg.delay_options());
    const auto schedule = build_schedule(sample.instance, link, plan.l_star);
    for (std::size_t i = 0; i < sample.instance.size(); ++i)
        worst = std::max(worst, total_streaming_delay(plan, schedule, cfg.radio, cfg.mobility,
                                                      sample.instance, sample.initial_positions, i, g,
                                                      ServingBS::target, opts));
    return worst;
}

namespace {

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

// Fills per-trial results in index order so aggregation is worker-count independent.
std::vector<double> run_trials(int trials, int jobs, const std::function<double(std::uint64_t)>& eval) {
    std::vector<double> out(static_cast<std::size_t>(trials));
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        for (int t = 0; t < trials; ++t) out[static_cast<std::size_t>(t)] = eval(t);
        return out;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int t = w; t < trials; t += jobs) out[static_cast<std::size_t>(t)] = eval(t);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : workers) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    return out;
}

std::pair<double, double> mean_std(const std::vector<double>& v) {
    const auto n = v.size();
    if (n == 0) return {0.0, 0.0};
    const double mean = pairwise_sum(v, 0, n) / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    const double var = pairwise_sum(sq, 0, n) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var)};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(SweepAxis axis, const std::vector<double>& values,
                                const ExperimentConfig& cfg) {
    if (values.empty()) throw std::invalid_argument("run_sweep: no sweep values");
    if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials must be at least 1");

    std::vector<SweepRow> rows;
    const Strategy strategies[] = {Strategy::ctHO, Strategy::tHO, Strategy::cHO};
    for (double value : values) {
        const ExperimentConfig point = apply_axis(cfg, axis, value);
        auto add_row = [&](const std::string& name, const std::function<double(std::uint64_t)>& eval) {
            const auto samples = run_trials(point.trials, point.jobs, eval);
            const auto [mean, sd] = mean_std(samples);
            rows.push_back(SweepRow{axis_name(axis), value, name, mean, sd, point.trials,
                                    point.base_seed});
        };
        for (Strategy s : strategies) {
            if (axis == SweepAxis::bs_distance) {
                add_row(strategy_name(s),
                        [&, s](std::uint64_t t) { return trial_worst_total_delay(point, s, false, t); });
            } else {
                add_row(strategy_name(s),
                        [&, s](std::uint64_t t) { return trial_worst_ho_delay(point, s, t); });
            }
        }
        if (axis == SweepAxis::bs_distance) {
            add_row("no-HO", [&](std::uint64_t t) {
                return trial_worst_total_delay(point, Strategy::ctHO, true, t);
            });
        }
    }
    return rows;
}

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "sweep,sweep_value,strategy,mean_worst_delay_s,std_s,trials,base_seed\n";
    for (const auto& row : rows) {
        os << row.sweep << ',' << fmt(row.sweep_value) << ',' << row.strategy << ','
           << fmt(row.mean_worst_delay_s) << ',' << fmt(row.std_s) << ',' << row.trials << ','
           << row.base_seed << '\n';
    }
}

std::string run_single(const ExperimentConfig& cfg) {
    std::ostringstream os;
    const auto sample =
        sample_scenario(cfg.k, cfg.c_min, cfg.c_max, cfg.mobility, derive_seed(cfg.base_seed, 0));
    const auto link = cfg.link();

    os << "# scenario\n";
    write_scenario_csv(os, sample);

    const Strategy strategies[] = {Strategy::ctHO, Strategy::tHO, Strategy::cHO};
    HOPlan ct_plan;
    for (Strategy s : strategies) {
        const auto plan = plan_for_strategy(s, sample.instance, link, cfg.profile, cfg.delay_options());
        if (s == Strategy::ctHO) ct_plan = plan;
        os << "\n" << strategy_name(s) << ": L=" << fmt(plan.l_star)
           << " (rounded " << std::llround(plan.l_star) << ")"
           << " d_prefill=" << fmt(plan.breakdown.d_prefill)
           << " d_transfer=" << fmt(plan.breakdown.d_transfer) << " V=" << fmt(plan.breakdown.v)
           << " t_s=" << fmt(plan.t_start_prefill) << "\n";
        const auto schedule = build_schedule(sample.instance, link, plan.l_star);
        os << "per-UE delay:";
        for (std::size_t i = 0; i < sample.instance.size(); ++i) {
            double t_done = schedule.completion[i];
            if (plan.l_star > 0.0 || plan.breakdown.d_prefill > 0.0)
                t_done = std::max(t_done, sample.instance.tau_first() + plan.breakdown.d_prefill);
            os << ' ' << fmt(t_done - sample.instance[i].tau);
        }
        os << "\n";
    }

    os << "\n# ctHO schedule\n";
    const auto schedule = build_schedule(sample.instance, link, ct_plan.l_star);
    write_schedule_csv(os, schedule);
    return os.str();
}

std::vector<double> default_axis_values(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::rate: return {2.0, 3.0, 4.0, 4.5, 5.0, 6.0, 7.0, 8.0};
        case SweepAxis::compute: return {4000.0, 6000.0, 8000.0, 10608.0, 14000.0, 18000.0};
        case SweepAxis::cache: return {1024.0, 2048.0, 3072.0, 4096.0, 6144.0, 8192.0};
        case SweepAxis::users: return {1.0, 2.0, 4.0, 8.0, 12.0};
        case SweepAxis::bs_distance: return {300.0, 350.0, 375.0, 400.0, 450.0, 500.0};
    }
    return {};
}

namespace {

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto d = [&] { return std::stod(value); };
    auto i64 = [&] { return static_cast<std::int64_t>(std::stoll(value)); };
    auto b = [&] { return value == "1" || value == "true" || value == "yes"; };
    if (key == "k") cfg.k = static_cast<int>(i64());
    else if (key == "c_min") cfg.c_min = i64();
    else if (key == "c_max") cfg.c_max = i64();
    else if (key == "prefill_a") cfg.profile.a = d();
    else if (key == "prefill_b") cfg.profile.b = d();
    else if (key == "t_cycle") cfg.profile.t_cycle = d();
    else if (key == "r_bh_bps") cfg.r_bh_bps = d();
    else if (key == "kv_layers") cfg.kv.n_layers = static_cast<int>(i64());
    else if (key == "kv_heads") cfg.kv.n_kv_heads = static_cast<int>(i64());
    else if (key == "kv_head_dim") cfg.kv.head_dim = static_cast<int>(i64());
    else if (key == "kv_precision_bits") cfg.kv.precision_bits = static_cast<int>(i64());
    else if (key == "d_bs") cfg.mobility.d_bs = d();
    else if (key == "x_boundary") cfg.mobility.x_boundary = d();
    else if (key == "x0_min") cfg.mobility.x0_min = d();
    else if (key == "x0_max") cfg.mobility.x0_max = d();
    else if (key == "speed") cfg.mobility.speed = d();
    else if (key == "gamma_ref_db") cfg.radio.gamma_ref = std::pow(10.0, d() / 10.0);
    else if (key == "d_ref") cfg.radio.d_ref = d();
    else if (key == "pathloss_exp") cfg.radio.pathloss_exp = d();
    else if (key == "bandwidth_hz") cfg.radio.bandwidth_hz = d();
    else if (key == "token_bits") cfg.radio.token_bits = d();
    else if (key == "d_min") cfg.radio.d_min = d();
    else if (key == "g_tokens") cfg.g_tokens = i64();
    else if (key == "trials") cfg.trials = static_cast<int>(i64());
    else if (key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "jobs") cfg.jobs = static_cast<int>(i64());
    else if (key == "charge_prefill_overhead_at_zero") cfg.charge_prefill_overhead_at_zero = b();
    else if (key == "freeze_snr_at_handover") cfg.freeze_snr_at_handover = b();
    else if (key == "stream_dt") cfg.stream_dt = d();
    else throw std::invalid_argument("unknown config key: " + key);
}

}  // namespace

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) apply_key(cfg, key, value);
    }
}

void emit_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "k=" << cfg.k << "\n";
    os << "c_min=" << cfg.c_min << "\n";
    os << "c_max=" << cfg.c_max << "\n";
    os << "prefill_a=" << fmt(cfg.profile.a) << "\n";
    os << "prefill_b=" << fmt(cfg.profile.b) << "\n";
    os << "t_cycle=" << fmt(cfg.profile.t_cycle) << "\n";
    os << "r_bh_bps=" << fmt(cfg.r_bh_bps) << "\n";
    os << "kv_layers=" << cfg.kv.n_layers << "\n";
    os << "kv_heads=" << cfg.kv.n_kv_heads << "\n";
    os << "kv_head_dim=" << cfg.kv.head_dim << "\n";
    os << "kv_precision_bits=" << cfg.kv.precision_bits << "\n";
    os << "d_bs=" << fmt(cfg.mobility.d_bs) << "\n";
    os << "x_boundary=" << fmt(cfg.mobility.x_boundary) << "\n";
    os << "x0_min=" << fmt(cfg.mobility.x0_min) << "\n";
    os << "x0_max=" << fmt(cfg.mobility.x0_max) << "\n";
    os << "speed=" << fmt(cfg.mobility.speed) << "\n";
    os << "gamma_ref_db=" << fmt(10.0 * std::log10(cfg.radio.gamma_ref)) << "\n";
    os << "d_ref=" << fmt(cfg.radio.d_ref) << "\n";
    os << "pathloss_exp=" << fmt(cfg.radio.pathloss_exp) << "\n";
    os << "bandwidth_hz=" << fmt(cfg.radio.bandwidth_hz) << "\n";
    os << "token_bits=" << fmt(cfg.radio.token_bits) << "\n";
    os << "d_min=" << fmt(cfg.radio.d_min) << "\n";
    os << "g_tokens=" << cfg.g_tokens << "\n";
    os << "trials=" << cfg.trials << "\n";
    os << "base_seed=" << cfg.base_seed << "\n";
    os << "jobs=" << cfg.jobs << "\n";
    os << "charge_prefill_overhead_at_zero=" << (cfg.charge_prefill_overhead_at_zero ? 1 : 0) << "\n";
    os << "freeze_snr_at_handover=" << (cfg.freeze_snr_at_handover ? 1 : 0) << "\n";
    os << "stream_dt=" << fmt(cfg.stream_dt) << "\n";
}

}  // namespace edgeho
