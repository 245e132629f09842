#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "edgeho/experiment.hpp"
#include "edgeho/oracle.hpp"

namespace {

struct CliState {
    edgeho::ExperimentConfig cfg;
    std::string config_path;
    std::string out_path;
    std::vector<double> values;
    bool show_config = false;
};

void add_common_options(CLI::App* cmd, CliState& st) {
    cmd->add_option("--config", st.config_path, "flat key=value config file");
    cmd->add_option("--trials", st.cfg.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seed", st.cfg.base_seed, "base RNG seed");
    cmd->add_option("--out", st.out_path, "output CSV path (default stdout)");
    cmd->add_option("--jobs", st.cfg.jobs, "worker threads per sweep point");
    cmd->add_flag("--charge-prefill-overhead-at-zero", st.cfg.charge_prefill_overhead_at_zero,
                  "charge the batch-start wait and p(0) even when L=0");
    cmd->add_flag("--freeze-snr-at-handover", st.cfg.freeze_snr_at_handover,
                  "hold the streaming SNR at its value when the stream starts");
    cmd->add_flag("--emit-config", st.show_config, "print the effective config and exit");
}

int run_sweep_cmd(CliState& st, edgeho::SweepAxis axis) {
    if (st.values.empty()) st.values = edgeho::default_axis_values(axis);
    const auto rows = edgeho::run_sweep(axis, st.values, st.cfg);
    if (st.out_path.empty()) {
        edgeho::write_rows_csv(std::cout, rows);
    } else {
        std::ofstream out(st.out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + st.out_path);
        edgeho::write_rows_csv(out, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-LLM handover planning and parameter sweeps"};
    app.require_subcommand(1);

    CliState st;
    int verify_instances = 250;

    struct SweepCmd {
        const char* name;
        const char* desc;
        edgeho::SweepAxis axis;
    };
    const SweepCmd sweeps[] = {
        {"sweep-rate", "worst-user HO delay vs backhaul rate [Gbps]", edgeho::SweepAxis::rate},
        {"sweep-compute", "worst-user HO delay vs prefill speed 1/a [tokens/s]",
         edgeho::SweepAxis::compute},
        {"sweep-cache", "worst-user HO delay vs max context size [tokens]", edgeho::SweepAxis::cache},
        {"sweep-users", "worst-user HO delay vs number of UEs", edgeho::SweepAxis::users},
        {"sweep-dbs", "worst-user total streaming delay vs BS distance [m]",
         edgeho::SweepAxis::bs_distance},
    };

    std::vector<std::pair<CLI::App*, edgeho::SweepAxis>> sweep_cmds;
    for (const auto& s : sweeps) {
        auto* cmd = app.add_subcommand(s.name, s.desc);
        add_common_options(cmd, st);
        cmd->add_option("--values", st.values, "sweep axis values")->delimiter(',');
        sweep_cmds.emplace_back(cmd, s.axis);
    }

    auto* single = app.add_subcommand("single", "one seeded scenario, plans, and schedule");
    add_common_options(single, st);

    auto* verify = app.add_subcommand("verify", "oracle cross-checks on random instances");
    add_common_options(verify, st);
    verify->add_option("--instances", verify_instances, "random instances per UE-count class");

    // Load the config file before parsing so CLI flags override file values.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) edgeho::load_config_file(argv[i + 1], st.cfg);
            else if (arg.rfind("--config=", 0) == 0) edgeho::load_config_file(arg.substr(9), st.cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (st.show_config) {
            edgeho::emit_config(std::cout, st.cfg);
            return 0;
        }

        for (const auto& [cmd, axis] : sweep_cmds)
            if (cmd->parsed()) return run_sweep_cmd(st, axis);

        if (single->parsed()) {
            const std::string report = edgeho::run_single(st.cfg);
            std::cout << report;
            if (!st.out_path.empty()) {
                std::ofstream out(st.out_path, std::ios::binary);
                if (!out) throw std::runtime_error("cannot open output file: " + st.out_path);
                out << report;
            }
            return 0;
        }

        if (verify->parsed()) {
            const auto report = edgeho::run_verification(std::cout, verify_instances, st.cfg.base_seed);
            return report.ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
