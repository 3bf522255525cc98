// Command-line front end: figure sweeps, validation battery, planning and
// single-link queries over a JSON scenario description.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "v2i/scenario_json.hpp"
#include "v2i/v2i.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value pairs
};

v2i::ScenarioConfig load_config(const GlobalArgs& args) {
    nlohmann::json doc = nlohmann::json::object();
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw v2i::ConfigError("config: cannot open " + args.config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        doc = nlohmann::json::parse(buf.str(), nullptr, true);
    }
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw v2i::ConfigError("config: override '" + kv + "' is not key=value");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
            if (key == "num_cavs")
                doc[key] = std::stoi(value);
            else
                doc[key] = std::stod(value);
        } catch (const std::exception&) {
            throw v2i::ConfigError("config: override '" + kv + "' has a non-numeric value");
        }
    }
    return v2i::scenario_from_json(doc);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const auto parse_span = [&grid](const std::string& body, bool log_spaced) {
        double lo = 0.0, hi = 0.0;
        int count = 0;
        if (std::sscanf(body.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
            throw v2i::ConfigError("grid: expected lo:hi:count in '" + body + "'");
        for (int i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            grid.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
    };
    if (text.rfind("log:", 0) == 0)
        parse_span(text.substr(4), true);
    else if (text.find(':') != std::string::npos)
        parse_span(text, false);
    else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    }
    return grid;
}

void write_output(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw v2i::ConfigError("cannot open output file " + path);
    out << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Handoff-aware V2I link analysis and traffic-flow planning"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalArgs global;
    app.add_option("--config", global.config_path, "Scenario JSON file");
    app.add_option("--set", global.overrides, "Override a scenario field, key=value");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a figure sweep and write CSV");
    std::string experiment_name, grid_text, out_path;
    std::uint64_t seed = 0, trials = 0;
    int shards = 1;
    sweep->add_option("experiment", experiment_name,
                      "outage_vs_mu | capacity_vs_mu | vdata_vs_mu | flow_vs_rth | "
                      "flow_vs_epsilon | flow_vs_mu")
        ->required();
    sweep->add_option("--grid", grid_text, "lo:hi:count, log:lo:hi:count or comma list")
        ->required();
    sweep->add_option("--out", out_path, "Output CSV path")->required();
    sweep->add_option("--seed", seed, "Monte Carlo seed")->required();
    sweep->add_option("--trials", trials, "Monte Carlo trials per grid point")->required();
    sweep->add_option("--shards", shards, "Shard count (results are shard-invariant)");

    // validate
    auto* validate = app.add_subcommand("validate", "Run the full cross-validation battery");
    validate->add_option("--out", out_path, "Report output path")->required();
    validate->add_option("--seed", seed, "Monte Carlo seed")->required();
    validate->add_option("--trials", trials, "Monte Carlo trials per check")->required();
    validate->add_option("--shards", shards, "Shard count");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Jointly plan speed and BS density");
    bool no_interference = false;
    optimize->add_flag("--no-interference", no_interference, "Drop interfering BSs");

    // outage / capacity
    double mu = 0.0, speed_arg = 20.0;
    std::uint64_t point_trials = 0;
    auto add_point_options = [&](CLI::App* cmd) {
        cmd->add_option("--mu", mu, "BS density, BSs per meter");
        cmd->add_option("--v", speed_arg, "Vehicle speed, m/s");
        cmd->add_option("--trials", point_trials, "Add a Monte Carlo column with this budget");
        cmd->add_option("--seed", seed, "Monte Carlo seed");
        cmd->add_option("--shards", shards, "Shard count");
    };
    auto* outage = app.add_subcommand("outage", "HO-aware rate outage at one operating point");
    add_point_options(outage);
    auto* capacity = app.add_subcommand("capacity", "HO-aware throughput at one operating point");
    add_point_options(capacity);

    try {
        app.parse(argc, argv);
        const v2i::ScenarioConfig cfg = load_config(global);

        if (sweep->parsed()) {
            const auto exp = v2i::parse_experiment(experiment_name);
            if (!exp) throw v2i::ConfigError("unknown experiment '" + experiment_name + "'");
            v2i::SweepSpec spec;
            spec.experiment = *exp;
            spec.grid = parse_grid(grid_text);
            spec.base = cfg;
            spec.trials = trials;
            spec.seed = seed;
            spec.shards = shards;
            write_output(out_path, v2i::run_sweep(spec));
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
        if (validate->parsed()) {
            if (trials < 1) throw v2i::ConfigError("validate: --trials must be positive");
            const v2i::ValidationReport rep = v2i::validate_all(trials, seed, shards);
            const std::string text = v2i::format_report(rep);
            write_output(out_path, text);
            std::cout << text;
            return rep.all_passed() ? 0 : 1;
        }
        if (optimize->parsed()) {
            v2i::OptimizeOptions opts;
            opts.rate.interference = !no_interference;
            const v2i::PlanResult plan = v2i::optimize_density(cfg, opts);
            std::cout << "feasible: " << (plan.feasible ? "yes" : "no") << "\n"
                      << "mu*: " << plan.mu_star << " BSs/m\n";
            if (plan.feasible) {
                std::cout << "v*: " << plan.v_star << " m/s (binding: "
                          << v2i::to_string(plan.binding) << ")\n"
                          << "Q*: " << plan.q_star << " vehicles/s\n";
            }
            return plan.feasible ? 0 : 1;
        }
        if (outage->parsed() || capacity->parsed()) {
            const double density = mu > 0.0 ? mu : cfg.bs_density;
            const auto coeffs = v2i::worst_case_coefficients(cfg, density);
            const v2i::RateReport rep =
                v2i::analyze_link(cfg, coeffs, density, speed_arg);
            if (outage->parsed()) {
                std::cout << "outage: " << rep.outage << " (ho_cost " << rep.ho_cost
                          << (rep.ho_saturated ? ", saturated" : "") << ")\n";
                if (point_trials > 0) {
                    const auto mc = v2i::simulate_ho_outage(cfg, density, speed_arg,
                                                            point_trials, seed, shards);
                    std::cout << "outage_mc: " << mc.outage << "\n";
                }
            } else {
                std::cout << "ergodic rate: " << rep.ergodic_rate / 1e6 << " Mbit/s\n"
                          << "HO-aware rate: " << rep.ho_aware_rate / 1e6 << " Mbit/s\n";
                if (point_trials > 0) {
                    v2i::SimSpec spec{point_trials, seed,
                                      v2i::worst_case_coefficients(cfg, density,
                                                                   v2i::WorstCaseModel::half_line,
                                                                   true, false),
                                      1.0, shards};
                    const auto mc = v2i::simulate(spec);
                    std::cout << "HO-aware rate (mc): "
                              << cfg.bandwidth * mc.mean_log_rate * (1.0 - rep.ho_cost) / 1e6
                              << " Mbit/s\n";
                }
            }
            return 0;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const v2i::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
