// wzbounds: entropy-distortion bounds for a Unif([0,1]) source under L1
// distortion, with quantized or noisy decoder side information, plus a
// Monte Carlo simulator for the explicit encoder/decoder constructions.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wz/sweep.hpp"

namespace {

using wz::Mode;
using wz::OutputFormat;
using wz::Spacing;
using wz::SweepConfig;

// Values from a --config JSON file seed the config; explicitly passed flags
// override it afterwards.  No environment variables are consulted.
void apply_config_file(SweepConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const nlohmann::json j = nlohmann::json::parse(buf.str());

    if (j.contains("k")) {
        config.k_levels = j["k"].get<std::int64_t>();
        config.scheme.k_levels = config.k_levels;
    }
    if (j.contains("alpha")) {
        config.alpha = j["alpha"].get<double>();
        config.scheme.alpha = config.alpha;
    }
    if (j.contains("delta_min")) config.grid.min = j["delta_min"].get<double>();
    if (j.contains("delta_max")) config.grid.max = j["delta_max"].get<double>();
    if (j.contains("delta_count")) config.grid.count = j["delta_count"].get<int>();
    if (j.contains("spacing"))
        config.grid.spacing =
            j["spacing"].get<std::string>() == "log" ? Spacing::log : Spacing::linear;
    if (j.contains("samples")) config.n_samples = j["samples"].get<std::int64_t>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("format"))
        config.format =
            j["format"].get<std::string>() == "json" ? OutputFormat::json : OutputFormat::csv;
    if (j.contains("out")) config.out_path = j["out"].get<std::string>();
    if (j.contains("scheme")) config.scheme.kind = j["scheme"].get<std::string>();
    if (j.contains("scheme_file")) config.scheme.scheme_file = j["scheme_file"].get<std::string>();
    if (j.contains("p")) {
        if (j["p"].is_array())
            config.scheme.per_bin_p = j["p"].get<std::vector<double>>();
        else
            config.scheme.p = j["p"].get<double>();
    }
}

struct FlagSet {
    std::string config_path;
    std::int64_t k = 0;
    double alpha = 0.0;
    double delta_min = 0.0, delta_max = 0.0;
    int delta_count = 0;
    std::string spacing;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::string format;
    std::string out;
    std::string scheme_kind;
    std::vector<double> p_values;
    std::string scheme_file;
};

void add_common_options(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
    cmd->add_option("--format", f.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.out, "output path (default: stdout)");
}

void add_grid_options(CLI::App* cmd, FlagSet& f) {
    cmd->add_option("--delta-min", f.delta_min, "smallest distortion on the grid");
    cmd->add_option("--delta-max", f.delta_max, "largest distortion on the grid");
    cmd->add_option("--delta-count", f.delta_count, "number of grid points");
    cmd->add_option("--spacing", f.spacing, "grid spacing: linear|log")
        ->check(CLI::IsMember({"linear", "log"}));
}

void merge_flags(const CLI::App* cmd, const FlagSet& f, SweepConfig& config) {
    auto passed = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (passed("--k")) {
        config.k_levels = f.k;
        config.scheme.k_levels = f.k;
    }
    if (passed("--alpha")) {
        config.alpha = f.alpha;
        config.scheme.alpha = f.alpha;
    }
    if (passed("--delta-min")) config.grid.min = f.delta_min;
    if (passed("--delta-max")) config.grid.max = f.delta_max;
    if (passed("--delta-count")) config.grid.count = f.delta_count;
    if (passed("--spacing"))
        config.grid.spacing = f.spacing == "log" ? Spacing::log : Spacing::linear;
    if (passed("--samples")) config.n_samples = f.samples;
    if (passed("--seed")) config.seed = f.seed;
    if (passed("--format"))
        config.format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (passed("--out")) config.out_path = f.out;
    if (passed("--scheme")) config.scheme.kind = f.scheme_kind;
    if (passed("--scheme-file")) config.scheme.scheme_file = f.scheme_file;
    if (passed("--p")) {
        if (f.p_values.size() == 1)
            config.scheme.p = f.p_values.front();
        else
            config.scheme.per_bin_p = f.p_values;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-distortion bounds and simulation for a uniform source "
                 "with side information"};
    app.require_subcommand(1);

    FlagSet f;

    CLI::App* p2p = app.add_subcommand("p2p", "point-to-point curve: delta, h_u, h_u_envelope");
    add_grid_options(p2p, f);
    add_common_options(p2p, f);

    CLI::App* quant = app.add_subcommand(
        "quantized", "bounds with K-level quantized side information");
    quant->add_option("--k", f.k, "number of side-information levels");
    add_grid_options(quant, f);
    add_common_options(quant, f);

    CLI::App* noisy = app.add_subcommand(
        "noisy", "bounds with additive mod-1 uniform noise side information");
    noisy->add_option("--alpha", f.alpha, "noise support width in (0, 1/2]");
    add_grid_options(noisy, f);
    add_common_options(noisy, f);

    CLI::App* sim = app.add_subcommand(
        "simulate", "exact and Monte Carlo evaluation of one scheme");
    sim->add_option("--scheme", f.scheme_kind, "inline scheme: p2p|quantized|noisy")
        ->check(CLI::IsMember({"p2p", "quantized", "noisy"}));
    sim->add_option("--scheme-file", f.scheme_file, "serialized scheme JSON file");
    sim->add_option("--p", f.p_values, "cell width(s); one per level for quantized")
        ->expected(-1);
    sim->add_option("--k", f.k, "level count for an inline quantized scheme");
    sim->add_option("--alpha", f.alpha, "noise width for an inline noisy scheme");
    sim->add_option("--samples", f.samples, "Monte Carlo sample count");
    sim->add_option("--seed", f.seed, "random seed");
    add_common_options(sim, f);

    CLI::App* fig2 = app.add_subcommand(
        "fig2", "preset: four-curve files for K = 1/alpha = 4 and 32");
    add_common_options(fig2, f);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* cmd = app.get_subcommands().front();
        if (cmd == fig2) {
            OutputFormat format =
                cmd->count("--format") && f.format == "json" ? OutputFormat::json
                                                             : OutputFormat::csv;
            for (const auto& path : wz::run_fig2(f.out, format))
                std::cerr << "wrote " << path << "\n";
            return 0;
        }

        SweepConfig config;
        if (cmd == p2p) config.mode = Mode::p2p;
        if (cmd == quant) config.mode = Mode::quantized;
        if (cmd == noisy) config.mode = Mode::noisy;
        if (cmd == sim) config.mode = Mode::simulate;
        if (cmd->count("--config")) apply_config_file(config, f.config_path);
        merge_flags(cmd, f, config);
        return wz::run_command(config);
    } catch (const std::exception& e) {
        std::cerr << "wzbounds: " << e.what() << "\n";
        return 1;
    }
}
