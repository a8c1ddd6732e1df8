#include "wz/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "wz/monte_carlo.hpp"
#include "wz/quantized_si.hpp"

namespace wz {

namespace {

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* spacing_name(Spacing s) { return s == Spacing::linear ? "linear" : "log"; }
const char* format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }
const char* mode_name(Mode m) {
    switch (m) {
        case Mode::p2p: return "p2p";
        case Mode::quantized: return "quantized";
        case Mode::noisy: return "noisy";
        case Mode::simulate: return "simulate";
    }
    return "?";
}

} // namespace

std::vector<double> DeltaGrid::values() const {
    if (!(min > 0.0) || !(max >= min) || count < 1)
        fail("delta grid needs 0 < min <= max and count >= 1");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        v.push_back(min);
        return v;
    }
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        if (spacing == Spacing::linear)
            v.push_back(min + t * (max - min));
        else
            v.push_back(min * std::pow(max / min, t));
    }
    v.back() = max;
    return v;
}

void SweepConfig::validate() const {
    switch (mode) {
        case Mode::p2p:
            if (k_levels) fail("p2p mode takes no --k");
            if (alpha) fail("p2p mode takes no --alpha");
            if (grid.max > kMaxDistortion) fail("p2p delta grid must stay within (0, 1/4]");
            break;
        case Mode::quantized:
            if (!k_levels) fail("quantized mode requires --k");
            if (*k_levels < 1) fail("--k must be a positive integer");
            if (alpha) fail("quantized mode takes no --alpha");
            break;
        case Mode::noisy:
            if (!alpha) fail("noisy mode requires --alpha");
            if (!(*alpha > 0.0 && *alpha <= 0.5)) fail("--alpha must be in (0, 1/2]");
            if (k_levels) fail("noisy mode takes no --k");
            break;
        case Mode::simulate:
            if (scheme.scheme_file.empty() && scheme.kind.empty())
                fail("simulate mode requires --scheme-file or --scheme");
            if (n_samples < 1000) fail("--samples must be at least 1000");
            break;
    }
    if (mode != Mode::simulate) (void)grid.values();
}

Table run_p2p(const SweepConfig& config) {
    Table t;
    t.columns = {"delta", "h_u", "h_u_envelope"};
    for (double d : config.grid.values()) t.rows.push_back({d, h_u(d), h_u_envelope(d)});
    return t;
}

Table run_quantized(const SweepConfig& config) {
    const std::int64_t k = *config.k_levels;
    Table t;
    t.columns = {"delta", "lower_bound", "upper_bound", "allocation_entropy"};
    for (double d : config.grid.values()) {
        const Allocation a = solve_allocation(d, k);
        t.rows.push_back({d, lower_bound_q(d, k), upper_bound_q(d, k), a.cond_entropy_bits});
    }
    return t;
}

Table run_noisy(const SweepConfig& config) {
    const double alpha = *config.alpha;
    const auto frontier = achievability_points(alpha);
    Table t;
    t.columns = {"delta", "lower_bound", "upper_bound", "feasible"};
    for (double d : config.grid.values()) {
        double upper = std::numeric_limits<double>::infinity();
        double feasible = 0.0;
        try {
            upper = upper_bound_n(d, frontier);
            feasible = 1.0;
        } catch (const InfeasibleError&) {
            // Row is kept and flagged rather than dropped.
        }
        t.rows.push_back({d, lower_bound_n(d, alpha), upper, feasible});
    }
    return t;
}

namespace {

Scheme build_scheme(const SchemeSpec& spec) {
    if (!spec.scheme_file.empty()) return scheme_from_json_file(spec.scheme_file);
    if (spec.kind == "p2p") return make_p2p_scheme(spec.p);
    if (spec.kind == "quantized") {
        if (!spec.k_levels) fail("quantized scheme requires --k");
        std::vector<double> per_bin = spec.per_bin_p;
        if (per_bin.empty()) per_bin.assign(static_cast<std::size_t>(*spec.k_levels), spec.p);
        if (static_cast<std::int64_t>(per_bin.size()) != *spec.k_levels)
            fail("--p must list one cell width per level (or a single shared width)");
        return make_quantized_si_scheme(*spec.k_levels, per_bin);
    }
    if (spec.kind == "noisy") {
        if (!spec.alpha) fail("noisy scheme requires --alpha");
        return make_noisy_si_scheme(spec.p, *spec.alpha);
    }
    fail("unknown scheme kind: " + spec.kind);
    return {};
}

} // namespace

SimulateReport run_simulate(const SweepConfig& config) {
    const Scheme scheme = build_scheme(config.scheme);
    const EDPoint exact = exact_eval(scheme);
    const SchemeEntropies ent = exact_entropies(scheme);
    const McEstimate mc = monte_carlo_eval(scheme, config.n_samples, config.seed);
    const double z = mc.se_delta > 0.0
                         ? (mc.delta_hat - exact.delta) / mc.se_delta
                         : (mc.delta_hat == exact.delta ? 0.0
                                                        : std::numeric_limits<double>::infinity());

    SimulateReport r;
    auto put = [&](const std::string& key, const std::string& value) {
        r.fields.emplace_back(key, value);
    };
    const char* model = scheme.model.kind == SideInfoKind::none        ? "none"
                        : scheme.model.kind == SideInfoKind::quantized ? "quantized"
                                                                       : "noisy";
    put("tool", kToolVersion);
    put("rng", kRngVersion);
    put("model", model);
    if (scheme.model.kind == SideInfoKind::quantized)
        put("k", std::to_string(scheme.model.levels));
    if (scheme.model.kind == SideInfoKind::noisy) put("alpha", fmt12(scheme.model.alpha));
    put("indices", std::to_string(scheme.index_count()));
    put("n_samples", std::to_string(mc.n_samples));
    put("seed", std::to_string(mc.seed));
    put("exact_delta", fmt12(exact.delta));
    put("exact_entropy_bits", fmt12(ent.entropy_bits));
    if (ent.cond_entropy_bits) put("exact_cond_entropy_bits", fmt12(*ent.cond_entropy_bits));
    put("mc_delta_hat", fmt12(mc.delta_hat));
    put("mc_se_delta", fmt12(mc.se_delta));
    put("mc_entropy_bits_hat", fmt12(mc.entropy_bits_hat));
    if (mc.cond_entropy_bits_hat)
        put("mc_cond_entropy_bits_hat", fmt12(*mc.cond_entropy_bits_hat));
    put("z_delta", fmt12(z));
    return r;
}

Fig2Data fig2_data(std::int64_t k_levels) {
    if (k_levels < 2) fail("fig2 preset needs K >= 2");
    Fig2Data data;
    data.k_levels = k_levels;
    data.alpha = 1.0 / static_cast<double>(k_levels);
    data.frontier = achievability_points(data.alpha);
    data.delta_max = 0.98 * data.frontier.back().delta;
    data.delta_min = std::max(1.05 * data.frontier.front().delta, 1e-3 * data.delta_max);

    DeltaGrid grid{data.delta_min, data.delta_max, 200, Spacing::log};
    data.table.columns = {"delta", "p2p_entropy", "lower_bound", "quantized_upper",
                          "noisy_upper"};
    for (double d : grid.values()) {
        data.table.rows.push_back({d, h_u(d), lower_bound_q(d, k_levels),
                                   upper_bound_q(d, k_levels), upper_bound_n(d, data.frontier)});
    }
    return data;
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt12(row[i]);
        out << "\n";
    }
}

namespace {

nlohmann::json table_json(const Table& table) {
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : table.rows) arr.push_back(row[i]); // non-finite dumps as null
        cols[table.columns[i]] = std::move(arr);
    }
    return cols;
}

nlohmann::json config_json(const SweepConfig& config) {
    nlohmann::json j;
    j["mode"] = mode_name(config.mode);
    if (config.k_levels) j["k"] = *config.k_levels;
    if (config.alpha) j["alpha"] = *config.alpha;
    if (config.mode != Mode::simulate) {
        j["delta_min"] = config.grid.min;
        j["delta_max"] = config.grid.max;
        j["delta_count"] = config.grid.count;
        j["spacing"] = spacing_name(config.grid.spacing);
    }
    if (config.mode == Mode::simulate) {
        j["samples"] = config.n_samples;
        j["seed"] = config.seed;
    }
    j["format"] = format_name(config.format);
    return j;
}

} // namespace

void write_json(const Table& table, const SweepConfig& config, std::ostream& out) {
    nlohmann::json j;
    j["columns"] = table_json(table);
    j["metadata"] = {{"version", kToolVersion}, {"config", config_json(config)}};
    out << j.dump(2) << "\n";
}

void write_report_csv(const SimulateReport& report, std::ostream& out) {
    for (std::size_t i = 0; i < report.fields.size(); ++i)
        out << (i ? "," : "") << report.fields[i].first;
    out << "\n";
    for (std::size_t i = 0; i < report.fields.size(); ++i)
        out << (i ? "," : "") << report.fields[i].second;
    out << "\n";
}

void write_report_json(const SimulateReport& report, std::ostream& out) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, value] : report.fields) j[key] = value;
    out << j.dump(2) << "\n";
}

namespace {

void write_to(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    if (path.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    writer(out);
    if (!out) throw std::runtime_error("failed while writing: " + path);
}

} // namespace

int run_command(const SweepConfig& config) {
    config.validate();
    if (config.mode == Mode::simulate) {
        const SimulateReport report = run_simulate(config);
        write_to(config.out_path, [&](std::ostream& out) {
            if (config.format == OutputFormat::csv)
                write_report_csv(report, out);
            else
                write_report_json(report, out);
        });
        return 0;
    }
    Table table;
    switch (config.mode) {
        case Mode::p2p: table = run_p2p(config); break;
        case Mode::quantized: table = run_quantized(config); break;
        case Mode::noisy: table = run_noisy(config); break;
        case Mode::simulate: break;
    }
    write_to(config.out_path, [&](std::ostream& out) {
        if (config.format == OutputFormat::csv)
            write_csv(table, out);
        else
            write_json(table, config, out);
    });
    return 0;
}

std::vector<std::string> run_fig2(const std::string& base_path, OutputFormat format) {
    std::vector<std::string> written;
    for (std::int64_t k : {std::int64_t{4}, std::int64_t{32}}) {
        const Fig2Data data = fig2_data(k);
        std::string path = base_path.empty() ? std::string("fig2") : base_path;
        const std::string suffix = "_k" + std::to_string(k);
        const auto dot = path.find_last_of('.');
        if (dot == std::string::npos)
            path += suffix + (format == OutputFormat::csv ? ".csv" : ".json");
        else
            path.insert(dot, suffix);
        write_to(path, [&](std::ostream& out) {
            if (format == OutputFormat::csv) {
                write_csv(data.table, out);
            } else {
                nlohmann::json j;
                j["columns"] = table_json(data.table);
                j["metadata"] = {{"version", kToolVersion},
                                 {"preset", "fig2"},
                                 {"k", data.k_levels},
                                 {"alpha", data.alpha},
                                 {"delta_min", data.delta_min},
                                 {"delta_max", data.delta_max}};
                out << j.dump(2) << "\n";
            }
        });
        written.push_back(path);
    }
    return written;
}

} // namespace wz
