#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wz/noisy_si.hpp"
#include "wz/scheme.hpp"

namespace wz {

inline constexpr const char* kToolVersion = "wzbounds/1.0.0";

enum class Mode { p2p, quantized, noisy, simulate };
enum class Spacing { linear, log };
enum class OutputFormat { csv, json };

struct DeltaGrid {
    double min = 1e-3;
    double max = kMaxDistortion;
    int count = 200;
    Spacing spacing = Spacing::linear;

    std::vector<double> values() const;
};

/// Inline scheme description for the simulate mode (alternative to a
/// serialized scheme file).
struct SchemeSpec {
    std::string kind; ///< "p2p" | "quantized" | "noisy"
    double p = 0.5;
    std::optional<std::int64_t> k_levels;
    std::vector<double> per_bin_p; ///< quantized; defaults to K copies of p
    std::optional<double> alpha;
    std::string scheme_file; ///< wins over the inline fields when set
};

struct SweepConfig {
    Mode mode = Mode::p2p;
    std::optional<std::int64_t> k_levels;
    std::optional<double> alpha;
    DeltaGrid grid;
    std::int64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::csv;
    std::string out_path; ///< empty = stdout
    SchemeSpec scheme;

    /// Mode-specific presence/range checks; throws std::invalid_argument.
    void validate() const;
};

/// Column-oriented result table; quiet NaN/inf cells are legal and render
/// as "nan"/"inf" in CSV and null in JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table run_p2p(const SweepConfig& config);
Table run_quantized(const SweepConfig& config);
Table run_noisy(const SweepConfig& config);

/// Exact evaluation, Monte Carlo estimate and the distortion z-score for
/// the configured scheme, as a key/value report.
struct SimulateReport {
    std::vector<std::pair<std::string, std::string>> fields; ///< ordered
};
SimulateReport run_simulate(const SweepConfig& config);

/// Everything the fig2 preset needs for one subfigure: the four-curve table
/// plus the frontier it queried and the grid range it chose.
struct Fig2Data {
    std::int64_t k_levels = 4;
    double alpha = 0.25;
    double delta_min = 0.0;
    double delta_max = 0.0;
    Table table;
    std::vector<AchievabilityPoint> frontier;
};
Fig2Data fig2_data(std::int64_t k_levels);

/// 12-significant-digit CSV with a header row.
void write_csv(const Table& table, std::ostream& out);
/// Columns as arrays plus a metadata object (tool version and config echo;
/// no timestamps, so identical configs give identical bytes).
void write_json(const Table& table, const SweepConfig& config, std::ostream& out);

void write_report_csv(const SimulateReport& report, std::ostream& out);
void write_report_json(const SimulateReport& report, std::ostream& out);

/// Runs the command described by the config and writes the output file
/// (or stdout).  Returns the process exit code.
int run_command(const SweepConfig& config);

/// Emits the two fig2 preset files (suffixes _k4 / _k32 before the
/// extension of base_path).  Returns the paths written.
std::vector<std::string> run_fig2(const std::string& base_path, OutputFormat format);

} // namespace wz
