#pragma once

#include "tropo/model.hpp"

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tropo::cli {

inline constexpr const char* kSchemaVersion = "tropo-run/1";
inline constexpr const char* kFigureSchemaVersion = "tropo-figure/1";

enum class SweepKind { Frequency, Tau, Parameter };
enum class Format { Csv, JsonLines };

enum class Quantity { Spectra, Covariance, Purity, PartialPurity, Squeezing, Glauber, Counting };

const char* to_string(Quantity q);

struct RunConfig {
    model::TropoParams params;
    SweepKind sweep = SweepKind::Frequency;
    std::vector<double> omegas; // rad/s; a single entry outside a frequency sweep
    std::vector<double> taus;   // s; a single entry outside a tau sweep, empty if unused
    std::string param_name;
    std::vector<double> param_values;
    std::vector<Quantity> outputs;
    std::filesystem::path output_path;
    Format format = Format::Csv;
    unsigned threads = 0; // 0: hardware concurrency
};

/// One evaluation: the parameters, frequency and counting window for a sweep index.
struct SweepPoint {
    std::size_t index = 0;
    model::TropoParams params;
    double omega = 0.0;
    double tau = 0.0; // 0 when no window was configured
};

/// Parses a flat YAML mapping. Relative output paths resolve against the config's directory.
/// Throws ConfigError (malformed, unknown or missing keys) or InvalidParameter.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

std::vector<SweepPoint> expand(const RunConfig& c);

/// Fixed column order of the run table; json-lines uses the same names.
const std::vector<std::string>& columns();

/// One row per sweep point per requested quantity. Cells not produced by a quantity are NaN.
struct Row {
    std::size_t point = 0;
    Quantity quantity = Quantity::Spectra;
    std::vector<double> cells; // indexed like columns()
};

struct RunResult {
    std::vector<Row> rows;
    std::vector<std::string> warnings;
};

/// Evaluates every sweep point on a worker pool; rows come back in sweep order.
RunResult evaluate(const RunConfig& c);

void write_table(const RunConfig& c, const RunResult& r);

/// Prints one `error kind=... exit=... message="..."` line and returns the exit code for the failure.
int report_failure(std::ostream& err, const std::exception_ptr& ep);

/// Exit code of the run subcommand: 0, 1 (invalid input), 2 (I/O) or 3 (numerical failure).
int run(const std::filesystem::path& config, std::ostream& err);
int selftest(std::ostream& out, std::ostream& err);
int figures(const std::string& id, const std::filesystem::path& outdir, std::ostream& out, std::ostream& err);

/// Entry point behind the `tropo` executable.
int main(int argc, char** argv);

} // namespace tropo::cli
