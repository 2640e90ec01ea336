#pragma once

#include "surfch/verification.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace surfch {

enum class RunMode { converge, simulate, project_test, geometry_check };

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    explicit ConfigError(const std::string& what) : std::runtime_error(what), line_(0) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Fully validated run description. Parsing applies per-mode defaults
/// (documented in --help); unknown keys are rejected with their line number.
struct RunConfig {
    RunMode mode = RunMode::simulate;

    std::string surface = "sphere"; // sphere | sixhole
    double radius = 1.0;
    double box_lo = 0.0, box_hi = 0.0; // cube bounds; defaulted per surface
    int n = 0;                          // cells per axis; derived from target_h when 0
    double target_h = 0.0;

    SchemeParams scheme;
    PotentialParams potential{1.1};
    std::uint64_t seed = 0;
    std::vector<double> snapshot_times;
    std::vector<double> levels; // target mesh sizes for the study modes
    double t_end = 0.1;         // converge horizon
    double c_tau = 0.5;         // tau = c_tau * h^2 in converge mode
    std::string ic = "";        // random | ritz | interpolate (defaulted per mode)

    std::string out_dir = ".";

    Box box() const;
    int cells_per_axis() const;
    LevelSet make_levelset() const;
};

RunConfig parse_config(const std::string& text, RunMode mode);
RunConfig load_config(const std::string& path, RunMode mode);

/// Minimal CSV: quoted cells are not supported, values must not contain commas.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);
CsvTable read_csv_stream(std::istream& in);

/// Shortest round-trippable decimal form.
std::string format_double(double v);

/// Legacy ASCII VTK POLYDATA triangle soup (3 points per triangle, no
/// deduplication) with one scalar block per named field, sampled at the
/// cut-triangle vertices.
void write_vtk(const CutSurface& cut, const NarrowBand& band, const TraceSpace& space,
               const std::vector<std::pair<std::string, const FieldVector*>>& fields,
               const std::string& path);

void write_history_csv(const std::vector<HistoryEntry>& history, const std::string& path);

/// CLI entry point; returns the process exit code (0 ok, 1 validated
/// failure, 2 usage or config error).
int run_main(int argc, const char* const* argv);

} // namespace surfch
