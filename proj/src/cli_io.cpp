#include "surfch/cli_io.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace surfch {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& raw, int line, const std::string& key)
{
    const std::string s = trim(raw);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError(line, key + ": expected a number, got '" + raw + "'");
    return v;
}

std::int64_t to_int(const std::string& raw, int line, const std::string& key)
{
    const std::string s = trim(raw);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(line, key + ": expected an integer, got '" + raw + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> to_double_list(const std::string& raw, int line, const std::string& key)
{
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']')
            throw ConfigError(line, key + ": unbalanced brackets");
        s = trim(s.substr(1, s.size() - 2));
    }
    std::vector<double> out;
    if (s.empty())
        return out;
    for (const std::string& part : split(s, ','))
        out.push_back(to_double(part, line, key));
    return out;
}

std::vector<ScheduleEntry> to_schedule(const std::string& raw, int line)
{
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']')
            throw ConfigError(line, "schedule: unbalanced brackets");
        s = trim(s.substr(1, s.size() - 2));
    }
    std::vector<ScheduleEntry> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size()
               && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
            ++pos;
        if (pos >= s.size())
            break;
        if (s[pos] != '(')
            throw ConfigError(line, "schedule: expected '(t_end, tau)' pairs");
        const std::size_t close = s.find(')', pos);
        if (close == std::string::npos)
            throw ConfigError(line, "schedule: missing ')'");
        const auto parts = split(s.substr(pos + 1, close - pos - 1), ',');
        if (parts.size() != 2)
            throw ConfigError(line, "schedule: each pair needs exactly (t_end, tau)");
        ScheduleEntry entry;
        entry.t_end = to_double(parts[0], line, "schedule t_end");
        entry.tau = to_double(parts[1], line, "schedule tau");
        if (!(entry.tau > 0.0))
            throw ConfigError(line, "schedule: tau must be positive");
        if (!(entry.t_end > 0.0))
            throw ConfigError(line, "schedule: t_end must be positive");
        if (!out.empty() && entry.t_end <= out.back().t_end)
            throw ConfigError(line, "schedule: t_end values must strictly increase");
        out.push_back(entry);
        pos = close + 1;
    }
    return out;
}

const char* mode_name(RunMode mode)
{
    switch (mode) {
    case RunMode::converge: return "converge";
    case RunMode::simulate: return "simulate";
    case RunMode::project_test: return "project-test";
    case RunMode::geometry_check: return "geometry-check";
    }
    return "?";
}

} // namespace

Box RunConfig::box() const
{
    Box b;
    b.lo = Vec3::Constant(box_lo);
    b.hi = Vec3::Constant(box_hi);
    return b;
}

int RunConfig::cells_per_axis() const
{
    if (n > 0)
        return n;
    const double h = target_h > 0.0 ? target_h : 0.1;
    return std::max(1, static_cast<int>(std::lround((box_hi - box_lo) / h)));
}

LevelSet RunConfig::make_levelset() const
{
    if (surface == "sphere")
        return sphere_levelset(radius);
    return six_hole_levelset();
}

RunConfig parse_config(const std::string& text, RunMode mode)
{
    RunConfig cfg;
    cfg.mode = mode;

    bool epsilon_set = false, box_set = false, levels_set = false, ic_set = false;
    bool n_set = false, h_set = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw = raw.substr(0, hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(lineno, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(lineno, "empty section name");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(lineno, "empty key");
        const std::string full = section.empty() ? key : section + "." + key;

        if (full == "mode") {
            if (value != mode_name(mode))
                throw ConfigError(lineno, "mode '" + value + "' does not match subcommand '"
                                              + mode_name(mode) + "'");
        } else if (full == "surface") {
            if (value != "sphere" && value != "sixhole")
                throw ConfigError(lineno, "surface: expected 'sphere' or 'sixhole'");
            cfg.surface = value;
        } else if (full == "radius") {
            cfg.radius = to_double(value, lineno, "radius");
            if (!(cfg.radius > 0.0))
                throw ConfigError(lineno, "radius must be positive");
        } else if (full == "box") {
            const auto vals = to_double_list(value, lineno, "box");
            if (vals.size() != 2 || !(vals[1] > vals[0]))
                throw ConfigError(lineno, "box: expected 'lo, hi' with hi > lo");
            cfg.box_lo = vals[0];
            cfg.box_hi = vals[1];
            box_set = true;
        } else if (full == "n") {
            const std::int64_t v = to_int(value, lineno, "n");
            if (v < 1)
                throw ConfigError(lineno, "n must be >= 1");
            cfg.n = static_cast<int>(v);
            n_set = true;
        } else if (full == "h") {
            cfg.target_h = to_double(value, lineno, "h");
            if (!(cfg.target_h > 0.0))
                throw ConfigError(lineno, "h must be positive");
            h_set = true;
        } else if (full == "epsilon") {
            cfg.scheme.epsilon = to_double(value, lineno, "epsilon");
            if (!(cfg.scheme.epsilon > 0.0))
                throw ConfigError(lineno, "epsilon must be positive");
            epsilon_set = true;
        } else if (full == "mobility") {
            cfg.scheme.mobility = to_double(value, lineno, "mobility");
            if (!(cfg.scheme.mobility > 0.0))
                throw ConfigError(lineno, "mobility must be positive");
        } else if (full == "beta_s") {
            cfg.scheme.beta_s = to_double(value, lineno, "beta_s");
            if (cfg.scheme.beta_s < 0.0)
                throw ConfigError(lineno, "beta_s must be nonnegative");
        } else if (full == "potential.K") {
            const double k = to_double(value, lineno, "potential.K");
            if (!(k > 1.0))
                throw ConfigError(lineno, "potential.K must exceed 1");
            cfg.potential = PotentialParams(k);
        } else if (full == "seed") {
            const std::int64_t v = to_int(value, lineno, "seed");
            if (v < 0)
                throw ConfigError(lineno, "seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (full == "schedule") {
            cfg.scheme.schedule = to_schedule(value, lineno);
        } else if (full == "snapshot_times") {
            cfg.snapshot_times = to_double_list(value, lineno, "snapshot_times");
            for (double t : cfg.snapshot_times)
                if (t < 0.0)
                    throw ConfigError(lineno, "snapshot_times must be nonnegative");
            std::sort(cfg.snapshot_times.begin(), cfg.snapshot_times.end());
        } else if (full == "levels") {
            cfg.levels = to_double_list(value, lineno, "levels");
            if (cfg.levels.empty())
                throw ConfigError(lineno, "levels must not be empty");
            for (double h : cfg.levels)
                if (!(h > 0.0))
                    throw ConfigError(lineno, "levels must be positive mesh sizes");
            std::sort(cfg.levels.rbegin(), cfg.levels.rend());
            for (std::size_t l = 1; l < cfg.levels.size(); ++l)
                if (cfg.levels[l] == cfg.levels[l - 1])
                    throw ConfigError(lineno, "levels must be distinct");
            levels_set = true;
        } else if (full == "t_end") {
            cfg.t_end = to_double(value, lineno, "t_end");
            if (!(cfg.t_end > 0.0))
                throw ConfigError(lineno, "t_end must be positive");
        } else if (full == "c_tau") {
            cfg.c_tau = to_double(value, lineno, "c_tau");
            if (!(cfg.c_tau > 0.0))
                throw ConfigError(lineno, "c_tau must be positive");
        } else if (full == "ic") {
            if (value != "random" && value != "ritz" && value != "interpolate")
                throw ConfigError(lineno, "ic: expected 'random', 'ritz' or 'interpolate'");
            cfg.ic = value;
            ic_set = true;
        } else {
            throw ConfigError(lineno, "unknown key '" + full + "'");
        }
    }

    if (n_set && h_set)
        throw ConfigError("give either 'n' or 'h', not both");
    if (!box_set) {
        const double half = (cfg.surface == "sphere") ? 1.25 : 2.25;
        cfg.box_lo = -half;
        cfg.box_hi = half;
    }
    if (!epsilon_set)
        cfg.scheme.epsilon = (mode == RunMode::converge) ? 0.1 : 0.05;
    if (!ic_set)
        cfg.ic = (mode == RunMode::simulate) ? "random" : "ritz";
    if (!levels_set)
        cfg.levels = (mode == RunMode::geometry_check) ? std::vector<double>{0.4, 0.2, 0.1}
                                                       : std::vector<double>{0.4, 0.2, 0.1, 0.05};

    if (mode == RunMode::simulate && cfg.ic != "random")
        throw ConfigError("simulate supports ic = random only");
    if (mode == RunMode::converge || mode == RunMode::project_test) {
        if (cfg.surface != "sphere" || cfg.radius != 1.0)
            throw ConfigError(std::string(mode_name(mode))
                              + " requires surface = sphere with radius = 1 (unit-sphere exact solution)");
        if (cfg.ic == "random")
            throw ConfigError("converge requires ic = ritz or ic = interpolate");
    }
    if (mode == RunMode::geometry_check && cfg.surface != "sphere")
        throw ConfigError("geometry-check requires surface = sphere (analytic reference area)");

    return cfg;
}

RunConfig load_config(const std::string& path, RunMode mode)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), mode);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    if (std::strtod(buf, nullptr) != v)
        std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_csv: cannot open '" + path + "'");
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out << (c ? "," : "") << table.header[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << row[c];
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

CsvTable read_csv_stream(std::istream& in)
{
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() && in.eof())
            break;
        std::vector<std::string> cells;
        for (const std::string& cell : split(line, ','))
            cells.push_back(trim(cell));
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_csv: cannot open '" + path + "'");
    return read_csv_stream(in);
}

void write_vtk(const CutSurface& cut, const NarrowBand& band, const TraceSpace& space,
               const std::vector<std::pair<std::string, const FieldVector*>>& fields,
               const std::string& path)
{
    for (const auto& [name, field] : fields)
        if (!field || field->coeffs.size() != space.n_dof())
            throw std::invalid_argument("write_vtk: field '" + name + "' does not match the space");

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_vtk: cannot open '" + path + "'");

    const std::size_t ntri = cut.tris.size();
    out << "# vtk DataFile Version 3.0\n";
    out << "surfch cut surface\n";
    out << "ASCII\n";
    out << "DATASET POLYDATA\n";
    out << "POINTS " << 3 * ntri << " double\n";
    for (const CutTriangle& ct : cut.tris)
        for (const Vec3& v : ct.tri.v)
            out << format_double(v[0]) << " " << format_double(v[1]) << " " << format_double(v[2])
                << "\n";
    out << "POLYGONS " << ntri << " " << 4 * ntri << "\n";
    for (std::size_t t = 0; t < ntri; ++t)
        out << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";

    if (!fields.empty()) {
        out << "POINT_DATA " << 3 * ntri << "\n";
        for (const auto& [name, field] : fields) {
            out << "SCALARS " << name << " double 1\n";
            out << "LOOKUP_TABLE default\n";
            for (const CutTriangle& ct : cut.tris)
                for (const Vec3& v : ct.tri.v)
                    out << format_double(eval_field(space, *field, band, ct.band_tet, v).value)
                        << "\n";
        }
    }
    if (!out)
        throw std::runtime_error("write_vtk: write failed for '" + path + "'");
}

void write_history_csv(const std::vector<HistoryEntry>& history, const std::string& path)
{
    CsvTable table;
    table.header = {"t", "energy", "mass"};
    table.rows.reserve(history.size());
    for (const HistoryEntry& e : history)
        table.rows.push_back({format_double(e.t), format_double(e.energy), format_double(e.mass)});
    write_csv(path, table);
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name)
{
    return (fs::path(dir) / name).string();
}

int cmd_simulate(const RunConfig& cfg)
{
    fs::create_directories(cfg.out_dir);
    const LevelSet ls = cfg.make_levelset();
    const Discretization disc = discretize(ls, cfg.box(), cfg.cells_per_axis());
    std::cout << "mesh: n = " << disc.mesh.cells_per_axis() << ", h = " << disc.mesh.h()
              << ", band tets = " << disc.band.tets.size() << ", dofs = " << disc.space.n_dof()
              << ", area = " << disc.area << "\n";

    CahnHilliardStepper stepper(disc, cfg.scheme, cfg.potential);
    ChState state;
    state.c = random_initial_condition(disc.space, cfg.seed);
    state.mu = FieldVector{Eigen::VectorXd::Zero(disc.space.n_dof()), FieldRole::potential};

    std::vector<double> snaps = cfg.snapshot_times;
    std::size_t next_snap = 0;
    const double t_final = cfg.scheme.schedule.empty() ? 0.0 : cfg.scheme.schedule.back().t_end;
    const double tol = 1e-9 * std::max(1.0, t_final);
    const StepMonitor monitor = [&](const ChState& s) {
        while (next_snap < snaps.size() && snaps[next_snap] <= s.t + tol) {
            char name[64];
            std::snprintf(name, sizeof(name), "snapshot_%03zu_t%g.vtk", next_snap,
                          snaps[next_snap]);
            write_vtk(disc.cut, disc.band, disc.space, {{"c", &s.c}, {"mu", &s.mu}},
                      join(cfg.out_dir, name));
            ++next_snap;
        }
    };

    state = run(stepper, std::move(state), nullptr, monitor);
    write_history_csv(state.history, join(cfg.out_dir, "history.csv"));

    double max_increase = 0.0;
    for (std::size_t k = 1; k < state.history.size(); ++k)
        max_increase = std::max(max_increase, state.history[k].energy - state.history[k - 1].energy);
    std::cout << "steps: " << state.step << ", factorizations: " << stepper.factorization_count()
              << "\n";
    std::cout << "energy: " << state.history.front().energy << " -> " << state.history.back().energy
              << " (max single-step increase " << max_increase << ")\n";
    std::cout << "mass drift: "
              << std::abs(state.history.back().mass - state.history.front().mass) << "\n";
    std::cout << "wrote " << join(cfg.out_dir, "history.csv") << "\n";
    return 0;
}

std::string eoc_cell(double value, bool valid)
{
    return valid ? format_double(value) : "-";
}

int cmd_converge(const RunConfig& cfg, double eoc_threshold)
{
    fs::create_directories(cfg.out_dir);
    ConvergenceSetup setup;
    setup.box = cfg.box();
    setup.t_final = cfg.t_end;
    setup.c_tau = cfg.c_tau;
    setup.epsilon = cfg.scheme.epsilon;
    setup.beta_s = cfg.scheme.beta_s;
    setup.mobility = cfg.scheme.mobility;
    setup.potential = cfg.potential;
    setup.ritz_ic = (cfg.ic != "interpolate");

    const ErrorReport report = converge_study(setup, cfg.levels);

    CsvTable table;
    table.header = {"level", "h",         "err_c_L2", "eoc_c", "err_mu_L2", "eoc_mu",
                    "err_c_L2L2", "eoc", "err_mu_L2L2", "eoc"};
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        const LevelErrors& e = report.levels[l];
        const bool has_eoc = l > 0;
        table.rows.push_back({std::to_string(l), format_double(e.h), format_double(e.c_l2),
                              eoc_cell(has_eoc ? report.eoc(l - 1, 0) : 0, has_eoc),
                              format_double(e.mu_l2),
                              eoc_cell(has_eoc ? report.eoc(l - 1, 1) : 0, has_eoc),
                              format_double(e.c_l2l2),
                              eoc_cell(has_eoc ? report.eoc(l - 1, 2) : 0, has_eoc),
                              format_double(e.mu_l2l2),
                              eoc_cell(has_eoc ? report.eoc(l - 1, 3) : 0, has_eoc)});
    }
    const std::string csv_path = join(cfg.out_dir, "convergence.csv");
    write_csv(csv_path, table);

    std::cout << "level  h          err_c_L2     eoc    err_mu_L2    eoc    err_c_L2L2   eoc    err_mu_L2L2  eoc\n";
    for (std::size_t l = 0; l < report.levels.size(); ++l) {
        const LevelErrors& e = report.levels[l];
        std::printf("%-6zu %-10.4g %-12.5g %-6s %-12.5g %-6s %-12.5g %-6s %-12.5g %-6s\n", l, e.h,
                    e.c_l2, l ? std::to_string(report.eoc(l - 1, 0)).substr(0, 5).c_str() : "-",
                    e.mu_l2, l ? std::to_string(report.eoc(l - 1, 1)).substr(0, 5).c_str() : "-",
                    e.c_l2l2, l ? std::to_string(report.eoc(l - 1, 2)).substr(0, 5).c_str() : "-",
                    e.mu_l2l2, l ? std::to_string(report.eoc(l - 1, 3)).substr(0, 5).c_str() : "-");
    }
    std::cout << "wrote " << csv_path << "\n";

    if (report.levels.size() >= 2) {
        const std::size_t last = report.levels.size() - 2;
        double min_eoc = report.eoc(last, 0);
        for (int which = 1; which < 4; ++which)
            min_eoc = std::min(min_eoc, report.eoc(last, which));
        std::cout << "finest-transition EOC (min over norms): " << min_eoc << "\n";
        if (min_eoc < eoc_threshold) {
            std::cerr << "converge: EOC " << min_eoc << " below threshold " << eoc_threshold << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_project_test(const RunConfig& cfg, double eoc_threshold)
{
    fs::create_directories(cfg.out_dir);
    const LevelSet ls = sphere_levelset(1.0);
    const double edge = cfg.box().edge();

    const auto value = [](const Vec3& x) { return x[0] * x[1]; };
    const auto tangential = [](const Vec3& x) {
        const Vec3 n = x.normalized();
        const Vec3 grad(x[1], x[0], 0.0);
        return Vec3(grad - n.dot(grad) * n);
    };
    AnalyticField exact;
    exact.value = [](const Vec3& x, double) { return x[0] * x[1]; };

    std::vector<double> hs, errs;
    for (double target : cfg.levels) {
        const int n = std::max(1, static_cast<int>(std::lround(edge / target)));
        const Discretization disc = discretize(ls, cfg.box(), n);
        const FieldVector projected = ritz_projection(disc, value, tangential);
        hs.push_back(disc.mesh.h());
        errs.push_back(surface_l2_error(disc, projected, exact, 0.0));
    }

    CsvTable table;
    table.header = {"level", "h", "err_pi", "eoc"};
    std::cout << "level  h          err_pi       eoc\n";
    double last_eoc = 0.0;
    for (std::size_t l = 0; l < hs.size(); ++l) {
        const bool has_eoc = l > 0;
        if (has_eoc)
            last_eoc = std::log(errs[l - 1] / errs[l]) / std::log(hs[l - 1] / hs[l]);
        table.rows.push_back({std::to_string(l), format_double(hs[l]), format_double(errs[l]),
                              eoc_cell(last_eoc, has_eoc)});
        std::printf("%-6zu %-10.4g %-12.5g %s\n", l, hs[l], errs[l],
                    has_eoc ? std::to_string(last_eoc).substr(0, 5).c_str() : "-");
    }
    const std::string csv_path = join(cfg.out_dir, "projection.csv");
    write_csv(csv_path, table);
    std::cout << "wrote " << csv_path << "\n";

    if (hs.size() >= 2 && last_eoc < eoc_threshold) {
        std::cerr << "project-test: EOC " << last_eoc << " below threshold " << eoc_threshold << "\n";
        return 1;
    }
    return 0;
}

int cmd_geometry_check(const RunConfig& cfg, double eoc_threshold)
{
    fs::create_directories(cfg.out_dir);
    const LevelSet ls = cfg.make_levelset();
    const double edge = cfg.box().edge();
    const double exact_area = 4.0 * M_PI * cfg.radius * cfg.radius;

    std::vector<double> hs, area_errs, angles;
    std::vector<double> areas;
    for (double target : cfg.levels) {
        const int n = std::max(1, static_cast<int>(std::lround(edge / target)));
        const BackgroundMesh mesh(cfg.box(), n);
        const NodalField phi = interpolate_p1(ls, mesh);
        const CutResult cut = build_cut_surface(phi, mesh);

        double max_angle = 0.0;
        for (const BandTet& bt : cut.band.tets) {
            const Vec3 exact = ls.gradient(bt.tet.barycenter()).normalized();
            const double angle =
                std::atan2(bt.frame.normal.cross(exact).norm(), bt.frame.normal.dot(exact));
            max_angle = std::max(max_angle, angle);
        }
        hs.push_back(mesh.h());
        areas.push_back(cut.surface.total_area);
        area_errs.push_back(std::abs(cut.surface.total_area - exact_area) / exact_area);
        angles.push_back(max_angle);
    }

    CsvTable table;
    table.header = {"level", "h", "area", "area_rel_err", "eoc", "max_normal_angle", "eoc"};
    std::cout << "level  h          area         area_rel_err eoc    max_angle    eoc\n";
    double last_eoc = 0.0;
    for (std::size_t l = 0; l < hs.size(); ++l) {
        const bool has_eoc = l > 0;
        double angle_eoc = 0.0;
        if (has_eoc) {
            last_eoc = std::log(area_errs[l - 1] / area_errs[l]) / std::log(hs[l - 1] / hs[l]);
            angle_eoc = std::log(angles[l - 1] / angles[l]) / std::log(hs[l - 1] / hs[l]);
        }
        table.rows.push_back({std::to_string(l), format_double(hs[l]), format_double(areas[l]),
                              format_double(area_errs[l]), eoc_cell(last_eoc, has_eoc),
                              format_double(angles[l]), eoc_cell(angle_eoc, has_eoc)});
        std::printf("%-6zu %-10.4g %-12.6g %-12.4g %-6s %-12.4g %s\n", l, hs[l], areas[l],
                    area_errs[l], has_eoc ? std::to_string(last_eoc).substr(0, 5).c_str() : "-",
                    angles[l], has_eoc ? std::to_string(angle_eoc).substr(0, 5).c_str() : "-");
    }
    const std::string csv_path = join(cfg.out_dir, "geometry.csv");
    write_csv(csv_path, table);
    std::cout << "wrote " << csv_path << "\n";

    if (hs.size() >= 2 && last_eoc < eoc_threshold) {
        std::cerr << "geometry-check: area EOC " << last_eoc << " below threshold " << eoc_threshold
                  << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int run_main(int argc, const char* const* argv)
{
    CLI::App app{"Stabilized trace finite element solver for the Cahn-Hilliard equation on "
                 "level-set surfaces"};
    app.require_subcommand(1);
    app.footer("Config keys (key = value; # comments):\n"
               "  surface = sphere|sixhole   radius = 1.0        box = lo, hi\n"
               "  n = cells per axis         h = target mesh size (n = round(edge/h), default h = 0.1)\n"
               "  epsilon (default 0.05; 0.1 in converge)        mobility = 1.0\n"
               "  beta_s = 2.0               potential.K = 1.1   seed = 0\n"
               "  schedule = [(t_end, tau), ...]                 snapshot_times = [t0, t1, ...]\n"
               "  levels = [0.4, 0.2, 0.1, 0.05]                 t_end = 0.1 (converge horizon)\n"
               "  c_tau = 0.5 (tau = c_tau*h^2 in converge)      ic = random|ritz|interpolate");

    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    double eoc_threshold = 0.0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Configuration file");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker threads for assembly")
            ->check(CLI::PositiveNumber);
        sub->add_option("--eoc-threshold", eoc_threshold,
                        "Exit 1 when the observed order falls below this value");
    };

    CLI::App* converge =
        app.add_subcommand("converge", "Manufactured-solution convergence study (unit sphere)");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Phase separation run: history.csv plus VTK snapshots");
    CLI::App* project =
        app.add_subcommand("project-test", "Ritz projection accuracy study (unit sphere)");
    CLI::App* geometry =
        app.add_subcommand("geometry-check", "Discrete area and normal accuracy study");
    for (CLI::App* sub : {converge, simulate, project, geometry})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_threads(threads);
        RunMode mode = RunMode::simulate;
        if (converge->parsed())
            mode = RunMode::converge;
        else if (project->parsed())
            mode = RunMode::project_test;
        else if (geometry->parsed())
            mode = RunMode::geometry_check;

        RunConfig cfg =
            config_path.empty() ? parse_config("", mode) : load_config(config_path, mode);
        cfg.out_dir = out_dir;

        switch (mode) {
        case RunMode::simulate: return cmd_simulate(cfg);
        case RunMode::converge: return cmd_converge(cfg, eoc_threshold);
        case RunMode::project_test: return cmd_project_test(cfg, eoc_threshold);
        case RunMode::geometry_check: return cmd_geometry_check(cfg, eoc_threshold);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace surfch
