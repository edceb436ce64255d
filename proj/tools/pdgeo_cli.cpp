// pdgeo: ε-ball hulls, horoextents and approximate horo-center points for
// datasets of SPD matrices.
//
// JSON results go to stdout (or --output); a human summary goes to stderr.
// Exit codes: 0 ok, 2 bad input or domain error, 3 resource cap, 4 numeric failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pdgeo/ballhull.hpp"
#include "pdgeo/centerpt.hpp"
#include "pdgeo/error.hpp"
#include "pdgeo/io.hpp"
#include "pdgeo/oracles.hpp"

using namespace pdgeo;
using nlohmann::json;

namespace {

struct Config {
    std::string input;
    std::string format = "auto";
    std::string output;
    double epsilon = 0.1;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::size_t grid_cap = kDefaultGridCap;
    double tol = 1e-7;
    std::optional<std::size_t> origin_index;
    bool no_shift = false;
    // command specific
    std::size_t max_points = 0;
    std::string flat;
    std::string direction;
    std::size_t random_count = 0;
    std::size_t n = 2;
    double d_x = -1.0;
    std::string hull_path;
    bool plot_hull = false;
};

std::uint64_t resolve_seed(const Config& c)
{
    if (c.seed) {
        return *c.seed;
    }
    if (const char* env = std::getenv("PDGEO_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw InputError(std::string("PDGEO_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

Dataset load(const Config& c)
{
    Dataset d = load_dataset(c.input, resolve_format(c.input, c.format));
    for (const auto& w : d.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (d.points.empty()) {
        throw InputError(c.input + ": dataset has no points");
    }
    return d;
}

void emit(const Config& c, const std::string& text)
{
    if (c.output.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(c.output, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + c.output + "'");
    }
    out << text << '\n';
}

Vector parse_list(const std::string& s, const std::string& what)
{
    Vector out;
    std::istringstream in(s);
    std::string field;
    while (std::getline(in, field, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(field, &used));
            if (used != field.size()) {
                throw std::invalid_argument(field);
            }
        } catch (const std::exception&) {
            throw InputError(what + ": not a number: '" + field + "'");
        }
    }
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HullOptions hull_options(const Config& c)
{
    HullOptions o;
    o.epsilon = c.epsilon;
    o.grid_cap = c.grid_cap;
    o.threads = c.threads;
    o.shift_origin = !c.no_shift;
    o.origin_index = c.origin_index;
    return o;
}

int cmd_hull(const Config& c)
{
    const Dataset d = load(c);
    const auto t0 = std::chrono::steady_clock::now();
    const BallHull hull = build_eps_ball_hull(d.points, hull_options(c));
    emit(c, dump_json(hull_to_json(hull)));
    std::cerr << "hull: n=" << hull.n << " points=" << d.points.size() << " d_X=" << hull.d_x
              << " grid=" << hull.grid.size() << " horoballs=" << hull.horoballs.size() << " time=" << seconds_since(t0)
              << "s\n";
    return 0;
}

int cmd_center(const Config& c)
{
    const Dataset d = load(c);
    CenterOptions o;
    o.epsilon = c.epsilon;
    o.grid_cap = c.grid_cap;
    o.threads = c.threads;
    o.shift_origin = !c.no_shift;
    o.origin_index = c.origin_index;
    o.point_cap = c.max_points;
    o.solver.tol = c.tol;
    o.seed = resolve_seed(c);
    const auto t0 = std::chrono::steady_clock::now();
    const CenterRun run = approx_horo_center(d.points, o);
    emit(c, dump_json(center_to_json(run.result)));
    std::cerr << "center: constraints=" << run.result.constraints_count << " grid=" << run.result.grid_size
              << " max_violation=" << run.result.max_violation << " objective=" << run.result.objective
              << " iterations=" << run.result.iterations << " time=" << seconds_since(t0) << "s\n";
    return 0;
}

int cmd_extent(const Config& c)
{
    const Dataset d = load(c);
    std::vector<SpdPoint> pts = d.points;
    json shift = nullptr;
    if (!c.no_shift) {
        const std::size_t origin = c.origin_index ? *c.origin_index : discrete_one_center(pts);
        if (origin >= pts.size()) {
            throw DomainError("origin index out of range");
        }
        const SpdPoint q = pts[origin];
        for (auto& p : pts) {
            p = translate_to_identity(q, p);
        }
        shift = origin;
    }
    json results = json::array();
    auto add = [&](const Horofunction& h) {
        const double e = horoextent(h, pts);
        results.push_back({{"Q", matrix_to_json(h.flat().rotation())}, {"a", h.direction()}, {"extent", e}});
        std::cerr << "extent " << e << '\n';
    };
    if (c.random_count > 0) {
        if (!c.direction.empty() || !c.flat.empty()) {
            throw InputError("--random excludes --flat/--direction");
        }
        oracles::Rng rng(resolve_seed(c));
        for (const auto& s : oracles::extent_by_sampling(pts, c.random_count, rng)) {
            add(s.horofunction);
        }
    } else {
        if (c.direction.empty()) {
            throw InputError("extent needs --direction (and optionally --flat) or --random k");
        }
        const std::size_t n = d.n;
        Matrix q = Matrix::identity(n);
        if (!c.flat.empty()) {
            const Vector v = parse_list(c.flat, "--flat");
            if (v.size() != n * n) {
                throw InputError("--flat needs " + std::to_string(n * n) + " row-major entries");
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    q(i, j) = v[i * n + j];
                }
            }
        }
        const Vector a = parse_list(c.direction, "--direction");
        if (a.size() != n) {
            throw InputError("--direction needs " + std::to_string(n) + " entries");
        }
        try {
            add(Horofunction(Flat(q), a));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) +
                              " (hint: pass a unit vector sorted in decreasing order with distinct entries)");
        }
    }
    emit(c, dump_json({{"origin_index", shift}, {"extents", results}, {"seed", resolve_seed(c)}}));
    return 0;
}

int cmd_grid(const Config& c)
{
    std::size_t n = c.n;
    double d_x = c.d_x;
    if (!c.input.empty()) {
        const Dataset d = load(c);
        n = d.n;
        std::vector<SpdPoint> pts = d.points;
        if (!c.no_shift) {
            const std::size_t origin = c.origin_index ? *c.origin_index : discrete_one_center(pts);
            if (origin >= pts.size()) {
                throw DomainError("origin index out of range");
            }
            const SpdPoint q = pts[origin];
            for (auto& p : pts) {
                p = translate_to_identity(q, p);
            }
        }
        d_x = 0.0;
        for (const auto& p : pts) {
            d_x = std::max(d_x, metric_dist(SpdPoint::identity(n), p));
        }
    }
    if (d_x < 0.0) {
        throw InputError("grid needs a dataset or --dx");
    }
    if (n < 2) {
        throw DomainError("grid needs n >= 2");
    }
    const GridResolution hull_res = grid_resolution(c.epsilon, d_x, n);
    const GridResolution center_res = center_grid_resolution(c.epsilon, d_x, n);
    auto describe = [&](const GridResolution& r) -> json {
        if (r.single_flat) {
            return {{"delta", nullptr}, {"cells", 1}, {"fits_cap", true}};
        }
        const double cells = grid_cell_count(n, r.delta);
        const json count = cells < 1e15 ? json(static_cast<std::uint64_t>(cells)) : json(cells);
        return {{"delta", r.delta}, {"cells", count}, {"fits_cap", cells <= static_cast<double>(c.grid_cap)}};
    };
    const json j = {{"n", n},         {"epsilon", c.epsilon},           {"d_X", d_x},
                    {"cap", c.grid_cap}, {"hull", describe(hull_res)}, {"center", describe(center_res)}};
    emit(c, dump_json(j));
    std::cerr << "grid: hull cells=" << j["hull"]["cells"] << " center cells=" << j["center"]["cells"] << '\n';
    return 0;
}

int cmd_plot2(const Config& c)
{
    const Dataset d = load(c);
    if (d.n != 2) {
        throw DomainError("plot2 needs a PD(2) dataset (got n = " + std::to_string(d.n) + ")");
    }
    std::optional<BallHull> hull;
    if (!c.hull_path.empty()) {
        std::ifstream in(c.hull_path);
        if (!in) {
            throw InputError("cannot open '" + c.hull_path + "'");
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw InputError(c.hull_path + ": " + e.what());
        }
        hull = hull_from_json(j);
    } else if (c.plot_hull) {
        hull = build_eps_ball_hull(d.points, hull_options(c));
    }
    std::ostringstream os;
    write_plot2(os, d, hull ? &*hull : nullptr);
    std::string text = os.str();
    text.pop_back();
    emit(c, text);
    return 0;
}

int cmd_validate(const Config& c)
{
    const Dataset d = load(c);
    double log_det_min = INFINITY;
    double log_det_max = -INFINITY;
    double anis = 0.0;
    for (const auto& p : d.points) {
        log_det_min = std::min(log_det_min, p.log_det());
        log_det_max = std::max(log_det_max, p.log_det());
        anis = std::max(anis, geodesic_anisotropy(p));
    }
    const json j = {{"source", d.source},
                    {"n", d.n},
                    {"points", d.points.size()},
                    {"warnings", d.warnings},
                    {"log_det_range", {log_det_min, log_det_max}},
                    {"max_anisotropy", anis},
                    {"one_center_index", discrete_one_center(d.points)}};
    emit(c, dump_json(j));
    std::cerr << "valid: " << d.points.size() << " points in PD(" << d.n << ")\n";
    return 0;
}

void common_flags(CLI::App* sub, Config& c, bool input_required = true)
{
    auto* in = sub->add_option("input", c.input, "dataset file (.json or .csv)");
    if (input_required) {
        in->required();
    }
    sub->add_option("--format", c.format, "json, csv or auto (by extension)")->capture_default_str();
    sub->add_option("--output,-o", c.output, "write the result here instead of stdout");
}

void geometry_flags(CLI::App* sub, Config& c)
{
    sub->add_option("--epsilon", c.epsilon, "approximation parameter")->capture_default_str()->check(
        CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--grid-cap", c.grid_cap, "largest direction grid allowed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--origin-index", c.origin_index, "data point used as origin (default: discrete 1-center)");
    sub->add_flag("--no-shift", c.no_shift, "keep the identity as origin");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SPD-matrix geometry: ε-ball hulls, horoextents, approximate horo-centers"};
    app.require_subcommand(1);
    Config c;

    auto* hull = app.add_subcommand("hull", "build an ε-ball hull");
    common_flags(hull, c);
    geometry_flags(hull, c);

    auto* center = app.add_subcommand("center", "compute an ε-approximate horo-center point");
    common_flags(center, c);
    geometry_flags(center, c);
    center->add_option("--tol", c.tol, "constraint tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    center->add_option("--seed", c.seed, "seed (falls back to PDGEO_SEED, then 0)");
    center->add_option("--max-points", c.max_points, "point cap (default 40 for n=2, 25 for n=3)");

    auto* extent = app.add_subcommand("extent", "horoextent along given or random directions");
    common_flags(extent, c);
    extent->add_option("--flat", c.flat, "flat rotation, row-major comma list (default identity)");
    extent->add_option("--direction", c.direction, "unit direction, decreasing, comma list");
    extent->add_option("--random", c.random_count, "number of random directions");
    extent->add_option("--seed", c.seed, "seed (falls back to PDGEO_SEED, then 0)");
    extent->add_option("--origin-index", c.origin_index, "data point used as origin");
    extent->add_flag("--no-shift", c.no_shift, "keep the identity as origin");

    auto* grid = app.add_subcommand("grid", "direction grid size for a dataset or a given d_X");
    common_flags(grid, c, false);
    grid->add_option("--epsilon", c.epsilon, "approximation parameter")->capture_default_str()->check(
        CLI::PositiveNumber);
    grid->add_option("--n", c.n, "dimension when no dataset is given")->capture_default_str();
    grid->add_option("--dx", c.d_x, "d_X when no dataset is given");
    grid->add_option("--grid-cap", c.grid_cap, "cap to compare against")->capture_default_str();
    grid->add_option("--origin-index", c.origin_index, "data point used as origin");
    grid->add_flag("--no-shift", c.no_shift, "keep the identity as origin");

    auto* plot = app.add_subcommand("plot2", "PD(2) plot data: log det and Poincaré disk coordinates");
    common_flags(plot, c);
    geometry_flags(plot, c);
    plot->add_option("--hull", c.hull_path, "hull JSON whose horospheres to trace");
    plot->add_flag("--with-hull", c.plot_hull, "build the hull with --epsilon and trace it");

    auto* validate = app.add_subcommand("validate", "load and check a dataset");
    common_flags(validate, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (hull->parsed()) {
            return cmd_hull(c);
        }
        if (center->parsed()) {
            return cmd_center(c);
        }
        if (extent->parsed()) {
            return cmd_extent(c);
        }
        if (grid->parsed()) {
            return cmd_grid(c);
        }
        if (plot->parsed()) {
            return cmd_plot2(c);
        }
        return cmd_validate(c);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    }
}
