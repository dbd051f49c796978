// Command-line driver for the IBDL/IBSL solver experiments.
//
//   ibdl solve|iters|refine|strength|flag <config> [--out DIR] [--threads K] [--strict]
//
// Exit codes: 0 success, 1 solve failure, 2 config error. The output
// directory resolves as --out, then $IBDL_OUT, then the config's out_dir.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include "ibdl/ibdl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ibdl;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_override;
    int threads = 1;
    bool strict = false;
};

Method parse_method(const std::string& m, const std::string& key) {
    if (m == "ibsl") return Method::IBSL;
    if (m == "ibdl") return Method::IBDL;
    throw ConfigError(key, "expected ibsl or ibdl, got '" + m + "'");
}

std::vector<Method> parse_methods(const Config& cfg) {
    const std::string m = cfg.get_string("method", "ibdl");
    if (m == "both") return {Method::IBSL, Method::IBDL};
    return {parse_method(m, "method")};
}

Discretization parse_discretization(const Config& cfg) {
    const std::string d = cfg.get_string("discretization", "fd");
    if (d == "fd" || d == "finite_difference") return Discretization::FiniteDifference;
    if (d == "spectral" || d == "fourier_spectral") return Discretization::FourierSpectral;
    throw ConfigError("discretization", "expected fd or spectral, got '" + d + "'");
}

NormalsMode parse_normals(const Config& cfg) {
    const std::string n = cfg.get_string("normals", "auto");
    if (n == "auto" || n == "exact") return NormalsMode::UseExactIfAvailable;
    if (n == "estimated") return NormalsMode::ForceEstimated;
    throw ConfigError("normals", "expected auto, exact or estimated, got '" + n + "'");
}

std::vector<int> parse_grid_sizes(const Config& cfg) {
    std::vector<int> ns;
    for (double v : cfg.get_list("grid_sizes")) {
        const int n = int(v);
        if (double(n) != v || n < 4) throw ConfigError("grid_sizes", "bad grid size");
        if ((n & (n - 1)) != 0) throw ConfigError("grid_sizes", "grid sizes must be powers of two");
        ns.push_back(n);
    }
    if (ns.empty()) throw ConfigError("grid_sizes", "empty grid size list");
    return ns;
}

int parse_m(const Config& cfg, const char* key) {
    const std::string v = cfg.get_string(key, "auto");
    if (v == "auto") return -1;
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected integer or auto");
    }
}

RunConfig base_run_config(const Config& cfg) {
    RunConfig rc;
    rc.problem_id = cfg.get_string("problem");
    get_problem(rc.problem_id);  // validates the id up front
    rc.discretization = parse_discretization(cfg);
    rc.ratio = cfg.get_double("ratio", 0.75);
    rc.m1 = parse_m(cfg, "m1");
    rc.m2 = parse_m(cfg, "m2");
    rc.tol = cfg.get_double("tol", 1e-8);
    rc.max_iterations = cfg.get_int("max_iterations", -1);
    rc.interpolation = cfg.get_bool("interpolation", true);
    rc.normals = parse_normals(cfg);
    rc.box_length_override = cfg.get_double("box_length", 0.0);
    return rc;
}

fs::path resolve_out_dir(const Config& cfg, const CliOptions& opt) {
    std::string dir = cfg.get_string("out_dir", "out");
    if (const char* env = std::getenv("IBDL_OUT")) dir = env;
    if (!opt.out_override.empty()) dir = opt.out_override;
    fs::create_directories(dir);
    return dir;
}

/// Run jobs 0..count-1 on up to `threads` workers; results land by index.
void parallel_for(int count, int threads, const std::function<void(int)>& job) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int width = std::min(threads, count);
    for (int t = 0; t < width; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- solve ---

int cmd_solve(const Config& cfg, const CliOptions& opt) {
    RunConfig rc = base_run_config(cfg);
    const auto ns = parse_grid_sizes(cfg);
    rc.n = cfg.get_int("n", ns.front());
    rc.method = parse_methods(cfg).back();

    const RunResult r = run_experiment(rc);
    const fs::path out = resolve_out_dir(cfg, opt);

    CsvWriter csv;
    csv.header("x,y,u,inside,band");
    const GridSpec& spec = r.solution.spec;
    for (int j = 0; j < spec.n; ++j)
        for (int i = 0; i < spec.n; ++i) {
            const Vec2 p = spec.node(i, j);
            csv.row({fmt17(p.x), fmt17(p.y), fmt17(r.solution(i, j)),
                     r.mask.in_domain(i, j) ? "1" : "0", r.band.in_band(i, j) ? "1" : "0"});
        }
    csv.save((out / "solution.csv").string());

    json rep;
    rep["problem"] = rc.problem_id;
    rep["method"] = rc.method == Method::IBSL ? "ibsl" : "ibdl";
    rep["n"] = r.n;
    rep["n_ib"] = r.n_ib;
    rep["m1"] = r.m1;
    rep["m2"] = r.m2;
    rep["iterations"] = r.report.iterations;
    rep["residual"] = r.report.residual;
    rep["converged"] = r.report.converged;
    rep["norms"] = {{"linf", r.norms.linf}, {"l2", r.norms.l2}};
    rep["seconds_solve"] = r.report.seconds;
    rep["seconds_total"] = r.seconds_total;
    rep["near_boundary_fallbacks"] = r.report.near_boundary_fallbacks;
    rep["warnings"] = r.report.warnings;
    std::ofstream(out / "report.json") << rep.dump(2) << "\n";

    for (const auto& w : r.report.warnings) std::cerr << "warning: " << w << "\n";
    if (!r.report.converged) {
        std::cerr << "solve did not converge (residual " << r.report.residual << ")\n";
        return 1;
    }
    std::cout << "solve: " << rc.problem_id << " N=" << r.n << " iterations=" << r.report.iterations
              << " Linf=" << r.norms.linf << "\n";
    return 0;
}

// ---------------------------------------------------------------- iters ---

int cmd_iters(const Config& cfg, const CliOptions& opt) {
    RunConfig rc = base_run_config(cfg);
    const auto ns = parse_grid_sizes(cfg);
    std::vector<double> ratios = cfg.get_list("ratios");
    if (ratios.empty()) ratios = {rc.ratio};
    const auto methods = parse_methods(cfg);
    const fs::path out = resolve_out_dir(cfg, opt);

    const ProblemDef def = get_problem(rc.problem_id);
    struct Cell {
        int iterations = 0;
        bool converged = false;
    };

    for (Method method : methods) {
        const std::string mname = method == Method::IBSL ? "ibsl" : "ibdl";
        std::vector<Cell> cells(ns.size() * ratios.size());
        parallel_for(int(cells.size()), opt.threads, [&](int idx) {
            const int ni = idx / int(ratios.size());
            const int ri = idx % int(ratios.size());
            RunConfig cell_rc = rc;
            cell_rc.method = method;
            cell_rc.n = ns[ni];
            cell_rc.ratio = ratios[ri];
            cell_rc.interpolation = false;
            const RunResult r = run_experiment(cell_rc);
            cells[idx] = {r.report.iterations, r.report.converged};
        });

        CsvWriter csv;
        std::string head = "N";
        for (double r : ratios) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",ratio_%g", r);
            head += buf;
        }
        csv.header(head);
        for (size_t ni = 0; ni < ns.size(); ++ni) {
            std::vector<std::string> row{std::to_string(ns[ni])};
            for (size_t ri = 0; ri < ratios.size(); ++ri) {
                const Cell& c = cells[ni * ratios.size() + ri];
                row.push_back(c.converged ? std::to_string(c.iterations)
                                          : std::to_string(c.iterations) + "+");
            }
            csv.row(row);
        }
        csv.save((out / ("iterations_" + mname + ".csv")).string());
        std::cout << "iterations_" << mname << ".csv:\n" << csv.text;
    }
    return 0;
}

// --------------------------------------------------------------- refine ---

int cmd_refine(const Config& cfg, const CliOptions& opt) {
    RunConfig rc = base_run_config(cfg);
    const auto ns = parse_grid_sizes(cfg);
    rc.method = parse_methods(cfg).back();
    const fs::path out = resolve_out_dir(cfg, opt);

    std::vector<RunResult> results(ns.size());
    parallel_for(int(ns.size()), opt.threads, [&](int i) {
        RunConfig cell = rc;
        cell.n = ns[i];
        results[i] = run_experiment(cell);
    });

    CsvWriter csv;
    csv.header("N,linf,l2,iterations,seconds");
    std::vector<double> linf;
    for (size_t i = 0; i < ns.size(); ++i) {
        const RunResult& r = results[i];
        csv.row({std::to_string(r.n), fmt17(r.norms.linf), fmt17(r.norms.l2),
                 std::to_string(r.report.iterations), fmt17(r.seconds_total)});
        linf.push_back(r.norms.linf);
    }
    csv.save((out / "refinement.csv").string());

    const double slope = fitted_slope(ns, linf);
    std::cout << csv.text;
    std::cout << "fitted Linf slope (last 4 sizes): " << slope << "\n";
    for (const RunResult& r : results)
        if (!r.report.converged) {
            std::cerr << "solve at N=" << r.n << " did not converge\n";
            return 1;
        }
    return 0;
}

// ------------------------------------------------------------- strength ---

int cmd_strength(const Config& cfg, const CliOptions& opt) {
    RunConfig rc = base_run_config(cfg);
    if (rc.problem_id != "helmholtz_circle_sin2theta")
        throw ConfigError("problem", "strength study is defined for helmholtz_circle_sin2theta");
    const auto ns = parse_grid_sizes(cfg);
    const auto methods = parse_methods(cfg);
    const fs::path out = resolve_out_dir(cfg, opt);
    const ProblemDef def = get_problem(rc.problem_id);

    // Self-converged BEM reference densities (sigma for IBSL's F, -gamma for
    // IBDL's Q), interpolated periodically in the curve parameter.
    const double k = def.k;
    auto ub_of = [&](const std::vector<BemElement>& es) {
        std::vector<double> ub(es.size());
        for (size_t i = 0; i < es.size(); ++i) ub[i] = def.boundary_data(es[i].mid);
        return ub;
    };
    int n_elem = 128;
    std::vector<BemElement> elems = bem_elements(def.curve, n_elem);
    std::vector<double> sigma = bem_single_layer(elems, ub_of(elems), k);
    std::vector<double> gamma = bem_double_layer(elems, ub_of(elems), k);
    for (;;) {
        const int n2 = 2 * n_elem;
        if (n2 > 2048) break;
        auto elems2 = bem_elements(def.curve, n2);
        auto sigma2 = bem_single_layer(elems2, ub_of(elems2), k);
        auto gamma2 = bem_double_layer(elems2, ub_of(elems2), k);
        double dmax = 0.0, scale = 0.0;
        for (int i = 0; i < n_elem; ++i) {
            dmax = std::max(dmax, std::abs(sigma2[2 * i] - sigma[i]));
            dmax = std::max(dmax, std::abs(gamma2[2 * i] - gamma[i]));
            scale = std::max({scale, std::abs(sigma[i]), std::abs(gamma[i])});
        }
        n_elem = n2;
        elems = std::move(elems2);
        sigma = std::move(sigma2);
        gamma = std::move(gamma2);
        if (dmax < 1e-3 * scale) break;
    }
    std::cout << "BEM reference: " << n_elem << " elements\n";

    auto ref_at = [&](const std::vector<double>& dens, double theta01) {
        // element midpoints sit at parameter (j + 0.5)/n_elem
        double u = theta01 * n_elem - 0.5;
        u -= std::floor(u / n_elem) * n_elem;
        const int j0 = int(std::floor(u)) % n_elem;
        const int j1 = (j0 + 1) % n_elem;
        const double w = u - std::floor(u);
        return (1.0 - w) * dens[j0] + w * dens[j1];
    };

    CsvWriter dens_csv;
    dens_csv.header("method,N,theta,density,bem_reference");
    CsvWriter sum_csv;
    sum_csv.header("method,N,normalized_max_error");

    for (Method method : methods) {
        const std::string mname = method == Method::IBSL ? "ibsl" : "ibdl";
        std::vector<double> errs;
        for (int n : ns) {
            RunConfig cell = rc;
            cell.method = method;
            cell.n = n;
            cell.interpolation = false;
            const RunResult r = run_experiment(cell);
            double ref_max = 0.0, err = 0.0;
            for (int i = 0; i < r.n_ib; ++i) {
                const double theta01 = double(i) / r.n_ib;  // arclength == parameter on the circle
                const double ref = method == Method::IBSL ? ref_at(sigma, theta01)
                                                          : -ref_at(gamma, theta01);
                ref_max = std::max(ref_max, std::abs(ref));
                err = std::max(err, std::abs(r.report.density[i] - ref));
                dens_csv.row({mname, std::to_string(n), fmt17(2.0 * std::numbers::pi * theta01),
                              fmt17(r.report.density[i]), fmt17(ref)});
            }
            errs.push_back(err / ref_max);
            sum_csv.row({mname, std::to_string(n), fmt17(err / ref_max)});
        }
        std::cout << mname << " normalized max errors:";
        for (double e : errs) std::cout << " " << e;
        if (errs.size() > 1) {
            const double slope =
                std::log2(errs.front() / errs.back()) / std::log2(double(ns.back()) / ns.front());
            std::cout << "  (overall slope " << slope << ")";
        }
        std::cout << "\n";
    }
    dens_csv.save((out / "strength.csv").string());
    sum_csv.save((out / "strength_summary.csv").string());
    return 0;
}

// ----------------------------------------------------------------- flag ---

int cmd_flag(const Config& cfg, const CliOptions& opt) {
    RunConfig rc = base_run_config(cfg);
    const auto ns = parse_grid_sizes(cfg);
    rc.n = cfg.get_int("n", ns.front());
    const fs::path out = resolve_out_dir(cfg, opt);
    const ProblemDef def = get_problem(rc.problem_id);

    const double box = rc.box_length_override > 0.0 ? rc.box_length_override : def.box_length;
    const Vec2 origin = rc.box_length_override > 0.0 ? Vec2{-box / 2, -box / 2} : def.origin;
    const GridSpec grid(box, rc.n, origin);
    const ImmersedBoundary ib = discretize_curve(def.curve, rc.ratio * grid.dx(), def.orientation, rc.normals);

    bool warned = false;
    double arclen = 0.0;
    for (double s : ib.ds) arclen += s;
    if (arclen / (2.0 * std::numbers::pi) < 6.0 * grid.dx()) {
        std::cerr << "warning: boundary under-resolved on this grid (equivalent radius "
                  << arclen / (2.0 * std::numbers::pi) << " < 6 dx)\n";
        warned = true;
    }

    const InteriorMask mask = flag_interior(ib, grid, rc.discretization);
    const int m1 = rc.m1 >= 0 ? rc.m1 : default_m1(rc.discretization, rc.n);
    const BandMask band = flag_band(ib, mask, m1);

    CsvWriter csv;
    csv.header("x,y,inside,band");
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            const Vec2 p = grid.node(i, j);
            csv.row({fmt17(p.x), fmt17(p.y), mask.in_domain(i, j) ? "1" : "0",
                     band.in_band(i, j) ? "1" : "0"});
        }
    csv.save((out / "mask.csv").string());
    std::cout << "flag: N=" << rc.n << " n_ib=" << ib.size() << " wrote mask.csv\n";
    return (warned && opt.strict) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IBDL/IBSL immersed boundary solvers for periodic Helmholtz and Poisson problems"};
    app.require_subcommand(1);

    CliOptions opt;
    int rc_exit = 0;
    for (const auto& name : {"solve", "iters", "refine", "strength", "flag"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", opt.config_path, "experiment config file")->required();
        sub->add_option("--out", opt.out_override, "output directory (overrides config and $IBDL_OUT)");
        sub->add_option("--threads", opt.threads, "worker threads for sweeps");
        sub->add_flag("--strict", opt.strict, "treat warnings as failures");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Config cfg = load_config(opt.config_path);
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "solve") rc_exit = cmd_solve(cfg, opt);
        else if (sub == "iters") rc_exit = cmd_iters(cfg, opt);
        else if (sub == "refine") rc_exit = cmd_refine(cfg, opt);
        else if (sub == "strength") rc_exit = cmd_strength(cfg, opt);
        else if (sub == "flag") rc_exit = cmd_flag(cfg, opt);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const UnknownProblem& e) {
        std::cerr << "config error [problem]: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc_exit;
}
