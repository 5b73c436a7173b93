#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "carver/improvement.hpp"

namespace {

    struct ToggleOptions {
        std::string cost_mode = "cached+";
        std::string recreate = "restricted";
        std::string sync = "dolists";
        std::string lazy_loads = "on";
        std::string rvnd_loop = "off";
        std::string sa_sign = "sa";
        std::string first_fit = "index";
        std::string mode = "standard";
        std::string routemin = "on";
        long long iterations = -1;  // -1: derived from mode
        int n_nn = 1500;
    };

    void add_toggles(CLI::App *cmd, ToggleOptions &t) {
        cmd->add_option("--cost-mode", t.cost_mode)->check(CLI::IsMember({"on-demand", "on-demand+", "cached", "cached+"}));
        cmd->add_option("--recreate", t.recreate)->check(CLI::IsMember({"restricted", "global"}));
        cmd->add_option("--sync", t.sync)->check(CLI::IsMember({"dolists", "copy"}));
        cmd->add_option("--lazy-loads", t.lazy_loads)->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--rvnd-loop", t.rvnd_loop)->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--sa-sign", t.sa_sign)->check(CLI::IsMember({"sa", "paper"}));
        cmd->add_option("--first-fit", t.first_fit)->check(CLI::IsMember({"index", "decreasing"}));
        cmd->add_option("--mode", t.mode)->check(CLI::IsMember({"standard", "long"}));
        cmd->add_option("--routemin", t.routemin)->check(CLI::IsMember({"on", "off"}));
        cmd->add_option("--iterations", t.iterations, "Core optimization iteration count (overrides --mode)");
        cmd->add_option("--n-nn", t.n_nn, "Neighbors per vertex");
    }

    carver::SolverParams to_params(const ToggleOptions &t, uint64_t seed) {
        carver::SolverParams p;
        p.seed = seed;
        p.cost_mode = carver::cost_mode_from_string(t.cost_mode);
        p.recreate_global = t.recreate == "global";
        p.sync_by_copy = t.sync == "copy";
        p.ls.lazy_loads = t.lazy_loads == "on";
        p.ls.rvnd_inner_loop = t.rvnd_loop == "on";
        p.sa_paper_sign = t.sa_sign == "paper";
        p.first_fit_decreasing = t.first_fit == "decreasing";
        p.route_min_enabled = t.routemin == "on";
        p.core_opt_iterations = t.iterations >= 0 ? t.iterations : (t.mode == "long" ? 1000000LL : 100000LL);
        p.n_nn = t.n_nn;
        return p;
    }

    std::string format_gap(double cost, double bks) {
        if (bks <= 0) return "";
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.4f", 100.0 * (cost - bks) / bks);
        return buffer;
    }

    std::string csv_double(double value) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.3f", value);
        return buffer;
    }

    constexpr const char *kSolveHeader =
        "instance,seed,cost,routes,gap_percent,wall_s,preprocess_s,construction_s,route_min_s,core_opt_s,cache_hit_ratio";

    std::string solve_row(const carver::RunReport &r, double bks) {
        std::ostringstream out;
        out << r.instance << "," << r.seed << "," << static_cast<int64_t>(std::llround(r.final_cost)) << ","
            << r.final_routes << "," << format_gap(r.final_cost, bks) << "," << csv_double(r.t_total) << ","
            << csv_double(r.t_preprocess) << "," << csv_double(r.t_construction) << "," << csv_double(r.t_route_min)
            << "," << csv_double(r.t_core_opt) << "," << csv_double(r.cache_hit_ratio);
        return out.str();
    }

    int run_solve(const std::string &instance_path, uint64_t seed, const ToggleOptions &toggles, double bks,
                  const std::string &out_path) {
        const carver::Instance instance = carver::load_instance(instance_path);
        const carver::SolverParams params = to_params(toggles, seed);
        carver::CostProvider provider(instance, params.cost_mode);
        carver::RunReport report;
        const carver::Solution best = carver::solve(instance, provider, params, &report);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return 3;
            }
            out << carver::to_sol(best);
        }
        std::cout << kSolveHeader << "\n" << solve_row(report, bks) << "\n";
        return 0;
    }

    int run_check(const std::string &instance_path, const std::string &sol_path, double bks) {
        const carver::Instance instance = carver::load_instance(instance_path);
        std::ifstream in(sol_path);
        if (!in) {
            std::cerr << "error: cannot read " << sol_path << "\n";
            return 3;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        const carver::ParsedSolution parsed = carver::parse_sol(buffer.str());
        const carver::FeasibilityReport feasibility = carver::check_routes(instance, parsed.routes);
        const double cost = carver::routes_cost(instance, parsed.routes);
        const int64_t recomputed = static_cast<int64_t>(std::llround(cost));

        bool ok = true;
        if (!feasibility.feasible()) {
            std::cout << "infeasible\n" << feasibility.to_string();
            ok = false;
        }
        if (recomputed != parsed.cost) {
            std::cout << "cost mismatch: file says " << parsed.cost << ", recomputed " << recomputed << "\n";
            ok = false;
        }
        if (ok) {
            std::cout << "valid routes=" << parsed.routes.size() << " cost=" << recomputed;
            const std::string gap = format_gap(cost, bks);
            if (!gap.empty()) std::cout << " gap_percent=" << gap;
            std::cout << "\n";
        }
        return ok ? 0 : 2;
    }

    std::map<std::string, double> load_bks_file(const std::string &path) {
        std::map<std::string, double> bks;
        if (path.empty()) return bks;
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read " + path);
        std::string name;
        double value;
        while (in >> name >> value) bks[name] = value;
        return bks;
    }

    struct BenchRun {
        std::string instance;
        int n_nn;
        uint64_t seed;
        double cost = 0.0;
        double seconds = 0.0;
        bool failed = false;
        std::string error;
    };

    int run_bench(const std::vector<std::string> &instance_paths, int seeds, const ToggleOptions &toggles,
                  const std::string &bks_path, int jobs, const std::string &sweep) {
        std::vector<int> n_nn_values{toggles.n_nn};
        if (!sweep.empty()) {
            // --sweep n_nn=250..2500:250
            int lo = 0, hi = 0, step = 0;
            if (std::sscanf(sweep.c_str(), "n_nn=%d..%d:%d", &lo, &hi, &step) != 3 || step <= 0 || lo > hi) {
                std::cerr << "error: --sweep expects n_nn=LO..HI:STEP\n";
                return 1;
            }
            n_nn_values.clear();
            for (int v = lo; v <= hi; v += step) n_nn_values.push_back(v);
        }
        const std::map<std::string, double> bks = load_bks_file(bks_path);

        std::vector<BenchRun> runs;
        for (const std::string &path : instance_paths) {
            for (const int n_nn : n_nn_values) {
                for (int s = 0; s < seeds; ++s) {
                    runs.push_back({path, n_nn, static_cast<uint64_t>(s), 0.0, 0.0, false, ""});
                }
            }
        }

        std::atomic<size_t> cursor{0};
        const auto worker = [&]() {
            for (;;) {
                const size_t idx = cursor.fetch_add(1);
                if (idx >= runs.size()) return;
                BenchRun &run = runs[idx];
                try {
                    const carver::Instance instance = carver::load_instance(run.instance);
                    ToggleOptions t = toggles;
                    t.n_nn = run.n_nn;
                    const carver::SolverParams params = to_params(t, run.seed);
                    carver::CostProvider provider(instance, params.cost_mode);
                    carver::RunReport report;
                    carver::solve(instance, provider, params, &report);
                    run.cost = report.final_cost;
                    run.seconds = report.t_total;
                } catch (const std::exception &e) {
                    run.failed = true;
                    run.error = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        const int workers = std::max(1, jobs);
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (std::thread &th : pool) th.join();

        std::cout << "instance,n_nn,runs,best,avg,worst,t\n";
        for (const std::string &path : instance_paths) {
            for (const int n_nn : n_nn_values) {
                std::string name;
                double best = 0, worst = 0, sum = 0, tsum = 0;
                int count = 0;
                bool failed = false;
                for (const BenchRun &run : runs) {
                    if (run.instance != path || run.n_nn != n_nn) continue;
                    if (run.failed) {
                        failed = true;
                        std::cerr << "error: " << run.instance << " seed " << run.seed << ": " << run.error << "\n";
                        continue;
                    }
                    if (name.empty()) {
                        const auto slash = path.find_last_of('/');
                        name = slash == std::string::npos ? path : path.substr(slash + 1);
                        const auto dot = name.rfind(".vrp");
                        if (dot != std::string::npos) name = name.substr(0, dot);
                    }
                    double value = run.cost;
                    const auto it = bks.find(name);
                    if (it != bks.end()) value = 100.0 * (run.cost - it->second) / it->second;
                    if (count == 0 || value < best) best = value;
                    if (count == 0 || value > worst) worst = value;
                    sum += value;
                    tsum += run.seconds;
                    ++count;
                }
                if (count == 0) {
                    if (failed) std::cout << path << "," << n_nn << ",0,,,,\n";
                    continue;
                }
                std::cout << name << "," << n_nn << "," << count << "," << csv_double(best) << ","
                          << csv_double(sum / count) << "," << csv_double(worst) << "," << csv_double(tsum / count)
                          << "\n";
            }
        }
        return 0;
    }

    int run_generate(const std::string &points_path, const std::string &depot, int64_t capacity, uint64_t seed,
                     const std::string &out_path, bool latlon, const std::string &name) {
        std::ifstream in(points_path);
        if (!in) {
            std::cerr << "error: cannot read " << points_path << "\n";
            return 3;
        }
        std::vector<std::pair<double, double>> points;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            for (char &c : line) {
                if (c == ',' || c == ';' || c == '\t') c = ' ';
            }
            std::istringstream fields(line);
            double a, b;
            if (!(fields >> a >> b)) {
                std::cerr << "error: malformed points line: " << line << "\n";
                return 1;
            }
            points.emplace_back(a, b);
        }
        if (points.size() < 2) {
            std::cerr << "error: need at least 2 points\n";
            return 1;
        }
        if (latlon) {
            const auto projected = carver::project_coordinates(points);
            points.clear();
            for (const auto &[x, y] : projected) points.emplace_back(static_cast<double>(x), static_cast<double>(y));
        }

        int depot_index;
        if (depot == "centroid") {
            double cx = 0, cy = 0;
            for (const auto &[x, y] : points) {
                cx += x;
                cy += y;
            }
            cx /= static_cast<double>(points.size());
            cy /= static_cast<double>(points.size());
            depot_index = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < points.size(); ++i) {
                const double dx = points[i].first - cx;
                const double dy = points[i].second - cy;
                const double d = dx * dx + dy * dy;
                if (d < best) {
                    best = d;
                    depot_index = static_cast<int>(i);
                }
            }
        } else {
            depot_index = std::stoi(depot);
            if (depot_index < 0 || depot_index >= static_cast<int>(points.size())) {
                std::cerr << "error: depot index out of range\n";
                return 1;
            }
        }

        carver::Rng rng(seed);
        const carver::Instance instance = carver::generate_instance(points, depot_index, capacity, rng, name);
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 3;
        }
        out << carver::serialize_instance(instance);
        std::cout << "wrote " << out_path << " (" << instance.num_customers() << " customers, Q=" << capacity << ")\n";
        return 0;
    }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"CVRP heuristic solver"};
    app.require_subcommand(1);

    // solve
    std::string instance_path, out_path, sol_path;
    uint64_t seed = 0;
    double bks = -1.0;
    ToggleOptions solve_toggles;
    CLI::App *solve = app.add_subcommand("solve", "Solve an instance and report one CSV row");
    solve->add_option("instance", instance_path)->required();
    solve->add_option("--seed", seed);
    solve->add_option("--bks", bks, "Best known cost for gap reporting");
    solve->add_option("--out", out_path, "Write the solution in CVRPLIB .sol format");
    add_toggles(solve, solve_toggles);

    // check
    std::string check_instance;
    double check_bks = -1.0;
    CLI::App *check = app.add_subcommand("check", "Validate a .sol file against an instance");
    check->add_option("instance", check_instance)->required();
    check->add_option("solution", sol_path)->required();
    check->add_option("--bks", check_bks);

    // bench
    std::vector<std::string> bench_instances;
    int bench_seeds = 10;
    int bench_jobs = 1;
    std::string bks_file, sweep;
    ToggleOptions bench_toggles;
    CLI::App *bench = app.add_subcommand("bench", "Run instances over multiple seeds, report Best/Avg/Worst/t");
    bench->add_option("instances", bench_instances)->required();
    bench->add_option("--seeds", bench_seeds);
    bench->add_option("--jobs", bench_jobs, "Worker threads");
    bench->add_option("--bks-file", bks_file, "File of 'name cost' rows; turns values into gaps");
    bench->add_option("--sweep", sweep, "Parameter sweep, e.g. n_nn=250..2500:250");
    add_toggles(bench, bench_toggles);

    // generate
    std::string points_path, gen_out, gen_depot = "centroid", gen_name = "generated";
    int64_t gen_capacity = 50;
    uint64_t gen_seed = 0;
    bool gen_latlon = false;
    CLI::App *generate = app.add_subcommand("generate", "Build a CVRPLIB instance from a points file");
    generate->add_option("points", points_path)->required();
    generate->add_option("--out", gen_out)->required();
    generate->add_option("--depot", gen_depot, "'centroid' or a 0-based point index");
    generate->add_option("--capacity", gen_capacity);
    generate->add_option("--seed", gen_seed);
    generate->add_option("--name", gen_name);
    generate->add_flag("--latlon", gen_latlon, "Interpret points as lat,lon and project to meters");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(instance_path, seed, solve_toggles, bks, out_path);
        if (check->parsed()) return run_check(check_instance, sol_path, check_bks);
        if (bench->parsed()) return run_bench(bench_instances, bench_seeds, bench_toggles, bks_file, bench_jobs, sweep);
        if (generate->parsed())
            return run_generate(points_path, gen_depot, gen_capacity, gen_seed, gen_out, gen_latlon, gen_name);
    } catch (const carver::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
