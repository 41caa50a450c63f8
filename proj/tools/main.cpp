// Command-line driver: simulate datasets, run the single- and multi-level
// reconstructions, check the disk oracle, and write reports/plots.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iscat/dataset.hpp"
#include "iscat/errors.hpp"
#include "iscat/multilevel.hpp"
#include "iscat/newton.hpp"
#include "iscat/plot.hpp"
#include "iscat/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

using namespace iscat;

Vec2 default_theta() { return {-0.5, std::sqrt(3.0) / 2.0}; }

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// "flower:c1,c2,c3", "circle:R[,cx,cy]" or a path to a shape JSON file
TrigShape parse_shape(const std::string& spec) {
    if (spec.rfind("flower:", 0) == 0) {
        const auto v = parse_doubles(spec.substr(7));
        if (v.size() != 3) throw DomainError("shape: flower needs c1,c2,c3");
        return TrigShape::flower(v[0], v[1], static_cast<int>(v[2]));
    }
    if (spec.rfind("circle:", 0) == 0) {
        const auto v = parse_doubles(spec.substr(7));
        if (v.size() == 1) return TrigShape::circle(v[0]);
        if (v.size() == 3) return TrigShape::circle(v[0], {v[1], v[2]});
        throw DomainError("shape: circle needs R or R,cx,cy");
    }
    return load_shape(spec);
}

// "end:alpha:J,end:alpha:J,..." with ends being frequency indices
LevelPartition parse_levels(const std::string& spec, int num_steps) {
    std::vector<int> ends;
    std::vector<double> alphas;
    std::vector<int> iters;
    std::stringstream ss(spec);
    std::string level;
    while (std::getline(ss, level, ',')) {
        std::stringstream ls(level);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ':')) fields.push_back(field);
        if (fields.size() != 3) {
            throw DomainError("levels: expected end:alpha:J per level");
        }
        ends.push_back(std::stoi(fields[0]));
        alphas.push_back(std::stod(fields[1]));
        iters.push_back(std::stoi(fields[2]));
    }
    if (!ends.empty() && ends.back() != num_steps) {
        throw DomainError("levels: last level must end at the highest frequency index " +
                          std::to_string(num_steps));
    }
    return LevelPartition(std::move(ends), std::move(alphas), std::move(iters));
}

struct CommonRunArgs {
    std::string config_path;
    std::string data_path;
    std::string out_dir;
    double alpha = 1e-2;
    int newton_iters = 4;
    int subspace_cap = 12;
    int init_refine_iters = 10;
    std::vector<double> box{-3.0, 3.0, -3.0, 3.0};
};

// Optional run-configuration file; explicit command-line flags win.
void apply_config_file(CommonRunArgs& args, std::string* levels, double* epsilon,
                       const CLI::App* cmd) {
    if (args.config_path.empty()) return;
    std::ifstream in(args.config_path);
    if (!in) throw IoError("cannot open config file " + args.config_path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config file: ") + e.what());
    }
    const auto keep = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (cfg.contains("data") && keep("--data") && args.data_path.empty()) {
        args.data_path = cfg["data"].get<std::string>();
    }
    if (cfg.contains("out") && keep("--out") && args.out_dir.empty()) {
        args.out_dir = cfg["out"].get<std::string>();
    }
    if (cfg.contains("alpha") && keep("--alpha")) args.alpha = cfg["alpha"].get<double>();
    if (cfg.contains("newton_iters") && keep("--newton-iters")) {
        args.newton_iters = cfg["newton_iters"].get<int>();
    }
    if (cfg.contains("subspace_cap") && keep("--subspace-cap")) {
        args.subspace_cap = cfg["subspace_cap"].get<int>();
    }
    if (cfg.contains("init_refine_iters") && keep("--init-refine-iters")) {
        args.init_refine_iters = cfg["init_refine_iters"].get<int>();
    }
    if (cfg.contains("box") && keep("--box")) {
        args.box = cfg["box"].get<std::vector<double>>();
        if (args.box.size() != 4) throw DomainError("config file: box needs 4 numbers");
    }
    if (levels && cfg.contains("levels") && keep("--levels")) {
        *levels = cfg["levels"].get<std::string>();
    }
    if (epsilon && cfg.contains("epsilon") && keep("--epsilon")) {
        *epsilon = cfg["epsilon"].get<double>();
    }
}

struct PreparedRun {
    Dataset data;
    TrigShape r0;
    NewtonConfig cfg;
};

PreparedRun prepare_run(const CommonRunArgs& args) {
    Dataset data = load_dataset(args.data_path);
    const SearchBox box{args.box[0], args.box[1], args.box[2], args.box[3]};

    // placeholder schedule for the init stage; rebuilt from the fitted radius
    NewtonConfig init_cfg(args.alpha, args.newton_iters,
                          SubspaceSchedule(std::vector<int>(data.grid.point_count(), 1)),
                          data.n_quad);
    InitOptions init_opts;
    init_opts.refine_iters = args.init_refine_iters;
    TrigShape r0 = initial_guess(data.noisy.front(), data.theta, box, init_cfg, init_opts);

    const double mean_radius = r0.radial().a0();
    NewtonConfig cfg(args.alpha, args.newton_iters,
                     default_schedule(data.grid, mean_radius, args.subspace_cap),
                     data.n_quad);
    return PreparedRun{std::move(data), std::move(r0), std::move(cfg)};
}

void write_run_outputs(const std::string& out_dir, const std::string& data_path,
                       const ReconstructionResult& result, const Dataset& data,
                       const nlohmann::json& run_info) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    save_shape(result.shape, out_dir + "/result.json");
    save_trace(result.trace, out_dir + "/trace.json");
    nlohmann::json info = run_info;
    info["dataset"] = data_path;
    std::ofstream out(out_dir + "/run_config.json");
    if (!out) throw IoError("cannot write run_config.json");
    out << info.dump(2) << "\n";
    write_report(result.trace, data, out_dir);
}

int run_simulate(const std::string& shape_spec, const std::string& center_spec,
                 const std::vector<double>& grid_spec, int obs_count, double noise,
                 std::uint64_t seed, int n_quad, const std::vector<double>& theta_spec,
                 const std::string& out_path) {
    TrigShape truth = parse_shape(shape_spec);
    if (!center_spec.empty()) {
        const auto c = parse_doubles(center_spec);
        if (c.size() != 2) throw DomainError("--center needs cx,cy");
        truth = TrigShape({c[0], c[1]}, truth.radial());
    }
    if (grid_spec.size() != 3) throw DomainError("--grid needs kl,kh,N");
    const FrequencyGrid grid(grid_spec[0], grid_spec[1],
                             static_cast<int>(grid_spec[2]));
    Vec2 theta = default_theta();
    if (!theta_spec.empty()) {
        if (theta_spec.size() != 2) throw DomainError("--theta needs x,y");
        theta = {theta_spec[0], theta_spec[1]};
    }
    const Dataset data = simulate(truth, grid, theta, obs_count, noise, seed, n_quad);
    save_dataset(data, out_path);
    std::cout << "wrote " << out_path << " (" << grid.point_count()
              << " frequencies, delta=" << noise << ", seed=" << seed << ")\n";
    return 0;
}

int run_reconstruct(const CommonRunArgs& args) {
    PreparedRun run = prepare_run(args);
    const ReconstructionResult result =
        recursive_reconstruct(run.r0, run.data.grid, run.data.noisy, run.data.theta, run.cfg);
    nlohmann::json info{{"mode", "reconstruct"},
                        {"alpha", args.alpha},
                        {"newton_iters", args.newton_iters},
                        {"subspace_cap", args.subspace_cap},
                        {"init_refine_iters", args.init_refine_iters}};
    write_run_outputs(args.out_dir, args.data_path, result, run.data, info);
    if (run.data.truth) {
        std::cout << "final relative error: "
                  << shape_relative_error(*run.data.truth, result.shape) << "\n";
    }
    std::cout << "wrote " << args.out_dir << "\n";
    return 0;
}

int run_multilevel(const CommonRunArgs& args, const std::string& levels_spec,
                   double epsilon) {
    PreparedRun run = prepare_run(args);
    LevelPartition partition =
        levels_spec.empty()
            ? LevelPartition::two_level_default(run.data.grid.num_steps, 4.0 * args.alpha,
                                                args.alpha)
            : parse_levels(levels_spec, run.data.grid.num_steps);
    MultilevelOptions opts;
    opts.epsilon = epsilon;
    const ReconstructionResult result = multilevel_reconstruct(
        run.r0, run.data.grid, run.data.noisy, run.data.theta, partition, run.cfg, opts);
    nlohmann::json info{{"mode", "multilevel"},
                        {"alpha", args.alpha},
                        {"levels", levels_spec.empty() ? "default" : levels_spec},
                        {"epsilon", epsilon},
                        {"subspace_cap", args.subspace_cap},
                        {"init_refine_iters", args.init_refine_iters}};
    write_run_outputs(args.out_dir, args.data_path, result, run.data, info);
    if (run.data.truth) {
        std::cout << "final relative error: "
                  << shape_relative_error(*run.data.truth, result.shape) << "\n";
    }
    std::cout << "wrote " << args.out_dir << "\n";
    return 0;
}

int run_oracle(double radius, double k, int obs_count, int n_quad) {
    const IncidentWave wave(k, default_theta());
    const auto dirs = uniform_directions(obs_count);
    const TrigShape disk = TrigShape::circle(radius);
    const FarFieldPattern nys = solve_scattering(disk, wave, dirs, n_quad);
    const FarFieldPattern mie = disk_oracle(radius, {0, 0}, wave, dirs);
    double total = 0.0;
    for (const Complex& v : nys.values) total += std::norm(v);
    total *= 2.0 * std::numbers::pi / obs_count;
    std::cout << "disk radius " << radius << ", k=" << k << ", n_quad=" << n_quad << "\n";
    std::cout << "  nystrom vs mie relative L2: " << relative_l2_distance(nys, mie) << "\n";
    std::cout << "  optical theorem defect (relative): "
              << optical_theorem_defect(nys, wave) / total << "\n";
    return 0;
}

int run_report(const std::string& run_dir, const std::string& data_override) {
    const ReconstructionTrace trace = load_trace(run_dir + "/trace.json");
    std::string data_path = data_override;
    if (data_path.empty()) {
        std::ifstream in(run_dir + "/run_config.json");
        if (!in) throw IoError("cannot read run_config.json; pass --data");
        nlohmann::json info;
        in >> info;
        data_path = info.at("dataset").get<std::string>();
    }
    const Dataset data = load_dataset(data_path);
    write_report(trace, data, run_dir);
    std::cout << "wrote report tables in " << run_dir << "\n";
    return 0;
}

int run_plot(const std::string& run_dir, const std::string& truth_path,
             const std::string& out_path) {
    std::vector<std::pair<TrigShape, std::string>> shapes;
    if (!truth_path.empty()) {
        const Dataset data = load_dataset(truth_path);
        if (data.truth) shapes.emplace_back(*data.truth, "truth");
    }
    shapes.emplace_back(load_shape(run_dir + "/result.json"), "reconstruction");
    write_shape_svg(shapes, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D sound-soft inverse obstacle scattering from multifrequency far fields"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "forward-solve a shape and add noise");
    std::string sim_shape, sim_center, sim_out = "data.json";
    std::vector<double> sim_grid{0.5, 8.0, 11}, sim_theta;
    int sim_obs = 16, sim_nquad = 128;
    double sim_noise = 0.05;
    std::uint64_t sim_seed = 1;
    sim->add_option("--shape", sim_shape, "flower:c1,c2,c3 | circle:R[,cx,cy] | shape file")
        ->required();
    sim->add_option("--center", sim_center, "override center cx,cy");
    sim->add_option("--grid", sim_grid, "kl,kh,N (N+1 grid points)")->expected(3)->delimiter(',');
    sim->add_option("--obs", sim_obs, "number of observation directions");
    sim->add_option("--noise", sim_noise, "relative noise level delta");
    sim->add_option("--seed", sim_seed, "rng seed");
    sim->add_option("--n-quad", sim_nquad, "quadrature nodes");
    sim->add_option("--theta", sim_theta, "incident direction x,y")->expected(2)->delimiter(',');
    sim->add_option("--out", sim_out, "output dataset path");

    const auto add_common = [](CLI::App* cmd, CommonRunArgs& args) {
        cmd->add_option("--data", args.data_path, "dataset path")->required();
        cmd->add_option("--out", args.out_dir, "output run directory")->required();
        cmd->add_option("--alpha", args.alpha, "regularization parameter");
        cmd->add_option("--newton-iters", args.newton_iters, "Newton iterations per frequency");
        cmd->add_option("--subspace-cap", args.subspace_cap, "maximum trig degree");
        cmd->add_option("--init-refine-iters", args.init_refine_iters,
                        "Gauss-Newton refinements in the initial guess");
        cmd->add_option("--box", args.box, "search box xmin,xmax,ymin,ymax")
            ->expected(4)
            ->delimiter(',');
    };

    auto* rec = app.add_subcommand("reconstruct", "projected recursive Newton reconstruction");
    CommonRunArgs rec_args;
    add_common(rec, rec_args);

    auto* ml = app.add_subcommand("multilevel", "multi-level Newton reconstruction");
    CommonRunArgs ml_args;
    std::string ml_levels;
    double ml_epsilon = 0.5;
    add_common(ml, ml_args);
    ml->add_option("--levels", ml_levels,
                   "end:alpha:J,... per level (default: two levels, alpha 4x then 1x)");
    ml->add_option("--epsilon", ml_epsilon, "epsilon for the sigma-based alpha schedule");

    auto* orc = app.add_subcommand("oracle", "disk oracle self-test");
    double orc_radius = 2.0, orc_k = 1.0;
    int orc_obs = 64, orc_nquad = 128;
    bool orc_check = false;
    orc->add_option("--radius", orc_radius, "disk radius");
    orc->add_option("--k", orc_k, "wavenumber");
    orc->add_option("--obs", orc_obs, "observation directions");
    orc->add_option("--n-quad", orc_nquad, "quadrature nodes");
    orc->add_flag("--check", orc_check, "print defect metrics");

    auto* rep = app.add_subcommand("report", "write report tables for a finished run");
    std::string rep_run, rep_data;
    rep->add_option("--run", rep_run, "run directory")->required();
    rep->add_option("--data", rep_data, "dataset path (default: from run_config.json)");

    auto* plt = app.add_subcommand("plot", "overlay truth and reconstruction as SVG");
    std::string plt_run, plt_truth, plt_out = "shapes.svg";
    plt->add_option("--run", plt_run, "run directory")->required();
    plt->add_option("--truth", plt_truth, "dataset with truth shape");
    plt->add_option("--out", plt_out, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) {
            return run_simulate(sim_shape, sim_center, sim_grid, sim_obs, sim_noise,
                                sim_seed, sim_nquad, sim_theta, sim_out);
        }
        if (rec->parsed()) return run_reconstruct(rec_args);
        if (ml->parsed()) return run_multilevel(ml_args, ml_levels, ml_epsilon);
        if (orc->parsed()) return run_oracle(orc_radius, orc_k, orc_obs, orc_nquad);
        if (rep->parsed()) return run_report(rep_run, rep_data);
        if (plt->parsed()) return run_plot(plt_run, plt_truth, plt_out);
    } catch (const PositivityLoss& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const InitFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SingularSystem& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const RankDeficient& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
