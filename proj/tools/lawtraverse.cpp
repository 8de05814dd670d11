// lawtraverse: fit scaling laws, plan shape schedules, simulate them, and
// account for their cost. JSON goes to stdout, diagnostics to stderr.
//
// Exit codes: 0 success, 1 domain error, 2 usage or parse error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lawtraverse/flopcost.hpp"
#include "lawtraverse/io.hpp"
#include "lawtraverse/lawfit.hpp"
#include "lawtraverse/svg.hpp"
#include "lawtraverse/synthlab.hpp"
#include "lawtraverse/trajectory.hpp"
#include "lawtraverse/traverse.hpp"

namespace lt = lawtraverse;
using nlohmann::json;

namespace {

// Defaults from the JSON file named by LAWTRAVERSE_CONFIG; flags override.
class Defaults {
public:
    Defaults() {
        const char* path = std::getenv("LAWTRAVERSE_CONFIG");
        if (!path || !*path) return;
        config_ = lt::io::read_json_file(path);
        if (!config_.is_object()) throw lt::ParseError("LAWTRAVERSE_CONFIG must name a JSON object");
    }

    template <class T>
    T get(const char* key, T fallback) const {
        auto it = config_.find(key);
        if (it == config_.end()) return fallback;
        try {
            return it->get<T>();
        } catch (const json::exception&) {
            throw lt::ParseError(std::string("LAWTRAVERSE_CONFIG key '") + key + "' has the wrong type");
        }
    }

private:
    json config_ = json::object();
};

void emit(const json& payload) { std::cout << payload.dump(2) << "\n"; }

std::map<std::string, double> parse_step_costs(const std::string& text) {
    std::map<std::string, double> out;
    if (text.empty()) return out;
    if (text.find('=') == std::string::npos) {
        const json j = lt::io::read_json_file(text);
        if (!j.is_object()) throw lt::ParseError("--steps-with file must hold a JSON object");
        for (const auto& [k, v] : j.items()) {
            if (!v.is_number()) throw lt::ParseError("--steps-with value for '" + k + "' must be a number");
            out[k] = v.get<double>();
        }
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto eq = item.rfind('=');
        if (eq == std::string::npos || eq == 0) throw lt::ParseError("--steps-with expects shape=cost pairs");
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            out[item.substr(0, eq)] = v;
        } catch (const std::exception&) {
            throw lt::ParseError("--steps-with cost '" + item.substr(eq + 1) + "' is not a number");
        }
    }
    return out;
}

std::vector<std::string> family_shapes(const lt::LawFamily& fam) {
    if (fam.shape_order()) return *fam.shape_order();
    std::vector<std::string> out;
    for (const auto& l : fam.laws()) out.push_back(l.shape);
    return out;
}

std::vector<std::pair<double, double>> law_curve(const lt::PowerLaw& law, double lo, double hi, std::size_t n) {
    std::vector<std::pair<double, double>> pts;
    for (double c : lt::log_grid(lo, hi, n)) pts.emplace_back(c, lt::evaluate(law, c));
    return pts;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::vector<std::string> files;
    double delta = 1e-3;
    std::size_t bins = 64;
    std::string space = "linear";
    std::string out;
    std::string shape_parameter = "shape";
};

int run_fit(const FitArgs& args) {
    lt::FitConfig cfg;
    cfg.huber_delta = args.delta;
    cfg.resample_bins = args.bins;
    cfg.residual_space = args.space == "log" ? lt::ResidualSpace::log : lt::ResidualSpace::linear;

    std::vector<lt::RunSeries> series;
    std::set<std::string> labels;
    for (const auto& f : args.files) {
        auto s = lt::io::read_series(f);
        if (!labels.insert(s.shape).second)
            throw lt::ParseError("shape label '" + s.shape + "' appears in more than one run file (" + f + ")");
        series.push_back(std::move(s));
    }

    std::vector<lt::PowerLaw> laws;
    json reports = json::array();
    for (const auto& s : series) {
        std::cerr << "fitting '" << s.shape << "' (" << s.points.size() << " points)\n";
        const auto report = lt::fit(s, cfg);
        laws.push_back(report.law);
        json r = lt::io::to_json(report);
        r["shape"] = s.shape;
        reports.push_back(std::move(r));
    }
    lt::LawFamily family(std::move(laws), args.shape_parameter);
    const json fam = lt::io::to_json(family);
    if (!args.out.empty()) lt::io::write_text_file(args.out, fam.dump(2) + "\n");
    emit(json{{"family", fam}, {"reports", reports}});
    return 0;
}

// ---------------------------------------------------------------- schedule

struct ScheduleArgs {
    std::string family;
    std::optional<double> e_start, e_end;
    std::size_t grid = 512;
    double refine_tol = 0;
    bool log_grid = false;
    std::string baseline;
    std::optional<double> budget;
    double min_fraction = 1e-3;
    std::string steps_with;
};

int run_schedule(const ScheduleArgs& args) {
    const auto fam = lt::io::read_family(args.family);
    const double top = args.e_start.value_or(fam.max_start_error());
    json out;
    lt::Schedule sched;
    if (args.baseline.empty()) {
        const double floor_c = fam.min_asymptote();
        const double bottom = args.e_end.value_or(floor_c + 1e-3 * (fam.max_start_error() - floor_c));
        const auto part = lt::partition(fam, top, bottom, {args.grid, args.refine_tol, args.log_grid});
        sched = lt::greedy_schedule(part);
        out["partition"] = lt::io::to_json(part);
        if (fam.shape_order()) out["monotone"] = lt::is_monotone(sched, fam);
    } else {
        if (!args.budget) throw lt::ParseError("--baseline needs --budget");
        const auto kind = args.baseline == "linear" ? lt::ScheduleKind::linear : lt::ScheduleKind::logarithmic;
        sched = lt::baseline_schedule(kind, family_shapes(fam), *args.budget, args.min_fraction);
    }
    out["schedule"] = lt::io::to_json(sched);
    if (!args.steps_with.empty()) {
        json steps = json::array();
        for (const auto& s : lt::to_step_schedule(sched, fam, parse_step_costs(args.steps_with), top))
            steps.push_back({{"shape", s.shape}, {"step", s.step}});
        out["steps"] = steps;
    }
    emit(out);
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string family;
    std::string schedule;
    std::optional<double> e_start;
    std::optional<double> target;
    std::optional<double> max_compute;
    std::size_t samples = 256;
    std::string csv;
    std::string svg;
};

int run_simulate(const SimulateArgs& args) {
    const auto fam = lt::io::read_family(args.family);
    json sj = lt::io::read_json_file(args.schedule);
    // accept the full output of `schedule` as well as a bare schedule
    if (sj.is_object() && sj.contains("schedule") && !sj.contains("kind")) sj = sj["schedule"];
    const auto sched = lt::io::schedule_from_json(sj);

    const double e_start = args.e_start.value_or(lt::start_error(fam.at(sched.initial)));
    lt::SimulateOptions opts;
    opts.sample_count = args.samples;
    opts.e_target = args.target;
    opts.max_compute = args.max_compute;
    const auto traj = lt::simulate(fam, sched, e_start, opts);
    const auto phases = lt::compose(fam, sched, e_start);

    json transitions = json::array();
    for (const auto& m : traj.markers)
        transitions.push_back({{"compute", m.compute}, {"error", m.error}, {"from", m.from}, {"to", m.to}});
    json out{{"kind", std::string(lt::to_string(sched.kind))},
             {"e_start", e_start},
             {"transitions", transitions},
             {"final", {{"compute", traj.samples.back().compute}, {"error", traj.samples.back().error}}}};

    if (args.target) {
        const double t = *args.target;
        const double spent = lt::compute_to_error(fam, phases, t);
        out["target"] = t;
        out["compute_to_target"] = spent;
        const lt::PowerLaw* best = nullptr;
        for (const auto& law : fam.laws())
            if (lt::reachable(law, t) && (!best || lt::inverse(law, t) < lt::inverse(*best, t))) best = &law;
        if (best) {
            const double stat = lt::inverse(*best, t);
            out["best_static"] = {{"shape", best->shape}, {"compute", stat}};
            out["savings"] = stat > 0 ? 1.0 - spent / stat : 0.0;
        } else {
            out["savings"] = nullptr;
            std::cerr << "savings undefined: no static law reaches " << t << "\n";
        }
    }

    if (!args.csv.empty()) lt::io::write_text_file(args.csv, lt::io::trajectory_to_csv(traj));
    if (!args.svg.empty()) {
        const double hi = traj.samples.back().compute;
        const double lo = hi * 1e-4;
        std::vector<lt::svg::Series> series;
        for (const auto& law : fam.laws()) series.push_back({law.shape, law_curve(law, lo, hi, 128), true});
        lt::svg::Series path{"scheduled", {}, false};
        for (const auto& s : traj.samples)
            if (s.compute >= lo) path.points.emplace_back(s.compute, s.error);
        series.push_back(std::move(path));
        std::vector<lt::svg::Marker> markers;
        for (const auto& m : traj.markers) markers.push_back({m.compute, m.error, m.from + "->" + m.to});
        lt::io::write_text_file(args.svg, lt::svg::render_loglog("scheduled trajectory", "compute", "error", series, markers));
    }
    emit(out);
    return 0;
}

// ---------------------------------------------------------------- frontier

struct FrontierArgs {
    std::vector<std::string> families;
    double grid_min = 0;
    double grid_max = 0;
    std::size_t points = 64;
    std::string csv;
    std::string svg;
};

int run_frontier(const FrontierArgs& args) {
    std::vector<lt::LawFamily> fams;
    std::vector<std::string> names;
    for (const auto& f : args.families) {
        fams.push_back(lt::io::read_family(f));
        names.push_back(std::filesystem::path(f).stem().string());
    }
    const auto grid = lt::log_grid(args.grid_min, args.grid_max, args.points);
    const auto fr = lt::frontier(fams, grid, names);
    if (!args.csv.empty()) lt::io::write_text_file(args.csv, lt::io::frontier_to_csv(fr));
    if (!args.svg.empty()) {
        std::vector<lt::svg::Series> series;
        for (const auto& fam : fams)
            for (const auto& law : fam.laws()) series.push_back({law.shape, law_curve(law, grid.front(), grid.back(), 128), true});
        lt::svg::Series st{"static frontier", {}, false}, sc{"scheduled frontier", {}, false};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            st.points.emplace_back(grid[i], fr.static_points[i].error);
            sc.points.emplace_back(grid[i], fr.scheduled_points[i].error);
        }
        series.push_back(std::move(st));
        series.push_back(std::move(sc));
        lt::io::write_text_file(args.svg, lt::svg::render_loglog("compute-optimal frontier", "compute", "error", series, {}));
    }
    emit(lt::io::to_json(fr));
    return 0;
}

// ---------------------------------------------------------------- flops / carbon

struct FlopsArgs {
    std::string shape;
    std::optional<long long> batch;
    std::string teacher;
    bool include_embedding = false;
};

int run_flops(const FlopsArgs& args) {
    const auto shape = lt::parse_shape(args.shape);
    const double fwd = lt::forward_flops(shape, args.include_embedding);
    json out{{"shape", lt::format_shape(shape)}, {"forward_flops", fwd}, {"forward_gflops", fwd / 1e9}};
    if (!args.teacher.empty()) {
        const auto teacher = lt::parse_shape(args.teacher);
        const double tf = lt::forward_flops(teacher, args.include_embedding);
        out["teacher"] = lt::format_shape(teacher);
        out["teacher_forward_flops"] = tf;
        if (args.batch) out["step_flops"] = lt::distill_step_flops(fwd, tf, *args.batch);
    } else if (args.batch) {
        out["step_flops"] = lt::train_step_flops(fwd, *args.batch);
    }
    if (args.batch) out["batch"] = *args.batch;
    emit(out);
    return 0;
}

int run_carbon(const lt::HardwareRun& run) {
    const auto est = lt::carbon(run);
    emit(json{{"gpu_hours", run.gpu_hours},
              {"avg_watts", run.avg_watts},
              {"pue", run.pue},
              {"carbon_intensity", run.carbon_intensity},
              {"megawatt_hours", est.megawatt_hours},
              {"tonnes_co2eq", est.tonnes_co2eq}});
    return 0;
}

// ---------------------------------------------------------------- fixtures

struct SynthArgs {
    double a = 0.8, b = 1.0, c = 0.1, d = 1.0;
    std::string shape = "synthetic";
    std::size_t count = 64;
    double lo = -2, hi = 2;
    double sigma = 0;
    std::uint64_t seed = 0;
    std::string format = "csv";
};

int run_synth(const SynthArgs& args) {
    lt::SynthSpec spec;
    spec.law = lt::PowerLaw::make(args.a, args.b, args.c, args.d, args.shape);
    spec.count = args.count;
    spec.log10_compute_lo = args.lo;
    spec.log10_compute_hi = args.hi;
    spec.sigma = args.sigma;
    spec.seed = args.seed;
    const auto series = lt::generate(spec);
    if (args.format == "json")
        emit(lt::io::to_json(series));
    else
        std::cout << lt::io::series_to_csv(series);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fit scaling laws, plan compute-optimal shape schedules, and account for their cost"};
    app.require_subcommand(1);

    std::optional<Defaults> defaults;
    try {
        defaults.emplace();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const auto& cfg = *defaults;

    FitArgs fit_args;
    fit_args.delta = cfg.get("delta", fit_args.delta);
    fit_args.bins = cfg.get("bins", fit_args.bins);
    fit_args.space = cfg.get("space", fit_args.space);
    auto* fit = app.add_subcommand("fit", "Fit one law per run file and merge them into a family");
    fit->add_option("files", fit_args.files, "Run files (CSV compute,error or JSON)")->required()->check(CLI::ExistingFile);
    fit->add_option("--delta", fit_args.delta, "Huber delta")->check(CLI::PositiveNumber);
    fit->add_option("--bins", fit_args.bins, "Log-equidistant resampling bins")->check(CLI::Range(2, 1 << 20));
    fit->add_option("--space", fit_args.space, "Residual space")->check(CLI::IsMember({"linear", "log"}));
    fit->add_option("--out", fit_args.out, "Write the family JSON here");
    fit->add_option("--shape-parameter", fit_args.shape_parameter, "Name of the varied shape parameter");

    ScheduleArgs sched_args;
    sched_args.grid = cfg.get("grid", sched_args.grid);
    sched_args.min_fraction = cfg.get("min_fraction", sched_args.min_fraction);
    auto* schedule = app.add_subcommand("schedule", "Partition the error axis and derive a schedule");
    schedule->add_option("family", sched_args.family, "Law family JSON")->required()->check(CLI::ExistingFile);
    schedule->add_option("--e-start", sched_args.e_start, "Upper error bound (default: highest start error)");
    schedule->add_option("--e-end", sched_args.e_end, "Lower error bound");
    schedule->add_option("--grid", sched_args.grid, "Grid points")->check(CLI::Range(16, 1 << 24));
    schedule->add_option("--refine-tol", sched_args.refine_tol, "Boundary tolerance");
    schedule->add_flag("--log-grid", sched_args.log_grid, "Space the grid in log(E - c)");
    schedule->add_option("--baseline", sched_args.baseline, "Emit a baseline instead")
        ->check(CLI::IsMember({"linear", "log"}));
    schedule->add_option("--budget", sched_args.budget, "Total compute for baselines")->check(CLI::PositiveNumber);
    schedule->add_option("--min-fraction", sched_args.min_fraction, "First log-baseline switch as a budget fraction");
    schedule->add_option("--steps-with", sched_args.steps_with, "Per-step cost: shape=cost,... or a JSON file");

    SimulateArgs sim_args;
    sim_args.samples = cfg.get("samples", sim_args.samples);
    auto* simulate = app.add_subcommand("simulate", "Simulate a schedule under the effective-compute model");
    simulate->add_option("family", sim_args.family, "Law family JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("schedule", sim_args.schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--e-start", sim_args.e_start, "Starting error");
    simulate->add_option("--target", sim_args.target, "Target error for the savings summary");
    simulate->add_option("--max-compute", sim_args.max_compute, "Simulation horizon")->check(CLI::PositiveNumber);
    simulate->add_option("--samples", sim_args.samples, "Trajectory samples")->check(CLI::Range(2, 1 << 24));
    simulate->add_option("--csv", sim_args.csv, "Write the trajectory CSV here");
    simulate->add_option("--svg", sim_args.svg, "Write a log-log SVG plot here");

    FrontierArgs fr_args;
    fr_args.points = cfg.get("points", fr_args.points);
    auto* frontier = app.add_subcommand("frontier", "Static and scheduled compute-optimal frontiers");
    frontier->add_option("families", fr_args.families, "Law family JSON files")->required()->check(CLI::ExistingFile);
    frontier->add_option("--grid-min", fr_args.grid_min, "Smallest compute")->required()->check(CLI::PositiveNumber);
    frontier->add_option("--grid-max", fr_args.grid_max, "Largest compute")->required()->check(CLI::PositiveNumber);
    frontier->add_option("--points", fr_args.points, "Grid points")->check(CLI::Range(1, 1 << 24));
    frontier->add_option("--csv", fr_args.csv, "Write the frontier CSV here");
    frontier->add_option("--svg", fr_args.svg, "Write a log-log SVG plot here");

    FlopsArgs flops_args;
    auto* flops = app.add_subcommand("flops", "Forward and per-step FLOPs of a model shape");
    flops->add_option("shape", flops_args.shape, "e.g. vit:d=768,L=12,p=8,img=120x120x3 or lm:d=768,L=12,n=1024")
        ->required();
    flops->add_option("--batch", flops_args.batch, "Batch size for per-step cost")->check(CLI::PositiveNumber);
    flops->add_option("--teacher", flops_args.teacher, "Distillation teacher shape (forward only)");
    flops->add_flag("--include-embedding", flops_args.include_embedding, "Count the patch embedding");

    lt::HardwareRun hw;
    hw.pue = cfg.get("pue", hw.pue);
    hw.carbon_intensity = cfg.get("intensity", hw.carbon_intensity);
    auto* carbon = app.add_subcommand("carbon", "Energy and CO2 estimate of a training run");
    carbon->add_option("--gpu-hours", hw.gpu_hours, "GPU hours")->required()->check(CLI::NonNegativeNumber);
    carbon->add_option("--watts", hw.avg_watts, "Average draw per GPU")->required()->check(CLI::PositiveNumber);
    carbon->add_option("--pue", hw.pue, "Power usage effectiveness")->check(CLI::PositiveNumber);
    carbon->add_option("--intensity", hw.carbon_intensity, "kg CO2eq per kWh")->check(CLI::PositiveNumber);

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "Print a fixture law family");
    preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(lt::preset_names()));

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Sample a synthetic run series from a law");
    synth->add_option("--a", synth_args.a);
    synth->add_option("--b", synth_args.b);
    synth->add_option("--c", synth_args.c);
    synth->add_option("--d", synth_args.d);
    synth->add_option("--shape", synth_args.shape);
    synth->add_option("--count", synth_args.count)->check(CLI::Range(2, 1 << 24));
    synth->add_option("--log10-min", synth_args.lo);
    synth->add_option("--log10-max", synth_args.hi);
    synth->add_option("--sigma", synth_args.sigma)->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", synth_args.seed);
    synth->add_option("--format", synth_args.format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, std::cerr, std::cerr);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    try {
        if (*fit) return run_fit(fit_args);
        if (*schedule) return run_schedule(sched_args);
        if (*simulate) return run_simulate(sim_args);
        if (*frontier) return run_frontier(fr_args);
        if (*flops) return run_flops(flops_args);
        if (*carbon) return run_carbon(hw);
        if (*preset) {
            emit(lt::io::to_json(lt::preset_family(preset_name)));
            return 0;
        }
        if (*synth) return run_synth(synth_args);
    } catch (const lt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lt::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
