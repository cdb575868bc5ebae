#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathset/bench.hpp"
#include "pathset/errors.hpp"
#include "pathset/io.hpp"
#include "pathset/passages.hpp"
#include "pathset/planner.hpp"
#include "pathset/scene.hpp"
#include "pathset/transfer.hpp"

namespace fs = std::filesystem;
using namespace pathset;

namespace {

// Errors in the scene input map to exit code 2.
struct SceneError : Error {
    using Error::Error;
};

Scene read_scene(const std::string& path) {
    try {
        Scene s = load_scene(path);
        s.validate();
        return s;
    } catch (const ParseError& e) {
        throw SceneError(path + ": " + e.what());
    } catch (const InvalidScene& e) {
        throw SceneError(path + ": " + e.what());
    } catch (const OverlappingObstacles& e) {
        throw SceneError(path + ": " + e.what());
    } catch (const Error& e) {
        throw SceneError(e.what());
    }
}

Point parse_point(const std::string& text) {
    std::istringstream in(text);
    Point p;
    char comma = 0;
    if (!(in >> p.x >> comma >> p.y) || comma != ',') throw InvalidArgument("expected x,y but got '" + text + "'");
    return p;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PATHSET_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("PATHSET_SEED is not an integer: ") + env);
        }
    }
    return 1;
}

fs::path prepare_dir(const std::string& dir) {
    fs::create_directories(dir);
    return fs::path(dir);
}

void emit(const fs::path& file, const std::string& contents) {
    write_file(file.string(), contents);
    std::cout << "wrote " << file.string() << "\n";
}

struct CostFlags {
    std::string cost = "weighted";
    double k_p = 10.0;

    CostConfig build() const {
        if (cost == "ratio") return CostConfig::ratio();
        if (cost == "weighted") return CostConfig::weighted(k_p);
        throw InvalidArgument("unknown cost '" + cost + "' (expected ratio|weighted)");
    }
    void attach(CLI::App* app) {
        app->add_option("--cost", cost, "Path cost: ratio or weighted")->capture_default_str();
        app->add_option("--kp", k_p, "Passage weight of the weighted cost")->capture_default_str();
    }
};

McFailureMode mc_mode_from(const std::string& s) {
    if (s == "time") return McFailureMode::TimeBudget;
    if (s == "sample") return McFailureMode::SampleBudget;
    throw InvalidArgument("unknown MC failure mode '" + s + "' (expected time|sample)");
}

std::string describe_width(double w) { return std::isfinite(w) ? format_double(w) : "none"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopic path-set planning: passage detection, passage-aware planning, path transfer."};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed_flag;
    std::string out_dir;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random obstacle scene");
    GeneratorSpec spec;
    std::vector<std::string> shape_names{"square", "triangle", "rectangle"};
    gen->add_option("--count,-m", spec.obstacle_count, "Obstacle count")->capture_default_str();
    gen->add_option("--side", spec.side_length, "Obstacle side length")->capture_default_str();
    gen->add_option("--shapes", shape_names, "Enabled shapes (square triangle rectangle)");
    gen->add_option("--width", spec.width, "Workspace width")->capture_default_str();
    gen->add_option("--height", spec.height, "Workspace height")->capture_default_str();
    gen->add_option("--max-height", spec.max_height, "Obstacle heights uniform in [1, h] (3D scene when > 0)");
    bool gen_no_walls = false;
    gen->add_flag("--no-walls", gen_no_walls, "Do not treat the workspace boundary as obstacles");
    std::vector<std::string> gen_keep;
    gen->add_option("--keep-clear", gen_keep, "Points (x,y) obstacles must avoid");
    gen->add_option("--keep-clear-radius", spec.keep_clear_radius, "Radius kept clear around those points");

    // passages
    auto* pas = app.add_subcommand("passages", "Detect passages of a scene");
    std::string scene_file;
    std::string check = "ext";
    bool three_d = false;
    pas->add_option("scene", scene_file, "Scene JSON")->required();
    pas->add_option("--check", check, "Visibility check: pure or ext")->capture_default_str();
    pas->add_flag("--3d", three_d, "Detect per height interval");

    // plan
    auto* plan = app.add_subcommand("plan", "Plan one passage-aware path");
    std::string start_text = "2,28";
    std::string goal_text = "48,2";
    std::size_t samples = 10000;
    std::string method = "paopp";
    double mc_err = 0.5;
    std::string mc_mode = "sample";
    CostFlags plan_cost;
    plan->add_option("scene", scene_file, "Scene JSON")->required();
    plan->add_option("--start", start_text, "Start x,y")->capture_default_str();
    plan->add_option("--goal", goal_text, "Goal x,y")->capture_default_str();
    plan->add_option("--samples", samples, "Valid sample count")->capture_default_str();
    plan->add_option("--check", check, "Visibility check: pure or ext")->capture_default_str();
    plan->add_option("--method", method, "paopp or mcpp")->capture_default_str();
    plan->add_option("--mc-err", mc_err, "MCPP bisection tolerance")->capture_default_str();
    plan->add_option("--mc-mode", mc_mode, "MCPP failure rule: time or sample")->capture_default_str();
    plan_cost.attach(plan);

    // pathset
    auto* ps = app.add_subcommand("pathset", "Generate a homotopic path set for a team");
    std::string team_file;
    CostFlags ps_cost;
    double delta = 0.0;
    std::string chord = "normal";
    std::string ps_method = "pt";
    ps->add_option("scene", scene_file, "Scene JSON")->required();
    ps->add_option("team", team_file, "Team JSON with \"starts\" and \"goals\"")->required();
    ps->add_option("--samples", samples, "Valid sample count")->capture_default_str();
    ps->add_option("--check", check, "Visibility check: pure or ext")->capture_default_str();
    ps->add_option("--method", ps_method, "pt (transfer) or sp (separate planning)")->capture_default_str();
    ps->add_option("--delta", delta, "Clearance kept from passage ends (0 = automatic)");
    ps->add_option("--chord", chord, "Chord construction: normal or passage")->capture_default_str();
    ps_cost.attach(ps);

    // bench-passages
    auto* bp = app.add_subcommand("bench-passages", "Passage counts over random scenes");
    bench::PassageBenchConfig bpc;
    std::size_t jobs = 1;
    bp->add_option("--counts", bpc.counts, "Obstacle counts");
    bp->add_option("--sides", bpc.sides, "Side lengths");
    bp->add_option("--trials", bpc.trials, "Scenes per configuration")->capture_default_str();

    // bench-plan
    auto* bpl = app.add_subcommand("bench-plan", "PAOPP pure/ext (and MCPP) timing");
    bench::PlanBenchConfig bplc;
    CostFlags bench_cost;
    bool with_mcpp = false;
    bpl->add_option("--counts", bplc.counts, "Obstacle counts");
    bpl->add_option("--trials", bplc.trials, "Trials per count")->capture_default_str();
    bpl->add_option("--side", bplc.side_length, "Obstacle side length")->capture_default_str();
    bpl->add_option("--samples", bplc.samples, "Valid sample count")->capture_default_str();
    bpl->add_flag("--mcpp", with_mcpp, "Also run the max-clearance baseline");
    bpl->add_option("--mc-err", mc_err, "MCPP bisection tolerance")->capture_default_str();
    bpl->add_option("--mc-mode", mc_mode, "MCPP failure rule: time or sample")->capture_default_str();
    bench_cost.attach(bpl);

    // bench-pathset
    auto* bps = app.add_subcommand("bench-pathset", "Path transfer vs separate planning timing");
    bench::PathSetBenchConfig bpsc;
    CostFlags bps_cost;
    bool no_sp = false;
    bps->add_option("--counts", bpsc.counts, "Obstacle counts");
    bps->add_option("--ks", bpsc.team_sizes, "Team sizes");
    bps->add_option("--trials", bpsc.trials, "Trials per configuration")->capture_default_str();
    bps->add_option("--samples", bpsc.samples, "Valid sample count")->capture_default_str();
    bps->add_flag("--no-sp", no_sp, "Skip the separate-planning baseline");
    bps_cost.attach(bps);

    // render
    auto* ren = app.add_subcommand("render", "Draw a scene with optional passages and paths as SVG");
    std::string passages_file, pure_file, plan_file, pathset_file;
    ren->add_option("scene", scene_file, "Scene JSON")->required();
    ren->add_option("--passages", passages_file, "Passage map JSON drawn solid");
    ren->add_option("--pure", pure_file, "Passage map JSON from the pure check (extra ones dashed)");
    ren->add_option("--plan", plan_file, "Plan JSON");
    ren->add_option("--pathset", pathset_file, "Path set JSON");
    ren->add_option("--team", team_file, "Team JSON");

    for (auto* sub : {gen, pas, plan, ps, bp, bpl, bps, ren}) {
        sub->add_option("--out-dir,-o", out_dir, "Output directory (default ./out/<command>)");
        sub->add_option("--seed", seed_flag, "Random seed (default $PATHSET_SEED or 1)");
    }
    for (auto* sub : {bp, bpl, bps}) sub->add_option("--jobs,-j", jobs, "Worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
        CLI::App* active = app.get_subcommands().front();
        const fs::path dir = prepare_dir(out_dir.empty() ? "out/" + active->get_name() : out_dir);

        if (active == gen) {
            spec.seed = seed;
            spec.walls_as_obstacles = !gen_no_walls;
            spec.shapes.clear();
            for (const auto& s : shape_names) spec.shapes.push_back(shape_from_string(s));
            for (const auto& p : gen_keep) spec.keep_clear.push_back(parse_point(p));
            const Scene scene = generate_scene(spec);
            emit(dir / "scene.json", scene_to_json(scene));
            emit(dir / "scene.svg", render_svg(scene));
            std::cout << "obstacles " << scene.obstacles.size() << "\n";
        } else if (active == pas) {
            const Scene scene = read_scene(scene_file);
            const CheckMode mode = check_mode_from_string(check);
            const PassageMap map = three_d ? detect_passages_3d(scene, mode) : detect_passages(scene, mode);
            emit(dir / "passages.json", passages_to_json(map));
            RenderOptions ro;
            ro.passages = &map;
            PassageMap pure;
            if (mode == CheckMode::Extended && !three_d) {
                pure = detect_passages(scene, CheckMode::Pure);
                ro.pure = &pure;
            }
            emit(dir / "passages.svg", render_svg(scene, ro));
            std::cout << "passages " << map.size() << " (" << to_string(mode) << ")\n";
        } else if (active == plan) {
            const Scene scene = read_scene(scene_file);
            const Point start = parse_point(start_text);
            const Point goal = parse_point(goal_text);
            PlanResult result;
            if (method == "paopp") {
                PlannerConfig pc;
                pc.cost = plan_cost.build();
                pc.check = check_mode_from_string(check);
                pc.samples = samples;
                pc.seed = seed;
                result = paopp_plan(scene, start, goal, pc);
            } else if (method == "mcpp") {
                McppConfig mc;
                mc.mc_err = mc_err;
                mc.mode = mc_mode_from(mc_mode);
                mc.seed = seed;
                const McppResult r = mcpp_plan(scene, start, goal, mc);
                result = r.plan;
                std::cout << "mc " << format_double(r.mc) << " rounds " << r.rounds << "\n";
            } else {
                throw InvalidArgument("unknown method '" + method + "' (expected paopp|mcpp)");
            }
            emit(dir / "plan.json", plan_to_json(result));
            RenderOptions ro;
            ro.path = &result.path;
            emit(dir / "plan.svg", render_svg(scene, ro));
            std::cout << "length " << format_double(result.length) << " min_width " << describe_width(result.min_width)
                      << " cost " << format_double(result.cost) << " passages_crossed " << result.traversal.size()
                      << "\n";
        } else if (active == ps) {
            const Scene scene = read_scene(scene_file);
            const Team team = team_from_json(read_file(team_file));
            PlannerConfig pc;
            pc.cost = ps_cost.build();
            pc.check = check_mode_from_string(check);
            pc.samples = samples;
            pc.seed = seed;
            PathSet set;
            if (ps_method == "pt") {
                PathSetConfig cfg;
                cfg.planner = pc;
                cfg.transfer.delta = delta;
                if (chord == "passage")
                    cfg.transfer.chord = ChordMethod::OnPassage;
                else if (chord != "normal")
                    throw InvalidArgument("unknown chord method '" + chord + "' (expected normal|passage)");
                set = generate_path_set(scene, team, cfg);
            } else if (ps_method == "sp") {
                set = separately_plan(scene, team, pc);
            } else {
                throw InvalidArgument("unknown method '" + ps_method + "' (expected pt|sp)");
            }
            emit(dir / "pathset.json", pathset_to_json(set));
            RenderOptions ro;
            ro.path_set = &set;
            ro.team = &team;
            emit(dir / "pathset.svg", render_svg(scene, ro));
            std::cout << "paths " << set.paths.size() << " pivot " << set.pivot << " verified "
                      << (verify_path_set(set, scene) ? "yes" : "no") << " time_ms " << format_double(set.wall_time_ms)
                      << "\n";
        } else if (active == bp) {
            bpc.seed = seed;
            bpc.jobs = jobs;
            const auto records = bench::run_passage_bench(bpc);
            emit(dir / "passages.csv", bench::passage_csv(records).to_string());
            emit(dir / "summary.csv", bench::passage_summary_csv(records).to_string());
            const auto s = bench::summarize_passages(records);
            std::cout << "pure slope " << format_double(s.pure_fit.slope) << " r2 " << format_double(s.pure_fit.r2)
                      << " | ext slope " << format_double(s.ext_fit.slope) << " r2 " << format_double(s.ext_fit.r2)
                      << " | mean ext/pure " << format_double(s.mean_ratio) << "\n";
        } else if (active == bpl) {
            bplc.seed = seed;
            bplc.jobs = jobs;
            bplc.cost = bench_cost.build();
            bplc.with_mcpp = with_mcpp;
            bplc.mcpp.mc_err = mc_err;
            bplc.mcpp.mode = mc_mode_from(mc_mode);
            const auto records = bench::run_plan_bench(bplc);
            emit(dir / "plan.csv", bench::plan_csv(records).to_string());
            std::vector<double> pure_ms, ext_ms;
            for (const auto& r : records) {
                if (r.method == "pure") pure_ms.push_back(r.time_ms);
                if (r.method == "ext") ext_ms.push_back(r.time_ms);
            }
            std::cout << "mean pure ms " << format_double(bench::mean(pure_ms)) << " | mean ext ms "
                      << format_double(bench::mean(ext_ms)) << "\n";
        } else if (active == bps) {
            bpsc.seed = seed;
            bpsc.jobs = jobs;
            bpsc.cost = bps_cost.build();
            bpsc.with_sp = !no_sp;
            const auto records = bench::run_pathset_bench(bpsc);
            emit(dir / "pathset.csv", bench::pathset_csv(records).to_string());
        } else if (active == ren) {
            const Scene scene = read_scene(scene_file);
            RenderOptions ro;
            PassageMap passages, pure;
            PlanResult planned;
            PathSet set;
            Team team;
            if (!passages_file.empty()) {
                passages = passages_from_json(read_file(passages_file));
                ro.passages = &passages;
            }
            if (!pure_file.empty()) {
                pure = passages_from_json(read_file(pure_file));
                ro.pure = &pure;
            }
            if (!plan_file.empty()) {
                planned = plan_from_json(read_file(plan_file));
                ro.path = &planned.path;
            }
            if (!pathset_file.empty()) {
                set = pathset_from_json(read_file(pathset_file));
                ro.path_set = &set;
            }
            if (!team_file.empty()) {
                team = team_from_json(read_file(team_file));
                ro.team = &team;
            }
            emit(dir / "render.svg", render_svg(scene, ro));
        }
    } catch (const SceneError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
