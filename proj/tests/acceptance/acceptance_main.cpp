#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../common/fixtures.hpp"
#include "../common/oracles.hpp"
#include "pathset/bench.hpp"
#include "pathset/errors.hpp"
#include "pathset/passages.hpp"
#include "pathset/planner.hpp"
#include "pathset/rng.hpp"
#include "pathset/transfer.hpp"

using namespace pathset;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (ok ? "" : "[fail] ") << what << "; ";
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Outcome passage_sparsity() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto records = bench::run_passage_bench({});
    const double secs = seconds_since(t0);
    const auto s = bench::summarize_passages(records);
    o.require(s.pure_fit.r2 >= 0.95, "pure R2 " + fmt(s.pure_fit.r2) + " >= 0.95");
    o.require(s.ext_fit.r2 >= 0.95, "ext R2 " + fmt(s.ext_fit.r2) + " >= 0.95");
    o.require(s.mean_ratio >= 0.10 && s.mean_ratio <= 0.25, "mean ext/pure " + fmt(s.mean_ratio) + " in [0.10, 0.25]");
    o.require(s.slope_ratio >= 4.0, "slope ratio " + fmt(s.pure_fit.slope, 2) + "/" + fmt(s.ext_fit.slope, 2) + " = " +
                                        fmt(s.slope_ratio, 2) + " >= 4");
    o.require(secs < 60.0, "runtime " + fmt(secs, 1) + " s < 60 s");
    return o;
}

Outcome size_insensitivity() {
    Outcome o;
    bench::PassageBenchConfig c;
    c.counts = {20};
    c.sides = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    const auto t0 = Clock::now();
    const auto records = bench::run_passage_bench(c);
    const double secs = seconds_since(t0);
    const auto s = bench::summarize_passages(records);
    o.require(s.pure_spearman < -0.8, "pure Spearman " + fmt(s.pure_spearman) + " < -0.8");
    o.require(s.ext_max_deviation <= 0.4, "ext max deviation from grand mean " + fmt(100 * s.ext_max_deviation, 1) +
                                              "% <= 40%");
    o.require(secs < 60.0, "runtime " + fmt(secs, 1) + " s < 60 s");
    return o;
}

Outcome planning_speedup() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto records = bench::run_plan_bench({});
    const double secs = seconds_since(t0);
    std::vector<double> pure, ext;
    int failures = 0;
    for (const auto& r : records) {
        (r.method == "pure" ? pure : ext).push_back(r.time_ms);
        failures += !r.success;
    }
    const double ratio = bench::mean(ext) / bench::mean(pure);
    o.require(ratio <= 0.77, "mean ext " + fmt(bench::mean(ext), 1) + " ms / pure " + fmt(bench::mean(pure), 1) +
                                 " ms = " + fmt(ratio) + " <= 0.77");
    o.detail << "failed plans " << failures << "; ";
    o.require(secs < 600.0, "runtime " + fmt(secs, 1) + " s < 600 s");
    return o;
}

bool inside_rejected_disc(const Point& p, const PassageMap& pure, const PassageMap& ext) {
    const auto kept = oracles::keys(ext);
    for (const auto& q : pure.passages)
        if (!kept.count(q.key()) && distance(p, q.center) < q.radius) return true;
    return false;
}

Outcome optimality_equivalence() {
    Outcome o;
    Rng rng(404);
    int instances = 0;
    int identical = 0;
    int skipped = 0;
    int path_level = 0;
    double worst = 0.0;
    while (instances < 50) {
        GeneratorSpec spec;
        spec.obstacle_count = 5 + static_cast<int>(rng.below(16));
        spec.side_length = 2.0;
        spec.seed = rng.next();
        spec.walls_as_obstacles = true;
        const Scene scene = generate_scene(spec);
        const PassageMap pure = detect_passages(scene, CheckMode::Pure);
        const PassageMap ext = detect_passages(scene, CheckMode::Extended);
        const auto admissible = [&](const Point& p) { return scene.point_free(p) && !inside_rejected_disc(p, pure, ext); };
        Point start, goal;
        bool found = false;
        for (int attempt = 0; attempt < 500 && !found; ++attempt) {
            start = {rng.uniform(1, 49), rng.uniform(1, 29)};
            goal = {rng.uniform(1, 49), rng.uniform(1, 29)};
            found = distance(start, goal) >= 20.0 && admissible(start) && admissible(goal);
        }
        if (!found) {
            ++skipped;
            continue;
        }
        ++instances;
        PlannerConfig pc;
        pc.samples = 3000;
        pc.seed = spec.seed;
        pc.check = CheckMode::Pure;
        try {
            const auto a = paopp_plan(scene, start, goal, pc);
            pc.check = CheckMode::Extended;
            const auto b = paopp_plan(scene, start, goal, pc);
            bool same = a.traversal.size() == b.traversal.size();
            for (std::size_t k = 0; same && k < a.traversal.size(); ++k)
                same = a.traversal[k].same_passage(b.traversal[k]);
            const double gap = std::abs(a.cost - b.cost);
            for (const auto* r : {&a, &b})
                path_level += traversal_min_width(recompute_traversal(r->path, pure)) ==
                              traversal_min_width(recompute_traversal(r->path, ext));
            worst = std::max(worst, gap);
            identical += same && gap <= 1e-6;
        } catch (const NoPathFound&) {
            ++identical;  // neither mode connects: both give the same answer
            path_level += 2;
        }
    }
    o.require(identical == instances, std::to_string(identical) + "/" + std::to_string(instances) +
                                          " instances identical (traversal and cost within 1e-6)");
    o.detail << "largest cost gap " << worst << "; skipped " << skipped << " scenes without admissible endpoints; "
             << "returned paths whose bottleneck width agrees under both maps " << path_level << "/" << 2 * instances << "; ";
    return o;
}

Outcome cost_weight_behaviour() {
    Outcome o;
    const Scene s = fixtures::two_corridor_scene();
    int wide_100 = 0, narrow_1 = 0, wide_ratio = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PlannerConfig pc;
        pc.seed = seed;
        pc.cost = CostConfig::weighted(100);
        wide_100 += paopp_plan(s, fixtures::kCorridorStart, fixtures::kCorridorGoal, pc).min_width == fixtures::kWideWidth;
        pc.cost = CostConfig::weighted(1);
        narrow_1 += paopp_plan(s, fixtures::kCorridorStart, fixtures::kCorridorGoal, pc).min_width == fixtures::kNarrowWidth;
        pc.cost = CostConfig::ratio();
        wide_ratio += paopp_plan(s, fixtures::kCorridorStart, fixtures::kCorridorGoal, pc).min_width == fixtures::kWideWidth;
    }
    // Shortest routes: straight through the narrow gap, or around the corners of the wide one.
    const double narrow_len = distance(fixtures::kCorridorStart, fixtures::kCorridorGoal);
    const double wide_len = distance(fixtures::kCorridorStart, {15, 24}) + 20.0 + distance({35, 24}, fixtures::kCorridorGoal);
    const bool ratio_prefers_wide = wide_len / fixtures::kWideWidth < narrow_len / fixtures::kNarrowWidth;
    const double crossover = (wide_len - narrow_len) / (fixtures::kWideWidth - fixtures::kNarrowWidth);
    o.require(wide_100 >= 9, "k_P=100 wide corridor in " + std::to_string(wide_100) + "/10 seeds");
    o.require(narrow_1 >= 9, "k_P=1 narrow corridor in " + std::to_string(narrow_1) + "/10 seeds");
    o.require(ratio_prefers_wide && wide_ratio >= 9,
              "ratio cost: hand computation " + fmt(wide_len, 2) + "/5 vs " + fmt(narrow_len, 2) + "/1 predicts " +
                  (ratio_prefers_wide ? "wide" : "narrow") + ", observed wide in " + std::to_string(wide_ratio) + "/10");
    o.require(crossover > 1.0 && crossover < 100.0, "weighted crossover k_P " + fmt(crossover, 2) + " lies between 1 and 100");
    return o;
}

Outcome pt_vs_sp() {
    Outcome o;
    bench::PathSetBenchConfig c;
    const auto t0 = Clock::now();
    const auto records = bench::run_pathset_bench(c);
    const double secs = seconds_since(t0);
    std::map<std::pair<int, int>, std::vector<double>> pt, sp;
    int pt_fail = 0, pt_total = 0, sp_unverified = 0;
    for (const auto& r : records) {
        if (r.method == "PT") {
            pt[{r.obstacle_count, r.team_size}].push_back(r.time_ms);
            pt_fail += !r.success;
            ++pt_total;
        } else {
            sp[{r.obstacle_count, r.team_size}].push_back(r.time_ms);
            sp_unverified += !r.verified;
        }
    }
    const int k_lo = c.team_sizes.front();
    const int k_hi = c.team_sizes.back();
    double worst_speedup = 1e300;
    for (const int m : c.counts) {
        std::vector<double> pt_means;
        for (const int k : c.team_sizes) {
            const double a = bench::mean(pt[{m, k}]);
            const double b = bench::mean(sp[{m, k}]);
            pt_means.push_back(a);
            worst_speedup = std::min(worst_speedup, b / a);
            if (b < 2.5 * a)
                o.require(false, "M=" + std::to_string(m) + " K=" + std::to_string(k) + " SP/PT " + fmt(b / a, 2));
        }
        const double cv = bench::coefficient_of_variation(pt_means);
        o.require(cv < 0.3, "M=" + std::to_string(m) + " PT CV across K " + fmt(cv) + " < 0.3");
        const double growth = bench::mean(sp[{m, k_hi}]) / bench::mean(sp[{m, k_lo}]);
        o.require(growth >= 4.0, "M=" + std::to_string(m) + " SP(K=" + std::to_string(k_hi) + ")/SP(K=" +
                                     std::to_string(k_lo) + ") " + fmt(growth, 2) + " >= 4");
    }
    o.require(worst_speedup >= 2.5, "smallest SP/PT " + fmt(worst_speedup, 2) + " >= 2.5");
    o.detail << "PT failures " << pt_fail << "/" << pt_total << ", unverified SP sets " << sp_unverified << "; ";
    o.require(secs < 900.0, "runtime " + fmt(secs, 1) + " s < 900 s");
    return o;
}

Polyline random_polyline(Rng& rng, int knots) {
    std::vector<Point> pts;
    for (int k = 0; k < knots; ++k) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 30)});
    return Polyline(pts);
}

Outcome correctness_properties() {
    Outcome o;
    // (a) passage detection against the brute-force oracle
    int scenes = 0, mismatches = 0;
    for (int m = 2; m <= 12; ++m)
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            GeneratorSpec spec;
            spec.obstacle_count = m;
            spec.seed = seed;
            spec.width = 20;
            spec.height = 12;
            spec.side_length = 1.5;
            spec.walls_as_obstacles = seed % 4 == 0;
            const Scene s = generate_scene(spec);
            ++scenes;
            for (const CheckMode mode : {CheckMode::Pure, CheckMode::Extended})
                mismatches += oracles::keys(detect_passages(s, mode)) != oracles::brute_force_passages(s, mode);
        }
    o.require(mismatches == 0, "(a) passage oracle: " + std::to_string(mismatches) + " mismatches over " +
                                   std::to_string(scenes) + " scenes x 2 modes");

    // (b) generated path sets pass collision and pairwise homotopy checks
    bench::PathSetBenchConfig bc;
    int sets = 0, bad = 0, infeasible = 0;
    for (const int m : {10, 20, 30})
        for (const int k : {3, 9, 15})
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const Scene s = bench::pathset_scene(bc, m, seed * 7919 + static_cast<std::uint64_t>(m));
                PathSetConfig cfg;
                cfg.planner.samples = 3000;
                cfg.planner.seed = seed;
                try {
                    const PathSet set = generate_path_set(s, bench::bench_team(bc, k), cfg);
                    ++sets;
                    bad += !verify_path_set(set, s, 1024);
                } catch (const InfeasiblePassage&) {
                    ++infeasible;
                }
            }
    o.require(sets > 0 && bad == 0, "(b) " + std::to_string(sets - bad) + "/" + std::to_string(sets) +
                                        " path sets verified at 1024 samples");
    o.detail << "InfeasiblePassage raised on " << infeasible << " instances; ";

    // (c) fuzzed invariants
    Rng rng(707);
    int endpoint_bad = 0, anchor_bad = 0, order_bad = 0, tree_bad = 0;
    const int cases = 1000;
    for (int t = 0; t < cases; ++t) {
        const Polyline p = random_polyline(rng, 2 + static_cast<int>(rng.below(8)));
        const Point v0{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Point vd{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Polyline moved = transfer_path(p, v0, vd);
        std::vector<Anchor> anchors;
        for (int a = 0; a < 3; ++a) {
            const double eta = 0.05 + 0.3 * a + rng.uniform(0, 0.25);
            anchors.push_back({eta, moved.eval(eta) + Point{rng.uniform(-1, 1), rng.uniform(-1, 1)}});
        }
        const Polyline q = reposition_path(moved, anchors);
        if (!(q.front() == p.front() + v0) || !(q.back() == p.back() + vd)) ++endpoint_bad;
        for (const auto& a : anchors)
            if (distance(q.eval(a.eta), a.point) > 1e-9) {
                ++anchor_bad;
                break;
            }
    }
    for (int t = 0; t < cases; ++t) {
        const double width = rng.uniform(1, 10);
        const double delta = rng.uniform(0, width / 2 - 0.01);
        const std::size_t k = 2 + rng.below(9);
        std::vector<double> coords;
        for (std::size_t j = 0; j < k; ++j) coords.push_back(rng.uniform(-width, 2 * width));
        std::sort(coords.begin(), coords.end());
        const std::size_t pivot = rng.below(k);
        Chord chord;
        chord.reference = {{0, 0}, {width, 0}};
        chord.pivot = pivot;
        for (std::size_t j = 0; j < k; ++j) chord.intersections.push_back({j, 0.5, {coords[j], 0}, coords[j]});
        chord.coord_min = coords.front();
        chord.coord_max = coords.back();
        chord.length = coords.back() - coords.front();
        chord.endpoints = {{coords.front(), 0}, {coords.back(), 0}};
        if (chord.length > width - 2 * delta && width <= 2 * delta) continue;
        const Placement pl = place_reference_point(chord, delta);
        std::vector<double> mapped;
        for (const double c : coords) mapped.push_back(pl.anchor.x + pl.ratio * (c - coords[pivot]));
        bool ok = true;
        for (std::size_t j = 1; j < k; ++j) {
            ok = ok && mapped[j - 1] <= mapped[j];
            if (j > 1 && coords[j] > coords[0]) {
                const double before = (coords[j - 1] - coords[0]) / (coords[j] - coords[0]);
                const double after = (mapped[j - 1] - mapped[0]) / (mapped[j] - mapped[0]);
                ok = ok && std::abs(before - after) < 1e-9;
            }
        }
        order_bad += !ok;
    }
    for (int t = 0; t < cases; ++t) {
        GeneratorSpec spec;
        spec.width = 20;
        spec.height = 12;
        spec.obstacle_count = 2 + static_cast<int>(rng.below(8));
        spec.side_length = 1.5;
        spec.seed = rng.next();
        const PassageMap m = detect_passages(generate_scene(spec), CheckMode::Extended);
        Tree tree(m, t % 2 ? CostConfig::ratio() : CostConfig::weighted(10));
        tree.add_root({rng.uniform(0, 20), rng.uniform(0, 12)});
        for (int n = 0; n < 25; ++n) tree.add_node({rng.uniform(0, 20), rng.uniform(0, 12)});
        for (int u = 0; u < 80; ++u) {
            const int near = static_cast<int>(rng.below(tree.size()));
            const int node = 1 + static_cast<int>(rng.below(tree.size() - 1));
            if (near != node && std::isfinite(tree.node(near).f)) tree.update_node_cost(near, node);
        }
        for (std::size_t i = 1; i < tree.size(); ++i) {
            const auto& n = tree.node(static_cast<int>(i));
            if (n.parent < 0) continue;
            double length = 0.0, width = kNoPassage;
            const auto chain = tree.chain(static_cast<int>(i));
            for (std::size_t e = 1; e < chain.size(); ++e) {
                const Segment seg{tree.node(chain[e - 1]).position, tree.node(chain[e]).position};
                length += seg.length();
                for (const auto& p : m.passages)
                    if (segments_intersection(seg, p.segment)) width = std::min(width, p.width);
            }
            const double expect = tree.cost().evaluate(length, width);
            if (std::abs(n.f - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
                ++tree_bad;
                break;
            }
        }
    }
    o.require(endpoint_bad == 0, "(c) endpoint exactness " + std::to_string(cases - endpoint_bad) + "/" + std::to_string(cases));
    o.require(anchor_bad == 0, "(c) anchor identity " + std::to_string(cases - anchor_bad) + "/" + std::to_string(cases));
    o.require(order_bad == 0, "(c) chord order preservation, " + std::to_string(order_bad) + " violations in " +
                                  std::to_string(cases) + " chords");
    o.require(tree_bad == 0, "(c) tree-cost consistency " + std::to_string(cases - tree_bad) + "/" + std::to_string(cases));
    return o;
}

Outcome mcpp_baseline() {
    Outcome o;
    McppConfig mc;
    const auto corridor = mcpp_plan(fixtures::width4_corridor_scene(), fixtures::kWidth4Start, fixtures::kWidth4Goal, mc);
    o.require(std::abs(corridor.mc - 2.0) <= mc.mc_err, "corridor MC " + fmt(corridor.mc) + " = 2 +- 0.5");

    bench::PlanBenchConfig c;
    c.counts = {10, 20, 30};
    c.with_mcpp = true;
    c.mcpp.mode = McFailureMode::SampleBudget;
    const auto records = bench::run_plan_bench(c);
    std::vector<double> ext, mcpp;
    for (const auto& r : records) {
        if (r.method == "ext") ext.push_back(r.time_ms);
        if (r.method == "mcpp") mcpp.push_back(r.time_ms);
    }
    const double ratio = bench::mean(mcpp) / bench::mean(ext);
    o.require(ratio >= 0.5 && ratio <= 2.0, "MCPP-sample " + fmt(bench::mean(mcpp), 1) + " ms / PAOPP-ext " +
                                                fmt(bench::mean(ext), 1) + " ms = " + fmt(ratio) + " in [0.5, 2]");
    return o;
}

Outcome passages_3d() {
    Outcome o;
    const PassageMap m = detect_passages_3d(fixtures::staircase_scene());
    const std::vector<std::pair<double, double>> bands{{0, 1}, {1, 2}, {2, 3}};
    const std::vector<oracles::KeySet> expected{{{0, 1}, {1, 2}}, {{0, 2}}, {}};
    bool ok = m.height_intervals.size() == 3;
    for (std::size_t k = 0; ok && k < 3; ++k) {
        oracles::KeySet got;
        for (const auto idx : m.height_intervals[k].passages) got.insert(m.passages[idx].key());
        ok = got == expected[k] && m.height_intervals[k].z_low == bands[k].first &&
             m.height_intervals[k].z_high == bands[k].second;
    }
    o.require(ok, "staircase intervals [0,1]: {0-1, 1-2}, [1,2]: {0-2}, [2,3]: {}");

    const Scene flat = fixtures::staircase_scene(2, 2, 2);
    const PassageMap f3 = detect_passages_3d(flat);
    o.require(f3.height_intervals.size() == 1 && oracles::keys(f3) == oracles::keys(detect_passages(flat, CheckMode::Extended)),
              "equal heights give one interval equal to the planar result");
    int random_bad = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorSpec spec;
        spec.obstacle_count = 15;
        spec.seed = seed;
        Scene s = generate_scene(spec);
        s.dimension = Dimension::Volumetric;
        for (auto& ob : s.obstacles) ob.set_height(1.5);
        const PassageMap r = detect_passages_3d(s);
        random_bad += r.height_intervals.size() != 1 || oracles::keys(r) != oracles::keys(detect_passages(s, CheckMode::Extended));
    }
    o.require(random_bad == 0, "equal-height random scenes reduce to planar: " + std::to_string(20 - random_bad) + "/20");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int criterion = 0;
    app.add_option("--criterion", criterion, "Criterion number 1-9 (0 runs all)")->check(CLI::Range(0, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> all{
        {"passage sparsity", passage_sparsity},
        {"size insensitivity", size_insensitivity},
        {"planning speedup", planning_speedup},
        {"optimality equivalence", optimality_equivalence},
        {"cost-weight behaviour", cost_weight_behaviour},
        {"PT vs SP scaling", pt_vs_sp},
        {"correctness properties", correctness_properties},
        {"MCPP baseline", mcpp_baseline},
        {"3D passage detection", passages_3d},
    };
    bool pass = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (criterion != 0 && static_cast<std::size_t>(criterion) != i + 1) continue;
        const auto t0 = Clock::now();
        Outcome out;
        try {
            out = all[i].second();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail << "exception: " << e.what();
        }
        std::printf("criterion %zu %s: %s (%s) [%.1f s]\n", i + 1, out.pass ? "PASS" : "FAIL", all[i].first.c_str(),
                    out.detail.str().c_str(), seconds_since(t0));
        std::fflush(stdout);
        pass = pass && out.pass;
    }
    return pass ? 0 : 1;
}
