#include "pathset/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "pathset/errors.hpp"
#include "pathset/passages.hpp"
#include "pathset/rng.hpp"

namespace pathset::bench {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

std::string num(double v) { return std::isfinite(v) ? format_double(v) : std::string(v > 0 ? "inf" : "-inf"); }

}  // namespace

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("linear fit needs two or more pairs");
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("linear fit needs distinct x values");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (f.slope * xs[i] + f.intercept);
        ss_res += e * e;
    }
    f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return f;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("rank correlation needs two or more pairs");
    const auto rx = ranks(xs);
    const auto ry = ranks(ys);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double coefficient_of_variation(const std::vector<double>& v) {
    const double m = mean(v);
    return m == 0.0 ? 0.0 : stddev(v) / m;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, n);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t trial_seed(std::uint64_t base, const std::string& experiment, std::uint64_t config, std::uint64_t trial) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : experiment) h = (h ^ c) * 1099511628211ULL;
    return derive_seed(base, {h, config, trial});
}

std::vector<PassageRecord> run_passage_bench(const PassageBenchConfig& config) {
    std::vector<PassageRecord> records;
    for (std::size_t s = 0; s < config.sides.size(); ++s)
        for (std::size_t c = 0; c < config.counts.size(); ++c)
            for (int t = 0; t < config.trials; ++t) {
                PassageRecord r;
                r.obstacle_count = config.counts[c];
                r.side_length = config.sides[s];
                r.trial = t;
                r.seed = trial_seed(config.seed, "passages",
                                    static_cast<std::uint64_t>(s) * 1000003u + static_cast<std::uint64_t>(c),
                                    static_cast<std::uint64_t>(t));
                records.push_back(r);
            }
    parallel_for(records.size(), config.jobs, [&](std::size_t i) {
        PassageRecord& r = records[i];
        GeneratorSpec spec;
        spec.obstacle_count = r.obstacle_count;
        spec.side_length = r.side_length;
        spec.seed = r.seed;
        const Scene scene = generate_scene(spec);
        auto t0 = Clock::now();
        r.pure = detect_passages(scene, CheckMode::Pure).size();
        r.pure_ms = elapsed_ms(t0);
        t0 = Clock::now();
        r.ext = detect_passages(scene, CheckMode::Extended).size();
        r.ext_ms = elapsed_ms(t0);
    });
    return records;
}

std::vector<PassageGroup> group_passages(const std::vector<PassageRecord>& records) {
    std::vector<PassageGroup> groups;
    std::vector<int> sizes;
    for (const auto& r : records) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const PassageGroup& g) {
            return g.obstacle_count == r.obstacle_count && g.side_length == r.side_length;
        });
        if (it == groups.end()) {
            groups.push_back({r.obstacle_count, r.side_length, 0.0, 0.0});
            sizes.push_back(0);
            it = groups.end() - 1;
        }
        const std::size_t k = static_cast<std::size_t>(it - groups.begin());
        it->mean_pure += static_cast<double>(r.pure);
        it->mean_ext += static_cast<double>(r.ext);
        ++sizes[k];
    }
    for (std::size_t k = 0; k < groups.size(); ++k) {
        groups[k].mean_pure /= sizes[k];
        groups[k].mean_ext /= sizes[k];
    }
    return groups;
}

PassageSummary summarize_passages(const std::vector<PassageRecord>& records) {
    const auto groups = group_passages(records);
    std::vector<double> counts, sides, pure, ext, ratios;
    for (const auto& g : groups) {
        counts.push_back(g.obstacle_count);
        sides.push_back(g.side_length);
        pure.push_back(g.mean_pure);
        ext.push_back(g.mean_ext);
        if (g.mean_pure > 0.0) ratios.push_back(g.mean_ext / g.mean_pure);
    }
    PassageSummary s;
    s.mean_ratio = mean(ratios);
    const bool vary_count = std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end();
    const bool vary_side = std::adjacent_find(sides.begin(), sides.end(), std::not_equal_to<>()) != sides.end();
    if (vary_count) {
        s.pure_fit = linear_fit(counts, pure);
        s.ext_fit = linear_fit(counts, ext);
        s.slope_ratio = s.ext_fit.slope != 0.0 ? s.pure_fit.slope / s.ext_fit.slope : 0.0;
    }
    if (vary_side) s.pure_spearman = spearman(sides, pure);
    const double grand = mean(ext);
    for (const double e : ext)
        if (grand > 0.0) s.ext_max_deviation = std::max(s.ext_max_deviation, std::abs(e - grand) / grand);
    return s;
}

CsvTable passage_csv(const std::vector<PassageRecord>& records) {
    CsvTable t;
    t.header = {"experiment", "obstacle_count", "side_length", "trial", "seed", "pure_passages", "ext_passages",
                "pure_ms", "ext_ms"};
    for (const auto& r : records)
        t.rows.push_back({"passages", std::to_string(r.obstacle_count), num(r.side_length), std::to_string(r.trial),
                          std::to_string(r.seed), std::to_string(r.pure), std::to_string(r.ext), num(r.pure_ms),
                          num(r.ext_ms)});
    return t;
}

CsvTable passage_summary_csv(const std::vector<PassageRecord>& records) {
    CsvTable t;
    t.header = {"obstacle_count", "side_length", "mean_pure", "mean_ext", "ratio"};
    for (const auto& g : group_passages(records))
        t.rows.push_back({std::to_string(g.obstacle_count), num(g.side_length), num(g.mean_pure), num(g.mean_ext),
                          num(g.mean_pure > 0.0 ? g.mean_ext / g.mean_pure : 0.0)});
    const auto s = summarize_passages(records);
    t.rows.push_back({"fit_pure", "", num(s.pure_fit.slope), num(s.pure_fit.intercept), num(s.pure_fit.r2)});
    t.rows.push_back({"fit_ext", "", num(s.ext_fit.slope), num(s.ext_fit.intercept), num(s.ext_fit.r2)});
    return t;
}

Scene plan_scene(const PlanBenchConfig& config, int count, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.obstacle_count = count;
    spec.side_length = config.side_length;
    spec.seed = seed;
    spec.keep_clear = {config.start, config.goal};
    spec.keep_clear_radius = 1.0;
    spec.walls_as_obstacles = true;
    return generate_scene(spec);
}

std::vector<PlanRecord> run_plan_bench(const PlanBenchConfig& config) {
    struct Trial {
        int count;
        int trial;
        std::uint64_t seed;
    };
    std::vector<Trial> trials;
    for (std::size_t c = 0; c < config.counts.size(); ++c)
        for (int t = 0; t < config.trials; ++t)
            trials.push_back({config.counts[c], t,
                              trial_seed(config.seed, "plan", static_cast<std::uint64_t>(config.counts[c]),
                                         static_cast<std::uint64_t>(t))});
    const std::size_t methods = config.with_mcpp ? 3 : 2;
    std::vector<PlanRecord> records(trials.size() * methods);
    parallel_for(trials.size(), config.jobs, [&](std::size_t i) {
        const Trial& tr = trials[i];
        const Scene scene = plan_scene(config, tr.count, tr.seed);
        for (std::size_t m = 0; m < methods; ++m) {
            PlanRecord& r = records[i * methods + m];
            r.obstacle_count = tr.count;
            r.trial = tr.trial;
            r.seed = tr.seed;
            r.method = m == 0 ? "pure" : m == 1 ? "ext" : "mcpp";
            const auto t0 = Clock::now();
            try {
                if (m < 2) {
                    PlannerConfig pc;
                    pc.cost = config.cost;
                    pc.check = m == 0 ? CheckMode::Pure : CheckMode::Extended;
                    pc.samples = config.samples;
                    pc.seed = tr.seed;
                    const PlanResult p = paopp_plan(scene, config.start, config.goal, pc);
                    r.cost = p.cost;
                    r.length = p.length;
                    r.min_width = p.min_width;
                    r.passages = p.passage_count;
                    r.traversed = p.traversal.size();
                } else {
                    McppConfig mc = config.mcpp;
                    mc.seed = tr.seed;
                    const McppResult p = mcpp_plan(scene, config.start, config.goal, mc);
                    r.cost = p.plan.cost;
                    r.length = p.plan.length;
                    r.mc = p.mc;
                }
                r.success = true;
            } catch (const NoPathFound&) {
                r.success = false;
            }
            r.time_ms = elapsed_ms(t0);
        }
    });
    return records;
}

CsvTable plan_csv(const std::vector<PlanRecord>& records) {
    CsvTable t;
    t.header = {"experiment", "obstacle_count", "trial", "seed", "method", "success", "time_ms", "cost", "length",
                "min_width", "passages", "traversed", "mc"};
    for (const auto& r : records)
        t.rows.push_back({"plan", std::to_string(r.obstacle_count), std::to_string(r.trial), std::to_string(r.seed),
                          r.method, r.success ? "1" : "0", num(r.time_ms), num(r.cost), num(r.length),
                          num(r.min_width), std::to_string(r.passages), std::to_string(r.traversed), num(r.mc)});
    return t;
}

std::vector<Point> team_line(const Point& center, int k, double spacing) {
    std::vector<Point> out;
    for (int i = 0; i < k; ++i) out.push_back({center.x, center.y + (i - (k - 1) / 2.0) * spacing});
    return out;
}

Team bench_team(const PathSetBenchConfig& config, int k) {
    return {team_line(config.start_center, k, config.spacing), team_line(config.goal_center, k, config.spacing)};
}

Scene pathset_scene(const PathSetBenchConfig& config, int count, std::uint64_t seed) {
    int largest = 1;
    for (const int k : config.team_sizes) largest = std::max(largest, k);
    GeneratorSpec spec;
    spec.obstacle_count = count;
    spec.side_length = config.side_length;
    spec.seed = seed;
    spec.keep_clear = {config.start_center, config.goal_center};
    spec.keep_clear_radius = (largest - 1) * config.spacing / 2.0 + 1.0;
    spec.walls_as_obstacles = true;
    return generate_scene(spec);
}

std::vector<PathSetRecord> run_pathset_bench(const PathSetBenchConfig& config) {
    struct Trial {
        int count;
        int k;
        int trial;
        std::uint64_t seed;
        bool sp;
    };
    std::vector<Trial> trials;
    for (const int count : config.counts)
        for (int t = 0; t < config.trials; ++t) {
            const std::uint64_t seed =
                trial_seed(config.seed, "pathset", static_cast<std::uint64_t>(count), static_cast<std::uint64_t>(t));
            for (const int k : config.team_sizes) {
                trials.push_back({count, k, t, seed, false});
                if (config.with_sp) trials.push_back({count, k, t, seed, true});
            }
        }
    std::vector<PathSetRecord> records(trials.size());
    parallel_for(trials.size(), config.jobs, [&](std::size_t i) {
        const Trial& tr = trials[i];
        PathSetRecord& r = records[i];
        r.obstacle_count = tr.count;
        r.team_size = tr.k;
        r.trial = tr.trial;
        r.seed = tr.seed;
        r.method = tr.sp ? "SP" : "PT";
        const Scene scene = pathset_scene(config, tr.count, tr.seed);
        const Team team = bench_team(config, tr.k);
        PlannerConfig pc;
        pc.cost = config.cost;
        pc.samples = config.samples;
        pc.seed = tr.seed;
        const auto t0 = Clock::now();
        try {
            PathSet set;
            if (tr.sp) {
                set = separately_plan(scene, team, pc);
            } else {
                PathSetConfig cfg;
                cfg.planner = pc;
                set = generate_path_set(scene, team, cfg);
            }
            r.time_ms = elapsed_ms(t0);
            r.planning_ms = set.planning_time_ms;
            r.success = true;
            r.verified = verify_path_set(set, scene);
        } catch (const Error& e) {
            r.time_ms = elapsed_ms(t0);
            r.error = e.what();
        }
    });
    return records;
}

CsvTable pathset_csv(const std::vector<PathSetRecord>& records) {
    CsvTable t;
    t.header = {"experiment", "obstacle_count", "team_size", "trial", "seed", "method", "success", "verified",
                "time_ms", "planning_ms", "error"};
    for (const auto& r : records)
        t.rows.push_back({"pathset", std::to_string(r.obstacle_count), std::to_string(r.team_size),
                          std::to_string(r.trial), std::to_string(r.seed), r.method, r.success ? "1" : "0",
                          r.verified ? "1" : "0", num(r.time_ms), num(r.planning_ms), r.error});
    return t;
}

}  // namespace pathset::bench
