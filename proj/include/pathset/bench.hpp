#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pathset/io.hpp"
#include "pathset/planner.hpp"
#include "pathset/scene.hpp"
#include "pathset/transfer.hpp"

namespace pathset::bench {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least squares y = slope x + intercept. Needs two distinct x values.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);
/// Rank correlation with average ranks for ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);
double mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1).
double stddev(const std::vector<double>& v);
double coefficient_of_variation(const std::vector<double>& v);

/// Runs task(i) for i in [0, n) on `jobs` threads (0 = hardware concurrency). The first
/// exception thrown by a task is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task);

/// Seed of one trial, fixed by the base seed, the experiment and the trial's coordinates.
std::uint64_t trial_seed(std::uint64_t base, const std::string& experiment, std::uint64_t config, std::uint64_t trial);

// ---- passage counts ----

struct PassageBenchConfig {
    std::vector<int> counts{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> sides{1.0};
    int trials = 10;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
};

struct PassageRecord {
    int obstacle_count = 0;
    double side_length = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::size_t pure = 0;
    std::size_t ext = 0;
    double pure_ms = 0.0;
    double ext_ms = 0.0;
};

std::vector<PassageRecord> run_passage_bench(const PassageBenchConfig& config);

struct PassageGroup {
    int obstacle_count = 0;
    double side_length = 0.0;
    double mean_pure = 0.0;
    double mean_ext = 0.0;
};

/// Per (count, side) means in input order.
std::vector<PassageGroup> group_passages(const std::vector<PassageRecord>& records);

struct PassageSummary {
    LinearFit pure_fit;  ///< mean counts against obstacle count
    LinearFit ext_fit;
    double mean_ratio = 0.0;  ///< mean over groups of mean_ext / mean_pure
    double slope_ratio = 0.0;
    double pure_spearman = 0.0;  ///< group means against side length
    double ext_max_deviation = 0.0;  ///< largest |mean - grand| / grand over groups
};

PassageSummary summarize_passages(const std::vector<PassageRecord>& records);

CsvTable passage_csv(const std::vector<PassageRecord>& records);
CsvTable passage_summary_csv(const std::vector<PassageRecord>& records);

// ---- single-path planning ----

struct PlanBenchConfig {
    std::vector<int> counts{30, 40, 50, 60};
    int trials = 10;
    double side_length = 3.0;
    CostConfig cost = CostConfig::weighted(10.0);
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    bool with_mcpp = false;
    McppConfig mcpp;
    Point start{2.0, 28.0};
    Point goal{48.0, 2.0};
};

struct PlanRecord {
    int obstacle_count = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string method;  ///< pure, ext, mcpp
    bool success = false;
    double time_ms = 0.0;
    double cost = 0.0;
    double length = 0.0;
    double min_width = kNoPassage;
    std::size_t passages = 0;
    std::size_t traversed = 0;
    double mc = 0.0;
};

/// Scene shared by every method of one trial, with start and goal kept clear.
Scene plan_scene(const PlanBenchConfig& config, int count, std::uint64_t seed);
std::vector<PlanRecord> run_plan_bench(const PlanBenchConfig& config);
CsvTable plan_csv(const std::vector<PlanRecord>& records);

// ---- path sets ----

struct PathSetBenchConfig {
    std::vector<int> counts{10, 20, 30};
    std::vector<int> team_sizes{3, 6, 9, 12, 15, 18};
    int trials = 10;
    double side_length = 1.0;
    CostConfig cost = CostConfig::weighted(10.0);
    std::size_t samples = 5000;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    bool with_sp = true;
    double spacing = 0.3;
    Point start_center{4.0, 22.0};
    Point goal_center{46.0, 8.0};
};

struct PathSetRecord {
    int obstacle_count = 0;
    int team_size = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string method;  ///< PT or SP
    bool success = false;
    bool verified = false;
    double time_ms = 0.0;
    double planning_ms = 0.0;
    std::string error;
};

/// Vertical line of k members centred on `center`.
std::vector<Point> team_line(const Point& center, int k, double spacing);
Team bench_team(const PathSetBenchConfig& config, int k);
/// Scene sized for the largest team so that every team size shares it.
Scene pathset_scene(const PathSetBenchConfig& config, int count, std::uint64_t seed);
std::vector<PathSetRecord> run_pathset_bench(const PathSetBenchConfig& config);
CsvTable pathset_csv(const std::vector<PathSetRecord>& records);

}  // namespace pathset::bench
