#pragma once

#include <string>
#include <vector>

#include "pathset/passages.hpp"
#include "pathset/planner.hpp"
#include "pathset/scene.hpp"
#include "pathset/transfer.hpp"

namespace pathset {

inline constexpr int kSchemaVersion = 1;

// Every loader throws ParseError naming the offending field (or line/column for syntax).
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
std::string passages_to_json(const PassageMap& map);
PassageMap passages_from_json(const std::string& text);
std::string plan_to_json(const PlanResult& plan);
PlanResult plan_from_json(const std::string& text);
std::string pathset_to_json(const PathSet& set);
PathSet pathset_from_json(const std::string& text);
std::string team_to_json(const Team& team);
Team team_from_json(const std::string& text);

/// File helpers; throw Error when the file cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

struct RenderOptions {
    /// Passages from the plain check; those missing from `passages` are drawn dashed.
    const PassageMap* pure = nullptr;
    /// Drawn solid.
    const PassageMap* passages = nullptr;
    const Polyline* path = nullptr;
    const PathSet* path_set = nullptr;
    const Team* team = nullptr;
    /// Pixels per map unit.
    double scale = 20.0;
};

std::string render_svg(const Scene& scene, const RenderOptions& options = {});

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
};

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace pathset
