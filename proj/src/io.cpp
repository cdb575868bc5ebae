#include "pathset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pathset/errors.hpp"

namespace pathset {

using nlohmann::json;

namespace {

json point_json(const Point& p) {
    if (p.z != 0.0) return json::array({p.x, p.y, p.z});
    return json::array({p.x, p.y});
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json polyline_json(const Polyline& path) {
    json w = json::array();
    for (const auto& p : path.waypoints()) w.push_back(point_json(p));
    json out{{"waypoints", w}, {"arc_length", path.arc_length_parameterized()}};
    if (!path.arc_length_parameterized()) out["params"] = path.params();
    return out;
}

json traversal_json(const std::vector<TraversalEntry>& traversal) {
    json out = json::array();
    for (const auto& t : traversal)
        out.push_back({{"passage", t.passage},
                       {"first", t.first},
                       {"second", t.second},
                       {"width", t.width},
                       {"param", t.param},
                       {"point", point_json(t.point)}});
    return out;
}

// Typed access that reports the JSON path of whatever is missing or mistyped.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

    Node operator[](const std::string& key) const {
        if (!j_.is_object()) fail("expected an object");
        const auto it = j_.find(key);
        if (it == j_.end()) throw ParseError(child(key), "missing field");
        return {*it, child(key)};
    }
    Node operator[](std::size_t i) const { return {j_.at(i), path_ + "[" + std::to_string(i) + "]"}; }
    bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

    std::size_t size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }
    double number() const {
        if (!j_.is_number()) fail("expected a number");
        return j_.get<double>();
    }
    double number_or_inf() const { return j_.is_null() ? std::numeric_limits<double>::infinity() : number(); }
    long long integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<long long>();
    }
    std::size_t index() const {
        const long long v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }
    bool boolean() const {
        if (!j_.is_boolean()) fail("expected a boolean");
        return j_.get<bool>();
    }
    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    Point point() const {
        const std::size_t n = size();
        if (n != 2 && n != 3) fail("expected [x, y] or [x, y, z]");
        return {(*this)[0].number(), (*this)[1].number(), n == 3 ? (*this)[2].number() : 0.0};
    }
    std::vector<Point> points() const {
        std::vector<Point> out;
        for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].point());
        return out;
    }
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(path_, message); }

private:
    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
};

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("", e.what(), line, column);
    }
}

void check_version(const Node& root) {
    if (!root.has("schema_version")) return;
    const long long v = root["schema_version"].integer();
    if (v != kSchemaVersion) root["schema_version"].fail("unsupported schema version " + std::to_string(v));
}

Polyline polyline_from(const Node& n) {
    auto points = n["waypoints"].points();
    const bool arc = n.has("arc_length") ? n["arc_length"].boolean() : true;
    try {
        if (arc) return Polyline(std::move(points));
        std::vector<double> params;
        const Node p = n["params"];
        for (std::size_t i = 0; i < p.size(); ++i) params.push_back(p[i].number());
        return Polyline(std::move(points), std::move(params));
    } catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
}

std::vector<TraversalEntry> traversal_from(const Node& n) {
    std::vector<TraversalEntry> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const Node e = n[i];
        out.push_back({e["passage"].index(), static_cast<int>(e["first"].integer()),
                       static_cast<int>(e["second"].integer()), e["width"].number(), e["param"].number(),
                       e["point"].point()});
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string scene_to_json(const Scene& scene) {
    json obstacles = json::array();
    for (const auto& o : scene.obstacles) {
        json v = json::array();
        for (const auto& p : o.vertices()) v.push_back(point_json(p));
        obstacles.push_back({{"id", o.id()}, {"height", o.height()}, {"vertices", v}});
    }
    return dump({{"schema_version", kSchemaVersion},
                 {"width", scene.width},
                 {"height", scene.height},
                 {"walls_as_obstacles", scene.walls_as_obstacles},
                 {"dimension", scene.dimension == Dimension::Volumetric ? "3d" : "2d"},
                 {"obstacles", obstacles}});
}

Scene scene_from_json(const std::string& text) {
    const json j = parse(text);
    const Node root(j, "");
    check_version(root);
    Scene s;
    s.width = root["width"].number();
    s.height = root["height"].number();
    if (root.has("walls_as_obstacles")) s.walls_as_obstacles = root["walls_as_obstacles"].boolean();
    if (root.has("dimension")) {
        const std::string d = root["dimension"].string();
        if (d == "2d")
            s.dimension = Dimension::Planar;
        else if (d == "3d")
            s.dimension = Dimension::Volumetric;
        else
            root["dimension"].fail("expected \"2d\" or \"3d\"");
    }
    const Node obstacles = root["obstacles"];
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const Node o = obstacles[i];
        const int id = o.has("id") ? static_cast<int>(o["id"].integer()) : static_cast<int>(i);
        const double height = o.has("height") ? o["height"].number() : 0.0;
        try {
            s.obstacles.emplace_back(o["vertices"].points(), id, height);
        } catch (const InvalidScene& e) {
            o["vertices"].fail(e.what());
        }
    }
    return s;
}

std::string passages_to_json(const PassageMap& map) {
    json list = json::array();
    for (const auto& p : map.passages)
        list.push_back({{"first", p.first},
                        {"second", p.second},
                        {"segment", {point_json(p.segment.a), point_json(p.segment.b)}},
                        {"width", p.width},
                        {"center", point_json(p.center)},
                        {"radius", p.radius},
                        {"preserved", p.preserved}});
    json intervals = json::array();
    for (const auto& h : map.height_intervals)
        intervals.push_back({{"z_low", h.z_low}, {"z_high", h.z_high}, {"passages", h.passages}});
    json out{{"schema_version", kSchemaVersion}, {"mode", to_string(map.mode)}, {"passages", list}};
    if (!map.height_intervals.empty()) out["height_intervals"] = intervals;
    return dump(out);
}

PassageMap passages_from_json(const std::string& text) {
    const json j = parse(text);
    const Node root(j, "");
    check_version(root);
    PassageMap map;
    try {
        map.mode = check_mode_from_string(root["mode"].string());
    } catch (const InvalidArgument& e) {
        root["mode"].fail(e.what());
    }
    const Node list = root["passages"];
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Node n = list[i];
        Passage p;
        p.first = static_cast<int>(n["first"].integer());
        p.second = static_cast<int>(n["second"].integer());
        const Node seg = n["segment"];
        if (seg.size() != 2) seg.fail("expected two points");
        p.segment = {seg[0].point(), seg[1].point()};
        p.width = n["width"].number();
        p.center = n["center"].point();
        p.radius = n["radius"].number();
        p.preserved = n.has("preserved") && n["preserved"].boolean();
        map.passages.push_back(p);
    }
    if (root.has("height_intervals")) {
        const Node hs = root["height_intervals"];
        for (std::size_t i = 0; i < hs.size(); ++i) {
            HeightInterval h;
            h.z_low = hs[i]["z_low"].number();
            h.z_high = hs[i]["z_high"].number();
            const Node idx = hs[i]["passages"];
            for (std::size_t k = 0; k < idx.size(); ++k) {
                h.passages.push_back(idx[k].index());
                if (h.passages.back() >= map.passages.size()) idx[k].fail("passage index out of range");
            }
            map.height_intervals.push_back(h);
        }
    }
    return map;
}

std::string plan_to_json(const PlanResult& plan) {
    return dump({{"schema_version", kSchemaVersion},
                 {"path", polyline_json(plan.path)},
                 {"traversal", traversal_json(plan.traversal)},
                 {"length", plan.length},
                 {"min_width", nullable(plan.min_width)},
                 {"cost", plan.cost},
                 {"samples_used", plan.samples_used},
                 {"tree_size", plan.tree_size},
                 {"passage_count", plan.passage_count},
                 {"wall_time_ms", plan.wall_time_ms},
                 {"detection_time_ms", plan.detection_time_ms}});
}

PlanResult plan_from_json(const std::string& text) {
    const json j = parse(text);
    const Node root(j, "");
    check_version(root);
    PlanResult r;
    r.path = polyline_from(root["path"]);
    r.traversal = traversal_from(root["traversal"]);
    r.length = root["length"].number();
    r.min_width = root["min_width"].number_or_inf();
    r.cost = root["cost"].number();
    r.samples_used = root["samples_used"].index();
    r.tree_size = root["tree_size"].index();
    r.passage_count = root["passage_count"].index();
    r.wall_time_ms = root["wall_time_ms"].number();
    r.detection_time_ms = root["detection_time_ms"].number();
    return r;
}

std::string pathset_to_json(const PathSet& set) {
    json paths = json::array();
    for (const auto& p : set.paths) paths.push_back(polyline_json(p));
    json chords = json::array();
    for (const auto& c : set.chords) chords.push_back({point_json(c.a), point_json(c.b)});
    return dump({{"schema_version", kSchemaVersion},
                 {"pivot", set.pivot},
                 {"paths", paths},
                 {"traversal", traversal_json(set.traversal)},
                 {"chords", chords},
                 {"delta", set.delta},
                 {"densified", set.densified},
                 {"planning_time_ms", set.planning_time_ms},
                 {"wall_time_ms", set.wall_time_ms}});
}

PathSet pathset_from_json(const std::string& text) {
    const json j = parse(text);
    const Node root(j, "");
    check_version(root);
    PathSet set;
    set.pivot = root["pivot"].index();
    const Node paths = root["paths"];
    for (std::size_t i = 0; i < paths.size(); ++i) set.paths.push_back(polyline_from(paths[i]));
    if (!set.paths.empty() && set.pivot >= set.paths.size()) root["pivot"].fail("pivot index out of range");
    set.traversal = traversal_from(root["traversal"]);
    if (root.has("chords")) {
        const Node chords = root["chords"];
        for (std::size_t i = 0; i < chords.size(); ++i) {
            if (chords[i].size() != 2) chords[i].fail("expected two points");
            set.chords.push_back({chords[i][0].point(), chords[i][1].point()});
        }
    }
    if (root.has("delta")) set.delta = root["delta"].number();
    if (root.has("densified")) set.densified = root["densified"].boolean();
    if (root.has("planning_time_ms")) set.planning_time_ms = root["planning_time_ms"].number();
    if (root.has("wall_time_ms")) set.wall_time_ms = root["wall_time_ms"].number();
    return set;
}

std::string team_to_json(const Team& team) {
    json starts = json::array();
    json goals = json::array();
    for (const auto& p : team.starts) starts.push_back(point_json(p));
    for (const auto& p : team.goals) goals.push_back(point_json(p));
    return dump({{"schema_version", kSchemaVersion}, {"starts", starts}, {"goals", goals}});
}

Team team_from_json(const std::string& text) {
    const json j = parse(text);
    const Node root(j, "");
    check_version(root);
    Team t;
    t.starts = root["starts"].points();
    t.goals = root["goals"].points();
    if (t.starts.size() != t.goals.size()) root["goals"].fail("start and goal counts differ");
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
}

Scene load_scene(const std::string& path) { return scene_from_json(read_file(path)); }

void save_scene(const Scene& scene, const std::string& path) { write_file(path, scene_to_json(scene)); }

std::string render_svg(const Scene& scene, const RenderOptions& options) {
    const double k = options.scale;
    const auto X = [&](const Point& p) { return format_double(p.x * k); };
    const auto Y = [&](const Point& p) { return format_double((scene.height - p.y) * k); };
    const auto coords = [&](const std::vector<Point>& pts) {
        std::string s;
        for (const auto& p : pts) s += (s.empty() ? "" : " ") + X(p) + "," + Y(p);
        return s;
    };
    const auto line = [&](const Segment& s, const std::string& cls, const std::string& style) {
        return "  <line class=\"" + cls + "\" x1=\"" + X(s.a) + "\" y1=\"" + Y(s.a) + "\" x2=\"" + X(s.b) +
               "\" y2=\"" + Y(s.b) + "\" " + style + "/>\n";
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_double(scene.width * k)
        << "\" height=\"" << format_double(scene.height * k) << "\" viewBox=\"0 0 " << format_double(scene.width * k)
        << " " << format_double(scene.height * k) << "\">\n";
    svg << "  <rect class=\"workspace\" x=\"0\" y=\"0\" width=\"" << format_double(scene.width * k) << "\" height=\""
        << format_double(scene.height * k) << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (const auto& o : scene.obstacles)
        svg << "  <polygon class=\"obstacle\" data-id=\"" << o.id() << "\" points=\"" << coords(o.vertices())
            << "\" fill=\"#555555\"/>\n";

    std::set<std::pair<int, int>> solid;
    if (options.passages != nullptr)
        for (const auto& p : options.passages->passages) solid.insert(p.key());
    if (options.pure != nullptr)
        for (const auto& p : options.pure->passages)
            if (!solid.count(p.key()))
                svg << line(p.segment, "passage pure", "stroke=\"#3b6fd6\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
    if (options.passages != nullptr)
        for (const auto& p : options.passages->passages)
            svg << line(p.segment, "passage ext", "stroke=\"black\" stroke-width=\"1.5\"");

    const auto polyline = [&](const Polyline& path, const std::string& cls, const std::string& color) {
        svg << "  <polyline class=\"" << cls << "\" points=\"" << coords(path.waypoints()) << "\" fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"1.5\"/>\n";
    };
    if (options.path != nullptr) polyline(*options.path, "path", "#1f9e3a");
    if (options.path_set != nullptr) {
        for (std::size_t i = 0; i < options.path_set->paths.size(); ++i)
            if (i != options.path_set->pivot) polyline(options.path_set->paths[i], "path member", "#2a5bd7");
        if (options.path_set->pivot < options.path_set->paths.size())
            polyline(options.path_set->paths[options.path_set->pivot], "path pivot", "#1f9e3a");
        for (const auto& c : options.path_set->chords) svg << line(c, "chord", "stroke=\"#d62728\" stroke-width=\"2\"");
    }
    if (options.team != nullptr) {
        for (const auto* list : {&options.team->starts, &options.team->goals})
            for (const auto& p : *list)
                svg << "  <circle class=\"agent\" cx=\"" << X(p) << "\" cy=\"" << Y(p) << "\" r=\"3\" fill=\"#ff7f0e\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string CsvTable::to_string() const {
    const auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (const char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    const auto row = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + field(cells[i]);
        return s + "\n";
    };
    std::string out = row(header);
    for (const auto& r : rows) out += row(r);
    return out;
}

}  // namespace pathset
