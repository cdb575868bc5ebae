#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pathset/bench.hpp"
#include "pathset/errors.hpp"
#include "pathset/rng.hpp"
#include "pathset/transfer.hpp"

using namespace pathset;

namespace {

Chord chord_from_coords(const Segment& reference, const std::vector<double>& coords, std::size_t pivot) {
    Chord c;
    c.reference = reference;
    c.pivot = pivot;
    const Point u = normalized(reference.b - reference.a);
    for (std::size_t j = 0; j < coords.size(); ++j)
        c.intersections.push_back({j, 0.5, reference.a + u * coords[j], coords[j]});
    const auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
    c.coord_min = *lo;
    c.coord_max = *hi;
    c.length = *hi - *lo;
    c.endpoints = {reference.a + u * *lo, reference.a + u * *hi};
    return c;
}

Polyline random_polyline(Rng& rng, int knots) {
    std::vector<Point> pts;
    for (int k = 0; k < knots; ++k) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 30)});
    return Polyline(pts);
}

Point expect_point_near(const Point& a, const Point& b, double tol = 1e-9) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    return a;
}

// Three members spaced 3 apart crossing a gap of width 4 between two blocks at x in [20, 22].
struct GapFixture {
    Scene scene;
    Team team;
    Polyline pivot;
    PassageMap map;

    GapFixture(double gap_low, double gap_high) {
        scene.walls_as_obstacles = false;
        scene.obstacles = {ConvexPolygon::rectangle(20, 0, 22, gap_low, 0),
                           ConvexPolygon::rectangle(20, gap_high, 22, 30, 1)};
        team.starts = {{2, 12}, {2, 15}, {2, 18}};
        team.goals = {{40, 12}, {40, 15}, {40, 18}};
        pivot = Polyline({{2, 15}, {40, 15}});
        map = detect_passages(scene, CheckMode::Pure);
    }
};

}  // namespace

TEST(Pivot, Examples) {
    EXPECT_EQ(select_pivot({{0, 0}, {1, 0}, {2, 0}}, {{0, 5}, {1, 5}, {2, 5}}), 1u);
    EXPECT_EQ(select_pivot({{3, 3}}, {{4, 4}}), 0u);
    EXPECT_THROW(select_pivot({{0, 0}}, {}), InvalidArgument);
}

TEST(Pivot, MatchesBruteForceMinimax) {
    Rng rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + rng.below(12);
        std::vector<Point> s, g;
        for (std::size_t i = 0; i < k; ++i) {
            s.push_back({static_cast<double>(rng.below(6)), static_cast<double>(rng.below(6))});
            g.push_back({20.0 + static_cast<double>(rng.below(6)), static_cast<double>(rng.below(6))});
        }
        std::size_t best = 0;
        double best_value = 1e300;
        for (std::size_t i = 0; i < k; ++i) {
            double worst = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double ds = std::hypot(s[i].x - s[j].x, s[i].y - s[j].y);
                const double dg = std::hypot(g[i].x - g[j].x, g[i].y - g[j].y);
                worst = std::max(worst, std::max(ds, dg));
            }
            if (worst < best_value) {
                best_value = worst;
                best = i;
            }
        }
        ASSERT_EQ(select_pivot(s, g), best) << "trial " << trial;
    }
}

TEST(Transfer, Examples) {
    const Polyline p({{0, 0}, {4, 0}, {10, 3}});
    const Polyline shifted = transfer_path(p, {0, 1}, {0, 1});
    for (std::size_t k = 0; k < p.size(); ++k) expect_point_near(shifted.waypoints()[k], p.waypoints()[k] + Point{0, 1});
    const Polyline crossed = transfer_path(Polyline({{0, 0}, {10, 0}}), {0, 1}, {0, -1});
    expect_point_near(crossed.eval(0.5), {5, 0});
    EXPECT_EQ(transfer_path(p, {0, 0}, {0, 0}), p);
}

TEST(Transfer, AffineOffsetAndExactEnds) {
    Rng rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const Polyline p = random_polyline(rng, 2 + static_cast<int>(rng.below(8)));
        const Point v0{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Point vd{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Polyline t = transfer_path(p, v0, vd);
        ASSERT_EQ(t.front(), p.front() + v0);
        ASSERT_EQ(t.back(), p.back() + vd);
        for (int k = 0; k < 5; ++k) {
            const double tau = rng.uniform();
            const Point offset = t.eval(tau) - p.eval(tau);
            const Point expect = v0 * (1 - tau) + vd * tau;
            ASSERT_NEAR(offset.x, expect.x, 1e-9);
            ASSERT_NEAR(offset.y, expect.y, 1e-9);
        }
    }
}

TEST(Nearby, Categories) {
    Scene s;
    s.walls_as_obstacles = false;
    s.obstacles = {ConvexPolygon::rectangle(10, 15.5, 12, 17, 0), ConvexPolygon::rectangle(10, 13, 12, 14.5, 1),
                   ConvexPolygon::rectangle(30, 15.5, 32, 16.5, 2), ConvexPolygon::rectangle(40, 18, 42, 20, 3)};
    const Polyline pivot({{2, 15}, {48, 15}});
    const PassageMap m = detect_passages(s, CheckMode::Pure);
    auto traversal = recompute_traversal(pivot, m);
    std::erase_if(traversal, [](const TraversalEntry& e) { return e.first != 0 || e.second != 1; });
    ASSERT_EQ(traversal.size(), 1u);
    const auto near = nearby_obstacles(s, pivot, traversal, 1.0);
    EXPECT_EQ(near.passage_obstacles, (std::vector<int>{0, 1}));
    EXPECT_EQ(near.isolated_obstacles, (std::vector<int>{2}));
    ASSERT_EQ(near.traversal.size(), 1u);
    EXPECT_EQ(near.traversal[0].first, 0);
}

TEST(Chords, ParallelPaths) {
    const std::vector<Polyline> paths{Polyline({{0, 0}, {10, 0}}), Polyline({{0, 1}, {10, 1}}),
                                      Polyline({{0, 2}, {10, 2}})};
    const Segment line{{5, -1}, {5, 3}};
    for (const auto& c : {chord_on_passage(paths, 1, line, 0.5), chord_via_normal(paths, 1, line, 0.5)}) {
        EXPECT_NEAR(c.length, 2.0, 1e-12);
        EXPECT_NEAR(c.at(1).coord, 2.0, 1e-12);
        EXPECT_NEAR(c.coord_min, 1.0, 1e-12);
    }
    EXPECT_NEAR(chord_on_passage({paths[1]}, 0, line, 0.5).length, 0.0, 1e-12);
    EXPECT_THROW(chord_on_passage(paths, 1, {{20, 0}, {20, 1}}, 0.5), MissingIntersection);
}

TEST(Chords, ObliquePassageFavoursNormal) {
    const std::vector<Polyline> paths{Polyline({{0, 0}, {20, 0}}), Polyline({{0, 1}, {20, 1}}),
                                      Polyline({{0, 2}, {20, 2}})};
    const Segment line{{2, -0.5}, {18, 3}};
    const auto hit = line_intersections(paths[1], line.a, line.b - line.a);
    ASSERT_EQ(hit.size(), 1u);
    const Chord on = chord_on_passage(paths, 1, line, hit[0].param, 0.5);
    const Chord normal = chord_via_normal(paths, 1, line, hit[0].param);
    EXPECT_NEAR(normal.length, 2.0, 1e-9);
    EXPECT_GT(on.length, 4.0 * normal.length);
    // Rotation keeps the side of each path.
    EXPECT_LT(normal.at(0).coord, normal.at(1).coord);
    EXPECT_LT(normal.at(1).coord, normal.at(2).coord);
}

TEST(Placement, Examples) {
    const Segment passage{{0, 0}, {10, 0}};
    const auto shift = place_reference_point(chord_from_coords(passage, {-1, 1, 3}, 1), 0.5);
    EXPECT_EQ(shift.kind, PlacementCase::Translated);
    expect_point_near(shift.anchor, {2.5, 0});

    const auto scaled = place_reference_point(chord_from_coords(passage, {-1, 5, 11}, 1), 0.5);
    EXPECT_EQ(scaled.kind, PlacementCase::Scaled);
    EXPECT_DOUBLE_EQ(scaled.ratio, 0.75);
    expect_point_near(scaled.anchor, {5, 0});

    const auto kept = place_reference_point(chord_from_coords(passage, {2, 4, 6}, 1), 0.5);
    EXPECT_EQ(kept.kind, PlacementCase::Unchanged);
    expect_point_near(kept.anchor, {4, 0});

    EXPECT_THROW(place_reference_point(chord_from_coords({{0, 0}, {1, 0}}, {-1, 0.5, 2}, 1), 0.5), PassageTooNarrow);
    EXPECT_THROW(place_reference_point(chord_from_coords(passage, {1, 2}, 0), -0.1), InvalidArgument);
}

TEST(Placement, AnchorsKeepClearanceAndOrder) {
    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const double width = rng.uniform(1, 10);
        const double delta = rng.uniform(0, width / 2 - 0.01);
        const std::size_t k = 1 + rng.below(10);
        std::vector<double> coords;
        for (std::size_t j = 0; j < k; ++j) coords.push_back(rng.uniform(-width, 2 * width));
        std::sort(coords.begin(), coords.end());
        const std::size_t pivot = rng.below(k);
        const Segment passage{{0, 0}, {width, 0}};
        const Chord chord = chord_from_coords(passage, coords, pivot);
        const Placement pl = place_reference_point(chord, delta);
        const double anchor = pl.anchor.x;
        ASSERT_NEAR(pl.anchor.y, 0.0, 1e-12);
        // Members follow the pivot: translation moves them with it, scaling about it.
        std::vector<double> mapped;
        for (const double c : coords) mapped.push_back(anchor + pl.ratio * (c - coords[pivot]));
        for (std::size_t j = 0; j < k; ++j) {
            if (pl.kind != PlacementCase::Unchanged) {
                ASSERT_GE(mapped[j], delta - 1e-9) << trial;
                ASSERT_LE(mapped[j], width - delta + 1e-9) << trial;
            }
            if (j > 0) {
                ASSERT_LE(mapped[j - 1], mapped[j]);
            }
            if (j > 1 && coords[j] > coords[0]) {
                const double before = (coords[j - 1] - coords[0]) / (coords[j] - coords[0]);
                const double after = (mapped[j - 1] - mapped[0]) / (mapped[j] - mapped[0]);
                ASSERT_NEAR(before, after, 1e-9);
            }
        }
    }
}

TEST(Compression, RatioIsTightAndOrderPreserving) {
    Rng rng(24);
    for (int trial = 0; trial < 1000; ++trial) {
        const double width = rng.uniform(1, 10);
        const double delta = rng.uniform(0, width / 2 - 0.01);
        const std::size_t k = 2 + rng.below(8);
        std::vector<double> coords;
        for (std::size_t j = 0; j < k; ++j) coords.push_back(rng.uniform(-width, 2 * width));
        coords[0] = rng.uniform(delta, width - delta);
        const Chord chord = chord_from_coords({{0, 0}, {width, 0}}, coords, 0);
        const double r = compression_ratio(chord, delta);
        ASSERT_GE(r, 0.0);
        ASSERT_LE(r, 1.0);
        bool touches = r == 1.0;
        for (const double x : coords) {
            const double y = coords[0] + r * (x - coords[0]);
            if (x < delta || x > width - delta) {
                ASSERT_GE(y, delta - 1e-9);
                ASSERT_LE(y, width - delta + 1e-9);
            }
            if (std::abs(y - delta) < 1e-9 || std::abs(y - (width - delta)) < 1e-9) touches = true;
        }
        ASSERT_TRUE(touches) << trial;
    }
    EXPECT_DOUBLE_EQ(compression_ratio(chord_from_coords({{0, 0}, {4, 0}}, {2, -1, 5}, 0), 0.5), 0.5);
}

TEST(Reposition, Examples) {
    const Polyline p({{0, 0}, {10, 0}});
    const Polyline q = reposition_path(p, {{0.5, {5, 2}}});
    expect_point_near(q.eval(0.5), {5, 2});
    expect_point_near(q.eval(0.25), {2.5, 1});
    EXPECT_EQ(q.front(), p.front());
    EXPECT_EQ(q.back(), p.back());
    EXPECT_EQ(reposition_path(p, {}), p);
}

TEST(Reposition, MatchesBlendFormula) {
    Rng rng(25);
    for (int trial = 0; trial < 1000; ++trial) {
        const Polyline p = random_polyline(rng, 2 + static_cast<int>(rng.below(8)));
        const std::size_t n = rng.below(4);
        std::vector<Anchor> anchors;
        for (std::size_t k = 0; k < n; ++k) {
            const double eta = rng.uniform(0.01, 0.99);
            anchors.push_back({eta, p.eval(eta) + Point{rng.uniform(-2, 2), rng.uniform(-2, 2)}});
        }
        std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) { return a.eta < b.eta; });
        anchors.erase(std::unique(anchors.begin(), anchors.end(),
                                  [](const Anchor& a, const Anchor& b) { return b.eta - a.eta < 1e-6; }),
                      anchors.end());
        const Polyline q = reposition_path(p, anchors);
        ASSERT_EQ(q.front(), p.front());
        ASSERT_EQ(q.back(), p.back());
        for (const auto& a : anchors) expect_point_near(q.eval(a.eta), a.point);

        std::vector<double> knots{0.0};
        std::vector<Point> shifts{Point{}};
        for (const auto& a : anchors) {
            knots.push_back(a.eta);
            shifts.push_back(a.point - p.eval(a.eta));
        }
        knots.push_back(1.0);
        shifts.push_back(Point{});
        for (int s = 0; s <= 100; ++s) {
            const double eta = s / 100.0;
            std::size_t k = 0;
            while (k + 2 < knots.size() && knots[k + 1] <= eta) ++k;
            const double w = (eta - knots[k]) / (knots[k + 1] - knots[k]);
            const Point expect = p.eval(eta) + shifts[k] * (1 - w) + shifts[k + 1] * w;
            const Point got = q.eval(eta);
            ASSERT_NEAR(got.x, expect.x, 1e-9) << trial;
            ASSERT_NEAR(got.y, expect.y, 1e-9) << trial;
        }

        std::vector<Anchor> identity;
        for (const auto& a : anchors) identity.push_back({a.eta, p.eval(a.eta)});
        const Polyline same = reposition_path(p, identity);
        for (int s = 0; s <= 20; ++s) expect_point_near(same.eval(s / 20.0), p.eval(s / 20.0));
    }
}

TEST(IsolatedPush, MovesPivotAwayByPenetration) {
    const Polyline pivot({{2, 15}, {40, 15}});
    const std::vector<Polyline> members{transfer_path(pivot, {0, -1}, {0, -1}), pivot,
                                        transfer_path(pivot, {0, 1}, {0, 1})};
    const auto below = ConvexPolygon::rectangle(20, 10, 22, 14.5, 0);
    const auto push = isolated_push(pivot, members, below, 0.2);
    ASSERT_TRUE(push.has_value());
    EXPECT_NEAR(push->point.y, 15.0 + 0.5 + 0.2, 1e-9);
    EXPECT_NEAR(push->point.x, pivot.eval(push->eta).x, 1e-9);
    EXPECT_FALSE(isolated_push(pivot, members, ConvexPolygon::rectangle(20, 2, 22, 5, 0), 0.2).has_value());
}

TEST(Homotopy, Examples) {
    Scene s;
    s.walls_as_obstacles = false;
    const Polyline a({{2, 10}, {40, 10}});
    const Polyline b({{2, 14}, {40, 14}});
    EXPECT_TRUE(strong_homotopic_like(a, b, s));
    s.obstacles = {ConvexPolygon::rectangle(20, 11, 21, 12, 0)};
    EXPECT_FALSE(strong_homotopic_like(a, b, s));
    EXPECT_TRUE(path_collision_free(a, s));
    EXPECT_FALSE(path_collision_free(Polyline({{2, 11.5}, {40, 11.5}}), s));
    EXPECT_FALSE(path_collision_free(Polyline({{2, 10}, {60, 10}}), s));
}

TEST(Homotopy, StableUnderRefinement) {
    Rng rng(26);
    int checked = 0;
    int disagreements = 0;
    for (int trial = 0; trial < 400; ++trial) {
        GeneratorSpec spec;
        spec.obstacle_count = 15;
        spec.seed = rng.next();
        const Scene s = generate_scene(spec);
        const Polyline a = random_polyline(rng, 4);
        const Polyline b = transfer_path(a, {rng.uniform(-3, 3), rng.uniform(-3, 3)},
                                         {rng.uniform(-3, 3), rng.uniform(-3, 3)});
        if (!path_collision_free(a, s) || !path_collision_free(b, s)) continue;
        ++checked;
        disagreements += strong_homotopic_like(a, b, s, 256) != strong_homotopic_like(a, b, s, 512);
    }
    EXPECT_GT(checked, 30);
    EXPECT_EQ(disagreements, 0);
}

TEST(Deform, WideGapLeavesDirectTransfer) {
    GapFixture f(5, 25);
    const auto traversal = recompute_traversal(f.pivot, f.map);
    ASSERT_EQ(traversal.size(), 1u);
    const PathSet set = coordinated_deform(f.scene, f.pivot, 1, f.team, f.map, traversal, 0.5);
    const auto vectors = transfer_vectors(f.team, 1);
    for (std::size_t j = 0; j < 3; ++j)
        EXPECT_EQ(set.paths[j], j == 1 ? f.pivot : transfer_path(f.pivot, vectors[j].v0, vectors[j].vd));
    EXPECT_TRUE(set.chords.empty());
}

TEST(Deform, CompressesChordIntoGap) {
    GapFixture f(13, 17);
    const auto traversal = recompute_traversal(f.pivot, f.map);
    const PathSet set = coordinated_deform(f.scene, f.pivot, 1, f.team, f.map, traversal, 0.5);
    ASSERT_EQ(set.chords.size(), 1u);
    EXPECT_NEAR(set.chords[0].length(), 3.0, 1e-9);
    EXPECT_TRUE(verify_path_set(set, f.scene));
    const std::vector<Polyline> line{set.paths};
    const Chord after = chord_on_passage(line, 1, f.map.passages[0].segment, traversal[0].param);
    EXPECT_NEAR(after.length, 3.0, 1e-9);
    // Order along the passage is unchanged.
    EXPECT_LT(after.at(0).coord, after.at(1).coord);
    EXPECT_LT(after.at(1).coord, after.at(2).coord);
    EXPECT_EQ(set.paths[1], f.pivot);
}

TEST(Deform, OneSidedCollision) {
    GapFixture f(13, 22);
    const auto traversal = recompute_traversal(f.pivot, f.map);
    const PathSet set = coordinated_deform(f.scene, f.pivot, 1, f.team, f.map, traversal, 0.5);
    EXPECT_TRUE(verify_path_set(set, f.scene));
    // One compression ratio about the fixed pivot: the colliding side sets it for both.
    const double eta = (20.0 - 2.0) / 38.0;
    EXPECT_NEAR(set.paths[0].eval(eta).y, 13.5, 1e-9);
    EXPECT_NEAR(set.paths[1].eval(eta).y, 15.0, 1e-12);
    EXPECT_NEAR(set.paths[2].eval(eta).y, 16.5, 1e-9);
}

TEST(PathSet, EmptySceneGivesStraightLines) {
    Scene s;
    Team team{bench::team_line({5, 15}, 5, 0.5), bench::team_line({45, 15}, 5, 0.5)};
    PathSetConfig cfg;
    cfg.planner.samples = 2000;
    const PathSet set = generate_path_set(s, team, cfg);
    ASSERT_EQ(set.paths.size(), 5u);
    EXPECT_EQ(set.pivot, 2u);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_EQ(set.paths[j].front(), team.starts[j]);
        EXPECT_EQ(set.paths[j].back(), team.goals[j]);
        EXPECT_LE(set.paths[j].length(), 1.05 * distance(team.starts[j], team.goals[j]));
    }
    EXPECT_TRUE(verify_path_set(set, s));
}

TEST(PathSet, RandomScenesVerify) {
    bench::PathSetBenchConfig bc;
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Scene s = bench::pathset_scene(bc, 30, seed);
        const Team team = bench::bench_team(bc, 9);
        PathSetConfig cfg;
        cfg.planner.samples = 3000;
        cfg.planner.seed = seed;
        try {
            const PathSet set = generate_path_set(s, team, cfg);
            ++ok;
            EXPECT_TRUE(verify_path_set(set, s)) << "seed " << seed;
            for (std::size_t j = 0; j < team.size(); ++j) {
                EXPECT_EQ(set.paths[j].front(), team.starts[j]);
                EXPECT_EQ(set.paths[j].back(), team.goals[j]);
            }
        } catch (const InfeasiblePassage&) {
        }
    }
    EXPECT_GE(ok, 8);
}

TEST(PathSet, SinglePathSeparatePlanningIsPaopp) {
    bench::PathSetBenchConfig bc;
    const Scene s = bench::pathset_scene(bc, 20, 3);
    const Team team{{bc.start_center}, {bc.goal_center}};
    PlannerConfig pc;
    pc.samples = 2000;
    const PathSet set = separately_plan(s, team, pc);
    ASSERT_EQ(set.paths.size(), 1u);
    EXPECT_EQ(set.paths[0], paopp_plan(s, team.starts[0], team.goals[0], pc).path);
}

TEST(Team, Validate) {
    Scene s;
    s.obstacles = {ConvexPolygon::rectangle(10, 10, 12, 12, 0)};
    EXPECT_THROW((Team{{{1, 1}}, {}}.validate(s)), InvalidArgument);
    EXPECT_THROW((Team{}.validate(s)), InvalidArgument);
    EXPECT_THROW((Team{{{11, 11}}, {{1, 1}}}.validate(s)), InvalidEndpoint);
    EXPECT_NO_THROW((Team{{{1, 1}}, {{5, 5}}}.validate(s)));
}
