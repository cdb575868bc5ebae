#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathset/io.hpp"
#include "pathset/passages.hpp"

using namespace pathset;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pathset_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args, const std::string& env = "") {
        const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" + PATHSET_CLI_PATH + "' " + args +
                                " > stdout.txt 2> stderr.txt";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    std::string stdout_text() const { return read_file((dir_ / "stdout.txt").string()); }
    fs::path path(const std::string& rel) const { return dir_ / rel; }
    void write(const std::string& rel, const std::string& text) const { write_file(path(rel).string(), text); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenWritesToDefaultDirectory) {
    ASSERT_EQ(run("gen --count 15 --seed 4"), 0);
    const Scene s = load_scene(path("out/gen/scene.json").string());
    EXPECT_EQ(s.obstacles.size(), 15u);
    EXPECT_TRUE(fs::exists(path("out/gen/scene.svg")));
}

TEST_F(Cli, SeedFromEnvironment) {
    ASSERT_EQ(run("gen -o a"), 0);
    ASSERT_EQ(run("gen -o b", "PATHSET_SEED=7"), 0);
    ASSERT_EQ(run("gen -o c --seed 7"), 0);
    const std::string a = read_file(path("a/scene.json").string());
    const std::string b = read_file(path("b/scene.json").string());
    const std::string c = read_file(path("c/scene.json").string());
    EXPECT_EQ(b, c);
    EXPECT_NE(a, b);
    EXPECT_NE(run("gen -o d", "PATHSET_SEED=abc"), 0);
}

TEST_F(Cli, PassageCountsMatchLibrary) {
    ASSERT_EQ(run("gen --count 40 --seed 2 -o g"), 0);
    const Scene s = load_scene(path("g/scene.json").string());
    for (const std::string mode : {"pure", "ext"}) {
        ASSERT_EQ(run("passages g/scene.json --check " + mode + " -o p"), 0);
        const auto expected = detect_passages(s, check_mode_from_string(mode)).size();
        EXPECT_NE(stdout_text().find("passages " + std::to_string(expected) + " "), std::string::npos)
            << stdout_text();
        EXPECT_EQ(passages_from_json(read_file(path("p/passages.json").string())).size(), expected);
    }
}

TEST_F(Cli, PlanOnEmptyScene) {
    write("empty.json", R"({"width": 50, "height": 30, "obstacles": []})");
    ASSERT_EQ(run("plan empty.json --start 5,5 --goal 45,25 --samples 2000 --cost ratio -o r"), 0);
    const PlanResult plan = plan_from_json(read_file(path("r/plan.json").string()));
    EXPECT_LE(plan.length, 1.05 * std::hypot(40.0, 20.0));
    EXPECT_TRUE(plan.traversal.empty());
    ASSERT_EQ(run("plan empty.json --start 5,5 --goal 45,25 --method mcpp --mc-mode sample -o m"), 0);
}

TEST_F(Cli, PathSetAndRender) {
    write("scene.json", R"({"width": 50, "height": 30, "obstacles": [
        {"vertices": [[20, 0], [22, 0], [22, 13], [20, 13]]},
        {"vertices": [[20, 17], [22, 17], [22, 30], [20, 30]]}]})");
    write("team.json", R"({"starts": [[3, 14], [3, 15], [3, 16]], "goals": [[45, 14], [45, 15], [45, 16]]})");
    ASSERT_EQ(run("pathset scene.json team.json --samples 2000 --kp 5 -o ps"), 0) << stdout_text();
    EXPECT_NE(stdout_text().find("verified yes"), std::string::npos);
    ASSERT_EQ(run("pathset scene.json team.json --samples 1000 --method sp -o sp"), 0);
    ASSERT_EQ(run("render scene.json --pathset ps/pathset.json --team team.json -o rr"), 0);
    EXPECT_NE(read_file(path("rr/render.svg").string()).find("path pivot"), std::string::npos);
}

TEST_F(Cli, SceneErrorsExitTwo) {
    write("bad.json", "{ not json");
    EXPECT_EQ(run("passages bad.json"), 2);
    write("overlap.json", R"({"width": 50, "height": 30, "obstacles": [
        {"vertices": [[1, 1], [3, 1], [3, 3], [1, 3]]}, {"vertices": [[2, 2], [4, 2], [4, 4], [2, 4]]}]})");
    EXPECT_EQ(run("plan overlap.json"), 2);
    EXPECT_EQ(run("render missing.json"), 2);
    write("outside.json", R"({"width": 5, "height": 5, "obstacles": [{"vertices": [[4, 4], [6, 4], [6, 6]]}]})");
    EXPECT_EQ(run("passages outside.json"), 2);
}

TEST_F(Cli, UsageErrorsAreNotSceneErrors) {
    write("empty.json", R"({"width": 50, "height": 30, "obstacles": []})");
    EXPECT_NE(run("plan empty.json --cost nonsense"), 0);
    EXPECT_NE(run("plan empty.json --cost nonsense"), 2);
    EXPECT_NE(run("frobnicate"), 0);
    EXPECT_NE(run(""), 0);
}

TEST_F(Cli, SmallBenches) {
    ASSERT_EQ(run("bench-passages --counts 10 20 --trials 2 --jobs 2 -o bp"), 0);
    EXPECT_TRUE(fs::exists(path("bp/passages.csv")));
    EXPECT_TRUE(fs::exists(path("bp/summary.csv")));
    ASSERT_EQ(run("bench-plan --counts 10 --trials 1 --samples 500 --mcpp -o bpl"), 0);
    EXPECT_TRUE(fs::exists(path("bpl/plan.csv")));
    ASSERT_EQ(run("bench-pathset --counts 10 --ks 3 --trials 1 --samples 800 -o bps"), 0);
    EXPECT_TRUE(fs::exists(path("bps/pathset.csv")));
}
