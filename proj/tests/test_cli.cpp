#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tlab/scenario.hpp"

using namespace tlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("tlab_cli_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("parse_config_text: key = value with comments") {
    auto cfg = parse_config_text("# header comment\n"
                                 "command = norms   # trailing comment\n"
                                 "seed = 9\n"
                                 "tol.pair = 1e-6\n"
                                 "flag = true\n"
                                 "\n",
                                 "inline");
    CHECK(cfg.command == "norms");
    CHECK(cfg.seed() == 9);
    CHECK(cfg.get_real("tol.pair", 0.0) == doctest::Approx(1e-6));
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_string("absent", "dflt") == "dflt");
    CHECK_THROWS_AS(cfg.require_string("absent"), ConfigError);
    CHECK_THROWS_AS(cfg.require_real("flag"), ConfigError); // not a number
}

TEST_CASE("parse_config_text: flat JSON object is equivalent") {
    auto a = parse_config_text("command = norms\nseed = 9\nlabel = x\n", "a");
    auto b = parse_config_text(R"({"command": "norms", "seed": 9, "label": "x"})", "b");
    CHECK(a.entries == b.entries);
    CHECK(config_hash(a) == config_hash(b));
    CHECK_THROWS_AS(parse_config_text(R"({"command": "norms", "nested": {"x": 1}})", "c"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words without an equals sign", "d"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("key = value\n", "e"), ConfigError); // no command
}

TEST_CASE("validate_config rejects bad input naming the offender") {
    auto cfg = parse_config_text("command = frobnicate\n", "x");
    CHECK_THROWS_WITH_AS(cfg.validate_config(), doctest::Contains("frobnicate"), ConfigError);
    cfg = parse_config_text("command = norms\ntol.h1 = -0.5\n", "x");
    CHECK_THROWS_WITH_AS(cfg.validate_config(), doctest::Contains("tol.h1"), ConfigError);
    cfg = parse_config_text("command = norms\nlambda.path = /no/such/file.txt\n", "x");
    CHECK_THROWS_AS(cfg.validate_config(), ConfigError);
}

TEST_CASE("config_hash: canonical and sensitive") {
    auto a = parse_config_text("command = norms\nseed = 1\n", "a");
    auto b = parse_config_text("seed = 1\n# shuffled\ncommand = norms\n", "b");
    CHECK(config_hash(a) == config_hash(b)); // order and comments do not matter
    auto c = parse_config_text("command = norms\nseed = 2\n", "c");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("run_scenario: deterministic artifacts per seed") {
    TempDir d1("run1"), d2("run2");
    auto cfg = parse_config_text("command = hilbert-check\nseed = 5\n", "inline");
    RunOptions o1, o2;
    o1.out_override = d1.str();
    o2.out_override = d2.str();
    auto r1 = run_scenario(cfg, o1);
    auto r2 = run_scenario(cfg, o2);
    CHECK(r1.all_pass());
    CHECK(r1.hash == r2.hash);
    REQUIRE(r1.metrics == r2.metrics);
    // every artifact except the report (which carries wall time) is byte-identical
    for (const auto& entry : fs::directory_iterator(d1.path)) {
        if (entry.path().filename() == "report.json") continue;
        CHECK(slurp(entry.path()) == slurp(d2.path / entry.path().filename()));
    }
    CHECK(fs::exists(d1.path / "report.json"));
}

TEST_CASE("replay: accepts a faithful report, rejects a tampered one") {
    TempDir run("replay_run"), rep("replay_out");
    auto cfg = parse_config_text("command = hilbert-check\nseed = 5\n", "inline");
    RunOptions o;
    o.out_override = run.str();
    auto first = run_scenario(cfg, o);
    auto report_path = (run.path / "report.json").string();

    RunOptions ro;
    ro.out_override = rep.str();
    auto replayed = replay_report(report_path, ro);
    CHECK(replayed.metrics == first.metrics);

    // editing the embedded config invalidates the hash
    std::string text = slurp(report_path);
    auto pos = text.find("\"seed\": \"5\"");
    REQUIRE(pos != std::string::npos);
    std::string edited = text;
    edited.replace(pos, 11, "\"seed\": \"6\"");
    auto edited_path = (run.path / "edited.json").string();
    std::ofstream(edited_path, std::ios::binary) << edited;
    CHECK_THROWS_AS(replay_report(edited_path, ro), ConfigError);
}
