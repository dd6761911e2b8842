#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "kinebench/ingest.hpp"
#include "kinebench/metrics.hpp"
#include "kinebench/skeleton.hpp"

#include "common.hpp"

using namespace kinebench;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(KINEBENCH_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("synth then run then report") {
    kbtest::TempDir tmp("cli");
    const auto fixture = (tmp.path() / "fixture").string();

    REQUIRE(run_cli("synth --out " + fixture + " --standard-bundle") == 0);
    REQUIRE(std::filesystem::exists(fixture + "/manifest.json"));

    REQUIRE(run_cli("run " + fixture + "/manifest.json --jobs 2") == 0);
    const auto out_dir = tmp.path() / "fixture" / "out";
    REQUIRE(std::filesystem::exists(out_dir / "results.csv"));
    auto records = metrics::read_records_csv(out_dir / "results.csv");
    CHECK(records.size() == 4);

    const auto report_dir = (tmp.path() / "rerun").string();
    REQUIRE(run_cli("report " + (out_dir / "results.csv").string() + " --output-dir " +
                    report_dir) == 0);
    CHECK(kbtest::read_file(out_dir / "summary_overall.md") ==
          kbtest::read_file(tmp.path() / "rerun" / "summary_overall.md"));
}

TEST_CASE("convert subcommand") {
    kbtest::TempDir tmp("cli_convert");
    const auto in_path = tmp.path() / "in.csv";
    const auto out_path = tmp.path() / "out.csv";
    kbtest::write_file(in_path,
                       "frame,neck_base_x,neck_base_y,neck_base_z,torso_x,torso_y,torso_z\n"
                       "0,1,2,3,4,5,6\n");

    SUBCASE("h36m17_generic maps the alias") {
        REQUIRE(run_cli("convert --kind h36m17_generic " + in_path.string() + " " +
                        out_path.string()) == 0);
        auto text = kbtest::read_file(out_path);
        CHECK(text.find("neck_x") != std::string::npos);
    }
    SUBCASE("unknown kind exits nonzero") {
        CHECK(run_cli("convert --kind nope " + in_path.string() + " " + out_path.string()) != 0);
    }
    SUBCASE("explicit map file") {
        kbtest::write_file(tmp.path() / "m.map", "torso -> torso\n");
        REQUIRE(run_cli("convert --kind h36m17_generic --map " + (tmp.path() / "m.map").string() +
                        " " + in_path.string() + " " + out_path.string()) == 0);
        auto seq = ingest::read_pose_csv(out_path, 30.0);
        CHECK(seq.joint_set.names == std::vector<std::string>{"torso"});
    }
}

TEST_CASE("angles subcommand") {
    kbtest::TempDir tmp("cli_angles");
    const auto fixture = (tmp.path() / "fx").string();
    REQUIRE(run_cli("synth --out " + fixture + " --motion sinusoid_knee --duration-s 2") == 0);

    const auto out_csv = tmp.path() / "angles.csv";
    REQUIRE(run_cli("angles " + fixture + "/pose_synthetic.csv --activity A01 " +
                    out_csv.string()) == 0);
    auto text = kbtest::read_file(out_csv);
    CHECK(text.substr(0, 17) == "time_s,angle_deg\n");
    CHECK(kbtest::count_occurrences(text, "\n") == 62); // header + 61 samples

    SUBCASE("unknown activity exits nonzero") {
        CHECK(run_cli("angles " + fixture + "/pose_synthetic.csv --activity A99 " +
                      out_csv.string()) != 0);
    }
}

TEST_CASE("run exits nonzero when nothing succeeds") {
    kbtest::TempDir tmp("cli_fail");
    const auto fixture = (tmp.path() / "fx").string();
    REQUIRE(run_cli("synth --out " + fixture + " --standard-bundle") == 0);
    // break every pose file
    for (const auto& entry : std::filesystem::directory_iterator(fixture))
        if (entry.path().extension() == ".csv") kbtest::write_file(entry.path(), "nonsense\n");
    CHECK(run_cli("run " + fixture + "/manifest.json") != 0);
}

TEST_CASE("partial failure still exits zero") {
    kbtest::TempDir tmp("cli_partial");
    const auto fixture = (tmp.path() / "fx").string();
    REQUIRE(run_cli("synth --out " + fixture + " --standard-bundle") == 0);
    kbtest::write_file(tmp.path() / "fx" / "pose_noisy.csv", "nonsense\n");
    CHECK(run_cli("run " + fixture + "/manifest.json") == 0);
    auto records = metrics::read_records_csv(tmp.path() / "fx" / "out" / "results.csv");
    CHECK(records.size() == 3);
}

TEST_CASE("empty trial list exits nonzero") {
    kbtest::TempDir tmp("cli_empty");
    kbtest::write_file(tmp.path() / "manifest.json", R"({"trials":[]})");
    CHECK(run_cli("run " + (tmp.path() / "manifest.json").string()) != 0);
}

TEST_CASE("constant pose yields 90 degrees everywhere") {
    kbtest::TempDir tmp("cli_const");
    const auto fixture = (tmp.path() / "fx").string();
    REQUIRE(run_cli("synth --out " + fixture + " --motion constant_pose --duration-s 1") == 0);
    const auto out_csv = tmp.path() / "angles.csv";
    REQUIRE(run_cli("angles " + fixture + "/pose_synthetic.csv --activity A01 " +
                    out_csv.string()) == 0);
    auto lines = kbtest::read_file(out_csv);
    std::size_t pos = lines.find('\n') + 1;
    int checked = 0;
    while (pos < lines.size()) {
        auto comma = lines.find(',', pos);
        auto end = lines.find('\n', pos);
        const double angle = std::stod(lines.substr(comma + 1, end - comma - 1));
        CHECK(angle == doctest::Approx(90.0).epsilon(1e-9));
        pos = end + 1;
        ++checked;
    }
    CHECK(checked == 31);
}

TEST_CASE("version flag") {
    CHECK(run_cli("--version") == 0);
}
