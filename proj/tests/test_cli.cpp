#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coldstart/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("coldstart_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& name = "") const { return (path / name).string(); }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_fixture(const fs::path& p) {
    std::ofstream out(p);
    out << "u1 o1\nu1 o2\nu2 o1\nu2 o3\nu3 o2\n";
}

json read_json(const fs::path& p) { return json::parse(read_file(p)); }

}  // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.5, 1.0 / std::sqrt(2.0), 1.31e-5, 108.16, 0.0, 1e300}) {
        const std::string s = coldstart::cli::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(coldstart::cli::format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(coldstart::cli::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("cli stats") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    REQUIRE(coldstart::cli::run({"stats", "--input", dir.str("net.edges"), "--output-dir",
                                 dir.str("out")}) == 0);

    const json summary = read_json(dir.path / "out" / "summary.json");
    CHECK(summary["users"] == 3);
    CHECK(summary["items"] == 3);
    CHECK(summary["links"] == 5);
    CHECK(summary["duplicates_collapsed"] == 0);
    CHECK(summary["mean_user_degree"].get<double>() == Catch::Approx(5.0 / 3.0));
    CHECK(summary["sparsity"].get<double>() == Catch::Approx(5.0 / 9.0));
    // three users cannot satisfy the 10-observation fit precondition
    CHECK(summary["user_degree_exponent"].is_null());
    CHECK(summary.contains("user_degree_exponent_note"));

    const std::string curve = read_file(dir.path / "out" / "user_degree_distribution.csv");
    CHECK(curve.rfind("k,value,count\n", 0) == 0);
    CHECK(fs::exists(dir.path / "out" / "item_nn_degree.csv"));

    const json manifest = read_json(dir.path / "out" / "stats_manifest.json");
    CHECK(manifest["command"] == "stats");
    CHECK(manifest["input_digests"].size() == 1);
    CHECK(manifest["outputs"].size() == 5);
}

TEST_CASE("cli stats rejects a missing input path") {
    TempDir dir;
    CHECK(coldstart::cli::run({"stats", "--input", dir.str("absent.edges"), "--output-dir",
                               dir.str("out")}) == 1);
}

TEST_CASE("cli rejects unknown flags") {
    CHECK(coldstart::cli::run({"stats", "--no-such-flag"}) != 0);
    CHECK(coldstart::cli::run({"definitely-not-a-command"}) != 0);
}

TEST_CASE("cli generate is deterministic under an explicit seed") {
    TempDir dir;
    auto args = [&](const std::string& out) {
        return std::vector<std::string>{
            "generate",      "--users", "60",          "--items", "40",   "--user-kmax", "20",
            "--item-kmax",   "20",      "--seed",      "99",      "--output-dir", out,
            "--tune-budget", "2000"};
    };
    REQUIRE(coldstart::cli::run(args(dir.str("a"))) == 0);
    REQUIRE(coldstart::cli::run(args(dir.str("b"))) == 0);
    const std::string edges_a = read_file(dir.path / "a" / "generated.edges");
    CHECK(edges_a == read_file(dir.path / "b" / "generated.edges"));

    std::istringstream in(edges_a);
    const auto net = coldstart::ingest_edge_list(in);
    CHECK(coldstart::validate(net).ok());
    CHECK(net.user_count() == 60);

    const json report = read_json(dir.path / "a" / "generate_report.json");
    CHECK(report["seed"] == 99);
    CHECK(report["links"] == net.link_count());
}

TEST_CASE("cli reshuffle defaults to 3w attempts") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    REQUIRE(coldstart::cli::run({"reshuffle", "--input", dir.str("net.edges"), "--seed", "5",
                                 "--output-dir", dir.str("out")}) == 0);
    const json manifest = read_json(dir.path / "out" / "reshuffle_manifest.json");
    CHECK(manifest["parameters"]["attempts"] == 15);  // 3w with w=5
    const json report = read_json(dir.path / "out" / "reshuffle_report.json");
    CHECK(report["attempts"] == 15);
    CHECK(report["links"] == 5);

    std::istringstream in(read_file(dir.path / "out" / "reshuffled.edges"));
    const auto net = coldstart::ingest_edge_list(in);
    CHECK(coldstart::validate(net).ok());
}

TEST_CASE("cli recommend emits the fixture lists") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    REQUIRE(coldstart::cli::run({"recommend", "--input", dir.str("net.edges"), "--L", "2",
                                 "--output-dir", dir.str("out")}) == 0);
    const std::string inv_sqrt2 = coldstart::cli::format_double(1.0 / std::sqrt(2.0));
    const std::string expected = "user,rank,item,score\n"
                                 "0,1,2," + inv_sqrt2 + "\n"
                                 "1,1,1,0.5\n"
                                 "2,1,0,0.5\n";
    CHECK(read_file(dir.path / "out" / "recommendations.csv") == expected);
    CHECK(fs::exists(dir.path / "out" / "recommend_users.map"));

    SECTION("subset by external id") {
        REQUIRE(coldstart::cli::run({"recommend", "--input", dir.str("net.edges"), "--L", "2",
                                     "--users", "u3", "--output-dir", dir.str("sub")}) == 0);
        CHECK(read_file(dir.path / "sub" / "recommendations.csv") ==
              "user,rank,item,score\n2,1,0,0.5\n");
    }
    SECTION("unknown external id fails") {
        CHECK(coldstart::cli::run({"recommend", "--input", dir.str("net.edges"), "--users", "nope",
                                   "--output-dir", dir.str("bad")}) == 1);
    }
    SECTION("ucf engine") {
        REQUIRE(coldstart::cli::run({"recommend", "--input", dir.str("net.edges"), "--L", "1",
                                     "--engine", "ucf", "--users", "u3", "--output-dir",
                                     dir.str("ucf")}) == 0);
        CHECK(read_file(dir.path / "ucf" / "recommendations.csv") ==
              "user,rank,item,score\n2,1,0," + inv_sqrt2 + "\n");
    }
    SECTION("top-k with ucf is rejected") {
        CHECK(coldstart::cli::run({"recommend", "--input", dir.str("net.edges"), "--engine", "ucf",
                                   "--top-k", "1", "--output-dir", dir.str("x")}) == 1);
    }
}

TEST_CASE("cli promote writes one result row") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    REQUIRE(coldstart::cli::run({"promote", "--input", dir.str("net.edges"), "--strategy", "MinD",
                                 "--R", "1", "--L", "1", "--realizations", "4", "--seed", "8",
                                 "--output-dir", dir.str("out")}) == 0);
    const std::string csv = read_file(dir.path / "out" / "promotion.csv");
    CHECK(csv.rfind("strategy,tau,R,L,mean_H,std_H,realizations,seed\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("MinD,-inf,1,1,") != std::string::npos);

    SECTION("strategy TAU requires --tau") {
        CHECK(coldstart::cli::run({"promote", "--input", dir.str("net.edges"), "--strategy", "TAU",
                                   "--output-dir", dir.str("x")}) == 1);
    }
}

TEST_CASE("cli sweep reruns byte-identically with the manifest seed and any threads") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    REQUIRE(coldstart::cli::run({"sweep", "--input", dir.str("net.edges"), "--strategies",
                                 "MaxD,MinD,RAN", "--R-grid", "1,2", "--L", "1", "--realizations",
                                 "16", "--seed", "21", "--threads", "1", "--output-dir",
                                 dir.str("a")}) == 0);
    const json manifest = read_json(dir.path / "a" / "sweep_manifest.json");
    const std::uint64_t recorded_seed = manifest["seed"].get<std::uint64_t>();
    CHECK(recorded_seed == 21);

    REQUIRE(coldstart::cli::run({"sweep", "--input", dir.str("net.edges"), "--strategies",
                                 "MaxD,MinD,RAN", "--R-grid", "1,2", "--L", "1", "--realizations",
                                 "16", "--seed", std::to_string(recorded_seed), "--threads", "4",
                                 "--output-dir", dir.str("b")}) == 0);
    CHECK(read_file(dir.path / "a" / "sweep.csv") == read_file(dir.path / "b" / "sweep.csv"));

    const std::string csv = read_file(dir.path / "a" / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 3 strategies x 2 R values

    SECTION("R beyond n is rejected") {
        CHECK(coldstart::cli::run({"sweep", "--input", dir.str("net.edges"), "--R-grid", "9",
                                   "--output-dir", dir.str("x")}) == 1);
    }
    SECTION("tau grid rows are labelled TAU with their exponent") {
        REQUIRE(coldstart::cli::run({"sweep", "--input", dir.str("net.edges"), "--tau-grid=-2,2",
                                     "--R-grid", "1", "--L", "1", "--realizations", "4", "--seed",
                                     "3", "--output-dir", dir.str("tau")}) == 0);
        const std::string tau_csv = read_file(dir.path / "tau" / "sweep.csv");
        CHECK(tau_csv.find("TAU,-2,1,1,") != std::string::npos);
        CHECK(tau_csv.find("TAU,2,1,1,") != std::string::npos);
    }
}

TEST_CASE("cli config file supplies defaults that flags override") {
    TempDir dir;
    write_fixture(dir.path / "net.edges");
    {
        std::ofstream cfg(dir.path / "defaults.ini");
        cfg << "[sweep]\nrealizations=2\nL=1\n";
    }
    REQUIRE(coldstart::cli::run({"--config", dir.str("defaults.ini"), "sweep", "--input",
                                 dir.str("net.edges"), "--strategies", "RAN", "--R-grid", "1",
                                 "--seed", "4", "--output-dir", dir.str("a")}) == 0);
    const json a = read_json(dir.path / "a" / "sweep_manifest.json");
    CHECK(a["parameters"]["realizations"] == 2);
    CHECK(a["parameters"]["L"] == 1);

    REQUIRE(coldstart::cli::run({"--config", dir.str("defaults.ini"), "sweep", "--input",
                                 dir.str("net.edges"), "--strategies", "RAN", "--R-grid", "1",
                                 "--seed", "4", "--realizations", "3", "--output-dir",
                                 dir.str("b")}) == 0);
    const json b = read_json(dir.path / "b" / "sweep_manifest.json");
    CHECK(b["parameters"]["realizations"] == 3);
}
