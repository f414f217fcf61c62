#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string path = "cli_out_" + std::to_string(counter++) + ".txt";
    const std::string cmd = std::string(QNET_CLI_PATH) + " " + args + " > " + path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return {WEXITSTATUS(rc), ss.str()};
}

// CSV body: everything except '#' metadata lines
std::string csv_body(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out << line << "\n";
    return out.str();
}

int data_rows(const std::string& text) {
    std::stringstream in(csv_body(text));
    std::string line;
    int rows = -1; // skip the column header
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    return rows;
}

json metadata(const std::string& text) {
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# ", 0) == 0) return json::parse(line.substr(2));
    FAIL("no metadata line found");
    return {};
}

} // namespace

TEST_CASE("cli: connectivity row count", "[cli]") {
    auto r = run_cli("connectivity --topology complete --n 3..13");
    REQUIRE(r.exit_code == 0);
    CHECK(data_rows(r.stdout_text) == 11);
    auto meta = metadata(r.stdout_text);
    CHECK(meta.at("tool") == "qnet");
    CHECK(meta.at("rng") == "splitmix64");
    CHECK(meta.at("bounds_hold") == true);
}

TEST_CASE("cli: circle scan with fit", "[cli]") {
    // --no-assert: the oriented 3-qubit circle is a known diameter-bound
    // violation, downgraded to a warning here
    auto r = run_cli("connectivity --topology circle --n 3..13 --fit 1.5,2.5 --fit-min 8 --no-assert");
    REQUIRE(r.exit_code == 0);
    auto meta = metadata(r.stdout_text);
    const double a = meta.at("fit").at("a").get<double>();
    CHECK(a == Catch::Approx(0.301).margin(0.02));
}

TEST_CASE("cli: invalid qubit range rejected", "[cli]") {
    auto r = run_cli("connectivity --topology complete --n 1..2");
    CHECK(r.exit_code != 0);
}

TEST_CASE("cli: trajectory deterministic body", "[cli]") {
    const std::string args = "trajectory --n 4 --init 0001,1010 --steps 20 --seed 99";
    auto r1 = run_cli(args);
    auto r2 = run_cli(args);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(csv_body(r1.stdout_text) == csv_body(r2.stdout_text));
    CHECK(data_rows(r1.stdout_text) == 2 * 21);
}

TEST_CASE("cli: group two-qubit example", "[cli]") {
    auto r = run_cli("group --n 2 --p 0.5");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.stdout_text);
    const auto& res = doc.at("result");
    CHECK(res.at("group_order") == 6);
    CHECK(res.at("subleading").get<double>() == Catch::Approx(0.5).margin(1e-12));
    for (const auto& row : res.at("trace_comparison"))
        CHECK(row.at("abs_diff").get<double>() < 1e-10);
}

TEST_CASE("cli: group cap exceeded for N=5", "[cli]") {
    auto r = run_cli("group --n 5");
    CHECK(r.exit_code != 0);
}

TEST_CASE("cli: bounds and fit subcommands", "[cli]") {
    auto b = run_cli("bounds --topology complete --n 3..6");
    REQUIRE(b.exit_code == 0);
    CHECK(data_rows(b.stdout_text) == 4);
    CHECK(metadata(b.stdout_text).at("bounds_hold") == true);

    auto scan = run_cli("connectivity --topology complete --n 3..10 -o cli_fit_in.csv");
    REQUIRE(scan.exit_code == 0);
    auto f = run_cli("fit --input cli_fit_in.csv --exponents 1,2 --min 3");
    std::remove("cli_fit_in.csv");
    REQUIRE(f.exit_code == 0);
    auto doc = json::parse(f.stdout_text);
    CHECK(doc.at("fit").at("a").get<double>() > 0.0);
    CHECK(doc.at("fit").at("n_points") == 8);
}

TEST_CASE("cli: json format output", "[cli]") {
    auto r = run_cli("connectivity --topology complete --n 3..5 --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.stdout_text);
    CHECK(doc.at("points").size() == 3);
    CHECK(doc.at("metadata").at("command") == "connectivity");
}
