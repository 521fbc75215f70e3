#include "test_support.hpp"

#include "slicereg/jobspec.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace slicereg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::path("cli_work");

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SLICEREG_CLI_PATH) + " " + args + " 2>cli_work/stderr.log";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream fs_(line);
        std::string field;
        while (std::getline(fs_, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

TEST_CASE("function spec parsing") {
    const json spec = {{"kind", "polynomial"},
                       {"coeffs", {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}}}};
    const SliceFunction f = cli::parse_function(spec);
    CHECK_Q_NEAR(f(Quaternion(1) + Quaternion::e1()), 2 * Quaternion::e1(), 1e-13);

    const json rat = {{"kind", "star_rational"},
                      {"num", {{1, 0, 0, 0}}},
                      {"den", {{-2, 0, 0, 0}, {1, 0, 0, 0}}}};
    const SliceFunction g = cli::parse_function(rat);
    CHECK_Q_NEAR(g(Quaternion(3)), Quaternion(1), 1e-12);

    CHECK_THROWS_AS(cli::parse_function(json{{"kind", "mystery"}}), ParamError);
    CHECK_THROWS_AS(cli::parse_function(json{{"kind", "polynomial"}, {"coeffs", {{1, 2}}}}),
                    ParamError);
}

TEST_CASE("contour and domain spec parsing") {
    const json circ = {{"kind", "circle"}, {"center", {0.0, 0.0}}, {"radius", 1.0}};
    CHECK(std::abs(cli::parse_contour(circ).length() - 2 * 3.14159265358979) < 1e-8);

    const json poly = {{"kind", "polyline_arcs"},
                       {"points", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
                       {"closed", true}};
    CHECK(std::abs(cli::parse_contour(poly).length() - 4.0) < 1e-10);

    json bad = circ;
    bad["radius"] = -1.0;
    CHECK_THROWS_AS(cli::parse_contour(bad), ParamError);

    CHECK_THROWS_AS(cli::parse_domain(json{{"kind", "shell"}}), ParamError);
    CHECK(cli::parse_domain(json{{"kind", "ball"}, {"radius", 2.0}}).contains(1.5, 0.5));
}

TEST_CASE("sampled boundary data parsing") {
    const json spec = {{"kind", "sampled"},
                       {"params", {0.0, 1.0, 2.0, 3.0}},
                       {"values", {{0, 0, 0, 0}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}}},
                       {"periodic", false}};
    const BoundaryData data = cli::parse_boundary_data(spec);
    CHECK_Q_NEAR(data(Quaternion{}, 1.5), Quaternion(1.5), 1e-12);
}

TEST_CASE("cli: transform of constant boundary data") {
    write_file(kWorkDir / "transform.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[1, 0, 0, 0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "probes": [[0.2, 0.0, 0.3, 0.0]]
    })");
    const int rc = run_cli("transform --spec cli_work/transform.json --out cli_work/transform.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "transform.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][8] == "dist_to_boundary");
    CHECK(std::abs(std::stod(rows[1][4]) - 1.0) < 1e-8);
    for (int c : {5, 6, 7}) CHECK(std::abs(std::stod(rows[1][c])) < 1e-8);
}

TEST_CASE("cli: malformed specs exit 2") {
    write_file(kWorkDir / "bad_radius.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[1, 0, 0, 0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": -2.0},
      "probes": [[0.2, 0.0, 0.3, 0.0]]
    })");
    CHECK(run_cli("transform --spec cli_work/bad_radius.json") == 2);

    write_file(kWorkDir / "not_json.json", "{ definitely not json");
    CHECK(run_cli("transform --spec cli_work/not_json.json") == 2);

    CHECK(run_cli("transform --spec cli_work/no_such_file.json") == 2);
}

TEST_CASE("cli: solve-global with zero data") {
    write_file(kWorkDir / "solve0.json", R"({
      "rhs": {"kind": "polynomial", "coeffs": [[0, 0, 0, 0]]},
      "domain": {"kind": "ball", "center": 0.0, "radius": 1.0},
      "level": 0,
      "probe_grid": 4
    })");
    const int rc = run_cli("solve-global --spec cli_work/solve0.json --out cli_work/solve0.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "solve0.csv"));
    REQUIRE(rows.size() > 1);
    for (size_t r = 1; r < rows.size(); ++r) CHECK(std::stod(rows[r][3]) < 1e-12);
}

TEST_CASE("cli: pole proximity exits 4") {
    write_file(kWorkDir / "jump_pole.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[0,0,0,0],[1,0,0,0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "t0": 0.7,
      "distances": [1e-12]
    })");
    CHECK(run_cli("jump-check --spec cli_work/jump_pole.json") == 4);
}

TEST_CASE("cli: overflowing data is not silently emitted") {
    write_file(kWorkDir / "huge.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[1e308, 0, 0, 0], [1e308, 0, 0, 0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "probes": [[0.2, 0.0, 0.3, 0.0]]
    })");
    CHECK(run_cli("transform --spec cli_work/huge.json") == 3);
}

TEST_CASE("cli: report ladders") {
    write_file(kWorkDir / "ladder.json", R"({
      "ladder": "quadrature",
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "pole": [0.82, 0.0, 0.0, 0.0]
    })");
    CHECK(run_cli("report --spec cli_work/ladder.json --refine 2") == 2);

    const int rc = run_cli("report --spec cli_work/ladder.json --refine 5 --out cli_work/l.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "l.csv"));
    REQUIRE(rows.size() == 6);
    // errors against the finest level decrease monotonically above noise
    double prev = std::numeric_limits<double>::infinity();
    for (size_t r = 1; r + 1 < rows.size(); ++r) {
        const double err = std::stod(rows[r][5]);
        if (prev > 1e-13) CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("cli: report on the fundamental ladder") {
    write_file(kWorkDir / "fund_ladder.json", R"({
      "ladder": "fundamental",
      "s": [0.25, 0.0, 0.65, 0.0],
      "bump": {"uc": 0.25, "vc": 0.65, "wu": 0.35, "wv": 0.35}
    })");
    const int rc =
        run_cli("report --spec cli_work/fund_ladder.json --refine 3 --out cli_work/fl.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "fl.csv"));
    REQUIRE(rows.size() == 4);
    // errors vs the finest level decrease
    CHECK(std::stod(rows[1][5]) > std::stod(rows[2][5]));
}

TEST_CASE("cli: verify-fundamental ladder") {
    write_file(kWorkDir / "fund.json", R"({
      "s": [0.25, 0.0, 0.65, 0.0],
      "bump": {"uc": 0.25, "vc": 0.65, "wu": 0.35, "wv": 0.35}
    })");
    const int rc =
        run_cli("verify-fundamental --spec cli_work/fund.json --refine 2 --out cli_work/f.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "f.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[2][9]) < 1e-2);
}

TEST_CASE("cli: series-fit emits indexed coefficients") {
    write_file(kWorkDir / "series.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[0,0,0,0],[0,0,0,0],[1,0,0,0]]},
      "center": 0.0,
      "rho": 1.0,
      "window": [-2, 4]
    })");
    const int rc = run_cli("series-fit --spec cli_work/series.json --out cli_work/series.json.out");
    REQUIRE(rc == 0);
    const json result = json::parse(read_file(kWorkDir / "series.json.out"));
    bool found = false;
    for (const auto& entry : result["coefficients"]) {
        if (entry["n"].get<int>() == 2) {
            found = true;
            CHECK(std::abs(entry["c"][0].get<double>() - 1.0) < 1e-10);
        } else {
            CHECK(std::abs(entry["c"][0].get<double>()) < 1e-10);
        }
    }
    CHECK(found);
}

TEST_CASE("cli: eval-kernel") {
    write_file(kWorkDir / "kernel.json", R"({
      "s": [2, 0, 0, 0],
      "points": [[0, 1, 0, 0]],
      "kernel": "left"
    })");
    const int rc = run_cli("eval-kernel --spec cli_work/kernel.json --out cli_work/k.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "k.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][4]) - 0.4) < 1e-12);
    CHECK(std::abs(std::stod(rows[1][5]) - 0.2) < 1e-12);
}

TEST_CASE("cli: identical seeds give identical bytes") {
    write_file(kWorkDir / "seeded.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.5},
      "probes": {"random_interior": 10, "radius": 1.1}
    })");
    REQUIRE(run_cli("transform --spec cli_work/seeded.json --seed 42 --out cli_work/a.csv") == 0);
    REQUIRE(run_cli("transform --spec cli_work/seeded.json --seed 42 --out cli_work/b.csv") == 0);
    REQUIRE(run_cli("transform --spec cli_work/seeded.json --seed 43 --out cli_work/c.csv") == 0);
    const std::string a = read_file(kWorkDir / "a.csv");
    CHECK(a == read_file(kWorkDir / "b.csv"));
    CHECK(a != read_file(kWorkDir / "c.csv"));
    CHECK(!a.empty());
}

TEST_CASE("cli: split emits both parts") {
    write_file(kWorkDir / "split.json", R"({
      "function": {"kind": "star_rational",
                   "num": [[0,0,0,0],[1,0,0,0]],
                   "den": [[1,0,0,0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "probes_inside": [[0.3, 0.1, 0.0, 0.0]],
      "probes_outside": [[2.0, 0.5, 0.0, 0.0]]
    })");
    const int rc = run_cli("split --spec cli_work/split.json --out cli_work/split.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "split.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "plus");
    CHECK(rows[2][0] == "minus");
    // f(s) = s splits into (p, 0)
    CHECK(std::abs(std::stod(rows[1][5]) - 0.3) < 1e-7);
    CHECK(std::abs(std::stod(rows[2][5])) < 1e-7);
}

TEST_CASE("cli: holder summary") {
    write_file(kWorkDir / "holder.json", R"({
      "function": {"kind": "polynomial", "coeffs": [[2, 0, 0, 0]]},
      "contour": {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "alpha": 0.5,
      "samples": 64
    })");
    const int rc = run_cli("holder --spec cli_work/holder.json --out cli_work/h.csv");
    REQUIRE(rc == 0);
    const auto rows = parse_csv(read_file(kWorkDir / "h.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(std::stod(rows[1][1])) < 1e-12); // constant: zero seminorm
    CHECK(std::abs(std::stod(rows[1][2]) - 2.0) < 1e-12);
}
