#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kTinyConfig = R"({
  "problem": {"T": 0.8, "mu": 0.01, "sigma": "paper", "u0": "paper", "d": 2},
  "discretization": {"intervals": 8, "steps": 4, "snapshots": 5, "modes": 3},
  "collocation": {"level": 2, "map_bound": 4.0, "etas": [9.0, 0.01]},
  "mc": {"samples": 12, "seed": 7}
})";

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("mfsc_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }
};

int run_cli(const std::string& args, const std::string& stderr_path = "/dev/null") {
    const std::string cmd =
        std::string(MFSC_CLI_PATH) + " " + args + " >/dev/null 2>" + stderr_path;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

void write_config(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("gfe runs, writes a trajectory, and is byte-deterministic") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, kTinyConfig);

    const std::string base = "gfe --config " + cfg.string() + " --xi 0.5,-0.5";
    CHECK(run_cli(base + " --out " + (box.dir / "a").string()) == 0);
    CHECK(run_cli(base + " --out " + (box.dir / "b").string()) == 0);

    const fs::path traj_a = box.dir / "a" / "trajectory.csv";
    REQUIRE(fs::exists(traj_a));
    CHECK(first_line(traj_a) == "t,x_1,x_2,x_3,x_4,x_5,x_6,x_7");
    CHECK(read_file(traj_a) == read_file(box.dir / "b" / "trajectory.csv"));
}

TEST_CASE("malformed configs exit with code 2 naming the field") {
    Sandbox box;
    const fs::path bad_json = box.dir / "bad.json";
    write_config(bad_json, "{ not json");
    CHECK(run_cli("gfe --config " + bad_json.string()) == 2);

    const fs::path bad_field = box.dir / "bad_field.json";
    write_config(bad_field, R"({"discretization": {"steps": 0}})");
    const fs::path err_log = box.dir / "stderr.txt";
    CHECK(run_cli("gfe --config " + bad_field.string(), err_log.string()) == 2);
    const std::string message = read_file(err_log);
    CHECK(message.find("error: config:") != std::string::npos);
    CHECK(message.find("steps") != std::string::npos);

    const fs::path bad_div = box.dir / "bad_div.json";
    write_config(bad_div, R"({"discretization": {"steps": 10, "snapshots": 4}})");
    CHECK(run_cli("collocate --config " + bad_div.string()) == 2);
}

TEST_CASE("unforced gfe run writes a decaying trajectory") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, kTinyConfig);
    REQUIRE(run_cli("gfe --config " + cfg.string() + " --xi 0,0 --out " + box.dir.string()) == 0);
    const auto rows = read_csv_rows(box.dir / "trajectory.csv");
    REQUIRE(rows.size() == 5);
    double prev = 1e300;
    for (const auto& row : rows) {
        double energy = 0.0;
        for (std::size_t i = 1; i < row.size(); ++i) energy += row[i] * row[i];
        CHECK(energy <= prev * (1.0 + 1e-12));
        prev = energy;
    }
}

TEST_CASE("sens-check rows tie extrapolated to plain at theta = 0") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, R"({
      "problem": {"T": 0.8, "mu": 0.01, "sigma": "paper", "u0": "paper", "d": 4},
      "discretization": {"intervals": 24, "steps": 40, "snapshots": 41, "modes": 6},
      "collocation": {"level": 2, "map_bound": 4.0, "etas": [1.0]},
      "mc": {"samples": 10, "seed": 5}
    })");
    REQUIRE(run_cli("sens-check --config " + cfg.string() + " --out " + box.dir.string()) == 0);
    const auto rows = read_csv_rows(box.dir / "improvement_errors.csv");
    REQUIRE(rows.size() == 11);
    bool found_center = false;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 5);
        if (row[0] == 0.0) {
            found_center = true;
            // columns: theta, pod, extrapolated, expanded, pod_big
            CHECK(row[2] == doctest::Approx(row[1]).epsilon(1e-9));
        }
    }
    CHECK(found_center);
    CHECK(fs::exists(box.dir / "sens_fd_report.csv"));
}

TEST_CASE("moment files carry the documented columns") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, kTinyConfig);

    CHECK(run_cli("mc --config " + cfg.string() + " --out " + (box.dir / "mc").string()) == 0);
    CHECK(first_line(box.dir / "mc" / "mc_moments.csv") == "x,mean,second_moment,se_mean");

    CHECK(run_cli("collocate --config " + cfg.string() + " --out " + (box.dir / "col").string()) ==
          0);
    CHECK(first_line(box.dir / "col" / "collocate_moments.csv") == "x,mean,second_moment");
    CHECK(fs::exists(box.dir / "col" / "plan.csv"));
    CHECK(first_line(box.dir / "col" / "plan.csv") == "node_index,xi_1,xi_2,weight");
}

TEST_CASE("multifid and table1 emit summaries") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, kTinyConfig);

    CHECK(run_cli("multifid --config " + cfg.string() + " --eta 9 --out " +
                  (box.dir / "mf").string()) == 0);
    const std::string summary = read_file(box.dir / "mf" / "multifid_summary.json");
    CHECK(summary.find("\"fe_calls\": 1") != std::string::npos);

    CHECK(run_cli("table1 --config " + cfg.string() + " --out " + (box.dir / "t1").string()) == 0);
    CHECK(first_line(box.dir / "t1" / "table1.csv") ==
          "eta,fe_calls,expectation_l2_error,second_moment_l2_error,variance_l2_error");
    const std::string t1 = read_file(box.dir / "t1" / "table1.csv");
    CHECK(t1.find("\n9,1,") != std::string::npos);
}

TEST_CASE("rom writes the mode table") {
    Sandbox box;
    const fs::path cfg = box.dir / "config.json";
    write_config(cfg, kTinyConfig);
    CHECK(run_cli("rom --config " + cfg.string() + " --xi 0.3,0.6 --out " +
                  (box.dir / "rom").string()) == 0);
    CHECK(first_line(box.dir / "rom" / "modes.csv") == "x,psi_1,psi_2,psi_3,U");
    CHECK(fs::exists(box.dir / "rom" / "rom_trajectory.csv"));
}
