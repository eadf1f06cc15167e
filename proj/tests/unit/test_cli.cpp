#include "commands.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cbound::cli;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_args(std::vector<std::string> args, std::string* log_out = nullptr) {
    args.insert(args.begin(), "cbound");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream log, err;
    const int rc = run(static_cast<int>(argv.size()), argv.data(), log, err);
    if (log_out) *log_out = log.str() + err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
    return out;
}

void write_config(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// A reduced scenario that keeps every command fast.
const char* kSmall = R"({
  "t_seeds": [-3.0, -1.0, -0.75, -0.5, 0.0, 1.0],
  "y_seeds": [0.0],
  "jmap": {"T_samples": [-1.0, -0.5, 0.0, 0.5, 1.0]},
  "oracle": {"box": [-1.0, 1.0, -1.5, -0.1], "h": 0.1, "samples": 200},
  "confmap": {"cloud_points": 200, "x_curve_seeds": [-2.0, 0.0], "y_curve_seeds": [0.0]}
})";

} // namespace

TEST_CASE("exit codes for bad invocations") {
    TempDir tmp("cbound_cli_codes");
    write_config(tmp.path / "empty.json", R"({"t_seeds": []})");
    write_config(tmp.path / "reversed.json", R"({"jmap": {"pairs": [["g", "g_cc"]]}})");
    const auto out = (tmp.path / "out").string();
    CHECK(run_args({"curves", "--config", (tmp.path / "empty.json").string(), "--out", out}) == kConfigError);
    CHECK(run_args({"jmap", "--config", (tmp.path / "reversed.json").string(), "--out", out}) == kConfigError);
    CHECK(run_args({"curves", "--config", (tmp.path / "missing.json").string()}) == kConfigError);
    CHECK(run_args({"curves", "--tol", "0"}) == kConfigError);
    CHECK(run_args({"frobnicate"}) == kConfigError);
    CHECK(run_args({}) == kConfigError);
    CHECK(run_args({"--help"}) == kOk);
}

TEST_CASE("curves writes one csv per seed and creates the output directory") {
    TempDir tmp("cbound_cli_curves");
    const auto out = tmp.path / "nested" / "out";
    std::string log;
    REQUIRE(run_args({"curves", "--out", out.string()}, &log) == kOk);
    std::size_t csv = 0;
    for (const auto& e : fs::directory_iterator(out / "curves"))
        if (e.path().extension() == ".csv") ++csv;
    CHECK(csv == 43);
    CHECK(fs::exists(out / "curves" / "index.json"));
    CHECK(fs::exists(out / "curves" / "report.md"));
}

TEST_CASE("exact seeds give exact lines") {
    TempDir tmp("cbound_cli_lines");
    write_config(tmp.path / "s.json", R"({"t_seeds": [-1.0, -0.5]})");
    REQUIRE(run_args({"curves", "--config", (tmp.path / "s.json").string(), "--out", tmp.path.string()}) == kOk);
    for (const auto& [file, slope] : {std::pair{"X_000.csv", 1.0}, std::pair{"X_001.csv", 0.5}}) {
        std::istringstream in(slurp(tmp.path / "curves" / file));
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("# scenario ", 0) == 0);
        std::getline(in, line);
        CHECK(line == "s,r");
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            const double s = std::stod(line.substr(0, comma)), r = std::stod(line.substr(comma + 1));
            REQUIRE(std::abs(r - slope * s) <= 1e-12 * std::max(1.0, std::abs(s)));
            ++rows;
        }
        CHECK(rows > 10);
    }
}

TEST_CASE("every command embeds the scenario and is deterministic") {
    TempDir tmp("cbound_cli_all");
    const auto cfg = (tmp.path / "small.json").string();
    write_config(cfg, kSmall);
    const auto out = (tmp.path / "out").string();
    std::map<std::string, std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
        for (const char* cmd : {"curves", "boundary", "jmap", "confmap"}) {
            INFO("command " << cmd);
            std::string log;
            CHECK(run_args({cmd, "--config", cfg, "--out", out, "--seed", "5"}, &log) == kOk);
        }
        const int rc = run_args({"oracle-check", "--config", cfg, "--out", out, "--seed", "5"});
        CHECK((rc == kOk || rc == kClaimFailed));
        const auto snap = snapshot(out);
        if (pass == 0) first = snap;
        else CHECK(snap == first);
    }
    REQUIRE(!first.empty());
    for (const auto& [file, text] : first) {
        INFO("file " << file);
        const auto ext = fs::path(file).extension();
        if (ext == ".csv") CHECK(text.rfind("# scenario {", 0) == 0);
        else if (ext == ".json") CHECK(text.find("\"scenario\"") != std::string::npos);
        else if (ext == ".md") CHECK(text.find("\"seed\": 5") != std::string::npos);
        CHECK(text.find("\"seed\":5") + text.find("\"seed\": 5") != 2 * std::string::npos);
    }
}

TEST_CASE("the installed binary maps exit codes") {
    const std::string bin = CBOUND_CLI_PATH;
    CHECK(std::system((bin + " --help > /dev/null").c_str()) == 0);
    CHECK(WEXITSTATUS(std::system((bin + " nonsense > /dev/null 2>&1").c_str())) == 2);
}
