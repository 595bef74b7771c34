#include "doctest.h"

#include "turnpike/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kSmallConfig = R"cfg(
problem.domain = [0, 1]
problem.control = [0, 1]
problem.observation = [0, 1]
problem.beta = 50
problem.horizon = 0.5
problem.target = "1"
problem.initial = "sin(pi*x)"
problem.nonlinearity = zero
disc.nx = 15
disc.dt = 0.025
optimizer.stepsize = 0.1
optimizer.max_iters = 2000
optimizer.grad_tol = 1e-5
steady.grad_tol = 1e-8
sweep.horizons = [0.5, 1]
sweep.dt = 0.025
sweep.nx = 15
)cfg";

struct Workspace {
    fs::path dir;
    fs::path config;

    explicit Workspace(const std::string& name, const std::string& cfg_text = kSmallConfig) {
        dir = fs::temp_directory_path() / ("turnpike_cli_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
        config = dir / "run.toml";
        std::ofstream(config) << cfg_text;
    }
    ~Workspace() { fs::remove_all(dir); }

    int run(const std::string& command) const {
        turnpike::cli::Args args;
        args.command = command;
        args.config_path = config.string();
        args.out_dir = (dir / "out").string();
        return turnpike::cli::run(args);
    }
    fs::path out(const std::string& name) const { return dir / "out" / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("solve: exit 0, trajectory csv and report") {
    Workspace ws("solve");
    CHECK(ws.run("solve") == 0);
    REQUIRE(fs::exists(ws.out("trajectory.csv")));
    REQUIRE(fs::exists(ws.out("solve_report.json")));

    std::string csv = slurp(ws.out("trajectory.csv"));
    CHECK(csv.rfind("t,x,value", 0) == 0);

    json rep = json::parse(slurp(ws.out("solve_report.json")));
    CHECK(rep.contains("config"));
    CHECK(rep["config"]["disc"]["nx"] == 15);
    CHECK(rep.contains("final_linf"));

    // reruns are byte-identical
    std::string first = csv;
    CHECK(ws.run("solve") == 0);
    CHECK(slurp(ws.out("trajectory.csv")) == first);
}

TEST_CASE("steady: profiles and report") {
    Workspace ws("steady");
    CHECK(ws.run("steady") == 0);
    std::string csv = slurp(ws.out("steady_profiles.csv"));
    CHECK(csv.rfind("x,u,y,q", 0) == 0);
    json rep = json::parse(slurp(ws.out("steady_report.json")));
    CHECK(rep["steady"]["converged"] == true);
    CHECK(rep["optimality_residual"].get<double>() < 1e-5);
}

TEST_CASE("optimize: cost history and optimum") {
    Workspace ws("optimize");
    CHECK(ws.run("optimize") == 0);
    REQUIRE(fs::exists(ws.out("cost_history.csv")));
    REQUIRE(fs::exists(ws.out("control.csv")));
    REQUIRE(fs::exists(ws.out("state.csv")));
    json rep = json::parse(slurp(ws.out("optimize_report.json")));
    CHECK(rep["optimize"]["reason"] == "grad_tol");
    double j = rep["optimize"]["cost"]["total"].get<double>();
    CHECK(j > 0.0);
    CHECK(j < 50.0 * 0.5 * 0.5);  // far below the zero-control cost
}

TEST_CASE("turnpike: verdict and distance curve") {
    Workspace ws("turnpike");
    CHECK(ws.run("turnpike") == 0);
    std::string csv = slurp(ws.out("distance.csv"));
    CHECK(csv.rfind("t,dy_inf,du_inf", 0) == 0);
    json rep = json::parse(slurp(ws.out("turnpike_report.json")));
    CHECK(rep.contains("turnpike"));
    CHECK(rep["turnpike"].contains("entry_fit"));
    CHECK(rep["turnpike"].contains("cost_gap"));
    CHECK(rep.contains("quasi_optimal"));
    CHECK(rep["steady"]["converged"] == true);
}

TEST_CASE("sweep: one csv row per horizon") {
    Workspace ws("sweep");
    CHECK(ws.run("sweep") == 0);
    std::string csv = slurp(ws.out("sweep.csv"));
    CHECK(csv.rfind("T,JT,JT_over_T,Js,gap,yt_l2,ratio", 0) == 0);
    int rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 3);  // header + 2 horizons
    json rep = json::parse(slurp(ws.out("sweep_report.json")));
    CHECK(rep["sweep"]["rows"].size() == 2);
    CHECK(rep["sweep"]["averages_certified"] == true);
}

TEST_CASE("check: the built-in oracles pass") {
    Workspace ws("check");
    CHECK(ws.run("check") == 0);
    json rep = json::parse(slurp(ws.out("check_report.json")));
    CHECK(rep["checks"].size() == 3);
    for (const auto& c : rep["checks"]) CHECK(c["ok"] == true);
}

TEST_CASE("exit 2 on config problems, with a machine-readable error") {
    Workspace ws("badcfg", "problem.beta = -5\nbogus.key = 1\n");
    CHECK(ws.run("solve") == 2);
    REQUIRE(fs::exists(ws.out("error.json")));
    json err = json::parse(slurp(ws.out("error.json")));
    CHECK(err["error"]["kind"] == "config");
    std::string msg = err["error"]["message"].get<std::string>();
    CHECK(msg.find("beta") != std::string::npos);
    CHECK(msg.find("bogus.key") != std::string::npos);
}

TEST_CASE("exit 2 when the config file is missing") {
    Workspace ws("nofile");
    fs::remove(ws.config);
    CHECK(ws.run("solve") == 2);
}

TEST_CASE("exit 3 when the state blows up, suggesting a finer step") {
    // cubic reaction with y0 = 10 at dt far beyond the stability limit
    Workspace ws("blowup",
                 "problem.initial = 10\n"
                 "problem.nonlinearity = power\n"
                 "problem.horizon = 1\n"
                 "disc.nx = 20\n"
                 "disc.dt = 0.1\n");
    CHECK(ws.run("solve") == 3);
    json err = json::parse(slurp(ws.out("error.json")));
    CHECK(err["error"]["kind"] == "solver");
    CHECK(err["error"]["message"].get<std::string>().find("dt") != std::string::npos);
}

TEST_CASE("exit 4 when the optimizer cannot make progress") {
    Workspace ws("diverge",
                 std::string(kSmallConfig) +
                     "optimizer.max_restarts = 0\n");  // no rescue ladder
    // overwrite stepsize with something hopeless
    {
        std::ofstream out(ws.config, std::ios::app);
        out << "\n";
    }
    std::string text = slurp(ws.config);
    // replace the stepsize line
    auto pos = text.find("optimizer.stepsize = 0.1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, std::string("optimizer.stepsize = 0.1").size(),
                 "optimizer.stepsize = 1e9");
    std::ofstream(ws.config) << text;

    CHECK(ws.run("optimize") == 4);
    json err = json::parse(slurp(ws.out("error.json")));
    CHECK(err["error"]["kind"] == "optimizer");
}

TEST_CASE("argument parsing through the real entry point") {
    Workspace ws("argv");
    std::string cfg = ws.config.string();
    std::string out = (ws.dir / "out").string();

    auto call = [](std::vector<std::string> words) {
        std::vector<const char*> argv;
        for (const auto& w : words) argv.push_back(w.c_str());
        return turnpike::cli::main(static_cast<int>(argv.size()), argv.data());
    };

    CHECK(call({"turnpike-lab", "solve", "--config", cfg, "--out", out}) == 0);
    CHECK(call({"turnpike-lab", "solve"}) == 2);              // --config required
    CHECK(call({"turnpike-lab", "frobnicate", "--config", cfg}) == 2);
    CHECK(call({"turnpike-lab", "--help"}) == 0);
    CHECK(call({"turnpike-lab"}) == 2);  // a subcommand is required
}

} // TEST_SUITE
