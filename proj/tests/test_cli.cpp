#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = std::string(std::tmpnam(nullptr)) + "_cli";
    std::string cmd = std::string(PAP_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    std::remove(out_file.c_str());
    return r;
}

std::string d(const std::string& name) { return testutil::data_path(name); }

}  // namespace

TEST_CASE("eval prints the fixpoint and exits zero") {
    auto r = run_cli("eval --program " + d("surveillance.pap") + " --state " +
                     d("surveillance.pst"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"status\":\"ok\"") != std::string::npos);
    CHECK(r.out.find("Do send_warn(t80)") != std::string::npos);
    CHECK(r.out.find("F move()") != std::string::npos);
}

TEST_CASE("eval with --trace lists fired rules") {
    auto r = run_cli("eval --trace --program " + d("surveillance.pap") + " --state " +
                     d("surveillance.pst"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("i=1 rule=3") != std::string::npos);
}

TEST_CASE("the default level and --p 1.0 agree byte for byte") {
    std::string base = "eval --program " + d("pivot.pap") + " --state " + d("pivot.pst");
    auto a = run_cli(base);
    auto b = run_cli(base + " --p 1.0");
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
}

TEST_CASE("semantic failures exit with code 2") {
    auto r = run_cli("eval --program " + d("clash.pap") + " --state /dev/null");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("no consistent set exists") != std::string::npos);
}

TEST_CASE("input errors exit with code 1") {
    auto r = run_cli("eval --program /nonexistent.pap --state /dev/null");
    CHECK(r.exit_code == 1);
    auto r2 = run_cli("check --program " + d("warn_ag.pap") + " --state " + d("warn_ag.pst") +
                      " --check /nonexistent");
    CHECK(r2.exit_code == 1);
}

TEST_CASE("check classifies a candidate status set") {
    std::string ps_file = std::string(std::tmpnam(nullptr)) + ".pss";
    {
        std::ofstream out(ps_file);
        out << "Do warn_ag(a), P warn_ag(a)\n";
    }
    auto r = run_cli("check --program " + d("warn_ag.pap") + " --state " + d("warn_ag.pst") +
                     " --check " + ps_file);
    std::remove(ps_file.c_str());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"feasible\":true") != std::string::npos);
    CHECK(r.out.find("\"rational\":true") != std::string::npos);
    CHECK(r.out.find("\"reasonable\":true") != std::string::npos);
}

TEST_CASE("kripke dump matches the six-state table") {
    auto r = run_cli("kripke --state " + d("kripke.pst"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("#6 p=0.56 {surv.identify(image1)=t72,surv.location(image1)=loc2}") !=
          std::string::npos);
}

TEST_CASE("step executes an action over the product structure") {
    auto r = run_cli("step --kripke --program " + d("erase.pap") + " --state " + d("kripke.pst") +
                     " --action \"erase()\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("#1") != std::string::npos);

    auto flat = run_cli("step --program " + d("vehicle.pap") + " --state " + d("vehicle.pst") +
                        " --action \"move_forward(a)\"");
    CHECK(flat.exit_code == 0);
    CHECK(flat.out.find("201") != std::string::npos);
}

TEST_CASE("ic-check reports verdicts and exports the LP atomically") {
    std::string lp_file = std::string(std::tmpnam(nullptr)) + ".lp";
    auto r = run_cli("ic-check --program " + d("vehicle.pap") + " --state " + d("vehicle.pst") +
                     " --action \"move_forward(a)\" --p 0.9 --export-lp " + lp_file);
    CHECK(r.exit_code == 2);  // not guaranteed
    CHECK(r.out.find("\"guaranteed\":false") != std::string::npos);
    std::ifstream in(lp_file);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("min:") != std::string::npos);
    CHECK(ss.str().find("bounds:") != std::string::npos);
    std::remove(lp_file.c_str());
    std::remove((lp_file + ".tmp").c_str());
}

TEST_CASE("parse re-renders canonically") {
    auto r = run_cli("parse --program " + d("warn_ag.pap"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("constraint {") != std::string::npos);
    auto bad = run_cli("parse --program " + d("surveillance.pst"));
    CHECK(bad.exit_code == 1);
}
