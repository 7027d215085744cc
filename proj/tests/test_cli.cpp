#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef FRACINV_CLI_PATH
#error "FRACINV_CLI_PATH must point at the built CLI binary"
#endif

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = std::string(FRACINV_TEST_TMPDIR) + "/cli_stdout.txt";
    const std::string cmd = std::string(FRACINV_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string tmp_path(const std::string& name) {
    return std::string(FRACINV_TEST_TMPDIR) + "/" + name;
}

bool file_nonempty(const std::string& path) {
    std::ifstream in(path);
    return in.good() && in.peek() != std::ifstream::traits_type::eof();
}

} // namespace

TEST_CASE("coeffs succeeds and prints the stencil") {
    const auto res = run_cli("coeffs --omega 2 --n 3");
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.rfind("l,a_l\n", 0) == 0);
}

TEST_CASE("invalid omega exits with the usage code") {
    CHECK(run_cli("coeffs --omega 0.5 --n 8").exit_code == 2);
}

TEST_CASE("two grid extents select the 2D coefficient tensor") {
    const auto res = run_cli("coeffs --omega 1.9 --n 3 3");
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.rfind("l1,l2,a_l\n", 0) == 0);
}

TEST_CASE("unknown flags and missing subcommands exit with the usage code") {
    CHECK(run_cli("coeffs --frobnicate 1").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("sweep --n 8 --S 4").exit_code == 2);  // missing mode
    CHECK(run_cli("solve --preset bogus").exit_code == 2);
}

TEST_CASE("solve prints a JSON report and writes the reconstruction table") {
    const std::string out = tmp_path("recon.csv");
    const auto res = run_cli("solve --beta 0.1 --omega 1.9 --n 8 --S 4 --lambda 5e-3 --eps 0.01 --seed 1 --out " + out);
    CHECK(res.exit_code == 0);
    CHECK(res.stdout_text.find("\"iterations\"") != std::string::npos);
    CHECK(res.stdout_text.find("\"recon_error\"") != std::string::npos);
    CHECK(file_nonempty(out));
}

TEST_CASE("non-convergence at maxit=1 exits with the dedicated code") {
    CHECK(run_cli("solve --beta 0.5 --omega 1.5 --n 16 --S 8 --precond none --maxit 1").exit_code == 4);
}

TEST_CASE("spectrum requires --out and then writes both tables") {
    CHECK(run_cli("spectrum --beta 0.5 --omega 1.5 --n 4 --S 2").exit_code == 2);
    const std::string base = tmp_path("spec");
    const auto res = run_cli("spectrum --beta 0.5 --omega 1.5 --n 4 --S 2 --out " + base);
    CHECK(res.exit_code == 0);
    CHECK(file_nonempty(base + ".unprec.csv"));
    CHECK(file_nonempty(base + ".prec.csv"));
}

TEST_CASE("lambda list sweeps directly from the command line") {
    const std::string out = tmp_path("lamsweep.csv");
    const auto res = run_cli("sweep --mode recon --beta 0.1 --omega 1.9 --n 8 --S 4 "
                             "--lambda 1e-4 1e-3 --eps 0.01 --seed 1 --out " + out);
    CHECK(res.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);  // header + two lambda values
}

TEST_CASE("config file drives a sweep and flags override it") {
    const std::string cfg_path = tmp_path("sweep.json");
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"preset":"paper1d","mode":"recon","orders":[[0.1,1.9]],
                   "n":[8],"S":[4],"lambda":[1e-3],"eps":[0.01],"seed":[1,2]})";
    }
    const std::string out = tmp_path("sweep.csv");
    const auto res = run_cli("sweep --config " + cfg_path + " --out " + out);
    CHECK(res.exit_code == 0);
    REQUIRE(file_nonempty(out));
    std::ifstream in(out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "beta,omega,n,S,lambda,eps,seed,nseeds,recon_error,error");
    CHECK(row.find(",2,") != std::string::npos);  // nseeds column

    CHECK(run_cli("sweep --config " + tmp_path("missing.json")).exit_code == 2);
}
