#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(RAV_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
        r.output.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string strip_elapsed(std::string s) {
    return std::regex_replace(s, std::regex("\"elapsed_ms\": [0-9.e+-]+"), "\"elapsed_ms\": X");
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rav_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("avoid solve on the duplicated-wire instance reports y = 01") {
    TempDir dir;
    const fs::path ckt = dir.path / "dup.ckt";
    std::ofstream(ckt) << "1 0 2\n1 1\n";
    const RunResult r = run_cli("avoid solve --circuit " + ckt.string() + " --mode exhaustive");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"y_bits\": \"01\"") != std::string::npos);
    CHECK(r.output.find("exhaustive-verified") != std::string::npos);
}

TEST_CASE("hardlang verify-lb reports a clean sweep at (5,2,micro)") {
    TempDir dir;
    const RunResult r = run_cli("hardlang verify-lb --n 5 --s 2 --scheme micro --s-max 2 "
                                "--cache-dir " +
                                (dir.path / "cache").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"circuits\": 230801") != std::string::npos);
    CHECK(r.output.find("\"matches\": 0") != std::string::npos);
}

TEST_CASE("gc solve accepts the (1,5,1) unary instance") {
    const RunResult r = run_cli("gc solve 101111101");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"outcome\": \"accept\"") != std::string::npos);
    CHECK(r.output.find("\"11111\"") != std::string::npos);
}

TEST_CASE("reports are byte-identical modulo the elapsed field") {
    const std::string cmd = "gc solve --n 3 --m 3 --c 2 --workers 1";
    const RunResult a = run_cli(cmd);
    const RunResult b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(strip_elapsed(a.output) == strip_elapsed(b.output));

    TempDir dir;
    const fs::path ckt = dir.path / "inst.ckt";
    std::ofstream(ckt) << "3 1 4\n0111 1 2\n1 2 3 4\n";
    const std::string solve_cmd =
        "avoid solve --circuit " + ckt.string() + " --seed 5 --workers 2";
    CHECK(strip_elapsed(run_cli(solve_cmd).output) == strip_elapsed(run_cli(solve_cmd).output));
}

TEST_CASE("exit code taxonomy") {
    // Usage error.
    CHECK(run_cli("no-such-command").exit_code == 2);
    // Contract violation: a refuted avoid claim.
    TempDir dir;
    const fs::path ckt = dir.path / "dup.ckt";
    std::ofstream(ckt) << "1 0 2\n1 1\n";
    CHECK(run_cli("avoid verify --circuit " + ckt.string() + " --y 11").exit_code == 1);
    CHECK(run_cli("avoid verify --circuit " + ckt.string() + " --y 01").exit_code == 0);
    // Budget exceeded.
    const fs::path big = dir.path / "big.ckt";
    std::ofstream(big) << "10 1 11\n0110 1 2\n1 2 3 4 5 6 7 8 9 10 11\n";
    CHECK(run_cli("avoid solve --circuit " + big.string() + " --budget 16").exit_code == 3);
}

TEST_CASE("s2 and hierarchy subcommands answer") {
    const RunResult dec = run_cli("s2 decide --pred divisor --n 4 --ell 4 --x 1001");
    CHECK(dec.exit_code == 0);
    CHECK(dec.output.find("\"decision\": \"member\"") != std::string::npos);

    const RunResult hier = run_cli("hierarchy --n 2 --s1 0 --s2 1");
    CHECK(hier.exit_code == 0);
    CHECK(hier.output.find("\"strict\": true") != std::string::npos);
}

TEST_CASE("encode emits the hand-derived xor bits") {
    TempDir dir;
    const fs::path ckt = dir.path / "xor.ckt";
    std::ofstream(ckt) << "2 1 1\n0110 1 2\n3\n";
    const RunResult r =
        run_cli("encode --circuit " + ckt.string() + " --n 2 --s 1 --scheme paper");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"bits_hex\": \"666\"") != std::string::npos);

    // Round trip through a binary file.
    const fs::path bin = dir.path / "xor.bin";
    run_cli("encode --circuit " + ckt.string() + " --n 2 --s 1 --scheme paper --out " +
            bin.string());
    const RunResult dec = run_cli("decode --in " + bin.string());
    CHECK(dec.exit_code == 0);
    CHECK(dec.output.find("0110 1 2") != std::string::npos);
}
