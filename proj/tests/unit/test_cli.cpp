#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* env = std::getenv("TEV_CLI");
    REQUIRE_MESSAGE(env != nullptr, "TEV_CLI must point at the built binary");
    return env;
}

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path() / "tev_cli_out.txt";
    const std::string cmd = cli_path() + " " + args + " > " + tmp.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WEXITSTATUS(rc);
    std::ifstream in(tmp);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

fs::path write_profile(const std::string& name, const std::string& json) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << json;
    return p;
}

const char* kSwapJson = R"({
  "regularity": "piecewise_constant",
  "bounds": {"n_star": 4.0, "n_star_upper": 16.0},
  "segments": [
    {"start": 0.0, "end": 0.5, "law": {"kind": "constant", "coefficients": [4.0]}},
    {"start": 0.5, "end": 1.0, "law": {"kind": "constant", "coefficients": [16.0]}}
  ]
})";

const char* kUnitJson = R"({
  "regularity": "piecewise_constant",
  "bounds": {"n_star": 0.9, "n_star_upper": 1.1},
  "segments": [
    {"start": 0.0, "end": 1.0, "law": {"kind": "constant", "coefficients": [1.0]}}
  ]
})";

}  // namespace

TEST_CASE("eval prints zero for the unit medium") {
    const fs::path p = write_profile("tev_unit.json", kUnitJson);
    const RunResult r = run("eval --profile " + p.string() + " --k 1.5");
    CHECK(r.status == 0);
    CHECK(r.out.find("d = 0+0i") != std::string::npos);
}

TEST_CASE("counterexample report") {
    const RunResult r = run("counterexample --kmax 50 --grid 200 --zeros-kmax 10");
    CHECK(r.status == 0);
    CHECK(r.out.find("max |d1 - 3 d2| = ") != std::string::npos);
    // the identity line should carry a tiny deviation
    std::istringstream lines(r.out);
    std::string line;
    bool ok = false;
    while (std::getline(lines, line)) {
        if (line.rfind("max |d1 - 3 d2| = ", 0) == 0) {
            const double v = std::stod(line.substr(line.find('=') + 1));
            ok = v <= 1e-10;
        }
    }
    CHECK(ok);
}

TEST_CASE("check classifies the swap profile") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const RunResult r = run("check --profile " + p.string() + " --eps 0.05");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"case_verdict\": \"inapplicable\"") != std::string::npos);
    CHECK(r.out.find("eps0 bound violated") != std::string::npos);
}

TEST_CASE("sweep artifacts are byte-identical across reruns and jobs counts") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const fs::path out1 = fs::temp_directory_path() / "sweep1.csv";
    const fs::path out2 = fs::temp_directory_path() / "sweep2.csv";
    const std::string base = "sweep --profile " + p.string() + " --kmin 0.5 --kmax 9 --n 200 ";
    CHECK(run(base + "--jobs 1 --out " + out1.string()).status == 0);
    CHECK(run(base + "--jobs 4 --out " + out2.string()).status == 0);
    std::ifstream f1(out1), f2(out2);
    std::ostringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    // provenance headers echo the jobs-independent options only
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().find("k_re,k_im,d_re,d_im,Dd_re,Dd_im") != std::string::npos);
}

TEST_CASE("eigs then invert round trip") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const fs::path eigs = fs::temp_directory_path() / "tev_eigs.csv";
    CHECK(run("eigs --profile " + p.string() + " --kmax 33 --out " + eigs.string()).status == 0);
    const RunResult r = run("invert --eigs-file " + eigs.string() +
                            " --model l_constants --breakpoints 0.5 --count 20"
                            " --start 3,9 --start 9,3 --start 13,5 --start 5,13");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"non_uniqueness_flag\": true") != std::string::npos);
}

TEST_CASE("density prints the thickness estimate") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const RunResult r = run("density --profile " + p.string() + " --tmax 120 --height 1.5");
    CHECK(r.status == 0);
    const auto pos = r.out.find("delta_estimate = ");
    REQUIRE(pos != std::string::npos);
    const double est = std::stod(r.out.substr(pos + 17));
    CHECK(std::abs(est - 3.0) < 0.06);
}

TEST_CASE("ceigs on a straddling rectangle") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const RunResult r = run("ceigs --profile " + p.string() +
                            " --re0 1.2 --re1 1.9 --im0 -0.3 --im1 0.3");
    CHECK(r.status == 0);
    CHECK(r.out.find("1.5707963267948966") != std::string::npos);
}

TEST_CASE("kronecker subcommand") {
    const RunResult r =
        run("kronecker --v 1.4142135623730951 --v 1.7320508075688772 --a 0.25 --a 0 "
            "--eps1 0.05 --T 10");
    CHECK(r.status == 0);
    CHECK(r.out.find("t = ") != std::string::npos);
}

TEST_CASE("mollify emits the smoothing table") {
    const RunResult r = run("mollify --fixture kink --j 8 --grid 8");
    CHECK(r.status == 0);
    CHECK(r.out.find("x,f,f_j,g_j") != std::string::npos);
}

TEST_CASE("dominant prints the coefficient table") {
    const fs::path p = write_profile("tev_swap.json", kSwapJson);
    const RunResult r = run("dominant --profile " + p.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("j,beta,weight") != std::string::npos);
    CHECK(r.out.find("1,4,") != std::string::npos);
}

TEST_CASE("exit codes: usage error 2, domain error 1") {
    CHECK(run("eigs --kmax 5").status == 2);  // missing --profile
    CHECK(run("nonsense").status == 2);
    const fs::path u = write_profile("tev_unit.json", kUnitJson);
    // degenerate medium: domain error
    CHECK(run("eigs --profile " + u.string() + " --kmax 5").status == 1);
    // unreadable profile file
    CHECK(run("eigs --profile /nonexistent.json --kmax 5").status == 1);
    // invalid schema
    const fs::path bad = write_profile("tev_bad.json", "{\"regularity\": \"c2\"}");
    CHECK(run("eigs --profile " + bad.string() + " --kmax 5").status == 1);
}
