#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CFL_LAB_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cfl_lab_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli analyze succeeds on catalog schemes") {
    TempDir tmp;
    CHECK(run_cli("analyze rk2 rk4 --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "rk2_analysis.csv"));
    CHECK(fs::exists(tmp.path / "rk4_analysis.csv"));
}

TEST_CASE("cli analyze reads scheme files and rejects malformed ones") {
    TempDir tmp;
    const fs::path good = tmp.path / "schemes.txt";
    std::ofstream(good) << "rk_chain mychain 1 1/2 1/4\n";
    CHECK(run_cli("analyze " + good.string() + " --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "mychain_analysis.csv"));

    const fs::path bad = tmp.path / "bad.txt";
    std::ofstream(bad) << "rk_chain broken one two\n";
    CHECK(run_cli("analyze " + bad.string() + " --out-dir " + tmp.path.string()) == 2);
    CHECK(run_cli("analyze no-such-scheme --out-dir " + tmp.path.string()) == 2);
}

TEST_CASE("cli usage errors exit 1") {
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("burgers-sweep") == 1); // empty scheme list
    CHECK(run_cli("analyze rk2 --no-such-flag 3") == 2);
}

TEST_CASE("cli domain writes CSV, SVG and a tangency summary") {
    TempDir tmp;
    CHECK(run_cli("domain euler rk2 --points 1024 --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "euler_boundary.csv"));
    CHECK(fs::exists(tmp.path / "rk2_boundary.csv"));
    CHECK(fs::exists(tmp.path / "domains.svg"));
    std::ifstream summary(tmp.path / "tangency_summary.txt");
    std::stringstream buf;
    buf << summary.rdbuf();
    CHECK(buf.str().find("euler") != std::string::npos);
    CHECK(buf.str().find("r = 1") != std::string::npos);
}

TEST_CASE("cli burgers-sweep on a tiny ladder") {
    TempDir tmp;
    CHECK(run_cli("burgers-sweep --scheme rk4 --n-min 16 --n-max 32 --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "rk4_sweep.csv"));
    CHECK(fs::exists(tmp.path / "sweep.svg"));
    std::ifstream csv(tmp.path / "rk4_sweep.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "scheme,n,dt_max,predicted_exponent,fitted_slope");
}

TEST_CASE("cli transport and env override of out-dir") {
    TempDir tmp;
    const fs::path env_dir = tmp.path / "env_out";
    ::setenv("CFL_LAB_OUT", env_dir.c_str(), 1);
    const int rc = run_cli("transport upwind1 --out-dir " + (tmp.path / "flag_out").string());
    ::unsetenv("CFL_LAB_OUT");
    CHECK(rc == 0);
    CHECK(fs::exists(env_dir / "upwind1_symbol.csv"));
    CHECK_FALSE(fs::exists(tmp.path / "flag_out" / "upwind1_symbol.csv"));
}

TEST_CASE("cli construct writes the catalog and certificates") {
    TempDir tmp;
    CHECK(run_cli("construct all --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "constructed_schemes.txt"));
    CHECK(fs::exists(tmp.path / "certificates.txt"));
    // The emitted catalog parses back.
    std::ifstream in(tmp.path / "constructed_schemes.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("rk_chain chain4") != std::string::npos);
    CHECK(buf.str().find("adams_bashforth absch3") != std::string::npos);
    // chain6 certificate carries the reference-mismatch flag.
    std::ifstream cert(tmp.path / "certificates.txt");
    std::stringstream cbuf;
    cbuf << cert.rdbuf();
    CHECK(cbuf.str().find("MISMATCH") != std::string::npos);
}

TEST_CASE("cli report runs end to end") {
    TempDir tmp;
    CHECK(run_cli("report --points 1024 --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "report.txt"));
}

TEST_CASE("cli sweep snapshot profiles") {
    TempDir tmp;
    CHECK(run_cli("burgers-sweep --scheme rk4 --snapshot 32 --out-dir " + tmp.path.string()) == 0);
    CHECK(fs::exists(tmp.path / "rk4_n32_dt0.97_profile.csv"));
    CHECK(fs::exists(tmp.path / "rk4_n32_dt1_profile.csv"));
    CHECK(fs::exists(tmp.path / "rk4_n32_dt1.03_profile.csv"));
}

TEST_CASE("cli config file feeds defaults") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "lab.cfg";
    std::ofstream(cfg) << "# sweep defaults\nscheme=rk4\nn_min=16\nn_max=16\nk_tv=1.2\nout_dir="
                       << tmp.path.string() << "\n";
    CHECK(run_cli("burgers-sweep --config " + cfg.string()) == 0);
    CHECK(fs::exists(tmp.path / "rk4_sweep.csv"));
}
