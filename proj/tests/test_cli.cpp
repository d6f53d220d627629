// End-to-end tests against the built CLI binary (path injected by CMake).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(RUDVALIS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

const fs::path tmpdir = fs::temp_directory_path() / "rudvalis_cli_tests";

} // namespace

TEST_CASE("validation failures exit with code 2") {
    CHECK(run("spectrum --shuffle symmetrized --n 100").exit_code == 2);
    CHECK(run("spectrum --shuffle rudvalis --n 10").exit_code == 2); // missing --p
    CHECK(run("spectrum --shuffle rudvalis --n 10 --p 1.5").exit_code == 2);
    CHECK(run("spectrum --shuffle shift-or-swap --n 10 --p 0.5").exit_code == 2); // stray --p
    CHECK(run("spectrum --shuffle riffle --n 10").exit_code == 2);
    CHECK(run("spectrum --shuffle rudvalis --n 2 --p 0.5").exit_code == 2);
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("simulate --shuffle rudvalis --n 5 --p 0.5").exit_code == 2); // missing --t
}

TEST_CASE("capacity failures exit with code 4") {
    CHECK(run("tv-exact --shuffle rudvalis --n 9 --p 0.5 --t 1").exit_code == 4);
    CHECK(run("card-tv --shuffle shift-or-swap --n 600").exit_code == 4);
}

TEST_CASE("spectrum emits schema, config echo and a tight residual") {
    const auto r = run("spectrum --shuffle shift-or-swap --n 7");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["config"]["command"] == "spectrum");
    CHECK(doc["config"]["shuffle"] == "shift-or-swap");
    CHECK(doc["config"]["n"] == 7);
    CHECK(doc["config"]["p"].is_null());
    CHECK(doc["residual"].get<double>() < 1e-10);
    CHECK(doc["verify_residual"].get<double>() < 1e-10);
    CHECK(doc["gamma"].get<double>() > 0.0);
    CHECK(doc["gamma"].get<double>() < 0.5);

    const auto sym = run("spectrum --shuffle symmetrized --n 25");
    REQUIRE(sym.exit_code == 0);
    const json sdoc = json::parse(sym.out);
    CHECK(sdoc["theta"].get<double>() > 0.0);
    CHECK(sdoc["delta"].get<double>() > 0.0);
}

TEST_CASE("tv-exact emits one row per time step") {
    const auto r = run("tv-exact --shuffle rudvalis --n 5 --p 0.5 --t 100");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 102); // header + t = 0..100
    CHECK(ls[0] == "t,tv,mean_re,mean_im,var");
    double prev_tv = 2.0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        long long t;
        double tv, mre, mim, var;
        REQUIRE(std::sscanf(ls[i].c_str(), "%lld,%lf,%lf,%lf,%lf", &t, &tv, &mre, &mim, &var) == 5);
        CHECK(t == static_cast<long long>(i) - 1);
        CHECK(tv <= prev_tv + 1e-12);
        CHECK(var >= -1e-12);
        prev_tv = tv;
    }
}

TEST_CASE("card-tv explicit and auto grids") {
    const auto r = run("card-tv --shuffle shift-or-swap --n 32 --t-grid 0,10,100,181");
    REQUIRE(r.exit_code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "n,t,tv");
    CHECK(ls[1].rfind("32,0,", 0) == 0);
    CHECK(ls[4].rfind("32,181,", 0) == 0);

    const auto a = run("card-tv --shuffle shift-or-swap --n 32 --t-grid auto");
    REQUIRE(a.exit_code == 0);
    const auto als = lines(a.out);
    REQUIRE(als.size() >= 3);
    double last_tv = 1.0;
    long long last_t = -1;
    std::sscanf(als.back().c_str(), "%*d,%lld,%lf", &last_t, &last_tv);
    CHECK(last_tv < 0.25);
    CHECK(last_t >= 128); // mixing takes ~181 steps at n = 32, so auto must reach 256

    CHECK(run("card-tv --shuffle shift-or-swap --n 32 --t-grid 5,x").exit_code == 2);
}

TEST_CASE("simulate output is byte-identical under a fixed seed") {
    fs::create_directories(tmpdir);
    const std::string base = " simulate --shuffle symmetrized --n 21 --t 2000 --trials 32 --seed 99";
    const auto p1 = tmpdir / "sim1.csv";
    const auto p2 = tmpdir / "sim2.csv";
    const auto p3 = tmpdir / "sim3.csv";
    const auto p4 = tmpdir / "sim4.csv";
    REQUIRE(run(base + " --out " + p1.string()).exit_code == 0);
    REQUIRE(run(base + " --out " + p2.string()).exit_code == 0);
    REQUIRE(run(base + " --serial --out " + p3.string()).exit_code == 0);
    REQUIRE(run(" simulate --shuffle symmetrized --n 21 --t 2000 --trials 32 --seed 100 --out " +
                p4.string())
                .exit_code == 0);
    const std::string c1 = slurp(p1);
    CHECK(c1 == slurp(p2));
    CHECK(c1 == slurp(p3)); // thread schedule does not leak into the results
    CHECK(c1 != slurp(p4));
    CHECK(lines(c1).size() == 33);

    // summary includes the separation block when stationary samples are requested
    const auto s = run(base + " --stationary 200 --out " + p1.string() + " --summary-out -");
    REQUIRE(s.exit_code == 0);
    const json doc = json::parse(s.out);
    CHECK(doc["separation"]["threshold"].get<double>() > 0.0);
    CHECK(doc["separation"]["p_chain"].get<double>() >= 0.0);
    CHECK(doc["config"]["seed"] == 99);
}

TEST_CASE("bound reports a sweep with shrinking diagnostic") {
    const auto r = run("bound --shuffle rudvalis --n 101 --p 0.5 --n-list 101,301 --epsilon 0.25");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["reports"].size() == 2);
    CHECK(doc["reports"][0]["n"] == 101);
    CHECK(doc["reports"][1]["n"] == 301);
    CHECK(doc["reports"][0]["t_lower"].get<long long>() > 0);
    CHECK(doc["reports"][1]["diagnostic"].get<double>() <
          doc["reports"][0]["diagnostic"].get<double>());
}

TEST_CASE("coupling summary") {
    const auto r = run("coupling --n 6 --shifts 50000 --steps 20000 --seed 5");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["parity"]["fraction_odd"].get<double>() == doctest::Approx(1.0 / 3).epsilon(0.05));
    CHECK(doc["equivalence"]["all_match"] == true);
    CHECK(doc["equivalence"]["first_mismatch"] == -1);
    CHECK(doc["equivalence"]["epoch_frequency"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("RUDVALIS_OUT_DIR resolves bare output names") {
    fs::create_directories(tmpdir / "outdir");
    const std::string cmd = "RUDVALIS_OUT_DIR=" + (tmpdir / "outdir").string() + " " +
                            std::string(RUDVALIS_CLI_PATH) +
                            " card-tv --shuffle shift-or-swap --n 16 --t-grid 0,4 --out bare.csv";
    REQUIRE(std::system((cmd + " >/dev/null 2>&1").c_str()) == 0);
    CHECK(fs::exists(tmpdir / "outdir" / "bare.csv"));
    const auto ls = lines(slurp(tmpdir / "outdir" / "bare.csv"));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "n,t,tv");
}
