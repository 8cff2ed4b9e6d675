#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"

using namespace mosk;
using mosk::cli::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "mosk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) row.push_back(f);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct SeedEnv {
    explicit SeedEnv(const char* v) { ::setenv("MOSK_SEED", v, 1); }
    ~SeedEnv() { ::unsetenv("MOSK_SEED"); }
};

} // namespace

TEST_CASE("rotator is refuted as uniformly monotone") {
    const auto r = run({"certify", "--op", "rotator", "--class", "uniformly-monotone", "--t", "0.5,1,2", "--samples",
                        "100000", "--seed", "42", "--out", "-"});
    CHECK(r.code == 2);
    const auto doc = json::parse(r.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["config"]["sampler"]["seed"] == 42);
    const auto& cert = doc["result"]["certificate"];
    CHECK(cert["verdict"] == "refuted");
    REQUIRE(cert["estimates"].size() == 3);
    for (const auto& e : cert["estimates"]) CHECK(std::abs(e["value"].get<double>()) <= 1e-12);
    CHECK(r.err.find("refuted") != std::string::npos);
}

TEST_CASE("PR oscillation trace") {
    const auto r = run({"split", "--algo", "pr", "--opA", "normal-cone-zero", "--opB", "zero", "--x0", "1",
                        "--max-iter", "50", "--out", "-"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# {", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 52);
    CHECK(rows[0] == std::vector<std::string>{"iter", "x_0", "y_0", "residual"});
    for (std::size_t n = 0; n <= 50; ++n) CHECK(rows[n + 1][1] == (n % 2 == 0 ? "1" : "-1"));
    CHECK(rows.back()[3].empty());
    CHECK(r.err.find("period-2 flag set") != std::string::npos);

    const auto j = run({"split", "--algo", "pr", "--opA", "normal-cone-zero", "--opB", "zero", "--x0", "1",
                        "--max-iter", "50", "--json", "-"});
    const auto doc = json::parse(j.out);
    CHECK(doc["result"]["period2_flag"] == true);
    CHECK(doc["result"]["termination"] == "max-iter");
    CHECK(run({"split", "--algo", "pr", "--opA", "normal-cone-zero", "--opB", "zero", "--x0", "1", "--max-iter", "50",
               "--expect-converge"})
              .code == 2);
}

TEST_CASE("staircase witness CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "mosk_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "w.csv").string();
    const auto r = run({"witness", "--example", "staircase-ssne", "--n", "20", "--out", path});
    CHECK(r.code == 0);
    const auto text = slurp(path);
    CHECK(text.find('\r') == std::string::npos);
    const auto rows = csv_rows(text);
    REQUIRE(rows.size() == 21);
    CHECK(rows[0][6] == "d_n");
    for (std::size_t n = 1; n <= 20; ++n) {
        const double d = std::stod(rows[n][6]);
        CHECK(std::abs(d / std::ldexp(1.0, -2 * static_cast<int>(n)) - 1.0) <= 1e-9);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical configs give byte-identical output") {
    const std::vector<std::string> cert{"certify", "--op",      "clamp-sin-map", "--class", "contraction-large-distances",
                                        "--eps",   "0.1,1,5",   "--samples",     "20000",   "--out", "-"};
    const auto a = run(cert);
    const auto b = run(cert);
    CHECK(a.out == b.out);
    auto threaded = cert;
    threaded.insert(threaded.end(), {"--threads", "1"});
    CHECK(run(threaded).out == a.out);
    threaded.back() = "7";
    CHECK(run(threaded).out == a.out);

    const std::vector<std::string> split{"split", "--algo", "dr", "--opA", "cubic", "--opB", "identity", "--x0", "10",
                                         "--out", "-"};
    CHECK(run(split).out == run(split).out);
    const std::vector<std::string> sd{"selfdual", "--op", "cubic", "--samples", "2000", "--out", "-"};
    CHECK(run(sd).out == run(sd).out);
}

TEST_CASE("MOSK_SEED sets the default seed") {
    const std::vector<std::string> args{"certify", "--op",      "cubic", "--class", "uniformly-monotone",
                                        "--samples", "1000", "--out",  "-"};
    {
        SeedEnv env("7");
        const auto doc = json::parse(run(args).out);
        CHECK(doc["config"]["sampler"]["seed"] == 7);
        auto explicit_seed = args;
        explicit_seed.insert(explicit_seed.end(), {"--seed", "9"});
        CHECK(json::parse(run(explicit_seed).out)["config"]["sampler"]["seed"] == 9);
    }
    {
        SeedEnv env("seven");
        CHECK(run(args).code == 1);
    }
    CHECK(json::parse(run(args).out)["config"]["sampler"]["seed"] == 42);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"certify", "--op", "nope", "--class", "nonexpansive"}).code == 1);
    CHECK(run({"certify", "--op", "cubic", "--class", "sparkly"}).code == 1);
    CHECK(run({"certify", "--op", "cubic", "--class", "uniformly-monotone", "--t", "2,1"}).code == 1);
    CHECK(run({"certify", "--op", "cubic", "--class", "nonexpansive", "--box", "5,1"}).code == 1);
    CHECK(run({"split", "--algo", "fb", "--opA", "identity", "--opB", "cubic", "--gamma", "2.5"}).code == 1);
    CHECK(run({"split", "--algo", "dr", "--opA", "cubic", "--opB", "identity", "--x0", "1,2"}).code == 1);
    CHECK(run({"split", "--algo", "warp", "--opA", "cubic", "--opB", "identity"}).code == 1);
    CHECK(run({"witness", "--example", "nothing"}).code == 1);
    const auto r = run({"certify", "--op", "cubic"});
    CHECK(r.code == 1);
    CHECK(r.err.find("usage error") != std::string::npos);
}

TEST_CASE("certify exit codes follow the verdict") {
    CHECK(run({"certify", "--op", "clamp-sin-map", "--class", "nonexpansive", "--samples", "2000"}).code == 0);
    CHECK(run({"certify", "--op", "cubic", "--class", "firmly-nonexpansive", "--samples", "2000"}).code == 0);
    CHECK(run({"certify", "--op", "cubic", "--class", "uniformly-monotone", "--samples", "5000"}).code == 0);
    CHECK(run({"certify", "--op", "staircase", "--class", "super-strongly-nonexpansive", "--n-max", "40"}).code == 2);
    CHECK(run({"certify", "--op", "cone-subdiff", "--class", "growth-condition", "--samples", "50"}).code == 2);
    CHECK(run({"certify", "--op", "cone-subdiff", "--class", "coercive", "--samples", "50"}).code == 0);
    CHECK(run({"certify", "--op", "cubic", "--inverse", "--class", "uniformly-monotone", "--levels", "3"}).code == 2);
}

TEST_CASE("split runs and convergence expectations") {
    CHECK(run({"split", "--algo", "dr", "--opA", "cubic", "--opB", "identity", "--x0", "10", "--expect-converge"})
              .code == 0);
    CHECK(run({"split", "--algo", "fb", "--opA", "identity", "--opB", "cubic", "--gamma", "0.5", "--x0", "5",
               "--expect-converge"})
              .code == 0);
    const auto it = run({"split", "--algo", "iterate", "--op", "clamp-sin-map", "--x0", "10", "--max-iter", "3",
                         "--ref", "0", "--out", "-"});
    CHECK(it.code == 0);
    const auto rows = csv_rows(it.out);
    CHECK(rows[0] == std::vector<std::string>{"iter", "x_0", "residual", "dist_ref"});
    CHECK(rows[2][1] == "1");

    const auto sh = run({"split", "--algo", "pr", "--opA", "normal-cone-zero", "--opB", "shift", "--dim", "32", "--x0",
                         "e1", "--max-iter", "40", "--out", "-"});
    CHECK(sh.code == 0);
    const auto srows = csv_rows(sh.out);
    CHECK(srows[0].back() == "probe_8");
    CHECK(srows[1][srows[0].size() - 8] == "1");
    CHECK(srows[2][srows[0].size() - 8] == "0");
}

TEST_CASE("gallery listing") {
    const auto r = run({"gallery", "--out", "-"});
    CHECK(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["result"].size() == gallery::gallery_ids().size());
    const auto t = run({"gallery"});
    for (const auto& id : gallery::gallery_ids()) CHECK(t.out.find(id) != std::string::npos);
}

TEST_CASE("selfdual command") {
    const auto r = run({"selfdual", "--op", "cubic", "--samples", "20000", "--out", "-"});
    CHECK(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["result"]["verdicts"] == json::array({"consistent", "refuted", "refuted"}));
}

TEST_CASE("installed binary reports exit statuses") {
    const char* bin = std::getenv("MOSK_CLI");
    if (!bin) SKIP("MOSK_CLI not set");
    const std::string b = bin;
    auto status = [](const std::string& cmd) {
        const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status(b + " gallery") == 0);
    CHECK(status(b + " certify --op rotator --class uniformly-monotone --samples 1000") == 2);
    CHECK(status(b + " certify --op rotator") == 1);
    CHECK(status(b + " --help") == 0);
}
