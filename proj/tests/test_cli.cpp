#include "lambflux/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const std::string configs = LAMBFLUX_CONFIG_SOURCE_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = lambflux::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

} // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(invoke({}).code == lambflux::cli::kUsage);
    CHECK(invoke({"frobnicate"}).code == lambflux::cli::kUsage);
    CHECK(invoke({"current", "--bogus"}).code == lambflux::cli::kUsage);
    const auto r = invoke({"current", "--dt", "-3"});
    CHECK(r.code == lambflux::cli::kUsage);
    CHECK(has(r.err, "error: domain.delta_t"));
    CHECK(invoke({"--help"}).code == lambflux::cli::kOk);
}

TEST_CASE("config errors exit 2") {
    const auto tmp = std::filesystem::temp_directory_path() / "lambflux_bad.cfg";
    {
        std::ofstream f(tmp);
        f << "epsilon1 = 3\nmystery = 4\n";
    }
    const auto r = invoke({"spectrum", "-c", tmp.string()});
    CHECK(r.code == lambflux::cli::kUsage);
    CHECK(has(r.err, "config.unknown_key"));
    CHECK(invoke({"spectrum", "-c", "/no/such.cfg"}).code == lambflux::cli::kUsage);
    std::filesystem::remove(tmp);
}

TEST_CASE("validate passes on the shipped configurations") {
    for (const char* name : {"fig2.cfg", "fig3_blue.cfg", "fig4.cfg"}) {
        const auto r = invoke({"validate", "-c", configs + "/" + name, "--no-timestamp"});
        CHECK(r.code == lambflux::cli::kOk);
        CHECK(has(r.out, "KMS PASS"));
        CHECK(has(r.out, "steady-state oracle PASS"));
        CHECK(has(r.out, "summary = PASS"));
    }
}

TEST_CASE("single-point commands") {
    const auto r = invoke({"current", "-c", configs + "/fig3_blue.cfg", "--dt", "50"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("# lambflux current ", 0) == 0);
    CHECK(has(r.out, "J0 = "));
    for (const char* cmd : {"spectrum", "rates", "lambshift", "steady", "crossing"}) {
        CHECK(invoke({cmd, "-c", configs + "/fig2.cfg"}).code == 0);
    }
}

TEST_CASE("output is reproducible without the timestamp") {
    const std::vector<std::string> args{"lambshift", "-c", configs + "/fig3_red.cfg", "--no-timestamp"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(has(a.out, "# lambflux"));
}

TEST_CASE("sweep to stdout is plain CSV") {
    const auto r = invoke({"sweep", "-c", configs + "/fig2.cfg", "-o", "-"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("schema=lambflux.v1\n", 0) == 0);
}

TEST_CASE("config directory fallback") {
    ::setenv("LAMBFLUX_CONFIG_DIR", configs.c_str(), 1);
    const auto r = invoke({"spectrum", "-c", "fig2.cfg", "--no-timestamp"});
    ::unsetenv("LAMBFLUX_CONFIG_DIR");
    CHECK(r.code == 0);
    CHECK(has(r.out, "omega1 = "));
}
