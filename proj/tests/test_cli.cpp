#include "gorga/cli.hpp"
#include "gorga/image_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <fmt/format.h>
#include <json.hpp>

using namespace gorga;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "gorga");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gorga_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    const auto bytes = read_file(p);
    return {bytes.begin(), bytes.end()};
}

nlohmann::json sidecar(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

// Keeps GORGA_SEED from leaking between cases.
struct SeedEnv {
    explicit SeedEnv(const char* value) {
        if (value) {
            ::setenv("GORGA_SEED", value, 1);
        } else {
            ::unsetenv("GORGA_SEED");
        }
    }
    ~SeedEnv() { ::unsetenv("GORGA_SEED"); }
};

}  // namespace

TEST_CASE("gen writes the three outputs and its sidecar reproduces them") {
    SeedEnv env(nullptr);
    const auto dir = fresh_dir("gen");
    const auto first = dir / "first";
    auto r = run({"--out", first.string(), "--seed", "11", "-q", "gen", "--rule", "random",
                  "--iterations", "3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    for (const char* ext : {".svg", ".png", ".json"}) CHECK(fs::exists(first / (std::string("first") + ext)));

    const auto doc = sidecar(first / "first.json");
    CHECK(doc["seed"] == 11);
    CHECK(doc["rule"] == "random");
    CHECK(doc["run"]["rng"] == "mt19937_64");
    CHECK(doc["run"]["segments"].get<int>() > 0);

    const auto second = dir / "second";
    r = run({"--out", second.string(), "--config", (first / "first.json").string(), "gen", "--name", "first"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("segments") != std::string::npos);
    CHECK(slurp(first / "first.svg") == slurp(second / "first.svg"));
    CHECK(slurp(first / "first.png") == slurp(second / "first.png"));
    CHECK(slurp(first / "first.json") == slurp(second / "first.json"));
    fs::remove_all(dir);
}

TEST_CASE("gen error exits") {
    SeedEnv env(nullptr);
    const auto dir = fresh_dir("errors");
    const auto bad = dir / "bad.json";
    write_file_atomic(bad, std::string(R"({"step": -3})"));
    auto r = run({"--out", (dir / "x").string(), "--config", bad.string(), "gen"});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("step") != std::string::npos);

    r = run({"--out", (dir / "x").string(), "gen", "--rule", "swirl"});
    CHECK(r.code == kExitInvalid);

    r = run({"--out", (dir / "x").string(), "gen", "--name", "a/b", "--iterations", "1"});
    CHECK(r.code == kExitInvalid);

    r = run({"--out", "/dev/null/gorga", "gen", "--iterations", "1"});
    CHECK(r.code == kExitIo);

    r = run({"gen", "--rule", "angle", "--rule-file", bad.string()});
    CHECK(r.code == kExitInvalid);
    fs::remove_all(dir);
}

TEST_CASE("seed precedence: flag, then config file, then GORGA_SEED") {
    const auto dir = fresh_dir("seed");
    const auto cfg = dir / "cfg.json";
    write_file_atomic(cfg, std::string(R"({"seed": 5, "iterations": 1})"));
    const auto seed_of = [&](const std::string& name) {
        return sidecar(dir / name / (name + ".json"))["seed"].get<std::uint64_t>();
    };

    SeedEnv env("77");
    REQUIRE(run({"--out", (dir / "env").string(), "gen", "--iterations", "1"}).code == kExitOk);
    CHECK(seed_of("env") == 77);
    REQUIRE(run({"--out", (dir / "file").string(), "--config", cfg.string(), "gen"}).code == kExitOk);
    CHECK(seed_of("file") == 5);
    REQUIRE(run({"--out", (dir / "flag").string(), "--config", cfg.string(), "--seed", "9", "gen"}).code ==
            kExitOk);
    CHECK(seed_of("flag") == 9);
    CHECK(sidecar(dir / "flag" / "flag.json")["iterations"] == 1);

    SeedEnv junk("seven");
    CHECK(run({"--out", (dir / "junk").string(), "gen", "--iterations", "1"}).code == kExitInvalid);
    fs::remove_all(dir);
}

TEST_CASE("45 degree random runs and the spiral triangle stay in the expected band") {
    SeedEnv env(nullptr);
    const auto dir = fresh_dir("band");
    for (int seed = 1; seed <= 10; ++seed) {
        const auto out = dir / fmt::format("r{}", seed);
        REQUIRE(run({"--out", out.string(), "--seed", std::to_string(seed), "gen", "--rule", "random",
                     "--angle", "45"})
                    .code == kExitOk);
        const double d = sidecar(out / (out.filename().string() + ".json"))["run"]["dimension"];
        INFO("seed " << seed << " D " << d);
        CHECK(d >= 1.4);
        CHECK(d <= 1.7);
    }
    const auto out = dir / "spiral";
    REQUIRE(run({"--out", out.string(), "--seed", "7", "gen", "--rule", "spiral", "--shape", "triangle"})
                .code == kExitOk);
    const double d = sidecar(out / "spiral.json")["run"]["dimension"];
    CHECK(d >= 1.4);
    CHECK(d <= 1.7);
    fs::remove_all(dir);
}

TEST_CASE("dim measures images and reference sets") {
    const auto dir = fresh_dir("dim");
    GrayImage img{256, 256, std::vector<std::uint8_t>(256 * 256, 0)};
    write_file_atomic(dir / "square.png", encode_png(img));
    auto r = run({"dim", (dir / "square.png").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("D = 2.0000", 0) == 0);

    r = run({"dim", "--reference", "sierpinski", "--depth", "8", "--size", "1024", "--json"});
    CHECK(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["dimension"].get<double>() == doctest::Approx(1.58496).epsilon(1e-4));

    img.pixels.assign(img.pixels.size(), 255);
    write_file_atomic(dir / "blank.png", encode_png(img));
    CHECK(run({"dim", (dir / "blank.png").string()}).code == kExitInvalid);
    CHECK(run({"dim"}).code == kExitInvalid);
    CHECK(run({"dim", "--reference", "cantor"}).code == kExitInvalid);
    fs::remove_all(dir);
}

TEST_CASE("validate exits non-zero when the estimator is broken") {
    auto r = run({"validate", "--quick"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("PASS") != std::string::npos);
    r = run({"validate", "--quick", "--fault", "negate-slope"});
    CHECK(r.code == kExitValidation);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({"frobnicate"}).code == kExitInvalid);
    CHECK(run({}).code == kExitInvalid);
    CHECK(run({"--help"}).code == kExitOk);
}
