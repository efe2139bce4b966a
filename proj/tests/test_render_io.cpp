#include "gorga/config.hpp"
#include "gorga/error.hpp"
#include "gorga/fractal.hpp"
#include "gorga/image_io.hpp"
#include "gorga/render.hpp"
#include "gorga/turtle.hpp"

#include <filesystem>
#include <random>
#include <regex>

#include <doctest.h>

using namespace gorga;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gorga_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

GrayImage noise_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GrayImage img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
    return img;
}

Drawing small_drawing(ShapeKind kind = ShapeKind::Rectangle) {
    RunConfig cfg;
    cfg.shape = default_shape(kind);
    cfg.iterations = 2;
    return interpret(cfg);
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("PNG round trip") {
    const auto img = noise_image(37, 23, 1);
    const auto bytes = encode_png(img);
    REQUIRE(bytes.size() > 8);
    CHECK(bytes[1] == 'P');
    CHECK(decode_png(bytes) == img);
}

TEST_CASE("PGM round trip, 8 and 16 bit") {
    const auto img = noise_image(19, 11, 2);
    CHECK(decode_pgm(encode_pgm(img)) == img);

    std::string wide = "P5\n# sixteen bit\n2 1\n65535\n";
    wide += std::string{'\xff', '\xff', '\x00', '\x00'};
    const auto decoded = decode_pgm(std::vector<std::uint8_t>(wide.begin(), wide.end()));
    CHECK(decoded.width == 2);
    CHECK(decoded.pixels == std::vector<std::uint8_t>{255, 0});
}

TEST_CASE("malformed images are unreadable") {
    const std::vector<std::uint8_t> junk{'P', '5', '\n', '9'};
    CHECK_THROWS_AS(decode_pgm(junk), Error);
    CHECK_THROWS_AS(decode_png(junk), Error);
}

TEST_CASE("atomic writes leave no temporary behind") {
    const auto dir = fresh_dir("atomic");
    write_file_atomic(dir / "a.txt", std::string("first"));
    write_file_atomic(dir / "a.txt", std::string("second"));
    const auto bytes = read_file(dir / "a.txt");
    CHECK(std::string(bytes.begin(), bytes.end()) == "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    try {
        write_file_atomic(dir / "missing" / "a.txt", std::string("x"));
        FAIL("expected IoFailure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoFailure);
    }
    fs::remove_all(dir);
}

TEST_CASE("an empty drawing renders the mask outline only") {
    Drawing d;
    d.mask = default_shape(ShapeKind::Ellipse);
    const auto svg = render_svg(d, Palette{});
    CHECK(svg.find("<ellipse") != std::string::npos);
    CHECK(count_of(svg, "<path") == 0);
    const auto img = raster_image(d, 1.0);
    CHECK(img.width == 800);
    CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 255; }));
}

TEST_CASE("SVG output is deterministic and uses three decimals") {
    const auto d = small_drawing();
    const auto svg = render_svg(d, Palette{});
    CHECK(svg == render_svg(small_drawing(), Palette{}));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("viewBox=\"0.000 0.000 800.000 800.000\"") != std::string::npos);

    const std::regex path_data("d=\"([^\"]*)\"");
    const std::regex number("-?[0-9]+(\\.[0-9]+)?");
    std::size_t paths = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), path_data); it != std::sregex_iterator();
         ++it) {
        ++paths;
        const std::string data = (*it)[1];
        for (auto n = std::sregex_iterator(data.begin(), data.end(), number); n != std::sregex_iterator();
             ++n) {
            const std::string token = n->str();
            const auto dot = token.find('.');
            REQUIRE(dot != std::string::npos);
            CHECK(token.size() - dot - 1 == 3);
        }
    }
    CHECK(paths > 0);
    CHECK(paths <= d.segments.size());
}

TEST_CASE("stroke colors cycle with branch depth") {
    Drawing d;
    d.mask = default_shape(ShapeKind::Rectangle);
    for (int depth = 0; depth < 4; ++depth) {
        Segment s;
        s.a = {100.0 + 50 * depth, 100};
        s.b = {100.0 + 50 * depth, 110};
        s.branch_depth = depth;
        s.stroke_width = 2;
        d.segments.push_back(s);
    }
    const auto palette = Palette::from({Color::Black, Color::Red});
    CHECK(palette.color_for_depth(3) == Color::Red);
    const auto svg = render_svg(d, palette);
    CHECK(count_of(svg, "stroke=\"#000000\"") == 2);
    CHECK(count_of(svg, std::string("stroke=\"") + std::string(hex(Color::Red)) + "\"") == 2);
    CHECK_THROWS_AS(Palette::from({}), Error);
    CHECK_THROWS_AS(Palette::from({Color::Black}, "tan"), Error);
}

TEST_CASE("chained segments of one color share a path") {
    Drawing d;
    d.mask = default_shape(ShapeKind::Rectangle);
    Segment s;
    s.stroke_width = 2;
    s.a = {10, 10};
    s.b = {20, 10};
    d.segments.push_back(s);
    s.a = {20, 10};
    s.b = {20, 20};
    d.segments.push_back(s);
    const auto svg = render_svg(d, Palette{});
    CHECK(count_of(svg, "<path") == 1);
    CHECK(svg.find("M10.000 10.000L20.000 10.000L20.000 20.000") != std::string::npos);
}

TEST_CASE("the PNG is the rasterized drawing") {
    const auto d = small_drawing();
    const auto png = render_raster(d, 1.0);
    CHECK(png == render_raster(small_drawing(), 1.0));
    const auto decoded = decode_png(png);
    const auto raster = rasterize(d, 1.0);
    REQUIRE(decoded.width == raster.width());
    REQUIRE(decoded.height == raster.height());
    for (int y = 0; y < raster.height(); ++y) {
        for (int x = 0; x < raster.width(); ++x) {
            REQUIRE((decoded.pixels[static_cast<std::size_t>(y) * decoded.width + x] < 128) ==
                    raster.at(x, y));
        }
    }
}

TEST_CASE("triangle drawings leave the corners outside the mask blank") {
    const auto d = small_drawing(ShapeKind::Triangle);
    const auto img = raster_image(d, 1.0);
    const auto pixel = [&](int x, int y) { return img.pixels[static_cast<std::size_t>(y) * img.width + x]; };
    for (int i = 0; i < 40; ++i) {
        CHECK(pixel(i, i) == 255);
        CHECK(pixel(img.width - 1 - i, i) == 255);
    }
}

TEST_CASE("config JSON") {
    SUBCASE("minimal ellipse document") {
        const auto cfg = config_from_json(nlohmann::json::parse(
            R"({"rule": "spiral", "shape": {"kind": "ellipse"}, "seed": 7})"));
        CHECK(cfg.shape.kind() == ShapeKind::Ellipse);
        CHECK(cfg.rule.builtin == BuiltinRule::Spiral);
        CHECK(cfg.seed == 7);
        CHECK(cfg.step == 6.0);
        CHECK(config_from_json(to_json(cfg)) == cfg);
    }
    SUBCASE("unknown rule") {
        try {
            config_from_json(nlohmann::json::parse(R"({"rule": "swirl"})"));
            FAIL("expected a config error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::UnknownRule);
        }
    }
    SUBCASE("bad values name their field") {
        try {
            config_from_json(nlohmann::json::parse(R"({"step": -1})"));
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(e.code() == ErrorCode::SchemaViolation);
            CHECK(e.field() == "step");
        }
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"palette": ["green"]})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"iterations": "eight"})")), ConfigError);
    }
    SUBCASE("defaults are a fixed point") {
        const RunConfig defaults;
        CHECK(config_from_json(nlohmann::json::object()) == defaults);
        CHECK(config_from_json(to_json(defaults)) == defaults);
        CHECK(to_json(config_from_json(to_json(defaults))) == to_json(defaults));
    }
    SUBCASE("custom grammars survive a save and load") {
        RunConfig cfg;
        cfg.rule.builtin.reset();
        cfg.rule.dsl = "axiom: F\nrule: F -> {F}[+{F}]-{F}";
        cfg.shape = ShapeMask::triangle({0, 600}, {300, 0}, {600, 600});
        cfg.palette = {Color::White};
        cfg.seed = 99;
        const auto dir = fresh_dir("config");
        save_config(cfg, dir / "run.json");
        CHECK(load_config(dir / "run.json") == cfg);
        fs::remove_all(dir);
    }
}
