#include "gorga/cli.hpp"

#include "gorga/config.hpp"
#include "gorga/error.hpp"
#include "gorga/fractal.hpp"
#include "gorga/image_io.hpp"
#include "gorga/render.hpp"
#include "gorga/turtle.hpp"
#include "gorga/validation.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

namespace gorga {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
    std::string out_dir = "out";
    std::string config_path;
    std::optional<std::string> seed;
    bool quiet = false;
};

struct GenFlags {
    std::optional<std::string> rule;
    std::optional<std::string> rule_file;
    std::optional<std::string> shape;
    std::optional<double> step;
    std::optional<double> angle;
    std::optional<double> clearance;
    std::optional<double> stroke_width;
    std::optional<int> iterations;
    std::optional<int> stall_budget;
    std::optional<double> spiral_decay;
    std::optional<std::vector<std::string>> palette;
    std::optional<double> ppu;
    std::optional<std::string> background;
    std::string name;
};

struct DimFlags {
    std::string image;
    std::string reference;
    int depth = 8;
    int size = 1024;
    int threshold = 128;
    int min_box = 2;
    int max_box = 0;
    int drop_largest = 2;
    bool offsets = false;
    bool json = false;
};

struct ValidateFlags {
    bool quick = false;
    std::string fault = "none";
    int seeds = 10;
};

// Seeds are full 64-bit values; negative input wraps like the config file.
std::uint64_t parse_seed(const std::string& text, const char* source) {
    std::int64_t negative = 0;
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text[0] == '-') {
        const auto [p, ec] = std::from_chars(first, last, negative);
        if (ec == std::errc() && p == last) return static_cast<std::uint64_t>(negative);
    } else {
        const auto [p, ec] = std::from_chars(first, last, value);
        if (ec == std::errc() && p == last) return value;
    }
    throw ConfigError(ErrorCode::SchemaViolation, "seed",
                      fmt::format("{} '{}' is not a 64-bit integer", source, text));
}

json read_config_document(const std::string& path) {
    if (path.empty()) return json::object();
    const auto bytes = [&] {
        try {
            return read_file(path);
        } catch (const Error&) {
            throw Error(ErrorCode::IoFailure, fmt::format("cannot read config {}", path));
        }
    }();
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(ErrorCode::SchemaViolation, "$", e.what());
    }
}

// Flags override the config file, which overrides the built-in defaults. The
// seed falls back to GORGA_SEED when neither flag nor file sets it.
json merge_run_document(const Globals& g, const GenFlags& f) {
    json doc = read_config_document(g.config_path);
    if (!doc.is_object()) throw ConfigError(ErrorCode::SchemaViolation, "$", "expected an object");
    if (f.rule) doc["rule"] = *f.rule;
    if (f.rule_file) {
        const auto bytes = read_file(*f.rule_file);
        doc["rule"] = {{"dsl", std::string(bytes.begin(), bytes.end())}};
    }
    if (f.shape) {
        if (!doc.contains("shape") || !doc["shape"].is_object() ||
            doc["shape"].value("kind", "") != *f.shape) {
            doc["shape"] = {{"kind", *f.shape}};
        }
    }
    if (f.step) doc["step"] = *f.step;
    if (f.angle) doc["angle_deg"] = *f.angle;
    if (f.clearance) doc["clearance"] = *f.clearance;
    if (f.stroke_width) doc["stroke_width"] = *f.stroke_width;
    if (f.iterations) doc["iterations"] = *f.iterations;
    if (f.stall_budget) doc["stall_budget"] = *f.stall_budget;
    if (f.spiral_decay) doc["spiral_decay"] = *f.spiral_decay;
    if (f.palette) doc["palette"] = *f.palette;
    if (g.seed) {
        doc["seed"] = parse_seed(*g.seed, "--seed");
    } else if (!doc.contains("seed")) {
        if (const char* env = std::getenv("GORGA_SEED"); env && *env) {
            doc["seed"] = parse_seed(env, "GORGA_SEED");
        }
    }
    return doc;
}

bool plain_file_name(const std::string& name) {
    return !name.empty() && name != "." && name != ".." &&
           name.find_first_of("/\\") == std::string::npos;
}

int cmd_gen(const Globals& g, const GenFlags& f, std::ostream& out) {
    const json doc = merge_run_document(g, f);
    const RunConfig config = config_from_json(doc);

    double ppu = 1.0;
    std::string background = Palette{}.background;
    if (doc.contains("render") && doc["render"].is_object()) {
        const auto& r = doc["render"];
        if (r.contains("pixels_per_unit") && r["pixels_per_unit"].is_number()) {
            ppu = r["pixels_per_unit"].get<double>();
        }
        if (r.contains("background") && r["background"].is_string()) {
            background = r["background"].get<std::string>();
        }
    }
    if (f.ppu) ppu = *f.ppu;
    if (f.background) background = *f.background;
    if (!(ppu > 0) || ppu > 16) {
        throw ConfigError(ErrorCode::SchemaViolation, "render.pixels_per_unit", "must be in (0, 16]");
    }
    const Palette palette = Palette::from(config.palette, background);

    const fs::path dir(g.out_dir);
    const std::string name = f.name.empty() ? fs::path(g.out_dir).lexically_normal().filename().string()
                                            : f.name;
    if (!plain_file_name(name)) {
        throw ConfigError(ErrorCode::SchemaViolation, "name",
                          fmt::format("'{}' is not a plain file name", name));
    }

    const Drawing drawing = interpret(config);
    const std::string svg = render_svg(drawing, palette);
    const auto png = render_raster(drawing, ppu);

    json sidecar = to_json(config);
    sidecar["render"] = {{"pixels_per_unit", ppu}, {"background", background}};
    json rounds = json::array();
    for (const auto& r : drawing.rounds) rounds.push_back({r.round, r.segments});
    sidecar["run"] = {{"rng", drawing.rng},
                      {"termination", std::string(to_string(drawing.termination))},
                      {"segments", drawing.segments.size()},
                      {"rounds", rounds}};
    std::optional<BoxCountEstimate> estimate;
    if (!drawing.segments.empty()) {
        try {
            estimate = pattern_estimate(drawing);
            sidecar["run"]["dimension"] = estimate->dimension;
            sidecar["run"]["stderr"] = estimate->stderr_slope;
        } catch (const Error&) {
            // Too small a canvas for four box sizes; the drawing is still valid.
        }
    }

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    write_file_atomic(dir / (name + ".svg"), svg);
    write_file_atomic(dir / (name + ".png"), png);
    write_file_atomic(dir / (name + ".json"), sidecar.dump(2) + "\n");

    if (!g.quiet) {
        fmt::print(out, "{}: {} segments, {} rounds, {}", (dir / name).string(),
                   drawing.segments.size(), drawing.rounds.size(), to_string(drawing.termination));
        if (estimate) fmt::print(out, ", {}", format_estimate(*estimate));
        fmt::print(out, "\n");
    }
    return kExitOk;
}

int cmd_dim(const Globals& g, const DimFlags& f, std::ostream& out) {
    AnalysisOptions options;
    options.min_box = f.min_box;
    options.max_box = f.max_box;
    options.offsets = f.offsets;
    options.drop_largest = f.drop_largest;

    BoxCountEstimate estimate;
    if (!f.reference.empty()) {
        const auto raster = reference_fractal(reference_kind_from_name(f.reference), f.depth, f.size);
        estimate = analyze_raster(raster, options);
    } else {
        estimate = analyze_image(f.image, f.threshold, options);
    }
    if (f.json) {
        fmt::print(out, "{}\n", to_json(estimate).dump(2));
        return kExitOk;
    }
    fmt::print(out, "{}\n", format_estimate(estimate));
    if (!g.quiet) fmt::print(out, "{}", loglog_table(estimate));
    return kExitOk;
}

int cmd_validate(const Globals& g, const ValidateFlags& f, std::ostream& out) {
    const auto checks = validation_suite(f.quick, fault_from_name(f.fault), f.seeds);
    std::size_t failed = 0;
    for (const auto& c : checks) {
        if (!c.passed) ++failed;
        if (!c.passed || !g.quiet) {
            fmt::print(out, "{} {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
        }
    }
    if (failed > 0) {
        fmt::print(out, "{} of {} checks failed:", failed, checks.size());
        for (const auto& c : checks) {
            if (!c.passed) fmt::print(out, " {}", c.name);
        }
        fmt::print(out, "\n");
        return kExitValidation;
    }
    if (!g.quiet) fmt::print(out, "all {} checks passed\n", checks.size());
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoFailure: return kExitIo;
        default: return kExitInvalid;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Guarded L-system patterns and box-counting dimension", "gorga"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_option("--config", g.config_path, "Run configuration (JSON)");
    app.add_option("--seed", g.seed, "64-bit seed (default: config, then $GORGA_SEED)");
    app.add_flag("--quiet,-q", g.quiet, "Print only results");

    GenFlags gen;
    auto* gen_cmd = app.add_subcommand("gen", "Grow a pattern and write NAME.svg, NAME.png and NAME.json");
    gen_cmd->add_option("--rule", gen.rule, "random, angle or spiral");
    gen_cmd->add_option("--rule-file", gen.rule_file, "Grammar in the rule language");
    gen_cmd->add_option("--shape", gen.shape, "rectangle, ellipse or triangle");
    gen_cmd->add_option("--step", gen.step, "Step length d");
    gen_cmd->add_option("--angle", gen.angle, "Turn angle in degrees");
    gen_cmd->add_option("--clearance", gen.clearance, "Minimum stroke spacing");
    gen_cmd->add_option("--stroke-width", gen.stroke_width, "Stroke width");
    gen_cmd->add_option("--iterations", gen.iterations, "Rewriting rounds");
    gen_cmd->add_option("--stall-budget", gen.stall_budget, "Consecutive rejections before stopping");
    gen_cmd->add_option("--spiral-decay", gen.spiral_decay, "Step factor per spiral turn");
    gen_cmd->add_option("--palette", gen.palette, "Colors from black, red, white")->delimiter(',');
    gen_cmd->add_option("--ppu", gen.ppu, "PNG pixels per canvas unit (default 1)");
    gen_cmd->add_option("--background", gen.background, "SVG background as #rrggbb");
    gen_cmd->add_option("--name", gen.name, "Output base name (default: last part of --out)");
    gen_cmd->get_option("--rule")->excludes(gen_cmd->get_option("--rule-file"));

    DimFlags dim;
    auto* dim_cmd = app.add_subcommand("dim", "Box-counting dimension of a PNG or PGM image");
    auto* image_opt = dim_cmd->add_option("image", dim.image, "Image file")->check(CLI::ExistingFile);
    auto* ref_opt = dim_cmd->add_option("--reference", dim.reference,
                                        "Analyze a built-in fractal: sierpinski, dragon, koch, line, filled_square");
    image_opt->excludes(ref_opt);
    dim_cmd->add_option("--depth", dim.depth, "Reference depth")->capture_default_str();
    dim_cmd->add_option("--size", dim.size, "Reference raster size")->capture_default_str();
    dim_cmd->add_option("--threshold", dim.threshold, "Pixels darker than this are set")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
    dim_cmd->add_option("--min-box", dim.min_box, "Smallest box size")->capture_default_str();
    dim_cmd->add_option("--max-box", dim.max_box, "Largest box size (0: quarter of the image)")
        ->capture_default_str();
    dim_cmd->add_option("--drop-largest", dim.drop_largest, "Largest scales left out of the fit")
        ->capture_default_str();
    dim_cmd->add_flag("--offsets", dim.offsets, "Average counts over four shifted grids");
    dim_cmd->add_flag("--json", dim.json, "Print the estimate as JSON");

    ValidateFlags val;
    auto* val_cmd = app.add_subcommand("validate", "Run the estimator and pattern self-checks");
    val_cmd->add_flag("--quick", val.quick, "Only the line and filled-square oracles");
    val_cmd->add_option("--fault", val.fault, "Inject a fault (negate-slope) to test the suite")
        ->group("");
    val_cmd->add_option("--seeds", val.seeds, "Seeds per rule for the band check")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*gen_cmd) return cmd_gen(g, gen, out);
        if (*dim_cmd) {
            if (dim.image.empty() && dim.reference.empty()) {
                fmt::print(err, "dim: give an image or --reference\n");
                return kExitInvalid;
            }
            return cmd_dim(g, dim, out);
        }
        return cmd_validate(g, val, out);
    } catch (const ConfigError& e) {
        fmt::print(err, "invalid config ({}): {}\n", e.field(), e.what());
        return exit_code_for(e.code());
    } catch (const Error& e) {
        fmt::print(err, "{}: {}\n", to_string(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitIo;
    }
}

}  // namespace gorga
