#include "gorga/config.hpp"

#include "gorga/error.hpp"
#include "gorga/image_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gorga {

using nlohmann::json;

std::string_view to_string(Color c) {
    switch (c) {
        case Color::Black: return "black";
        case Color::Red: return "red";
        case Color::White: return "white";
    }
    return "black";
}

std::string_view hex(Color c) {
    switch (c) {
        case Color::Black: return "#000000";
        case Color::Red: return "#b22222";
        case Color::White: return "#ffffff";
    }
    return "#000000";
}

Color color_from_name(std::string_view name) {
    if (name == "black") return Color::Black;
    if (name == "red") return Color::Red;
    if (name == "white") return Color::White;
    throw ConfigError(ErrorCode::SchemaViolation, "palette",
                      fmt::format("'{}' is not one of black, red, white", name));
}

Grammar RuleSpec::grammar() const {
    if (builtin) return builtin_rule(*builtin);
    return parse_grammar(dsl);
}

ShapeMask default_shape(ShapeKind kind) {
    const Bounds canvas{0, 0, 800, 800};
    switch (kind) {
        case ShapeKind::Rectangle: return ShapeMask::rectangle(canvas);
        case ShapeKind::Ellipse: return ShapeMask::ellipse(canvas);
        case ShapeKind::Triangle: return ShapeMask::triangle({0, 800}, {800, 800}, {400, 0});
    }
    return ShapeMask::rectangle(canvas);
}

void validate(const RunConfig& c) {
    const auto positive = [](double v, const char* field) {
        if (!(v > 0) || !std::isfinite(v)) {
            throw ConfigError(ErrorCode::SchemaViolation, field,
                              fmt::format("must be positive, got {}", v));
        }
    };
    positive(c.step, "step");
    positive(c.clearance, "clearance");
    positive(c.stroke_width, "stroke_width");
    positive(c.spiral_decay, "spiral_decay");
    positive(c.min_step, "min_step");
    if (!(c.angle_deg > 0 && c.angle_deg < 180)) {
        throw ConfigError(ErrorCode::SchemaViolation, "angle_deg",
                          fmt::format("must lie in (0, 180), got {}", c.angle_deg));
    }
    if (c.spiral_decay > 1) {
        throw ConfigError(ErrorCode::SchemaViolation, "spiral_decay",
                          fmt::format("must not exceed 1, got {}", c.spiral_decay));
    }
    if (c.iterations < 0) {
        throw ConfigError(ErrorCode::SchemaViolation, "iterations", "must be non-negative");
    }
    if (c.stall_budget <= 0) {
        throw ConfigError(ErrorCode::SchemaViolation, "stall_budget", "must be positive");
    }
    if (c.candidate_count <= 0) {
        throw ConfigError(ErrorCode::SchemaViolation, "candidate_count", "must be positive");
    }
    if (c.palette.empty()) {
        throw ConfigError(ErrorCode::SchemaViolation, "palette", "must name at least one color");
    }
    if (!c.rule.builtin && c.rule.dsl.empty()) {
        throw ConfigError(ErrorCode::SchemaViolation, "rule.dsl", "empty grammar text");
    }
}

// ---------------------------------------------------------------------------

namespace {

json shape_to_json(const ShapeMask& m) {
    json params;
    if (m.kind() == ShapeKind::Triangle) {
        json verts = json::array();
        for (const auto& v : m.vertices()) verts.push_back({v.x, v.y});
        params["vertices"] = verts;
    } else {
        const auto& b = m.bounds();
        params = {{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
    }
    return {{"kind", std::string(to_string(m.kind()))}, {"params", params}};
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError(ErrorCode::SchemaViolation, path + "." + key, "missing");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(ErrorCode::SchemaViolation, path + "." + key, "must be a number");
    }
    return v.get<double>();
}

Vec2 point_at(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(ErrorCode::SchemaViolation, path, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

ShapeMask shape_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
        throw ConfigError(ErrorCode::SchemaViolation, "shape.kind", "missing shape kind");
    }
    ShapeKind kind;
    try {
        kind = shape_kind_from_name(doc["kind"].get<std::string>());
    } catch (const Error& e) {
        throw ConfigError(ErrorCode::SchemaViolation, "shape.kind", e.what());
    }
    if (!doc.contains("params") || doc["params"].is_null()) return default_shape(kind);
    const json& p = doc["params"];
    if (!p.is_object()) {
        throw ConfigError(ErrorCode::SchemaViolation, "shape.params", "must be an object");
    }
    try {
        if (kind == ShapeKind::Triangle) {
            if (!p.contains("vertices") || !p["vertices"].is_array() || p["vertices"].size() != 3) {
                throw ConfigError(ErrorCode::SchemaViolation, "shape.params.vertices",
                                  "expected three [x, y] points");
            }
            const auto& v = p["vertices"];
            return ShapeMask::triangle(point_at(v[0], "shape.params.vertices[0]"),
                                       point_at(v[1], "shape.params.vertices[1]"),
                                       point_at(v[2], "shape.params.vertices[2]"));
        }
        const Bounds b{number_at(p, "x0", "shape.params"), number_at(p, "y0", "shape.params"),
                       number_at(p, "x1", "shape.params"), number_at(p, "y1", "shape.params")};
        return kind == ShapeKind::Ellipse ? ShapeMask::ellipse(b) : ShapeMask::rectangle(b);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(ErrorCode::SchemaViolation, "shape.params", e.what());
    }
}

template <typename T>
T typed(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer()) {
            throw ConfigError(ErrorCode::SchemaViolation, key, "must be an integer");
        }
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        // Negative seeds wrap to their 64-bit two's-complement value.
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
            throw ConfigError(ErrorCode::SchemaViolation, key, "must be an integer");
        }
        return v.get<T>();
    } else {
        if (!v.is_number()) throw ConfigError(ErrorCode::SchemaViolation, key, "must be a number");
        return v.get<T>();
    }
}

}  // namespace

json to_json(const RunConfig& c) {
    json doc;
    if (c.rule.builtin) {
        doc["rule"] = std::string(to_string(*c.rule.builtin));
    } else {
        doc["rule"] = {{"dsl", c.rule.dsl}};
    }
    doc["shape"] = shape_to_json(c.shape);
    doc["seed"] = c.seed;
    doc["step"] = c.step;
    doc["angle_deg"] = c.angle_deg;
    doc["clearance"] = c.clearance;
    doc["stroke_width"] = c.stroke_width;
    doc["iterations"] = c.iterations;
    doc["stall_budget"] = c.stall_budget;
    doc["spiral_decay"] = c.spiral_decay;
    doc["min_step"] = c.min_step;
    doc["candidate_count"] = c.candidate_count;
    json palette = json::array();
    for (auto color : c.palette) palette.push_back(std::string(to_string(color)));
    doc["palette"] = palette;
    if (c.start) doc["start"] = {{"x", c.start->x}, {"y", c.start->y}};
    doc["start_heading"] = c.start_heading;
    return doc;
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError(ErrorCode::SchemaViolation, "$", "expected an object");
    RunConfig c;

    if (doc.contains("rule")) {
        const auto& r = doc["rule"];
        if (r.is_string()) {
            c.rule.builtin = builtin_rule_from_name(r.get<std::string>());
        } else if (r.is_object() && r.contains("dsl") && r["dsl"].is_string()) {
            c.rule.builtin.reset();
            c.rule.dsl = r["dsl"].get<std::string>();
            try {
                (void)parse_grammar(c.rule.dsl);
            } catch (const ParseError& e) {
                throw ConfigError(e.code(), "rule.dsl", e.what());
            }
        } else {
            throw ConfigError(ErrorCode::SchemaViolation, "rule",
                              "expected a rule name or {\"dsl\": \"...\"}");
        }
    }
    if (doc.contains("shape")) c.shape = shape_from_json(doc["shape"]);

    c.seed = typed<std::uint64_t>(doc, "seed", c.seed);
    c.step = typed<double>(doc, "step", c.step);
    c.angle_deg = typed<double>(doc, "angle_deg", c.angle_deg);
    c.clearance = typed<double>(doc, "clearance", c.clearance);
    c.stroke_width = typed<double>(doc, "stroke_width", c.stroke_width);
    c.iterations = typed<int>(doc, "iterations", c.iterations);
    c.stall_budget = typed<int>(doc, "stall_budget", c.stall_budget);
    c.spiral_decay = typed<double>(doc, "spiral_decay", c.spiral_decay);
    c.min_step = typed<double>(doc, "min_step", c.min_step);
    c.candidate_count = typed<int>(doc, "candidate_count", c.candidate_count);
    c.start_heading = typed<double>(doc, "start_heading", c.start_heading);

    if (doc.contains("palette")) {
        const auto& p = doc["palette"];
        if (!p.is_array()) throw ConfigError(ErrorCode::SchemaViolation, "palette", "expected an array");
        c.palette.clear();
        for (const auto& name : p) {
            if (!name.is_string()) {
                throw ConfigError(ErrorCode::SchemaViolation, "palette", "expected color names");
            }
            c.palette.push_back(color_from_name(name.get<std::string>()));
        }
    }
    if (doc.contains("start") && !doc["start"].is_null()) {
        const auto& s = doc["start"];
        if (!s.is_object()) throw ConfigError(ErrorCode::SchemaViolation, "start", "expected {x, y}");
        c.start = Vec2{number_at(s, "x", "start"), number_at(s, "y", "start")};
    }

    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, fmt::format("cannot read {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(ErrorCode::SchemaViolation, "$", e.what());
    }
    return config_from_json(doc);
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
    write_file_atomic(path, to_json(config).dump(2) + "\n");
}

}  // namespace gorga
