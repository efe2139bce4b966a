#pragma once

#include "gorga/geometry.hpp"
#include "gorga/lsystem.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gorga {

// Traditional stroke colors. Backgrounds are free-form.
enum class Color { Black, Red, White };

std::string_view to_string(Color c);
std::string_view hex(Color c);
Color color_from_name(std::string_view name);

// Either one of the built-in rules or a grammar in the rule DSL.
struct RuleSpec {
    std::optional<BuiltinRule> builtin = BuiltinRule::Angle;
    std::string dsl;

    Grammar grammar() const;
    friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

struct RunConfig {
    RuleSpec rule;
    ShapeMask shape = ShapeMask::rectangle({0, 0, 800, 800});
    std::uint64_t seed = 0;
    double step = 6.0;
    double angle_deg = 30.0;
    double clearance = 3.0;
    double stroke_width = 2.0;
    int iterations = 8;
    int stall_budget = 500;
    double spiral_decay = 0.97;
    double min_step = 0.5;
    int candidate_count = 5;
    std::vector<Color> palette{Color::Black, Color::Red, Color::White};
    // Defaults to the mask centroid facing 0 degrees.
    std::optional<Vec2> start;
    double start_heading = 0.0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Default 800x800 canvas for a shape kind: full square, inscribed ellipse, or
// the isosceles triangle with its apex at the top edge.
ShapeMask default_shape(ShapeKind kind);

// Throws ConfigError naming the first offending field.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
// Missing fields take defaults; validates the result.
RunConfig config_from_json(const nlohmann::json& doc);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace gorga
