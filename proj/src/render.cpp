#include "gorga/render.hpp"

#include "gorga/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

namespace gorga {

namespace {

// Fixed three decimals, with negative zero folded into zero.
std::string num(double v) {
    auto s = fmt::format("{:.3f}", v);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

bool is_hex_color(const std::string& s) {
    if (s.size() != 7 || s[0] != '#') return false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!std::isxdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

std::string mask_outline(const ShapeMask& mask) {
    const auto& b = mask.bounds();
    switch (mask.kind()) {
        case ShapeKind::Rectangle:
            return fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}"/>)", num(b.x0),
                               num(b.y0), num(b.width()), num(b.height()));
        case ShapeKind::Ellipse:
            return fmt::format(R"(<ellipse cx="{}" cy="{}" rx="{}" ry="{}"/>)",
                               num((b.x0 + b.x1) / 2), num((b.y0 + b.y1) / 2),
                               num(b.width() / 2), num(b.height() / 2));
        case ShapeKind::Triangle: {
            const auto& v = mask.vertices();
            return fmt::format(R"(<polygon points="{},{} {},{} {},{}"/>)", num(v[0].x),
                               num(v[0].y), num(v[1].x), num(v[1].y), num(v[2].x), num(v[2].y));
        }
    }
    return {};
}

std::string metadata(const Drawing& drawing, const Palette& palette) {
    nlohmann::json colors = nlohmann::json::array();
    for (const auto c : palette.colors) colors.push_back(std::string(to_string(c)));
    const nlohmann::json meta = {
        {"generator", "gorga"},
        {"seed", drawing.seed},
        {"rng", drawing.rng},
        {"rule", to_json(drawing.config)["rule"]},
        {"termination", std::string(to_string(drawing.termination))},
        {"segments", drawing.segments.size()},
        {"palette", colors},
        {"color_rule", "branch_depth mod palette length"},
        {"color_rule_authoritative", false},
    };
    return xml_escape(meta.dump());
}

}  // namespace

Palette Palette::from(const std::vector<Color>& colors, std::string background) {
    if (colors.empty()) throw Error(ErrorCode::SchemaViolation, "palette must not be empty");
    if (!is_hex_color(background)) {
        throw Error(ErrorCode::SchemaViolation,
                    fmt::format("background '{}' is not #rrggbb", background));
    }
    return {colors, std::move(background)};
}

Color Palette::color_for_depth(int branch_depth) const {
    const auto n = static_cast<int>(colors.size());
    return colors[static_cast<std::size_t>(((branch_depth % n) + n) % n)];
}

std::string render_svg(const Drawing& drawing, const Palette& palette) {
    const auto checked = Palette::from(palette.colors, palette.background);
    const auto& b = drawing.mask.bounds();
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
        "viewBox=\"{} {} {} {}\">\n",
        num(b.width()), num(b.height()), num(b.x0), num(b.y0), num(b.width()), num(b.height()));
    out += fmt::format("<metadata>{}</metadata>\n", metadata(drawing, checked));
    out += fmt::format("<rect id=\"background\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                       num(b.x0), num(b.y0), num(b.width()), num(b.height()), checked.background);
    out += "<g id=\"mask\" fill=\"none\" stroke=\"#808080\" stroke-width=\"1\">\n";
    out += mask_outline(drawing.mask) + "\n</g>\n";

    out += "<g id=\"strokes\" fill=\"none\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
    const auto& segs = drawing.segments;
    std::size_t i = 0;
    while (i < segs.size()) {
        const Color color = checked.color_for_depth(segs[i].branch_depth);
        std::string d = fmt::format("M{} {}L{} {}", num(segs[i].a.x), num(segs[i].a.y),
                                    num(segs[i].b.x), num(segs[i].b.y));
        std::size_t j = i + 1;
        while (j < segs.size() && segs[j].a == segs[j - 1].b &&
               checked.color_for_depth(segs[j].branch_depth) == color &&
               segs[j].stroke_width == segs[i].stroke_width) {
            d += fmt::format("L{} {}", num(segs[j].b.x), num(segs[j].b.y));
            ++j;
        }
        out += fmt::format("<path d=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n", d, hex(color),
                           num(segs[i].stroke_width));
        i = j;
    }
    out += "</g>\n</svg>\n";
    return out;
}

GrayImage to_gray(const BinaryRaster& raster) {
    GrayImage image{raster.width(), raster.height(), {}};
    image.pixels.reserve(raster.bits().size());
    for (const auto bit : raster.bits()) image.pixels.push_back(bit ? 0 : 255);
    return image;
}

GrayImage raster_image(const Drawing& drawing, double pixels_per_unit) {
    if (drawing.segments.empty()) {
        if (!(pixels_per_unit > 0)) {
            throw Error(ErrorCode::SchemaViolation, "pixels_per_unit must be positive");
        }
        const auto& b = drawing.mask.bounds();
        const int w = std::max(1, static_cast<int>(std::ceil(b.width() * pixels_per_unit - 1e-9)));
        const int h = std::max(1, static_cast<int>(std::ceil(b.height() * pixels_per_unit - 1e-9)));
        return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 255)};
    }
    return to_gray(rasterize(drawing, pixels_per_unit));
}

std::vector<std::uint8_t> render_raster(const Drawing& drawing, double pixels_per_unit) {
    return encode_png(raster_image(drawing, pixels_per_unit));
}

}  // namespace gorga
