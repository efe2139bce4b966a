#include "gorga/image_io.hpp"

#include "gorga/error.hpp"

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <png.h>

namespace gorga {

namespace {

void png_write_to_vector(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

struct ReadCursor {
    const std::vector<std::uint8_t>* bytes;
    std::size_t pos;
};

void png_read_from_vector(png_structp png, png_bytep data, png_size_t length) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + length > cur->bytes->size()) png_error(png, "truncated PNG");
    std::memcpy(data, cur->bytes->data() + cur->pos, length);
    cur->pos += length;
}

void png_warning_ignore(png_structp, png_const_charp) {}

// libpng reports errors by longjmp; these helpers keep every non-trivial C++
// object outside the setjmp frame.
bool write_png_rows(png_structp png, png_infop info, const GrayImage& image,
                    std::vector<std::uint8_t>* out) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_set_write_fn(png, out, png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
        auto* row = const_cast<png_bytep>(image.pixels.data() +
                                          static_cast<std::size_t>(y) * image.width);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    return true;
}

bool read_png_header(png_structp png, png_infop info, ReadCursor* cursor) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_set_read_fn(png, cursor, png_read_from_vector);
    png_read_info(png, info);
    const auto color = png_get_color_type(png, info);
    const auto depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);
    return true;
}

bool read_png_rows(png_structp png, png_bytep* rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
    std::vector<std::uint8_t> out;
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_ignore);
    if (!png) throw Error(ErrorCode::IoFailure, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    const bool ok = info && write_png_rows(png, info, image, &out);
    png_destroy_write_struct(&png, info ? &info : nullptr);
    if (!ok) throw Error(ErrorCode::IoFailure, "PNG encoding failed");
    return out;
}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw Error(ErrorCode::UnreadableFile, "not a PNG file");
    }
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_ignore);
    if (!png) throw Error(ErrorCode::IoFailure, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    ReadCursor cursor{&bytes, 0};
    if (!info || !read_png_header(png, info, &cursor)) {
        png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        throw Error(ErrorCode::UnreadableFile, "malformed PNG header");
    }
    GrayImage image;
    image.width = static_cast<int>(png_get_image_width(png, info));
    image.height = static_cast<int>(png_get_image_height(png, info));
    const int channels = png_get_channels(png, info);
    const auto rowbytes = png_get_rowbytes(png, info);
    std::vector<std::uint8_t> buffer(rowbytes * static_cast<std::size_t>(image.height));
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    for (int y = 0; y < image.height; ++y) {
        rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
    }
    const bool ok = read_png_rows(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    if (!ok) throw Error(ErrorCode::UnreadableFile, "corrupt PNG data");

    image.pixels.resize(static_cast<std::size_t>(image.width) * image.height);
    for (int y = 0; y < image.height; ++y) {
        const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < image.width; ++x) {
            const std::uint8_t* p = row + static_cast<std::size_t>(x) * channels;
            double luma = 0.0;
            double alpha = 1.0;
            switch (channels) {
                case 1: luma = p[0]; break;
                case 2: luma = p[0]; alpha = p[1] / 255.0; break;
                case 3: luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]; break;
                default:
                    luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
                    alpha = p[3] / 255.0;
            }
            const double v = luma * alpha + 255.0 * (1.0 - alpha);
            image.pixels[static_cast<std::size_t>(y) * image.width + x] =
                static_cast<std::uint8_t>(std::lround(v));
        }
    }
    return image;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header = fmt::format("P5\n{} {}\n255\n", image.width, image.height);
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    const auto fail = [](const char* what) {
        throw Error(ErrorCode::UnreadableFile, fmt::format("PGM: {}", what));
    };
    // Reads one header integer, skipping whitespace and '#' comments.
    const auto next_int = [&]() {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) fail("malformed header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000) fail("header value too large");
        }
        return static_cast<int>(v);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') fail("not a binary (P5) PGM");
    pos = 2;
    GrayImage image;
    image.width = next_int();
    image.height = next_int();
    const int maxval = next_int();
    if (image.width <= 0 || image.height <= 0) fail("empty image");
    if (maxval <= 0 || maxval > 65535) fail("bad maxval");
    ++pos;  // single whitespace byte after maxval
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    if (bytes.size() < pos + n * bpp) fail("truncated pixel data");
    image.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned v = bpp == 1 ? bytes[pos + i]
                                    : (static_cast<unsigned>(bytes[pos + 2 * i]) << 8) |
                                          bytes[pos + 2 * i + 1];
        image.pixels[i] = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    }
    return image;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, fmt::format("cannot open {}", path.string()));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GrayImage load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
    throw Error(ErrorCode::UnreadableFile,
                fmt::format("{}: unsupported image format (expected PNG or P5 PGM)", path.string()));
}

namespace {

template <typename Bytes>
void write_atomic(const std::filesystem::path& path, const Bytes& data) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("cannot write {}", tmp.string()));
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) throw Error(ErrorCode::IoFailure, fmt::format("write failed: {}", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoFailure, fmt::format("cannot move into {}", path.string()));
    }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
    write_atomic(path, data);
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
    write_atomic(path, data);
}

}  // namespace gorga
