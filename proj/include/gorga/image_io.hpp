#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gorga {

// 8-bit single-channel image, row-major, row 0 on top.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

std::vector<std::uint8_t> encode_png(const GrayImage& image);
// Accepts gray, gray+alpha, RGB and RGBA PNGs of any bit depth; color is
// reduced to Rec. 601 luma and alpha composited over white.
GrayImage decode_png(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes);

// Dispatches on the file signature. Throws Error(UnreadableFile).
GrayImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& data);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& data);

}  // namespace gorga
