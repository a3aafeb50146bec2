#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

// Thin libpng wrappers. Higher-level code goes through raster.hpp; these are
// exposed so tooling and tests can craft arbitrary grayscale/RGB fixtures.
namespace swcrack::png_io {

struct Gray8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
};

struct Gray16Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;
};

// Decodes any libpng-readable image to 8-bit grayscale. Palette images are
// expanded, alpha is stripped, 16-bit channels keep their high byte, and
// RGB collapses with integer luma (77 R + 150 G + 29 B) >> 8.
Gray8Image read_gray8(const std::filesystem::path& path);

// Strict decode of a 16-bit grayscale PNG; any other layout is a DecodeError.
Gray16Image read_gray16(const std::filesystem::path& path);

void write_gray8(const std::filesystem::path& path, int width, int height,
                 const std::uint8_t* pixels);
void write_gray16(const std::filesystem::path& path, int width, int height,
                  const std::uint16_t* pixels);
void write_rgb8(const std::filesystem::path& path, int width, int height,
                const std::uint8_t* pixels);

bool has_png_signature(const std::filesystem::path& path);

/// Reads width/height from a PNG header without decoding the image.
/// Returns false when the file is not a PNG.
bool peek_dimensions(const std::filesystem::path& path, int& width, int& height);

}  // namespace swcrack::png_io
