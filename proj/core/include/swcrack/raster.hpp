#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace swcrack {

/// Row-major binary raster; nonzero pixels are crack, zero is background.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size == width * height, values 0/1

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * width + c; }
    std::uint8_t at(int r, int c) const { return data[idx(r, c)]; }
    void set(int r, int c, std::uint8_t v) { data[idx(r, c)] = v; }
    std::size_t pixel_count() const { return data.size(); }
    std::size_t crack_count() const;
    bool empty_mask() const { return crack_count() == 0; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

/// Row-major per-pixel crack probability; every value lies in [0, 1].
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    ProbabilityMap() = default;
    ProbabilityMap(int w, int h, float fill = 0.0f);

    std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r) * width + c; }
    float at(int r, int c) const { return data[idx(r, c)]; }
    void set(int r, int c, float v) { data[idx(r, c)] = v; }
    std::size_t pixel_count() const { return data.size(); }

    friend bool operator==(const ProbabilityMap&, const ProbabilityMap&) = default;
};

/// Decodes a grayscale or RGB image into a mask: a pixel is crack iff its
/// 8-bit gray value is strictly greater than binarize_cutoff. RGB inputs are
/// reduced with integer luma first.
BinaryMask load_mask(const std::filesystem::path& path, int binarize_cutoff = 127);

/// Writes an 8-bit grayscale PNG, crack = 255, background = 0.
/// load_mask(save_mask(m)) == m.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

enum class ProbmapFormat { raw, png16 };

/// Reads a probability map, dispatching on the file signature: the PMAP raw
/// float format round-trips bit-exactly, a 16-bit grayscale PNG maps pixel
/// value v to v / 65535. Raw values outside [0, 1] or NaN are rejected.
ProbabilityMap load_probmap(const std::filesystem::path& path);

void save_probmap(const ProbabilityMap& map, const std::filesystem::path& path,
                  ProbmapFormat format);

}  // namespace swcrack
