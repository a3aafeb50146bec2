#pragma once

#include <cstdint>
#include <vector>

#include "swcrack/raster.hpp"

namespace swcrack {

enum class Connectivity { four, eight };

const char* to_string(Connectivity conn);

/// Connected-component labeling of a mask. Background pixels carry label 0;
/// components are numbered 1..count in first-encounter raster order, so the
/// labeling is deterministic for a given input.
struct LabelImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels;
    std::uint32_t count = 0;
};

LabelImage label(const BinaryMask& mask, Connectivity conn);

/// Number of connected components, without materializing the label image.
/// Equals label(mask, conn).count.
std::uint32_t count(const BinaryMask& mask, Connectivity conn);

}  // namespace swcrack
