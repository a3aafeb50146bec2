#pragma once

#include <filesystem>

#include "swcrack/dataset.hpp"
#include "swcrack/raster.hpp"

namespace swcrack {

/// Binary dilation with a flat k x k square structuring element, clipped at
/// the borders. Odd k stamps symmetric offsets -(k-1)/2 .. +(k-1)/2 around
/// each crack pixel; even k stamps -(k/2-1) .. +k/2, the usual image-library
/// anchor convention for even kernels. Output is always a superset of the
/// input.
BinaryMask dilate(const BinaryMask& mask, int k);

/// The incremental stochastic-width ladder. Each dilation is applied to the
/// previous output, not to the input mask, so gt <= by3 <= by5 <= by8.
struct SwChain {
    BinaryMask gt;   // input, untouched
    BinaryMask by3;  // dilate(gt, 3)
    BinaryMask by5;  // dilate(by3, 5)
    BinaryMask by8;  // dilate(by5, 8)
};

SwChain sw_chain(const BinaryMask& gt);

/// Expands every training entry into four (image, mask) pairs: the original
/// mask and its three chained dilations, written with suffixes _sw0, _sw3,
/// _sw5 and _sw8. The image file is copied unmodified for each pair.
/// Validation/test entries pass through unchanged. jobs == 0 means one worker
/// per logical CPU.
DatasetManifest augment_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& out_dir, int jobs = 0);

}  // namespace swcrack
