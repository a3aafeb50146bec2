#pragma once

#include <cstdint>

#include "swcrack/raster.hpp"

namespace swcrack {

/// Knobs for the synthetic crack generator, the stand-in for a trained
/// segmentation model when exercising the calibration and metrics pipeline.
struct SynthConfig {
    int width = 128;
    int height = 128;
    int walk_steps = 60;      // steps per random walk
    int walk_count = 2;       // walks per mask
    int base_width = 3;       // stamp width along each walk
    double noise_sigma = 0.02;
    int blur_radius = 1;      // box-blur radius for boundary softening
    std::uint64_t seed = 0;
};

/// walk_count seeded random walks (8-neighbor steps with momentum),
/// rasterized base_width wide. Deterministic under seed.
BinaryMask generate_crack_mask(const SynthConfig& cfg);

/// Turns a mask into a plausible model output: box blur of the {0,1} field
/// (interior crack pixels stay exactly 1, boundaries go intermediate) plus
/// seeded Gaussian noise, clamped to [0, 1]. With zero blur and zero noise
/// this is the exact embedding of the mask into probabilities.
ProbabilityMap corrupt_to_probmap(const BinaryMask& mask, const SynthConfig& cfg);

}  // namespace swcrack
