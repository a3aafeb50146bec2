#include "swcrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "swcrack/error.hpp"
#include "swcrack/morphology.hpp"

namespace swcrack {

namespace {

// mt19937_64's raw output sequence is pinned by the standard, so drawing from
// the engine directly keeps masks reproducible across platforms.
struct Rng {
    std::mt19937_64 engine;
    bool has_spare = false;
    double spare = 0;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine() % n; }

    double uniform01() {  // [0, 1)
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }

    double gaussian() {  // Box-Muller
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

// 8-neighbor step directions, clockwise.
constexpr int kRowStep[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
constexpr int kColStep[8] = {-1, 0, 1, 1, 1, 0, -1, -1};

void validate(const SynthConfig& cfg) {
    if (cfg.width <= 0 || cfg.height <= 0) throw ValueOutOfRange("synth dimensions must be positive");
    if (cfg.walk_steps < 1) throw ValueOutOfRange("walk_steps must be >= 1");
    if (cfg.walk_count < 1) throw ValueOutOfRange("walk_count must be >= 1");
    if (cfg.base_width < 1) throw ValueOutOfRange("base_width must be >= 1");
    if (cfg.noise_sigma < 0) throw ValueOutOfRange("noise_sigma must be >= 0");
    if (cfg.blur_radius < 0) throw ValueOutOfRange("blur_radius must be >= 0");
}

}  // namespace

BinaryMask generate_crack_mask(const SynthConfig& cfg) {
    validate(cfg);
    BinaryMask path(cfg.width, cfg.height);
    Rng rng(cfg.seed);

    for (int walk = 0; walk < cfg.walk_count; ++walk) {
        int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.height)));
        int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.width)));
        int dir = static_cast<int>(rng.below(8));
        for (int step = 0; step < cfg.walk_steps; ++step) {
            path.set(r, c, 1);
            // momentum: mostly straight ahead, occasionally a 45-degree turn
            std::uint64_t d = rng.below(8);
            if (d == 6)
                dir = (dir + 1) % 8;
            else if (d == 7)
                dir = (dir + 7) % 8;
            r = std::clamp(r + kRowStep[dir], 0, cfg.height - 1);
            c = std::clamp(c + kColStep[dir], 0, cfg.width - 1);
        }
    }
    return cfg.base_width == 1 ? path : dilate(path, cfg.base_width);
}

ProbabilityMap corrupt_to_probmap(const BinaryMask& mask, const SynthConfig& cfg) {
    validate(cfg);
    const int w = mask.width;
    const int h = mask.height;
    ProbabilityMap map(w, h);

    if (cfg.blur_radius == 0) {
        for (std::size_t i = 0; i < mask.data.size(); ++i)
            map.data[i] = mask.data[i] ? 1.0f : 0.0f;
    } else {
        // box blur via a summed-area table; windows clip at the borders and
        // normalize by the clipped pixel count, so an all-crack window is
        // exactly 1
        const int b = cfg.blur_radius;
        std::vector<std::uint32_t> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
        auto sat_at = [&](int r, int c) -> std::uint32_t& {
            return sat[static_cast<std::size_t>(r) * (w + 1) + c];
        };
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                sat_at(r + 1, c + 1) =
                    sat_at(r, c + 1) + sat_at(r + 1, c) - sat_at(r, c) + mask.at(r, c);

        for (int r = 0; r < h; ++r) {
            int r1 = std::max(0, r - b), r2 = std::min(h - 1, r + b);
            for (int c = 0; c < w; ++c) {
                int c1 = std::max(0, c - b), c2 = std::min(w - 1, c + b);
                std::uint32_t sum =
                    sat_at(r2 + 1, c2 + 1) - sat_at(r1, c2 + 1) - sat_at(r2 + 1, c1) + sat_at(r1, c1);
                auto area = static_cast<double>(r2 - r1 + 1) * (c2 - c1 + 1);
                map.set(r, c, static_cast<float>(static_cast<double>(sum) / area));
            }
        }
    }

    if (cfg.noise_sigma > 0) {
        // separate stream from the mask generator so the same seed can drive both
        Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
        for (auto& p : map.data) {
            double noisy = static_cast<double>(p) + cfg.noise_sigma * rng.gaussian();
            p = static_cast<float>(std::clamp(noisy, 0.0, 1.0));
        }
    }
    return map;
}

}  // namespace swcrack
