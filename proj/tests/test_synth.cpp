#include <doctest.h>

#include "swcrack/calibration.hpp"
#include "swcrack/components.hpp"
#include "swcrack/error.hpp"
#include "swcrack/morphology.hpp"
#include "swcrack/synth.hpp"

using namespace swcrack;

TEST_CASE("a one-step walk leaves a single stamp") {
    SynthConfig cfg;
    cfg.width = 32;
    cfg.height = 32;
    cfg.walk_steps = 1;
    cfg.walk_count = 1;
    cfg.seed = 5;

    cfg.base_width = 1;
    CHECK(generate_crack_mask(cfg).crack_count() == 1);

    cfg.base_width = 3;
    BinaryMask stamped = generate_crack_mask(cfg);
    CHECK(count(stamped, Connectivity::eight) == 1);
    CHECK(stamped.crack_count() <= 9);  // clipped at borders at most
    CHECK(stamped.crack_count() >= 4);
}

TEST_CASE("generation is deterministic under the seed") {
    SynthConfig cfg;
    cfg.seed = 99;
    BinaryMask a = generate_crack_mask(cfg);
    BinaryMask b = generate_crack_mask(cfg);
    CHECK(a == b);
    CHECK(corrupt_to_probmap(a, cfg) == corrupt_to_probmap(b, cfg));

    SynthConfig other = cfg;
    other.seed = 100;
    CHECK(generate_crack_mask(other) != a);
}

TEST_CASE("walk count bounds the component count") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SynthConfig cfg;
        cfg.walk_count = 3;
        cfg.seed = seed;
        CHECK(count(generate_crack_mask(cfg), Connectivity::eight) <= 3);
    }
}

TEST_CASE("corruption with no blur and no noise embeds the mask exactly") {
    SynthConfig cfg;
    cfg.noise_sigma = 0.0;
    cfg.blur_radius = 0;
    cfg.seed = 3;
    BinaryMask mask = generate_crack_mask(cfg);
    ProbabilityMap map = corrupt_to_probmap(mask, cfg);
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        CHECK(map.data[i] == (mask.data[i] ? 1.0f : 0.0f));
}

TEST_CASE("box blur keeps interiors at 1 and boundaries strictly inside (0,1)") {
    SynthConfig cfg;
    cfg.noise_sigma = 0.0;
    cfg.blur_radius = 1;
    cfg.seed = 8;
    BinaryMask mask = generate_crack_mask(cfg);
    ProbabilityMap map = corrupt_to_probmap(mask, cfg);

    int interior = 0, boundary = 0;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            bool mixed = false;
            for (int dr = -1; dr <= 1 && !mixed; ++dr)
                for (int dc = -1; dc <= 1 && !mixed; ++dc) {
                    int rr = std::clamp(r + dr, 0, mask.height - 1);
                    int cc = std::clamp(c + dc, 0, mask.width - 1);
                    if (mask.at(rr, cc) != mask.at(r, c)) mixed = true;
                }
            if (mixed) {
                CHECK(map.at(r, c) > 0.0f);
                CHECK(map.at(r, c) < 1.0f);
                ++boundary;
            } else if (mask.at(r, c)) {
                CHECK(map.at(r, c) == 1.0f);
                ++interior;
            } else {
                CHECK(map.at(r, c) == 0.0f);
            }
        }
    }
    CHECK(interior > 0);
    CHECK(boundary > 0);

    // an all-crack mask blurs to an all-ones map (clipped windows normalize)
    ProbabilityMap ones = corrupt_to_probmap(BinaryMask(16, 16, 1), cfg);
    for (float p : ones.data) CHECK(p == 1.0f);
}

TEST_CASE("thresholding the corrupted map at 0.5 recovers almost every pixel") {
    std::size_t agree = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SynthConfig cfg;
        cfg.width = 64;
        cfg.height = 64;
        cfg.noise_sigma = 0.03;
        cfg.blur_radius = 1;
        cfg.seed = seed;
        BinaryMask mask = generate_crack_mask(cfg);
        BinaryMask back = apply_threshold(corrupt_to_probmap(mask, cfg), 0.5);
        for (std::size_t i = 0; i < mask.data.size(); ++i) agree += mask.data[i] == back.data[i];
        total += mask.data.size();
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("blurred boundaries push the calibrated threshold above 0.5") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SynthConfig cfg;
        cfg.seed = seed;
        BinaryMask gt = generate_crack_mask(cfg);
        // widened the way an over-predicting model behaves
        ProbabilityMap over = corrupt_to_probmap(dilate(gt, 3), cfg);
        PerImageThreshold from_over = per_image_threshold(over, Connectivity::eight);
        CHECK(from_over.threshold > 0.5);

        ProbabilityMap plain = corrupt_to_probmap(gt, cfg);
        PerImageThreshold from_plain = per_image_threshold(plain, Connectivity::eight);
        CHECK(from_plain.threshold > 0.5);
    }
}

TEST_CASE("config validation") {
    SynthConfig cfg;
    cfg.walk_steps = 0;
    CHECK_THROWS_AS(generate_crack_mask(cfg), ValueOutOfRange);
    cfg = {};
    cfg.noise_sigma = -0.1;
    CHECK_THROWS_AS(corrupt_to_probmap(BinaryMask(4, 4, 1), cfg), ValueOutOfRange);
    cfg = {};
    cfg.width = 0;
    CHECK_THROWS_AS(generate_crack_mask(cfg), ValueOutOfRange);
}
