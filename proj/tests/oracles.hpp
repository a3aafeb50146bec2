#pragma once

// Independent reference implementations the tests check the library against.
// These deliberately use the slowest, most literal formulation of each
// operation and share no code with the implementations under test.

#include <cstdint>
#include <vector>

#include "swcrack/calibration.hpp"
#include "swcrack/components.hpp"
#include "swcrack/raster.hpp"

namespace oracles {

// Minkowski-sum dilation: every (crack pixel, kernel offset) pair stamps one
// output pixel. O(W * H * k^2).
inline swcrack::BinaryMask brute_dilate(const swcrack::BinaryMask& mask, int k) {
    int before = (k % 2 == 1) ? (k - 1) / 2 : k / 2 - 1;
    int after = (k % 2 == 1) ? (k - 1) / 2 : k / 2;
    swcrack::BinaryMask out(mask.width, mask.height);
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            for (int dr = -before; dr <= after; ++dr) {
                for (int dc = -before; dc <= after; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < mask.height && cc >= 0 && cc < mask.width)
                        out.set(rr, cc, 1);
                }
            }
        }
    }
    return out;
}

// Flood-fill labeling with an explicit stack; label values follow
// first-encounter raster order like the implementation's contract.
inline std::vector<std::uint32_t> flood_label(const swcrack::BinaryMask& mask,
                                              swcrack::Connectivity conn,
                                              std::uint32_t* out_count = nullptr) {
    const int w = mask.width, h = mask.height;
    std::vector<std::uint32_t> labels(mask.pixel_count(), 0);
    std::uint32_t next = 0;
    std::vector<std::pair<int, int>> stack;
    const bool eight = conn == swcrack::Connectivity::eight;

    for (int r0 = 0; r0 < h; ++r0) {
        for (int c0 = 0; c0 < w; ++c0) {
            if (!mask.at(r0, c0) || labels[mask.idx(r0, c0)]) continue;
            ++next;
            stack.clear();
            stack.emplace_back(r0, c0);
            labels[mask.idx(r0, c0)] = next;
            while (!stack.empty()) {
                auto [r, c] = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        if (!eight && dr != 0 && dc != 0) continue;
                        int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                        if (!mask.at(rr, cc) || labels[mask.idx(rr, cc)]) continue;
                        labels[mask.idx(rr, cc)] = next;
                        stack.emplace_back(rr, cc);
                    }
                }
            }
        }
    }
    if (out_count) *out_count = next;
    return labels;
}

inline std::uint32_t flood_count(const swcrack::BinaryMask& mask, swcrack::Connectivity conn) {
    std::uint32_t n = 0;
    flood_label(mask, conn, &n);
    return n;
}

inline std::uint32_t flood_count_at(const swcrack::ProbabilityMap& map, double t,
                                    swcrack::Connectivity conn) {
    // same comparison rule as the library: thresholds meet the data at the
    // data's (float) precision
    float cutoff = static_cast<float>(t);
    swcrack::BinaryMask mask(map.width, map.height);
    for (std::size_t i = 0; i < map.data.size(); ++i)
        mask.data[i] = map.data[i] >= cutoff ? 1 : 0;
    return flood_count(mask, conn);
}

// Replays the level-1 bin scan of the threshold search with flood-fill
// counts: the index of the first upper bin edge whose component count
// exceeds the initial prediction's, or -1 when none does.
struct BinScan {
    swcrack::BinPartition bins;
    std::uint32_t n_initial = 0;
    int trigger_idx = -1;
};

inline BinScan scan_bins(const swcrack::ProbabilityMap& map, swcrack::Connectivity conn) {
    BinScan scan;
    scan.n_initial = flood_count_at(map, 0.5, conn);
    double mn = map.data[0], mx = map.data[0];
    for (float p : map.data) {
        mn = std::min(mn, static_cast<double>(p));
        mx = std::max(mx, static_cast<double>(p));
    }
    scan.bins = swcrack::make_bin_partition(mn, mx);
    for (int idx = 0; idx < 10; ++idx) {
        if (flood_count_at(map, scan.bins.edges[static_cast<std::size_t>(idx) + 1], conn) >
            scan.n_initial) {
            scan.trigger_idx = idx;
            break;
        }
    }
    return scan;
}

}  // namespace oracles
