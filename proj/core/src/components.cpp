#include "swcrack/components.hpp"

#include <numeric>

#include "swcrack/error.hpp"

namespace swcrack {

const char* to_string(Connectivity conn) {
    return conn == Connectivity::four ? "four" : "eight";
}

namespace {

// Union-find over provisional labels, path-halving find. Label 0 is the
// background sentinel and never enters the structure.
struct UnionFind {
    std::vector<std::uint32_t> parent;

    UnionFind() { parent.push_back(0); }

    std::uint32_t make() {
        parent.push_back(static_cast<std::uint32_t>(parent.size()));
        return static_cast<std::uint32_t>(parent.size() - 1);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    // Returns true when two distinct trees were joined.
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

// First pass shared by label() and count(): assigns provisional labels into
// `prov` and records merges. Returns created − merged, the component count.
std::uint32_t first_pass(const BinaryMask& mask, Connectivity conn,
                         std::vector<std::uint32_t>& prov, UnionFind& uf) {
    const int w = mask.width;
    const int h = mask.height;
    const bool eight = conn == Connectivity::eight;
    std::uint32_t created = 0;
    std::uint32_t merged = 0;

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::size_t i = mask.idx(r, c);
            if (!mask.data[i]) {
                prov[i] = 0;
                continue;
            }
            std::uint32_t neighbor = 0;
            auto absorb = [&](std::uint32_t lab) {
                if (!lab) return;
                if (!neighbor) {
                    neighbor = lab;
                } else if (uf.unite(neighbor, lab)) {
                    ++merged;
                }
            };
            if (c > 0) absorb(prov[i - 1]);                       // left
            if (r > 0) {
                std::size_t up = i - static_cast<std::size_t>(w);
                absorb(prov[up]);                                  // up
                if (eight) {
                    if (c > 0) absorb(prov[up - 1]);               // up-left
                    if (c + 1 < w) absorb(prov[up + 1]);           // up-right
                }
            }
            if (neighbor) {
                prov[i] = neighbor;
            } else {
                prov[i] = uf.make();
                ++created;
            }
        }
    }
    return created - merged;
}

}  // namespace

LabelImage label(const BinaryMask& mask, Connectivity conn) {
    LabelImage out;
    out.width = mask.width;
    out.height = mask.height;
    out.labels.assign(mask.pixel_count(), 0);

    UnionFind uf;
    out.count = first_pass(mask, conn, out.labels, uf);

    // Second pass: resolve to roots, then renumber roots 1..count in
    // first-encounter raster order.
    std::vector<std::uint32_t> final_label(uf.parent.size(), 0);
    std::uint32_t next = 0;
    for (auto& lab : out.labels) {
        if (!lab) continue;
        std::uint32_t root = uf.find(lab);
        if (!final_label[root]) final_label[root] = ++next;
        lab = final_label[root];
    }
    return out;
}

std::uint32_t count(const BinaryMask& mask, Connectivity conn) {
    std::vector<std::uint32_t> prov(mask.pixel_count(), 0);
    UnionFind uf;
    return first_pass(mask, conn, prov, uf);
}

}  // namespace swcrack
