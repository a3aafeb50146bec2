#include "swcrack/morphology.hpp"

#include <algorithm>
#include <string>

#include "swcrack/error.hpp"
#include "swcrack/parallel.hpp"

namespace swcrack {

namespace {

// Stamp reach of a k-wide flat kernel: a crack pixel lights offsets
// [-before, +after] around itself in each axis.
struct Reach {
    int before;
    int after;
};

Reach kernel_reach(int k) {
    if (k % 2 == 1) return {(k - 1) / 2, (k - 1) / 2};
    return {k / 2 - 1, k / 2};
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int k) {
    if (mask.width <= 0 || mask.height <= 0)
        throw EmptyImage("dilate requires a non-empty mask");
    if (k < 1) throw ValueOutOfRange("kernel size must be >= 1, got " + std::to_string(k));
    if (k == 1) return mask;

    const auto [before, after] = kernel_reach(k);
    const int w = mask.width;
    const int h = mask.height;

    // Separable: the square kernel is the product of two 1-D windows. The
    // gather window mirrors the stamp: out(x) = OR in(x+d), d in [-after, before].
    BinaryMask rows(w, h);
    for (int r = 0; r < h; ++r) {
        const std::uint8_t* in = mask.data.data() + mask.idx(r, 0);
        std::uint8_t* out = rows.data.data() + rows.idx(r, 0);
        for (int c = 0; c < w; ++c) {
            int lo = std::max(0, c - after);
            int hi = std::min(w - 1, c + before);
            std::uint8_t v = 0;
            for (int x = lo; x <= hi && !v; ++x) v = in[x];
            out[c] = v;
        }
    }

    BinaryMask out(w, h);
    for (int r = 0; r < h; ++r) {
        int lo = std::max(0, r - after);
        int hi = std::min(h - 1, r + before);
        std::uint8_t* dst = out.data.data() + out.idx(r, 0);
        for (int c = 0; c < w; ++c) {
            std::uint8_t v = 0;
            for (int y = lo; y <= hi && !v; ++y) v = rows.at(y, c);
            dst[c] = v;
        }
    }
    return out;
}

SwChain sw_chain(const BinaryMask& gt) {
    SwChain chain;
    chain.gt = gt;
    chain.by3 = dilate(chain.gt, 3);
    chain.by5 = dilate(chain.by3, 5);
    chain.by8 = dilate(chain.by5, 8);
    return chain;
}

DatasetManifest augment_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& out_dir, int jobs) {
    namespace fs = std::filesystem;

    std::vector<std::size_t> train_indices;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i)
        if (manifest.entries[i].split == Split::train) train_indices.push_back(i);

    // Validate inputs up front so a missing file fails before any output is
    // half-written.
    for (std::size_t i : train_indices) {
        const auto& e = manifest.entries[i];
        if (!fs::exists(resolve_path(manifest, e.image_path)))
            throw ManifestError("entry " + e.id + ": image file missing: " +
                                e.image_path.string());
        if (!fs::exists(resolve_path(manifest, e.mask_path)))
            throw ManifestError("entry " + e.id + ": mask file missing: " +
                                e.mask_path.string());
    }

    std::error_code ec;
    fs::create_directories(out_dir / "images", ec);
    fs::create_directories(out_dir / "masks", ec);
    if (ec) throw IoError("cannot create output directories under " + out_dir.string());

    static constexpr const char* kSuffixes[4] = {"_sw0", "_sw3", "_sw5", "_sw8"};

    DatasetManifest out;
    out.root = fs::absolute(out_dir);
    // 4 slots per train entry, filled in parallel, so output order is stable.
    std::vector<ManifestEntry> augmented(train_indices.size() * 4);

    parallel_for(train_indices.size(), jobs, [&](std::size_t t) {
        const auto& e = manifest.entries[train_indices[t]];
        fs::path image_src = resolve_path(manifest, e.image_path);
        std::string image_ext = image_src.extension().string();

        BinaryMask gt = load_mask(resolve_path(manifest, e.mask_path));
        SwChain chain = sw_chain(gt);
        const BinaryMask* masks[4] = {&chain.gt, &chain.by3, &chain.by5, &chain.by8};

        for (int v = 0; v < 4; ++v) {
            std::string id = e.id + kSuffixes[v];
            fs::path image_rel = fs::path("images") / (id + image_ext);
            fs::path mask_rel = fs::path("masks") / (id + ".png");

            fs::copy_file(image_src, out.root / image_rel, fs::copy_options::overwrite_existing);
            save_mask(*masks[v], out.root / mask_rel);

            ManifestEntry ne;
            ne.id = std::move(id);
            ne.image_path = image_rel;
            ne.mask_path = mask_rel;
            ne.probmap_path = e.probmap_path.empty()
                                  ? fs::path{}
                                  : fs::absolute(resolve_path(manifest, e.probmap_path));
            ne.source_dataset = e.source_dataset;
            ne.split = Split::train;
            augmented[t * 4 + static_cast<std::size_t>(v)] = std::move(ne);
        }
    });

    out.entries = std::move(augmented);
    for (const auto& e : manifest.entries) {
        if (e.split == Split::train) continue;
        ManifestEntry pass = e;  // non-train entries keep their original files
        pass.image_path = fs::absolute(resolve_path(manifest, e.image_path));
        pass.mask_path = fs::absolute(resolve_path(manifest, e.mask_path));
        if (!e.probmap_path.empty())
            pass.probmap_path = fs::absolute(resolve_path(manifest, e.probmap_path));
        out.entries.push_back(std::move(pass));
    }
    return out;
}

}  // namespace swcrack
