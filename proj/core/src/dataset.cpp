#include "swcrack/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "swcrack/csv.hpp"
#include "swcrack/png_io.hpp"

namespace swcrack {

namespace fs = std::filesystem;

const char* to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "train";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw ParseError("unknown split value: '" + s + "'");
}

std::filesystem::path resolve_path(const DatasetManifest& manifest,
                                   const std::filesystem::path& p) {
    return p.is_absolute() ? p : manifest.root / p;
}

std::string PrefixMap::source_for(const std::string& filename) const {
    const std::pair<std::string, std::string>* best = nullptr;
    for (const auto& rule : rules) {
        if (filename.rfind(rule.first, 0) != 0) continue;
        if (!best || rule.first.size() > best->first.size()) best = &rule;
    }
    return best ? best->second : "unknown";
}

PrefixMap parse_prefix_map(const std::string& text) {
    PrefixMap map;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=', start);
        if (eq == std::string::npos || eq == start)
            throw ParseError("prefix map line " + std::to_string(line_no) +
                             ": expected prefix=source, got '" + line + "'");
        std::string prefix = line.substr(start, eq - start);
        std::string source = line.substr(eq + 1);
        while (!prefix.empty() && (prefix.back() == ' ' || prefix.back() == '\t')) prefix.pop_back();
        while (!source.empty() && (source.back() == ' ' || source.back() == '\t')) source.pop_back();
        map.rules.emplace_back(std::move(prefix), std::move(source));
    }
    return map;
}

PrefixMap load_prefix_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("no such prefix map: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_prefix_map(buf.str());
}

PrefixMap default_prefix_map() {
    return parse_prefix_map(
        "CFD=CFD\n"
        "CRACK500=CRACK500\n"
        "cracktree200=cracktree200\n"
        "CRACKTREE200=cracktree200\n"
        "DeepCrack=DeepCrack\n"
        "Eugen_Muller=Eugen Muller\n"
        "forest=forest\n"
        "GAPS384=GAPS384\n"
        "Rissbilder=Rissbilder\n"
        "Sylvie_Chambon=Sylvie Chambon\n"
        "Volker=Volker\n"
        "noncrack=noncrack\n");
}

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" ||
           ext == ".tif" || ext == ".tiff";
}

std::vector<fs::path> sorted_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

// A mask matches its image by exact filename, falling back to same stem with
// any extension.
std::map<std::string, fs::path> index_by_name(const fs::path& dir) {
    std::map<std::string, fs::path> idx;
    if (!fs::is_directory(dir)) return idx;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) idx.emplace(entry.path().filename().string(), entry.path());
    return idx;
}

std::map<std::string, fs::path> index_by_stem(const fs::path& dir) {
    std::map<std::string, fs::path> idx;
    if (!fs::is_directory(dir)) return idx;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) idx.emplace(entry.path().stem().string(), entry.path());
    return idx;
}

struct SubTree {
    fs::path images;
    fs::path masks;
    fs::path probmaps;  // optional sibling; attached when a matching file exists
    Split split;
};

// Indexes drawn straight from the engine, so the shuffle is reproducible
// across platforms and standard libraries.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& engine) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(engine() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

DiscoverResult discover(const std::filesystem::path& root, const PrefixMap& prefixes) {
    if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());

    std::vector<SubTree> trees;
    if (fs::is_directory(root / "train" / "images"))
        trees.push_back({root / "train" / "images", root / "train" / "masks",
                         root / "train" / "probmaps", Split::train});
    if (fs::is_directory(root / "test" / "images"))
        trees.push_back({root / "test" / "images", root / "test" / "masks",
                         root / "test" / "probmaps", Split::test});
    if (fs::is_directory(root / "val" / "images"))
        trees.push_back({root / "val" / "images", root / "val" / "masks",
                         root / "val" / "probmaps", Split::val});
    if (trees.empty() && fs::is_directory(root / "images"))
        trees.push_back({root / "images", root / "masks", root / "probmaps", Split::train});

    DiscoverResult result;
    result.manifest.root = fs::absolute(root);
    std::set<std::string> used_ids;
    std::size_t off_size = 0;

    for (const auto& tree : trees) {
        auto masks_by_name = index_by_name(tree.masks);
        auto masks_by_stem = index_by_stem(tree.masks);
        auto probmaps_by_stem = index_by_stem(tree.probmaps);

        for (const auto& image : sorted_images(tree.images)) {
            std::string filename = image.filename().string();
            std::string stem = image.stem().string();

            fs::path mask;
            if (auto it = masks_by_name.find(filename); it != masks_by_name.end())
                mask = it->second;
            else if (auto it2 = masks_by_stem.find(stem); it2 != masks_by_stem.end())
                mask = it2->second;
            else
                throw MissingMask("image without mask: " + image.string());

            ManifestEntry e;
            e.id = stem;
            if (used_ids.count(e.id)) {
                e.id = stem + "__" + to_string(tree.split);
                for (int n = 2; used_ids.count(e.id); ++n)
                    e.id = stem + "__" + to_string(tree.split) + "_" + std::to_string(n);
            }
            used_ids.insert(e.id);
            e.image_path = fs::relative(image, result.manifest.root);
            e.mask_path = fs::relative(mask, result.manifest.root);
            if (auto it = probmaps_by_stem.find(stem); it != probmaps_by_stem.end())
                e.probmap_path = fs::relative(it->second, result.manifest.root);
            e.source_dataset = prefixes.source_for(filename);
            e.split = tree.split;
            if (e.source_dataset == "unknown") result.unmatched.push_back(filename);

            // dimension checks are advisory; only PNG headers are peeked
            int iw = 0, ih = 0, mw = 0, mh = 0;
            bool has_img = png_io::peek_dimensions(image, iw, ih);
            bool has_mask = png_io::peek_dimensions(mask, mw, mh);
            if (has_img && has_mask && (iw != mw || ih != mh))
                result.warnings.push_back("entry " + e.id + ": image is " + std::to_string(iw) +
                                          "x" + std::to_string(ih) + " but mask is " +
                                          std::to_string(mw) + "x" + std::to_string(mh));
            if (has_mask && (mw != kExpectedImageSide || mh != kExpectedImageSide)) ++off_size;

            result.manifest.entries.push_back(std::move(e));
        }
    }
    if (off_size > 0)
        result.warnings.push_back(std::to_string(off_size) + " of " +
                                  std::to_string(result.manifest.entries.size()) +
                                  " masks are not " + std::to_string(kExpectedImageSide) + "x" +
                                  std::to_string(kExpectedImageSide));
    return result;
}

DatasetManifest stratified_split(const DatasetManifest& manifest, double val_fraction,
                                 std::uint64_t seed) {
    if (!(val_fraction >= 0.0 && val_fraction <= 1.0))
        throw ValueOutOfRange("val_fraction must lie in [0,1]");
    for (const auto& e : manifest.entries)
        if (e.split != Split::train)
            throw NonTrainEntries("entry " + e.id + " has split " + to_string(e.split) +
                                  "; the split expects a pure training manifest");

    std::map<std::string, std::vector<std::size_t>> by_source;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i)
        by_source[manifest.entries[i].source_dataset].push_back(i);

    DatasetManifest out = manifest;
    std::mt19937_64 engine(seed);

    // by_source iterates in sorted key order and groups are sorted by id
    // before shuffling, so the outcome depends only on (contents, seed).
    for (auto& [source, indices] : by_source) {
        std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
            return manifest.entries[a].id < manifest.entries[b].id;
        });
        deterministic_shuffle(indices, engine);

        std::size_t n = indices.size();
        auto n_val = static_cast<std::size_t>(
            std::floor(val_fraction * static_cast<double>(n) + 1e-9));
        if (n_val == 0 && n >= 1 && val_fraction > 0.0) n_val = 1;
        n_val = std::min(n_val, n);
        for (std::size_t k = 0; k < n_val; ++k) out.entries[indices[k]].split = Split::val;
    }
    return out;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    std::set<std::string> ids;
    for (const auto& e : manifest.entries)
        if (!ids.insert(e.id).second)
            throw ManifestError("duplicate entry id: " + e.id);

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "id,image_path,mask_path,probmap_path,source_dataset,split\n";
    for (const auto& e : manifest.entries) {
        out << csv::join({e.id, e.image_path.generic_string(), e.mask_path.generic_string(),
                          e.probmap_path.generic_string(), e.source_dataset,
                          to_string(e.split)})
            << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("no such manifest: " + path.string());

    DatasetManifest manifest;
    manifest.root = fs::absolute(path).parent_path();

    std::string line;
    int line_no = 0;
    bool saw_header = false;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!saw_header) {
            saw_header = true;  // header is fixed; tolerate but do not require column renames
            continue;
        }
        if (line.empty() || line == "\r") continue;

        std::vector<std::string> fields;
        try {
            fields = csv::split_line(line);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (fields.size() != 6)
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));

        ManifestEntry e;
        e.id = fields[0];
        e.image_path = fields[1];
        e.mask_path = fields[2];
        e.probmap_path = fields[3];
        e.source_dataset = fields[4];
        try {
            e.split = split_from_string(fields[5]);
        } catch (const ParseError& err) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
        }
        if (!ids.insert(e.id).second)
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": duplicate entry id: " + e.id);
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

}  // namespace swcrack
