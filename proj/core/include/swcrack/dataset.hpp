#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swcrack/error.hpp"

namespace swcrack {

enum class Split { train, val, test };

const char* to_string(Split split);
Split split_from_string(const std::string& s);  // throws ParseError

struct ManifestEntry {
    std::string id;
    std::filesystem::path image_path;
    std::filesystem::path mask_path;
    std::filesystem::path probmap_path;  // empty when no probability map exists
    std::string source_dataset;
    Split split = Split::train;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Image/mask/probmap path triples annotated with source sub-dataset and
/// split. Relative entry paths resolve against root.
struct DatasetManifest {
    std::filesystem::path root;
    std::vector<ManifestEntry> entries;
};

std::filesystem::path resolve_path(const DatasetManifest& manifest,
                                   const std::filesystem::path& p);

/// Ordered filename-prefix -> source-dataset rules; the longest matching
/// prefix wins. Filenames matching no rule map to "unknown".
struct PrefixMap {
    std::vector<std::pair<std::string, std::string>> rules;

    std::string source_for(const std::string& filename) const;
};

/// Parses `prefix=source` lines; blank lines and lines starting with '#' are
/// skipped.
PrefixMap parse_prefix_map(const std::string& text);
PrefixMap load_prefix_map(const std::filesystem::path& path);

/// The stock rules for the merged crack-segmentation corpus whose filenames
/// encode their source as a prefix.
PrefixMap default_prefix_map();

struct DiscoverResult {
    DatasetManifest manifest;
    std::vector<std::string> unmatched;  // files with no prefix rule, reported not failed
    std::vector<std::string> warnings;   // dimension oddities; advisory only
};

/// Side length the merged corpus is resized to; deviations only warn.
inline constexpr int kExpectedImageSide = 448;

/// Walks root and builds a manifest. Supports the train/images, train/masks,
/// test/images, test/masks layout (entries get their folder's split) and a
/// flat images/ + masks/ layout (all entries split=train). Every image must
/// have a same-named mask (same stem, any extension).
DiscoverResult discover(const std::filesystem::path& root, const PrefixMap& prefixes);

/// Reassigns floor(val_fraction * n) entries of each source dataset (at least
/// 1 when the source is nonempty) from train to val, chosen by a seeded
/// shuffle. The same seed always produces the same split. All input entries
/// must have split == train.
DatasetManifest stratified_split(const DatasetManifest& manifest, double val_fraction,
                                 std::uint64_t seed);

/// CSV schema: id,image_path,mask_path,probmap_path,source_dataset,split.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Reads the CSV schema above; the manifest root becomes the CSV's directory.
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace swcrack
