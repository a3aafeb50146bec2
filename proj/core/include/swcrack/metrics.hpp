#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swcrack/dataset.hpp"
#include "swcrack/raster.hpp"

namespace swcrack {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }
    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
        return a += b;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct ClassMetrics {
    double iou = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// Pixel metrics pooled over a whole image set (micro-aggregation), plus the
/// image-level FP/FN counts. macro_crack_iou is the per-image average kept as
/// a secondary diagnostic column; the headline numbers are the pooled ones.
struct MetricsReport {
    double crack_iou = 0;
    double background_iou = 0;
    double mean_iou = 0;
    double crack_precision = 0;
    double crack_recall = 0;
    double crack_f1 = 0;
    double background_f1 = 0;
    double mean_f1 = 0;
    std::uint64_t image_fp = 0;
    std::uint64_t image_fn = 0;
    std::size_t n_images = 0;
    double macro_crack_iou = 0;
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

/// Background counts are the crack counts with tp<->tn and fp<->fn swapped.
ConfusionCounts background_counts(const ConfusionCounts& c);

/// iou = tp/(tp+fp+fn), precision = tp/(tp+fp), recall = tp/(tp+fn),
/// f1 = 2tp/(2tp+fp+fn). A zero denominator defines the metric as 1:
/// nothing to find, nothing found.
ClassMetrics class_metrics(const ConfusionCounts& c);

/// Builds the full report from pooled pixel counts plus per-image data.
MetricsReport report_from_counts(const ConfusionCounts& pooled, std::uint64_t image_fp,
                                 std::uint64_t image_fn, std::size_t n_images,
                                 double macro_crack_iou);

MetricsReport evaluate_set(const std::vector<BinaryMask>& preds,
                           const std::vector<BinaryMask>& gts);

/// fp_images counts images whose ground truth is empty but whose prediction
/// has at least one crack pixel; fn_images the reverse.
std::pair<std::uint64_t, std::uint64_t> image_level_fp_fn(
    const std::vector<BinaryMask>& preds, const std::vector<BinaryMask>& gts);

struct DatasetRow {
    std::string dataset;
    double crack_iou = 0;
    ConfusionCounts counts;
};

/// Micro-aggregated crack IoU per source sub-dataset. Rows sort by name
/// (case-insensitive) with "noncrack" forced last.
std::vector<DatasetRow> group_crack_iou(
    const std::vector<std::pair<std::string, ConfusionCounts>>& per_image);

/// One row per source dataset over the manifest's test entries; preds and gts
/// are keyed by entry id. A test entry without a prediction is an error.
std::vector<DatasetRow> per_dataset_report(const DatasetManifest& manifest,
                                           const std::map<std::string, BinaryMask>& preds,
                                           const std::map<std::string, BinaryMask>& gts);

// --- report serialization ---

/// Rounds half-to-even at `decimals` places and formats with exactly that
/// many digits, e.g. format_rounded(0.7325, 2) == "0.73".
std::string format_rounded(double v, int decimals);

std::string metrics_csv_header(bool with_macro = false,
                               const std::string& label_column = "approach");
std::string metrics_csv_row(const std::string& label, const MetricsReport& r,
                            bool with_macro = false);
std::string per_dataset_csv(const std::vector<DatasetRow>& rows);

}  // namespace swcrack
