#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swcrack/components.hpp"
#include "swcrack/metrics.hpp"
#include "swcrack/raster.hpp"

namespace swcrack {

/// Ten equal-width bins over [lo, hi]; edges[0] == lo, edges[10] == hi.
/// A degenerate range (hi == lo) collapses every edge onto lo.
struct BinPartition {
    double lo = 0;
    double hi = 0;
    std::array<double, 11> edges{};
};

BinPartition make_bin_partition(double lo, double hi);

/// Histogram bin for v: half-open [edges[i], edges[i+1]) with the last bin
/// closed; out-of-range values clamp to the nearest bin. Degenerate
/// partitions put everything in bin 9.
int bin_index(const BinPartition& bins, double v);

enum class SearchTermination { equality_found, exhausted_bins, exhausted_subbins };

const char* to_string(SearchTermination t);
SearchTermination termination_from_string(const std::string& s);  // throws ParseError

struct PerImageThreshold {
    std::string image_id;
    double threshold = 0;
    std::uint32_t n_initial = 0;  // components in the initial prediction
    int levels_used = 1;          // 1 or 2
    SearchTermination terminated_by = SearchTermination::exhausted_bins;
};

struct ThresholdCalibration {
    std::vector<PerImageThreshold> per_image;
    BinPartition final_bins;     // over [min, max] of the collected thresholds
    int modal_bin_index = 0;
    double global_threshold = 0;  // midpoint of the modal bin
};

/// Binary equivalent of a two-class argmax: crack iff p >= 0.5, ties toward
/// crack.
BinaryMask initial_prediction(const ProbabilityMap& map);

/// Crack iff p >= t.
BinaryMask apply_threshold(const ProbabilityMap& map, double t);

/// The per-image threshold search. Bins the image's pixel probabilities into
/// ten equal-width bins over [min, max], raises the candidate threshold one
/// upper bin edge at a time until the thresholded mask has more connected
/// components than the initial prediction, then sub-bins the triggering bin
/// and descends from its top edge until the component count is restored.
/// The two exhaustion outcomes return the extremal scanned edge and are
/// tagged in terminated_by. Images whose initial prediction is empty raise
/// EmptyPrediction and must be skipped by the caller.
PerImageThreshold per_image_threshold(const ProbabilityMap& map, Connectivity conn,
                                      std::string image_id = {});

/// Histograms the collected per-image thresholds into ten bins over their
/// [min, max]; the global threshold is the midpoint of the most populated
/// bin (ties break toward the higher bin).
ThresholdCalibration aggregate_thresholds(std::vector<PerImageThreshold> per_image);

struct SweepRow {
    double threshold = 0;
    MetricsReport report;
};

/// One evaluation row per threshold in {lo, lo+step, ..., hi}.
std::vector<SweepRow> sweep_thresholds(const std::vector<ProbabilityMap>& maps,
                                       const std::vector<BinaryMask>& gts,
                                       double lo = 0.90, double hi = 0.98,
                                       double step = 0.01);

/// Streaming variant: maps/gts are produced on demand so the whole set never
/// has to sit in memory. jobs == 0 means one worker per logical CPU.
std::vector<SweepRow> sweep_thresholds(std::size_t n,
                                       const std::function<ProbabilityMap(std::size_t)>& map_at,
                                       const std::function<BinaryMask(std::size_t)>& gt_at,
                                       double lo, double hi, double step, int jobs = 0);

std::vector<double> sweep_grid(double lo, double hi, double step);

/// CSV with header bin_lo,bin_hi,count: first the ten full-range bins, then
/// ten sub-bins zooming into the modal bin.
std::string threshold_histogram_csv(const ThresholdCalibration& cal);

/// Human-readable key=value report: the global threshold and its bin, then
/// one line per image. extra key/value pairs land in the header block.
std::string calibration_report_text(
    const ThresholdCalibration& cal,
    const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Pulls global_threshold back out of a calibration_report_text file.
double parse_global_threshold(const std::string& report_text);

}  // namespace swcrack
