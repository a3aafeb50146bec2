#include "swcrack/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "swcrack/error.hpp"
#include "swcrack/parallel.hpp"

namespace swcrack {

BinPartition make_bin_partition(double lo, double hi) {
    if (!(lo <= hi)) throw ValueOutOfRange("bin partition needs lo <= hi");
    BinPartition bins;
    bins.lo = lo;
    bins.hi = hi;
    double width = (hi - lo) / 10.0;
    for (int i = 0; i <= 10; ++i) bins.edges[static_cast<std::size_t>(i)] = lo + width * i;
    bins.edges[0] = lo;
    bins.edges[10] = hi;  // pin the extremes against accumulation error
    return bins;
}

int bin_index(const BinPartition& bins, double v) {
    if (bins.hi <= bins.lo) return 9;
    auto idx = static_cast<int>(std::floor((v - bins.lo) / (bins.hi - bins.lo) * 10.0));
    return std::clamp(idx, 0, 9);
}

const char* to_string(SearchTermination t) {
    switch (t) {
        case SearchTermination::equality_found: return "equality_found";
        case SearchTermination::exhausted_bins: return "exhausted_bins";
        case SearchTermination::exhausted_subbins: return "exhausted_subbins";
    }
    return "equality_found";
}

SearchTermination termination_from_string(const std::string& s) {
    if (s == "equality_found") return SearchTermination::equality_found;
    if (s == "exhausted_bins") return SearchTermination::exhausted_bins;
    if (s == "exhausted_subbins") return SearchTermination::exhausted_subbins;
    throw ParseError("unknown termination value: '" + s + "'");
}

BinaryMask apply_threshold(const ProbabilityMap& map, double t) {
    // compare at the precision of the stored data, so a pixel written as
    // 0.95 passes an inclusive 0.95 cutoff
    float cutoff = static_cast<float>(t);
    BinaryMask mask(map.width, map.height);
    for (std::size_t i = 0; i < map.data.size(); ++i)
        mask.data[i] = map.data[i] >= cutoff ? 1 : 0;
    return mask;
}

BinaryMask initial_prediction(const ProbabilityMap& map) { return apply_threshold(map, 0.5); }

PerImageThreshold per_image_threshold(const ProbabilityMap& map, Connectivity conn,
                                      std::string image_id) {
    BinaryMask initial = initial_prediction(map);
    if (initial.crack_count() == 0)
        throw EmptyPrediction("initial prediction has no crack pixels" +
                              (image_id.empty() ? std::string() : " (image " + image_id + ")"));

    PerImageThreshold result;
    result.image_id = std::move(image_id);
    result.n_initial = count(initial, conn);

    auto [mn_it, mx_it] = std::minmax_element(map.data.begin(), map.data.end());
    BinPartition bins =
        make_bin_partition(static_cast<double>(*mn_it), static_cast<double>(*mx_it));

    auto components_at = [&](double t) { return count(apply_threshold(map, t), conn); };

    // Level 1: raise the threshold one upper bin edge at a time until the
    // thresholded prediction has more components than the initial one.
    int trigger = -1;
    for (int idx = 0; idx < 10; ++idx) {
        if (components_at(bins.edges[static_cast<std::size_t>(idx) + 1]) > result.n_initial) {
            trigger = idx;
            break;
        }
    }
    if (trigger < 0) {
        result.threshold = bins.edges[10];
        result.levels_used = 1;
        result.terminated_by = SearchTermination::exhausted_bins;
        return result;
    }

    // Level 2: sub-bin the triggering bin and walk back down from its top
    // edge until the component count is restored.
    BinPartition sub = make_bin_partition(bins.edges[static_cast<std::size_t>(trigger)],
                                          bins.edges[static_cast<std::size_t>(trigger) + 1]);
    result.levels_used = 2;
    for (int j = 10; j >= 1; --j) {
        double t = sub.edges[static_cast<std::size_t>(j)];
        if (components_at(t) == result.n_initial) {
            result.threshold = t;
            result.terminated_by = SearchTermination::equality_found;
            return result;
        }
    }
    result.threshold = sub.edges[1];
    result.terminated_by = SearchTermination::exhausted_subbins;
    return result;
}

ThresholdCalibration aggregate_thresholds(std::vector<PerImageThreshold> per_image) {
    if (per_image.empty()) throw EmptyInput("no per-image thresholds to aggregate");

    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& p : per_image) {
        mn = std::min(mn, p.threshold);
        mx = std::max(mx, p.threshold);
    }

    ThresholdCalibration cal;
    cal.final_bins = make_bin_partition(mn, mx);

    std::array<std::size_t, 10> counts{};
    for (const auto& p : per_image)
        ++counts[static_cast<std::size_t>(bin_index(cal.final_bins, p.threshold))];

    int modal = 0;
    for (int i = 0; i < 10; ++i)  // >= so ties break toward the higher bin
        if (counts[static_cast<std::size_t>(i)] >= counts[static_cast<std::size_t>(modal)])
            modal = i;

    cal.modal_bin_index = modal;
    cal.global_threshold = (cal.final_bins.edges[static_cast<std::size_t>(modal)] +
                            cal.final_bins.edges[static_cast<std::size_t>(modal) + 1]) /
                           2.0;
    cal.per_image = std::move(per_image);
    return cal;
}

std::vector<double> sweep_grid(double lo, double hi, double step) {
    if (!(lo <= hi)) throw ValueOutOfRange("sweep needs lo <= hi");
    if (!(step > 0)) throw ValueOutOfRange("sweep needs step > 0");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double t = lo + step * i;
        if (t > hi + 1e-9) break;
        grid.push_back(t);
    }
    return grid;
}

std::vector<SweepRow> sweep_thresholds(std::size_t n,
                                       const std::function<ProbabilityMap(std::size_t)>& map_at,
                                       const std::function<BinaryMask(std::size_t)>& gt_at,
                                       double lo, double hi, double step, int jobs) {
    std::vector<double> grid = sweep_grid(lo, hi, step);
    if (n == 0) return {};

    struct PerImage {
        std::vector<ConfusionCounts> counts;  // one per grid threshold
        std::vector<double> crack_iou;
    };
    std::vector<PerImage> images(n);

    parallel_for(n, jobs, [&](std::size_t i) {
        ProbabilityMap map = map_at(i);
        BinaryMask gt = gt_at(i);
        PerImage& img = images[i];
        img.counts.resize(grid.size());
        img.crack_iou.resize(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            ConfusionCounts c = confusion(apply_threshold(map, grid[g]), gt);
            img.counts[g] = c;
            img.crack_iou[g] = class_metrics(c).iou;
        }
    });

    std::vector<SweepRow> rows(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        ConfusionCounts pooled;
        std::uint64_t image_fp = 0, image_fn = 0;
        double macro_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const ConfusionCounts& c = images[i].counts[g];
            pooled += c;
            bool pred_has = (c.tp + c.fp) > 0;
            bool gt_has = (c.tp + c.fn) > 0;
            if (!gt_has && pred_has) ++image_fp;
            if (gt_has && !pred_has) ++image_fn;
            macro_sum += images[i].crack_iou[g];
        }
        rows[g].threshold = grid[g];
        rows[g].report = report_from_counts(pooled, image_fp, image_fn, n,
                                            macro_sum / static_cast<double>(n));
    }
    return rows;
}

std::vector<SweepRow> sweep_thresholds(const std::vector<ProbabilityMap>& maps,
                                       const std::vector<BinaryMask>& gts, double lo, double hi,
                                       double step) {
    if (maps.size() != gts.size())
        throw LengthMismatch("got " + std::to_string(maps.size()) + " probability maps for " +
                             std::to_string(gts.size()) + " ground truths");
    return sweep_thresholds(
        maps.size(), [&](std::size_t i) { return maps[i]; },
        [&](std::size_t i) { return gts[i]; }, lo, hi, step, 0);
}

namespace {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string threshold_histogram_csv(const ThresholdCalibration& cal) {
    std::string out = "bin_lo,bin_hi,count\n";

    std::array<std::size_t, 10> counts{};
    for (const auto& p : cal.per_image)
        ++counts[static_cast<std::size_t>(bin_index(cal.final_bins, p.threshold))];
    for (int i = 0; i < 10; ++i) {
        out += fmt_g(cal.final_bins.edges[static_cast<std::size_t>(i)]) + "," +
               fmt_g(cal.final_bins.edges[static_cast<std::size_t>(i) + 1]) + "," +
               std::to_string(counts[static_cast<std::size_t>(i)]) + "\n";
    }

    // zoom into the modal bin with ten sub-bins over the same thresholds
    auto m = static_cast<std::size_t>(cal.modal_bin_index);
    BinPartition sub = make_bin_partition(cal.final_bins.edges[m], cal.final_bins.edges[m + 1]);
    std::array<std::size_t, 10> sub_counts{};
    for (const auto& p : cal.per_image)
        if (bin_index(cal.final_bins, p.threshold) == cal.modal_bin_index)
            ++sub_counts[static_cast<std::size_t>(bin_index(sub, p.threshold))];
    for (int i = 0; i < 10; ++i) {
        out += fmt_g(sub.edges[static_cast<std::size_t>(i)]) + "," +
               fmt_g(sub.edges[static_cast<std::size_t>(i) + 1]) + "," +
               std::to_string(sub_counts[static_cast<std::size_t>(i)]) + "\n";
    }
    return out;
}

std::string calibration_report_text(
    const ThresholdCalibration& cal,
    const std::vector<std::pair<std::string, std::string>>& extra) {
    auto m = static_cast<std::size_t>(cal.modal_bin_index);
    std::string out;
    out += "global_threshold=" + fmt_g(cal.global_threshold) + "\n";
    out += "global_threshold_rounded=" + format_rounded(cal.global_threshold, 2) + "\n";
    out += "modal_bin_index=" + std::to_string(cal.modal_bin_index) + "\n";
    out += "modal_bin_lo=" + fmt_g(cal.final_bins.edges[m]) + "\n";
    out += "modal_bin_hi=" + fmt_g(cal.final_bins.edges[m + 1]) + "\n";
    out += "n_images=" + std::to_string(cal.per_image.size()) + "\n";
    for (const auto& [key, value] : extra) out += key + "=" + value + "\n";
    out += "\n";
    // image_id stays last on the line: ids may contain spaces
    for (const auto& p : cal.per_image) {
        out += "threshold=" + fmt_g(p.threshold);
        out += " n_initial=" + std::to_string(p.n_initial);
        out += " levels_used=" + std::to_string(p.levels_used);
        out += " terminated_by=" + std::string(to_string(p.terminated_by));
        out += " image_id=" + p.image_id + "\n";
    }
    return out;
}

double parse_global_threshold(const std::string& report_text) {
    const std::string key = "global_threshold=";
    std::size_t pos = 0;
    while (pos < report_text.size()) {
        std::size_t eol = report_text.find('\n', pos);
        if (eol == std::string::npos) eol = report_text.size();
        if (report_text.compare(pos, key.size(), key) == 0)
            return std::stod(report_text.substr(pos + key.size(), eol - pos - key.size()));
        pos = eol + 1;
    }
    throw ParseError("report has no global_threshold line");
}

}  // namespace swcrack
