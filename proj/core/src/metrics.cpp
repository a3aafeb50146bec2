#include "swcrack/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "swcrack/csv.hpp"
#include "swcrack/error.hpp"

namespace swcrack {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw DimensionMismatch("prediction " + std::to_string(pred.width) + "x" +
                                std::to_string(pred.height) + " vs ground truth " +
                                std::to_string(gt.width) + "x" + std::to_string(gt.height));
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        bool p = pred.data[i] != 0;
        bool g = gt.data[i] != 0;
        if (p && g)
            ++c.tp;
        else if (p && !g)
            ++c.fp;
        else if (!p && g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

ConfusionCounts background_counts(const ConfusionCounts& c) {
    return ConfusionCounts{c.tn, c.fn, c.fp, c.tp};
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassMetrics class_metrics(const ConfusionCounts& c) {
    ClassMetrics m;
    m.iou = ratio(c.tp, c.tp + c.fp + c.fn);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    return m;
}

MetricsReport report_from_counts(const ConfusionCounts& pooled, std::uint64_t image_fp,
                                 std::uint64_t image_fn, std::size_t n_images,
                                 double macro_crack_iou) {
    ClassMetrics crack = class_metrics(pooled);
    ClassMetrics background = class_metrics(background_counts(pooled));

    MetricsReport r;
    r.crack_iou = crack.iou;
    r.background_iou = background.iou;
    r.mean_iou = (crack.iou + background.iou) / 2.0;
    r.crack_precision = crack.precision;
    r.crack_recall = crack.recall;
    r.crack_f1 = crack.f1;
    r.background_f1 = background.f1;
    r.mean_f1 = (crack.f1 + background.f1) / 2.0;
    r.image_fp = image_fp;
    r.image_fn = image_fn;
    r.n_images = n_images;
    r.macro_crack_iou = macro_crack_iou;
    return r;
}

MetricsReport evaluate_set(const std::vector<BinaryMask>& preds,
                           const std::vector<BinaryMask>& gts) {
    if (preds.size() != gts.size())
        throw LengthMismatch("got " + std::to_string(preds.size()) + " predictions for " +
                             std::to_string(gts.size()) + " ground truths");

    ConfusionCounts pooled;
    std::uint64_t image_fp = 0, image_fn = 0;
    double macro_sum = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        ConfusionCounts c = confusion(preds[i], gts[i]);
        pooled += c;
        bool pred_has = (c.tp + c.fp) > 0;
        bool gt_has = (c.tp + c.fn) > 0;
        if (!gt_has && pred_has) ++image_fp;
        if (gt_has && !pred_has) ++image_fn;
        macro_sum += class_metrics(c).iou;
    }
    double macro = preds.empty() ? 1.0 : macro_sum / static_cast<double>(preds.size());
    return report_from_counts(pooled, image_fp, image_fn, preds.size(), macro);
}

std::pair<std::uint64_t, std::uint64_t> image_level_fp_fn(const std::vector<BinaryMask>& preds,
                                                          const std::vector<BinaryMask>& gts) {
    if (preds.size() != gts.size())
        throw LengthMismatch("got " + std::to_string(preds.size()) + " predictions for " +
                             std::to_string(gts.size()) + " ground truths");
    std::uint64_t fp_images = 0, fn_images = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        bool pred_has = preds[i].crack_count() > 0;
        bool gt_has = gts[i].crack_count() > 0;
        if (!gt_has && pred_has) ++fp_images;
        if (gt_has && !pred_has) ++fn_images;
    }
    return {fp_images, fn_images};
}

namespace {

bool dataset_order(const std::string& a, const std::string& b) {
    // case-insensitive name order; the noncrack group sorts last
    bool a_nc = a == "noncrack";
    bool b_nc = b == "noncrack";
    if (a_nc != b_nc) return b_nc;
    auto fold = [](const std::string& s) {
        std::string t = s;
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return t;
    };
    std::string fa = fold(a), fb = fold(b);
    if (fa != fb) return fa < fb;
    return a < b;
}

}  // namespace

std::vector<DatasetRow> group_crack_iou(
    const std::vector<std::pair<std::string, ConfusionCounts>>& per_image) {
    std::map<std::string, ConfusionCounts> grouped;
    for (const auto& [dataset, counts] : per_image) grouped[dataset] += counts;

    std::vector<DatasetRow> rows;
    rows.reserve(grouped.size());
    for (const auto& [dataset, counts] : grouped)
        rows.push_back({dataset, class_metrics(counts).iou, counts});
    std::sort(rows.begin(), rows.end(),
              [](const DatasetRow& a, const DatasetRow& b) { return dataset_order(a.dataset, b.dataset); });
    return rows;
}

std::vector<DatasetRow> per_dataset_report(const DatasetManifest& manifest,
                                           const std::map<std::string, BinaryMask>& preds,
                                           const std::map<std::string, BinaryMask>& gts) {
    std::vector<std::pair<std::string, ConfusionCounts>> per_image;
    for (const auto& e : manifest.entries) {
        if (e.split != Split::test) continue;
        auto pit = preds.find(e.id);
        if (pit == preds.end()) throw MissingPrediction("no prediction for entry " + e.id);
        auto git = gts.find(e.id);
        if (git == gts.end()) throw ManifestError("no ground truth supplied for entry " + e.id);
        per_image.emplace_back(e.source_dataset, confusion(pit->second, git->second));
    }
    return group_crack_iou(per_image);
}

std::string format_rounded(double v, int decimals) {
    long long p10 = 1;
    for (int i = 0; i < decimals; ++i) p10 *= 10;
    // nearbyint under the default rounding mode gives ties-to-even
    auto q = static_cast<long long>(std::nearbyint(v * static_cast<double>(p10)));
    bool negative = q < 0;
    if (negative) q = -q;

    std::string out = std::to_string(q / p10);
    if (decimals > 0) {
        std::string frac = std::to_string(q % p10);
        out += "." + std::string(static_cast<std::size_t>(decimals) - frac.size(), '0') + frac;
    }
    return negative ? "-" + out : out;
}

std::string metrics_csv_header(bool with_macro, const std::string& label_column) {
    std::string h = label_column + ",mIoU,mF1,FN,FP,C_IoU,B_IoU,C_P,C_R,C_F1,B_F1";
    if (with_macro) h += ",macro_C_IoU";
    return h;
}

std::string metrics_csv_row(const std::string& label, const MetricsReport& r, bool with_macro) {
    // column rounding follows the report convention: 3 decimals for the two
    // crack columns, 2 elsewhere
    std::string row = csv::escape(label);
    row += "," + format_rounded(r.mean_iou, 2);
    row += "," + format_rounded(r.mean_f1, 2);
    row += "," + std::to_string(r.image_fn);
    row += "," + std::to_string(r.image_fp);
    row += "," + format_rounded(r.crack_iou, 3);
    row += "," + format_rounded(r.background_iou, 2);
    row += "," + format_rounded(r.crack_precision, 2);
    row += "," + format_rounded(r.crack_recall, 2);
    row += "," + format_rounded(r.crack_f1, 3);
    row += "," + format_rounded(r.background_f1, 2);
    if (with_macro) row += "," + format_rounded(r.macro_crack_iou, 3);
    return row;
}

std::string per_dataset_csv(const std::vector<DatasetRow>& rows) {
    std::string out = "dataset,C_IoU\n";
    for (const auto& row : rows)
        out += csv::escape(row.dataset) + "," + format_rounded(row.crack_iou, 3) + "\n";
    return out;
}

}  // namespace swcrack
