// swcrack command-line tool: dataset discovery, stratified splitting,
// stochastic-width mask augmentation, component-preserving threshold
// calibration, threshold application and metric reports.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swcrack/calibration.hpp"
#include "swcrack/components.hpp"
#include "swcrack/dataset.hpp"
#include "swcrack/error.hpp"
#include "swcrack/metrics.hpp"
#include "swcrack/morphology.hpp"
#include "swcrack/parallel.hpp"
#include "swcrack/png_io.hpp"
#include "swcrack/raster.hpp"
#include "swcrack/synth.hpp"

namespace fs = std::filesystem;
using namespace swcrack;

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

Connectivity connectivity_from_flag(const std::string& s) {
    return s == "four" ? Connectivity::four : Connectivity::eight;
}

std::vector<const ManifestEntry*> entries_in_split(const DatasetManifest& manifest, Split split) {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : manifest.entries)
        if (e.split == split) out.push_back(&e);
    return out;
}

const ManifestEntry& require_probmap(const ManifestEntry& e) {
    if (e.probmap_path.empty())
        throw ManifestError("entry " + e.id + " has no probability map");
    return e;
}

std::string sw_suffix(double threshold) {
    return "_SW" + std::to_string(std::lround(threshold * 100.0));
}

// --- discover ---

struct DiscoverOpts {
    std::string root;
    std::string out_manifest;
    std::string prefix_map_path;
};

int run_discover(const DiscoverOpts& opt) {
    PrefixMap prefixes =
        opt.prefix_map_path.empty() ? default_prefix_map() : load_prefix_map(opt.prefix_map_path);
    DiscoverResult result = discover(opt.root, prefixes);
    write_manifest(result.manifest, opt.out_manifest);
    for (const auto& name : result.unmatched)
        std::cerr << "warning: no source prefix matches " << name << " (source set to unknown)\n";
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    std::cout << "wrote: " << opt.out_manifest << " (" << result.manifest.entries.size()
              << " entries)\n";
    return 0;
}

// --- split ---

struct SplitOpts {
    std::string in_manifest;
    std::string out_manifest;
    double val_fraction = 0.2;
    std::uint64_t seed = 42;
};

int run_split(const SplitOpts& opt) {
    DatasetManifest manifest = read_manifest(opt.in_manifest);
    DatasetManifest split = stratified_split(manifest, opt.val_fraction, opt.seed);
    write_manifest(split, opt.out_manifest);
    std::size_t n_val = entries_in_split(split, Split::val).size();
    std::cout << "wrote: " << opt.out_manifest << " (" << n_val << " of " << split.entries.size()
              << " entries moved to val, seed " << opt.seed << ")\n";
    return 0;
}

// --- augment ---

struct AugmentOpts {
    std::string manifest;
    std::string out_dir;
    std::string out_manifest;
    int jobs = 0;
};

int run_augment(const AugmentOpts& opt) {
    DatasetManifest manifest = read_manifest(opt.manifest);
    DatasetManifest augmented = augment_dataset(manifest, opt.out_dir, opt.jobs);
    fs::path out_manifest =
        opt.out_manifest.empty() ? fs::path(opt.out_dir) / "manifest.csv" : fs::path(opt.out_manifest);
    write_manifest(augmented, out_manifest);
    std::cout << "wrote: " << out_manifest.string() << " (" << augmented.entries.size()
              << " entries)\n";
    return 0;
}

// --- calibrate ---

struct CalibrateOpts {
    std::string manifest;
    std::string out_report;
    std::string histogram_csv;
    std::string connectivity = "eight";
    std::string split = "val";
    int jobs = 0;
};

int run_calibrate(const CalibrateOpts& opt) {
    DatasetManifest manifest = read_manifest(opt.manifest);
    Connectivity conn = connectivity_from_flag(opt.connectivity);
    auto entries = entries_in_split(manifest, split_from_string(opt.split));
    for (const auto* e : entries) require_probmap(*e);

    std::vector<std::optional<PerImageThreshold>> results(entries.size());
    parallel_for(entries.size(), opt.jobs, [&](std::size_t i) {
        ProbabilityMap map = load_probmap(resolve_path(manifest, entries[i]->probmap_path));
        try {
            results[i] = per_image_threshold(map, conn, entries[i]->id);
        } catch (const EmptyPrediction&) {
            results[i] = std::nullopt;  // image predicts no crack at all; skip it
        }
    });

    std::vector<PerImageThreshold> collected;
    std::vector<std::string> skipped;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i])
            collected.push_back(*results[i]);
        else
            skipped.push_back(entries[i]->id);
    }
    for (const auto& id : skipped)
        std::cerr << "warning: skipped " << id << " (empty initial prediction)\n";

    ThresholdCalibration cal = aggregate_thresholds(std::move(collected));

    std::vector<std::pair<std::string, std::string>> extra = {
        {"connectivity", opt.connectivity},
        {"n_skipped", std::to_string(skipped.size())},
    };
    write_text_file(opt.out_report, calibration_report_text(cal, extra));
    std::cout << "wrote: " << opt.out_report << "\n";
    if (!opt.histogram_csv.empty()) {
        write_text_file(opt.histogram_csv, threshold_histogram_csv(cal));
        std::cout << "wrote: " << opt.histogram_csv << "\n";
    }
    std::cout << "global_threshold=" << cal.global_threshold << " (rounded "
              << format_rounded(cal.global_threshold, 2) << ") from " << cal.per_image.size()
              << " images\n";
    return 0;
}

// --- apply ---

struct ApplyOpts {
    std::string manifest;
    std::string out_dir;
    double threshold = 0.95;
    std::string split = "test";
    int jobs = 0;
};

int run_apply(const ApplyOpts& opt) {
    if (!(opt.threshold >= 0.0 && opt.threshold <= 1.0))
        throw ValueOutOfRange("--threshold must lie in [0,1]");
    DatasetManifest manifest = read_manifest(opt.manifest);
    auto entries = entries_in_split(manifest, split_from_string(opt.split));
    for (const auto* e : entries) require_probmap(*e);

    std::error_code ec;
    fs::create_directories(opt.out_dir, ec);
    std::string suffix = sw_suffix(opt.threshold);

    parallel_for(entries.size(), opt.jobs, [&](std::size_t i) {
        ProbabilityMap map = load_probmap(resolve_path(manifest, entries[i]->probmap_path));
        BinaryMask pred = apply_threshold(map, opt.threshold);
        save_mask(pred, fs::path(opt.out_dir) / (entries[i]->id + suffix + ".png"));
    });

    std::cout << "wrote: " << entries.size() << " masks to " << opt.out_dir << " (suffix "
              << suffix << ")\n";
    return 0;
}

// --- evaluate ---

struct EvaluateOpts {
    std::string manifest;
    std::string pred_dir;
    std::string out_csv;
    std::string per_dataset_csv;
    std::string suffix;
    std::string split = "test";
    std::string label = "eval";
    bool macro = false;
    int jobs = 0;
};

int run_evaluate(const EvaluateOpts& opt) {
    DatasetManifest manifest = read_manifest(opt.manifest);
    auto entries = entries_in_split(manifest, split_from_string(opt.split));

    struct PerEntry {
        ConfusionCounts counts;
        bool pred_has = false;
        bool gt_has = false;
        double crack_iou = 1.0;
    };
    std::vector<PerEntry> rows(entries.size());

    parallel_for(entries.size(), opt.jobs, [&](std::size_t i) {
        fs::path pred_path = fs::path(opt.pred_dir) / (entries[i]->id + opt.suffix + ".png");
        if (!fs::exists(pred_path))
            throw MissingPrediction("entry " + entries[i]->id + ": expected " + pred_path.string());
        BinaryMask pred = load_mask(pred_path);
        BinaryMask gt = load_mask(resolve_path(manifest, entries[i]->mask_path));
        PerEntry& row = rows[i];
        row.counts = confusion(pred, gt);
        row.pred_has = (row.counts.tp + row.counts.fp) > 0;
        row.gt_has = (row.counts.tp + row.counts.fn) > 0;
        row.crack_iou = class_metrics(row.counts).iou;
    });

    ConfusionCounts pooled;
    std::uint64_t image_fp = 0, image_fn = 0;
    double macro_sum = 0;
    for (const auto& row : rows) {
        pooled += row.counts;
        if (!row.gt_has && row.pred_has) ++image_fp;
        if (row.gt_has && !row.pred_has) ++image_fn;
        macro_sum += row.crack_iou;
    }
    double macro = rows.empty() ? 1.0 : macro_sum / static_cast<double>(rows.size());
    MetricsReport report = report_from_counts(pooled, image_fp, image_fn, rows.size(), macro);

    write_text_file(opt.out_csv, metrics_csv_header(opt.macro) + "\n" +
                                     metrics_csv_row(opt.label, report, opt.macro) + "\n");
    std::cout << "wrote: " << opt.out_csv << "\n";

    if (!opt.per_dataset_csv.empty()) {
        std::vector<std::pair<std::string, ConfusionCounts>> per_image;
        for (std::size_t i = 0; i < entries.size(); ++i)
            per_image.emplace_back(entries[i]->source_dataset, rows[i].counts);
        write_text_file(opt.per_dataset_csv, per_dataset_csv(group_crack_iou(per_image)));
        std::cout << "wrote: " << opt.per_dataset_csv << "\n";
    }

    char line[512];
    std::snprintf(line, sizeof line,
                  "label=%s n_images=%zu mIoU=%.9g mF1=%.9g FN=%llu FP=%llu C_IoU=%.9g B_IoU=%.9g "
                  "C_P=%.9g C_R=%.9g C_F1=%.9g B_F1=%.9g",
                  opt.label.c_str(), report.n_images, report.mean_iou, report.mean_f1,
                  static_cast<unsigned long long>(report.image_fn),
                  static_cast<unsigned long long>(report.image_fp), report.crack_iou,
                  report.background_iou, report.crack_precision, report.crack_recall,
                  report.crack_f1, report.background_f1);
    std::cout << line << "\n";
    return 0;
}

// --- sweep ---

struct SweepOpts {
    std::string manifest;
    std::string out_csv;
    double lo = 0.90;
    double hi = 0.98;
    double step = 0.01;
    std::string split = "test";
    int jobs = 0;
};

int run_sweep(const SweepOpts& opt) {
    DatasetManifest manifest = read_manifest(opt.manifest);
    auto entries = entries_in_split(manifest, split_from_string(opt.split));
    for (const auto* e : entries) require_probmap(*e);

    auto rows = sweep_thresholds(
        entries.size(),
        [&](std::size_t i) { return load_probmap(resolve_path(manifest, entries[i]->probmap_path)); },
        [&](std::size_t i) { return load_mask(resolve_path(manifest, entries[i]->mask_path)); },
        opt.lo, opt.hi, opt.step, opt.jobs);

    std::string csv = metrics_csv_header(false, "threshold") + "\n";
    for (const auto& row : rows)
        csv += metrics_csv_row(format_rounded(row.threshold, 2), row.report) + "\n";
    write_text_file(opt.out_csv, csv);
    std::cout << "wrote: " << opt.out_csv << " (" << rows.size() << " thresholds over "
              << entries.size() << " images)\n";
    return 0;
}

// --- synth ---

struct SynthOpts {
    std::string out_dir;
    std::string config_path;
    int count = 20;
    int predilate = 3;
    SynthConfig cfg;
    // set by CLI11 when the flag appeared explicitly
    bool count_set = false, predilate_set = false, width_set = false, height_set = false,
         steps_set = false, walks_set = false, base_set = false, sigma_set = false,
         blur_set = false, seed_set = false;
};

void apply_synth_config_file(SynthOpts& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw FileNotFound("no such config: " + opt.config_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw ParseError(opt.config_path + ":" + std::to_string(line_no) +
                             ": expected key=value");
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        try {
            if (key == "width" && !opt.width_set) opt.cfg.width = std::stoi(value);
            else if (key == "height" && !opt.height_set) opt.cfg.height = std::stoi(value);
            else if (key == "walk_steps" && !opt.steps_set) opt.cfg.walk_steps = std::stoi(value);
            else if (key == "walk_count" && !opt.walks_set) opt.cfg.walk_count = std::stoi(value);
            else if (key == "base_width" && !opt.base_set) opt.cfg.base_width = std::stoi(value);
            else if (key == "noise_sigma" && !opt.sigma_set) opt.cfg.noise_sigma = std::stod(value);
            else if (key == "blur_radius" && !opt.blur_set) opt.cfg.blur_radius = std::stoi(value);
            else if (key == "seed" && !opt.seed_set) opt.cfg.seed = std::stoull(value);
            else if (key == "count" && !opt.count_set) opt.count = std::stoi(value);
            else if (key == "predilate" && !opt.predilate_set) opt.predilate = std::stoi(value);
            else if (key != "width" && key != "height" && key != "walk_steps" &&
                     key != "walk_count" && key != "base_width" && key != "noise_sigma" &&
                     key != "blur_radius" && key != "seed" && key != "count" &&
                     key != "predilate")
                throw ParseError(opt.config_path + ":" + std::to_string(line_no) +
                                 ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ParseError(opt.config_path + ":" + std::to_string(line_no) + ": bad value for " +
                             key);
        }
    }
}

int run_synth(SynthOpts& opt) {
    if (!opt.config_path.empty()) apply_synth_config_file(opt);
    if (opt.count < 1) throw ValueOutOfRange("--count must be >= 1");

    fs::path root(opt.out_dir);
    std::error_code ec;
    fs::create_directories(root / "images", ec);
    fs::create_directories(root / "masks", ec);
    fs::create_directories(root / "probmaps", ec);

    DatasetManifest manifest;
    manifest.root = fs::absolute(root);
    manifest.entries.resize(static_cast<std::size_t>(opt.count));
    int n_val = (opt.count + 1) / 2;  // first half calibrates, second half evaluates

    parallel_for(static_cast<std::size_t>(opt.count), 0, [&](std::size_t i) {
        SynthConfig cfg = opt.cfg;
        cfg.seed = opt.cfg.seed + i;

        char name[32];
        std::snprintf(name, sizeof name, "synth_%03zu", i);

        BinaryMask gt = generate_crack_mask(cfg);
        // widening before corruption emulates a model that over-predicts
        // crack width, which thresholding is then expected to trim back
        BinaryMask blob = opt.predilate > 1 ? dilate(gt, opt.predilate) : gt;
        ProbabilityMap pm = corrupt_to_probmap(blob, cfg);

        save_mask(gt, root / "masks" / (std::string(name) + ".png"));
        save_probmap(pm, root / "probmaps" / (std::string(name) + ".pmap"), ProbmapFormat::raw);

        std::vector<std::uint8_t> render(pm.data.size());
        for (std::size_t px = 0; px < pm.data.size(); ++px)
            render[px] = static_cast<std::uint8_t>(
                std::lround(static_cast<double>(pm.data[px]) * 255.0));
        png_io::write_gray8(root / "images" / (std::string(name) + ".png"), pm.width, pm.height,
                            render.data());

        ManifestEntry e;
        e.id = name;
        e.image_path = fs::path("images") / (std::string(name) + ".png");
        e.mask_path = fs::path("masks") / (std::string(name) + ".png");
        e.probmap_path = fs::path("probmaps") / (std::string(name) + ".pmap");
        e.source_dataset = "synthetic";
        e.split = static_cast<int>(i) < n_val ? Split::val : Split::test;
        manifest.entries[i] = std::move(e);
    });

    fs::path manifest_path = root / "manifest.csv";
    write_manifest(manifest, manifest_path);
    std::cout << "wrote: " << manifest_path.string() << " (" << opt.count << " images, " << n_val
              << " val / " << opt.count - n_val << " test)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-width crack segmentation toolkit"};
    app.require_subcommand(1);

    DiscoverOpts discover_opts;
    auto* cmd_discover = app.add_subcommand(
        "discover", "Scan a dataset tree and write a manifest CSV");
    cmd_discover->add_option("root", discover_opts.root, "dataset root directory")->required();
    cmd_discover->add_option("out_manifest", discover_opts.out_manifest, "output manifest CSV")
        ->required();
    cmd_discover->add_option("--prefix-map", discover_opts.prefix_map_path,
                             "prefix=source rules file (default: built-in rules)");

    SplitOpts split_opts;
    auto* cmd_split = app.add_subcommand(
        "split", "Move a stratified fraction of each source dataset from train to val");
    cmd_split->add_option("in_manifest", split_opts.in_manifest)->required();
    cmd_split->add_option("out_manifest", split_opts.out_manifest)->required();
    cmd_split->add_option("--val-fraction", split_opts.val_fraction,
                          "fraction of each source moved to val");
    cmd_split->add_option("--seed", split_opts.seed, "shuffle seed");

    AugmentOpts augment_opts;
    auto* cmd_augment = app.add_subcommand(
        "augment", "Write the stochastic-width mask ladder (_sw0/_sw3/_sw5/_sw8) for every "
                   "training entry");
    cmd_augment->add_option("manifest", augment_opts.manifest)->required();
    cmd_augment->add_option("out_dir", augment_opts.out_dir)->required();
    cmd_augment->add_option("--out-manifest", augment_opts.out_manifest,
                            "default: <out_dir>/manifest.csv");
    cmd_augment->add_option("--jobs", augment_opts.jobs, "worker threads (0 = logical CPUs)");

    CalibrateOpts calibrate_opts;
    auto* cmd_calibrate = app.add_subcommand(
        "calibrate", "Derive the global probability threshold from per-image component-preserving "
                     "searches");
    cmd_calibrate->add_option("manifest", calibrate_opts.manifest)->required();
    cmd_calibrate->add_option("out_report", calibrate_opts.out_report)->required();
    cmd_calibrate->add_option("--histogram-csv", calibrate_opts.histogram_csv,
                              "also write the threshold histogram CSV");
    cmd_calibrate
        ->add_option("--connectivity", calibrate_opts.connectivity, "component connectivity")
        ->check(CLI::IsMember({"eight", "four"}));
    cmd_calibrate->add_option("--split", calibrate_opts.split, "manifest split to calibrate on")
        ->check(CLI::IsMember({"train", "val", "test"}));
    cmd_calibrate->add_option("--jobs", calibrate_opts.jobs, "worker threads (0 = logical CPUs)");

    ApplyOpts apply_opts;
    auto* cmd_apply = app.add_subcommand(
        "apply", "Threshold probability maps into prediction masks named <id>_SW<T*100>.png");
    cmd_apply->add_option("manifest", apply_opts.manifest)->required();
    cmd_apply->add_option("out_dir", apply_opts.out_dir)->required();
    cmd_apply->add_option("--threshold", apply_opts.threshold, "probability cutoff")->required();
    cmd_apply->add_option("--split", apply_opts.split, "manifest split to apply on")
        ->check(CLI::IsMember({"train", "val", "test"}));
    cmd_apply->add_option("--jobs", apply_opts.jobs, "worker threads (0 = logical CPUs)");

    EvaluateOpts evaluate_opts;
    auto* cmd_evaluate = app.add_subcommand(
        "evaluate", "Score prediction masks against manifest ground truth");
    cmd_evaluate->add_option("manifest", evaluate_opts.manifest)->required();
    cmd_evaluate->add_option("pred_dir", evaluate_opts.pred_dir)->required();
    cmd_evaluate->add_option("out_csv", evaluate_opts.out_csv)->required();
    cmd_evaluate->add_option("--suffix", evaluate_opts.suffix,
                             "prediction filename suffix, e.g. _SW95");
    cmd_evaluate->add_option("--split", evaluate_opts.split, "manifest split to evaluate")
        ->check(CLI::IsMember({"train", "val", "test"}));
    cmd_evaluate->add_option("--per-dataset", evaluate_opts.per_dataset_csv,
                             "also write per-source-dataset crack IoU CSV");
    cmd_evaluate->add_option("--label", evaluate_opts.label, "approach label in the report row");
    cmd_evaluate->add_flag("--macro", evaluate_opts.macro,
                           "append the per-image-averaged crack IoU column");
    cmd_evaluate->add_option("--jobs", evaluate_opts.jobs, "worker threads (0 = logical CPUs)");

    SweepOpts sweep_opts;
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "Evaluate a grid of thresholds against ground truth");
    cmd_sweep->add_option("manifest", sweep_opts.manifest)->required();
    cmd_sweep->add_option("out_csv", sweep_opts.out_csv)->required();
    cmd_sweep->add_option("--lo", sweep_opts.lo, "grid start");
    cmd_sweep->add_option("--hi", sweep_opts.hi, "grid end (inclusive)");
    cmd_sweep->add_option("--step", sweep_opts.step, "grid step");
    cmd_sweep->add_option("--split", sweep_opts.split, "manifest split to sweep")
        ->check(CLI::IsMember({"train", "val", "test"}));
    cmd_sweep->add_option("--jobs", sweep_opts.jobs, "worker threads (0 = logical CPUs)");

    SynthOpts synth_opts;
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate a synthetic crack dataset (masks, probability maps, manifest)");
    cmd_synth->add_option("out_dir", synth_opts.out_dir)->required();
    cmd_synth->add_option("--config", synth_opts.config_path, "key=value config file");
    auto* o_count = cmd_synth->add_option("--count", synth_opts.count, "number of images");
    auto* o_seed = cmd_synth->add_option("--seed", synth_opts.cfg.seed, "base seed");
    auto* o_width = cmd_synth->add_option("--width", synth_opts.cfg.width);
    auto* o_height = cmd_synth->add_option("--height", synth_opts.cfg.height);
    auto* o_steps = cmd_synth->add_option("--walk-steps", synth_opts.cfg.walk_steps);
    auto* o_walks = cmd_synth->add_option("--walk-count", synth_opts.cfg.walk_count);
    auto* o_base = cmd_synth->add_option("--base-width", synth_opts.cfg.base_width);
    auto* o_sigma = cmd_synth->add_option("--noise-sigma", synth_opts.cfg.noise_sigma);
    auto* o_blur = cmd_synth->add_option("--blur-radius", synth_opts.cfg.blur_radius);
    auto* o_pred = cmd_synth->add_option(
        "--predilate", synth_opts.predilate,
        "widen the mask by this kernel before corruption so the probability map over-predicts "
        "crack width (<=1 disables)");

    try {
        app.parse(argc, argv);

        if (cmd_discover->parsed()) return run_discover(discover_opts);
        if (cmd_split->parsed()) return run_split(split_opts);
        if (cmd_augment->parsed()) return run_augment(augment_opts);
        if (cmd_calibrate->parsed()) return run_calibrate(calibrate_opts);
        if (cmd_apply->parsed()) return run_apply(apply_opts);
        if (cmd_evaluate->parsed()) return run_evaluate(evaluate_opts);
        if (cmd_sweep->parsed()) return run_sweep(sweep_opts);
        if (cmd_synth->parsed()) {
            synth_opts.count_set = o_count->count() > 0;
            synth_opts.seed_set = o_seed->count() > 0;
            synth_opts.width_set = o_width->count() > 0;
            synth_opts.height_set = o_height->count() > 0;
            synth_opts.steps_set = o_steps->count() > 0;
            synth_opts.walks_set = o_walks->count() > 0;
            synth_opts.base_set = o_base->count() > 0;
            synth_opts.sigma_set = o_sigma->count() > 0;
            synth_opts.blur_set = o_blur->count() > 0;
            synth_opts.predilate_set = o_pred->count() > 0;
            return run_synth(synth_opts);
        }
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
