// polarkit: demosaic / convert / subsample / validate / stats / eval / synth.
// Exit codes: 0 success, 1 data violation, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarkit/dataset.hpp"
#include "polarkit/error.hpp"
#include "polarkit/evalkit.hpp"
#include "polarkit/image_io.hpp"
#include "polarkit/pipeline.hpp"
#include "polarkit/synth.hpp"

namespace {

using nlohmann::json;
using namespace polarkit;

constexpr int kExitOk = 0;
constexpr int kExitDataViolation = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
    std::string layout = MosaicLayout::default_layout().to_string();
    std::vector<std::string> combos = {"stokes"};
    std::string norm = "fixed";
    bool json_output = false;
    std::optional<std::uint64_t> seed;
};

std::vector<std::string> read_id_list(const std::string& path) {
    std::vector<std::string> ids;
    std::string line;
    if (path == "-") {
        while (std::getline(std::cin, line)) {
            if (!line.empty()) {
                ids.push_back(line);
            }
        }
        return ids;
    }
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    while (std::getline(in, line)) {
        if (!line.empty()) {
            ids.push_back(line);
        }
    }
    return ids;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
}

int cmd_demosaic(const GlobalOptions& global, const std::string& input, const std::string& out_dir) {
    const auto written =
        run_demosaic(input, MosaicLayout::from_string(global.layout), out_dir);
    if (global.json_output) {
        json j = json::array();
        for (const auto& p : written) {
            j.push_back(p.string());
        }
        std::cout << j.dump() << '\n';
    } else {
        for (const auto& p : written) {
            std::cout << p.string() << '\n';
        }
    }
    return kExitOk;
}

int cmd_convert(const GlobalOptions& global, const std::vector<std::string>& inputs,
                const std::string& out_dir, std::optional<double> i_max) {
    PipelineConfig config;
    config.layout = MosaicLayout::from_string(global.layout);
    config.combos.clear();
    for (const std::string& name : global.combos) {
        config.combos.push_back(combo_from_name(name));
    }
    config.norm = norm_mode_from_name(global.norm);
    config.output_dir = out_dir;
    config.i_max = i_max;

    const ConvertResult result =
        run_convert({inputs.begin(), inputs.end()}, config);
    if (global.json_output) {
        json failures = json::array();
        for (const ConvertFailure& f : result.failures) {
            failures.push_back({{"input", f.input.string()}, {"error", f.message}});
        }
        json written = json::array();
        for (const auto& p : result.written) {
            written.push_back(p.string());
        }
        std::cout << json{{"written", written}, {"failures", failures}}.dump() << '\n';
    } else {
        for (const auto& p : result.written) {
            std::cout << p.string() << '\n';
        }
        for (const ConvertFailure& f : result.failures) {
            std::cerr << "failed: " << f.input.string() << ": " << f.message << '\n';
        }
    }
    return result.failures.empty() ? kExitOk : kExitDataViolation;
}

int cmd_subsample(const GlobalOptions& global, const std::string& list_path, int stride) {
    const auto kept = subsample(read_id_list(list_path), stride);
    if (global.json_output) {
        std::cout << json(kept).dump() << '\n';
    } else {
        for (const std::string& id : kept) {
            std::cout << id << '\n';
        }
    }
    return kExitOk;
}

int cmd_validate(const GlobalOptions& global, const std::string& manifest_path) {
    const auto violations = validate(DatasetManifest::load(manifest_path));
    if (global.json_output) {
        std::cout << violations_to_json(violations).dump() << '\n';
    } else {
        for (const Violation& v : violations) {
            std::cout << (v.image_id.empty() ? std::string("<manifest>") : v.image_id) << ": "
                      << v.rule << " (" << v.detail << ")\n";
        }
        if (violations.empty()) {
            std::cout << "ok\n";
        }
    }
    return violations.empty() ? kExitOk : kExitDataViolation;
}

int cmd_stats(const GlobalOptions& global, const std::string& manifest_path,
              std::size_t min_count) {
    const DatasetStats s = stats(DatasetManifest::load(manifest_path), min_count);
    if (global.json_output) {
        std::cout << stats_to_json(s).dump() << '\n';
    } else {
        std::cout << "split: " << s.split << '\n';
        for (const ClassCount& c : s.classes) {
            std::cout << c.class_label << ": " << c.count
                      << (c.insufficient ? " (insufficient)" : "") << '\n';
        }
        std::cout << "total: " << s.total << '\n';
    }
    return kExitOk;
}

int cmd_eval(const GlobalOptions& global, const std::string& gt_path, const std::string& dets_path,
             const std::string& baseline_path, double iou_thresh, const std::string& ap_mode,
             const std::string& format_tag, const std::string& out_path,
             const std::string& csv_path) {
    const DatasetManifest manifest = DatasetManifest::load(gt_path);
    const auto dets = load_detections(dets_path);

    EvalConfig config;
    config.iou_thresh = iou_thresh;
    config.mode = ap_mode_from_name(ap_mode);
    config.format_tag = format_tag;

    std::optional<EvalReport> baseline;
    if (!baseline_path.empty()) {
        baseline = load_report(baseline_path);
    }
    const EvalReport report =
        evaluate(manifest, dets, config, baseline ? &*baseline : nullptr);
    const json j = report_to_json(report);

    if (!out_path.empty()) {
        write_text_file(out_path, j.dump(2) + "\n");
    }
    if (!csv_path.empty()) {
        write_text_file(csv_path, report_to_csv(report));
    }
    if (global.json_output || out_path.empty()) {
        if (global.json_output) {
            std::cout << j.dump() << '\n';
        } else {
            for (const APResult& r : report.per_class) {
                std::cout << r.class_label << ": AP " << r.ap << " (gt " << r.n_ground_truth
                          << ", det " << r.n_detections << ")"
                          << (r.no_ground_truth ? " [no ground truth]" : "") << '\n';
            }
            if (report.map) {
                std::cout << "mAP: " << *report.map << '\n';
            } else {
                std::cout << "mAP: undefined (no instances of the mAP classes)\n";
            }
            for (const ErrorRate& e : report.error_rates) {
                std::cout << "ER " << e.class_label << ": " << e.percent << "%\n";
            }
        }
    }
    return kExitOk;
}

int cmd_synth(const GlobalOptions& global, const std::string& spec_path,
              const std::string& out_dir) {
    SceneSpec spec = SceneSpec::load(spec_path);
    if (global.seed) {
        spec.seed = *global.seed;
    }
    const RawFrame frame = render_raw(spec, MosaicLayout::from_string(global.layout));
    std::filesystem::create_directories(out_dir);
    const auto out_path = std::filesystem::path(out_dir) /
                          (std::filesystem::path(spec_path).stem().string() + ".pgm");
    write_pgm(frame, out_path);
    if (global.json_output) {
        std::cout << json{{"written", out_path.string()},
                          {"width", frame.width},
                          {"height", frame.height},
                          {"max_value", frame.max_value}}
                         .dump()
                  << '\n';
    } else {
        std::cout << out_path.string() << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polarimetric imaging and detection-evaluation toolkit"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--layout", global.layout,
                   "Mosaic layout, row-major superpixel angles (e.g. 0,45,135,90)");
    app.add_option("--combo", global.combos, "Channel combination: intensity, stokes or physics")
        ->check(CLI::IsMember({"intensity", "stokes", "physics"}));
    app.add_option("--norm", global.norm, "Normalization: fixed or per-image")
        ->check(CLI::IsMember({"fixed", "per-image"}));
    app.add_flag("--json", global.json_output, "Machine-parseable JSON on stdout");
    app.add_option("--seed", global.seed, "Override the scene RNG seed");

    auto* demosaic = app.add_subcommand("demosaic", "Split a mosaic frame into angle planes");
    std::string demosaic_input;
    std::string demosaic_out = ".";
    demosaic->add_option("input", demosaic_input, "Raw frame (.pgm or grayscale .png)")
        ->required();
    demosaic->add_option("--out", demosaic_out, "Output directory");

    auto* convert = app.add_subcommand("convert", "Encode frames into 8-bit channel combinations");
    std::vector<std::string> convert_inputs;
    std::string convert_out = ".";
    std::optional<double> convert_imax;
    convert->add_option("inputs", convert_inputs, "Raw frames");
    convert->add_option("--out", convert_out, "Output directory");
    convert->add_option("--imax", convert_imax,
                        "White level override for the fixed normalization ranges");

    auto* subsample_cmd = app.add_subcommand("subsample", "Keep every Nth frame id of a list");
    std::string subsample_list;
    int subsample_stride = 1;
    subsample_cmd->add_option("list", subsample_list, "Frame id list, one per line ('-' = stdin)")
        ->required();
    subsample_cmd->add_option("--stride", subsample_stride, "Keep indices 0, N, 2N, ...")
        ->check(CLI::PositiveNumber);

    auto* validate_cmd = app.add_subcommand("validate", "Check a dataset manifest");
    std::string validate_manifest;
    validate_cmd->add_option("manifest", validate_manifest, "Manifest JSON")->required();

    auto* stats_cmd = app.add_subcommand("stats", "Per-class annotation counts");
    std::string stats_manifest;
    std::size_t stats_min_count = 30;
    stats_cmd->add_option("manifest", stats_manifest, "Manifest JSON")->required();
    stats_cmd->add_option("--min-count", stats_min_count,
                          "Counts below this are flagged insufficient");

    auto* eval = app.add_subcommand("eval", "Evaluate detections against ground truth");
    std::string eval_gt;
    std::string eval_dets;
    std::string eval_baseline;
    std::string eval_out;
    std::string eval_csv;
    std::string eval_mode = "allpoint";
    std::string eval_format;
    double eval_iou = 0.5;
    eval->add_option("--gt", eval_gt, "Ground-truth manifest JSON")->required();
    eval->add_option("--dets", eval_dets, "Detection list JSON")->required();
    eval->add_option("--baseline", eval_baseline, "Baseline report JSON for error-rate evolution");
    eval->add_option("--iou", eval_iou, "IoU match threshold");
    eval->add_option("--ap-mode", eval_mode, "AP interpolation: allpoint or 11point")
        ->check(CLI::IsMember({"allpoint", "11point"}));
    eval->add_option("--format", eval_format, "Channel-combination tag recorded in the report");
    eval->add_option("--out", eval_out, "Write the full report JSON here");
    eval->add_option("--csv", eval_csv, "Write the CSV summary here");

    auto* synth = app.add_subcommand("synth", "Render a synthetic scene to a raw mosaic frame");
    std::string synth_spec;
    std::string synth_out = ".";
    synth->add_option("--spec", synth_spec, "Scene JSON")->required();
    synth->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (demosaic->parsed()) {
            return cmd_demosaic(global, demosaic_input, demosaic_out);
        }
        if (convert->parsed()) {
            return cmd_convert(global, convert_inputs, convert_out, convert_imax);
        }
        if (subsample_cmd->parsed()) {
            return cmd_subsample(global, subsample_list, subsample_stride);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(global, validate_manifest);
        }
        if (stats_cmd->parsed()) {
            return cmd_stats(global, stats_manifest, stats_min_count);
        }
        if (eval->parsed()) {
            return cmd_eval(global, eval_gt, eval_dets, eval_baseline, eval_iou, eval_mode,
                            eval_format, eval_out, eval_csv);
        }
        if (synth->parsed()) {
            return cmd_synth(global, synth_spec, synth_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataViolation;
    }
    return kExitUsage;
}
