#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarkit/dataset.hpp"

namespace polarkit {

/// One detector output. detection_id is assigned canonically from record
/// content (see detections_from_json), so downstream ordering never depends
/// on file order.
struct DetectionRecord {
    std::string image_id;
    std::string class_label;
    BoundingBox box;
    double score = 0.0;
    std::size_t detection_id = 0;
};

/// Intersection over union of two valid boxes, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& b);

enum class ApMode {
    AllPoint,    ///< area under the right-max interpolated PR curve
    ElevenPoint, ///< VOC-2007 mean over recall levels 0.0, 0.1, ..., 1.0
};

std::string ap_mode_name(ApMode mode);
ApMode ap_mode_from_name(const std::string& name);

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;
};

struct APResult {
    std::string class_label;
    double ap = 0.0;
    std::vector<PrPoint> curve; // one point per ranked detection
    std::size_t n_ground_truth = 0;
    std::size_t n_detections = 0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    bool no_ground_truth = false; // detections present but nothing to match
};

/// Greedy VOC-style matching: detections ranked by (score desc, detection_id
/// asc); each one pairs with the max-IoU ground truth of its image (ties to
/// the earlier canonical ground-truth index); a pair is a true positive iff
/// IoU >= iou_thresh and that ground truth is unmatched. Later detections on
/// an already-matched ground truth are false positives. Inputs may hold mixed
/// classes; only `class_label` records participate.
APResult average_precision(const std::vector<Annotation>& gt,
                           const std::vector<DetectionRecord>& dets,
                           const std::string& class_label, double iou_thresh = 0.5,
                           ApMode mode = ApMode::AllPoint);

/// Instance-count-weighted mean: (n_p*ap_p + n_c*ap_c) / (n_p + n_c).
/// Throws ZeroInstancesError when both counts are zero.
double weighted_map(double ap_person, double ap_car, std::size_t n_person, std::size_t n_car);

/// (ap_new - ap_baseline) / (1 - ap_baseline) * 100.
/// Throws BaselinePerfectError when ap_baseline == 1.
double error_rate_evolution(double ap_baseline, double ap_new);

struct EvalConfig {
    double iou_thresh = 0.5;
    ApMode mode = ApMode::AllPoint;
    std::vector<std::string> map_classes = {"car", "person"}; // weighted-mAP members
    std::string format_tag; // free-form channel-combination label carried into the report
};

struct ErrorRate {
    std::string class_label;
    double percent = 0.0;
};

struct EvalReport {
    std::string format_tag;
    double iou_thresh = 0.5;
    ApMode mode = ApMode::AllPoint;
    std::vector<APResult> per_class; // sorted by class label
    std::vector<std::string> map_classes;
    std::optional<double> map; // empty when no mAP class has instances
    std::vector<ErrorRate> error_rates; // filled only when a baseline was given
};

/// Parses the detection list schema
/// [{"image_id", "class", "bbox": [x0,y0,x1,y1], "score"}, ...] and assigns
/// canonical detection_ids by sorting on (image_id, class, bbox, score).
/// Schema errors name the offending record index.
std::vector<DetectionRecord> detections_from_json(const nlohmann::json& j);
std::vector<DetectionRecord> load_detections(const std::filesystem::path& path);

/// Full evaluation: per-class AP over every class present in ground truth,
/// detections, or config.map_classes; weighted mAP over config.map_classes;
/// error rates against `baseline` when given (classes with a perfect
/// baseline AP are skipped). Output is invariant to input record order.
EvalReport evaluate(const DatasetManifest& gt, const std::vector<DetectionRecord>& dets,
                    const EvalConfig& config = {}, const EvalReport* baseline = nullptr);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
EvalReport load_report(const std::filesystem::path& path);
std::string report_to_csv(const EvalReport& report);

} // namespace polarkit
