#include "polarkit/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

using nlohmann::json;

auto bbox_key(const BoundingBox& b) {
    return std::tie(b.x_min, b.y_min, b.x_max, b.y_max);
}

// (image_id, class, bbox, score): the canonical content order behind
// detection_id assignment and ground-truth tie-breaking.
bool content_less(const DetectionRecord& a, const DetectionRecord& b) {
    return std::tie(a.image_id, a.class_label) < std::tie(b.image_id, b.class_label) ||
           (std::tie(a.image_id, a.class_label) == std::tie(b.image_id, b.class_label) &&
            std::tuple_cat(bbox_key(a.box), std::tie(a.score)) <
                std::tuple_cat(bbox_key(b.box), std::tie(b.score)));
}

bool annotation_less(const Annotation& a, const Annotation& b) {
    return std::tie(a.image_id, a.class_label) < std::tie(b.image_id, b.class_label) ||
           (std::tie(a.image_id, a.class_label) == std::tie(b.image_id, b.class_label) &&
            bbox_key(a.box) < bbox_key(b.box));
}

} // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

std::string ap_mode_name(ApMode mode) {
    return mode == ApMode::AllPoint ? "allpoint" : "11point";
}

ApMode ap_mode_from_name(const std::string& name) {
    if (name == "allpoint") {
        return ApMode::AllPoint;
    }
    if (name == "11point") {
        return ApMode::ElevenPoint;
    }
    throw SchemaError("unknown AP mode '" + name + "' (expected allpoint or 11point)");
}

APResult average_precision(const std::vector<Annotation>& gt,
                           const std::vector<DetectionRecord>& dets,
                           const std::string& class_label, double iou_thresh, ApMode mode) {
    // Class filter, then canonical orders so the result cannot depend on
    // input arrangement.
    std::vector<const Annotation*> cls_gt;
    for (const Annotation& a : gt) {
        if (a.class_label == class_label) {
            cls_gt.push_back(&a);
        }
    }
    std::sort(cls_gt.begin(), cls_gt.end(),
              [](const Annotation* a, const Annotation* b) { return annotation_less(*a, *b); });

    std::vector<const DetectionRecord*> cls_dets;
    for (const DetectionRecord& d : dets) {
        if (d.class_label == class_label) {
            cls_dets.push_back(&d);
        }
    }
    std::sort(cls_dets.begin(), cls_dets.end(),
              [](const DetectionRecord* a, const DetectionRecord* b) {
                  if (a->score != b->score) {
                      return a->score > b->score;
                  }
                  return a->detection_id < b->detection_id;
              });

    APResult result;
    result.class_label = class_label;
    result.n_ground_truth = cls_gt.size();
    result.n_detections = cls_dets.size();
    if (cls_gt.empty()) {
        result.no_ground_truth = !cls_dets.empty();
        result.false_positives = cls_dets.size();
        return result;
    }

    // Per-image ground-truth index, preserving canonical order within images.
    std::map<std::string, std::vector<std::size_t>> gt_by_image;
    for (std::size_t g = 0; g < cls_gt.size(); ++g) {
        gt_by_image[cls_gt[g]->image_id].push_back(g);
    }

    std::vector<bool> claimed(cls_gt.size(), false);
    const double n_gt = static_cast<double>(cls_gt.size());
    std::size_t tp = 0;
    std::size_t fp = 0;
    result.curve.reserve(cls_dets.size());
    for (const DetectionRecord* d : cls_dets) {
        double best = -1.0;
        std::size_t best_g = cls_gt.size();
        if (const auto it = gt_by_image.find(d->image_id); it != gt_by_image.end()) {
            for (std::size_t g : it->second) {
                const double v = iou(d->box, cls_gt[g]->box);
                if (v > best) {
                    best = v;
                    best_g = g;
                }
            }
        }
        if (best_g != cls_gt.size() && best >= iou_thresh && !claimed[best_g]) {
            claimed[best_g] = true;
            ++tp;
        } else {
            ++fp;
        }
        result.curve.push_back({static_cast<double>(tp) / n_gt,
                                static_cast<double>(tp) / static_cast<double>(tp + fp)});
    }
    result.true_positives = tp;
    result.false_positives = fp;

    if (mode == ApMode::ElevenPoint) {
        // p_interp(r) = max precision at recall >= r, scanned per level.
        double sum = 0.0;
        for (int i = 0; i <= 10; ++i) {
            const double r = i / 10.0;
            double best_p = 0.0;
            for (const PrPoint& pt : result.curve) {
                if (pt.recall >= r) {
                    best_p = std::max(best_p, pt.precision);
                }
            }
            sum += best_p;
        }
        result.ap = sum / 11.0;
        return result;
    }

    // All-point: right-max smoothing, then sum precision over the recall
    // steps in increasing order.
    std::vector<double> smoothed(result.curve.size());
    double running = 0.0;
    for (std::size_t k = result.curve.size(); k-- > 0;) {
        running = std::max(running, result.curve[k].precision);
        smoothed[k] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t k = 0; k < result.curve.size(); ++k) {
        ap += (result.curve[k].recall - prev_recall) * smoothed[k];
        prev_recall = result.curve[k].recall;
    }
    result.ap = ap;
    return result;
}

double weighted_map(double ap_person, double ap_car, std::size_t n_person, std::size_t n_car) {
    if (n_person == 0 && n_car == 0) {
        throw ZeroInstancesError("weighted_map: both instance counts are zero");
    }
    const double np = static_cast<double>(n_person);
    const double nc = static_cast<double>(n_car);
    return (np * ap_person + nc * ap_car) / (np + nc);
}

double error_rate_evolution(double ap_baseline, double ap_new) {
    if (ap_baseline == 1.0) {
        throw BaselinePerfectError("error_rate_evolution: baseline AP is 1");
    }
    return (ap_new - ap_baseline) / (1.0 - ap_baseline) * 100.0;
}

std::vector<DetectionRecord> detections_from_json(const json& j) {
    if (!j.is_array()) {
        throw SchemaError("detections: top level must be an array");
    }
    std::vector<DetectionRecord> dets;
    dets.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "detections[" + std::to_string(i) + "]";
        const json& rec = j[i];
        if (!rec.is_object()) {
            throw SchemaError(where + ": must be an object");
        }
        DetectionRecord d;
        for (const char* key : {"image_id", "class", "bbox", "score"}) {
            if (!rec.contains(key)) {
                throw SchemaError(where + ": missing field '" + key + "'");
            }
        }
        if (!rec["image_id"].is_string() || !rec["class"].is_string() ||
            !rec["score"].is_number()) {
            throw SchemaError(where + ": wrong field type");
        }
        d.image_id = rec["image_id"].get<std::string>();
        d.class_label = rec["class"].get<std::string>();
        const json& bb = rec["bbox"];
        if (!bb.is_array() || bb.size() != 4 || !std::all_of(bb.begin(), bb.end(), [](const json& v) {
                return v.is_number();
            })) {
            throw SchemaError(where + ": bbox must be [x_min, y_min, x_max, y_max]");
        }
        d.box = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
                 bb[3].get<double>()};
        d.score = rec["score"].get<double>();
        if (d.score < 0.0 || d.score > 1.0) {
            throw SchemaError(where + ": score " + std::to_string(d.score) +
                              " outside [0, 1]");
        }
        if (!d.box.valid()) {
            throw SchemaError(where + ": degenerate bbox");
        }
        dets.push_back(std::move(d));
    }
    // detection_id = rank under the canonical content order, so identical
    // record sets get identical ids no matter how the file was arranged.
    std::sort(dets.begin(), dets.end(), content_less);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        dets[i].detection_id = i;
    }
    return dets;
}

std::vector<DetectionRecord> load_detections(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("detections '" + path.string() + "': " + e.what());
    }
    return detections_from_json(j);
}

EvalReport evaluate(const DatasetManifest& gt, const std::vector<DetectionRecord>& dets,
                    const EvalConfig& config, const EvalReport* baseline) {
    EvalReport report;
    report.format_tag = config.format_tag;
    report.iou_thresh = config.iou_thresh;
    report.mode = config.mode;
    report.map_classes = config.map_classes;
    std::sort(report.map_classes.begin(), report.map_classes.end());

    std::set<std::string> classes(report.map_classes.begin(), report.map_classes.end());
    for (const Annotation& a : gt.annotations) {
        classes.insert(a.class_label);
    }
    for (const DetectionRecord& d : dets) {
        classes.insert(d.class_label);
    }
    for (const std::string& label : classes) {
        report.per_class.push_back(
            average_precision(gt.annotations, dets, label, config.iou_thresh, config.mode));
    }

    double weight = 0.0;
    double weighted = 0.0;
    for (const APResult& r : report.per_class) {
        if (std::ranges::find(report.map_classes, r.class_label) != report.map_classes.end()) {
            weight += static_cast<double>(r.n_ground_truth);
            weighted += static_cast<double>(r.n_ground_truth) * r.ap;
        }
    }
    if (weight > 0.0) {
        report.map = weighted / weight;
    }

    if (baseline) {
        for (const APResult& r : report.per_class) {
            const auto it = std::ranges::find_if(baseline->per_class, [&](const APResult& b) {
                return b.class_label == r.class_label;
            });
            if (it != baseline->per_class.end() && it->ap < 1.0) {
                report.error_rates.push_back({r.class_label, error_rate_evolution(it->ap, r.ap)});
            }
        }
    }
    return report;
}

json report_to_json(const EvalReport& report) {
    json classes = json::array();
    for (const APResult& r : report.per_class) {
        json curve = json::array();
        for (const PrPoint& pt : r.curve) {
            curve.push_back(json::array({pt.recall, pt.precision}));
        }
        classes.push_back({{"class", r.class_label},
                           {"ap", r.ap},
                           {"n_ground_truth", r.n_ground_truth},
                           {"n_detections", r.n_detections},
                           {"true_positives", r.true_positives},
                           {"false_positives", r.false_positives},
                           {"no_ground_truth", r.no_ground_truth},
                           {"curve", curve}});
    }
    json out = {{"format", report.format_tag},
                {"iou_threshold", report.iou_thresh},
                {"ap_mode", ap_mode_name(report.mode)},
                {"classes", classes},
                {"map_classes", report.map_classes}};
    out["map"] = report.map ? json(*report.map) : json(nullptr);
    if (!report.error_rates.empty()) {
        json er = json::object();
        for (const ErrorRate& e : report.error_rates) {
            er[e.class_label] = e.percent;
        }
        out["error_rate_evolution"] = er;
    }
    return out;
}

EvalReport report_from_json(const json& j) {
    if (!j.is_object() || !j.contains("classes") || !j["classes"].is_array()) {
        throw SchemaError("report: expected an object with a 'classes' array");
    }
    EvalReport report;
    report.format_tag = j.value("format", std::string{});
    report.iou_thresh = j.value("iou_threshold", 0.5);
    report.mode = ap_mode_from_name(j.value("ap_mode", std::string("allpoint")));
    if (j.contains("map_classes")) {
        report.map_classes = j["map_classes"].get<std::vector<std::string>>();
    }
    for (std::size_t i = 0; i < j["classes"].size(); ++i) {
        const json& c = j["classes"][i];
        const std::string where = "report classes[" + std::to_string(i) + "]";
        if (!c.is_object() || !c.contains("class") || !c.contains("ap")) {
            throw SchemaError(where + ": missing 'class' or 'ap'");
        }
        APResult r;
        r.class_label = c["class"].get<std::string>();
        r.ap = c["ap"].get<double>();
        r.n_ground_truth = c.value("n_ground_truth", std::size_t{0});
        r.n_detections = c.value("n_detections", std::size_t{0});
        r.true_positives = c.value("true_positives", std::size_t{0});
        r.false_positives = c.value("false_positives", std::size_t{0});
        r.no_ground_truth = c.value("no_ground_truth", false);
        if (c.contains("curve")) {
            for (const json& pt : c["curve"]) {
                r.curve.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        }
        report.per_class.push_back(std::move(r));
    }
    if (j.contains("map") && !j["map"].is_null()) {
        report.map = j["map"].get<double>();
    }
    if (j.contains("error_rate_evolution")) {
        for (const auto& [label, value] : j["error_rate_evolution"].items()) {
            report.error_rates.push_back({label, value.get<double>()});
        }
    }
    return report;
}

EvalReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("report '" + path.string() + "': " + e.what());
    }
    return report_from_json(j);
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "class,ap,n_ground_truth,n_detections,true_positives,false_positives\n";
    for (const APResult& r : report.per_class) {
        os << r.class_label << ',' << r.ap << ',' << r.n_ground_truth << ',' << r.n_detections
           << ',' << r.true_positives << ',' << r.false_positives << '\n';
    }
    if (report.map) {
        os << "mAP," << *report.map << ",,,,\n";
    }
    return os.str();
}

} // namespace polarkit
