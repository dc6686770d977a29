#include "polarkit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "polarkit/error.hpp"

namespace polarkit {

namespace {

using nlohmann::json;

// Wraps json access so a bad manifest names the offending record instead of
// surfacing a bare type error.
template <typename T>
T field(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) {
        throw SchemaError(where + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw SchemaError(where + ": field '" + key + "' has the wrong type");
    }
}

BoundingBox bbox_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) {
        throw SchemaError(where + ": bbox must be [x_min, y_min, x_max, y_max]");
    }
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw SchemaError(where + ": bbox entries must be numbers");
        }
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json bbox_to_json(const BoundingBox& b) {
    return json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

} // namespace

bool is_known_class(const std::string& label) {
    return std::ranges::find(kClasses, label) != kClasses.end();
}

DatasetManifest DatasetManifest::from_json(const json& j) {
    if (!j.is_object()) {
        throw SchemaError("manifest: top level must be an object");
    }
    DatasetManifest m;
    m.split = field<std::string>(j, "split", "manifest");
    const json& images = j.contains("images") ? j.at("images") : json::array();
    if (!images.is_array()) {
        throw SchemaError("manifest: 'images' must be an array");
    }
    m.images.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const std::string where = "images[" + std::to_string(i) + "]";
        ImageRecord rec;
        rec.id = field<std::string>(images[i], "id", where);
        rec.path = field<std::string>(images[i], "path", where);
        rec.width = field<int>(images[i], "width", where);
        rec.height = field<int>(images[i], "height", where);
        m.images.push_back(std::move(rec));
    }
    const json& anns = j.contains("annotations") ? j.at("annotations") : json::array();
    if (!anns.is_array()) {
        throw SchemaError("manifest: 'annotations' must be an array");
    }
    m.annotations.reserve(anns.size());
    for (std::size_t i = 0; i < anns.size(); ++i) {
        const std::string where = "annotations[" + std::to_string(i) + "]";
        Annotation ann;
        ann.image_id = field<std::string>(anns[i], "image_id", where);
        ann.class_label = field<std::string>(anns[i], "class", where);
        if (!anns[i].contains("bbox")) {
            throw SchemaError(where + ": missing field 'bbox'");
        }
        ann.box = bbox_from_json(anns[i].at("bbox"), where);
        m.annotations.push_back(std::move(ann));
    }
    return m;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("manifest '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

json DatasetManifest::to_json() const {
    json images = json::array();
    for (const ImageRecord& rec : this->images) {
        images.push_back(
            {{"id", rec.id}, {"path", rec.path}, {"width", rec.width}, {"height", rec.height}});
    }
    json anns = json::array();
    for (const Annotation& ann : annotations) {
        anns.push_back({{"image_id", ann.image_id},
                        {"class", ann.class_label},
                        {"bbox", bbox_to_json(ann.box)}});
    }
    return {{"split", split}, {"images", images}, {"annotations", anns}};
}

void DatasetManifest::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << to_json().dump(2) << '\n';
}

std::vector<std::string> subsample(const std::vector<std::string>& frame_ids, int stride) {
    if (stride < 1) {
        throw SchemaError("subsample: stride must be >= 1, got " + std::to_string(stride));
    }
    std::vector<std::string> kept;
    kept.reserve((frame_ids.size() + stride - 1) / stride);
    for (std::size_t i = 0; i < frame_ids.size(); i += static_cast<std::size_t>(stride)) {
        kept.push_back(frame_ids[i]);
    }
    return kept;
}

std::vector<Violation> validate(const DatasetManifest& manifest) {
    std::vector<Violation> out;
    if (manifest.split != "train" && manifest.split != "test") {
        out.push_back({"", "unknown split", "split '" + manifest.split + "'"});
    }
    std::map<std::string, const ImageRecord*> by_id;
    for (const ImageRecord& rec : manifest.images) {
        if (!by_id.emplace(rec.id, &rec).second) {
            out.push_back({rec.id, "duplicate image id", "id '" + rec.id + "' appears twice"});
        }
        if (rec.width <= 0 || rec.height <= 0) {
            out.push_back({rec.id, "non-positive dimensions",
                           std::to_string(rec.width) + "x" + std::to_string(rec.height)});
        }
    }
    for (const Annotation& ann : manifest.annotations) {
        const auto it = by_id.find(ann.image_id);
        if (it == by_id.end()) {
            out.push_back({ann.image_id, "unresolved image_id",
                           "annotation references unknown image '" + ann.image_id + "'"});
        }
        if (!is_known_class(ann.class_label)) {
            out.push_back(
                {ann.image_id, "unknown class", "class '" + ann.class_label + "'"});
        }
        const BoundingBox& b = ann.box;
        if (b.x_max <= b.x_min) {
            out.push_back({ann.image_id, "x_max <= x_min",
                           "bbox [" + std::to_string(b.x_min) + ", " + std::to_string(b.x_max) +
                               "]"});
        }
        if (b.y_max <= b.y_min) {
            out.push_back({ann.image_id, "y_max <= y_min",
                           "bbox [" + std::to_string(b.y_min) + ", " + std::to_string(b.y_max) +
                               "]"});
        }
        if (it != by_id.end() && b.valid()) {
            const ImageRecord& rec = *it->second;
            if (b.x_min < 0 || b.y_min < 0 || b.x_max > rec.width || b.y_max > rec.height) {
                out.push_back({ann.image_id, "out of bounds",
                               "bbox exceeds " + std::to_string(rec.width) + "x" +
                                   std::to_string(rec.height)});
            }
        }
    }
    return out;
}

DatasetStats stats(const DatasetManifest& manifest, std::size_t min_count) {
    std::map<std::string, std::size_t> counts;
    for (std::string_view label : kClasses) {
        counts.emplace(std::string(label), 0);
    }
    for (const Annotation& ann : manifest.annotations) {
        ++counts[ann.class_label];
    }
    DatasetStats s;
    s.split = manifest.split;
    s.total = manifest.annotations.size();
    for (const auto& [label, count] : counts) {
        s.classes.push_back({label, count, count < min_count});
    }
    return s;
}

json violations_to_json(const std::vector<Violation>& violations) {
    json out = json::array();
    for (const Violation& v : violations) {
        out.push_back({{"image_id", v.image_id}, {"rule", v.rule}, {"detail", v.detail}});
    }
    return out;
}

json stats_to_json(const DatasetStats& s) {
    json classes = json::array();
    for (const ClassCount& c : s.classes) {
        classes.push_back(
            {{"class", c.class_label}, {"count", c.count}, {"insufficient", c.insufficient}});
    }
    return {{"split", s.split}, {"classes", classes}, {"total", s.total}};
}

} // namespace polarkit
