#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polarkit {

/// Axis-aligned box in pixel coordinates, corners exclusive of nothing:
/// a valid box has x_max > x_min and y_max > y_min.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double area() const { return (x_max - x_min) * (y_max - y_min); }
    bool valid() const { return x_max > x_min && y_max > y_min; }
};

/// The closed label set, sorted.
inline constexpr std::array<std::string_view, 4> kClasses = {"bike", "car", "motorbike",
                                                             "person"};

bool is_known_class(const std::string& label);

struct Annotation {
    std::string image_id;
    std::string class_label;
    BoundingBox box;
};

struct ImageRecord {
    std::string id;
    std::string path;
    int width = 0;
    int height = 0;
};

struct DatasetManifest {
    std::string split; // "train" or "test"
    std::vector<ImageRecord> images;
    std::vector<Annotation> annotations;

    static DatasetManifest from_json(const nlohmann::json& j);
    static DatasetManifest load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    void save(const std::filesystem::path& path) const;
};

/// Keeps indices 0, stride, 2*stride, ... of the input ordering.
/// Throws SchemaError when stride < 1.
std::vector<std::string> subsample(const std::vector<std::string>& frame_ids, int stride);

/// One broken manifest invariant. Violations are data, not exceptions:
/// validate() reports all of them instead of stopping at the first.
struct Violation {
    std::string image_id; // empty for manifest-level rules
    std::string rule;
    std::string detail;
};

std::vector<Violation> validate(const DatasetManifest& manifest);

struct ClassCount {
    std::string class_label;
    std::size_t count = 0;
    bool insufficient = false; // count below the configured minimum
};

struct DatasetStats {
    std::string split;
    std::vector<ClassCount> classes; // sorted by label; always lists the closed set
    std::size_t total = 0;
};

/// Per-class annotation counts. Classes under `min_count` instances are
/// flagged insufficient rather than dropped.
DatasetStats stats(const DatasetManifest& manifest, std::size_t min_count = 30);

nlohmann::json violations_to_json(const std::vector<Violation>& violations);
nlohmann::json stats_to_json(const DatasetStats& s);

} // namespace polarkit
