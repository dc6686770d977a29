#pragma once

// Shared manifest builders for the dataset and evaluation suites.

#include <string>
#include <vector>

#include "polarkit/dataset.hpp"

namespace fixtures {

// Replica of the published per-class object counts:
// train car 11687, person 1488, bike 4, motorbike 21;
// test  car 9265,  person 442,  bike 12, motorbike 0.
inline polarkit::DatasetManifest table_counts_manifest(const std::string& split) {
    polarkit::DatasetManifest m;
    m.split = split;
    std::vector<std::pair<std::string, std::size_t>> counts;
    if (split == "train") {
        counts = {{"car", 11687}, {"person", 1488}, {"bike", 4}, {"motorbike", 21}};
    } else {
        counts = {{"car", 9265}, {"person", 442}, {"bike", 12}, {"motorbike", 0}};
    }
    m.images.push_back({split + "_0", split + "_0.png", 640, 480});
    for (const auto& [label, count] : counts) {
        for (std::size_t i = 0; i < count; ++i) {
            const double x = static_cast<double>(i % 600);
            const double y = static_cast<double>(i % 440);
            m.annotations.push_back({split + "_0", label, {x, y, x + 20, y + 20}});
        }
    }
    return m;
}

} // namespace fixtures
