#include "polarkit/synth.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "polarkit/error.hpp"
#include "polarkit/stokes.hpp"

namespace polarkit {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double state_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw SchemaError(where + ": missing numeric field '" + std::string(key) + "'");
    }
    return j.at(key).get<double>();
}

void check_state(const SceneRegion& r, const std::string& where) {
    if (r.s0 < 0.0) {
        throw SchemaError(where + ": s0 must be >= 0, got " + std::to_string(r.s0));
    }
    if (r.dop < 0.0 || r.dop > 1.0) {
        throw SchemaError(where + ": dop must lie in [0, 1], got " + std::to_string(r.dop));
    }
    if (r.aop < -kPi / 2 || r.aop > kPi / 2) {
        throw SchemaError(where + ": aop must lie in [-pi/2, pi/2], got " +
                          std::to_string(r.aop));
    }
}

} // namespace

SceneSpec SceneSpec::from_json(const json& j) {
    if (!j.is_object()) {
        throw SchemaError("scene: top level must be an object");
    }
    SceneSpec spec;
    if (!j.contains("width") || !j.contains("height") || !j.contains("background")) {
        throw SchemaError("scene: 'width', 'height' and 'background' are required");
    }
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    const json& bg = j.at("background");
    spec.background.s0 = state_field(bg, "s0", "background");
    spec.background.dop = state_field(bg, "dop", "background");
    spec.background.aop = state_field(bg, "aop", "background");
    if (j.contains("regions")) {
        const json& regions = j.at("regions");
        if (!regions.is_array()) {
            throw SchemaError("scene: 'regions' must be an array");
        }
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const std::string where = "regions[" + std::to_string(i) + "]";
            const json& r = regions[i];
            if (!r.contains("rect") || !r.at("rect").is_array() || r.at("rect").size() != 4) {
                throw SchemaError(where + ": rect must be [x0, y0, x1, y1]");
            }
            SceneRegion region;
            region.x0 = r.at("rect")[0].get<int>();
            region.y0 = r.at("rect")[1].get<int>();
            region.x1 = r.at("rect")[2].get<int>();
            region.y1 = r.at("rect")[3].get<int>();
            region.s0 = state_field(r, "s0", where);
            region.dop = state_field(r, "dop", where);
            region.aop = state_field(r, "aop", where);
            spec.regions.push_back(region);
        }
    }
    spec.noise_sigma = j.value("noise_sigma", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    const int max_value = j.value("max_value", 65535);
    if (max_value < 1 || max_value > 65535) {
        throw SchemaError("scene: max_value must lie in [1, 65535]");
    }
    spec.max_value = static_cast<std::uint16_t>(max_value);
    spec.check();
    return spec;
}

SceneSpec SceneSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError("scene '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

json SceneSpec::to_json() const {
    json regions = json::array();
    for (const SceneRegion& r : this->regions) {
        regions.push_back({{"rect", json::array({r.x0, r.y0, r.x1, r.y1})},
                           {"s0", r.s0},
                           {"dop", r.dop},
                           {"aop", r.aop}});
    }
    return {{"width", width},
            {"height", height},
            {"background",
             {{"s0", background.s0}, {"dop", background.dop}, {"aop", background.aop}}},
            {"regions", regions},
            {"noise_sigma", noise_sigma},
            {"seed", seed},
            {"max_value", max_value}};
}

void SceneSpec::check() const {
    if (width <= 0 || height <= 0) {
        throw SchemaError("scene: dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
    }
    if (noise_sigma < 0.0) {
        throw SchemaError("scene: noise_sigma must be >= 0");
    }
    check_state(background, "background");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string where = "regions[" + std::to_string(i) + "]";
        const SceneRegion& r = regions[i];
        check_state(r, where);
        if (r.x0 >= r.x1 || r.y0 >= r.y1) {
            throw SchemaError(where + ": empty rect");
        }
        if (r.x0 < 0 || r.y0 < 0 || r.x1 > width || r.y1 > height) {
            throw SchemaError(where + ": rect outside scene bounds");
        }
    }
}

StokesImage render_stokes(const SceneSpec& spec) {
    spec.check();
    StokesImage img{Plane<double>(spec.width, spec.height), Plane<double>(spec.width, spec.height),
                    Plane<double>(spec.width, spec.height)};
    const auto paint = [&](const SceneRegion& r, int x0, int y0, int x1, int y1) {
        const double s1 = r.s0 * r.dop * std::cos(2.0 * r.aop);
        const double s2 = r.s0 * r.dop * std::sin(2.0 * r.aop);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                img.s0.at(x, y) = r.s0;
                img.s1.at(x, y) = s1;
                img.s2.at(x, y) = s2;
            }
        }
    };
    paint(spec.background, 0, 0, spec.width, spec.height);
    for (const SceneRegion& r : spec.regions) {
        paint(r, r.x0, r.y0, r.x1, r.y1);
    }
    return img;
}

double gaussian_sample(std::uint64_t seed, std::uint64_t index) {
    // Two decorrelated 53-bit uniforms from the counter, Box-Muller to one
    // normal draw. u1 is mapped into (0, 1] so the log stays finite.
    const std::uint64_t base = splitmix64(seed ^ splitmix64(index));
    const std::uint64_t a = splitmix64(base);
    const std::uint64_t b = splitmix64(base + 0x6a09e667f3bcc909ULL);
    const double u1 = 1.0 - static_cast<double>(a >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

RawFrame render_raw(const SceneSpec& spec, const MosaicLayout& layout) {
    spec.check();
    if (spec.width % 2 != 0 || spec.height % 2 != 0) {
        throw OddDimensionsError("render_raw: scene dimensions must be even, got " +
                                 std::to_string(spec.width) + "x" + std::to_string(spec.height));
    }
    const StokesImage field = render_stokes(spec);
    RawFrame frame;
    frame.width = spec.width;
    frame.height = spec.height;
    frame.max_value = spec.max_value;
    frame.data.resize(static_cast<std::size_t>(spec.width) * spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const StokesVector s{field.s0.at(x, y), field.s1.at(x, y), field.s2.at(x, y)};
            double value = intensity_at(s, angle_radians(layout.angle_at(x, y)));
            if (spec.noise_sigma > 0.0) {
                const std::uint64_t index =
                    static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(spec.width) + x;
                value += spec.noise_sigma * gaussian_sample(spec.seed, index);
            }
            const double rounded = std::floor(value + 0.5);
            const double clamped =
                std::min(std::max(rounded, 0.0), static_cast<double>(spec.max_value));
            frame.at(x, y) = static_cast<std::uint16_t>(clamped);
        }
    }
    return frame;
}

} // namespace polarkit
