#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "polarkit/image.hpp"
#include "polarkit/mosaic.hpp"

namespace polarkit {

/// Uniform polarization state over an axis-aligned pixel rectangle
/// [x0, x1) x [y0, y1).
struct SceneRegion {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    double s0 = 0.0;
    double dop = 0.0; // in [0, 1]
    double aop = 0.0; // radians, in [-pi/2, pi/2]
};

/// Ground-truth scene: background state, overlay regions (later regions win
/// where they overlap), optional per-sample Gaussian noise.
struct SceneSpec {
    int width = 0;
    int height = 0;
    SceneRegion background; // x0..y1 ignored, state fields only
    std::vector<SceneRegion> regions;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::uint16_t max_value = 65535; // white level of the rendered frame

    static SceneSpec from_json(const nlohmann::json& j);
    static SceneSpec load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    /// Throws SchemaError on out-of-range fields or regions outside bounds.
    void check() const;
};

/// Per-pixel Stokes field: S1 = S0*DOP*cos(2*AOP), S2 = S0*DOP*sin(2*AOP).
StokesImage render_stokes(const SceneSpec& spec);

/// Full-resolution mosaic frame: each raw pixel observes the scene's Stokes
/// state through its micro-polarizer. Noise (sigma > 0) is added per sample
/// from a counter-based generator keyed on (seed, pixel index), so the result
/// is deterministic under any render parallelism. Samples round half-up and
/// clamp to [0, max_value]. Throws OddDimensionsError on odd dimensions.
RawFrame render_raw(const SceneSpec& spec, const MosaicLayout& layout);

/// Standard normal draw for sample `index` of stream `seed`.
double gaussian_sample(std::uint64_t seed, std::uint64_t index);

} // namespace polarkit
