#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "polarkit/image.hpp"
#include "polarkit/stokes.hpp"

namespace polarkit {

enum class PolarizerAngle : std::uint8_t { Deg0 = 0, Deg45 = 1, Deg90 = 2, Deg135 = 3 };

inline double angle_radians(PolarizerAngle a) {
    return kQuadAngles[static_cast<std::size_t>(a)];
}
int angle_degrees(PolarizerAngle a);

/// One raw sensor frame. Samples are row-major, one per photosite, with the
/// 2x2 micro-polarizer pattern still interleaved. `max_value` is the sensor
/// white level (255 for 8-bit sources, 65535 for 16-bit).
struct RawFrame {
    int width = 0;
    int height = 0;
    std::uint16_t max_value = 65535;
    std::vector<std::uint16_t> data;

    std::uint16_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint16_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
};

/// 2x2 superpixel polarizer arrangement; the four cells are a permutation of
/// {0, 45, 90, 135} degrees. cells[row][col] with row 0 at the top.
struct MosaicLayout {
    std::array<std::array<PolarizerAngle, 2>, 2> cells;

    /// [[0, 45], [135, 90]].
    static MosaicLayout default_layout();

    /// Parse a row-major degree list such as "0,45,135,90".
    /// Throws SchemaError unless the four entries are a permutation of the
    /// quad angles.
    static MosaicLayout from_string(const std::string& text);

    std::string to_string() const;

    bool valid() const;

    /// Angle sampled at full-resolution photosite (x, y).
    PolarizerAngle angle_at(int x, int y) const {
        return cells[y & 1][x & 1];
    }
};

/// Split a raw frame into its four angle sub-images by decimation: each
/// output plane holds exactly the samples of its angle's cell position, no
/// interpolation. Output planes are (width/2) x (height/2).
/// Throws OddDimensionsError when either frame dimension is odd.
QuadImage split(const RawFrame& raw, const MosaicLayout& layout);

/// Per-pixel stokes_from_quad over all planes.
StokesImage quad_to_stokes_image(const QuadImage& quad);

} // namespace polarkit
