#include "polarkit/mosaic.hpp"

#include <algorithm>
#include <sstream>

#include "polarkit/error.hpp"

namespace polarkit {

int angle_degrees(PolarizerAngle a) {
    static constexpr std::array<int, 4> deg = {0, 45, 90, 135};
    return deg[static_cast<std::size_t>(a)];
}

namespace {

PolarizerAngle angle_from_degrees(int deg) {
    switch (deg) {
    case 0: return PolarizerAngle::Deg0;
    case 45: return PolarizerAngle::Deg45;
    case 90: return PolarizerAngle::Deg90;
    case 135: return PolarizerAngle::Deg135;
    default:
        throw SchemaError("mosaic layout: angle must be one of 0, 45, 90, 135; got " +
                          std::to_string(deg));
    }
}

} // namespace

MosaicLayout MosaicLayout::default_layout() {
    MosaicLayout layout;
    layout.cells = {{{{PolarizerAngle::Deg0, PolarizerAngle::Deg45}},
                     {{PolarizerAngle::Deg135, PolarizerAngle::Deg90}}}};
    return layout;
}

MosaicLayout MosaicLayout::from_string(const std::string& text) {
    std::array<int, 4> deg{};
    std::stringstream ss(text);
    std::string token;
    std::size_t n = 0;
    while (std::getline(ss, token, ',')) {
        if (n >= 4) {
            throw SchemaError("mosaic layout: expected 4 comma-separated angles, got '" + text + "'");
        }
        try {
            deg[n] = std::stoi(token);
        } catch (const std::exception&) {
            throw SchemaError("mosaic layout: '" + token + "' is not an integer angle");
        }
        ++n;
    }
    if (n != 4) {
        throw SchemaError("mosaic layout: expected 4 comma-separated angles, got '" + text + "'");
    }
    MosaicLayout layout;
    layout.cells[0][0] = angle_from_degrees(deg[0]);
    layout.cells[0][1] = angle_from_degrees(deg[1]);
    layout.cells[1][0] = angle_from_degrees(deg[2]);
    layout.cells[1][1] = angle_from_degrees(deg[3]);
    if (!layout.valid()) {
        throw SchemaError("mosaic layout: the four cells must be distinct angles, got '" + text + "'");
    }
    return layout;
}

std::string MosaicLayout::to_string() const {
    std::ostringstream os;
    os << angle_degrees(cells[0][0]) << ',' << angle_degrees(cells[0][1]) << ','
       << angle_degrees(cells[1][0]) << ',' << angle_degrees(cells[1][1]);
    return os.str();
}

bool MosaicLayout::valid() const {
    std::array<bool, 4> seen{};
    for (const auto& row : cells) {
        for (PolarizerAngle a : row) {
            seen[static_cast<std::size_t>(a)] = true;
        }
    }
    return std::ranges::all_of(seen, [](bool b) { return b; });
}

QuadImage split(const RawFrame& raw, const MosaicLayout& layout) {
    if (raw.width % 2 != 0 || raw.height % 2 != 0) {
        throw OddDimensionsError("split: frame dimensions must be even, got " +
                                 std::to_string(raw.width) + "x" + std::to_string(raw.height));
    }
    const int w = raw.width / 2;
    const int h = raw.height / 2;
    QuadImage quad{Plane<double>(w, h), Plane<double>(w, h), Plane<double>(w, h),
                   Plane<double>(w, h)};
    std::array<Plane<double>*, 4> planes{};
    planes[static_cast<std::size_t>(PolarizerAngle::Deg0)] = &quad.i0;
    planes[static_cast<std::size_t>(PolarizerAngle::Deg45)] = &quad.i45;
    planes[static_cast<std::size_t>(PolarizerAngle::Deg90)] = &quad.i90;
    planes[static_cast<std::size_t>(PolarizerAngle::Deg135)] = &quad.i135;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int dy = 0; dy < 2; ++dy) {
                for (int dx = 0; dx < 2; ++dx) {
                    PolarizerAngle a = layout.cells[dy][dx];
                    planes[static_cast<std::size_t>(a)]->at(x, y) =
                        static_cast<double>(raw.at(2 * x + dx, 2 * y + dy));
                }
            }
        }
    }
    return quad;
}

StokesImage quad_to_stokes_image(const QuadImage& quad) {
    const int w = quad.width();
    const int h = quad.height();
    StokesImage out{Plane<double>(w, h), Plane<double>(w, h), Plane<double>(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            StokesVector s = stokes_from_quad(
                {quad.i0.at(x, y), quad.i45.at(x, y), quad.i90.at(x, y), quad.i135.at(x, y)});
            out.s0.at(x, y) = s.s0;
            out.s1.at(x, y) = s.s1;
            out.s2.at(x, y) = s.s2;
        }
    }
    return out;
}

} // namespace polarkit
