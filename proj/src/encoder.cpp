#include "polarkit/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "polarkit/error.hpp"
#include "polarkit/image_io.hpp"
#include "polarkit/stokes.hpp"

namespace polarkit {

std::string combo_name(ChannelCombo combo) {
    switch (combo) {
    case ChannelCombo::IntensityTriple: return "intensity";
    case ChannelCombo::StokesTriple: return "stokes";
    case ChannelCombo::PhysicsTriple: return "physics";
    }
    return "unknown";
}

ChannelCombo combo_from_name(const std::string& name) {
    if (name == "intensity") return ChannelCombo::IntensityTriple;
    if (name == "stokes") return ChannelCombo::StokesTriple;
    if (name == "physics") return ChannelCombo::PhysicsTriple;
    throw SchemaError("unknown channel combo '" + name +
                      "'; expected intensity, stokes or physics");
}

std::array<std::string, 3> channel_names(ChannelCombo combo) {
    switch (combo) {
    case ChannelCombo::IntensityTriple: return {"I0", "I45", "I135"};
    case ChannelCombo::StokesTriple: return {"S0", "S1", "S2"};
    case ChannelCombo::PhysicsTriple: return {"S0", "AOP", "DOP"};
    }
    return {"?", "?", "?"};
}

std::uint8_t encode_value(double x, const NormalizationSpec& spec) {
    if (!(spec.hi > spec.lo)) {
        throw SchemaError("normalization spec requires hi > lo");
    }
    const double scaled = 255.0 * (x - spec.lo) / (spec.hi - spec.lo);
    const double rounded = std::floor(scaled + 0.5); // half-up
    return static_cast<std::uint8_t>(std::clamp(rounded, 0.0, 255.0));
}

Plane<std::uint8_t> encode_channel(const Plane<double>& plane, const NormalizationSpec& spec) {
    Plane<std::uint8_t> out(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        out.data()[i] = encode_value(plane.data()[i], spec);
    }
    return out;
}

std::array<NormalizationSpec, 3> default_specs(ChannelCombo combo, double i_max) {
    if (!(i_max > 0.0)) {
        throw SchemaError("default_specs: i_max must be positive");
    }
    switch (combo) {
    case ChannelCombo::IntensityTriple:
        return {{{0.0, i_max}, {0.0, i_max}, {0.0, i_max}}};
    case ChannelCombo::StokesTriple:
        return {{{0.0, 2.0 * i_max}, {-i_max, i_max}, {-i_max, i_max}}};
    case ChannelCombo::PhysicsTriple:
        return {{{0.0, 2.0 * i_max}, {-kPi / 2.0, kPi / 2.0}, {0.0, 1.0}}};
    }
    throw SchemaError("default_specs: unknown combo");
}

NormalizationSpec min_max_spec(const Plane<double>& plane) {
    double lo = plane.data().empty() ? 0.0 : plane.data().front();
    double hi = lo;
    for (double v : plane.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    return {lo, hi};
}

std::array<Plane<double>, 3> combo_planes(const QuadImage& quad, ChannelCombo combo,
                                          EncodeStats*) {
    if (combo != ChannelCombo::IntensityTriple) {
        throw MissingChannelError("combo '" + combo_name(combo) +
                                  "' needs Stokes planes; input is a polarizer-angle quad");
    }
    return {quad.i0, quad.i45, quad.i135};
}

std::array<Plane<double>, 3> combo_planes(const StokesImage& img, ChannelCombo combo,
                                          EncodeStats* stats) {
    switch (combo) {
    case ChannelCombo::IntensityTriple:
        throw MissingChannelError(
            "combo 'intensity' needs the raw polarizer-angle planes; input is a Stokes image");
    case ChannelCombo::StokesTriple:
        return {img.s0, img.s1, img.s2};
    case ChannelCombo::PhysicsTriple: {
        const int w = img.width();
        const int h = img.height();
        Plane<double> aop_plane(w, h);
        Plane<double> dop_plane(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const StokesVector s{img.s0.at(x, y), img.s1.at(x, y), img.s2.at(x, y)};
                const Aop a = aop(s);
                aop_plane.at(x, y) = a.radians;
                if (stats && a.degenerate) {
                    ++stats->degenerate_aop_pixels;
                }
                double ratio = 0.0;
                if (s.s0 > 0.0) {
                    ratio = std::hypot(s.s1, s.s2) / s.s0;
                    if (ratio > 1.0) {
                        if (stats && ratio > 1.0 + 1e-6) {
                            ++stats->nonphysical_pixels;
                        }
                        ratio = 1.0;
                    }
                }
                dop_plane.at(x, y) = ratio;
            }
        }
        return {img.s0, std::move(aop_plane), std::move(dop_plane)};
    }
    }
    throw MissingChannelError("unknown combo");
}

EncodedImage encode_planes(const std::array<Plane<double>, 3>& planes, ChannelCombo combo,
                           const std::array<NormalizationSpec, 3>& specs) {
    const int w = planes[0].width();
    const int h = planes[0].height();
    if (!planes[1].same_shape(planes[0]) || !planes[2].same_shape(planes[0])) {
        throw SchemaError("encode_planes: channel planes differ in shape");
    }
    EncodedImage out;
    out.width = w;
    out.height = h;
    out.combo = combo;
    out.specs = specs;
    out.interleaved.resize(static_cast<std::size_t>(w) * h * 3);
    for (int c = 0; c < 3; ++c) {
        const auto& plane = planes[static_cast<std::size_t>(c)];
        const auto& spec = specs[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < plane.size(); ++i) {
            out.interleaved[i * 3 + static_cast<std::size_t>(c)] =
                encode_value(plane.data()[i], spec);
        }
    }
    return out;
}

EncodedImage encode_combo(const QuadImage& quad, ChannelCombo combo,
                          const std::array<NormalizationSpec, 3>& specs, EncodeStats* stats) {
    return encode_planes(combo_planes(quad, combo, stats), combo, specs);
}

EncodedImage encode_combo(const StokesImage& img, ChannelCombo combo,
                          const std::array<NormalizationSpec, 3>& specs, EncodeStats* stats) {
    return encode_planes(combo_planes(img, combo, stats), combo, specs);
}

void write_png(const EncodedImage& img, const std::filesystem::path& path) {
    write_png_rgb8(img.width, img.height, img.interleaved, path);
}

nlohmann::json sidecar_json(const EncodedImage& img, const EncodeStats* stats) {
    nlohmann::json channels = nlohmann::json::array();
    const auto names = channel_names(img.combo);
    for (int c = 0; c < 3; ++c) {
        channels.push_back({{"name", names[static_cast<std::size_t>(c)]},
                            {"lo", img.specs[static_cast<std::size_t>(c)].lo},
                            {"hi", img.specs[static_cast<std::size_t>(c)].hi}});
    }
    nlohmann::json j{{"combo", combo_name(img.combo)},
                     {"width", img.width},
                     {"height", img.height},
                     {"channels", channels}};
    if (stats) {
        j["nonphysical_pixels"] = stats->nonphysical_pixels;
        j["degenerate_aop_pixels"] = stats->degenerate_aop_pixels;
    }
    return j;
}

} // namespace polarkit
