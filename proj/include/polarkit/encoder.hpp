#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "polarkit/image.hpp"

namespace polarkit {

/// Affine 8-bit quantization: round(255 * (x - lo) / (hi - lo)), half-up,
/// clamped to [0, 255]. Requires hi > lo.
struct NormalizationSpec {
    double lo = 0.0;
    double hi = 1.0;
};

/// The three 3-channel combinations fed to the detector in place of RGB.
enum class ChannelCombo {
    IntensityTriple, ///< (I0, I45, I135)
    StokesTriple,    ///< (S0, S1, S2)
    PhysicsTriple,   ///< (S0, AOP, DOP)
};

/// Short tag: "intensity", "stokes" or "physics".
std::string combo_name(ChannelCombo combo);
/// Inverse of combo_name; throws SchemaError on unknown tags.
ChannelCombo combo_from_name(const std::string& name);
/// Channel names in encoding order, e.g. {"S0", "AOP", "DOP"}.
std::array<std::string, 3> channel_names(ChannelCombo combo);

/// Three interleaved 8-bit channels plus the specs that produced them.
struct EncodedImage {
    int width = 0;
    int height = 0;
    ChannelCombo combo = ChannelCombo::StokesTriple;
    std::array<NormalizationSpec, 3> specs{};
    std::vector<std::uint8_t> interleaved; // size width*height*3, RGB channel order

    std::uint8_t sample(int x, int y, int c) const {
        return interleaved[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

/// Totals of the flagged per-pixel conditions met while building planes.
struct EncodeStats {
    std::size_t nonphysical_pixels = 0;   ///< DOP beyond the clamping band
    std::size_t degenerate_aop_pixels = 0; ///< s1 == s2 == 0
};

std::uint8_t encode_value(double x, const NormalizationSpec& spec);

Plane<std::uint8_t> encode_channel(const Plane<double>& plane, const NormalizationSpec& spec);

/// Fixed physical ranges for a sensor white level `i_max`:
/// intensities (0, i_max), S0 (0, 2*i_max), S1/S2 (-i_max, i_max),
/// AOP (-pi/2, pi/2), DOP (0, 1).
std::array<NormalizationSpec, 3> default_specs(ChannelCombo combo, double i_max);

/// Per-image span of one plane. Constant planes widen to a unit interval.
NormalizationSpec min_max_spec(const Plane<double>& plane);

/// The three float planes of a combo, in channel order.
/// The quad overload serves IntensityTriple only; the Stokes overload serves
/// StokesTriple and PhysicsTriple. Throws MissingChannelError otherwise.
/// For PhysicsTriple, pixels with s0 <= 0 get DOP 0, degenerate pixels get
/// AOP 0, and ratios above 1 clamp to 1 while counting into `stats`.
std::array<Plane<double>, 3> combo_planes(const QuadImage& quad, ChannelCombo combo,
                                          EncodeStats* stats = nullptr);
std::array<Plane<double>, 3> combo_planes(const StokesImage& img, ChannelCombo combo,
                                          EncodeStats* stats = nullptr);

EncodedImage encode_planes(const std::array<Plane<double>, 3>& planes, ChannelCombo combo,
                           const std::array<NormalizationSpec, 3>& specs);

/// combo_planes + encode_planes with the given specs.
EncodedImage encode_combo(const QuadImage& quad, ChannelCombo combo,
                          const std::array<NormalizationSpec, 3>& specs,
                          EncodeStats* stats = nullptr);
EncodedImage encode_combo(const StokesImage& img, ChannelCombo combo,
                          const std::array<NormalizationSpec, 3>& specs,
                          EncodeStats* stats = nullptr);

/// 8-bit RGB PNG; byte-identical across runs for identical input.
void write_png(const EncodedImage& img, const std::filesystem::path& path);

/// Metadata recorded next to each encoded image: combo tag, channel names,
/// normalization ranges and the flagged-pixel counts.
nlohmann::json sidecar_json(const EncodedImage& img, const EncodeStats* stats = nullptr);

} // namespace polarkit
