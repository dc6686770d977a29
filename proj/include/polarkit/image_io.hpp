#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "polarkit/image.hpp"
#include "polarkit/mosaic.hpp"

namespace polarkit {

/// Binary PGM (P5). Samples wider than 8 bits are stored big-endian.
/// The frame's max_value becomes the PGM maxval and vice versa.
RawFrame read_pgm(const std::filesystem::path& path);
void write_pgm(const RawFrame& frame, const std::filesystem::path& path);

/// Single-channel 8- or 16-bit grayscale PNG. Color or alpha input is
/// rejected with SchemaError.
RawFrame read_png_gray(const std::filesystem::path& path);
void write_png_gray16(const Plane<std::uint16_t>& plane, const std::filesystem::path& path);

struct Rgb8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> interleaved; // size width*height*3

    std::uint8_t sample(int x, int y, int c) const {
        return interleaved[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

void write_png_rgb8(int width, int height, std::span<const std::uint8_t> interleaved,
                    const std::filesystem::path& path);
Rgb8Image read_png_rgb8(const std::filesystem::path& path);

/// Dispatch on file extension: .pgm -> PGM, .png -> grayscale PNG.
RawFrame read_raw_frame(const std::filesystem::path& path);

} // namespace polarkit
