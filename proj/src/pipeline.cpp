#include "polarkit/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "polarkit/error.hpp"
#include "polarkit/image_io.hpp"

namespace polarkit {

namespace {

std::array<NormalizationSpec, 3> specs_for(const std::array<Plane<double>, 3>& planes,
                                           ChannelCombo combo, NormalizationMode norm,
                                           double i_max) {
    if (norm == NormalizationMode::Fixed) {
        return default_specs(combo, i_max);
    }
    return {min_max_spec(planes[0]), min_max_spec(planes[1]), min_max_spec(planes[2])};
}

void convert_one(const std::filesystem::path& input, const PipelineConfig& config,
                 std::vector<std::filesystem::path>& written) {
    const RawFrame raw = read_raw_frame(input);
    const QuadImage quad = split(raw, config.layout);
    const double i_max = config.i_max.value_or(static_cast<double>(raw.max_value));
    const std::string stem = input.stem().string();

    for (ChannelCombo combo : config.combos) {
        EncodeStats stats;
        std::array<Plane<double>, 3> planes;
        if (combo == ChannelCombo::IntensityTriple) {
            planes = combo_planes(quad, combo, &stats);
        } else {
            planes = combo_planes(quad_to_stokes_image(quad), combo, &stats);
        }
        const auto specs = specs_for(planes, combo, config.norm, i_max);
        const EncodedImage img = encode_planes(planes, combo, specs);

        const auto png_path = config.output_dir / (stem + "_" + combo_name(combo) + ".png");
        write_png(img, png_path);
        written.push_back(png_path);

        const auto sidecar_path = config.output_dir / (stem + "_" + combo_name(combo) + ".json");
        std::ofstream side(sidecar_path);
        if (!side) {
            throw IoError("cannot open '" + sidecar_path.string() + "' for writing");
        }
        side << sidecar_json(img, &stats).dump(2) << '\n';
        written.push_back(sidecar_path);
    }
}

} // namespace

std::string norm_mode_name(NormalizationMode mode) {
    return mode == NormalizationMode::Fixed ? "fixed" : "per-image";
}

NormalizationMode norm_mode_from_name(const std::string& name) {
    if (name == "fixed") {
        return NormalizationMode::Fixed;
    }
    if (name == "per-image") {
        return NormalizationMode::PerImage;
    }
    throw SchemaError("unknown normalization mode '" + name + "' (expected fixed or per-image)");
}

ConvertResult run_convert(const std::vector<std::filesystem::path>& inputs,
                          const PipelineConfig& config) {
    ConvertResult result;
    if (!inputs.empty()) {
        std::filesystem::create_directories(config.output_dir);
    }
    for (const auto& input : inputs) {
        try {
            convert_one(input, config, result.written);
        } catch (const std::exception& e) {
            result.failures.push_back({input, e.what()});
        }
    }
    return result;
}

std::vector<std::filesystem::path> run_demosaic(const std::filesystem::path& input,
                                                const MosaicLayout& layout,
                                                const std::filesystem::path& output_dir) {
    const RawFrame raw = read_raw_frame(input);
    const QuadImage quad = split(raw, layout);
    std::filesystem::create_directories(output_dir);
    const std::string stem = input.stem().string();

    const std::array<std::pair<const Plane<double>*, const char*>, 4> planes = {
        {{&quad.i0, "I0"}, {&quad.i45, "I45"}, {&quad.i90, "I90"}, {&quad.i135, "I135"}}};
    std::vector<std::filesystem::path> written;
    for (const auto& [plane, name] : planes) {
        Plane<std::uint16_t> out(plane->width(), plane->height());
        for (int y = 0; y < plane->height(); ++y) {
            for (int x = 0; x < plane->width(); ++x) {
                out.at(x, y) = static_cast<std::uint16_t>(
                    std::min(std::max(std::floor(plane->at(x, y) + 0.5), 0.0), 65535.0));
            }
        }
        const auto path = output_dir / (stem + "_" + name + ".png");
        write_png_gray16(out, path);
        written.push_back(path);
    }
    return written;
}

} // namespace polarkit
