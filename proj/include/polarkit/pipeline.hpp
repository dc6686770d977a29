#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarkit/encoder.hpp"
#include "polarkit/mosaic.hpp"

namespace polarkit {

enum class NormalizationMode {
    Fixed,    ///< physical ranges from the sensor white level
    PerImage, ///< min-max of each plane of each image
};

std::string norm_mode_name(NormalizationMode mode);
NormalizationMode norm_mode_from_name(const std::string& name);

struct PipelineConfig {
    MosaicLayout layout = MosaicLayout::default_layout();
    std::vector<ChannelCombo> combos = {ChannelCombo::StokesTriple};
    NormalizationMode norm = NormalizationMode::Fixed;
    std::filesystem::path output_dir;
    std::optional<double> i_max; // white-level override; default: the frame's max_value
};

struct ConvertFailure {
    std::filesystem::path input;
    std::string message;
};

/// Outputs are named <input stem>_<combo>.png with a .json sidecar alongside.
struct ConvertResult {
    std::vector<std::filesystem::path> written;
    std::vector<ConvertFailure> failures;
};

/// Batch conversion, collecting per-file failures instead of aborting: a
/// corrupt frame must not sink a dataset-scale run.
ConvertResult run_convert(const std::vector<std::filesystem::path>& inputs,
                          const PipelineConfig& config);

/// Splits one frame into its four angle planes, written as 16-bit grayscale
/// PNGs named <input stem>_I0/I45/I90/I135.png. Returns the written paths.
std::vector<std::filesystem::path> run_demosaic(const std::filesystem::path& input,
                                                const MosaicLayout& layout,
                                                const std::filesystem::path& output_dir);

} // namespace polarkit
