#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "polarkit/error.hpp"
#include "polarkit/image_io.hpp"
#include "polarkit/pipeline.hpp"
#include "polarkit/synth.hpp"

using namespace polarkit;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

// Two-region test frame with a known white level.
std::filesystem::path write_test_frame(const std::filesystem::path& dir,
                                       const std::string& name) {
    SceneSpec spec;
    spec.width = 8;
    spec.height = 8;
    spec.background = {0, 0, 0, 0, 200, 0.0, 0.0};
    spec.regions.push_back({2, 2, 6, 6, 240, 0.5, 0.0});
    spec.max_value = 255;
    const auto path = dir / name;
    write_pgm(render_raw(spec, MosaicLayout::default_layout()), path);
    return path;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("run_convert writes one png and sidecar per combo") {
    TempDir dir("polarkit_pipeline_a");
    const auto frame = write_test_frame(dir.path, "frame.pgm");

    PipelineConfig config;
    config.combos = {ChannelCombo::StokesTriple, ChannelCombo::PhysicsTriple,
                     ChannelCombo::IntensityTriple};
    config.output_dir = dir.path / "out";
    const ConvertResult result = run_convert({frame}, config);
    CHECK(result.failures.empty());
    REQUIRE(result.written.size() == 6);
    CHECK(std::filesystem::exists(dir.path / "out" / "frame_stokes.png"));
    CHECK(std::filesystem::exists(dir.path / "out" / "frame_physics.json"));

    // The stokes image carries the hand-computed triples: background
    // s0=200 -> 100, s1=0 -> 128; region s0=240 -> 120, s1=120 -> 188.
    const Rgb8Image img = read_png_rgb8(dir.path / "out" / "frame_stokes.png");
    CHECK(img.sample(0, 0, 0) == 100);
    CHECK(img.sample(0, 0, 1) == 128);
    CHECK(img.sample(2, 2, 0) == 120);
    CHECK(img.sample(2, 2, 1) == 188);

    const nlohmann::json side = read_json(dir.path / "out" / "frame_stokes.json");
    CHECK(side["combo"] == "stokes");
    CHECK(side["channels"][0]["hi"] == 510.0); // white level 255 from the pgm maxval
}

TEST_CASE("run_convert with an empty input list succeeds with no outputs") {
    PipelineConfig config;
    config.output_dir = std::filesystem::temp_directory_path() / "polarkit_never_created";
    const ConvertResult result = run_convert({}, config);
    CHECK(result.written.empty());
    CHECK(result.failures.empty());
    CHECK_FALSE(std::filesystem::exists(config.output_dir));
}

TEST_CASE("a broken frame is collected while the rest still convert") {
    TempDir dir("polarkit_pipeline_b");
    const auto good = write_test_frame(dir.path, "good.pgm");

    RawFrame odd;
    odd.width = 3;
    odd.height = 2;
    odd.max_value = 255;
    odd.data = {1, 2, 3, 4, 5, 6};
    const auto bad = dir.path / "odd.pgm";
    write_pgm(odd, bad);
    const auto missing = dir.path / "missing.pgm";

    PipelineConfig config;
    config.output_dir = dir.path / "out";
    const ConvertResult result = run_convert({bad, good, missing}, config);
    REQUIRE(result.failures.size() == 2);
    CHECK(result.failures[0].input == bad);
    CHECK(result.failures[1].input == missing);
    CHECK(result.written.size() == 2);
    CHECK(std::filesystem::exists(dir.path / "out" / "good_stokes.png"));
}

TEST_CASE("per-image normalization records the plane span in the sidecar") {
    TempDir dir("polarkit_pipeline_c");
    const auto frame = write_test_frame(dir.path, "frame.pgm");
    PipelineConfig config;
    config.norm = NormalizationMode::PerImage;
    config.output_dir = dir.path / "out";
    REQUIRE(run_convert({frame}, config).failures.empty());
    const nlohmann::json side = read_json(dir.path / "out" / "frame_stokes.json");
    // S0 plane spans [200, 240] in this scene, not the fixed (0, 510).
    CHECK(side["channels"][0]["lo"] == 200.0);
    CHECK(side["channels"][0]["hi"] == 240.0);
}

TEST_CASE("converted outputs are byte-identical across runs") {
    TempDir dir("polarkit_pipeline_d");
    const auto frame = write_test_frame(dir.path, "frame.pgm");
    PipelineConfig config;
    config.output_dir = dir.path / "out1";
    REQUIRE(run_convert({frame}, config).failures.empty());
    config.output_dir = dir.path / "out2";
    REQUIRE(run_convert({frame}, config).failures.empty());
    const auto read_bytes = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), {});
    };
    CHECK(read_bytes(dir.path / "out1" / "frame_stokes.png") ==
          read_bytes(dir.path / "out2" / "frame_stokes.png"));
}

TEST_CASE("run_demosaic writes the four angle planes") {
    TempDir dir("polarkit_pipeline_e");
    const auto frame = write_test_frame(dir.path, "frame.pgm");
    const auto written = run_demosaic(frame, MosaicLayout::default_layout(), dir.path / "out");
    REQUIRE(written.size() == 4);
    const RawFrame i0 = read_png_gray(dir.path / "out" / "frame_I0.png");
    CHECK(i0.width == 4);
    CHECK(i0.height == 4);
    // Background quad is (100,100,100,100); region I0 = (240+120)/2 = 180.
    CHECK(i0.at(0, 0) == 100);
    CHECK(i0.at(2, 2) == 180);
    const RawFrame i90 = read_png_gray(dir.path / "out" / "frame_I90.png");
    CHECK(i90.at(2, 2) == 60);
}

TEST_CASE("norm mode names parse both ways") {
    CHECK(norm_mode_name(NormalizationMode::PerImage) == "per-image");
    CHECK(norm_mode_from_name("fixed") == NormalizationMode::Fixed);
    CHECK_THROWS_AS(norm_mode_from_name("auto"), SchemaError);
}
