// Python bindings for the core operations: Stokes algebra, mosaic handling,
// 8-bit encoding, detection metrics and the scene renderer.

#include <algorithm>
#include <array>
#include <cstring>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "polarkit/dataset.hpp"
#include "polarkit/encoder.hpp"
#include "polarkit/error.hpp"
#include "polarkit/evalkit.hpp"
#include "polarkit/mosaic.hpp"
#include "polarkit/stokes.hpp"
#include "polarkit/synth.hpp"

namespace py = pybind11;
using namespace polarkit;

namespace {

using RawArray = py::array_t<std::uint16_t, py::array::c_style | py::array::forcecast>;
using Box = std::array<double, 4>;
using GtTuple = std::tuple<std::string, std::string, Box>;
using DetTuple = std::tuple<std::string, std::string, Box, double>;

RawFrame frame_from_array(const RawArray& arr, std::uint16_t max_value) {
    if (arr.ndim() != 2) {
        throw SchemaError("raw frame must be a 2-d uint16 array");
    }
    RawFrame frame;
    frame.height = static_cast<int>(arr.shape(0));
    frame.width = static_cast<int>(arr.shape(1));
    frame.max_value = max_value;
    frame.data.resize(static_cast<std::size_t>(frame.width) * frame.height);
    std::memcpy(frame.data.data(), arr.data(), frame.data.size() * sizeof(std::uint16_t));
    return frame;
}

py::array_t<double> plane_to_array(const Plane<double>& plane) {
    py::array_t<double> out({plane.height(), plane.width()});
    std::copy(plane.data().begin(), plane.data().end(), out.mutable_data());
    return out;
}

py::tuple split_py(const RawArray& raw, const std::string& layout, std::uint16_t max_value) {
    const QuadImage quad =
        split(frame_from_array(raw, max_value), MosaicLayout::from_string(layout));
    return py::make_tuple(plane_to_array(quad.i0), plane_to_array(quad.i45),
                          plane_to_array(quad.i90), plane_to_array(quad.i135));
}

py::tuple stokes_planes_py(const RawArray& raw, const std::string& layout,
                           std::uint16_t max_value) {
    const StokesImage img = quad_to_stokes_image(
        split(frame_from_array(raw, max_value), MosaicLayout::from_string(layout)));
    return py::make_tuple(plane_to_array(img.s0), plane_to_array(img.s1),
                          plane_to_array(img.s2));
}

py::array_t<std::uint8_t> encode_py(const RawArray& raw, const std::string& layout,
                                    const std::string& combo, std::optional<double> i_max,
                                    std::uint16_t max_value) {
    const RawFrame frame = frame_from_array(raw, max_value);
    const QuadImage quad = split(frame, MosaicLayout::from_string(layout));
    const ChannelCombo c = combo_from_name(combo);
    const auto specs = default_specs(c, i_max.value_or(frame.max_value));
    const EncodedImage img = c == ChannelCombo::IntensityTriple
                                 ? encode_combo(quad, c, specs)
                                 : encode_combo(quad_to_stokes_image(quad), c, specs);
    py::array_t<std::uint8_t> out({img.height, img.width, 3});
    std::copy(img.interleaved.begin(), img.interleaved.end(), out.mutable_data());
    return out;
}

py::dict ap_py(const std::vector<GtTuple>& gt, const std::vector<DetTuple>& dets,
               const std::string& class_label, double iou_thresh, const std::string& mode) {
    std::vector<Annotation> annotations;
    annotations.reserve(gt.size());
    for (const auto& [image_id, label, box] : gt) {
        annotations.push_back({image_id, label, {box[0], box[1], box[2], box[3]}});
    }
    // Routing detections through the JSON loader reuses its canonical
    // detection-id assignment, so results cannot depend on list order.
    nlohmann::json records = nlohmann::json::array();
    for (const auto& [image_id, label, box, score] : dets) {
        records.push_back({{"image_id", image_id},
                           {"class", label},
                           {"bbox", {box[0], box[1], box[2], box[3]}},
                           {"score", score}});
    }
    const APResult r = average_precision(annotations, detections_from_json(records),
                                         class_label, iou_thresh, ap_mode_from_name(mode));
    py::list curve;
    for (const PrPoint& p : r.curve) {
        curve.append(py::make_tuple(p.recall, p.precision));
    }
    py::dict out;
    out["ap"] = r.ap;
    out["n_ground_truth"] = r.n_ground_truth;
    out["n_detections"] = r.n_detections;
    out["true_positives"] = r.true_positives;
    out["false_positives"] = r.false_positives;
    out["no_ground_truth"] = r.no_ground_truth;
    out["curve"] = curve;
    return out;
}

py::array_t<std::uint16_t> render_raw_py(const std::string& scene_json,
                                         const std::string& layout,
                                         std::optional<std::uint64_t> seed) {
    SceneSpec spec = SceneSpec::from_json(nlohmann::json::parse(scene_json));
    if (seed) {
        spec.seed = *seed;
    }
    const RawFrame frame = render_raw(spec, MosaicLayout::from_string(layout));
    py::array_t<std::uint16_t> out({frame.height, frame.width});
    std::copy(frame.data.begin(), frame.data.end(), out.mutable_data());
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Polarimetric imaging and detection-evaluation toolkit";
    m.attr("__version__") = "0.1.0";
    m.attr("DEFAULT_LAYOUT") = MosaicLayout::default_layout().to_string();

    py::register_exception<Error>(m, "PolarkitError");

    py::class_<StokesVector>(m, "StokesVector")
        .def(py::init([](double s0, double s1, double s2) {
                 return StokesVector{s0, s1, s2};
             }),
             py::arg("s0"), py::arg("s1"), py::arg("s2"))
        .def_readwrite("s0", &StokesVector::s0)
        .def_readwrite("s1", &StokesVector::s1)
        .def_readwrite("s2", &StokesVector::s2)
        .def("is_physical", &StokesVector::is_physical, py::arg("eps") = 1e-9)
        .def("__repr__", [](const StokesVector& s) {
            return "StokesVector(s0=" + std::to_string(s.s0) + ", s1=" + std::to_string(s.s1) +
                   ", s2=" + std::to_string(s.s2) + ")";
        });

    py::class_<Aop>(m, "Aop")
        .def_readonly("radians", &Aop::radians)
        .def_readonly("degenerate", &Aop::degenerate)
        .def("__repr__", [](const Aop& a) {
            return "Aop(radians=" + std::to_string(a.radians) +
                   (a.degenerate ? ", degenerate=True)" : ")");
        });

    m.def("intensity_at", &intensity_at, py::arg("s"), py::arg("angle_rad"),
          "Ideal polarizer intensity (s0 + s1*cos(2a) + s2*sin(2a)) / 2.");
    m.def(
        "forward_quad",
        [](const StokesVector& s) {
            const IntensityQuad q = forward_quad(s);
            return py::make_tuple(q.i0, q.i45, q.i90, q.i135);
        },
        py::arg("s"), "Intensities behind 0/45/90/135 degree polarizers.");
    m.def(
        "stokes_from_quad",
        [](double i0, double i45, double i90, double i135) {
            return stokes_from_quad({i0, i45, i90, i135});
        },
        py::arg("i0"), py::arg("i45"), py::arg("i90"), py::arg("i135"),
        "Estimate (s0, s1, s2) from the four polarizer intensities.");
    m.def("aop", &aop, py::arg("s"), "Angle of polarization in (-pi/2, pi/2].");
    m.def(
        "dop", [](const StokesVector& s) { return dop(s).ratio; }, py::arg("s"),
        "Degree of polarization in [0, 1].");
    m.def("rotate_frame", &rotate_frame, py::arg("s"), py::arg("theta_rad"),
          "The same state observed from a frame rotated by theta.");
    m.def("wrap_aop", &wrap_aop, py::arg("radians"), "Fold an angle into (-pi/2, pi/2].");

    m.def("split", &split_py, py::arg("raw"), py::arg("layout") = "0,45,135,90",
          py::arg("max_value") = 65535,
          "Decimate a mosaic frame into the (i0, i45, i90, i135) sub-images.");
    m.def("stokes_planes", &stokes_planes_py, py::arg("raw"), py::arg("layout") = "0,45,135,90",
          py::arg("max_value") = 65535,
          "Decimate a mosaic frame and estimate the (s0, s1, s2) planes.");
    m.def("encode", &encode_py, py::arg("raw"), py::arg("layout") = "0,45,135,90",
          py::arg("combo") = "stokes", py::arg("i_max") = std::nullopt,
          py::arg("max_value") = 65535,
          "Encode a mosaic frame into an 8-bit (H, W, 3) channel combination.");

    m.def("iou", [](const Box& a, const Box& b) {
              return iou({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
          },
          py::arg("a"), py::arg("b"), "Intersection over union of two (x0, y0, x1, y1) boxes.");
    m.def("average_precision", &ap_py, py::arg("ground_truth"), py::arg("detections"),
          py::arg("class_label"), py::arg("iou_thresh") = 0.5, py::arg("mode") = "allpoint",
          "VOC-style AP; ground truth rows are (image_id, class, box), detections add a score.");
    m.def("weighted_map", &weighted_map, py::arg("ap_person"), py::arg("ap_car"),
          py::arg("n_person"), py::arg("n_car"),
          "Instance-count-weighted mean of the person and car APs.");
    m.def("error_rate_evolution", &error_rate_evolution, py::arg("ap_baseline"),
          py::arg("ap_new"), "Percent reduction of (1 - AP) relative to a baseline.");

    m.def("subsample", &subsample, py::arg("ids"), py::arg("stride"),
          "Keep ids at indices 0, stride, 2*stride, ...");

    m.def("render_raw", &render_raw_py, py::arg("scene_json"),
          py::arg("layout") = "0,45,135,90", py::arg("seed") = std::nullopt,
          "Render a scene description (JSON text) to a uint16 mosaic frame.");
    m.def("gaussian_sample", &gaussian_sample, py::arg("seed"), py::arg("index"),
          "Standard normal draw for sample `index` of stream `seed`.");
}
