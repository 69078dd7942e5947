#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

#include "grfaug/color.hpp"
#include "grfaug/config.hpp"
#include "grfaug/grf.hpp"
#include "grfaug/pipeline.hpp"
#include "grfaug/spectral.hpp"
#include "grfaug/warp.hpp"

namespace py = pybind11;
using namespace grfaug;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ImageBuffer to_image(const FloatArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("image must have shape (height, width, 3)");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return ImageBuffer(w, h, std::vector<float>(a.data(), a.data() + a.size()));
}

FloatArray from_image(const ImageBuffer& img) {
  FloatArray out({img.height(), img.width(), 3});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

ScalarField to_field(const DoubleArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("field must have shape (height, width)");
  std::vector<double> v(a.data(), a.data() + a.size());
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  return ScalarField({static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), 0.0, peak, 0}, std::move(v));
}

DoubleArray from_field(const ScalarField& f) {
  DoubleArray out({f.height(), f.width()});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

DoubleArray from_grid(const PixelAffineGrid& g) {
  DoubleArray out({g.height(), g.width(), 6});
  double* p = out.mutable_data();
  for (const auto& m : g.matrices()) p = std::copy(m.begin(), m.end(), p);
  return out;
}

PixelAffineGrid to_grid(const DoubleArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 6) throw std::invalid_argument("grid must have shape (height, width, 6)");
  std::vector<Affine> m(static_cast<std::size_t>(a.shape(0) * a.shape(1)));
  std::memcpy(m.data(), a.data(), sizeof(double) * static_cast<std::size_t>(a.size()));
  return PixelAffineGrid(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), std::move(m));
}

SamplingPolicy to_policy(const std::string& interpolation, const std::string& padding) {
  SamplingPolicy p;
  if (interpolation == "nearest") p.interpolation = Interpolation::Nearest;
  else if (interpolation != "bilinear") throw std::invalid_argument("interpolation must be 'bilinear' or 'nearest'");
  if (padding == "zero_fill") p.padding = Padding::ZeroFill;
  else if (padding != "edge_clamp") throw std::invalid_argument("padding must be 'edge_clamp' or 'zero_fill'");
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian random field image augmentation";

  m.def("power_spectrum", &power_spectrum, py::arg("k"), py::arg("gamma"));
  m.def(
      "synthesize_field",
      [](int width, int height, double gamma, double alpha, std::uint64_t seed) {
        ScalarField f;
        {
          py::gil_scoped_release release;
          f = synthesize_field({width, height, gamma, alpha, seed});
        }
        return from_field(f);
      },
      py::arg("width"), py::arg("height"), py::arg("gamma"), py::arg("alpha"), py::arg("seed") = 0,
      "Bounded zero-mean field with power spectrum k^-gamma, shape (height, width).");

  m.def(
      "local_affine_grid",
      [](const std::string& kind, const DoubleArray& gx, std::optional<DoubleArray> gy) {
        const TransformKind k = parse_transform_kind(kind);
        if (k == TransformKind::Color) throw std::invalid_argument("color has no affine grid");
        if (k == TransformKind::Rotate) return from_grid(build_pixel_affine(LocalRotate{to_field(gx)}));
        if (!gy) throw std::invalid_argument(kind + " needs two fields");
        const auto fx = to_field(gx);
        const auto fy = to_field(*gy);
        switch (k) {
          case TransformKind::Scale: return from_grid(build_pixel_affine(LocalScale{fx, fy}));
          case TransformKind::Shear: return from_grid(build_pixel_affine(LocalShear{fx, fy}));
          default: return from_grid(build_pixel_affine(LocalTranslate{fx, fy}));
        }
      },
      py::arg("kind"), py::arg("gx"), py::arg("gy") = py::none(),
      "Per-pixel 2x3 matrices, shape (height, width, 6).");
  m.def(
      "compose_grids",
      [](const std::vector<DoubleArray>& grids) {
        std::vector<PixelAffineGrid> g;
        for (const auto& a : grids) g.push_back(to_grid(a));
        return from_grid(compose_grids(g));
      },
      py::arg("grids"));
  m.def(
      "apply_pixel_affine",
      [](const FloatArray& image, const DoubleArray& grid, const std::string& interpolation,
         const std::string& padding) {
        return from_image(apply_pixel_affine(to_image(image), to_grid(grid), to_policy(interpolation, padding)));
      },
      py::arg("image"), py::arg("grid"), py::arg("interpolation") = "bilinear", py::arg("padding") = "edge_clamp");

  m.def("rgb_to_hsv", [](const Rgb& p) { return rgb_to_hsv(p); });
  m.def("hsv_to_rgb", [](const Hsv& p) { return hsv_to_rgb(p); });
  m.def(
      "apply_local_color",
      [](const FloatArray& image, const DoubleArray& hue, const DoubleArray& sat, const DoubleArray& val) {
        return from_image(apply_local_color(to_image(image), {to_field(hue), to_field(sat), to_field(val)}));
      },
      py::arg("image"), py::arg("hue"), py::arg("saturation"), py::arg("value"));

  m.def(
      "resize_bilinear",
      [](const FloatArray& image, int width, int height) {
        return from_image(resize_bilinear(to_image(image), width, height));
      },
      py::arg("image"), py::arg("width"), py::arg("height"));

  m.def(
      "normalize_config", [](const std::string& json) { return config_to_json(parse_config(json)).dump(); },
      py::arg("config_json"), "Validate a config document and fill in defaults.");
  m.def(
      "sample_transform",
      [](const std::string& config_json, std::uint64_t index) -> std::optional<std::string> {
        const auto t = sample_transform(parse_config(config_json), index);
        if (!t) return std::nullopt;
        return sampled_to_json(*t).dump();
      },
      py::arg("config_json"), py::arg("image_index"));
  m.def(
      "apply_sampled",
      [](const FloatArray& image, const std::string& transform_json, const std::string& interpolation,
         const std::string& padding) {
        const auto t = sampled_from_json(nlohmann::json::parse(transform_json));
        return from_image(apply_sampled(to_image(image), t, to_policy(interpolation, padding)));
      },
      py::arg("image"), py::arg("transform_json"), py::arg("interpolation") = "bilinear",
      py::arg("padding") = "edge_clamp");
  m.def(
      "augment_batch",
      [](const std::vector<FloatArray>& images, const std::string& config_json, unsigned threads) {
        const auto config = parse_config(config_json);
        std::vector<ImageBuffer> in;
        for (const auto& a : images) in.push_back(to_image(a));
        std::vector<ImageBuffer> out;
        {
          py::gil_scoped_release release;
          out = augment_batch(in, config, threads);
        }
        std::vector<FloatArray> result;
        for (const auto& img : out) result.push_back(from_image(img));
        return result;
      },
      py::arg("images"), py::arg("config_json"), py::arg("threads") = 0);

  m.def(
      "radial_power_spectrum",
      [](const std::vector<DoubleArray>& fields, int n_bins) {
        std::vector<ScalarField> f;
        for (const auto& a : fields) f.push_back(to_field(a));
        const auto est = radial_power_spectrum(f, n_bins);
        return py::make_tuple(est.k_bins, est.power, py::make_tuple(est.fit_range.k_min, est.fit_range.k_max));
      },
      py::arg("fields"), py::arg("n_bins"), "Returns (k_bins, power, default_fit_range).");
  m.def(
      "fit_power_law",
      [](std::vector<double> k, std::vector<double> power, double k_min, double k_max) {
        SpectrumEstimate est;
        est.k_bins = std::move(k);
        est.power = std::move(power);
        return fit_power_law(est, {k_min, k_max});
      },
      py::arg("k"), py::arg("power"), py::arg("k_min"), py::arg("k_max"));

  py::register_exception<BatchError>(m, "BatchError", PyExc_RuntimeError);
}
