// Python bindings for the core operations: divergence identities, the
// saturation probe, synthetic data, KDE, mode statistics, and full training
// runs driven by the same JSON config format as the CLI.

#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <optional>

#include "lsgan/config.hpp"
#include "lsgan/divergence.hpp"
#include "lsgan/error.hpp"
#include "lsgan/io.hpp"
#include "lsgan/losses.hpp"
#include "lsgan/metrics.hpp"
#include "lsgan/synthetic.hpp"
#include "lsgan/trainer.hpp"

namespace py = pybind11;
using namespace lsgan;

namespace {

Matrix matrix_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                         const char* who) {
  if (arr.ndim() != 2) {
    throw ConfigError(std::string(who) + ": expected a 2D array");
  }
  Matrix m = Matrix::uninitialized(static_cast<int>(arr.shape(0)),
                                   static_cast<int>(arr.shape(1)));
  auto r = arr.unchecked<2>();
  for (py::ssize_t i = 0; i < arr.shape(0); ++i)
    for (py::ssize_t j = 0; j < arr.shape(1); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
  return m;
}

py::array_t<double> array_from_matrix(const Matrix& m) {
  py::array_t<double> arr({m.rows(), m.cols()});
  auto w = arr.mutable_unchecked<2>();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) w(i, j) = m.at(i, j);
  return arr;
}

DiscreteDist dist_from_list(const std::vector<double>& probs) {
  return DiscreteDist(probs);
}

LossFamily family_from_name(const std::string& name) {
  return loss_family_from_string(name);
}

py::dict stats_to_dict(const ModeStats& s) {
  py::dict d;
  d["modes_covered"] = s.modes_covered;
  d["high_quality_fraction"] = s.high_quality_fraction;
  d["per_mode_counts"] = s.per_mode_counts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Least-squares vs regular GAN laboratory (core bindings)";

  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  // divergence oracle
  m.def(
      "js_divergence",
      [](const std::vector<double>& p, const std::vector<double>& q) {
        return js_divergence(dist_from_list(p), dist_from_list(q));
      },
      py::arg("p"), py::arg("q"));
  m.def(
      "pearson_chi2_mix",
      [](const std::vector<double>& p_d, const std::vector<double>& p_g) {
        return pearson_chi2_mix(dist_from_list(p_d), dist_from_list(p_g));
      },
      py::arg("p_data"), py::arg("p_g"));
  m.def(
      "lsgan_value_at_optimum",
      [](const std::vector<double>& p_d, const std::vector<double>& p_g, double a,
         double b, double c) {
        return lsgan_value_at_optimum(dist_from_list(p_d), dist_from_list(p_g), a, b, c);
      },
      py::arg("p_data"), py::arg("p_g"), py::arg("a"), py::arg("b"), py::arg("c"));
  m.def(
      "gan_value_at_optimum",
      [](const std::vector<double>& p_d, const std::vector<double>& p_g) {
        return gan_value_at_optimum(dist_from_list(p_d), dist_from_list(p_g));
      },
      py::arg("p_data"), py::arg("p_g"));
  m.def(
      "optimal_discriminator",
      [](const std::vector<double>& p_d, const std::vector<double>& p_g, double a,
         double b) {
        auto scores =
            optimal_discriminator(dist_from_list(p_d), dist_from_list(p_g), a, b);
        py::list out;
        for (const auto& s : scores) {
          if (s) {
            out.append(*s);
          } else {
            out.append(py::none());
          }
        }
        return out;
      },
      py::arg("p_data"), py::arg("p_g"), py::arg("a"), py::arg("b"));
  m.def(
      "validate_coding",
      [](double a, double b, double c) {
        CodingCheck r = validate_coding(a, b, c);
        py::dict d;
        d["chi2"] = r.chi2;
        d["real_target"] = r.real_target;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("c"));

  // metrics
  m.def(
      "saturation_probe",
      [](const std::string& family, const std::vector<double>& w,
         const std::vector<double>& distances) {
        return saturation_probe(family_from_name(family), w, distances);
      },
      py::arg("family"), py::arg("w"), py::arg("distances"));
  m.def(
      "kde2d",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
         double bandwidth, double x_min, double x_max, double y_min, double y_max,
         int resolution) {
        GridSpec spec{x_min, x_max, y_min, y_max, resolution};
        DensityGrid grid = kde2d(matrix_from_array(samples, "kde2d"), bandwidth, spec);
        py::array_t<double> out({resolution, resolution});
        auto w = out.mutable_unchecked<2>();
        for (int iy = 0; iy < resolution; ++iy)
          for (int ix = 0; ix < resolution; ++ix) w(iy, ix) = grid.at(iy, ix);
        return out;
      },
      py::arg("samples"), py::arg("bandwidth"), py::arg("x_min") = -3.0,
      py::arg("x_max") = 3.0, py::arg("y_min") = -3.0, py::arg("y_max") = 3.0,
      py::arg("resolution") = 128);
  m.def(
      "mode_stats",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> samples,
         int num_modes, double radius, double sigma, double dist_threshold,
         int min_count) {
        RingMixture mix{num_modes, radius, sigma};
        Matrix pts = matrix_from_array(samples, "mode_stats");
        if (dist_threshold <= 0.0) dist_threshold = default_dist_threshold(mix);
        if (min_count <= 0) min_count = default_min_count(pts.rows(), num_modes);
        return stats_to_dict(mode_stats(pts, mix, dist_threshold, min_count));
      },
      py::arg("samples"), py::arg("num_modes") = 8, py::arg("radius") = 2.0,
      py::arg("sigma") = 0.05, py::arg("dist_threshold") = 0.0,
      py::arg("min_count") = 0);

  // synthetic data
  m.def(
      "sample_mixture",
      [](int n, std::uint64_t seed, int num_modes, double radius, double sigma) {
        LabeledSamples s = sample_mixture(RingMixture{num_modes, radius, sigma}, n, seed);
        return py::make_tuple(array_from_matrix(s.points), s.labels);
      },
      py::arg("n"), py::arg("seed"), py::arg("num_modes") = 8, py::arg("radius") = 2.0,
      py::arg("sigma") = 0.05);
  m.def(
      "sample_latent",
      [](int n, int dim, const std::string& kind, std::uint64_t seed) {
        return array_from_matrix(
            sample_latent(n, dim, latent_kind_from_string(kind), seed));
      },
      py::arg("n"), py::arg("dim"), py::arg("kind"), py::arg("seed"));
  m.def(
      "true_density",
      [](double x, double y, int num_modes, double radius, double sigma) {
        return true_density(RingMixture{num_modes, radius, sigma}, x, y);
      },
      py::arg("x"), py::arg("y"), py::arg("num_modes") = 8, py::arg("radius") = 2.0,
      py::arg("sigma") = 0.05);

  // training
  m.def(
      "train",
      [](const std::string& config_json) {
        TrainConfig cfg = config_from_json_text(config_json);
        cfg.validate();
        TrainResult res = train_run(cfg);
        py::dict out;
        out["steps"] = res.log.steps.size();
        out["aborted"] = res.log.aborted;
        out["abort_reason"] = res.log.abort_reason;
        out["final_stats"] = stats_to_dict(res.log.final_stats);
        out["final_samples"] = array_from_matrix(res.log.final_samples);
        out["runlog_csv"] = runlog_steps_csv(res.log);
        out["config_hash"] = config_hash(cfg);
        return out;
      },
      py::arg("config_json"));

  m.attr("rng_algorithm") = kRngAlgorithm;
  m.attr("default_config_json") = config_to_json_text(TrainConfig{});
}
