// Python bindings for the main operations: grids, the free group and its
// adjoint, mollified test pairs, moving-average sampling, covariance
// quadratic forms, moment summaries, and the experiment driver.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "wavelab/clt.hpp"
#include "wavelab/config.hpp"
#include "wavelab/covariance.hpp"
#include "wavelab/experiments.hpp"
#include "wavelab/grid.hpp"
#include "wavelab/propagator.hpp"
#include "wavelab/random_fields.hpp"
#include "wavelab/stats.hpp"

namespace py = pybind11;
using namespace wavelab;

namespace {

std::vector<py::ssize_t> field_shape(const GridSpec& g) {
  return std::vector<py::ssize_t>(static_cast<std::size_t>(g.dim), g.npts);
}

py::array_t<double> to_array(const GridSpec& g, const std::vector<double>& a) {
  py::array_t<double> out(field_shape(g));
  std::copy(a.begin(), a.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(const GridSpec& g, const py::array_t<double>& arr,
                               const char* name) {
  // C-contiguous double view regardless of the input layout
  const py::array_t<double, py::array::c_style | py::array::forcecast> c(arr);
  const std::size_t n = static_cast<std::size_t>(c.size());
  if (n != g.node_count())
    throw std::invalid_argument(std::string(name) + ": expected " +
                                std::to_string(g.node_count()) + " nodes");
  return std::vector<double>(c.data(), c.data() + n);
}

StateVector state_from(const GridSpec& g, const py::array_t<double>& u,
                       const py::array_t<double>& v) {
  StateVector y = make_state(g);
  y.u.a = from_array(g, u, "u");
  y.v.a = from_array(g, v, "v");
  return y;
}

Kernel kernel_from(const py::dict& d, const GridSpec& g) {
  Kernel k;
  const std::string shape = py::cast<std::string>(d.attr("get")("shape", "delta"));
  if (shape == "delta")
    k.shape = KernelShape::delta;
  else if (shape == "ball")
    k.shape = KernelShape::ball;
  else if (shape == "bump")
    k.shape = KernelShape::bump;
  else
    throw std::invalid_argument("kernel shape must be delta, ball, or bump");
  k.radius = py::cast<double>(d.attr("get")("radius", 2.0 * g.spacing()));
  const double def =
      k.shape == KernelShape::delta ? std::pow(g.spacing(), -0.5 * g.dim) : 1.0;
  k.amplitude = py::cast<double>(d.attr("get")("amplitude", def));
  return k;
}

NoiseLaw noise_from(const std::string& s) {
  if (s == "gaussian") return NoiseLaw::gaussian;
  if (s == "rademacher") return NoiseLaw::rademacher;
  if (s == "uniform") return NoiseLaw::uniform;
  throw std::invalid_argument("noise must be gaussian, rademacher, or uniform");
}

MovingAverageModel model_from(const GridSpec& g, const py::dict& kernel_u,
                              const py::dict& kernel_v, const std::string& noise,
                              bool shared_noise) {
  MovingAverageModel m;
  m.kernel_u = kernel_from(kernel_u, g);
  m.kernel_v = kernel_from(kernel_v, g);
  m.noise_u = m.noise_v = noise_from(noise);
  m.shared_noise = shared_noise;
  return m;
}

py::dict check_to_dict(const CheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["pass"] = c.pass;
  d["value"] = c.value;
  d["threshold"] = c.threshold;
  d["note"] = c.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_wavelab, m) {
  m.doc() = "wave-equation laboratory: free/perturbed groups, random initial "
            "data, covariance dynamics, and the experiment driver";

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](int dim, int npts, double length) {
             return make_grid(dim, npts, length);
           }),
           py::arg("dim"), py::arg("npts"), py::arg("length"))
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("npts", &GridSpec::npts)
      .def_readonly("length", &GridSpec::length)
      .def_property_readonly("spacing", &GridSpec::spacing)
      .def_property_readonly("node_count", &GridSpec::node_count)
      .def("horizon", &GridSpec::horizon, py::arg("r_bar"), py::arg("r_supp") = 0.0)
      .def("__repr__", [](const GridSpec& g) {
        return "Grid(dim=" + std::to_string(g.dim) + ", npts=" + std::to_string(g.npts) +
               ", length=" + std::to_string(g.length) + ")";
      });

  m.def(
      "evolve",
      [](const GridSpec& g, const py::array_t<double>& u, const py::array_t<double>& v,
         double t) {
        const StateVector y = evolve(state_from(g, u, v), t);
        return py::make_tuple(to_array(g, y.u.a), to_array(g, y.v.a));
      },
      py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("t"),
      "free wave group applied to Cauchy data (u, v); returns (u_t, v_t)");

  m.def(
      "adjoint_evolve",
      [](const GridSpec& g, const py::array_t<double>& u, const py::array_t<double>& v,
         double t) {
        const StateVector y = adjoint_evolve(state_from(g, u, v), t);
        return py::make_tuple(to_array(g, y.u.a), to_array(g, y.v.a));
      },
      py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("t"),
      "adjoint of the free group: component swap, evolve, swap back");

  m.def(
      "bump",
      [](const GridSpec& g, const std::vector<double>& center, double radius, double w0,
         double w1) {
        if (static_cast<int>(center.size()) != g.dim)
          throw std::invalid_argument("center needs one coordinate per dimension");
        const TestFunction f = make_bump(g, center.data(), radius, w0, w1);
        return py::make_tuple(to_array(g, f.psi0.a), to_array(g, f.psi1.a));
      },
      py::arg("grid"), py::arg("center"), py::arg("radius"), py::arg("weight0") = 1.0,
      py::arg("weight1") = 1.0,
      "compactly supported mollified pair (psi0, psi1) = weights * bump");

  m.def(
      "inner_product",
      [](const GridSpec& g, const py::array_t<double>& u, const py::array_t<double>& v,
         const py::array_t<double>& p0, const py::array_t<double>& p1) {
        return inner_product(state_from(g, u, v), state_from(g, p0, p1));
      },
      py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("p0"), py::arg("p1"),
      "h^n sum over nodes of u p0 + v p1");

  m.def(
      "sample_ma",
      [](const GridSpec& g, std::uint64_t seed, const py::dict& kernel_u,
         const py::dict& kernel_v, const std::string& noise, bool shared_noise) {
        const auto spec = make_ma_spec(model_from(g, kernel_u, kernel_v, noise, shared_noise));
        const StateVector y = make_sampler(spec, g)->sample(seed);
        return py::make_tuple(to_array(g, y.u.a), to_array(g, y.v.a));
      },
      py::arg("grid"), py::arg("seed"), py::arg("kernel_u") = py::dict(),
      py::arg("kernel_v") = py::dict(), py::arg("noise") = "rademacher",
      py::arg("shared_noise") = false,
      "one moving-average field sample (u0, v0) for the given stream seed");

  m.def(
      "functional_samples",
      [](const GridSpec& g, const py::array_t<double>& phi0, const py::array_t<double>& phi1,
         std::size_t members, std::uint64_t seed, const py::dict& kernel_u,
         const py::dict& kernel_v, const std::string& noise, bool shared_noise) {
        const auto spec = make_ma_spec(model_from(g, kernel_u, kernel_v, noise, shared_noise));
        const StateVector phi = state_from(g, phi0, phi1);
        std::vector<double> out;
        if (g.dim == 3) {
          RoomCorridorPartition whole;
          whole.axis = g.dim - 1;
          whole.room = g.length;
          whole.corridor = 0.0;
          const SlabSamples s =
              run_slab_ensemble_ma(std::get<MovingAverageModel>(spec.model), phi,
                                   label_slabs(g, whole), members, seed, 1);
          out.resize(members);
          for (std::size_t i = 0; i < members; ++i) out[i] = s.member_total(i);
        } else {
          out = ensemble_functional(*make_sampler(spec, g), phi, members, seed, 1);
        }
        py::array_t<double> arr(static_cast<py::ssize_t>(members));
        std::copy(out.begin(), out.end(), arr.mutable_data());
        return arr;
      },
      py::arg("grid"), py::arg("phi0"), py::arg("phi1"), py::arg("members"), py::arg("seed"),
      py::arg("kernel_u") = py::dict(), py::arg("kernel_v") = py::dict(),
      py::arg("noise") = "rademacher", py::arg("shared_noise") = false,
      "ensemble of <Y_m, phi> under the moving-average measure");

  m.def(
      "quadratic_forms",
      [](const GridSpec& g, const py::array_t<double>& p0, const py::array_t<double>& p1,
         double t, const py::dict& kernel_u, const py::dict& kernel_v) {
        MovingAverageModel mm = model_from(g, kernel_u, kernel_v, "rademacher", false);
        const SpectralCovariance q0 = exact_covariance(make_ma_spec(mm), g);
        const StateVector psi = state_from(g, p0, p1);
        py::dict d;
        d["q_t"] = quadratic_form(evolve_covariance(q0, t), psi);
        d["q_inf"] = quadratic_form(limit_covariance(q0).q, psi);
        return d;
      },
      py::arg("grid"), py::arg("p0"), py::arg("p1"), py::arg("t"),
      py::arg("kernel_u") = py::dict(), py::arg("kernel_v") = py::dict(),
      "Var <Y_t, psi> and its time-average limit under the moving-average measure");

  m.def(
      "moments",
      [](const std::vector<double>& samples) {
        const MomentSummary s = moments(samples);
        py::dict d;
        d["n"] = s.n;
        d["mean"] = s.mean;
        d["var"] = s.var;
        d["skewness"] = s.skewness;
        d["excess_kurtosis"] = s.excess_kurtosis;
        d["se_mean"] = s.se_mean;
        d["se_skewness"] = s.se_skewness;
        d["se_kurtosis"] = s.se_kurtosis;
        return d;
      },
      py::arg("samples"), "sample moment summary with standard errors");

  m.def(
      "normality",
      [](const std::vector<double>& samples, double ref_var) {
        const NormalityReport r = normality_report(samples, ref_var);
        py::dict d;
        d["skewness"] = r.m.skewness;
        d["excess_kurtosis"] = r.m.excess_kurtosis;
        d["var"] = r.m.var;
        d["ks_stat"] = r.ks_stat;
        d["ks_p"] = r.ks_p;
        return d;
      },
      py::arg("samples"), py::arg("ref_var"),
      "moment and KS tests against Normal(0, ref_var)");

  m.def("experiment_kinds", &experiment_kinds, "names accepted by run_experiment");

  m.def(
      "validate_config",
      [](const std::string& path) {
        const ValidationReport rep = validate_config(Config::parse_file(path));
        py::dict d;
        d["pass"] = rep.passed();
        py::list checks;
        for (const auto& c : rep.checks) checks.append(check_to_dict(c));
        d["checks"] = checks;
        return d;
      },
      py::arg("config_path"), "pre-flight checks without running the experiment");

  m.def(
      "run_experiment",
      [](const std::string& path, const std::string& out_dir, std::uint64_t seed_override,
         int threads) {
        const RunManifest man =
            run_experiment(Config::parse_file(path), out_dir, seed_override, threads);
        py::dict d;
        d["kind"] = man.kind;
        d["seed"] = man.seed;
        d["pass"] = man.passed();
        d["wall_seconds"] = man.wall_seconds;
        d["config_hash"] = man.config_hash;
        d["out_dir"] = out_dir;
        py::list checks;
        for (const auto& c : man.checks) checks.append(check_to_dict(c));
        d["checks"] = checks;
        return d;
      },
      py::arg("config_path"), py::arg("out_dir"), py::arg("seed_override") = 0,
      py::arg("threads") = 1,
      "run one configured experiment; artifacts land in out_dir");
}
