#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

#include "voigt/cli_io.hpp"
#include "voigt/errors.hpp"

namespace py = pybind11;
using namespace voigt;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

GridSpec grid_for(int size, std::optional<int> cutoff) {
  return cutoff ? GridSpec(size, *cutoff) : GridSpec(size);
}

std::span<const double> samples(const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw std::invalid_argument("expected a square (M, M) array");
  }
  return {a.data(), static_cast<std::size_t>(a.size())};
}

SpectralField to_field(const Array& a, std::optional<int> cutoff = std::nullopt) {
  const auto v = samples(a);
  return forward_transform(v, grid_for(static_cast<int>(a.shape(0)), cutoff));
}

Array to_array(const std::vector<double>& v, int m) {
  Array out({m, m});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array to_array(const SpectralField& f) { return to_array(inverse_transform(f), f.grid().size()); }

DataKind kind_from(const std::string& name) {
  if (name == "eigenfunction") return DataKind::eigenfunction;
  if (name == "random_sobolev") return DataKind::random_sobolev;
  if (name == "yudovich_patch") return DataKind::yudovich_patch;
  if (name == "taylor_family") return DataKind::taylor_family;
  throw std::invalid_argument("unknown kind '" + name + "'");
}

py::dict trajectory_dict(const TrajectoryRecord& rec) {
  std::vector<double> t, e, z, ve, vz;
  for (const DiagnosticSample& s : rec.samples) {
    t.push_back(s.time);
    e.push_back(s.energy);
    z.push_back(s.enstrophy);
    ve.push_back(s.voigt_energy);
    vz.push_back(s.voigt_enstrophy);
  }
  py::list snaps;
  for (const Snapshot& s : rec.snapshots) snaps.append(py::make_tuple(s.time, to_array(s.omega)));
  py::dict d;
  d["t"] = py::array(py::cast(t));
  d["energy"] = py::array(py::cast(e));
  d["enstrophy"] = py::array(py::cast(z));
  d["voigt_energy"] = py::array(py::cast(ve));
  d["voigt_enstrophy"] = py::array(py::cast(vz));
  d["snapshots"] = snaps;
  return d;
}

py::dict report_dict(const ConvergenceReport& r, const std::string& summary) {
  std::vector<double> a, u, w, h;
  for (const AlphaRow& row : r.rows) {
    a.push_back(row.alpha);
    u.push_back(row.errors.sup_u_l2);
    w.push_back(row.errors.sup_omega_l2);
    h.push_back(row.errors.sup_u_h1);
  }
  py::list verdicts;
  for (const CriterionResult& c : r.verdicts) verdicts.append(py::make_tuple(c.name, to_string(c.verdict), c.detail));
  auto slope = [](const std::optional<RateFit>& f) -> py::object {
    return f ? py::cast(f->slope) : py::none();
  };
  py::dict d;
  d["alpha"] = a;
  d["sup_u_l2"] = u;
  d["sup_omega_l2"] = w;
  d["sup_u_h1"] = h;
  d["velocity_slope"] = slope(r.velocity_fit);
  d["vorticity_slope"] = slope(r.vorticity_fit);
  d["h1_slope"] = slope(r.h1_fit);
  d["total_vorticity_slope"] = slope(r.total_vorticity_fit);
  py::list galerkin;
  for (const GalerkinRow& g : r.galerkin) {
    py::dict row;
    row["alpha"] = g.alpha;
    row["cutoff"] = g.cutoff;
    row["truncation_error"] = g.truncation_error;
    row["model_error"] = g.model_error;
    row["total_error"] = g.total_error;
    row["truncation_bounds_hold"] = g.truncation_bounds_hold;
    galerkin.append(row);
  }
  d["galerkin"] = galerkin;
  d["verdicts"] = verdicts;
  d["failed"] = r.failed;
  d["failure"] = r.failure;
  d["passed"] = r.passed();
  d["summary"] = summary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pseudo-spectral 2D Euler / Euler-Voigt solver";
  m.attr("__version__") = "0.1.0";

  py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def(
      "generate",
      [](const std::string& kind, int size, std::uint64_t seed, double amplitude, const std::string& normalize,
         int k1, int k2, double sigma, int band, double radius, double smoothing, int patches, int modes,
         std::optional<int> cutoff) {
        DataRecipe r;
        r.kind = kind_from(kind);
        r.seed = seed;
        r.amplitude = amplitude;
        if (normalize == "peak") {
          r.normalize = Normalization::peak;
        } else if (normalize != "none") {
          throw std::invalid_argument("normalize must be 'none' or 'peak'");
        }
        r.k1 = k1;
        r.k2 = k2;
        r.sigma = sigma;
        r.band = band;
        r.radius = radius;
        r.smoothing = smoothing;
        r.patches = patches;
        r.modes = modes;
        return to_array(generate(r, grid_for(size, cutoff)));
      },
      py::arg("kind"), py::arg("size"), py::arg("seed") = 0, py::arg("amplitude") = 1.0,
      py::arg("normalize") = "none", py::arg("k1") = 1, py::arg("k2") = 0, py::arg("sigma") = 4.0,
      py::arg("band") = 8, py::arg("radius") = 1.0, py::arg("smoothing") = 0.0, py::arg("patches") = 1,
      py::arg("modes") = 2, py::arg("cutoff") = py::none(),
      "Initial vorticity on the M x M grid.");

  m.def(
      "simulate",
      [](const Array& omega, double alpha, double t_end, double record_every, double cfl,
         std::optional<double> dt, std::optional<double> snapshot_every, std::optional<int> cutoff) {
        SolverConfig cfg;
        const SpectralField f = to_field(omega, cutoff);
        cfg.grid = f.grid();
        cfg.alpha = alpha;
        cfg.t_end = t_end;
        cfg.record_every = record_every;
        cfg.snapshot_every = snapshot_every;
        if (dt) {
          cfg.step = FixedStep{*dt};
        } else {
          cfg.step = CflStep{cfl};
        }
        TrajectoryRecord rec;
        {
          py::gil_scoped_release release;
          rec = integrate(f, cfg);
        }
        return trajectory_dict(rec);
      },
      py::arg("omega"), py::arg("alpha"), py::arg("t_end"), py::arg("record_every"), py::arg("cfl") = 0.5,
      py::arg("dt") = py::none(), py::arg("snapshot_every") = py::none(), py::arg("cutoff") = py::none(),
      "Integrate Euler (alpha = 0) or Euler-Voigt; returns diagnostics and snapshots.");

  m.def(
      "run_sweep",
      [](const std::filesystem::path& config, int jobs) {
        const RunConfig cfg = load_config(config);
        const SweepPlan plan = cfg.sweep_plan();
        ConvergenceReport report;
        {
          py::gil_scoped_release release;
          report = plan.regime == Regime::smooth_intermediate ? galerkin_reference_sweep(plan, plan.s, jobs)
                                                              : run_sweep(plan, jobs);
        }
        return report_dict(report, summary_text(report, provenance_header(cfg)));
      },
      py::arg("config"), py::arg("jobs") = 1, "Run the sweep described by an INI config file.");

  m.def(
      "fit_rate",
      [](const std::vector<double>& alphas, const std::vector<double>& errors) {
        if (alphas.size() != errors.size()) throw std::invalid_argument("alphas and errors differ in length");
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < alphas.size(); ++i) pts.emplace_back(alphas[i], errors[i]);
        const RateFit f = fit_rate(pts);
        return py::make_tuple(f.slope, f.intercept, f.stderr_slope);
      },
      py::arg("alphas"), py::arg("errors"), "Least-squares log-log fit: (slope, intercept, stderr).");

  m.def(
      "theoretical_slope",
      [](const std::string& regime, std::optional<double> s, double t_end) {
        const TheoreticalSlope t = theoretical_slope(regime_from_string(regime), s, t_end);
        py::dict d;
        d["velocity"] = t.velocity ? py::cast(*t.velocity) : py::none();
        d["vorticity"] = t.vorticity ? py::cast(*t.vorticity) : py::none();
        d["description"] = t.description;
        return d;
      },
      py::arg("regime"), py::arg("s") = py::none(), py::arg("t_end") = 1.0);

  m.def("choose_cutoff", &choose_cutoff, py::arg("alpha"), py::arg("constant") = 1.0,
        py::arg("max_cutoff") = 1 << 20);

  m.def("helmholtz_filter", [](const Array& omega, double alpha) { return to_array(helmholtz_filter(to_field(omega), alpha)); },
        py::arg("omega"), py::arg("alpha"));
  m.def("l2_norm", [](const Array& omega) { return l2_norm(to_field(omega)); }, py::arg("omega"));
  m.def("lp_norm", [](const Array& omega, double p) { return lp_norm(to_field(omega), p); }, py::arg("omega"),
        py::arg("p"));
  m.def("velocity_sobolev_norm", [](const Array& omega, double s) { return sobolev_norm(biot_savart(to_field(omega)), s); },
        py::arg("omega"), py::arg("s"));
  m.def("energy", [](const Array& omega) { return energy(biot_savart(to_field(omega))); }, py::arg("omega"));
  m.def("enstrophy", [](const Array& omega) { return enstrophy(to_field(omega)); }, py::arg("omega"));
  m.def("gagliardo_ratio", [](const Array& omega, double p) { return gagliardo_ratio(to_field(omega), p); },
        py::arg("omega"), py::arg("p"));
  m.def("cz_ratio", [](const Array& omega, double p) { return cz_ratio(to_field(omega), p); }, py::arg("omega"),
        py::arg("p"));

  m.def(
      "read_snapshot",
      [](const std::filesystem::path& path) {
        const SnapshotData d = read_snapshot(path);
        return py::make_tuple(d.time, d.alpha, to_array(d.values, static_cast<int>(d.size)));
      },
      py::arg("path"), "Returns (time, alpha, omega).");
  m.def(
      "write_snapshot",
      [](const std::filesystem::path& path, const Array& omega, double time, double alpha) {
        const auto v = samples(omega);
        SnapshotData d;
        d.size = static_cast<std::uint32_t>(omega.shape(0));
        d.time = time;
        d.alpha = alpha;
        d.values.assign(v.begin(), v.end());
        write_snapshot(path, d);
      },
      py::arg("path"), py::arg("omega"), py::arg("time") = 0.0, py::arg("alpha") = 0.0);
}
