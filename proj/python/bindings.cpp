#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "covswe/constants.hpp"
#include "covswe/driver.hpp"
#include "covswe/errors.hpp"
#include "covswe/physics.hpp"
#include "covswe/sbp.hpp"

namespace py = pybind11;
using namespace covswe;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const SquareMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.size());
  Array out({n, n});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < n; ++j) r(i, j) = m(i, j);
  }
  return out;
}

Array to_numpy(const StateField& q) {
  Array out({static_cast<py::ssize_t>(q.size()), py::ssize_t{3}});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < q.size(); ++k) {
    for (int c = 0; c < 3; ++c) r(k, c) = q[k][c];
  }
  return out;
}

State to_state(const std::array<double, 3>& u) { return {u[0], u[1], u[2]}; }

// Aux data from a covariant metric; Christoffel symbols are not needed by
// the pointwise functions exposed here.
AuxNode make_aux(const std::optional<Array>& metric, double b, double f) {
  AuxNode aux;
  if (metric) {
    if (metric->ndim() != 2 || metric->shape(0) != 2 || metric->shape(1) != 2) {
      throw ConfigError("metric must be a 2x2 array");
    }
    auto g = metric->unchecked<2>();
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) aux.G(r, c) = g(r, c);
    }
    if (!(aux.G.det() > 0.0)) throw DegenerateMetricError("metric is not positive definite");
    aux.Ginv = aux.G.inverse();
    aux.J = std::sqrt(aux.G.det());
  }
  aux.b = b;
  aux.f = f;
  return aux;
}

py::dict record_dict(const DiagnosticRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["dt"] = r.dt;
  d["total_mass"] = r.total_mass;
  d["total_entropy"] = r.total_entropy;
  d["potential_enstrophy"] = r.potential_enstrophy;
  d["normalized_mass_change"] = r.normalized_mass_change;
  d["normalized_entropy_change"] = r.normalized_entropy_change;
  d["normalized_l2_height_error"] = r.normalized_l2_height_error;
  d["min_h"] = r.min_h;
  d["max_wave_speed"] = r.max_wave_speed;
  return d;
}

py::dict result_dict(const RunResult& res) {
  py::dict d;
  d["status"] = res.status == RunStatus::Completed ? "completed" : "crashed";
  py::list records;
  for (const auto& r : res.records) records.append(record_dict(r));
  d["records"] = records;
  d["t_final"] = res.t_final;
  d["steps"] = res.steps;
  d["config_hash"] = res.config_hash;
  if (res.crash) {
    py::dict c;
    c["time"] = res.crash->time;
    c["element"] = res.crash->element;
    c["i"] = res.crash->i;
    c["j"] = res.crash->j;
    c["stage"] = res.crash->stage;
    c["message"] = res.crash->message;
    d["crash"] = c;
  } else {
    d["crash"] = py::none();
  }
  return d;
}

// One case on one mesh with its current nodal state.
class Simulation {
 public:
  Simulation(const std::string& case_name, int polydeg, int per_face, const std::string& flux,
             double velocity, double delta_h)
      : spec_(make_case(parse_case_id(case_name), velocity, delta_h)),
        disc_(std::make_unique<Discretization>(
            make_discretization(spec_, polydeg, per_face, parse_flux_variant(flux)))),
        q_(initialize(*disc_, spec_)) {}

  std::size_t num_elements() const { return disc_->num_elements(); }
  std::size_t num_nodes() const { return disc_->num_nodes(); }
  double time() const { return t_; }

  Array state() const { return to_numpy(q_); }

  void set_state(const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != static_cast<py::ssize_t>(q_.size()) || a.shape(1) != 3) {
      throw ConfigError("state must have shape (num_nodes, 3)");
    }
    auto r = a.unchecked<2>();
    for (std::size_t k = 0; k < q_.size(); ++k) q_[k] = State{r(k, 0), r(k, 1), r(k, 2)};
  }

  Array positions() const {
    Array out({static_cast<py::ssize_t>(num_nodes()), py::ssize_t{3}});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t k = 0; k < num_nodes(); ++k) {
      const Vec3& x = disc_->geometry(k).x;
      r(k, 0) = x.x;
      r(k, 1) = x.y;
      r(k, 2) = x.z;
    }
    return out;
  }

  Array topography() const {
    Array out(static_cast<py::ssize_t>(num_nodes()));
    auto r = out.mutable_unchecked<1>();
    for (std::size_t k = 0; k < num_nodes(); ++k) r(k) = disc_->aux(k).b;
    return out;
  }

  Array rhs() const { return to_numpy(disc_->rhs(q_, t_)); }
  Array rhs_strong() const { return to_numpy(disc_->rhs_strong(q_, t_)); }
  double entropy_rate() const { return disc_->semidiscrete_entropy_rate(q_, t_); }
  double total_mass() const { return covswe::total_mass(*disc_, q_); }
  double total_entropy() const { return covswe::total_entropy(*disc_, q_); }
  double potential_enstrophy() const { return covswe::potential_enstrophy(*disc_, q_); }

  Array vorticity() const {
    const auto z = relative_vorticity(*disc_, q_);
    Array out(static_cast<py::ssize_t>(z.size()));
    auto r = out.mutable_unchecked<1>();
    for (std::size_t k = 0; k < z.size(); ++k) r(k) = z[k];
    return out;
  }

  std::optional<double> l2_height_error() const {
    if (!spec_.reference_height) return std::nullopt;
    return covswe::l2_height_error(*disc_, q_, spec_.reference_height, t_);
  }

  double stable_dt(double courant) const { return compute_dt(*disc_, q_, courant); }

  // Advances by t_end seconds; returns the diagnostic records, or raises on
  // a crash after leaving the last admissible state in place.
  py::list advance(double duration, double courant, double cadence) {
    IntegratorConfig cfg;
    cfg.courant = courant;
    cfg.t_end = duration;
    cfg.cadence = cadence;
    DiagnosticTracker tracker(*disc_);
    const double t0 = t_;
    IntegrationResult res;
    {
      py::gil_scoped_release release;
      res = integrate(*disc_, q_, cfg,
                      [&](double t, double dt, const StateField& q, unsigned) {
                        tracker.record(t0 + t, dt, q);
                      });
    }
    q_ = res.state;
    t_ = t0 + res.t;
    if (res.crash) {
      throw AdmissibilityError(res.crash->message, res.crash->element, res.crash->i, res.crash->j,
                               t0 + res.crash->time);
    }
    py::list out;
    for (const auto& r : tracker.records()) out.append(record_dict(r));
    return out;
  }

 private:
  CaseSpec spec_;
  std::unique_ptr<Discretization> disc_;
  StateField q_;
  double t_ = 0.0;
};

}  // namespace

PYBIND11_MODULE(_covswe, m) {
  m.doc() = "Entropy-stable DG shallow water solver on the cubed sphere";

  static py::exception<Error> base(m, "CovsweError");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<InvalidDegreeError>(m, "InvalidDegreeError", base.ptr());
  py::register_exception<NonpositiveDepthError>(m, "NonpositiveDepthError", base.ptr());
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base.ptr());
  py::register_exception<InitializationError>(m, "InitializationError", base.ptr());

  m.attr("EARTH_RADIUS") = kEarthRadius;
  m.attr("ROTATION_RATE") = kRotationRate;
  m.attr("GRAVITY") = kGravity;

  m.def("lgl_nodes_weights", [](int n) {
    const LglRule r = lgl_nodes_weights(n);
    return py::make_tuple(Array(r.nodes.size(), r.nodes.data()), Array(r.weights.size(), r.weights.data()));
  }, py::arg("degree"));

  m.def("sbp_operators", [](int n) {
    const SbpOperators op = build_operators(n);
    py::dict d;
    d["nodes"] = Array(op.nodes.size(), op.nodes.data());
    d["weights"] = Array(op.weights.size(), op.weights.data());
    d["D"] = to_numpy(op.D);
    d["Q"] = to_numpy(op.Q);
    d["S"] = to_numpy(op.S);
    d["B"] = to_numpy(op.B);
    return d;
  }, py::arg("degree"));

  m.def("entropy", [](std::array<double, 3> u, std::optional<Array> metric, double b) {
    return entropy(to_state(u), make_aux(metric, b, 0.0));
  }, py::arg("u"), py::arg("metric") = py::none(), py::arg("b") = 0.0);

  m.def("entropy_variables", [](std::array<double, 3> u, std::optional<Array> metric, double b) {
    return entropy_variables(to_state(u), make_aux(metric, b, 0.0)).as_array();
  }, py::arg("u"), py::arg("metric") = py::none(), py::arg("b") = 0.0);

  m.def("entropy_hessian", [](std::array<double, 3> u, std::optional<Array> metric, double b) {
    const auto H = entropy_hessian(to_state(u), make_aux(metric, b, 0.0));
    Array out({3, 3});
    auto r = out.mutable_unchecked<2>();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) r(i, j) = H[i][j];
    }
    return out;
  }, py::arg("u"), py::arg("metric") = py::none(), py::arg("b") = 0.0);

  m.def("flux_potential", [](std::array<double, 3> u, int d, std::optional<Array> metric, double b) {
    return flux_potential(to_state(u), make_aux(metric, b, 0.0), d);
  }, py::arg("u"), py::arg("direction"), py::arg("metric") = py::none(), py::arg("b") = 0.0);

  m.def("ec_flux", [](std::array<double, 3> ul, std::array<double, 3> ur, int d,
                      std::optional<Array> metric, double b_l, double b_r) {
    return ec_flux(to_state(ul), to_state(ur), make_aux(metric, b_l, 0.0), make_aux(metric, b_r, 0.0), d);
  }, py::arg("u_l"), py::arg("u_r"), py::arg("direction"), py::arg("metric") = py::none(),
        py::arg("b_l") = 0.0, py::arg("b_r") = 0.0);

  m.def("es_flux", [](std::array<double, 3> ul, std::array<double, 3> ur, int d, double sign,
                      std::optional<Array> metric, double b) {
    const AuxNode aux = make_aux(metric, b, 0.0);
    return es_flux(to_state(ul), to_state(ur), aux, aux, d, sign);
  }, py::arg("u_l"), py::arg("u_r"), py::arg("direction"), py::arg("outward_sign") = 1.0,
        py::arg("metric") = py::none(), py::arg("b") = 0.0);

  m.def("git_blob_hash", &git_blob_hash);
  m.def("nominal_resolution", &nominal_resolution, py::arg("polydeg"), py::arg("per_face"));

  m.def("run", [](const std::string& case_name, int polydeg, int per_face, const std::string& flux,
                  double courant, double days, double diag_interval_hours,
                  std::vector<double> snapshot_days, std::string output_dir, double velocity,
                  double delta_h, int threads) {
    RunConfig cfg;
    cfg.case_id = parse_case_id(case_name);
    cfg.polydeg = polydeg;
    cfg.per_face = per_face;
    cfg.flux = parse_flux_variant(flux);
    cfg.courant = courant;
    cfg.days = days;
    cfg.diag_interval_hours = diag_interval_hours;
    cfg.snapshot_days = std::move(snapshot_days);
    cfg.output_dir = std::move(output_dir);
    cfg.velocity = velocity;
    cfg.delta_h = delta_h;
    cfg.threads = threads;
    RunResult res;
    {
      py::gil_scoped_release release;
      res = run(cfg);
    }
    return result_dict(res);
  }, py::arg("case"), py::arg("polydeg") = 3, py::arg("per_face") = 4, py::arg("flux") = "es",
        py::arg("courant") = 0.1, py::arg("days") = 1.0, py::arg("diag_interval_hours") = 1.0,
        py::arg("snapshot_days") = std::vector<double>{}, py::arg("output_dir") = "",
        py::arg("velocity") = 20.0, py::arg("delta_h") = 120.0, py::arg("threads") = 1);

  m.def("convergence_study", [](const std::string& flux, std::vector<int> polydegs,
                                std::vector<int> per_faces, double days, double courant) {
    std::vector<ConvergenceRow> rows;
    {
      py::gil_scoped_release release;
      rows = convergence_study(parse_flux_variant(flux), polydegs, per_faces, days, courant);
    }
    py::list out;
    for (const auto& r : rows) {
      py::dict d;
      d["polydeg"] = r.polydeg;
      d["per_face"] = r.per_face;
      d["nominal_resolution"] = r.nominal_resolution;
      d["error"] = r.error;
      d["observed_order"] = r.observed_order;
      d["crashed"] = r.crashed;
      out.append(d);
    }
    return out;
  }, py::arg("flux"), py::arg("polydegs"), py::arg("per_faces"), py::arg("days") = 5.0,
        py::arg("courant") = 0.1);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const std::string&, int, int, const std::string&, double, double>(),
           py::arg("case"), py::arg("polydeg") = 3, py::arg("per_face") = 4, py::arg("flux") = "es",
           py::arg("velocity") = 20.0, py::arg("delta_h") = 120.0)
      .def_property_readonly("num_elements", &Simulation::num_elements)
      .def_property_readonly("num_nodes", &Simulation::num_nodes)
      .def_property_readonly("time", &Simulation::time)
      .def("state", &Simulation::state)
      .def("set_state", &Simulation::set_state)
      .def("positions", &Simulation::positions)
      .def("topography", &Simulation::topography)
      .def("rhs", &Simulation::rhs)
      .def("rhs_strong", &Simulation::rhs_strong)
      .def("entropy_rate", &Simulation::entropy_rate)
      .def("total_mass", &Simulation::total_mass)
      .def("total_entropy", &Simulation::total_entropy)
      .def("potential_enstrophy", &Simulation::potential_enstrophy)
      .def("vorticity", &Simulation::vorticity)
      .def("l2_height_error", &Simulation::l2_height_error)
      .def("stable_dt", &Simulation::stable_dt, py::arg("courant") = 0.1)
      .def("advance", &Simulation::advance, py::arg("seconds"), py::arg("courant") = 0.1,
           py::arg("cadence") = 3600.0);
}
