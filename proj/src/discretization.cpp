#include "covswe/discretization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <thread>

#include "covswe/errors.hpp"

namespace covswe {

std::string to_string(FluxVariant v) {
  switch (v) {
    case FluxVariant::EC: return "ec";
    case FluxVariant::ES: return "es";
    default: return "central";
  }
}

FluxVariant parse_flux_variant(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "ec") return FluxVariant::EC;
  if (s == "es") return FluxVariant::ES;
  if (s == "central") return FluxVariant::CENTRAL;
  throw ConfigError("unknown flux variant '" + name + "' (expected ec, es or central)");
}

SourceVariant default_source(FluxVariant v) {
  return v == FluxVariant::CENTRAL ? SourceVariant::NAIVE : SourceVariant::SPLIT;
}

Discretization::Discretization(MeshTopology mesh, int degree, FluxVariant flux,
                               SourceVariant source, const ScalarFunction& topography,
                               const ScalarFunction& coriolis)
    : mesh_(std::move(mesh)), ops_(build_operators(degree)), flux_(flux), source_(source) {
  if (source_ != default_source(flux_)) {
    throw ConfigError("flux variant " + to_string(flux_) +
                      " requires the matching source form");
  }
  pairing_ = build_node_pairing(mesh_, degree);

  const int n = nodes_per_dim();
  const std::size_t per_element = static_cast<std::size_t>(n) * n;
  geometry_.resize(num_elements() * per_element);
  aux_.resize(geometry_.size());
  mass_.resize(geometry_.size());
  db_.assign(geometry_.size(), {0.0, 0.0});
  for (std::size_t e = 0; e < num_elements(); ++e) {
    validate_corners(mesh_.elements[e], mesh_.radius);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = index(e, i, j);
        NodalGeometry& g = geometry_[k];
        g = evaluate_geometry(mesh_.elements[e], ops_.nodes[i], ops_.nodes[j], mesh_.radius);
        g.b = topography ? topography(g.x) : 0.0;
        g.f = coriolis ? coriolis(g.x) : 0.0;
        mass_[k] = ops_.weights[i] * ops_.weights[j] * g.J;
      }
    }
  }

  // Coincident interface nodes sample b and f at positions that differ at
  // roundoff level. Check agreement, then give every group of coincident
  // nodes the values of its lowest-index member so b is exactly continuous.
  double b_scale = 0.0;
  for (const auto& g : geometry_) b_scale = std::max(b_scale, std::abs(g.b));
  std::vector<std::size_t> root(geometry_.size());
  for (std::size_t k = 0; k < root.size(); ++k) root[k] = k;
  auto find = [&](std::size_t k) {
    while (root[k] != k) {
      root[k] = root[root[k]];
      k = root[k];
    }
    return k;
  };
  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (int f = 0; f < kFacesPerElement; ++f) {
      for (int t = 0; t < n; ++t) {
        const auto own = face_node(f, t, degree);
        const auto& p = pairing_.at(e, f, t);
        const std::size_t kl = index(e, own[0], own[1]);
        const std::size_t kr = index(p.element, p.i, p.j);
        if (std::abs(geometry_[kl].b - geometry_[kr].b) > 1e-9 * b_scale) {
          throw PairingError("bottom topography is discontinuous across an interface");
        }
        const std::size_t a = find(kl);
        const std::size_t b = find(kr);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  for (std::size_t k = 0; k < geometry_.size(); ++k) {
    const std::size_t r = find(k);
    geometry_[k].b = geometry_[r].b;
    geometry_[k].f = geometry_[r].f;
    aux_[k] = aux_from(geometry_[k]);
  }

  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double d1 = 0.0;
        double d2 = 0.0;
        for (int m = 0; m < n; ++m) {
          d1 += ops_.D(i, m) * geometry_[index(e, m, j)].b;
          d2 += ops_.D(j, m) * geometry_[index(e, i, m)].b;
        }
        db_[index(e, i, j)] = {d1, d2};
      }
    }
  }

  transforms_.resize(num_elements() * kFacesPerElement * n);
  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (int f = 0; f < kFacesPerElement; ++f) {
      for (int t = 0; t < n; ++t) {
        const auto own = face_node(f, t, degree);
        const auto& p = pairing_.at(e, f, t);
        const NodalGeometry& gl = geometry_[index(e, own[0], own[1])];
        const NodalGeometry& gr = geometry_[index(p.element, p.i, p.j)];
        transforms_[(e * kFacesPerElement + f) * n + t] = interface_transform(gl, gr);
      }
    }
  }
}

void Discretization::set_threads(int threads) { threads_ = std::max(1, threads); }

void Discretization::for_each_element(
    const std::function<void(std::size_t, std::size_t)>& body) const {
  const std::size_t ne = num_elements();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads_), ne);
  if (workers <= 1) {
    body(0, ne);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = ne * w / workers;
    const std::size_t end = ne * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

void Discretization::compute_primitives(const StateField& q, double t,
                                        std::vector<NodePrimitives>& prims) const {
  if (q.num_elements() != num_elements() || q.degree() != degree()) {
    throw ConfigError("state field does not match the discretization");
  }
  prims.resize(q.size());
  const int n = nodes_per_dim();
  for_each_element([&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t k = index(e, i, j);
          const State& u = q[k];
          if (!(u[0] > 0.0) || !std::isfinite(u[0]) || !std::isfinite(u[1]) ||
              !std::isfinite(u[2])) {
            throw AdmissibilityError("inadmissible state (h = " + std::to_string(u[0]) +
                                         ") at element " + std::to_string(e),
                                     e, i, j, t);
          }
          prims[k] = primitives(u, aux_[k]);
        }
      }
    }
  });
}

State Discretization::exterior_state(const StateField& q, std::size_t e, int face, int t) const {
  const auto& p = pairing_.at(e, face, t);
  const State& ur = q(p.element, p.i, p.j);
  const Mat2& A = face_transform(e, face, t);
  return {ur[0], A(0, 0) * ur[1] + A(0, 1) * ur[2], A(1, 0) * ur[1] + A(1, 1) * ur[2]};
}

Flux Discretization::interface_flux(const State& u_int, const NodePrimitives& p_int,
                                    const State& u_ext, std::size_t k_int, std::size_t k_ext,
                                    int d, double sign) const {
  const AuxNode& aux = aux_[k_int];
  Flux f;
  double lambda_ext = 0.0;
  if (flux_ == FluxVariant::CENTRAL) {
    const NodePrimitives pe = primitives(u_ext, aux);
    f[0] = 0.5 * (p_int.Jhv[d] + pe.Jhv[d]);
    for (int i = 0; i < 2; ++i) {
      f[1 + i] = 0.5 * (p_int.Jhv[d] * p_int.v[i] + pe.Jhv[d] * pe.v[i] +
                        0.5 * kGravity * (p_int.JGh[i][d] * p_int.h + pe.JGh[i][d] * pe.h));
    }
    lambda_ext = std::abs(pe.v[d]) + std::sqrt(kGravity * pe.h * aux.Ginv(d, d));
  } else {
    NodePrimitives pe = primitives(u_ext, aux);
    pe.b = aux_[k_ext].b;
    f = ec_flux(p_int, pe, aux.Ginv, d);
    lambda_ext = std::abs(pe.v[d]) + std::sqrt(kGravity * pe.h * aux.Ginv(d, d));
  }
  if (flux_ != FluxVariant::EC) {
    const double lambda_int =
        std::abs(p_int.v[d]) + std::sqrt(kGravity * p_int.h * aux.Ginv(d, d));
    const double c = sign * 0.5 * aux.J * std::max(lambda_int, lambda_ext);
    for (int k = 0; k < 3; ++k) f[k] -= c * (u_ext[k] - u_int[k]);
  }
  return f;
}

void Discretization::element_rhs(std::size_t e, const StateField& q,
                                 const std::vector<NodePrimitives>& prims,
                                 StateField& dqdt) const {
  const int n = nodes_per_dim();
  const int N = n - 1;
  const auto& w = ops_.weights;
  const bool central = flux_ == FluxVariant::CENTRAL;

  // Physical fluxes for the standard DG volume term.
  std::vector<Flux> pf1;
  std::vector<Flux> pf2;
  if (central) {
    pf1.resize(static_cast<std::size_t>(n) * n);
    pf2.resize(pf1.size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const NodePrimitives& p = prims[index(e, i, j)];
        for (int d = 0; d < 2; ++d) {
          Flux f;
          f[0] = p.Jhv[d];
          for (int c = 0; c < 2; ++c) {
            f[1 + c] = p.Jhv[d] * p.v[c] + 0.5 * kGravity * p.JGh[c][d] * p.h;
          }
          (d == 0 ? pf1 : pf2)[i * n + j] = f;
        }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = index(e, i, j);
      const NodePrimitives& pl = prims[k];
      const AuxNode& aux = aux_[k];
      Flux acc{0.0, 0.0, 0.0};

      if (central) {
        for (int m = 0; m < n; ++m) {
          const double c1 = w[j] * ops_.Q(m, i);
          const double c2 = w[i] * ops_.Q(m, j);
          const Flux& f1 = pf1[m * n + j];
          const Flux& f2 = pf2[i * n + m];
          for (int c = 0; c < 3; ++c) acc[c] += c1 * f1[c] + c2 * f2[c];
        }
      } else {
        for (int m = 0; m < n; ++m) {
          if (m == i) continue;
          const Flux f = ec_flux(pl, prims[index(e, m, j)], aux.Ginv, 0);
          const double c = -w[j] * ops_.S(i, m);
          for (int r = 0; r < 3; ++r) acc[r] += c * f[r];
        }
        for (int m = 0; m < n; ++m) {
          if (m == j) continue;
          const Flux f = ec_flux(pl, prims[index(e, i, m)], aux.Ginv, 1);
          const double c = -w[i] * ops_.S(j, m);
          for (int r = 0; r < 3; ++r) acc[r] += c * f[r];
        }
      }

      auto add_face = [&](int face, int t, int d, double sign, double weight) {
        const auto& p = pairing_.at(e, face, t);
        const State ue = exterior_state(q, e, face, t);
        const Flux f = interface_flux(q[k], pl, ue, k, index(p.element, p.i, p.j), d, sign);
        // Lower faces enter with +, upper faces with -.
        const double c = sign < 0 ? weight : -weight;
        for (int r = 0; r < 3; ++r) acc[r] += c * f[r];
      };
      if (i == 0) add_face(0, j, 0, -1.0, w[j]);
      if (i == N) add_face(1, j, 0, 1.0, w[j]);
      if (j == 0) add_face(2, i, 1, -1.0, w[i]);
      if (j == N) add_face(3, i, 1, 1.0, w[i]);

      const State s = central ? naive_source_term(q[k], aux, db_[k]) : source_term(q[k], aux);
      const double mw = mass_[k];
      State& out = dqdt[k];
      for (int r = 0; r < 3; ++r) out[r] = acc[r] / mw + s[r];
    }
  }
}

void Discretization::rhs(const StateField& q, double t, StateField& dqdt) const {
  std::vector<NodePrimitives> prims;
  compute_primitives(q, t, prims);
  if (dqdt.num_elements() != num_elements() || dqdt.degree() != degree()) dqdt = make_field();
  for_each_element([&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) element_rhs(e, q, prims, dqdt);
  });
}

StateField Discretization::rhs(const StateField& q, double t) const {
  StateField out = make_field();
  rhs(q, t, out);
  return out;
}

StateField Discretization::rhs_strong(const StateField& q, double t) const {
  if (flux_ == FluxVariant::CENTRAL) {
    throw ConfigError("strong form is only assembled for the ec and es variants");
  }
  std::vector<NodePrimitives> prims;
  compute_primitives(q, t, prims);
  StateField out = make_field();
  const int n = nodes_per_dim();
  const int N = n - 1;
  const auto& w = ops_.weights;
  for (std::size_t e = 0; e < num_elements(); ++e) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = index(e, i, j);
        const NodePrimitives& pl = prims[k];
        const AuxNode& aux = aux_[k];
        const double J = aux.J;
        State du = source_term(q[k], aux);
        for (int m = 0; m < n; ++m) {
          const Flux f1 = ec_flux(pl, prims[index(e, m, j)], aux.Ginv, 0);
          const Flux f2 = ec_flux(pl, prims[index(e, i, m)], aux.Ginv, 1);
          for (int r = 0; r < 3; ++r) {
            du[r] -= (2.0 / J) * (ops_.D(i, m) * f1[r] + ops_.D(j, m) * f2[r]);
          }
        }
        auto penalty = [&](int face, int t_face, int d, double sign, double weight) {
          const auto& p = pairing_.at(e, face, t_face);
          const State ue = exterior_state(q, e, face, t_face);
          const Flux fs = interface_flux(q[k], pl, ue, k, index(p.element, p.i, p.j), d, sign);
          const Flux fp = ec_flux(pl, pl, aux.Ginv, d);
          const double c = (sign < 0 ? 1.0 : -1.0) / (J * weight);
          for (int r = 0; r < 3; ++r) du[r] += c * (fs[r] - fp[r]);
        };
        if (i == 0) penalty(0, j, 0, -1.0, w[i]);
        if (i == N) penalty(1, j, 0, 1.0, w[i]);
        if (j == 0) penalty(2, i, 1, -1.0, w[j]);
        if (j == N) penalty(3, i, 1, 1.0, w[j]);
        out[k] = du;
      }
    }
  }
  return out;
}

double Discretization::semidiscrete_entropy_rate(const StateField& q, double t) const {
  const StateField dq = rhs(q, t);
  double rate = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const auto wv = entropy_variables(q[k], aux_[k]);
    rate += mass_[k] * (wv.w1 * dq[k][0] + wv.w2 * dq[k][1] + wv.w3 * dq[k][2]);
  }
  return rate;
}

}  // namespace covswe
