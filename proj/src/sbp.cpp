#include "covswe/sbp.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "covswe/errors.hpp"

namespace covswe {

namespace {

// q(x) = (1 - x^2) P_N'(x) = N (P_{N-1} - x P_N) and its derivative
// q'(x) = -N (N + 1) P_N(x).
void lobatto_polynomial(int degree, double x, double& q, double& dq) {
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= degree; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  q = degree * (p_prev - x * p);
  dq = -degree * (degree + 1.0) * p;
}

double legendre(int degree, double x) {
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= degree; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  return degree == 0 ? 1.0 : p;
}

}  // namespace

LglRule lgl_nodes_weights(int degree) {
  if (degree < kMinDegree || degree > kMaxDegree) {
    throw InvalidDegreeError("polynomial degree must be in [" + std::to_string(kMinDegree) +
                             ", " + std::to_string(kMaxDegree) + "], got " +
                             std::to_string(degree));
  }
  const int n = degree + 1;
  LglRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;

  // Interior roots of (1 - x^2) P_N'(x); solve the upper half only and mirror.
  for (int k = 1; k < n - 1; ++k) {
    if (2 * k < degree) continue;
    double x = -std::cos(std::numbers::pi * k / degree);
    for (int iter = 0; iter < 100; ++iter) {
      double q = 0.0;
      double dq = 0.0;
      lobatto_polynomial(degree, x, q, dq);
      const double dx = q / dq;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    rule.nodes[k] = x;
    rule.nodes[degree - k] = -x;
  }
  if (degree % 2 == 0) rule.nodes[degree / 2] = 0.0;

  for (int k = 0; k < n; ++k) {
    const double p = legendre(degree, rule.nodes[k]);
    rule.weights[k] = 2.0 / (degree * (degree + 1.0) * p * p);
  }
  for (int k = 0; k < n / 2; ++k) {
    const double w = 0.5 * (rule.weights[k] + rule.weights[degree - k]);
    rule.weights[k] = w;
    rule.weights[degree - k] = w;
  }
  return rule;
}

SbpOperators build_operators(int degree) {
  LglRule rule = lgl_nodes_weights(degree);
  const std::size_t n = rule.nodes.size();
  const auto& x = rule.nodes;

  std::vector<double> bary(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) bary[j] *= (x[j] - x[k]);
    }
    bary[j] = 1.0 / bary[j];
  }

  SbpOperators ops;
  ops.degree = degree;
  ops.D = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = (bary[j] / bary[i]) / (x[i] - x[j]);
      ops.D(i, j) = dij;
      diag -= dij;
    }
    ops.D(i, i) = diag;
  }

  ops.B = SquareMatrix(n);
  ops.B(0, 0) = -1.0;
  ops.B(n - 1, n - 1) = 1.0;

  ops.Q = SquareMatrix(n);
  ops.S = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ops.Q(i, j) = rule.weights[i] * ops.D(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ops.S(i, j) = 2.0 * ops.Q(i, j) - ops.B(i, j);
    }
  }
  ops.nodes = std::move(rule.nodes);
  ops.weights = std::move(rule.weights);
  return ops;
}

}  // namespace covswe
