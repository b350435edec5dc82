#pragma once

#include <cstddef>
#include <vector>

namespace covswe {

/// Square row-major matrix of doubles.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  const double* row(std::size_t r) const { return data_.data() + r * n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 15;

struct LglRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Legendre-Gauss-Lobatto nodes (ascending, endpoints exactly +-1, mirror
/// symmetric) and weights for polynomial degree N in [1, 15].
/// Throws InvalidDegreeError outside that range.
LglRule lgl_nodes_weights(int degree);

/// Diagonal-norm SBP operators on the LGL nodes of one polynomial degree.
/// Immutable after construction.
struct SbpOperators {
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  SquareMatrix D;  ///< collocation derivative: D(i,j) = l_j'(xi_i)
  SquareMatrix Q;  ///< M * D
  SquareMatrix S;  ///< 2Q - B, skew-symmetric
  SquareMatrix B;  ///< diag(-1, 0, ..., 0, 1)

  std::size_t num_nodes() const { return nodes.size(); }
};

SbpOperators build_operators(int degree);

}  // namespace covswe
