#pragma once

#include <span>
#include <vector>

namespace albama::linalg {

// Forward difference operator of a given order: rows() x n matrix whose rows
// carry the alternating-sign binomial stencil (order 2: 1,-2,1). Annihilates
// polynomials of degree < order.
class DifferenceOperator {
 public:
  DifferenceOperator(int order, int n);

  int order() const { return order_; }
  int cols() const { return n_; }
  int rows() const { return n_ - order_; }
  const std::vector<double>& stencil() const { return stencil_; }

  std::vector<double> apply(std::span<const double> x) const;            // D x
  std::vector<double> apply_transpose(std::span<const double> v) const;  // D'v

  // Band storage for the two Gram matrices: bands[d][i] = M(i, i+d).
  std::vector<std::vector<double>> gram_bands() const;        // D'D, n x n
  std::vector<std::vector<double>> outer_gram_bands() const;  // DD', rows x rows

 private:
  int order_;
  int n_;
  std::vector<double> stencil_;
};

// Cholesky factorization of a symmetric positive definite band matrix given
// as bands[d][i] = A(i, i+d) for d = 0..bandwidth. Solves are O(n*bandwidth).
class BandCholesky {
 public:
  explicit BandCholesky(const std::vector<std::vector<double>>& bands);

  int size() const { return n_; }
  void solve_in_place(std::span<double> x) const;
  std::vector<double> solve(std::vector<double> b) const;

 private:
  int n_;
  int bw_;
  // Lower factor: low_[d][i] = L(i, i-d) for d = 0..bw.
  std::vector<std::vector<double>> low_;
};

}  // namespace albama::linalg
