#pragma once

#include <vector>

#include "core/complexutil.hpp"

namespace bitorus {

// Truncated formal power series. The truncation order is fixed per value and
// carried through every operation; coefficients beyond it are discarded.
// Summation order is fixed (ascending index) so results are deterministic.
// All arithmetic is exact for polynomial inputs of degree <= order.

class Series1 {
public:
  explicit Series1(int order) : c_(std::size_t(order) + 1, Complex{0, 0}) {}
  static Series1 constant(Complex v, int order);
  static Series1 identity(int order);  // z

  int order() const { return int(c_.size()) - 1; }
  Complex operator[](int k) const { return c_[std::size_t(k)]; }
  Complex& operator[](int k) { return c_[std::size_t(k)]; }

  Series1 operator+(const Series1& b) const;
  Series1 operator-(const Series1& b) const;
  Series1 operator*(const Series1& b) const;
  Series1 operator*(Complex s) const;

  double max_coeff_difference(const Series1& b) const;

private:
  std::vector<Complex> c_;
};

// b must be a unit series (nonzero constant term).
Series1 div(const Series1& a, const Series1& b);

Series1 exp_series(const Series1& a);
// Constant term must be off the branch cut (-inf, 0]; principal branch.
Series1 log_series(const Series1& a);

// Taylor coefficients of outer(inner); inner must have zero constant term.
Series1 compose1(const Series1& outer, const Series1& inner);

Series1 derivative(const Series1& a);

// Compositional inverse at 0: f(0) = 0, f'(0) != 0. Computed independently by
// Lagrange inversion (primary) and Newton iteration on series (check); the two
// must agree to 1e-10 per coefficient.
Series1 revert(const Series1& f);

class Series2 {
public:
  explicit Series2(int order)
      : n_(order), c_(std::size_t(order + 1) * std::size_t(order + 1), Complex{0, 0}) {}
  static Series2 constant(Complex v, int order);

  int order() const { return n_; }
  Complex at(int p, int q) const { return c_[std::size_t(p) * std::size_t(n_ + 1) + std::size_t(q)]; }
  Complex& at(int p, int q) { return c_[std::size_t(p) * std::size_t(n_ + 1) + std::size_t(q)]; }

  Series2 operator+(const Series2& b) const;
  Series2 operator-(const Series2& b) const;
  Series2 operator*(const Series2& b) const;  // rectangular truncation
  Series2 operator*(Complex s) const;

  double max_coeff_difference(const Series2& b) const;

private:
  int n_;
  std::vector<Complex> c_;
};

Series2 div(const Series2& a, const Series2& b);
Series2 exp_series(const Series2& a);

// outer(inner_z(z), inner_w(w)); both inner series need zero constant term.
Series2 compose2(const Series2& outer, const Series1& inner_z, const Series1& inner_w);

// a(z) * b(w) as a 2-D series.
Series2 outer_product(const Series1& a, const Series1& b);

// Embeddings of a 1-D series along one coordinate.
Series2 embed_z(const Series1& a, int order);
Series2 embed_w(const Series1& a, int order);

}  // namespace bitorus
