#include "core/series.hpp"

#include <algorithm>
#include <cmath>

namespace bitorus {

namespace {

void check_same_order(int a, int b) {
  require(a == b, Errc::invalid_argument, "series order mismatch");
}

}  // namespace

Series1 Series1::constant(Complex v, int order) {
  Series1 s(order);
  s[0] = v;
  return s;
}

Series1 Series1::identity(int order) {
  Series1 s(order);
  if (order >= 1) s[1] = 1.0;
  return s;
}

Series1 Series1::operator+(const Series1& b) const {
  check_same_order(order(), b.order());
  Series1 r(order());
  for (int k = 0; k <= order(); ++k) r[k] = (*this)[k] + b[k];
  return r;
}

Series1 Series1::operator-(const Series1& b) const {
  check_same_order(order(), b.order());
  Series1 r(order());
  for (int k = 0; k <= order(); ++k) r[k] = (*this)[k] - b[k];
  return r;
}

Series1 Series1::operator*(const Series1& b) const {
  check_same_order(order(), b.order());
  Series1 r(order());
  for (int k = 0; k <= order(); ++k) {
    Complex acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += (*this)[j] * b[k - j];
    r[k] = acc;
  }
  return r;
}

Series1 Series1::operator*(Complex s) const {
  Series1 r(order());
  for (int k = 0; k <= order(); ++k) r[k] = (*this)[k] * s;
  return r;
}

double Series1::max_coeff_difference(const Series1& b) const {
  check_same_order(order(), b.order());
  double worst = 0.0;
  for (int k = 0; k <= order(); ++k) worst = std::max(worst, std::abs((*this)[k] - b[k]));
  return worst;
}

Series1 div(const Series1& a, const Series1& b) {
  check_same_order(a.order(), b.order());
  require(std::abs(b[0]) > 0.0, Errc::invalid_argument, "series division by non-unit series");
  Series1 r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    Complex acc = a[k];
    for (int j = 0; j < k; ++j) acc -= r[j] * b[k - j];
    r[k] = acc / b[0];
  }
  return r;
}

Series1 exp_series(const Series1& a) {
  // e = exp(a): e' = a' e gives k e_k = sum_{j=1..k} j a_j e_{k-j}.
  Series1 e(a.order());
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    Complex acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += double(j) * a[j] * e[k - j];
    e[k] = acc / double(k);
  }
  return e;
}

Series1 log_series(const Series1& a) {
  require(std::abs(a[0]) > 0.0 && !(a[0].real() < 0.0 && a[0].imag() == 0.0),
          Errc::invalid_argument, "series log: constant term on the branch cut");
  // l = log(a): l' = a'/a gives k a_0 l_k = k a_k - sum_{j=1..k-1} j l_j a_{k-j}.
  Series1 l(a.order());
  l[0] = std::log(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    Complex acc = double(k) * a[k];
    for (int j = 1; j < k; ++j) acc -= double(j) * l[j] * a[k - j];
    l[k] = acc / (double(k) * a[0]);
  }
  return l;
}

Series1 compose1(const Series1& outer, const Series1& inner) {
  check_same_order(outer.order(), inner.order());
  require(std::abs(inner[0]) == 0.0, Errc::invalid_argument,
          "compose1: inner series must have zero constant term");
  // Horner in series arithmetic.
  const int n = outer.order();
  Series1 r = Series1::constant(outer[n], n);
  for (int k = n - 1; k >= 0; --k) {
    r = r * inner;
    r[0] += outer[k];
  }
  return r;
}

Series1 derivative(const Series1& a) {
  Series1 r(a.order());
  for (int k = 1; k <= a.order(); ++k) r[k - 1] = double(k) * a[k];
  return r;
}

namespace {

Series1 revert_lagrange(const Series1& f) {
  const int n = f.order();
  // g_k = (1/k) [z^{k-1}] (z/f)^k; build u = z/f once and take running powers.
  Series1 h(n);
  for (int k = 0; k < n; ++k) h[k] = f[k + 1];  // f/z
  Series1 u = div(Series1::constant(1.0, n), h);
  Series1 upow = Series1::constant(1.0, n);
  Series1 g(n);
  for (int k = 1; k <= n; ++k) {
    upow = upow * u;
    g[k] = upow[k - 1] / double(k);
  }
  return g;
}

Series1 revert_newton(const Series1& f) {
  const int n = f.order();
  Series1 z = Series1::identity(n);
  Series1 g = z * (1.0 / f[1]);
  Series1 fp = derivative(f);
  // Each step doubles the number of correct coefficients.
  int steps = 2;
  for (int m = 1; m < n; m *= 2) ++steps;
  for (int it = 0; it < steps; ++it) {
    Series1 resid = compose1(f, g) - z;
    g = g - div(resid, compose1(fp, g));
  }
  return g;
}

}  // namespace

Series1 revert(const Series1& f) {
  require(std::abs(f[0]) == 0.0, Errc::invalid_argument, "revert: nonzero constant term");
  require(f.order() >= 1 && std::abs(f[1]) > 0.0, Errc::invalid_argument,
          "revert: vanishing linear coefficient");
  Series1 g = revert_lagrange(f);
  Series1 check = revert_newton(f);
  double dev = g.max_coeff_difference(check);
  double scale = 1.0;
  for (int k = 0; k <= g.order(); ++k) scale = std::max(scale, std::abs(g[k]));
  require(dev <= 1e-10 * scale, Errc::diagnostics,
          "revert: Lagrange and Newton routes disagree by " + fmt17(dev));
  return g;
}

Series2 Series2::constant(Complex v, int order) {
  Series2 s(order);
  s.at(0, 0) = v;
  return s;
}

Series2 Series2::operator+(const Series2& b) const {
  check_same_order(n_, b.n_);
  Series2 r(n_);
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) r.at(p, q) = at(p, q) + b.at(p, q);
  return r;
}

Series2 Series2::operator-(const Series2& b) const {
  check_same_order(n_, b.n_);
  Series2 r(n_);
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) r.at(p, q) = at(p, q) - b.at(p, q);
  return r;
}

Series2 Series2::operator*(const Series2& b) const {
  check_same_order(n_, b.n_);
  Series2 r(n_);
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) {
      Complex acc = 0.0;
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) acc += at(i, j) * b.at(p - i, q - j);
      r.at(p, q) = acc;
    }
  return r;
}

Series2 Series2::operator*(Complex s) const {
  Series2 r(n_);
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) r.at(p, q) = at(p, q) * s;
  return r;
}

double Series2::max_coeff_difference(const Series2& b) const {
  check_same_order(n_, b.n_);
  double worst = 0.0;
  for (int p = 0; p <= n_; ++p)
    for (int q = 0; q <= n_; ++q) worst = std::max(worst, std::abs(at(p, q) - b.at(p, q)));
  return worst;
}

Series2 div(const Series2& a, const Series2& b) {
  check_same_order(a.order(), b.order());
  require(std::abs(b.at(0, 0)) > 0.0, Errc::invalid_argument,
          "series division by non-unit series");
  const int n = a.order();
  Series2 r(n);
  // Solve b*r = a coefficientwise in graded lexicographic order.
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      Complex acc = a.at(p, q);
      for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) {
          if (i == 0 && j == 0) continue;
          acc -= b.at(i, j) * r.at(p - i, q - j);
        }
      r.at(p, q) = acc / b.at(0, 0);
    }
  return r;
}

Series2 exp_series(const Series2& a) {
  // Recurrence on the z-degree: p e_p(w) = sum_{i=1..p} i a_i(w) e_{p-i}(w),
  // with 1-D exp along w for the p = 0 slice.
  const int n = a.order();
  Series2 e(n);
  Series1 a0(n);
  for (int q = 0; q <= n; ++q) a0[q] = a.at(0, q);
  Series1 e0 = exp_series(a0);
  for (int q = 0; q <= n; ++q) e.at(0, q) = e0[q];
  for (int p = 1; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      Complex acc = 0.0;
      for (int i = 1; i <= p; ++i)
        for (int j = 0; j <= q; ++j) acc += double(i) * a.at(i, j) * e.at(p - i, q - j);
      e.at(p, q) = acc / double(p);
    }
  return e;
}

Series2 compose2(const Series2& outer, const Series1& inner_z, const Series1& inner_w) {
  const int n = outer.order();
  check_same_order(inner_z.order(), n);
  check_same_order(inner_w.order(), n);
  require(std::abs(inner_z[0]) == 0.0 && std::abs(inner_w[0]) == 0.0, Errc::invalid_argument,
          "compose2: inner series must have zero constant term");
  // Running powers of both inner series; accumulate outer products.
  std::vector<Series1> zp, wp;
  zp.reserve(std::size_t(n) + 1);
  wp.reserve(std::size_t(n) + 1);
  zp.push_back(Series1::constant(1.0, n));
  wp.push_back(Series1::constant(1.0, n));
  for (int k = 1; k <= n; ++k) {
    zp.push_back(zp.back() * inner_z);
    wp.push_back(wp.back() * inner_w);
  }
  Series2 r(n);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      Complex c = outer.at(p, q);
      if (c == Complex{0, 0}) continue;
      for (int a = p; a <= n; ++a) {
        if (zp[std::size_t(p)][a] == Complex{0, 0}) continue;
        Complex za = c * zp[std::size_t(p)][a];
        for (int b = q; b <= n; ++b) r.at(a, b) += za * wp[std::size_t(q)][b];
      }
    }
  return r;
}

Series2 outer_product(const Series1& a, const Series1& b) {
  check_same_order(a.order(), b.order());
  Series2 r(a.order());
  for (int p = 0; p <= a.order(); ++p)
    for (int q = 0; q <= a.order(); ++q) r.at(p, q) = a[p] * b[q];
  return r;
}

Series2 embed_z(const Series1& a, int order) {
  check_same_order(a.order(), order);
  Series2 r(order);
  for (int p = 0; p <= order; ++p) r.at(p, 0) = a[p];
  return r;
}

Series2 embed_w(const Series1& a, int order) {
  check_same_order(a.order(), order);
  Series2 r(order);
  for (int q = 0; q <= order; ++q) r.at(0, q) = a[q];
  return r;
}

}  // namespace bitorus
