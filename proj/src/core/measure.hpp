#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/complexutil.hpp"

namespace bitorus {

// Atoms are stored as angles so unit modulus is exact by construction and
// merging is stable. All measure values are immutable after construction.

struct Atom1 {
  double angle = 0.0;
  double weight = 0.0;
};

struct Atom2 {
  double s_angle = 0.0;
  double t_angle = 0.0;
  double weight = 0.0;
};

class AtomicMeasure1D {
public:
  AtomicMeasure1D() = default;  // the empty finite measure

  // Probability constructor checks total mass == 1 (within 1e-12); the finite
  // constructor accepts any nonnegative mass and is what Levy data needs.
  static AtomicMeasure1D probability(std::vector<Atom1> atoms);
  static AtomicMeasure1D finite(std::vector<Atom1> atoms);
  static AtomicMeasure1D point(double angle) { return probability({{angle, 1.0}}); }

  const std::vector<Atom1>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return mass_; }
  bool is_probability() const { return std::abs(mass_ - 1.0) <= 1e-12; }

  Complex point_at(std::size_t i) const { return unit(atoms_[i].angle); }
  Complex moment(long p) const;
  Complex mean() const { return moment(1); }

  bool in_class_px(double tau = kPxThreshold) const { return std::abs(mean()) > tau; }

private:
  std::vector<Atom1> atoms_;
  double mass_ = 0.0;
};

class AtomicMeasure2D {
public:
  AtomicMeasure2D() = default;  // the empty finite measure

  static AtomicMeasure2D probability(std::vector<Atom2> atoms);
  static AtomicMeasure2D finite(std::vector<Atom2> atoms);
  static AtomicMeasure2D point(double s_angle, double t_angle) {
    return probability({{s_angle, t_angle, 1.0}});
  }

  const std::vector<Atom2>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const { return mass_; }
  bool is_probability() const { return std::abs(mass_ - 1.0) <= 1e-12; }

  Complex s_at(std::size_t i) const { return unit(atoms_[i].s_angle); }
  Complex t_at(std::size_t i) const { return unit(atoms_[i].t_angle); }

  Complex moment(long p, long q) const;
  Complex m11() const { return moment(1, 1); }

  // Push-forward under the coordinate projection, j in {1,2}.
  AtomicMeasure1D marginal(int j) const;

  // (s,t) -> (s, 1/t); an involution.
  AtomicMeasure2D reflect() const;

  // Point-mass convolution factor: every atom rotated by (lambda1, lambda2).
  AtomicMeasure2D rotate(Complex lambda1, Complex lambda2) const;
  AtomicMeasure2D rotate_angles(double a1, double a2) const;

  bool in_class_px(double tau = kPxThreshold) const;

private:
  std::vector<Atom2> atoms_;
  double mass_ = 0.0;
};

AtomicMeasure2D product_measure(const AtomicMeasure1D& alpha, const AtomicMeasure1D& beta);

// Max over the row of the mass outside {(s,t): |s-1|+|t-1| < eps}.
double infinitesimality_norm(std::span<const AtomicMeasure2D> row, double eps);

// Truncated double-indexed moment array m_{p,q}, |p|,|q| <= order.
class MomentTable2D {
public:
  explicit MomentTable2D(int order);
  static MomentTable2D from_measure(const AtomicMeasure2D& mu, int order);

  int order() const { return order_; }
  Complex at(long p, long q) const;
  void set(long p, long q, Complex v);

  double hermitian_residual() const;  // max |m_{-p,-q} - conj(m_{p,q})|
  double max_abs() const;
  // Min eigenvalue of the Toeplitz-type matrix M[(p,q),(p',q')] = m_{p-p',q-q'}
  // over the window |p|,|q| <= order/2; >= 0 (within tolerance) certifies the
  // table comes from a genuine positive measure.
  double min_moment_matrix_eigenvalue() const;

  // Rows sorted lexicographically by (p,q); header "p,q,re,im"; 17 digits.
  std::string to_csv() const;

  // Max entrywise |a - b| over the common order.
  static double max_difference(const MomentTable2D& a, const MomentTable2D& b);

private:
  std::size_t idx(long p, long q) const;
  int order_;
  std::vector<Complex> m_;
};

// Min eigenvalue of a Hermitian matrix given in row-major order (cyclic
// Jacobi on the real symmetric embedding; n is small here).
double min_eigenvalue_hermitian(const std::vector<Complex>& a, int n);

}  // namespace bitorus
