#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/transforms.hpp"

namespace bitorus {

// A circle law presented by its inverse eta-transform evaluator.
struct FreeLaw1D {
  Map1 eta_inv;
  double window_r = 0.5;
};

FreeLaw1D free_law(const AtomicMeasure1D& nu);
// Multiplicative free convolution: z eta_inv_{a x b}(z) = eta_inv_a(z) eta_inv_b(z).
FreeLaw1D free_convolve(const FreeLaw1D& a, const FreeLaw1D& b);
FreeLaw1D free_power(const FreeLaw1D& a, long n);

// Moments m_1..m_order of a circle law via DFT of psi on a circle of radius
// <= window/2 (m_0 = 1 is implied).
std::vector<Complex> extract_moments_1d(const FreeLaw1D& law, int order, int grid_size = 256,
                                        double radius = 0.4);

// Independent formal-series route (revert - multiply - revert) for the same
// moments; used to cross-validate the pointwise engine.
std::vector<Complex> free_moments_series(const AtomicMeasure1D& a, const AtomicMeasure1D& b,
                                         int order);

// Bi-free convolution at the transform level: marginal inverse-eta products
// and the pointwise sigma product, on a re-probed common window.
TransformLaw bifree_convolve(const TransformLaw& a, const TransformLaw& b);
TransformLaw bifree_power(const TransformLaw& a, long n);
// Point-mass convolution: sigma is unchanged, marginals are rotated.
TransformLaw rotate_law(const TransformLaw& a, Complex lambda1, Complex lambda2);

// psi of a transform-presented law through the reconstruction quotient
// (psi1 + psi2 + 1) E / (1 - E) with E = eta1 eta2 sigma(eta1, eta2).
Complex psi_reconstruct(const TransformLaw& law, Complex z, Complex w);

struct EvaluationGrid {
  int size = 256;        // power of two, >= 4 * order
  double radius_z = 0.4; // requested; clamped to half the law window
  double radius_w = 0.4;
};

struct ExtractionDiagnostics {
  double window_r = 0.0;
  double grid_radius_z = 0.0;
  double grid_radius_w = 0.0;
  int grid_size = 0;
  double max_hermitian_residual = 0.0;   // quadrant cross-estimate discrepancy
  double max_marginal_discrepancy = 0.0; // two-sided marginal estimates
  double mass_error = 0.0;               // |extracted m_{0,0} - 1|
  double min_moment_matrix_eigenvalue = 0.0;
  std::string to_json() const;
};

// Full moment table of a law: per-quadrant circle-grid DFT of psi with the
// marginal content subtracted, opposite-quadrant estimates averaged, and the
// marginal rows taken from the 1-D engine.
MomentTable2D extract_moments(const TransformLaw& law, const EvaluationGrid& grid, int order,
                              ExtractionDiagnostics* diag = nullptr);

// Rounding noise a top-order cell carries after DFT recovery at these radii.
double extraction_noise_estimate(double rz, double rw, int order, int grid_size);

// Positive-quadrant moments (p,q >= 0) of a x b through the formal-series
// engine; entry (p,0) and (0,q) are the marginal free-convolution moments.
Series2 bifree_moments_series(const AtomicMeasure2D& a, const AtomicMeasure2D& b, int order);

// Opposite convolution: pointwise product of the factors' opposite-sigma
// evaluators on a common bidisk.
Map2 opposite_convolve(const AtomicMeasure2D& a, const AtomicMeasure2D& b);

// Product formula for expectations of alternating words of centered
// variables: zero unless lengths match and the labels pair up.
struct CenteredWord {
  std::vector<int> left_labels;           // labels of a_1..a_m, values in {1,2}
  std::vector<int> right_labels;          // labels of b_1..b_n
  std::vector<Complex> pair_covariances;  // covariance of the k-th pair
};
Complex centered_alternating_moment(const CenteredWord& word);

// For two measures with centered marginals: the convolution is the uniform
// torus law iff one of the m_{1,1} moments vanishes; otherwise the only
// nonzero moments sit on the diagonal, m_{p,p} = m11(a)^p m11(b)^p.
struct HaarTestResult {
  bool is_haar = false;
  std::vector<Complex> diagonal;  // m_{p,p} for p = 1..max_order
};
HaarTestResult haar_test(const AtomicMeasure2D& a, const AtomicMeasure2D& b, int max_order,
                         double tau = kPxThreshold);

// Min over a grid in the bidisk of the double Poisson integral recovered from
// psi values; nonnegative (within tolerance) for a genuine probability law.
double poisson_positivity_min(const TransformLaw& law, int grid_n, double radius);
double poisson_positivity_min(const AtomicMeasure2D& mu, int grid_n, double radius);

}  // namespace bitorus
