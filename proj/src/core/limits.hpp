#pragma once

#include <functional>
#include <span>
#include <vector>

#include "core/convolution.hpp"

namespace bitorus {

// exp(i * integral of arg x over {|arg x| < eps}); the rotation that centers
// a near-degenerate circle law.
Complex centering_constant(const AtomicMeasure1D& nu, double eps);

struct AccompanyResult {
  std::vector<AtomicMeasure2D> row;  // rotated measures
  std::vector<Complex> b1, b2;       // per-entry centering constants
};
AccompanyResult accompany(std::span<const AtomicMeasure2D> row, double eps);

// h(z) = int (1-z)(1-x)/(1-zx) dnu(x); positive real part on the disk unless
// nu is the point mass at 1, and h(z) = -conj(h(1/conj z)).
Complex h_function(const AtomicMeasure1D& nu, Complex z);

// Parameter quintuple of an infinitely divisible law. rho1/rho2 are finite
// (not necessarily probability) measures; compatibility requires
// (1 - Re t) d rho1 == (1 - Re s) d rho2 atom by atom.
struct LevyData {
  AtomicMeasure2D rho1;
  AtomicMeasure2D rho2;
  double a = 0.0;
  Complex gamma1{1.0, 0.0};
  Complex gamma2{1.0, 0.0};
};

void validate_levy(const LevyData& ld);
// The common measure (1 - Re t) d rho1; empty when the data is normal-only.
AtomicMeasure2D levy_pairing_measure(const LevyData& ld);

Complex f_kernel(Complex z, Complex w);  // (1 - zw)/((1 - z)(1 - w))
// Assumes the data passed validate_levy; id_law validates once at build time.
Complex F_levy(const LevyData& ld, Complex z, Complex w);

// eta_inv(z) = gamma z exp( int (1+xz)/(1-xz) d sigma(x) ); the exponential
// presentation of a freely infinitely divisible circle law.
Map1 exponential_eta_inv(Complex gamma, const AtomicMeasure1D& sigma);

// The law with sigma = exp(f * F) and marginals in exponential form with
// sigma_j the j-th marginal of rho_j.
TransformLaw id_law(const LevyData& ld);

// Divide the data by n (principal branch for the n-th roots of gamma_j);
// n-fold reconvolution of the result recovers the original law.
LevyData id_root(const LevyData& ld, long n);

LevyData normal_law_data(double a);
LevyData poisson_law_data(double rate, const AtomicMeasure2D& jump);

// Finite truncation of the compound-Poisson approximation: arcs
// {1/m < |arg| <= pi} per coordinate select the jump atoms; returns
// Poi(r_m, mu_m) x N(a - a_m), and exactly N(a) when the pairing measure
// vanishes. Converges to the law with sigma = exp(f * F) as m grows.
TransformLaw id_from_levy_poisson_approx(const AtomicMeasure2D& rho1, const AtomicMeasure2D& rho2,
                                         double a, int m_index);

// Samples (1/2pi) log(|eta_inv(r e^{i theta})|/r) on a theta grid; integrating
// a test function against it approximates the integral against the Levy
// measure as r tends to 1. Point masses smear into Poisson spikes of width
// (1 - r), so the grid must be finer than that to integrate them.
std::vector<double> levy_sigma_density(const Map1& eta_inv, double r, int grid_size);
std::vector<double> levy_sigma_density(const FreeLaw1D& law, double r, int grid_size);
double levy_sigma_integral(std::span<const double> density,
                           const std::function<double(double)>& test_fn);

// Finite-level sums from one array row: the two weighted measures, the
// correlation sum, and the rotation estimates.
struct RowSums {
  AtomicMeasure2D rho1_sum;
  AtomicMeasure2D rho2_sum;
  double a_sum = 0.0;
  Complex gamma1{1.0, 0.0};
  Complex gamma2{1.0, 0.0};
};
RowSums limit_parameters(std::span<const AtomicMeasure2D> row, Complex lambda1, Complex lambda2,
                         double eps);

// Identical-row arrays for the two built-in demos.
AtomicMeasure2D normal_array_measure(double rate, long n);
AtomicMeasure2D poisson_array_measure(double rate, const AtomicMeasure2D& jump, long n);
AtomicMeasure2D default_poisson_jump();  // two atoms, (i,-1) and (-i,-1)

struct SweepRow {
  long level = 0;
  double max_error = 0.0;
};

// For each level n: the n-fold convolution power of row_measure(n) via the
// power shortcut (validated once against repeated pairwise convolution),
// extracted moments compared against the target law's table.
std::vector<SweepRow> limit_sweep(const std::function<AtomicMeasure2D(long)>& row_measure,
                                  std::span<const long> levels, const TransformLaw& target,
                                  int order, int grid_size);

struct HaarCheckRow {
  long level = 0;
  double m11_pow = 0.0;  // |m_{1,1}|^k at this level
  double m1_pow = 0.0;
  double m2_pow = 0.0;
  double envelope = 0.0;           // max of the three power sequences
  double max_offcenter_moment = 0.0;  // max |m_{p,q}|, (p,q) != (0,0), from the pipeline
};

// Power sequences of Prop-style Haar convergence plus the pipeline moment
// decay of the n-fold powers.
std::vector<HaarCheckRow> haar_limit_check(const std::function<AtomicMeasure2D(long)>& mu_n,
                                           std::span<const long> levels,
                                           const std::function<long(long)>& k_n, int order,
                                           int grid_size);

}  // namespace bitorus
