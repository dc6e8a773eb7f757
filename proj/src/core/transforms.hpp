#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "core/measure.hpp"
#include "core/series.hpp"

namespace bitorus {

// Value and derivative of an analytic map at a point. Evaluators are pure and
// immutable; any internal memoization is synchronized and never changes the
// returned values, so concurrent evaluation is deterministic.
struct Jet {
  Complex v{0.0, 0.0};
  Complex d{0.0, 0.0};
};

using Map1 = std::function<Jet(Complex)>;
using Map2 = std::function<Complex(Complex, Complex)>;

// Which connected component of the off-torus product set a point lies in:
// D = inside the unit disk, U = outside the closed disk, per coordinate.
enum class DomainComponent { DD, DU, UD, UU };
DomainComponent classify_component(Complex z, Complex w);
const char* component_tag(DomainComponent c);

// Working radius r in (0,1); evaluators are certified on (D_r u Delta_r)^2.
struct DomainWindow {
  double r = 0.5;
};

// Moment generating integrals of a measure, valid off the unit torus.
Complex psi1(const AtomicMeasure1D& nu, Complex z);
Jet psi1_jet(const AtomicMeasure1D& nu, Complex z);
Complex psi2(const AtomicMeasure2D& mu, Complex z, Complex w);
Complex h2(const AtomicMeasure2D& mu, Complex z, Complex w);

// eta = psi/(1+psi); reports the pole 1+psi = 0 as a distinguished error.
Complex eta(const AtomicMeasure1D& nu, Complex z);
Jet eta_jet(const AtomicMeasure1D& nu, Complex z);

// Solves f(y) = target for the branch through f(0) = 0, following the ray
// from 0 to target with the given step; Newton at each step. `what` labels
// errors. Solutions are confined to the open unit disk.
Complex invert_to(const std::function<Jet(Complex)>& f, Complex target, double step,
                  const char* what);

// Inverse eta-transform evaluators. All handle |z| > 1 through the circle
// reflection symmetry, so they are defined on both bounded and unbounded
// components; eta_inv(0) = 0 by construction.
Map1 atomic_eta_inv(const AtomicMeasure1D& nu, double step = 0.05);
Map1 scaled_eta_inv(Map1 base, Complex divisor);      // point-mass convolution factor
Map1 product_eta_inv(Map1 a, Map1 b);                 // a(z) b(z) / z
Map1 power_eta_inv(Map1 base, long n);                // base(z)^n / z^(n-1)

// Forward eta recovered from an inverse-eta evaluator by Newton inversion,
// with an internal cache shared across copies.
class ForwardEta {
public:
  ForwardEta(Map1 eta_inv, double step);
  Complex operator()(Complex z) const;

private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

enum class LawProvenance { atomic, convolution, id_law };

// A law presented by evaluators instead of atoms: two marginal inverse-eta
// maps and the bivariate sigma evaluator, with the certified window radius.
struct TransformLaw {
  Map1 eta_inv1;
  Map1 eta_inv2;
  Map2 sigma;
  double window_r = 0.5;
  LawProvenance provenance = LawProvenance::atomic;
};

// Builds the transform presentation of an atomic measure (requires nonzero
// marginal means and nonzero m_{1,1}); selects the window adaptively.
TransformLaw make_transform_law(const AtomicMeasure2D& mu);

Map2 atomic_sigma(const AtomicMeasure2D& mu, Map1 eta_inv1, Map1 eta_inv2);
Map2 atomic_sigma_op(const AtomicMeasure2D& mu, Map1 eta_inv1, Map1 eta_inv2);

// Convenience pointwise forms (construct evaluators internally).
Complex eta_inv_pointwise(const AtomicMeasure1D& nu, Complex z, DomainWindow window);
Complex sigma_pointwise(const AtomicMeasure2D& mu, Complex z, Complex w, DomainWindow window);
Complex sigma_op_pointwise(const AtomicMeasure2D& mu, Complex z, Complex w);

// S(z,w) = (1+z)/z (1+w)/w [1 - (1+z+w)/H(psi1^{-1}(z), psi2^{-1}(w))],
// with psi^{-1}(z) = eta^{-1}(z/(1+z)). Rejects z = 0 and w = 0.
Complex s_transform(const AtomicMeasure2D& mu, Complex z, Complex w);

// Taylor coefficients of sigma at (0,0) through `order`, built from moment
// series and series reversion; independent of the pointwise engine.
Series2 sigma_series(const AtomicMeasure2D& mu, int order);
// `moment` must be defined for 0 <= p,q <= order+2 (guard order plus the
// index shift in the numerator kernel).
Series2 sigma_series_from_moments(const std::function<Complex(long, long)>& moment, int order);

// Adaptive window selection: starts at 0.5 and halves until every probe
// passes; throws when the radius would drop below min_r.
double select_window_radius(const std::vector<std::function<bool(double)>>& probes,
                            double start = 0.5, double min_r = 1.0 / 2048.0);
// Probe: eta_inv evaluable (values inside the unit disk) near the rim and the
// forward inversion solvable at half radius.
std::function<bool(double)> eta_window_probe(Map1 eta_inv);
// Probe: component-rescaled sigma denominators stay >= 0.1 in modulus.
std::function<bool(double)> sigma_margin_probe(AtomicMeasure2D mu, Map1 eta_inv1, Map1 eta_inv2);
// Probe: sigma merely evaluates without error on sample pairs.
std::function<bool(double)> sigma_eval_probe(Map2 sigma);

}  // namespace bitorus
