#pragma once

#include <random>
#include <vector>

#include "core/convolution.hpp"
#include "core/measure.hpp"

namespace bitorus::testutil {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Arbitrary probability measure on the circle (no mean condition).
inline AtomicMeasure1D random_measure1(Rng& rng, int max_atoms = 4) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom1> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -kPi, kPi), w});
    mass += w;
  }
  for (Atom1& a : atoms) a.weight /= mass;
  return AtomicMeasure1D::probability(std::move(atoms));
}

inline AtomicMeasure2D random_measure2(Rng& rng, int max_atoms = 4) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom2> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi), w});
    mass += w;
  }
  for (Atom2& a : atoms) a.weight /= mass;
  return AtomicMeasure2D::probability(std::move(atoms));
}

// Measure with well-separated mean moments so the convolution pipeline stays
// well-conditioned (resampled until |m1|, |m2|, |m11| >= floor).
inline AtomicMeasure2D random_measure2_px(Rng& rng, double floor = 0.3, int max_atoms = 4) {
  for (int tries = 0; tries < 1000; ++tries) {
    AtomicMeasure2D mu = random_measure2(rng, max_atoms);
    if (std::abs(mu.marginal(1).mean()) >= floor && std::abs(mu.marginal(2).mean()) >= floor &&
        std::abs(mu.m11()) >= floor)
      return mu;
  }
  // Angles this tight always make the means large.
  std::vector<Atom2> atoms;
  double mass = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5), w});
    mass += w;
  }
  for (Atom2& a : atoms) a.weight /= mass;
  return AtomicMeasure2D::probability(std::move(atoms));
}

inline AtomicMeasure1D random_measure1_px(Rng& rng, double floor = 0.3, int max_atoms = 4) {
  for (int tries = 0; tries < 1000; ++tries) {
    AtomicMeasure1D nu = random_measure1(rng, max_atoms);
    if (std::abs(nu.mean()) >= floor) return nu;
  }
  return AtomicMeasure1D::probability({{uniform(rng, -0.4, 0.4), 1.0}});
}

// Concentrated measure (atoms within +-spread of 1) with strong means; the
// kind of input whose transforms stay invertible far into the disk.
inline AtomicMeasure2D random_measure2_concentrated(Rng& rng, double spread = 1.0,
                                                    int max_atoms = 4) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom2> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -spread, spread), uniform(rng, -spread, spread), w});
    mass += w;
  }
  for (Atom2& a : atoms) a.weight /= mass;
  return AtomicMeasure2D::probability(std::move(atoms));
}

// Concentrated circle measure with a strong mean; its transform series
// converge well beyond the probe radii used in cross-engine checks.
inline AtomicMeasure1D random_measure1_concentrated(Rng& rng, double spread = 0.45,
                                                    int max_atoms = 3) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom1> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -spread, spread), w});
    mass += w;
  }
  for (Atom1& a : atoms) a.weight /= mass;
  return AtomicMeasure1D::probability(std::move(atoms));
}

inline AtomicMeasure2D random_measure2_convergent(Rng& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    AtomicMeasure2D mu = random_measure2_concentrated(rng, 0.8);
    if (std::abs(mu.marginal(1).mean()) >= 0.6 && std::abs(mu.marginal(2).mean()) >= 0.6 &&
        std::abs(mu.m11()) >= 0.5)
      return mu;
  }
  return AtomicMeasure2D::probability({{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), 1.0}});
}

// Random law whose certified window supports extraction at the given order
// within the conditioning cap (redrawn until the window is wide enough).
inline AtomicMeasure2D random_measure2_wellwindowed(Rng& rng, double min_window = 0.5) {
  for (int tries = 0; tries < 100; ++tries) {
    AtomicMeasure2D mu = random_measure2_px(rng);
    try {
      if (make_transform_law(mu).window_r >= min_window) return mu;
    } catch (const Error&) {
    }
  }
  return random_measure2_convergent(rng);
}

inline AtomicMeasure1D random_measure1_wellwindowed(Rng& rng, double min_window = 0.5) {
  for (int tries = 0; tries < 100; ++tries) {
    AtomicMeasure1D nu = random_measure1_px(rng);
    try {
      if (free_law(nu).window_r >= min_window) return nu;
    } catch (const Error&) {
    }
  }
  return random_measure1_concentrated(rng);
}

// Pair of laws whose bi-free convolution keeps a full-width window, so
// order-6 moment extraction stays at the 1e-8 accuracy the comparisons need.
inline std::pair<AtomicMeasure2D, AtomicMeasure2D> random_convolvable_pair(Rng& rng) {
  for (int tries = 0; tries < 60; ++tries) {
    AtomicMeasure2D a = random_measure2_convergent(rng);
    AtomicMeasure2D b = random_measure2_convergent(rng);
    try {
      if (bifree_convolve(make_transform_law(a), make_transform_law(b)).window_r >= 0.5)
        return {a, b};
    } catch (const Error&) {
    }
  }
  return {AtomicMeasure2D::point(uniform(rng, -1, 1), uniform(rng, -1, 1)),
          AtomicMeasure2D::point(uniform(rng, -1, 1), uniform(rng, -1, 1))};
}

// Dominant atom plus light satellites. A satellite of mass w folds the
// eta-transform at distance ~2 sqrt(w) inside the unit circle, so keeping the
// total satellite mass under half a percent leaves the radius-0.8 circle
// reachable by ray continuation in every direction.
inline AtomicMeasure2D random_measure2_nearpoint(Rng& rng) {
  double w0 = uniform(rng, 0.996, 0.999);
  double rest = 1.0 - w0;
  std::vector<Atom2> atoms{{uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4), w0}};
  int n = uniform_int(rng, 1, 2);
  for (int i = 0; i < n; ++i)
    atoms.push_back({uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi), rest / n});
  return AtomicMeasure2D::probability(std::move(atoms));
}

inline Complex random_point_in_disk(Rng& rng, double rmin, double rmax) {
  return std::polar(uniform(rng, rmin, rmax), uniform(rng, -kPi, kPi));
}

// Off-torus point: inside with probability 1/2, otherwise reflected outside.
inline Complex random_offtorus_point(Rng& rng, double rmin = 0.05, double rmax = 0.9) {
  Complex z = random_point_in_disk(rng, rmin, rmax);
  if (uniform_int(rng, 0, 1)) return circle_reflect(z);
  return z;
}

}  // namespace bitorus::testutil
