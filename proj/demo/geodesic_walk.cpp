// Walks the geodesic between two random positive operators and prints the
// distance covered, the Euler residual and the scalar part at each step.

#include <cstdio>

#include "orbitgeo/manifold.hpp"
#include "orbitgeo/sampling.hpp"

int main() {
  using namespace orbitgeo;
  sampling::Rng rng(2024);
  const PositivePoint p = sampling::positive(rng, 4);
  const PositivePoint q = sampling::positive(rng, 4);
  const double total = distance(p, q);
  const SampledCurve curve{[&](double t) { return geodesic(p, q, t); }};

  std::printf("dist(p, q) = %.12g\n", total);
  std::printf("%6s %14s %14s %14s\n", "t", "dist(p, g_t)", "t * dist", "euler");
  for (int k = 1; k < 8; ++k) {
    const double t = k / 8.0;
    std::printf("%6.3f %14.10f %14.10f %14.3e\n", t, distance(p, curve.at(t)), t * total, geodesic_residual(curve, t));
  }
  std::printf("length by quadrature = %.12g\n", curve_length(curve));

  // Any other curve between the endpoints is longer.
  const UnitizedOperator bump = 0.3 * sampling::hermitian_pair(rng, 4);
  const SampledCurve detour{[&](double t) {
    const PositivePoint g = geodesic(p, q, t);
    return exp_map(g, TangentVector(g, (t * (1.0 - t)) * bump));
  }};
  std::printf("length of a detour   = %.12g\n", curve_length(detour));
}
