// Joins two points of a projector orbit by an orbit geodesic, checks the
// length formula and recovers the endpoint from the initial velocity.

#include <cstdio>

#include "orbitgeo/orbit.hpp"
#include "orbitgeo/sampling.hpp"

int main() {
  using namespace orbitgeo;
  sampling::Rng rng(7);
  const FiniteSpectrumHermitian base = sampling::projector_base(rng, 6, 2);
  const OrbitPoint p(base, sampling::unitary(rng, 6));
  const OrbitPoint q(base, sampling::unitary(rng, 6));

  const OrbitLog log = orbit_log(p, q);
  std::printf("commutation certificate %.3e, spectrum drift %.3e\n", log.commutation, log.spectrum_drift);

  const Matrix v = orbit_velocity(p, log.h);
  const OrbitPoint back = orbit_exp(p, v);
  std::printf("|exp_p(v) - q|_2 = %.3e\n", hs_norm(back.realization() - q.realization()));

  const SampledCurve curve{[&](double t) { return orbit_geodesic(p, log.h, t).point(); }};
  std::printf("length: closed form %.12g, quadrature %.12g\n", orbit_length(base.projector(), log.h), curve_length(curve));
  std::printf("ambient distance    %.12g\n", distance(p.point(), q.point()));

  // Near the base, the cross-section recovers a unitary moving a onto x.
  const FiniteSpectrumHermitian a = sampling::finite_spectrum(rng, 5, 3);
  const Matrix x = orbit_action(unitary_exp(0.01 * sampling::hermitian(rng, 5)), a.matrix());
  const Matrix u = cross_section(a, x, SectionMode::kOnOrbit);
  std::printf("|u a u* - x|_2 = %.3e with delta(a) = %.3f\n", hs_norm(orbit_action(u, a.matrix()) - x), a.neighborhood_radius());
}
