#pragma once

#include <optional>
#include <random>
#include <vector>

#include "finmode/interaction.hpp"
#include "finmode/spectral_field.hpp"

namespace finmode {

using Rng = std::mt19937_64;

SpectralField make_abc(double a, double b, double c);
// ABC(1,1,1) with the (1,0,0) pair replaced by (0, -i, 1/2): divergence-free, not Beltrami.
SpectralField make_perturbed_abc();
// Complex stationary field on the regular tetrahedron {(s,s,1), (s,-s,-1)}.
SpectralField make_tetrahedron();

SpectralField make_line(const Frequency& direction, int harmonics, Rng& rng);
SpectralField make_planar_perp(const Frequency& normal, int modes, Rng& rng);

// p rational points of one circle in the plane with the given normal, symmetric under negation.
std::vector<Frequency> rational_circle(const Frequency& normal, int p);

// Horizontal part alpha_j e_par on the circle; vertical part Q(omega) - <Q(omega)>.
// alpha is given for the lexicographically positive circle points in sorted order; default -i.
SpectralField make_planar_q(const Frequency& normal, int p, const std::vector<double>& q,
                            const std::optional<std::vector<Complex>>& alpha = std::nullopt);
SpectralField make_planar_q_random(const Frequency& normal, int p, const std::vector<double>& q, Rng& rng);

// Integer points with |n|^2 = radius2, lexicographically positive.
std::vector<Frequency> sphere_points(int radius2);
// `modes` support frequencies (even, >= 6) on one integer sphere, not coplanar.
SpectralField make_beltrami_random(int modes, BeltramiSign sign, Rng& rng);

// Random divergence-free real field on `modes` frequencies with components in [-range, range].
SpectralField make_random_field(int modes, int range, Rng& rng);

Complex random_complex(Rng& rng);
CVec3 random_divergence_free(const Frequency& n, Rng& rng);
Vec3 random_unit(Rng& rng);

}  // namespace finmode
