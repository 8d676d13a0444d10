#pragma once

#include <vector>

#include "sac/grid.hpp"
#include "sac/potential.hpp"
#include "sac/test_function.hpp"
#include "sac/vec.hpp"

namespace sac {

// Van der Waals--Cahn--Hilliard energy  int (eps/2)|grad u|^2 + F(u)/eps.
// The gradient part uses the edge-based form that is exactly adjoint to the
// laplacian stencil, so the deterministic energy balance closes to O(dt).
double energy(const ScalarField& u, const DoubleWell& well, double eps);

// mu_eps(eta) = int eta [ (eps/2)|grad u|^2 + F(u)/eps ]; eta == 1 recovers
// energy() bitwise (same edge sum, eta evaluated at edge midpoints).
double surface_measure(const ScalarField& u, const DoubleWell& well, double eps,
                       const TestFunction& eta);

// w_eps = -eps lap(u) + F'(u)/eps
ScalarField diffuse_mean_curvature(const ScalarField& u, const DoubleWell& well,
                                   double eps);

// grad(u)/|grad(u)| with ties broken by the fixed unit vector e_1
VectorFieldSample normal_direction(const ScalarField& u, double tie_threshold = 1e-12);

struct GDiagnostics {
    ScalarField g_field;  // G(u) nodewise
    double bv_g = 0.0;    // int |grad G(u)|
    double l1_g = 0.0;    // int |G(u)|
};
GDiagnostics g_diagnostics(const ScalarField& u, const DoubleWell& well);

// Zero level set. 1D: crossing coordinates. 2D: marching-squares segment
// endpoints (segment soup; adjacent pairs in `points` form segments).
struct InterfaceSet {
    std::vector<double> crossings;  // 1D
    std::vector<Vec2> points;       // 2D, size even
    bool empty() const { return crossings.empty() && points.empty(); }
};
InterfaceSet interface_extract(const ScalarField& u);

// Mean distance of the extracted zero set to `center`; NaN when no interface.
double circle_radius(const ScalarField& u, const Vec2& center);

// Fraction of the domain where |u| < threshold (diffuse-interface volume).
double separation_fraction(const ScalarField& u, double threshold = 0.9);

}  // namespace sac
