#include "sac/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace sac {

namespace {

// Edge-weighted sum of eta * (eps/2) |grad u|^2 over staggered edges plus the
// nodal potential part. The eta == 1 path is the energy itself.
double localized_energy_impl(const ScalarField& u, const DoubleWell& well,
                             double eps, const TestFunction* eta) {
    const Grid& g = u.grid;
    const int m = g.m;
    const double ih = 1.0 / g.h;
    const int edges = g.closure == Closure::periodic ? m : m - 1;
    const bool constant_eta = eta == nullptr ||
                              eta->kind == TestFunctionKind::constant_one;
    double grad_part = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < edges; ++i) {
            const int j = g.closure == Closure::periodic ? (i + 1) % m : i + 1;
            const double d = (u.v[j] - u.v[i]) * ih;
            const double w = constant_eta
                                 ? 1.0
                                 : eta->value({g.coord(i) + 0.5 * g.h, 0.0});
            grad_part += g.h * w * d * d;
        }
    } else {
        for (int iy = 0; iy < m; ++iy) {
            const double wy = g.weight1(iy);
            for (int ix = 0; ix < edges; ++ix) {
                const int jx = g.closure == Closure::periodic ? (ix + 1) % m : ix + 1;
                const double d = (u.v[g.index(jx, iy)] - u.v[g.index(ix, iy)]) * ih;
                const double w =
                    constant_eta
                        ? 1.0
                        : eta->value({g.coord(ix) + 0.5 * g.h, g.coord(iy)});
                grad_part += wy * g.h * w * d * d;
            }
        }
        for (int ix = 0; ix < m; ++ix) {
            const double wx = g.weight1(ix);
            for (int iy = 0; iy < edges; ++iy) {
                const int jy = g.closure == Closure::periodic ? (iy + 1) % m : iy + 1;
                const double d = (u.v[g.index(ix, jy)] - u.v[g.index(ix, iy)]) * ih;
                const double w =
                    constant_eta
                        ? 1.0
                        : eta->value({g.coord(ix), g.coord(iy) + 0.5 * g.h});
                grad_part += wx * g.h * w * d * d;
            }
        }
    }
    double pot_part = 0.0;
    const int my = g.dim == 2 ? m : 1;
    for (int iy = 0; iy < my; ++iy)
        for (int ix = 0; ix < m; ++ix) {
            const int idx = g.dim == 2 ? g.index(ix, iy) : ix;
            const double w =
                constant_eta
                    ? 1.0
                    : eta->value({g.coord(ix), g.dim == 2 ? g.coord(iy) : 0.0});
            pot_part += g.weight(ix, g.dim == 2 ? iy : 0) * w * well.f(u.v[idx]);
        }
    return 0.5 * eps * grad_part + pot_part / eps;
}

}  // namespace

double energy(const ScalarField& u, const DoubleWell& well, double eps) {
    return localized_energy_impl(u, well, eps, nullptr);
}

double surface_measure(const ScalarField& u, const DoubleWell& well, double eps,
                       const TestFunction& eta) {
    return localized_energy_impl(u, well, eps, &eta);
}

ScalarField diffuse_mean_curvature(const ScalarField& u, const DoubleWell& well,
                                   double eps) {
    ScalarField w(u.grid);
    laplacian_into(u.grid, u.v.data(), w.v.data());
    for (int i = 0; i < u.size(); ++i)
        w.v[i] = -eps * w.v[i] + well.fp(u.v[i]) / eps;
    return w;
}

VectorFieldSample normal_direction(const ScalarField& u, double tie_threshold) {
    VectorFieldSample nu = gradient(u);
    const int n = u.size();
    for (int i = 0; i < n; ++i) {
        const double gx = nu.comp[0][i];
        const double gy = u.grid.dim == 2 ? nu.comp[1][i] : 0.0;
        const double len = std::sqrt(gx * gx + gy * gy);
        if (len > tie_threshold) {
            nu.comp[0][i] = gx / len;
            if (u.grid.dim == 2) nu.comp[1][i] = gy / len;
        } else {
            nu.comp[0][i] = 1.0;
            if (u.grid.dim == 2) nu.comp[1][i] = 0.0;
        }
    }
    return nu;
}

GDiagnostics g_diagnostics(const ScalarField& u, const DoubleWell& well) {
    GDiagnostics out;
    out.g_field = ScalarField(u.grid);
    for (int i = 0; i < u.size(); ++i) out.g_field.v[i] = well.g(u.v[i]);
    VectorFieldSample gg = gradient(out.g_field);
    ScalarField mag(u.grid), absg(u.grid);
    for (int i = 0; i < u.size(); ++i) {
        const double gx = gg.comp[0][i];
        const double gy = u.grid.dim == 2 ? gg.comp[1][i] : 0.0;
        mag.v[i] = std::sqrt(gx * gx + gy * gy);
        absg.v[i] = std::abs(out.g_field.v[i]);
    }
    out.bv_g = integrate(mag);
    out.l1_g = integrate(absg);
    return out;
}

InterfaceSet interface_extract(const ScalarField& u) {
    InterfaceSet out;
    const Grid& g = u.grid;
    const int m = g.m;
    const auto cross = [](double a, double b) { return (a <= 0) != (b <= 0); };
    const auto lerp0 = [](double xa, double xb, double a, double b) {
        return xa + (xb - xa) * (a / (a - b));
    };
    if (g.dim == 1) {
        const int edges = g.closure == Closure::periodic ? m : m - 1;
        for (int i = 0; i < edges; ++i) {
            const int j = g.closure == Closure::periodic ? (i + 1) % m : i + 1;
            const double a = u.v[i], b = u.v[j];
            if (cross(a, b))
                out.crossings.push_back(lerp0(g.coord(i), g.coord(i) + g.h, a, b));
        }
        return out;
    }
    // marching squares: emit one or two segments per cell
    const int cells = g.closure == Closure::periodic ? m : m - 1;
    for (int iy = 0; iy < cells; ++iy) {
        const int jy = g.closure == Closure::periodic ? (iy + 1) % m : iy + 1;
        for (int ix = 0; ix < cells; ++ix) {
            const int jx = g.closure == Closure::periodic ? (ix + 1) % m : ix + 1;
            const double x0 = g.coord(ix), y0 = g.coord(iy);
            const double x1 = x0 + g.h, y1 = y0 + g.h;
            const double v00 = u.v[g.index(ix, iy)], v10 = u.v[g.index(jx, iy)];
            const double v01 = u.v[g.index(ix, jy)], v11 = u.v[g.index(jx, jy)];
            int c = 0;
            if (v00 > 0) c |= 1;
            if (v10 > 0) c |= 2;
            if (v11 > 0) c |= 4;
            if (v01 > 0) c |= 8;
            if (c == 0 || c == 15) continue;
            Vec2 pb{lerp0(x0, x1, v00, v10), y0};           // bottom edge
            Vec2 pr{x1, lerp0(y0, y1, v10, v11)};           // right edge
            Vec2 pt{lerp0(x0, x1, v01, v11), y1};           // top edge
            Vec2 pl{x0, lerp0(y0, y1, v00, v01)};           // left edge
            const auto seg = [&out](const Vec2& a, const Vec2& b) {
                out.points.push_back(a);
                out.points.push_back(b);
            };
            switch (c) {
                case 1: case 14: seg(pl, pb); break;
                case 2: case 13: seg(pb, pr); break;
                case 3: case 12: seg(pl, pr); break;
                case 4: case 11: seg(pr, pt); break;
                case 6: case 9:  seg(pb, pt); break;
                case 7: case 8:  seg(pl, pt); break;
                case 5:  seg(pl, pb); seg(pr, pt); break;  // saddle
                case 10: seg(pb, pr); seg(pl, pt); break;  // saddle
                default: break;
            }
        }
    }
    return out;
}

double circle_radius(const ScalarField& u, const Vec2& center) {
    const InterfaceSet s = interface_extract(u);
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    int n = 0;
    for (double x : s.crossings) {
        acc += std::abs(x - center.x);
        ++n;
    }
    for (const Vec2& p : s.points) {
        acc += (p - center).norm();
        ++n;
    }
    return acc / n;
}

double separation_fraction(const ScalarField& u, double threshold) {
    ScalarField ind(u.grid);
    for (int i = 0; i < u.size(); ++i)
        ind.v[i] = std::abs(u.v[i]) < threshold ? 1.0 : 0.0;
    return integrate(ind);
}

}  // namespace sac
