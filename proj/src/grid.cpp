#include "sac/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace sac {

Grid::Grid(int dim_, int m_, Closure c) : dim(dim_), m(m_), closure(c) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (m < 8) throw std::invalid_argument("Grid: need at least 8 nodes per axis");
    h = closure == Closure::periodic ? 1.0 / m : 1.0 / (m - 1);
}

void laplacian_into(const Grid& g, const double* u, double* out) {
    const int m = g.m;
    const double ih2 = 1.0 / (g.h * g.h);
    if (g.dim == 1) {
        for (int i = 0; i < m; ++i) {
            const double l = u[g.shift(i, -1)], r = u[g.shift(i, +1)];
            out[i] = (l - 2.0 * u[i] + r) * ih2;
        }
        return;
    }
    for (int iy = 0; iy < m; ++iy) {
        const int yN = g.shift(iy, +1), yS = g.shift(iy, -1);
        for (int ix = 0; ix < m; ++ix) {
            const int xE = g.shift(ix, +1), xW = g.shift(ix, -1);
            const int c = g.index(ix, iy);
            const double dxx = (u[g.index(xW, iy)] - 2.0 * u[c] + u[g.index(xE, iy)]) * ih2;
            const double dyy = (u[g.index(ix, yS)] - 2.0 * u[c] + u[g.index(ix, yN)]) * ih2;
            out[c] = dxx + dyy;
        }
    }
}

void gradient_into(const Grid& g, const double* u, double* gx, double* gy) {
    const int m = g.m;
    const double i2h = 0.5 / g.h;
    if (g.dim == 1) {
        for (int i = 0; i < m; ++i)
            gx[i] = (u[g.shift(i, +1)] - u[g.shift(i, -1)]) * i2h;
        return;
    }
    for (int iy = 0; iy < m; ++iy) {
        const int yN = g.shift(iy, +1), yS = g.shift(iy, -1);
        for (int ix = 0; ix < m; ++ix) {
            const int xE = g.shift(ix, +1), xW = g.shift(ix, -1);
            const int c = g.index(ix, iy);
            gx[c] = (u[g.index(xE, iy)] - u[g.index(xW, iy)]) * i2h;
            gy[c] = (u[g.index(ix, yN)] - u[g.index(ix, yS)]) * i2h;
        }
    }
}

void hessian_into(const Grid& g, const double* u, double* uxx, double* uyy,
                  double* uxy) {
    const int m = g.m;
    const double ih2 = 1.0 / (g.h * g.h);
    if (g.dim == 1) {
        laplacian_into(g, u, uxx);
        return;
    }
    const double i4h2 = 0.25 * ih2;
    for (int iy = 0; iy < m; ++iy) {
        const int yN = g.shift(iy, +1), yS = g.shift(iy, -1);
        for (int ix = 0; ix < m; ++ix) {
            const int xE = g.shift(ix, +1), xW = g.shift(ix, -1);
            const int c = g.index(ix, iy);
            uxx[c] = (u[g.index(xW, iy)] - 2.0 * u[c] + u[g.index(xE, iy)]) * ih2;
            uyy[c] = (u[g.index(ix, yS)] - 2.0 * u[c] + u[g.index(ix, yN)]) * ih2;
            uxy[c] = (u[g.index(xE, yN)] - u[g.index(xE, yS)] - u[g.index(xW, yN)] +
                      u[g.index(xW, yS)]) * i4h2;
        }
    }
}

void divergence_into(const Grid& g, const double* vx, const double* vy, double* out) {
    const int m = g.m;
    const double i2h = 0.5 / g.h;
    if (g.dim == 1) {
        for (int i = 0; i < m; ++i)
            out[i] = (vx[g.shift(i, +1)] - vx[g.shift(i, -1)]) * i2h;
        return;
    }
    for (int iy = 0; iy < m; ++iy) {
        const int yN = g.shift(iy, +1), yS = g.shift(iy, -1);
        for (int ix = 0; ix < m; ++ix) {
            const int xE = g.shift(ix, +1), xW = g.shift(ix, -1);
            const int c = g.index(ix, iy);
            out[c] = (vx[g.index(xE, iy)] - vx[g.index(xW, iy)]) * i2h +
                     (vy[g.index(ix, yN)] - vy[g.index(ix, yS)]) * i2h;
        }
    }
}

ScalarField laplacian(const ScalarField& u) {
    ScalarField out(u.grid);
    laplacian_into(u.grid, u.v.data(), out.v.data());
    return out;
}

VectorFieldSample gradient(const ScalarField& u) {
    VectorFieldSample out(u.grid);
    gradient_into(u.grid, u.v.data(), out.comp[0].data(),
                  u.grid.dim == 2 ? out.comp[1].data() : nullptr);
    return out;
}

HessianSample hessian(const ScalarField& u) {
    HessianSample out;
    out.grid = u.grid;
    out.xx.assign(u.size(), 0.0);
    if (u.grid.dim == 2) {
        out.yy.assign(u.size(), 0.0);
        out.xy.assign(u.size(), 0.0);
    }
    hessian_into(u.grid, u.v.data(), out.xx.data(),
                 u.grid.dim == 2 ? out.yy.data() : nullptr,
                 u.grid.dim == 2 ? out.xy.data() : nullptr);
    return out;
}

ScalarField divergence(const VectorFieldSample& v) {
    ScalarField out(v.grid);
    divergence_into(v.grid, v.comp[0].data(),
                    v.grid.dim == 2 ? v.comp[1].data() : nullptr, out.v.data());
    return out;
}

double integrate(const ScalarField& f) {
    const Grid& g = f.grid;
    double acc = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < g.m; ++i) acc += g.weight1(i) * f.v[i];
        return acc;
    }
    for (int iy = 0; iy < g.m; ++iy) {
        double row = 0.0;
        for (int ix = 0; ix < g.m; ++ix) row += g.weight1(ix) * f.v[g.index(ix, iy)];
        acc += g.weight1(iy) * row;
    }
    return acc;
}

double dirichlet_form(const ScalarField& u, const ScalarField& v) {
    const Grid& g = u.grid;
    const int m = g.m;
    const double ih = 1.0 / g.h;
    const int edges = g.closure == Closure::periodic ? m : m - 1;
    double acc = 0.0;
    if (g.dim == 1) {
        for (int i = 0; i < edges; ++i) {
            const int j = g.closure == Closure::periodic ? (i + 1) % m : i + 1;
            acc += g.h * (u.v[j] - u.v[i]) * ih * (v.v[j] - v.v[i]) * ih;
        }
        return acc;
    }
    for (int iy = 0; iy < m; ++iy) {
        const double wy = g.weight1(iy);
        double row = 0.0;
        for (int ix = 0; ix < edges; ++ix) {
            const int jx = g.closure == Closure::periodic ? (ix + 1) % m : ix + 1;
            const int a = g.index(ix, iy), b = g.index(jx, iy);
            row += (u.v[b] - u.v[a]) * (v.v[b] - v.v[a]);
        }
        acc += wy * g.h * row * ih * ih;
    }
    for (int ix = 0; ix < m; ++ix) {
        const double wx = g.weight1(ix);
        double col = 0.0;
        for (int iy = 0; iy < edges; ++iy) {
            const int jy = g.closure == Closure::periodic ? (iy + 1) % m : iy + 1;
            const int a = g.index(ix, iy), b = g.index(ix, jy);
            col += (u.v[b] - u.v[a]) * (v.v[b] - v.v[a]);
        }
        acc += wx * g.h * col * ih * ih;
    }
    return acc;
}

namespace {

// cubic Catmull-Rom through 4 samples, t in [0,1] between p1 and p2
inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    const double a = 2.0 * p1;
    const double b = p2 - p0;
    const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const double d = -p0 + 3.0 * (p1 - p2) + p3;
    return 0.5 * (a + t * (b + t * (c + t * d)));
}

inline int clampi(int i, int lo, int hi) { return i < lo ? lo : (i > hi ? hi : i); }

double sample_axis(const Grid& g, const double* row, int stride, double x) {
    // interpolate along one axis given node accessor row[stride * i]
    const int m = g.m;
    double s = x / g.h;
    if (g.closure == Closure::periodic) {
        s -= std::floor(s / m) * m;
        const int i1 = static_cast<int>(std::floor(s)) % m;
        const double t = s - std::floor(s);
        const int i0 = (i1 + m - 1) % m, i2 = (i1 + 1) % m, i3 = (i1 + 2) % m;
        return catmull_rom(row[stride * i0], row[stride * i1], row[stride * i2],
                           row[stride * i3], t);
    }
    s = std::fmin(std::fmax(s, 0.0), static_cast<double>(m - 1));
    int i1 = static_cast<int>(std::floor(s));
    i1 = clampi(i1, 0, m - 2);
    const double t = s - i1;
    if (i1 == 0 || i1 >= m - 2) {  // linear fallback in the boundary cells
        return (1.0 - t) * row[stride * i1] + t * row[stride * (i1 + 1)];
    }
    return catmull_rom(row[stride * (i1 - 1)], row[stride * i1],
                       row[stride * (i1 + 1)], row[stride * (i1 + 2)], t);
}

}  // namespace

double sample_field(const ScalarField& f, double x, double y) {
    const Grid& g = f.grid;
    if (g.dim == 1) return sample_axis(g, f.v.data(), 1, x);

    const int m = g.m;
    double sy = y / g.h;
    if (g.closure == Closure::periodic) {
        sy -= std::floor(sy / m) * m;
        const int j1 = static_cast<int>(std::floor(sy)) % m;
        const double t = sy - std::floor(sy);
        const int j0 = (j1 + m - 1) % m, j2 = (j1 + 1) % m, j3 = (j1 + 2) % m;
        const double r0 = sample_axis(g, f.v.data() + j0 * m, 1, x);
        const double r1 = sample_axis(g, f.v.data() + j1 * m, 1, x);
        const double r2 = sample_axis(g, f.v.data() + j2 * m, 1, x);
        const double r3 = sample_axis(g, f.v.data() + j3 * m, 1, x);
        return catmull_rom(r0, r1, r2, r3, t);
    }
    sy = std::fmin(std::fmax(sy, 0.0), static_cast<double>(m - 1));
    int j1 = static_cast<int>(std::floor(sy));
    j1 = clampi(j1, 0, m - 2);
    const double t = sy - j1;
    if (j1 == 0 || j1 >= m - 2) {
        const double r1 = sample_axis(g, f.v.data() + j1 * m, 1, x);
        const double r2 = sample_axis(g, f.v.data() + (j1 + 1) * m, 1, x);
        return (1.0 - t) * r1 + t * r2;
    }
    const double r0 = sample_axis(g, f.v.data() + (j1 - 1) * m, 1, x);
    const double r1 = sample_axis(g, f.v.data() + j1 * m, 1, x);
    const double r2 = sample_axis(g, f.v.data() + (j1 + 1) * m, 1, x);
    const double r3 = sample_axis(g, f.v.data() + (j1 + 2) * m, 1, x);
    return catmull_rom(r0, r1, r2, r3, t);
}

int solve_helmholtz_cg(const Grid& g, double a, const std::vector<double>& rhs,
                       std::vector<double>& x, double tol, int max_iter) {
    const int n = g.node_count();
    x.assign(n, 0.0);
    std::vector<double> r = rhs, p = rhs, Ap(n), lap(n);
    const auto wdot = [&g, n](const std::vector<double>& u,
                              const std::vector<double>& v) {
        double acc = 0.0;
        if (g.dim == 1) {
            for (int i = 0; i < g.m; ++i) acc += g.weight1(i) * u[i] * v[i];
        } else {
            for (int iy = 0; iy < g.m; ++iy) {
                const double wy = g.weight1(iy);
                for (int ix = 0; ix < g.m; ++ix) {
                    const int c = g.index(ix, iy);
                    acc += wy * g.weight1(ix) * u[c] * v[c];
                }
            }
        }
        (void)n;
        return acc;
    };
    double rr = wdot(r, r);
    const double target = tol * tol * std::max(rr, 1e-300);
    int it = 0;
    for (; it < max_iter && rr > target; ++it) {
        laplacian_into(g, p.data(), lap.data());
        for (int i = 0; i < n; ++i) Ap[i] = p[i] - a * lap[i];
        const double alpha = rr / wdot(p, Ap);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = wdot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    if (rr > target)
        throw std::runtime_error("solve_helmholtz_cg: no convergence");
    return it;
}

void write_snapshot(const std::string& path, const ScalarField& f, double time) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("write_snapshot: cannot open " + path);
    const char magic[4] = {'S', 'A', 'C', 'F'};
    const std::uint16_t version = 1;
    const std::uint8_t dim = static_cast<std::uint8_t>(f.grid.dim);
    const std::uint32_t m = static_cast<std::uint32_t>(f.grid.m);
    const std::uint8_t closure = static_cast<std::uint8_t>(f.grid.closure);
    std::fwrite(magic, 1, 4, fp);
    std::fwrite(&version, sizeof version, 1, fp);
    std::fwrite(&dim, sizeof dim, 1, fp);
    std::fwrite(&m, sizeof m, 1, fp);
    std::fwrite(&closure, sizeof closure, 1, fp);
    std::fwrite(&time, sizeof time, 1, fp);
    std::fwrite(f.v.data(), sizeof(double), f.v.size(), fp);
    std::fclose(fp);
}

ScalarField read_snapshot(const std::string& path, double* time_out) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("read_snapshot: cannot open " + path);
    char magic[4];
    std::uint16_t version = 0;
    std::uint8_t dim = 0, closure = 0;
    std::uint32_t m = 0;
    double time = 0.0;
    bool ok = std::fread(magic, 1, 4, fp) == 4 && std::memcmp(magic, "SACF", 4) == 0 &&
              std::fread(&version, sizeof version, 1, fp) == 1 && version == 1 &&
              std::fread(&dim, sizeof dim, 1, fp) == 1 &&
              std::fread(&m, sizeof m, 1, fp) == 1 &&
              std::fread(&closure, sizeof closure, 1, fp) == 1 &&
              std::fread(&time, sizeof time, 1, fp) == 1;
    if (!ok) {
        std::fclose(fp);
        throw std::runtime_error("read_snapshot: bad header in " + path);
    }
    Grid g(static_cast<int>(dim), static_cast<int>(m), static_cast<Closure>(closure));
    ScalarField f(g);
    ok = std::fread(f.v.data(), sizeof(double), f.v.size(), fp) == f.v.size();
    std::fclose(fp);
    if (!ok) throw std::runtime_error("read_snapshot: truncated data in " + path);
    if (time_out) *time_out = time;
    return f;
}

}  // namespace sac
