#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sac {

enum class Closure : std::uint8_t { neumann = 0, periodic = 1 };

// Rectangular grid on (0,1)^dim, dim in {1,2}, m nodes per axis.
// Neumann closure places nodes at i/(m-1) including the boundary; periodic
// closure places nodes at i/m with index wrap-around.
struct Grid {
    int dim = 1;
    int m = 8;
    Closure closure = Closure::neumann;
    double h = 1.0 / 7.0;

    Grid() = default;
    Grid(int dim_, int m_, Closure c);

    int node_count() const { return dim == 2 ? m * m : m; }
    double coord(int i) const { return i * h; }
    int index(int ix, int iy) const { return iy * m + ix; }

    // neighbor index along one axis with closure applied
    int shift(int i, int delta) const {
        int j = i + delta;
        if (closure == Closure::periodic) {
            j %= m;
            if (j < 0) j += m;
            return j;
        }
        if (j < 0) return -j;               // ghost reflection u_{-1} = u_{1}
        if (j >= m) return 2 * m - 2 - j;   // u_m = u_{m-2}
        return j;
    }

    // 1D trapezoid weight (neumann) or rectangle weight (periodic)
    double weight1(int i) const {
        if (closure == Closure::periodic) return h;
        return (i == 0 || i == m - 1) ? 0.5 * h : h;
    }
    double weight(int ix, int iy) const {
        return dim == 2 ? weight1(ix) * weight1(iy) : weight1(ix);
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && m == o.m && closure == o.closure;
    }
};

struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), v(g.node_count(), fill) {}

    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

struct VectorFieldSample {
    Grid grid;
    std::array<std::vector<double>, 2> comp;  // comp[1] unused when dim == 1

    VectorFieldSample() = default;
    explicit VectorFieldSample(const Grid& g) : grid(g) {
        comp[0].assign(g.node_count(), 0.0);
        if (g.dim == 2) comp[1].assign(g.node_count(), 0.0);
    }
};

// Symmetric second-derivative samples; xy empty when dim == 1.
struct HessianSample {
    Grid grid;
    std::vector<double> xx, yy, xy;
};

// --- stencil kernels (write into preallocated buffers) ---
void laplacian_into(const Grid& g, const double* u, double* out);
void gradient_into(const Grid& g, const double* u, double* gx, double* gy);
void hessian_into(const Grid& g, const double* u, double* uxx, double* uyy,
                  double* uxy);
void divergence_into(const Grid& g, const double* vx, const double* vy, double* out);

ScalarField laplacian(const ScalarField& u);
VectorFieldSample gradient(const ScalarField& u);
HessianSample hessian(const ScalarField& u);
ScalarField divergence(const VectorFieldSample& v);

// Trapezoid (neumann) / rectangle (periodic) quadrature.
double integrate(const ScalarField& f);

// Edge-based bilinear form equal to int grad(u) . grad(v) in the pairing that
// is exactly adjoint to the laplacian stencil under the node quadrature:
//   integrate(laplacian(u) * v) + dirichlet_form(u, v) == 0  (to round-off).
double dirichlet_form(const ScalarField& u, const ScalarField& v);

// Cubic (Catmull-Rom) interpolation of a nodal field at an off-grid point.
// Periodic closure wraps; neumann clamps the stencil and degrades to linear
// within one cell of the boundary.
double sample_field(const ScalarField& f, double x, double y = 0.0);

// Solve (I - a * laplacian) x = rhs by conjugate gradients in the quadrature
// inner product (the operator is self-adjoint there under both closures).
// Returns the iteration count; throws on non-convergence.
int solve_helmholtz_cg(const Grid& g, double a, const std::vector<double>& rhs,
                       std::vector<double>& x, double tol = 1e-10,
                       int max_iter = 10000);

// Binary snapshot format: "SACF", u16 version, u8 dim, u32 m, u8 closure,
// f64 time, node values as little-endian f64.
void write_snapshot(const std::string& path, const ScalarField& f, double time);
ScalarField read_snapshot(const std::string& path, double* time_out = nullptr);

}  // namespace sac
