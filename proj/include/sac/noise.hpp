#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sac/grid.hpp"
#include "sac/rng.hpp"
#include "sac/vec.hpp"

namespace sac {

enum class FieldKind { constant, bump, rotation, trig };

// One analytic vector field with closed-form first and second derivatives.
// Conventions: jacobian()[i][j] = d_j X_i; hessian(i)[j][k] = d_j d_k X_i.
struct ModeSpec {
    FieldKind kind = FieldKind::bump;
    double amplitude = 0.0;
    Vec2 center{0.5, 0.5};
    double radius = 0.2;
    Vec2 direction{1.0, 0.0};
    Vec2 wavevector{1.0, 0.0};  // integer entries; trig only
    double phase = 0.0;

    Vec2 value(const Vec2& p) const;
    Mat2 jacobian(const Vec2& p) const;
    Mat2 hessian(int component, const Vec2& p) const;

    // support contained in [margin, 1-margin]^dim
    bool supported_within(double margin, int dim) const;
};

// Finite-mode vector-field-valued Brownian motion: drift field X^0 plus
// N Brownian mode fields X^1..X^N, all analytic. Immutable once built.
class NoiseModel {
public:
    NoiseModel(int dim, double support_margin, std::vector<ModeSpec> modes,
               std::vector<ModeSpec> drift = {});

    static NoiseModel none(int dim) { return NoiseModel(dim, 0.0, {}, {}); }

    int dim() const { return dim_; }
    int mode_count() const { return static_cast<int>(modes_.size()); }
    double support_margin() const { return support_margin_; }
    const ModeSpec& mode(int k) const { return modes_[k]; }
    bool has_drift() const { return !drift_.empty(); }

    Vec2 drift_value(double t, const Vec2& x) const;
    Mat2 drift_jacobian(double t, const Vec2& x) const;

    // local characteristic  a~_ij(t,x,y) = sum_k X^k_i(x) X^k_j(y)
    Mat2 a_tilde(double t, const Vec2& x, const Vec2& y) const;

    // A(t,x) = a~(t,x,x)
    Mat2 correction_A(double t, const Vec2& x) const;
    // c_j = d_{y_i} a~_ij(t,x,y)|_{y=x}
    Vec2 correction_c(double t, const Vec2& x) const;

    // Energy-identity coefficient fields. Psi is returned as the full matrix
    // entering  int eps grad(u) . Psi grad(u) + psi F(u)/eps  in the global
    // identity; psi = (div div A - div c) / 2.
    void psi_fields(double t, const Vec2& x, Mat2& Psi, double& psi) const;

    // Pieces used by the localized identity: the matrix part of Psi without
    // its isotropic share (Psi = psi0 + (psi/2) Id) and first derivatives
    // of A.
    Mat2 psi0_matrix(double t, const Vec2& x) const;
    Vec2 div_A(double t, const Vec2& x) const;
    // dA[k] = d_k A (matrix of d_k a_ij), k < dim
    void grad_A(double t, const Vec2& x, Mat2 dA[2]) const;

    // Nodal field sum_k X^k(.) dW_k plus the raw increments, drawn from the
    // counter-based stream at the given step.
    std::pair<VectorFieldSample, std::vector<double>> sample_increment(
        const Grid& grid, double t, double dt, std::uint64_t stream,
        std::uint64_t step) const;

    // Construction-time checks: compact support under neumann closure,
    // periodic compatibility under periodic closure.
    void validate_for(const Grid& grid) const;

private:
    int dim_;
    double support_margin_;
    std::vector<ModeSpec> modes_;
    std::vector<ModeSpec> drift_;  // empty or single field (sum supported)
};

// Per-node samples of everything the solver needs, evaluated once.
struct NoiseGridCache {
    int n_modes = 0;
    bool any_noise = false, any_drift = false;
    // mode_x[k], mode_y[k]: nodal components of X^k
    std::vector<std::vector<double>> mode_x, mode_y;
    std::vector<double> bx, by;            // drift
    std::vector<double> a11, a12, a22;     // A
    std::vector<double> c1, c2;            // c
    double a_max_eig = 0.0;                // max over nodes of lambda_max(A)

    NoiseGridCache() = default;
    NoiseGridCache(const NoiseModel& model, const Grid& grid, double t = 0.0);
};

}  // namespace sac
