#include "sac/noise.hpp"

#include <cmath>

namespace sac {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// C-infinity cutoff q(s) = exp(1 - 1/(1-s)) on [0,1), 0 beyond; q(0) = 1.
struct Cutoff {
    double q = 0.0, qp = 0.0, qpp = 0.0;
    explicit Cutoff(double s) {
        if (s >= 1.0) return;
        const double w = 1.0 / (1.0 - s);
        q = std::exp(1.0 - w);
        qp = -q * w * w;
        qpp = q * (w * w * w * w - 2.0 * w * w * w);
    }
};

}  // namespace

Vec2 ModeSpec::value(const Vec2& p) const {
    switch (kind) {
        case FieldKind::constant:
            return direction * amplitude;
        case FieldKind::trig: {
            const double th = kTwoPi * (wavevector.dot(p)) + phase;
            return direction * (amplitude * std::sin(th));
        }
        case FieldKind::bump: {
            const Vec2 r = p - center;
            const Cutoff c(r.dot(r) / (radius * radius));
            return direction * (amplitude * c.q);
        }
        case FieldKind::rotation: {
            const Vec2 r = p - center;
            const Cutoff c(r.dot(r) / (radius * radius));
            return Vec2{-r.y, r.x} * (amplitude * c.q);
        }
    }
    return {};
}

Mat2 ModeSpec::jacobian(const Vec2& p) const {
    Mat2 J;
    switch (kind) {
        case FieldKind::constant:
            break;
        case FieldKind::trig: {
            const double th = kTwoPi * (wavevector.dot(p)) + phase;
            const double f = amplitude * kTwoPi * std::cos(th);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) J.a[i][j] = direction[i] * f * wavevector[j];
            break;
        }
        case FieldKind::bump: {
            const Vec2 r = p - center;
            const double iR2 = 1.0 / (radius * radius);
            const Cutoff c(r.dot(r) * iR2);
            const Vec2 ds = r * (2.0 * iR2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    J.a[i][j] = direction[i] * amplitude * c.qp * ds[j];
            break;
        }
        case FieldKind::rotation: {
            const Vec2 r = p - center;
            const double iR2 = 1.0 / (radius * radius);
            const Cutoff c(r.dot(r) * iR2);
            const Vec2 ds = r * (2.0 * iR2);
            const Vec2 rot{-r.y, r.x};
            const double drot[2][2] = {{0.0, -1.0}, {1.0, 0.0}};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    J.a[i][j] =
                        amplitude * (c.qp * ds[j] * rot[i] + c.q * drot[i][j]);
            break;
        }
    }
    return J;
}

Mat2 ModeSpec::hessian(int component, const Vec2& p) const {
    Mat2 H;
    switch (kind) {
        case FieldKind::constant:
            break;
        case FieldKind::trig: {
            const double th = kTwoPi * (wavevector.dot(p)) + phase;
            const double f = -amplitude * kTwoPi * kTwoPi * std::sin(th);
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    H.a[j][k] = direction[component] * f * wavevector[j] * wavevector[k];
            break;
        }
        case FieldKind::bump: {
            const Vec2 r = p - center;
            const double iR2 = 1.0 / (radius * radius);
            const Cutoff c(r.dot(r) * iR2);
            const Vec2 ds = r * (2.0 * iR2);
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double d2s = (j == k) ? 2.0 * iR2 : 0.0;
                    H.a[j][k] = direction[component] * amplitude *
                                (c.qpp * ds[j] * ds[k] + c.qp * d2s);
                }
            break;
        }
        case FieldKind::rotation: {
            const Vec2 r = p - center;
            const double iR2 = 1.0 / (radius * radius);
            const Cutoff c(r.dot(r) * iR2);
            const Vec2 ds = r * (2.0 * iR2);
            const Vec2 rot{-r.y, r.x};
            const double drot[2][2] = {{0.0, -1.0}, {1.0, 0.0}};
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double d2s = (j == k) ? 2.0 * iR2 : 0.0;
                    H.a[j][k] = amplitude *
                                ((c.qpp * ds[j] * ds[k] + c.qp * d2s) * rot[component] +
                                 c.qp * ds[j] * drot[component][k] +
                                 c.qp * ds[k] * drot[component][j]);
                }
            break;
        }
    }
    return H;
}

bool ModeSpec::supported_within(double margin, int dim) const {
    if (amplitude == 0.0) return true;
    if (kind == FieldKind::constant || kind == FieldKind::trig) return false;
    for (int j = 0; j < dim; ++j) {
        if (center[j] - radius < margin || center[j] + radius > 1.0 - margin)
            return false;
    }
    return true;
}

NoiseModel::NoiseModel(int dim, double support_margin, std::vector<ModeSpec> modes,
                       std::vector<ModeSpec> drift)
    : dim_(dim), support_margin_(support_margin), modes_(std::move(modes)),
      drift_(std::move(drift)) {
    if (dim_ != 1 && dim_ != 2)
        throw std::invalid_argument("NoiseModel: dim must be 1 or 2");
    for (const auto& m : modes_) {
        if (dim_ == 1 && m.kind == FieldKind::rotation)
            throw std::invalid_argument("NoiseModel: rotation mode needs dim 2");
    }
}

Vec2 NoiseModel::drift_value(double, const Vec2& x) const {
    Vec2 b;
    for (const auto& d : drift_) b += d.value(x);
    return b;
}

Mat2 NoiseModel::drift_jacobian(double, const Vec2& x) const {
    Mat2 J;
    for (const auto& d : drift_) J = J + d.jacobian(x);
    return J;
}

Mat2 NoiseModel::a_tilde(double, const Vec2& x, const Vec2& y) const {
    Mat2 out;
    for (const auto& m : modes_) {
        const Vec2 vx = m.value(x), vy = m.value(y);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) out.a[i][j] += vx[i] * vy[j];
    }
    return out;
}

Mat2 NoiseModel::correction_A(double t, const Vec2& x) const {
    return a_tilde(t, x, x);
}

Vec2 NoiseModel::correction_c(double, const Vec2& x) const {
    Vec2 c;
    for (const auto& m : modes_) {
        const Vec2 v = m.value(x);
        const Mat2 J = m.jacobian(x);
        for (int j = 0; j < dim_; ++j)
            for (int i = 0; i < dim_; ++i) c[j] += v[i] * J.a[j][i];
    }
    return c;
}

namespace {

struct PsiParts {
    Mat2 psi0;   // (Dc + dd'a - D(divA)) / 2, symmetrized
    double psi;  // (divdivA - divc) / 2
};

PsiParts psi_parts(const NoiseModel& model, const Vec2& x, int dim) {
    Mat2 Dc, dda, DdivA;
    for (int k = 0; k < model.mode_count(); ++k) {
        const ModeSpec& m = model.mode(k);
        const Vec2 v = m.value(x);
        const Mat2 J = m.jacobian(x);
        Mat2 H[2];
        for (int i = 0; i < dim; ++i) H[i] = m.hessian(i, x);
        for (int j = 0; j < dim; ++j)
            for (int mm = 0; mm < dim; ++mm) {
                double dc = 0.0, ddiva = 0.0;
                for (int i = 0; i < dim; ++i) {
                    dc += J.a[i][mm] * J.a[j][i] + v[i] * H[j].a[i][mm];
                    ddiva += H[i].a[i][mm] * v[j] + J.a[i][i] * J.a[j][mm] +
                             J.a[i][mm] * J.a[j][i] + v[i] * H[j].a[i][mm];
                }
                Dc.a[j][mm] += dc;
                DdivA.a[j][mm] += ddiva;
            }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int mm = 0; mm < dim; ++mm) s += J.a[i][mm] * J.a[j][mm];
                dda.a[i][j] += s;
            }
    }
    double divc = 0.0, divdivA = 0.0;
    for (int j = 0; j < dim; ++j) {
        divc += Dc.a[j][j];
        divdivA += DdivA.a[j][j];
    }
    const Mat2 raw = (Dc + dda - DdivA) * 0.5;
    PsiParts out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.psi0.a[i][j] = 0.5 * (raw.a[i][j] + raw.a[j][i]);
    out.psi = 0.5 * (divdivA - divc);
    return out;
}

}  // namespace

void NoiseModel::psi_fields(double t, const Vec2& x, Mat2& Psi, double& psi) const {
    const PsiParts parts = psi_parts(*this, x, dim_);
    psi = parts.psi;
    Psi = parts.psi0;
    for (int i = 0; i < dim_; ++i) Psi.a[i][i] += 0.5 * psi;
    (void)t;
}

Mat2 NoiseModel::psi0_matrix(double, const Vec2& x) const {
    return psi_parts(*this, x, dim_).psi0;
}

Vec2 NoiseModel::div_A(double, const Vec2& x) const {
    Vec2 out;
    for (const auto& m : modes_) {
        const Vec2 v = m.value(x);
        const Mat2 J = m.jacobian(x);
        double trJ = 0.0;
        for (int i = 0; i < dim_; ++i) trJ += J.a[i][i];
        for (int j = 0; j < dim_; ++j) {
            double s = trJ * v[j];
            for (int i = 0; i < dim_; ++i) s += v[i] * J.a[j][i];
            out[j] += s;
        }
    }
    return out;
}

void NoiseModel::grad_A(double, const Vec2& x, Mat2 dA[2]) const {
    dA[0] = Mat2();
    dA[1] = Mat2();
    for (const auto& m : modes_) {
        const Vec2 v = m.value(x);
        const Mat2 J = m.jacobian(x);
        for (int k = 0; k < dim_; ++k)
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j)
                    dA[k].a[i][j] += J.a[i][k] * v[j] + v[i] * J.a[j][k];
    }
}

std::pair<VectorFieldSample, std::vector<double>> NoiseModel::sample_increment(
    const Grid& grid, double, double dt, std::uint64_t stream,
    std::uint64_t step) const {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be positive");
    const int n = mode_count();
    std::vector<double> dw(n);
    for (int k = 0; k < n; ++k)
        dw[k] = brownian_increment(stream, step, static_cast<std::uint64_t>(k), dt);
    VectorFieldSample field(grid);
    for (int k = 0; k < n; ++k) {
        const ModeSpec& m = modes_[k];
        if (grid.dim == 1) {
            for (int i = 0; i < grid.m; ++i) {
                const Vec2 v = m.value({grid.coord(i), 0.0});
                field.comp[0][i] += v.x * dw[k];
            }
        } else {
            for (int iy = 0; iy < grid.m; ++iy)
                for (int ix = 0; ix < grid.m; ++ix) {
                    const Vec2 v = m.value({grid.coord(ix), grid.coord(iy)});
                    const int c = grid.index(ix, iy);
                    field.comp[0][c] += v.x * dw[k];
                    field.comp[1][c] += v.y * dw[k];
                }
        }
    }
    return {std::move(field), std::move(dw)};
}

void NoiseModel::validate_for(const Grid& grid) const {
    if (grid.dim != dim_)
        throw std::invalid_argument("NoiseModel: grid dimension mismatch");
    if (grid.closure == Closure::neumann) {
        for (const auto& m : modes_)
            if (!m.supported_within(support_margin_, dim_))
                throw std::invalid_argument(
                    "NoiseModel: mode support reaches the boundary collar under "
                    "neumann closure");
        for (const auto& d : drift_)
            if (!d.supported_within(support_margin_, dim_))
                throw std::invalid_argument(
                    "NoiseModel: drift support reaches the boundary collar under "
                    "neumann closure");
    } else {
        for (const auto& m : modes_) {
            if (m.kind == FieldKind::trig) {
                for (int j = 0; j < dim_; ++j) {
                    const double w = m.wavevector[j];
                    if (std::abs(w - std::round(w)) > 1e-12)
                        throw std::invalid_argument(
                            "NoiseModel: trig wavevector must be integer under "
                            "periodic closure");
                }
            } else if (m.kind != FieldKind::constant &&
                       !m.supported_within(0.0, dim_)) {
                throw std::invalid_argument(
                    "NoiseModel: bump support must stay inside the periodic cell");
            }
        }
    }
}

NoiseGridCache::NoiseGridCache(const NoiseModel& model, const Grid& grid, double t) {
    const int nn = grid.node_count();
    n_modes = model.mode_count();
    any_noise = n_modes > 0;
    any_drift = model.has_drift();
    mode_x.assign(n_modes, std::vector<double>(nn, 0.0));
    mode_y.assign(n_modes, std::vector<double>(nn, 0.0));
    bx.assign(nn, 0.0);
    by.assign(nn, 0.0);
    a11.assign(nn, 0.0);
    a12.assign(nn, 0.0);
    a22.assign(nn, 0.0);
    c1.assign(nn, 0.0);
    c2.assign(nn, 0.0);
    const int my = grid.dim == 2 ? grid.m : 1;
    for (int iy = 0; iy < my; ++iy)
        for (int ix = 0; ix < grid.m; ++ix) {
            const int idx = grid.dim == 2 ? grid.index(ix, iy) : ix;
            const Vec2 p{grid.coord(ix), grid.dim == 2 ? grid.coord(iy) : 0.0};
            for (int k = 0; k < n_modes; ++k) {
                const Vec2 v = model.mode(k).value(p);
                mode_x[k][idx] = v.x;
                mode_y[k][idx] = v.y;
            }
            const Vec2 b = model.drift_value(t, p);
            bx[idx] = b.x;
            by[idx] = b.y;
            const Mat2 A = model.correction_A(t, p);
            a11[idx] = A.a[0][0];
            a12[idx] = A.a[0][1];
            a22[idx] = A.a[1][1];
            const Vec2 c = model.correction_c(t, p);
            c1[idx] = c.x;
            c2[idx] = c.y;
            double lam;
            if (grid.dim == 1) {
                lam = A.a[0][0];
            } else {
                const double half = 0.5 * (A.a[0][0] + A.a[1][1]);
                const double off = 0.5 * (A.a[0][0] - A.a[1][1]);
                lam = half + std::sqrt(off * off + A.a[0][1] * A.a[0][1]);
            }
            if (lam > a_max_eig) a_max_eig = lam;
        }
}

}  // namespace sac
