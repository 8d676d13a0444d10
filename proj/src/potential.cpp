#include "sac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sac {

namespace {

const double kSqrt2 = std::sqrt(2.0);

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

DoubleWell::DoubleWell(WellKind k, std::vector<double> coeffs, double gd, double gc)
    : kind_(k), coeffs_(std::move(coeffs)), growth_delta_(gd), growth_const_(gc) {
    validate();
}

DoubleWell DoubleWell::standard() {
    // (1 - r^2)^2 / 4 = 1/4 - r^2/2 + r^4/4
    return DoubleWell(WellKind::standard_quartic, {0.25, -0.5, 0.25}, 2.0, 0.14);
}

DoubleWell DoubleWell::custom(std::vector<double> coeffs, double growth_delta,
                              double growth_const) {
    return DoubleWell(WellKind::custom, std::move(coeffs), growth_delta,
                      growth_const);
}

double DoubleWell::f(double r) const {
    if (!std::isfinite(r)) throw std::domain_error("DoubleWell: non-finite argument");
    if (kind_ == WellKind::standard_quartic) {
        const double q = 1.0 - r * r;
        return 0.25 * q * q;
    }
    const double r2 = r * r;
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * r2 + coeffs_[k];
    return acc;
}

double DoubleWell::fp(double r) const {
    if (!std::isfinite(r)) throw std::domain_error("DoubleWell: non-finite argument");
    if (kind_ == WellKind::standard_quartic) return r * r * r - r;
    const double r2 = r * r;
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;)
        acc = acc * r2 + 2.0 * static_cast<double>(k) * coeffs_[k];
    return acc * r;
}

double DoubleWell::fpp(double r) const {
    if (!std::isfinite(r)) throw std::domain_error("DoubleWell: non-finite argument");
    if (kind_ == WellKind::standard_quartic) return 3.0 * r * r - 1.0;
    const double r2 = r * r;
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
        const double tk = 2.0 * static_cast<double>(k);
        acc = acc * r2 + tk * (tk - 1.0) * coeffs_[k];
    }
    return acc;
}

double DoubleWell::g(double r) const {
    if (!std::isfinite(r)) throw std::domain_error("DoubleWell: non-finite argument");
    const auto integrand = [this](double s) { return std::sqrt(2.0 * f(s)); };
    if (kind_ == WellKind::standard_quartic) {
        // sqrt(2F) = |1 - r^2| / sqrt(2)
        if (std::abs(r) <= 1.0) return (r - r * r * r / 3.0) / kSqrt2;
        const double s = r > 0 ? 1.0 : -1.0;
        const double g1 = s * (2.0 / 3.0) / kSqrt2;
        return g1 + adaptive_simpson(integrand, s, r, 1e-12);
    }
    return adaptive_simpson(integrand, 0.0, r, 1e-12);
}

double DoubleWell::g_inverse(double y) const {
    if (!std::isfinite(y)) throw std::range_error("g_inverse: argument outside range");
    if (y == 0.0) return 0.0;
    // expand a bracket; G is odd and strictly increasing
    double lo = 0.0, hi = 1.0;
    const double ay = std::abs(y);
    int guard = 0;
    while (g(hi) < ay) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60) throw std::range_error("g_inverse: argument outside range");
    }
    // bisection to 1e-6
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < ay ? lo : hi) = mid;
    }
    // Newton polish; G' = sqrt(2F) may vanish at +-1, fall back to bisection steps
    double r = 0.5 * (lo + hi);
    const double tol = 1e-12 * (1.0 + ay);
    for (int it = 0; it < 60; ++it) {
        const double err = g(r) - ay;
        if (std::abs(err) <= tol) break;
        const double slope = std::sqrt(2.0 * f(r));
        if (slope > 1e-9) {
            r -= err / slope;
            r = std::clamp(r, lo, hi);
        } else {
            (err < 0 ? lo : hi) = r;
            r = 0.5 * (lo + hi);
        }
    }
    return y > 0 ? r : -r;
}

double DoubleWell::surface_tension() const { return 2.0 * g(1.0); }

double DoubleWell::optimal_profile(double x, double eps) const {
    if (!(eps > 0.0)) throw std::domain_error("optimal_profile: eps must be positive");
    if (kind_ == WellKind::standard_quartic) return std::tanh(x / (kSqrt2 * eps));
    // march u' = sqrt(2 F(u)) / eps from u(0) = 0 (odd in x)
    const double ax = std::abs(x);
    const double step = eps / 64.0;
    double u = 0.0, s = 0.0;
    const auto rhs = [this, eps](double v) {
        return std::sqrt(2.0 * f(std::clamp(v, -1.0, 1.0))) / eps;
    };
    while (s < ax && u < 1.0 - 1e-15) {
        const double dh = std::min(step, ax - s);
        const double k1 = rhs(u);
        const double k2 = rhs(u + 0.5 * dh * k1);
        const double k3 = rhs(u + 0.5 * dh * k2);
        const double k4 = rhs(u + dh * k3);
        u += dh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += dh;
    }
    u = std::min(u, 1.0);
    return x >= 0 ? u : -u;
}

void DoubleWell::validate() const {
    const auto fail = [](const std::string& what) {
        throw std::invalid_argument("DoubleWell: " + what);
    };
    if (coeffs_.empty()) fail("empty coefficient table");
    if (!(growth_delta_ > 0.0) || !(growth_const_ > 0.0))
        fail("growth parameters must be positive");
    const double tol = 1e-12;
    if (std::abs(f(1.0)) > tol || std::abs(f(-1.0)) > tol) fail("F(+-1) must vanish");
    if (!(fpp(0.0) < 0.0)) fail("F''(0) must be negative");
    if (!(fpp(1.0) > 0.0) || !(fpp(-1.0) > 0.0)) fail("F''(+-1) must be positive");
    // sampling grid on [-4, 4]
    const int n = 1601;
    for (int i = 0; i < n; ++i) {
        const double r = -4.0 + 8.0 * i / (n - 1);
        const double fr = f(r);
        if (fr < -tol) fail("F must be non-negative");
        if (std::abs(std::abs(r) - 1.0) > 1e-3 && fr <= tol && std::abs(r) <= 4.0)
            fail("F vanishes away from +-1");
        if (std::abs(f(r) - f(-r)) > tol * (1.0 + std::abs(fr))) fail("F must be even");
        const double d = fp(r);
        if (std::abs(r) > 1e-3 && std::abs(std::abs(r) - 1.0) > 1e-3 &&
            std::abs(d) <= tol)
            fail("F' vanishes away from {-1, 0, 1}");
        if (std::abs(r) >= 2.0 &&
            fr < growth_const_ * std::pow(std::abs(r), 2.0 + growth_delta_))
            fail("growth condition F >= C |r|^(2+delta) fails on |r| >= 2");
    }
}

}  // namespace sac
