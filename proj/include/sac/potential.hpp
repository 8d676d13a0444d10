#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sac {

enum class WellKind { standard_quartic, custom };

// Double-well potential F together with the transform G(r) = int_0^r sqrt(2F)
// and derived sharp-interface constants. Custom wells are even polynomials
// F(r) = sum_k coeff[k] * r^(2k), validated against the well axioms on a
// sampling grid at construction.
class DoubleWell {
public:
    static DoubleWell standard();
    // coeffs[k] multiplies r^(2k)
    static DoubleWell custom(std::vector<double> coeffs, double growth_delta = 2.0,
                             double growth_const = 0.1);

    double f(double r) const;    // F(r)
    double fp(double r) const;   // F'(r)
    double fpp(double r) const;  // F''(r)

    // G(r) = int_0^r sqrt(2 F(s)) ds; smooth, odd, strictly increasing
    double g(double r) const;
    // r with |G(r) - y| <= 1e-12 (1 + |y|); bisection bracket then Newton
    double g_inverse(double y) const;

    // c0 = int_{-1}^{1} sqrt(2F) = 2 G(1)
    double surface_tension() const;

    // 1D standing wave u with eps^2 u'' = F'(u), u(0)=0, u(+-inf)=+-1
    double optimal_profile(double x, double eps) const;

    WellKind kind() const { return kind_; }
    double growth_delta() const { return growth_delta_; }
    double growth_const() const { return growth_const_; }

private:
    DoubleWell(WellKind k, std::vector<double> coeffs, double gd, double gc);
    void validate() const;

    WellKind kind_;
    std::vector<double> coeffs_;
    double growth_delta_;
    double growth_const_;
};

// Adaptive Simpson quadrature, used for G outside closed-form ranges and as
// an independent oracle in tests.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

}  // namespace sac
