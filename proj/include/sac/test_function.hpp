#pragma once

#include <string>

#include "sac/vec.hpp"

namespace sac {

enum class TestFunctionKind { constant_one, bump, coordinate_window };

// C^2 localization function eta with closed-form gradient and Hessian.
//  - constant_one: eta == 1
//  - bump: (1 - s)^3 with s = |x - center|^2 / radius^2, clipped at 0
//  - coordinate_window: C^2 smoothstep window in the first coordinate,
//    ramping 0 -> 1 on [a, a+ramp] and 1 -> 0 on [b-ramp, b]
struct TestFunction {
    TestFunctionKind kind = TestFunctionKind::constant_one;
    Vec2 center{0.5, 0.5};
    double radius = 0.25;
    double a = 0.2, b = 0.8, ramp = 0.15;
    std::string label = "one";

    static TestFunction one();
    static TestFunction make_bump(Vec2 center, double radius);
    static TestFunction window(double a, double b, double ramp);

    double value(const Vec2& x) const;
    Vec2 grad(const Vec2& x) const;
    Mat2 hess(const Vec2& x) const;
};

}  // namespace sac
