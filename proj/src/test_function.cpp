#include "sac/test_function.hpp"

#include <cmath>

namespace sac {

namespace {

// quintic smoothstep: C^2, w(0)=0, w(1)=1, w'(0)=w'(1)=w''(0)=w''(1)=0
inline double smooth5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
inline double smooth5p(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
inline double smooth5pp(double t) { return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

}  // namespace

TestFunction TestFunction::one() {
    TestFunction f;
    f.kind = TestFunctionKind::constant_one;
    f.label = "one";
    return f;
}

TestFunction TestFunction::make_bump(Vec2 center, double radius) {
    TestFunction f;
    f.kind = TestFunctionKind::bump;
    f.center = center;
    f.radius = radius;
    f.label = "bump";
    return f;
}

TestFunction TestFunction::window(double a, double b, double ramp) {
    TestFunction f;
    f.kind = TestFunctionKind::coordinate_window;
    f.a = a;
    f.b = b;
    f.ramp = ramp;
    f.label = "window";
    return f;
}

double TestFunction::value(const Vec2& x) const {
    switch (kind) {
        case TestFunctionKind::constant_one:
            return 1.0;
        case TestFunctionKind::bump: {
            const Vec2 r = x - center;
            const double s = r.dot(r) / (radius * radius);
            if (s >= 1.0) return 0.0;
            const double q = 1.0 - s;
            return q * q * q;
        }
        case TestFunctionKind::coordinate_window: {
            const double t = x.x;
            if (t <= a || t >= b) return 0.0;
            if (t < a + ramp) return smooth5((t - a) / ramp);
            if (t > b - ramp) return smooth5((b - t) / ramp);
            return 1.0;
        }
    }
    return 0.0;
}

Vec2 TestFunction::grad(const Vec2& x) const {
    switch (kind) {
        case TestFunctionKind::constant_one:
            return {};
        case TestFunctionKind::bump: {
            const Vec2 r = x - center;
            const double iR2 = 1.0 / (radius * radius);
            const double s = r.dot(r) * iR2;
            if (s >= 1.0) return {};
            const double q = 1.0 - s;
            return r * (-3.0 * q * q * 2.0 * iR2);
        }
        case TestFunctionKind::coordinate_window: {
            const double t = x.x;
            if (t <= a || t >= b) return {};
            if (t < a + ramp) return {smooth5p((t - a) / ramp) / ramp, 0.0};
            if (t > b - ramp) return {-smooth5p((b - t) / ramp) / ramp, 0.0};
            return {};
        }
    }
    return {};
}

Mat2 TestFunction::hess(const Vec2& x) const {
    Mat2 H;
    switch (kind) {
        case TestFunctionKind::constant_one:
            break;
        case TestFunctionKind::bump: {
            const Vec2 r = x - center;
            const double iR2 = 1.0 / (radius * radius);
            const double s = r.dot(r) * iR2;
            if (s >= 1.0) break;
            const double q = 1.0 - s;
            const Vec2 ds = r * (2.0 * iR2);
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double d2s = (j == k) ? 2.0 * iR2 : 0.0;
                    H.a[j][k] = 6.0 * q * ds[j] * ds[k] - 3.0 * q * q * d2s;
                }
            break;
        }
        case TestFunctionKind::coordinate_window: {
            const double t = x.x;
            if (t <= a || t >= b) break;
            if (t < a + ramp)
                H.a[0][0] = smooth5pp((t - a) / ramp) / (ramp * ramp);
            else if (t > b - ramp)
                H.a[0][0] = smooth5pp((b - t) / ramp) / (ramp * ramp);
            break;
        }
    }
    return H;
}

}  // namespace sac
