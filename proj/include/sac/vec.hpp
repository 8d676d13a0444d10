#pragma once

#include <array>
#include <cmath>

namespace sac {

// Fixed-capacity 2-vector / 2x2 matrix used for both dim 1 and dim 2;
// the unused lane stays zero in 1D.
struct Vec2 {
    double x = 0.0, y = 0.0;

    double operator[](int i) const { return i == 0 ? x : y; }
    double& operator[](int i) { return i == 0 ? x : y; }

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

struct Mat2 {
    // row-major: a[i][j]
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static Mat2 identity() {
        Mat2 I;
        I.a[0][0] = I.a[1][1] = 1.0;
        return I;
    }
    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] + o.a[i][j];
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] - o.a[i][j];
        return r;
    }
    Mat2 operator*(double s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = a[i][j] * s;
        return r;
    }
    Mat2 matmul(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.a[i][j] = a[i][0] * o.a[0][j] + a[i][1] * o.a[1][j];
        return r;
    }
    Vec2 apply(const Vec2& v) const {
        return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
    }
    double det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }
    double trace() const { return a[0][0] + a[1][1]; }
    Mat2 transpose() const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = a[j][i];
        return r;
    }
    Mat2 inverse(int dim) const {
        Mat2 r;
        if (dim == 1) {
            r.a[0][0] = 1.0 / a[0][0];
            r.a[1][1] = 1.0;
            return r;
        }
        const double d = det();
        r.a[0][0] = a[1][1] / d;
        r.a[0][1] = -a[0][1] / d;
        r.a[1][0] = -a[1][0] / d;
        r.a[1][1] = a[0][0] / d;
        return r;
    }
    // contraction M : (g  tensor g)
    double quad(const Vec2& g) const {
        return a[0][0] * g.x * g.x + (a[0][1] + a[1][0]) * g.x * g.y +
               a[1][1] * g.y * g.y;
    }
};

}  // namespace sac
