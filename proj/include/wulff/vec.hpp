#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace wulff {

// Fixed 3-slot vector. 2-d data lives in the first two slots with the third
// held at zero, so dot products and norms work unchanged in both dimensions.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double x, double y, double z = 0.0) : c{x, y, z} {}

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec& operator+=(const Vec& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    c[2] += o.c[2];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    c[2] -= o.c[2];
    return *this;
  }
  Vec& operator*=(double s) {
    c[0] *= s;
    c[1] *= s;
    c[2] *= s;
    return *this;
  }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
inline Vec operator-(const Vec& a) { return Vec(-a[0], -a[1], -a[2]); }

inline double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec cross(const Vec& a, const Vec& b) {
  return Vec(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
             a[0] * b[1] - a[1] * b[0]);
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  return a / n;
}

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

// Rotate by +90 degrees in the xy-plane (2-d helper).
inline Vec perp2(const Vec& a) { return Vec(-a[1], a[0], 0.0); }

}  // namespace wulff
