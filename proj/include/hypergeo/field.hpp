#pragma once

#include <cmath>
#include <complex>
#include <string_view>
#include <type_traits>
#include <utility>

#include "errors.hpp"

namespace hypergeo {

using cplx = std::complex<double>;

// Hamilton quaternion a + b i + c j + d k.
struct Quaternion {
    double a = 0, b = 0, c = 0, d = 0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double re) : a(re) {}  // NOLINT: implicit on purpose
    constexpr Quaternion(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}

    Quaternion& operator+=(const Quaternion& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& o) {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }
    Quaternion& operator*=(double s) {
        a *= s; b *= s; c *= s; d *= s;
        return *this;
    }
    friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline Quaternion operator+(Quaternion x, const Quaternion& y) { return x += y; }
inline Quaternion operator-(Quaternion x, const Quaternion& y) { return x -= y; }
inline Quaternion operator-(const Quaternion& x) { return {-x.a, -x.b, -x.c, -x.d}; }
inline Quaternion operator*(Quaternion x, double s) { return x *= s; }
inline Quaternion operator*(double s, Quaternion x) { return x *= s; }

inline Quaternion operator*(const Quaternion& x, const Quaternion& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
            x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
            x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

// Standard involution on each field.
inline double adj(double x) { return x; }
inline cplx adj(const cplx& x) { return std::conj(x); }
inline Quaternion adj(const Quaternion& x) { return {x.a, -x.b, -x.c, -x.d}; }

inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return std::norm(x); }
inline double abs2(const Quaternion& x) { return x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d; }

inline double re(double x) { return x; }
inline double re(const cplx& x) { return x.real(); }
inline double re(const Quaternion& x) { return x.a; }

enum class Field { real, complex, quaternion };

constexpr int dim(Field f) {
    switch (f) {
        case Field::real: return 1;
        case Field::complex: return 2;
        case Field::quaternion: return 4;
    }
    return 0;
}

inline Field parse_field(std::string_view s) {
    if (s == "r" || s == "real" || s == "R") return Field::real;
    if (s == "c" || s == "complex" || s == "C") return Field::complex;
    if (s == "h" || s == "quaternion" || s == "H") return Field::quaternion;
    throw domain_error("unknown field tag (expected r, c or h)");
}

inline const char* field_tag(Field f) {
    switch (f) {
        case Field::real: return "r";
        case Field::complex: return "c";
        case Field::quaternion: return "h";
    }
    return "?";
}

template <class S> struct scalar_traits;

template <> struct scalar_traits<double> {
    static constexpr Field field = Field::real;
    static constexpr int d = 1;
};
template <> struct scalar_traits<cplx> {
    static constexpr Field field = Field::complex;
    static constexpr int d = 2;
};
template <> struct scalar_traits<Quaternion> {
    static constexpr Field field = Field::quaternion;
    static constexpr int d = 4;
};

template <class S> inline constexpr int field_dim_v = scalar_traits<S>::d;

// Real component access in (1, i, j, k) order.
inline double component(double x, int) { return x; }
inline double component(const cplx& x, int c) { return c == 0 ? x.real() : x.imag(); }
inline double component(const Quaternion& x, int c) {
    switch (c) {
        case 0: return x.a;
        case 1: return x.b;
        case 2: return x.c;
        default: return x.d;
    }
}

template <class S> S from_components(const double* v);
template <> inline double from_components<double>(const double* v) { return v[0]; }
template <> inline cplx from_components<cplx>(const double* v) { return {v[0], v[1]}; }
template <> inline Quaternion from_components<Quaternion>(const double* v) {
    return {v[0], v[1], v[2], v[3]};
}

// Calls fn(std::type_identity<S>{}) with the scalar type matching the field tag.
template <class Fn>
decltype(auto) dispatch_field(Field f, Fn&& fn) {
    switch (f) {
        case Field::real: return std::forward<Fn>(fn)(std::type_identity<double>{});
        case Field::complex: return std::forward<Fn>(fn)(std::type_identity<cplx>{});
        default: return std::forward<Fn>(fn)(std::type_identity<Quaternion>{});
    }
}

}  // namespace hypergeo
