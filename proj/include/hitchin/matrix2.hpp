#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace hitchin {

// Row-major 2x2 matrix over an arbitrary complex scalar.
template <class T>
struct Mat2T {
    T a{}, b{}, c{}, d{};

    static Mat2T identity() { return {T(1), T(0), T(0), T(1)}; }
    static Mat2T diag(const T& x, const T& y) { return {x, T(0), T(0), y}; }

    T& at(int i, int j) { return i == 0 ? (j == 0 ? a : b) : (j == 0 ? c : d); }
    const T& at(int i, int j) const { return i == 0 ? (j == 0 ? a : b) : (j == 0 ? c : d); }

    T det() const { return a * d - b * c; }
    T trace() const { return a + d; }

    // Inverse via the adjugate; caller is responsible for det != 0.
    Mat2T inverse() const {
        T D = det();
        return {d / D, -b / D, -c / D, a / D};
    }

    Mat2T operator*(const Mat2T& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2T operator+(const Mat2T& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2T operator-(const Mat2T& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2T scaled(const T& s) const { return {a * s, b * s, c * s, d * s}; }
};

template <class T>
Mat2T<T> operator*(const T& s, const Mat2T<T>& m) {
    return m.scaled(s);
}

using Mat2 = Mat2T<std::complex<double>>;

// Frobenius norm for double matrices.
inline double frobenius(const Mat2& m) {
    return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

inline double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)), std::max(std::abs(m.c), std::abs(m.d)));
}

// Weyl group element exchanging the two diagonalizing directions.
inline Mat2 swap_matrix() { return {0.0, 1.0, 1.0, 0.0}; }

}  // namespace hitchin
