#pragma once

// Extended-precision scalars for the asymptotic gluing pipeline. Twist
// extraction cancels terms of size e^{c sqrt(R)} against each other, which
// leaves nothing in double precision beyond R ~ 1e3.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>

#include "hitchin/matrix2.hpp"

namespace hitchin::hp {

#ifndef HITCHIN_HP_DIGITS
#define HITCHIN_HP_DIGITS 150
#endif
inline constexpr unsigned digits10 = HITCHIN_HP_DIGITS;

using real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<digits10>, boost::multiprecision::et_off>;
using complex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<digits10>>,
    boost::multiprecision::et_off>;
using Mat2 = Mat2T<complex>;

inline complex from(std::complex<double> z) { return complex(real(z.real()), real(z.imag())); }

inline std::complex<double> to_double(const complex& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline complex expc(const complex& z) { return boost::multiprecision::exp(z); }

// Natural log of |z| without overflow in the double conversion.
inline double log_abs(const complex& z) { return static_cast<double>(boost::multiprecision::log(abs(z))); }

inline double arg(const complex& z) { return static_cast<double>(boost::multiprecision::arg(z)); }

inline const complex& I() {
    static const complex i(real(0), real(1));
    return i;
}

inline real max_abs(const Mat2& m) {
    using boost::multiprecision::abs;
    real x = abs(m.a);
    for (const complex* e : {&m.b, &m.c, &m.d}) {
        real y = abs(*e);
        if (y > x) x = y;
    }
    return x;
}

// diag(e^{x}, e^{-x}).
inline Mat2 diag_exp(const complex& x) { return Mat2::diag(expc(x), expc(-x)); }

}  // namespace hitchin::hp
