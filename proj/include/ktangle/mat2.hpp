#pragma once

// Complex 2x2 building blocks shared by every other header: matrix aliases,
// tolerance constants, and the similarity-invariant bilinear form g.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace ktangle {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar> using Mat2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar> using Mat4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <typename Scalar> using Vec2 = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar> using Vec4 = Eigen::Matrix<Complex<Scalar>, 4, 1>;
template <typename Scalar> using Vec8 = Eigen::Matrix<Complex<Scalar>, 8, 1>;
template <typename Scalar> using Vec16 = Eigen::Matrix<Complex<Scalar>, 16, 1>;
template <typename Scalar>
using MatX = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Mat2cd = Mat2<double>;
using Mat4cd = Mat4<double>;
using Vec4cd = Vec4<double>;
using Vec8cd = Vec8<double>;
using Vec16cd = Vec16<double>;
using MatXcd = MatX<double>;

// Absolute tolerances; every quantity handled here is order-unity.
template <typename S> inline constexpr S kAlgebraTol = S(1e-10);      // algebraic identities
template <typename S> inline constexpr S kCompletenessTol = S(1e-9);  // Kraus completeness
template <typename S> inline constexpr S kNormTol = S(1e-12);         // state normalization
template <typename S> inline constexpr S kNoiseFloor = S(1e-8);       // negative/imaginary float noise
template <typename S> inline constexpr S kClassifyTol = S(1e-9);      // classification default

template <typename T>
constexpr T sqr(T x) {
  return x * x;
}

// g(A,B) = tr A tr B - tr(AB).  Symmetric, bilinear, similarity-invariant;
// for 2x2 arguments also equal to det(A+B) - det A - det B.
template <typename DA, typename DB>
auto gfun(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  static_assert(DA::RowsAtCompileTime == 2 && DA::ColsAtCompileTime == 2,
                "gfun expects 2x2 matrices");
  static_assert(DB::RowsAtCompileTime == 2 && DB::ColsAtCompileTime == 2,
                "gfun expects 2x2 matrices");
  return a.trace() * b.trace() - (a.derived() * b.derived()).trace();
}

// Clamp a tangle-like value into [0,1]; noise beyond `guard` is a bug, not noise.
template <typename S>
S clamp_unit(S x, S guard = kNoiseFloor<S>) {
  if (x < -guard || x > S(1) + guard) {
    std::ostringstream msg;
    msg << "value " << x << " lies outside [0,1] beyond the noise guard " << guard;
    throw std::runtime_error(msg.str());
  }
  return std::clamp(x, S(0), S(1));
}

// Real part of a value that must be real up to float noise.
template <typename S>
S real_checked(Complex<S> z, S guard = kNoiseFloor<S>) {
  if (std::abs(z.imag()) > guard) {
    std::ostringstream msg;
    msg << "imaginary residue " << z.imag() << " exceeds the guard " << guard;
    throw std::runtime_error(msg.str());
  }
  return z.real();
}

}  // namespace ktangle
