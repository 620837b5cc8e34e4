#pragma once

// Three independent routes to the 3-tangle of the evolved pure state:
// the degree-4 polynomial in the amplitudes, the simplified form in the
// coefficient matrices, and the closed form in the Kraus pair alone.

#include "ktangle/channels.hpp"
#include "ktangle/mat2.hpp"

#include <cmath>
#include <stdexcept>

namespace ktangle {

namespace detail {

template <typename Derived>
void check_normalized(const Eigen::MatrixBase<Derived>& amps,
                      const char* what) {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const S norm = amps.norm();
  if (std::abs(norm - S(1)) > kNormTol<S>) {
    std::ostringstream msg;
    msg << what << " has norm " << norm << ", expected 1 within "
        << kNormTol<S>;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

/// 3-tangle of a pure 3-qubit state, 4|d1 - 2 d2 + 4 d3|, from the amplitudes
/// c[4n + 2l + m].  Invariant under permutations of the three qubits.
template <typename Derived>
auto three_tangle_direct(const Eigen::MatrixBase<Derived>& c) {
  static_assert(Derived::RowsAtCompileTime == 8 &&
                    Derived::ColsAtCompileTime == 1,
                "expected an 8-component amplitude vector");
  using C = typename Derived::Scalar;
  using S = typename Eigen::NumTraits<C>::Real;
  detail::check_normalized(c, "three-qubit state");

  const auto a = [&](int i, int j) { return c[2 * i + j]; };
  const auto b = [&](int i, int j) { return c[4 + 2 * i + j]; };

  const C d1 = sqr(a(0, 0)) * sqr(b(1, 1)) + sqr(a(0, 1)) * sqr(b(1, 0)) +
               sqr(a(1, 0)) * sqr(b(0, 1)) + sqr(a(1, 1)) * sqr(b(0, 0));
  const C d2 = a(0, 0) * a(1, 1) * b(0, 0) * b(1, 1) +
               a(0, 1) * a(1, 0) * b(1, 0) * b(0, 1) +
               (a(1, 0) * b(0, 1) + a(0, 1) * b(1, 0)) *
                   (a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0));
  const C d3 = a(0, 0) * a(1, 1) * b(1, 0) * b(0, 1) +
               a(0, 1) * a(1, 0) * b(0, 0) * b(1, 1);

  return clamp_unit(S(4) * std::abs(d1 - S(2) * d2 + S(4) * d3), S(1e-12));
}

/// Same quantity from the coefficient matrices: 4 |4 det(C0 C1) - g^2(C0,C1)|.
template <typename S>
S three_tangle_simplified(const Mat2<S>& c0, const Mat2<S>& c1) {
  const S norm = std::sqrt(c0.squaredNorm() + c1.squaredNorm());
  if (std::abs(norm - S(1)) > kNormTol<S>) {
    std::ostringstream msg;
    msg << "coefficient matrices have combined norm " << norm
        << ", expected 1 within " << kNormTol<S>;
    throw std::invalid_argument(msg.str());
  }
  const Complex<S> inner =
      S(4) * (c0 * c1).determinant() - sqr(gfun(c0, c1));
  return clamp_unit(S(4) * std::abs(inner), S(1e-12));
}

/// Closed form: tau = E0^2 |4 det(K0 K1) - g^2(K0, K1)|.  Linear in the
/// initial entanglement e0sq; independent of every other detail of the
/// initial state.
template <typename S>
S three_tangle_kraus(const KrausPair<S>& kp, S e0sq) {
  if (!(e0sq >= S(0) && e0sq <= S(1))) {
    std::ostringstream msg;
    msg << "initial entanglement e0sq = " << e0sq << " must lie in [0,1]";
    throw std::invalid_argument(msg.str());
  }
  return clamp_unit(e0sq * std::abs(kraus_u(kp) - kraus_v(kp)), S(1e-12));
}

}  // namespace ktangle
