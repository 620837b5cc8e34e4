#pragma once

// Two-operator Kraus channels acting on qubit S while S stays entangled with
// S': validated pairs, the built-in decoherence families, extraction from a
// 4x4 dilation unitary, and the coefficient matrices of the evolved register.
//
// Basis conventions, fixed once for the whole library:
//   - three-qubit amplitudes c_{nlm} carry n = S', l = S, m = E,
//     flat index 4n + 2l + m;
//   - K_mu is the block <mu|_E U |0>_E of the dilation unitary, i.e.
//     K_mu(s',s) = U(2s'+mu, 2s).

#include "ktangle/mat2.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ktangle {

template <typename S>
S completeness_residual(const Mat2<S>& k0, const Mat2<S>& k1) {
  const Mat2<S> r =
      k0.adjoint() * k0 + k1.adjoint() * k1 - Mat2<S>::Identity();
  return r.cwiseAbs().maxCoeff();
}

/// Validated pair (K0, K1) satisfying K0†K0 + K1†K1 = I.
template <typename S>
struct KrausPair {
  Mat2<S> k0;
  Mat2<S> k1;

  // Identity channel (I, 0).
  KrausPair() : k0(Mat2<S>::Identity()), k1(Mat2<S>::Zero()) {}

  KrausPair(const Mat2<S>& a, const Mat2<S>& b) : k0(a), k1(b) {
    if (!k0.allFinite() || !k1.allFinite()) {
      throw std::invalid_argument("Kraus operators must have finite entries");
    }
    const S r = completeness_residual(k0, k1);
    if (r > kCompletenessTol<S>) {
      std::ostringstream msg;
      msg << "Kraus pair violates completeness: residual " << r << " exceeds "
          << kCompletenessTol<S>;
      throw std::invalid_argument(msg.str());
    }
  }
};

// u = 4 det(K0 K1) and v = g^2(K0, K1): the two channel invariants that decide
// the GHZ/W split and enter every pairwise tangle.
template <typename S>
Complex<S> kraus_u(const KrausPair<S>& kp) {
  return S(4) * (kp.k0 * kp.k1).determinant();
}

template <typename S>
Complex<S> kraus_v(const KrausPair<S>& kp) {
  return sqr(gfun(kp.k0, kp.k1));
}

template <typename S>
S sum_abs_det(const KrausPair<S>& kp) {
  return std::abs(kp.k0.determinant()) + std::abs(kp.k1.determinant());
}

template <typename S>
void check_channel_strength(S p) {
  if (!(p >= S(0) && p <= S(1))) {
    std::ostringstream msg;
    msg << "channel strength p = " << p << " must lie in [0,1]";
    throw std::invalid_argument(msg.str());
  }
}

/// Amplitude damping: K0 = diag(1, sqrt(1-p)), K1 = sqrt(p) |0><1|.
template <typename S = double>
KrausPair<S> ad_channel(S p) {
  check_channel_strength(p);
  Mat2<S> k0 = Mat2<S>::Zero();
  Mat2<S> k1 = Mat2<S>::Zero();
  k0(0, 0) = S(1);
  k0(1, 1) = std::sqrt(S(1) - p);
  k1(0, 1) = std::sqrt(p);
  return {k0, k1};
}

/// Dephasing: K0 = diag(1, sqrt(1-p)), K1 = diag(0, sqrt(p)).
template <typename S = double>
KrausPair<S> dephasing_channel(S p) {
  check_channel_strength(p);
  Mat2<S> k0 = Mat2<S>::Zero();
  Mat2<S> k1 = Mat2<S>::Zero();
  k0(0, 0) = S(1);
  k0(1, 1) = std::sqrt(S(1) - p);
  k1(1, 1) = std::sqrt(p);
  return {k0, k1};
}

/// Phase flip: K0 = sqrt(1-p/2) I, K1 = sqrt(p/2) diag(1,-1).
template <typename S = double>
KrausPair<S> phase_flip_channel(S p) {
  check_channel_strength(p);
  Mat2<S> k0 = std::sqrt(S(1) - p / S(2)) * Mat2<S>::Identity();
  Mat2<S> k1 = Mat2<S>::Zero();
  k1(0, 0) = std::sqrt(p / S(2));
  k1(1, 1) = -std::sqrt(p / S(2));
  return {k0, k1};
}

template <typename S>
S unitarity_residual(const Mat4<S>& u) {
  return (u.adjoint() * u - Mat4<S>::Identity()).cwiseAbs().maxCoeff();
}

/// Kraus pair of the S-E dilation U, with E prepared in |0> and read out in
/// the computational basis.  The basis index of U is 2s + e.
template <typename S>
KrausPair<S> kraus_from_unitary(const Mat4<S>& u) {
  const S r = unitarity_residual(u);
  if (r > kCompletenessTol<S>) {
    std::ostringstream msg;
    msg << "matrix is not unitary: residual |U†U - I| = " << r << " exceeds "
        << kCompletenessTol<S>;
    throw std::invalid_argument(msg.str());
  }
  Mat2<S> k0;
  Mat2<S> k1;
  for (int sp = 0; sp < 2; ++sp) {
    for (int s = 0; s < 2; ++s) {
      k0(sp, s) = u(2 * sp + 0, 2 * s);
      k1(sp, s) = u(2 * sp + 1, 2 * s);
    }
  }
  return {k0, k1};
}

/// |psi0> = alpha|11> + beta|10> + gamma|01> + delta|00>, first slot S',
/// second slot S.
template <typename S>
struct TwoQubitPure {
  Complex<S> alpha, beta, gamma, delta;

  TwoQubitPure(Complex<S> a, Complex<S> b, Complex<S> c, Complex<S> d)
      : alpha(a), beta(b), gamma(c), delta(d) {
    const S norm = std::sqrt(std::norm(alpha) + std::norm(beta) +
                             std::norm(gamma) + std::norm(delta));
    if (std::abs(norm - S(1)) > kNormTol<S>) {
      std::ostringstream msg;
      msg << "two-qubit state has norm " << norm << ", expected 1 within "
          << kNormTol<S>;
      throw std::invalid_argument(msg.str());
    }
  }

  // Amplitudes as the matrix Psi(n, l) over (S' = n, S = l).
  Mat2<S> coeff_matrix() const {
    Mat2<S> m;
    m << delta, gamma, beta, alpha;
    return m;
  }

  // Flat amplitudes, index 2n + l.
  Vec4<S> amplitudes() const {
    Vec4<S> v;
    v << delta, gamma, beta, alpha;
    return v;
  }
};

template <typename S = double>
TwoQubitPure<S> bell_state() {
  const Complex<S> h(S(1) / std::sqrt(S(2)), S(0));
  return {h, Complex<S>(0), Complex<S>(0), h};
}

/// Coefficient matrices (C0, C1) of the evolved three-qubit state; C_n holds
/// the amplitudes c_{nlm} with l the row and m the column, so that C_n equals
/// K0 M0 + K1 M1 with M0, M1 built from the S' = n amplitude pair of psi0.
template <typename S>
std::pair<Mat2<S>, Mat2<S>> evolved_coeffs(const KrausPair<S>& kp,
                                           const TwoQubitPure<S>& psi0) {
  const Vec2<S> low(psi0.delta, psi0.gamma);    // S' = 0 amplitudes (l = 0, 1)
  const Vec2<S> high(psi0.beta, psi0.alpha);    // S' = 1
  Mat2<S> c0;
  Mat2<S> c1;
  c0.col(0) = kp.k0 * low;
  c0.col(1) = kp.k1 * low;
  c1.col(0) = kp.k0 * high;
  c1.col(1) = kp.k1 * high;
  return {c0, c1};
}

}  // namespace ktangle
