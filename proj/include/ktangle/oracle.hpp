#pragma once

// Brute-force ground truth, kept deliberately independent of the closed
// forms: dense state-vector evolution, partial traces, purity tangles,
// Wootters concurrence, and seeded random-instance generators.  Dimensions
// are fixed at 8 or 16, so clarity beats speed everywhere.

#include "ktangle/channels.hpp"
#include "ktangle/tangle.hpp"

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ktangle {

/// Evolved state |phi> = sum c_{nlm} |nlm>, index 4n + 2l + m, obtained by
/// applying the channel map to the S,E factor and leaving S' untouched.
template <typename S>
Vec8<S> evolve3(const KrausPair<S>& kp, const TwoQubitPure<S>& psi0) {
  const Mat2<S> psi = psi0.coeff_matrix();
  Vec8<S> out;
  for (int n = 0; n < 2; ++n) {
    for (int s = 0; s < 2; ++s) {
      for (int mu = 0; mu < 2; ++mu) {
        const Mat2<S>& k = (mu == 0) ? kp.k0 : kp.k1;
        out[4 * n + 2 * s + mu] = psi(n, 0) * k(s, 0) + psi(n, 1) * k(s, 1);
      }
    }
  }
  return out;
}

/// Reduced density matrix of the kept qubits.  Qubit 0 is the most
/// significant bit of the flat index (S' in the conventions used here).
template <typename Derived>
MatX<typename Eigen::NumTraits<typename Derived::Scalar>::Real> partial_trace(
    const Eigen::MatrixBase<Derived>& psi, std::span<const int> keep) {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const int dim = static_cast<int>(psi.size());
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim) {
    throw std::invalid_argument("state dimension is not a power of two");
  }
  const int k = static_cast<int>(keep.size());
  int keep_mask = 0;
  for (int q : keep) {
    if (q < 0 || q >= n) throw std::invalid_argument("qubit index out of range");
    keep_mask |= 1 << (n - 1 - q);
  }
  if (std::popcount(static_cast<unsigned>(keep_mask)) != k) {
    throw std::invalid_argument("duplicate qubit index in partial trace");
  }

  const auto kept_bits = [&](int x) {
    int r = 0;
    for (int t = 0; t < k; ++t) {
      r |= ((x >> (n - 1 - keep[t])) & 1) << (k - 1 - t);
    }
    return r;
  };

  MatX<S> rho = MatX<S>::Zero(1 << k, 1 << k);
  for (int x = 0; x < dim; ++x) {
    for (int y = 0; y < dim; ++y) {
      if ((x & ~keep_mask) != (y & ~keep_mask)) continue;
      rho(kept_bits(x), kept_bits(y)) += psi[x] * std::conj(psi[y]);
    }
  }
  return rho;
}

template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& psi,
                   std::initializer_list<int> keep) {
  std::vector<int> k(keep);
  return partial_trace(psi, std::span<const int>(k));
}

/// Checks the DensityMat contract: Hermitian, unit trace, spectrum >= 0
/// within tolerance.
template <typename Derived>
void validate_density(
    const Eigen::MatrixBase<Derived>& rho,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real tol = 1e-10) {
  using C = typename Derived::Scalar;
  using S = typename Eigen::NumTraits<C>::Real;
  const MatX<S> m = rho;
  const S herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian: residual " << herm;
    throw std::invalid_argument(msg.str());
  }
  const S tr_err = std::abs(m.trace() - C(1));
  if (tr_err > tol) {
    std::ostringstream msg;
    msg << "density matrix trace differs from 1 by " << tr_err;
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<MatX<S>> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue solver failed on density matrix");
  }
  if (es.eigenvalues().minCoeff() < -tol) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue "
        << es.eigenvalues().minCoeff();
    throw std::invalid_argument(msg.str());
  }
}

namespace detail {

template <typename S>
MatX<S> spin_flip_matrix() {
  MatX<S> yy = MatX<S>::Zero(4, 4);
  yy(0, 3) = Complex<S>(-1);
  yy(1, 2) = Complex<S>(1);
  yy(2, 1) = Complex<S>(1);
  yy(3, 0) = Complex<S>(-1);
  return yy;
}

// The Wootters spectrum of rho = M M† equals the singular values of the
// complex symmetric matrix M^T (Y x Y) M: the nonzero eigenvalues of
// rho (YxY) rho* (YxY) coincide with those of S† S for S = M^T (YxY) M.
// Working with S avoids taking square roots of noise-level eigenvalues,
// which matters because every two-qubit reduction of a pure 3-qubit state
// has rank <= 2.
template <typename S>
std::array<S, 4> wootters_lambdas(const MatX<S>& m) {
  const MatX<S> sym = m.transpose() * spin_flip_matrix<S>() * m;
  Eigen::JacobiSVD<MatX<S>> svd(sym);
  const auto& sv = svd.singularValues();
  std::array<S, 4> lam = {S(0), S(0), S(0), S(0)};
  for (int i = 0; i < std::min<int>(4, static_cast<int>(sv.size())); ++i) {
    lam[i] = sv[i];  // descending
  }
  return lam;
}

template <typename S>
S concurrence_sq_from_lambdas(const std::array<S, 4>& lam) {
  const S c = lam[0] - lam[1] - lam[2] - lam[3];
  return clamp_unit(sqr(std::max(c, S(0))));
}

}  // namespace detail

/// Tangle of a single qubit against the rest of a pure state: 4 det rho,
/// cross-checked against the purity form 2(1 - tr rho^2).
template <typename Derived>
auto purity_tangle(const Eigen::MatrixBase<Derived>& rho) {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw std::invalid_argument("purity_tangle expects a 2x2 density matrix");
  }
  validate_density(rho);
  const MatX<S> m = rho;
  const S via_det = S(4) * real_checked<S>(m.determinant());
  const S via_purity = S(2) * (S(1) - real_checked<S>((m * m).trace()));
  if (std::abs(via_det - via_purity) > S(1e-12)) {
    std::ostringstream msg;
    msg << "determinant and purity routes disagree: " << via_det << " vs "
        << via_purity;
    throw std::runtime_error(msg.str());
  }
  return clamp_unit(via_det);
}

/// Squared Wootters concurrence of a two-qubit density matrix.  The lambdas
/// are the square roots of the eigenvalues of rho (YxY) rho* (YxY), obtained
/// through the purification factor of rho (see detail::wootters_lambdas).
template <typename Derived>
auto wootters_concurrence_sq(const Eigen::MatrixBase<Derived>& rho) {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument(
        "wootters_concurrence_sq expects a 4x4 density matrix");
  }
  validate_density(rho);
  Eigen::SelfAdjointEigenSolver<MatX<S>> es(rho);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue solver failed in Wootters formula");
  }
  MatX<S> factor = es.eigenvectors();
  for (int j = 0; j < 4; ++j) {
    factor.col(j) *= std::sqrt(std::max(es.eigenvalues()[j], S(0)));
  }
  return detail::concurrence_sq_from_lambdas(detail::wootters_lambdas(factor));
}

/// Squared Wootters concurrence between qubits (q1, q2) of a pure state,
/// computed from the amplitudes themselves.  This is the exact same spectrum
/// as wootters_concurrence_sq(partial_trace(psi, {q1, q2})) with none of the
/// precision loss of factorizing a rank-deficient density matrix.
template <typename Derived>
auto pair_concurrence_sq(const Eigen::MatrixBase<Derived>& psi, int q1,
                         int q2) {
  using S = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const int dim = static_cast<int>(psi.size());
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim || n < 2) {
    throw std::invalid_argument("state dimension is not a power of two >= 4");
  }
  if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n || q2 >= n) {
    throw std::invalid_argument("invalid qubit pair");
  }
  MatX<S> m = MatX<S>::Zero(4, dim / 4);
  for (int x = 0; x < dim; ++x) {
    const int b1 = (x >> (n - 1 - q1)) & 1;
    const int b2 = (x >> (n - 1 - q2)) & 1;
    int rest = 0;
    for (int q = 0; q < n; ++q) {
      if (q == q1 || q == q2) continue;
      rest = (rest << 1) | ((x >> (n - 1 - q)) & 1);
    }
    m(2 * b1 + b2, rest) = psi[x];
  }
  return detail::concurrence_sq_from_lambdas(detail::wootters_lambdas(m));
}

/// Everything the oracle can say about one evolved 3-qubit state.
template <typename S>
struct OracleReport {
  S tau;
  S c2_sp_se, c2_s_spe, c2_e_ssp;  // bipartition tangles (purity route)
  S c2_sps, c2_spe, c2_se;         // pairwise tangles (Wootters route)
  S ckw_sp, ckw_s, ckw_e;          // signed monogamy residuals
};

template <typename S>
OracleReport<S> full_report_direct(const Vec8<S>& state) {
  OracleReport<S> r{};
  r.tau = three_tangle_direct(state);
  r.c2_sp_se = purity_tangle(partial_trace(state, {0}));
  r.c2_s_spe = purity_tangle(partial_trace(state, {1}));
  r.c2_e_ssp = purity_tangle(partial_trace(state, {2}));
  r.c2_sps = pair_concurrence_sq(state, 0, 1);
  r.c2_spe = pair_concurrence_sq(state, 0, 2);
  r.c2_se = pair_concurrence_sq(state, 1, 2);
  r.ckw_sp = r.c2_sp_se - r.c2_sps - r.c2_spe - r.tau;
  r.ckw_s = r.c2_s_spe - r.c2_sps - r.c2_se - r.tau;
  r.ckw_e = r.c2_e_ssp - r.c2_spe - r.c2_se - r.tau;
  return r;
}

// ---------------------------------------------------------------------------
// Seeded random instances.  All generators take the engine by reference so a
// single seed fixes a whole experiment.

template <typename S = double>
Complex<S> random_complex(std::mt19937_64& rng) {
  std::normal_distribution<S> normal(S(0), S(1));
  const S re = normal(rng);
  const S im = normal(rng);
  return Complex<S>(re, im) / std::sqrt(S(2));
}

/// Haar-ish random 4x4 unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phases absorbed into Q.
template <typename S = double>
Mat4<S> random_unitary4(std::mt19937_64& rng) {
  Mat4<S> a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      a(i, j) = random_complex<S>(rng);
    }
  }
  Eigen::HouseholderQR<Mat4<S>> qr(a);
  Mat4<S> q = qr.householderQ();
  const Mat4<S> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) {
    const Complex<S> d = r(j, j);
    const S mag = std::abs(d);
    q.col(j) *= (mag > S(0)) ? d / mag : Complex<S>(1);
  }
  return q;
}

template <typename S = double>
TwoQubitPure<S> random_two_qubit_pure(std::mt19937_64& rng) {
  Vec4<S> amps;
  for (int i = 0; i < 4; ++i) amps[i] = random_complex<S>(rng);
  amps /= amps.norm();
  // amplitudes() ordering is (delta, gamma, beta, alpha)
  return TwoQubitPure<S>(amps[3], amps[2], amps[1], amps[0]);
}

template <int N, typename S = double>
Eigen::Matrix<Complex<S>, N, 1> random_state_vector(std::mt19937_64& rng) {
  Eigen::Matrix<Complex<S>, N, 1> amps;
  for (int i = 0; i < N; ++i) amps[i] = random_complex<S>(rng);
  amps /= amps.norm();
  return amps;
}

}  // namespace ktangle
