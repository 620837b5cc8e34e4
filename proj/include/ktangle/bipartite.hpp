#pragma once

// Closed forms for every bipartite entanglement measure of the evolved state:
// bipartition tangles through the D_S/D_E/G decomposition, pairwise tangles
// through the channel invariants u and v, lower bounds, the expansion of G in
// the initial entanglement, and the derivative of the bipartition tangles
// with respect to it.

#include "ktangle/channels.hpp"
#include "ktangle/labels.hpp"
#include "ktangle/mat2.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ktangle {

/// Feasible range of the excited population rho_ee at fixed initial
/// entanglement: the roots of 4 r (1 - r) = e0sq.
template <typename S>
std::pair<S, S> rho_ee_bounds(S e0sq) {
  if (!(e0sq >= S(0) && e0sq <= S(1))) {
    throw std::invalid_argument("e0sq must lie in [0,1]");
  }
  const S half_width = std::sqrt(S(1) - e0sq) / S(2);
  return {S(0.5) - half_width, S(0.5) + half_width};
}

/// Initial reduced state of S, parametrized as
///   rho0 = [[1 - rho_ee, |rho_ge| e^{i phi}], [|rho_ge| e^{-i phi}, rho_ee]]
/// with |1> the excited level.  The derived initial entanglement is
/// e0sq = 4 det rho0 = 4 rho_ee (1 - rho_ee) - 4 |rho_ge|^2.
template <typename S>
struct InitialReduced {
  S rho_ee;
  S phi;
  S rho_ge_abs;

  InitialReduced(S ee, S angle, S ge) : rho_ee(ee), phi(angle), rho_ge_abs(ge) {
    if (!(rho_ee >= S(0) && rho_ee <= S(1))) {
      throw std::invalid_argument("rho_ee must lie in [0,1]");
    }
    if (!(rho_ge_abs >= S(0))) {
      throw std::invalid_argument("|rho_ge| must be nonnegative");
    }
    const S cap = rho_ee * (S(1) - rho_ee);
    if (sqr(rho_ge_abs) > cap + kNormTol<S>) {
      std::ostringstream msg;
      msg << "|rho_ge|^2 = " << sqr(rho_ge_abs)
          << " exceeds rho_ee(1-rho_ee) = " << cap
          << "; the matrix would not be positive semidefinite";
      throw std::invalid_argument(msg.str());
    }
    rho_ge_abs = std::min(rho_ge_abs, std::sqrt(std::max(cap, S(0))));
  }

  /// From (rho_ee, phi, e0sq); the coherence magnitude is derived.  Rejects
  /// infeasible e0sq, naming the admissible rho_ee interval.
  static InitialReduced from_entanglement(S ee, S angle, S e0sq) {
    if (!(e0sq >= S(0) && e0sq <= S(1))) {
      throw std::invalid_argument("e0sq must lie in [0,1]");
    }
    const S cap = S(4) * ee * (S(1) - ee);
    if (e0sq > cap + kNormTol<S>) {
      const auto [lo, hi] = rho_ee_bounds(e0sq);
      std::ostringstream msg;
      msg << "e0sq = " << e0sq << " is infeasible at rho_ee = " << ee
          << "; rho_ee must lie in [" << lo << ", " << hi << "]";
      throw std::domain_error(msg.str());
    }
    const S ge = std::sqrt(std::max(cap - e0sq, S(0))) / S(2);
    return {ee, angle, ge};
  }

  /// From an explicit 2x2 density matrix; phi = 0 when the coherence is zero.
  template <typename Derived>
  static InitialReduced from_density(const Eigen::MatrixBase<Derived>& rho) {
    const S herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const S tr_err = std::abs(rho.trace() - Complex<S>(1));
    if (herm > S(1e-10) || tr_err > S(1e-10)) {
      throw std::invalid_argument(
          "initial reduced state must be Hermitian with unit trace");
    }
    const S ee = rho(1, 1).real();
    const Complex<S> ge = rho(0, 1);
    const S mag = std::abs(ge);
    S angle = (mag < S(1e-14)) ? S(0) : std::arg(ge);
    if (angle < S(0)) angle += S(2) * std::numbers::pi_v<S>;
    return {ee, angle, mag};
  }

  Complex<S> rho_ge() const {
    return std::polar(rho_ge_abs, phi);
  }

  Mat2<S> density() const {
    Mat2<S> m;
    m << Complex<S>(S(1) - rho_ee), rho_ge(), std::conj(rho_ge()),
        Complex<S>(rho_ee);
    return m;
  }

  S e0sq() const {
    return std::max(S(4) * rho_ee * (S(1) - rho_ee) - S(4) * sqr(rho_ge_abs),
                    S(0));
  }
};

/// Initial reduced state of S extracted from psi0 by partial trace over S'.
template <typename S>
InitialReduced<S> reduced_from_state(const TwoQubitPure<S>& psi0) {
  Mat2<S> rho;
  rho(0, 0) = std::norm(psi0.delta) + std::norm(psi0.beta);
  rho(1, 1) = std::norm(psi0.alpha) + std::norm(psi0.gamma);
  rho(0, 1) = psi0.delta * std::conj(psi0.gamma) +
              psi0.beta * std::conj(psi0.alpha);
  rho(1, 0) = std::conj(rho(0, 1));
  return InitialReduced<S>::from_density(rho);
}

/// A pure S'-S state whose reduced S state equals r0 (eigenvector
/// purification; any other choice differs by a local unitary on S').
template <typename S>
TwoQubitPure<S> purify(const InitialReduced<S>& r0) {
  Eigen::SelfAdjointEigenSolver<Mat2<S>> es(r0.density());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue solver failed in purification");
  }
  Mat2<S> psi;  // Psi(n, l) = sqrt(lambda_n) V(l, n)
  for (int n = 0; n < 2; ++n) {
    const S lam = std::max(es.eigenvalues()[n], S(0));
    for (int l = 0; l < 2; ++l) {
      psi(n, l) = std::sqrt(lam) * es.eigenvectors()(l, n);
    }
  }
  return TwoQubitPure<S>(psi(1, 1), psi(1, 0), psi(0, 1), psi(0, 0));
}

/// G(K, rho0) = -4 g(K0 rho0 K1†, K1 rho0 K0†): the only piece of the
/// bipartition tangles that remembers the initial state.
template <typename S>
S g_term(const KrausPair<S>& kp, const InitialReduced<S>& r0) {
  const Mat2<S> rho = r0.density();
  const Complex<S> g =
      gfun(kp.k0 * rho * kp.k1.adjoint(), kp.k1 * rho * kp.k0.adjoint());
  return S(-4) * real_checked<S>(g);
}

/// State-independent coefficients of the bipartition tangles:
///   D_S = |det K0|^2 + |det K1|^2 + |g^2(K0,K1)|,  D_E = g(K0†K0, K1†K1),
/// related by D_S = 1 - D_E + |g^2(K0,K1)|.
template <typename S>
std::pair<S, S> ds_de(const KrausPair<S>& kp) {
  const S d_s = sqr(std::abs(kp.k0.determinant())) +
                sqr(std::abs(kp.k1.determinant())) + std::abs(kraus_v(kp));
  const S d_e = real_checked<S>(
      gfun(kp.k0.adjoint() * kp.k0, kp.k1.adjoint() * kp.k1));
  return {d_s, d_e};
}

namespace detail {

// Clamps small negative float noise on a squared concurrence to zero;
// anything below the noise floor is treated as a formula bug.
template <typename S>
S clamp_tangle(S x) {
  if (x < -kNoiseFloor<S>) {
    std::ostringstream msg;
    msg << "squared concurrence " << x << " is negative beyond the noise floor";
    throw std::runtime_error(msg.str());
  }
  return std::max(x, S(0));
}

}  // namespace detail

template <typename S>
struct BipartitionTangles {
  S c2_sp_se;  // S' vs S+E; equals e0sq for every channel
  S c2_s_spe;  // S  vs S'+E
  S c2_e_ssp;  // E  vs S+S'
};

template <typename S>
BipartitionTangles<S> bipartition_tangles(const KrausPair<S>& kp,
                                          const InitialReduced<S>& r0) {
  const auto [d_s, d_e] = ds_de(kp);
  const S g = g_term(kp, r0);
  const S e0 = r0.e0sq();
  return {e0, detail::clamp_tangle(e0 * d_s + g),
          detail::clamp_tangle(e0 * d_e + g)};
}

template <typename S>
struct PairwiseTangles {
  S c2_sps;  // S'-S
  S c2_spe;  // S'-E
  S c2_se;   // S-E
};

/// Pairwise tangles in terms of u = 4 det(K0 K1) and v = g^2(K0, K1).
template <typename S>
PairwiseTangles<S> pairwise_tangles(const KrausPair<S>& kp,
                                    const InitialReduced<S>& r0) {
  const S e0 = r0.e0sq();
  const S g = g_term(kp, r0);
  const S au = std::abs(kraus_u(kp));
  const S av = std::abs(kraus_v(kp));
  const S auv = std::abs(kraus_u(kp) - kraus_v(kp));
  const S sum2 = sqr(sum_abs_det(kp));
  return {detail::clamp_tangle(e0 * sum2 - e0 * (au - av + auv) / S(2)),
          detail::clamp_tangle(e0 * (S(1) - sum2) - e0 * (av - au + auv) / S(2)),
          detail::clamp_tangle(g + e0 * (av - auv) / S(2))};
}

template <typename S>
struct PairwiseBounds {
  S lb_sps, lb_spe, lb_se;
};

/// Lower bounds on the pairwise tangles; tight whenever u = 0 or v = 0.
template <typename S>
PairwiseBounds<S> lower_bounds(const KrausPair<S>& kp,
                               const InitialReduced<S>& r0) {
  const S e0 = r0.e0sq();
  const S g = g_term(kp, r0);
  const S ad0 = std::abs(kp.k0.determinant());
  const S ad1 = std::abs(kp.k1.determinant());
  return {e0 * sqr(ad0 - ad1),
          e0 * (S(1) - sqr(ad0 + ad1) - std::abs(kraus_v(kp))),
          g - S(2) * e0 * std::abs((kp.k0 * kp.k1).determinant())};
}

/// Expansion of G at fixed (rho_ee, phi):
///   G = G1 + G2 sqrt(4 rho_ee (1 - rho_ee) - e0sq) + G3 e0sq,
/// built from M = K0 sigma_ee K1† and N = K0 sigma_phi K1†.
template <typename S>
struct GDecomposition {
  S g1, g2, g3;
  S g;  // the reassembled value
};

namespace detail {

template <typename S>
std::pair<Mat2<S>, Mat2<S>> g_building_blocks(const KrausPair<S>& kp, S rho_ee,
                                              S phi) {
  Mat2<S> sigma_ee = Mat2<S>::Zero();
  sigma_ee(0, 0) = S(1) - rho_ee;
  sigma_ee(1, 1) = rho_ee;
  Mat2<S> sigma_phi = Mat2<S>::Zero();
  sigma_phi(0, 1) = std::polar(S(1), phi);
  sigma_phi(1, 0) = std::polar(S(1), -phi);
  return {kp.k0 * sigma_ee * kp.k1.adjoint(),
          kp.k0 * sigma_phi * kp.k1.adjoint()};
}

}  // namespace detail

template <typename S>
GDecomposition<S> g_decomposition(const KrausPair<S>& kp, S rho_ee, S phi,
                                  S e0sq) {
  const S cap = S(4) * rho_ee * (S(1) - rho_ee);
  if (e0sq > cap + kNormTol<S>) {
    const auto [lo, hi] = rho_ee_bounds(e0sq);
    std::ostringstream msg;
    msg << "e0sq = " << e0sq << " is infeasible at rho_ee = " << rho_ee
        << "; rho_ee must lie in [" << lo << ", " << hi << "]";
    throw std::domain_error(msg.str());
  }
  const auto [m, n] = detail::g_building_blocks(kp, rho_ee, phi);
  const S g_mm = real_checked<S>(gfun(m, m.adjoint()));
  const S g_nn = real_checked<S>(gfun(n, n.adjoint()));
  const S re_mn = gfun(m, n.adjoint()).real();
  GDecomposition<S> d{};
  d.g1 = S(-4) * (g_mm + rho_ee * (S(1) - rho_ee) * g_nn);
  d.g2 = S(-4) * re_mn;
  d.g3 = g_nn;
  d.g = d.g1 + d.g2 * std::sqrt(std::max(cap - e0sq, S(0))) + d.g3 * e0sq;
  return d;
}

enum class Party { S, E };

/// Derivative of C^2_{S|S'E} or C^2_{E|SS'} with respect to the initial
/// entanglement at fixed (rho_ee, phi).  Only defined on W-class pairs
/// (u = v), away from the square-root branch point e0sq = 4 rho_ee(1-rho_ee).
template <typename S>
S dc2_de0sq(const KrausPair<S>& kp, S rho_ee, S phi, S e0sq, Party which) {
  const Complex<S> u = kraus_u(kp);
  const Complex<S> v = kraus_v(kp);
  const S scale = std::max({S(1), std::abs(u), std::abs(v)});
  if (std::abs(u - v) > kClassifyTol<S> * scale) {
    throw std::domain_error(
        "derivative formula requires a W-class pair (4 det(K0 K1) = g^2)");
  }
  const S cap = S(4) * rho_ee * (S(1) - rho_ee);
  constexpr S kBranchMargin = S(1e-6);
  if (!(e0sq > S(0)) || e0sq > cap - kBranchMargin) {
    std::ostringstream msg;
    msg << "e0sq = " << e0sq << " must lie in (0, " << cap - kBranchMargin
        << "]; the derivative is singular at the branch point e0sq = "
           "4 rho_ee (1 - rho_ee) = "
        << cap;
    throw std::domain_error(msg.str());
  }
  const S d_s = sqr(sum_abs_det(kp));
  const S d_i = (which == Party::S) ? d_s : S(1) - d_s;
  const auto [m, n] = detail::g_building_blocks(kp, rho_ee, phi);
  const S g_nn = real_checked<S>(gfun(n, n.adjoint()));
  const S re_mn = gfun(m, n.adjoint()).real();
  return d_i + S(2) * std::abs((kp.k0 * kp.k1).determinant()) + g_nn +
         S(2) * re_mn / std::sqrt(cap - e0sq);
}

/// Complete closed-form account of one evolved state.
template <typename S>
struct EntanglementReport {
  S tau;
  S c2_sp_se, c2_s_spe, c2_e_ssp;
  S c2_sps, c2_spe, c2_se;
  S d_s, d_e, g;
  FamilyLabel family;
  DecisionTier tier;
};

}  // namespace ktangle
