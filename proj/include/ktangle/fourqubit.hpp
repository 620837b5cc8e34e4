#pragma once

// Four-qubit extension: S'-S entangled, S coupled to E and S' coupled to E'
// by independent local channels.  Provides the evolved state, residual
// entanglements, the effective-qubit reduction of a rank-2 block, and the
// numerical correspondences between 4-qubit quantities and the 3-qubit
// closed forms.
//
// Qubit order in the flat index is (S', S, E, E') with S' most significant,
// so a trivial primed channel reduces to the 3-qubit layout with a zero E'
// bit appended.

#include "ktangle/bipartite.hpp"
#include "ktangle/channels.hpp"
#include "ktangle/oracle.hpp"
#include "ktangle/tangle.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ktangle {

inline constexpr int kQubitSPrime = 0;
inline constexpr int kQubitS = 1;
inline constexpr int kQubitE = 2;
inline constexpr int kQubitEPrime = 3;

/// Evolved 4-qubit state: kp acts on (S, E), kp_prime on (S', E'), both
/// environments starting in |0>.
template <typename S>
Vec16<S> evolve4(const KrausPair<S>& kp, const KrausPair<S>& kp_prime,
                 const TwoQubitPure<S>& psi0) {
  const Mat2<S> psi = psi0.coeff_matrix();
  Vec16<S> out = Vec16<S>::Zero();
  for (int n = 0; n < 2; ++n) {          // S' input
    for (int l = 0; l < 2; ++l) {        // S input
      const Complex<S> amp = psi(n, l);
      if (amp == Complex<S>(0)) continue;
      for (int np = 0; np < 2; ++np) {
        for (int mup = 0; mup < 2; ++mup) {
          const Mat2<S>& kprime = (mup == 0) ? kp_prime.k0 : kp_prime.k1;
          for (int s = 0; s < 2; ++s) {
            for (int mu = 0; mu < 2; ++mu) {
              const Mat2<S>& k = (mu == 0) ? kp.k0 : kp.k1;
              out[8 * np + 4 * s + 2 * mu + mup] +=
                  amp * kprime(np, n) * k(s, l);
            }
          }
        }
      }
    }
  }
  return out;
}

/// Residual entanglement R_i = C^2_{i|jkl} - sum_j C^2_{ij}.
template <typename S>
S residual(const Vec16<S>& state, int qubit) {
  if (qubit < 0 || qubit > 3) {
    throw std::invalid_argument("qubit index must be 0..3");
  }
  S r = purity_tangle(partial_trace(state, {qubit}));
  for (int other = 0; other < 4; ++other) {
    if (other == qubit) continue;
    r -= pair_concurrence_sq(state, std::min(qubit, other),
                             std::max(qubit, other));
  }
  if (r < -kNoiseFloor<S>) {
    std::ostringstream msg;
    msg << "residual entanglement " << r << " is negative beyond noise";
    throw std::runtime_error(msg.str());
  }
  return r;
}

/// Rewrites the pure 4-qubit state as a 3-qubit state (i, j, effective qubit)
/// where the effective qubit is the block (k, l), expressed in the 2-dim
/// support basis of its reduced density matrix.  The optional out-parameter
/// receives the third-largest eigenvalue of that matrix (rounding can lift it
/// slightly above zero; beyond the cutoff it signals an upstream bug).
template <typename S>
Vec8<S> effective_three_qubit_state(const Vec16<S>& state,
                                    std::array<int, 2> pair,
                                    std::array<int, 2> block,
                                    S* third_eigenvalue = nullptr) {
  constexpr S kSupportCutoff = S(1e-9);
  const MatX<S> rho_block = partial_trace(state, {block[0], block[1]});
  Eigen::SelfAdjointEigenSolver<MatX<S>> es(rho_block);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue solver failed on block state");
  }
  const S third = es.eigenvalues()[1];  // ascending order
  if (third_eigenvalue != nullptr) *third_eigenvalue = third;
  if (third > kSupportCutoff) {
    std::ostringstream msg;
    msg << "block reduced state has rank > 2 (third eigenvalue " << third
        << "); the global state cannot be pure";
    throw std::runtime_error(msg.str());
  }

  const auto bit = [](int x, int q) { return (x >> (3 - q)) & 1; };
  Mat4<S> coeff;  // rows: (i, j) pair index, cols: (k, l) block index
  for (int x = 0; x < 16; ++x) {
    const int r = 2 * bit(x, pair[0]) + bit(x, pair[1]);
    const int c = 2 * bit(x, block[0]) + bit(x, block[1]);
    coeff(r, c) = state[x];
  }

  Vec8<S> eff;
  for (int r = 0; r < 4; ++r) {
    for (int m = 0; m < 2; ++m) {
      const auto w = es.eigenvectors().col(3 - m);  // two largest eigenvalues
      eff[2 * r + m] = w.dot(coeff.row(r).transpose());  // <w | row>
    }
  }
  // The weight outside the support is bounded by the cutoff; renormalize it
  // away so downstream normalization checks see a unit vector.
  eff /= eff.norm();
  return eff;
}

/// 3-tangle among i, j and the effective qubit (k, l).
template <typename S>
S effective_qubit_tangle(const Vec16<S>& state, std::array<int, 2> pair,
                         std::array<int, 2> block,
                         S* third_eigenvalue = nullptr) {
  return three_tangle_direct(
      effective_three_qubit_state(state, pair, block, third_eigenvalue));
}

/// Residuals of the twelve numerical correspondences between 4-qubit
/// quantities and the 3-qubit closed forms: five density-matrix identities
/// and one effective-qubit 3-tangle identity per side.
template <typename S>
struct CorrespondenceReport {
  // unprimed side: closed forms in (K0, K1, rho0 = Tr_{S'} psi0)
  S s_vs_rest;        // C^2_{S|ES'E'}    vs e0sq D_S + G
  S e_vs_rest;        // C^2_{E|SS'E'}    vs e0sq D_E + G
  S se_pairwise;      // C^2_{SE}         vs closed C^2_{SE}
  S s_block_pairwise; // C^2_{S(S'E')}    vs closed C^2_{S'S}
  S e_block_pairwise; // C^2_{E(S'E')}    vs closed C^2_{S'E}
  S tau_block;        // tau_{SE(S'E')}   vs e0sq |u - v|
  // primed side: closed forms in (K0', K1', rho0' = Tr_S psi0)
  S sp_vs_rest;
  S ep_vs_rest;
  S spep_pairwise;
  S sp_block_pairwise;
  S ep_block_pairwise;
  S tau_block_primed;

  S max_density_residual() const {
    return std::max({s_vs_rest, e_vs_rest, se_pairwise, s_block_pairwise,
                     e_block_pairwise, sp_vs_rest, ep_vs_rest, spep_pairwise,
                     sp_block_pairwise, ep_block_pairwise});
  }
  S max_tau_residual() const { return std::max(tau_block, tau_block_primed); }
};

namespace detail {

template <typename S>
InitialReduced<S> primed_reduced(const TwoQubitPure<S>& psi0) {
  // Reduced state of S' (trace over S).
  Mat2<S> rho;
  rho(0, 0) = std::norm(psi0.delta) + std::norm(psi0.gamma);
  rho(1, 1) = std::norm(psi0.alpha) + std::norm(psi0.beta);
  rho(0, 1) = psi0.delta * std::conj(psi0.beta) +
              psi0.gamma * std::conj(psi0.alpha);
  rho(1, 0) = std::conj(rho(0, 1));
  return InitialReduced<S>::from_density(rho);
}

}  // namespace detail

template <typename S>
CorrespondenceReport<S> correspondence_check(const KrausPair<S>& kp,
                                             const KrausPair<S>& kp_prime,
                                             const TwoQubitPure<S>& psi0) {
  const Vec16<S> state = evolve4(kp, kp_prime, psi0);
  CorrespondenceReport<S> rep{};

  const auto one_side = [&state](const KrausPair<S>& pair,
                                 const InitialReduced<S>& r0, int sys, int env,
                                 std::array<int, 2> block, S& vs_rest_sys,
                                 S& vs_rest_env, S& pairwise, S& block_sys,
                                 S& block_env, S& tau_res) {
    const BipartitionTangles<S> bt = bipartition_tangles(pair, r0);
    const PairwiseTangles<S> pt = pairwise_tangles(pair, r0);

    vs_rest_sys =
        std::abs(purity_tangle(partial_trace(state, {sys})) - bt.c2_s_spe);
    vs_rest_env =
        std::abs(purity_tangle(partial_trace(state, {env})) - bt.c2_e_ssp);
    pairwise = std::abs(
        pair_concurrence_sq(state, std::min(sys, env), std::max(sys, env)) -
        pt.c2_se);

    const Vec8<S> eff = effective_three_qubit_state(state, {sys, env}, block);
    // In the effective state the qubit order is (sys, env, block).
    block_sys = std::abs(pair_concurrence_sq(eff, 0, 2) - pt.c2_sps);
    block_env = std::abs(pair_concurrence_sq(eff, 1, 2) - pt.c2_spe);
    tau_res = std::abs(three_tangle_direct(eff) -
                       three_tangle_kraus(pair, r0.e0sq()));
  };

  const InitialReduced<S> r0 = reduced_from_state(psi0);
  one_side(kp, r0, kQubitS, kQubitE, {kQubitSPrime, kQubitEPrime},
           rep.s_vs_rest, rep.e_vs_rest, rep.se_pairwise, rep.s_block_pairwise,
           rep.e_block_pairwise, rep.tau_block);

  const InitialReduced<S> r0p = detail::primed_reduced(psi0);
  one_side(kp_prime, r0p, kQubitSPrime, kQubitEPrime, {kQubitS, kQubitE},
           rep.sp_vs_rest, rep.ep_vs_rest, rep.spep_pairwise,
           rep.sp_block_pairwise, rep.ep_block_pairwise, rep.tau_block_primed);
  return rep;
}

/// Which multipartite guarantee the two channels provide jointly.
template <typename S>
struct GenuineConditions {
  Complex<S> u, v, u_prime, v_prime;
  S sum_abs_det, sum_abs_det_prime;
  bool ghz_side, ghz_side_prime;  // u != v
  bool w_side, w_side_prime;      // u = v and 0 < |det K0|+|det K1| < 1
  bool ghz_pair;  // both sides GHZ: every residual R_i is positive
  bool w_pair;    // both sides W-genuine: entangled in all bipartitions
};

template <typename S>
GenuineConditions<S> genuine_conditions(const KrausPair<S>& kp,
                                        const KrausPair<S>& kp_prime,
                                        S tol = kClassifyTol<S>) {
  GenuineConditions<S> out{};
  out.u = kraus_u(kp);
  out.v = kraus_v(kp);
  out.u_prime = kraus_u(kp_prime);
  out.v_prime = kraus_v(kp_prime);
  out.sum_abs_det = sum_abs_det(kp);
  out.sum_abs_det_prime = sum_abs_det(kp_prime);

  const auto ghz = [tol](Complex<S> u, Complex<S> v) {
    const S scale = std::max({S(1), std::abs(u), std::abs(v)});
    return std::abs(u - v) > tol * scale;
  };
  out.ghz_side = ghz(out.u, out.v);
  out.ghz_side_prime = ghz(out.u_prime, out.v_prime);
  out.w_side = !out.ghz_side && out.sum_abs_det > tol &&
               out.sum_abs_det < S(1) - tol;
  out.w_side_prime = !out.ghz_side_prime && out.sum_abs_det_prime > tol &&
                     out.sum_abs_det_prime < S(1) - tol;
  out.ghz_pair = out.ghz_side && out.ghz_side_prime;
  out.w_pair = out.w_side && out.w_side_prime;
  return out;
}

}  // namespace ktangle
