#pragma once

// Family assignment for the evolved state.  Tier 1 evaluates the Kraus
// criteria: u != v marks the GHZ family; within the W family det K0 = det K1
// = G = 0 marks S-separability, G = e0sq(|det K0|^2 + |det K1|^2 - 1) marks
// E-separability, and 0 < |det K0| + |det K1| < 1 is sufficient for genuine
// W-type entanglement.  When the sufficient condition is inconclusive, tier 2
// computes the bipartition tangles outright.

#include "ktangle/bipartite.hpp"
#include "ktangle/channels.hpp"
#include "ktangle/labels.hpp"
#include "ktangle/oracle.hpp"
#include "ktangle/tangle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ktangle {

template <typename S>
struct Classification {
  FamilyLabel family;
  DecisionTier tier;
  // Raw condition values, reported so near-threshold cases can be audited.
  Complex<S> u, v;
  S u_minus_v_abs;
  S sum_abs_det;
  S g;
  S bisep_s_residual;  // max(|det K0|, |det K1|, |G|)
  S bisep_e_residual;  // |G - e0sq (|det K0|^2 + |det K1|^2 - 1)|
};

template <typename S>
Classification<S> classify(const KrausPair<S>& kp, const InitialReduced<S>& r0,
                           S tol = kClassifyTol<S>) {
  Classification<S> out{};
  out.tier = DecisionTier::KRAUS_CRITERION;
  out.u = kraus_u(kp);
  out.v = kraus_v(kp);
  out.u_minus_v_abs = std::abs(out.u - out.v);
  out.sum_abs_det = sum_abs_det(kp);
  out.g = g_term(kp, r0);

  const S e0 = r0.e0sq();
  const S ad0 = std::abs(kp.k0.determinant());
  const S ad1 = std::abs(kp.k1.determinant());
  out.bisep_s_residual = std::max({ad0, ad1, std::abs(out.g)});
  out.bisep_e_residual =
      std::abs(out.g - e0 * (sqr(ad0) + sqr(ad1) - S(1)));

  if (e0 <= tol) {
    out.family = FamilyLabel::DEGENERATE_E0_ZERO;
    return out;
  }

  // u and v are order-unity; scale the GHZ comparison to protect
  // near-cancellation, keep the biseparability comparisons absolute.
  const S scale = std::max({S(1), std::abs(out.u), std::abs(out.v)});
  if (out.u_minus_v_abs > tol * scale) {
    out.family = FamilyLabel::GHZ;
    return out;
  }
  if (out.bisep_s_residual <= tol) {
    out.family = FamilyLabel::BISEP_S;
    return out;
  }
  if (out.bisep_e_residual <= tol) {
    out.family = FamilyLabel::BISEP_E;
    return out;
  }
  if (out.sum_abs_det > tol && out.sum_abs_det < S(1) - tol) {
    out.family = FamilyLabel::W_GENUINE;
    return out;
  }

  // The sufficient condition is inconclusive: decide from the bipartition
  // tangles themselves.
  out.tier = DecisionTier::DIRECT_COMPUTATION;
  const BipartitionTangles<S> bt = bipartition_tangles(kp, r0);
  if (bt.c2_s_spe <= tol) {
    out.family = FamilyLabel::BISEP_S;
  } else if (bt.c2_e_ssp <= tol) {
    out.family = FamilyLabel::BISEP_E;
  } else {
    out.family = FamilyLabel::W_GENUINE_BY_DIRECT;
  }
  return out;
}

template <typename S>
struct DirectClassification {
  FamilyLabel family;
  DecisionTier tier;  // always DIRECT_COMPUTATION
  S tau;
  S c2_sp_se, c2_s_spe, c2_e_ssp;
};

/// Classification of an arbitrary pure 3-qubit state from the 3-tangle and
/// the three single-qubit reduced determinants.
template <typename S>
DirectClassification<S> classify_direct(const Vec8<S>& state,
                                        S tol = kClassifyTol<S>) {
  DirectClassification<S> out{};
  out.tier = DecisionTier::DIRECT_COMPUTATION;
  out.tau = three_tangle_direct(state);
  out.c2_sp_se = purity_tangle(partial_trace(state, {0}));
  out.c2_s_spe = purity_tangle(partial_trace(state, {1}));
  out.c2_e_ssp = purity_tangle(partial_trace(state, {2}));

  if (out.tau > tol) {
    out.family = FamilyLabel::GHZ;
    return out;
  }
  const bool sp_cut = out.c2_sp_se <= tol;
  const bool s_cut = out.c2_s_spe <= tol;
  const bool e_cut = out.c2_e_ssp <= tol;
  const int cuts = int(sp_cut) + int(s_cut) + int(e_cut);
  if (cuts == 0) {
    out.family = FamilyLabel::W_GENUINE_BY_DIRECT;
  } else if (cuts >= 2) {
    // A pure 3-qubit state with two product cuts is a full product state.
    out.family = FamilyLabel::FULLY_SEPARABLE;
  } else if (sp_cut) {
    out.family = FamilyLabel::BISEP_SP;
  } else if (s_cut) {
    out.family = FamilyLabel::BISEP_S;
  } else {
    out.family = FamilyLabel::BISEP_E;
  }
  return out;
}

/// Closed-form report plus family label; the monogamy identity is verified
/// on the way out.
template <typename S>
EntanglementReport<S> full_report(const KrausPair<S>& kp,
                                  const InitialReduced<S>& r0,
                                  S tol = kClassifyTol<S>) {
  EntanglementReport<S> rep{};
  rep.tau = three_tangle_kraus(kp, r0.e0sq());
  const BipartitionTangles<S> bt = bipartition_tangles(kp, r0);
  rep.c2_sp_se = bt.c2_sp_se;
  rep.c2_s_spe = bt.c2_s_spe;
  rep.c2_e_ssp = bt.c2_e_ssp;
  const PairwiseTangles<S> pt = pairwise_tangles(kp, r0);
  rep.c2_sps = pt.c2_sps;
  rep.c2_spe = pt.c2_spe;
  rep.c2_se = pt.c2_se;
  const auto [d_s, d_e] = ds_de(kp);
  rep.d_s = d_s;
  rep.d_e = d_e;
  rep.g = g_term(kp, r0);
  const Classification<S> cls = classify(kp, r0, tol);
  rep.family = cls.family;
  rep.tier = cls.tier;

  const S ckw_sp = rep.c2_sp_se - rep.c2_sps - rep.c2_spe - rep.tau;
  const S ckw_s = rep.c2_s_spe - rep.c2_sps - rep.c2_se - rep.tau;
  const S ckw_e = rep.c2_e_ssp - rep.c2_spe - rep.c2_se - rep.tau;
  const S worst =
      std::max({std::abs(ckw_sp), std::abs(ckw_s), std::abs(ckw_e)});
  if (worst > S(1e-8)) {
    std::ostringstream msg;
    msg << "monogamy identity violated by " << worst
        << "; closed forms are inconsistent";
    throw std::runtime_error(msg.str());
  }
  return rep;
}

}  // namespace ktangle
