#include "ktangle/classify.hpp"

#include "ktangle/oracle.hpp"
#include "random_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ktangle;

namespace {

// Collapse the two W-genuine labels for cross-tier comparisons.
bool same_family(FamilyLabel a, FamilyLabel b) {
  const auto canon = [](FamilyLabel x) {
    return x == FamilyLabel::W_GENUINE_BY_DIRECT ? FamilyLabel::W_GENUINE : x;
  };
  return canon(a) == canon(b);
}

InitialReduced<double> random_entangled_reduced(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rho(0.15, 0.85);
  std::uniform_real_distribution<double> frac(0.3, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  const double ee = rho(rng);
  return InitialReduced<double>::from_entanglement(
      ee, ang(rng), frac(rng) * 4.0 * ee * (1.0 - ee));
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("built-in channel families") {
  const auto r0 = InitialReduced<double>::from_entanglement(0.5, 0.0, 0.4);
  for (double p : {0.1, 0.4, 0.9}) {
    CHECK(classify(ad_channel(p), r0).family == FamilyLabel::W_GENUINE);
    CHECK(classify(dephasing_channel(p), r0).family == FamilyLabel::GHZ);
    CHECK(classify(phase_flip_channel(p), r0).family == FamilyLabel::GHZ);
  }
  CHECK(classify(ad_channel(0.0), r0).family == FamilyLabel::BISEP_E);
  const auto full = classify(ad_channel(1.0), r0);
  CHECK(full.family == FamilyLabel::BISEP_S);
  CHECK(bipartition_tangles(ad_channel(1.0), r0).c2_e_ssp ==
        doctest::Approx(0.4).epsilon(1e-14));

  const auto degenerate =
      classify(ad_channel(0.5),
               InitialReduced<double>::from_entanglement(0.5, 0.0, 0.0));
  CHECK(degenerate.family == FamilyLabel::DEGENERATE_E0_ZERO);
}

TEST_CASE("classification reports the raw condition values") {
  const auto r0 = InitialReduced<double>::from_entanglement(0.5, 0.0, 0.4);
  const auto cls = classify(dephasing_channel(0.49), r0);
  CHECK(cls.tier == DecisionTier::KRAUS_CRITERION);
  CHECK(std::abs(cls.v - std::complex<double>(0.49)) < 1e-14);
  CHECK(cls.u_minus_v_abs == doctest::Approx(0.49).epsilon(1e-13));
  CHECK(cls.g == doctest::Approx(g_term(dephasing_channel(0.49), r0))
                     .epsilon(1e-14));
}

TEST_CASE("direct classification of canonical states") {
  Vec8cd ghz = Vec8cd::Zero();
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  CHECK(classify_direct(ghz).family == FamilyLabel::GHZ);

  Vec8cd w = Vec8cd::Zero();
  w[1] = w[2] = w[4] = 1.0 / std::sqrt(3.0);
  const auto w_cls = classify_direct(w);
  CHECK(w_cls.family == FamilyLabel::W_GENUINE_BY_DIRECT);
  CHECK(w_cls.tier == DecisionTier::DIRECT_COMPUTATION);

  Vec8cd product = Vec8cd::Zero();
  product[3] = 1.0;
  CHECK(classify_direct(product).family == FamilyLabel::FULLY_SEPARABLE);

  // |0>_S (alpha |00> + delta |11>)_{S'E}: S separable, S'-E entangled.
  Vec8cd bisep = Vec8cd::Zero();
  bisep[0] = std::sqrt(0.4);   // |0 0 0>
  bisep[5] = std::sqrt(0.6);   // |1 0 1>
  const auto bisep_cls = classify_direct(bisep);
  CHECK(bisep_cls.family == FamilyLabel::BISEP_S);
  CHECK(bisep_cls.c2_s_spe == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bisep_cls.c2_sp_se == doctest::Approx(4.0 * 0.4 * 0.6).epsilon(1e-13));
}

TEST_CASE("kraus and direct classifiers agree") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    KrausPair<double> kp;
    switch (i % 5) {
      case 0: kp = ktest::random_kraus_pair(rng); break;
      case 1: kp = ktest::random_w_class_pair(rng); break;
      case 2: kp = ktest::random_ghz_class_pair(rng); break;
      case 3: kp = ad_channel(unif(rng)); break;
      case 4: kp = dephasing_channel(unif(rng)); break;
    }
    TwoQubitPure<double> psi = random_two_qubit_pure(rng);
    while (reduced_from_state(psi).e0sq() < 0.1) {
      psi = random_two_qubit_pure(rng);
    }
    const auto r0 = reduced_from_state(psi);
    const auto kraus_cls = classify(kp, r0);
    if (kraus_cls.tier != DecisionTier::KRAUS_CRITERION) continue;
    const auto direct_cls = classify_direct(evolve3(kp, psi));
    CHECK(same_family(kraus_cls.family, direct_cls.family));
    ++checked;
  }
  CHECK(checked > 9000);
}

TEST_CASE("labels survive a basis change of S") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    KrausPair<double> kp;
    switch (i % 3) {
      case 0: kp = ad_channel(unif(rng)); break;
      case 1: kp = ktest::random_ghz_class_pair(rng); break;
      case 2: kp = ktest::random_kraus_pair(rng); break;
    }
    const auto r0 = random_entangled_reduced(rng);
    const Mat2cd u = ktest::random_unitary2(rng);
    const KrausPair<double> conjugated(u.adjoint() * kp.k0 * u,
                                       u.adjoint() * kp.k1 * u);
    const auto rotated = InitialReduced<double>::from_density(
        Mat2cd(u.adjoint() * r0.density() * u));
    CHECK(classify(kp, r0).family == classify(conjugated, rotated).family);
  }
}

TEST_CASE("GHZ membership ignores the initial state") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 300; ++i) {
    const auto kp = (i % 2 == 0) ? ktest::random_ghz_class_pair(rng)
                                 : ktest::random_w_class_pair(rng);
    const auto a = classify(kp, random_entangled_reduced(rng));
    const auto b = classify(kp, random_entangled_reduced(rng));
    CHECK((a.family == FamilyLabel::GHZ) == (b.family == FamilyLabel::GHZ));
  }
}

TEST_CASE("GHZ membership survives one-sided unitary dressing") {
  std::mt19937_64 rng(74);
  const auto r0 = InitialReduced<double>::from_entanglement(0.4, 0.5, 0.5);
  for (int i = 0; i < 100; ++i) {
    const auto kp = (i % 2 == 0) ? ktest::random_ghz_class_pair(rng)
                                 : ktest::random_w_class_pair(rng);
    const bool ghz = classify(kp, r0).family == FamilyLabel::GHZ;
    const Mat2cd v = ktest::random_unitary2(rng);
    const Mat2cd w = ktest::random_unitary2(rng);
    const KrausPair<double> dressed(v * kp.k0 * w, v * kp.k1 * w);
    CHECK((classify(dressed, r0).family == FamilyLabel::GHZ) == ghz);
  }
}

TEST_CASE("full report carries the family and satisfies monogamy") {
  const auto r0 = InitialReduced<double>::from_entanglement(0.5, 0.0, 0.4);
  const auto rep = full_report(ad_channel(0.5), r0);
  CHECK(rep.family == FamilyLabel::W_GENUINE);
  CHECK(rep.tau == 0.0);
  CHECK(rep.c2_sps == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(rep.c2_se == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(rep.d_s == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rep.d_e == doctest::Approx(0.5).epsilon(1e-14));
}

}  // TEST_SUITE
