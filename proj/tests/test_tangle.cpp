#include "ktangle/tangle.hpp"

#include "ktangle/bipartite.hpp"
#include "ktangle/oracle.hpp"
#include "random_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace ktangle;

namespace {

Vec8cd ghz3() {
  Vec8cd s = Vec8cd::Zero();
  s[0] = s[7] = 1.0 / std::sqrt(2.0);
  return s;
}

Vec8cd w3() {
  Vec8cd s = Vec8cd::Zero();
  s[1] = s[2] = s[4] = 1.0 / std::sqrt(3.0);
  return s;
}

}  // namespace

TEST_SUITE("tangle") {

TEST_CASE("canonical states") {
  CHECK(three_tangle_direct(ghz3()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(three_tangle_direct(w3()) == doctest::Approx(0.0).epsilon(1e-14));
  Vec8cd product = Vec8cd::Zero();
  product[0] = 1.0;
  CHECK(three_tangle_direct(product) == 0.0);
  CHECK_THROWS_AS(three_tangle_direct(Vec8cd(2.0 * ghz3())),
                  std::invalid_argument);
}

TEST_CASE("simplified form on fixed inputs") {
  const auto [c0, c1] = evolved_coeffs(dephasing_channel(1.0), bell_state());
  CHECK(three_tangle_simplified(c0, c1) ==
        doctest::Approx(1.0).epsilon(1e-14));

  Mat2cd lone = Mat2cd::Zero();  // C1 = 0: no 3-tangle possible
  lone(0, 0) = std::sqrt(0.5);
  lone(1, 0) = std::sqrt(0.5);
  CHECK(three_tangle_simplified(lone, Mat2cd(Mat2cd::Zero())) == 0.0);
}

TEST_CASE("the three routes agree on random instances") {
  std::mt19937_64 rng(31);
  double worst_simpl = 0.0;
  double worst_kraus = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto kp = ktest::random_kraus_pair(rng);
    const auto psi = random_two_qubit_pure(rng);
    const double direct = three_tangle_direct(evolve3(kp, psi));
    const auto [c0, c1] = evolved_coeffs(kp, psi);
    const double simplified = three_tangle_simplified(c0, c1);
    const double closed =
        three_tangle_kraus(kp, reduced_from_state(psi).e0sq());
    worst_simpl = std::max(worst_simpl, std::abs(direct - simplified));
    worst_kraus = std::max(worst_kraus, std::abs(direct - closed));
  }
  CHECK(worst_simpl < 1e-9);
  CHECK(worst_kraus < 1e-9);
}

TEST_CASE("invariant under local unitaries on any qubit") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const Vec8cd state = random_state_vector<8>(rng);
    const double tau = three_tangle_direct(state);
    for (int qubit = 0; qubit < 3; ++qubit) {
      const Mat2cd u = ktest::random_unitary2(rng);
      const int stride = 1 << (2 - qubit);
      Vec8cd rotated = Vec8cd::Zero();
      for (int x = 0; x < 8; ++x) {
        const int bit = (x / stride) & 1;
        const int base = x & ~stride;
        for (int b = 0; b < 2; ++b) {
          rotated[x] += u(bit, b) * state[base | (b * stride)];
        }
      }
      CHECK(std::abs(three_tangle_direct(rotated) - tau) < 1e-9);
    }
  }
}

TEST_CASE("closed form is exactly linear in the initial entanglement") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    const auto kp = ktest::random_kraus_pair(rng);
    const double full = three_tangle_kraus(kp, 1.0);
    for (double x : {0.0, 0.125, 0.4, 0.75, 1.0}) {
      CHECK(std::abs(three_tangle_kraus(kp, x) - x * full) < 1e-15);
    }
  }
  CHECK_THROWS_AS(three_tangle_kraus(KrausPair<double>(), -0.1),
                  std::invalid_argument);
}

TEST_CASE("closed form reproduces the published channel curves") {
  CHECK(three_tangle_kraus(dephasing_channel(1.0), 0.4) ==
        doctest::Approx(0.4).epsilon(1e-14));
  CHECK(three_tangle_kraus(phase_flip_channel(1.0), 0.4) ==
        doctest::Approx(0.4).epsilon(1e-14));
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double p = unif(rng);
    const double e0 = unif(rng);
    CHECK(std::abs(three_tangle_kraus(ad_channel(p), e0)) == 0.0);
    CHECK(std::abs(three_tangle_kraus(dephasing_channel(p), e0) - e0 * p) <
          1e-14);
    CHECK(std::abs(three_tangle_kraus(phase_flip_channel(p), e0) -
                   e0 * p * (2.0 - p)) < 1e-13);
  }
}

TEST_CASE("direct form is invariant under qubit permutations") {
  std::mt19937_64 rng(35);
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < 200; ++i) {
    const Vec8cd state = random_state_vector<8>(rng);
    const double tau = three_tangle_direct(state);
    for (const auto& perm : perms) {
      Vec8cd shuffled;
      for (int x = 0; x < 8; ++x) {
        const int bits[3] = {(x >> 2) & 1, (x >> 1) & 1, x & 1};
        shuffled[4 * bits[perm[0]] + 2 * bits[perm[1]] + bits[perm[2]]] =
            state[x];
      }
      CHECK(std::abs(three_tangle_direct(shuffled) - tau) < 1e-12);
    }
  }
}

}  // TEST_SUITE
