#pragma once

namespace ktangle {

// Families of 3-qubit pure states reachable from an entangled S'-S pair under
// a local S-E channel, plus the extra labels the direct classifier can emit
// for arbitrary states.
enum class FamilyLabel {
  GHZ,                  // nonzero 3-tangle
  W_GENUINE,            // no 3-tangle, entangled in all bipartitions (Kraus criterion)
  W_GENUINE_BY_DIRECT,  // same, established by computing the bipartition tangles
  BISEP_S,              // S disentangled from S'+E
  BISEP_E,              // E disentangled from S+S'
  BISEP_SP,             // S' disentangled (direct classifier only)
  FULLY_SEPARABLE,      // no entanglement at all (direct classifier only)
  DEGENERATE_E0_ZERO,   // initial entanglement below tolerance
};

enum class DecisionTier {
  KRAUS_CRITERION,
  DIRECT_COMPUTATION,
};

constexpr const char* to_cstring(FamilyLabel label) {
  switch (label) {
    case FamilyLabel::GHZ: return "GHZ";
    case FamilyLabel::W_GENUINE: return "W_GENUINE";
    case FamilyLabel::W_GENUINE_BY_DIRECT: return "W_GENUINE_BY_DIRECT";
    case FamilyLabel::BISEP_S: return "BISEP_S";
    case FamilyLabel::BISEP_E: return "BISEP_E";
    case FamilyLabel::BISEP_SP: return "BISEP_SP";
    case FamilyLabel::FULLY_SEPARABLE: return "FULLY_SEPARABLE";
    case FamilyLabel::DEGENERATE_E0_ZERO: return "DEGENERATE_E0_ZERO";
  }
  return "?";
}

constexpr const char* to_cstring(DecisionTier tier) {
  switch (tier) {
    case DecisionTier::KRAUS_CRITERION: return "KRAUS_CRITERION";
    case DecisionTier::DIRECT_COMPUTATION: return "DIRECT_COMPUTATION";
  }
  return "?";
}

}  // namespace ktangle
