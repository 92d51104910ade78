#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcbound/teich.hpp"

namespace mcb {

struct SuiteResult {
  std::string name;
  size_t checked = 0;
  size_t failed = 0;
  std::string counterexample;  // first failure, smallest-first generation
};

// Seeded invariant suites covering the module properties: pairing adjoint,
// homogeneity, classification symmetries, eigen certificates, canonical-form
// idempotence, metric axioms, properness, rescaling invariance, witness
// t_n -> 0, twist residuals, adjoint/anti-homomorphism laws, degenerate
// composition, the Moebius length convention, systole invariance, the Psi
// extension and degeneracy, ray base-point invariance, word round-trips.
// `filter` selects suites whose name contains it; deterministic per seed.
std::vector<SuiteResult> run_property_suites(std::uint64_t seed, size_t iterations, SurfaceKind s,
                                             const std::string& filter = "");

}  // namespace mcb
