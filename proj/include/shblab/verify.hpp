#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shblab {

struct SuiteResult {
  std::string name;
  std::int64_t checked = 0;   // non-vacuous checks performed
  std::int64_t vacuous = 0;   // samples whose hypothesis did not apply
  std::int64_t failures = 0;
  std::vector<std::string> notes;  // first few failure descriptions
  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::int64_t samples = 1000;
  std::uint64_t seed = 12345;
  int jobs = 1;
};

// Deterministic randomized property suites over the core numerics. Each
// returns counts, never throws on property failure.
SuiteResult verify_spectral(const VerifyOptions& opt);            // eigenstructure laws
SuiteResult verify_frobenius(const VerifyOptions& opt);           // power-norm envelopes
SuiteResult verify_stage_decomposition(const VerifyOptions& opt); // a_s / b_s laws
SuiteResult verify_sandwich(const VerifyOptions& opt);            // exact risk <= ceiling
SuiteResult verify_oracle_equivalence(const VerifyOptions& opt);  // sampler vs exact

std::vector<SuiteResult> verify_all(const VerifyOptions& opt);

}  // namespace shblab
