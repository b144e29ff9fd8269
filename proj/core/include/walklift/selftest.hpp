#pragma once

// The acceptance checklist: one self-contained criterion per guarantee the
// library ships (spectral bounds, tensor structure, parity sampling, cascade
// equivalence, decoding, parameter certificates, derandomized rounding).
// Each criterion builds its own deterministic desk instances, so a run is
// reproducible bit-for-bit; heavyweight shared fixtures are memoized across
// criteria within one process.

#include <string>
#include <vector>

namespace walklift {

struct criterion_result {
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;  // compact measured-vs-bound metrics, or the error text
};

/// Runs every acceptance criterion whose name contains `filter` (all when
/// empty), in fixed order.  Exceptions inside a criterion are caught and
/// reported as failures; the runner itself does not throw.
std::vector<criterion_result> run_acceptance_criteria(const std::string& filter = "");

/// "PASS  3.21s  spectral-zigzag-bound  22 instances ..." (fixed-width verdict).
std::string format_criterion_line(const criterion_result& r);

}  // namespace walklift
