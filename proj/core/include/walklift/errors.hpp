#pragma once

// Error taxonomy shared by every walklift module.  Conditions split into two
// families: contract violations (bad arguments, exceeded caps, malformed
// input) and certification failures (a constructed object failed a bound it
// was supposed to satisfy).  The CLI maps the former to exit code 2 and the
// latter to exit code 3.

#include <stdexcept>
#include <string>

namespace walklift {

enum class errc {
  // contract violations
  precondition_violated,
  length_mismatch,
  dimension_too_large,
  index_out_of_range,
  too_large,
  too_many_walks,
  ground_set_too_large,
  not_closed_under_inverse,
  not_power_of_two,
  width_too_small,
  bad_indices,
  bad_residue,
  locality_too_small,
  missing_marginal,
  empty_list,
  degree_too_high,
  search_exhausted,
  bad_alpha,
  infeasible,
  convergence_failure,
  io_failure,
  // certification failures
  bound_violated,
  bias_certification_failed,
  premise_violated,
};

const char* errc_name(errc kind) noexcept;

/// True for conditions meaning "a certified bound did not hold" rather than
/// "the call was invalid".
bool is_certification_failure(errc kind) noexcept;

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& message)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + message),
        kind_(kind) {}

  errc kind() const noexcept { return kind_; }

  /// CLI process exit code: 3 for certification failures, 2 otherwise.
  int exit_code() const noexcept { return is_certification_failure(kind_) ? 3 : 2; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& message) {
  throw error(kind, message);
}

inline void require(bool condition, errc kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace walklift
