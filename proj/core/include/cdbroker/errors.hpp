#pragma once

#include <stdexcept>
#include <string>

namespace cdbroker {

// Failure categories raised by the library. Kept as one enum so callers (in
// particular the CLI) can map failures onto exit codes without matching on
// message text.
enum class Errc {
  // configuration problems
  empty_attribute_set,
  degenerate_bounds,
  non_positive_weight,
  weight_sum_violation,
  non_positive_omega,
  invalid_params,
  invalid_config,

  // merit / rank-value computation
  length_mismatch,
  index_out_of_epoch,
  series_length_mismatch,
  out_of_range_sum,

  // rank table maintenance
  empty_provider_list,
  duplicate_provider,
  unknown_provider,

  // provider selection
  unknown_class,
  unqualified_provider,
  empty_roster,
  empty_list,
  all_zero,
  non_positive_user_grv,

  // content index
  empty_name,
  not_found,
  unknown_excluded_provider,

  // dataset ingestion / external files
  no_matches,
  malformed_dataset,
  io_failure,

  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

// Non-throwing validation verdict; `code`/`detail` describe the first
// violated rule when `ok` is false.
struct ValidationResult {
  bool ok = true;
  Errc code = Errc::internal;
  std::string detail;

  explicit operator bool() const { return ok; }
  static ValidationResult good() { return {}; }
  static ValidationResult bad(Errc code, std::string detail) {
    return {false, code, std::move(detail)};
  }
};

}  // namespace cdbroker
