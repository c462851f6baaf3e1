#include "cdbroker/errors.hpp"

namespace cdbroker {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_attribute_set: return "empty_attribute_set";
    case Errc::degenerate_bounds: return "degenerate_bounds";
    case Errc::non_positive_weight: return "non_positive_weight";
    case Errc::weight_sum_violation: return "weight_sum_violation";
    case Errc::non_positive_omega: return "non_positive_omega";
    case Errc::invalid_params: return "invalid_params";
    case Errc::invalid_config: return "invalid_config";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::index_out_of_epoch: return "index_out_of_epoch";
    case Errc::series_length_mismatch: return "series_length_mismatch";
    case Errc::out_of_range_sum: return "out_of_range_sum";
    case Errc::empty_provider_list: return "empty_provider_list";
    case Errc::duplicate_provider: return "duplicate_provider";
    case Errc::unknown_provider: return "unknown_provider";
    case Errc::unknown_class: return "unknown_class";
    case Errc::unqualified_provider: return "unqualified_provider";
    case Errc::empty_roster: return "empty_roster";
    case Errc::empty_list: return "empty_list";
    case Errc::all_zero: return "all_zero";
    case Errc::non_positive_user_grv: return "non_positive_user_grv";
    case Errc::empty_name: return "empty_name";
    case Errc::not_found: return "not_found";
    case Errc::unknown_excluded_provider: return "unknown_excluded_provider";
    case Errc::no_matches: return "no_matches";
    case Errc::malformed_dataset: return "malformed_dataset";
    case Errc::io_failure: return "io_failure";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

void fail(Errc code, const std::string& what) {
  throw Error(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace cdbroker
