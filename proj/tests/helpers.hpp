#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdbroker/errors.hpp"
#include "cdbroker/qos.hpp"
#include "cdbroker/ranking.hpp"

namespace testutil {

// Error code raised by `fn`, or nullopt when it completes.
template <typename Fn>
std::optional<cdbroker::Errc> code_of(Fn&& fn) {
  try {
    fn();
  } catch (const cdbroker::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// m equal-weight big_positive attributes on [0, 100].
cdbroker::AttributeSet flat_set(int m, double omega = 1.0);

// Rank table over (id, grv) pairs; sorted and ranked like production tables.
cdbroker::RankTable table_of(
    std::vector<std::pair<std::string, double>> rows);

// Unique fresh directory under the system temp root.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace testutil
