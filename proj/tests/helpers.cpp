#include "helpers.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <filesystem>

namespace testutil {

cdbroker::AttributeSet flat_set(int m, double omega) {
  cdbroker::AttributeSet set;
  set.omega = omega;
  for (int j = 0; j < m; ++j) {
    set.specs.push_back({"a" + std::to_string(j),
                         cdbroker::Polarity::big_positive, 0.0, 100.0, 1.0});
  }
  return set;
}

cdbroker::RankTable table_of(
    std::vector<std::pair<std::string, double>> rows) {
  cdbroker::RankTable t;
  for (auto& [id, grv] : rows) {
    cdbroker::ProviderRecord rec;
    rec.id = id;
    rec.gateway = "gw:" + id;
    rec.grv = grv;
    t.entries.push_back(std::move(rec));
  }
  std::sort(t.entries.begin(), t.entries.end(),
            [](const auto& a, const auto& b) {
              if (a.grv != b.grv) return a.grv > b.grv;
              return a.id < b.id;
            });
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    t.entries[i].rank = static_cast<int>(i + 1);
  }
  return t;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("cdbroker_test_" + tag + "_" +
                    std::to_string(counter.fetch_add(1)) + "_" +
                    std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
