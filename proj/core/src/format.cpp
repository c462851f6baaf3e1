#include "cdbroker/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cdbroker {

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s = buf;
  // Canonicalize "-0.000000" and friends: a sign on an all-zero number is
  // noise and makes byte comparisons brittle.
  if (s.size() > 1 && s[0] == '-' &&
      s.find_first_not_of("0.", 1) == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

std::string fixed6(double value) { return format_fixed(value, 6); }

double round6(double value) {
  return std::strtod(fixed6(value).c_str(), nullptr);
}

SeriesStats series_stats(const std::vector<double>& values) {
  SeriesStats st;
  st.count = values.size();
  if (values.empty()) return st;
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return st;
  double sq = 0.0;
  for (double v : values) sq += (v - st.mean) * (v - st.mean);
  st.stdev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return st;
}

}  // namespace cdbroker
