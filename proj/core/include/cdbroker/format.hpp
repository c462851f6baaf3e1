#pragma once

#include <string>
#include <vector>

namespace cdbroker {

// Fixed-point decimal formatting. All numeric report fields are printed with
// six decimals, and values stored in report rows are round-tripped through
// the same formatting so that re-reading a report reproduces the summary
// statistics bit for bit.
std::string format_fixed(double value, int digits);
std::string fixed6(double value);

// Value actually represented by fixed6(value).
double round6(double value);

struct SeriesStats {
  std::size_t count = 0;
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation (n - 1); 0 when n < 2
};

SeriesStats series_stats(const std::vector<double>& values);

}  // namespace cdbroker
