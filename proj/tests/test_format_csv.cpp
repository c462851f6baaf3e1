#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cdbroker/csv.hpp"
#include "cdbroker/format.hpp"
#include "helpers.hpp"

using namespace cdbroker;
using testutil::code_of;

TEST_CASE("fixed6 prints six decimals") {
  CHECK(fixed6(1.0) == "1.000000");
  CHECK(fixed6(0.5594) == "0.559400");
  CHECK(fixed6(-1.25) == "-1.250000");
  CHECK(fixed6(72.2891239) == "72.289124");
}

TEST_CASE("fixed6 never emits a signed zero") {
  CHECK(fixed6(-0.0) == "0.000000");
  CHECK(fixed6(-1e-9) == "0.000000");
  CHECK(fixed6(-0.0000004) == "0.000000");
}

TEST_CASE("round6 is exactly the value fixed6 prints") {
  for (double v : {0.1234565, 72.2891234, -3.0000004, 1e-7, 39.81}) {
    CHECK(fixed6(round6(v)) == fixed6(v));
    CHECK(round6(round6(v)) == round6(v));  // idempotent
  }
}

TEST_CASE("series_stats uses the sample standard deviation") {
  const SeriesStats st =
      series_stats({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  CHECK(st.count == 8);
  CHECK(st.mean == doctest::Approx(5.0));
  CHECK(st.stdev == doctest::Approx(std::sqrt(32.0 / 7.0)));
}

TEST_CASE("series_stats handles short series") {
  CHECK(series_stats({}).count == 0);
  CHECK(series_stats({}).mean == 0.0);
  CHECK(series_stats({}).stdev == 0.0);
  const SeriesStats one = series_stats({3.5});
  CHECK(one.mean == 3.5);
  CHECK(one.stdev == 0.0);
}

TEST_CASE("csv fields with commas and quotes round-trip") {
  std::ostringstream os;
  csv::write_row(os, {"a", "b,c", "d\"e", ""});
  CHECK(os.str() == "a,\"b,c\",\"d\"\"e\",\n");

  const auto row = csv::parse_line("a,\"b,c\",\"d\"\"e\",");
  REQUIRE(row.size() == 4);
  CHECK(row[0] == "a");
  CHECK(row[1] == "b,c");
  CHECK(row[2] == "d\"e");
  CHECK(row[3].empty());
}

TEST_CASE("csv reader skips blank lines and strips CR") {
  std::istringstream is("a,b\r\n\nc,d\n");
  const auto rows = csv::read_all(is);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b"});
  CHECK(rows[1] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("unterminated quotes are rejected") {
  CHECK(code_of([] { csv::parse_line("\"abc"); }) == Errc::malformed_dataset);
}
