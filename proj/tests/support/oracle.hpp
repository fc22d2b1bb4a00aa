#pragma once

#include <string>
#include <vector>

namespace ctms::testing {

// frozen table from tests/data/make_grid_oracle.py
struct GridRow {
  std::string family;
  long long L, R, Z;
  std::string table;  // 'S' or 'U' per size 0..30
  long long least_unsafe;  // -1 when safe everywhere
  long long bad_index;
};

std::vector<GridRow> load_grid_oracle();
const GridRow& grid_row(const std::string& family, long long L, long long R, long long Z);

}  // namespace ctms::testing
