#include "oracle.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ctms::testing {

std::vector<GridRow> load_grid_oracle() {
  std::ifstream in(std::string(CTMS_TEST_DATA) + "/data/grid_oracle.tsv");
  if (!in) throw std::runtime_error("grid_oracle.tsv not found");
  std::vector<GridRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    GridRow r;
    std::string idx;
    ss >> r.family >> r.L >> r.R >> r.Z >> r.table >> r.least_unsafe >> idx;
    r.bad_index = idx == "-" ? 0 : std::stoll(idx);
    rows.push_back(r);
  }
  return rows;
}

const GridRow& grid_row(const std::string& family, long long L, long long R, long long Z) {
  static const std::vector<GridRow> rows = load_grid_oracle();
  for (const auto& r : rows)
    if (r.family == family && r.L == L && r.R == R && r.Z == Z) return r;
  throw std::runtime_error("no oracle row");
}

}  // namespace ctms::testing
