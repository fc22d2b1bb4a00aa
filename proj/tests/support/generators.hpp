#pragma once

#include "ctms/interp.hpp"

#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace ctms::testing {

struct Cell {
  long long L, R, Z;
};
// (L, R, Z) in [0..3] x [0..3] x [-3..3], 112 cells
std::vector<Cell> grid();

// random traversal program text over array a (and n for accumulation)
std::string random_program_text(std::mt19937_64& rng);

std::vector<HeapLoc> small_universe();  // six locations
PhysHeap random_heap(std::mt19937_64& rng, const std::vector<HeapLoc>& universe, std::size_t max_cells);
AssertionPtr random_assertion(std::mt19937_64& rng, const std::vector<HeapLoc>& universe, int depth);

}  // namespace ctms::testing
