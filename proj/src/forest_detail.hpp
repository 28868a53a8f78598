#pragma once

// Shared pieces between the OpenMP forest kernels and the serial reference
// implementation. Keeping the bootstrap draw and the per-leaf weight
// arithmetic in one place guarantees both paths produce the same numbers.

#include <cstddef>
#include <span>
#include <vector>

#include "albama/rng.hpp"
#include "albama/tree.hpp"

namespace albama::detail {

inline TrainingSample make_sample(SplitMix64& gen, std::size_t n,
                                  bool bootstrap) {
  TrainingSample sample;
  sample.indices.resize(n);
  if (bootstrap) {
    for (std::size_t i = 0; i < n; ++i)
      sample.indices[i] = static_cast<int>(gen.next_index(n));
  } else {
    for (std::size_t i = 0; i < n; ++i) sample.indices[i] = static_cast<int>(i);
  }
  return sample;
}

// Adds one tree's leaf contribution to a weight row: count/|leaf| per
// distinct member, multiplicity counted on both sides. `members` is sorted,
// so equal indices form runs.
inline void add_leaf_weights(std::span<const int> members,
                             std::span<double> row) {
  const double size = static_cast<double>(members.size());
  std::size_t i = 0;
  while (i < members.size()) {
    std::size_t j = i;
    while (j < members.size() && members[j] == members[i]) ++j;
    row[static_cast<std::size_t>(members[i])] +=
        static_cast<double>(j - i) / size;
    i = j;
  }
}

}  // namespace albama::detail
