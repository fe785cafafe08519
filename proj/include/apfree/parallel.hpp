// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace apfree {

/// Execution knobs for the enumeration kernels. Results never depend on
/// `threads`; only wall-clock does.
struct Exec {
  unsigned threads = 1;
};

/// Splits [0, n) into `threads` contiguous blocks, runs `body(begin, end)`
/// on each and returns the per-block results in block order.
template <class Result, class Body>
std::vector<Result> parallel_blocks(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  std::vector<Result> results(blocks);
  if (blocks == 1) {
    results[0] = body(std::size_t{0}, n);
    return results;
  }
  std::vector<std::jthread> workers;
  workers.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = n * b / blocks;
    const std::size_t end = n * (b + 1) / blocks;
    workers.emplace_back([&results, &body, b, begin, end] { results[b] = body(begin, end); });
  }
  workers.clear();
  return results;
}

}  // namespace apfree
