// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "apfree/ground_set.hpp"

namespace apfree {

/// Line-oriented GroundSet text:
///   #ambient interval N=<N>      or   #ambient field q=<q> n=<n>
///   optional further '#' metadata lines
///   one decimal member per line, strictly increasing
struct GroundSetFile {
  GroundSet set = GroundSet::interval(0, {});
  std::vector<std::string> metadata;  // '#' lines after the header, without '#'
};

std::string format_groundset(const GroundSet& set, const std::vector<std::string>& metadata = {});
GroundSetFile parse_groundset(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// "interval:N" (all of [1..N]), "f<q>^<n>:full" (all of F_q^n), or a file path.
struct InputSpec {
  GroundSetFile file;
  bool from_file = false;
  std::string path;
  std::string digest;  // sha256 of the file bytes when from_file
};
InputSpec load_input(const std::string& spec);

std::string sha256_hex(const std::string& bytes);

}  // namespace apfree
