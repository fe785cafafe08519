// SPDX-License-Identifier: Apache-2.0

#include "apfree/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "apfree/errors.hpp"

namespace apfree {

namespace {

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end) fail(ErrorKind::ParseError, "bad " + what + ": '" + std::string(s) + "'");
  return v;
}

// "key=value" with the expected key.
std::uint64_t parse_field(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=') {
    fail(ErrorKind::ParseError, "expected " + std::string(key) + "=<value>, got '" + std::string(token) + "'");
  }
  return parse_u64(token.substr(key.size() + 1), std::string(key));
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t j = line.find(' ', i);
    const std::size_t e = j == std::string_view::npos ? line.size() : j;
    if (e > i) out.push_back(line.substr(i, e - i));
    i = e;
  }
  return out;
}

Ambient parse_header(std::string_view line) {
  const auto tok = split_spaces(line);
  if (tok.size() == 3 && tok[0] == "#ambient" && tok[1] == "interval") {
    return Interval{parse_field(tok[2], "N")};
  }
  if (tok.size() == 4 && tok[0] == "#ambient" && tok[1] == "field") {
    const auto n = parse_field(tok[3], "n");
    if (n > 64) fail(ErrorKind::ParseError, "dimension too large");
    const auto q = parse_field(tok[2], "q");
    try {
      return FieldSpace::make(q, static_cast<unsigned>(n));
    } catch (const Error& e) {
      fail(ErrorKind::ParseError, std::string("bad field header: ") + e.what());
    }
  }
  fail(ErrorKind::ParseError, "missing or malformed '#ambient' header");
}

}  // namespace

std::string format_groundset(const GroundSet& set, const std::vector<std::string>& metadata) {
  std::string out;
  if (set.is_interval()) {
    out += "#ambient interval N=" + std::to_string(std::get<Interval>(set.ambient()).N) + "\n";
  } else {
    out += "#ambient field q=" + std::to_string(set.space()->q()) + " n=" + std::to_string(set.space()->dim()) + "\n";
  }
  for (const auto& m : metadata) out += "#" + m + "\n";
  out.reserve(out.size() + set.size() * 8);
  for (const auto x : set.members()) {
    out += std::to_string(x);
    out += '\n';
  }
  return out;
}

GroundSetFile parse_groundset(const std::string& text) {
  std::string_view rest(text);
  std::vector<std::string_view> lines;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    if (nl == std::string_view::npos) {
      lines.push_back(rest);
      break;
    }
    lines.push_back(rest.substr(0, nl));
    rest.remove_prefix(nl + 1);
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  if (lines.empty()) fail(ErrorKind::ParseError, "empty GroundSet file");
  const Ambient ambient = parse_header(lines[0]);
  GroundSetFile out;
  std::size_t i = 1;
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == '#'; ++i) {
    out.metadata.emplace_back(lines[i].substr(1));
  }
  std::vector<std::uint64_t> members;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty()) fail(ErrorKind::ParseError, "blank line " + std::to_string(i + 1));
    const auto v = parse_u64(lines[i], "member on line " + std::to_string(i + 1));
    if (!members.empty() && v <= members.back()) {
      fail(ErrorKind::ParseError, "members must be strictly increasing (line " + std::to_string(i + 1) + ")");
    }
    members.push_back(v);
  }
  try {
    out.set = GroundSet(ambient, std::move(members));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) fail(ErrorKind::ParseError, e.what());
    throw;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorKind::InvalidArgument, "write failed for " + path);
}

InputSpec load_input(const std::string& spec) {
  InputSpec in;
  if (spec.rfind("interval:", 0) == 0) {
    in.file.set = GroundSet::full(Interval{parse_u64(std::string_view(spec).substr(9), "interval bound")});
    return in;
  }
  // f<q>^<n>:full
  if (spec.size() > 6 && spec[0] == 'f' && spec.ends_with(":full") && spec.find('^') != std::string::npos) {
    const std::string_view body = std::string_view(spec).substr(1, spec.size() - 6);
    const auto caret = body.find('^');
    const auto q = parse_u64(body.substr(0, caret), "q");
    const auto n = parse_u64(body.substr(caret + 1), "n");
    if (n > 64) fail(ErrorKind::ParseError, "dimension too large");
    in.file.set = GroundSet::full(FieldSpace::make(q, static_cast<unsigned>(n)));
    return in;
  }
  const std::string bytes = read_file(spec);
  in.file = parse_groundset(bytes);
  in.from_file = true;
  in.path = spec;
  in.digest = sha256_hex(bytes);
  return in;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::InvariantViolation, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

}  // namespace apfree
