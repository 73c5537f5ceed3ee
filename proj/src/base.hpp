#pragma once

// Shared primitives: atom identifiers, canonical sorted-set helpers, and the
// error taxonomy used across the library and mapped onto C API status codes.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmknf {

using AtomId = std::uint32_t;

// Pseudo-atom standing for falsum in entailment targets and reports.
inline constexpr AtomId kBotAtom = 0xffffffffu;

// Sorted, duplicate-free vector of atom ids. Every helper below assumes and
// preserves this canonical form, so AtomSet values compare with ==.
using AtomSet = std::vector<AtomId>;

inline void sort_unique(AtomSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const AtomSet& s, AtomId a) {
  return std::binary_search(s.begin(), s.end(), a);
}

inline AtomSet set_union(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline AtomSet set_minus(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline AtomSet set_intersect(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool intersects(const AtomSet& a, const AtomSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j)
      ++i;
    else if (*j < *i)
      ++j;
    else
      return true;
  }
  return false;
}

inline bool is_subset(const AtomSet& a, const AtomSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline AtomSet with_atom(AtomSet s, AtomId a) {
  auto it = std::lower_bound(s.begin(), s.end(), a);
  if (it == s.end() || *it != a) s.insert(it, a);
  return s;
}

inline AtomSet without_atom(AtomSet s, AtomId a) {
  auto it = std::lower_bound(s.begin(), s.end(), a);
  if (it != s.end() && *it == a) s.erase(it);
  return s;
}

enum class ErrorCode {
  Parse,
  Gate,
  InvalidArgument,
  Io,
  Contract,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : Error(ErrorCode::Parse, msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line_(line),
        col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

// A resource gate tripped (exact-graph size, loop count, brute-force vocabulary, ...).
class GateError : public Error {
 public:
  explicit GateError(const std::string& msg) : Error(ErrorCode::Gate, msg) {}
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& msg) : Error(ErrorCode::InvalidArgument, msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorCode::Io, msg) {}
};

// Internal precondition violated; indicates a bug in the caller, not bad input.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(ErrorCode::Contract, msg) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw ContractError(what);
}

}  // namespace hmknf
