#pragma once

#include <string>

#include "histat/errors.hpp"

namespace histat {

enum class Tail { GE, LE, TWO_SIDED };

inline const char* to_string(Tail t) {
  switch (t) {
    case Tail::GE: return "ge";
    case Tail::LE: return "le";
    case Tail::TWO_SIDED: return "two-sided";
  }
  return "?";
}

inline Tail parse_tail(const std::string& s) {
  if (s == "ge" || s == "GE") return Tail::GE;
  if (s == "le" || s == "LE") return Tail::LE;
  if (s == "two-sided" || s == "two_sided") return Tail::TWO_SIDED;
  throw DomainError("unknown tail: " + s);
}

}  // namespace histat
