#pragma once

#include <string>

#include "icis/poly.hpp"

namespace icis {

struct ParseError : Error {
  size_t position;
  ParseError(std::string msg, size_t pos)
      : Error(std::move(msg) + " at offset " + std::to_string(pos)),
        position(pos) {}
};
struct WrongVariableCount : Error {
  using Error::Error;
};

/// Parses the expression grammar shared with the CLI: variables x, y (aliases
/// x1..x8), integer literals, operators + - * ^, explicit * between factors,
/// insignificant whitespace.
Poly parse_poly(const std::string& text, Field f, int nvars,
                int prec = kExact);

/// Components separated by ';'.  nvars = 0 infers the count from the number
/// of components (square germs).
MapGerm parse_germ(const std::string& text, Field f, int nvars = 0,
                   int prec = kExact);

}  // namespace icis
