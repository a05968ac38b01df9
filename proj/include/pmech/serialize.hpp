#pragma once

#include <iosfwd>
#include <string>

#include "pmech/pgfun.hpp"

namespace pmech {

// Plain-text PGFun format, one term per line:
//
//   pgfun <dim> <nterms>
//   <coeff re> <coeff im> | <e_1 ... e_m> | <A row-major re im ...> | <b re im ...> | <c re im>
//
// Floats are written with 17 significant digits so a write/read round trip is
// bit-stable. Lines starting with '#' are ignored.
std::string pgfun_to_text(const PGFun& f);
PGFun pgfun_from_text(const std::string& text);

void pgfun_save(const PGFun& f, const std::string& path);
PGFun pgfun_load(const std::string& path);

// 17-significant-digit float formatting shared with the CSV writers.
std::string format_double(double v);

}  // namespace pmech
