#ifndef RWB_DSL_HPP
#define RWB_DSL_HPP

// The s-expression surface syntax for set expressions: interval atoms,
// boolean combinations, and the named generator catalog, with a printer
// whose output reparses to an equal tree.

#include <stdexcept>
#include <string>

#include "rwb/setexpr.hpp"

namespace rwb {

// All parse diagnostics carry a 1-based position in the input text.
struct DslError : std::runtime_error {
  size_t line = 1, col = 1;
  DslError(const std::string& m, size_t ln, size_t co)
      : std::runtime_error(std::to_string(ln) + ":" + std::to_string(co) + ": " + m),
        line(ln),
        col(co) {}
};
// Malformed tokens or structure.
struct SyntaxError : DslError {
  using DslError::DslError;
};
// A known form with the wrong number of arguments.
struct ArityError : DslError {
  using DslError::DslError;
};
// Well-formed syntax denoting an illegal value (lo > hi, closed flag on
// an infinite endpoint, an open degenerate interval).
struct DomainError : DslError {
  using DslError::DslError;
};

// Grammar, one expression per input:
//   (iv <lo> <hi> open|closed open|closed)   endpoints: scalars or inf/-inf
//   (union e ...) (inter e ...) (compl e) (join e ...)
//   (q) (q2) (cantor) (min-compact) (min-fsigma)
//   (cantor-pre <p/q>)
//   (fam34 <pattern>) (fam35 <pattern>) (anticomplete <pattern>)
// Scalars are single tokens like 3, -1/2, 1/2+1/3*sqrt2; patterns are
// single tokens like {0,3} or {1}+tail(4).
SetExpr dsl_parse(const std::string& text);

std::string dsl_print(const SetExpr& e);

}  // namespace rwb

#endif
