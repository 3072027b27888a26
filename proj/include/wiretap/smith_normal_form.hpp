#pragma once

#include "wiretap/lattice.hpp"

namespace wiretap {

/// left * input * right == diag(diagonal), with left and right unimodular,
/// every diagonal entry positive and each dividing the next.
struct SmithForm {
  IntMatrix left;
  IntMatrix left_inverse;
  IntMatrix right;
  IntVector diagonal;
};

/// Requires a square nonsingular integer matrix; throws InputError otherwise.
SmithForm smith_normal_form(const IntMatrix& input);

}  // namespace wiretap
