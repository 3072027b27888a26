#include "wiretap/smith_normal_form.hpp"

#include "wiretap/errors.hpp"

#include <cstdlib>

namespace wiretap {

namespace {

// Elementary operations applied to the working matrix, mirrored on the
// transforms so that left * input * right stays equal to the working matrix.
struct Reduction {
  IntMatrix a;
  IntMatrix left;
  IntMatrix left_inverse;
  IntMatrix right;

  void swap_rows(Eigen::Index i, Eigen::Index j) {
    a.row(i).swap(a.row(j));
    left.row(i).swap(left.row(j));
    left_inverse.col(i).swap(left_inverse.col(j));
  }
  void swap_cols(Eigen::Index i, Eigen::Index j) {
    a.col(i).swap(a.col(j));
    right.col(i).swap(right.col(j));
  }
  // row_i += k * row_j
  void add_row(Eigen::Index i, Eigen::Index j, std::int64_t k) {
    a.row(i) += k * a.row(j);
    left.row(i) += k * left.row(j);
    left_inverse.col(j) -= k * left_inverse.col(i);
  }
  // col_i += k * col_j
  void add_col(Eigen::Index i, Eigen::Index j, std::int64_t k) {
    a.col(i) += k * a.col(j);
    right.col(i) += k * right.col(j);
  }
  void negate_row(Eigen::Index i) {
    a.row(i) *= -1;
    left.row(i) *= -1;
    left_inverse.col(i) *= -1;
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input) {
  const Eigen::Index s = input.rows();
  if (s == 0 || input.cols() != s) throw InputError("Smith form needs a square matrix");
  Reduction r{input, IntMatrix::Identity(s, s), IntMatrix::Identity(s, s),
              IntMatrix::Identity(s, s)};

  for (Eigen::Index t = 0; t < s; ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      Eigen::Index pi = -1, pj = -1;
      for (Eigen::Index i = t; i < s; ++i)
        for (Eigen::Index j = t; j < s; ++j)
          if (r.a(i, j) != 0 && (pi < 0 || std::llabs(r.a(i, j)) < std::llabs(r.a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) throw InputError("Smith form needs a nonsingular matrix");
      if (pi != t) r.swap_rows(t, pi);
      if (pj != t) r.swap_cols(t, pj);

      bool clean = true;
      const std::int64_t p = r.a(t, t);
      for (Eigen::Index i = t + 1; i < s; ++i) {
        if (r.a(i, t) == 0) continue;
        r.add_row(i, t, -(r.a(i, t) / p));
        if (r.a(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < s; ++j) {
        if (r.a(t, j) == 0) continue;
        r.add_col(j, t, -(r.a(t, j) / p));
        if (r.a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility by pulling an offending row into the pivot row.
      for (Eigen::Index i = t + 1; i < s && clean; ++i)
        for (Eigen::Index j = t + 1; j < s; ++j)
          if (r.a(i, j) % p != 0) {
            r.add_row(t, i, 1);
            clean = false;
            break;
          }
      if (clean) break;
    }
    if (r.a(t, t) < 0) r.negate_row(t);
  }

  return {r.left, r.left_inverse, r.right, r.a.diagonal()};
}

}  // namespace wiretap
