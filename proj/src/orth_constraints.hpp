#pragma once

// Orthogonality constraints Y^T Y - I (entries i <= j) on a block of an ambient matrix,
// with analytic first and second derivatives.

#include "msde/numerics.hpp"

namespace msde::detail {

struct Block {
  Eigen::Index r0 = 0, c0 = 0, nr = 0, nc = 0;
  Eigen::Index R = 0;  // ambient row count, for column-major indexing
  Eigen::Index at(Eigen::Index a, Eigen::Index j) const { return (r0 + a) + (c0 + j) * R; }
};

inline Block whole(const Mat& x) { return {0, 0, x.rows(), x.cols(), x.rows()}; }

inline Eigen::Index orth_count(Eigen::Index p) { return p * (p + 1) / 2; }

// k-th constraint (column-major over the upper triangle) -> (i, j) with i <= j.
inline std::pair<Eigen::Index, Eigen::Index> orth_pair(Eigen::Index k) {
  Eigen::Index j = 0;
  while ((j + 1) * (j + 2) / 2 <= k) ++j;
  return {k - j * (j + 1) / 2, j};
}

inline void orth_values(const Mat& x, const Block& b, Vec& out, Eigen::Index off) {
  Mat Y = x.block(b.r0, b.c0, b.nr, b.nc);
  Mat G = Y.transpose() * Y - Mat::Identity(b.nc, b.nc);
  Eigen::Index k = off;
  for (Eigen::Index j = 0; j < b.nc; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) out(k++) = G(i, j);
}

inline void orth_jacobian(const Mat& x, const Block& b, Mat& J, Eigen::Index off) {
  Eigen::Index k = off;
  for (Eigen::Index j = 0; j < b.nc; ++j)
    for (Eigen::Index i = 0; i <= j; ++i, ++k)
      for (Eigen::Index a = 0; a < b.nr; ++a) {
        J(k, b.at(a, i)) += x(b.r0 + a, b.c0 + j);
        J(k, b.at(a, j)) += x(b.r0 + a, b.c0 + i);
      }
}

inline Mat orth_hessian(const Block& b, Eigen::Index local, Eigen::Index D) {
  auto [i, j] = orth_pair(local);
  Mat H = Mat::Zero(D, D);
  for (Eigen::Index a = 0; a < b.nr; ++a) {
    H(b.at(a, i), b.at(a, j)) += 1.0;
    H(b.at(a, j), b.at(a, i)) += 1.0;
  }
  return H;
}

}  // namespace msde::detail
