#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "msde/errors.hpp"

namespace msde {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct SymEigDecomposition {
  Mat vectors;  // columns orthonormal
  Vec values;   // nondecreasing
};

SymEigDecomposition sym_eig(const Mat& S);

// Orthogonal polar factor A (A^T A)^{-1/2} of a full column rank n x p matrix.
Mat polar_orth(const Mat& A);

Mat spd_sqrt(const Mat& X);

// Solves A X + X A = B for symmetric positive-definite A.
Mat lyapunov_solve(const Mat& A, const Mat& B);

double frobenius_inner(const Mat& A, const Mat& B);

Mat sym(const Mat& A);
Mat skew(const Mat& A);

// Counter-based stream: Philox4x32-10 keyed by the seed, counter = (stream id, draw index).
// Equal (seed, stream id) give identical sequences no matter what other streams do.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double next_uniform();  // in (0, 1)
  double next_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

Mat gaussian_matrix(RngStream& rng, Eigen::Index n, Eigen::Index m);

namespace detail {
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);
}

}  // namespace msde
