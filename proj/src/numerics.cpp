#include "msde/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace msde {

namespace {

void require_square(const Mat& S, const char* op) {
  if (S.rows() != S.cols() || S.rows() == 0)
    throw DimensionError(std::string(op) + ": expected a nonempty square matrix, got " +
                         std::to_string(S.rows()) + "x" + std::to_string(S.cols()));
}

void require_symmetric(const Mat& S, const char* op) {
  double scale = std::max(1.0, S.norm());
  if ((S - S.transpose()).norm() > 1e-10 * scale)
    throw AsymmetryError(std::string(op) + ": input is not symmetric");
}

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

namespace detail {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo32(M0, ctr[0], hi0, lo0);
    mulhilo32(M1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

}  // namespace detail

SymEigDecomposition sym_eig(const Mat& S) {
  require_square(S, "sym_eig");
  require_symmetric(S, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) throw SpectrumError("sym_eig: eigensolver did not converge");
  return {es.eigenvectors(), es.eigenvalues()};
}

Mat polar_orth(const Mat& A) {
  if (A.rows() < A.cols() || A.cols() == 0)
    throw DimensionError("polar_orth: expected n x p with n >= p");
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0)))
    throw SingularityError("polar_orth: matrix is rank deficient");
  return svd.matrixU() * svd.matrixV().transpose();
}

Mat spd_sqrt(const Mat& X) {
  SymEigDecomposition e = sym_eig(X);
  if (!(e.values(0) > 0.0)) throw SpectrumError("spd_sqrt: matrix is not positive definite");
  return e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

Mat lyapunov_solve(const Mat& A, const Mat& B) {
  SymEigDecomposition e = sym_eig(A);
  if (B.rows() != A.rows() || B.cols() != A.cols())
    throw DimensionError("lyapunov_solve: B must have the shape of A");
  const Eigen::Index n = A.rows();
  const double scale = e.values.cwiseAbs().maxCoeff();
  Mat C = e.vectors.transpose() * B * e.vectors;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = e.values(i) + e.values(j);
      if (std::abs(s) <= 1e-14 * scale)
        throw SingularityError("lyapunov_solve: eigenvalue pair sums to zero");
      C(i, j) /= s;
    }
  return e.vectors * C * e.vectors.transpose();
}

double frobenius_inner(const Mat& A, const Mat& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw DimensionError("frobenius_inner: shape mismatch");
  return (A.array() * B.array()).sum();
}

Mat sym(const Mat& A) { return 0.5 * (A + A.transpose()); }
Mat skew(const Mat& A) { return 0.5 * (A - A.transpose()); }

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

void RngStream::refill() {
  std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                      static_cast<std::uint32_t>(seed_ >> 32)};
  auto out = detail::philox4x32_10(ctr, key);
  ++counter_;
  buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buf_pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
  if (buf_pos_ >= 2) refill();
  return buf_[buf_pos_++];
}

double RngStream::next_uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  double rad = std::sqrt(-2.0 * std::log(u1));
  double ang = 2.0 * std::numbers::pi * u2;
  spare_normal_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

Mat gaussian_matrix(RngStream& rng, Eigen::Index n, Eigen::Index m) {
  Mat G(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) G(i, j) = rng.next_normal();
  return G;
}

}  // namespace msde
