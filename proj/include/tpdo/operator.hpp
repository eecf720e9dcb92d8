#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tpdo/indices.hpp"

namespace tpdo {

/// Dense matrix of an operator restricted to span{e_k : |k|_inf <= K}.
/// Rows and columns follow frequency_box(dim, K) (graded by |k|_1, then
/// lexicographic). Entry (l, k) is the coefficient of e_l in A e_k, i.e.
/// A e_k = sum_l M(l, k) e_l.
class TruncatedOperator {
 public:
  TruncatedOperator(int dim, int cutoff, Eigen::MatrixXcd matrix);

  static TruncatedOperator zero(int dim, int cutoff);
  static TruncatedOperator identity(int dim, int cutoff);
  static TruncatedOperator diagonal(int dim, int cutoff, std::span<const std::complex<double>> d);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  Eigen::Index size() const noexcept { return matrix_.rows(); }
  const std::vector<FreqIndex>& basis() const noexcept { return basis_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  bool contains(const FreqIndex& k) const noexcept { return k.dim() == dim_ && k.sup_norm() <= cutoff_; }
  Eigen::Index index_of(const FreqIndex& k) const;
  std::complex<double> entry(const FreqIndex& l, const FreqIndex& k) const;

 private:
  int dim_;
  int cutoff_;
  std::vector<FreqIndex> basis_;
  std::vector<Eigen::Index> box_to_index_;
  Eigen::MatrixXcd matrix_;
};

/// (T_y A T_{-y})_{l,k} = exp(-i (l-k).y) M_{l,k}.
TruncatedOperator conjugate_translation(const TruncatedOperator& a, std::span<const double> y);
TruncatedOperator compose(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator adjoint(const TruncatedOperator& a);
TruncatedOperator add(const TruncatedOperator& a, const TruncatedOperator& b);
TruncatedOperator scale(const TruncatedOperator& a, std::complex<double> c);

struct PowerIterationOptions {
  double tol = 1e-10;  ///< relative residual ||A*A v - lambda v|| / lambda
  int max_iterations = 200000;
  std::uint64_t seed = 0x5eed;
};

struct NormEstimate {
  double norm = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
};

/// Largest singular value by power iteration on A*A from a seeded random start.
/// Throws NonConvergence (carrying the best estimate) past max_iterations.
NormEstimate operator_norm_estimate(const TruncatedOperator& a, const PowerIterationOptions& options = {});
double operator_norm(const TruncatedOperator& a, double tol = 1e-10);

/// Binary layout (little endian): magic "TPDOMAT1", u32 version, u32 dim,
/// u32 cutoff, u32 ordering tag (1 = graded lexicographic), then the matrix as
/// row-major (re, im) double pairs.
void save_matrix(const TruncatedOperator& a, const std::string& path);
TruncatedOperator load_matrix(const std::string& path);
void write_matrix(const TruncatedOperator& a, std::ostream& os);
TruncatedOperator read_matrix(std::istream& is);

/// CSV with header l1[,l2,l3],k1[,k2,k3],re,im; one row per nonzero entry.
void write_matrix_csv(const TruncatedOperator& a, std::ostream& os);

inline constexpr std::uint32_t kMatrixFormatVersion = 1;
inline constexpr std::uint32_t kOrderingGradedLex = 1;

}  // namespace tpdo
