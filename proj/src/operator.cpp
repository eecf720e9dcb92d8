#include "tpdo/operator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>

#include "tpdo/error.hpp"

namespace tpdo {

namespace {

std::size_t box_count(int dim, int cutoff) {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(2 * cutoff + 1);
  return n;
}

void require_same_shape(const TruncatedOperator& a, const TruncatedOperator& b) {
  if (a.dim() != b.dim() || a.cutoff() != b.cutoff()) {
    throw Error(ErrorKind::size_mismatch, "operators truncated to different mode boxes");
  }
}

constexpr char kMagic[8] = {'T', 'P', 'D', 'O', 'M', 'A', 'T', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "matrix files are little endian");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error(ErrorKind::io, "truncated matrix file");
  return v;
}

}  // namespace

TruncatedOperator::TruncatedOperator(int dim, int cutoff, Eigen::MatrixXcd matrix)
    : dim_(dim), cutoff_(cutoff), basis_(frequency_box(dim, cutoff)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw Error(ErrorKind::size_mismatch, "matrix is " + std::to_string(matrix_.rows()) + "x" +
                                              std::to_string(matrix_.cols()) + ", mode box needs " +
                                              std::to_string(n) + "x" + std::to_string(n));
  }
  if (!matrix_.allFinite()) throw Error(ErrorKind::domain, "operator matrix has non-finite entries");
  box_to_index_.assign(box_count(dim, cutoff), 0);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    box_to_index_[box_offset(basis_[i], cutoff)] = static_cast<Eigen::Index>(i);
  }
}

TruncatedOperator TruncatedOperator::zero(int dim, int cutoff) {
  const auto n = static_cast<Eigen::Index>(box_count(dim, cutoff));
  return {dim, cutoff, Eigen::MatrixXcd::Zero(n, n)};
}

TruncatedOperator TruncatedOperator::identity(int dim, int cutoff) {
  const auto n = static_cast<Eigen::Index>(box_count(dim, cutoff));
  return {dim, cutoff, Eigen::MatrixXcd::Identity(n, n)};
}

TruncatedOperator TruncatedOperator::diagonal(int dim, int cutoff, std::span<const std::complex<double>> d) {
  const auto n = static_cast<Eigen::Index>(box_count(dim, cutoff));
  if (static_cast<Eigen::Index>(d.size()) != n) throw Error(ErrorKind::size_mismatch, "diagonal length mismatch");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return {dim, cutoff, std::move(m)};
}

Eigen::Index TruncatedOperator::index_of(const FreqIndex& k) const {
  if (!contains(k)) throw Error(ErrorKind::cutoff, "mode " + k.str() + " outside the operator's box");
  return box_to_index_[box_offset(k, cutoff_)];
}

std::complex<double> TruncatedOperator::entry(const FreqIndex& l, const FreqIndex& k) const {
  return matrix_(index_of(l), index_of(k));
}

TruncatedOperator conjugate_translation(const TruncatedOperator& a, std::span<const double> y) {
  if (static_cast<int>(y.size()) != a.dim()) throw Error(ErrorKind::size_mismatch, "translation dimension mismatch");
  const auto& basis = a.basis();
  Eigen::MatrixXcd m = a.matrix();
  // Phases factor as exp(-i l.y) exp(i k.y).
  Eigen::VectorXcd phase(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double t = 0.0;
    for (int d = 0; d < a.dim(); ++d) t += basis[static_cast<std::size_t>(i)][d] * y[static_cast<std::size_t>(d)];
    phase(i) = std::polar(1.0, -t);
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) *= phase(r) * std::conj(phase(c));
  }
  return {a.dim(), a.cutoff(), std::move(m)};
}

TruncatedOperator compose(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_shape(a, b);
  return {a.dim(), a.cutoff(), a.matrix() * b.matrix()};
}

TruncatedOperator adjoint(const TruncatedOperator& a) { return {a.dim(), a.cutoff(), a.matrix().adjoint()}; }

TruncatedOperator add(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_shape(a, b);
  return {a.dim(), a.cutoff(), a.matrix() + b.matrix()};
}

TruncatedOperator scale(const TruncatedOperator& a, std::complex<double> c) {
  return {a.dim(), a.cutoff(), c * a.matrix()};
}

NormEstimate operator_norm_estimate(const TruncatedOperator& a, const PowerIterationOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "power iteration tolerance must be > 0");
  const auto& m = a.matrix();
  NormEstimate est;
  est.seed = options.seed;
  std::mt19937_64 rng(options.seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
  Eigen::VectorXcd v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {unit(), unit()};
  v.normalize();
  double lambda = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXcd w = m * v;
    const Eigen::VectorXcd z = m.adjoint() * w;
    lambda = w.squaredNorm();
    est.iterations = it;
    if (lambda == 0.0) {
      // v is in the kernel; A = 0 unless the start vector was unlucky.
      if (m.norm() == 0.0) {
        est.norm = 0.0;
        est.residual = 0.0;
        return est;
      }
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {unit(), unit()};
      v.normalize();
      continue;
    }
    est.residual = (z - lambda * v).norm() / lambda;
    est.norm = std::sqrt(lambda);
    if (est.residual <= options.tol) return est;
    v = z / z.norm();
  }
  throw NonConvergence("power iteration did not reach relative residual " + std::to_string(options.tol) +
                           " in " + std::to_string(options.max_iterations) + " iterations",
                       est.norm, est.residual);
}

double operator_norm(const TruncatedOperator& a, double tol) {
  PowerIterationOptions o;
  o.tol = tol;
  return operator_norm_estimate(a, o).norm;
}

void write_matrix(const TruncatedOperator& a, std::ostream& os) {
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kMatrixFormatVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(a.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(a.cutoff()));
  put<std::uint32_t>(os, kOrderingGradedLex);
  const auto& m = a.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put<double>(os, m(r, c).real());
      put<double>(os, m(r, c).imag());
    }
  }
  if (!os) throw Error(ErrorKind::io, "failed writing matrix");
}

TruncatedOperator read_matrix(std::istream& is) {
  char magic[sizeof(kMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw Error(ErrorKind::io, "not a tpdo matrix file");
  const auto version = get<std::uint32_t>(is);
  if (version != kMatrixFormatVersion) {
    throw Error(ErrorKind::io, "unsupported matrix format version " + std::to_string(version));
  }
  const auto dim = static_cast<int>(get<std::uint32_t>(is));
  const auto cutoff = static_cast<int>(get<std::uint32_t>(is));
  const auto ordering = get<std::uint32_t>(is);
  if (ordering != kOrderingGradedLex) throw Error(ErrorKind::io, "unknown basis ordering tag " + std::to_string(ordering));
  if (dim < 1 || dim > kMaxDim || cutoff > 4096) throw Error(ErrorKind::io, "implausible matrix header");
  const auto n = static_cast<Eigen::Index>(box_count(dim, cutoff));
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      m(r, c) = {re, im};
    }
  }
  return {dim, cutoff, std::move(m)};
}

void save_matrix(const TruncatedOperator& a, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::io, "cannot open " + path + " for writing");
  write_matrix(a, os);
}

TruncatedOperator load_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path);
  return read_matrix(is);
}

void write_matrix_csv(const TruncatedOperator& a, std::ostream& os) {
  for (int d = 0; d < a.dim(); ++d) os << "l" << (d + 1) << ",";
  for (int d = 0; d < a.dim(); ++d) os << "k" << (d + 1) << ",";
  os << "re,im\n";
  const auto& basis = a.basis();
  const auto& m = a.matrix();
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) == std::complex<double>{}) continue;
      for (int v : basis[static_cast<std::size_t>(r)].components()) os << v << ",";
      for (int v : basis[static_cast<std::size_t>(c)].components()) os << v << ",";
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", m(r, c).real(), m(r, c).imag());
      os << buf;
    }
  }
}

}  // namespace tpdo
