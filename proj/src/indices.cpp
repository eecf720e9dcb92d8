#include "tpdo/indices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "tpdo/error.hpp"

namespace tpdo {

namespace detail {

template <typename Derived>
SmallIndex<Derived>::SmallIndex(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::invalid_argument,
                "index dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                    std::to_string(dim));
  }
}

template <typename Derived>
SmallIndex<Derived>::SmallIndex(std::initializer_list<int> components)
    : SmallIndex(std::span<const int>(components.begin(), components.size())) {}

template <typename Derived>
SmallIndex<Derived>::SmallIndex(std::span<const int> components)
    : SmallIndex(static_cast<int>(components.size())) {
  std::copy(components.begin(), components.end(), c_.begin());
}

template <typename Derived>
std::string SmallIndex<Derived>::str() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[static_cast<std::size_t>(i)]);
  }
  return s + ")";
}

template class SmallIndex<MultiIndex>;
template class SmallIndex<FreqIndex>;

}  // namespace detail

MultiIndex MultiIndex::constant(int dim, int c) {
  MultiIndex a(dim);
  for (int i = 0; i < dim; ++i) a[i] = c;
  return a;
}

int MultiIndex::order() const noexcept {
  auto s = components();
  return std::accumulate(s.begin(), s.end(), 0);
}

long double MultiIndex::factorial() const {
  long double f = 1.0L;
  for (int a : components()) {
    for (int m = 2; m <= a; ++m) f *= static_cast<long double>(m);
  }
  return f;
}

double MultiIndex::log_factorial() const {
  double s = 0.0;
  for (int a : components()) s += std::lgamma(static_cast<double>(a) + 1.0);
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dim() != dim()) throw Error(ErrorKind::size_mismatch, "multi-index dimension mismatch");
  MultiIndex r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] + other[i];
  return r;
}

double FreqIndex::euclidean_norm() const noexcept {
  double s = 0.0;
  for (int v : components()) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

int FreqIndex::sup_norm() const noexcept {
  int m = 0;
  for (int v : components()) m = std::max(m, std::abs(v));
  return m;
}

int FreqIndex::l1_norm() const noexcept {
  int m = 0;
  for (int v : components()) m += std::abs(v);
  return m;
}

FreqIndex FreqIndex::operator+(const FreqIndex& other) const {
  if (other.dim() != dim()) throw Error(ErrorKind::size_mismatch, "frequency dimension mismatch");
  FreqIndex r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] + other[i];
  return r;
}

FreqIndex FreqIndex::operator-(const FreqIndex& other) const {
  if (other.dim() != dim()) throw Error(ErrorKind::size_mismatch, "frequency dimension mismatch");
  FreqIndex r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] - other[i];
  return r;
}

FreqIndex FreqIndex::operator-() const {
  FreqIndex r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = -(*this)[i];
  return r;
}

namespace {

void compositions(int dim, int pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    compositions(dim, pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  if (order < 0) return out;
  MultiIndex cur(dim);
  compositions(dim, 0, order, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_order; ++d) {
    auto level = multi_indices_of_order(dim, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<FreqIndex> frequency_box(int dim, int cutoff) {
  if (cutoff < 0) throw Error(ErrorKind::invalid_argument, "negative frequency cutoff");
  std::vector<FreqIndex> out;
  const int side = 2 * cutoff + 1;
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(side);
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    FreqIndex j(dim);
    std::size_t rest = flat;
    for (int i = dim - 1; i >= 0; --i) {
      j[i] = static_cast<int>(rest % static_cast<std::size_t>(side)) - cutoff;
      rest /= static_cast<std::size_t>(side);
    }
    out.push_back(j);
  }
  std::stable_sort(out.begin(), out.end(), [](const FreqIndex& a, const FreqIndex& b) {
    const int ga = a.l1_norm(), gb = b.l1_norm();
    if (ga != gb) return ga < gb;
    return std::lexicographical_compare(a.components().begin(), a.components().end(),
                                        b.components().begin(), b.components().end());
  });
  return out;
}

std::size_t box_offset(const FreqIndex& j, int cutoff) {
  const auto side = static_cast<std::size_t>(2 * cutoff + 1);
  std::size_t off = 0;
  for (int v : j.components()) {
    if (v < -cutoff || v > cutoff) {
      throw Error(ErrorKind::cutoff, "frequency " + j.str() + " outside box of cutoff " +
                                         std::to_string(cutoff));
    }
    off = off * side + static_cast<std::size_t>(v + cutoff);
  }
  return off;
}

}  // namespace tpdo
