#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tpdo {

/// Largest torus dimension supported (memory grows like N^n).
inline constexpr int kMaxDim = 3;

namespace detail {

template <typename Derived>
class SmallIndex {
 public:
  SmallIndex() = default;
  explicit SmallIndex(int dim);
  SmallIndex(std::initializer_list<int> components);
  explicit SmallIndex(std::span<const int> components);

  int dim() const noexcept { return dim_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const int> components() const noexcept {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  friend bool operator==(const SmallIndex& a, const SmallIndex& b) {
    return a.components().size() == b.components().size() &&
           std::equal(a.components().begin(), a.components().end(), b.components().begin());
  }

  std::string str() const;

 protected:
  std::array<int, kMaxDim> c_{};
  int dim_ = 0;
};

}  // namespace detail

/// Unsigned multi-index alpha used for derivatives.
class MultiIndex : public detail::SmallIndex<MultiIndex> {
 public:
  using SmallIndex::SmallIndex;

  static MultiIndex zero(int dim) { return MultiIndex(dim); }
  /// (c, c, ..., c)
  static MultiIndex constant(int dim, int c);

  int order() const noexcept;
  /// alpha! = prod alpha_i!, as a long double (exact up to |alpha| = 25).
  long double factorial() const;
  double log_factorial() const;

  MultiIndex operator+(const MultiIndex& other) const;
};

/// Signed frequency j in Z^n.
class FreqIndex : public detail::SmallIndex<FreqIndex> {
 public:
  using SmallIndex::SmallIndex;

  double euclidean_norm() const noexcept;
  int sup_norm() const noexcept;
  int l1_norm() const noexcept;

  FreqIndex operator+(const FreqIndex& other) const;
  FreqIndex operator-(const FreqIndex& other) const;
  FreqIndex operator-() const;
};

/// All alpha with |alpha| <= max_order, graded: by |alpha| then descending lex
/// (x1^2 before x1 x2 before x2^2).
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

/// Multi-indices of exactly the given order, same ordering.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);

/// All j with |j|_inf <= cutoff, graded by |j|_1 then ascending lex.
/// This is the row/column order of every truncated operator.
std::vector<FreqIndex> frequency_box(int dim, int cutoff);

/// Position of j inside the dense box {-cutoff..cutoff}^n in row-major order
/// (first coordinate slowest). Used for table lookups, not for matrix order.
std::size_t box_offset(const FreqIndex& j, int cutoff);

}  // namespace tpdo
