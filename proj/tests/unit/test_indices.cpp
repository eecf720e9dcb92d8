#include <doctest.h>

#include <cmath>
#include <set>

#include "tpdo/error.hpp"
#include "tpdo/indices.hpp"

using namespace tpdo;

TEST_CASE("multi-indices are graded then descending lexicographic") {
  const auto a = multi_indices_up_to(2, 2);
  REQUIRE(a.size() == 6);
  CHECK(a[0] == MultiIndex{0, 0});
  CHECK(a[1] == MultiIndex{1, 0});
  CHECK(a[2] == MultiIndex{0, 1});
  CHECK(a[3] == MultiIndex{2, 0});
  CHECK(a[4] == MultiIndex{1, 1});
  CHECK(a[5] == MultiIndex{0, 2});
  CHECK(multi_indices_of_order(3, 2).size() == 6);
  CHECK(multi_indices_up_to(1, 20).size() == 21);
}

TEST_CASE("factorials") {
  CHECK(MultiIndex{3, 2}.factorial() == doctest::Approx(12.0));
  CHECK(MultiIndex{5}.log_factorial() == doctest::Approx(std::log(120.0)));
  CHECK((MultiIndex{1, 2} + MultiIndex{2, 2}) == MultiIndex{3, 4});
  CHECK(MultiIndex::constant(3, 2).order() == 6);
}

TEST_CASE("frequency box order") {
  const auto b = frequency_box(2, 1);
  REQUIRE(b.size() == 9);
  CHECK(b[0] == FreqIndex{0, 0});
  // |k|_1 = 1 block in ascending lex order.
  CHECK(b[1] == FreqIndex{-1, 0});
  CHECK(b[2] == FreqIndex{0, -1});
  CHECK(b[3] == FreqIndex{0, 1});
  CHECK(b[4] == FreqIndex{1, 0});
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1].l1_norm() <= b[i].l1_norm());
  std::set<std::size_t> offsets;
  for (const auto& k : frequency_box(3, 2)) offsets.insert(box_offset(k, 2));
  CHECK(offsets.size() == 125);
  CHECK(*offsets.rbegin() == 124);
  CHECK_THROWS_AS(box_offset(FreqIndex{3}, 2), Error);
}

TEST_CASE("frequency norms") {
  const FreqIndex j{3, -4};
  CHECK(j.euclidean_norm() == doctest::Approx(5.0));
  CHECK(j.sup_norm() == 4);
  CHECK(j.l1_norm() == 7);
  CHECK((-j) == FreqIndex{-3, 4});
  CHECK((j - j) == FreqIndex{0, 0});
}
