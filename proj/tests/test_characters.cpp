#include <doctest.h>

#include "kronload/characters.hpp"
#include "kronload/error.hpp"
#include "oracles.hpp"

using namespace kronload;

TEST_SUITE("characters") {
  TEST_CASE("S_3 table matches permutation-matrix traces") {
    const auto table = build_table(3);
    const auto ref = oracle::s3_table();
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(table.value(r, c) == ref[r][c]);
  }

  TEST_CASE("centralizer orders and class sizes") {
    CHECK(centralizer_order(Partition({1, 1, 1})) == 6);
    CHECK(centralizer_order(Partition({2, 1})) == 2);
    CHECK(centralizer_order(Partition({2, 2, 1, 1})) == 2 * 2 * 2 * 2);
    for (int n = 1; n <= 12; ++n) {
      const auto table = build_table(n);
      BigInt total = 0;
      for (const auto& cls : table.classes()) {
        CHECK(cls.class_size * cls.centralizer_order == factorial(n));
        total += cls.class_size;
      }
      CHECK(total == factorial(n));
    }
  }

  TEST_CASE("dimension examples") {
    CHECK(dimension(Partition({5})) == 1);
    CHECK(dimension(Partition({2, 1})) == 2);
    CHECK(dimension(Partition({3, 2})) == 5);
    CHECK(dimension(Partition({3, 3})) == 5);
  }

  TEST_CASE("hook length and Murnaghan-Nakayama dimensions agree") {
    for (int n = 1; n <= 14; ++n) {
      const Partition id = Partition::column(n);
      for (const auto& p : enumerate(n)) CHECK(dimension(p) == mn_character(p, id));
    }
  }

  TEST_CASE("table build agrees with the direct recursion") {
    for (int n = 1; n <= 10; ++n) {
      const auto table = build_table(n);
      for (std::size_t r = 0; r < table.size(); ++r)
        for (std::size_t c = 0; c < table.size(); ++c)
          CHECK(table.value(r, c) == mn_character(table.order()[r], table.order()[c]));
    }
  }

  TEST_CASE("row orthogonality is exact") {
    for (int n = 1; n <= 12; ++n) {
      const auto table = build_table(n);
      const BigInt nfact = factorial(n);
      for (std::size_t a = 0; a < table.size(); ++a) {
        for (std::size_t b = a; b < table.size(); ++b) {
          BigInt acc = 0;
          for (std::size_t c = 0; c < table.size(); ++c)
            acc += table.classes()[c].class_size * table.value(a, c) * table.value(b, c);
          CHECK(acc == (a == b ? nfact : BigInt(0)));
        }
      }
    }
  }

  TEST_CASE("regular character column sums vanish off the identity") {
    for (int n = 2; n <= 12; ++n) {
      const auto table = build_table(n);
      const std::size_t id = table.identity_column();
      for (std::size_t c = 0; c < table.size(); ++c) {
        BigInt acc = 0;
        for (std::size_t r = 0; r < table.size(); ++r) acc += table.value(r, id) * table.value(r, c);
        CHECK(acc == (c == id ? factorial(n) : BigInt(0)));
      }
    }
  }

  TEST_CASE("conjugation twists by the sign character") {
    for (int n = 1; n <= 12; ++n) {
      const auto table = build_table(n);
      const auto& conj = table.order().conjugate_indices();
      for (std::size_t c = 0; c < table.size(); ++c) {
        const int sign = (n - table.order()[c].length()) % 2 == 0 ? 1 : -1;
        for (std::size_t r = 0; r < table.size(); ++r) CHECK(table.value(conj[r], c) == sign * table.value(r, c));
      }
    }
  }

  TEST_CASE("identity column holds the dimensions") {
    const auto table = build_table(9);
    for (std::size_t r = 0; r < table.size(); ++r)
      CHECK(table.value(r, table.identity_column()) == dimension(table.order()[r]));
  }

  TEST_CASE("border strip removal") {
    // (3,2) has a single 3-strip, {(1,2),(1,3),(2,2)}, of height 2.
    const std::vector<int> shape{3, 2};
    const auto strips = detail::remove_border_strips(shape, 3);
    REQUIRE(strips.size() == 1);
    CHECK(strips[0].residual == std::vector<int>{1, 1});
    CHECK(strips[0].sign == -1);
    const auto twos = detail::remove_border_strips(shape, 2);
    REQUIRE(twos.size() == 1);
    CHECK(twos[0].residual == std::vector<int>{3});
    CHECK(twos[0].sign == 1);
    CHECK(detail::remove_border_strips(shape, 6).empty());
    const auto ones = detail::remove_border_strips(shape, 1);
    CHECK(ones.size() == 2);
    for (const auto& s : ones) CHECK(s.sign == 1);
  }

  TEST_CASE("widened tables compare equal and keep wide storage") {
    const auto table = build_table(8);
    const auto wide = CharacterTable::widened(table);
    CHECK_FALSE(wide.fits_int64());
    CHECK(wide == table);
  }

  TEST_CASE("memory budget is enforced") {
    TableOptions options;
    options.memory_budget_bytes = 1024;
    CHECK_THROWS_AS(build_table(20, options), ResourceError);
    CHECK_THROWS_AS(build_table(0), DomainError);
    CHECK_THROWS_AS(mn_character(Partition({2}), Partition({1})), DomainError);
  }

  TEST_CASE("thread count does not change the table") {
    TableOptions one;
    one.threads = 1;
    TableOptions four;
    four.threads = 4;
    CHECK(build_table(13, one) == build_table(13, four));
  }
}
