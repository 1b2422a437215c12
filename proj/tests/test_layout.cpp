#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "nttacc/layout.hpp"

using namespace nttacc;

TEST(Layout, PlaceExamples) {
  EXPECT_EQ(place(0, 4), (Placement{0, 0}));
  EXPECT_EQ(place(8, 4), (Placement{2, 2}));
  EXPECT_EQ(coefficient_at(0, 0, 4), 0u);
  EXPECT_EQ(coefficient_at(2, 2, 4), 8u);
  EXPECT_THROW(place(16, 4), std::out_of_range);
  EXPECT_THROW(coefficient_at(4, 0, 4), std::out_of_range);
  // a[0] and a[8] share bank 0 without the shift
  const LayoutMap seq(16, LayoutKind::sequential);
  EXPECT_EQ(seq.place(0).bank, seq.place(8).bank);
}

TEST(Layout, BijectiveByEnumeration) {
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    std::set<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n * n; ++i) {
      const Placement p = place(i, n);
      ASSERT_LT(p.address, n);
      ASSERT_LT(p.bank, n);
      cells.insert({p.address, p.bank});
      ASSERT_EQ(coefficient_at(p.address, p.bank, n), i);
    }
    ASSERT_EQ(cells.size(), n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        // invert by search
        std::size_t found = n * n;
        for (std::size_t i = 0; i < n * n; ++i) {
          if (place(i, n) == Placement{a, b}) found = i;
        }
        ASSERT_EQ(coefficient_at(a, b, n), found);
      }
    }
  }
}

TEST(Layout, DegreeValidation) {
  EXPECT_EQ(bank_count_for(16), 4u);
  EXPECT_EQ(bank_count_for(4096), 64u);
  EXPECT_THROW(bank_count_for(2048), std::invalid_argument);
  EXPECT_THROW(bank_count_for(4), std::invalid_argument);
  EXPECT_THROW(bank_count_for(48), std::invalid_argument);
  EXPECT_THROW(LayoutMap(32), std::invalid_argument);
}

TEST(Layout, ConflictFreeUpTo16384) {
  for (std::size_t n = 16; n <= 16384; n *= 4) {
    const ConflictReport r = verify_conflict_free(n);
    EXPECT_TRUE(r.conflict_free()) << n;
    // pairs (i, i + 2^t) with i + 2^t < N
    std::size_t pairs = 0;
    for (std::size_t t = 1; t < n; t <<= 1) pairs += n - t;
    EXPECT_EQ(r.pairs_checked, pairs);
  }
}

TEST(Layout, SequentialHasViolations) {
  const ConflictReport r = verify_conflict_free(16, LayoutKind::sequential);
  ASSERT_FALSE(r.conflict_free());
  bool zero_eight = false;
  for (const auto& v : r.violations) zero_eight = zero_eight || (v.index == 0 && v.partner == 8);
  EXPECT_TRUE(zero_eight);
  std::ostringstream os;
  write_json_lines(os, r);
  std::size_t lines = 0;
  for (char c : os.str()) lines += c == '\n';
  EXPECT_EQ(lines, 1 + r.violations.size());
  EXPECT_NE(os.str().find("\"violations\":" + std::to_string(r.violations.size())), std::string::npos);
}
