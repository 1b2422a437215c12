#include <gtest/gtest.h>

#include <random>

#include "nttacc/rns.hpp"
#include "oracles.hpp"

using namespace nttacc;

namespace {

BigInt random_below(const BigInt& q, std::mt19937_64& rng) {
  BigInt x = 0;
  for (unsigned i = 0; i < bit_length(q) / 64 + 2; ++i) x = (x << 64) | rng();
  return x % q;
}

}  // namespace

TEST(RnsBasis, TableThreeWidths) {
  EXPECT_GE(bit_length(gen_basis(32, 2, 4096).big_q), 60u);
  EXPECT_GE(bit_length(gen_basis(32, 6, 4096).big_q), 180u);
  const RnsBasis b = gen_basis(32, 6, 4096);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.moduli[i].q % 8192, 1u);
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(b.moduli[i].q, b.moduli[j].q);
  }
}

TEST(RnsBasis, SmallCrt) {
  const RnsBasis b = make_basis({3, 5}, 0);
  const RnsPolynomial r = decompose({BigInt(7), BigInt(0)}, b);
  EXPECT_EQ(r.residue_polys[0].coeffs, (std::vector<u64>{1, 0}));
  EXPECT_EQ(r.residue_polys[1].coeffs, (std::vector<u64>{2, 0}));
  EXPECT_EQ(reconstruct(r, b), (std::vector<BigInt>{7, 0}));
  EXPECT_THROW(decompose({BigInt(15)}, b), std::invalid_argument);
  EXPECT_THROW(make_basis({3, 3}, 0), std::invalid_argument);
  EXPECT_THROW(make_basis({17}, 16), std::invalid_argument);
}

TEST(RnsBasis, SingleModulusIsIdentity) {
  const RnsBasis b = gen_basis(32, 1, 64);
  std::vector<BigInt> x = {BigInt(0), BigInt(1), BigInt(b.moduli[0].q - 1)};
  EXPECT_EQ(reconstruct(decompose(x, b), b), x);
}

TEST(Rns, RoundtripRandom) {
  std::mt19937_64 rng(1);
  for (std::size_t nq : {2u, 3u, 6u}) {
    const RnsBasis b = gen_basis(32, nq, 64);
    std::vector<BigInt> x(64);
    for (int t = 0; t < 160; ++t) {
      for (auto& v : x) v = random_below(b.big_q, rng);
      const RnsPolynomial r = decompose(x, b);
      for (std::size_t i = 0; i < nq; ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
          ASSERT_EQ(BigInt(r.residue_polys[i].coeffs[j]), x[j] % b.moduli[i].q);
        }
      }
      ASSERT_EQ(reconstruct(r, b), x);
    }
  }
}

TEST(Rns, PolymulMatchesBigIntegerSchoolbook) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {8u, 16u, 64u}) {
    std::vector<RnsBasis> bases = {gen_basis(32, 2, n), gen_basis(32, 6, n),
                                   make_basis({find_ntt_prime(14, n, 0), find_ntt_prime(14, n, 1)}, n)};
    for (const RnsBasis& b : bases) {
      for (int t = 0; t < 5; ++t) {
        std::vector<BigInt> x(n), y(n);
        for (auto& v : x) v = random_below(b.big_q, rng);
        for (auto& v : y) v = random_below(b.big_q, rng);
        const RnsPolynomial z = rns_polymul(decompose(x, b), decompose(y, b), b);
        ASSERT_EQ(reconstruct(z, b), oracle::negacyclic_big(x, y, b.big_q));
      }
      const std::vector<BigInt> zero(n, 0);
      std::vector<BigInt> x(n);
      for (auto& v : x) v = random_below(b.big_q, rng);
      EXPECT_EQ(reconstruct(rns_polymul(decompose(zero, b), decompose(x, b), b), b), zero);
    }
  }
}

TEST(Rns, SingleModulusPolymulIsPolymulNtt) {
  std::mt19937_64 rng(3);
  const RnsBasis b = gen_basis(32, 1, 32);
  std::vector<u64> x(32), y(32);
  for (auto& v : x) v = rng() % b.moduli[0].q;
  for (auto& v : y) v = rng() % b.moduli[0].q;
  const Polynomial a(x, b.moduli[0]), c(y, b.moduli[0]);
  const RnsPolynomial z = rns_polymul(RnsPolynomial{{a}}, RnsPolynomial{{c}}, b);
  EXPECT_EQ(z.residue_polys[0], polymul_ntt(a, c, b.moduli[0]));
}
