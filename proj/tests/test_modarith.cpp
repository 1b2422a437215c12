#include <gtest/gtest.h>

#include <random>

#include "nttacc/modarith.hpp"
#include "oracles.hpp"

using namespace nttacc;

namespace {

std::vector<u64> primes_below(u64 limit) {
  std::vector<u64> out;
  for (u64 q = 3; q < limit; ++q) {
    if (oracle::is_prime_trial(q)) out.push_back(q);
  }
  return out;
}

// NTT-friendly here means q = 1 (mod 16), enough for N = 8.
std::vector<u64> small_ntt_primes(std::size_t count) {
  std::vector<u64> out;
  for (u64 q = 17; out.size() < count && q < (1u << 14); q += 16) {
    if (oracle::is_prime_trial(q)) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST(Primality, MatchesTrialDivision) {
  for (u64 x = 0; x < 20000; ++x) ASSERT_EQ(is_prime(x), oracle::is_prime_trial(x)) << x;
  EXPECT_TRUE(is_prime(4294967291ULL));
  EXPECT_FALSE(is_prime(4294967297ULL));  // 641 * 6700417
  EXPECT_TRUE(is_prime(2305843009213693951ULL));
}

TEST(Primality, FactorsMultiplyBack) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    u64 x = rng() >> 4;
    if (x < 2) continue;
    u64 y = x;
    for (u64 p : prime_factors(x)) {
      ASSERT_TRUE(p < (u64{1} << 32) ? oracle::is_prime_trial(p) : is_prime(p));
      ASSERT_EQ(y % p, 0u);
      while (y % p == 0) y /= p;
    }
    ASSERT_EQ(y, 1u) << x;
  }
}

TEST(BarrettPrecompute, SmallModuli) {
  const Modulus m17 = barrett_precompute(17);
  EXPECT_EQ(m17.k, 5u);
  EXPECT_EQ(m17.m, 1024u / 17);
  const Modulus m3 = barrett_precompute(3);
  EXPECT_EQ(m3.k, 2u);
  EXPECT_EQ(m3.m, 16u / 3);
  EXPECT_THROW(barrett_precompute(2), std::invalid_argument);
  EXPECT_THROW(barrett_precompute(4), std::invalid_argument);
  EXPECT_THROW(barrett_precompute(15), std::invalid_argument);
}

TEST(BarrettPrecompute, MatchesDivisionAndHasKPlusOneBits) {
  std::vector<u64> qs = primes_below(1 << 12);
  for (unsigned bits : {14u, 20u, 31u, 32u, 40u, 50u, 62u}) {
    for (unsigned i = 0; i < 5; ++i) qs.push_back(find_ntt_prime(bits, 8, i));
  }
  for (u64 q : qs) {
    const Modulus mod = barrett_precompute(q);
    unsigned k = 0;
    while ((u128{1} << k) < q) ++k;
    ASSERT_EQ(mod.k, k) << q;
    const oracle::Big m = (oracle::Big(1) << (2 * k)) / q;
    ASSERT_EQ(oracle::Big(mod.m), m) << q;
    ASSERT_EQ(boost::multiprecision::msb(oracle::Big(mod.m)) + 1, k + 1) << q;
  }
}

TEST(BarrettMul, SpotValues) {
  const Modulus m = barrett_precompute(17);
  EXPECT_EQ(barrett_mul_soft(5, 7, m), 1u);
  EXPECT_EQ(barrett_mul_hw(5, 7, m), 1u);
  for (u64 x = 0; x < 17; ++x) {
    EXPECT_EQ(barrett_mul_soft(0, x, m), 0u);
    EXPECT_EQ(barrett_mul_hw(x, 0, m), 0u);
  }
  EXPECT_THROW(barrett_mul_hw(17, 1, m), std::invalid_argument);
}

TEST(BarrettMul, SoftExhaustiveBelow256) {
  for (u64 q : primes_below(256)) {
    const Modulus mod = barrett_precompute(q);
    for (u64 a = 0; a < q; ++a) {
      for (u64 b = 0; b < q; ++b) ASSERT_EQ(barrett_mul_soft(a, b, mod), a * b % q) << q << ' ' << a << ' ' << b;
    }
  }
}

TEST(BarrettMul, HwEqualsSoftOnFiftySmallNttPrimes) {
  const auto qs = small_ntt_primes(50);
  ASSERT_EQ(qs.size(), 50u);
  for (u64 q : qs) {
    const Modulus mod = barrett_precompute(q);
    for (u64 a = 0; a < q; ++a) {
      for (u64 b = 0; b < q; ++b) {
        ASSERT_EQ(barrett_mul_hw(a, b, mod), barrett_mul_soft(a, b, mod)) << q << ' ' << a << ' ' << b;
      }
    }
  }
}

TEST(BarrettMul, RandomWidePrimesAgainstWideProduct) {
  std::mt19937_64 rng(11);
  for (unsigned bits : {31u, 32u, 33u, 48u, 62u}) {
    const u64 q = find_ntt_prime(bits, 4096, 0);
    const Modulus mod = barrett_precompute(q);
    std::uniform_int_distribution<u64> d(0, q - 1);
    for (int i = 0; i < 200000; ++i) {
      const u64 a = d(rng), b = d(rng);
      const u64 want = oracle::mulmod(a, b, q);
      ASSERT_EQ(barrett_mul_soft(a, b, mod), want);
      ASSERT_EQ(barrett_mul_hw(a, b, mod), want);
    }
  }
}

TEST(BarrettMul, HardwareT4IsSoftT4OrOneQMore) {
  std::mt19937_64 rng(3);
  std::vector<u64> qs = small_ntt_primes(10);
  for (unsigned i = 0; i < 4; ++i) qs.push_back(find_ntt_prime(32, 4096, i));
  for (u64 q : qs) {
    const Modulus mod = barrett_precompute(q);
    std::uniform_int_distribution<u64> d(0, q - 1);
    for (int i = 0; i < 50000; ++i) {
      const u64 a = d(rng), b = d(rng);
      const BarrettTrace s = barrett_mul_soft_traced(a, b, mod);
      const BarrettTrace h = barrett_mul_hw_traced(a, b, mod, default_step_width(mod.k));
      ASSERT_EQ(s.t1, h.t1);
      ASSERT_TRUE(h.t4 == s.t4 || h.t4 == s.t4 + q) << q << ' ' << a << ' ' << b;
      ASSERT_LT(h.t4, 3 * q);
      ASSERT_LT(s.t4, 2 * q);
      ASSERT_EQ(h.z, s.z);
    }
  }
}

TEST(StepMultiply, Examples) {
  EXPECT_EQ(step_multiply(0xFFFFFFFFULL, 0xFFFFFFFFULL, 32).value(), u128{0xFFFFFFFE00000001ULL});
  for (u64 x : {0ULL, 1ULL, 12345ULL, 0xFFFFFFFFULL}) EXPECT_EQ(step_multiply(1, x, 32).value(), u128{x});
  // one extra MSB on each operand
  EXPECT_EQ(step_multiply(0x1FFFFFFFFULL, 0x1FFFFFFFFULL, 32).value(), u128{0x1FFFFFFFFULL} * 0x1FFFFFFFFULL);
  EXPECT_THROW(step_multiply(u64{1} << 33, 1, 32), std::invalid_argument);
}

TEST(StepMultiply, RandomAgainstFullProduct) {
  std::mt19937_64 rng(5);
  for (unsigned w : {16u, 32u}) {
    const u64 limit = u64{1} << w;
    for (int i = 0; i < 1000000; ++i) {
      const u64 a = rng() % limit, b = rng() % limit;
      ASSERT_EQ(step_multiply(a, b, w).value(), static_cast<u128>(a) * b);
    }
  }
  for (int i = 0; i < 100000; ++i) {
    const u64 a = rng(), b = rng();
    ASSERT_TRUE(step_multiply(a, b, 64).value() == static_cast<u128>(a) * b);
  }
}

TEST(HalfMod, Examples) {
  EXPECT_EQ(half_mod(6, 17), 3u);
  EXPECT_EQ(half_mod(7, 17), 12u);
  EXPECT_THROW(half_mod(17, 17), std::invalid_argument);
}

TEST(HalfMod, DoublingIdentityExhaustive) {
  for (u64 q : primes_below(1 << 12)) {
    for (u64 x = 0; x < q; ++x) {
      const u64 h = half_mod(x, q);
      ASSERT_LT(h, q);
      ASSERT_EQ(2 * h % q, x) << q << ' ' << x;
    }
  }
}

TEST(ModPow, Examples) {
  const Modulus m = barrett_precompute(17);
  EXPECT_EQ(mod_pow(3, 16, m), 1u);
  EXPECT_EQ(mod_pow(3, 2, m), 9u);
  EXPECT_EQ(mod_pow(0, 0, m), 1u);
}

TEST(ModPow, AgainstRepeatedMultiplication) {
  std::mt19937_64 rng(9);
  for (u64 q : std::vector<u64>{17, 7681, 12289, find_ntt_prime(32, 1024, 0)}) {
    const Modulus m = barrett_precompute(q);
    for (int i = 0; i < 200; ++i) {
      const u64 b = rng() % q, e = rng() % 3000;
      ASSERT_EQ(mod_pow(b, e, m), oracle::pow_loop(b, e, q));
    }
  }
}

TEST(PrimitiveRoot, SmallestByExhaustiveOrder) {
  for (u64 q : std::vector<u64>{17, 7681, 12289, 257, 97}) {
    const u64 g = find_primitive_root(q);
    EXPECT_EQ(oracle::order(g, q), q - 1) << q;
    for (u64 c = 2; c < g; ++c) EXPECT_LT(oracle::order(c, q), q - 1) << q << ' ' << c;
  }
  EXPECT_EQ(find_primitive_root(17), 3u);
  EXPECT_EQ(find_primitive_root(7681), 17u);
}

TEST(PrimitiveRoot, RandomNttPrimesPassOrderTest) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const unsigned bits = 12 + static_cast<unsigned>(rng() % 40);
    const u64 n = u64{1} << (1 + rng() % 8);
    const u64 q = find_ntt_prime(bits, n, static_cast<unsigned>(rng() % 3));
    const u64 g = find_primitive_root(q);
    if (bits <= 32) ASSERT_EQ(g, oracle::primitive_root(q)) << q;
    // g^((q-1)/p) != 1 for every prime p | q - 1
    for (u64 p : prime_factors(q - 1)) ASSERT_NE(oracle::pow_fast(g, (q - 1) / p, q), 1u) << q;
    ASSERT_EQ(oracle::pow_fast(g, q - 1, q), 1u);
  }
}

TEST(FindNttPrime, GoldenAndOracle) {
  EXPECT_EQ(find_ntt_prime(14, 1024, 0), 12289u);
  // sieve oracle: the largest 14-bit prime = 1 mod 2048
  u64 want = 0;
  for (u64 q = (1 << 14) - 1; q > 0; --q) {
    if (q % 2048 == 1 && oracle::is_prime_trial(q)) {
      want = q;
      break;
    }
  }
  EXPECT_EQ(find_ntt_prime(14, 1024, 0), want);
}

TEST(FindNttPrime, DistinctAndFriendly) {
  for (unsigned bits : {14u, 32u, 60u}) {
    const u64 a = find_ntt_prime(bits, 256, 0), b = find_ntt_prime(bits, 256, 1);
    EXPECT_NE(a, b);
    EXPECT_EQ(a % 512, 1u);
    EXPECT_EQ(b % 512, 1u);
    EXPECT_LT(a, u64{1} << bits);
    EXPECT_TRUE(is_prime(a) && is_prime(b));
  }
  EXPECT_THROW(find_ntt_prime(14, 1 << 14, 0), std::invalid_argument);
  EXPECT_THROW(find_ntt_prime(14, 1024, 1), std::runtime_error);  // 12289 is the only one
}

TEST(NttModulus, RejectsUnfriendly) {
  EXPECT_NO_THROW(ntt_modulus(17, 4));
  EXPECT_THROW(ntt_modulus(17, 16), std::invalid_argument);
  EXPECT_EQ(*ntt_modulus(17, 4).g, 3u);
}

// The extra MSB carried by the [W:W/2] split lets k reach W itself.
TEST(BarrettMul, Width16UpToSixteenBitModuli) {
  std::mt19937_64 rng(17);
  for (u64 q : std::vector<u64>{12289, 40961, 65537 - 16, 65521, 7681}) {
    if (!is_prime(q)) continue;
    const Modulus mod = barrett_precompute(q);
    ASSERT_LE(mod.k, 16u);
    for (int i = 0; i < 300000; ++i) {
      const u64 a = rng() % q, b = rng() % q;
      ASSERT_EQ(barrett_mul_hw(a, b, mod, 16), oracle::mulmod(a, b, q)) << q;
    }
    EXPECT_EQ(barrett_mul_hw(q - 1, q - 1, mod, 16), 1u);
  }
  EXPECT_THROW(barrett_mul_hw(1, 1, barrett_precompute(65537), 16), std::invalid_argument);  // k = 17
}
