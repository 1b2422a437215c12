#include "nttacc/modarith.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nttacc {

namespace {

u64 mulmod(u64 a, u64 b, u64 n) { return static_cast<u64>(static_cast<u128>(a) * b % n); }

u64 powmod(u64 base, u64 exp, u64 n) {
  u64 result = 1 % n;
  base %= n;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

// Deterministic for every 64-bit input with this witness set.
bool miller_rabin(u64 n) {
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1; c < 1000; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
  throw std::runtime_error("pollard rho failed to split " + std::to_string(n));
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

// floor((t1 * m) / 2^shift) for t1 < 2^126, using a 192-bit intermediate.
u64 mul_shift_192(u128 t1, u64 m, unsigned shift) {
  const u64 l = static_cast<u64>(t1);
  const u64 h = static_cast<u64>(t1 >> 64);
  const u128 lm = static_cast<u128>(l) * m;
  const u128 hm = static_cast<u128>(h) * m;
  const u64 w0 = static_cast<u64>(lm);
  const u128 mid = (lm >> 64) + static_cast<u64>(hm);
  const u64 w1 = static_cast<u64>(mid);
  const u64 w2 = static_cast<u64>(hm >> 64) + static_cast<u64>(mid >> 64);
  // value = w2:w1:w0
  u128 hi = (static_cast<u128>(w2) << 64) | w1;
  if (shift >= 64) return static_cast<u64>(hi >> (shift - 64));
  if (shift == 0) return w0;
  return static_cast<u64>((hi << (64 - shift)) | (w0 >> shift));
}

void check_operands(u64 a, u64 b, const Modulus& mod) {
  if (a >= mod.q || b >= mod.q) {
    throw std::invalid_argument("barrett: operand not reduced modulo " + std::to_string(mod.q));
  }
}

}  // namespace

bool is_prime(u64 x) {
  if (x < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (x % p == 0) return x == p;
  }
  return miller_rabin(x);
}

std::vector<u64> prime_factors(u64 x) {
  std::vector<u64> out;
  for (u64 p = 2; p < 1000 && p * p <= x; ++p) {
    while (x % p == 0) {
      out.push_back(p);
      x /= p;
    }
  }
  factor_into(x, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Modulus barrett_precompute(u64 q) {
  if (q < 3 || q >= (u64{1} << 63)) {
    throw std::invalid_argument("barrett_precompute: modulus " + std::to_string(q) +
                                " outside [3, 2^63)");
  }
  if (!is_prime(q)) {
    throw std::invalid_argument("barrett_precompute: modulus " + std::to_string(q) +
                                " is not prime");
  }
  Modulus mod;
  mod.q = q;
  mod.k = static_cast<unsigned>(std::bit_width(q - 1));  // ceil(log2 q), q not a power of two
  mod.m = static_cast<u64>((u128{1} << (2 * mod.k)) / q);
  return mod;
}

Modulus ntt_modulus(u64 q, u64 n) {
  Modulus mod = barrett_precompute(q);
  if (n == 0 || (q - 1) % (2 * n) != 0) {
    throw std::invalid_argument("modulus " + std::to_string(q) + " is not 1 mod 2N for N=" +
                                std::to_string(n));
  }
  mod.two_n = 2 * n;
  mod.g = find_primitive_root(q);
  return mod;
}

BarrettTrace barrett_mul_soft_traced(u64 a, u64 b, const Modulus& mod) {
  check_operands(a, b, mod);
  BarrettTrace t;
  t.t1 = static_cast<u128>(a) * b;
  t.t2 = mul_shift_192(t.t1, mod.m, 2 * mod.k);
  t.t3 = static_cast<u128>(t.t2) * mod.q;
  t.t4 = static_cast<u64>(t.t1 - t.t3);
  t.z = t.t4 >= mod.q ? t.t4 - mod.q : t.t4;
  return t;
}

u64 barrett_mul_soft(u64 a, u64 b, const Modulus& mod) {
  check_operands(a, b, mod);
  const u128 t1 = static_cast<u128>(a) * b;
  const u64 t2 = mul_shift_192(t1, mod.m, 2 * mod.k);
  const u64 t4 = static_cast<u64>(t1 - static_cast<u128>(t2) * mod.q);
  return t4 >= mod.q ? t4 - mod.q : t4;
}

unsigned default_step_width(unsigned k) { return k <= 32 ? 32 : 64; }

namespace {

// Four half-width partial products, shifted and summed. Operands may be one
// bit wider than `width`, so the top parts are [W:W/2].
inline u128 step_value(u64 a, u64 b, unsigned width) {
  const unsigned half = width / 2;
  const u64 mask = (u64{1} << half) - 1;
  const u64 a_lo = a & mask, a_hi = a >> half;
  const u64 b_lo = b & mask, b_hi = b >> half;
  const u128 ll = static_cast<u128>(a_lo) * b_lo;
  const u128 cross = static_cast<u128>(a_lo) * b_hi + static_cast<u128>(a_hi) * b_lo;
  const u128 hh = static_cast<u128>(a_hi) * b_hi;
  return (hh << width) + (cross << half) + ll;
}

void check_width(const Modulus& mod, unsigned width) {
  if (width == 0 || width % 2 != 0 || width > 64) {
    throw std::invalid_argument("barrett_mul_hw: step width must be even and <= 64");
  }
  if (mod.k > width) {
    throw std::invalid_argument("barrett_mul_hw: modulus needs " + std::to_string(mod.k) +
                                " bits, step multiplier is " + std::to_string(width));
  }
}

}  // namespace

WordProduct step_multiply(u64 a, u64 b, unsigned width) {
  if (width == 0 || width % 2 != 0 || width > 64) {
    throw std::invalid_argument("step_multiply: width must be even and <= 64");
  }
  if (width < 64 && ((a >> (width + 1)) != 0 || (b >> (width + 1)) != 0)) {
    throw std::invalid_argument("step_multiply: operand wider than W+1 bits");
  }
  const u128 full = step_value(a, b, width);
  WordProduct p;
  p.width = width;
  if (width == 64) {
    p.lo = static_cast<u64>(full);
    p.hi = static_cast<u64>(full >> 64);
  } else {
    p.lo = static_cast<u64>(full) & ((u64{1} << width) - 1);
    p.hi = static_cast<u64>(full >> width);
  }
  return p;
}

BarrettTrace barrett_mul_hw_traced(u64 a, u64 b, const Modulus& mod, unsigned width) {
  check_operands(a, b, mod);
  check_width(mod, width);
  BarrettTrace t;
  t.t1 = step_value(a, b, width);
  t.t1_high = static_cast<u64>(t.t1 >> (mod.k - 1));
  t.t2 = static_cast<u64>(step_value(t.t1_high, mod.m, width) >> (mod.k + 1));
  t.t3 = step_value(t.t2, mod.q, width);
  t.t4 = static_cast<u64>(t.t1 - t.t3);
  const u64 two_q = 2 * mod.q;
  if (t.t4 >= two_q) {
    t.z = t.t4 - two_q;
  } else if (t.t4 >= mod.q) {
    t.z = t.t4 - mod.q;
  } else {
    t.z = t.t4;
  }
  return t;
}

u64 barrett_mul_hw(u64 a, u64 b, const Modulus& mod, unsigned width) {
  check_operands(a, b, mod);
  check_width(mod, width);
  const u128 t1 = step_value(a, b, width);
  const u64 t1_high = static_cast<u64>(t1 >> (mod.k - 1));
  const u64 t2 = static_cast<u64>(step_value(t1_high, mod.m, width) >> (mod.k + 1));
  const u64 t4 = static_cast<u64>(t1 - step_value(t2, mod.q, width));
  if (t4 >= 2 * mod.q) return t4 - 2 * mod.q;
  return t4 >= mod.q ? t4 - mod.q : t4;
}

u64 half_mod(u64 x, u64 q) {
  if (q % 2 == 0) throw std::invalid_argument("half_mod: modulus must be odd");
  if (x >= q) throw std::invalid_argument("half_mod: operand not reduced");
  if ((x & 1) == 0) return x >> 1;
  // (x >> 1) + (q + 1) / 2 < q for x < q, so no wrap is needed
  return (x >> 1) + ((q + 1) >> 1);
}

u64 mod_pow(u64 base, u64 exp, const Modulus& mod) {
  if (base >= mod.q) throw std::invalid_argument("mod_pow: base not reduced");
  u64 result = 1;
  while (exp) {
    if (exp & 1) result = barrett_mul_soft(result, base, mod);
    base = barrett_mul_soft(base, base, mod);
    exp >>= 1;
  }
  return result;
}

u64 find_primitive_root(u64 q) {
  const Modulus mod = barrett_precompute(q);
  const std::vector<u64> factors = prime_factors(q - 1);
  for (u64 g = 2; g < q; ++g) {
    bool generator = true;
    for (u64 p : factors) {
      if (mod_pow(g, (q - 1) / p, mod) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::runtime_error("no primitive root found for " + std::to_string(q));
}

u64 find_ntt_prime(unsigned bits, u64 n, unsigned index) {
  if (bits < 3 || bits > 62) throw std::invalid_argument("find_ntt_prime: bits must be in [3, 62]");
  const u64 step = 2 * n;
  if (n == 0 || (n & (n - 1)) != 0 || step >= (u64{1} << bits)) {
    throw std::invalid_argument("find_ntt_prime: N must be a power of two with 2N < 2^bits");
  }
  const u64 top = (u64{1} << bits) - 1;
  u64 candidate = ((top - 1) / step) * step + 1;
  unsigned seen = 0;
  while (candidate > step) {
    if (is_prime(candidate)) {
      if (seen == index) return candidate;
      ++seen;
    }
    candidate -= step;
  }
  throw std::runtime_error("find_ntt_prime: only " + std::to_string(seen) + " primes below 2^" +
                           std::to_string(bits) + " are 1 mod " + std::to_string(step));
}

}  // namespace nttacc
