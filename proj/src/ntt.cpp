#include "nttacc/ntt.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nttacc {

Polynomial::Polynomial(std::vector<u64> c, Modulus m) : coeffs(std::move(c)), mod(std::move(m)) {
  for (u64 v : coeffs) {
    if (v >= mod.q) throw std::invalid_argument("polynomial coefficient not reduced");
  }
}

Polynomial Polynomial::zero(std::size_t n, const Modulus& m) {
  return Polynomial(std::vector<u64>(n, 0), m);
}

unsigned log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("length " + std::to_string(n) + " is not a power of two");
  }
  unsigned l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

std::size_t bit_reverse(std::size_t x, unsigned bits) {
  std::size_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | ((x >> i) & 1);
  }
  return r;
}

TwiddleTable gen_twiddles(const Modulus& mod, std::size_t n) {
  const unsigned bits = log2_exact(n);
  if (n < 2) throw std::invalid_argument("gen_twiddles: N must be at least 2");
  if ((mod.q - 1) % (2 * n) != 0) {
    throw std::invalid_argument("gen_twiddles: q=" + std::to_string(mod.q) +
                                " is not 1 mod 2N for N=" + std::to_string(n));
  }
  if (!mod.g) throw std::invalid_argument("gen_twiddles: modulus has no primitive root");

  TwiddleTable tw;
  tw.mod = mod;
  tw.psi = mod_pow(*mod.g, (mod.q - 1) / (2 * n), mod);
  tw.psi_inv = mod_pow(tw.psi, 2 * n - 1, mod);
  tw.forward.resize(n);
  tw.inverse.resize(n);
  u64 p = 1, pi = 1;
  std::vector<u64> pow(n), pow_inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    pow[j] = p;
    pow_inv[j] = pi;
    p = barrett_mul_soft(p, tw.psi, mod);
    pi = barrett_mul_soft(pi, tw.psi_inv, mod);
  }
  for (std::size_t j = 0; j < n; ++j) {
    tw.forward[j] = pow[bit_reverse(j, bits)];
    tw.inverse[j] = pow_inv[bit_reverse(j, bits)];
  }
  return tw;
}

Pair ct_butterfly(u64 a, u64 b, u64 w, const Modulus& mod) {
  const u64 bw = barrett_mul_hw(b, w, mod);
  return {add_mod(a, bw, mod.q), sub_mod(a, bw, mod.q)};
}

Pair gs_butterfly(u64 a, u64 b, u64 w_inv, const Modulus& mod) {
  const u64 sum = half_mod(add_mod(a, b, mod.q), mod.q);
  const u64 diff = half_mod(sub_mod(a, b, mod.q), mod.q);
  return {sum, barrett_mul_hw(diff, w_inv, mod)};
}

namespace {

void check_lengths(const Polynomial& p, const TwiddleTable& tw) {
  if (p.size() != tw.size()) {
    throw std::invalid_argument("transform: polynomial length " + std::to_string(p.size()) +
                                " does not match twiddle table length " +
                                std::to_string(tw.size()));
  }
  if (p.mod.q != tw.mod.q) throw std::invalid_argument("transform: modulus mismatch");
}

}  // namespace

Polynomial ntt_ct(const Polynomial& poly, const TwiddleTable& tw, const ButterflyObserver& observer) {
  check_lengths(poly, tw);
  Polynomial out = poly;
  auto& a = out.coeffs;
  const std::size_t n = a.size();
  const unsigned stages = log2_exact(n);
  for (unsigned s = 0; s < stages; ++s) {
    const std::size_t groups = std::size_t{1} << s;
    const std::size_t gap = n >> (s + 1);
    for (std::size_t r = 0; r < groups; ++r) {
      const std::size_t tw_idx = groups + r;
      const u64 w = tw.forward[tw_idx];
      const std::size_t base = r * 2 * gap;
      for (std::size_t j = base; j < base + gap; ++j) {
        const Pair p = ct_butterfly(a[j], a[j + gap], w, out.mod);
        a[j] = p.top;
        a[j + gap] = p.bottom;
        if (observer) observer({s, j, j + gap, tw_idx});
      }
    }
  }
  return out;
}

Polynomial intt_gs(const Polynomial& evals, const TwiddleTable& tw, const ButterflyObserver& observer) {
  check_lengths(evals, tw);
  Polynomial out = evals;
  auto& a = out.coeffs;
  const std::size_t n = a.size();
  const unsigned stages = log2_exact(n);
  for (unsigned step = 0; step < stages; ++step) {
    const unsigned s = stages - 1 - step;
    const std::size_t groups = std::size_t{1} << s;
    const std::size_t gap = n >> (s + 1);
    for (std::size_t r = 0; r < groups; ++r) {
      const std::size_t tw_idx = groups + r;
      const u64 w = tw.inverse[tw_idx];
      const std::size_t base = r * 2 * gap;
      for (std::size_t j = base; j < base + gap; ++j) {
        const Pair p = gs_butterfly(a[j], a[j + gap], w, out.mod);
        a[j] = p.top;
        a[j + gap] = p.bottom;
        if (observer) observer({step, j, j + gap, tw_idx});
      }
    }
  }
  return out;
}

Polynomial pointwise_mul(const Polynomial& a, const Polynomial& b, const Modulus& mod) {
  if (a.size() != b.size()) throw std::invalid_argument("pointwise_mul: length mismatch");
  if (a.mod.q != mod.q || b.mod.q != mod.q) {
    throw std::invalid_argument("pointwise_mul: modulus mismatch");
  }
  Polynomial c = Polynomial::zero(a.size(), mod);
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.coeffs[i] = barrett_mul_hw(a.coeffs[i], b.coeffs[i], mod);
  }
  return c;
}

Polynomial polymul_ntt(const Polynomial& a, const Polynomial& b, const Modulus& mod) {
  if (a.size() != b.size()) throw std::invalid_argument("polymul_ntt: length mismatch");
  const TwiddleTable tw = gen_twiddles(mod.g ? mod : ntt_modulus(mod.q, a.size()), a.size());
  const Polynomial fa = ntt_ct(a, tw);
  const Polynomial fb = ntt_ct(b, tw);
  return intt_gs(pointwise_mul(fa, fb, mod), tw);
}

Polynomial schoolbook_negacyclic(const Polynomial& a, const Polynomial& b, const Modulus& mod) {
  if (a.size() != b.size()) throw std::invalid_argument("schoolbook: length mismatch");
  if (a.mod.q != mod.q || b.mod.q != mod.q) throw std::invalid_argument("schoolbook: modulus mismatch");
  const std::size_t n = a.size();
  const u64 q = mod.q;
  // Positive and negative parts accumulate separately and reduce once per
  // output. Below 2^32 the raw products sum safely in 128 bits for any
  // N < 2^64; larger moduli reduce each product first.
  const bool small = q <= (u64{1} << 32);
  auto term = [&](u64 x, u64 y) {
    const u128 p = static_cast<u128>(x) * y;
    return small ? p : p % q;
  };
  Polynomial c = Polynomial::zero(n, mod);
  for (std::size_t k = 0; k < n; ++k) {
    u128 pos = 0, neg = 0;
    for (std::size_t i = 0; i <= k; ++i) pos += term(a.coeffs[i], b.coeffs[k - i]);
    for (std::size_t i = k + 1; i < n; ++i) neg += term(a.coeffs[i], b.coeffs[n + k - i]);
    c.coeffs[k] = sub_mod(static_cast<u64>(pos % q), static_cast<u64>(neg % q), q);
  }
  return c;
}

void write_polynomial(std::ostream& os, const Polynomial& p) {
  os << p.size() << ' ' << p.mod.q << '\n';
  for (u64 v : p.coeffs) os << v << '\n';
}

Polynomial read_polynomial(std::istream& is) {
  std::size_t n = 0;
  u64 q = 0;
  if (!(is >> n >> q)) throw std::invalid_argument("polynomial file: missing 'N q' header");
  log2_exact(n);
  const Modulus mod = barrett_precompute(q);
  std::vector<u64> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(is >> c[i])) {
      throw std::invalid_argument("polynomial file: expected " + std::to_string(n) +
                                  " coefficients, got " + std::to_string(i));
    }
    if (c[i] >= q) throw std::invalid_argument("polynomial file: coefficient " + std::to_string(i) + " >= q");
  }
  return Polynomial(std::move(c), mod);
}

}  // namespace nttacc
