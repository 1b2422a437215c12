#include "nttacc/rns.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace nttacc {

namespace {

u64 to_u64(const BigInt& x) { return x.convert_to<u64>(); }

void check_poly(const RnsPolynomial& p, const RnsBasis& basis, const char* what) {
  if (p.channels() != basis.size()) {
    throw std::invalid_argument(std::string(what) + ": channel count does not match basis");
  }
  for (std::size_t i = 0; i < p.channels(); ++i) {
    if (p.residue_polys[i].mod.q != basis.moduli[i].q) {
      throw std::invalid_argument(std::string(what) + ": channel modulus mismatch");
    }
    if (p.residue_polys[i].size() != p.length()) {
      throw std::invalid_argument(std::string(what) + ": channel lengths differ");
    }
  }
}

}  // namespace

unsigned bit_length(const BigInt& x) {
  return x == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(x)) + 1;
}

RnsBasis make_basis(const std::vector<u64>& primes, std::size_t n) {
  if (primes.empty()) throw std::invalid_argument("rns basis: at least one modulus required");
  if (std::set<u64>(primes.begin(), primes.end()).size() != primes.size()) {
    throw std::invalid_argument("rns basis: moduli must be distinct");
  }
  RnsBasis basis;
  basis.n = n;
  basis.big_q = 1;
  for (u64 q : primes) {
    basis.moduli.push_back(n > 0 ? ntt_modulus(q, n) : barrett_precompute(q));
    basis.big_q *= q;
  }
  for (const Modulus& mod : basis.moduli) {
    BigInt hat = basis.big_q / mod.q;
    const u64 hat_mod = to_u64(hat % mod.q);
    // q is prime, so the inverse is hat^(q-2)
    const u64 inv = mod_pow(hat_mod, mod.q - 2, mod);
    if (barrett_mul_soft(hat_mod, inv, mod) != 1) {
      throw std::logic_error("rns basis: CRT weight not invertible");
    }
    basis.q_hat.push_back(std::move(hat));
    basis.q_hat_inv.push_back(inv);
  }
  return basis;
}

RnsBasis gen_basis(unsigned word_bits, std::size_t n_q, std::size_t n) {
  if (n_q == 0) throw std::invalid_argument("gen_basis: n_q must be at least 1");
  std::vector<u64> primes;
  for (std::size_t i = 0; i < n_q; ++i) {
    primes.push_back(find_ntt_prime(word_bits, n, static_cast<unsigned>(i)));
  }
  return make_basis(primes, n);
}

RnsPolynomial decompose(const std::vector<BigInt>& coeffs, const RnsBasis& basis) {
  RnsPolynomial out;
  for (const Modulus& mod : basis.moduli) {
    std::vector<u64> residues(coeffs.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] < 0 || coeffs[j] >= basis.big_q) {
        throw std::invalid_argument("decompose: coefficient " + std::to_string(j) + " outside [0, Q)");
      }
      residues[j] = to_u64(coeffs[j] % mod.q);
    }
    out.residue_polys.emplace_back(std::move(residues), mod);
  }
  return out;
}

std::vector<BigInt> reconstruct(const RnsPolynomial& poly, const RnsBasis& basis) {
  check_poly(poly, basis, "reconstruct");
  std::vector<BigInt> out(poly.length());
  for (std::size_t j = 0; j < out.size(); ++j) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const u64 scaled = barrett_mul_soft(poly.residue_polys[i].coeffs[j], basis.q_hat_inv[i],
                                          basis.moduli[i]);
      acc += basis.q_hat[i] * scaled;
    }
    out[j] = acc % basis.big_q;
  }
  return out;
}

RnsPolynomial rns_polymul(const RnsPolynomial& a, const RnsPolynomial& b, const RnsBasis& basis) {
  check_poly(a, basis, "rns_polymul");
  check_poly(b, basis, "rns_polymul");
  if (a.length() != b.length()) throw std::invalid_argument("rns_polymul: length mismatch");
  RnsPolynomial out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.residue_polys.push_back(polymul_ntt(a.residue_polys[i], b.residue_polys[i], basis.moduli[i]));
  }
  return out;
}

}  // namespace nttacc
