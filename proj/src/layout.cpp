#include "nttacc/layout.hpp"

#include "json.hpp"
#include <ostream>
#include <stdexcept>

namespace nttacc {

std::string to_string(LayoutKind kind) {
  return kind == LayoutKind::shifted ? "shifted" : "sequential";
}

LayoutKind parse_layout_kind(const std::string& name) {
  if (name == "shifted") return LayoutKind::shifted;
  if (name == "sequential") return LayoutKind::sequential;
  throw std::invalid_argument("unknown layout '" + name + "' (expected shifted or sequential)");
}

Placement place(std::size_t i, std::size_t n) {
  if (n == 0 || i >= n * n) {
    throw std::out_of_range("place: index " + std::to_string(i) + " outside [0, n^2)");
  }
  const std::size_t row = i / n;
  return {row, (i % n + row) % n};
}

std::size_t coefficient_at(std::size_t address, std::size_t bank, std::size_t n) {
  if (address >= n || bank >= n) throw std::out_of_range("coefficient_at: cell outside n x n");
  return address * n + (bank + n - address) % n;
}

std::size_t bank_count_for(std::size_t degree) {
  if (degree == 0 || (degree & (degree - 1)) != 0) {
    throw std::invalid_argument("N=" + std::to_string(degree) + " is not a power of two");
  }
  std::size_t n = 1;
  while (n * n < degree) n <<= 1;
  if (n * n != degree) {
    throw std::invalid_argument("N=" + std::to_string(degree) +
                                " has odd log2 N; the banked layout needs N = n^2");
  }
  if (n <= 2) throw std::invalid_argument("N=" + std::to_string(degree) + " too small; need N > 4");
  return n;
}

LayoutMap::LayoutMap(std::size_t degree, LayoutKind kind)
    : degree_(degree), n_(bank_count_for(degree)), kind_(kind) {}

Placement LayoutMap::place(std::size_t i) const {
  if (kind_ == LayoutKind::shifted) return nttacc::place(i, n_);
  if (i >= degree_) throw std::out_of_range("place: index outside [0, N)");
  return {i / n_, i % n_};
}

std::size_t LayoutMap::coefficient_at(std::size_t address, std::size_t bank) const {
  if (kind_ == LayoutKind::shifted) return nttacc::coefficient_at(address, bank, n_);
  if (address >= n_ || bank >= n_) throw std::out_of_range("coefficient_at: cell outside n x n");
  return address * n_ + bank;
}

ConflictReport verify_conflict_free(std::size_t degree, LayoutKind kind) {
  const LayoutMap map(degree, kind);
  ConflictReport report;
  report.degree = degree;
  report.kind = kind;
  for (std::size_t i = 0; i < degree; ++i) {
    const std::size_t bank = map.place(i).bank;
    for (std::size_t step = 1; step < degree; step <<= 1) {
      // i - step is covered when the lower index is visited
      const std::size_t partner = i + step;
      if (partner >= degree) break;
      ++report.pairs_checked;
      if (map.place(partner).bank == bank) report.violations.push_back({i, partner, bank});
    }
  }
  return report;
}

void write_json_lines(std::ostream& os, const ConflictReport& report) {
  nlohmann::ordered_json summary;
  summary["N"] = report.degree;
  summary["layout"] = to_string(report.kind);
  summary["pairs_checked"] = report.pairs_checked;
  summary["violations"] = report.violations.size();
  os << summary.dump() << '\n';
  for (const auto& v : report.violations) {
    nlohmann::ordered_json line;
    line["index"] = v.index;
    line["partner"] = v.partner;
    line["bank"] = v.bank;
    os << line.dump() << '\n';
  }
}

}  // namespace nttacc
