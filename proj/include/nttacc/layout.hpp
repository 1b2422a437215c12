#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nttacc {

enum class LayoutKind {
  shifted,     // row r rotated right by r banks
  sequential,  // bank = i mod n, kept as the conflicting baseline
};

std::string to_string(LayoutKind kind);
LayoutKind parse_layout_kind(const std::string& name);

struct Placement {
  std::size_t address;
  std::size_t bank;

  friend bool operator==(const Placement&, const Placement&) = default;
};

Placement place(std::size_t i, std::size_t n);
std::size_t coefficient_at(std::size_t address, std::size_t bank, std::size_t n);

/// Placement of N = n*n coefficients in n banks of depth n.
class LayoutMap {
 public:
  explicit LayoutMap(std::size_t degree, LayoutKind kind = LayoutKind::shifted);

  [[nodiscard]] std::size_t degree() const { return degree_; }
  [[nodiscard]] std::size_t banks() const { return n_; }
  [[nodiscard]] LayoutKind kind() const { return kind_; }

  [[nodiscard]] Placement place(std::size_t i) const;
  [[nodiscard]] std::size_t coefficient_at(std::size_t address, std::size_t bank) const;

 private:
  std::size_t degree_;
  std::size_t n_;
  LayoutKind kind_;
};

/// sqrt(N) for N = 4^j with N > 4; throws otherwise.
std::size_t bank_count_for(std::size_t degree);

struct ConflictViolation {
  std::size_t index;
  std::size_t partner;
  std::size_t bank;
};

struct ConflictReport {
  std::size_t degree = 0;
  LayoutKind kind = LayoutKind::shifted;
  std::size_t pairs_checked = 0;
  std::vector<ConflictViolation> violations;

  [[nodiscard]] bool conflict_free() const { return violations.empty(); }
};

/// Checks bank(i) != bank(i +- 2^t) for every i and every partner in range.
ConflictReport verify_conflict_free(std::size_t degree, LayoutKind kind = LayoutKind::shifted);

/// One JSON object per line: a summary line, then one line per violation.
void write_json_lines(std::ostream& os, const ConflictReport& report);

}  // namespace nttacc
