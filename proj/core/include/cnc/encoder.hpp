// Pythagorean triples partition encoding.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "cnc/cnf.hpp"

namespace cnc {

/// a < b < c with a² + b² = c².
struct Triple {
  std::uint64_t a = 0, b = 0, c = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

bool is_pythagorean(std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// All triples with c ≤ n, sorted by (c, b, a).
std::vector<Triple> enumerate_triples(std::uint64_t n);

/// Fₙ: for each triple, (x_a ∨ x_b ∨ x_c) and (x̄_a ∨ x̄_b ∨ x̄_c). var_bound = n.
Formula encode(std::uint64_t n);

enum class Part : std::uint8_t { unassigned, positive, negative };

/// Assignment of 1..n to the positive / negative part.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::uint64_t n) : parts_(n + 1, Part::unassigned) {}
  static Partition from_assignment(std::uint64_t n, const PartialAssignment& tau);

  std::uint64_t size() const { return parts_.empty() ? 0 : parts_.size() - 1; }
  Part operator[](std::uint64_t i) const { return i < parts_.size() ? parts_[i] : Part::unassigned; }
  void set(std::uint64_t i, Part p);

 private:
  std::vector<Part> parts_;
};

struct PartitionValid {};
struct PartitionViolation {
  Triple triple;
};
using PartitionCheck = std::variant<PartitionValid, PartitionViolation>;

/// First monochromatic triple in (c, b, a) order, or PartitionValid.
/// Throws cnc::Error if a member of some triple is unassigned.
PartitionCheck check_partition(std::uint64_t n, const Partition& p);

struct OccurrenceStats {
  std::size_t occurring = 0;
  std::vector<std::size_t> counts;  ///< indexed by variable, clause memberships
  Var most_frequent = 0;            ///< 0 when no variable occurs
};

/// Ties for most_frequent go to the smallest index.
OccurrenceStats occurrence_stats(const Formula& f);

}  // namespace cnc
