#include "cnc/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnc/error.hpp"

namespace cnc {
namespace {

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

bool is_pythagorean(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  if (a == 0 || b == 0 || c == 0) return false;
  // Bounds keep the squares inside 64 bits.
  if (c > 3'000'000'000ULL) return false;
  return a * a + b * b == c * c;
}

std::vector<Triple> enumerate_triples(std::uint64_t n) {
  std::vector<Triple> out;
  const std::uint64_t n2 = n * n;
  for (std::uint64_t a = 1; 2 * a * a < n2; ++a) {
    for (std::uint64_t b = a + 1; a * a + b * b <= n2; ++b) {
      std::uint64_t s = a * a + b * b;
      std::uint64_t c = isqrt(s);
      if (c * c == s) out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end(), [](const Triple& x, const Triple& y) {
    if (x.c != y.c) return x.c < y.c;
    if (x.b != y.b) return x.b < y.b;
    return x.a < y.a;
  });
  return out;
}

Formula encode(std::uint64_t n) {
  if (n > INT32_MAX) throw Error("encode: n too large for DIMACS literals");
  Formula f(static_cast<Var>(n));
  for (const auto& t : enumerate_triples(n)) {
    auto a = static_cast<std::int32_t>(t.a), b = static_cast<std::int32_t>(t.b),
         c = static_cast<std::int32_t>(t.c);
    f.add(Clause{a, b, c});
    f.add(Clause{-a, -b, -c});
  }
  return f;
}

Partition Partition::from_assignment(std::uint64_t n, const PartialAssignment& tau) {
  Partition p(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    auto v = tau(Literal::positive(static_cast<Var>(i)));
    if (v) p.set(i, *v ? Part::positive : Part::negative);
  }
  return p;
}

void Partition::set(std::uint64_t i, Part p) {
  if (i == 0) throw Error("partition domain starts at 1");
  if (i >= parts_.size()) parts_.resize(i + 1, Part::unassigned);
  parts_[i] = p;
}

PartitionCheck check_partition(std::uint64_t n, const Partition& p) {
  for (const auto& t : enumerate_triples(n)) {
    Part pa = p[t.a], pb = p[t.b], pc = p[t.c];
    for (auto [idx, part] : {std::pair{t.a, pa}, std::pair{t.b, pb}, std::pair{t.c, pc}})
      if (part == Part::unassigned)
        throw Error("check_partition: " + std::to_string(idx) +
                    " belongs to a triple but is unassigned");
    if (pa == pb && pb == pc) return PartitionViolation{t};
  }
  return PartitionValid{};
}

OccurrenceStats occurrence_stats(const Formula& f) {
  OccurrenceStats s;
  s.counts.assign(static_cast<std::size_t>(f.var_bound()) + 1, 0);
  std::vector<std::size_t> stamp(s.counts.size(), SIZE_MAX);
  for (std::size_t ci = 0; ci < f.size(); ++ci)
    for (Literal l : f[ci])
      if (stamp[l.var()] != ci) {
        stamp[l.var()] = ci;
        ++s.counts[l.var()];
      }
  for (Var v = 1; v < s.counts.size(); ++v) {
    if (s.counts[v] == 0) continue;
    ++s.occurring;
    if (s.most_frequent == 0 || s.counts[v] > s.counts[s.most_frequent]) s.most_frequent = v;
  }
  return s;
}

}  // namespace cnc
