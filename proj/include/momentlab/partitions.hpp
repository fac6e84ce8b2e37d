#pragma once

// Integer partitions of p into m parts and the exact coefficients that
// appear when E(X_1 + ... + X_n)^p is grouped by the multiset of exponents.

#include "momentlab/numeric.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace momentlab {

/// Hard ceiling on the order p handled by any exact table.
inline constexpr unsigned kMaxOrder = 64;

/// A multiset of positive integers, stored as its sorted parts vector.
class Partition {
 public:
  struct Multiplicity {
    unsigned value;
    unsigned count;
    friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
  };

  Partition() = default;

  /// Sorts `parts` and derives the multiplicity table.
  static Partition from_parts(std::vector<unsigned> parts) {
    if (parts.empty()) throw DomainError("partition must have at least one part");
    std::sort(parts.begin(), parts.end());
    if (parts.front() == 0) throw DomainError("partition parts must be positive");
    Partition q;
    q.parts_ = std::move(parts);
    for (const unsigned v : q.parts_) {
      q.order_ += v;
      if (q.multiplicities_.empty() || q.multiplicities_.back().value != v) {
        q.multiplicities_.push_back({v, 1});
      } else {
        ++q.multiplicities_.back().count;
      }
    }
    return q;
  }

  const std::vector<unsigned>& parts() const { return parts_; }
  /// p, the sum of the parts.
  unsigned order() const { return order_; }
  /// m, the number of parts.
  unsigned size() const { return static_cast<unsigned>(parts_.size()); }
  /// (value, count) pairs, one per distinct part, ascending by value.
  const std::vector<Multiplicity>& multiplicities() const { return multiplicities_; }
  unsigned largest_part() const { return parts_.back(); }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i != 0) s += ',';
      s += std::to_string(parts_[i]);
    }
    return s + "}";
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<unsigned> parts_;
  unsigned order_ = 0;
  std::vector<Multiplicity> multiplicities_;
};

namespace detail {

inline void check_order(unsigned p, const char* what) {
  if (p > kMaxOrder) {
    throw CapacityError(std::string(what) + ": order " + std::to_string(p) +
                        " exceeds the ceiling " + std::to_string(kMaxOrder));
  }
}

struct CombinatoricTables {
  std::array<Integer, kMaxOrder + 1> factorial;
  std::vector<std::vector<Integer>> stirling2;  // [p][k]

  CombinatoricTables() : stirling2(kMaxOrder + 1, std::vector<Integer>(kMaxOrder + 1, 0)) {
    factorial[0] = 1;
    for (unsigned k = 1; k <= kMaxOrder; ++k) factorial[k] = factorial[k - 1] * k;
    stirling2[0][0] = 1;
    for (unsigned p = 1; p <= kMaxOrder; ++p) {
      for (unsigned k = 1; k <= p; ++k) {
        stirling2[p][k] = k * stirling2[p - 1][k] + stirling2[p - 1][k - 1];
      }
    }
  }
};

// Built once; read-only afterwards, so concurrent readers are safe.
inline const CombinatoricTables& tables() {
  static const CombinatoricTables t;
  return t;
}

inline void enumerate_into(unsigned remaining, unsigned slots, unsigned min_part,
                           std::vector<unsigned>& prefix, std::vector<Partition>& out) {
  if (slots == 1) {
    prefix.push_back(remaining);
    out.push_back(Partition::from_parts(prefix));
    prefix.pop_back();
    return;
  }
  // The remaining slots-1 parts are each >= part, so part <= remaining/slots.
  for (unsigned part = min_part; part * slots <= remaining; ++part) {
    prefix.push_back(part);
    enumerate_into(remaining - part, slots - 1, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

inline const Integer& factorial(unsigned k) {
  detail::check_order(k, "factorial");
  return detail::tables().factorial[k];
}

/// Q_m: all partitions of p into exactly m parts, lexicographic on the
/// sorted parts vector.
inline std::vector<Partition> enumerate_partitions(unsigned p, unsigned m) {
  if (m < 1 || m > p) {
    throw DomainError("enumerate_partitions requires 1 <= m <= p (got p=" + std::to_string(p) +
                      ", m=" + std::to_string(m) + ")");
  }
  detail::check_order(p, "enumerate_partitions");
  std::vector<Partition> out;
  std::vector<unsigned> prefix;
  prefix.reserve(m);
  detail::enumerate_into(p, m, 1, prefix, out);
  return out;
}

/// alpha(q) = product of factorials of the multiplicities.
inline Integer alpha(const Partition& q) {
  Integer a = 1;
  for (const auto& [value, count] : q.multiplicities()) a *= factorial(count);
  return a;
}

/// beta(q) = p! / (alpha(q) * q_1! ... q_m!).
inline Rational beta(const Partition& q) {
  Integer den = alpha(q);
  for (const unsigned part : q.parts()) den *= factorial(part);
  return canonical(Rational(factorial(q.order()), den));
}

/// Stirling number of the second kind; zero when k > p.
inline Integer stirling2(unsigned p, unsigned k) {
  detail::check_order(p, "stirling2");
  if (k > p) return 0;
  return detail::tables().stirling2[p][k];
}

/// n (n-1) ... (n-m+1); 1 when m = 0 and 0 when m > n.
inline Integer falling_factorial(unsigned long n, unsigned long m) {
  if (m > n) return 0;
  Integer r = 1;
  for (unsigned long i = 0; i < m; ++i) r *= n - i;
  return r;
}

}  // namespace momentlab
