#pragma once

// Core data model: symmetric finitely supported real sequences on Z^d, index
// sets inside the half-space Z_+^d, and sign-support cone membership.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conedual {

/// A point of Z^d.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> coords);
  MultiIndex(std::initializer_list<int> coords) : coords_(coords) {}

  static MultiIndex zero(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  int operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<int>& coords() const { return coords_; }

  bool is_zero() const;
  // Membership in Z_+^d: the first nonzero coordinate is strictly positive.
  bool is_positive() const;
  // Representative of {n, -n} lying in {0} ∪ Z_+^d.
  MultiIndex canonical() const;
  MultiIndex operator-() const;

  double norm2() const;
  int max_abs() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> coords_;
};

// Keys of the sequence literal format: comma-joined coordinates, e.g. "1,-2".
std::string format_index_key(const MultiIndex& n);
MultiIndex parse_index_key(std::string_view key, int dim);

/// Finite subset of Z_+^d (never contains 0).
class IndexSet {
 public:
  explicit IndexSet(int dim) : dim_(dim) {}
  IndexSet(int dim, std::set<MultiIndex> elements);
  // d = 1 convenience: {k1, k2, ...} with every k > 0.
  static IndexSet of_integers(std::initializer_list<int> ks);
  static IndexSet of_integers(std::span<const int> ks);

  int dim() const { return dim_; }
  bool contains(const MultiIndex& n) const { return elements_.contains(n); }
  bool empty() const { return elements_.empty(); }
  std::size_t size() const { return elements_.size(); }
  const std::set<MultiIndex>& elements() const { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  IndexSet intersection(const IndexSet& other) const;
  IndexSet difference(const IndexSet& other) const;
  IndexSet set_union(const IndexSet& other) const;

  bool operator==(const IndexSet&) const = default;

 private:
  int dim_;
  std::set<MultiIndex> elements_;
};

/// Finitely supported symmetric real function on Z^d. Only canonical
/// representatives ({0} ∪ Z_+^d) are stored, so f(-n) = f(n) holds by
/// construction. Exact zeros are not stored.
class SymmetricSequence {
 public:
  explicit SymmetricSequence(int dim) : dim_(dim) {}
  // Keys may be any representative; n and -n must not disagree.
  SymmetricSequence(int dim, const std::map<MultiIndex, double>& values);

  // The indicator of {0}.
  static SymmetricSequence delta(int dim);
  // d = 1: coefficients[k] is the value at ±k.
  static SymmetricSequence from_coefficients(std::span<const double> coefficients);
  static SymmetricSequence from_coefficients(std::initializer_list<double> coefficients);

  int dim() const { return dim_; }
  double value_at(const MultiIndex& n) const;
  double value_at(int k) const;  // d = 1
  double at_zero() const;

  // Canonical entries, keyed by representatives in {0} ∪ Z_+^d.
  const std::map<MultiIndex, double>& entries() const { return entries_; }
  // Canonical support without 0.
  std::vector<MultiIndex> positive_support() const;
  // max |n|_inf over the support (0 for multiples of delta).
  int support_radius() const;
  // Sum over all of Z^d of |f(n)|.
  double l1_norm() const;

  // d = 1: values at 0..max(radius, min_length-1).
  std::vector<double> coefficients(std::size_t min_length = 0) const;

  SymmetricSequence operator+(const SymmetricSequence& other) const;
  SymmetricSequence operator-(const SymmetricSequence& other) const;
  SymmetricSequence scaled(double factor) const;
  // Returns a copy with the value at ±n replaced.
  SymmetricSequence with(const MultiIndex& n, double value) const;

  bool operator==(const SymmetricSequence&) const = default;

 private:
  int dim_;
  std::map<MultiIndex, double> entries_;
};

/// Sign classes of a canonical nonzero index under the pattern (M, L).
enum class SignClass {
  kFree,         // M ∩ L: either sign
  kNonnegative,  // M \ L
  kNonpositive,  // L \ M
  kOutside,      // not in M ∪ L: must vanish
};

/// Positive support confined to {0} ∪ ±M, negative support to {0} ∪ ±L.
class SignSupportPattern {
 public:
  SignSupportPattern(IndexSet m, IndexSet l);

  int dim() const { return m_.dim(); }
  const IndexSet& m() const { return m_; }
  const IndexSet& l() const { return l_; }
  const IndexSet& free_part() const { return free_; }
  const IndexSet& nonnegative_part() const { return nonnegative_; }
  const IndexSet& nonpositive_part() const { return nonpositive_; }
  IndexSet combined() const { return m_.set_union(l_); }

  SignClass classify(const MultiIndex& n) const;
  int max_index() const;

 private:
  IndexSet m_, l_;
  IndexSet free_, nonnegative_, nonpositive_;
};

bool in_cone_C(const SymmetricSequence& f, const SignSupportPattern& pattern);
bool in_polar_cone_Cminus(const SymmetricSequence& t, const SignSupportPattern& pattern);

/// Σ_{n ∈ Z^d} f(n) h(n) = f(0)h(0) + 2 Σ_{n ∈ Z_+^d} f(n) h(n).
double pairing(const SymmetricSequence& f, const SymmetricSequence& h);

}  // namespace conedual
