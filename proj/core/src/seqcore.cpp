#include "conedual/seqcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "conedual/error.hpp"

namespace conedual {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> coords) : coords_(std::move(coords)) {}

MultiIndex MultiIndex::zero(int dim) {
  if (dim < 1) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

bool MultiIndex::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
}

bool MultiIndex::is_positive() const {
  for (int c : coords_) {
    if (c != 0) return c > 0;
  }
  return false;
}

MultiIndex MultiIndex::operator-() const {
  std::vector<int> neg(coords_.size());
  std::transform(coords_.begin(), coords_.end(), neg.begin(), [](int c) { return -c; });
  return MultiIndex(std::move(neg));
}

MultiIndex MultiIndex::canonical() const {
  if (is_zero() || is_positive()) return *this;
  return -*this;
}

double MultiIndex::norm2() const {
  double s = 0.0;
  for (int c : coords_) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

int MultiIndex::max_abs() const {
  int m = 0;
  for (int c : coords_) m = std::max(m, std::abs(c));
  return m;
}

std::string format_index_key(const MultiIndex& n) {
  std::string out;
  for (int i = 0; i < n.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(n[static_cast<std::size_t>(i)]);
  }
  return out;
}

MultiIndex parse_index_key(std::string_view key, int dim) {
  std::vector<int> coords;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = key.find(',', pos);
    std::string_view part = key.substr(pos, comma == std::string_view::npos ? key.npos : comma - pos);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw std::invalid_argument("bad index key '" + std::string(key) + "'");
    }
    coords.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(coords.size()) != dim) {
    throw DimensionMismatch("index key '" + std::string(key) + "' does not have " +
                            std::to_string(dim) + " coordinates");
  }
  return MultiIndex(std::move(coords));
}

IndexSet::IndexSet(int dim, std::set<MultiIndex> elements) : dim_(dim), elements_(std::move(elements)) {
  if (dim < 1) throw std::invalid_argument("IndexSet: dimension must be >= 1");
  for (const auto& n : elements_) {
    require_same_dim(n.dim(), dim, "IndexSet element");
    if (!n.is_positive()) {
      throw std::invalid_argument("IndexSet element " + format_index_key(n) + " is not in Z_+^d");
    }
  }
}

IndexSet IndexSet::of_integers(std::initializer_list<int> ks) {
  return of_integers(std::span<const int>(ks.begin(), ks.size()));
}

IndexSet IndexSet::of_integers(std::span<const int> ks) {
  std::set<MultiIndex> s;
  for (int k : ks) s.insert(MultiIndex{k});
  return IndexSet(1, std::move(s));
}

IndexSet IndexSet::intersection(const IndexSet& other) const {
  require_same_dim(dim_, other.dim_, "IndexSet::intersection");
  std::set<MultiIndex> out;
  std::set_intersection(elements_.begin(), elements_.end(), other.elements_.begin(),
                        other.elements_.end(), std::inserter(out, out.end()));
  return IndexSet(dim_, std::move(out));
}

IndexSet IndexSet::difference(const IndexSet& other) const {
  require_same_dim(dim_, other.dim_, "IndexSet::difference");
  std::set<MultiIndex> out;
  std::set_difference(elements_.begin(), elements_.end(), other.elements_.begin(),
                      other.elements_.end(), std::inserter(out, out.end()));
  return IndexSet(dim_, std::move(out));
}

IndexSet IndexSet::set_union(const IndexSet& other) const {
  require_same_dim(dim_, other.dim_, "IndexSet::set_union");
  std::set<MultiIndex> out = elements_;
  out.insert(other.elements_.begin(), other.elements_.end());
  return IndexSet(dim_, std::move(out));
}

SymmetricSequence::SymmetricSequence(int dim, const std::map<MultiIndex, double>& values) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("SymmetricSequence: dimension must be >= 1");
  for (const auto& [n, v] : values) {
    require_same_dim(n.dim(), dim, "SymmetricSequence entry");
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SymmetricSequence: non-finite value at " + format_index_key(n));
    }
    const MultiIndex key = n.canonical();
    if (auto it = entries_.find(key); it != entries_.end()) {
      if (it->second != v) {
        throw std::invalid_argument("SymmetricSequence: values at ±" + format_index_key(key) +
                                    " disagree");
      }
      continue;
    }
    if (v != 0.0) entries_.emplace(key, v);
  }
}

SymmetricSequence SymmetricSequence::delta(int dim) {
  return SymmetricSequence(dim, {{MultiIndex::zero(dim), 1.0}});
}

SymmetricSequence SymmetricSequence::from_coefficients(std::span<const double> coefficients) {
  std::map<MultiIndex, double> values;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    values.emplace(MultiIndex{static_cast<int>(k)}, coefficients[k]);
  }
  return SymmetricSequence(1, values);
}

SymmetricSequence SymmetricSequence::from_coefficients(std::initializer_list<double> coefficients) {
  return from_coefficients(std::span<const double>(coefficients.begin(), coefficients.size()));
}

double SymmetricSequence::value_at(const MultiIndex& n) const {
  require_same_dim(n.dim(), dim_, "SymmetricSequence::value_at");
  const auto it = entries_.find(n.canonical());
  return it == entries_.end() ? 0.0 : it->second;
}

double SymmetricSequence::value_at(int k) const { return value_at(MultiIndex{k}); }

double SymmetricSequence::at_zero() const { return value_at(MultiIndex::zero(dim_)); }

std::vector<MultiIndex> SymmetricSequence::positive_support() const {
  std::vector<MultiIndex> out;
  out.reserve(entries_.size());
  for (const auto& [n, v] : entries_) {
    if (!n.is_zero()) out.push_back(n);
  }
  return out;
}

int SymmetricSequence::support_radius() const {
  int r = 0;
  for (const auto& [n, v] : entries_) r = std::max(r, n.max_abs());
  return r;
}

double SymmetricSequence::l1_norm() const {
  double s = 0.0;
  for (const auto& [n, v] : entries_) s += (n.is_zero() ? 1.0 : 2.0) * std::abs(v);
  return s;
}

std::vector<double> SymmetricSequence::coefficients(std::size_t min_length) const {
  if (dim_ != 1) throw DimensionMismatch("coefficients() requires d = 1");
  std::vector<double> out(std::max<std::size_t>(min_length, static_cast<std::size_t>(support_radius()) + 1), 0.0);
  for (const auto& [n, v] : entries_) out[static_cast<std::size_t>(n[0])] = v;
  return out;
}

SymmetricSequence SymmetricSequence::operator+(const SymmetricSequence& other) const {
  require_same_dim(dim_, other.dim_, "SymmetricSequence::operator+");
  std::map<MultiIndex, double> sum = entries_;
  for (const auto& [n, v] : other.entries_) sum[n] += v;
  return SymmetricSequence(dim_, sum);
}

SymmetricSequence SymmetricSequence::operator-(const SymmetricSequence& other) const {
  return *this + other.scaled(-1.0);
}

SymmetricSequence SymmetricSequence::scaled(double factor) const {
  std::map<MultiIndex, double> out;
  for (const auto& [n, v] : entries_) out.emplace(n, v * factor);
  return SymmetricSequence(dim_, out);
}

SymmetricSequence SymmetricSequence::with(const MultiIndex& n, double value) const {
  require_same_dim(n.dim(), dim_, "SymmetricSequence::with");
  std::map<MultiIndex, double> out = entries_;
  out[n.canonical()] = value;
  return SymmetricSequence(dim_, out);
}

SignSupportPattern::SignSupportPattern(IndexSet m, IndexSet l)
    : m_(std::move(m)),
      l_(std::move(l)),
      free_(m_.intersection(l_)),
      nonnegative_(m_.difference(l_)),
      nonpositive_(l_.difference(m_)) {}

SignClass SignSupportPattern::classify(const MultiIndex& n) const {
  const MultiIndex key = n.canonical();
  if (free_.contains(key)) return SignClass::kFree;
  if (nonnegative_.contains(key)) return SignClass::kNonnegative;
  if (nonpositive_.contains(key)) return SignClass::kNonpositive;
  return SignClass::kOutside;
}

int SignSupportPattern::max_index() const {
  int r = 0;
  for (const auto& n : m_) r = std::max(r, n.max_abs());
  for (const auto& n : l_) r = std::max(r, n.max_abs());
  return r;
}

bool in_cone_C(const SymmetricSequence& f, const SignSupportPattern& pattern) {
  require_same_dim(f.dim(), pattern.dim(), "in_cone_C");
  for (const auto& [n, v] : f.entries()) {
    if (n.is_zero()) continue;
    switch (pattern.classify(n)) {
      case SignClass::kFree:
        break;
      case SignClass::kNonnegative:
        if (v < 0.0) return false;
        break;
      case SignClass::kNonpositive:
        if (v > 0.0) return false;
        break;
      case SignClass::kOutside:
        return false;
    }
  }
  return true;
}

bool in_polar_cone_Cminus(const SymmetricSequence& t, const SignSupportPattern& pattern) {
  require_same_dim(t.dim(), pattern.dim(), "in_polar_cone_Cminus");
  for (const auto& [n, v] : t.entries()) {
    if (n.is_zero()) return false;  // stored entries are nonzero
    switch (pattern.classify(n)) {
      case SignClass::kFree:
        return false;
      case SignClass::kNonnegative:
        if (v > 0.0) return false;
        break;
      case SignClass::kNonpositive:
        if (v < 0.0) return false;
        break;
      case SignClass::kOutside:
        break;
    }
  }
  return true;
}

double pairing(const SymmetricSequence& f, const SymmetricSequence& h) {
  require_same_dim(f.dim(), h.dim(), "pairing");
  const auto& small = f.entries().size() <= h.entries().size() ? f : h;
  const auto& large = &small == &f ? h : f;
  double s = 0.0;
  for (const auto& [n, v] : small.entries()) {
    const auto it = large.entries().find(n);
    if (it == large.entries().end()) continue;
    s += (n.is_zero() ? 1.0 : 2.0) * v * it->second;
  }
  return s;
}

}  // namespace conedual
