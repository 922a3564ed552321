#include "mildlab/multiindex.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mildlab {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_) {
    if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }
}

MultiIndex MultiIndex::zeros(int dim) {
  if (dim < 0) throw std::invalid_argument("MultiIndex: negative dimension");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

MultiIndex MultiIndex::axis(int dim, int i, int k) {
  if (i < 0 || i >= dim) throw std::invalid_argument("MultiIndex: axis out of range");
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(i)] = k;
  return MultiIndex(std::move(e));
}

int MultiIndex::total() const {
  return std::accumulate(e_.begin(), e_.end(), 0);
}

BigInt MultiIndex::factorial() const {
  BigInt f = 1;
  for (int v : e_) {
    for (int j = 2; j <= v; ++j) f *= j;
  }
  return f;
}

MultiIndex MultiIndex::plus(const MultiIndex& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  std::vector<int> e(e_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.e_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::minus(const MultiIndex& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  std::vector<int> e(e_);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] -= o.e_[i];
    if (e[i] < 0) throw std::invalid_argument("MultiIndex: minus would go negative");
  }
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::scaled(int c) const {
  if (c < 0) throw std::invalid_argument("MultiIndex: negative scale");
  std::vector<int> e(e_);
  for (int& v : e) v *= c;
  return MultiIndex(std::move(e));
}

bool MultiIndex::leq(const MultiIndex& o) const {
  if (dim() != o.dim()) throw std::invalid_argument("MultiIndex: dimension mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (e_[i] > o.e_[i]) return false;
  }
  return true;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
  return lex_precedes(*this, o);
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e_[i]);
  }
  s += ")";
  return s;
}

std::size_t MultiIndexHash::operator()(const MultiIndex& v) const {
  std::size_t h = 1469598103934665603ull;
  for (int x : v.entries()) {
    h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

bool lex_precedes(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("lex_precedes: dimension mismatch");
  const int ta = a.total();
  const int tb = b.total();
  if (ta != tb) return ta < tb;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<MultiIndex> enumerate_multiindices(int dim, int max_total,
                                               int min_total) {
  if (dim < 0 || max_total < 0) {
    throw std::invalid_argument("enumerate_multiindices: negative argument");
  }
  std::vector<MultiIndex> out;
  if (dim == 0) {
    if (min_total <= 0) out.push_back(MultiIndex::zeros(0));
    return out;
  }
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  // Fill positions left to right; lexicographic within each total degree.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(MultiIndex(cur));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  for (int total = std::max(min_total, 0); total <= max_total; ++total) {
    rec(rec, 0, total);
  }
  return out;
}

namespace {

// Multiplicity vectors k with k <= box componentwise, 1 <= |k|, and
// |k| * l <= nu_rem componentwise.
void enumerate_k_choices(const MultiIndex& box, const MultiIndex& l,
                         const MultiIndex& nu_rem,
                         std::vector<MultiIndex>& out) {
  const int d = box.dim();
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  auto fits = [&](int kt) {
    for (int c = 0; c < nu_rem.dim(); ++c) {
      if (kt * l[c] > nu_rem[c]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int pos, int kt) -> void {
    if (pos == d) {
      if (kt >= 1 && fits(kt)) out.push_back(MultiIndex(cur));
      return;
    }
    for (int v = 0; v <= box[pos]; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, kt + v);
    }
  };
  rec(rec, 0, 0);
}

bool concat_lex_less(const PartitionTerm& a, const PartitionTerm& b) {
  if (a.s != b.s) return a.s < b.s;
  auto flatten = [](const PartitionTerm& t) {
    std::vector<int> v;
    for (const auto& l : t.l) v.insert(v.end(), l.entries().begin(), l.entries().end());
    for (const auto& k : t.k) v.insert(v.end(), k.entries().begin(), k.entries().end());
    return v;
  };
  return flatten(a) < flatten(b);
}

}  // namespace

std::vector<PartitionTerm> enumerate_partitions(const MultiIndex& nu,
                                                const MultiIndex& lambda) {
  if (lambda.total() < 1) {
    throw std::invalid_argument("enumerate_partitions: |lambda| must be >= 1");
  }
  std::vector<PartitionTerm> result;
  if (lambda.total() > nu.total()) return result;

  // Admissible inner orders.  Every chain entry obeys l <= nu componentwise
  // because sum |k_j| l_j = nu with nonnegative summands and |k_j| >= 1.
  std::vector<MultiIndex> candidates =
      enumerate_multiindices(nu.dim(), nu.total(), 1);
  std::erase_if(candidates, [&](const MultiIndex& l) { return !l.leq(nu); });
  std::sort(candidates.begin(), candidates.end(),
            [](const MultiIndex& a, const MultiIndex& b) { return lex_precedes(a, b); });

  std::vector<MultiIndex> chain_l, chain_k;
  auto rec = [&](auto&& self, std::size_t pos, const MultiIndex& nu_rem,
                 const MultiIndex& lambda_rem) -> void {
    if (lambda_rem.is_zero()) {
      if (nu_rem.is_zero()) {
        PartitionTerm t;
        t.s = static_cast<int>(chain_l.size());
        t.l = chain_l;
        t.k = chain_k;
        result.push_back(std::move(t));
      }
      return;
    }
    if (pos == candidates.size()) return;
    if (lambda_rem.total() > nu_rem.total()) return;  // each l has |l| >= 1
    // Skip this candidate.
    self(self, pos + 1, nu_rem, lambda_rem);
    // Or attach it with every admissible multiplicity.
    const MultiIndex& l = candidates[pos];
    std::vector<MultiIndex> ks;
    enumerate_k_choices(lambda_rem, l, nu_rem, ks);
    for (const MultiIndex& k : ks) {
      chain_l.push_back(l);
      chain_k.push_back(k);
      self(self, pos + 1, nu_rem.minus(l.scaled(k.total())),
           lambda_rem.minus(k));
      chain_l.pop_back();
      chain_k.pop_back();
    }
  };
  rec(rec, 0, nu, lambda);

  std::sort(result.begin(), result.end(), concat_lex_less);
  return result;
}

const WeightedPartitions& weighted_partitions(const MultiIndex& nu,
                                              const MultiIndex& lambda) {
  using Key = std::pair<MultiIndex, MultiIndex>;
  // The cache mixes keys of different dimensions, so order by dimension
  // first; lex_precedes alone only orders within a fixed dimension.
  struct KeyLess {
    static bool less(const MultiIndex& a, const MultiIndex& b) {
      if (a.dim() != b.dim()) return a.dim() < b.dim();
      return lex_precedes(a, b);
    }
    bool operator()(const Key& a, const Key& b) const {
      if (a.first != b.first) return less(a.first, b.first);
      return less(a.second, b.second);
    }
  };
  static std::map<Key, WeightedPartitions, KeyLess> cache;
  static std::mutex mu;

  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nu, lambda});
  if (it != cache.end()) return it->second;

  WeightedPartitions wp;
  wp.terms = enumerate_partitions(nu, lambda);
  wp.weight.reserve(wp.terms.size());
  const BigInt nu_fact = nu.factorial();
  for (const PartitionTerm& t : wp.terms) {
    BigInt denom = 1;
    for (int j = 0; j < t.s; ++j) {
      denom *= t.k[static_cast<std::size_t>(j)].factorial();
      const BigInt lf = t.l[static_cast<std::size_t>(j)].factorial();
      const int kt = t.k[static_cast<std::size_t>(j)].total();
      for (int p = 0; p < kt; ++p) denom *= lf;
    }
    wp.weight.push_back(BigRat(nu_fact, denom).convert_to<double>());
  }
  auto [pos, inserted] = cache.emplace(Key{nu, lambda}, std::move(wp));
  return pos->second;
}

double faa_di_bruno(
    const std::map<MultiIndex, double>& outer_derivs,
    const std::vector<std::map<MultiIndex, double>>& inner_derivs,
    const MultiIndex& nu) {
  const int d = static_cast<int>(inner_derivs.size());
  if (d < 1) throw std::invalid_argument("faa_di_bruno: no inner components");

  auto outer_at = [&](const MultiIndex& lambda) {
    auto it = outer_derivs.find(lambda);
    if (it == outer_derivs.end()) {
      throw std::out_of_range("faa_di_bruno: missing outer derivative at " + lambda.str());
    }
    return it->second;
  };
  auto inner_at = [&](int c, const MultiIndex& l) {
    const auto& tab = inner_derivs[static_cast<std::size_t>(c)];
    auto it = tab.find(l);
    if (it == tab.end()) {
      throw std::out_of_range("faa_di_bruno: missing inner derivative at " + l.str());
    }
    return it->second;
  };

  if (nu.is_zero()) return outer_at(MultiIndex::zeros(d));

  double sum = 0.0;
  for (const MultiIndex& lambda : enumerate_multiindices(d, nu.total(), 1)) {
    const WeightedPartitions& wp = weighted_partitions(nu, lambda);
    if (wp.terms.empty()) continue;
    double inner_sum = 0.0;
    for (std::size_t ti = 0; ti < wp.terms.size(); ++ti) {
      const PartitionTerm& t = wp.terms[ti];
      double prod = 1.0;
      for (int j = 0; j < t.s; ++j) {
        const MultiIndex& l = t.l[static_cast<std::size_t>(j)];
        const MultiIndex& k = t.k[static_cast<std::size_t>(j)];
        for (int c = 0; c < d; ++c) {
          for (int p = 0; p < k[c]; ++p) prod *= inner_at(c, l);
        }
      }
      inner_sum += wp.weight[ti] * prod;
    }
    sum += outer_at(lambda) * inner_sum;
  }
  return sum;
}

}  // namespace mildlab
