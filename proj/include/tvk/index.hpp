#ifndef TVK_INDEX_HPP
#define TVK_INDEX_HPP

// Exact combinatorics of indices and their two-letter word encoding:
// parsing, weight/depth, duality, arrow slices, shuffle products and the
// b-insertion correction products.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tvk {

struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tuple of positive integers (k_1,...,k_r), k_1 innermost.  The empty
/// tuple is allowed and printed as "phi".
class Index {
 public:
  Index() = default;
  explicit Index(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_)
      if (e < 1) throw parse_error("index entry must be >= 1, got " + std::to_string(e));
  }
  Index(std::initializer_list<int> entries) : Index(std::vector<int>(entries)) {}

  const std::vector<int>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int depth() const { return static_cast<int>(entries_.size()); }
  int weight() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }
  int last() const { return entries_.back(); }

  /// nonempty with last entry >= 2
  bool admissible() const { return !entries_.empty() && entries_.back() >= 2; }

  int trailing_ones() const {
    int n = 0;
    for (auto it = entries_.rbegin(); it != entries_.rend() && *it == 1; ++it) ++n;
    return n;
  }

  Index appended(int k) const {
    std::vector<int> e = entries_;
    e.push_back(k);
    return Index(std::move(e));
  }

  Index concat(const Index& other) const {
    std::vector<int> e = entries_;
    e.insert(e.end(), other.entries_.begin(), other.entries_.end());
    return Index(std::move(e));
  }

  Index reversed() const {
    std::vector<int> e(entries_.rbegin(), entries_.rend());
    return Index(std::move(e));
  }

  std::string str() const {
    if (entries_.empty()) return "phi";
    std::string out;
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(entries_[i]);
    }
    return out;
  }

  bool operator==(const Index& o) const { return entries_ == o.entries_; }

  // canonical order: (weight, depth, entries) lexicographic
  bool operator<(const Index& o) const {
    int w = weight(), ow = o.weight();
    if (w != ow) return w < ow;
    if (depth() != o.depth()) return depth() < o.depth();
    return entries_ < o.entries_;
  }

 private:
  std::vector<int> entries_;
};

/// Text format "k1,k2,...,kr" (digits and commas, no spaces); "" = phi.
inline Index parse_index(std::string_view text) {
  if (text.empty()) return Index{};
  std::vector<int> entries;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (tok.empty()) throw parse_error("empty entry in index \"" + std::string(text) + "\"");
    long v = 0;
    for (char c : tok) {
      if (c < '0' || c > '9')
        throw parse_error("bad token \"" + std::string(tok) + "\" in index");
      v = v * 10 + (c - '0');
      if (v > 1000000) throw parse_error("entry too large: \"" + std::string(tok) + "\"");
    }
    if (v < 1) throw parse_error("entry must be >= 1, got \"" + std::string(tok) + "\"");
    entries.push_back(static_cast<int>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
    if (pos == text.size()) throw parse_error("trailing comma in index");
  }
  return Index(std::move(entries));
}

/// Word over {a, b}; a = du/u, b = 2du/(1-u^2).  Nonempty words start
/// with b; letters run innermost first.
struct Word {
  std::string letters;
  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator<(const Word& o) const { return letters < o.letters; }
  size_t size() const { return letters.size(); }
};

/// each entry k contributes "b" followed by k-1 "a"s
inline Word to_word(const Index& k) {
  Word w;
  w.letters.reserve(static_cast<size_t>(k.weight()));
  for (int e : k.entries()) {
    w.letters += 'b';
    w.letters.append(static_cast<size_t>(e - 1), 'a');
  }
  return w;
}

inline Index from_word(const Word& w) {
  if (!w.letters.empty() && w.letters.front() != 'b')
    throw parse_error("word must start with b: \"" + w.letters + "\"");
  std::vector<int> entries;
  for (char c : w.letters) {
    if (c == 'b')
      entries.push_back(1);
    else if (c == 'a')
      entries.back() += 1;
    else
      throw parse_error(std::string("bad letter '") + c + "' in word");
  }
  return Index(std::move(entries));
}

/// Reverse the word and swap a<->b.  Involution on admissible indices;
/// wt is preserved and dep(dual) = wt - dep.
inline Index dual_index(const Index& k) {
  if (!k.admissible())
    throw std::domain_error("duality undefined for non-admissible index (" + k.str() + ")");
  const Word w = to_word(k);
  Word d;
  d.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    d.letters += (*it == 'a') ? 'b' : 'a';
  return from_word(d);
}

// ---- arrow slices ------------------------------------------------------

/// (k_1,...,k_j)
inline Index head_slice(const Index& k, int j) {
  if (j < 0 || j > k.depth()) throw std::out_of_range("head_slice: j out of range");
  return Index(std::vector<int>(k.entries().begin(), k.entries().begin() + j));
}

/// (k_r,...,k_{r+1-j})
inline Index tail_slice(const Index& k, int j) {
  if (j < 0 || j > k.depth()) throw std::out_of_range("tail_slice: j out of range");
  std::vector<int> e(k.entries().rbegin(), k.entries().rbegin() + j);
  return Index(std::move(e));
}

/// (k_1,...,k_r - 1); requires last entry >= 2 (the entry is decremented,
/// never dropped)
inline Index minus_last(const Index& k) {
  if (k.empty()) throw std::domain_error("minus_last on empty index");
  if (k.last() < 2) throw std::domain_error("minus_last on index ending in 1: (" + k.str() + ")");
  std::vector<int> e = k.entries();
  e.back() -= 1;
  return Index(std::move(e));
}

/// ({1}_m, k_1,...,k_r)
inline Index ones_prefix(int m, const Index& k) {
  if (m < 0) throw std::out_of_range("ones_prefix: m < 0");
  std::vector<int> e(static_cast<size_t>(m), 1);
  e.insert(e.end(), k.entries().begin(), k.entries().end());
  return Index(std::move(e));
}

inline Index ones_index(int m) { return ones_prefix(m, Index{}); }

// ---- integer-coefficient combinations ----------------------------------

struct IndexCombination {
  std::map<Index, std::int64_t> terms;

  void add(const Index& k, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = terms.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  std::int64_t coefficient_mass() const {
    std::int64_t m = 0;
    for (auto& [k, c] : terms) m += c;
    return m;
  }

  bool empty() const { return terms.empty(); }
  bool operator==(const IndexCombination& o) const { return terms == o.terms; }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [k, c] : terms) {
      if (!first) out += c >= 0 ? " + " : " - ";
      else if (c < 0) out += "-";
      std::int64_t a = c < 0 ? -c : c;
      if (a != 1) out += std::to_string(a) + "*";
      out += "(" + k.str() + ")";
      first = false;
    }
    return out;
  }
};

namespace detail {
inline void shuffle_rec(const std::string& u, size_t i, const std::string& v, size_t j,
                        std::string& acc, std::map<std::string, std::int64_t>& out) {
  if (i == u.size() && j == v.size()) {
    out[acc] += 1;
    return;
  }
  if (i < u.size()) {
    acc += u[i];
    shuffle_rec(u, i + 1, v, j, acc, out);
    acc.pop_back();
  }
  if (j < v.size()) {
    acc += v[j];
    shuffle_rec(u, i, v, j + 1, acc, out);
    acc.pop_back();
  }
}
}  // namespace detail

/// Sum over all letter interleavings of to_word(u) and to_word(v).
/// Total coefficient mass is binom(wt u + wt v, wt u).
inline IndexCombination shuffle_product(const Index& u, const Index& v) {
  std::map<std::string, std::int64_t> words;
  std::string acc;
  acc.reserve(static_cast<size_t>(u.weight() + v.weight()));
  detail::shuffle_rec(to_word(u).letters, 0, to_word(v).letters, 0, acc, words);
  IndexCombination out;
  for (auto& [w, c] : words) out.add(from_word(Word{w}), c);
  return out;
}

/// All insertions of a single letter b into to_word(k), at every slot
/// except the terminal one.  Realizes the product-minus-concatenation
/// correction A(k)A(1) - A(k,1); coefficient mass is wt(k).
inline IndexCombination b_insertion_product(const Index& k) {
  if (k.empty()) throw std::domain_error("b_insertion_product on empty index");
  const std::string w = to_word(k).letters;
  IndexCombination out;
  for (size_t slot = 0; slot < w.size(); ++slot) {
    std::string ins = w.substr(0, slot) + "b" + w.substr(slot);
    out.add(from_word(Word{ins}), 1);
  }
  return out;
}

enum class SplitConstraint { literal, per_block };

/// The split-sum as printed: blocks j = 1..r-1, k_{j,1}+k_{j,2} = k_j+1 with
/// both parts >= 1.  `literal` applies the >= 2 constraint to the first part
/// of block 1 only, `per_block` to the first part of every block.  Kept for
/// comparison against b_insertion_product; the two disagree already at
/// depth 1.
inline IndexCombination split_sum_product(const Index& k, SplitConstraint mode) {
  if (k.empty()) throw std::domain_error("split_sum_product on empty index");
  IndexCombination out;
  const auto& e = k.entries();
  const int r = k.depth();
  for (int j = 1; j <= r - 1; ++j) {
    const int kj = e[static_cast<size_t>(j - 1)];
    for (int k1 = 1; k1 <= kj; ++k1) {
      const int k2 = kj + 1 - k1;
      if (mode == SplitConstraint::literal && j == 1 && k1 < 2) continue;
      if (mode == SplitConstraint::per_block && k1 < 2) continue;
      std::vector<int> out_e(e.begin(), e.begin() + (j - 1));
      out_e.push_back(k1);
      out_e.push_back(k2);
      out_e.insert(out_e.end(), e.begin() + j, e.end());
      out.add(Index(std::move(out_e)), 1);
    }
  }
  return out;
}

/// All indices with entries >= 1 and weight in [1, max_weight], canonical order.
inline std::vector<Index> all_indices(int max_weight) {
  std::vector<Index> out;
  for (int total = 1; total <= max_weight; ++total) {
    std::vector<Index> batch;
    std::vector<int> cur;
    auto gen = [&](auto&& self, int rem) -> void {
      if (rem == 0) {
        batch.emplace_back(cur);
        return;
      }
      for (int x = 1; x <= rem; ++x) {
        cur.push_back(x);
        self(self, rem - x);
        cur.pop_back();
      }
    };
    gen(gen, total);
    std::sort(batch.begin(), batch.end());
    out.insert(out.end(), batch.begin(), batch.end());
  }
  return out;
}

/// Admissible indices of weight in [2, max_weight], canonical order.
inline std::vector<Index> all_admissible_indices(int max_weight) {
  std::vector<Index> out;
  for (const Index& k : all_indices(max_weight))
    if (k.admissible()) out.push_back(k);
  return out;
}

/// Indices of given weight and depth (compositions), entries >= 1.
inline std::vector<Index> compositions(int weight, int depth) {
  std::vector<Index> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int parts) -> void {
    if (parts == 1) {
      if (rem >= 1) {
        cur.push_back(rem);
        out.emplace_back(cur);
        cur.pop_back();
      }
      return;
    }
    for (int x = 1; x + (parts - 1) <= rem; ++x) {
      cur.push_back(x);
      self(self, rem - x, parts - 1);
      cur.pop_back();
    }
  };
  if (depth >= 1 && weight >= depth) rec(rec, weight, depth);
  return out;
}

}  // namespace tvk

#endif  // TVK_INDEX_HPP
