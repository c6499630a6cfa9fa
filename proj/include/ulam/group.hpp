#pragma once

// Group arithmetic for the three families used by the lab: finite groups
// given by a multiplication table, free groups on reduced words, and Z^d.
//
// Every group type exposes `element_type`, `identity()`, `mul()`,
// `inverse()` and a deterministic total order on elements (operator<), so
// maps keyed by elements iterate reproducibly.

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ulam/errors.hpp"

namespace ulam {

enum class GroupKind { finite_table, free, integer_lattice };

template <class G>
concept Group = requires(const G& g, const typename G::element_type& x) {
  typename G::element_type;
  { g.identity() } -> std::convertible_to<typename G::element_type>;
  { g.mul(x, x) } -> std::convertible_to<typename G::element_type>;
  { g.inverse(x) } -> std::convertible_to<typename G::element_type>;
  { g.kind() } -> std::same_as<GroupKind>;
  { x < x } -> std::convertible_to<bool>;
};

/// Groups with a word metric: balls are finite and enumerable.
template <class G>
concept FinitelyGenerated = Group<G> && requires(const G& g, int r) {
  { g.ball(r) } -> std::same_as<std::vector<typename G::element_type>>;
  { g.generators() } -> std::same_as<std::vector<typename G::element_type>>;
};

template <class G>
using Element = typename G::element_type;

// ---------------------------------------------------------------------------
// Finite groups

/// Tables are checked for associativity in O(n^3).
inline constexpr int kMaxTableOrder = 1024;

class FiniteGroup {
 public:
  using element_type = int;

  /// Validates the table: square, entries in range, 0 is a two-sided
  /// identity, Latin square, associative.
  static FiniteGroup from_table(const std::vector<std::vector<int>>& table,
                                std::string name = "table") {
    const int n = static_cast<int>(table.size());
    if (n < 1) throw InvalidInput("group table is empty");
    if (n > kMaxTableOrder || static_cast<std::size_t>(n) > element_cap())
      throw CapExceeded("group table of order " + std::to_string(n) + " exceeds the table cap");
    FiniteGroup g;
    g.n_ = n;
    g.name_ = std::move(name);
    g.table_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(table[i].size()) != n)
        throw InvalidInput("group table row " + std::to_string(i) + " has wrong length");
      for (int j = 0; j < n; ++j) {
        const int v = table[i][j];
        if (v < 0 || v >= n)
          throw InvalidInput("group table entry out of range at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
        g.table_[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (g.at(0, i) != i || g.at(i, 0) != i)
        throw InvalidInput("element 0 is not a two-sided identity");
    }
    std::vector<char> seen(n);
    for (int i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int j = 0; j < n; ++j) {
        if (seen[g.at(i, j)]++) throw InvalidInput("group table is not a Latin square (row)");
      }
      std::fill(seen.begin(), seen.end(), 0);
      for (int j = 0; j < n; ++j) {
        if (seen[g.at(j, i)]++) throw InvalidInput("group table is not a Latin square (column)");
      }
    }
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (g.at(g.at(x, y), z) != g.at(x, g.at(y, z)))
            throw InvalidInput("group table is not associative");
    g.inv_.assign(n, -1);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (g.at(x, y) == 0) g.inv_[x] = y;
    for (int x = 0; x < n; ++x)
      if (g.at(g.inv_[x], x) != 0) throw InvalidInput("left and right inverses disagree");
    return g;
  }

  static FiniteGroup cyclic(int n) {
    if (n < 1) throw InvalidInput("cyclic(n) needs n >= 1");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return from_table(t, "Z" + std::to_string(n));
  }

  /// Dihedral group of order 2n. Index f*n + k encodes s^f r^k.
  static FiniteGroup dihedral(int n) {
    if (n < 1) throw InvalidInput("dihedral(n) needs n >= 1");
    const int order = 2 * n;
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        const int f1 = a / n, k1 = a % n, f2 = b / n, k2 = b % n;
        // s^f1 r^k1 s^f2 r^k2 = s^(f1+f2) r^(+-k1 + k2)
        const int k = ((f2 ? -k1 : k1) + k2 + n) % n;
        t[a][b] = ((f1 + f2) % 2) * n + k;
      }
    }
    return from_table(t, "D" + std::to_string(n));
  }

  /// Symmetric group on n <= 5 letters, permutations in lexicographic order
  /// (identity first); product is composition (xy)(i) = x(y(i)).
  static FiniteGroup symmetric(int n) {
    if (n < 1 || n > 5) throw InvalidInput("symmetric(n) supports 1 <= n <= 5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < static_cast<int>(perms.size()); ++i) index[perms[i]] = i;
    const int m = static_cast<int>(perms.size());
    std::vector<std::vector<int>> t(m, std::vector<int>(m));
    std::vector<int> c(n);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        for (int i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
        t[a][b] = index.at(c);
      }
    }
    return from_table(t, "S" + std::to_string(n));
  }

  /// G x H with index i*|H| + j for (i, j).
  static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
    const int m = g.order(), k = h.order();
    std::vector<std::vector<int>> t(m * k, std::vector<int>(m * k));
    for (int a = 0; a < m * k; ++a)
      for (int b = 0; b < m * k; ++b)
        t[a][b] = g.mul(a / k, b / k) * k + h.mul(a % k, b % k);
    return from_table(t, g.name() + "x" + h.name());
  }

  GroupKind kind() const { return GroupKind::finite_table; }
  int order() const { return n_; }
  const std::string& name() const { return name_; }
  int identity() const { return 0; }

  int mul(int x, int y) const {
    check(x);
    check(y);
    return at(x, y);
  }
  int inverse(int x) const {
    check(x);
    return inv_[x];
  }
  bool contains(int x) const { return x >= 0 && x < n_; }

  std::vector<int> elements() const {
    std::vector<int> out(n_);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t[i][j] = at(i, j);
    return t;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.n_ == b.n_ && a.table_ == b.table_;
  }

 private:
  FiniteGroup() = default;
  int at(int x, int y) const { return table_[static_cast<std::size_t>(x) * n_ + y]; }
  void check(int x) const {
    if (x < 0 || x >= n_)
      throw std::out_of_range("element " + std::to_string(x) + " out of range for group of order " +
                              std::to_string(n_));
  }

  int n_ = 0;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Free groups

struct Letter {
  int gen = 0;
  int exp = 1;  // +1 or -1

  /// a < a^-1 < b < b^-1 < ...
  int rank() const { return 2 * gen + (exp < 0 ? 1 : 0); }
  Letter inverse() const { return {gen, -exp}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A fully reduced word. Ordered shortlex.
class Word {
 public:
  Word() = default;

  /// Throws InvalidInput unless `letters` is already reduced.
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (const auto& l : letters_)
      if (l.gen < 0 || (l.exp != 1 && l.exp != -1)) throw InvalidInput("malformed letter");
    for (std::size_t i = 1; i < letters_.size(); ++i)
      if (letters_[i].gen == letters_[i - 1].gen && letters_[i].exp == -letters_[i - 1].exp)
        throw InvalidInput("word is not reduced");
  }

  /// Free reduction of an arbitrary letter sequence.
  static Word reduce(const std::vector<Letter>& letters) {
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (const auto& l : letters) {
      if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
        out.pop_back();
      else
        out.push_back(l);
    }
    Word w;
    w.letters_ = std::move(out);
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& front() const { return letters_.front(); }

  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    for (std::size_t i = 0; i < a.letters_.size(); ++i) {
      const int ra = a.letters_[i].rank(), rb = b.letters_[i].rank();
      if (ra != rb) return ra < rb;
    }
    return false;
  }

 private:
  std::vector<Letter> letters_;
};

class FreeGroup {
 public:
  using element_type = Word;

  explicit FreeGroup(int rank) : rank_(rank) {
    if (rank < 1) throw InvalidInput("free group rank must be >= 1");
  }

  GroupKind kind() const { return GroupKind::free; }
  int rank() const { return rank_; }
  Word identity() const { return {}; }

  Word mul(const Word& x, const Word& y) const {
    check(x);
    check(y);
    std::vector<Letter> cat = x.letters();
    cat.insert(cat.end(), y.letters().begin(), y.letters().end());
    return Word::reduce(cat);
  }

  Word inverse(const Word& x) const {
    check(x);
    std::vector<Letter> inv;
    inv.reserve(x.length());
    for (auto it = x.letters().rbegin(); it != x.letters().rend(); ++it) inv.push_back(it->inverse());
    return Word(std::move(inv));
  }

  Word generator(int g, int exp = 1) const {
    if (g < 0 || g >= rank_) throw InvalidInput("generator index out of range");
    return Word({Letter{g, exp}});
  }

  /// a, a^-1, b, b^-1, ... in shortlex order.
  std::vector<Word> generators() const {
    std::vector<Word> out;
    for (int g = 0; g < rank_; ++g) {
      out.push_back(generator(g, 1));
      out.push_back(generator(g, -1));
    }
    return out;
  }

  /// Number of reduced words of length <= r.
  static double ball_size(int rank, int r) {
    double total = 1, sphere = 2.0 * rank;
    for (int k = 1; k <= r; ++k) {
      total += sphere;
      sphere *= 2.0 * rank - 1;
    }
    return total;
  }

  /// All reduced words of length <= r, shortlex order.
  std::vector<Word> ball(int r) const {
    if (r < 0) throw InvalidInput("ball radius must be >= 0");
    if (ball_size(rank_, r) > static_cast<double>(element_cap()))
      throw CapExceeded("free-group ball of radius " + std::to_string(r) + " exceeds element cap");
    std::vector<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    for (int k = 1; k <= r; ++k) {
      std::vector<Word> next;
      for (const auto& w : frontier) {
        for (int rank = 0; rank < 2 * rank_; ++rank) {
          const Letter l{rank / 2, rank % 2 ? -1 : 1};
          if (!w.empty() && w.letters().back() == l.inverse()) continue;
          std::vector<Letter> ext = w.letters();
          ext.push_back(l);
          next.emplace_back(std::move(ext));
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return out;
  }

  bool contains(const Word& w) const {
    return std::all_of(w.letters().begin(), w.letters().end(),
                       [&](const Letter& l) { return l.gen < rank_; });
  }

  friend bool operator==(const FreeGroup&, const FreeGroup&) = default;

 private:
  void check(const Word& w) const {
    if (!contains(w)) throw InvalidInput("word uses a generator outside the free group's rank");
  }
  int rank_;
};

// ---------------------------------------------------------------------------
// Z^d

using Point = std::vector<int>;

class IntegerLattice {
 public:
  using element_type = Point;

  explicit IntegerLattice(int dim) : dim_(dim) {
    if (dim < 1) throw InvalidInput("lattice dimension must be >= 1");
  }

  GroupKind kind() const { return GroupKind::integer_lattice; }
  int dim() const { return dim_; }
  Point identity() const { return Point(dim_, 0); }

  Point mul(const Point& x, const Point& y) const {
    check(x);
    check(y);
    Point out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = x[i] + y[i];
    return out;
  }
  Point inverse(const Point& x) const {
    check(x);
    Point out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = -x[i];
    return out;
  }

  /// +e1, -e1, +e2, -e2, ...
  std::vector<Point> generators() const {
    std::vector<Point> out;
    for (int i = 0; i < dim_; ++i) {
      Point p(dim_, 0);
      p[i] = 1;
      out.push_back(p);
      p[i] = -1;
      out.push_back(p);
    }
    return out;
  }

  /// The l-infinity box [-r, r]^d in lexicographic order.
  std::vector<Point> ball(int r) const {
    if (r < 0) throw InvalidInput("ball radius must be >= 0");
    if (std::pow(2.0 * r + 1, dim_) > static_cast<double>(element_cap()))
      throw CapExceeded("lattice box of radius " + std::to_string(r) + " exceeds element cap");
    std::vector<Point> out;
    Point p(dim_, -r);
    while (true) {
      out.push_back(p);
      int i = dim_ - 1;
      while (i >= 0 && p[i] == r) p[i--] = -r;
      if (i < 0) break;
      ++p[i];
    }
    return out;
  }

  bool contains(const Point& p) const { return static_cast<int>(p.size()) == dim_; }

  friend bool operator==(const IntegerLattice&, const IntegerLattice&) = default;

 private:
  void check(const Point& p) const {
    if (!contains(p)) throw InvalidInput("lattice point has wrong dimension");
  }
  int dim_;
};

// ---------------------------------------------------------------------------
// Element formatting. Free-group letters: a, b, c, d for generators and the
// uppercase letter for the inverse; "e" is the identity.

inline std::string format_element(int x) { return std::to_string(x); }

inline std::string format_element(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (const auto& l : w.letters()) {
    if (l.gen >= 4) {
      s += "[" + std::to_string(l.gen) + (l.exp < 0 ? "^-1]" : "]");
      continue;
    }
    const char c = static_cast<char>('a' + l.gen);
    s += l.exp > 0 ? c : static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

inline std::string format_element(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

/// Parses a word in the letters a-d / A-D, reducing it; "e", "1" or "" give
/// the identity.
inline Word parse_word(const std::string& text) {
  if (text.empty() || text == "e" || text == "1") return {};
  std::vector<Letter> letters;
  for (char c : text) {
    if (c >= 'a' && c <= 'd' && c != 'e')
      letters.push_back({c - 'a', 1});
    else if (c >= 'A' && c <= 'D')
      letters.push_back({c - 'A', -1});
    else
      throw InvalidInput(std::string("unexpected character '") + c + "' in word \"" + text + "\"");
  }
  return Word::reduce(letters);
}

// ---------------------------------------------------------------------------
// Finitely supported probability measures

template <class E>
class ProbMeasure {
 public:
  /// Weights must be nonnegative, sum to 1 within 1e-12; support distinct.
  ProbMeasure(std::vector<E> support, std::vector<double> weights)
      : support_(std::move(support)), weights_(std::move(weights)) {
    if (support_.empty()) throw InvalidInput("measure support is empty");
    if (support_.size() != weights_.size())
      throw InvalidInput("measure support and weights differ in length");
    // Neumaier summation; plain accumulation of 1/n drifts by ~n ulp.
    double total = 0, carry = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double w = weights_[i];
      if (!std::isfinite(w) || w < 0) throw InvalidInput("negative measure weight");
      const double t = total + w;
      carry += std::abs(total) >= w ? (total - t) + w : (w - t) + total;
      total = t;
      if (!index_.emplace(support_[i], i).second) throw InvalidInput("duplicate support element");
    }
    if (std::abs(total + carry - 1.0) > 1e-12) throw InvalidInput("measure weights do not sum to 1");
  }

  static ProbMeasure uniform(std::vector<E> support) {
    const std::size_t n = support.size();
    return ProbMeasure(std::move(support), std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  static ProbMeasure point_mass(E x) { return ProbMeasure({std::move(x)}, {1.0}); }

  const std::vector<E>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  double mass(const E& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? 0.0 : weights_[it->second];
  }

  /// mu(A) for a predicate A.
  template <class Pred>
  double mass_of(Pred&& in_set) const {
    double m = 0;
    for (std::size_t i = 0; i < support_.size(); ++i)
      if (in_set(support_[i])) m += weights_[i];
    return m;
  }

 private:
  std::vector<E> support_;
  std::vector<double> weights_;
  std::map<E, std::size_t> index_;
};

/// ||s mu - mu||_1 where (s mu)(z) = mu(s^-1 z).
template <Group G>
double translation_defect(const G& g, const ProbMeasure<Element<G>>& mu, const Element<G>& s) {
  std::map<Element<G>, double> diff;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    diff[g.mul(s, mu.support()[i])] += mu.weights()[i];
    diff[mu.support()[i]] -= mu.weights()[i];
  }
  double total = 0;
  for (const auto& [z, v] : diff) total += std::abs(v);
  return total;
}

/// Uniform measure on the box [-r, r]^d of Z^d.
inline ProbMeasure<Point> folner_box(int d, int r) {
  return ProbMeasure<Point>::uniform(IntegerLattice(d).ball(r));
}

}  // namespace ulam
