#pragma once

// The first-letter paradoxical decomposition of F_2 and the measure-level
// inequalities it forces:
//
//   sum_j mu(s_j A_j) + sum_k mu(t_k B_k) = 2   (each translate family partitions F_2)
//   sum_j mu(A_j)     + sum_k mu(B_k)     <= 1  (the pieces are disjoint)
//
// so the Tarski defect sum |mu(s_j A_j) - mu(A_j)| + sum |mu(t_k B_k) - mu(B_k)|
// is at least 1 for every probability measure. The invariance LP contrasts
// this with Z^2, where Følner boxes drive the translation defect to zero.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ulam/group.hpp"
#include "ulam/operator.hpp"
#include "ulam/simplex.hpp"

namespace ulam {

struct Piece {
  std::string name;
  std::function<bool(const Word&)> contains;
};

struct ParadoxicalDecomposition {
  std::vector<Piece> pieces_A;
  std::vector<Piece> pieces_B;
  std::vector<Word> translates_s;
  std::vector<Word> translates_t;
};

/// Reduced words whose first letter is `first`.
inline Piece words_starting_with(Letter first) {
  return {format_element(Word({first})),
          [first](const Word& w) { return !w.empty() && w.front() == first; }};
}

/// A_1 = W(a), A_2 = W(a^-1), B_1 = W(b), B_2 = W(b^-1); s = (e, a),
/// t = (e, b). The identity lies in no piece.
inline ParadoxicalDecomposition standard_f2_decomposition() {
  const FreeGroup f2(2);
  ParadoxicalDecomposition dec;
  dec.pieces_A = {words_starting_with({0, 1}), words_starting_with({0, -1})};
  dec.pieces_B = {words_starting_with({1, 1}), words_starting_with({1, -1})};
  dec.translates_s = {f2.identity(), f2.generator(0)};
  dec.translates_t = {f2.identity(), f2.generator(1)};
  return dec;
}

/// mu(sA) = sum_y mu(y) chi_A(s^-1 y).
inline double mean_coefficient(const ProbMeasure<Word>& mu, const Word& s, const Piece& piece) {
  const FreeGroup f(std::max(2, [&] {
    int r = 0;
    for (const auto& l : s.letters()) r = std::max(r, l.gen + 1);
    for (const auto& w : mu.support())
      for (const auto& l : w.letters()) r = std::max(r, l.gen + 1);
    return r;
  }()));
  const Word s_inv = f.inverse(s);
  return mu.mass_of([&](const Word& y) { return piece.contains(f.mul(s_inv, y)); });
}

struct TarskiBreakdown {
  double defect = 0;
  double translate_mass = 0;  // sum mu(s_j A_j) + sum mu(t_k B_k)
  double piece_mass = 0;      // sum mu(A_j) + sum mu(B_k)
};

inline TarskiBreakdown tarski_breakdown(const ProbMeasure<Word>& mu, const ParadoxicalDecomposition& dec) {
  if (dec.pieces_A.size() != dec.translates_s.size() || dec.pieces_B.size() != dec.translates_t.size())
    throw InvalidInput("decomposition needs one translate per piece");
  TarskiBreakdown out;
  auto side = [&](const std::vector<Piece>& pieces, const std::vector<Word>& translates) {
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      const double moved = mean_coefficient(mu, translates[j], pieces[j]);
      const double still = mean_coefficient(mu, Word{}, pieces[j]);
      out.defect += std::abs(moved - still);
      out.translate_mass += moved;
      out.piece_mass += still;
    }
  };
  side(dec.pieces_A, dec.translates_s);
  side(dec.pieces_B, dec.translates_t);
  return out;
}

/// D(mu) = sum_j |mu(s_j A_j) - mu(A_j)| + sum_k |mu(t_k B_k) - mu(B_k)|.
inline double tarski_defect(const ProbMeasure<Word>& mu, const ParadoxicalDecomposition& dec) {
  return tarski_breakdown(mu, dec).defect;
}

struct DecompositionCheck {
  bool pieces_disjoint = true;
  bool translates_A_partition = true;  // each word in exactly one s_j A_j
  bool translates_B_partition = true;
  std::size_t words_checked = 0;
  std::string first_failure;
};

/// Checks disjointness of the pieces on B_r, and that the translate families
/// s_j A_j and t_k B_k each cover B_{r-1} exactly once.
inline DecompositionCheck check_decomposition(const ParadoxicalDecomposition& dec, int r) {
  const FreeGroup f2(2);
  DecompositionCheck out;
  auto fail = [&](bool& flag, const std::string& msg) {
    if (flag && out.first_failure.empty()) out.first_failure = msg;
    flag = false;
  };
  for (const auto& w : f2.ball(r)) {
    ++out.words_checked;
    int hits = 0;
    for (const auto& p : dec.pieces_A) hits += p.contains(w);
    for (const auto& p : dec.pieces_B) hits += p.contains(w);
    if (hits > 1) fail(out.pieces_disjoint, "word " + format_element(w) + " lies in two pieces");
    if (static_cast<int>(w.length()) > r - 1) continue;
    auto count = [&](const std::vector<Piece>& pieces, const std::vector<Word>& translates) {
      int c = 0;
      for (std::size_t j = 0; j < pieces.size(); ++j)
        c += pieces[j].contains(f2.mul(f2.inverse(translates[j]), w));
      return c;
    };
    if (count(dec.pieces_A, dec.translates_s) != 1)
      fail(out.translates_A_partition, "word " + format_element(w) + " not covered once by s_j A_j");
    if (count(dec.pieces_B, dec.translates_t) != 1)
      fail(out.translates_B_partition, "word " + format_element(w) + " not covered once by t_k B_k");
  }
  return out;
}

/// Dirichlet(1, ..., 1) over `support` (normalized Exp(1) draws).
template <class E>
ProbMeasure<E> dirichlet_measure(std::vector<E> support, Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> w(support.size());
  double total = 0;
  for (auto& v : w) total += (v = exp1(rng));
  for (auto& v : w) v /= total;
  return ProbMeasure<E>(std::move(support), std::move(w));
}

struct DefectSweep {
  int samples = 0;
  double min_defect = 0;
  double max_partition_error = 0;  // |translate_mass - 2|
  double max_piece_mass = 0;
};

/// Tarski defect over `samples` Dirichlet measures on B_r of F_2; sample k
/// uses RNG stream k.
inline DefectSweep tarski_sweep(int r, int samples, std::uint64_t seed) {
  const auto dec = standard_f2_decomposition();
  const auto ball = FreeGroup(2).ball(r);
  DefectSweep out;
  out.min_defect = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(k));
    const auto mu = dirichlet_measure(ball, rng);
    const auto b = tarski_breakdown(mu, dec);
    out.min_defect = std::min(out.min_defect, b.defect);
    out.max_partition_error = std::max(out.max_partition_error, std::abs(b.translate_mass - 2.0));
    out.max_piece_mass = std::max(out.max_piece_mass, b.piece_mass);
    ++out.samples;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invariance LP

template <class E>
struct InvarianceLpResult {
  double value = 0;
  ProbMeasure<E> measure;
  /// max_s ||s mu - mu||_1 recomputed from the returned measure.
  double recomputed = 0;
  int pivots = 0;
  std::size_t support_size = 0;
};

inline int max_invariance_radius(const FreeGroup&) { return 5; }
inline int max_invariance_radius(const IntegerLattice& z) { return z.dim() <= 2 ? 8 : 3; }

/// min over probability measures mu on B_r of max_s ||s mu - mu||_1, s over
/// the generators and their inverses, as the LP
///   min t  s.t.  mu(s^-1 z) - mu(z) = p_{s,z} - q_{s,z},
///                sum_z (p_{s,z} + q_{s,z}) <= t,  sum mu = 1,  all >= 0.
/// ||s^-1 mu - mu||_1 = ||mu - s mu||_1, so one generator of each +- pair
/// carries the constraint.
template <FinitelyGenerated G>
InvarianceLpResult<Element<G>> min_invariance_defect(const G& g, int r) {
  using E = Element<G>;
  if (r < 0 || r > max_invariance_radius(g))
    throw InvalidInput("min_invariance_defect radius " + std::to_string(r) + " outside the supported range");
  const auto ball = g.ball(r);
  std::map<E, int> mu_var;
  LinearProgram lp;
  const int t = lp.add_var(1.0);
  for (const auto& x : ball) mu_var[x] = lp.add_var(0.0);

  const auto gens = g.generators();
  for (std::size_t gi = 0; gi < gens.size(); gi += 2) {
    const E& s = gens[gi];
    const E s_inv = g.inverse(s);
    std::map<E, char> zs;
    for (const auto& x : ball) {
      zs[x] = 1;
      zs[g.mul(s, x)] = 1;
    }
    std::vector<std::pair<int, double>> budget{{t, -1.0}};
    for (const auto& [z, unused] : zs) {
      const int p = lp.add_var(0.0), q = lp.add_var(0.0);
      std::vector<std::pair<int, double>> row{{p, -1.0}, {q, 1.0}};
      if (auto it = mu_var.find(g.mul(s_inv, z)); it != mu_var.end()) row.emplace_back(it->second, 1.0);
      if (auto it = mu_var.find(z); it != mu_var.end()) row.emplace_back(it->second, -1.0);
      lp.add_row(std::move(row), RowSense::equal, 0.0);
      budget.emplace_back(p, 1.0);
      budget.emplace_back(q, 1.0);
    }
    lp.add_row(std::move(budget), RowSense::less_equal, 0.0);
  }
  std::vector<std::pair<int, double>> mass;
  for (const auto& [x, v] : mu_var) mass.emplace_back(v, 1.0);
  lp.add_row(std::move(mass), RowSense::equal, 1.0);

  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw ConvergenceFailure("invariance LP ended with status " + to_string(sol.status));

  std::vector<E> support;
  std::vector<double> weights;
  double total = 0;
  for (const auto& x : ball) {
    const double w = sol.x[mu_var.at(x)];
    if (w > 1e-13) {
      support.push_back(x);
      weights.push_back(w);
      total += w;
    }
  }
  for (auto& w : weights) w /= total;
  InvarianceLpResult<E> res{sol.value, ProbMeasure<E>(std::move(support), std::move(weights)), 0.0,
                            sol.pivots, 0};
  res.support_size = res.measure.size();
  for (const auto& s : gens) res.recomputed = std::max(res.recomputed, translation_defect(g, res.measure, s));
  if (std::abs(res.recomputed - res.value) > 1e-8)
    throw ConvergenceFailure("invariance LP value " + std::to_string(res.value) +
                             " disagrees with its measure (" + std::to_string(res.recomputed) + ")");
  return res;
}

}  // namespace ulam
