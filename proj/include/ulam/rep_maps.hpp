#pragma once

// Operator-valued maps on groups: unitary representations, their
// perturbations, multiplicativity defects, block Gram tests for positive
// definiteness, and sup-distance between maps.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ulam/group.hpp"
#include "ulam/operator.hpp"

namespace ulam {

/// A map G -> B(C^d) on a finite domain. Domain is stored in the group's
/// element order.
template <Group G>
class OperatorMap {
 public:
  using group_type = G;
  using element_type = Element<G>;

  OperatorMap(G group, std::vector<element_type> domain, std::vector<Operator> values)
      : group_(std::move(group)) {
    if (domain.empty()) throw InvalidInput("operator map needs a nonempty domain");
    if (domain.size() != values.size()) throw InvalidInput("domain and values differ in length");
    dim_ = values.front().dim();
    if (dim_ > kMaxHilbertDim)
      throw CapExceeded("map dimension " + std::to_string(dim_) + " exceeds cap " +
                        std::to_string(kMaxHilbertDim));
    std::vector<std::size_t> order(domain.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return domain[a] < domain[b]; });
    domain_.reserve(domain.size());
    values_.reserve(values.size());
    for (std::size_t i : order) {
      if (values[i].dim() != dim_) throw InvalidInput("operator map values differ in dimension");
      if (!index_.emplace(domain[i], domain_.size()).second)
        throw InvalidInput("duplicate domain element " + format_element(domain[i]));
      domain_.push_back(domain[i]);
      values_.push_back(values[i]);
      bound_ = std::max(bound_, op_norm(values[i]));
    }
  }

  template <class Fn>
  static OperatorMap from_function(G group, std::vector<element_type> domain, Fn&& fn) {
    std::vector<Operator> values;
    values.reserve(domain.size());
    for (const auto& x : domain) values.push_back(fn(x));
    return OperatorMap(std::move(group), std::move(domain), std::move(values));
  }

  const G& group() const { return group_; }
  int dim() const { return dim_; }
  const std::vector<element_type>& domain() const { return domain_; }
  const std::vector<Operator>& values() const { return values_; }
  std::size_t size() const { return domain_.size(); }

  /// sup_x ||phi(x)|| over the domain.
  double uniform_bound() const { return bound_; }

  bool contains(const element_type& x) const { return index_.count(x) != 0; }

  const Operator* find(const element_type& x) const {
    auto it = index_.find(x);
    return it == index_.end() ? nullptr : &values_[it->second];
  }

  const Operator& at(const element_type& x) const {
    if (const Operator* op = find(x)) return *op;
    throw DomainEscape("element " + format_element(x) + " is outside the map's domain");
  }

  bool is_unitary(double tol = 1e-10) const {
    return std::all_of(values_.begin(), values_.end(),
                       [&](const Operator& u) { return unitarity_error(u) <= tol; });
  }

 private:
  G group_;
  int dim_ = 0;
  double bound_ = 0;
  std::vector<element_type> domain_;
  std::vector<Operator> values_;
  std::map<element_type, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Representations

/// Left regular representation: pi(x) e_y = e_{xy}.
inline OperatorMap<FiniteGroup> regular_representation(const FiniteGroup& g) {
  const int n = g.order();
  if (n > kMaxHilbertDim)
    throw CapExceeded("regular representation needs |G| <= " + std::to_string(kMaxHilbertDim));
  return OperatorMap<FiniteGroup>::from_function(g, g.elements(), [&](int x) {
    CMatrix m = CMatrix::Zero(n, n);
    for (int y = 0; y < n; ++y) m(g.mul(x, y), y) = 1.0;
    return Operator(std::move(m));
  });
}

/// Genuine unitary representation of F_k or Z^d restricted to `domain`,
/// determined by one unitary per generator (lattice generators must commute
/// for the result to be a representation).
template <FinitelyGenerated G>
OperatorMap<G> representation_from_generators(const G& g, std::vector<Element<G>> domain,
                                              std::span<const Operator> generator_values) {
  const auto gens = g.generators();
  if (generator_values.size() * 2 != gens.size())
    throw InvalidInput("need one operator per generator");
  const int d = generator_values.front().dim();
  return OperatorMap<G>::from_function(g, std::move(domain), [&](const Element<G>& x) {
    CMatrix m = CMatrix::Identity(d, d);
    if constexpr (std::is_same_v<G, FreeGroup>) {
      for (const auto& l : x.letters()) {
        const auto& u = generator_values[l.gen].matrix();
        m = l.exp > 0 ? CMatrix(m * u) : CMatrix(m * u.adjoint());
      }
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& u = generator_values[i].matrix();
        const CMatrix step = x[i] >= 0 ? u : CMatrix(u.adjoint());
        for (int k = 0; k < std::abs(x[i]); ++k) m = m * step;
      }
    }
    return Operator(std::move(m));
  });
}

// ---------------------------------------------------------------------------
// Multiplicativity defect

template <class E>
struct DefectReport {
  double epsilon = 0;
  std::optional<std::pair<E, E>> argmax_pair;
  std::size_t pairs_scanned = 0;
  std::size_t pairs_excluded = 0;
  std::string domain_note;
};

/// max ||phi(xy) - phi(x)phi(y)|| over the given pairs; pairs whose product
/// leaves the domain are excluded and counted. First maximal pair wins.
template <Group G>
DefectReport<Element<G>> defect(const OperatorMap<G>& phi,
                                std::span<const std::pair<Element<G>, Element<G>>> pairs) {
  DefectReport<Element<G>> rep;
  for (const auto& [x, y] : pairs) {
    const Operator* pxy = phi.find(phi.group().mul(x, y));
    const Operator* px = phi.find(x);
    const Operator* py = phi.find(y);
    if (!pxy || !px || !py) {
      ++rep.pairs_excluded;
      continue;
    }
    ++rep.pairs_scanned;
    const double e = op_norm(pxy->matrix() - px->matrix() * py->matrix());
    if (!rep.argmax_pair || e > rep.epsilon) {
      rep.epsilon = e;
      rep.argmax_pair = std::make_pair(x, y);
    }
  }
  rep.domain_note = std::to_string(rep.pairs_scanned) + " pairs scanned";
  if (rep.pairs_excluded)
    rep.domain_note += ", " + std::to_string(rep.pairs_excluded) +
                       " excluded because the product leaves the domain";
  return rep;
}

/// Scan over all of domain x domain (truncated to pairs with xy in domain).
template <Group G>
DefectReport<Element<G>> defect(const OperatorMap<G>& phi) {
  std::vector<std::pair<Element<G>, Element<G>>> pairs;
  pairs.reserve(phi.size() * phi.size());
  for (const auto& x : phi.domain())
    for (const auto& y : phi.domain()) pairs.emplace_back(x, y);
  return defect(phi, std::span<const std::pair<Element<G>, Element<G>>>(pairs));
}

/// sup_y ||phi(x)phi(y) - phi(xy)|| over y with xy in the domain: the
/// right-hand side of the per-element proximity bound.
template <Group G>
double row_defect(const OperatorMap<G>& phi, const Element<G>& x) {
  const Operator& px = phi.at(x);
  double best = 0;
  for (const auto& y : phi.domain()) {
    const Operator* pxy = phi.find(phi.group().mul(x, y));
    if (!pxy) continue;
    best = std::max(best, op_norm(px.matrix() * phi.at(y).matrix() - pxy->matrix()));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Perturbation

template <Group G>
struct PerturbedMap {
  OperatorMap<G> map;
  double achieved_defect = 0;
  /// Calibration constant c multiplying target_eps * R_x / ||R_x||.
  double scale = 0;
};

/// phi(x) = polar_unitary(pi(x) + c * target_eps * R_x / ||R_x||) for x != e,
/// phi(e) = I, with R_x complex Gaussian from `seed` and c calibrated so the
/// measured defect lands in [0.5, 1] * target_eps when reachable. The
/// returned defect never exceeds target_eps.
template <Group G>
PerturbedMap<G> perturb_representation(const OperatorMap<G>& pi, double target_eps,
                                       std::uint64_t seed) {
  if (!(target_eps >= 0 && target_eps < 1)) throw InvalidInput("target_eps must lie in [0, 1)");
  if (!pi.is_unitary()) throw InvalidInput("perturb_representation needs a unitary-valued map");
  if (target_eps == 0) return {pi, defect(pi).epsilon, 0.0};

  const int d = pi.dim();
  const auto e = pi.group().identity();
  Rng rng = make_rng(seed);
  std::vector<CMatrix> directions;
  directions.reserve(pi.size());
  for (const auto& x : pi.domain()) {
    CMatrix r = random_gaussian_matrix(d, d, rng);
    if (x == e) r.setZero();
    else r /= op_norm(r);
    directions.push_back(std::move(r));
  }
  auto build = [&](double c) {
    std::vector<Operator> vals;
    vals.reserve(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (pi.domain()[i] == e) vals.push_back(Operator::identity(d));
      else vals.push_back(polar_unitary(Operator(pi.values()[i].matrix() + c * target_eps * directions[i])));
    }
    return OperatorMap<G>(pi.group(), pi.domain(), std::move(vals));
  };

  const double lo_ok = 0.5 * target_eps;
  PerturbedMap<G> best{pi, defect(pi).epsilon, 0.0};
  auto consider = [&](double c) {
    auto m = build(c);
    const double eps = defect(m).epsilon;
    if (eps <= target_eps && eps >= best.achieved_defect) best = {std::move(m), eps, c};
    return eps;
  };

  double lo = 0, hi = 0, c = 1;
  for (int k = 0; k < 40; ++k) {
    const double eps = consider(c);
    if (eps > target_eps) {
      hi = c;
      break;
    }
    if (eps >= lo_ok) return best;
    lo = c;
    c *= 2;
  }
  if (hi == 0) return best;  // defect saturates below the window
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double eps = consider(mid);
    if (eps > target_eps) hi = mid;
    else if (eps < lo_ok) lo = mid;
    else break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Positive definiteness

template <class E>
struct GramBlock {
  std::vector<E> sample;
  CMatrix matrix;  // (n d) x (n d), block (i, j) = psi(x_i^-1 x_j)
};

template <Group G>
GramBlock<Element<G>> gram_block(const OperatorMap<G>& psi, std::vector<Element<G>> sample) {
  if (sample.empty()) throw InvalidInput("Gram sample is empty");
  const int d = psi.dim();
  const auto n = static_cast<Eigen::Index>(sample.size());
  GramBlock<Element<G>> gb{std::move(sample), CMatrix(n * d, n * d)};
  const auto& g = psi.group();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi_inv = g.inverse(gb.sample[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto q = g.mul(xi_inv, gb.sample[j]);
      const Operator* v = psi.find(q);
      if (!v)
        throw DomainEscape("quotient " + format_element(q) + " of (" + format_element(gb.sample[i]) +
                           ", " + format_element(gb.sample[j]) + ") is outside the map's domain");
      gb.matrix.block(i * d, j * d, d, d) = v->matrix();
    }
  }
  return gb;
}

/// Smallest eigenvalue of the block Gram matrix [psi(x_i^-1 x_j)].
template <Group G>
PsdReport pd_defect(const OperatorMap<G>& psi, std::vector<Element<G>> sample,
                    double tol = kDefaultPsdTol, double max_asymmetry = kMaxAsymmetry) {
  return psd_min_eig(gram_block(psi, std::move(sample)).matrix, tol, max_asymmetry);
}

/// psi(e) = I within tol.
template <Group G>
bool is_unital(const OperatorMap<G>& psi, double tol = 1e-12) {
  const Operator* v = psi.find(psi.group().identity());
  if (!v) return false;
  return (v->matrix() - CMatrix::Identity(psi.dim(), psi.dim())).cwiseAbs().maxCoeff() <= tol;
}

/// sup_x ||phi(x) - psi(x)|| over the common domain.
template <Group G>
double proximity(const OperatorMap<G>& phi, const OperatorMap<G>& psi) {
  if (phi.dim() != psi.dim()) throw InvalidInput("proximity: dimension mismatch");
  if (!(phi.group() == psi.group())) throw InvalidInput("proximity: maps live on different groups");
  if (phi.domain() != psi.domain()) throw InvalidInput("proximity: domains differ");
  double best = 0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    best = std::max(best, op_norm(phi.values()[i].matrix() - psi.values()[i].matrix()));
  return best;
}

}  // namespace ulam
