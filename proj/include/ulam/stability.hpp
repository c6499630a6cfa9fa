#pragma once

// Averaging a bounded map against a probability measure,
//
//   psi_mu(x) = sum_y mu(y) phi(xy) phi(y)*,
//
// and the finite checks built on it: the witness search over y for the
// squared-distance inequality, the block operators phi_F(y) and T on
// (C^d)^F, direct-sum embedding, and the Følner-box convergence series on Z^d.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ulam/group.hpp"
#include "ulam/operator.hpp"
#include "ulam/rep_maps.hpp"

namespace ulam {

namespace detail {

/// acc += w * a * b^*, summing over k in index order. Zero blocks add exact
/// zeros, so a block-diagonal input reproduces the blockwise results bit for
/// bit (Eigen's GEMM ordering depends on the matrix size).
inline void add_weighted_product_adjoint(CMatrix& acc, double w, const CMatrix& a, const CMatrix& b) {
  const Eigen::Index d = acc.rows();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double re = 0, im = 0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const Complex x = a(i, k), y = b(j, k);
        // x * conj(y)
        re += x.real() * y.real() + x.imag() * y.imag();
        im += x.imag() * y.real() - x.real() * y.imag();
      }
      acc(i, j) += w * Complex(re, im);
    }
}

}  // namespace detail

/// psi_mu on `out_domain`. Throws DomainEscape naming the first (x, y) whose
/// product leaves phi's domain.
template <Group G>
OperatorMap<G> average_map(const OperatorMap<G>& phi, const ProbMeasure<Element<G>>& mu,
                           std::vector<Element<G>> out_domain) {
  const auto& g = phi.group();
  const int d = phi.dim();
  std::vector<const Operator*> phi_y(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    phi_y[k] = phi.find(mu.support()[k]);
    if (!phi_y[k])
      throw DomainEscape("support element " + format_element(mu.support()[k]) +
                         " is outside the map's domain");
  }
  std::vector<Operator> values;
  values.reserve(out_domain.size());
  for (const auto& x : out_domain) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const auto& y = mu.support()[k];
      const Operator* pxy = phi.find(g.mul(x, y));
      if (!pxy)
        throw DomainEscape("average_map: product of (" + format_element(x) + ", " +
                           format_element(y) + ") is outside the map's domain");
      detail::add_weighted_product_adjoint(acc, mu.weights()[k], pxy->matrix(), phi_y[k]->matrix());
    }
    values.emplace_back(std::move(acc));
  }
  return OperatorMap<G>(g, std::move(out_domain), std::move(values));
}

/// psi_mu on every x of phi's domain for which x * supp(mu) stays inside it.
template <Group G>
OperatorMap<G> average_map(const OperatorMap<G>& phi, const ProbMeasure<Element<G>>& mu) {
  std::vector<Element<G>> out;
  for (const auto& x : phi.domain()) {
    const bool inside = std::all_of(mu.support().begin(), mu.support().end(),
                                    [&](const auto& y) { return phi.contains(phi.group().mul(x, y)); });
    if (inside) out.push_back(x);
  }
  if (out.empty()) throw DomainEscape("average_map: no output element keeps x*supp(mu) in the domain");
  return average_map(phi, mu, std::move(out));
}

/// Average against the uniform measure on a finite group (its unique
/// invariant mean). The result is positive definite.
inline OperatorMap<FiniteGroup> amenable_correction(const OperatorMap<FiniteGroup>& phi) {
  const auto& g = phi.group();
  if (phi.size() != static_cast<std::size_t>(g.order()))
    throw InvalidInput("amenable_correction needs phi defined on the whole finite group");
  return average_map(phi, ProbMeasure<int>::uniform(g.elements()), g.elements());
}

// ---------------------------------------------------------------------------
// Families of vectors indexed by (i, x) with i < n and x in F

template <class E>
class VectorFamily {
 public:
  /// vectors[i][k] is the vector at (i, F[k]).
  VectorFamily(std::vector<E> F, int dim, std::vector<std::vector<CVector>> vectors)
      : F_(std::move(F)), dim_(dim), vectors_(std::move(vectors)) {
    if (F_.empty()) throw InvalidInput("vector family needs a nonempty index set F");
    if (vectors_.empty()) throw InvalidInput("vector family needs n >= 1");
    for (const auto& row : vectors_) {
      if (row.size() != F_.size()) throw InvalidInput("vector family row does not match |F|");
      for (const auto& v : row)
        if (v.size() != dim_) throw InvalidInput("vector family entry has the wrong dimension");
    }
  }

  static VectorFamily random_unit(std::vector<E> F, int n, int dim, Rng& rng) {
    std::vector<std::vector<CVector>> vs(n);
    for (auto& row : vs)
      for (std::size_t k = 0; k < F.size(); ++k) row.push_back(random_unit_vector(dim, rng));
    return VectorFamily(std::move(F), dim, std::move(vs));
  }

  const std::vector<E>& F() const { return F_; }
  int n() const { return static_cast<int>(vectors_.size()); }
  int dim() const { return dim_; }
  const CVector& at(int i, std::size_t k) const { return vectors_[i][k]; }

  /// The i-th function as one vector of the direct sum over F.
  CVector stacked(int i) const {
    CVector out(static_cast<Eigen::Index>(F_.size()) * dim_);
    for (std::size_t k = 0; k < F_.size(); ++k)
      out.segment(static_cast<Eigen::Index>(k) * dim_, dim_) = vectors_[i][k];
    return out;
  }

 private:
  std::vector<E> F_;
  int dim_;
  std::vector<std::vector<CVector>> vectors_;
};

template <class E>
struct Condition5Result {
  std::optional<E> witness_y;
  /// Sums at the witness; without a witness, at the scanned y closest to
  /// satisfying the inequality.
  double lhs = 0;
  double rhs = 0;
  std::vector<E> scanned;
};

/// Scans y in order for
///   sum_i sum_{x in F} ||phi(xy)phi(y)* xi_i(x) - psi(x) xi_i(x)||^2
///     <= sum_i sum_{x in F} ||phi(xy)phi(y)* xi_i(x) - zeta_i(x)||^2
/// and returns the first y satisfying it (up to a relative rounding slack).
template <Group G>
Condition5Result<Element<G>> check_condition5(const OperatorMap<G>& phi, const OperatorMap<G>& psi,
                                              const VectorFamily<Element<G>>& xi,
                                              const VectorFamily<Element<G>>& zeta,
                                              std::span<const Element<G>> scan,
                                              double rel_slack = 1e-12) {
  if (scan.empty()) throw InvalidInput("condition-5 scan list is empty");
  if (xi.F() != zeta.F() || xi.n() != zeta.n() || xi.dim() != zeta.dim())
    throw InvalidInput("xi and zeta families must share F, n and dimension");
  if (xi.dim() != phi.dim() || psi.dim() != phi.dim())
    throw InvalidInput("family dimension does not match the maps");
  const auto& g = phi.group();
  const auto& F = xi.F();

  std::vector<const Operator*> psi_x(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) psi_x[k] = &psi.at(F[k]);

  Condition5Result<Element<G>> res;
  double best_gap = 0;
  bool have_best = false;
  for (const auto& y : scan) {
    res.scanned.push_back(y);
    const CMatrix phi_y_adj = phi.at(y).matrix().adjoint();
    double lhs = 0, rhs = 0;
    for (std::size_t k = 0; k < F.size(); ++k) {
      const Operator* pxy = phi.find(g.mul(F[k], y));
      if (!pxy)
        throw DomainEscape("condition 5: product of (" + format_element(F[k]) + ", " +
                           format_element(y) + ") is outside the map's domain");
      const CMatrix a = pxy->matrix() * phi_y_adj;
      for (int i = 0; i < xi.n(); ++i) {
        const CVector v = a * xi.at(i, k);
        lhs += (v - psi_x[k]->matrix() * xi.at(i, k)).squaredNorm();
        rhs += (v - zeta.at(i, k)).squaredNorm();
      }
    }
    if (lhs <= rhs + rel_slack * std::max(1.0, rhs)) {
      res.witness_y = y;
      res.lhs = lhs;
      res.rhs = rhs;
      return res;
    }
    if (!have_best || lhs - rhs < best_gap) {
      have_best = true;
      best_gap = lhs - rhs;
      res.lhs = lhs;
      res.rhs = rhs;
    }
  }
  return res;
}

struct Condition5Sweep {
  int trials = 0;
  int witnesses = 0;
  double rate() const { return trials ? static_cast<double>(witnesses) / trials : 0.0; }
};

struct Condition5Sampling {
  int trials = 200;
  int max_set_size = 4;
  int max_families = 3;
  std::uint64_t seed = 0;
};

/// Random (F, n, xi, zeta) trials with unit vectors; F is drawn from psi's
/// domain. Trial t uses RNG stream t.
template <Group G>
Condition5Sweep sample_condition5(const OperatorMap<G>& phi, const OperatorMap<G>& psi,
                                  std::span<const Element<G>> scan, const Condition5Sampling& cfg) {
  Condition5Sweep sweep;
  const auto& pool = psi.domain();
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const int max_f = std::min<int>(cfg.max_set_size, static_cast<int>(pool.size()));
    const int fsize = std::uniform_int_distribution<int>(1, max_f)(rng);
    const int n = std::uniform_int_distribution<int>(1, cfg.max_families)(rng);
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(fsize);
    std::sort(idx.begin(), idx.end());
    std::vector<Element<G>> F;
    for (auto i : idx) F.push_back(pool[i]);
    auto xi = VectorFamily<Element<G>>::random_unit(F, n, phi.dim(), rng);
    auto zeta = VectorFamily<Element<G>>::random_unit(F, n, phi.dim(), rng);
    ++sweep.trials;
    if (check_condition5(phi, psi, xi, zeta, scan).witness_y) ++sweep.witnesses;
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Block operators on the direct sum over F

/// y -> phi_F(y) = diag(phi(xy) phi(y)*)_{x in F}.
template <Group G>
class PhiF {
 public:
  PhiF(OperatorMap<G> phi, std::vector<Element<G>> F) : phi_(std::move(phi)), F_(std::move(F)) {
    if (F_.empty()) throw InvalidInput("phi_F needs a nonempty F");
  }

  Operator operator()(const Element<G>& y) const {
    const int d = phi_.dim();
    const auto n = static_cast<Eigen::Index>(F_.size());
    const CMatrix py_adj = phi_.at(y).matrix().adjoint();
    CMatrix m = CMatrix::Zero(n * d, n * d);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Operator* pxy = phi_.find(phi_.group().mul(F_[k], y));
      if (!pxy)
        throw DomainEscape("phi_F: product of (" + format_element(F_[k]) + ", " + format_element(y) +
                           ") is outside the map's domain");
      m.block(k * d, k * d, d, d) = pxy->matrix() * py_adj;
    }
    return Operator(std::move(m));
  }

  const std::vector<Element<G>>& F() const { return F_; }

 private:
  OperatorMap<G> phi_;
  std::vector<Element<G>> F_;
};

template <Group G>
PhiF<G> build_phi_F(const OperatorMap<G>& phi, std::vector<Element<G>> F) {
  return PhiF<G>(phi, std::move(F));
}

/// T = diag(psi(x))_{x in F}.
template <Group G>
Operator build_T(const OperatorMap<G>& psi, std::span<const Element<G>> F) {
  std::vector<Operator> blocks;
  blocks.reserve(F.size());
  for (const auto& x : F) blocks.push_back(psi.at(x));
  return direct_sum(std::span<const Operator>(blocks));
}

/// x -> phi_1(x) (+) ... (+) phi_n(x).
template <Group G>
OperatorMap<G> embed_direct_sum(std::span<const OperatorMap<G>> maps) {
  if (maps.empty()) throw InvalidInput("embed_direct_sum of an empty list");
  const auto& first = maps.front();
  int total = 0;
  for (const auto& m : maps) {
    if (!(m.group() == first.group()) || m.domain() != first.domain())
      throw InvalidInput("embed_direct_sum: maps must share group and domain");
    total += m.dim();
  }
  if (total > kMaxHilbertDim) throw CapExceeded("direct sum dimension exceeds cap");
  std::vector<Operator> values;
  values.reserve(first.size());
  std::vector<Operator> blocks;
  for (std::size_t i = 0; i < first.size(); ++i) {
    blocks.clear();
    for (const auto& m : maps) blocks.push_back(m.values()[i]);
    values.push_back(direct_sum(std::span<const Operator>(blocks)));
  }
  return OperatorMap<G>(first.group(), first.domain(), std::move(values));
}

/// Block dimensions of an embedded direct sum, for compress_block.
template <Group G>
std::vector<int> block_dims(std::span<const OperatorMap<G>> maps) {
  std::vector<int> dims;
  for (const auto& m : maps) dims.push_back(m.dim());
  return dims;
}

// ---------------------------------------------------------------------------
// Normal-functional pairing in finite dimensions: Phi_M(A) = trace(M* A).

/// max over x in psi's domain and over the battery {matrix units} + `n_random`
/// Gaussian M of
///   |Phi_M(phi(x)* psi(x)) - sum_y mu(y) Phi_M(phi(x)* phi(xy) phi(y)*)|,
/// where psi = average_map(phi, mu).
template <Group G>
double predual_pairing_residual(const OperatorMap<G>& phi, const ProbMeasure<Element<G>>& mu,
                                int n_random, std::uint64_t seed) {
  const auto psi = average_map(phi, mu);
  const int d = phi.dim();
  std::vector<CMatrix> battery;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1.0;
      battery.push_back(std::move(e));
    }
  Rng rng = make_rng(seed);
  for (int k = 0; k < n_random; ++k) battery.push_back(random_gaussian_matrix(d, d, rng));

  const auto& g = phi.group();
  double worst = 0;
  for (const auto& x : psi.domain()) {
    const CMatrix phx_adj = phi.at(x).matrix().adjoint();
    const CMatrix left = phx_adj * psi.at(x).matrix();
    for (const auto& m : battery) {
      const Complex lhs = (m.adjoint() * left).trace();
      Complex rhs = 0;
      for (std::size_t k = 0; k < mu.size(); ++k) {
        const auto& y = mu.support()[k];
        const CMatrix inner = phx_adj * phi.at(g.mul(x, y)).matrix() * phi.at(y).matrix().adjoint();
        rhs += mu.weights()[k] * (m.adjoint() * inner).trace();
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Følner-box averaging on Z^d

struct FolnerRow {
  int radius = 0;
  /// max_{x in F0} ||psi_{r+1}(x) - psi_r(x)||
  double increment = 0;
  /// max_{x in F0, x != 0} ||psi_{x mu_r}(x) - psi_{mu_r}(x)|| / |x|_1
  double shift_error = 0;
  /// ||phi||^2 * 2 / (2r + 1)
  double shift_bound = 0;
  std::vector<Operator> psi_on_F0;
};

struct FolnerReport {
  std::vector<Point> F0;
  std::vector<FolnerRow> rows;
  std::vector<Point> pd_sample;
  PsdReport final_psd;
};

/// Radius needed on phi's domain for folner_convergence_experiment.
inline int folner_required_radius(std::span<const int> radii, std::span<const Point> F0,
                                  std::span<const Point> pd_sample) {
  int rmax = 0, f = 0, s = 0;
  for (int r : radii) rmax = std::max(rmax, r);
  for (const auto& p : F0)
    for (int c : p) f = std::max(f, std::abs(c));
  for (const auto& p : pd_sample)
    for (int c : p) s = std::max(s, std::abs(c));
  return rmax + std::max({f + 1, 2 * f, 2 * s});
}

/// For each r: psi_r = average_map(phi, folner_box(d, r)) on F0, its Cauchy
/// increment to psi_{r+1}, and the sensitivity to translating the box. The
/// last radius also yields the Gram report on `pd_sample` (asymmetry is
/// reported, not rejected: truncated averages are only approximately
/// Hermitian).
inline FolnerReport folner_convergence_experiment(const OperatorMap<IntegerLattice>& phi,
                                                  std::span<const int> radii, std::vector<Point> F0,
                                                  std::vector<Point> pd_sample,
                                                  double tol = kDefaultPsdTol) {
  if (radii.empty()) throw InvalidInput("folner experiment needs at least one radius");
  if (F0.empty()) throw InvalidInput("folner experiment needs a nonempty F0");
  const auto& lattice = phi.group();
  const int d = lattice.dim();
  std::sort(F0.begin(), F0.end());
  FolnerReport rep;
  rep.F0 = F0;
  rep.pd_sample = pd_sample;
  const double bound2 = phi.uniform_bound() * phi.uniform_bound();

  std::vector<Point> gram_domain;
  for (const auto& a : pd_sample)
    for (const auto& b : pd_sample) gram_domain.push_back(lattice.mul(lattice.inverse(a), b));
  std::sort(gram_domain.begin(), gram_domain.end());
  gram_domain.erase(std::unique(gram_domain.begin(), gram_domain.end()), gram_domain.end());

  for (int r : radii) {
    if (r < 0) throw InvalidInput("folner radius must be >= 0");
    const auto box = folner_box(d, r);
    const auto psi_r = average_map(phi, box, F0);
    const auto psi_next = average_map(phi, folner_box(d, r + 1), F0);
    FolnerRow row;
    row.radius = r;
    row.shift_bound = bound2 * 2.0 / (2.0 * r + 1.0);
    for (std::size_t k = 0; k < F0.size(); ++k) {
      row.increment = std::max(
          row.increment, op_norm(psi_next.values()[k].matrix() - psi_r.values()[k].matrix()));
      const auto& x = psi_r.domain()[k];
      int l1 = 0;
      for (int c : x) l1 += std::abs(c);
      if (l1 == 0) continue;
      std::vector<Point> shifted;
      for (const auto& y : box.support()) shifted.push_back(lattice.mul(x, y));
      const auto moved = ProbMeasure<Point>(std::move(shifted), box.weights());
      const auto psi_moved = average_map(phi, moved, std::vector<Point>{x});
      row.shift_error = std::max(
          row.shift_error, op_norm(psi_moved.values()[0].matrix() - psi_r.values()[k].matrix()) / l1);
    }
    row.psi_on_F0 = psi_r.values();
    rep.rows.push_back(std::move(row));
  }
  if (!pd_sample.empty()) {
    const int rlast = radii.back();
    const auto psi_last = average_map(phi, folner_box(d, rlast), gram_domain);
    rep.final_psd = pd_defect(psi_last, pd_sample, tol, std::numeric_limits<double>::infinity());
  }
  return rep;
}

}  // namespace ulam
