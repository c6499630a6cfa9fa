#pragma once

// Nearest points of convex hulls of finite point sets, the median-hyperplane
// membership criterion, and operator-hull membership tested through
// operator action on finite vector families.
//
// Geometry is real: complex vectors and operators are embedded into R^m by
// stacking real and imaginary parts, which turns Re<u, v> into the dot
// product (and the Frobenius inner product for operators).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ulam/errors.hpp"
#include "ulam/group.hpp"
#include "ulam/operator.hpp"

namespace ulam {

using RVector = Eigen::VectorXd;

inline constexpr double kDefaultMembershipTol = 1e-7;
inline constexpr int kHullIterationCap = 10000;
inline constexpr std::size_t kMaxHullPoints = 10000;

inline RVector realify(const CVector& v) {
  RVector out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

inline CVector complexify(const RVector& v) {
  const auto n = v.size() / 2;
  CVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = Complex(v(i), v(n + i));
  return out;
}

/// Column-major entries, real parts then imaginary parts.
inline RVector vectorize(const Operator& a) {
  const CMatrix& m = a.matrix();
  return realify(Eigen::Map<const CVector>(m.data(), m.size()));
}

inline Operator unvectorize(const RVector& v, int d) {
  const CVector c = complexify(v);
  return Operator(Eigen::Map<const CMatrix>(c.data(), d, d));
}

class PointSet {
 public:
  explicit PointSet(std::vector<RVector> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidInput("point set is empty");
    if (points_.size() > kMaxHullPoints) throw CapExceeded("point set exceeds 10^4 points");
    dim_ = static_cast<int>(points_.front().size());
    for (const auto& p : points_) {
      if (p.size() != dim_) throw InvalidInput("points differ in dimension");
      if (!p.allFinite()) throw InvalidInput("point has non-finite coordinates");
    }
  }

  static PointSet from_operators(std::span<const Operator> ops) {
    std::vector<RVector> pts;
    pts.reserve(ops.size());
    for (const auto& op : ops) pts.push_back(vectorize(op));
    return PointSet(std::move(pts));
  }

  int ambient_dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const RVector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<RVector>& points() const { return points_; }

 private:
  std::vector<RVector> points_;
  int dim_ = 0;
};

struct HullResult {
  bool member = false;
  double distance = 0;
  /// Convex weights over point indices (support = indices with weight > 0).
  ProbMeasure<int> weights = ProbMeasure<int>::point_mass(0);
  RVector projection;
  /// Present iff not a member: the projection, strictly closer than the
  /// target to every point.
  std::optional<RVector> witness;
  int iterations = 0;
  /// "wolfe" or "frank-wolfe".
  std::string method;

  std::vector<double> dense_weights(std::size_t n) const {
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) w[weights.support()[k]] = weights.weights()[k];
    return w;
  }
};

namespace detail {

struct Corral {
  std::vector<std::size_t> idx;
  std::vector<double> lambda;
};

/// argmin ||sum a_i q_i|| subject to sum a_i = 1 over the corral.
inline Eigen::VectorXd affine_minimizer(const std::vector<RVector>& q, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) sys(i, j) = sys(j, i) = q[idx[i]].dot(q[idx[j]]);
    sys(i, k) = sys(k, i) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol = sys.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

inline RVector combine(const std::vector<RVector>& q, const Corral& c, int dim) {
  RVector x = RVector::Zero(dim);
  for (std::size_t i = 0; i < c.idx.size(); ++i) x += c.lambda[i] * q[c.idx[i]];
  return x;
}

/// Wolfe's min-norm-point method on the shifted points q. Returns false if
/// the iteration cap is hit.
inline bool wolfe_min_norm(const std::vector<RVector>& q, int dim, double scale, Corral& c, int& iters) {
  constexpr double z1 = 1e-12, z2 = 1e-10, z3 = 1e-10;
  std::size_t start = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i].squaredNorm() < q[start].squaredNorm()) start = i;
  c.idx = {start};
  c.lambda = {1.0};
  RVector x = q[start];
  for (iters = 0; iters < kHullIterationCap; ++iters) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double v = x.dot(q[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= z1 * scale) return true;
    if (std::find(c.idx.begin(), c.idx.end(), j) != c.idx.end()) return true;
    c.idx.push_back(j);
    c.lambda.push_back(0.0);

    for (int minor = 0; minor <= static_cast<int>(q.size()) + 1; ++minor) {
      const Eigen::VectorXd alpha = affine_minimizer(q, c.idx);
      bool interior = true;
      for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (alpha(i) <= z2) interior = false;
      if (interior) {
        for (std::size_t i = 0; i < c.idx.size(); ++i) c.lambda[i] = alpha(i);
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < c.idx.size(); ++i) {
        if (alpha(i) <= z2 && c.lambda[i] - alpha(i) > 0)
          theta = std::min(theta, c.lambda[i] / (c.lambda[i] - alpha(i)));
      }
      for (std::size_t i = 0; i < c.idx.size(); ++i)
        c.lambda[i] = theta * alpha(i) + (1 - theta) * c.lambda[i];
      Corral kept;
      for (std::size_t i = 0; i < c.idx.size(); ++i) {
        if (c.lambda[i] > z3) {
          kept.idx.push_back(c.idx[i]);
          kept.lambda.push_back(c.lambda[i]);
        }
      }
      if (kept.idx.empty()) {
        // Degenerate step; restart from the best single point of the corral.
        std::size_t b = c.idx.front();
        for (auto i : c.idx)
          if (q[i].squaredNorm() < q[b].squaredNorm()) b = i;
        kept.idx = {b};
        kept.lambda = {1.0};
      }
      double total = 0;
      for (double l : kept.lambda) total += l;
      for (double& l : kept.lambda) l /= total;
      c = std::move(kept);
    }
    x = combine(q, c, dim);
  }
  return false;
}

/// Pairwise Frank-Wolfe on the simplex, started from `c`.
inline void frank_wolfe_min_norm(const std::vector<RVector>& q, int dim, Corral& c, int& iters) {
  std::vector<double> w(q.size(), 0.0);
  for (std::size_t i = 0; i < c.idx.size(); ++i) w[c.idx[i]] = c.lambda[i];
  RVector x = RVector::Zero(dim);
  for (std::size_t i = 0; i < q.size(); ++i) x += w[i] * q[i];
  for (iters = 0; iters < kHullIterationCap; ++iters) {
    std::size_t s = 0, a = 0;
    double smin = std::numeric_limits<double>::infinity(), amax = -smin;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double g = x.dot(q[i]);
      if (g < smin) smin = g, s = i;
      if (w[i] > 0 && g > amax) amax = g, a = i;
    }
    if (amax - smin <= 1e-15 * std::max(1.0, x.squaredNorm())) break;
    const RVector dir = q[s] - q[a];
    const double dd = dir.squaredNorm();
    if (dd == 0) break;
    const double step = std::clamp(-x.dot(dir) / dd, 0.0, w[a]);
    if (step <= 0) break;
    w[s] += step;
    w[a] -= step;
    x += step * dir;
  }
  c.idx.clear();
  c.lambda.clear();
  for (std::size_t i = 0; i < q.size(); ++i)
    if (w[i] > 0) {
      c.idx.push_back(i);
      c.lambda.push_back(w[i]);
    }
}

/// max_i <q_i - x, -x>, which is <= 0 at the exact minimizer.
inline double variational_gap(const std::vector<RVector>& q, const RVector& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& qi : q) worst = std::max(worst, -(qi - x).dot(x));
  return worst;
}

}  // namespace detail

/// Orthogonal projection of `target` onto conv(points). Throws
/// ConvergenceFailure if neither Wolfe's method nor the Frank-Wolfe fallback
/// yields a certified optimum.
inline HullResult project_onto_hull(const PointSet& ps, const RVector& target,
                                    double tol = kDefaultMembershipTol) {
  if (target.size() != ps.ambient_dim()) throw InvalidInput("target dimension does not match points");
  if (!(tol > 0)) throw InvalidInput("membership tolerance must be positive");
  const int dim = ps.ambient_dim();
  std::vector<RVector> q;
  q.reserve(ps.size());
  double scale = 1e-300;
  for (const auto& p : ps.points()) {
    q.push_back(p - target);
    scale = std::max(scale, q.back().squaredNorm());
  }
  // Optimality: <q_i - x, -x> <= vi_tol for every i.
  const double vi_tol = 1e-10 * std::max(1.0, scale);

  HullResult res;
  detail::Corral corral;
  int iters = 0;
  const bool wolfe_done = detail::wolfe_min_norm(q, dim, scale, corral, iters);
  RVector x = detail::combine(q, corral, dim);
  res.method = "wolfe";
  res.iterations = iters;
  if (!wolfe_done || detail::variational_gap(q, x) > vi_tol) {
    int fw_iters = 0;
    detail::frank_wolfe_min_norm(q, dim, corral, fw_iters);
    x = detail::combine(q, corral, dim);
    res.method = "frank-wolfe";
    res.iterations += fw_iters;
    if (detail::variational_gap(q, x) > vi_tol)
      throw ConvergenceFailure("hull projection did not reach a certified optimum (gap " +
                               std::to_string(detail::variational_gap(q, x)) + ")");
  }

  double total = 0;
  for (double l : corral.lambda) total += l;
  std::vector<int> support;
  std::vector<double> weights;
  for (std::size_t i = 0; i < corral.idx.size(); ++i) {
    if (corral.lambda[i] <= 0) continue;
    support.push_back(static_cast<int>(corral.idx[i]));
    weights.push_back(corral.lambda[i] / total);
  }
  std::vector<std::size_t> order(support.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return support[a] < support[b]; });
  std::vector<int> s2;
  std::vector<double> w2;
  for (auto i : order) {
    s2.push_back(support[i]);
    w2.push_back(weights[i]);
  }
  res.weights = ProbMeasure<int>(std::move(s2), std::move(w2));
  res.projection = RVector::Zero(dim);
  for (std::size_t k = 0; k < res.weights.size(); ++k)
    res.projection += res.weights.weights()[k] * ps[res.weights.support()[k]];
  res.distance = (res.projection - target).norm();
  res.member = res.distance <= tol;
  if (!res.member) {
    // Median-hyperplane certificate: every point strictly closer to the
    // projection than to the target.
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!((ps[i] - res.projection).norm() < (ps[i] - target).norm()))
        throw ConvergenceFailure("separating witness failed strict domination at point " +
                                 std::to_string(i));
    }
    res.witness = res.projection;
  }
  return res;
}

/// First index i with ||p_i - xi|| <= ||p_i - eta|| + 1e-12.
inline std::optional<std::size_t> condition1_search(const PointSet& ps, const RVector& xi,
                                                    const RVector& eta) {
  if (xi.size() != ps.ambient_dim() || eta.size() != ps.ambient_dim())
    throw InvalidInput("condition1_search: dimension mismatch");
  for (std::size_t i = 0; i < ps.size(); ++i)
    if ((ps[i] - xi).norm() <= (ps[i] - eta).norm() + 1e-12) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Operator hulls

/// Vectors xi_1..xi_n, eta_1..eta_n in C^d.
struct VectorTuple {
  std::vector<CVector> xi;
  std::vector<CVector> eta;
};

/// Index of the first operator A in `ops` with
///   sum ||A xi_i - T xi_i||^2 <= sum ||A xi_i - eta_i||^2 + slack,
/// together with both sums for every operator.
struct OperatorCondition1 {
  std::optional<std::size_t> witness;
  std::vector<double> lhs;
  std::vector<double> rhs;
};

inline OperatorCondition1 operator_condition1(std::span<const Operator> ops, const Operator& T,
                                              const VectorTuple& tuple, double slack = 0) {
  OperatorCondition1 out;
  for (std::size_t x = 0; x < ops.size(); ++x) {
    double lhs = 0, rhs = 0;
    for (std::size_t i = 0; i < tuple.xi.size(); ++i) {
      const CVector ax = ops[x] * tuple.xi[i];
      lhs += (ax - T * tuple.xi[i]).squaredNorm();
      rhs += (ax - tuple.eta[i]).squaredNorm();
    }
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    if (!out.witness && lhs <= rhs + slack) out.witness = x;
  }
  return out;
}

struct RefutingFamily {
  VectorTuple tuple;
  /// min over x of (lhs - rhs); strictly positive when verified.
  double margin = 0;
  /// Squared distance in the stacked space, a lower bound for the margin.
  double stacked_distance_sq = 0;
  bool verified = false;
};

struct Theorem21Report {
  HullResult hull;
  bool member = false;
  /// Condition-(1) verdict: witnesses found in every random trial (member)
  /// or no refuting family verified (non-member).
  bool condition1 = false;
  int trials = 0;
  int witnessed = 0;
  std::optional<RefutingFamily> refutation;
  bool agree() const { return member == condition1; }
};

/// Builds xi_i = e_i (i < d), stacks f(x) = (A_x xi_i)_i and the target
/// (T xi_i)_i, projects onto conv{f(x)}, and takes eta_i as the blocks of the
/// projection. Verified when every operator is strictly defeated.
inline RefutingFamily construct_refuting_family(std::span<const Operator> ops, const Operator& T,
                                                double tol = kDefaultMembershipTol) {
  const int d = T.dim();
  RefutingFamily rf;
  for (int i = 0; i < d; ++i) rf.tuple.xi.push_back(CVector::Unit(d, i));
  auto stack = [&](const Operator& a) {
    CVector s(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i) s.segment(static_cast<Eigen::Index>(i) * d, d) = a * rf.tuple.xi[i];
    return realify(s);
  };
  std::vector<RVector> pts;
  for (const auto& a : ops) pts.push_back(stack(a));
  const RVector target = stack(T);
  const HullResult h = project_onto_hull(PointSet(std::move(pts)), target, tol);
  const CVector eta = complexify(h.projection);
  for (int i = 0; i < d; ++i) rf.tuple.eta.push_back(eta.segment(static_cast<Eigen::Index>(i) * d, d));
  rf.stacked_distance_sq = h.distance * h.distance;
  const auto c1 = operator_condition1(ops, T, rf.tuple);
  rf.margin = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < ops.size(); ++x) rf.margin = std::min(rf.margin, c1.lhs[x] - c1.rhs[x]);
  rf.verified = !h.member && rf.margin > 0 && !c1.witness;
  return rf;
}

/// Decides T in conv{ops} two ways: by projection in Frobenius geometry, and
/// through operator action on vector tuples (random tuples when T is a
/// member, a constructed refuting tuple otherwise).
inline Theorem21Report theorem21_equivalence_test(std::span<const Operator> ops, const Operator& T,
                                                  int trials, int n_max, std::uint64_t seed,
                                                  double tol = kDefaultMembershipTol) {
  if (ops.empty()) throw InvalidInput("operator family is empty");
  if (trials < 1 || n_max < 1) throw InvalidInput("trials and n_max must be >= 1");
  for (const auto& a : ops)
    if (a.dim() != T.dim()) throw InvalidInput("operator family and target differ in dimension");
  const int d = T.dim();
  Theorem21Report rep;
  rep.hull = project_onto_hull(PointSet::from_operators(ops), vectorize(T), tol);
  rep.member = rep.hull.member;
  if (rep.member) {
    // T sits within hull.distance (Frobenius) of a true hull point; that
    // perturbs the left-hand side by at most this much.
    const double delta = rep.hull.distance;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
      const int n = std::uniform_int_distribution<int>(1, n_max)(rng);
      VectorTuple tuple;
      double xi_sq = 0;
      for (int i = 0; i < n; ++i) {
        tuple.xi.push_back(random_gaussian_matrix(d, 1, rng).col(0));
        tuple.eta.push_back(random_gaussian_matrix(d, 1, rng).col(0));
        xi_sq += tuple.xi.back().squaredNorm();
      }
      const auto c1 = operator_condition1(ops, T, tuple);
      bool found = c1.witness.has_value();
      if (!found) {
        for (std::size_t x = 0; x < ops.size() && !found; ++x) {
          const double slack = 2 * delta * std::sqrt(xi_sq * c1.lhs[x]) + delta * delta * xi_sq +
                               1e-12 * std::max(1.0, c1.rhs[x]);
          found = c1.lhs[x] <= c1.rhs[x] + slack;
        }
      }
      ++rep.trials;
      if (found) ++rep.witnessed;
    }
    rep.condition1 = rep.witnessed == rep.trials;
  } else {
    rep.refutation = construct_refuting_family(ops, T, tol);
    rep.condition1 = !rep.refutation->verified;
  }
  return rep;
}

}  // namespace ulam
