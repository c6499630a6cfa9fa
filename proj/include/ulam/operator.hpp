#pragma once

// Dense complex matrices standing in for B(H) on H = C^d with the standard
// inner product <u, v> = sum u_i conj(v_i) (conjugate-linear in the second
// slot).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ulam/errors.hpp"

namespace ulam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kMaxAsymmetry = 1e-6;

class Operator {
 public:
  /// Square, nonempty, all entries finite.
  explicit Operator(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols())
      throw InvalidInput("operator must be a nonempty square matrix, got " +
                         std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    if (!m_.allFinite()) throw InvalidInput("operator has non-finite entries");
  }

  static Operator identity(int d) { return Operator(CMatrix::Identity(d, d)); }
  static Operator zero(int d) { return Operator(CMatrix::Zero(d, d)); }
  static Operator scalar(Complex c) { return Operator(CMatrix::Constant(1, 1, c)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  Operator adjoint() const { return Operator(m_.adjoint()); }

  friend Operator operator+(const Operator& a, const Operator& b) {
    same_dim(a, b);
    return Operator(a.m_ + b.m_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    same_dim(a, b);
    return Operator(a.m_ - b.m_);
  }
  friend Operator operator*(const Operator& a, const Operator& b) {
    same_dim(a, b);
    return Operator(a.m_ * b.m_);
  }
  friend Operator operator*(Complex c, const Operator& a) { return Operator(c * a.m_); }
  friend Operator operator*(double c, const Operator& a) { return Operator(c * a.m_); }
  friend CVector operator*(const Operator& a, const CVector& v) {
    if (v.size() != a.dim()) throw InvalidInput("vector length does not match operator dimension");
    return a.m_ * v;
  }

  friend bool operator==(const Operator& a, const Operator& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

 private:
  static void same_dim(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim())
      throw InvalidInput("operator dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
  CMatrix m_;
};

/// Largest singular value.
inline double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}
inline double op_norm(const Operator& a) { return op_norm(a.matrix()); }

struct PsdReport {
  double min_eigenvalue = 0;
  double tolerance = kDefaultPsdTol;
  bool verdict = false;
  /// max |A - A*|_ij relative to max(1, max |A_ij|) before symmetrizing.
  double asymmetry = 0;
};

inline double relative_asymmetry(const CMatrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

/// Smallest eigenvalue of (A + A*)/2. Inputs whose asymmetry exceeds
/// `max_asymmetry` are rejected.
inline PsdReport psd_min_eig(const CMatrix& a, double tol = kDefaultPsdTol,
                             double max_asymmetry = kMaxAsymmetry) {
  if (a.rows() < 1 || a.rows() != a.cols()) throw InvalidInput("psd_min_eig needs a square matrix");
  if (!(tol > 0)) throw InvalidInput("positivity tolerance must be positive");
  PsdReport rep;
  rep.tolerance = tol;
  rep.asymmetry = relative_asymmetry(a);
  if (rep.asymmetry > max_asymmetry)
    throw InvalidInput("matrix is not Hermitian (relative asymmetry " +
                       std::to_string(rep.asymmetry) + ")");
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues()(0);
  rep.verdict = rep.min_eigenvalue >= -tol;
  return rep;
}
inline PsdReport psd_min_eig(const Operator& a, double tol = kDefaultPsdTol,
                             double max_asymmetry = kMaxAsymmetry) {
  return psd_min_eig(a.matrix(), tol, max_asymmetry);
}

/// Block-diagonal sum; slot i occupies rows/cols [offset_i, offset_i + d_i).
inline Operator direct_sum(std::span<const Operator> blocks) {
  if (blocks.empty()) throw InvalidInput("direct_sum of an empty list");
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.dim();
  CMatrix m = CMatrix::Zero(total, total);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.dim(), b.dim()) = b.matrix();
    off += b.dim();
  }
  return Operator(std::move(m));
}
inline Operator direct_sum(std::initializer_list<Operator> blocks) {
  return direct_sum(std::span<const Operator>(blocks.begin(), blocks.size()));
}

/// U_i* A U_i for the canonical inclusion U_i of slot i.
inline Operator compress_block(const Operator& a, std::span<const int> block_dims, std::size_t slot) {
  if (slot >= block_dims.size()) throw InvalidInput("compress_block slot out of range");
  int off = 0, total = 0;
  for (std::size_t i = 0; i < block_dims.size(); ++i) {
    if (i < slot) off += block_dims[i];
    total += block_dims[i];
  }
  if (total != a.dim()) throw InvalidInput("block dimensions do not add up to operator dimension");
  return Operator(a.matrix().block(off, off, block_dims[slot], block_dims[slot]));
}

/// Unitary factor W V* of the polar decomposition A = (W V*)(V S V*).
inline Operator polar_unitary(const Operator& a) {
  Eigen::JacobiSVD<CMatrix> svd(a.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Operator(svd.matrixU() * svd.matrixV().adjoint());
}

inline double unitarity_error(const Operator& a) {
  return (a.matrix().adjoint() * a.matrix() - CMatrix::Identity(a.dim(), a.dim()))
      .cwiseAbs()
      .maxCoeff();
}

// ---------------------------------------------------------------------------
// Random sources. Streams are derived from (seed, stream index) so results do
// not depend on evaluation order.

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline CMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

inline CVector random_unit_vector(int d, Rng& rng) {
  CVector v = random_gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
inline Operator random_unitary(int d, Rng& rng) {
  const CMatrix g = random_gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    if (std::abs(diag) > 0) q.col(i) *= diag / std::abs(diag);
  }
  return Operator(std::move(q));
}

}  // namespace ulam
