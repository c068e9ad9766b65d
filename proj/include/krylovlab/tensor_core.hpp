#pragma once

// Dense complex linear algebra over multipartite Hilbert spaces.
//
// Party 0 is the most significant digit of a composite index, so the
// amplitude vector of |a> (x) |b> is the Kronecker product of the factors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "krylovlab/errors.hpp"

namespace krylovlab {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;

class HilbertStructure {
 public:
  explicit HilbertStructure(std::vector<int> party_dims) : dims_(std::move(party_dims)) {
    if (dims_.empty()) throw ValidationError("HilbertStructure: no parties");
    total_ = 1;
    for (int d : dims_) {
      if (d < 2) throw ValidationError("HilbertStructure: every local dimension must be >= 2");
      if (total_ > (std::ptrdiff_t{1} << 24) / d)
        throw ValidationError("HilbertStructure: total dimension too large for dense storage");
      total_ *= d;
    }
  }

  static HilbertStructure single(int dim) { return HilbertStructure({dim}); }
  static HilbertStructure qubits(int n) { return HilbertStructure(std::vector<int>(static_cast<std::size_t>(n), 2)); }

  const std::vector<int>& party_dims() const noexcept { return dims_; }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  Eigen::Index total_dim() const noexcept { return total_; }

  /// Stride of `party` in the composite index.
  Eigen::Index stride(int party) const {
    Eigen::Index s = 1;
    for (int p = parties() - 1; p > party; --p) s *= dims_[static_cast<std::size_t>(p)];
    return s;
  }

  /// Local index of `party` inside composite index `idx`.
  int digit(Eigen::Index idx, int party) const {
    return static_cast<int>((idx / stride(party)) % dims_[static_cast<std::size_t>(party)]);
  }

  HilbertStructure concat(const HilbertStructure& other) const {
    std::vector<int> d = dims_;
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return HilbertStructure(std::move(d));
  }

  friend bool operator==(const HilbertStructure&, const HilbertStructure&) = default;

 private:
  std::vector<int> dims_;
  Eigen::Index total_ = 1;
};

class StateVector {
 public:
  StateVector(HilbertStructure structure, Vector amplitudes)
      : structure_(std::move(structure)), amps_(std::move(amplitudes)) {
    if (amps_.size() != structure_.total_dim())
      throw StructuralError("StateVector: amplitude count does not match structure");
    if (std::abs(amps_.norm() - 1.0) > kNormTolerance)
      throw ValidationError("StateVector: amplitudes are not normalized (|norm - 1| = " +
                            std::to_string(std::abs(amps_.norm() - 1.0)) + ")");
  }

  /// Rescales `amplitudes` to unit norm; zero vectors are rejected.
  static StateVector normalized(HilbertStructure structure, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("StateVector: cannot normalize a zero vector");
    amplitudes /= n;
    return StateVector(std::move(structure), std::move(amplitudes));
  }

  static StateVector basis(HilbertStructure structure, Eigen::Index index) {
    Vector v = Vector::Zero(structure.total_dim());
    if (index < 0 || index >= v.size()) throw StructuralError("StateVector::basis: index out of range");
    v(index) = 1.0;
    return StateVector(std::move(structure), std::move(v));
  }

  const HilbertStructure& structure() const noexcept { return structure_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  cplx operator[](Eigen::Index i) const { return amps_(i); }

  /// <this|other>
  cplx inner(const StateVector& other) const {
    if (other.dim() != dim()) throw StructuralError("StateVector::inner: dimension mismatch");
    return amps_.dot(other.amps_);
  }

  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  HilbertStructure structure_;
  Vector amps_;
};

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns are orthonormal eigenvectors
};

inline Eigensystem solve_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw DiagnosticError("Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Dense Hermitian matrix with a lazily computed, shared eigensystem.
///
/// The cache is filled at most once (std::call_once), so a const operator may
/// be shared between threads. Copies share the cache; the matrix itself is
/// immutable after construction.
class HermitianOperator {
 public:
  HermitianOperator(HilbertStructure structure, Matrix matrix)
      : structure_(std::move(structure)), matrix_(std::move(matrix)), cache_(std::make_shared<Cache>()) {
    if (matrix_.rows() != structure_.total_dim() || matrix_.cols() != structure_.total_dim())
      throw StructuralError("HermitianOperator: matrix shape does not match structure");
    if (!matrix_.allFinite()) throw ValidationError("HermitianOperator: non-finite entries");
    const double deviation = hermiticity_deviation(matrix_);
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    if (deviation > kHermiticityTolerance * scale)
      throw ValidationError("HermitianOperator: matrix is not Hermitian (deviation " +
                            std::to_string(deviation) + ")");
    if (deviation > 0.0) matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  }

  static HermitianOperator projector(const StateVector& psi) {
    return HermitianOperator(psi.structure(), psi.projector());
  }

  static double hermiticity_deviation(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
  }

  const HilbertStructure& structure() const noexcept { return structure_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  double trace() const { return matrix_.trace().real(); }

  const Eigensystem& eigensystem() const {
    std::call_once(cache_->once, [this] { cache_->system = solve_hermitian(matrix_); });
    return cache_->system;
  }

  double spectral_norm() const {
    const auto& ev = eigensystem().values;
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }

 private:
  struct Cache {
    std::once_flag once;
    Eigensystem system;
  };

  HilbertStructure structure_;
  Matrix matrix_;
  std::shared_ptr<Cache> cache_;
};

/// Eigenvalues ascending with orthonormal eigenvectors.
inline Eigensystem eigendecompose(const HermitianOperator& op) { return op.eigensystem(); }

/// Rejects operators that are not density matrices (unit trace, PSD within
/// tolerance). Returns the eigenvalues with small negatives clipped to zero.
inline RealVector density_spectrum(const HermitianOperator& rho) {
  if (std::abs(rho.trace() - 1.0) > kTraceTolerance)
    throw ValidationError("density matrix must have unit trace (trace = " + std::to_string(rho.trace()) + ")");
  RealVector ev = rho.eigensystem().values;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -kPsdTolerance) throw ValidationError("density matrix has a negative eigenvalue");
    if (ev(i) < 0.0) ev(i) = 0.0;
  }
  return ev;
}

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  Vector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) out.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
  // Renormalize to absorb rounding in the factor norms.
  return StateVector::normalized(a.structure().concat(b.structure()), std::move(out));
}

namespace detail {

// Sorted, validated list of parties.
inline std::vector<int> checked_parties(const HilbertStructure& s, std::span<const int> parties) {
  std::vector<int> out(parties.begin(), parties.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw StructuralError("party list contains duplicates");
  for (int p : out)
    if (p < 0 || p >= s.parties()) throw StructuralError("party index " + std::to_string(p) + " out of range");
  return out;
}

inline std::vector<int> complement(const HilbertStructure& s, const std::vector<int>& parties) {
  std::vector<int> out;
  for (int p = 0; p < s.parties(); ++p)
    if (!std::binary_search(parties.begin(), parties.end(), p)) out.push_back(p);
  return out;
}

inline HilbertStructure sub_structure(const HilbertStructure& s, const std::vector<int>& parties) {
  std::vector<int> d;
  for (int p : parties) d.push_back(s.dim(p));
  return HilbertStructure(std::move(d));
}

// For every composite index, the local index inside the sub-register formed
// by `parties` (mixed radix, ascending party order).
inline std::vector<Eigen::Index> register_index(const HilbertStructure& s, const std::vector<int>& parties) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(s.total_dim()), 0);
  for (Eigen::Index idx = 0; idx < s.total_dim(); ++idx) {
    Eigen::Index local = 0;
    for (int p : parties) local = local * s.dim(p) + s.digit(idx, p);
    out[static_cast<std::size_t>(idx)] = local;
  }
  return out;
}

}  // namespace detail

/// Reshapes a pure state into the matrix M(i_keep, i_rest) across a cut.
inline Matrix bipartite_matrix(const StateVector& psi, std::span<const int> keep) {
  const auto& s = psi.structure();
  const auto k = detail::checked_parties(s, keep);
  const auto r = detail::complement(s, k);
  Eigen::Index dk = 1, dr = 1;
  for (int p : k) dk *= s.dim(p);
  for (int p : r) dr *= s.dim(p);
  const auto ik = detail::register_index(s, k);
  const auto ir = detail::register_index(s, r);
  Matrix m = Matrix::Zero(dk, dr);
  for (Eigen::Index idx = 0; idx < s.total_dim(); ++idx)
    m(ik[static_cast<std::size_t>(idx)], ir[static_cast<std::size_t>(idx)]) = psi[idx];
  return m;
}

/// Reduced density matrix of rho on the parties in `keep`.
inline HermitianOperator partial_trace(const HermitianOperator& rho, std::span<const int> keep) {
  const auto& s = rho.structure();
  const auto k = detail::checked_parties(s, keep);
  if (k.empty()) throw StructuralError("partial_trace: must keep at least one party");
  const auto r = detail::complement(s, k);
  Eigen::Index dk = 1, dr = 1;
  for (int p : k) dk *= s.dim(p);
  for (int p : r) dr *= s.dim(p);
  const auto ik = detail::register_index(s, k);
  const auto ir = detail::register_index(s, r);
  // table(i_keep, i_rest) -> composite index
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> table(dk, dr);
  for (Eigen::Index idx = 0; idx < s.total_dim(); ++idx)
    table(ik[static_cast<std::size_t>(idx)], ir[static_cast<std::size_t>(idx)]) = idx;
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (Eigen::Index t = 0; t < dr; ++t) acc += m(table(a, t), table(b, t));
      out(a, b) = acc;
    }
  return HermitianOperator(detail::sub_structure(s, k), std::move(out));
}

/// Reduced density matrix of a pure state, computed as M M^dagger.
inline HermitianOperator reduced_density(const StateVector& psi, std::span<const int> keep) {
  const auto k = detail::checked_parties(psi.structure(), keep);
  if (k.empty()) throw StructuralError("reduced_density: must keep at least one party");
  const Matrix m = bipartite_matrix(psi, k);
  Matrix rho = m * m.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return HermitianOperator(detail::sub_structure(psi.structure(), k), std::move(rho));
}

/// Exact evolution e^{-iHt} psi0 through the eigendecomposition of H.
inline StateVector evolve(const HermitianOperator& h, const StateVector& psi0, double t) {
  if (h.dim() != psi0.dim()) throw StructuralError("evolve: Hamiltonian and state dimensions differ");
  if (t == 0.0) return psi0;
  const auto& es = h.eigensystem();
  Vector c = es.vectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -es.values(i) * t);
  Vector out = es.vectors * c;
  // Unitary rounding only; renormalizing keeps the StateVector invariant exact.
  out /= out.norm();
  return StateVector(psi0.structure(), std::move(out));
}

struct SchmidtData {
  RealVector coefficients;  // nonincreasing, squares sum to 1
  Matrix left;              // columns: orthonormal vectors on the cut parties
  Matrix right;             // columns: orthonormal vectors on the complement
  std::vector<int> cut;
};

inline SchmidtData schmidt(const StateVector& psi, std::span<const int> cut) {
  const auto k = detail::checked_parties(psi.structure(), cut);
  if (k.empty() || static_cast<int>(k.size()) == psi.structure().parties())
    throw StructuralError("schmidt: cut must be a nonempty proper subset of parties");
  const Matrix m = bipartite_matrix(psi, k);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtData out;
  out.coefficients = svd.singularValues();
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  out.cut = k;
  return out;
}

/// Largest squared Schmidt coefficient across a cut.
inline double max_schmidt_weight(const StateVector& psi, std::span<const int> cut) {
  const Matrix m = bipartite_matrix(psi, cut);
  Eigen::JacobiSVD<Matrix> svd(m);
  const double s = svd.singularValues()(0);
  return s * s;
}

}  // namespace krylovlab
