#pragma once

// Entropies, coherence, and the geometric entanglement measures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "krylovlab/errors.hpp"
#include "krylovlab/rng.hpp"
#include "krylovlab/tensor_core.hpp"

namespace krylovlab {

class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw ValidationError("ProbabilityDistribution: empty");
    double total = 0.0;
    for (double x : p_) {
      if (!(x >= 0.0)) throw ValidationError("ProbabilityDistribution: negative or NaN probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ProbabilityDistribution: probabilities do not sum to 1");
  }

  /// Normalizes nonnegative weights.
  static ProbabilityDistribution from_weights(std::vector<double> w) {
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw ValidationError("ProbabilityDistribution: negative or NaN weight");
      total += x;
    }
    if (!(total > 0.0)) throw ValidationError("ProbabilityDistribution: weights sum to zero");
    for (double& x : w) x /= total;
    return ProbabilityDistribution(std::move(w));
  }

  const std::vector<double>& probs() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

  double mean_index() const {
    double m = 0.0;
    for (std::size_t n = 0; n < p_.size(); ++n) m += static_cast<double>(n) * p_[n];
    return m;
  }

 private:
  std::vector<double> p_;
};

namespace detail {
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
}  // namespace detail

/// Shannon entropy in nats, 0 ln 0 = 0.
inline double shannon_entropy(const ProbabilityDistribution& p) {
  double h = 0.0;
  for (double x : p.probs()) h -= detail::xlogx(x);
  return h;
}

/// Von Neumann entropy -Tr(rho ln rho) in nats.
inline double von_neumann_entropy(const HermitianOperator& rho) {
  const RealVector ev = density_spectrum(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s -= detail::xlogx(ev(i));
  return std::max(0.0, s);
}

inline constexpr double kSupportEigenvalueCutoff = 1e-12;
inline constexpr double kSupportLeakTolerance = 1e-10;

/// Umegaki relative entropy Tr[rho (ln rho - ln sigma)].
/// Returns +infinity when rho has weight outside the support of sigma.
inline double relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw StructuralError("relative_entropy: dimension mismatch");
  const RealVector lr = density_spectrum(rho);
  const RealVector ls = density_spectrum(sigma);
  const Matrix& vr = rho.eigensystem().vectors;
  const Matrix& vs = sigma.eigensystem().vectors;
  // overlap(i, j) = |<r_i|s_j>|^2
  const Eigen::MatrixXd overlap = (vr.adjoint() * vs).cwiseAbs2();
  double value = 0.0;
  double leak = 0.0;
  for (Eigen::Index i = 0; i < lr.size(); ++i) {
    if (lr(i) <= 0.0) continue;
    value += detail::xlogx(lr(i));
    for (Eigen::Index j = 0; j < ls.size(); ++j) {
      const double w = lr(i) * overlap(i, j);
      if (ls(j) < kSupportEigenvalueCutoff)
        leak += w;
      else
        value -= w * std::log(ls(j));
    }
  }
  if (leak > kSupportLeakTolerance) return std::numeric_limits<double>::infinity();
  return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

namespace detail {

inline Vector basis_coefficients(const StateVector& psi, const Matrix& basis) {
  if (basis.rows() != psi.dim() || basis.cols() != psi.dim())
    throw StructuralError("coherence: basis must be a square matrix matching the state dimension");
  const double dev = (basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw ValidationError("coherence: basis is not orthonormal");
  return basis.adjoint() * psi.amplitudes();
}

}  // namespace detail

/// l1-norm of coherence, 2 sum_{i<j} |c_i||c_j|, with c the amplitudes of psi
/// in the orthonormal columns of `basis`.
inline double l1_coherence(const StateVector& psi, const Matrix& basis) {
  const Vector c = detail::basis_coefficients(psi, basis);
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    for (Eigen::Index j = i + 1; j < c.size(); ++j) s += std::abs(c(i)) * std::abs(c(j));
  return 2.0 * s;
}

inline double l1_coherence(const StateVector& psi) {
  return l1_coherence(psi, Matrix::Identity(psi.dim(), psi.dim()));
}

/// C_ij = |c_i||c_j|
inline double pairwise_coherence(const StateVector& psi, const Matrix& basis, Eigen::Index i, Eigen::Index j) {
  if (i == j) throw StructuralError("pairwise_coherence: levels must differ");
  if (i < 0 || j < 0 || i >= psi.dim() || j >= psi.dim()) throw StructuralError("pairwise_coherence: level out of range");
  const Vector c = detail::basis_coefficients(psi, basis);
  return std::abs(c(i)) * std::abs(c(j));
}

inline double pairwise_coherence(const StateVector& psi, Eigen::Index i, Eigen::Index j) {
  return pairwise_coherence(psi, Matrix::Identity(psi.dim(), psi.dim()), i, j);
}

// ---------------------------------------------------------------------------
// Geometric measures: 1 - max |<phi|psi>|^2 over block-product states phi.

struct GeometricMeasureOptions {
  int restarts = 32;
  double tol = 1e-12;      // stop when the overlap changes by less than this
  int max_sweeps = 500;
  std::uint64_t seed = 0x4b72796c6f764c62ULL;
};

struct GeometricMeasureResult {
  double value = 0.0;
  Vector maximizer;                          // closest block-product state found
  std::vector<std::vector<int>> partition;   // blocks of the maximizing partition
  int restarts_used = 0;
  bool converged = false;
  bool monotone = true;                      // overlap never decreased between sweeps
};

/// Partition of the parties into blocks; precomputes, for every composite
/// index, its local index inside each block.
class BlockLayout {
 public:
  BlockLayout(const HilbertStructure& s, std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    for (auto& b : blocks_) {
      b = detail::checked_parties(s, b);
      Eigen::Index d = 1;
      for (int p : b) d *= s.dim(p);
      dims_.push_back(d);
      local_.push_back(detail::register_index(s, b));
    }
  }

  std::size_t size() const noexcept { return blocks_.size(); }
  Eigen::Index block_dim(std::size_t b) const { return dims_[b]; }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
  Eigen::Index local(std::size_t b, Eigen::Index idx) const { return local_[b][static_cast<std::size_t>(idx)]; }

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<Eigen::Index> dims_;
  std::vector<std::vector<Eigen::Index>> local_;
};

struct AlternatingOutcome {
  double overlap = 0.0;  // |<phi|psi>|^2 at exit
  int sweeps = 0;
  bool converged = false;
  bool monotone = true;
  std::vector<double> history;  // overlap after each sweep
};

namespace detail {

// Environment of block `b`: psi contracted with conj(factor) on every other
// block. Maximizing over the factor of `b` gives factor = env / |env| and
// overlap = |env|^2.
inline Vector environment(const Vector& psi, const BlockLayout& layout, const std::vector<Vector>& factors,
                          std::size_t b) {
  Vector env = Vector::Zero(layout.block_dim(b));
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
    cplx w = psi(idx);
    if (w == cplx{}) continue;
    for (std::size_t o = 0; o < layout.size(); ++o)
      if (o != b) w *= std::conj(factors[o](layout.local(o, idx)));
    env(layout.local(b, idx)) += w;
  }
  return env;
}

inline Vector expand_product(const BlockLayout& layout, const std::vector<Vector>& factors, Eigen::Index total) {
  Vector out(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    cplx w = 1.0;
    for (std::size_t o = 0; o < layout.size(); ++o) w *= factors[o](layout.local(o, idx));
    out(idx) = w;
  }
  return out;
}

}  // namespace detail

/// Alternating single-block maximization of |<phi|psi>|^2 from the given
/// starting factors (updated in place). Each block update is exact, so the
/// overlap is nondecreasing; `monotone` records whether that held numerically.
inline AlternatingOutcome alternating_overlap(const Vector& psi, const BlockLayout& layout,
                                              std::vector<Vector>& factors, double tol, int max_sweeps) {
  AlternatingOutcome out;
  double previous = -1.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double overlap = 0.0;
    for (std::size_t b = 0; b < layout.size(); ++b) {
      Vector env = detail::environment(psi, layout, factors, b);
      const double n = env.norm();
      if (n > 0.0) factors[b] = env / n;
      overlap = n * n;
    }
    out.history.push_back(overlap);
    out.sweeps = sweep + 1;
    if (previous >= 0.0 && overlap < previous - 1e-13) out.monotone = false;
    if (previous >= 0.0 && std::abs(overlap - previous) < tol) {
      out.converged = true;
      out.overlap = overlap;
      return out;
    }
    previous = overlap;
    out.overlap = overlap;
  }
  return out;
}

/// Set partitions of {0..n-1} into blocks of size <= max_block that cannot be
/// coarsened (no two blocks fit together). Finer partitions never give a
/// larger overlap, so these suffice for the maximization.
inline std::vector<std::vector<std::vector<int>>> maximal_partitions(int n, int max_block) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  // Restricted growth strings enumerate each set partition once.
  auto emit = [&](int blocks) {
    std::vector<std::vector<int>> part(static_cast<std::size_t>(blocks));
    for (int p = 0; p < n; ++p) part[static_cast<std::size_t>(label[static_cast<std::size_t>(p)])].push_back(p);
    for (const auto& b : part)
      if (static_cast<int>(b.size()) > max_block) return;
    for (std::size_t i = 0; i < part.size(); ++i)
      for (std::size_t j = i + 1; j < part.size(); ++j)
        if (static_cast<int>(part[i].size() + part[j].size()) <= max_block) return;
    out.push_back(std::move(part));
  };
  auto rec = [&](auto&& self, int pos, int blocks) -> void {
    if (pos == n) {
      emit(blocks);
      return;
    }
    for (int l = 0; l <= blocks; ++l) {
      label[static_cast<std::size_t>(pos)] = l;
      self(self, pos + 1, std::max(blocks, l + 1));
    }
  };
  if (n > 0) rec(rec, 0, 0);
  return out;
}

namespace detail {

inline GeometricMeasureResult optimize_partitions(const StateVector& psi,
                                                  const std::vector<std::vector<std::vector<int>>>& partitions,
                                                  const GeometricMeasureOptions& opt) {
  if (opt.restarts < 1) throw ValidationError("geometric measure: restarts must be >= 1");
  if (opt.max_sweeps < 1) throw ValidationError("geometric measure: max_sweeps must be >= 1");
  GeometricMeasureResult best;
  double best_overlap = -1.0;
  bool all_converged = true;
  std::uint64_t stream = 0;
  for (const auto& part : partitions) {
    const BlockLayout layout(psi.structure(), part);
    for (int r = 0; r < opt.restarts; ++r) {
      CounterRng rng(derive_seed(opt.seed, stream++));
      std::vector<Vector> factors;
      for (std::size_t b = 0; b < layout.size(); ++b) {
        Vector f(layout.block_dim(b));
        for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = rng.complex_normal();
        factors.push_back(f / f.norm());
      }
      const auto res = alternating_overlap(psi.amplitudes(), layout, factors, opt.tol, opt.max_sweeps);
      all_converged = all_converged && res.converged;
      best.monotone = best.monotone && res.monotone;
      ++best.restarts_used;
      if (res.overlap > best_overlap) {
        best_overlap = res.overlap;
        best.maximizer = detail::expand_product(layout, factors, psi.dim());
        best.partition = layout.blocks();
      }
    }
  }
  best.converged = all_converged;
  best.value = std::clamp(1.0 - best_overlap, 0.0, 1.0);
  return best;
}

inline GeometricMeasureResult bipartite_fallback(const StateVector& psi) {
  const std::vector<int> cut{0};
  const auto sd = schmidt(psi, cut);
  GeometricMeasureResult r;
  const double s0 = sd.coefficients(0);
  r.value = std::clamp(1.0 - s0 * s0, 0.0, 1.0);
  Vector left = sd.left.col(0), right = sd.right.col(0);
  r.maximizer = Vector(psi.dim());
  for (Eigen::Index i = 0; i < left.size(); ++i) r.maximizer.segment(i * right.size(), right.size()) = left(i) * right;
  r.partition = {{0}, {1}};
  r.converged = true;
  return r;
}

}  // namespace detail

/// 1 - max over (m-1)-producible states of |<phi|psi>|^2, 2 <= m <= n.
///
/// Enumerates the maximal partitions into blocks of at most m-1 parties and
/// runs the alternating optimizer on each with `restarts` random starts,
/// keeping the best. The result is a lower bound on the true maximum overlap,
/// hence an upper estimate of the measure.
inline GeometricMeasureResult m_producible_geometric_measure(const StateVector& psi, int m,
                                                             const GeometricMeasureOptions& opt = {}) {
  const int n = psi.structure().parties();
  if (m < 2 || m > n) throw StructuralError("m_producible_geometric_measure: need 2 <= m <= number of parties");
  return detail::optimize_partitions(psi, maximal_partitions(n, m - 1), opt);
}

/// Geometric measure with respect to fully product states.
///
/// Defined for three or more parties; with two parties the exact value
/// 1 - (largest Schmidt coefficient)^2 is returned, and a single party gives 0.
inline GeometricMeasureResult geometric_measure_product(const StateVector& psi, const GeometricMeasureOptions& opt = {}) {
  const int n = psi.structure().parties();
  if (n == 1) {
    GeometricMeasureResult r;
    r.maximizer = psi.amplitudes();
    r.partition = {{0}};
    r.converged = true;
    return r;
  }
  if (n == 2) return detail::bipartite_fallback(psi);
  return m_producible_geometric_measure(psi, 2, opt);
}

/// Generalized geometric measure: 1 - max over nonempty proper cuts of the
/// largest squared Schmidt coefficient.
inline GeometricMeasureResult ggm(const StateVector& psi) {
  const int n = psi.structure().parties();
  if (n < 3) throw StructuralError("ggm: needs at least three parties");
  GeometricMeasureResult r;
  double best = -1.0;
  // Cuts containing party 0 cover each bipartition exactly once.
  for (unsigned mask = 1; mask < (1u << n) - 1; mask += 2) {
    std::vector<int> cut;
    for (int p = 0; p < n; ++p)
      if (mask & (1u << p)) cut.push_back(p);
    const double w = max_schmidt_weight(psi, cut);
    if (w > best) {
      best = w;
      r.partition = {cut, detail::complement(psi.structure(), cut)};
    }
  }
  r.value = std::clamp(1.0 - best, 0.0, 1.0);
  r.converged = true;
  return r;
}

enum class GeometricMeasureKind { Product, Ggm };

inline GeometricMeasureResult geometric_measure(const StateVector& psi, GeometricMeasureKind kind,
                                                const GeometricMeasureOptions& opt = {}) {
  return kind == GeometricMeasureKind::Ggm ? ggm(psi) : geometric_measure_product(psi, opt);
}

}  // namespace krylovlab
