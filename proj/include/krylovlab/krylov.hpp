#pragma once

// Lanczos construction of the Krylov basis of (H, psi0) and the Krylov-chain
// amplitudes phi_n(t) = <k_n|psi(t)>, with spread complexity and IPR.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krylovlab/errors.hpp"
#include "krylovlab/tensor_core.hpp"

namespace krylovlab {

inline constexpr double kDefaultLanczosTolerance = 1e-12;
inline constexpr double kSumRuleTolerance = 1e-10;
inline constexpr int kDefaultGridPoints = 401;

struct KrylovBasis {
  HilbertStructure structure;
  Matrix vectors;          // column n is |k_n>
  std::vector<double> a;   // a_0 .. a_{dK-1}
  std::vector<double> b;   // b_1 .. b_{dK-1}, all above the termination threshold
  double termination_threshold = 0.0;

  int dim() const noexcept { return static_cast<int>(vectors.cols()); }

  StateVector vector(int n) const { return StateVector(structure, vectors.col(n)); }

  /// Tridiagonal chain matrix: a on the diagonal, b on the off-diagonals.
  Eigen::MatrixXd tridiagonal() const {
    const int d = dim();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
    for (int n = 0; n < d; ++n) t(n, n) = a[static_cast<std::size_t>(n)];
    for (int n = 1; n < d; ++n) t(n, n - 1) = t(n - 1, n) = b[static_cast<std::size_t>(n - 1)];
    return t;
  }

  /// max |<k_m|k_n> - delta_mn|
  double gram_deviation() const {
    const Matrix g = vectors.adjoint() * vectors;
    return (g - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }
};

/// Lanczos recursion with two-pass full reorthogonalization.
///
/// k_0 = psi0, a_n = <k_n|H|k_n>, v_{n+1} = H k_n - a_n k_n - b_n k_{n-1},
/// then v_{n+1} is orthogonalized twice against every stored vector,
/// b_{n+1} = |v_{n+1}|, k_{n+1} = v_{n+1} / b_{n+1}. Stops once
/// b_{n+1} <= tol * |H|_2 or the space is exhausted.
inline KrylovBasis build_krylov(const HermitianOperator& h, const StateVector& psi0,
                                double tol = kDefaultLanczosTolerance) {
  if (h.dim() != psi0.dim()) throw StructuralError("build_krylov: Hamiltonian and state dimensions differ");
  if (std::abs(psi0.amplitudes().norm() - 1.0) > kNormTolerance)
    throw ValidationError("build_krylov: initial state is not normalized");
  if (!(tol > 0.0)) throw ValidationError("build_krylov: tolerance must be positive");

  const Eigen::Index dim = h.dim();
  const Matrix& hm = h.matrix();
  const double threshold = tol * h.spectral_norm();

  Matrix basis(dim, dim);
  basis.col(0) = psi0.amplitudes();
  std::vector<double> a, b;
  double b_prev = 0.0;
  Eigen::Index n = 0;
  for (;; ++n) {
    Vector w = hm * basis.col(n);
    const double an = basis.col(n).dot(w).real();
    a.push_back(an);
    w -= an * basis.col(n);
    if (n > 0) w -= b_prev * basis.col(n - 1);
    const auto stored = basis.leftCols(n + 1);
    for (int pass = 0; pass < 2; ++pass) w -= stored * (stored.adjoint() * w);
    const double bn = w.norm();
    if (n + 1 == dim || !(bn > threshold)) break;
    b.push_back(bn);
    basis.col(n + 1) = w / bn;
    b_prev = bn;
  }

  KrylovBasis out{psi0.structure(), basis.leftCols(n + 1), std::move(a), std::move(b), threshold};
  return out;
}

struct AmplitudeTrajectory {
  std::vector<double> times;
  Matrix phi;                   // [time x dK]
  std::vector<double> spread;   // K(t)
  std::vector<double> ipr;      // IPR(t)

  int dim_k() const noexcept { return static_cast<int>(phi.cols()); }
  std::size_t size() const noexcept { return times.size(); }

  /// |phi_n(t_i)|^2
  double probability(std::size_t i, int n) const { return std::norm(phi(static_cast<Eigen::Index>(i), n)); }
};

/// K = sum_n n p_n for one probability row.
inline double spread_of(std::span<const double> probs) {
  double k = 0.0;
  for (std::size_t n = 1; n < probs.size(); ++n) k += static_cast<double>(n) * probs[n];
  return k;
}

/// IPR = sum_n p_n^2 for one probability row.
inline double ipr_of(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs) s += p * p;
  return s;
}

/// Sum-rule check and derived K(t), IPR(t). Throws DiagnosticError when
/// sum_n |phi_n|^2 drifts from 1, which signals a basis/Hamiltonian mismatch.
inline AmplitudeTrajectory make_trajectory(std::vector<double> times, Matrix phi) {
  if (static_cast<Eigen::Index>(times.size()) != phi.rows())
    throw StructuralError("trajectory: time grid and amplitude rows differ");
  AmplitudeTrajectory traj{std::move(times), std::move(phi), {}, {}};
  const int dk = traj.dim_k();
  std::vector<double> probs(static_cast<std::size_t>(dk));
  traj.spread.reserve(traj.size());
  traj.ipr.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    double total = 0.0;
    for (int n = 0; n < dk; ++n) total += probs[static_cast<std::size_t>(n)] = traj.probability(i, n);
    if (std::abs(total - 1.0) > kSumRuleTolerance)
      throw DiagnosticError("Krylov amplitudes violate the sum rule at t = " + std::to_string(traj.times[i]) +
                            " (sum |phi_n|^2 = " + std::to_string(total) + ")");
    traj.spread.push_back(spread_of(probs));
    traj.ipr.push_back(ipr_of(probs));
  }
  return traj;
}

/// Projects the exactly evolved state onto each Krylov vector.
inline AmplitudeTrajectory amplitudes_full_space(const KrylovBasis& basis, const HermitianOperator& h,
                                                 const StateVector& psi0, std::span<const double> times) {
  if (basis.vectors.rows() != h.dim() || h.dim() != psi0.dim())
    throw StructuralError("amplitudes_full_space: dimension mismatch");
  const auto& es = h.eigensystem();
  const Vector c = es.vectors.adjoint() * psi0.amplitudes();
  const Matrix kv = basis.vectors.adjoint() * es.vectors;  // <k_n|E_i>
  Matrix phi(static_cast<Eigen::Index>(times.size()), basis.dim());
  Vector ct(c.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (Eigen::Index j = 0; j < c.size(); ++j) ct(j) = c(j) * std::polar(1.0, -es.values(j) * times[i]);
    phi.row(static_cast<Eigen::Index>(i)) = (kv * ct).transpose();
  }
  return make_trajectory({times.begin(), times.end()}, std::move(phi));
}

/// Evolves e_0 on the Krylov chain: phi(t) = exp(-i T t) e_0.
inline AmplitudeTrajectory amplitudes_tridiagonal(const KrylovBasis& basis, std::span<const double> times) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(basis.tridiagonal());
  if (solver.info() != Eigen::Success) throw DiagnosticError("tridiagonal eigensolver did not converge");
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const Eigen::MatrixXd& w = solver.eigenvectors();
  const Eigen::VectorXd w0 = w.row(0).transpose();
  Matrix phi(static_cast<Eigen::Index>(times.size()), basis.dim());
  Vector ct(lam.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (Eigen::Index j = 0; j < lam.size(); ++j) ct(j) = w0(j) * std::polar(1.0, -lam(j) * times[i]);
    phi.row(static_cast<Eigen::Index>(i)) = (w.cast<cplx>() * ct).transpose();
  }
  return make_trajectory({times.begin(), times.end()}, std::move(phi));
}

inline std::vector<double> spread_complexity(const AmplitudeTrajectory& traj) { return traj.spread; }

inline std::vector<double> inverse_participation_ratio(const AmplitudeTrajectory& traj) { return traj.ipr; }

/// n_points uniformly spaced times on [0, t_max].
inline std::vector<double> uniform_grid(double t_max, int n_points = kDefaultGridPoints) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("uniform_grid: t_max must be positive");
  if (n_points < 2) throw ValidationError("uniform_grid: need at least two points");
  std::vector<double> t(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) t[static_cast<std::size_t>(i)] = t_max * i / (n_points - 1);
  t.back() = t_max;
  return t;
}

/// n_points logarithmically spaced times on [t_min, t_max].
inline std::vector<double> log_grid(double t_min, double t_max, int n_points) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw ValidationError("log_grid: need 0 < t_min < t_max");
  if (n_points < 2) throw ValidationError("log_grid: need at least two points");
  std::vector<double> t(static_cast<std::size_t>(n_points));
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int i = 0; i < n_points; ++i)
    t[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (n_points - 1));
  return t;
}

}  // namespace krylovlab
