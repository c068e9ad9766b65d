#pragma once

// Seeded generators for Hamiltonians and initial states.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "krylovlab/errors.hpp"
#include "krylovlab/rng.hpp"
#include "krylovlab/tensor_core.hpp"

namespace krylovlab {

/// (A + A^dagger)/2 with independent complex Gaussian entries, E|A_ij|^2 = 1.
inline HermitianOperator random_gue(const HilbertStructure& structure, std::uint64_t seed) {
  const Eigen::Index d = structure.total_dim();
  if (d < 2) throw ValidationError("random_gue: dimension must be >= 2");
  CounterRng rng(seed);
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
  return HermitianOperator(structure, 0.5 * (a + a.adjoint()));
}

inline HermitianOperator random_gue(int dim, std::uint64_t seed) { return random_gue(HilbertStructure::single(dim), seed); }

/// Normalized vector of independent complex Gaussians (unitarily invariant).
inline StateVector random_haar_state(const HilbertStructure& structure, std::uint64_t seed) {
  CounterRng rng(seed);
  Vector v(structure.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return StateVector::normalized(structure, std::move(v));
}

/// Tensor product of independent Haar-random local states.
inline StateVector random_product_state(const HilbertStructure& structure, std::uint64_t seed) {
  std::optional<StateVector> acc;
  for (int p = 0; p < structure.parties(); ++p) {
    auto local = random_haar_state(HilbertStructure::single(structure.dim(p)), derive_seed(seed, static_cast<std::uint64_t>(p)));
    acc = acc ? tensor_product(*acc, local) : local;
  }
  return *acc;
}

namespace pauli {
inline Matrix x() { Matrix m(2, 2); m << 0, 1, 1, 0; return m; }
inline Matrix y() { Matrix m(2, 2); m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Matrix z() { Matrix m(2, 2); m << 1, 0, 0, -1; return m; }
}  // namespace pauli

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// `local` acting on `site` of a register with the given local dimensions.
inline Matrix embed(const std::vector<int>& dims, int site, const Matrix& local) {
  Matrix out = Matrix::Identity(1, 1);
  for (int p = 0; p < static_cast<int>(dims.size()); ++p)
    out = kron(out, p == site ? local : Matrix::Identity(dims[static_cast<std::size_t>(p)], dims[static_cast<std::size_t>(p)]));
  return out;
}

enum class SpinChainKind { Ising, XY };

/// Open-boundary qubit chains.
///   Ising: sum_i J_i Z_i Z_{i+1} + sum_i h_i X_i
///   XY:    sum_i J_i (X_i X_{i+1} + Y_i Y_{i+1}) / 2 + sum_i h_i Z_i
/// `couplings` has n-1 entries or one broadcast value; `fields` likewise with n.
inline HermitianOperator spin_chain(SpinChainKind kind, int n_sites, const std::vector<double>& couplings,
                                    const std::vector<double>& fields) {
  if (n_sites < 2 || n_sites > 12) throw ValidationError("spin_chain: n_sites must be in [2, 12]");
  auto pick = [](const std::vector<double>& v, int i, std::size_t full, const char* what) {
    if (v.size() == 1) return v[0];
    if (v.size() != full) throw ValidationError(std::string("spin_chain: wrong number of ") + what);
    return v[static_cast<std::size_t>(i)];
  };
  const auto s = HilbertStructure::qubits(n_sites);
  const std::vector<int> dims(static_cast<std::size_t>(n_sites), 2);
  const Eigen::Index d = s.total_dim();
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i + 1 < n_sites; ++i) {
    const double j = pick(couplings, i, static_cast<std::size_t>(n_sites - 1), "couplings");
    if (j == 0.0) continue;
    if (kind == SpinChainKind::Ising) {
      h += j * embed(dims, i, pauli::z()) * embed(dims, i + 1, pauli::z());
    } else {
      h += 0.5 * j * (embed(dims, i, pauli::x()) * embed(dims, i + 1, pauli::x()) +
                      embed(dims, i, pauli::y()) * embed(dims, i + 1, pauli::y()));
    }
  }
  for (int i = 0; i < n_sites; ++i) {
    const double f = pick(fields, i, static_cast<std::size_t>(n_sites), "fields");
    if (f == 0.0) continue;
    h += f * embed(dims, i, kind == SpinChainKind::Ising ? pauli::x() : pauli::z());
  }
  return HermitianOperator(s, std::move(h));
}

/// Qubit coupled to one bosonic mode truncated at `cutoff` photons:
/// wq |1><1| + wc n + g (sigma+ b + sigma- b^dagger), sigma+ = |1><0|.
inline HermitianOperator cavity_truncated(int cutoff, double g, double omega_qubit, double omega_cavity) {
  if (cutoff < 1) throw ValidationError("cavity_truncated: cutoff must be >= 1");
  const int nb = cutoff + 1;
  Matrix b = Matrix::Zero(nb, nb), num = Matrix::Zero(nb, nb);
  for (int n = 1; n < nb; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  for (int n = 0; n < nb; ++n) num(n, n) = n;
  Matrix sp = Matrix::Zero(2, 2), excited = Matrix::Zero(2, 2);
  sp(1, 0) = 1.0;
  excited(1, 1) = 1.0;
  const Matrix id_b = Matrix::Identity(nb, nb), id_q = Matrix::Identity(2, 2);
  Matrix h = omega_qubit * kron(excited, id_b) + omega_cavity * kron(id_q, num) +
             g * (kron(sp, b) + kron(sp.adjoint(), b.adjoint()));
  return HermitianOperator(HilbertStructure({2, nb}), std::move(h));
}

struct QutritModel {
  HermitianOperator hamiltonian;
  StateVector state;
  bool degenerate = false;
};

/// Diagonal qutrit Hamiltonian diag(E0, E1, E2) with state (c0, c1, c2).
inline QutritModel qutrit_from_coherences(double c0, double c1, double c2, double e0, double e1, double e2) {
  if (std::abs(c0 * c0 + c1 * c1 + c2 * c2 - 1.0) > kNormTolerance)
    throw ValidationError("qutrit_from_coherences: amplitudes must be normalized");
  const auto s = HilbertStructure::single(3);
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = e0;
  h(1, 1) = e1;
  h(2, 2) = e2;
  Vector v(3);
  v << c0, c1, c2;
  return {HermitianOperator(s, std::move(h)), StateVector(s, std::move(v)), e0 == e1 || e1 == e2 || e0 == e2};
}

// ---------------------------------------------------------------------------

enum class EnsembleKind { Gue, DiagonalNondegenerate, SpinChainIsing, SpinChainXY, CavityTruncated };

inline const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::Gue: return "gue";
    case EnsembleKind::DiagonalNondegenerate: return "diagonal-nondegenerate";
    case EnsembleKind::SpinChainIsing: return "spin-chain-ising";
    case EnsembleKind::SpinChainXY: return "spin-chain-xy";
    case EnsembleKind::CavityTruncated: return "cavity-truncated";
  }
  return "unknown";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  for (auto k : {EnsembleKind::Gue, EnsembleKind::DiagonalNondegenerate, EnsembleKind::SpinChainIsing,
                 EnsembleKind::SpinChainXY, EnsembleKind::CavityTruncated})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown model kind '" + s + "'");
}

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Gue;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  HilbertStructure structure = HilbertStructure::single(2);

  double param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return params.count(key) != 0; }
};

struct ModelInstance {
  HermitianOperator hamiltonian;
  StateVector state;
  bool degenerate = false;
};

/// Builds (H, psi0) for an ensemble spec. Identical specs give bit-identical
/// instances.
///
/// Parameters by kind:
///   gue:                    scale (1)
///   diagonal-nondegenerate: e<i> energies, else i*omega (omega = 1);
///                           c<i> real amplitudes (renormalized), else Haar
///   spin-chain-ising / xy:  J (1), h (0.5 Ising, 0 XY); basis_state selects
///                           a computational basis state, else random product
///   cavity-truncated:       cutoff (structure [2, cutoff+1]), g (1),
///                           omega_q (0), omega_c (0); basis_state, else |1>|0>
inline ModelInstance generate(const EnsembleSpec& spec) {
  const auto& s = spec.structure;
  const std::uint64_t h_seed = derive_seed(spec.seed, 0);
  const std::uint64_t psi_seed = derive_seed(spec.seed, 1);
  auto basis_or = [&](StateVector fallback) {
    if (!spec.has("basis_state")) return fallback;
    return StateVector::basis(s, static_cast<Eigen::Index>(spec.param("basis_state", 0)));
  };
  switch (spec.kind) {
    case EnsembleKind::Gue: {
      const auto h = random_gue(s, h_seed);
      return {HermitianOperator(s, spec.param("scale", 1.0) * h.matrix()), random_haar_state(s, psi_seed), false};
    }
    case EnsembleKind::DiagonalNondegenerate: {
      const Eigen::Index d = s.total_dim();
      Matrix h = Matrix::Zero(d, d);
      std::vector<double> e;
      for (Eigen::Index i = 0; i < d; ++i) {
        const std::string key = "e" + std::to_string(i);
        e.push_back(spec.has(key) ? spec.param(key, 0.0) : spec.param("omega", 1.0) * static_cast<double>(i));
        h(i, i) = e.back();
      }
      bool degenerate = false;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) degenerate = degenerate || e[i] == e[j];
      bool explicit_amps = true;
      Vector v(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        const std::string key = "c" + std::to_string(i);
        explicit_amps = explicit_amps && spec.has(key);
        v(i) = spec.param(key, 0.0);
      }
      auto psi = explicit_amps ? StateVector::normalized(s, v) : random_haar_state(s, psi_seed);
      return {HermitianOperator(s, std::move(h)), basis_or(std::move(psi)), degenerate};
    }
    case EnsembleKind::SpinChainIsing:
    case EnsembleKind::SpinChainXY: {
      for (int d : s.party_dims())
        if (d != 2) throw ValidationError("spin chains need qubit parties");
      const bool ising = spec.kind == EnsembleKind::SpinChainIsing;
      auto h = spin_chain(ising ? SpinChainKind::Ising : SpinChainKind::XY, s.parties(), {spec.param("J", 1.0)},
                          {spec.param("h", ising ? 0.5 : 0.0)});
      return {std::move(h), basis_or(random_product_state(s, psi_seed)), false};
    }
    case EnsembleKind::CavityTruncated: {
      if (s.parties() != 2 || s.dim(0) != 2) throw ValidationError("cavity model needs structure [2, cutoff+1]");
      auto h = cavity_truncated(s.dim(1) - 1, spec.param("g", 1.0), spec.param("omega_q", 0.0), spec.param("omega_c", 0.0));
      // |1>_qubit |0>_mode
      return {std::move(h), basis_or(StateVector::basis(s, s.dim(1))), false};
    }
  }
  throw ValidationError("unsupported model kind");
}

}  // namespace krylovlab
