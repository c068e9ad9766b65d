// Spread complexity of a two-level system against its closed form.
// Usage: qubit_spread [omega] [c0] [c1]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "krylovlab/bounds.hpp"
#include "krylovlab/krylov.hpp"
#include "krylovlab/models.hpp"

using namespace krylovlab;

int main(int argc, char** argv) {
  const double omega = argc > 1 ? std::atof(argv[1]) : 1.0;
  const double c0 = argc > 2 ? std::atof(argv[2]) : 0.6;
  const double c1 = argc > 3 ? std::atof(argv[3]) : 0.8;

  EnsembleSpec spec;
  spec.kind = EnsembleKind::DiagonalNondegenerate;
  spec.structure = HilbertStructure::single(2);
  spec.params = {{"e0", 0.0}, {"e1", omega}, {"c0", c0}, {"c1", c1}};
  const auto inst = generate(spec);

  const auto basis = build_krylov(inst.hamiltonian, inst.state);
  const auto times = uniform_grid(2.0 * std::numbers::pi / omega, 21);
  const auto traj = amplitudes_full_space(basis, inst.hamiltonian, inst.state, times);
  const double n2 = c0 * c0 + c1 * c1;
  const auto exact = qubit_spread_closed_form(0.0, omega, c0 / std::sqrt(n2), c1 / std::sqrt(n2), times);

  std::printf("d_K = %d, b1 = %.6f\n", basis.dim(), basis.b.empty() ? 0.0 : basis.b[0]);
  std::printf("%10s %14s %14s %10s\n", "t", "K(t)", "closed form", "IPR");
  for (std::size_t i = 0; i < times.size(); ++i)
    std::printf("%10.4f %14.10f %14.10f %10.6f\n", times[i], traj.spread[i], exact.spread[i], traj.ipr[i]);
  return 0;
}
