// Runs the bound checks on a handful of random instances and prints the
// tightest slack seen for each one.
// Usage: bound_survey [seed] [instances]

#include <cstdio>
#include <cstdlib>

#include "krylovlab/bounds.hpp"
#include "krylovlab/models.hpp"

using namespace krylovlab;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const int instances = argc > 2 ? std::atoi(argv[2]) : 5;
  const auto times = uniform_grid(10.0, 101);

  std::printf("%4s %10s %18s %10s %18s %10s\n", "i", "d_K(2x2)", "entropy slack", "d_K(2x2x2)", "ipr-gm slack", "flagged");
  for (int i = 0; i < instances; ++i) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const auto two = HilbertStructure::qubits(2), three = HilbertStructure::qubits(3);
    const auto h2 = random_gue(two, derive_seed(s, 0));
    const auto p2 = random_haar_state(two, derive_seed(s, 1));
    const auto h3 = random_gue(three, derive_seed(s, 2));
    const auto p3 = random_haar_state(three, derive_seed(s, 3));

    const auto es = check_entropy_spread_bound(h2, p2, {0}, times);
    IprBoundOptions opt;
    opt.gm.seed = derive_seed(s, 4);
    const auto ig = check_ipr_gm_bounds(h3, p3, times, opt);
    int flagged = 0;
    for (bool c : ig.condition) flagged += c ? 1 : 0;
    std::printf("%4d %10d %18.6e %10d %18.6e %10d\n", i, build_krylov(h2, p2).dim(), es.min_slack,
                build_krylov(h3, p3).dim(), ig.min_slack, flagged);
    if (es.violations + ig.violations > 0) std::printf("     violations: %d / %d\n", es.violations, ig.violations);
  }
  return 0;
}
