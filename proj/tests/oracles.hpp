#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical routines beyond plain Eigen arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Classical fourth-order Runge-Kutta for i d(psi)/dt = H psi.
inline Vec rk4(const Mat& h, Vec psi, double t, int steps) {
  const cplx minus_i(0.0, -1.0);
  const double dt = t / steps;
  auto f = [&](const Vec& y) -> Vec { return minus_i * (h * y); };
  for (int s = 0; s < steps; ++s) {
    const Vec k1 = f(psi);
    const Vec k2 = f(psi + 0.5 * dt * k1);
    const Vec k3 = f(psi + 0.5 * dt * k2);
    const Vec k4 = f(psi + dt * k3);
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

/// Tr_B of a (dA*dB)-square matrix by explicit index contraction:
/// out(a, a') = sum_b rho(a*dB + b, a'*dB + b).
inline Mat trace_out_second(const Mat& rho, int da, int db) {
  Mat out = Mat::Zero(da, da);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b) out(a, ap) += rho(a * db + b, ap * db + b);
  return out;
}

/// Tr_A, same conventions.
inline Mat trace_out_first(const Mat& rho, int da, int db) {
  Mat out = Mat::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int bp = 0; bp < db; ++bp)
      for (int a = 0; a < da; ++a) out(b, bp) += rho(a * db + b, a * db + bp);
  return out;
}

/// Orthonormal basis of span{psi, H psi, H^2 psi, ...}: each new power
/// direction H q_k is orthogonalized against every accepted vector with two
/// classical Gram-Schmidt passes and dropped once its residual is below
/// `rank_tol` relative to |H q_k|.
inline Mat krylov_span(const Mat& h, const Vec& psi, double rank_tol = 1e-10) {
  std::vector<Vec> q{psi.normalized()};
  for (Eigen::Index k = 1; k < psi.size(); ++k) {
    Vec v = h * q.back();
    const double scale = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= u.dot(v) * u;
    if (v.norm() <= rank_tol * std::max(scale, 1e-300)) break;
    q.push_back(v.normalized());
  }
  Mat out(psi.size(), static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = q[i];
  return out;
}

/// Qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline std::array<cplx, 2> bloch(double theta, double phi) {
  return {cplx(std::cos(0.5 * theta), 0.0), std::polar(std::sin(0.5 * theta), phi)};
}

/// |<a a a|psi>|^2 for a three-qubit psi (index = 4 i + 2 j + k).
inline double symmetric_overlap(const Vec& psi, const std::array<cplx, 2>& a) {
  cplx s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s += std::conj(a[i] * a[j] * a[k]) * psi(4 * i + 2 * j + k);
  return std::norm(s);
}

/// max over (a, b) on Bloch grids of max_c |<a b c|psi>|^2; the third party
/// is maximized analytically as the norm of the contracted environment.
inline double two_sphere_overlap(const Vec& psi, const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
  double n = 0.0;
  for (int k = 0; k < 2; ++k) {
    cplx e = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) e += std::conj(a[i] * b[j]) * psi(4 * i + 2 * j + k);
    n += std::norm(e);
  }
  return n;
}

/// Brute-force max over symmetric product states a^{x3}: a 181 x 361 grid in
/// (theta, phi) followed by repeated local refinement around the best cell.
inline double max_symmetric_product_overlap(const Vec& psi) {
  const double pi = std::numbers::pi;
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i <= 180; ++i)
    for (int j = 0; j <= 360; ++j) {
      const double th = pi * i / 180.0, ph = 2.0 * pi * j / 360.0;
      const double v = symmetric_overlap(psi, bloch(th, ph));
      if (v > best) best = v, bt = th, bp = ph;
    }
  double ht = pi / 180.0, hp = 2.0 * pi / 360.0;
  for (int level = 0; level < 12; ++level) {
    const double ct = bt, cp = bp;
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j) {
        const double th = std::clamp(ct + ht * i / 10.0, 0.0, pi), ph = cp + hp * j / 10.0;
        const double v = symmetric_overlap(psi, bloch(th, ph));
        if (v > best) best = v, bt = th, bp = ph;
      }
    ht /= 5.0;
    hp /= 5.0;
  }
  return best;
}

/// Brute-force max over fully product three-qubit states: a coarse grid on two
/// Bloch spheres with the third factor optimal in closed form, then local
/// refinement in all four angles.
inline double max_product_overlap_two_sphere(const Vec& psi, int n_theta = 37, int n_phi = 72) {
  const double pi = std::numbers::pi;
  std::vector<std::array<double, 2>> grid;
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < (i == 0 || i == n_theta - 1 ? 1 : n_phi); ++j)
      grid.push_back({pi * i / (n_theta - 1), 2.0 * pi * j / n_phi});
  std::vector<std::array<cplx, 2>> states;
  for (const auto& g : grid) states.push_back(bloch(g[0], g[1]));
  double best = -1.0;
  std::array<double, 4> x{};
  for (std::size_t p = 0; p < grid.size(); ++p)
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const double v = two_sphere_overlap(psi, states[p], states[q]);
      if (v > best) best = v, x = {grid[p][0], grid[p][1], grid[q][0], grid[q][1]};
    }
  double h = pi / (n_theta - 1);
  for (int level = 0; level < 10; ++level) {
    const auto c = x;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b)
        for (int d = -3; d <= 3; ++d)
          for (int e = -3; e <= 3; ++e) {
            const std::array<double, 4> y{c[0] + h * a / 3.0, c[1] + h * b / 3.0, c[2] + h * d / 3.0,
                                          c[3] + h * e / 3.0};
            const double v = two_sphere_overlap(psi, bloch(y[0], y[1]), bloch(y[2], y[3]));
            if (v > best) best = v, x = y;
          }
    h /= 3.0;
  }
  return best;
}

/// Maximizes -sum p ln p subject to sum p = 1, sum n p = mean, p >= 0 on
/// {0, ..., d-1} by projected gradient ascent. The gradient is projected onto
/// the null space of the two equality constraints; steps are backtracked to
/// stay strictly inside the simplex and to increase the entropy.
inline std::vector<double> projected_gradient_max_entropy(int d, double mean, int max_iter = 200000) {
  const double avg = 0.5 * (d - 1);
  const double lambda = mean / avg;  // mix of delta_0 and uniform with the right mean
  std::vector<double> p(static_cast<std::size_t>(d), lambda / d);
  p[0] += 1.0 - lambda;
  auto entropy = [](const std::vector<double>& q) {
    double s = 0.0;
    for (double x : q) s -= x > 0 ? x * std::log(x) : 0.0;
    return s;
  };
  // Orthonormal basis of span{1, n} for the projection.
  Eigen::VectorXd u1 = Eigen::VectorXd::Ones(d).normalized();
  Eigen::VectorXd u2(d);
  for (int n = 0; n < d; ++n) u2(n) = n;
  u2 -= u1.dot(u2) * u1;
  u2.normalize();
  double step = 1e-2;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd g(d);
    for (int n = 0; n < d; ++n) g(n) = -(std::log(p[static_cast<std::size_t>(n)]) + 1.0);
    g -= u1.dot(g) * u1;
    g -= u2.dot(g) * u2;
    if (g.norm() < 1e-15) break;
    const double h0 = entropy(p);
    double s = step * 2.0;
    std::vector<double> trial(p.size());
    for (;;) {
      bool inside = true;
      for (int n = 0; n < d; ++n) {
        trial[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n)] + s * g(n);
        inside = inside && trial[static_cast<std::size_t>(n)] > 0.0;
      }
      if (inside && entropy(trial) >= h0) break;
      s *= 0.5;
      if (s < 1e-300) return p;
    }
    step = s;
    p = trial;
  }
  return p;
}

}  // namespace oracle
