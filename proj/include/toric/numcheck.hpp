#pragma once

// Floating-point checks of the local formulas on explicit models: the
// moment map of T*T^l x C^k, the level-set identity behind the symplectic
// cut, the horizontal two-form of the flat trivial bundle, and the sign
// convention d<mu, xi> = -omega(xi_M, .).

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "toric/cones.hpp"
#include "toric/error.hpp"
#include "toric/lattice.hpp"

namespace toric::numcheck {

/// Algebraic identities.
inline constexpr double kAlgebraicTolerance = 1e-10;
/// Finite-difference identities at step kDefaultStep.
inline constexpr double kFiniteDifferenceTolerance = 1e-6;
inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kMinConvergenceOrder = 1.9;
/// Steps for the convergence-order check: h and h / 2.
inline constexpr double kOrderStep = 1e-2;
/// Amplitude of the coordinate warp x = y + a sin(y) of the horizontal check.
inline constexpr double kDefaultWarp = 0.25;

struct ModelPoint {
  std::vector<double> q;
  std::vector<double> p;
  std::vector<std::complex<double>> z;
};

struct ResidualReport {
  double max_abs_residual = 0;
  std::size_t samples = 0;
  double step = 0;

  bool passes(double tolerance) const noexcept { return max_abs_residual < tolerance; }
};

/// (p_1, ..., p_l, |z_1|^2, ..., |z_k|^2)
inline std::vector<double> model_moment(std::size_t ell, std::size_t k, const ModelPoint& pt) {
  if (pt.q.size() != ell || pt.p.size() != ell || pt.z.size() != k)
    fail(ErrorCode::DimensionMismatch, "model point does not match (l, k)");
  std::vector<double> mu(pt.p);
  for (const auto& z : pt.z) mu.push_back(std::norm(z));
  return mu;
}

/// Acts by t in T^l x T^k: q -> q + t, z_j -> exp(2 pi i t_j) z_j.
inline ModelPoint act(const ModelPoint& pt, const std::vector<double>& t) {
  if (t.size() != pt.q.size() + pt.z.size()) fail(ErrorCode::DimensionMismatch, "torus element length");
  ModelPoint out = pt;
  for (std::size_t i = 0; i < out.q.size(); ++i) out.q[i] = std::fmod(out.q[i] + t[i], 1.0);
  for (std::size_t j = 0; j < out.z.size(); ++j)
    out.z[j] *= std::polar(1.0, 2 * std::numbers::pi * t[out.q.size() + j]);
  return out;
}

namespace detail {

inline double to_double(const Rational& x) { return x.get_d(); }

inline void check_step(double h) {
  if (!(h > 0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");
}

/// f'(x) by central differences, dividing by the representable step.
template <class F>
double central_difference(F&& f, double x, double h) {
  const double hi = x + h, lo = x - h;
  return (f(hi) - f(lo)) / (hi - lo);
}

}  // namespace detail

/// Seeded rational samples of C: the slack <eta, v_j> - c_j of every
/// constraint is a multiple of 1/1024 in [0, scale], and the remaining
/// coordinates (in a completed lattice basis) lie in [-scale, scale].
inline std::vector<RatVector> sample_cone(const UnimodularCone& c, std::size_t count, std::uint64_t seed,
                                          long scale = 8) {
  const std::size_t n = c.dim(), k = c.size();
  auto basis = extend_to_basis(c.normals(), n);
  auto inv = inverse(to_rational(IntMatrix::from_rows(basis, n)));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> slack(0, 1024 * scale), free(-1024 * scale, 1024 * scale);
  std::vector<RatVector> out;
  for (std::size_t s = 0; s < count; ++s) {
    RatVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = Rational(i < k ? slack(rng) : free(rng)) / 1024;
      if (i < k) y[i] += c.offsets()[i];
    }
    out.push_back(inv->apply(y));
  }
  return out;
}

/// Sets z_j = sqrt(<eta, v_j> - c_j) and evaluates the level-set map
/// Phi_j = <eta, v_j> - c_j - |z_j|^2 in double precision.
inline ResidualReport cut_residual(const UnimodularCone& c, const std::vector<RatVector>& samples) {
  ResidualReport r{0, samples.size(), 0};
  for (const auto& eta : samples) {
    if (!contains(c, eta)) fail(ErrorCode::PointNotInCone, "sample " + to_string(eta) + " lies outside the cone");
    std::vector<double> e(eta.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = detail::to_double(eta[i]);
    for (std::size_t j = 0; j < c.size(); ++j) {
      double s = -detail::to_double(c.offsets()[j]);
      for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * c.normals()[j][i].get_d();
      const std::complex<double> z(std::sqrt(std::max(s, 0.0)), 0.0);
      r.max_abs_residual = std::max(r.max_abs_residual, std::abs(s - std::norm(z)));
    }
  }
  return r;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  Integer a = sqrt(Integer(x.get_num())), b = sqrt(Integer(x.get_den()));
  if (a * a != x.get_num() || b * b != x.get_den()) return std::nullopt;
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// The level-set map in exact arithmetic, for samples whose slacks are
/// perfect squares; nullopt if some slack is not.
inline std::optional<Rational> cut_residual_exact(const UnimodularCone& c, const std::vector<RatVector>& samples) {
  Rational worst = 0;
  for (const auto& eta : samples) {
    if (!contains(c, eta)) fail(ErrorCode::PointNotInCone, "sample " + to_string(eta) + " lies outside the cone");
    for (std::size_t j = 0; j < c.size(); ++j) {
      Rational s = dual_pairing(eta, c.normals()[j]) - c.offsets()[j];
      auto z = exact_sqrt(s);
      if (!z) return std::nullopt;
      Rational phi = s - *z * *z;
      if (abs(phi) > worst) worst = abs(phi);
    }
  }
  return worst;
}

/// Constant two-form beta = sum_{i<j} beta[i][j] dx_i ^ dx_j on a box in R^n.
struct HorizontalModel {
  std::size_t n = 2;
  std::vector<std::vector<double>> beta;
  double warp = kDefaultWarp;
  double half_width = 1.0;
};

namespace detail {

/// Entry (a, b) of a two-form on (t_1..t_n, y_1..y_n): the t-block is 0..n-1.
using Form = std::vector<std::vector<double>>;

inline void add(Form& f, std::size_t a, std::size_t b, double v) {
  f[a][b] += v;
  f[b][a] -= v;
}

}  // namespace detail

/// On G x V with coordinates (t, y) and x = y + a sin(y) componentwise, the
/// flat model has mu = x, Theta = sum dt_j e_j and
/// omega = sum dx_j ^ dt_j + pi^* beta. Evaluates omega - d<mu, Theta> - pi^* beta
/// on all coordinate pairs, with d<mu, Theta> from central differences.
inline ResidualReport horizontal_residual(const HorizontalModel& m, std::size_t samples, double h,
                                          std::uint64_t seed) {
  detail::check_step(h);
  const std::size_t n = m.n;
  if (!m.beta.empty() && m.beta.size() != n) fail(ErrorCode::DimensionMismatch, "beta is not n x n");
  auto beta = [&](std::size_t i, std::size_t j) { return m.beta.empty() ? 0.0 : m.beta[i][j]; };
  const double a = m.warp;
  auto x_of = [a](double y) { return y + a * std::sin(y); };
  auto dx_of = [a](double y) { return 1 + a * std::cos(y); };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-m.half_width, m.half_width);
  ResidualReport r{0, samples, h};
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> y(n);
    for (auto& v : y) v = box(rng);

    detail::Form omega(2 * n, std::vector<double>(2 * n, 0.0)), dalpha = omega, pullback = omega;
    for (std::size_t j = 0; j < n; ++j) {
      detail::add(omega, n + j, j, dx_of(y[j]));
      // alpha = <mu, Theta> = sum x_j(y) dt_j, so d alpha = sum_j d_{y_j} x_j dy_j ^ dt_j.
      detail::add(dalpha, n + j, j, detail::central_difference(x_of, y[j], h));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double b = beta(i, j) * dx_of(y[i]) * dx_of(y[j]);
        detail::add(omega, n + i, n + j, b);
        detail::add(pullback, n + i, n + j, b);
      }
    for (std::size_t p = 0; p < 2 * n; ++p)
      for (std::size_t q = 0; q < 2 * n; ++q)
        r.max_abs_residual = std::max(r.max_abs_residual, std::abs(omega[p][q] - dalpha[p][q] - pullback[p][q]));
  }
  return r;
}

/// log2 of the residual ratio between steps h and h / 2.
inline double convergence_order(const HorizontalModel& m, std::size_t samples, double h, std::uint64_t seed) {
  const double coarse = horizontal_residual(m, samples, h, seed).max_abs_residual;
  const double fine = horizontal_residual(m, samples, h / 2, seed).max_abs_residual;
  return std::log2(coarse / fine);
}

enum class Convention { Standard, Flipped };

/// Compares finite-difference d<mu, xi> with -iota(xi_M) omega on
/// T*T^l x C^k for every basis vector xi, where
/// omega = sum dp_i ^ dq_i + (1/pi) sum dx_j ^ dy_j and T^k acts by
/// exp(2 pi i t). Flipped compares against +iota(xi_M) omega instead.
inline ResidualReport moment_gradient_check(std::size_t ell, std::size_t k, std::size_t samples, double h,
                                            std::uint64_t seed, Convention convention = Convention::Standard) {
  detail::check_step(h);
  const std::size_t dim = 2 * (ell + k);  // (q, p, x_1, y_1, ..., x_k, y_k)
  const double sign = convention == Convention::Standard ? -1.0 : 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 1.0), coord(-2.0, 2.0);

  auto point_of = [&](const std::vector<double>& u) {
    ModelPoint pt;
    for (std::size_t i = 0; i < ell; ++i) {
      pt.q.push_back(u[i]);
      pt.p.push_back(u[ell + i]);
    }
    for (std::size_t j = 0; j < k; ++j) pt.z.emplace_back(u[2 * ell + 2 * j], u[2 * ell + 2 * j + 1]);
    return pt;
  };

  ResidualReport r{0, samples, h};
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> u(dim);
    for (std::size_t i = 0; i < ell; ++i) u[i] = angle(rng);
    for (std::size_t i = ell; i < dim; ++i) u[i] = coord(rng);

    for (std::size_t g = 0; g < ell + k; ++g) {
      // Generating vector field xi_M and the one-form iota(xi_M) omega.
      std::vector<double> xi(dim, 0.0), contraction(dim, 0.0);
      if (g < ell) {
        xi[g] = 1.0;
      } else {
        const std::size_t j = g - ell, ix = 2 * ell + 2 * j;
        xi[ix] = -2 * std::numbers::pi * u[ix + 1];
        xi[ix + 1] = 2 * std::numbers::pi * u[ix];
      }
      // iota(v)(dp ^ dq) = v_p dq - v_q dp; iota(v)(dx ^ dy) = v_x dy - v_y dx.
      for (std::size_t i = 0; i < ell; ++i) {
        contraction[i] += xi[ell + i];
        contraction[ell + i] -= xi[i];
      }
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t ix = 2 * ell + 2 * j;
        contraction[ix + 1] += xi[ix] / std::numbers::pi;
        contraction[ix] -= xi[ix + 1] / std::numbers::pi;
      }
      for (std::size_t c = 0; c < dim; ++c) {
        auto mu_g = [&](double v) {
          auto w = u;
          w[c] = v;
          return model_moment(ell, k, point_of(w))[g];
        };
        const double fd = detail::central_difference(mu_g, u[c], h);
        r.max_abs_residual = std::max(r.max_abs_residual, std::abs(fd - sign * contraction[c]));
      }
    }
  }
  return r;
}

}  // namespace toric::numcheck
