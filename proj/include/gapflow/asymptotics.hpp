// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Stiffness/load assembly over the neck, the small coefficient system that
// weights the rigid-motion fields, closed-form leading coefficients of the
// gap asymptotics, sweep fitting against |ln eps| / 1/eps bases, and the
// pointwise envelope table for the assembled singular part.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fields.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"

namespace gapflow {

/// Raised when a quadrature underlying an assembled quantity exhausted its
/// cell budget before reaching the requested relative tolerance.
struct NotConverged : std::runtime_error {
  explicit NotConverged(const std::string& what_arg)
      : std::runtime_error("NotConverged: " + what_arg) {}
};

// ---------------------------------------------------------------------------
// Closed-form leading coefficients
// ---------------------------------------------------------------------------

/// Dimensionless curvature combination entering the tangential leading
/// coefficients:
///   K = (9/25) ((k1+k)/(k1-k))^2 + (72/25) k1 k / (k1-k)^2 + 6/25.
/// Requires kappa1 > kappa (separated curvatures).
inline double kappa_K(double kappa1, double kappa) {
  if (!(kappa1 > kappa)) {
    throw DegenerateCurvature("kappa_K requires kappa1 > kappa");
  }
  const double q = kappa1 - kappa;
  const double p = kappa1 + kappa;
  return (9.0 / 25.0) * (p / q) * (p / q) +
         (72.0 / 25.0) * (kappa1 * kappa) / (q * q) + 6.0 / 25.0;
}

/// Leading coefficients of the stiffness asymptotics for the d=3 spherical
/// geometry, with Q := kappa1 - kappa and P := kappa1 + kappa:
///   a11 ~ A11 |ln eps|,  A11 = (mu pi / Q) (1 + (P/Q)^2 K)
///   a33 ~ A33 / eps,     A33 = mu pi / (24 Q^2)
///   a55 ~ A55 |ln eps|,  A55 = mu pi K / Q^3
///   a15 ~ A15 |ln eps|,  A15 = mu pi P K / Q^3
/// a44 stays bounded; `a44_band` is the expected enclosing interval
/// [mu pi R^2/(2Q), 2 mu pi R^2/Q] for the neck-only value.
struct LeadingCoefficients {
  double A11 = 0.0;
  double A33 = 0.0;
  double A55 = 0.0;
  double A15 = 0.0;
  std::array<double, 2> a44_band{0.0, 0.0};
};

inline LeadingCoefficients leading_coefficients(const GapConfig& cfg) {
  if (cfg.d != 3 || cfg.geometry != GeometryClass::Spherical) {
    throw UnsupportedFamily(
        "leading coefficients are tabulated for the d=3 spherical geometry only");
  }
  const double q = cfg.kappa1 - cfg.kappa;
  const double p = cfg.kappa1 + cfg.kappa;
  const double big_k = kappa_K(cfg.kappa1, cfg.kappa);
  const double pi = std::numbers::pi;
  LeadingCoefficients out;
  out.A11 = (cfg.mu * pi / q) * (1.0 + (p / q) * (p / q) * big_k);
  out.A33 = cfg.mu * pi / (24.0 * q * q);
  out.A55 = cfg.mu * pi * big_k / (q * q * q);
  out.A15 = cfg.mu * pi * p * big_k / (q * q * q);
  out.a44_band = {cfg.mu * pi * cfg.R * cfg.R / (2.0 * q),
                  2.0 * cfg.mu * pi * cfg.R * cfg.R / q};
  return out;
}

// ---------------------------------------------------------------------------
// Stiffness matrix and load vector over the neck
// ---------------------------------------------------------------------------

/// Symmetric m-by-m energy-pairing matrix a_{ab} = int_{neck} 2 mu e(v_a):e(v_b),
/// row-major, with per-entry absolute error estimates from the quadrature.
struct StiffnessMatrix {
  int m = 0;
  std::vector<double> entries;
  std::vector<double> error;
  bool converged = false;
  int segments = 0;

  double operator()(int a, int b) const {
    return entries[static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(b)];
  }
};

/// Load vector Q_b = -int_{neck} 2 mu e(v0):e(v_b) for a wall-datum field v0.
struct LoadVector {
  int m = 0;
  std::vector<double> entries;
  std::vector<double> error;
  bool converged = false;
};

namespace detail {

// Shared one-pass assembly: all m(m+1)/2 stiffness pairings, plus m load
// components when `family` is non-null.  Using a single vector quadrature
// makes every entry share the same segment set and weights, so for a
// rigid-complement datum (whose strains are the bitwise negation of a rigid
// field's) the load column reproduces the matching stiffness column bit for
// bit.
template <int D>
std::pair<StiffnessMatrix, LoadVector> assemble_impl(const GapConfig& cfg,
                                                     const FieldId* family,
                                                     double rel_tol,
                                                     QuadratureOptions opt) {
  const int m = rigid_count(cfg.d);
  const int npairs = m * (m + 1) / 2;
  const int ncomp = npairs + (family != nullptr ? m : 0);
  const double two_mu = 2.0 * cfg.mu;

  std::vector<FieldId> ids;
  ids.reserve(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) ids.push_back(FieldId{FamilyKind::Rigid, a, 0, 1});

  std::vector<StrainTensor<D>> strains(static_cast<std::size_t>(m));
  auto pair_index = [m](int a, int b) {  // 0-based, a <= b
    return a * m - a * (a - 1) / 2 + (b - a);
  };

  auto integrand = [&](const Point<D>& x, double* out) {
    for (int a = 0; a < m; ++a) {
      const auto ev = evaluate_field<D>(cfg, ids[static_cast<std::size_t>(a)], x, false);
      strains[static_cast<std::size_t>(a)] = strain(ev.v);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = a; b < m; ++b) {
        out[pair_index(a, b)] = two_mu * contract(strains[static_cast<std::size_t>(a)],
                                                  strains[static_cast<std::size_t>(b)]);
      }
    }
    if (family != nullptr) {
      const auto ev0 = evaluate_field<D>(cfg, *family, x, false);
      const auto e0 = strain(ev0.v);
      for (int b = 0; b < m; ++b) {
        out[npairs + b] = -two_mu * contract(e0, strains[static_cast<std::size_t>(b)]);
      }
    }
  };

  const auto vec = integrate_neck_vec<D>(cfg, integrand, ncomp, cfg.R, rel_tol, opt);

  StiffnessMatrix a_mat;
  a_mat.m = m;
  a_mat.entries.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0);
  a_mat.error.assign(a_mat.entries.size(), 0.0);
  a_mat.converged = vec.converged;
  a_mat.segments = vec.segments;
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const int p = pair_index(a, b);
      const std::size_t ab = static_cast<std::size_t>(a) * static_cast<std::size_t>(m) +
                             static_cast<std::size_t>(b);
      const std::size_t ba = static_cast<std::size_t>(b) * static_cast<std::size_t>(m) +
                             static_cast<std::size_t>(a);
      a_mat.entries[ab] = vec.value[static_cast<std::size_t>(p)];
      a_mat.entries[ba] = vec.value[static_cast<std::size_t>(p)];
      a_mat.error[ab] = vec.error[static_cast<std::size_t>(p)];
      a_mat.error[ba] = vec.error[static_cast<std::size_t>(p)];
    }
  }

  LoadVector q_vec;
  if (family != nullptr) {
    q_vec.m = m;
    q_vec.entries.resize(static_cast<std::size_t>(m));
    q_vec.error.resize(static_cast<std::size_t>(m));
    q_vec.converged = vec.converged;
    for (int b = 0; b < m; ++b) {
      q_vec.entries[static_cast<std::size_t>(b)] = vec.value[static_cast<std::size_t>(npairs + b)];
      q_vec.error[static_cast<std::size_t>(b)] = vec.error[static_cast<std::size_t>(npairs + b)];
    }
  }
  return {std::move(a_mat), std::move(q_vec)};
}

}  // namespace detail

/// Single stiffness entry a_{alpha,beta} (1-based indices) as an adaptive
/// neck integral.  Non-convergence is reported through the flag.
template <int D>
NeckIntegral stiffness_entry(const GapConfig& cfg, int alpha, int beta,
                             double rel_tol = 1e-7, QuadratureOptions opt = {}) {
  const int m = rigid_count(cfg.d);
  if (alpha < 1 || alpha > m || beta < 1 || beta > m) {
    throw ConfigError("stiffness_entry: rigid index out of range");
  }
  const FieldId ida{FamilyKind::Rigid, alpha, 0, 1};
  const FieldId idb{FamilyKind::Rigid, beta, 0, 1};
  return integrate_neck<D>(
      cfg,
      [&](const Point<D>& x) {
        const auto ea = strain(evaluate_field<D>(cfg, ida, x, false).v);
        const auto eb = strain(evaluate_field<D>(cfg, idb, x, false).v);
        return 2.0 * cfg.mu * contract(ea, eb);
      },
      cfg.R, rel_tol, opt);
}

/// Single load entry Q_beta = -int 2 mu e(v0):e(v_beta) for the wall-datum
/// field `family` (1-based beta).
template <int D>
NeckIntegral load_entry(const GapConfig& cfg, const FieldId& family, int beta,
                        double rel_tol = 1e-7, QuadratureOptions opt = {}) {
  const int m = rigid_count(cfg.d);
  if (beta < 1 || beta > m) {
    throw ConfigError("load_entry: rigid index out of range");
  }
  const FieldId idb{FamilyKind::Rigid, beta, 0, 1};
  return integrate_neck<D>(
      cfg,
      [&](const Point<D>& x) {
        const auto e0 = strain(evaluate_field<D>(cfg, family, x, false).v);
        const auto eb = strain(evaluate_field<D>(cfg, idb, x, false).v);
        return -2.0 * cfg.mu * contract(e0, eb);
      },
      cfg.R, rel_tol, opt);
}

/// Full stiffness matrix in one vector quadrature pass.
template <int D>
StiffnessMatrix assemble_stiffness(const GapConfig& cfg, double rel_tol = 1e-7,
                                   QuadratureOptions opt = {}) {
  return detail::assemble_impl<D>(cfg, nullptr, rel_tol, opt).first;
}

/// Stiffness matrix and load vector in one shared vector quadrature pass.
template <int D>
std::pair<StiffnessMatrix, LoadVector> assemble_system(const GapConfig& cfg,
                                                       const FieldId& family,
                                                       double rel_tol = 1e-7,
                                                       QuadratureOptions opt = {}) {
  return detail::assemble_impl<D>(cfg, &family, rel_tol, opt);
}

// ---------------------------------------------------------------------------
// Coefficient system solve
// ---------------------------------------------------------------------------

/// Solution of a C = Q with diagnostics.  `det_scaled` is det * eps/|ln eps|^4
/// (filled by assemble_and_solve; zero on the raw-matrix path).
struct SystemSolution {
  int m = 0;
  std::vector<double> coeff;
  double det = 0.0;
  double det_scaled = 0.0;
  double cond = 0.0;
  double cramer_dev = 0.0;  // max |C_cramer - C_lu| / max |C_lu|
  double residual = 0.0;    // max-norm of a C - Q
  StiffnessMatrix stiffness;
  LoadVector load;
};

/// Solves the m-by-m system directly from a raw matrix and right-hand side:
/// LU with partial pivoting, positivity check on the determinant, 1-norm
/// condition number, and a Cramer-rule agreement diagnostic.
inline SystemSolution solve_system(int m, const std::vector<double>& a,
                                   const std::vector<double>& q) {
  if (a.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m) ||
      q.size() != static_cast<std::size_t>(m)) {
    throw ConfigError("solve_system: dimension mismatch");
  }
  const auto factors = lu_factor(m, a);
  if (!(factors.det > 0.0)) {
    throw SingularSystem("coefficient system determinant is not positive");
  }
  SystemSolution sol;
  sol.m = m;
  sol.det = factors.det;
  sol.coeff = lu_solve(factors, q);
  sol.cond = cond1(m, a, factors);

  const auto cramer = cramer_solve(m, a, q, factors.det);
  double scale = 0.0;
  for (const double c : sol.coeff) scale = std::max(scale, std::abs(c));
  double dev = 0.0;
  for (int i = 0; i < m; ++i) {
    dev = std::max(dev, std::abs(cramer[static_cast<std::size_t>(i)] -
                                 sol.coeff[static_cast<std::size_t>(i)]));
  }
  sol.cramer_dev = dev / std::max(scale, 1e-300);

  for (int i = 0; i < m; ++i) {
    double r = -q[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      r += a[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(j)] *
           sol.coeff[static_cast<std::size_t>(j)];
    }
    sol.residual = std::max(sol.residual, std::abs(r));
  }
  return sol;
}

/// Assembles the neck stiffness matrix and the load vector of `family`, adds
/// an optional far-field matrix (defaults to zero; the far field is not
/// computed here), and solves for the rigid-motion coefficients.  Throws
/// NotConverged if the underlying quadrature did not converge.
template <int D>
SystemSolution assemble_and_solve(const GapConfig& cfg, const FieldId& family,
                                  double rel_tol = 1e-7,
                                  const std::vector<double>& far_field = {},
                                  QuadratureOptions opt = {}) {
  auto [a_mat, q_vec] = assemble_system<D>(cfg, family, rel_tol, opt);
  if (!a_mat.converged || !q_vec.converged) {
    throw NotConverged("system assembly quadrature exhausted its cell budget");
  }
  const int m = a_mat.m;
  std::vector<double> a_full = a_mat.entries;
  if (!far_field.empty()) {
    if (far_field.size() != a_full.size()) {
      throw ConfigError("assemble_and_solve: far_field must be m*m");
    }
    for (std::size_t i = 0; i < a_full.size(); ++i) a_full[i] += far_field[i];
  }
  SystemSolution sol = solve_system(m, a_full, q_vec.entries);
  const double log_eps = std::abs(std::log(cfg.eps));
  sol.det_scaled = sol.det * cfg.eps / (log_eps * log_eps * log_eps * log_eps);
  sol.stiffness = std::move(a_mat);
  sol.load = std::move(q_vec);
  return sol;
}

// ---------------------------------------------------------------------------
// Sweep fitting
// ---------------------------------------------------------------------------

/// Regression basis for eps sweeps: value ~ slope * t(eps) + intercept with
/// t = |ln eps| (log_abs), t = 1/eps (inv), or t = 0 (const: intercept-only
/// fit used for boundedness checks).
enum class FitBasis { LogAbs, Inv, Const };

inline std::string to_string(FitBasis basis) {
  switch (basis) {
    case FitBasis::LogAbs: return "log_abs";
    case FitBasis::Inv: return "inv";
    case FitBasis::Const: return "const";
  }
  return "unknown";
}

struct SweepRecord {
  double eps = 0.0;
  double value = 0.0;
};

struct SweepFit {
  FitBasis basis = FitBasis::Const;
  double slope = 0.0;
  double intercept = 0.0;
  double max_rel_dev = 0.0;  // max |fit - value| / max |value| over the fitting set
};

/// Least-squares fit of the records against the chosen basis.  Requires at
/// least three records with distinct eps so that growth class and offset are
/// separately identifiable.
inline SweepFit sweep_fit(const std::vector<SweepRecord>& records, FitBasis basis) {
  std::vector<double> distinct;
  for (const auto& r : records) {
    if (!(r.eps > 0.0)) throw ConfigError("sweep_fit: eps must be positive");
    if (std::find(distinct.begin(), distinct.end(), r.eps) == distinct.end()) {
      distinct.push_back(r.eps);
    }
  }
  if (distinct.size() < 3) {
    throw ConfigError("sweep_fit: insufficient data, need records at 3 distinct eps");
  }

  auto basis_value = [basis](double eps) {
    switch (basis) {
      case FitBasis::LogAbs: return std::abs(std::log(eps));
      case FitBasis::Inv: return 1.0 / eps;
      case FitBasis::Const: return 0.0;
    }
    return 0.0;
  };

  const double n = static_cast<double>(records.size());
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (const auto& r : records) {
    const double t = basis_value(r.eps);
    st += t;
    sy += r.value;
    stt += t * t;
    sty += t * r.value;
  }
  SweepFit fit;
  fit.basis = basis;
  if (basis == FitBasis::Const) {
    fit.slope = 0.0;
    fit.intercept = sy / n;
  } else {
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw ConfigError("sweep_fit: degenerate basis values");
    fit.slope = (n * sty - st * sy) / denom;
    fit.intercept = (sy - fit.slope * st) / n;
  }
  double scale = 0.0;
  for (const auto& r : records) scale = std::max(scale, std::abs(r.value));
  double dev = 0.0;
  for (const auto& r : records) {
    dev = std::max(dev, std::abs(fit.slope * basis_value(r.eps) + fit.intercept - r.value));
  }
  fit.max_rel_dev = dev / std::max(scale, 1e-300);
  return fit;
}

// ---------------------------------------------------------------------------
// Envelope table
// ---------------------------------------------------------------------------

/// One evaluated grid point of the singular part u = v0 + sum_a C^a v_a:
/// Frobenius gradient magnitude, median-subtracted pressure magnitude,
/// Cauchy-stress magnitude, the envelope bound value with constant 1, and
/// the gradient/bound ratio.
struct EnvelopeRow {
  std::array<double, 3> x{0.0, 0.0, 0.0};  // first three coordinates
  double grad_singular = 0.0;
  double p_singular = 0.0;
  double stress_singular = 0.0;
  double bound_value = 0.0;
  double ratio = 0.0;
};

/// Envelope bound surface for the singular part of a wall-datum problem,
/// evaluated with constant 1: at d=3, (1 + L|x'|)/(L delta) with L=|ln eps|
/// for the tangential and shear-datum classes, and 1/delta for the
/// vertical-datum class at l=1; at d>=4, (eps + |x'|)/delta^2.
template <int D>
double envelope_bound(const GapConfig& cfg, const FieldId& family, const Point<D>& x) {
  std::array<double, D - 1> xp{};
  double r2 = 0.0;
  for (int i = 0; i + 1 < D; ++i) {
    xp[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  }
  const double del = delta<D - 1>(cfg, xp);
  const double r = std::sqrt(r2);
  if (cfg.d >= 4) {
    return (cfg.eps + r) / (del * del);
  }
  if (family.kind == FamilyKind::Phi2 && family.l == 1) {
    return 1.0 / del;
  }
  const double log_eps = std::abs(std::log(cfg.eps));
  return (1.0 + log_eps * r) / (log_eps * del);
}

/// Evaluates the singular part over the grid.  `coeff` are the rigid-motion
/// coefficients C^a from assemble_and_solve.  The pressure column is
/// median-subtracted over the grid before taking magnitudes, matching the
/// additive-constant freedom of the pressure.
template <int D>
std::vector<EnvelopeRow> envelope_table(const GapConfig& cfg, const FieldId& family,
                                        const std::vector<double>& coeff,
                                        const std::vector<Point<D>>& grid) {
  if (family.kind == FamilyKind::Rigid) {
    throw UnsupportedFamily("envelope_table expects a wall-datum family");
  }
  const int m = rigid_count(cfg.d);
  if (coeff.size() != static_cast<std::size_t>(m)) {
    throw ConfigError("envelope_table: coefficient vector must have one entry per rigid motion");
  }

  std::vector<EnvelopeRow> rows(grid.size());
  std::vector<double> pressures(grid.size());
  std::vector<StrainTensor<D>> strains_u(grid.size());

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& x = grid[g];
    auto ev = evaluate_field<D>(cfg, family, x);
    VecJet2<D> u = ev.v;
    double p = ev.p;
    for (int a = 0; a < m; ++a) {
      const double c = coeff[static_cast<std::size_t>(a)];
      const FieldId id{FamilyKind::Rigid, a + 1, 0, 1};
      const auto eva = evaluate_field<D>(cfg, id, x);
      for (int i = 0; i < D; ++i) {
        u[static_cast<std::size_t>(i)] =
            u[static_cast<std::size_t>(i)] + eva.v[static_cast<std::size_t>(i)] * c;
      }
      p += c * eva.p;
    }
    rows[g].grad_singular = grad_norm(u);
    strains_u[g] = strain(u);
    pressures[g] = p;
    for (int i = 0; i < 3 && i < D; ++i) {
      rows[g].x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    }
    rows[g].bound_value = envelope_bound<D>(cfg, family, x);
    rows[g].ratio = rows[g].grad_singular / rows[g].bound_value;
  }

  // Median over the grid fixes the additive pressure constant.
  double median = 0.0;
  if (!pressures.empty()) {
    std::vector<double> sorted = pressures;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double p_adj = pressures[g] - median;
    rows[g].p_singular = std::abs(p_adj);
    double frob = 0.0;
    for (int i = 0; i < D; ++i) {
      for (int j = 0; j < D; ++j) {
        const double sij = 2.0 * cfg.mu * strains_u[g](i, j) - (i == j ? p_adj : 0.0);
        frob += sij * sij;
      }
    }
    rows[g].stress_singular = std::sqrt(frob);
  }
  return rows;
}

}  // namespace gapflow
