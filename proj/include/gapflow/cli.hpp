// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Command implementations behind the command-line front end.  Every command
// writes one CSV (fixed header, shortest round-trip floats, deterministic row
// order) plus a human-readable summary; exit code 0 means every executed
// check passed, 2 means at least one check failed, and configuration or
// convergence errors surface as exceptions for the caller to map to exit 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "asymptotics.hpp"
#include "config.hpp"
#include "format.hpp"
#include "verify.hpp"

namespace gapflow {

namespace cli_detail {

// The library is dimension-templated; the CLI instantiates d in {3,4,5,6},
// which covers every regime distinction (d = 3 vs d >= 4).
template <typename Fn>
auto dispatch_d(int d, Fn&& fn) {
    switch (d) {
        case 3: return fn(std::integral_constant<int, 3>{});
        case 4: return fn(std::integral_constant<int, 4>{});
        case 5: return fn(std::integral_constant<int, 5>{});
        case 6: return fn(std::integral_constant<int, 6>{});
        default: throw ConfigError("the CLI supports dimensions 3 through 6");
    }
}

inline std::ofstream open_csv(const RunConfig& rc, std::string& path_out) {
    std::filesystem::path dir(rc.output_path);
    if (!dir.empty()) std::filesystem::create_directories(dir);
    const auto path = dir / (to_string(rc.command) + ".csv");
    std::ofstream out(path, std::ios::binary);  // '\n' line ends on all hosts
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    path_out = path.string();
    return out;
}

// One fitted quantity of the asymptotics/sweep table: per-eps values plus a
// single fit whose columns repeat on every row of the quantity.
struct QuantitySweep {
    std::string name;
    std::vector<SweepRecord> records;
    std::vector<double> errors;  // aligned with records; empty field if NaN
    FitBasis basis = FitBasis::Const;
    double ref_value = 0.0;
    bool has_ref = false;
};

inline void emit_sweep_rows(std::ostream& csv, std::ostream& summary,
                            std::vector<QuantitySweep> quantities) {
    std::sort(quantities.begin(), quantities.end(),
              [](const QuantitySweep& a, const QuantitySweep& b) { return a.name < b.name; });
    for (auto& q : quantities) {
        const SweepFit fit = sweep_fit(q.records, q.basis);
        // The headline number is the slope for growing bases and the
        // intercept (mean) for the constant basis.
        const double headline = q.basis == FitBasis::Const ? fit.intercept : fit.slope;
        double rel_dev = 0.0;
        if (q.has_ref && q.ref_value != 0.0)
            rel_dev = std::abs(std::abs(headline) - q.ref_value) / q.ref_value;

        std::vector<std::size_t> order(q.records.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return q.records[a].eps > q.records[b].eps;
        });
        for (const std::size_t i : order) {
            write_csv_row(csv, {q.name, format_double(q.records[i].eps),
                                format_double(q.records[i].value),
                                std::isnan(q.errors[i]) ? "" : format_double(q.errors[i]),
                                to_string(fit.basis), format_double(fit.slope),
                                format_double(fit.intercept),
                                q.has_ref ? format_double(q.ref_value) : "",
                                q.has_ref ? format_double(rel_dev) : ""});
        }
        summary << "  " << q.name << ": " << to_string(fit.basis) << " fit slope "
                << format_double(fit.slope) << ", intercept " << format_double(fit.intercept);
        if (q.has_ref)
            summary << "; reference " << format_double(q.ref_value) << ", relative deviation "
                    << format_double(rel_dev);
        summary << '\n';
    }
}

}  // namespace cli_detail

/// verify: the full invariant battery.  CSV columns
/// check,family,eps,statistic,threshold,verdict,worst_point.
inline int run_verify_command(const RunConfig& rc, std::ostream& summary, std::ostream& diag) {
    VerifyOptions opt;
    opt.eps_grid = rc.eps_grid;
    opt.samples = rc.samples;
    opt.seed = rc.seed;
    opt.families = rc.families;
    if (rc.family_given) opt.families.push_back(family_name(rc.gap, rc.family));

    const auto rows = cli_detail::dispatch_d(rc.gap.d, [&](auto dim) {
        return run_verify<decltype(dim)::value>(rc.gap, opt);
    });

    std::string path;
    auto csv = cli_detail::open_csv(rc, path);
    write_csv_row(csv, {"check", "family", "eps", "statistic", "threshold", "verdict",
                        "worst_point"});
    std::size_t failed = 0;
    for (const auto& row : rows) {
        if (!row.pass) {
            ++failed;
            diag << "FAIL " << row.check << " " << row.family << " eps=" << format_double(row.eps)
                 << " statistic=" << format_double(row.statistic)
                 << " threshold=" << format_double(row.threshold) << '\n';
        }
        write_csv_row(csv, {row.check, row.family, format_double(row.eps),
                            format_double(row.statistic), format_double(row.threshold),
                            row.pass ? "pass" : "fail", format_point(row.worst_point)});
    }
    summary << "verify: " << rows.size() - failed << "/" << rows.size() << " checks passed";
    if (failed) summary << " (" << failed << " failed)";
    summary << "\nwrote " << path << '\n';
    return failed == 0 ? 0 : 2;
}

/// asymptotics: stiffness sweep over the fit grid with fits against the
/// closed-form leading coefficients.  CSV columns
/// quantity,eps,value,error,basis,slope,intercept,ref_value,rel_dev.
inline int run_asymptotics_command(const RunConfig& rc, std::ostream& summary,
                                   std::ostream& diag) {
    if (rc.gap.d != 3 || rc.gap.geometry != GeometryClass::Spherical)
        throw UnsupportedFamily(
            "the asymptotics command tabulates the d=3 spherical coefficients");
    const LeadingCoefficients lead = leading_coefficients(rc.gap);

    using cli_detail::QuantitySweep;
    QuantitySweep a11{"a11", {}, {}, FitBasis::LogAbs, lead.A11, true};
    QuantitySweep a15{"a15", {}, {}, FitBasis::LogAbs, lead.A15, true};
    QuantitySweep a55{"a55", {}, {}, FitBasis::LogAbs, lead.A55, true};
    QuantitySweep a33{"a33", {}, {}, FitBasis::Inv, lead.A33, true};
    QuantitySweep a44{"a44", {}, {}, FitBasis::Const,
                      0.5 * (lead.a44_band[0] + lead.a44_band[1]), true};

    GapConfig cfg = rc.gap;
    for (const double eps : rc.fit_grid) {
        cfg.eps = eps;
        cfg.finalize();
        const StiffnessMatrix S = assemble_stiffness<3>(cfg, rc.rel_tol);
        if (!S.converged) throw NotConverged("stiffness assembly at eps=" + format_double(eps));
        diag << "assembled stiffness at eps=" << format_double(eps) << " (" << S.segments
             << " segments)\n";
        auto push = [&](QuantitySweep& q, int a, int b) {
            q.records.push_back({eps, S(a, b)});
            q.errors.push_back(S.error[static_cast<std::size_t>(a) *
                                           static_cast<std::size_t>(S.m) +
                                       static_cast<std::size_t>(b)]);
        };
        push(a11, 0, 0);
        push(a15, 0, 4);
        push(a55, 4, 4);
        push(a33, 2, 2);
        push(a44, 3, 3);
    }

    std::string path;
    auto csv = cli_detail::open_csv(rc, path);
    write_csv_row(csv, {"quantity", "eps", "value", "error", "basis", "slope", "intercept",
                        "ref_value", "rel_dev"});
    summary << "asymptotics: fits over " << rc.fit_grid.size() << " eps values\n";
    cli_detail::emit_sweep_rows(csv, summary, {a11, a15, a33, a44, a55});
    summary << "wrote " << path << '\n';
    return 0;
}

/// system: assemble and solve the coefficient system per eps.  CSV columns
/// family,eps,alpha,C_alpha,det,det_scaled,cond.  The complement identity
/// diagnostic (load column minus the matching stiffness column) goes to the
/// diagnostic stream; the system CSV header is fixed.
inline int run_system_command(const RunConfig& rc, std::ostream& summary, std::ostream& diag) {
    struct Row {
        double eps;
        SystemSolution sol;
        std::string family;
    };
    std::vector<Row> solved;
    cli_detail::dispatch_d(rc.gap.d, [&](auto dim) {
        constexpr int D = decltype(dim)::value;
        GapConfig cfg = rc.gap;
        std::vector<double> grid = rc.eps_grid;
        std::sort(grid.begin(), grid.end(), std::greater<>());
        for (const double eps : grid) {
            cfg.eps = eps;
            cfg.finalize();
            solved.push_back({eps, assemble_and_solve<D>(cfg, rc.family, rc.rel_tol),
                              family_name(cfg, rc.family)});
        }
        return 0;
    });

    std::string path;
    auto csv = cli_detail::open_csv(rc, path);
    write_csv_row(csv, {"family", "eps", "alpha", "C_alpha", "det", "det_scaled", "cond"});
    for (const auto& row : solved) {
        for (int a = 0; a < row.sol.m; ++a) {
            write_csv_row(csv, {row.family, format_double(row.eps), format_int(a + 1),
                                format_double(row.sol.coeff[static_cast<std::size_t>(a)]),
                                format_double(row.sol.det), format_double(row.sol.det_scaled),
                                format_double(row.sol.cond)});
        }
        // Complement-datum diagnostic: for the zero-exponent wall families the
        // load column must reproduce a stiffness column bitwise.
        if (row.sol.load.m == row.sol.m && rc.family.l == 0 && rc.family.kind != FamilyKind::Rigid) {
            const int col = rc.family.kind == FamilyKind::Phi1   ? 0
                            : rc.family.kind == FamilyKind::Phi2 ? rc.gap.d - 1
                                                                 : rc.family.idx - 1;
            double worst = 0.0;
            for (int b = 0; b < row.sol.m; ++b)
                worst = std::max(worst, std::abs(row.sol.load.entries[static_cast<std::size_t>(b)] -
                                                 row.sol.stiffness(col, b)));
            diag << "complement diagnostic eps=" << format_double(row.eps)
                 << " max|Q_beta - a_" << col + 1 << "beta| = " << format_double(worst) << '\n';
        }
        summary << "  eps=" << format_double(row.eps) << ": det=" << format_double(row.sol.det)
                << ", det*eps/|ln eps|^4=" << format_double(row.sol.det_scaled)
                << ", cond=" << format_double(row.sol.cond) << '\n';
    }
    summary << "wrote " << path << '\n';
    return 0;
}

/// envelope: solve the coefficient system per eps, then tabulate the singular
/// part against the bound surface on a seeded sample grid.  CSV columns
/// family,eps,x1,x2,x3,grad_singular,p_singular,stress_singular,bound_value,ratio.
inline int run_envelope_command(const RunConfig& rc, std::ostream& summary, std::ostream& diag) {
    if (rc.family.kind == FamilyKind::Rigid)
        throw UnsupportedFamily("the envelope command expects a wall-datum family");

    struct Entry {
        double eps;
        EnvelopeRow row;
    };
    std::vector<Entry> table;
    double worst_ratio = 0.0;
    cli_detail::dispatch_d(rc.gap.d, [&](auto dim) {
        constexpr int D = decltype(dim)::value;
        GapConfig cfg = rc.gap;
        std::vector<double> grid = rc.eps_grid;
        std::sort(grid.begin(), grid.end(), std::greater<>());
        for (const double eps : grid) {
            cfg.eps = eps;
            cfg.finalize();
            const SystemSolution sol = assemble_and_solve<D>(cfg, rc.family, rc.rel_tol);
            diag << "solved coefficient system at eps=" << format_double(eps) << '\n';
            const auto points =
                sample_neck<D>(cfg, cfg.R, rc.envelope_points, rc.seed);
            auto rows = envelope_table<D>(cfg, rc.family, sol.coeff, points);
            for (auto& r : rows) {
                worst_ratio = std::max(worst_ratio, r.ratio);
                table.push_back({eps, r});
            }
        }
        return 0;
    });
    std::stable_sort(table.begin(), table.end(), [](const Entry& a, const Entry& b) {
        return std::tie(b.eps, a.row.x[0], a.row.x[1], a.row.x[2]) <
               std::tie(a.eps, b.row.x[0], b.row.x[1], b.row.x[2]);
    });

    std::string path;
    auto csv = cli_detail::open_csv(rc, path);
    write_csv_row(csv, {"family", "eps", "x1", "x2", "x3", "grad_singular", "p_singular",
                        "stress_singular", "bound_value", "ratio"});
    const std::string fam = family_name(rc.gap, rc.family);
    for (const auto& e : table) {
        write_csv_row(csv, {fam, format_double(e.eps), format_double(e.row.x[0]),
                            format_double(e.row.x[1]), format_double(e.row.x[2]),
                            format_double(e.row.grad_singular), format_double(e.row.p_singular),
                            format_double(e.row.stress_singular),
                            format_double(e.row.bound_value), format_double(e.row.ratio)});
    }
    summary << "envelope: " << table.size() << " rows for " << fam << "; worst gradient/bound ratio "
            << format_double(worst_ratio) << '\n';
    summary << "wrote " << path << '\n';
    return 0;
}

/// sweep: per-eps load vector and solution coefficients for the configured
/// family, fitted for growth class.  Reuses the asymptotics CSV schema
/// (quantity,eps,value,error,basis,slope,intercept,ref_value,rel_dev) with
/// empty reference columns: the sweep is a diagnostic, not a check.
inline int run_sweep_command(const RunConfig& rc, std::ostream& summary, std::ostream& diag) {
    using cli_detail::QuantitySweep;
    std::vector<QuantitySweep> quantities;
    cli_detail::dispatch_d(rc.gap.d, [&](auto dim) {
        constexpr int D = decltype(dim)::value;
        const int m = rigid_count(D);
        quantities.resize(2 * static_cast<std::size_t>(m));
        for (int b = 0; b < m; ++b) {
            quantities[static_cast<std::size_t>(b)].name = "Q" + format_int(b + 1);
            quantities[static_cast<std::size_t>(b)].basis = FitBasis::LogAbs;
            quantities[static_cast<std::size_t>(m + b)].name = "C" + format_int(b + 1);
            quantities[static_cast<std::size_t>(m + b)].basis = FitBasis::Const;
        }
        GapConfig cfg = rc.gap;
        for (const double eps : rc.fit_grid) {
            cfg.eps = eps;
            cfg.finalize();
            const SystemSolution sol = assemble_and_solve<D>(cfg, rc.family, rc.rel_tol);
            diag << "swept eps=" << format_double(eps) << '\n';
            for (int b = 0; b < m; ++b) {
                quantities[static_cast<std::size_t>(b)].records.push_back(
                    {eps, sol.load.entries[static_cast<std::size_t>(b)]});
                quantities[static_cast<std::size_t>(b)].errors.push_back(
                    sol.load.error[static_cast<std::size_t>(b)]);
                quantities[static_cast<std::size_t>(m + b)].records.push_back(
                    {eps, sol.coeff[static_cast<std::size_t>(b)]});
                quantities[static_cast<std::size_t>(m + b)].errors.push_back(
                    std::numeric_limits<double>::quiet_NaN());
            }
        }
        return 0;
    });

    std::string path;
    auto csv = cli_detail::open_csv(rc, path);
    write_csv_row(csv, {"quantity", "eps", "value", "error", "basis", "slope", "intercept",
                        "ref_value", "rel_dev"});
    summary << "sweep: " << family_name(rc.gap, rc.family) << " over " << rc.fit_grid.size()
            << " eps values\n";
    cli_detail::emit_sweep_rows(csv, summary, std::move(quantities));
    summary << "wrote " << path << '\n';
    return 0;
}

/// Runs the configured command.  Exit code 0 (all checks passed) or 2 (at
/// least one failed check); configuration and convergence problems throw.
inline int run(const RunConfig& rc_in, std::ostream& summary, std::ostream& diag) {
    RunConfig rc = rc_in;
    rc.gap.finalize();  // resolve the geometry class and validate the inputs
    switch (rc.command) {
        case Command::Verify: return run_verify_command(rc, summary, diag);
        case Command::Asymptotics: return run_asymptotics_command(rc, summary, diag);
        case Command::System: return run_system_command(rc, summary, diag);
        case Command::Envelope: return run_envelope_command(rc, summary, diag);
        case Command::Sweep: return run_sweep_command(rc, summary, diag);
    }
    throw ConfigError("unreachable command");
}

}  // namespace gapflow
