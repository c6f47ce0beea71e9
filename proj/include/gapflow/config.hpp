// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Run configuration: a single flat JSON document selecting a command, the gap
// geometry, family selectors, grids, and tolerances.  Unknown keys are
// rejected so that typos cannot silently fall back to defaults.

#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fields.hpp"
#include "geometry.hpp"

namespace gapflow {

enum class Command { Verify, Asymptotics, System, Envelope, Sweep };

inline std::string to_string(Command c) {
    switch (c) {
        case Command::Verify: return "verify";
        case Command::Asymptotics: return "asymptotics";
        case Command::System: return "system";
        case Command::Envelope: return "envelope";
        case Command::Sweep: return "sweep";
    }
    throw ConfigError("unreachable command");
}

inline Command parse_command(const std::string& name) {
    if (name == "verify") return Command::Verify;
    if (name == "asymptotics") return Command::Asymptotics;
    if (name == "system") return Command::System;
    if (name == "envelope") return Command::Envelope;
    if (name == "sweep") return Command::Sweep;
    throw ConfigError("unknown command: " + name);
}

/// Everything a single run needs.  Grid defaults: the verify sweep covers the
/// envelope range down to 1e-5; the fit grid spans three decades log-uniform,
/// enough to separate |ln eps| growth from powers of 1/eps.
struct RunConfig {
    Command command = Command::Verify;
    GapConfig gap;
    FieldId family{FamilyKind::Phi1, 0, 0, 1};
    bool family_given = false;
    std::vector<std::string> families;  // verify-only filter; empty = battery
    std::vector<double> eps_grid{1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> fit_grid{1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};
    int samples = 10000;
    std::uint64_t seed = 1;
    double rel_tol = 1e-7;
    int envelope_points = 200;
    std::string output_path = ".";
};

namespace config_detail {

inline GeometryClass parse_geometry(const std::string& name) {
    if (name == "auto") return GeometryClass::Auto;
    if (name == "spherical") return GeometryClass::Spherical;
    if (name == "ellipsoid") return GeometryClass::Ellipsoid;
    if (name == "higher_d") return GeometryClass::HigherD;
    throw ConfigError("unknown geometry class: " + name);
}

inline double as_number(const nlohmann::json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return j.get<double>();
}

inline std::vector<double> as_grid(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) throw ConfigError("key '" + key + "' must be a non-empty array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(as_number(v, key));
    return out;
}

}  // namespace config_detail

/// Parses a JSON document into a RunConfig and validates the geometry.
/// The curvature kappa2 defaults to kappa1 when absent.
inline RunConfig parse_run_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known{
        "command", "d",       "eps",     "kappa1",   "kappa2",          "kappa",
        "R",       "mu",      "geometry", "family",  "families",        "eps_grid",
        "fit_grid", "samples", "seed",    "rel_tol", "envelope_points", "output_path"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key: " + key);
    }

    RunConfig rc;
    using config_detail::as_grid;
    using config_detail::as_number;
    if (doc.contains("command")) rc.command = parse_command(doc["command"].get<std::string>());
    if (doc.contains("d")) rc.gap.d = static_cast<int>(as_number(doc["d"], "d"));
    if (doc.contains("eps")) rc.gap.eps = as_number(doc["eps"], "eps");
    if (doc.contains("kappa1")) rc.gap.kappa1 = as_number(doc["kappa1"], "kappa1");
    rc.gap.kappa2 = doc.contains("kappa2") ? as_number(doc["kappa2"], "kappa2") : rc.gap.kappa1;
    if (doc.contains("kappa")) rc.gap.kappa = as_number(doc["kappa"], "kappa");
    if (doc.contains("R")) rc.gap.R = as_number(doc["R"], "R");
    if (doc.contains("mu")) rc.gap.mu = as_number(doc["mu"], "mu");
    if (doc.contains("geometry"))
        rc.gap.geometry = config_detail::parse_geometry(doc["geometry"].get<std::string>());
    if (doc.contains("family")) {
        rc.family = parse_family(doc["family"].get<std::string>());
        rc.family_given = true;
    }
    if (doc.contains("families")) {
        if (!doc["families"].is_array()) throw ConfigError("key 'families' must be an array");
        for (const auto& f : doc["families"]) {
            parse_family(f.get<std::string>());  // validate eagerly
            rc.families.push_back(f.get<std::string>());
        }
    }
    if (doc.contains("eps_grid")) rc.eps_grid = as_grid(doc["eps_grid"], "eps_grid");
    if (doc.contains("fit_grid")) rc.fit_grid = as_grid(doc["fit_grid"], "fit_grid");
    if (doc.contains("samples")) rc.samples = static_cast<int>(as_number(doc["samples"], "samples"));
    if (doc.contains("seed"))
        rc.seed = static_cast<std::uint64_t>(as_number(doc["seed"], "seed"));
    if (doc.contains("rel_tol")) rc.rel_tol = as_number(doc["rel_tol"], "rel_tol");
    if (doc.contains("envelope_points"))
        rc.envelope_points = static_cast<int>(as_number(doc["envelope_points"], "envelope_points"));
    if (doc.contains("output_path")) rc.output_path = doc["output_path"].get<std::string>();

    if (rc.samples < 0) throw ConfigError("samples must be non-negative");
    if (rc.envelope_points < 0) throw ConfigError("envelope_points must be non-negative");
    if (!(rc.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
    for (const double e : rc.eps_grid)
        if (!(e > 0.0)) throw ConfigError("eps_grid entries must be positive");
    for (const double e : rc.fit_grid)
        if (!(e > 0.0)) throw ConfigError("fit_grid entries must be positive");
    // Wall-family exponents: every regime change happens by l = 3; cap at 6.
    if (rc.family_given && rc.family.kind != FamilyKind::Rigid && rc.family.l > 6)
        throw ConfigError("family exponent l is capped at 6");

    rc.gap.finalize();
    return rc;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace gapflow
