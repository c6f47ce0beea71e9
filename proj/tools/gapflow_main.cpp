// gapflow — thin-gap Stokes auxiliary-field verification toolkit
// SPDX-License-Identifier: MIT
//
// Command-line front end.  Reads a flat JSON config (all keys optional),
// applies flag overrides, runs one command, writes <out>/<command>.csv and a
// summary to stdout.  Exit codes: 0 all checks passed, 1 configuration or
// convergence error, 2 at least one failed check.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <gapflow/gapflow.hpp>

int main(int argc, char** argv) {
    CLI::App app{"gapflow: verification toolkit for thin-gap Stokes auxiliary fields"};
    std::string config_path;
    std::string command_override;
    std::string out_override;
    app.add_option("--config", config_path, "JSON config file (flat keys)");
    app.add_option("--command", command_override,
                   "command to run: verify|asymptotics|system|envelope|sweep "
                   "(overrides the config)");
    app.add_option("--out", out_override, "output directory for the CSV (overrides the config)");
    CLI11_PARSE(app, argc, argv);

    try {
        gapflow::RunConfig rc;
        if (!config_path.empty()) rc = gapflow::load_run_config(config_path);
        if (!command_override.empty()) rc.command = gapflow::parse_command(command_override);
        if (!out_override.empty()) rc.output_path = out_override;
        return gapflow::run(rc, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
