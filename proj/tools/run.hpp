#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace glancing::cli {

struct ModuleResult {
    std::string module;
    Table table;
    std::vector<Band> bands;
    Json fits = Json::object();
    std::vector<PlotData> plots;
    bool pass() const;
};

ModuleResult run_specfun(const RunConfig& cfg);
ModuleResult run_green(const RunConfig& cfg);
ModuleResult run_sweep(const RunConfig& cfg);
ModuleResult run_packet(const RunConfig& cfg);
ModuleResult run_dyadic(const RunConfig& cfg);

// Output layout for an out_path "dir/name.ext": the primary table goes to
// out_path ("dir/name_<module>.ext" under `all`), the summary to
// "dir/name.summary.json" and plot data to "dir/name[_<module>].<figure>.dat".
struct OutputPaths {
    std::string stem, ext;
    std::string table(const std::string& module, bool all) const;
    std::string plot(const std::string& module, const std::string& figure, bool all) const;
    std::string summary() const;
};
OutputPaths output_paths(const std::string& out_path);

// Runs the configured subcommand and writes every artifact.  Returns 0 when
// all enabled bands pass and 1 otherwise; failures are listed on `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace glancing::cli
