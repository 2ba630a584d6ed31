// glancing: batch front-end for the validation suites.
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "run.hpp"

int main(int argc, char** argv) {
    using namespace glancing::cli;
    CLI::App app{"Validation suites for the glancing-region estimates"};
    Overrides o;
    std::string config_path;
    long long threads = -1;
    std::string seed_text;
    app.add_option("subcommand", o.subcommand, "specfun | green | sweep | packet | dyadic | all")
        ->check(CLI::IsMember(subcommands()));
    app.add_option("--config", config_path, "sectioned key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", o.out_path, "primary output file");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads (falls back to GLANCING_THREADS, then 1)");
    app.add_option("--seed", seed_text, "unsigned 64-bit seed for every randomized trial");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(config_path);
        if (config_path.empty()) cfg.threads = 0;
        o.threads = threads;
        if (!seed_text.empty()) {
            std::size_t used = 0;
            unsigned long long s = 0;
            try {
                if (seed_text.front() == '-') throw std::invalid_argument("negative");
                s = std::stoull(seed_text, &used, 10);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != seed_text.size() || used == 0)
                throw ConfigError("command line: --seed must be an unsigned 64-bit integer, got '" + seed_text + "'");
            o.has_seed = true;
            o.seed = s;
        }
        if (threads == 0) throw ConfigError("command line: --threads must be at least 1");
        apply_overrides(cfg, o);
        validate(cfg);
        const int rc = run(cfg, std::cerr);
        std::cerr << (rc == 0 ? "all bands pass" : "some bands failed") << "; summary in "
                  << output_paths(cfg.out_path).summary() << '\n';
        return rc;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
