#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfsc/commands.hpp"
#include "mfsc/config.hpp"
#include "mfsc/errors.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::int64_t> seed;
    std::optional<double> eta;
    std::vector<double> xi;
    std::vector<double> zeta;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON configuration file");
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "random seed (overrides config)");
    cmd->add_option("--eta", flags.eta, "neighborhood radius (overrides config)");
    cmd->add_option("--xi", flags.xi, "explicit xi coordinates")->delimiter(',');
    cmd->add_option("--zeta", flags.zeta, "explicit zeta coordinates")->delimiter(',');
}

mfsc::StudyConfig resolve_config(const CommonFlags& flags) {
    mfsc::StudyConfig cfg;
    if (!flags.config_path.empty()) cfg = mfsc::load_config(flags.config_path);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.seed) cfg.seed = static_cast<std::uint64_t>(*flags.seed);
    if (!flags.xi.empty()) cfg.xi = flags.xi;
    if (!flags.zeta.empty()) cfg.zeta = flags.zeta;
    mfsc::validate(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-fidelity sparse-grid collocation for the 1D stochastic Burgers equation"};
    app.require_subcommand(1);

    CommonFlags flags;
    CLI::App* gfe = app.add_subcommand("gfe", "high-fidelity solve at one point");
    CLI::App* rom = app.add_subcommand("rom", "POD reduced solve with mode export");
    CLI::App* sens = app.add_subcommand("sens-check", "basis-improvement study and FD report");
    CLI::App* collocate = app.add_subcommand("collocate", "full sparse-grid moments");
    CLI::App* multifid = app.add_subcommand("multifid", "eta-neighborhood multi-fidelity run");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo reference moments");
    CLI::App* table1 = app.add_subcommand("table1", "eta sweep against the full-grid reference");
    for (CLI::App* cmd : {gfe, rom, sens, collocate, multifid, mc, table1}) add_common(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const mfsc::StudyConfig cfg = resolve_config(flags);
        if (gfe->parsed()) return mfsc::cmd_gfe(cfg);
        if (rom->parsed()) return mfsc::cmd_rom(cfg);
        if (sens->parsed()) return mfsc::cmd_sens_check(cfg);
        if (collocate->parsed()) return mfsc::cmd_collocate(cfg);
        if (multifid->parsed()) return mfsc::cmd_multifid(cfg, flags.eta);
        if (mc->parsed()) return mfsc::cmd_mc(cfg);
        if (table1->parsed()) return mfsc::cmd_table1(cfg);
    } catch (const mfsc::ConfigError& err) {
        std::cerr << "error: config: " << err.what() << "\n";
        return 2;
    } catch (const mfsc::Error& err) {
        std::cerr << "error: numerical: " << err.what() << "\n";
        return 3;
    }
    return 0;
}
