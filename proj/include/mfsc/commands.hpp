#ifndef MFSC_COMMANDS_HPP
#define MFSC_COMMANDS_HPP

#include <optional>
#include <string>

#include "mfsc/config.hpp"

namespace mfsc {

// Batch drivers behind the CLI subcommands.  Each writes its outputs under
// cfg.out_dir and returns 0 on success; config errors throw ConfigError and
// numerical failures propagate as Error.
int cmd_gfe(const StudyConfig& cfg);
int cmd_rom(const StudyConfig& cfg);
int cmd_sens_check(const StudyConfig& cfg);
int cmd_collocate(const StudyConfig& cfg);
int cmd_multifid(const StudyConfig& cfg, std::optional<double> eta);
int cmd_mc(const StudyConfig& cfg);
int cmd_table1(const StudyConfig& cfg);

} // namespace mfsc

#endif
