#include "rydsim/run_config.h"

#include <cmath>

#include "rydsim/errors.h"
#include "rydsim/schedule_io.h"

namespace rydsim {

void RunConfig::apply_defaults() {
  if (atoms < 4) {
    throw ConfigError("--atoms must be at least 4");
  }
  if (tracked_cap && *tracked_cap < 0) {
    throw ConfigError("--tracked-cap must be >= 0");
  }
  if (blockade == BlockadeMode::kSoft && !(v_over_omega > 0.0 && std::isfinite(v_over_omega))) {
    throw ConfigError("--v-over-omega must be a finite positive number");
  }
  if (restarts && *restarts < 1) {
    throw ConfigError("--restarts must be positive");
  }
  if (!threshold) {
    threshold = default_threshold(command, target, blockade);
  }
  if (!std::isfinite(*threshold)) {
    throw ConfigError("--threshold must be finite");
  }
}

ProtocolConfig RunConfig::protocol() const {
  ProtocolConfig p;
  p.atoms = atoms;
  p.blockade = blockade;
  p.v_over_omega = v_over_omega;
  p.tracked_cap = tracked_cap;
  return p;
}

void RunConfig::echo(ExperimentReport &report) const {
  report.note("config.command", command);
  report.note("config.target", target.empty() ? "-" : target);
  report.note("config.atoms", std::to_string(atoms));
  report.note("config.tracked_cap", tracked_cap ? std::to_string(*tracked_cap) : "protocol");
  report.note("config.blockade", blockade == BlockadeMode::kHard ? "hard" : "soft");
  report.note("config.v_over_omega", format_double(v_over_omega));
  report.note("config.seed", std::to_string(seed));
  report.note("config.restarts", restarts ? std::to_string(*restarts) : "default");
  report.note("config.out", out_dir.empty() ? "-" : out_dir);
  report.note("config.threshold", threshold ? format_double(*threshold) : "-");
  report.note("config.format", std::string(format_name(format)));
  report.note("config.verbosity", std::to_string(verbosity));
}

double default_threshold(const std::string &command, const std::string &target, BlockadeMode blockade) {
  if (command == "prep") {
    return blockade == BlockadeMode::kHard ? 1.0 - 1e-6 : 1.0 - 1e-3;
  }
  if (command == "braid") {
    return 1.0 - 1e-4;
  }
  if (command == "spinon") {
    return 1.0 - 1e-10;
  }
  if (command == "optimize" && target == "scan") {
    return 1e-8;
  }
  if (command == "optimize") {
    return target == "two_pulse" ? 1e-3 : 1.0 - 1e-8;
  }
  if (command == "takagi") {
    return 1e-9;
  }
  if (command == "scan") {
    return 1e-8;
  }
  if (command == "replay") {
    return 1e-12;
  }
  throw ConfigError("no threshold for command '" + command + "'");
}

std::string_view error_kind(const std::exception &e) {
  if (dynamic_cast<const ParseError *>(&e)) {
    return "parse";
  }
  if (dynamic_cast<const ConfigError *>(&e)) {
    return "config";
  }
  if (dynamic_cast<const NumericalError *>(&e)) {
    return "numerical";
  }
  if (dynamic_cast<const DomainError *>(&e)) {
    return "domain";
  }
  return "internal";
}

int exit_code_for(const std::exception &e) {
  const std::string_view kind = error_kind(e);
  if (kind == "parse" || kind == "config") {
    return kExitUsage;
  }
  return kExitNumerical;
}

std::string error_block(const std::exception &e) {
  std::string msg = e.what();
  for (char &ch : msg) {
    if (ch == '\n') {
      ch = ' ';
    }
  }
  std::string out = "[error]\nkind = " + std::string(error_kind(e)) + "\nexit_code = " + std::to_string(exit_code_for(e));
  if (auto *p = dynamic_cast<const ParseError *>(&e)) {
    out += "\nline = " + std::to_string(p->line()) + "\ncolumn = " + std::to_string(p->column());
  }
  return out + "\nmessage = " + msg + "\n";
}

std::string_view format_name(OutputFormat f) { return f == OutputFormat::kText ? "text" : "json"; }

OutputFormat parse_format(const std::string &name) {
  if (name == "text") {
    return OutputFormat::kText;
  }
  if (name == "json") {
    return OutputFormat::kJson;
  }
  throw ConfigError("format must be text or json, got '" + name + "'");
}

BlockadeMode parse_blockade(const std::string &name) {
  if (name == "hard") {
    return BlockadeMode::kHard;
  }
  if (name == "soft") {
    return BlockadeMode::kSoft;
  }
  throw ConfigError("blockade must be hard or soft, got '" + name + "'");
}

}  // namespace rydsim
