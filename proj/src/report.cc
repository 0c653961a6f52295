#include "rydsim/report.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rydsim/errors.h"
#include "rydsim/schedule_io.h"

namespace rydsim {

namespace {

// ordered_json keeps notes and values in insertion order.
using json = nlohmann::ordered_json;

ExtraRole parse_role(const std::string &name) {
  for (ExtraRole role : {ExtraRole::kRydberg, ExtraRole::kRydberg2, ExtraRole::kControl, ExtraRole::kExcited}) {
    if (name == role_name(role)) {
      return role;
    }
  }
  throw ConfigError("unknown extra level '" + name + "'");
}

std::string trim(const std::string &s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) {
    return "";
  }
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string &s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ParseError(line, 1, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) {
    throw ParseError(line, 1, "trailing characters after number '" + s + "'");
  }
  return v;
}

std::int64_t to_int(const std::string &s, int line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception &) {
    throw ParseError(line, 1, "expected an integer, got '" + s + "'");
  }
  if (used != s.size()) {
    throw ParseError(line, 1, "trailing characters after integer '" + s + "'");
  }
  return v;
}

std::string distribution_text(const Distribution &d) {
  std::string out;
  for (const auto &[v, p] : d.outcomes) {
    if (!out.empty()) {
      out += ' ';
    }
    out += std::to_string(v) + ":" + format_double(p);
  }
  return out;
}

Distribution distribution_from_text(const std::string &level, const std::string &text, int line) {
  Distribution d;
  d.level = level;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ParseError(line, 1, "distribution entries look like value:probability");
    }
    d.outcomes.emplace_back(
        static_cast<int>(to_int(item.substr(0, colon), line)), to_double(item.substr(colon + 1), line));
  }
  return d;
}

struct SchemeFields {
  int registers = -1;
  std::vector<ExtraRole> extras;
  std::int64_t atoms = -1;
  int tracked_cap = -1;
  BlockadeConfig blockade;
  int soft_cap = 2;
};

LevelScheme build_scheme(const SchemeFields &f) {
  if (f.registers < 0 || f.atoms < 0 || f.tracked_cap < 0) {
    throw ConfigError("report scheme section is incomplete");
  }
  return LevelScheme(f.registers, f.extras, f.atoms, f.tracked_cap, f.blockade, f.soft_cap);
}

void scheme_field(SchemeFields &f, const std::string &key, const std::string &value, int line) {
  if (key == "registers") {
    f.registers = static_cast<int>(to_int(value, line));
  } else if (key == "extras") {
    std::istringstream in(value);
    std::string name;
    while (in >> name) {
      f.extras.push_back(parse_role(name));
    }
  } else if (key == "atoms") {
    f.atoms = to_int(value, line);
  } else if (key == "tracked_cap") {
    f.tracked_cap = static_cast<int>(to_int(value, line));
  } else if (key == "blockade") {
    if (value != "hard" && value != "soft") {
      throw ParseError(line, 1, "blockade must be hard or soft");
    }
    f.blockade.mode = value == "hard" ? BlockadeMode::kHard : BlockadeMode::kSoft;
  } else if (key == "v") {
    f.blockade.v = to_double(value, line);
  } else if (key == "v_cross") {
    f.blockade.v_cross = to_double(value, line);
  } else if (key == "soft_rydberg_cap") {
    f.soft_cap = static_cast<int>(to_int(value, line));
  } else {
    throw ParseError(line, 1, "unknown scheme key '" + key + "'");
  }
}

// Run fields collected while parsing; states are built once the scheme is known.
struct PendingRun {
  std::string name;
  std::string target;
  std::optional<double> fidelity;
  std::vector<std::pair<std::string, double>> values;
  std::vector<Distribution> distributions;
  std::string schedule;
  std::string initial;
  std::string final_state;
  std::string target_state;
};

ExperimentReport assemble(
    const std::string &protocol, const SchemeFields &fields, std::vector<std::pair<std::string, std::string>> notes,
    const std::vector<PendingRun> &pending) {
  LevelScheme scheme = build_scheme(fields);
  BasisPtr basis = build_basis(scheme);
  ExperimentReport report{protocol, scheme, std::move(notes), {}};
  for (const PendingRun &p : pending) {
    ReportRun run(
        p.name, state_from_text(basis, p.initial), state_from_text(basis, p.final_state),
        schedule_from_text(scheme, p.schedule));
    run.target = p.target;
    if (!p.target_state.empty()) {
      run.target_state = state_from_text(basis, p.target_state);
    }
    run.fidelity = p.fidelity;
    run.values = p.values;
    run.distributions = p.distributions;
    report.runs.push_back(std::move(run));
  }
  return report;
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      out.push_back(line);
    }
  }
  return out;
}

std::string join_lines(const json &array) {
  std::string out;
  for (const auto &l : array) {
    out += l.get<std::string>() + "\n";
  }
  return out;
}

}  // namespace

ReportRun::ReportRun(std::string name_, StateVector initial_, StateVector final_, Schedule schedule_)
    : name(std::move(name_)),
      initial(std::move(initial_)),
      final_state(std::move(final_)),
      schedule(std::move(schedule_)) {}

void ReportRun::set(const std::string &key, double v) {
  for (auto &kv : values) {
    if (kv.first == key) {
      kv.second = v;
      return;
    }
  }
  values.emplace_back(key, v);
}

double ReportRun::value(const std::string &key) const {
  for (const auto &kv : values) {
    if (kv.first == key) {
      return kv.second;
    }
  }
  throw std::out_of_range("run '" + name + "' has no value '" + key + "'");
}

const ReportRun &ExperimentReport::run(const std::string &name) const {
  for (const ReportRun &r : runs) {
    if (r.name == name) {
      return r;
    }
  }
  throw std::out_of_range("report has no run '" + name + "'");
}

Distribution occupation_distribution(const StateVector &state, Level level) {
  Distribution d;
  d.level = state.scheme().level_name(level);
  for (const OccupationOutcome &o : measure_occupation(state, level)) {
    d.outcomes.emplace_back(o.value, o.probability);
  }
  return d;
}

void check_report(const ExperimentReport &report) {
  for (const ReportRun &run : report.runs) {
    for (const Distribution &d : run.distributions) {
      double total = 0.0;
      for (const auto &[v, p] : d.outcomes) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw DomainError("run '" + run.name + "': probability outside [0, 1]");
        }
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("run '" + run.name + "': distribution of n_" + d.level + " sums to " + format_double(total));
      }
    }
    if (run.fidelity && !(*run.fidelity >= 0.0 && *run.fidelity <= 1.0 + 1e-12)) {
      throw DomainError("run '" + run.name + "': fidelity outside [0, 1]");
    }
  }
}

std::string scheme_to_text(const LevelScheme &scheme) {
  std::string extras;
  for (ExtraRole role : scheme.extras()) {
    extras += (extras.empty() ? "" : " ") + std::string(role_name(role));
  }
  const BlockadeConfig &b = scheme.blockade();
  return "registers = " + std::to_string(scheme.register_count()) + "\nextras = " + extras +
         "\natoms = " + std::to_string(scheme.total_atoms()) + "\ntracked_cap = " +
         std::to_string(scheme.tracked_cap()) + "\nblockade = " + (b.mode == BlockadeMode::kHard ? "hard" : "soft") +
         "\nv = " + format_double(b.v) + "\nv_cross = " + format_double(b.v_cross) +
         "\nsoft_rydberg_cap = " + std::to_string(b.mode == BlockadeMode::kHard ? 2 : scheme.soft_rydberg_cap()) + "\n";
}

std::string report_to_text(const ExperimentReport &report) {
  std::string out = "# rydsim experiment report\n[experiment]\nprotocol = " + report.protocol + "\n";
  for (const auto &[k, v] : report.notes) {
    out += "note." + k + " = " + v + "\n";
  }
  out += "[scheme]\n" + scheme_to_text(report.scheme);
  for (const ReportRun &run : report.runs) {
    out += "[run]\nname = " + run.name + "\ntarget = " + run.target + "\n";
    if (run.fidelity) {
      out += "fidelity = " + format_double(*run.fidelity) + "\n";
    }
    for (const auto &[k, v] : run.values) {
      out += "value." + k + " = " + format_double(v) + "\n";
    }
    for (const Distribution &d : run.distributions) {
      out += "distribution." + d.level + " = " + distribution_text(d) + "\n";
    }
    out += "[schedule]\n" + schedule_to_text(report.scheme, run.schedule);
    out += "[initial_state]\n" + state_to_text(run.initial);
    out += "[final_state]\n" + state_to_text(run.final_state);
    if (run.target_state) {
      out += "[target_state]\n" + state_to_text(*run.target_state);
    }
  }
  return out;
}

ExperimentReport report_from_text(const std::string &text) {
  std::string protocol;
  std::vector<std::pair<std::string, std::string>> notes;
  SchemeFields fields;
  std::vector<PendingRun> runs;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section == "run") {
        runs.emplace_back();
      } else if (section != "experiment" && section != "scheme") {
        if (section != "schedule" && section != "initial_state" && section != "final_state" &&
            section != "target_state") {
          throw ParseError(line_no, 1, "unknown section [" + section + "]");
        }
        if (runs.empty()) {
          throw ParseError(line_no, 1, "[" + section + "] before any [run]");
        }
      }
      continue;
    }
    if (section == "schedule") {
      runs.back().schedule += raw + "\n";
      continue;
    }
    if (section == "initial_state") {
      runs.back().initial += raw + "\n";
      continue;
    }
    if (section == "final_state") {
      runs.back().final_state += raw + "\n";
      continue;
    }
    if (section == "target_state") {
      runs.back().target_state += raw + "\n";
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, 1, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "experiment") {
      if (key == "protocol") {
        protocol = value;
      } else if (key.rfind("note.", 0) == 0) {
        notes.emplace_back(key.substr(5), value);
      } else {
        throw ParseError(line_no, 1, "unknown experiment key '" + key + "'");
      }
    } else if (section == "scheme") {
      scheme_field(fields, key, value, line_no);
    } else if (section == "run") {
      PendingRun &r = runs.back();
      if (key == "name") {
        r.name = value;
      } else if (key == "target") {
        r.target = value;
      } else if (key == "fidelity") {
        r.fidelity = to_double(value, line_no);
      } else if (key.rfind("value.", 0) == 0) {
        r.values.emplace_back(key.substr(6), to_double(value, line_no));
      } else if (key.rfind("distribution.", 0) == 0) {
        r.distributions.push_back(distribution_from_text(key.substr(13), value, line_no));
      } else {
        throw ParseError(line_no, 1, "unknown run key '" + key + "'");
      }
    } else {
      throw ParseError(line_no, 1, "key outside any section");
    }
  }
  if (protocol.empty()) {
    throw ParseError(line_no + 1, 1, "report has no protocol");
  }
  return assemble(protocol, fields, std::move(notes), runs);
}

std::string report_to_json(const ExperimentReport &report) {
  json j;
  j["protocol"] = report.protocol;
  json notes = json::object();
  for (const auto &[k, v] : report.notes) {
    notes[k] = v;
  }
  j["notes"] = notes;
  const LevelScheme &s = report.scheme;
  json extras = json::array();
  for (ExtraRole role : s.extras()) {
    extras.push_back(std::string(role_name(role)));
  }
  j["scheme"] = {
      {"registers", s.register_count()},
      {"extras", extras},
      {"atoms", s.total_atoms()},
      {"tracked_cap", s.tracked_cap()},
      {"blockade", s.blockade().mode == BlockadeMode::kHard ? "hard" : "soft"},
      {"v", s.blockade().v},
      {"v_cross", s.blockade().v_cross},
      {"soft_rydberg_cap", s.blockade().mode == BlockadeMode::kHard ? 2 : s.soft_rydberg_cap()},
  };
  json runs = json::array();
  for (const ReportRun &run : report.runs) {
    json r;
    r["name"] = run.name;
    r["target"] = run.target;
    r["fidelity"] = run.fidelity ? json(*run.fidelity) : json(nullptr);
    json values = json::array();
    for (const auto &[k, v] : run.values) {
      values.push_back({{"key", k}, {"value", v}});
    }
    r["values"] = values;
    json dists = json::array();
    for (const Distribution &d : run.distributions) {
      json outcomes = json::array();
      for (const auto &[v, p] : d.outcomes) {
        outcomes.push_back({{"value", v}, {"probability", p}});
      }
      dists.push_back({{"level", d.level}, {"outcomes", outcomes}});
    }
    r["distributions"] = dists;
    r["schedule"] = lines_of(schedule_to_text(report.scheme, run.schedule));
    r["initial_state"] = lines_of(state_to_text(run.initial));
    r["final_state"] = lines_of(state_to_text(run.final_state));
    if (run.target_state) {
      r["target_state"] = lines_of(state_to_text(*run.target_state));
    }
    runs.push_back(r);
  }
  j["runs"] = runs;
  // nlohmann writes doubles with max_digits10, so the text round trips exactly.
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(1, static_cast<int>(e.byte), e.what());
  }
  try {
    SchemeFields f;
    const json &s = j.at("scheme");
    f.registers = s.at("registers").get<int>();
    for (const auto &e : s.at("extras")) {
      f.extras.push_back(parse_role(e.get<std::string>()));
    }
    f.atoms = s.at("atoms").get<std::int64_t>();
    f.tracked_cap = s.at("tracked_cap").get<int>();
    const std::string mode = s.at("blockade").get<std::string>();
    if (mode != "hard" && mode != "soft") {
      throw ParseError(1, 1, "blockade must be hard or soft");
    }
    f.blockade.mode = mode == "hard" ? BlockadeMode::kHard : BlockadeMode::kSoft;
    f.blockade.v = s.at("v").get<double>();
    f.blockade.v_cross = s.at("v_cross").get<double>();
    f.soft_cap = s.at("soft_rydberg_cap").get<int>();
    std::vector<std::pair<std::string, std::string>> notes;
    for (const auto &[k, v] : j.at("notes").items()) {
      notes.emplace_back(k, v.get<std::string>());
    }
    std::vector<PendingRun> runs;
    for (const json &r : j.at("runs")) {
      PendingRun p;
      p.name = r.at("name").get<std::string>();
      p.target = r.at("target").get<std::string>();
      if (!r.at("fidelity").is_null()) {
        p.fidelity = r.at("fidelity").get<double>();
      }
      for (const json &v : r.at("values")) {
        p.values.emplace_back(v.at("key").get<std::string>(), v.at("value").get<double>());
      }
      for (const json &d : r.at("distributions")) {
        Distribution dist;
        dist.level = d.at("level").get<std::string>();
        for (const json &o : d.at("outcomes")) {
          dist.outcomes.emplace_back(o.at("value").get<int>(), o.at("probability").get<double>());
        }
        p.distributions.push_back(dist);
      }
      p.schedule = join_lines(r.at("schedule"));
      p.initial = join_lines(r.at("initial_state"));
      p.final_state = join_lines(r.at("final_state"));
      if (r.contains("target_state")) {
        p.target_state = join_lines(r.at("target_state"));
      }
      runs.push_back(std::move(p));
    }
    return assemble(j.at("protocol").get<std::string>(), f, std::move(notes), runs);
  } catch (const json::exception &e) {
    throw ParseError(1, 1, std::string("malformed report: ") + e.what());
  }
}

ExperimentReport parse_report(const std::string &text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return report_from_json(text);
  }
  return report_from_text(text);
}

std::vector<ReplayResult> replay_report(const ExperimentReport &report) {
  std::vector<ReplayResult> out;
  for (const ReportRun &run : report.runs) {
    StateVector replayed = run_schedule(run.initial, run.schedule);
    ReplayResult r{run.name, (replayed.amplitudes() - run.final_state.amplitudes()).norm(), 0.0};
    if (run.fidelity && run.target_state) {
      r.number_deviation = std::abs(fidelity(*run.target_state, replayed) - *run.fidelity);
    }
    for (const Distribution &d : run.distributions) {
      Distribution again = occupation_distribution(replayed, report.scheme.parse_level(d.level));
      if (again.outcomes.size() != d.outcomes.size()) {
        r.number_deviation = HUGE_VAL;
        continue;
      }
      for (std::size_t k = 0; k < d.outcomes.size(); ++k) {
        if (again.outcomes[k].first != d.outcomes[k].first) {
          r.number_deviation = HUGE_VAL;
        }
        r.number_deviation =
            std::max(r.number_deviation, std::abs(again.outcomes[k].second - d.outcomes[k].second));
      }
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace rydsim
