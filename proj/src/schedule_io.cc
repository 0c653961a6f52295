#include "rydsim/schedule_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

struct Field {
  std::string key;
  std::string value;
  int column = 0;        // 1-based column of the key
  int value_column = 0;  // 1-based column of the value
};

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') {
      out += '\\';
    }
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

// Splits "word key=value key=\"quoted\" ..." into the leading word and fields.
std::vector<Field> split_fields(const std::string &line, int line_no, std::string &word, int &word_column) {
  std::vector<Field> fields;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
  };
  skip_space();
  word_column = static_cast<int>(i) + 1;
  while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
    word += line[i++];
  }
  for (skip_space(); i < line.size(); skip_space()) {
    Field f;
    f.column = static_cast<int>(i) + 1;
    while (i < line.size() && line[i] != '=' && line[i] != ' ' && line[i] != '\t') {
      f.key += line[i++];
    }
    if (i >= line.size() || line[i] != '=') {
      throw ParseError(line_no, f.column, "expected key=value, got '" + f.key + "'");
    }
    if (f.key.empty()) {
      throw ParseError(line_no, f.column, "empty key");
    }
    ++i;
    f.value_column = static_cast<int>(i) + 1;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char ch = line[i++];
        if (ch == '"') {
          closed = true;
          break;
        }
        if (ch == '\\') {
          if (i >= line.size()) {
            break;
          }
          char esc = line[i++];
          f.value += esc == 'n' ? '\n' : esc;
          continue;
        }
        f.value += ch;
      }
      if (!closed) {
        throw ParseError(line_no, f.value_column, "unterminated string");
      }
      if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
        throw ParseError(line_no, static_cast<int>(i) + 1, "expected whitespace after closing quote");
      }
    } else {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
        f.value += line[i++];
      }
      if (f.value.empty()) {
        throw ParseError(line_no, f.value_column, "missing value for '" + f.key + "'");
      }
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

class FieldSet {
 public:
  FieldSet(std::vector<Field> fields, int line_no, int line_end) : line_(line_no), end_(line_end) {
    for (Field &f : fields) {
      if (by_key_.count(f.key)) {
        throw ParseError(line_, f.column, "duplicate key '" + f.key + "'");
      }
      std::string key = f.key;
      by_key_.emplace(std::move(key), std::move(f));
    }
  }

  const Field *get(const std::string &key) {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
      return nullptr;
    }
    used_.insert(key);
    return &it->second;
  }

  const Field &require(const std::string &key) {
    const Field *f = get(key);
    if (!f) {
      throw ParseError(line_, end_, "missing key '" + key + "'");
    }
    return *f;
  }

  double number(const std::string &key) { return parse_number(require(key)); }

  double parse_number(const Field &f) const {
    const char *begin = f.value.c_str();
    char *end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
      throw ParseError(line_, f.value_column, "'" + f.value + "' is not a number");
    }
    return v;
  }

  Level level(const LevelScheme &scheme, const std::string &key) {
    const Field &f = require(key);
    try {
      return scheme.parse_level(f.value);
    } catch (const ConfigError &e) {
      throw ParseError(line_, f.value_column, e.what());
    }
  }

  void reject_unknown() const {
    for (const auto &[key, f] : by_key_) {
      if (!used_.count(key)) {
        throw ParseError(line_, f.column, "unknown key '" + key + "'");
      }
    }
  }

 private:
  int line_;
  int end_;
  std::map<std::string, Field> by_key_;
  std::set<std::string> used_;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string schedule_to_text(const LevelScheme &scheme, const Schedule &schedule) {
  std::ostringstream out;
  for (const Pulse &p : schedule.pulses) {
    if (p.kind == PulseKind::kLightShift) {
      out << "light_shift level=" << scheme.level_name(p.a) << " phase=" << format_double(p.phase);
    } else {
      out << "pulse kind=" << pulse_kind_name(p.kind) << " a=" << scheme.level_name(p.a)
          << " b=" << scheme.level_name(p.b) << " rabi=" << format_double(p.rabi)
          << " phase=" << format_double(p.phase) << " detuning=" << format_double(p.detuning)
          << " duration=" << format_double(p.duration) << " reference=" << p.reference;
    }
    if (!p.label.empty()) {
      out << " label=" << quote(p.label);
    }
    out << '\n';
  }
  return out.str();
}

Schedule schedule_from_text(const LevelScheme &scheme, const std::string &text) {
  Schedule schedule;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::string word;
    int word_column = 0;
    FieldSet fields(split_fields(line, line_no, word, word_column), line_no, static_cast<int>(line.size()) + 1);
    Pulse p;
    if (word == "light_shift") {
      p.kind = PulseKind::kLightShift;
      p.a = fields.level(scheme, "level");
      p.b = p.a;
      p.phase = fields.number("phase");
    } else if (word == "pulse") {
      const Field &kind = fields.require("kind");
      if (kind.value == "raman") {
        p.kind = PulseKind::kRaman;
      } else if (kind.value == "rydberg_drive") {
        p.kind = PulseKind::kRydbergDrive;
      } else {
        throw ParseError(line_no, kind.value_column, "unknown pulse kind '" + kind.value + "'");
      }
      p.a = fields.level(scheme, "a");
      p.b = fields.level(scheme, "b");
      p.rabi = fields.number("rabi");
      p.phase = fields.number("phase");
      p.detuning = fields.number("detuning");
      p.duration = fields.number("duration");
      if (const Field *ref = fields.get("reference")) {
        try {
          std::size_t used = 0;
          p.reference = std::stoll(ref->value, &used);
          if (used != ref->value.size() || p.reference < 0) {
            throw std::invalid_argument(ref->value);
          }
        } catch (const std::exception &) {
          throw ParseError(line_no, ref->value_column, "reference must be a non-negative integer");
        }
      }
      if (p.rabi < 0.0) {
        throw ParseError(line_no, fields.require("rabi").value_column, "rabi must be non-negative");
      }
      if (p.duration < 0.0) {
        throw ParseError(line_no, fields.require("duration").value_column, "duration must be non-negative");
      }
    } else {
      throw ParseError(line_no, word_column, "expected 'pulse' or 'light_shift', got '" + word + "'");
    }
    if (const Field *label = fields.get("label")) {
      p.label = label->value;
    }
    fields.reject_unknown();
    schedule.append(p);
  }
  return schedule;
}

}  // namespace rydsim
