#include "rydsim/level_scheme.h"

#include <algorithm>
#include <set>

#include "rydsim/errors.h"

namespace rydsim {

std::string_view role_name(ExtraRole role) {
  switch (role) {
    case ExtraRole::kRydberg:
      return "r";
    case ExtraRole::kRydberg2:
      return "r2";
    case ExtraRole::kControl:
      return "c";
    case ExtraRole::kExcited:
      return "e";
  }
  return "?";
}

LevelScheme::LevelScheme(
    int register_levels,
    std::vector<ExtraRole> extras,
    std::int64_t total_atoms,
    int tracked_cap,
    BlockadeConfig blockade,
    int soft_rydberg_cap)
    : register_levels_(register_levels),
      extras_(std::move(extras)),
      total_atoms_(total_atoms),
      tracked_cap_(tracked_cap),
      blockade_(blockade),
      soft_rydberg_cap_(soft_rydberg_cap) {
  if (register_levels_ < 0) {
    throw ConfigError("register level count must be non-negative");
  }
  if (tracked_cap_ < 0) {
    throw ConfigError("tracked occupation cap must be non-negative");
  }
  if (total_atoms_ < tracked_cap_) {
    throw ConfigError(
        "total atom number K=" + std::to_string(total_atoms_) + " is below the tracked cap S_max=" +
        std::to_string(tracked_cap_));
  }
  std::set<ExtraRole> seen;
  for (ExtraRole role : extras_) {
    if (!seen.insert(role).second) {
      throw ConfigError("extra level '" + std::string(role_name(role)) + "' listed twice");
    }
  }
  if (blockade_.mode == BlockadeMode::kSoft) {
    if (!(blockade_.v > 0.0) || !(blockade_.v_cross > 0.0)) {
      throw ConfigError("soft blockade requires V > 0 and V_cross > 0");
    }
    if (soft_rydberg_cap_ < 2) {
      throw ConfigError("soft blockade requires Rydberg caps >= 2");
    }
    if (soft_rydberg_cap_ > tracked_cap_) {
      throw ConfigError("Rydberg cap exceeds the tracked cap S_max");
    }
  }
  if (blockade_.mode == BlockadeMode::kHard) {
    soft_rydberg_cap_ = 1;
  }
}

Level LevelScheme::register_level(int i) const {
  if (i < 1 || i > register_levels_) {
    throw ConfigError("register level " + std::to_string(i) + " out of range 1.." + std::to_string(register_levels_));
  }
  return Level{i - 1};
}

std::optional<Level> LevelScheme::find(ExtraRole role) const {
  auto it = std::find(extras_.begin(), extras_.end(), role);
  if (it == extras_.end()) {
    return std::nullopt;
  }
  return Level{register_levels_ + static_cast<int>(it - extras_.begin())};
}

Level LevelScheme::level(ExtraRole role) const {
  auto found = find(role);
  if (!found) {
    throw ConfigError("level scheme has no '" + std::string(role_name(role)) + "' level");
  }
  return *found;
}

bool LevelScheme::contains(Level level) const { return level.mode >= 0 && level.mode < mode_count(); }

bool LevelScheme::is_register(Level level) const { return level.mode >= 0 && level.mode < register_levels_; }

bool LevelScheme::is_rydberg(Level level) const {
  if (!contains(level) || is_register(level)) {
    return false;
  }
  ExtraRole role = extras_[level.mode - register_levels_];
  return role == ExtraRole::kRydberg || role == ExtraRole::kRydberg2;
}

int LevelScheme::cap(Level level) const {
  if (!contains(level)) {
    throw ConfigError("level is not tracked");
  }
  return is_rydberg(level) ? std::min(soft_rydberg_cap_, tracked_cap_) : tracked_cap_;
}

std::vector<int> LevelScheme::rydberg_modes() const {
  std::vector<int> out;
  for (int m = register_levels_; m < mode_count(); ++m) {
    if (is_rydberg(Level{m})) {
      out.push_back(m);
    }
  }
  return out;
}

std::string LevelScheme::level_name(Level level) const {
  if (level.is_reservoir()) {
    return "reservoir";
  }
  if (is_register(level)) {
    return std::to_string(level.mode + 1);
  }
  if (contains(level)) {
    return std::string(role_name(extras_[level.mode - register_levels_]));
  }
  return "?" + std::to_string(level.mode);
}

Level LevelScheme::parse_level(std::string_view name) const {
  if (name == "reservoir" || name == "0") {
    return Level::reservoir();
  }
  for (ExtraRole role : {ExtraRole::kRydberg, ExtraRole::kRydberg2, ExtraRole::kControl, ExtraRole::kExcited}) {
    if (name == role_name(role) || (role == ExtraRole::kRydberg2 && name == "r'")) {
      return level(role);
    }
  }
  int value = 0;
  bool digits = !name.empty();
  for (char ch : name) {
    if (ch < '0' || ch > '9') {
      digits = false;
      break;
    }
    value = value * 10 + (ch - '0');
    if (value > 1000000) {
      digits = false;
      break;
    }
  }
  if (!digits) {
    throw ConfigError("unknown level '" + std::string(name) + "'");
  }
  return register_level(value);
}

}  // namespace rydsim
