#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydsim {

/// A tracked internal level, identified by its position in the occupation vector.
/// The reservoir |0> is never tracked; it is represented by a sentinel mode.
struct Level {
  static constexpr int kReservoirMode = -1;

  int mode = kReservoirMode;

  static constexpr Level reservoir() { return Level{kReservoirMode}; }
  constexpr bool is_reservoir() const { return mode == kReservoirMode; }

  auto operator<=>(const Level &) const = default;
};

/// Roles of the non-register levels an ensemble may carry.
enum class ExtraRole {
  kRydberg,   // r
  kRydberg2,  // r' (cross-blockaded by r)
  kControl,   // c
  kExcited,   // e
};

std::string_view role_name(ExtraRole role);

enum class BlockadeMode { kHard, kSoft };

/// Rydberg interaction model. In hard mode doubly Rydberg-excited configurations
/// (same level or r together with r') are removed from the basis and the
/// interaction strengths are ignored. In soft mode they are kept and shifted by
/// V/2 n(n-1) per Rydberg level plus V_cross n_r n_r'.
struct BlockadeConfig {
  BlockadeMode mode = BlockadeMode::kHard;
  double v = 0.0;
  double v_cross = 0.0;

  static BlockadeConfig hard() { return {}; }
  static BlockadeConfig soft(double v, double v_cross) { return {BlockadeMode::kSoft, v, v_cross}; }

  bool operator==(const BlockadeConfig &) const = default;
};

/// Internal-level layout of a permutation-symmetric ensemble of K atoms.
///
/// Tracked modes are ordered as the register levels 1..N followed by the extra
/// levels in the order given. Every tracked level is capped by the total tracked
/// occupation S_max; Rydberg levels are additionally capped at 1 (hard mode) or
/// at `soft_rydberg_cap` (soft mode).
class LevelScheme {
 public:
  LevelScheme(
      int register_levels,
      std::vector<ExtraRole> extras,
      std::int64_t total_atoms,
      int tracked_cap,
      BlockadeConfig blockade = BlockadeConfig::hard(),
      int soft_rydberg_cap = 2);

  int register_count() const { return register_levels_; }
  int mode_count() const { return register_levels_ + static_cast<int>(extras_.size()); }
  const std::vector<ExtraRole> &extras() const { return extras_; }
  std::int64_t total_atoms() const { return total_atoms_; }
  int tracked_cap() const { return tracked_cap_; }
  const BlockadeConfig &blockade() const { return blockade_; }
  int soft_rydberg_cap() const { return soft_rydberg_cap_; }

  /// Register level i, 1-based as in |b_1 b_2 ... b_N>.
  Level register_level(int i) const;
  std::optional<Level> find(ExtraRole role) const;
  /// Throws ConfigError when the role is absent.
  Level level(ExtraRole role) const;

  bool is_register(Level level) const;
  bool is_rydberg(Level level) const;
  bool contains(Level level) const;
  /// Maximum occupation of a tracked level.
  int cap(Level level) const;
  std::vector<int> rydberg_modes() const;

  /// "reservoir", "1".."N", "r", "r2", "c", "e".
  std::string level_name(Level level) const;
  /// Inverse of level_name; "0" is accepted for the reservoir. Throws ConfigError.
  Level parse_level(std::string_view name) const;

  bool operator==(const LevelScheme &) const = default;

 private:
  int register_levels_;
  std::vector<ExtraRole> extras_;
  std::int64_t total_atoms_;
  int tracked_cap_;
  BlockadeConfig blockade_;
  int soft_rydberg_cap_;
};

}  // namespace rydsim
