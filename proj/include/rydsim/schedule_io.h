#pragma once

#include <string>

#include "rydsim/pulses.h"

namespace rydsim {

/// Schedule text format, one step per line ('#' starts a comment line):
///
///   pulse kind=raman a=1 b=2 rabi=1 phase=0 detuning=0 duration=3.14 reference=1 label="split"
///   light_shift level=c phase=3.1415926535897931 label="fix"
///
/// Levels use LevelScheme names ("reservoir", "1".."N", "r", "r2", "c", "e").
/// Every key is required except `reference` (default 0) and `label` (default
/// empty); keys may appear in any order but only once. Numbers are written
/// with 17 significant digits so text round trips are exact.
std::string schedule_to_text(const LevelScheme &scheme, const Schedule &schedule);

/// Strict inverse of schedule_to_text; throws ParseError with line and column.
Schedule schedule_from_text(const LevelScheme &scheme, const std::string &text);

/// "%.17g" formatting; parsing the result gives back the same double.
std::string format_double(double value);

}  // namespace rydsim
