#pragma once

#include "hangsim/dynamics.hpp"

#include <string>

namespace hangsim {

// key=value lines, '#' comments.  Keys: N, gamma, order, g, dt, T_end, c0,
// renormalize, sample_every, initial.  Unknown keys and malformed values are
// errors, reported with their line number.
SimConfig parse_config(const std::string& text);

SimConfig parse_config_file(const std::string& path);

}  // namespace hangsim
