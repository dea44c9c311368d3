#include "hangsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hangsim {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    fail(line, "value of " + key + " is not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, int line, const std::string& key) {
  const double d = to_double(v, line, key);
  const int i = static_cast<int>(d);
  if (i != d) fail(line, "value of " + key + " must be an integer");
  return i;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.resize(hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value, got '" + trim(raw) + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (value.empty()) fail(line, "empty value for " + key);

    if (key == "N") {
      c.N = to_int(value, line, key);
      if (c.N < 16) fail(line, "N must be at least 16");
    } else if (key == "gamma") {
      c.gamma = to_double(value, line, key);
      if (!std::isfinite(c.gamma) || c.gamma < 1.0) fail(line, "gamma must be finite and >= 1");
    } else if (key == "order") {
      c.order = to_int(value, line, key);
      if (c.order != 2 && c.order != 4) fail(line, "order must be 2 or 4");
    } else if (key == "g") {
      std::stringstream gs(value);
      std::string part;
      double comps[3];
      int got = 0;
      while (std::getline(gs, part, ',')) {
        if (got == 3) fail(line, "g takes exactly three components");
        comps[got++] = to_double(trim(part), line, key);
      }
      if (got != 3) fail(line, "g takes exactly three components");
      c.g = Vec3(comps[0], comps[1], comps[2]);
      const double gn = c.g.norm();
      if (std::abs(gn) > 1e-9 && std::abs(gn - 1.0) > 1e-9)
        fail(line, "|g| must be 0 or 1 (nondimensionalized units), got " + std::to_string(gn));
    } else if (key == "dt") {
      if (value == "auto") {
        c.dt = -1.0;
      } else {
        c.dt = to_double(value, line, key);
        if (c.dt <= 0.0) fail(line, "dt must be positive or 'auto'");
      }
    } else if (key == "T_end") {
      c.T_end = to_double(value, line, key);
      if (c.T_end <= 0.0) fail(line, "T_end must be positive");
    } else if (key == "c0") {
      c.c0 = to_double(value, line, key);
      if (c.c0 < 0.0) fail(line, "c0 must be nonnegative");
    } else if (key == "renormalize") {
      if (value == "true") {
        c.renormalize = true;
      } else if (value == "false") {
        c.renormalize = false;
      } else {
        fail(line, "renormalize must be true or false");
      }
    } else if (key == "sample_every") {
      c.sample_every = to_int(value, line, key);
      if (c.sample_every < 1) fail(line, "sample_every must be >= 1");
    } else if (key == "initial") {
      c.initial = value;
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  return c;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace hangsim
