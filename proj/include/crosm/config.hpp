#ifndef CROSM_CONFIG_HPP
#define CROSM_CONFIG_HPP

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>

#include "crosm/scalar.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Run configuration. Values arrive either from a TOML config file (sections
// [space], [run], [family], [metric]) or from command line flags; flags
// override file keys. The TOML reader supports the subset used here:
// sections, `key = value` lines with strings, numbers and booleans, and
// `#` comments.
// ---------------------------------------------------------------------------

enum class Task { verify, catalog, einstein, cone, isomorphism, full_suite };
enum class OutFormat { json, csv, text };

inline Task task_from_string(const std::string& s) {
  if (s == "verify") return Task::verify;
  if (s == "catalog") return Task::catalog;
  if (s == "einstein") return Task::einstein;
  if (s == "cone") return Task::cone;
  if (s == "isomorphism") return Task::isomorphism;
  if (s == "full-suite" || s == "full_suite") return Task::full_suite;
  throw input_error("run.task: unknown task '" + s + "'");
}

inline const char* to_string(Task t) {
  switch (t) {
    case Task::verify: return "verify";
    case Task::catalog: return "catalog";
    case Task::einstein: return "einstein";
    case Task::cone: return "cone";
    case Task::isomorphism: return "isomorphism";
    case Task::full_suite: return "full-suite";
  }
  return "?";
}

inline OutFormat format_from_string(const std::string& s) {
  if (s == "json") return OutFormat::json;
  if (s == "csv") return OutFormat::csv;
  if (s == "text") return OutFormat::text;
  throw input_error("run.format: unknown format '" + s + "'");
}

struct RunConfig {
  std::string space = "sphere";  // sphere | rpn | cpn
  int n = 2;
  std::string mode;  // exact | float; empty: CROSM_MODE or exact
  double tolerance = 1e-9;
  Task task = Task::verify;
  std::string out_path;  // empty: stdout only
  OutFormat format = OutFormat::json;
  /// family / metric parameters, raw strings keyed "family.kappa" etc.
  std::map<std::string, std::string> params;

  std::string resolved_mode() const {
    if (!mode.empty()) return mode;
    if (const char* env = std::getenv("CROSM_MODE")) {
      const std::string m(env);
      if (m == "exact" || m == "float") return m;
    }
    return "exact";
  }

  bool has(const std::string& key) const { return params.count(key) > 0; }
  std::string get(const std::string& key, const std::string& dflt = "") const {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  }
};

// ---------------------------------------------------------------------------
// Scalar parsing: integers, fractions "p/q" and decimal literals. Decimal
// literals parse exactly into rationals (base-10 denominator).
// ---------------------------------------------------------------------------

/// Base-10 integer parse (leading zeros stay decimal, unlike the C-style
/// prefixes the bignum string constructor honors).
inline Integer parse_integer10(std::string s, const std::string& key) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.erase(s.begin());
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw input_error(key + ": cannot parse '" + s + "' as an integer");
  const auto nz = s.find_first_not_of('0');
  s = nz == std::string::npos ? "0" : s.substr(nz);
  Integer v(s);
  return negative ? Integer(-v) : v;
}

inline Rational parse_rational(const std::string& text,
                               const std::string& key) {
  const std::string& s = text;
  if (s.empty()) throw input_error(key + ": empty value");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Integer num = parse_integer10(s.substr(0, slash), key);
    const Integer den = parse_integer10(s.substr(slash + 1), key);
    if (den == 0) throw input_error(key + ": zero denominator");
    return Rational(num, den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos)
    return Rational(parse_integer10(s, key), Integer(1));
  const Integer digits = parse_integer10(s.substr(0, dot) + s.substr(dot + 1),
                                         key);
  Integer den(1);
  for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return Rational(digits, den);
}

template <typename T>
T parse_scalar(const std::string& text, const std::string& key);

template <>
inline Rational parse_scalar<Rational>(const std::string& text,
                                       const std::string& key) {
  return parse_rational(text, key);
}

template <>
inline double parse_scalar<double>(const std::string& text,
                                   const std::string& key) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos)
      return std::stod(text.substr(0, slash)) /
             std::stod(text.substr(slash + 1));
    return std::stod(text);
  } catch (const std::exception&) {
    throw input_error(key + ": cannot parse '" + text + "' as a number");
  }
}

// ---------------------------------------------------------------------------
// TOML subset reader
// ---------------------------------------------------------------------------

inline std::map<std::string, std::string> parse_toml_subset(
    const std::string& text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t pos = 0, line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line = text.substr(
        pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    // cut at the first # outside quoted strings
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw input_error("config line " + std::to_string(line_no) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw input_error("config line " + std::to_string(line_no) +
                        ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    out[(section.empty() ? key : section + "." + key)] = value;
  }
  return out;
}

/// Folds a parsed config file into a RunConfig; returns parameters it does
/// not consume under their "section.key" names.
inline void apply_config_map(RunConfig& cfg,
                             const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "space.kind")
      cfg.space = value;
    else if (key == "space.n")
      cfg.n = std::atoi(value.c_str());
    else if (key == "run.task")
      cfg.task = task_from_string(value);
    else if (key == "run.mode")
      cfg.mode = value;
    else if (key == "run.tolerance")
      cfg.tolerance = parse_scalar<double>(value, key);
    else if (key == "run.out")
      cfg.out_path = value;
    else if (key == "run.format")
      cfg.format = format_from_string(value);
    else if (key == "run.dump_tensors" || key.rfind("family.", 0) == 0 ||
             key.rfind("metric.", 0) == 0)
      cfg.params[key] = value;
    else
      throw input_error("config: unknown key '" + key + "'");
  }
}

}  // namespace crosm

#endif
