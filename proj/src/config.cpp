#include "packs/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <sstream>

namespace packs {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

constexpr std::array<std::string_view, 5> kSections{"model", "domain", "solver", "sweep", "output"};

const std::map<std::string_view, std::vector<std::string_view>>& known_keys() {
  static const std::map<std::string_view, std::vector<std::string_view>> keys{
      {"model", {"d", "D", "omega", "k", "lambda", "mu", "beta", "N"}},
      {"domain", {"dim", "lengths", "cells"}},
      {"solver", {"dt", "T", "steady_tol", "flatness_tol", "seed", "newton_max_iters"}},
      {"sweep", {"beta_grid", "N_grid", "runs", "amplitude", "threads"}},
      {"output", {"directory"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    if (s.front() == '+') s.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::vector<ConfigError>& errors)
      : sections_(sections), errors_(errors) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.entries.find(key);
    return e == s->second.entries.end() ? nullptr : &e->second;
  }

  template <class T>
  void scalar(const std::string& section, const std::string& key, T& out) {
    const Entry* e = find(section, key);
    if (!e) return;
    if (!parse_number(e->value, out)) fail(e->line, section + "." + key + ": cannot parse '" + e->value + "'");
  }

  template <class T>
  void list(const std::string& section, const std::string& key, std::vector<T>& out) {
    const Entry* e = find(section, key);
    if (!e) return;
    std::vector<T> values;
    for (auto item : split_list(e->value)) {
      T v{};
      if (!parse_number(item, v)) {
        fail(e->line, section + "." + key + ": cannot parse list item '" + std::string(item) + "'");
        return;
      }
      values.push_back(v);
    }
    out = std::move(values);
  }

  void fail(std::size_t line, std::string msg) { errors_.push_back({line, std::move(msg)}); }

  std::size_t line_of(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return e->line;
    auto s = sections_.find(section);
    return s == sections_.end() ? 0 : s->second.line;
  }

 private:
  std::map<std::string, Section>& sections_;
  std::vector<ConfigError>& errors_;
};

}  // namespace

ParseOutcome parse_config(std::string_view text) {
  ParseOutcome out;
  auto& errors = out.errors;
  std::map<std::string, Section> sections;
  std::string current;

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0;;) {
    const auto nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  for (std::size_t idx = 0; idx < lines.size(); ++idx) {
    const std::size_t lineno = idx + 1;
    std::string_view line = lines[idx];
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({lineno, "malformed section header"});
        current.clear();
        continue;
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::ranges::find(kSections, current) == kSections.end()) {
        errors.push_back({lineno, "unknown section [" + current + "]"});
        current.clear();
        continue;
      }
      auto [it, inserted] = sections.try_emplace(current);
      if (!inserted) {
        errors.push_back({lineno, "duplicate section [" + current + "], first on line " + std::to_string(it->second.line)});
      } else {
        it->second.line = lineno;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({lineno, "expected key = value"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (current.empty()) {
      errors.push_back({lineno, "key '" + key + "' outside of a known section"});
      continue;
    }
    const auto& allowed = known_keys().at(current);
    if (std::ranges::find(allowed, key) == allowed.end()) {
      errors.push_back({lineno, "unknown key '" + key + "' in [" + current + "]"});
      continue;
    }
    auto& entries = sections[current].entries;
    if (auto prev = entries.find(key); prev != entries.end()) {
      errors.push_back({lineno, "duplicate key '" + key + "' in [" + current + "] on lines " +
                                    std::to_string(prev->second.line) + " and " + std::to_string(lineno)});
      continue;
    }
    entries.emplace(key, Entry{value, lineno});
  }

  for (const char* required : {"model", "domain"}) {
    if (!sections.contains(required)) errors.push_back({0, std::string("missing section [") + required + "]"});
  }

  RunConfig cfg;
  Reader rd(sections, errors);

  auto& m = cfg.model;
  rd.scalar("model", "d", m.d);
  rd.scalar("model", "D", m.D);
  rd.scalar("model", "omega", m.omega);
  rd.scalar("model", "k", m.k);
  rd.scalar("model", "lambda", m.lambda);
  rd.scalar("model", "mu", m.mu);
  rd.scalar("model", "beta", m.beta);
  rd.scalar("model", "N", m.N);
  if (sections.contains("model")) {
    for (const auto& v : validate_params(m).violations) {
      std::string key = v.substr(0, v.find(' '));
      if (key == "λk") key = "lambda";
      rd.fail(rd.line_of("model", key), "[model] " + v);
    }
  }

  std::size_t dim = 1;
  std::vector<double> lengths{1.0};
  std::vector<std::size_t> cells{100};
  rd.scalar("domain", "dim", dim);
  rd.list("domain", "lengths", lengths);
  rd.list("domain", "cells", cells);
  if (sections.contains("domain")) {
    try {
      cfg.domain = build_grid(dim, lengths, cells);
    } catch (const std::exception& e) {
      rd.fail(rd.line_of("domain", "dim"), std::string("[domain] ") + e.what());
    }
  }

  auto& s = cfg.solver;
  rd.scalar("solver", "dt", s.dt);
  rd.scalar("solver", "T", s.T);
  rd.scalar("solver", "steady_tol", s.steady_tol);
  rd.scalar("solver", "flatness_tol", s.flatness_tol);
  rd.scalar("solver", "seed", s.seed);
  rd.scalar("solver", "newton_max_iters", s.newton_max_iters);
  if (!(s.dt > 0.0)) rd.fail(rd.line_of("solver", "dt"), "[solver] dt > 0");
  if (!(s.T >= 0.0)) rd.fail(rd.line_of("solver", "T"), "[solver] T ≥ 0");
  if (!(s.steady_tol > 0.0)) rd.fail(rd.line_of("solver", "steady_tol"), "[solver] steady_tol > 0");
  if (!(s.flatness_tol > 0.0)) rd.fail(rd.line_of("solver", "flatness_tol"), "[solver] flatness_tol > 0");

  auto& w = cfg.sweep;
  rd.list("sweep", "beta_grid", w.beta_grid);
  rd.list("sweep", "N_grid", w.N_grid);
  rd.scalar("sweep", "runs", w.runs);
  rd.scalar("sweep", "amplitude", w.amplitude);
  rd.scalar("sweep", "threads", w.threads);
  for (double b : w.beta_grid) {
    if (!(b >= 0.0)) rd.fail(rd.line_of("sweep", "beta_grid"), "[sweep] beta_grid entries must be ≥ 0");
  }
  for (std::size_t n : w.N_grid) {
    if (n < 1) rd.fail(rd.line_of("sweep", "N_grid"), "[sweep] N_grid entries must be ≥ 1");
  }
  if (w.runs < 1) rd.fail(rd.line_of("sweep", "runs"), "[sweep] runs ≥ 1");

  if (const Entry* e = rd.find("output", "directory")) {
    if (e->value.empty()) {
      rd.fail(e->line, "[output] directory must not be empty");
    } else {
      cfg.output.directory = e->value;
    }
  }

  if (errors.empty()) out.config = std::move(cfg);
  std::ranges::stable_sort(errors, {}, &ConfigError::line);
  return out;
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  const auto& m = c.model;
  os << "[model]\n"
     << "d = " << format_double(m.d) << "\n"
     << "D = " << format_double(m.D) << "\n"
     << "omega = " << format_double(m.omega) << "\n"
     << "k = " << format_double(m.k) << "\n"
     << "lambda = " << format_double(m.lambda) << "\n"
     << "mu = " << format_double(m.mu) << "\n"
     << "beta = " << format_double(m.beta) << "\n"
     << "N = " << m.N << "\n\n";

  const auto& g = c.domain;
  os << "[domain]\ndim = " << g.dim() << "\nlengths = ";
  for (std::size_t a = 0; a < g.dim(); ++a) os << (a ? ", " : "") << format_double(g.length(a));
  os << "\ncells = ";
  for (std::size_t a = 0; a < g.dim(); ++a) os << (a ? ", " : "") << g.cells(a);
  os << "\n\n";

  const auto& s = c.solver;
  os << "[solver]\n"
     << "dt = " << format_double(s.dt) << "\n"
     << "T = " << format_double(s.T) << "\n"
     << "steady_tol = " << format_double(s.steady_tol) << "\n"
     << "flatness_tol = " << format_double(s.flatness_tol) << "\n"
     << "seed = " << s.seed << "\n"
     << "newton_max_iters = " << s.newton_max_iters << "\n\n";

  const auto& w = c.sweep;
  os << "[sweep]\nbeta_grid = ";
  for (std::size_t i = 0; i < w.beta_grid.size(); ++i) os << (i ? ", " : "") << format_double(w.beta_grid[i]);
  os << "\nN_grid = ";
  for (std::size_t i = 0; i < w.N_grid.size(); ++i) os << (i ? ", " : "") << w.N_grid[i];
  os << "\nruns = " << w.runs << "\namplitude = " << format_double(w.amplitude) << "\nthreads = " << w.threads
     << "\n\n";

  os << "[output]\ndirectory = " << c.output.directory << "\n";
  return os.str();
}

Protocol protocol_from(const RunConfig& c) {
  Protocol p;
  p.runs = c.sweep.runs;
  p.amplitude = c.sweep.amplitude;
  p.horizon = c.solver.T;
  p.dt = c.solver.dt;
  p.steady_tol = c.solver.steady_tol;
  p.flatness_tol = c.solver.flatness_tol;
  p.newton_max_iters = c.solver.newton_max_iters;
  return p;
}

std::string format_errors(const std::vector<ConfigError>& errors) {
  std::ostringstream os;
  for (const auto& e : errors) {
    if (e.line) os << "line " << e.line << ": ";
    os << e.message << "\n";
  }
  return os.str();
}

}  // namespace packs
