#include "packs/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace packs::io {

namespace {
constexpr const char* kVersion = "packs 1.0.0";
}

std::string fmt(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

nlohmann::json grid_to_json(const Grid& g) {
  nlohmann::json j;
  j["dim"] = g.dim();
  j["lengths"] = nlohmann::json::array();
  j["cells"] = nlohmann::json::array();
  for (std::size_t a = 0; a < g.dim(); ++a) {
    j["lengths"].push_back(g.length(a));
    j["cells"].push_back(g.cells(a));
  }
  return j;
}

Grid grid_from_json(const nlohmann::json& j) {
  const auto lengths = j.at("lengths").get<std::vector<double>>();
  const auto cells = j.at("cells").get<std::vector<std::size_t>>();
  return build_grid(j.at("dim").get<std::size_t>(), lengths, cells);
}

nlohmann::json params_to_json(const ModelParams& p) {
  return {{"d", p.d},         {"D", p.D},   {"omega", p.omega}, {"k", p.k},
          {"lambda", p.lambda}, {"mu", p.mu}, {"beta", p.beta},   {"N", p.N}};
}

ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams p;
  p.d = j.at("d").get<double>();
  p.D = j.at("D").get<double>();
  p.omega = j.at("omega").get<double>();
  p.k = j.at("k").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.mu = j.at("mu").get<double>();
  p.beta = j.at("beta").get<double>();
  p.N = j.at("N").get<std::size_t>();
  return p;
}

nlohmann::json snapshot_to_json(const ModelParams& p, const Field& s) {
  nlohmann::json j;
  j["grid"] = grid_to_json(s.grid());
  j["params"] = params_to_json(p);
  j["components"] = nlohmann::json::array();
  for (std::size_t c = 0; c < s.components(); ++c) {
    const auto comp = s.component(c);
    j["components"].push_back(std::vector<double>(comp.begin(), comp.end()));
  }
  return j;
}

std::pair<ModelParams, Field> snapshot_from_json(const nlohmann::json& j) {
  const Grid g = grid_from_json(j.at("grid"));
  const ModelParams p = params_from_json(j.at("params"));
  const auto& comps = j.at("components");
  Field f(g, comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto values = comps[c].get<std::vector<double>>();
    if (values.size() != g.size()) throw std::invalid_argument("snapshot: component length does not match grid");
    std::ranges::copy(values, f.component(c).begin());
  }
  return {p, std::move(f)};
}

void write_spectrum_csv(std::ostream& os, const Spectrum& closed, const std::vector<std::complex<double>>& numeric) {
  os << "re,im,multiplicity,source\n";
  for (const auto& e : closed.entries) {
    os << fmt(e.value.real()) << ',' << fmt(e.value.imag()) << ',' << e.multiplicity << ",closed\n";
  }
  auto sorted = numeric;
  std::ranges::sort(sorted, [](auto a, auto b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
  for (const auto& v : sorted) os << fmt(v.real()) << ',' << fmt(v.imag()) << ",1,numeric\n";
}

void write_history_csv(std::ostream& os, const std::vector<HistorySample>& history) {
  os << "step,time,residual,max_u,sum_w_max\n";
  for (const auto& h : history) {
    os << h.step << ',' << fmt(h.time) << ',' << fmt(h.residual) << ',' << fmt(h.max_u) << ',' << fmt(h.sum_w_max)
       << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, bool timing) {
  os << "beta,N,label,flatness,runs,runtime_s\n";
  for (const auto& c : r.cells) {
    os << fmt(c.beta) << ',' << c.N << ',' << to_string(c.classification.label) << ',' << fmt(c.classification.flatness)
       << ',' << c.runs << ',' << (timing ? fmt(c.runtime_s) : std::string("0")) << '\n';
  }
}

void write_thresholds_csv(std::ostream& os, const SweepResult& r, const Thresholds& t) {
  os << "quantity,status,value\n";
  os << "beta_bar_emp," << to_string(t.beta_status) << ','
     << (t.beta_status == ThresholdStatus::Estimated ? fmt(t.beta_bar) : std::string("")) << '\n';
  os << "N_bar_emp," << to_string(t.N_status) << ','
     << (t.N_status == ThresholdStatus::Estimated ? std::to_string(t.N_bar) : std::string("")) << '\n';
  for (std::size_t n = 0; n < r.N_grid.size(); ++n) {
    os << "frontier_N" << r.N_grid[n] << ',' << (r.frontier[n] ? "estimated" : "unbounded_in_range") << ','
       << (r.frontier[n] ? fmt(*r.frontier[n]) : std::string("")) << '\n';
  }
}

void write_sweep_svg(std::ostream& os, const SweepResult& r) {
  constexpr int cell = 36, left = 70, top = 20, bottom = 60, legend = 150;
  std::vector<std::size_t> bs(r.beta_grid.size()), ns(r.N_grid.size());
  for (std::size_t i = 0; i < bs.size(); ++i) bs[i] = i;
  for (std::size_t i = 0; i < ns.size(); ++i) ns[i] = i;
  std::ranges::sort(bs, {}, [&](std::size_t i) { return r.beta_grid[i]; });
  std::ranges::sort(ns, {}, [&](std::size_t i) { return r.N_grid[i]; });
  const int w = left + cell * static_cast<int>(bs.size()) + legend;
  const int h = top + cell * static_cast<int>(ns.size()) + bottom;

  auto colour = [](SolutionLabel l) {
    switch (l) {
      case SolutionLabel::Constant: return "#4c9be8";
      case SolutionLabel::NonConstant: return "#e8704c";
      case SolutionLabel::NoConvergence: return "#9a9a9a";
    }
    return "#000000";
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t xi = 0; xi < bs.size(); ++xi) {
    for (std::size_t yi = 0; yi < ns.size(); ++yi) {
      const auto& c = r.at(bs[xi], ns[yi]);
      const int x = left + cell * static_cast<int>(xi);
      const int y = top + cell * static_cast<int>(ns.size() - 1 - yi);
      os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
         << colour(c.classification.label) << "\" stroke=\"#ffffff\"><title>beta=" << fmt(c.beta) << " N=" << c.N
         << " " << to_string(c.classification.label) << "</title></rect>\n";
    }
  }
  for (std::size_t xi = 0; xi < bs.size(); ++xi) {
    const int x = left + cell * static_cast<int>(xi) + cell / 2;
    os << "  <text x=\"" << x << "\" y=\"" << top + cell * static_cast<int>(ns.size()) + 14
       << "\" text-anchor=\"middle\">" << fmt(r.beta_grid[bs[xi]]) << "</text>\n";
  }
  for (std::size_t yi = 0; yi < ns.size(); ++yi) {
    const int y = top + cell * static_cast<int>(ns.size() - 1 - yi) + cell / 2 + 4;
    os << "  <text x=\"" << left - 6 << "\" y=\"" << y << "\" text-anchor=\"end\">" << r.N_grid[ns[yi]] << "</text>\n";
  }
  os << "  <text x=\"" << left + cell * static_cast<int>(bs.size()) / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\">beta</text>\n";
  os << "  <text x=\"16\" y=\"" << top + cell * static_cast<int>(ns.size()) / 2 << "\">N</text>\n";
  const SolutionLabel labels[] = {SolutionLabel::Constant, SolutionLabel::NonConstant, SolutionLabel::NoConvergence};
  for (int i = 0; i < 3; ++i) {
    const int x = left + cell * static_cast<int>(bs.size()) + 16;
    const int y = top + 20 * i;
    os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\"" << colour(labels[i])
       << "\"/><text x=\"" << x + 18 << "\" y=\"" << y + 10 << "\">" << to_string(labels[i]) << "</text>\n";
  }
  os << "</svg>\n";
}

nlohmann::json manifest(const RunConfig& c, const std::string& subcommand) {
  const std::string rendered = render_config(c);
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(rendered);
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["config_hash"] = "fnv1a64:" + hash.str();
  j["seed"] = c.solver.seed;
  j["versions"] = {{"packs", kVersion},
                   {"compiler", __VERSION__},
                   {"cxx_standard", static_cast<long>(__cplusplus)}};
  j["config"] = rendered;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace packs::io
