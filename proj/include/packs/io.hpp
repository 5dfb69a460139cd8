#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "packs/config.hpp"
#include "packs/covering.hpp"
#include "packs/dynamics.hpp"
#include "packs/stability.hpp"
#include "packs/sweep.hpp"

namespace packs::io {

nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

/// {"grid": ..., "params": ..., "components": [[...], ...]}
nlohmann::json snapshot_to_json(const ModelParams& p, const Field& s);
/// Throws nlohmann::json::exception or std::invalid_argument on bad input.
std::pair<ModelParams, Field> snapshot_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form.
std::string fmt(double x);

/// re,im,multiplicity,source
void write_spectrum_csv(std::ostream& os, const Spectrum& closed, const std::vector<std::complex<double>>& numeric);
/// step,time,residual,max_u,sum_w_max
void write_history_csv(std::ostream& os, const std::vector<HistorySample>& history);
/// beta,N,label,flatness,runs,runtime_s; runtime is written as 0 unless
/// `timing` is set so reruns stay byte-identical.
void write_sweep_csv(std::ostream& os, const SweepResult& r, bool timing);
void write_thresholds_csv(std::ostream& os, const SweepResult& r, const Thresholds& t);
/// Heatmap with beta on x (categorical, increasing) and N on y.
void write_sweep_svg(std::ostream& os, const SweepResult& r);

/// Config hash, seed and versions; no timestamps.
nlohmann::json manifest(const RunConfig& c, const std::string& subcommand);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace packs::io
