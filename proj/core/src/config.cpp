#include "gsp/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gsp/errors.hpp"

namespace gsp {
namespace {

using nlohmann::json;

double to_double(const std::string& tok, int line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

DeviationUnits parse_units(const std::string& name) {
  if (name == "rad_s") return DeviationUnits::RadPerSec;
  if (name == "hz") return DeviationUnits::Hz;
  throw ConfigError("deviation_units must be 'rad_s' or 'hz', got '" + name + "'");
}

ScenarioAggregate parse_aggregate(const std::string& name) {
  if (name == "worst") return ScenarioAggregate::WorstCase;
  if (name == "single") return ScenarioAggregate::SingleCombined;
  throw ConfigError("aggregate must be 'worst' or 'single', got '" + name + "'");
}

void resolve_grid_path(RunConfig& cfg, const std::string& base_dir) {
  if (cfg.grid_path.empty()) throw ConfigError("config does not name a grid file");
  std::filesystem::path p(cfg.grid_path);
  if (p.is_relative() && !base_dir.empty())
    cfg.grid_path = (std::filesystem::path(base_dir) / p).string();
}

RunConfig parse_json_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("JSON config: ") + e.what());
  }
  RunConfig cfg;
  cfg.grid_path = j.value("grid", "");
  cfg.n_s = j.value("n_s", cfg.n_s);
  if (j.contains("method")) cfg.method = parse_method(j["method"]);
  cfg.dt_s = j.value("dt", cfg.dt_s);
  cfg.horizon_s = j.value("horizon", cfg.horizon_s);
  cfg.coupling_b_pu = j.value("coupling_b", cfg.coupling_b_pu);
  cfg.storage_alpha_s = j.value("storage_alpha", cfg.storage_alpha_s);
  cfg.delta_f_ss_max_hz = j.value("delta_f_ss_max_hz", cfg.delta_f_ss_max_hz);
  cfg.p_trans_mw = j.value("p_trans_mw", cfg.p_trans_mw);
  if (j.contains("deviation_units")) cfg.deviation_units = parse_units(j["deviation_units"]);
  if (j.contains("aggregate")) cfg.aggregate = parse_aggregate(j["aggregate"]);
  cfg.brute_budget = j.value("budget", cfg.brute_budget);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.out_dir = j.value("out", cfg.out_dir);
  if (j.contains("ce")) {
    const json& c = j["ce"];
    cfg.ce.n_iter = c.value("n_iter", cfg.ce.n_iter);
    cfg.ce.samples_per_iter = c.value("samples", cfg.ce.samples_per_iter);
    cfg.ce.elite_fraction = c.value("elite_fraction", cfg.ce.elite_fraction);
    cfg.ce.smoothing = c.value("smoothing", cfg.ce.smoothing);
    cfg.ce.seed = c.value("seed", cfg.ce.seed);
  }
  if (j.contains("scenarios")) {
    for (const json& s : j["scenarios"]) {
      ScenarioSpec spec;
      for (const json& e : s) {
        ScenarioEventSpec ev;
        ev.bus_id = e.at("bus");
        ev.loss_mw = e.at("loss_mw");
        ev.onset_s = e.value("onset", 0.0);
        spec.events.push_back(ev);
      }
      cfg.scenarios.push_back(spec);
    }
  }
  return cfg;
}

RunConfig parse_text_config(const std::string& text) {
  RunConfig cfg;
  enum class Section { None, Run, Sizing, Storage, Scenario, Ce };
  Section section = Section::None;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream is(raw);
    std::vector<std::string> tok;
    std::string t;
    while (is >> t) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0].front() == '[') {
      if (tok[0] == "[run]") section = Section::Run;
      else if (tok[0] == "[sizing]") section = Section::Sizing;
      else if (tok[0] == "[storage]") section = Section::Storage;
      else if (tok[0] == "[scenario]") {
        section = Section::Scenario;
        cfg.scenarios.emplace_back();
      } else if (tok[0] == "[ce]") section = Section::Ce;
      else throw ParseError("unknown section " + tok[0], line_no);
      continue;
    }

    switch (section) {
      case Section::None:
        throw ParseError("record before any section header", line_no);
      case Section::Run: {
        if (tok.size() != 2) throw ParseError("[run] records are 'key value'", line_no);
        const std::string& k = tok[0];
        const std::string& v = tok[1];
        if (k == "grid") cfg.grid_path = v;
        else if (k == "n_s") cfg.n_s = static_cast<int>(to_double(v, line_no));
        else if (k == "method") cfg.method = parse_method(v);
        else if (k == "dt") cfg.dt_s = to_double(v, line_no);
        else if (k == "horizon") cfg.horizon_s = to_double(v, line_no);
        else if (k == "coupling_b") cfg.coupling_b_pu = to_double(v, line_no);
        else if (k == "deviation_units") cfg.deviation_units = parse_units(v);
        else if (k == "aggregate") cfg.aggregate = parse_aggregate(v);
        else if (k == "budget") cfg.brute_budget = static_cast<std::uint64_t>(to_double(v, line_no));
        else if (k == "workers") cfg.workers = static_cast<int>(to_double(v, line_no));
        else if (k == "seed") cfg.ce.seed = static_cast<std::uint64_t>(to_double(v, line_no));
        else if (k == "out") cfg.out_dir = v;
        else throw ParseError("unknown [run] key '" + k + "'", line_no);
        break;
      }
      case Section::Sizing: {
        if (tok.size() != 2) throw ParseError("[sizing] records are 'key value'", line_no);
        if (tok[0] == "delta_f_ss_max_hz") cfg.delta_f_ss_max_hz = to_double(tok[1], line_no);
        else if (tok[0] == "p_trans_mw") cfg.p_trans_mw = to_double(tok[1], line_no);
        else throw ParseError("unknown [sizing] key '" + tok[0] + "'", line_no);
        break;
      }
      case Section::Storage: {
        if (tok.size() != 2) throw ParseError("[storage] records are 'key value'", line_no);
        if (tok[0] == "alpha_s") cfg.storage_alpha_s = to_double(tok[1], line_no);
        else throw ParseError("unknown [storage] key '" + tok[0] + "'", line_no);
        break;
      }
      case Section::Scenario: {
        if (tok.size() != 3)
          throw ParseError("[scenario] records: bus loss_MW onset_s", line_no);
        ScenarioEventSpec ev;
        ev.bus_id = static_cast<int>(to_double(tok[0], line_no));
        ev.loss_mw = to_double(tok[1], line_no);
        ev.onset_s = to_double(tok[2], line_no);
        cfg.scenarios.back().events.push_back(ev);
        break;
      }
      case Section::Ce: {
        if (tok.size() != 2) throw ParseError("[ce] records are 'key value'", line_no);
        const std::string& k = tok[0];
        if (k == "n_iter") cfg.ce.n_iter = static_cast<int>(to_double(tok[1], line_no));
        else if (k == "samples") cfg.ce.samples_per_iter = static_cast<int>(to_double(tok[1], line_no));
        else if (k == "elite_fraction") cfg.ce.elite_fraction = to_double(tok[1], line_no);
        else if (k == "smoothing") cfg.ce.smoothing = to_double(tok[1], line_no);
        else if (k == "seed") cfg.ce.seed = static_cast<std::uint64_t>(to_double(tok[1], line_no));
        else throw ParseError("unknown [ce] key '" + k + "'", line_no);
        break;
      }
    }
  }
  return cfg;
}

}  // namespace

SearchMethod parse_method(const std::string& name) {
  if (name == "brute") return SearchMethod::Brute;
  if (name == "ce") return SearchMethod::Ce;
  if (name == "both") return SearchMethod::Both;
  throw ConfigError("method must be 'brute', 'ce' or 'both', got '" + name + "'");
}

double RunConfig::p_trans_w() const {
  if (p_trans_mw >= 0) return p_trans_mw * 1e6;
  double total = 0.0;
  for (const auto& s : scenarios)
    for (const auto& e : s.events) total += e.loss_mw * 1e6;
  return total;
}

double RunConfig::delta_omega_ss_max() const {
  return deviation_units == DeviationUnits::RadPerSec
             ? 2.0 * kPi * delta_f_ss_max_hz
             : delta_f_ss_max_hz;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  const auto first = text.find_first_not_of(" \t\r\n");
  RunConfig cfg = (first != std::string::npos && text[first] == '{')
                      ? parse_json_config(text)
                      : parse_text_config(text);
  resolve_grid_path(cfg, base_dir);
  if (cfg.dt_s <= 0 || cfg.horizon_s <= 0)
    throw ConfigError("dt and horizon must be positive");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.n_s < 0) throw ConfigError("n_s must be nonnegative");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(),
                      std::filesystem::path(path).parent_path().string());
}

std::vector<TransientScenario> build_scenarios(const RunConfig& cfg) {
  std::vector<TransientScenario> out;
  for (const auto& spec : cfg.scenarios) {
    TransientScenario s;
    s.horizon_s = cfg.horizon_s;
    for (const auto& e : spec.events)
      s.events.push_back({e.bus_id, e.loss_mw * 1e6, e.onset_s});
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gsp
