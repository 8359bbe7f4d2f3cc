#include "gsp/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "gsp/errors.hpp"

namespace gsp {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line);
  return value;
}

int parse_int(const std::string& tok, int line) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line);
  return value;
}

// Union-find over bus indices for the connectivity check.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void validate(const GridModel& grid) {
  const int n = grid.bus_count();
  if (n < 1) throw ConfigError("grid has no buses");
  for (int i = 0; i < n; ++i) {
    if (grid.buses[i].id != i + 1)
      throw ConfigError("bus ids must be dense 1..n; missing or out-of-order id " +
                        std::to_string(i + 1));
  }
  if (grid.generator_count() < 1)
    throw ConfigError("grid needs at least one generator bus");
  if (grid.omega0 <= 0 || grid.v_base_v <= 0 || grid.p_base_va <= 0)
    throw ConfigError("non-positive parameter: per-unit bases and f0 must be positive");

  for (const Bus& b : grid.buses) {
    if (b.kind != BusKind::Generator) continue;
    const GeneratorParams& g = b.gen;
    if (g.rated_power_w <= 0 || g.inertia_h_s <= 0 || g.droop_alpha <= 0)
      throw ConfigError("non-positive parameter on generator bus " +
                        std::to_string(b.id));
    if (g.pole_pairs <= 0 || g.pole_pairs % 2 != 0)
      throw ConfigError("pole count on bus " + std::to_string(b.id) +
                        " must be a positive even integer");
  }

  std::set<std::pair<int, int>> seen;
  Dsu dsu(n);
  for (const LineSpec& l : grid.lines) {
    if (l.from < 1 || l.from > n || l.to < 1 || l.to > n)
      throw ConfigError("line references unknown bus " +
                        std::to_string(l.from < 1 || l.from > n ? l.from : l.to));
    if (l.from == l.to)
      throw ConfigError("line from bus " + std::to_string(l.from) + " to itself");
    if (l.susceptance_pu <= 0)
      throw ConfigError("non-positive parameter: line " + std::to_string(l.from) +
                        "-" + std::to_string(l.to) + " susceptance");
    auto key = std::minmax(l.from, l.to);
    if (!seen.insert(key).second)
      throw ConfigError("duplicate line " + std::to_string(key.first) + "-" +
                        std::to_string(key.second) + "; pre-sum parallel lines");
    dsu.unite(l.from - 1, l.to - 1);
  }
  for (int i = 1; i < n; ++i)
    if (dsu.find(i) != dsu.find(0)) throw ConfigError("disconnected network");

  for (int i = 0; i < n; ++i) {
    if (grid.load_w[i] != 0.0 && grid.buses[i].kind != BusKind::Load)
      throw ConfigError("load setpoint on generator bus " + std::to_string(i + 1));
  }
}

}  // namespace

int GridModel::generator_count() const {
  return static_cast<int>(
      std::count_if(buses.begin(), buses.end(),
                    [](const Bus& b) { return b.kind == BusKind::Generator; }));
}

std::vector<int> GridModel::generator_bus_ids() const {
  std::vector<int> out;
  for (const Bus& b : buses)
    if (b.kind == BusKind::Generator) out.push_back(b.id);
  return out;
}

std::vector<int> GridModel::load_bus_ids() const {
  std::vector<int> out;
  for (const Bus& b : buses)
    if (b.kind == BusKind::Load) out.push_back(b.id);
  return out;
}

const Bus& GridModel::bus(int id) const {
  if (id < 1 || id > bus_count())
    throw ConfigError("unknown bus id " + std::to_string(id));
  return buses[id - 1];
}

double GridModel::total_generator_inverse_damping() const {
  double total = 0.0;
  for (const Bus& b : buses)
    if (b.kind == BusKind::Generator) total += 1.0 / b.gen.damping_d(omega0);
  return total;
}

std::vector<double> GridModel::load_injections_w() const {
  std::vector<double> out;
  for (const Bus& b : buses)
    if (b.kind == BusKind::Load) out.push_back(-load_w[b.id - 1]);
  return out;
}

GridModel parse_grid(std::string_view text) {
  GridModel grid;
  std::map<int, Bus> buses;
  std::map<int, double> loads;
  double f0_hz = 50.0, v_base_kv = 400.0, p_base_mva = 100.0;

  enum class Section { None, Bases, Buses, Lines, Loads };
  Section section = Section::None;

  std::istringstream stream{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tokens = split_ws(raw);
    if (tokens.empty()) continue;

    if (tokens[0].front() == '[') {
      const std::string& name = tokens[0];
      if (name == "[bases]") section = Section::Bases;
      else if (name == "[buses]") section = Section::Buses;
      else if (name == "[lines]") section = Section::Lines;
      else if (name == "[loads]") section = Section::Loads;
      else throw ParseError("unknown section " + name, line_no);
      continue;
    }

    switch (section) {
      case Section::None:
        throw ParseError("record before any section header", line_no);
      case Section::Bases: {
        if (tokens.size() != 2)
          throw ParseError("[bases] records are 'key value'", line_no);
        const double v = parse_double(tokens[1], line_no);
        if (tokens[0] == "v_base_kv") v_base_kv = v;
        else if (tokens[0] == "p_base_mva") p_base_mva = v;
        else if (tokens[0] == "f0_hz") f0_hz = v;
        else throw ParseError("unknown base '" + tokens[0] + "'", line_no);
        break;
      }
      case Section::Buses: {
        Bus bus;
        bus.id = parse_int(tokens[0], line_no);
        if (tokens.size() < 2) throw ParseError("bus needs 'id kind'", line_no);
        if (tokens[1] == "generator") {
          bus.kind = BusKind::Generator;
          if (tokens.size() < 3 || tokens.size() > 6)
            throw ParseError("generator bus: id generator P_rt_MW [H p_f alpha]",
                             line_no);
          bus.gen.rated_power_w = parse_double(tokens[2], line_no) * 1e6;
          if (tokens.size() > 3) bus.gen.inertia_h_s = parse_double(tokens[3], line_no);
          if (tokens.size() > 4) bus.gen.pole_pairs = parse_int(tokens[4], line_no);
          if (tokens.size() > 5) bus.gen.droop_alpha = parse_double(tokens[5], line_no);
        } else if (tokens[1] == "load") {
          if (tokens.size() != 2)
            throw ParseError("load bus: id load", line_no);
          bus.kind = BusKind::Load;
        } else {
          throw ParseError("bus kind must be 'generator' or 'load'", line_no);
        }
        if (!buses.emplace(bus.id, bus).second)
          throw ParseError("duplicate bus id " + std::to_string(bus.id), line_no);
        break;
      }
      case Section::Lines: {
        if (tokens.size() != 3)
          throw ParseError("line record: from to b_pu", line_no);
        LineSpec l;
        l.from = parse_int(tokens[0], line_no);
        l.to = parse_int(tokens[1], line_no);
        l.susceptance_pu = parse_double(tokens[2], line_no);
        grid.lines.push_back(l);
        break;
      }
      case Section::Loads: {
        if (tokens.size() != 2)
          throw ParseError("load record: bus_id P_load_MW", line_no);
        const int id = parse_int(tokens[0], line_no);
        if (!loads.emplace(id, parse_double(tokens[1], line_no) * 1e6).second)
          throw ParseError("duplicate load record for bus " + std::to_string(id),
                           line_no);
        break;
      }
    }
  }

  grid.omega0 = 2.0 * kPi * f0_hz;
  grid.v_base_v = v_base_kv * 1e3;
  grid.p_base_va = p_base_mva * 1e6;
  for (auto& [id, bus] : buses) grid.buses.push_back(bus);
  grid.load_w.assign(grid.buses.size(), 0.0);
  for (const auto& [id, p] : loads) {
    if (id < 1 || id > grid.bus_count())
      throw ConfigError("load record references unknown bus " + std::to_string(id));
    grid.load_w[id - 1] = p;
  }

  validate(grid);
  return grid;
}

std::string serialize_grid(const GridModel& grid) {
  std::ostringstream out;
  out << "[bases]\n";
  out << "v_base_kv " << format_number(grid.v_base_v / 1e3) << "\n";
  out << "p_base_mva " << format_number(grid.p_base_va / 1e6) << "\n";
  out << "f0_hz " << format_number(grid.omega0 / (2.0 * kPi)) << "\n";
  out << "[buses]\n";
  for (const Bus& b : grid.buses) {
    if (b.kind == BusKind::Generator) {
      out << b.id << " generator " << format_number(b.gen.rated_power_w / 1e6)
          << " " << format_number(b.gen.inertia_h_s) << " " << b.gen.pole_pairs
          << " " << format_number(b.gen.droop_alpha) << "\n";
    } else {
      out << b.id << " load\n";
    }
  }
  out << "[lines]\n";
  for (const LineSpec& l : grid.lines)
    out << l.from << " " << l.to << " " << format_number(l.susceptance_pu) << "\n";
  out << "[loads]\n";
  for (const Bus& b : grid.buses)
    if (b.kind == BusKind::Load && grid.load_w[b.id - 1] != 0.0)
      out << b.id << " " << format_number(grid.load_w[b.id - 1] / 1e6) << "\n";
  return out.str();
}

GridModel load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

}  // namespace gsp
