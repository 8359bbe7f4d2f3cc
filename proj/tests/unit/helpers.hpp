#pragma once

#include <random>
#include <string>

#include "gsp/grid.hpp"

namespace gsp::testing {

/// Minimal two-bus grid: 1000 MW generator at bus 1, load at bus 2.
inline GridModel two_bus(double load_mw = 300.0, double line_b = 5.0) {
  std::string text =
      "[bases]\nv_base_kv 400\np_base_mva 100\nf0_hz 50\n"
      "[buses]\n1 generator 1000 6 2 0.05\n2 load\n"
      "[lines]\n1 2 " + std::to_string(line_b) + "\n"
      "[loads]\n2 " + std::to_string(load_mw) + "\n";
  return parse_grid(text);
}

/// Random connected grid: a spanning tree plus extra chords, generators
/// first. Loads sum to roughly half the generation.
inline GridModel random_grid(std::mt19937& rng, int n_gen, int n_load) {
  const int n = n_gen + n_load;
  std::uniform_real_distribution<double> b_dist(1.0, 10.0);
  std::uniform_real_distribution<double> load_dist(50.0, 250.0);
  std::uniform_int_distribution<int> pick(1, n);

  std::string text = "[bases]\nv_base_kv 400\np_base_mva 100\nf0_hz 50\n[buses]\n";
  for (int i = 1; i <= n_gen; ++i)
    text += std::to_string(i) + " generator 1000 6 2 0.05\n";
  for (int i = n_gen + 1; i <= n; ++i) text += std::to_string(i) + " load\n";

  text += "[lines]\n";
  std::vector<std::pair<int, int>> edges;
  for (int i = 2; i <= n; ++i) {  // random spanning tree
    std::uniform_int_distribution<int> parent(1, i - 1);
    edges.emplace_back(parent(rng), i);
  }
  for (int extra = 0; extra < n / 2; ++extra) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    bool dup = false;
    for (auto& e : edges) dup |= (e.first == a && e.second == b);
    if (!dup) edges.emplace_back(a, b);
  }
  for (auto& [a, b] : edges)
    text += std::to_string(a) + " " + std::to_string(b) + " " +
            std::to_string(b_dist(rng)) + "\n";

  text += "[loads]\n";
  for (int i = n_gen + 1; i <= n; ++i)
    text += std::to_string(i) + " " + std::to_string(load_dist(rng)) + "\n";
  return parse_grid(text);
}

}  // namespace gsp::testing
