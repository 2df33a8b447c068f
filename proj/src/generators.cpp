#include "spllns/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spllns/rng.hpp"

namespace spllns {

namespace {

int uniform_weight(Rng& rng) {
  return 1 + static_cast<int>(uniform_index(rng, 100));
}

std::string format_param(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

std::vector<Edge> erdos_renyi_edges(std::uint64_t seed, int nodes,
                                    double avg_degree) {
  if (nodes < 1) throw std::invalid_argument("nodes must be >= 1");
  if (avg_degree < 0.0 || (nodes > 1 && avg_degree >= nodes)) {
    throw std::invalid_argument("avg_degree must be in [0, nodes)");
  }
  std::vector<Edge> edges;
  if (nodes < 2) return edges;
  const double p = avg_degree / (nodes - 1);
  Rng rng(seed);
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) {
      if (uniform01(rng) < p) edges.emplace_back(u, v);
    }
  }
  return edges;
}

Instance mvc_instance(std::string name, int nodes, const std::vector<Edge>& edges,
                      const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != nodes) {
    throw std::invalid_argument("one weight per node required");
  }
  std::vector<Constraint> rows;
  rows.reserve(edges.size());
  // x_u + x_v >= 1  ->  -x_u - x_v <= -1
  for (const auto& [u, v] : edges) {
    rows.push_back({{{u, -1.0}, {v, -1.0}}, -1.0});
  }
  return Instance(std::move(name), weights, std::move(rows));
}

Instance mis_instance(std::string name, int nodes, const std::vector<Edge>& edges) {
  std::vector<Constraint> rows;
  rows.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    rows.push_back({{{u, 1.0}, {v, 1.0}}, 1.0});
  }
  return Instance(std::move(name), std::vector<double>(nodes, -1.0),
                  std::move(rows));
}

Instance ca_instance(std::string name, int items,
                     const std::vector<std::vector<int>>& bids,
                     const std::vector<double>& values) {
  if (values.size() != bids.size()) {
    throw std::invalid_argument("one value per bid required");
  }
  std::vector<std::vector<int>> bids_on_item(items);
  for (std::size_t b = 0; b < bids.size(); ++b) {
    for (int item : bids[b]) {
      if (item < 0 || item >= items) throw std::invalid_argument("item out of range");
      bids_on_item[item].push_back(static_cast<int>(b));
    }
  }
  std::vector<Constraint> rows;
  for (const auto& on_item : bids_on_item) {
    if (on_item.empty()) continue;
    Constraint c;
    c.rhs = 1.0;
    for (int b : on_item) c.terms.push_back({b, 1.0});
    rows.push_back(std::move(c));
  }
  std::vector<double> objective(values.size());
  for (std::size_t b = 0; b < values.size(); ++b) objective[b] = -values[b];
  return Instance(std::move(name), std::move(objective), std::move(rows));
}

Instance sc_instance(std::string name, int elements,
                     const std::vector<std::vector<int>>& members,
                     const std::vector<double>& weights) {
  if (weights.size() != members.size()) {
    throw std::invalid_argument("one weight per set required");
  }
  std::vector<std::vector<int>> sets_of(elements);
  for (std::size_t s = 0; s < members.size(); ++s) {
    for (int e : members[s]) {
      if (e < 0 || e >= elements) throw std::invalid_argument("element out of range");
      sets_of[e].push_back(static_cast<int>(s));
    }
  }
  std::vector<Constraint> rows;
  rows.reserve(elements);
  for (int e = 0; e < elements; ++e) {
    if (sets_of[e].empty()) {
      throw std::invalid_argument("element " + std::to_string(e) +
                                  " is not covered by any set");
    }
    Constraint c;
    c.rhs = -1.0;
    for (int s : sets_of[e]) c.terms.push_back({s, -1.0});
    rows.push_back(std::move(c));
  }
  return Instance(std::move(name), weights, std::move(rows));
}

Instance gen_mvc(std::uint64_t seed, int nodes, double avg_degree) {
  const std::vector<Edge> edges = erdos_renyi_edges(seed, nodes, avg_degree);
  Rng rng(derive_seed(seed, 1));
  std::vector<double> weights(nodes);
  for (double& w : weights) w = uniform_weight(rng);
  return mvc_instance("mvc-n" + std::to_string(nodes) + "-d" +
                          format_param(avg_degree) + "-s" + std::to_string(seed),
                      nodes, edges, weights);
}

Instance gen_mis(std::uint64_t seed, int nodes, double avg_degree) {
  return mis_instance("mis-n" + std::to_string(nodes) + "-d" +
                          format_param(avg_degree) + "-s" + std::to_string(seed),
                      nodes, erdos_renyi_edges(seed, nodes, avg_degree));
}

Instance gen_ca(std::uint64_t seed, int items, int bids) {
  if (items < 2) throw std::invalid_argument("items must be >= 2");
  if (bids < 1) throw std::invalid_argument("bids must be >= 1");
  Rng rng(seed);
  std::vector<int> pool(items);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::vector<int>> bundles(bids);
  std::vector<double> values(bids);
  for (int b = 0; b < bids; ++b) {
    const int max_size = std::min(5, items);
    const int size = 2 + static_cast<int>(uniform_index(rng, max_size - 1));
    for (int i = 0; i < size; ++i) {
      const std::size_t j = i + uniform_index(rng, items - i);
      std::swap(pool[i], pool[j]);
    }
    bundles[b].assign(pool.begin(), pool.begin() + size);
    std::sort(bundles[b].begin(), bundles[b].end());
    const double factor = 0.5 + uniform01(rng);
    values[b] = std::round(100.0 * size * factor);
  }
  return ca_instance("ca-i" + std::to_string(items) + "-b" + std::to_string(bids) +
                         "-s" + std::to_string(seed),
                     items, bundles, values);
}

Instance gen_sc(std::uint64_t seed, int elements, int sets, double density) {
  if (elements < 1 || sets < 1) {
    throw std::invalid_argument("elements and sets must be >= 1");
  }
  if (!(density > 0.0 && density < 1.0)) {
    throw std::invalid_argument("density must be in (0, 1)");
  }
  Rng rng(seed);
  std::vector<std::vector<int>> members(sets);
  std::vector<std::uint8_t> covered(elements, 0);
  for (int e = 0; e < elements; ++e) {
    for (int s = 0; s < sets; ++s) {
      if (uniform01(rng) < density) {
        members[s].push_back(e);
        covered[e] = 1;
      }
    }
  }
  for (int e = 0; e < elements; ++e) {
    if (covered[e]) continue;
    auto& m = members[uniform_index(rng, sets)];
    m.insert(std::upper_bound(m.begin(), m.end(), e), e);
  }
  std::vector<double> weights(sets);
  for (double& w : weights) w = uniform_weight(rng);
  return sc_instance("sc-e" + std::to_string(elements) + "-m" +
                         std::to_string(sets) + "-p" + format_param(density) +
                         "-s" + std::to_string(seed),
                     elements, members, weights);
}

}  // namespace spllns
