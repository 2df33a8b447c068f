// Seeded synthetic instances for minimum vertex cover (MVC), maximum
// independent set (MIS), combinatorial auction winner determination (CA) and
// set covering (SC). Maximization problems are emitted with negated
// objectives and ">=" rows are rewritten as "<=" rows.
//
// Random models:
//   MVC / MIS  Erdos-Renyi G(n, p) with p = avg_degree / (n - 1).
//              MVC weights are uniform integers in [1, 100]; MIS is unweighted.
//   CA         each bid asks for 2..5 distinct items (uniform size) and is
//              worth round(100 * size * U[0.5, 1.5)); one row per item that
//              appears in some bid.
//   SC         each (element, set) incidence present with probability
//              `density`; an uncovered element joins one uniformly chosen
//              set. Weights uniform integers in [1, 100].

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spllns/ilp.hpp"

namespace spllns {

using Edge = std::pair<int, int>;

std::vector<Edge> erdos_renyi_edges(std::uint64_t seed, int nodes,
                                    double avg_degree);

// Deterministic builders, used by the generators and by tests on hand-made
// graphs.
Instance mvc_instance(std::string name, int nodes, const std::vector<Edge>& edges,
                      const std::vector<double>& weights);
Instance mis_instance(std::string name, int nodes, const std::vector<Edge>& edges);
// bids[b] lists the items of bid b.
Instance ca_instance(std::string name, int items,
                     const std::vector<std::vector<int>>& bids,
                     const std::vector<double>& values);
// members[s] lists the elements covered by set s.
Instance sc_instance(std::string name, int elements,
                     const std::vector<std::vector<int>>& members,
                     const std::vector<double>& weights);

Instance gen_mvc(std::uint64_t seed, int nodes, double avg_degree);
Instance gen_mis(std::uint64_t seed, int nodes, double avg_degree);
Instance gen_ca(std::uint64_t seed, int items, int bids);
Instance gen_sc(std::uint64_t seed, int elements, int sets, double density);

}  // namespace spllns
