#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drsm/constraints.hpp"
#include "drsm/core.hpp"
#include "drsm/influence.hpp"
#include "drsm/quadratic.hpp"
#include "drsm/revenue.hpp"
#include "drsm/softmax.hpp"

namespace drsm {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted bipartite graph (users x forums), duplicate edges aggregated.
struct BipartiteGraph {
  int users = 0;
  int forums = 0;
  struct Edge {
    int user, forum;
    double weight;
  };
  std::vector<Edge> edges;
};

// Directed weighted graph; self-loops are dropped on load.
struct SocialGraph {
  int nodes = 0;
  struct Edge {
    int src, dst;
    double weight;
  };
  std::vector<Edge> edges;
};

// A reproducible problem: objective + constraint + seed.
struct Instance {
  std::string name;
  std::shared_ptr<const Objective> objective;
  std::shared_ptr<const Constraint> constraint;
  uint64_t seed = 0;
};

// Synthetic softmax instance: eigenvalues evenly spaced in [0, 10],
// L = U diag(d) U^T with U the sign-normalized Q factor of a Gaussian matrix;
// constraint sum x <= 0.5 n over [0,1]^n.
Instance gen_softmax_instance(int n, uint64_t seed);

// Synthetic DR quadratic: H symmetric with entries uniform in [-1, 0] over the
// unit box. Monotone mode lifts h so the gradient stays nonnegative;
// non-monotone mode sets h = -0.2 H^T u-bar. c shifts the box minimum to zero
// (exact vertex enumeration for n <= 20, sampled otherwise). Constraint:
// cardinality with budget 0.5 sum(u-bar).
Instance gen_quadratic_instance(int n, bool monotone, uint64_t seed);

// Synthetic bipartite graph for influence experiments at desk scale.
BipartiteGraph gen_bipartite_graph(int users, int forums, int max_degree,
                                   uint64_t seed);

// Edge list loaders: whitespace-separated "src dst [weight]" lines, '#'
// comments, duplicate pairs aggregated by summing weights.
BipartiteGraph load_bipartite(const std::string& path);
SocialGraph load_social_graph(const std::string& path);

// Influence instance per the forum-graph recipe: facility-location inner model
// over forums (FLID with u' = 0), independent activations p_i = sigma(-d_i)
// with d_i the user's forum degree. Investments live in [0, u_cap]^users.
std::shared_ptr<const Objective> build_influence_objective(const BipartiteGraph& g,
                                                           double u_cap = 1.0);

// Revenue instance: IE objective on the graph with constraint
// {0 <= x <= u, sum x <= budget_fraction * n * u}.
Instance build_revenue_instance(const SocialGraph& g, double q, double u,
                                double budget_fraction);

// Instance JSON: {"name":..., "objective": {"family": ...}, "constraint":
// {...}, "seed": ...}; dense matrices row-major, graphs referenced by path.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& json_text,
                            const std::string& base_dir = ".");
void save_instance(const std::string& path, const Instance& inst);
Instance load_instance(const std::string& path);

}  // namespace drsm
