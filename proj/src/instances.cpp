#include "drsm/instances.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "drsm/multilinear.hpp"
#include "drsm/meanfield.hpp"
#include "drsm/rng.hpp"

#include <nlohmann/json.hpp>

namespace drsm {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.a}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.a.size()) throw ParseError("matrix data length mismatch");
  m.a = std::move(data);
  return m;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Exact box minimum of a coordinate-wise concave quadratic (vertex search).
double quadratic_box_min(const Matrix& H, const Vec& h, const Vec& ub) {
  const int n = H.rows;
  if (n <= 20) {
    double best = std::numeric_limits<double>::infinity();
    Vec v(static_cast<size_t>(n));
    for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
      for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = (mask >> i & 1) ? ub[static_cast<size_t>(i)] : 0.0;
      best = std::min(best, 0.5 * dot(v, matvec(H, v)) + dot(h, v));
    }
    return best;
  }
  CounterRng rng(0xB0DECAFE);
  double best = 0.0;
  Vec v(static_cast<size_t>(n));
  for (int s = 0; s < 5000; ++s) {
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = rng.uniform(0, ub[static_cast<size_t>(i)]);
    best = std::min(best, 0.5 * dot(v, matvec(H, v)) + dot(h, v));
  }
  return best - 0.05 * std::fabs(best);  // sampled lower bound, padded
}

}  // namespace

Instance gen_softmax_instance(int n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_softmax_instance: n < 1");
  CounterRng rng = CounterRng(seed).split(0x50f7);
  Vec d(static_cast<size_t>(n));
  if (n == 1)
    d[0] = 10.0;
  else
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = 10.0 * i / (n - 1);
  Matrix gauss(n, n);
  for (double& g : gauss.a) g = rng.gaussian();
  Qr qr = householder_qr(gauss);
  Matrix l(n, n);
  // L = U diag(d) U^T, symmetrized against rounding.
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += qr.q(i, k) * d[static_cast<size_t>(k)] * qr.q(j, k);
      l(i, j) = s;
      l(j, i) = s;
    }

  Instance inst;
  inst.name = "softmax_n" + std::to_string(n);
  inst.seed = seed;
  inst.objective = std::make_shared<SoftmaxObjective>(l);
  inst.constraint = std::make_shared<CardinalityPolytope>(n, 1.0, 0.5 * n);
  return inst;
}

Instance gen_quadratic_instance(int n, bool monotone, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_quadratic_instance: n < 1");
  CounterRng rng = CounterRng(seed).split(monotone ? 0x9add : 0x9add0);
  Matrix H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = -rng.next_double();
      H(i, j) = v;
      H(j, i) = v;
    }
  Vec ub(static_cast<size_t>(n), 1.0);
  Vec h(static_cast<size_t>(n));
  if (monotone) {
    // h_i = -sum_j H_ij ub_j + margin keeps the (antitone) gradient >= 0.
    Vec hu = matvec(H, ub);
    for (int i = 0; i < n; ++i) h[static_cast<size_t>(i)] = -hu[static_cast<size_t>(i)] + 0.01;
  } else {
    Vec hu = matvec(H, ub);
    for (int i = 0; i < n; ++i) h[static_cast<size_t>(i)] = -0.2 * hu[static_cast<size_t>(i)];
  }
  double c = -quadratic_box_min(H, h, ub);

  Instance inst;
  inst.name = std::string(monotone ? "quadratic_monotone_n" : "quadratic_nonmono_n") +
              std::to_string(n);
  inst.seed = seed;
  inst.objective = std::make_shared<QuadraticObjective>(H, h, c, Box(ub));
  inst.constraint = std::make_shared<CardinalityPolytope>(n, 1.0, 0.5 * n);
  return inst;
}

BipartiteGraph gen_bipartite_graph(int users, int forums, int max_degree,
                                   uint64_t seed) {
  if (users < 1 || forums < 1 || max_degree < 1)
    throw std::invalid_argument("gen_bipartite_graph: bad sizes");
  CounterRng rng = CounterRng(seed).split(0xb1);
  BipartiteGraph g;
  g.users = users;
  g.forums = forums;
  for (int u = 0; u < users; ++u) {
    int degree = rng.next_int(1, std::min(max_degree, forums));
    std::vector<int> picked;
    for (int d = 0; d < degree; ++d) {
      int f = rng.next_int(0, forums - 1);
      if (std::find(picked.begin(), picked.end(), f) != picked.end()) continue;
      picked.push_back(f);
      double posts = 1.0 + static_cast<double>(rng.next_int(0, 7));
      g.edges.push_back({u, f, posts});
    }
  }
  return g;
}

BipartiteGraph load_bipartite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::map<std::pair<int, int>, double> agg;
  int max_user = -1, max_forum = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    long long u, f;
    if (!(ss >> u)) continue;  // blank
    double w = 1.0;
    if (!(ss >> f)) throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'user forum [weight]'");
    ss >> w;  // optional
    if (u < 0 || f < 0 || !std::isfinite(w) || w < 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad edge");
    agg[{static_cast<int>(u), static_cast<int>(f)}] += w;
    max_user = std::max(max_user, static_cast<int>(u));
    max_forum = std::max(max_forum, static_cast<int>(f));
  }
  BipartiteGraph g;
  g.users = max_user + 1;
  g.forums = max_forum + 1;
  for (const auto& [key, w] : agg) g.edges.push_back({key.first, key.second, w});
  return g;
}

SocialGraph load_social_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::map<std::pair<int, int>, double> agg;
  int max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    long long s, t;
    if (!(ss >> s)) continue;
    double w = 1.0;
    if (!(ss >> t)) throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'src dst [weight]'");
    ss >> w;
    if (s < 0 || t < 0 || !std::isfinite(w) || w < 0)
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad edge");
    max_node = std::max({max_node, static_cast<int>(s), static_cast<int>(t)});
    if (s == t) continue;  // revenue model ignores self-loops
    agg[{static_cast<int>(s), static_cast<int>(t)}] += w;
  }
  SocialGraph g;
  g.nodes = max_node + 1;
  for (const auto& [key, w] : agg) g.edges.push_back({key.first, key.second, w});
  return g;
}

std::shared_ptr<const Objective> build_influence_objective(const BipartiteGraph& g,
                                                           double u_cap) {
  if (g.users < 1 || g.forums < 1)
    throw std::invalid_argument("build_influence_objective: empty graph");
  Matrix w(g.users, g.forums);
  std::vector<int> degree(static_cast<size_t>(g.users), 0);
  for (const auto& e : g.edges) {
    if (w(e.user, e.forum) == 0.0 && e.weight > 0) ++degree[static_cast<size_t>(e.user)];
    w(e.user, e.forum) += e.weight;
  }
  auto flid = std::make_shared<FlidObjective>(w, Vec(static_cast<size_t>(g.users), 0.0));
  Vec p(static_cast<size_t>(g.users));
  for (int i = 0; i < g.users; ++i) p[static_cast<size_t>(i)] = logistic(-degree[static_cast<size_t>(i)]);
  return std::make_shared<InfluenceObjective>(
      flid, p, Box(Vec(static_cast<size_t>(g.users), u_cap)));
}

Instance build_revenue_instance(const SocialGraph& g, double q, double u,
                                double budget_fraction) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("build_revenue_instance: q outside (0,1)");
  if (!(u > 0)) throw std::invalid_argument("build_revenue_instance: u must be > 0");
  if (!(budget_fraction > 0))
    throw std::invalid_argument("build_revenue_instance: budget fraction must be > 0");
  Matrix w(g.nodes, g.nodes);
  for (const auto& e : g.edges) {
    if (e.src == e.dst) continue;
    w(e.src, e.dst) += e.weight;
  }
  Instance inst;
  inst.name = "revenue_n" + std::to_string(g.nodes);
  inst.objective = std::make_shared<RevenueIEObjective>(
      std::move(w), q, Box(Vec(static_cast<size_t>(g.nodes), u)));
  inst.constraint = std::make_shared<CardinalityPolytope>(g.nodes, u,
                                                          budget_fraction * g.nodes * u);
  return inst;
}

// ---------------------------------------------------------------------------
// JSON round-trip

namespace {

json constraint_to_json(const Constraint& c) {
  if (const auto* box = dynamic_cast<const BoxConstraint*>(&c))
    return json{{"type", "box"}, {"u", box->box().upper()}};
  if (const auto* card = dynamic_cast<const CardinalityPolytope*>(&c))
    return json{{"type", "cardinality"}, {"u", card->u()}, {"b", card->budget()}};
  if (const auto* poly = dynamic_cast<const DownClosedPolytope*>(&c))
    return json{{"type", "polytope"}, {"A", matrix_to_json(poly->A())}, {"b", poly->b()}};
  throw std::invalid_argument("constraint_to_json: unsupported constraint type");
}

std::shared_ptr<const Constraint> constraint_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "box") return std::make_shared<BoxConstraint>(Box(j.at("u").get<Vec>()));
  if (type == "cardinality") {
    double b = j.at("b").get<double>();
    if (j.at("u").is_number())
      return std::make_shared<CardinalityPolytope>(j.at("n").get<int>(),
                                                   j.at("u").get<double>(), b);
    return std::make_shared<CardinalityPolytope>(j.at("u").get<Vec>(), b);
  }
  if (type == "polytope")
    return std::make_shared<DownClosedPolytope>(matrix_from_json(j.at("A")),
                                                j.at("b").get<Vec>());
  throw ParseError("unknown constraint type: " + type);
}

json objective_to_json(const Objective& o);

json multilinear_inner_to_json(const Objective& o) { return objective_to_json(o); }

json objective_to_json(const Objective& o) {
  if (const auto* q = dynamic_cast<const QuadraticObjective*>(&o))
    return json{{"family", "quadratic"},
                {"H", matrix_to_json(q->H())},
                {"h", q->h()},
                {"c", q->c()},
                {"u", q->domain().upper()}};
  if (const auto* s = dynamic_cast<const SoftmaxObjective*>(&o))
    return json{{"family", "softmax"}, {"L", matrix_to_json(s->L())}};
  if (const auto* g = dynamic_cast<const GibbsPolynomial*>(&o)) {
    json terms = json::array();
    for (const auto& t : g->terms()) terms.push_back({{"coef", t.coef}, {"vars", t.vars}});
    return json{{"family", "gibbs"}, {"n", g->dim()}, {"terms", terms}};
  }
  if (const auto* f = dynamic_cast<const FlidObjective*>(&o))
    return json{{"family", "flid"}, {"W", matrix_to_json(f->W())}, {"uprime", f->u_prime()}};
  if (const auto* sc = dynamic_cast<const SetCoverObjective*>(&o)) {
    json concepts = json::array();
    for (const auto& c : sc->concepts())
      concepts.push_back({{"weight", c.weight}, {"items", c.items}});
    return json{{"family", "setcover"}, {"n", sc->dim()}, {"concepts", concepts}};
  }
  if (const auto* mf = dynamic_cast<const MeanFieldKLObjective*>(&o))
    return json{{"family", "meanfield"}, {"inner", multilinear_inner_to_json(mf->inner())}};
  throw std::invalid_argument(
      "objective_to_json: this objective type serializes by graph path; compose the "
      "instance JSON manually");
}

std::shared_ptr<const Objective> objective_from_json(const json& j,
                                                     const std::string& base_dir) {
  std::string family = j.at("family").get<std::string>();
  if (family == "quadratic")
    return std::make_shared<QuadraticObjective>(matrix_from_json(j.at("H")),
                                                j.at("h").get<Vec>(),
                                                j.at("c").get<double>(),
                                                Box(j.at("u").get<Vec>()));
  if (family == "softmax")
    return std::make_shared<SoftmaxObjective>(matrix_from_json(j.at("L")));
  if (family == "gibbs") {
    std::vector<GibbsPolynomial::Term> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("coef").get<double>(), t.at("vars").get<std::vector<int>>()});
    return std::make_shared<GibbsPolynomial>(j.at("n").get<int>(), std::move(terms));
  }
  if (family == "flid")
    return std::make_shared<FlidObjective>(matrix_from_json(j.at("W")),
                                           j.at("uprime").get<Vec>());
  if (family == "setcover") {
    std::vector<SetCoverObjective::Concept> concepts;
    for (const auto& c : j.at("concepts"))
      concepts.push_back({c.at("weight").get<double>(), c.at("items").get<std::vector<int>>()});
    return std::make_shared<SetCoverObjective>(j.at("n").get<int>(), std::move(concepts));
  }
  if (family == "meanfield")
    return std::make_shared<MeanFieldKLObjective>(
        objective_from_json(j.at("inner"), base_dir));
  if (family == "influence") {
    auto path = std::filesystem::path(base_dir) / j.at("graph").get<std::string>();
    BipartiteGraph g = load_bipartite(path.string());
    return build_influence_objective(g, j.value("u_cap", 1.0));
  }
  if (family == "revenue") {
    auto path = std::filesystem::path(base_dir) / j.at("graph").get<std::string>();
    SocialGraph g = load_social_graph(path.string());
    Matrix w(g.nodes, g.nodes);
    for (const auto& e : g.edges) w(e.src, e.dst) += e.weight;
    double u = j.at("u").get<double>();
    return std::make_shared<RevenueIEObjective>(
        std::move(w), j.at("q").get<double>(), Box(Vec(static_cast<size_t>(g.nodes), u)));
  }
  throw ParseError("unknown objective family: " + family);
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["name"] = inst.name;
  j["seed"] = inst.seed;
  j["objective"] = objective_to_json(*inst.objective);
  j["constraint"] = constraint_to_json(*inst.constraint);
  return j.dump(2);
}

Instance instance_from_json(const std::string& json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  try {
    Instance inst;
    inst.name = j.value("name", "instance");
    inst.seed = j.value("seed", 0ull);
    inst.objective = objective_from_json(j.at("objective"), base_dir);
    inst.constraint = constraint_from_json(j.at("constraint"));
    if (inst.objective->dim() != inst.constraint->dim())
      throw ParseError("instance: objective and constraint dimensions differ");
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst) << '\n';
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str(),
                            std::filesystem::path(path).parent_path().string());
}

}  // namespace drsm
