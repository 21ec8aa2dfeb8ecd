#include <doctest.h>

#include <cmath>
#include <memory>
#include <thread>

#include "drsm/compose.hpp"
#include "drsm/instances.hpp"
#include "drsm/influence.hpp"
#include "drsm/meanfield.hpp"
#include "drsm/multilinear.hpp"
#include "drsm/quadratic.hpp"
#include "drsm/revenue.hpp"
#include "drsm/rng.hpp"
#include "drsm/softmax.hpp"
#include "drsm/verify.hpp"

using namespace drsm;

namespace {

// The 2-D indefinite DR quadratic from the opening example, H = [-1,-2;-2,-1].
std::shared_ptr<QuadraticObjective> intro_quadratic(double c = 0.0) {
  Matrix h(2, 2);
  h(0, 0) = -1;
  h(0, 1) = -2;
  h(1, 0) = -2;
  h(1, 1) = -1;
  return std::make_shared<QuadraticObjective>(h, Vec{0, 0}, c, Box::unit(2));
}

Matrix demo_kernel() {
  Matrix l(2, 2);
  l(0, 0) = 2.25;
  l(0, 1) = 3;
  l(1, 0) = 3;
  l(1, 1) = 4.25;
  return l;
}

void check_grad_matches_fd(const Objective& obj, CounterRng& rng, int points = 30,
                           double rel_tol = 1e-4) {
  const Vec& ub = obj.domain().upper();
  for (int s = 0; s < points; ++s) {
    Vec x(ub.size());
    for (size_t i = 0; i < ub.size(); ++i) {
      double m = std::min(10 * kFdStep, 0.4 * ub[i]);
      x[i] = rng.uniform(m, ub[i] - m);
    }
    Vec ga = obj.grad(x);
    Vec gf = fd_gradient(obj, x);
    double err = norm2(ga - gf) / std::max(norm2(gf), 1.0);
    CHECK(err < rel_tol);
  }
}

}  // namespace

TEST_CASE("quadratic objective: opening-example values") {
  auto q = intro_quadratic();
  Eval e = q->eval({1, 1});
  CHECK(e.value == doctest::Approx(-3.0));
  CHECK(e.grad[0] == doctest::Approx(-3.0));
  CHECK(e.grad[1] == doctest::Approx(-3.0));
  Eval e2 = q->eval({1, 0});
  CHECK(e2.value == doctest::Approx(-0.5));
  CHECK(e2.grad[0] == doctest::Approx(-1.0));
  CHECK(e2.grad[1] == doctest::Approx(-2.0));
  // x = 0 gives value c and gradient h
  Matrix h(2, 2);
  h(0, 0) = -0.5;
  h(1, 1) = -0.25;
  h(0, 1) = h(1, 0) = -0.1;
  QuadraticObjective q2(h, {0.3, 0.7}, 1.25, Box::unit(2));
  Eval e3 = q2.eval({0, 0});
  CHECK(e3.value == doctest::Approx(1.25));
  CHECK(e3.grad == Vec{0.3, 0.7});
  // flags: all entries <= 0 so DR, strong mu = min |diagonal|
  CHECK(q->flags().dr_submodular);
  CHECK(q->flags().submodular);
  CHECK(!q->flags().monotone);
  CHECK(q->flags().strong_dr.value() == doctest::Approx(1.0));
  CHECK(q->flags().lipschitz.value() == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_THROWS_AS(QuadraticObjective(Matrix(2, 3), {0, 0}, 0, Box::unit(2)),
                  std::invalid_argument);
}

TEST_CASE("quadratic flags: positive off-diagonal clears submodularity") {
  Matrix h(2, 2);
  h(0, 1) = h(1, 0) = 1.0;
  QuadraticObjective q(h, {0, 0}, 0, Box::unit(2));
  CHECK(!q.flags().submodular);
  CHECK(!q.flags().dr_submodular);
}

TEST_CASE("softmax objective: demo-kernel values") {
  SoftmaxObjective f(demo_kernel());
  CHECK(f.value({0, 0}) == doctest::Approx(0.0));
  CHECK(f.value({1, 1}) == doctest::Approx(std::log(0.5625)).epsilon(1e-10));
  CHECK(f.value({1, 0}) == doctest::Approx(std::log(2.25)).epsilon(1e-10));
  CHECK(f.value({0, 1}) == doctest::Approx(std::log(4.25)).epsilon(1e-10));
  CHECK(f.flags().dr_submodular);
  // binary points pick out principal-submatrix determinants (checked n <= 8
  // via random PSD kernels)
  CounterRng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    int n = rng.next_int(2, 8);
    Matrix g(n, n);
    for (double& v : g.a) v = rng.gaussian();
    Matrix l(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += g(i, k) * g(j, k);
        l(i, j) = s / n + (i == j ? 0.1 : 0.0);
      }
    SoftmaxObjective sf(l);
    uint64_t mask = rng.next_below(1ull << n);
    Vec x(static_cast<size_t>(n), 0.0);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) {
        x[static_cast<size_t>(i)] = 1.0;
        idx.push_back(i);
      }
    if (idx.empty()) {
      CHECK(sf.value(x) == doctest::Approx(0.0));
      continue;
    }
    Matrix sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) sub(static_cast<int>(a), static_cast<int>(b)) = l(idx[a], idx[b]);
    LogDet d = lu_logdet(lu_factor(sub));
    REQUIRE(d.sign == 1);
    CHECK(sf.value(x) == doctest::Approx(d.log_abs).epsilon(1e-9));
  }
  // a non-PSD kernel is rejected
  Matrix bad(2, 2);
  bad(0, 1) = bad(1, 0) = 1.0;
  CHECK_THROWS_AS(SoftmaxObjective{bad}, std::invalid_argument);
}

TEST_CASE("analytic gradients match finite differences per family") {
  CounterRng rng(314);

  auto quad = intro_quadratic();
  check_grad_matches_fd(*quad, rng);

  SoftmaxObjective soft(demo_kernel());
  check_grad_matches_fd(soft, rng, 30, 1e-4);

  GibbsPolynomial cut = GibbsPolynomial::undirected_cut(4, {{0, 1, 1.0}, {1, 2, 0.5}, {2, 3, 2.0}});
  check_grad_matches_fd(cut, rng);

  Matrix w(5, 2);
  for (double& v : w.a) v = rng.next_double();
  FlidObjective flid(w, Vec(5, 0.1));
  check_grad_matches_fd(flid, rng);

  SetCoverObjective cover(4, {{1.0, {0, 1}}, {2.5, {1, 2, 3}}, {0.5, {3}}});
  check_grad_matches_fd(cover, rng);

  Matrix rw(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) rw(i, j) = rng.next_double() * 2;
  RevenueIEObjective rev(rw, 0.7, Box(Vec(5, 3.0)));
  check_grad_matches_fd(rev, rng, 30, 1e-5);
}

TEST_CASE("influence objective: activation identities and chain rule") {
  auto inner = std::make_shared<GibbsPolynomial>(GibbsPolynomial::modular({1.0}));
  InfluenceObjective ind(inner, {0.5}, Box(Vec(1, 3.0)));
  CHECK(ind.activation({1.0})[0] == doctest::Approx(0.5));
  CHECK(ind.activation({0.0})[0] == doctest::Approx(0.0));
  CHECK(ind.activation({2.0})[0] == doctest::Approx(0.75));
  CHECK(ind.flags().monotone);
  CHECK(ind.flags().dr_submodular);

  // p = 1 saturates, p = 0 never activates; both have zero gradient
  InfluenceObjective sat(inner, {1.0}, Box(Vec(1, 3.0)));
  CHECK(sat.value({2.0}) == doctest::Approx(1.0));
  CHECK(sat.value({0.0}) == doctest::Approx(0.0));
  CHECK(sat.eval({2.0}).grad[0] == doctest::Approx(0.0));
  InfluenceObjective never(inner, {0.0}, Box(Vec(1, 3.0)));
  CHECK(never.value({2.0}) == doctest::Approx(0.0));

  // bipartite, single action/customer, p = 0.5, x = 1, identity coverage
  InfluenceObjective bip(inner, 1, {{0, 0, 0.5}}, Box(Vec(1, 3.0)));
  CHECK(bip.value({1.0}) == doctest::Approx(0.5));

  // full chain rule against finite differences on a bipartite instance
  CounterRng rng(99);
  Matrix w(4, 3);
  for (double& v : w.a) v = rng.next_double();
  auto flid = std::make_shared<FlidObjective>(w, Vec(4, 0.0));
  std::vector<InfluenceObjective::BipartiteEdge> edges;
  for (int t = 0; t < 4; ++t)
    for (int s = 0; s < 2; ++s) edges.push_back({s, t, rng.uniform(0.1, 0.9)});
  InfluenceObjective big(flid, 2, edges, Box(Vec(2, 2.0)));
  for (int trial = 0; trial < 20; ++trial) {
    Vec x{rng.uniform(0.1, 1.9), rng.uniform(0.1, 1.9)};
    Vec ga = big.grad(x);
    Vec gf = fd_gradient(big, x);
    CHECK(norm2(ga - gf) / std::max(norm2(gf), 1.0) < 1e-5);
  }
}

TEST_CASE("revenue objective: known values and gradient derivation") {
  Matrix w(2, 2);
  w(0, 1) = 1.0;  // W_12 = 1, W_21 = 0
  RevenueIEObjective rev(w, 0.5, Box(Vec(2, 2.0)));
  CHECK(rev.value({0, 0}) == doctest::Approx(0.0));
  CHECK(rev.value({1, 0}) == doctest::Approx(0.5));
  CHECK(rev.flags().submodular);
  CHECK(!rev.flags().dr_submodular);
  CHECK_THROWS_AS(RevenueIEObjective(w, 1.0, Box(Vec(2, 2.0))), std::invalid_argument);
  Matrix wd(2, 2);
  wd(0, 0) = 1.0;
  CHECK_THROWS_AS(RevenueIEObjective(wd, 0.5, Box(Vec(2, 2.0))), std::invalid_argument);

  // random 5-node gradient vs finite differences, relative 1e-6
  CounterRng rng(6);
  Matrix w5(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) w5(i, j) = rng.next_double();
  RevenueIEObjective rev5(w5, 0.75, Box(Vec(5, 4.0)));
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(5);
    for (double& v : x) v = rng.uniform(0.1, 3.9);
    Vec ga = rev5.grad(x);
    Vec gf = fd_gradient(rev5, x);
    CHECK(norm2(ga - gf) / std::max(norm2(ga), 1.0) < 1e-6);
  }
}

TEST_CASE("mean-field objective: entropy identities and enumeration cross-check") {
  auto zero = std::make_shared<GibbsPolynomial>(5, std::vector<GibbsPolynomial::Term>{});
  MeanFieldKLObjective mf(zero);
  Vec half(5, 0.5);
  CHECK(mf.value(half) == doctest::Approx(5 * std::log(2.0)));
  for (double g : mf.grad(half)) CHECK(g == doctest::Approx(0.0).scale(1));
  CHECK(mf.value(Vec(5, 0.0)) == doctest::Approx(0.0).scale(1).epsilon(1e-6));
  CHECK(mf.clamp_events() > 0);

  // small antiferromagnetic model: value equals the enumerated -KL up to log Z
  auto ising = std::make_shared<GibbsPolynomial>(
      GibbsPolynomial::ising(3, {0.5, 0.2, 0.1}, {{0, 1, -0.7}, {1, 2, -0.3}}));
  MeanFieldKLObjective mfi(ising);
  CHECK(mfi.flags().dr_submodular);
  CounterRng rng(12);
  double log_z = 0;
  {
    double z = 0;
    for (uint64_t mask = 0; mask < 8; ++mask) z += std::exp(ising->set_value(mask));
    log_z = std::log(z);
  }
  for (int trial = 0; trial < 10; ++trial) {
    Vec x(3);
    for (double& v : x) v = rng.uniform(0.05, 0.95);
    double mlin = brute_force_multilinear(3, ising->set_function(), x);
    double neg_kl = 0;
    for (uint64_t mask = 0; mask < 8; ++mask) {
      double qx = 1;
      for (int i = 0; i < 3; ++i)
        qx *= (mask >> i & 1) ? x[static_cast<size_t>(i)] : 1 - x[static_cast<size_t>(i)];
      if (qx <= 0) continue;
      double log_p = ising->set_value(mask) - log_z;
      neg_kl -= qx * (std::log(qx) - log_p);
    }
    (void)mlin;
    // f = -KL + log Z (the stored objective drops the constant)
    CHECK(mfi.value(x) == doctest::Approx(neg_kl + log_z).epsilon(1e-9));
    Vec ga = mfi.grad(x);
    Vec gf = fd_gradient(mfi, x);
    CHECK(norm2(ga - gf) / std::max(norm2(ga), 1.0) < 1e-4);
  }
}

TEST_CASE("compose: identity keeps flags, activation yields DR, separable keeps submodular") {
  Matrix w(3, 2);
  w(0, 0) = 1.0;
  w(1, 0) = 0.5;
  w(2, 1) = 2.0;
  auto flid = std::make_shared<FlidObjective>(w, Vec(3, 0.0));
  REQUIRE(flid->flags().monotone);
  REQUIRE(flid->flags().dr_submodular);

  MapFlags id_flags{MapMonotonicity::kNondecreasing, MapCurvature::kDrSubmodular, true};
  auto ident = compose(flid, std::vector<ScalarMap>(3, identity_map()), id_flags,
                       Box::unit(3));
  CHECK(ident->flags().monotone);
  CHECK(ident->flags().dr_submodular);
  Vec x{0.3, 0.8, 0.5};
  CHECK(ident->value(x) == doctest::Approx(flid->value(x)));
  Vec g1 = ident->grad(x), g2 = flid->grad(x);
  for (int i = 0; i < 3; ++i)
    CHECK(g1[static_cast<size_t>(i)] == doctest::Approx(g2[static_cast<size_t>(i)]));

  // nondecreasing multilinear composed with independent activations: DR, and
  // identical to the built-in influence objective
  Vec p{0.3, 0.6, 0.9};
  std::vector<ScalarMap> acts;
  for (double pi : p) acts.push_back(activation_map(pi));
  MapFlags act_flags{MapMonotonicity::kNondecreasing, MapCurvature::kDrSubmodular, true};
  Box invest(Vec(3, 2.0));
  auto composed = compose(flid, acts, act_flags, invest);
  CHECK(composed->flags().dr_submodular);
  CHECK(composed->flags().monotone);
  InfluenceObjective direct(flid, p, invest);
  CounterRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Vec q{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    CHECK(composed->value(q) == doctest::Approx(direct.value(q)).epsilon(1e-12));
    Vec ga = composed->grad(q), gb = direct.grad(q);
    for (int i = 0; i < 3; ++i)
      CHECK(ga[static_cast<size_t>(i)] == doctest::Approx(gb[static_cast<size_t>(i)]).epsilon(1e-12));
  }

  // revenue reconstruction: directed-cut multilinear composed with 1 - q^t is
  // submodular (not DR) and equals the built-in objective
  Matrix wr(3, 3);
  wr(0, 1) = 1.0;
  wr(1, 2) = 2.0;
  wr(2, 0) = 0.5;
  std::vector<GibbsPolynomial::Edge> edges;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (wr(i, j) != 0) edges.push_back({i, j, wr(i, j)});
  auto cut = std::make_shared<GibbsPolynomial>(GibbsPolynomial::directed_cut(3, edges));
  REQUIRE(cut->flags().submodular);
  double q = 0.6;
  MapFlags share_flags{MapMonotonicity::kNondecreasing, MapCurvature::kNone, true};
  Box dom(Vec(3, 5.0));
  auto rev_composed = compose(cut, std::vector<ScalarMap>(3, decay_share_map(q)),
                              share_flags, dom);
  CHECK(rev_composed->flags().submodular);
  CHECK(!rev_composed->flags().dr_submodular);
  RevenueIEObjective rev_direct(wr, q, dom);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x3{rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)};
    CHECK(rev_composed->value(x3) == doctest::Approx(rev_direct.value(x3)).epsilon(1e-12));
    Vec ga = rev_composed->grad(x3), gb = rev_direct.grad(x3);
    for (int i = 0; i < 3; ++i)
      CHECK(ga[static_cast<size_t>(i)] == doctest::Approx(gb[static_cast<size_t>(i)]).epsilon(1e-10));
  }

  // no applicable rule: flags cleared
  MapFlags none{MapMonotonicity::kNone, MapCurvature::kNone, false};
  VectorMap vm;
  vm.in_dim = 3;
  vm.out_dim = 3;
  vm.value = [](const Vec& x) { return x; };
  vm.jacobian = [](const Vec& x) { return Matrix::identity(static_cast<int>(x.size())); };
  auto cleared = compose(flid, vm, none, Box::unit(3));
  CHECK(!cleared->flags().monotone);
  CHECK(!cleared->flags().submodular);
  CHECK(!cleared->flags().dr_submodular);

  // domain-range mismatch is rejected at evaluation
  MapFlags stretch_flags{MapMonotonicity::kNondecreasing, MapCurvature::kDrSubmodular, true};
  ScalarMap stretch{[](double t) { return 3 * t; }, [](double) { return 3.0; }};
  auto bad = compose(flid, std::vector<ScalarMap>(3, stretch), stretch_flags, Box::unit(3));
  CHECK_THROWS_AS(bad->value({0.9, 0.9, 0.9}), std::invalid_argument);
}

namespace {

// Sampled monotonicity: f(a) <= f(b) for random a <= b in the domain.
bool sampled_monotone(const Objective& obj, int samples, uint64_t seed) {
  CounterRng rng(seed);
  const Vec& ub = obj.domain().upper();
  for (int s = 0; s < samples; ++s) {
    Vec a(ub.size()), b(ub.size());
    for (size_t i = 0; i < ub.size(); ++i) {
      b[i] = rng.uniform(0, ub[i]);
      a[i] = rng.uniform(0, b[i]);
    }
    if (obj.value(a) > obj.value(b) + 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("monotone-flagged objectives pass sampled monotonicity") {
  CounterRng rng(515);
  Matrix w(5, 2);
  for (double& v : w.a) v = rng.next_double();
  FlidObjective flid(w, Vec(5, 0.1));
  REQUIRE(flid.flags().monotone);
  CHECK(sampled_monotone(flid, 500, 1));

  SetCoverObjective cover(4, {{1.0, {0, 1}}, {2.0, {2, 3}}});
  REQUIRE(cover.flags().monotone);
  CHECK(sampled_monotone(cover, 500, 2));

  auto inner = std::make_shared<FlidObjective>(w, Vec(5, 0.0));
  InfluenceObjective inf(inner, Vec(5, 0.4), Box(Vec(5, 2.0)));
  REQUIRE(inf.flags().monotone);
  CHECK(sampled_monotone(inf, 300, 3));

  // non-monotone revenue fails the same sampling (sanity of the test itself)
  Matrix wr(3, 3);
  wr(0, 1) = wr(1, 0) = wr(1, 2) = wr(2, 1) = 1.0;
  RevenueIEObjective rev(wr, 0.5, Box(Vec(3, 6.0)));
  CHECK(!sampled_monotone(rev, 2000, 4));
}

TEST_CASE("compose case 1 output empirically passes check_dr") {
  CounterRng rng(626);
  Matrix w(4, 2);
  for (double& v : w.a) v = rng.next_double();
  auto inner = std::make_shared<FlidObjective>(w, Vec(4, 0.0));
  std::vector<ScalarMap> maps;
  for (int i = 0; i < 4; ++i) maps.push_back(activation_map(0.25 + 0.1 * i));
  MapFlags mf{MapMonotonicity::kNondecreasing, MapCurvature::kDrSubmodular, true};
  auto g = compose(inner, maps, mf, Box(Vec(4, 2.0)));
  REQUIRE(g->flags().dr_submodular);
  CHECK(check_dr(*g, 600, 1e-7, 9).pass);
  CHECK(check_antitone(*g, 300, 1e-7, false, 9).pass);
}

TEST_CASE("objectives evaluate concurrently with identical results") {
  auto soft = gen_softmax_instance(8, 33).objective;
  Vec x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  Eval reference = soft->eval(x);
  std::vector<std::thread> threads;
  std::vector<Eval> results(4);
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (int rep = 0; rep < 50; ++rep) results[t] = soft->eval(x);
    });
  for (auto& t : threads) t.join();
  for (const Eval& e : results) {
    CHECK(e.value == reference.value);
    CHECK(e.grad == reference.grad);
  }
}

TEST_CASE("softmax gradient at experiment scale") {
  auto soft = gen_softmax_instance(20, 2020).objective;
  CounterRng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x(20);
    for (double& v : x) v = rng.uniform(0.05, 0.95);
    Vec ga = soft->grad(x);
    Vec gf = fd_gradient(*soft, x);
    CHECK(norm2(ga - gf) / std::max(norm2(gf), 1.0) < 1e-5);
  }
}

TEST_CASE("softmax raises the singularity error on a rank-deficient kernel") {
  // L = u u^T is PSD with rank 1, so det(L) = 0 at the all-ones point
  Matrix l(2, 2);
  l(0, 0) = 1.0;
  l(0, 1) = 1.0;
  l(1, 0) = 1.0;
  l(1, 1) = 1.0;
  SoftmaxObjective soft(l);
  CHECK(soft.value({0.5, 0.5}) == soft.value({0.5, 0.5}));  // interior fine
  CHECK_THROWS_AS(soft.value({1.0, 1.0}), SingularMatrixError);
  CHECK_THROWS_AS(soft.eval({1.0, 1.0}), SingularMatrixError);
}
