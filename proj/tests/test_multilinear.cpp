#include <doctest.h>

#include <cmath>

#include "drsm/multilinear.hpp"
#include "drsm/rng.hpp"
#include "drsm/verify.hpp"

using namespace drsm;

namespace {

Vec random_point(int n, CounterRng& rng) {
  Vec x(static_cast<size_t>(n));
  for (double& v : x) v = rng.next_double();
  return x;
}

}  // namespace

TEST_CASE("brute force oracle basics") {
  // binary x recovers F(support)
  GibbsPolynomial cut = GibbsPolynomial::undirected_cut(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  SetFunction f = cut.set_function();
  CHECK(brute_force_multilinear(3, f, {1, 0, 1}) == doctest::Approx(f(0b101)));
  CHECK(brute_force_multilinear(3, f, {0, 0, 0}) == doctest::Approx(f(0)));
  // modular F has expectation sum w_i x_i
  GibbsPolynomial mod = GibbsPolynomial::modular({0.5, -1.0, 2.0});
  CounterRng rng(1);
  for (int s = 0; s < 20; ++s) {
    Vec x = random_point(3, rng);
    double expect = 0.5 * x[0] - 1.0 * x[1] + 2.0 * x[2];
    CHECK(brute_force_multilinear(3, mod.set_function(), x) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  // n=2 single edge at (0.5, 0.5): average of the 4 subset values
  GibbsPolynomial one = GibbsPolynomial::undirected_cut(2, {{0, 1, 1.0}});
  SetFunction g = one.set_function();
  double avg = (g(0) + g(1) + g(2) + g(3)) / 4.0;
  CHECK(brute_force_multilinear(2, g, {0.5, 0.5}) == doctest::Approx(avg));
  CHECK_THROWS_AS(brute_force_multilinear(21, g, Vec(21, 0.5)), std::invalid_argument);
}

TEST_CASE("gibbs polynomial closed form matches the oracle") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    int n = rng.next_int(2, 10);
    std::vector<GibbsPolynomial::Term> terms;
    int nterms = rng.next_int(1, 12);
    for (int t = 0; t < nterms; ++t) {
      GibbsPolynomial::Term term;
      term.coef = rng.uniform(-2, 2);
      int size = rng.next_int(0, std::min(3, n));
      while (static_cast<int>(term.vars.size()) < size) {
        int v = rng.next_int(0, n - 1);
        if (std::find(term.vars.begin(), term.vars.end(), v) == term.vars.end())
          term.vars.push_back(v);
      }
      terms.push_back(term);
    }
    GibbsPolynomial poly(n, terms);
    Vec x = random_point(n, rng);
    double oracle = brute_force_multilinear(n, poly.set_function(), x);
    CHECK(poly.value(x) == doctest::Approx(oracle).epsilon(1e-12).scale(1));
    Vec og = brute_force_multilinear_grad(n, poly.set_function(), x);
    Vec g = poly.grad(x);
    for (int i = 0; i < n; ++i)
      CHECK(g[static_cast<size_t>(i)] == doctest::Approx(og[static_cast<size_t>(i)]).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("gibbs known values") {
  // at x = 0 the value is the empty-term coefficient and grad_i = theta_{i}
  GibbsPolynomial p(2, {{3.0, {}}, {1.5, {0}}, {-2.0, {0, 1}}});
  Eval e = p.eval({0, 0});
  CHECK(e.value == doctest::Approx(3.0));
  CHECK(e.grad[0] == doctest::Approx(1.5));
  CHECK(e.grad[1] == doctest::Approx(0.0));
  // ising theta_s = 1, one pair theta = -1, at x = (1,1): 1 + 1 - 1 = 1
  GibbsPolynomial ising = GibbsPolynomial::ising(2, {1.0, 1.0}, {{0, 1, -1.0}});
  CHECK(ising.value({1, 1}) == doctest::Approx(1.0));
  CHECK(brute_force_multilinear(2, ising.set_function(), {1, 1}) == doctest::Approx(1.0));
  // nonpositive interactions => DR flags set
  CHECK(ising.flags().submodular);
  CHECK(ising.flags().dr_submodular);
}

TEST_CASE("flid closed form matches the oracle") {
  CounterRng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.next_int(1, 8);
    int d = rng.next_int(1, 3);
    Matrix w(n, d);
    for (double& v : w.a) v = rng.next_double() * 2.0;
    Vec uprime(static_cast<size_t>(n));
    for (double& v : uprime) v = rng.uniform(-0.5, 1.0);
    FlidObjective flid(w, uprime);
    Vec x = random_point(n, rng);
    double oracle = brute_force_multilinear(n, flid.set_function(), x);
    CHECK(flid.value(x) == doctest::Approx(oracle).epsilon(1e-12).scale(1));
    Vec og = brute_force_multilinear_grad(n, flid.set_function(), x);
    Eval e = flid.eval(x);
    for (int i = 0; i < n; ++i)
      CHECK(e.grad[static_cast<size_t>(i)] == doctest::Approx(og[static_cast<size_t>(i)]).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("flid single-item closed form and flags") {
  // n = 1: value is u'_1 x_1 + x_1 sum_d W_{1,d}
  Matrix w(1, 3);
  w(0, 0) = 0.5;
  w(0, 1) = 1.5;
  w(0, 2) = 0.25;
  FlidObjective flid(w, {2.0});
  CHECK(flid.value({0.4}) == doctest::Approx(0.4 * (2.0 + 2.25)));
  // value at zero is 0, monotone when u' >= 0
  CHECK(flid.value({0.0}) == doctest::Approx(0.0));
  CHECK(flid.flags().monotone);
  CHECK(flid.flags().dr_submodular);
  CHECK_THROWS_AS(FlidObjective(Matrix(1, 1, -0.5), {0.0}), std::invalid_argument);
}

TEST_CASE("set cover closed form matches the oracle and known values") {
  SetCoverObjective sc(2, {{2.0, {0, 1}}});
  CHECK(sc.value({0.5, 0.5}) == doctest::Approx(1.5));  // 2 (1 - 0.25)
  CHECK(sc.value({0, 0}) == doctest::Approx(0.0));
  CHECK(sc.value({1, 1}) == doctest::Approx(2.0));  // total concept weight

  CounterRng rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    int n = rng.next_int(2, 9);
    int nc = rng.next_int(1, 6);
    std::vector<SetCoverObjective::Concept> concepts;
    for (int c = 0; c < nc; ++c) {
      SetCoverObjective::Concept con;
      con.weight = rng.next_double() * 3.0;
      int size = rng.next_int(1, n);
      for (int k = 0; k < size; ++k) {
        int item = rng.next_int(0, n - 1);
        if (std::find(con.items.begin(), con.items.end(), item) == con.items.end())
          con.items.push_back(item);
      }
      concepts.push_back(con);
    }
    SetCoverObjective cover(n, concepts);
    Vec x = random_point(n, rng);
    double oracle = brute_force_multilinear(n, cover.set_function(), x);
    CHECK(cover.value(x) == doctest::Approx(oracle).epsilon(1e-12).scale(1));
    Vec og = brute_force_multilinear_grad(n, cover.set_function(), x);
    Vec g = cover.grad(x);
    for (int i = 0; i < n; ++i)
      CHECK(g[static_cast<size_t>(i)] == doctest::Approx(og[static_cast<size_t>(i)]).epsilon(1e-9).scale(1));
  }
  CHECK_THROWS_AS(SetCoverObjective(2, {{1.0, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(SetCoverObjective(2, {{-1.0, {0}}}), std::invalid_argument);
}

TEST_CASE("sampling estimator: constants are exact, modular converges") {
  SetFunction constant = [](uint64_t) { return 4.2; };
  SampleEstimate est = multilinear_sample_estimate(5, constant, Vec(5, 0.3), 10, 99);
  CHECK(est.value == doctest::Approx(4.2));
  for (double g : est.grad) CHECK(g == doctest::Approx(0.0));

  GibbsPolynomial mod = GibbsPolynomial::modular({1.0, 2.0, 3.0});
  Vec x{0.2, 0.5, 0.9};
  double exact = 1.0 * 0.2 + 2.0 * 0.5 + 3.0 * 0.9;
  SampleEstimate big = multilinear_sample_estimate(3, mod.set_function(), x, 20000, 123);
  CHECK(big.value == doctest::Approx(exact).epsilon(0.02));
  // gradient of a modular multilinear is the weight vector, exactly per sample
  CHECK(big.grad[0] == doctest::Approx(1.0));
  CHECK(big.grad[1] == doctest::Approx(2.0));
  CHECK(big.grad[2] == doctest::Approx(3.0));
  CHECK_THROWS_AS(multilinear_sample_estimate(3, constant, x, 0, 1), std::invalid_argument);
}

TEST_CASE("sampled multilinear objective is pure and seeded") {
  GibbsPolynomial cut = GibbsPolynomial::undirected_cut(6, {{0, 3, 1.0}, {1, 4, 0.5}});
  SampledMultilinearObjective sampled(6, cut.set_function(), 500, 42);
  Vec x(6, 0.4);
  Eval a = sampled.eval(x);
  Eval b = sampled.eval(x);
  CHECK(a.value == b.value);
  CHECK(a.grad == b.grad);
}
