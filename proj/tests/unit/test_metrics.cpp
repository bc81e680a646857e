#include <doctest.h>

#include <cmath>

#include "modkit/constructions.hpp"
#include "modkit/learner.hpp"
#include "modkit/metrics.hpp"
#include "modkit/random.hpp"
#include "oracles.hpp"

using namespace modkit;

namespace {

std::vector<double> random_table(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> t(std::size_t{1} << n);
  for (auto& v : t) v = 2.0 * rng.uniform() - 1.0;
  return t;
}

std::vector<double> values_of(const SetFunction& f) {
  const SetFunction table = to_table(f);
  const auto v = table.table_values();
  return {v.begin(), v.end()};
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("linear functions are 0-modular") {
  const SetFunction f = SetFunction::linear(random_linear(9, 4));
  CHECK(modularity_eps(f, Variant::weak).eps == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(modularity_eps(f, Variant::strong).eps == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exact eps matches the all-pairs oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const auto t = random_table(n, seed);
    const SetFunction f = SetFunction::table(n, t);
    const EpsResult weak = modularity_eps(f, Variant::weak);
    const EpsResult strong = modularity_eps(f, Variant::strong);
    CHECK(weak.eps == doctest::Approx(oracle::eps(t, n, true)).epsilon(1e-12));
    CHECK(strong.eps == doctest::Approx(oracle::eps(t, n, false)).epsilon(1e-12));
    REQUIRE(strong.witness.has_value());
    CHECK(std::abs(strong.witness->value) == doctest::Approx(strong.eps));
    CHECK(violation(f, strong.witness->s, strong.witness->t) == doctest::Approx(strong.witness->value));
    REQUIRE(weak.witness.has_value());
    CHECK((weak.witness->s & weak.witness->t).none());
  }
}

TEST_CASE("sampled eps is a lower bound") {
  const auto t = random_table(8, 11);
  const SetFunction f = SetFunction::table(8, t);
  const EpsResult s = modularity_eps(f, Variant::strong, ScanMode::sample(2000, 5));
  CHECK_FALSE(s.exact);
  CHECK(s.eps <= oracle::eps(t, 8, false) + 1e-12);
  CHECK(s.eps > 0.0);
}

TEST_CASE("pawlik k=5 is weakly 1-modular and strongly 2-modular") {
  const SetFunction f = pawlik(5);
  CHECK(modularity_eps(f, Variant::weak).eps == 1.0);
  CHECK(modularity_eps(f, Variant::strong).eps == 2.0);
}

TEST_CASE("pawlik k=3 agrees with the oracle") {
  const auto t = values_of(pawlik(3));
  CHECK(oracle::eps(t, 6, true) == 1.0);
  CHECK(oracle::eps(t, 6, false) == 2.0);
}

TEST_CASE("alternating symmetric function on 4 items is violated by 4") {
  const SetFunction f = SetFunction::symmetric({0, -1, 1, -1, 0});
  CHECK(modularity_eps(f, Variant::strong).eps == 4.0);
  CHECK(symmetric_modularity_eps(f, Variant::strong).eps == 4.0);
  CHECK(oracle::eps(values_of(f), 4, false) == 4.0);
}

TEST_CASE("symmetric eps") {
  CHECK(symmetric_modularity_eps(SetFunction::symmetric(std::vector<double>(7, 2.5)), Variant::strong).eps == 0.0);
  const SetFunction f10 = symmetric_example(10, 1.0);
  CHECK(symmetric_modularity_eps(f10, Variant::strong).eps == 1.0);
  CHECK(oracle::eps(values_of(f10), 10, false) == 1.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Rng rng(seed);
    std::vector<double> by_size(8);
    for (auto& v : by_size) v = std::round(6.0 * rng.uniform() - 3.0);
    const SetFunction f = SetFunction::symmetric(by_size);
    const auto t = values_of(f);
    CHECK(symmetric_modularity_eps(f, Variant::weak).eps == oracle::eps(t, 7, true));
    CHECK(symmetric_modularity_eps(f, Variant::strong).eps == oracle::eps(t, 7, false));
  }
}

TEST_CASE("closest_linear recovers linear functions") {
  const LinearFunction g = random_linear(7, 8);
  const LinearFit fit = closest_linear(SetFunction::linear(g));
  CHECK(fit.delta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.g.c0 == doctest::Approx(g.c0).epsilon(1e-9));
  for (int i = 0; i < 7; ++i) CHECK(std::abs(fit.g.coeffs[i] - g.coeffs[i]) <= 1e-9);
}

TEST_CASE("closest_linear on the symmetric example") {
  const LinearFit fit = closest_linear(symmetric_example(10, 1.0));
  CHECK(fit.delta == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(fit.g.c0 == doctest::Approx(0.45).epsilon(1e-9));
  for (double c : fit.g.coeffs) CHECK(c == doctest::Approx(-0.1).epsilon(1e-9));
  CHECK(closest_linear(symmetric_example(2, 1.0)).delta == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("closest_linear matches vertex enumeration at n=3") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto t = random_table(3, 100 + seed);
    const LinearFit fit = closest_linear(SetFunction::table(3, t));
    CHECK(fit.delta == doctest::Approx(oracle::chebyshev3(t)).epsilon(1e-9));
  }
}

TEST_CASE("closest_linear matches coordinate descent at n=5") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto t = random_table(5, 200 + seed);
    const LinearFit fit = closest_linear(SetFunction::table(5, t));
    const double cd = oracle::chebyshev_descent(t, 5);
    CHECK(std::abs(fit.delta - cd) <= 1e-4);
    CHECK(fit.delta <= cd + 1e-9);
  }
}

TEST_CASE("closest_linear certificates are tight") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SetFunction f = SetFunction::table(6, random_table(6, 300 + seed));
    const LinearFit fit = closest_linear(f);
    const FitCertificate cert = check_certificate(f, fit.certificate);
    CHECK(cert.lower_bound == doctest::Approx(fit.delta).epsilon(1e-7));
    CHECK(cert.marginal_gap <= 1e-7);
    CHECK(max_distance(f, SetFunction::linear(fit.g)).value <= fit.delta + 1e-8);
  }
}

TEST_CASE("chebyshev_fit over rows") {
  const LinearFunction g = random_linear(4, 3);
  std::vector<FitRow> rows;
  for (std::uint64_t m = 0; m < 16; ++m) rows.push_back({WideSet(ItemSet(m, 4)), linear_eval_mask(g, m)});
  CHECK(chebyshev_fit(std::span<const FitRow>(rows)).delta == doctest::Approx(0.0).epsilon(1e-9));

  // Hadamard query rows of a delta-linear function admit g itself.
  const SetFunction noisy = noisy_linear(random_linear(8, 5), 0.1, 9);
  std::vector<FitRow> qrows;
  for (const auto& s : hadamard_query_plan(hadamard_basis(8))) qrows.push_back({s, noisy.evaluate(s)});
  CHECK(chebyshev_fit(std::span<const FitRow>(qrows), 0.1).feasible());

  const WideSet one = parse_set("1", 2);
  const std::vector<FitRow> clash{{one, 0.0}, {one, 1.0}};
  const BandFit bad = chebyshev_fit(std::span<const FitRow>(clash), 0.4);
  CHECK_FALSE(bad.feasible());
  CHECK(chebyshev_fit(std::span<const FitRow>(clash), 0.5).feasible());
}

TEST_CASE("zero_closest_certificate") {
  const RuleFunction km = km70();
  const SupportCertificate c = zero_closest_certificate(km.as_set_function(), km.universe().ps(), km.universe().ns());
  CHECK(c.ok);
  CHECK(c.uniform);
  CHECK(c.M == 2.0);
  for (double m : c.marginals) CHECK(m == doctest::Approx(0.5));

  const SetFunction four = four_item_worstcase();
  const Collection ps(4, {parse_set("1,2", 4), parse_set("3,4", 4)});
  const Collection ns(4, {parse_set("1,3", 4), parse_set("2,4", 4)});
  const SupportCertificate fc = zero_closest_certificate(four, ps, ns);
  CHECK(fc.ok);
  for (double m : fc.marginals) CHECK(m == doctest::Approx(0.5));

  const SetFunction lin = SetFunction::linear({0.0, {1.0, -1.0}});
  const SupportCertificate lc =
      zero_closest_certificate(lin, Collection(2, {parse_set("1", 2)}), Collection(2, {parse_set("2", 2)}));
  CHECK_FALSE(lc.ok);

  // A set above M is a precondition violation naming that set.
  try {
    zero_closest_certificate(four, Collection(4, {parse_set("1,3", 4)}), ns);
    FAIL("expected a certificate error");
  } catch (const CertificateError& e) {
    CHECK(e.offending() == parse_set("1,3", 4));
  }
}

TEST_CASE("normalize_zero_closest") {
  const SetFunction lin = SetFunction::linear(random_linear(5, 2));
  const SetFunction z = normalize_zero_closest(lin);
  for (std::uint64_t m = 0; m < 32; ++m) CHECK(std::abs(z.evaluate(m)) <= 1e-9);

  const SetFunction f10 = normalize_zero_closest(symmetric_example(10, 1.0));
  CHECK(closest_linear(f10).delta == doctest::Approx(0.45).epsilon(1e-9));

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SetFunction f = SetFunction::table(8, random_table(8, 400 + seed));
    const SetFunction g = normalize_zero_closest(f);
    CHECK(modularity_eps(g, Variant::strong).eps == doctest::Approx(modularity_eps(f, Variant::strong).eps).epsilon(1e-9));
  }
}

TEST_CASE("empty plus full and complement bounds when zero is closest") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SetFunction f = to_table(normalize_zero_closest(SetFunction::table(7, random_table(7, 500 + seed))));
    const double eps = modularity_eps(f, Variant::weak).eps;
    const double delta = f.evaluate(std::uint64_t{0}) + f.evaluate(low_bits(7));
    CHECK(delta >= -eps - 1e-9);
    CHECK(delta <= eps + 1e-9);
    for (std::uint64_t m = 0; m < 128; ++m) {
      const double fs = f.evaluate(m);
      const double fc = f.evaluate(~m & low_bits(7));
      CHECK(fc >= -fs - eps + delta - 1e-9);
      CHECK(fc <= -fs + eps + delta + 1e-9);
    }
  }
}

TEST_CASE("partition inequality") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SetFunction f = SetFunction::table(8, random_table(8, 600 + seed));
    const double eps = modularity_eps(f, Variant::weak).eps;
    const double empty = f.evaluate(std::uint64_t{0});
    Rng rng(seed);
    for (int trial = 0; trial < 200; ++trial) {
      const int parts = 2 + static_cast<int>(rng.below(4));
      std::vector<std::uint64_t> piece(static_cast<std::size_t>(parts), 0);
      std::uint64_t s = 0;
      for (int i = 0; i < 8; ++i) {
        const auto p = rng.below(static_cast<std::uint64_t>(parts) + 1);
        if (p == static_cast<std::uint64_t>(parts)) continue;
        piece[p] |= std::uint64_t{1} << i;
        s |= std::uint64_t{1} << i;
      }
      double sum = 0.0;
      for (auto m : piece) sum += f.evaluate(m);
      const double fs = f.evaluate(s);
      CHECK(sum >= fs + (parts - 1) * (empty - eps) - 1e-9);
      CHECK(sum <= fs + (parts - 1) * (empty + eps) + 1e-9);
    }
  }
}

TEST_CASE("kalton_ratio") {
  CHECK(kalton_ratio(SetFunction::linear(random_linear(4, 1)), Variant::strong).ratio == doctest::Approx(0.0));
  const KaltonRatio four = kalton_ratio(four_item_worstcase(), Variant::strong);
  CHECK(four.eps == 2.0);
  CHECK(four.delta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(four.ratio == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("kalton_search") {
  CHECK(kalton_search(1, 50, 1).ratio == doctest::Approx(0.0));
  const KaltonSearchResult warm = kalton_search(4, 50, 1, four_item_worstcase());
  CHECK(warm.ratio == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(kalton_search(6, 10, 1), CapacityError);
}

TEST_CASE("reduce_pair") {
  const RuleFunction km = km70();
  const SetFunction f = km.as_set_function();
  const KMUniverse& u = km.universe();

  const ReducedPair id = reduce_pair(f, u.positive(0), u.positive(1));
  CHECK(id.steps.empty());
  CHECK(id.s == u.positive(0));

  // f(N_0) = -2 < f(N_0 n N_1) = -1 <= 0.
  const WideSet n01 = u.negative(0) & u.negative(1);
  REQUIRE(f.evaluate(n01) == -1.0);
  const ReducedPair comp = reduce_pair(f, u.negative(0), n01);
  // The complemented pair (P_0, P_0 u P_1) then needs the dual step too.
  CHECK(comp.steps == std::vector<std::string>{"complement", "dual"});
  CHECK(comp.s == u.positive(0));
  CHECK(std::abs(violation(f, comp.s, comp.t)) == std::abs(violation(f, u.negative(0), n01)));

  // Look for a pair that needs the dual step.
  bool dual_seen = false;
  Rng rng(3);
  const auto sets = structural_sets(u);
  for (int trial = 0; trial < 20000 && !dual_seen; ++trial) {
    const WideSet& a = sets[rng.below(sets.size())];
    const WideSet b = trial % 2 ? rng.subset(u.n()) : sets[rng.below(sets.size())];
    const ReducedPair r = reduce_pair(f, a, b);
    CHECK(std::abs(violation(f, r.s, r.t)) == std::abs(violation(f, a, b)));
    CHECK(std::abs(f.evaluate(r.t)) <= std::abs(f.evaluate(r.s)));
    CHECK(f.evaluate(r.s) >= 0);
    CHECK(f.evaluate(r.s & r.t) <= f.evaluate(r.s | r.t));
    dual_seen = !r.steps.empty() && r.steps.back() == "dual";
  }
  CHECK(dual_seen);

  CHECK_THROWS_AS(reduce_pair(pawlik(3), WideSet(6), WideSet(6)), UnsupportedFunction);
}

}  // TEST_SUITE
