#include <doctest.h>

#include <cmath>

#include "modkit/constructions.hpp"
#include "modkit/learner.hpp"
#include "modkit/metrics.hpp"
#include "modkit/random.hpp"
#include "oracles.hpp"

using namespace modkit;

TEST_SUITE("constructions") {

TEST_CASE("pawlik value table") {
  for (int k : {2, 3, 6}) {
    const SetFunction f = pawlik(k);
    const std::uint64_t x = low_bits(k);
    const std::uint64_t y = x << k;
    CHECK(f.n() == 2 * k);
    CHECK(f.evaluate(x) == 3.0);
    CHECK(f.evaluate(y) == -3.0);
    CHECK(f.evaluate(x | y) == 0.0);
    CHECK(f.evaluate(std::uint64_t{0}) == 0.0);
    CHECK(f.evaluate(std::uint64_t{1} | (std::uint64_t{1} << k)) == 0.0);
  }
  CHECK_THROWS_AS(pawlik(1), std::domain_error);
  CHECK_THROWS_AS(pawlik(11), std::domain_error);
}

TEST_CASE("symmetric example fit follows eps/2 - eps/(2n)") {
  double previous = 0.0;
  for (int n = 2; n <= 10; ++n) {
    const SetFunction f = symmetric_example(n, 1.0);
    const KaltonRatio r = kalton_ratio(f, Variant::strong);
    CHECK(r.eps == 1.0);
    CHECK(r.delta == doctest::Approx(0.5 - 0.5 / n).epsilon(1e-9));
    CHECK(r.ratio > previous);
    CHECK(r.ratio < 0.5);
    previous = r.ratio;
  }
}

TEST_CASE("four item worst case") {
  const SetFunction f = four_item_worstcase();
  const SetFunction table = to_table(f);
  const auto t = table.table_values();
  CHECK(oracle::eps(std::vector<double>(t.begin(), t.end()), 4, false) == 2.0);
  CHECK(modularity_eps(f, Variant::strong).eps == 2.0);
  const LinearFit fit = closest_linear(f);
  CHECK(fit.delta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kalton_ratio(f, Variant::strong).ratio == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("noisy linear stays exactly delta away") {
  const LinearFunction g = random_linear(40, 3);
  const SetFunction f = noisy_linear(g, 0.2, 4);
  Rng rng(1);
  int above = 0;
  for (int i = 0; i < 1000; ++i) {
    const WideSet s = rng.subset(40);
    const double d = f.evaluate(s) - linear_eval(g, s);
    CHECK(std::abs(d) == doctest::Approx(0.2));
    above += d > 0;
  }
  CHECK(above > 400);
  CHECK(above < 600);
}

TEST_CASE("km universes") {
  const KMUniverse u3(3);
  CHECK(u3.n() == 20);
  CHECK(u3.generator_count() == 6);
  for (const auto& p : u3.ps().sets()) CHECK(p.size() == 10);
  CHECK(u3.ps().uniform_count() == 3);

  const KMUniverse u4 = km_universe(4);
  CHECK(u4.n() == 70);
  CHECK(u4.generator_count() == 8);
  for (const auto& p : u4.ps().sets()) CHECK(p.size() == 35);
  CHECK(u4.ps().uniform_count() == 4);
  for (int j = 0; j < 8; ++j) CHECK(u4.negative(j) == u4.positive(j).complement());

  CHECK_THROWS_AS(km_universe(5), CapacityError);
}

TEST_CASE("duals") {
  const KMUniverse u = km_universe(4);
  for (int j = 0; j < 8; ++j) CHECK(dual_set(u, u.positive(j)) == u.positive(j));
  CHECK(dual_set(u, WideSet(70)) == WideSet::full(70));
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const WideSet s = rng.subset(70);
    CHECK(dual_set(u, dual_set(u, s)) == s);
  }
}

TEST_CASE("km70 and km20 rule values") {
  const RuleFunction f = km70();
  const KMUniverse& u = f.universe();
  CHECK(f.M() == 2);
  for (int a = 0; a < 8; ++a) {
    CHECK(f.value(u.positive(a)) == 2);
    CHECK(f.value(u.negative(a)) == -2);
    for (int b = a + 1; b < 8; ++b) {
      CHECK(f.value(u.positive(a) & u.positive(b)) == 1);
      CHECK(f.value(u.positive(a) | u.positive(b)) == 1);
    }
  }
  CHECK(f.fired_rule(u.positive(0)) == "support");

  const RuleFunction g = km20();
  for (const auto& s : g.universe().ns().sets()) CHECK(g.value(s) == -3);
  CHECK(g.claim().variant == Variant::weak);
  CHECK(g.claim().eps == 2);
}

TEST_CASE("km70 sampled certificates") {
  const CertificateReport rep = km_certificates(km70(), 100000, 1, VerifyLevel::sampled, 100000);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.max_sampled_violation <= 2.0);
  CHECK(rep.max_structural_violation == 2.0);
  CHECK_THROWS_AS(km_certificates(km70(), 10, 1, VerifyLevel::exact), CapacityError);
}

TEST_CASE("a mutated km70 fails antisymmetry with a witness") {
  const RuleFunction base = km70();
  const WideSet n0 = base.universe().negative(0);
  const RuleFunction bad = base.with_override(
      {"flip", [n0](const WideSet& s) -> std::optional<int> { return s == n0 ? std::optional<int>(0) : std::nullopt; }});
  CHECK(bad.value(n0) == 0);
  const CertificateReport rep = km_certificates(bad, 2000, 1);
  const Check* anti = rep.find("antisymmetry");
  REQUIRE(anti != nullptr);
  CHECK_FALSE(anti->pass);
  CHECK_FALSE(anti->witness.empty());
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("km20 exhaustive verification") {
  const CertificateReport rep = km_certificates(km20(), 2000, 1, VerifyLevel::exact);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  REQUIRE(rep.exact_eps.has_value());
  CHECK(*rep.exact_eps == 2.0);
  CHECK(rep.exact_max_abs == 3.0);
  CHECK(kalton_ratio(km20()).ratio == doctest::Approx(1.5));
}

TEST_CASE("km70 ratio") {
  const KaltonRatio r = kalton_ratio(km70(), 50000, 3);
  CHECK(r.delta == 2.0);
  CHECK(r.eps == 2.0);
  CHECK(r.ratio == doctest::Approx(1.0));
}

TEST_CASE("structural claims") {
  const StructuralReport four = structural_claims(km_universe(4));
  CHECK(four.containment.pass);
  CHECK(four.weak_all());

  const StructuralReport three = structural_claims(km_universe(3));
  CHECK(three.weak_all());
  CHECK_FALSE(three.containment.pass);
  CHECK_FALSE(three.containment.witness.empty());
}

TEST_CASE("intersection deficits") {
  const RuleFunction f = km70();
  const DeficitProfile one = intersection_deficit_profile(f, 1, 2.0);
  CHECK(one.d == 0.0);
  CHECK(one.s == 0.0);
  const DeficitProfile two = intersection_deficit_profile(f, 2, 2.0);
  CHECK(two.d + two.s == doctest::Approx(2.0));
  CHECK(two.bound == 6.0);
  CHECK(two.within_bound);
  for (int ell = 1; ell <= 4; ++ell) {
    const DeficitProfile rep = intersection_deficit_profile(f, ell, 2.0, IntersectionMode::with_repetition);
    CHECK(rep.item_frequency_min == doctest::Approx(std::pow(0.5, ell)));
    CHECK(rep.item_frequency_max == doctest::Approx(std::pow(0.5, ell)));
  }
}

TEST_CASE("adversarial instance") {
  const int n = 256;
  const double delta = std::sqrt(std::log(n) / n);
  const AdversarialInstance inst = adversarial(n, delta, 5);
  CHECK(inst.hidden.size() == n / 2);
  Rng rng(8);
  for (int i = 0; i < 20000; ++i) {
    const WideSet s = rng.subset(n);
    CHECK(std::abs(inst.f.evaluate(s) - linear_eval(inst.g, s)) <= delta + 1e-12);
  }
  CHECK_THROWS_AS(adversarial(255, 0.01, 1), std::domain_error);
  CHECK_THROWS_AS(adversarial(256, 1.0, 1), std::domain_error);
}

TEST_CASE("adversarial gap at the hidden set") {
  const int n = 1024;
  const double ln = std::log(static_cast<double>(n));
  const double delta = std::sqrt(ln / n);
  const AdversarialInstance inst = adversarial(n, delta, 7);
  const double gap = inst.f.evaluate(inst.hidden) - inst.f.evaluate(inst.hidden.complement());
  CHECK(gap == doctest::Approx(delta * std::sqrt(n) / (2 * std::sqrt(ln)) - 2 * delta).epsilon(1e-12));

  const LearnResult r = learn_hadamard(inst.f);
  const double err = std::abs(linear_eval(r.h, inst.hidden) - inst.f.evaluate(inst.hidden));
  CHECK(err >= delta * std::sqrt(n) / (8 * std::sqrt(ln)));
}

}  // TEST_SUITE
