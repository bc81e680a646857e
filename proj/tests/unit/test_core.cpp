#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "modkit/constructions.hpp"
#include "modkit/io.hpp"
#include "modkit/item_set.hpp"
#include "modkit/lp.hpp"
#include "modkit/metrics.hpp"
#include "modkit/parallel.hpp"
#include "modkit/random.hpp"
#include "modkit/set_function.hpp"

using namespace modkit;

TEST_SUITE("core") {

TEST_CASE("item sets use 1-based items at bit i-1") {
  const std::vector<int> items{1, 3};
  const ItemSet s = ItemSet::from_items(items, 4);
  CHECK(s.mask() == 0b101);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(2));
  CHECK(s.complement().mask() == 0b1010);
  CHECK((s | ItemSet(0b10, 4)).size() == 3);
  CHECK(s.items() == items);
  CHECK_THROWS_AS(ItemSet(0b10000, 4), std::domain_error);
  CHECK_THROWS_AS(ItemSet(0, 65), CapacityError);
  CHECK_THROWS_AS(s | ItemSet(0, 5), std::domain_error);
}

TEST_CASE("wide sets span several words") {
  WideSet s(200);
  s.insert(1);
  s.insert(64);
  s.insert(65);
  s.insert(200);
  CHECK(s.size() == 4);
  CHECK(s.items() == std::vector<int>{1, 64, 65, 200});
  CHECK(s.complement().size() == 196);
  CHECK((s | s.complement()) == WideSet::full(200));
  CHECK((s & s.complement()).none());
  CHECK(s.is_proper_subset_of(WideSet::full(200)));
  CHECK_THROWS_AS(WideSet(1025), CapacityError);
  CHECK_THROWS_AS(s.to_item_set(), CapacityError);
}

TEST_CASE("set parsing accepts hex, binary and item lists") {
  CHECK(parse_set("0x3", 4).items() == std::vector<int>{1, 2});
  CHECK(parse_set("0b100", 4).items() == std::vector<int>{3});
  CHECK(parse_set("2,4", 4).items() == std::vector<int>{2, 4});
  CHECK(parse_set("{}", 4).none());
  CHECK(format_set(parse_set("1,3", 5)) == "{1,3}");
}

TEST_CASE("collections count item frequencies") {
  Collection c(3);
  c.add(parse_set("1,2", 3));
  c.add(parse_set("2,3", 3));
  c.add(parse_set("1,3", 3));
  CHECK(c.item_counts() == std::vector<int>{2, 2, 2});
  CHECK(c.uniform_count() == 2);
  c.add(parse_set("1", 3));
  CHECK_FALSE(c.uniform_count().has_value());
  CHECK(c.complement()[3].items() == std::vector<int>{2, 3});
}

TEST_CASE("evaluate sums a linear function") {
  const SetFunction f = SetFunction::linear({1.0, {1.0, 2.0}});
  CHECK(f.evaluate(parse_set("1,2", 2)) == doctest::Approx(4.0));
  CHECK(f.evaluate(std::uint64_t{0b10}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(f.evaluate(WideSet(3)), std::domain_error);
}

TEST_CASE("query billing skips tables only") {
  const SetFunction lin = SetFunction::linear({0.0, {1.0, 2.0}});
  lin.evaluate(std::uint64_t{1});
  lin.evaluate(std::uint64_t{2});
  CHECK(lin.query_count() == 2);
  const SetFunction copy = lin;
  copy.evaluate(std::uint64_t{3});
  CHECK(lin.query_count() == 3);

  const SetFunction tab = SetFunction::table(1, {0.0, 1.0});
  tab.evaluate(std::uint64_t{1});
  CHECK(tab.query_count() == 0);
}

TEST_CASE("to_table materializes every mask") {
  const SetFunction t = to_table(SetFunction::linear({0.0, {1.0, 2.0}}));
  CHECK(t.kind() == FunctionKind::table);
  const auto v = t.table_values();
  CHECK(std::vector<double>(v.begin(), v.end()) == std::vector<double>{0, 1, 2, 3});

  const SetFunction sym = to_table(symmetric_example(3, 1.0));
  for (std::uint64_t m = 0; m < 8; ++m) CHECK(sym.evaluate(m) == (m == 0b111 ? -1.0 : 0.0));

  CHECK(to_table(km20().as_set_function()).table_values().size() == (std::size_t{1} << 20));
  CHECK_THROWS_AS(to_table(SetFunction::linear(LinearFunction::zero(25))), CapacityError);
}

TEST_CASE("km20 table has value 3 on every positive generator") {
  const RuleFunction km = km20();
  const SetFunction t = to_table(km.as_set_function());
  for (const auto& p : km.universe().ps().sets()) CHECK(t.evaluate(p) == 3.0);
}

TEST_CASE("max_distance") {
  const SetFunction f = pawlik(3);
  CHECK(max_distance(f, f).value == 0.0);

  const SetFunction sym = symmetric_example(10, 1.0);
  const LinearFit fit = closest_linear(sym);
  CHECK(max_distance(sym, SetFunction::linear(fit.g)).value == doctest::Approx(0.45).epsilon(1e-9));

  // Sampled mode is a lower bound.
  const auto sampled = max_distance(sym, SetFunction::linear(fit.g), ScanMode::sample(1000, 3));
  CHECK_FALSE(sampled.exact);
  CHECK(sampled.value <= 0.45 + 1e-9);
}

TEST_CASE("km70 distance to zero") {
  const SetFunction f = km70().as_set_function();
  const SetFunction zero = SetFunction::linear(LinearFunction::zero(70));
  // Uniform sets almost never land on a nonzero value (an interval set fixes
  // 30 items), so sampling only gives the trivial lower bound here.
  const auto sampled = max_distance(f, zero, ScanMode::sample(100000, 1));
  CHECK(sampled.value >= 0.0);
  CHECK(sampled.value <= 2.0);
  double structural = 0.0;
  for (const auto& s : structural_sets(km70().universe())) structural = std::max(structural, std::abs(f.evaluate(s)));
  CHECK(structural == 2.0);
}

TEST_CASE("sampled scans do not depend on the thread count") {
  const SetFunction f = km70().as_set_function();
  const unsigned before = thread_count();
  set_thread_count(1);
  const EpsResult one = modularity_eps(f, Variant::strong, ScanMode::sample(20000, 9));
  set_thread_count(4);
  const EpsResult four = modularity_eps(f, Variant::strong, ScanMode::sample(20000, 9));
  set_thread_count(before);
  CHECK(one.eps == four.eps);
  REQUIRE(one.witness.has_value());
  REQUIRE(four.witness.has_value());
  CHECK(one.witness->s == four.witness->s);
  CHECK(one.witness->t == four.witness->t);
}

TEST_CASE("json round trip keeps the representation") {
  const auto path = std::filesystem::temp_directory_path() / "modkit_core_roundtrip.json";
  for (const SetFunction& f :
       {SetFunction::linear({0.5, {1.0, -2.0, 0.1}}), symmetric_example(4, 1.0), pawlik(2)}) {
    save_json(path.string(), function_to_json(f));
    const SetFunction g = load_function(path.string());
    CHECK(g.kind() == f.kind());
    CHECK(max_distance(f, g).value == 0.0);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(function_from_json(Json{{"n", 2}, {"kind", "bogus"}, {"values", {0}}}), std::invalid_argument);
  CHECK_THROWS_AS(load_function("/nonexistent/modkit.json"), std::invalid_argument);
}

TEST_CASE("simplex solves a small LP") {
  // max x + y  s.t. x + 2y <= 4, 3x + y <= 6  ->  x = 8/5, y = 6/5.
  LpProblem p(2);
  p.objective = {-1.0, -1.0};
  p.add_row({1.0, 2.0}, RowSense::le, 4.0);
  p.add_row({3.0, 1.0}, RowSense::le, 6.0);
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  CHECK(r.objective == doctest::Approx(-2.8));
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
  LpProblem inf(1);
  inf.add_row({1.0}, RowSense::ge, 2.0);
  inf.add_row({1.0}, RowSense::le, 1.0);
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  LpProblem unb(1);
  unb.objective = {-1.0};
  unb.add_row({1.0}, RowSense::ge, 0.0);
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
}

TEST_CASE("simplex handles free variables and equalities") {
  // min |x - 3| via t >= x - 3, t >= 3 - x, with x free.
  LpProblem p(2);
  p.free_var[0] = 1;
  p.objective = {0.0, 1.0};
  p.add_row({1.0, -1.0}, RowSense::le, 3.0);
  p.add_row({-1.0, -1.0}, RowSense::le, -3.0);
  p.add_row({1.0, 0.0}, RowSense::eq, 3.0);
  const LpResult r = solve_lp(p);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("rng draws are reproducible") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(7) < 7);
  }
  CHECK(c.subset_of_size(30, 11).size() == 11);
}

}  // TEST_SUITE
