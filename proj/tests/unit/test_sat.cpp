#include <doctest.h>

#include <random>

#include "cfgrank/sat.hpp"
#include "oracles.hpp"

using namespace cfgrank;

namespace {

CnfFormula cnf(int vars, std::vector<std::vector<int>> clauses) {
  CnfFormula c;
  for (int i = 1; i <= vars; ++i) c.var("x" + std::to_string(i));
  c.clauses = std::move(clauses);
  return c;
}

std::vector<std::uint64_t> enumerate(CnfFormula c) {
  std::vector<std::uint64_t> out;
  while (auto a = solve(c)) {
    REQUIRE(verify(c, *a));
    out.push_back(oracle::mask_of(*a));
    c = block(c, *a);
    REQUIRE(out.size() <= (1u << c.num_vars()));
  }
  return out;
}

}  // namespace

TEST_SUITE("sat") {
  TEST_CASE("unit propagation") {
    auto a = solve(cnf(2, {{1, 2}, {-1}}));
    REQUIRE(a.has_value());
    CHECK_FALSE((*a)[1]);
    CHECK((*a)[2]);
    CHECK_FALSE(solve(cnf(1, {{1}, {-1}})).has_value());
  }

  TEST_CASE("edge cases") {
    auto none = solve(CnfFormula{});
    REQUIRE(none.has_value());
    CHECK(none->num_vars() == 0);
    CHECK_FALSE(solve(cnf(2, {{}})).has_value());
    auto free = solve(cnf(3, {}));
    REQUIRE(free.has_value());
    CHECK((*free)[1]);  // true first
    CHECK((*free)[3]);
  }

  TEST_CASE("assumptions") {
    auto c = cnf(3, {{-1, 2}, {-2, 3}});
    auto a = solve(c, {-3});
    REQUIRE(a.has_value());
    CHECK_FALSE((*a)[1]);
    CHECK_FALSE(solve(c, {1, -3}).has_value());
    CHECK(solve(c).has_value());  // assumptions do not persist
    CHECK_THROWS(solve(c, {4}));
  }

  TEST_CASE("solver reuse with added clauses") {
    Solver s(cnf(2, {{1, 2}}));
    auto first = s.solve();
    REQUIRE(first.has_value());
    s.add_clause(blocking_clause(*first));
    auto second = s.solve();
    REQUIRE(second.has_value());
    CHECK_FALSE(*first == *second);
    CHECK(s.num_clauses() == 2);
  }

  TEST_CASE("interrupt aborts") {
    // 8 pigeons, 7 holes: unsatisfiable and needs a long search
    const int P = 8, H = 7;
    auto var = [&](int p, int h) { return p * H + h + 1; };
    std::vector<std::vector<int>> cl;
    for (int p = 0; p < P; ++p) {
      std::vector<int> some;
      for (int h = 0; h < H; ++h) some.push_back(var(p, h));
      cl.push_back(some);
    }
    for (int h = 0; h < H; ++h) {
      for (int p = 0; p < P; ++p) {
        for (int q = p + 1; q < P; ++q) cl.push_back({-var(p, h), -var(q, h)});
      }
    }
    auto c = cnf(P * H, cl);
    Solver s(c);
    int calls = 0;
    s.set_interrupt([&] {
      if (++calls == 2) throw std::runtime_error("stop");
    });
    CHECK_THROWS_AS(s.solve(), std::runtime_error);
    CHECK(calls == 2);
    CHECK_FALSE(solve(c).has_value());
  }

  TEST_CASE("block") {
    auto c = cnf(2, {});
    Assignment a{{false, true, false}};
    CHECK(blocking_clause(a) == std::vector<int>{-1, 2});
    auto b = block(c, a);
    CHECK_FALSE(verify(b, a));
    CHECK(enumerate(cnf(2, {})).size() == 4);
    CHECK(enumerate(cnf(2, {{1, 2}})).size() == 3);
  }

  TEST_CASE("verify") {
    auto c = cnf(2, {{1}});
    Assignment a{{false, true, true}};
    CHECK(verify(c, a));
    a.values[1] = false;
    CHECK_FALSE(verify(c, a));

    std::mt19937_64 rng(8);
    auto r = oracle::random_cnf(rng, 8, 20, 3);
    auto models = oracle::models(r);
    for (int i = 0; i < 1000; ++i) {
      Assignment x;
      x.values.push_back(false);
      std::uint64_t mask = rng() & 0xff;
      for (int v = 0; v < 8; ++v) x.values.push_back((mask >> v) & 1);
      CHECK(verify(r, x) == (models.count(mask) == 1));
    }
  }

  TEST_CASE("agrees with truth tables") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 300; ++i) {
      int n = 1 + static_cast<int>(rng() % 12);
      auto c = oracle::random_cnf(rng, n, static_cast<int>(rng() % (5 * n + 1)), 1 + static_cast<int>(rng() % 3));
      auto models = oracle::models(c);
      auto got = solve(c);
      CHECK(got.has_value() == !models.empty());
      if (got) CHECK(verify(c, *got));
      if (i % 3 == 0) {
        auto all = enumerate(c);
        CHECK(std::set<std::uint64_t>(all.begin(), all.end()) == models);
        CHECK(all.size() == models.size());
      }
    }
  }

  TEST_CASE("deterministic") {
    std::mt19937_64 rng(3);
    auto c = oracle::random_cnf(rng, 10, 25, 3);
    CHECK(enumerate(c) == enumerate(c));
  }
}
