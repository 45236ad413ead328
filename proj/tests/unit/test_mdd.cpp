#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "mnread/errors.hpp"
#include "mnread/mdd.hpp"
#include "oracle.hpp"

using namespace mnread;

namespace {

std::set<std::vector<std::string>> path_set(const Mdd& m) {
  auto p = m.paths();
  return {p.begin(), p.end()};
}

std::string dump(const Mdd& m) {
  std::ostringstream s;
  save_mdd(m, s);
  return s.str();
}

}  // namespace

TEST(Mdd, InsertSharesPrefix) {
  Mdd m(3);
  m.insert({"the", "black", "cat"});
  m.insert({"the", "white", "cat"});
  EXPECT_EQ(m.count_paths(), 2);
  EXPECT_EQ(m.arcs(m.root()).size(), 1u);
  EXPECT_EQ(m.labels().name(m.arcs(m.root())[0].label), "the");
  EXPECT_TRUE(validate(m).empty());
}

TEST(Mdd, InsertIsIdempotent) {
  Mdd a(3);
  a.insert({"x", "y", "z"});
  const std::string once = dump(a);
  a.insert({"x", "y", "z"});
  EXPECT_EQ(dump(a), once);
  EXPECT_EQ(a.count_paths(), 1);
}

TEST(Mdd, InsertWrongArityThrows) {
  Mdd m(3);
  EXPECT_THROW(m.insert({"a", "b"}), ArityError);
  EXPECT_THROW(m.insert({"a", "b", "c", "d"}), ArityError);
}

TEST(Mdd, InsertIntoReducedDiagramDoesNotLeak) {
  Mdd m(3);
  m.insert({"a", "x", "z"});
  m.insert({"b", "x", "z"});
  Mdd r = m.reduce();
  ASSERT_EQ(r.node_count(), 4u);  // root, shared middle chain, tt
  r.insert({"a", "y", "z"});
  EXPECT_EQ(path_set(r), (std::set<std::vector<std::string>>{
                             {"a", "x", "z"}, {"a", "y", "z"}, {"b", "x", "z"}}));
}

TEST(Mdd, EmptyDiagram) {
  Mdd m(4);
  EXPECT_TRUE(m.empty());
  EXPECT_EQ(m.count_paths(), 0);
  EXPECT_EQ(m.node_count(), 0u);
  EXPECT_EQ(m.reduce().count_paths(), 0);
}

TEST(Mdd, EnumerateLexicographicAndLimit) {
  Mdd m(2);
  m.insert({"b", "a"});
  m.insert({"a", "c"});
  m.insert({"a", "b"});
  m.insert({"c", "a"});
  std::vector<std::vector<std::string>> seen;
  const auto n = m.enumerate(std::nullopt, [&](std::span<const LabelId> p) {
    seen.push_back({m.labels().name(p[0]), m.labels().name(p[1])});
  });
  EXPECT_EQ(n, 4u);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  std::size_t visits = 0;
  EXPECT_EQ(m.enumerate(2, [&](auto) { ++visits; }), 2u);
  EXPECT_EQ(visits, 2u);
  EXPECT_EQ(m.enumerate(0, [&](auto) { ++visits; }), 0u);
}

TEST(Mdd, ReduceRandomPreservesPathsAndIsIdempotent) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = oracle::random_mdd(rng);
    const Mdd once = r.mdd.reduce();
    EXPECT_EQ(path_set(once), r.paths);
    EXPECT_EQ(path_set(r.mdd), r.paths);
    EXPECT_EQ(once.count_paths(), r.paths.size());
    const Mdd twice = once.reduce();
    EXPECT_EQ(dump(twice), dump(once));
    EXPECT_LE(once.node_count(), r.mdd.node_count());
    EXPECT_TRUE(validate(once).empty());
  }
}

TEST(Mdd, ReduceIsCanonical) {
  // same path set inserted in two orders reduces to the same text
  std::vector<std::vector<std::string>> tuples{
      {"a", "b", "c"}, {"a", "c", "c"}, {"b", "b", "c"}, {"b", "c", "a"}, {"c", "b", "c"}};
  auto shared = std::make_shared<LabelTable>();
  for (const char* l : {"a", "b", "c"}) shared->intern(l);
  Mdd x(3, shared);
  Mdd y(3, shared);
  for (const auto& t : tuples) x.insert(std::span<const std::string>(t));
  for (auto it = tuples.rbegin(); it != tuples.rend(); ++it) y.insert(std::span<const std::string>(*it));
  EXPECT_EQ(dump(x.reduce()), dump(y.reduce()));
}

TEST(Mdd, TrimDropsDeadNodes) {
  Mdd m(2);
  const NodeId dead = m.add_node(1);
  const NodeId live = m.add_node(1);
  m.add_arc(m.root(), m.labels().intern("a"), dead);
  m.add_arc(m.root(), m.labels().intern("b"), live);
  m.add_arc(live, m.labels().intern("c"), m.terminal());
  EXPECT_FALSE(validate(m).empty());
  const Mdd t = m.trim();
  EXPECT_TRUE(validate(t).empty());
  EXPECT_EQ(path_set(t), (std::set<std::vector<std::string>>{{"b", "c"}}));
}

TEST(Mdd, ValidateFindsViolations) {
  Mdd m(2);
  const NodeId v = m.add_node(1);
  const NodeId w = m.add_node(1);
  const LabelId a = m.labels().intern("a");
  m.add_arc(m.root(), a, v);
  m.add_arc(m.root(), a, w);
  m.add_arc(v, a, m.terminal());
  m.add_arc(w, a, v);  // layer 1 -> layer 1
  std::set<ViolationKind> kinds;
  for (const auto& viol : validate(m)) kinds.insert(viol.kind);
  EXPECT_TRUE(kinds.contains(ViolationKind::kNondeterministic));
  EXPECT_TRUE(kinds.contains(ViolationKind::kCrossLayer));
}

TEST(Mdd, CountEqualsEnumerationOnRandom) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto r = oracle::random_mdd(rng);
    const Mdd red = r.mdd.reduce();
    std::size_t n = 0;
    red.enumerate(std::nullopt, [&](auto) { ++n; });
    EXPECT_EQ(red.count_paths(), n);
  }
}

TEST(Mdd, CountBeyondSixtyFourBits) {
  // one node per layer; layer i offers 2 + i % 3 labels
  const std::size_t depth = 60;
  Mdd m(depth);
  std::vector<LabelId> ids;
  for (int l = 0; l < 4; ++l) ids.push_back(m.labels().intern("v" + std::to_string(l)));
  NodeId prev = m.root();
  SolutionCount product = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    const NodeId next = i + 1 == depth ? m.terminal() : m.add_node(static_cast<std::uint32_t>(i + 1));
    const std::size_t k = 2 + i % 3;
    for (std::size_t l = 0; l < k; ++l) m.add_arc(prev, ids[l], next);
    product *= k;
    prev = next;
  }
  EXPECT_GT(product, SolutionCount(std::numeric_limits<std::uint64_t>::max()));
  EXPECT_EQ(m.count_paths(), product);
  EXPECT_EQ(m.reduce().count_paths(), product);
}

TEST(Mdd, IntersectMatchesSetIntersection) {
  std::mt19937_64 rng(5);
  int compared = 0;
  while (compared < 100) {
    auto a = oracle::random_mdd(rng, 2000);
    auto b = oracle::random_mdd(rng, 2000);
    if (a.mdd.depth() != b.mdd.depth()) continue;
    std::set<std::vector<std::string>> expect;
    std::set_intersection(a.paths.begin(), a.paths.end(), b.paths.begin(), b.paths.end(),
                          std::inserter(expect, expect.end()));
    const Mdd c = intersect(a.mdd, b.mdd);
    EXPECT_EQ(path_set(c), expect);
    EXPECT_TRUE(validate(c).empty() || expect.empty());
    ++compared;
  }
}

TEST(Mdd, IntersectDepthMismatchThrows) {
  EXPECT_THROW(intersect(Mdd(2), Mdd(3)), ArityError);
}

TEST(Mdd, SumMddMatchesBruteForce) {
  const std::vector<std::vector<std::int64_t>> domains{{1, 3, 7}, {0, 2, 4}, {2, 3, 4}};
  const Mdd m = build_sum_mdd(domains, 5, 9);
  std::set<std::vector<std::string>> expect;
  for (auto x : domains[0])
    for (auto y : domains[1])
      for (auto z : domains[2])
        if (x + y + z >= 5 && x + y + z <= 9) {
          expect.insert({std::to_string(x), std::to_string(y), std::to_string(z)});
        }
  EXPECT_EQ(path_set(m), expect);
  EXPECT_TRUE(expect.contains({"7", "0", "2"}));
  EXPECT_TRUE(validate(m).empty());
}

TEST(Mdd, SumMddEmptyRange) {
  EXPECT_TRUE(build_sum_mdd({{1, 2}, {1, 2}}, 10, 20).empty());
  EXPECT_TRUE(build_sum_mdd({{1, 2}, {1, 2}}, 3, 2).empty());
}

TEST(Mdd, SaveLoadRoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = oracle::random_mdd(rng);
    const Mdd red = r.mdd.reduce();
    std::stringstream s;
    save_mdd(red, s);
    const Mdd back = load_mdd(s);
    EXPECT_EQ(path_set(back), r.paths);
    EXPECT_EQ(dump(back), dump(red));
  }
}

TEST(Mdd, LoadRejectsGarbage) {
  std::stringstream s("not an mdd\n");
  EXPECT_THROW(load_mdd(s), FormatError);
}

TEST(Mdd, RelabelOntoSharedTable) {
  Mdd m(2);
  m.insert({"x", "y"});
  auto other = std::make_shared<LabelTable>();
  other->intern("y");
  const Mdd r = m.relabel(other);
  EXPECT_EQ(r.label_table(), other);
  EXPECT_EQ(path_set(r), path_set(m));
}
