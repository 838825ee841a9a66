#include "knotworks/detection.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"

namespace knotworks {
namespace {

WaitForGraph deadlocked_and_graph() {
  Digraph w({"P1", "P2", "P3", "P4", "P5"});
  w.add_arc("P1", "P2");
  w.add_arc("P2", "P3");
  w.add_arc("P3", "P4");
  w.add_arc("P4", "P2");
  return WaitForGraph(std::move(w));
}

WaitForGraph with_uniform_condition(const Digraph& d, const WaitCondition& cond) {
  std::vector<WaitCondition> conditions(d.vertex_count(), AndCondition{});
  for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v)
    if (!d.out_neighbors(v).empty()) conditions[v] = cond;
  return WaitForGraph(d, std::move(conditions));
}

WaitForGraph or_graph(const Digraph& d) { return with_uniform_condition(d, OrCondition{}); }

// One x per non-sink vertex.
WaitForGraph xy_graph(const Digraph& d, const std::vector<int>& xs) {
  std::vector<WaitCondition> conditions(d.vertex_count(), AndCondition{});
  for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v)
    if (!d.out_neighbors(v).empty()) conditions[v] = XOutOfYCondition{xs.at(v)};
  return WaitForGraph(d, std::move(conditions));
}

TEST(Fixpoint, DeadlockFixture) {
  auto result = oracle_fixpoint(deadlocked_and_graph());
  EXPECT_EQ(result.deadlocked, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(result.relieved, (std::vector<int>{4}));
}

TEST(Fixpoint, NoArcsAllRelieved) {
  Digraph d({"A", "B", "C"});
  auto result = oracle_fixpoint(WaitForGraph(d));
  EXPECT_TRUE(result.deadlocked.empty());
  EXPECT_EQ(result.relieved.size(), 3u);
}

TEST(Fixpoint, OrderIndependentOnRandomMixedGraphs) {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 1000; ++round) {
    int n = 2 + static_cast<int>(rng() % 7);
    Digraph d = oracles::random_digraph(rng, n);
    std::vector<WaitCondition> conditions(n, AndCondition{});
    for (int v = 0; v < n; ++v) {
      int y = static_cast<int>(d.out_neighbors(v).size());
      if (y == 0) continue;
      switch (rng() % 4) {
        case 0: conditions[v] = AndCondition{}; break;
        case 1: conditions[v] = OrCondition{}; break;
        case 2: conditions[v] = XOutOfYCondition{1 + static_cast<int>(rng() % y)}; break;
        default: {
          std::vector<VertexId> out;
          for (int u : d.out_neighbors(v)) out.push_back(d.id_of(u));
          std::sort(out.begin(), out.end());
          conditions[v] = xy_to_andor(1 + static_cast<int>(rng() % y), out);
        }
      }
    }
    WaitForGraph w(d, conditions);
    auto baseline = oracle_fixpoint(w);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      for (int v = n; v > 1; --v) std::swap(order[v - 1], order[rng() % v]);
      auto shuffled = oracle_fixpoint_ordered(w, order);
      EXPECT_EQ(baseline.deadlocked, shuffled.deadlocked);
    }
  }
}

// Whenever the fixpoint reports deadlock, the graph has a directed cycle.
TEST(Fixpoint, DeadlockImpliesDirectedCycle) {
  std::mt19937_64 rng(103);
  for (int round = 0; round < 500; ++round) {
    int n = 2 + static_cast<int>(rng() % 6);
    Digraph d = oracles::random_digraph(rng, n);
    WaitForGraph w = or_graph(d);
    if (!oracle_fixpoint(w).deadlocked.empty()) {
      EXPECT_FALSE(is_acyclic(d));
    }
  }
}

TEST(DetectAnd, DeadlockFixture) {
  Verdict verdict = detect_and(deadlocked_and_graph());
  EXPECT_TRUE(verdict.deadlocked);
  EXPECT_EQ(verdict.deadlocked_set, (std::vector<int>{0, 1, 2, 3}));
  ASSERT_TRUE(std::holds_alternative<CycleWitness>(verdict.witness));
  EXPECT_EQ(std::get<CycleWitness>(verdict.witness).vertices, (std::vector<int>{1, 2, 3}));
}

TEST(DetectAnd, DagNeverDeadlocks) {
  std::mt19937_64 rng(107);
  for (int round = 0; round < 200; ++round) {
    Digraph d = oracles::random_dag(rng, 1 + static_cast<int>(rng() % 8));
    EXPECT_FALSE(detect_and(WaitForGraph(d)).deadlocked);
  }
}

TEST(DetectAnd, CyclicAndAcyclicFourVertexShapes) {
  Digraph cyclic({"A", "B", "C", "D"});
  cyclic.add_arc("A", "B");
  cyclic.add_arc("B", "C");
  cyclic.add_arc("C", "A");
  cyclic.add_arc("B", "D");
  cyclic.add_arc("D", "C");
  Verdict bad = detect_and(WaitForGraph(cyclic));
  EXPECT_TRUE(bad.deadlocked);
  EXPECT_EQ(bad.deadlocked_set.size(), 4u);

  Digraph acyclic({"A", "B", "C", "D"});
  acyclic.add_arc("A", "B");
  acyclic.add_arc("B", "C");
  acyclic.add_arc("A", "C");
  acyclic.add_arc("B", "D");
  EXPECT_FALSE(detect_and(WaitForGraph(acyclic)).deadlocked);
}

TEST(DetectAnd, RejectsForeignConditions) {
  Digraph d({"A", "B"});
  d.add_arc("A", "B");
  std::vector<WaitCondition> conditions{OrCondition{}, AndCondition{}};
  EXPECT_THROW(detect_and(WaitForGraph(d, conditions)), InputError);
}

TEST(DetectOr, PureCycleIsAKnot) {
  Digraph d({"A", "B", "C"});
  d.add_arc("A", "B");
  d.add_arc("B", "C");
  d.add_arc("C", "A");
  Verdict verdict = detect_or(or_graph(d));
  EXPECT_TRUE(verdict.deadlocked);
  ASSERT_TRUE(std::holds_alternative<KnotWitness>(verdict.witness));
  EXPECT_EQ(std::get<KnotWitness>(verdict.witness).vertices, (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(is_knot(d, std::get<KnotWitness>(verdict.witness).vertices));
}

TEST(DetectOr, CycleWithEscapeToSinkIsFine) {
  Digraph d({"A", "B", "C", "S"});
  d.add_arc("A", "B");
  d.add_arc("B", "C");
  d.add_arc("C", "A");
  d.add_arc("A", "S");
  Verdict verdict = detect_or(or_graph(d));
  EXPECT_FALSE(verdict.deadlocked);
  EXPECT_FALSE(oracles::has_knot_by_subsets(d));
}

TEST(DetectOr, MatchesSubsetOracleOnAllFourVertexGraphs) {
  int checked = 0;
  oracles::for_each_digraph(4, [&](const Digraph& d) {
    WaitForGraph w = or_graph(d);
    Verdict verdict = detect_or(w);
    EXPECT_EQ(verdict.deadlocked, oracles::has_knot_by_subsets(d));
    EXPECT_EQ(verdict.deadlocked, oracles::deadlock_by_subsets(w));
    ++checked;
    return true;
  });
  EXPECT_EQ(checked, 4096);
}

TEST(DetectXy, AndLikeSquare) {
  Digraph d({"P1", "P2", "P3", "P4"});
  d.add_arc("P1", "P2");
  d.add_arc("P2", "P3");
  d.add_arc("P3", "P4");
  d.add_arc("P4", "P1");
  Verdict verdict = detect_xy(xy_graph(d, {1, 1, 1, 1}));  // y=1, x=1 everywhere
  EXPECT_TRUE(verdict.deadlocked);
  EXPECT_EQ(verdict.deadlocked_set, (std::vector<int>{0, 1, 2, 3}));
  ASSERT_TRUE(std::holds_alternative<YxKnotWitness>(verdict.witness));
  EXPECT_TRUE(is_yx_knot(xy_graph(d, {1, 1, 1, 1}),
                         std::get<YxKnotWitness>(verdict.witness).vertices));
}

TEST(DetectXy, OrLikeSquareWithSinkEscapes) {
  Digraph d({"P1", "P2", "P3", "P4", "S"});
  d.add_arc("P1", "P2");
  d.add_arc("P2", "P3");
  d.add_arc("P3", "P4");
  d.add_arc("P4", "P1");
  d.add_arc("P1", "S");
  d.add_arc("P2", "S");
  d.add_arc("P3", "S");
  d.add_arc("P4", "S");
  // x=1 of y=2: reaching the sink suffices.
  Verdict verdict = detect_xy(xy_graph(d, {1, 1, 1, 1, 0}));
  EXPECT_FALSE(verdict.deadlocked);
}

TEST(DetectXy, MatchesSubsetOracleExhaustively) {
  // All digraphs on 3 vertices, all legal x assignments.
  oracles::for_each_digraph(3, [&](const Digraph& d) {
    std::vector<int> ys(3);
    for (int v = 0; v < 3; ++v) ys[v] = static_cast<int>(d.out_neighbors(v).size());
    std::vector<int> xs(3, 1);
    std::function<void(int)> sweep = [&](int v) {
      if (v == 3) {
        WaitForGraph w = xy_graph(d, xs);
        Verdict verdict = detect_xy(w);
        EXPECT_EQ(verdict.deadlocked, oracles::has_yx_knot_by_subsets(w));
        EXPECT_EQ(verdict.deadlocked, oracles::deadlock_by_subsets(w));
        return;
      }
      if (ys[v] == 0) {
        sweep(v + 1);
        return;
      }
      for (int x = 1; x <= ys[v]; ++x) {
        xs[v] = x;
        sweep(v + 1);
      }
    };
    sweep(0);
    return true;
  });
}

TEST(DetectAndOr, NeedsBothBranches) {
  // P2 waits for P1 and P4 together; P1 is eventually relieved through the
  // sink P3 but P4 spins on a closed two-cycle with P5.
  Digraph d({"P1", "P2", "P3", "P4", "P5"});
  d.add_arc("P1", "P3");
  d.add_arc("P2", "P1");
  d.add_arc("P2", "P4");
  d.add_arc("P4", "P5");
  d.add_arc("P5", "P4");
  std::vector<WaitCondition> conditions(5, AndCondition{});
  conditions[0] = AndOrCondition{{{"P3"}}};
  conditions[1] = AndOrCondition{{{"P1", "P4"}}};
  conditions[3] = AndOrCondition{{{"P5"}}};
  conditions[4] = AndOrCondition{{{"P4"}}};
  WaitForGraph w(d, conditions);
  Verdict verdict = detect_andor(w);
  EXPECT_TRUE(verdict.deadlocked);
  EXPECT_EQ(verdict.deadlocked_set, (std::vector<int>{1, 3, 4}));
  ASSERT_TRUE(std::holds_alternative<BKnotWitness>(verdict.witness));
  const auto& witness = std::get<BKnotWitness>(verdict.witness);
  EXPECT_EQ(witness.knot, (std::vector<int>{3, 4}));
  Digraph sub(d.vertices());
  for (auto [from, to] : witness.b_subgraph_arcs) sub.add_arc_by_index(from, to);
  EXPECT_TRUE(is_knot(sub, witness.knot));
}

TEST(DetectAndOr, SingleSubsetEverywhereEqualsAnd) {
  std::mt19937_64 rng(113);
  for (int round = 0; round < 300; ++round) {
    Digraph d = oracles::random_digraph(rng, 2 + static_cast<int>(rng() % 5));
    std::vector<WaitCondition> andor(d.vertex_count(), AndCondition{});
    for (int v = 0; v < static_cast<int>(d.vertex_count()); ++v) {
      if (d.out_neighbors(v).empty()) continue;
      std::vector<VertexId> all;
      for (int u : d.out_neighbors(v)) all.push_back(d.id_of(u));
      std::sort(all.begin(), all.end());
      andor[v] = AndOrCondition{{all}};
    }
    WaitForGraph as_andor(d, andor);
    WaitForGraph as_and(d);
    EXPECT_EQ(detect_andor(as_andor).deadlocked_set, detect_and(as_and).deadlocked_set);
  }
}

TEST(DetectAndOr, WitnessBudgetCanRunOut) {
  Digraph d({"A", "B"});
  d.add_arc("A", "B");
  d.add_arc("B", "A");
  std::vector<WaitCondition> conditions{AndOrCondition{{{"B"}}}, AndOrCondition{{{"A"}}}};
  WaitForGraph w(d, conditions);
  Verdict verdict = detect_andor(w, {0, true});
  EXPECT_TRUE(verdict.deadlocked);
  EXPECT_TRUE(std::holds_alternative<WitnessBudgetExceeded>(verdict.witness));
  Verdict skipped = detect_andor(w, {0, false});
  EXPECT_TRUE(skipped.deadlocked);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(skipped.witness));
}

TEST(DetectDxy, ConvertedVerdictAndSetMatchFixpoint) {
  Digraph d({"Pi", "Pj", "Pk", "Pl", "Pt"});
  d.add_arc("Pi", "Pj");
  d.add_arc("Pi", "Pk");
  d.add_arc("Pi", "Pl");
  d.add_arc("Pi", "Pt");
  d.add_arc("Pj", "Pk");
  d.add_arc("Pk", "Pj");
  std::vector<WaitCondition> conditions(5, AndCondition{});
  DisjXYCondition worked_pairs;
  worked_pairs.pairs.push_back({2, {"Pj", "Pk"}});
  worked_pairs.pairs.push_back({2, {"Pk", "Pl", "Pt"}});
  conditions[0] = worked_pairs;
  conditions[1] = DisjXYCondition{{{1, {"Pk"}}}};
  conditions[2] = DisjXYCondition{{{1, {"Pj"}}}};
  WaitForGraph w(d, conditions);
  Verdict verdict = detect_dxy(w);
  // Pl and Pt relieve Pi through the second pair; Pj and Pk spin forever.
  EXPECT_FALSE(std::binary_search(verdict.deadlocked_set.begin(),
                                  verdict.deadlocked_set.end(), 0));
  EXPECT_EQ(verdict.deadlocked_set, (std::vector<int>{1, 2}));
  EXPECT_EQ(oracle_fixpoint(w).deadlocked, verdict.deadlocked_set);
}

TEST(DetectDxy, PureAndCycleDeadlocks) {
  Digraph d({"A", "B"});
  d.add_arc("A", "B");
  d.add_arc("B", "A");
  std::vector<WaitCondition> conditions{DisjXYCondition{{{1, {"B"}}}},
                                        DisjXYCondition{{{1, {"A"}}}}};
  EXPECT_TRUE(detect_dxy(WaitForGraph(d, conditions)).deadlocked);
}

// Randomized cross-checks at a size the exhaustive sweeps cannot reach:
// every structural verdict equals the fixpoint verdict.
TEST(Detectors, AgreeWithFixpointOnRandomGraphsUpToSeven) {
  std::mt19937_64 rng(131);
  for (int round = 0; round < 400; ++round) {
    int n = 2 + static_cast<int>(rng() % 6);
    Digraph d = oracles::random_digraph(rng, n);
    bool fixpoint_and = !oracle_fixpoint(WaitForGraph{Digraph(d)}).deadlocked.empty();
    EXPECT_EQ(detect_and(WaitForGraph{Digraph(d)}).deadlocked, fixpoint_and);
    WaitForGraph as_or = or_graph(d);
    EXPECT_EQ(detect_or(as_or).deadlocked,
              !oracle_fixpoint(as_or).deadlocked.empty());
    // Random legal x per vertex.
    std::vector<int> xs(n, 1);
    for (int v = 0; v < n; ++v) {
      int y = static_cast<int>(d.out_neighbors(v).size());
      if (y > 0) xs[v] = 1 + static_cast<int>(rng() % y);
    }
    WaitForGraph as_xy = xy_graph(d, xs);
    EXPECT_EQ(detect_xy(as_xy).deadlocked,
              !oracle_fixpoint(as_xy).deadlocked.empty());
    // Random antichain covers with up to two subsets, and their disjunctive
    // counterparts.
    std::vector<WaitCondition> andor(n, AndCondition{});
    std::vector<WaitCondition> dxy(n, AndCondition{});
    for (int v = 0; v < n; ++v) {
      if (d.out_neighbors(v).empty()) continue;
      std::vector<VertexId> out;
      for (int u : d.out_neighbors(v)) out.push_back(d.id_of(u));
      std::sort(out.begin(), out.end());
      AndOrCondition family;
      if (out.size() >= 2 && rng() % 2) {
        std::size_t split = 1 + rng() % (out.size() - 1);
        std::vector<VertexId> left(out.begin(), out.begin() + split);
        std::vector<VertexId> right(out.begin() + split, out.end());
        right.push_back(out[rng() % split]);  // overlap keeps it an antichain
        family.subsets = {make_vertex_set(left), make_vertex_set(right)};
        std::sort(family.subsets.begin(), family.subsets.end());
        if (family.subsets[0] == family.subsets[1] ||
            std::includes(family.subsets[1].begin(), family.subsets[1].end(),
                          family.subsets[0].begin(), family.subsets[0].end()))
          family.subsets = {out};
      } else {
        family.subsets = {out};
      }
      andor[v] = family;
      dxy[v] = andor_to_dxy(family, out);
    }
    WaitForGraph as_andor{Digraph(d), andor};
    Verdict andor_verdict = detect_andor(as_andor);
    EXPECT_EQ(andor_verdict.deadlocked,
              !oracle_fixpoint(as_andor).deadlocked.empty());
    WaitForGraph as_dxy{Digraph(d), dxy};
    Verdict dxy_verdict = detect_dxy(as_dxy);
    EXPECT_EQ(dxy_verdict.deadlocked, andor_verdict.deadlocked);
    EXPECT_EQ(dxy_verdict.deadlocked_set, andor_verdict.deadlocked_set);
  }
}

// The pruning loop deletes smallest-index vertices first, but deletion is
// monotone, so any order lands on the same maximal set; compare against a
// largest-first reimplementation.
TEST(DetectXy, PruningOrderDoesNotMatter) {
  std::mt19937_64 rng(137);
  for (int round = 0; round < 300; ++round) {
    int n = 2 + static_cast<int>(rng() % 5);
    Digraph d = oracles::random_digraph(rng, n);
    std::vector<int> xs(n, 1);
    for (int v = 0; v < n; ++v) {
      int y = static_cast<int>(d.out_neighbors(v).size());
      if (y > 0) xs[v] = 1 + static_cast<int>(rng() % y);
    }
    WaitForGraph w = xy_graph(d, xs);
    Verdict verdict = detect_xy(w);

    std::vector<char> in_set(n, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v = n - 1; v >= 0; --v) {  // reversed processing order
        if (!in_set[v]) continue;
        if (w.is_sink(v)) {
          in_set[v] = 0;
          changed = true;
          continue;
        }
        int inside = 0;
        for (int u : d.out_neighbors(v)) inside += in_set[u];
        int slack = static_cast<int>(w.out_set(v).size()) - xs[v];
        if (inside <= slack) {
          in_set[v] = 0;
          changed = true;
        }
      }
    }
    std::vector<int> reversed_result;
    for (int v = 0; v < n; ++v)
      if (in_set[v]) reversed_result.push_back(v);
    EXPECT_EQ(verdict.deadlocked_set, reversed_result);
  }
}

// Removing an arc can only shrink the AND-model deadlocked set.
TEST(Monotonicity, AndArcRemovalNeverCreatesDeadlock) {
  std::mt19937_64 rng(127);
  for (int round = 0; round < 300; ++round) {
    Digraph d = oracles::random_digraph(rng, 2 + static_cast<int>(rng() % 5));
    if (d.arc_count() == 0) continue;
    auto full = detect_and(WaitForGraph(d)).deadlocked_set;
    std::size_t drop = rng() % d.arc_count();
    Digraph smaller(d.vertices());
    for (std::size_t a = 0; a < d.arc_count(); ++a)
      if (a != drop) smaller.add_arc_by_index(d.arcs()[a].first, d.arcs()[a].second);
    auto reduced = detect_and(WaitForGraph(smaller)).deadlocked_set;
    EXPECT_TRUE(std::includes(full.begin(), full.end(), reduced.begin(), reduced.end()));
  }
}

}  // namespace
}  // namespace knotworks
