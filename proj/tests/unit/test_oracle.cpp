#include <random>

#include <gtest/gtest.h>

#include "sparsecut/errors.hpp"
#include "sparsecut/instances.hpp"
#include "sparsecut/oracle.hpp"
#include "test_util.hpp"

using namespace sparsecut;
using testutil::unit_graph;

namespace {

InstancePair path_edge() {
  return InstancePair(unit_graph(3, {{0, 1}, {1, 2}}), unit_graph(3, {{0, 2}}));
}

InstancePair c4_uniform() {
  return InstancePair(testutil::cycle(4), WeightedGraph(Eigen::MatrixXd::Ones(4, 4)));
}

}  // namespace

TEST(Oracle, PathAgainstEndpointDemand) {
  const OracleResult r = brute_force_opt(path_edge());
  EXPECT_DOUBLE_EQ(r.report.sigma, 0.5);
  EXPECT_EQ(r.cut.members(), std::vector<Vertex>{0});
}

TEST(Oracle, DisconnectedIsZero) {
  const InstancePair p(unit_graph(4, {{0, 1}, {2, 3}}), unit_graph(4, {{0, 3}}));
  EXPECT_EQ(brute_force_opt(p).report.sigma, 0.0);
}

TEST(Oracle, CycleAgainstUniform) {
  const OracleResult r = brute_force_opt(c4_uniform());
  EXPECT_NEAR(r.report.sigma, 1.0, 1e-15);
  // Uniform H counts self-loops, so a single vertex scores 4/3; adjacent pairs win.
  EXPECT_EQ(r.cut.members(), (std::vector<Vertex>{0, 1}));
}

TEST(Oracle, MatchesBitmaskEnumeration) {
  for (int i = 0; i < 40; ++i) {
    RandomSpec spec{4 + i % 9, 0.3 + 0.1 * (i % 4), i % 2 == 0, static_cast<std::uint64_t>(i + 1)};
    const InstancePair p = gen_random(spec);
    EXPECT_NEAR(brute_force_opt(p).report.sigma, testutil::naive_opt(p), 1e-12) << "instance " << i;
  }
}

TEST(Oracle, DominatesEveryCut) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const InstancePair p = gen_random({9, 0.4, i % 2 == 1, static_cast<std::uint64_t>(100 + i)});
    const double opt = brute_force_opt(p).report.sigma;
    for (int j = 0; j < 50; ++j) {
      std::vector<Vertex> members;
      for (int v = 0; v < p.size(); ++v)
        if (rng() & 1) members.push_back(v);
      const Cut c(p.size(), members);
      if (!c.nontrivial()) continue;
      const SparsityReport r = sparsity(p, c);
      if (r.defined()) EXPECT_GE(r.sigma, opt - 1e-12);
    }
  }
}

TEST(Oracle, AtMostOneWithoutSelfLoops) {
  for (int i = 0; i < 30; ++i) {
    const InstancePair p = gen_random({4 + i % 9, 0.5, false, static_cast<std::uint64_t>(200 + i)});
    for (int v = 0; v < p.size(); ++v) ASSERT_EQ(p.h.weight(v, v), 0.0);
    EXPECT_LE(brute_force_opt(p).report.sigma, 1.0 + 1e-12);
  }
}

TEST(Oracle, TieBreakIsLexicographic) {
  // Two disjoint edges {0,1} and {2,3}; every cut that isolates an edge has sigma 0.
  const InstancePair p(unit_graph(4, {{0, 1}, {2, 3}}), testutil::complete(4));
  const OracleResult r = brute_force_opt(p);
  EXPECT_EQ(r.report.sigma, 0.0);
  EXPECT_EQ(r.cut.members(), (std::vector<Vertex>{0, 1}));
}

TEST(Oracle, GuardAndDegenerateDemand) {
  const InstancePair big(testutil::cycle(30), testutil::complete(30));
  try {
    brute_force_opt(big);
    FAIL() << "expected guard";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("instance too large for oracle"), std::string::npos);
  }
  Eigen::MatrixXd loops = Eigen::MatrixXd::Zero(3, 3);
  loops(1, 1) = 1.0;
  const InstancePair none(testutil::cycle(3), WeightedGraph(loops));
  EXPECT_THROW(brute_force_opt(none), InputError);
}

TEST(Oracle, RaisedGuardForRankOneDemand) {
  const InstancePair p = gen_expander_clique(26, 3, 4);
  OracleOptions options;
  options.max_vertices = 26;
  const OracleResult r = brute_force_opt(p, options);
  EXPECT_GT(r.report.sigma, 0.0);
  EXPECT_TRUE(r.cut.contains(0));
}
