#include <doctest.h>

#include <vector>

#include "bvssl/cliques.hpp"
#include "bvssl/error.hpp"
#include "bvssl/random.hpp"
#include "oracles/oracles.hpp"

using namespace bvssl;

namespace {

Eigen::MatrixXi graph(int p, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(p, p);
  for (auto [i, j] : edges) a(i, j) = a(j, i) = 1;
  return a;
}

using Cliques = std::vector<std::vector<int>>;

}  // namespace

TEST_CASE("triangle with a pendant vertex") {
  const CliqueSet s = maximal_cliques(graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}));
  CHECK(s.cliques == Cliques{{0, 1, 2}, {2, 3}});
  CHECK(s.node_index[2] == std::vector<int>{0, 1});
  CHECK(s.node_index[3] == std::vector<int>{1});
}

TEST_CASE("empty graph gives singletons and complete graph one clique") {
  CHECK(maximal_cliques(Eigen::MatrixXi::Zero(3, 3)).cliques == Cliques{{0}, {1}, {2}});
  Eigen::MatrixXi k5 = Eigen::MatrixXi::Ones(5, 5);
  k5.diagonal().setZero();
  CHECK(maximal_cliques(k5).cliques == Cliques{{0, 1, 2, 3, 4}});
}

TEST_CASE("four-cycle has four edge cliques") {
  CHECK(maximal_cliques(graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}})).cliques ==
        Cliques{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
}

TEST_CASE("maximal cliques agree with brute-force enumeration on random graphs") {
  Rng rng(17);
  for (int rep = 0; rep < 150; ++rep) {
    const int p = 1 + static_cast<int>(rng.uniform() * 15);
    const double density = rng.uniform();
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (rng.uniform() < density) a(i, j) = a(j, i) = 1;
    const CliqueSet s = maximal_cliques(a);
    REQUIRE(s.cliques == oracle::brute_force_cliques(a));
    // Every node is covered and the inverse index round-trips.
    REQUIRE(s.node_index.size() == static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      REQUIRE(!s.node_index[static_cast<std::size_t>(j)].empty());
      for (int c : s.node_index[static_cast<std::size_t>(j)]) {
        const auto& members = s.cliques[static_cast<std::size_t>(c)];
        REQUIRE(std::find(members.begin(), members.end(), j) != members.end());
      }
    }
    for (std::size_t c = 0; c < s.q(); ++c) {
      for (int j : s.cliques[c]) {
        const auto& idx = s.node_index[static_cast<std::size_t>(j)];
        REQUIRE(std::find(idx.begin(), idx.end(), static_cast<int>(c)) != idx.end());
      }
    }
  }
}

TEST_CASE("inverse index reports uncovered nodes") {
  try {
    node_clique_index({{0, 1}}, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::coverage);
  }
  CHECK_THROWS_AS(node_clique_index({{0, 5}}, 3), Error);
}

TEST_CASE("malformed adjacency is rejected") {
  Eigen::MatrixXi a = graph(3, {{0, 1}});
  a(2, 2) = 1;
  CHECK_THROWS_AS(maximal_cliques(a), Error);
  a(2, 2) = 0;
  a(0, 2) = 1;
  CHECK_THROWS_AS(maximal_cliques(a), Error);
}

TEST_CASE("clique limits raise a density error") {
  // Complete multipartite graph K_{3,3,3,3}: 81 maximal cliques of size 4.
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      if (i / 3 != j / 3) a(i, j) = 1;
  CHECK(maximal_cliques(a).q() == 81);
  CliqueLimits count;
  count.max_count = 80;
  try {
    maximal_cliques(a, count);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::graph_too_dense);
  }
  CliqueLimits size;
  size.max_size = 3;
  CHECK_THROWS_AS(maximal_cliques(a, size), Error);
  size.max_size = 4;
  CHECK(maximal_cliques(a, size).q() == 81);
}

TEST_CASE("platform expansion examples") {
  const Eigen::MatrixXi gene = graph(2, {{0, 1}});
  const Eigen::MatrixXi e = expand_prior_graph(gene, 2);
  // Nodes: (g0,d0)=0, (g0,d1)=1, (g1,d0)=2, (g1,d1)=3.
  CHECK(e == graph(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}}));
  CHECK(expand_prior_graph(gene, 1) == gene);
  const Eigen::MatrixXi lone = expand_prior_graph(Eigen::MatrixXi::Zero(2, 2), 3);
  CHECK(maximal_cliques(lone).cliques == Cliques{{0, 1, 2}, {3, 4, 5}});
  CHECK_THROWS_AS(expand_prior_graph(gene, 0), Error);
}
