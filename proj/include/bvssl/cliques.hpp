#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace bvssl {

/// Maximal cliques C_1..C_q of a graph with the inverse index S^j (clique ids
/// containing node j). Node and clique ids are 0-based.
struct CliqueSet {
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> node_index;

  std::size_t q() const { return cliques.size(); }
};

struct CliqueLimits {
  std::size_t max_count = 100000;
  /// 0 means unlimited.
  std::size_t max_size = 0;
};

/// All maximal cliques by pivoting Bron-Kerbosch, sorted lexicographically.
/// Isolated nodes come out as singletons. Throws Error(graph_too_dense) when a
/// limit is exceeded.
CliqueSet maximal_cliques(const Eigen::MatrixXi& adjacency, const CliqueLimits& limits = {});

/// node -> clique ids. Throws Error(coverage) if some node is in no clique.
std::vector<std::vector<int>> node_clique_index(const std::vector<std::vector<int>>& cliques, int p);

/// Cross-platform prior adjacency over G genes x D platforms, node index
/// g * D + d (the ordering of A (x) I_D). Same-platform nodes follow the gene
/// graph; the D platform nodes of one gene form a complete clique.
Eigen::MatrixXi expand_prior_graph(const Eigen::MatrixXi& gene_adjacency, int n_platforms);

}  // namespace bvssl
