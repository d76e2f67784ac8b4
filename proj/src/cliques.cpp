#include "bvssl/cliques.hpp"

#include <algorithm>

#include <boost/dynamic_bitset.hpp>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

using Bits = boost::dynamic_bitset<>;

class BronKerbosch {
 public:
  BronKerbosch(const Eigen::MatrixXi& adjacency, const CliqueLimits& limits)
      : p_(static_cast<std::size_t>(adjacency.rows())), limits_(limits) {
    neighbors_.assign(p_, Bits(p_));
    for (std::size_t i = 0; i < p_; ++i) {
      for (std::size_t j = 0; j < p_; ++j) {
        if (i != j && adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0) {
          neighbors_[i].set(j);
        }
      }
    }
  }

  std::vector<std::vector<int>> run() {
    Bits candidates(p_);
    candidates.set();
    std::vector<int> current;
    expand(current, candidates, Bits(p_));
    return std::move(found_);
  }

 private:
  void expand(std::vector<int>& current, Bits candidates, Bits excluded) {
    if (candidates.none()) {
      if (excluded.none()) emit(current);
      return;
    }
    // Pivot on the vertex of P u X with the most neighbours in P.
    const Bits pool = candidates | excluded;
    std::size_t pivot = Bits::npos;
    std::size_t best = 0;
    for (std::size_t u = pool.find_first(); u != Bits::npos; u = pool.find_next(u)) {
      const std::size_t count = (candidates & neighbors_[u]).count();
      if (pivot == Bits::npos || count > best) {
        pivot = u;
        best = count;
      }
    }
    const Bits branch = candidates - neighbors_[pivot];
    for (std::size_t v = branch.find_first(); v != Bits::npos; v = branch.find_next(v)) {
      current.push_back(static_cast<int>(v));
      expand(current, candidates & neighbors_[v], excluded & neighbors_[v]);
      current.pop_back();
      candidates.reset(v);
      excluded.set(v);
    }
  }

  void emit(const std::vector<int>& clique) {
    if (limits_.max_size != 0 && clique.size() > limits_.max_size) {
      throw Error(ErrorKind::graph_too_dense,
                  "maximal clique of size " + std::to_string(clique.size()) +
                      " exceeds the configured maximum " + std::to_string(limits_.max_size));
    }
    if (found_.size() >= limits_.max_count) {
      throw Error(ErrorKind::graph_too_dense, "more than " + std::to_string(limits_.max_count) +
                                                  " maximal cliques; graph too dense");
    }
    std::vector<int> sorted = clique;
    std::sort(sorted.begin(), sorted.end());
    found_.push_back(std::move(sorted));
  }

  std::size_t p_;
  CliqueLimits limits_;
  std::vector<Bits> neighbors_;
  std::vector<std::vector<int>> found_;
};

}  // namespace

CliqueSet maximal_cliques(const Eigen::MatrixXi& adjacency, const CliqueLimits& limits) {
  const Eigen::Index p = adjacency.rows();
  if (adjacency.cols() != p) throw Error(ErrorKind::validation, "adjacency must be square");
  for (Eigen::Index i = 0; i < p; ++i) {
    if (adjacency(i, i) != 0) throw Error(ErrorKind::validation, "adjacency has a self-loop");
    for (Eigen::Index j = i + 1; j < p; ++j) {
      if ((adjacency(i, j) != 0) != (adjacency(j, i) != 0)) {
        throw Error(ErrorKind::validation, "adjacency is not symmetric");
      }
    }
  }
  CliqueSet out;
  if (p == 0) return out;
  out.cliques = BronKerbosch(adjacency, limits).run();
  std::sort(out.cliques.begin(), out.cliques.end());
  out.node_index = node_clique_index(out.cliques, static_cast<int>(p));
  return out;
}

std::vector<std::vector<int>> node_clique_index(const std::vector<std::vector<int>>& cliques, int p) {
  std::vector<std::vector<int>> index(static_cast<std::size_t>(p));
  for (std::size_t k = 0; k < cliques.size(); ++k) {
    for (int node : cliques[k]) {
      if (node < 0 || node >= p) {
        throw Error(ErrorKind::coverage, "clique member " + std::to_string(node + 1) +
                                             " is outside 1.." + std::to_string(p));
      }
      index[static_cast<std::size_t>(node)].push_back(static_cast<int>(k));
    }
  }
  for (int j = 0; j < p; ++j) {
    if (index[static_cast<std::size_t>(j)].empty()) {
      throw Error(ErrorKind::coverage, "node " + std::to_string(j + 1) + " is in no clique");
    }
  }
  return index;
}

Eigen::MatrixXi expand_prior_graph(const Eigen::MatrixXi& gene_adjacency, int n_platforms) {
  if (n_platforms < 1) throw Error(ErrorKind::validation, "need at least one platform");
  const Eigen::Index genes = gene_adjacency.rows();
  const Eigen::Index d = n_platforms;
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(genes * d, genes * d);
  for (Eigen::Index g = 0; g < genes; ++g) {
    for (Eigen::Index h = 0; h < genes; ++h) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          const bool same_gene_cross_platform = (g == h && a != b);
          const bool same_platform_gene_edge = (g != h && a == b && gene_adjacency(g, h) != 0);
          if (same_gene_cross_platform || same_platform_gene_edge) out(g * d + a, h * d + b) = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace bvssl
