#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvssl/graph_learner.hpp"
#include "bvssl/mixed_latent.hpp"
#include "bvssl/pipeline.hpp"
#include "bvssl/structured_vs.hpp"

namespace bvssl {

/// Everything a CLI run needs. Serialized as flat `key = value` lines.
struct RunConfig {
  std::uint64_t seed = 1;
  int iterations = 10000;
  int burn_in = 3000;
  int thin = 1;
  int n_mc = 5000;
  ShrinkageHypers shrinkage;
  VSHypers vs;
  double kappa = 50.0;
  double absence_kappa = 0.0;
  double fdr_alpha = 0.2;
  std::size_t max_cliques = 100000;
  std::size_t max_clique_size = 0;
  int platforms = 1;

  std::string out = "out";
  std::string data;
  std::string schema;
  std::string prior;
  std::string test;

  std::string sim_case = "Ia";
  int sim_p = 24;
  int n_train = 100;
  int n_test = 100;
  int replicates = 5;
  std::string prior_mode = "none";
  std::string method = "bvs-sl";
  int misspecified_edges = 0;
  int threads = 1;

  void validate() const;
  PipelineConfig pipeline_config() const;

  bool operator==(const RunConfig&) const;
};

/// Parses config text. Relative paths are resolved against `base_dir`
/// (made absolute). Unknown keys and malformed values throw Error(validation).
RunConfig parse_config(const std::string& text, const std::string& base_dir = "",
                       RunConfig defaults = {});
RunConfig load_config(const std::string& path, RunConfig defaults = {});
std::string dump_config(const RunConfig& config);

/// Applies a single `key`, `value` pair (same rules as a config line).
void set_config_value(RunConfig& config, const std::string& key, const std::string& value,
                      const std::string& base_dir = "");

/// Shortest text that parses back to the same double (at most 17 digits).
std::string format_double(double x);
double parse_double(const std::string& text, const std::string& what);

struct SchemaEntry {
  std::string name;
  bool response = false;
  ColumnKind kind = ColumnKind::continuous;
  int levels = 0;
  /// Code written for level 1 (1 for `ordinal:M`, 0 for `ordinal:M:0`).
  int base = 1;
  /// Level labels for `ordinal:a|b|c`; empty for numeric codes.
  std::vector<std::string> labels;
};

/// One line per column: `name, kind` with kind continuous | response |
/// ordinal:M | ordinal:M:0 | ordinal:label1|label2|...
std::vector<SchemaEntry> parse_schema(std::istream& in, const std::string& source = "schema");
std::vector<SchemaEntry> load_schema(const std::string& path);
void write_schema(std::ostream& out, const std::vector<SchemaEntry>& schema);

struct LoadedData {
  MixedDataset data;
  std::optional<Eigen::VectorXd> response;
  std::vector<SchemaEntry> schema;
};

/// Reads a header + rows CSV against a schema. Throws Error(ingestion) naming
/// the file line and column on any problem.
LoadedData read_dataset(std::istream& csv, const std::vector<SchemaEntry>& schema,
                        const std::string& source = "data");
LoadedData load_dataset(const std::string& csv_path, const std::string& schema_path);

/// Writes values in the schema's coding; read_dataset of the output
/// reproduces the dataset bit for bit.
void write_dataset(std::ostream& out, const LoadedData& data);
void write_dataset(const std::string& path, const LoadedData& data);
/// Schema entries describing `data` (+ a trailing response column named `y`).
std::vector<SchemaEntry> schema_for(const MixedDataset& data, bool with_response, int base = 1);

/// Edge list `i j [kappa]` (1-based), `#` comments. Listed edges get a0=1 and
/// their own kappa (default `default_kappa`); the rest get `absence_kappa`.
/// Throws Error(format) on self-loops, bad indices and conflicting duplicates.
PriorGraph read_prior_graph(std::istream& in, int p, double default_kappa, double absence_kappa = 0.0,
                            const std::string& source = "prior");
PriorGraph load_prior_graph(const std::string& path, int p, double default_kappa,
                            double absence_kappa = 0.0);

/// Symmetric 0/1 adjacency from either an `i j [...]` edge list or an
/// edges.csv with an `included` column.
Eigen::MatrixXi load_adjacency(const std::string& path, int p);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bvssl
