#include "bvssl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "bvssl/error.hpp"

namespace bvssl {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(trim(field));
  return out;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

template <typename Int>
Int parse_int(const std::string& text, const std::string& what) {
  Int v{};
  const auto s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::validation, what + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::string resolve_path(const std::string& value, const std::string& base_dir) {
  if (value.empty()) return value;
  fs::path p(value);
  if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
  return (fs::absolute(base_dir) / p).lexically_normal().string();
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  bool path = false;
};

#define BVSSL_DOUBLE(name, member)                                                              \
  Field{name, [](RunConfig& c, const std::string& v, const std::string&) { c.member = parse_double(v, name); }, \
        [](const RunConfig& c) { return format_double(c.member); }}
#define BVSSL_INT(name, member, type)                                                           \
  Field{name, [](RunConfig& c, const std::string& v, const std::string&) { c.member = parse_int<type>(v, name); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }}
#define BVSSL_PATH(name, member)                                                                \
  Field{name, [](RunConfig& c, const std::string& v, const std::string& base) { c.member = resolve_path(v, base); }, \
        [](const RunConfig& c) { return c.member; }, true}
#define BVSSL_TEXT(name, member)                                                                \
  Field{name, [](RunConfig& c, const std::string& v, const std::string&) { c.member = v; }, \
        [](const RunConfig& c) { return c.member; }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      BVSSL_INT("seed", seed, std::uint64_t),
      BVSSL_INT("iterations", iterations, int),
      BVSSL_INT("burn_in", burn_in, int),
      BVSSL_INT("thin", thin, int),
      BVSSL_INT("n_mc", n_mc, int),
      BVSSL_DOUBLE("a_lambda", shrinkage.a_lambda),
      BVSSL_DOUBLE("b_lambda", shrinkage.b_lambda),
      BVSSL_DOUBLE("a_p", shrinkage.a_p),
      BVSSL_DOUBLE("b_p", shrinkage.b_p),
      BVSSL_DOUBLE("lambda_diag", shrinkage.lambda_diag),
      BVSSL_DOUBLE("a", vs.a),
      BVSSL_DOUBLE("a_pi", vs.a_pi),
      BVSSL_DOUBLE("b_pi", vs.b_pi),
      BVSSL_DOUBLE("a_eta", vs.a_eta),
      BVSSL_DOUBLE("b_eta", vs.b_eta),
      BVSSL_INT("grid_points", vs.grid_points, int),
      BVSSL_DOUBLE("grid_min", vs.grid_min),
      BVSSL_DOUBLE("grid_max", vs.grid_max),
      BVSSL_DOUBLE("kappa", kappa),
      BVSSL_DOUBLE("absence_kappa", absence_kappa),
      BVSSL_DOUBLE("fdr_alpha", fdr_alpha),
      BVSSL_INT("max_cliques", max_cliques, std::size_t),
      BVSSL_INT("max_clique_size", max_clique_size, std::size_t),
      BVSSL_INT("platforms", platforms, int),
      BVSSL_PATH("out", out),
      BVSSL_PATH("data", data),
      BVSSL_PATH("schema", schema),
      BVSSL_PATH("prior", prior),
      BVSSL_PATH("test", test),
      BVSSL_TEXT("case", sim_case),
      BVSSL_INT("p", sim_p, int),
      BVSSL_INT("n_train", n_train, int),
      BVSSL_INT("n_test", n_test, int),
      BVSSL_INT("replicates", replicates, int),
      BVSSL_TEXT("prior_mode", prior_mode),
      BVSSL_TEXT("method", method),
      BVSSL_INT("misspecified_edges", misspecified_edges, int),
      BVSSL_INT("threads", threads, int),
  };
  return table;
}

#undef BVSSL_DOUBLE
#undef BVSSL_INT
#undef BVSSL_PATH
#undef BVSSL_TEXT

Error ingestion_error(const std::string& source, std::size_t line, const std::string& column,
                      const std::string& message) {
  std::string where = source + " line " + std::to_string(line);
  if (!column.empty()) where += ", column '" + column + "'";
  return Error(ErrorKind::ingestion, where + ": " + message);
}

std::ifstream open_input(const std::string& path, ErrorKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(kind, "cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error(ErrorKind::format, "cannot format number");
  return std::string(buf, ptr);
}

double parse_double(const std::string& text, const std::string& what) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::validation, what + ": expected a number, got '" + text + "'");
  }
  return v;
}

void RunConfig::validate() const {
  if (iterations < 1) throw Error(ErrorKind::validation, "iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw Error(ErrorKind::validation, "burn_in must satisfy 0 <= burn_in < iterations");
  }
  if (thin < 1) throw Error(ErrorKind::validation, "thin must be >= 1");
  if (n_mc < 1) throw Error(ErrorKind::validation, "n_mc must be >= 1");
  if (!(fdr_alpha >= 0.0 && fdr_alpha <= 1.0)) throw Error(ErrorKind::validation, "fdr_alpha must lie in [0, 1]");
  if (platforms < 1) throw Error(ErrorKind::validation, "platforms must be >= 1");
  if (replicates < 1) throw Error(ErrorKind::validation, "replicates must be >= 1");
  if (threads < 1) throw Error(ErrorKind::validation, "threads must be >= 1");
  if (misspecified_edges < 0) throw Error(ErrorKind::validation, "misspecified_edges must be >= 0");
  if (prior_mode != "none" && prior_mode != "truth" && prior_mode != "misspecified") {
    throw Error(ErrorKind::validation, "prior_mode must be none, truth or misspecified");
  }
  if (method != "bvs-sl" && method != "ssvs") throw Error(ErrorKind::validation, "method must be bvs-sl or ssvs");
  shrinkage.validate();
  vs.validate();
}

PipelineConfig RunConfig::pipeline_config() const {
  PipelineConfig c;
  c.shrinkage = shrinkage;
  c.vs = vs;
  c.graph.iterations = iterations;
  c.graph.burn_in = burn_in;
  c.graph.n_mc = n_mc;
  c.vs_mcmc.iterations = iterations;
  c.vs_mcmc.burn_in = burn_in;
  c.vs_mcmc.thin = thin;
  c.clique_limits.max_count = max_cliques;
  c.clique_limits.max_size = max_clique_size;
  return c;
}

bool RunConfig::operator==(const RunConfig& other) const {
  for (const Field& f : fields()) {
    if (f.get(*this) != f.get(other)) return false;
  }
  return true;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value,
                      const std::string& base_dir) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(config, trim(value), base_dir);
      return;
    }
  }
  throw Error(ErrorKind::validation, "unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir, RunConfig defaults) {
  RunConfig config = std::move(defaults);
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::validation, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(body.substr(0, eq)), body.substr(eq + 1), base_dir);
    } catch (const Error& e) {
      throw Error(ErrorKind::validation, "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  // Relative defaults are anchored the same way as explicit entries.
  if (!base_dir.empty()) {
    for (const Field& f : fields()) {
      if (f.path) f.set(config, f.get(config), base_dir);
    }
  }
  return config;
}

RunConfig load_config(const std::string& path, RunConfig defaults) {
  std::ifstream in = open_input(path, ErrorKind::validation);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), fs::absolute(path).parent_path().string(), std::move(defaults));
}

std::string dump_config(const RunConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::vector<SchemaEntry> parse_schema(std::istream& in, const std::string& source) {
  std::vector<SchemaEntry> out;
  std::size_t line_no = 0;
  int responses = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto comma = body.find(',');
    if (comma == std::string::npos) {
      throw ingestion_error(source, line_no, "", "expected 'name, kind'");
    }
    SchemaEntry e;
    e.name = trim(body.substr(0, comma));
    const std::string kind = trim(body.substr(comma + 1));
    if (e.name.empty()) throw ingestion_error(source, line_no, "", "empty column name");
    if (kind == "continuous") {
      e.kind = ColumnKind::continuous;
    } else if (kind == "response") {
      e.response = true;
      ++responses;
    } else if (kind.rfind("ordinal:", 0) == 0) {
      e.kind = ColumnKind::ordinal;
      const std::string spec = kind.substr(8);
      if (spec.find('|') != std::string::npos) {
        std::string label;
        std::istringstream labels(spec);
        while (std::getline(labels, label, '|')) e.labels.push_back(trim(label));
        e.levels = static_cast<int>(e.labels.size());
        for (std::size_t a = 0; a < e.labels.size(); ++a) {
          if (e.labels[a].empty()) throw ingestion_error(source, line_no, e.name, "empty ordinal label");
          for (std::size_t b = 0; b < a; ++b) {
            if (e.labels[a] == e.labels[b]) {
              throw ingestion_error(source, line_no, e.name, "duplicate ordinal label '" + e.labels[a] + "'");
            }
          }
        }
      } else {
        const auto colon = spec.find(':');
        try {
          e.levels = parse_int<int>(spec.substr(0, colon), "levels");
          if (colon != std::string::npos) e.base = parse_int<int>(spec.substr(colon + 1), "base");
        } catch (const Error& err) {
          throw ingestion_error(source, line_no, e.name, err.what());
        }
      }
      if (e.levels < 2) throw ingestion_error(source, line_no, e.name, "an ordinal column needs at least 2 levels");
    } else {
      throw ingestion_error(source, line_no, e.name,
                            "unknown kind '" + kind + "' (continuous, response, ordinal:M, ordinal:M:0, ordinal:a|b|c)");
    }
    for (const SchemaEntry& prev : out) {
      if (prev.name == e.name) throw ingestion_error(source, line_no, e.name, "duplicate column name");
    }
    out.push_back(std::move(e));
  }
  if (responses > 1) throw Error(ErrorKind::ingestion, source + ": more than one response column");
  if (static_cast<int>(out.size()) - responses < 1) {
    throw Error(ErrorKind::ingestion, source + ": no covariate columns");
  }
  return out;
}

std::vector<SchemaEntry> load_schema(const std::string& path) {
  std::ifstream in = open_input(path, ErrorKind::ingestion);
  return parse_schema(in, path);
}

void write_schema(std::ostream& out, const std::vector<SchemaEntry>& schema) {
  for (const SchemaEntry& e : schema) {
    out << e.name << ", ";
    if (e.response) {
      out << "response";
    } else if (e.kind == ColumnKind::continuous) {
      out << "continuous";
    } else if (!e.labels.empty()) {
      out << "ordinal:";
      for (std::size_t k = 0; k < e.labels.size(); ++k) out << (k ? "|" : "") << e.labels[k];
    } else {
      out << "ordinal:" << e.levels;
      if (e.base != 1) out << ':' << e.base;
    }
    out << '\n';
  }
}

LoadedData read_dataset(std::istream& csv, const std::vector<SchemaEntry>& schema,
                        const std::string& source) {
  std::string header_line;
  std::size_t line_no = 1;
  if (!std::getline(csv, header_line)) throw Error(ErrorKind::ingestion, source + ": empty file");
  if (header_line.rfind("\xEF\xBB\xBF", 0) == 0) header_line.erase(0, 3);
  const std::vector<std::string> header = split_csv(header_line);

  // Header column -> schema entry.
  std::vector<std::size_t> slot(header.size());
  std::vector<bool> seen(schema.size(), false);
  for (std::size_t h = 0; h < header.size(); ++h) {
    const auto it = std::find_if(schema.begin(), schema.end(),
                                 [&](const SchemaEntry& e) { return e.name == header[h]; });
    if (it == schema.end()) throw ingestion_error(source, 1, header[h], "column not in schema");
    slot[h] = static_cast<std::size_t>(it - schema.begin());
    if (seen[slot[h]]) throw ingestion_error(source, 1, header[h], "column appears twice");
    seen[slot[h]] = true;
  }
  bool has_response = false;
  std::vector<int> covariate_col(schema.size(), -1);
  std::vector<ColumnSpec> columns;
  for (std::size_t s = 0; s < schema.size(); ++s) {
    const SchemaEntry& e = schema[s];
    if (e.response) {
      has_response = seen[s];
      continue;
    }
    if (!seen[s]) throw ingestion_error(source, 1, e.name, "schema column missing from header");
    covariate_col[s] = static_cast<int>(columns.size());
    columns.push_back({e.name, e.kind, e.kind == ColumnKind::ordinal ? e.levels : 0});
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> response;
  for (std::string line; std::getline(csv, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ingestion_error(source, line_no, "", "expected " + std::to_string(header.size()) + " fields, found " +
                                                     std::to_string(fields.size()));
    }
    std::vector<double> row(columns.size());
    for (std::size_t h = 0; h < fields.size(); ++h) {
      const SchemaEntry& e = schema[slot[h]];
      const std::string& cell = fields[h];
      if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
        throw ingestion_error(source, line_no, e.name, "missing value");
      }
      double value = 0.0;
      if (e.kind == ColumnKind::ordinal && !e.response) {
        if (!e.labels.empty()) {
          const auto it = std::find(e.labels.begin(), e.labels.end(), cell);
          if (it == e.labels.end()) throw ingestion_error(source, line_no, e.name, "unknown level '" + cell + "'");
          value = static_cast<double>(it - e.labels.begin() + 1);
        } else {
          int code = 0;
          try {
            code = parse_int<int>(cell, "code");
          } catch (const Error&) {
            throw ingestion_error(source, line_no, e.name, "ordinal code '" + cell + "' is not an integer");
          }
          value = static_cast<double>(code - e.base + 1);
          if (value < 1 || value > e.levels) {
            throw ingestion_error(source, line_no, e.name,
                                  "code " + cell + " outside " + std::to_string(e.base) + ".." +
                                      std::to_string(e.base + e.levels - 1));
          }
        }
      } else {
        try {
          value = parse_double(cell, "value");
        } catch (const Error&) {
          throw ingestion_error(source, line_no, e.name, "'" + cell + "' is not a number");
        }
        if (!std::isfinite(value)) throw ingestion_error(source, line_no, e.name, "value is not finite");
      }
      if (e.response) {
        response.push_back(value);
      } else {
        row[static_cast<std::size_t>(covariate_col[slot[h]])] = value;
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ingestion, source + ": no data rows");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  LoadedData out;
  try {
    out.data = MixedDataset(std::move(values), std::move(columns));
  } catch (const Error& e) {
    throw Error(ErrorKind::ingestion, source + ": " + e.what());
  }
  if (has_response) out.response = Eigen::Map<Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(response.size()));
  out.schema = schema;
  return out;
}

LoadedData load_dataset(const std::string& csv_path, const std::string& schema_path) {
  const std::vector<SchemaEntry> schema = load_schema(schema_path);
  std::ifstream in = open_input(csv_path, ErrorKind::ingestion);
  return read_dataset(in, schema, csv_path);
}

std::vector<SchemaEntry> schema_for(const MixedDataset& data, bool with_response, int base) {
  std::vector<SchemaEntry> out;
  for (const ColumnSpec& c : data.columns()) {
    SchemaEntry e;
    e.name = c.name;
    e.kind = c.kind;
    e.levels = c.levels;
    e.base = base;
    out.push_back(e);
  }
  if (with_response) {
    SchemaEntry e;
    e.name = "y";
    e.response = true;
    out.push_back(e);
  }
  return out;
}

void write_dataset(std::ostream& out, const LoadedData& loaded) {
  const MixedDataset& d = loaded.data;
  std::vector<const SchemaEntry*> covariates;
  const SchemaEntry* response = nullptr;
  for (const SchemaEntry& e : loaded.schema) {
    if (e.response) {
      response = &e;
    } else {
      covariates.push_back(&e);
    }
  }
  if (static_cast<Eigen::Index>(covariates.size()) != d.p()) {
    throw Error(ErrorKind::format, "schema does not match the dataset's columns");
  }
  const bool write_y = response && loaded.response;
  for (std::size_t j = 0; j < covariates.size(); ++j) out << (j ? "," : "") << covariates[j]->name;
  if (write_y) out << ',' << response->name;
  out << '\n';
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index j = 0; j < d.p(); ++j) {
      const SchemaEntry& e = *covariates[static_cast<std::size_t>(j)];
      if (j) out << ',';
      const double v = d.values()(i, j);
      if (e.kind == ColumnKind::ordinal && !e.labels.empty()) {
        out << e.labels[static_cast<std::size_t>(v) - 1];
      } else if (e.kind == ColumnKind::ordinal) {
        out << static_cast<int>(v) + e.base - 1;
      } else {
        out << format_double(v);
      }
    }
    if (write_y) out << ',' << format_double((*loaded.response)[i]);
    out << '\n';
  }
}

void write_dataset(const std::string& path, const LoadedData& data) {
  std::ostringstream buf;
  write_dataset(buf, data);
  write_text_file(path, buf.str());
}

PriorGraph read_prior_graph(std::istream& in, int p, double default_kappa, double absence_kappa,
                            const std::string& source) {
  if (p < 1) throw Error(ErrorKind::format, "prior graph needs p >= 1");
  PriorGraph g = PriorGraph::from_adjacency(Eigen::MatrixXi::Zero(p, p), default_kappa, absence_kappa);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    std::string normalized = body;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    const std::vector<std::string> words = split_words(normalized);
    const std::string where = source + " line " + std::to_string(line_no) + ": ";
    if (words.size() < 2 || words.size() > 3) throw Error(ErrorKind::format, where + "expected 'i j [kappa]'");
    int i = 0;
    int j = 0;
    double kappa = default_kappa;
    try {
      i = parse_int<int>(words[0], "i");
      j = parse_int<int>(words[1], "j");
      if (words.size() == 3) kappa = parse_double(words[2], "kappa");
    } catch (const Error& e) {
      throw Error(ErrorKind::format, where + e.what());
    }
    if (i < 1 || i > p || j < 1 || j > p) {
      throw Error(ErrorKind::format, where + "index out of range 1.." + std::to_string(p));
    }
    if (i == j) throw Error(ErrorKind::format, where + "self-loop on node " + std::to_string(i));
    if (!std::isfinite(kappa)) throw Error(ErrorKind::format, where + "kappa must be finite");
    --i;
    --j;
    if (g.a0(i, j) == 1 && g.kappa(i, j) != kappa) {
      throw Error(ErrorKind::format, where + "edge " + words[0] + "-" + words[1] + " repeated with a different kappa");
    }
    g.a0(i, j) = g.a0(j, i) = 1;
    g.kappa(i, j) = g.kappa(j, i) = kappa;
  }
  return g;
}

PriorGraph load_prior_graph(const std::string& path, int p, double default_kappa, double absence_kappa) {
  std::ifstream in = open_input(path, ErrorKind::format);
  return read_prior_graph(in, p, default_kappa, absence_kappa, path);
}

Eigen::MatrixXi load_adjacency(const std::string& path, int p) {
  std::ifstream in = open_input(path, ErrorKind::format);
  std::string first;
  std::getline(in, first);
  const std::vector<std::string> header = split_csv(trim(first));
  const auto included = std::find(header.begin(), header.end(), "included");
  if (header.size() >= 2 && header[0] == "i" && header[1] == "j" && included != header.end()) {
    const auto col = static_cast<std::size_t>(included - header.begin());
    Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(p, p);
    std::size_t line_no = 1;
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (trim(line).empty()) continue;
      const std::vector<std::string> f = split_csv(line);
      const std::string where = path + " line " + std::to_string(line_no) + ": ";
      if (f.size() != header.size()) throw Error(ErrorKind::format, where + "wrong field count");
      int i = 0;
      int j = 0;
      int inc = 0;
      try {
        i = parse_int<int>(f[0], "i") - 1;
        j = parse_int<int>(f[1], "j") - 1;
        inc = parse_int<int>(f[col], "included");
      } catch (const Error& e) {
        throw Error(ErrorKind::format, where + e.what());
      }
      if (i < 0 || i >= p || j < 0 || j >= p || i == j) throw Error(ErrorKind::format, where + "bad vertex pair");
      if (inc) adj(i, j) = adj(j, i) = 1;
    }
    return adj;
  }
  in.clear();
  in.seekg(0);
  return read_prior_graph(in, p, 0.0, 0.0, path).a0;
}

void write_text_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::validation, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::validation, "write to '" + path + "' failed");
}

}  // namespace bvssl
