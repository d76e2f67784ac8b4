#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bvssl/error.hpp"
#include "bvssl/io.hpp"
#include "bvssl/random.hpp"

using namespace bvssl;
namespace fs = std::filesystem;

namespace {

std::vector<SchemaEntry> schema_from(const std::string& text) {
  std::istringstream in(text);
  return parse_schema(in);
}

LoadedData read_csv(const std::string& csv, const std::string& schema) {
  std::istringstream in(csv);
  return read_dataset(in, schema_from(schema));
}

std::string ingestion_message(const std::string& csv, const std::string& schema) {
  try {
    read_csv(csv, schema);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ingestion);
    CHECK(e.is_input_error());
    return e.what();
  }
  FAIL("expected an ingestion error");
  return {};
}

ErrorKind prior_error(const std::string& text, int p = 4) {
  std::istringstream in(text);
  try {
    read_prior_graph(in, p, 50.0);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::accuracy;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("doubles format to the shortest round-tripping text") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1e-300) == "-1e-300");
  Rng rng(1);
  for (int t = 0; t < 2000; ++t) {
    const double x = rng.normal() * std::pow(10.0, std::round(20.0 * rng.uniform() - 10.0));
    CHECK(parse_double(format_double(x), "x") == x);
  }
  CHECK(parse_double(format_double(std::numeric_limits<double>::denorm_min()), "x") ==
        std::numeric_limits<double>::denorm_min());
  CHECK_THROWS_AS(parse_double("1.5x", "x"), Error);
  CHECK_THROWS_AS(parse_double("", "x"), Error);
}

TEST_CASE("config text round trips through dump and parse") {
  RunConfig c;
  c.seed = 987654321987654321ULL;
  c.iterations = 1234;
  c.burn_in = 200;
  c.kappa = 0.1 + 0.2;
  c.vs.a = 3.5;
  c.shrinkage.b_lambda = 1.0 / 3.0;
  c.out = "/tmp/results";
  c.prior_mode = "truth";
  c.sim_case = "Ic";
  const RunConfig back = parse_config(dump_config(c));
  CHECK(back == c);
  CHECK(back.kappa == c.kappa);
  CHECK(back.shrinkage.b_lambda == c.shrinkage.b_lambda);
  CHECK(dump_config(back) == dump_config(c));
}

TEST_CASE("config parsing rules") {
  const RunConfig c = parse_config("# comment\nseed = 42\n\niterations=500 # trailing\nburn_in = 100\nout = res\n",
                                   "/data/run");
  CHECK(c.seed == 42);
  CHECK(c.iterations == 500);
  CHECK(fs::path(c.out) == fs::path("/data/run/res"));
  CHECK_THROWS_AS(parse_config("unknown_key = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("seed 42\n"), Error);
  CHECK_THROWS_AS(parse_config("iterations = many\n"), Error);
  CHECK_THROWS_AS(parse_config("iterations = 10\nburn_in = 10\n").validate(), Error);
  CHECK_THROWS_AS(parse_config("method = lasso\n").validate(), Error);
  RunConfig d;
  set_config_value(d, "kappa", "7.5");
  CHECK(d.kappa == 7.5);
  CHECK(d.pipeline_config().vs_mcmc.iterations == d.iterations);
}

TEST_CASE("schema kinds") {
  const auto s = schema_from(
      "# columns\nage, continuous\ngrade, ordinal:4\nstage, ordinal:3:0\nsize, ordinal:small|medium|large\noutcome, response\n");
  REQUIRE(s.size() == 5);
  CHECK(s[0].kind == ColumnKind::continuous);
  CHECK(s[1].kind == ColumnKind::ordinal);
  CHECK(s[1].levels == 4);
  CHECK(s[1].base == 1);
  CHECK(s[2].levels == 3);
  CHECK(s[2].base == 0);
  CHECK(s[3].levels == 3);
  CHECK(s[3].labels == std::vector<std::string>{"small", "medium", "large"});
  CHECK(s[4].response);
  std::ostringstream out;
  write_schema(out, s);
  const auto again = schema_from(out.str());
  REQUIRE(again.size() == 5);
  CHECK(again[3].labels == s[3].labels);
  CHECK(again[2].base == 0);
}

TEST_CASE("schema errors name the line") {
  const auto fails = [](const std::string& text, const std::string& part) {
    try {
      schema_from(text);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ingestion);
      CHECK(contains(e.what(), part));
    }
  };
  fails("a, continuous\na, continuous\n", "line 2");
  fails("a, continuous\nb, ordinal:1\n", "line 2");
  fails("a, continuous\nb, response\nc, response\n", "response");
  fails("y, response\n", "covariate");
  fails("a, banana\n", "line 1");
}

TEST_CASE("reading a mixed dataset") {
  const LoadedData d = read_csv("\xEF\xBB\xBFgrade,age,y,size\n2,1.5,3,medium\n4,-0.25,1e-3,large\n1,0,2,small\n",
                                "age, continuous\ngrade, ordinal:4\nsize, ordinal:small|medium|large\ny, response\n");
  REQUIRE(d.data.p() == 3);
  CHECK(d.data.column(0).name == "age");
  CHECK(d.data.values()(1, 0) == -0.25);
  CHECK(d.data.values()(1, 1) == 4.0);
  CHECK(d.data.values()(0, 2) == 2.0);
  REQUIRE(d.response.has_value());
  CHECK((*d.response)[1] == 1e-3);
  const LoadedData zero = read_csv("a,b\n0.5,0\n1.5,2\n", "a, continuous\nb, ordinal:3:0\n");
  CHECK(zero.data.values()(0, 1) == 1.0);
  CHECK(zero.data.values()(1, 1) == 3.0);
  CHECK_FALSE(zero.response.has_value());
}

TEST_CASE("ingestion errors cite the cell") {
  const std::string schema = "a, continuous\nb, ordinal:4\n";
  std::string m = ingestion_message("a,b\n0.5,1\n0.7,5\n", schema);
  CHECK(contains(m, "line 3"));
  CHECK(contains(m, "'b'"));
  m = ingestion_message("a,b\n0.5,1\nNA,2\n", schema);
  CHECK(contains(m, "line 3"));
  CHECK(contains(m, "missing"));
  m = ingestion_message("a,b\n,1\n", schema);
  CHECK(contains(m, "missing"));
  m = ingestion_message("a,b\n0.5,1,3\n", schema);
  CHECK(contains(m, "line 2"));
  m = ingestion_message("a,b\n0.5,1.5\n", schema);
  CHECK(contains(m, "'b'"));
  m = ingestion_message("a,b\ninf,1\n", schema);
  CHECK(contains(m, "'a'"));
  m = ingestion_message("a,c\n1,1\n", schema);
  CHECK(contains(m, "'c'"));
  m = ingestion_message("a\n1\n", schema);
  CHECK(contains(m, "'b'"));
  ingestion_message("a,b\n", schema);
}

TEST_CASE("written datasets read back bit for bit") {
  Rng rng(2);
  Eigen::MatrixXd x(40, 4);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = rng.normal() * 1e5;
    x(i, 1) = rng.normal() / 3.0;
    x(i, 2) = 1 + static_cast<int>(rng.uniform() * 5);
    x(i, 3) = 1 + static_cast<int>(rng.uniform() * 2);
    y[i] = std::exp(rng.normal());
  }
  std::vector<ColumnSpec> cols{{"u", ColumnKind::continuous, 0},
                               {"v", ColumnKind::continuous, 0},
                               {"w", ColumnKind::ordinal, 5},
                               {"z", ColumnKind::ordinal, 2}};
  for (int base : {0, 1}) {
    LoadedData d{MixedDataset(x, cols), y, {}};
    d.schema = schema_for(d.data, true, base);
    std::ostringstream csv;
    write_dataset(csv, d);
    std::istringstream in(csv.str());
    const LoadedData back = read_dataset(in, d.schema);
    CHECK(back.data.values() == x);
    REQUIRE(back.response.has_value());
    CHECK(*back.response == y);
  }
  const fs::path dir = fs::temp_directory_path() / "bvssl_io_test";
  fs::remove_all(dir);
  LoadedData d{MixedDataset(x, cols), y, {}};
  d.schema = schema_for(d.data, true);
  write_dataset((dir / "nested" / "data.csv").string(), d);
  std::ofstream((dir / "schema.txt").string()) << [&] {
    std::ostringstream s;
    write_schema(s, d.schema);
    return s.str();
  }();
  const LoadedData back = load_dataset((dir / "nested" / "data.csv").string(), (dir / "schema.txt").string());
  CHECK(back.data.values() == x);
  CHECK_THROWS_AS(load_dataset((dir / "absent.csv").string(), (dir / "schema.txt").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("prior graph edge lists") {
  std::istringstream in("# prior\n1 2 50\n2,3\n\n3 4 7.5  # strong\n2 1 50\n");
  const PriorGraph g = read_prior_graph(in, 4, 20.0, 1.0);
  CHECK(g.a0(0, 1) == 1);
  CHECK(g.a0(1, 0) == 1);
  CHECK(g.kappa(0, 1) == 50.0);
  CHECK(g.kappa(1, 2) == 20.0);
  CHECK(g.kappa(2, 3) == 7.5);
  CHECK(g.a0(0, 3) == 0);
  CHECK(g.kappa(0, 3) == 1.0);
  CHECK(g.kappa(2, 2) == 0.0);
  CHECK_NOTHROW(g.validate(ShrinkageHypers{}));
  std::istringstream empty("");
  const PriorGraph none = read_prior_graph(empty, 3, 50.0);
  CHECK(none.a0.sum() == 0);
  CHECK(prior_error("2 2\n") == ErrorKind::format);
  CHECK(prior_error("1 5\n") == ErrorKind::format);
  CHECK(prior_error("0 1\n") == ErrorKind::format);
  CHECK(prior_error("1 2 50\n2 1 10\n") == ErrorKind::format);
  CHECK(prior_error("1\n") == ErrorKind::format);
  CHECK(prior_error("1 2 x\n") == ErrorKind::format);
  CHECK(prior_error("1 2 inf\n") == ErrorKind::format);
}

TEST_CASE("adjacency from an edges table or an edge list") {
  const fs::path dir = fs::temp_directory_path() / "bvssl_adj_test";
  fs::remove_all(dir);
  write_text_file((dir / "edges.csv").string(),
                  "i,j,rho_hat,rho_ref,ratio,included\n1,2,0.5,0.2,2.5,1\n1,3,0.1,0.2,0.5,0\n2,3,0.4,0.3,1.3,1\n");
  write_text_file((dir / "list.txt").string(), "1 2\n2 3\n");
  const Eigen::MatrixXi a = load_adjacency((dir / "edges.csv").string(), 3);
  const Eigen::MatrixXi b = load_adjacency((dir / "list.txt").string(), 3);
  CHECK(a == b);
  CHECK(a(0, 1) == 1);
  CHECK(a(2, 1) == 1);
  CHECK(a(0, 2) == 0);
  write_text_file((dir / "bad.csv").string(), "i,j,included\n1,1,1\n");
  CHECK_THROWS_AS(load_adjacency((dir / "bad.csv").string(), 3), Error);
  fs::remove_all(dir);
}
