#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stablefair/cli.hpp"
#include "stablefair/common.hpp"
#include "stablefair/config.hpp"
#include "stablefair/csv.hpp"
#include "stablefair/sweep.hpp"

using namespace stablefair;
namespace fs = std::filesystem;

namespace {

// Unique scratch directory per process so parallel ctest runs never collide.
fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("stablefair_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"stablefair"};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim() != b.dim() || a.num_groups() != b.num_groups()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].z != b[i].z || a[i].y != b[i].y || a[i].x != b[i].x) return false;
  }
  return true;
}

const char* kSmallSweepConfig = R"(# exercise every section
[data]
source = synthetic
n = 60
dim = 2
minority_frac = 0.5
separation = 0.4
noise = 0.2

[model]
loss = logistic
kernel = linear
constraint = none
tol = 1e-5

[sweep]
lambdas = 0, 0.01
reps = 2
test_frac = 0.25
train_frac = 0.75
probes = 1
seed = 7
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("csv loading maps labels and sensitive tokens") {
  const auto path = write_file("basic.csv",
                               "f1,f2,group,label\n"
                               "0.5,1.25,M,1\n"
                               "-0.25,0.75,F,0\n"
                               "1.5,-0.5,M,1\n");
  CsvSchema schema;
  schema.feature_columns = {"f1", "f2"};
  auto data = load_csv(path.string(), schema);
  REQUIRE(data.size() == 3);
  CHECK(data.dim() == 2);
  CHECK(data.num_groups() == 2);
  CHECK(data[0].x[0] == 0.5);
  CHECK(data[0].x[1] == 1.25);
  CHECK(data[0].z == 0);  // M seen first
  CHECK(data[0].y == 1);
  CHECK(data[1].z == 1);  // F second
  CHECK(data[1].y == -1);  // label 0 maps to -1
  CHECK(data[2].z == 0);

  SUBCASE("columns are found by name, not position") {
    const auto shuffled = write_file("shuffled.csv",
                                     "label,f2,group,f1\n"
                                     "1,1.25,M,0.5\n"
                                     "0,0.75,F,-0.25\n"
                                     "1,-0.5,M,1.5\n");
    auto reordered = load_csv(shuffled.string(), schema);
    CHECK(datasets_equal(reordered, data));
  }

  SUBCASE("plus-minus-one labels load unchanged") {
    const auto pm = write_file("pm.csv",
                               "f1,f2,group,label\n"
                               "0.5,1.25,a,-1\n"
                               "0.25,0.75,b,1\n");
    auto d = load_csv(pm.string(), schema);
    CHECK(d[0].y == -1);
    CHECK(d[1].y == 1);
  }
}

TEST_CASE("csv loading reports precise errors") {
  CsvSchema schema;
  schema.feature_columns = {"f1", "f2"};

  SUBCASE("missing column is named") {
    const auto p = write_file("missing_col.csv", "f1,group,label\n0.5,M,1\n");
    CHECK_THROWS_WITH_AS(load_csv(p.string(), schema),
                         doctest::Contains("'f2'"), DataError);
  }
  SUBCASE("unparsable cell carries its line number") {
    const auto p = write_file("bad_cell.csv",
                              "f1,f2,group,label\n"
                              "0.5,1.0,M,1\n"
                              "0.5,oops,F,0\n");
    CHECK_THROWS_WITH_AS(load_csv(p.string(), schema),
                         doctest::Contains("line 3"), DataError);
  }
  SUBCASE("labels outside 0/1 and -1/1 are rejected") {
    const auto p = write_file("bad_label.csv", "f1,f2,group,label\n0.5,1.0,M,2\n");
    CHECK_THROWS_AS(load_csv(p.string(), schema), DataError);
  }
  SUBCASE("empty sensitive values are rejected") {
    const auto p = write_file("empty_group.csv", "f1,f2,group,label\n0.5,1.0,,1\n");
    CHECK_THROWS_AS(load_csv(p.string(), schema), DataError);
  }
  SUBCASE("short rows are rejected") {
    const auto p = write_file("short_row.csv", "f1,f2,group,label\n0.5,1.0\n");
    CHECK_THROWS_AS(load_csv(p.string(), schema), DataError);
  }
  SUBCASE("missing files and empty files are rejected") {
    CHECK_THROWS_AS(load_csv((scratch_dir() / "nope.csv").string(), schema), DataError);
    const auto p = write_file("headers_only.csv", "f1,f2,group,label\n");
    CHECK_THROWS_AS(load_csv(p.string(), schema), DataError);
  }
}

TEST_CASE("write_csv then load_csv reproduces the dataset exactly") {
  CsvSchema schema;
  schema.feature_columns = {"a", "b", "c"};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<Sample> samples;
  for (int i = 0; i < 30; ++i) {
    Sample s;
    s.x = Eigen::VectorXd(3);
    s.x << u(rng), u(rng) / 3.0, u(rng) * 1e-7;  // exercise full precision
    s.z = i < 2 ? i : int(rng() % 2);            // indices first appear in order
    s.y = (rng() & 1) ? 1 : -1;
    samples.push_back(s);
  }
  Dataset data(std::move(samples), 3, 2);

  const auto p = scratch_dir() / "roundtrip.csv";
  write_csv(p.string(), data, schema);
  auto reloaded = load_csv(p.string(), schema);
  CHECK(datasets_equal(reloaded, data));

  // A second write of the reloaded data is byte-identical.
  const auto p2 = scratch_dir() / "roundtrip2.csv";
  write_csv(p2.string(), reloaded, schema);
  CHECK(read_file(p) == read_file(p2));

  SUBCASE("schema width must match the dataset") {
    CsvSchema narrow;
    narrow.feature_columns = {"a"};
    CHECK_THROWS_AS(write_csv((scratch_dir() / "bad.csv").string(), data, narrow), DataError);
  }
}

TEST_CASE("normalization rescales by the largest feature norm") {
  std::vector<Sample> samples;
  Sample s1, s2;
  s1.x = Eigen::VectorXd(2);
  s1.x << 3.0, 4.0;
  s1.z = 0;
  s1.y = 1;
  s2.x = Eigen::VectorXd(2);
  s2.x << 0.3, 0.4;
  s2.z = 1;
  s2.y = -1;
  samples = {s1, s2};
  Dataset data(std::move(samples), 2, 2);

  auto res = normalize(data);
  CHECK(res.factor == 0.2);  // 1 / 5
  double max_norm = 0.0;
  for (const auto& s : res.data.samples()) max_norm = std::max(max_norm, s.x.norm());
  CHECK(std::abs(max_norm - 1.0) <= 1e-12);
  CHECK(res.data[0].z == 0);
  CHECK(res.data[1].y == -1);

  std::vector<Sample> zeros;
  Sample z0;
  z0.x = Eigen::VectorXd::Zero(2);
  z0.z = 0;
  z0.y = 1;
  zeros.push_back(z0);
  Dataset zdata(std::move(zeros), 2, 1);
  CHECK_THROWS_AS(normalize(zdata), DataError);
}

TEST_CASE("config parsing covers sections, comments, and overrides") {
  const std::string text = R"(
# top comment
[data]
source = csv
path = /tmp/some.csv
features = age, hours , wage
sensitive = sex
label = outcome
normalize = false

[model]
loss = hinge
kernel = rbf
mode = penalty
constraint = covariance
threshold = 0.25
mu = 1.5
max_iters = 1234
tol = 1e-4

[sweep]
lambdas = 0.01, 0.02 , 0.1  # inline comment
reps = 9
test_frac = 0.3
train_frac = 0.6
probes = 4
seed = 99

[output]
dir = results
)";
  auto cfg = parse_config_text(text);
  CHECK(cfg.source == ExperimentConfig::Source::Csv);
  CHECK(cfg.path == "/tmp/some.csv");
  REQUIRE(cfg.schema.feature_columns.size() == 3);
  CHECK(cfg.schema.feature_columns[1] == "hours");
  CHECK(cfg.schema.sensitive_column == "sex");
  CHECK(cfg.schema.label_column == "outcome");
  CHECK_FALSE(cfg.normalize);
  CHECK(cfg.train.loss.kind == LossKind::Hinge);
  CHECK(cfg.train.kernel.kind == KernelKind::GaussianRBF);
  CHECK(cfg.train.mode == SolveMode::Penalty);
  CHECK(cfg.train.fairness.kind == FairnessKind::CovarianceParity);
  CHECK(cfg.train.fairness.threshold == 0.25);
  CHECK(cfg.train.fairness.mu == 1.5);
  CHECK(cfg.train.max_iters == 1234);
  CHECK(cfg.train.tol == 1e-4);
  REQUIRE(cfg.lambdas.size() == 3);
  CHECK(cfg.lambdas[2] == 0.1);
  CHECK(cfg.reps == 9);
  CHECK(cfg.test_frac == 0.3);
  CHECK(cfg.train_frac == 0.6);
  CHECK(cfg.probes == 4);
  CHECK(cfg.seed == 99);
  CHECK(cfg.out_dir == "results");
}

TEST_CASE("config parsing rejects unknown and malformed input with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("[data]\nsource = synthetic\nbogus = 1\n"),
                       doctest::Contains("'bogus'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[nope]\n"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[data]\nn 12\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n = 12\n"), ConfigError);  // key before section
  CHECK_THROWS_AS(parse_config_text("[data]\nn = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[data]\nnormalize = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[model]\nloss = perceptron\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\nlambdas = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\nlambdas = ,\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\nreps = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[sweep]\ntest_frac = 1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[data]\nsource = csv\n"), ConfigError);
}

TEST_CASE("sweep writes a deterministic report and plot") {
  auto cfg = parse_config_text(kSmallSweepConfig);
  cfg.out_dir = (scratch_dir() / "sweep_out").string();

  auto out = run_sweep(cfg);
  REQUIRE(out.rows.size() == 2);
  CHECK(out.rows[0].lambda == 0.0);
  CHECK(out.rows[1].lambda == 0.01);
  CHECK_FALSE(out.rows[0].beta_bound.has_value());  // nothing certified at 0
  CHECK(out.rows[1].beta_bound.has_value());
  CHECK(out.rows[1].beta_hat.has_value());
  REQUIRE(fs::exists(out.csv_path));
  REQUIRE(fs::exists(out.svg_path));

  const std::string report = read_file(out.csv_path);
  CHECK(report.rfind("lambda,acc_mean,acc_std,gamma_mean,gamma_std,stab,beta_hat,beta_bound\n",
                     0) == 0);
  // Two data rows after the header.
  CHECK(std::count(report.begin(), report.end(), '\n') == 3);
  // The lambda = 0 row ends with two empty cells (beta_hat, beta_bound).
  CHECK(report.find(",,\n") != std::string::npos);

  const std::string svg = read_file(out.svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  auto rerun = run_sweep(cfg);
  CHECK(read_file(rerun.csv_path) == report);
  CHECK(read_file(rerun.svg_path) == svg);
}

TEST_CASE("command line maps outcomes onto exit codes") {
  const auto good = write_file("good.conf", kSmallSweepConfig);

  SUBCASE("help exits cleanly") {
    CHECK(run({"--help"}) == 0);
  }
  SUBCASE("missing subcommand or flags fail parsing") {
    CHECK(run({}) == 1);
    CHECK(run({"train"}) == 1);          // --config required
    CHECK(run({"train", "--config"}) == 1);
  }
  SUBCASE("config problems exit 1") {
    CHECK(run({"train", "--config", (scratch_dir() / "absent.conf").string().c_str()}) == 1);
    const auto bad = write_file("bad.conf", "[data]\nbogus = 1\n");
    CHECK(run({"train", "--config", bad.string().c_str()}) == 1);
    CHECK(run({"train", "--config", good.string().c_str(), "--lambda", "-1"}) == 1);
    CHECK(run({"sweep", "--config", good.string().c_str(), "--reps", "0"}) == 1);
    // certify refuses an unregularized grid
    CHECK(run({"certify", "--config", good.string().c_str(), "--lambda", "0"}) == 1);
  }
  SUBCASE("data problems exit 2") {
    const auto conf = write_file("csv_missing.conf",
                                 "[data]\nsource = csv\npath = /nonexistent/x.csv\n"
                                 "features = a, b\n");
    CHECK(run({"train", "--config", conf.string().c_str()}) == 2);

    const auto broken_csv = write_file("broken.csv", "a,b,group,label\n1,oops,M,1\n");
    const auto conf2 = write_file("csv_broken.conf",
                                  "[data]\nsource = csv\npath = " + broken_csv.string() +
                                      "\nfeatures = a, b\n");
    CHECK(run({"train", "--config", conf2.string().c_str()}) == 2);
  }
  SUBCASE("solver non-convergence exits 3") {
    const auto conf = write_file("stall.conf",
                                 "[data]\nsource = synthetic\nn = 40\ndim = 2\n"
                                 "[model]\nloss = logistic\nkernel = linear\n"
                                 "constraint = none\nmax_iters = 1\ntol = 1e-12\n"
                                 "[sweep]\nlambdas = 0.05\n");
    CHECK(run({"train", "--config", conf.string().c_str()}) == 3);
  }
  SUBCASE("train and evaluate succeed on a healthy config") {
    CHECK(run({"train", "--config", good.string().c_str(), "--lambda", "0.05"}) == 0);
    CHECK(run({"evaluate", "--config", good.string().c_str(), "--lambda", "0.05",
               "--seed", "3"}) == 0);
  }
  SUBCASE("sweep succeeds and honors --out") {
    const auto out_dir = scratch_dir() / "cli_sweep";
    CHECK(run({"sweep", "--config", good.string().c_str(), "--out",
               out_dir.string().c_str()}) == 0);
    CHECK(fs::exists(out_dir / "report.csv"));
    CHECK(fs::exists(out_dir / "stab_vs_lambda.svg"));
  }
  SUBCASE("certify passes on a comfortably regularized model") {
    CHECK(run({"certify", "--config", good.string().c_str(), "--lambda", "0.1",
               "--reps", "1"}) == 0);
  }
}

}  // TEST_SUITE
