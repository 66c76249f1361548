#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fidsus/csv.hpp"
#include "fidsus/error.hpp"
#include "fidsus/reproduce.hpp"
#include "fidsus/sweep.hpp"

using namespace fidsus;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("fidsus_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run cli(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = env + " " + FIDSUS_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  for (double v : {1.0 / 3.0, 2.0 / 3.0 * 1e12, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("CSV round trip and atomic write") {
  CsvTable t{{"a", "b", "c"}, {{"1", "x", ""}, {"2", "y", "3"}}};
  std::istringstream in(to_csv_string(t));
  const CsvTable back = read_csv(in);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("c") == 2);
  CHECK_THROWS_AS(back.column("zzz"), Error);

  const fs::path p = scratch() / "t.csv";
  write_file_atomically(p, to_csv_string(t));
  CHECK(slurp(p) == to_csv_string(t));
  CHECK_FALSE(fs::exists(scratch() / "t.csv.partial"));
}

TEST_CASE("coupling grids") {
  CHECK(CouplingGrid{0.25, 0.75, 2, false}.values() == std::vector<double>{0.25, 0.75});
  const auto lg = CouplingGrid{1e-3, 1e-1, 3, true}.values();
  CHECK(lg[1] == doctest::Approx(1e-2));
  CHECK(CouplingGrid{0.4, 9.0, 1, false}.values() == std::vector<double>{0.4});
  CHECK_THROWS_AS((CouplingGrid{0.0, 1.0, 3, true}.values()), Error);
  CHECK_THROWS_AS((CouplingGrid{0.0, 1.0, 0, false}.values()), Error);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.grid = {0.25, 0.75, 2, false};
  CHECK_THROWS_AS(c.validate(), Error);  // no sizes
  c.sizes = {5};
  CHECK_NOTHROW(c.validate());
  c.model = Model::Lmg;
  c.method = SweepMethod::ClosedForm;
  CHECK_THROWS_AS(c.validate(), Error);
  c.model = Model::Kitaev;
  c.method = SweepMethod::Spectral;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config text parsing") {
  RunConfig c;
  const auto keys = apply_config_text(R"(# a sweep
model = lmg
start = 0.5   # trailing comment
stop = 1.5
count = 3
log = false
sizes = 4, 8,16
method = overlap
gamma = 0.25
workers = 2
extended = true
)", c);
  CHECK(keys.size() == 10);
  CHECK(c.model == Model::Lmg);
  CHECK(c.grid.count == 3);
  CHECK(c.sizes == std::vector<int>{4, 8, 16});
  CHECK(c.method == SweepMethod::Overlap);
  CHECK(c.gamma == 0.25);
  CHECK(c.workers == 2);
  CHECK(c.extended);
  auto kind_of = [](const std::string& text) {
    RunConfig r;
    try {
      apply_config_text(text, r);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::NoConvergence;
  };
  CHECK(kind_of("bogus = 1") == ErrorKind::ConfigError);
  CHECK(kind_of("count = 2.5") == ErrorKind::ConfigError);
  CHECK(kind_of("model") == ErrorKind::ConfigError);
  CHECK(kind_of("model = ktm") == ErrorKind::UnsupportedModel);
}

TEST_CASE("kitaev sweep: four positive rows sorted by (size, lambda)") {
  RunConfig c;
  c.model = Model::Kitaev;
  c.grid = {0.75, 0.25, 2, false};
  c.sizes = {401, 201};
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].size == 201);
  CHECK(rows[0].lambda == 0.25);
  CHECK(rows[1].lambda == 0.75);
  CHECK(rows[3].size == 401);
  for (const auto& r : rows) {
    CHECK(r.chi_f > 0.0);
    CHECK(r.d_a_used == 2.0);
    CHECK(r.chi_f_scaled == doctest::Approx(r.chi_f / (double(r.size) * r.size)));
    CHECK_FALSE(r.wall_time_ms.has_value());
  }
  const CsvTable t = sweep_table(rows);
  CHECK(t.header == std::vector<std::string>{"model", "jx", "jy", "jz", "lambda", "size", "chi_f", "chi_f_scaled",
                                             "method", "d_a_used", "wall_time_ms"});
  c.workers = 3;
  CHECK(to_csv_string(sweep_table(run_sweep(c))) == to_csv_string(t));
}

TEST_CASE("lmg N = 4, h = 2: spectral and overlap rows agree") {
  RunConfig c;
  c.model = Model::Lmg;
  c.grid = {2.0, 2.0, 1, false};
  c.sizes = {4};
  c.method = SweepMethod::Spectral;
  const double s = run_sweep(c).at(0).chi_f;
  c.method = SweepMethod::Overlap;
  const double o = run_sweep(c).at(0).chi_f;
  CHECK(std::abs(s - o) <= 1e-5 * s);
}

TEST_CASE("ising sweep uses ED or free fermions") {
  RunConfig c;
  c.model = Model::Ising;
  c.grid = {0.5, 1.5, 3, false};
  c.sizes = {8};
  c.method = SweepMethod::ClosedForm;
  const auto ff = run_sweep(c);
  c.method = SweepMethod::Correlator;
  const auto ed = run_sweep(c);
  for (int i = 0; i < 3; ++i) CHECK(ed[i].chi_f == doctest::Approx(ff[i].chi_f).epsilon(1e-7));
  CHECK(ff[0].d_a_used == 1.0);
}

TEST_CASE("parallel_map keeps order and rethrows") {
  const auto sq = parallel_map(50, 4, [](std::size_t i) { return int(i * i); });
  for (int i = 0; i < 50; ++i) CHECK(sq[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw Error(ErrorKind::PoleOnGrid, "x");
                                 return 0;
                               }),
                  Error);
}

TEST_CASE("reproduce target parsing") {
  CHECK(parse_reproduce_target("fig1_left").target == ReproduceTarget::Fig1Left);
  const auto t = parse_reproduce_target("table1:lmg");
  CHECK(t.target == ReproduceTarget::Table1);
  CHECK(t.row == "lmg");
  CHECK_THROWS_AS(parse_reproduce_target("fig2"), Error);
  ReproduceRequest ktm{ReproduceTarget::Table1, "ktm"};
  try {
    reproduce(ktm);
    FAIL("expected UnsupportedModel");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedModel);
  }
}

TEST_CASE("fig1_right report") {
  const auto rep = reproduce({ReproduceTarget::Fig1Right, "", 1, false});
  CHECK(rep.data.rows.size() == 16);
  CHECK(rep.check("kitaev.log_divergence_slope").status == CheckStatus::Reported);
  CHECK(rep.summary().find("kitaev.log_divergence_r2") != std::string::npos);
  write_report(rep, scratch() / "rep");
  for (const char* f : {"fig1_right.csv", "fig1_right.gp", "fig1_right_checks.csv", "fig1_right_summary.txt"}) {
    CHECK(fs::exists(scratch() / "rep" / f));
  }
}

TEST_CASE("CLI: compute and sweep") {
  Run r = cli("compute --model kitaev --lambda 0.75 --size 201");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("model,jx,jy,jz,lambda,size,chi_f,chi_f_scaled,method,d_a_used,wall_time_ms\nkitaev,", 0) == 0);

  const fs::path csv = scratch() / "sweep.csv";
  r = cli("sweep --model kitaev --start 0.25 --stop 0.75 --count 2 --sizes 201,401 -o " + csv.string());
  CHECK(r.code == 0);
  const CsvTable t = read_csv_file(csv);
  CHECK(t.rows.size() == 4);

  r = cli("sweep --model kitaev --start 0.25 --stop 0.75 --count 2 --sizes 201,401", "FIDSUS_WORKERS=4");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(csv));

  r = cli("sweep --model lmg --start 2 --stop 2 --count 1 --sizes 4 --method overlap");
  CHECK(r.code == 0);
  CHECK(r.out.find(",overlap,") != std::string::npos);
}

TEST_CASE("CLI: error exit codes") {
  Run r = cli("sweep --model kitaev --start 0.25 --stop 0.75 --count 2");
  CHECK(r.code == 2);
  CHECK(r.err.find("error: ConfigError:") != std::string::npos);

  const fs::path out = scratch() / "never.csv";
  r = cli("sweep --model kitaev --start 0.7 --stop 0.7 --sizes 8 -o " + out.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("InvalidParams") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
  CHECK_FALSE(fs::exists(scratch() / "never.csv.partial"));

  r = cli("compute --model kitaev --lambda 0.7 --size 4003");
  CHECK(r.code == 2);
  CHECK(r.err.find("TooLarge") != std::string::npos);

  const fs::path flat = scratch() / "flat.csv";
  {
    std::ofstream f(flat);
    f << "model,lambda,size,chi_f,chi_f_scaled\n";
    for (double y : {0.5, 0.6, 0.7}) f << "ising,1.05,64,1," << y << "\n";
  }
  r = cli("exponents " + flat.string() + " --lambda-c 1 --side above");
  CHECK(r.code == 3);
  CHECK(r.err.find("DegenerateFit") != std::string::npos);

  r = cli("reproduce table1 --row ktm");
  CHECK(r.code == 2);
  CHECK(r.err.find("UnsupportedModel") != std::string::npos);

  r = cli("frobnicate");
  CHECK(r.code == 2);
}

TEST_CASE("CLI: config file, with flags overriding it") {
  const fs::path cfg = scratch() / "run.cfg";
  std::ofstream(cfg) << "model = ising\nstart = 0.5\nstop = 1.5\ncount = 3\nsizes = 16, 32\n";
  Run r = cli("sweep --config " + cfg.string());
  CHECK(r.code == 0);
  CHECK(parse(r.out).rows.size() == 6);
  CHECK(r.out.find(",closed_form,") != std::string::npos);
  r = cli("sweep --config " + cfg.string() + " --sizes 8 --method spectral");
  CHECK(r.code == 0);
  CHECK(parse(r.out).rows.size() == 3);
  CHECK(r.out.find(",spectral,") != std::string::npos);
}

TEST_CASE("CLI: classify and exponents") {
  const fs::path csv = scratch() / "ising.csv";
  Run r = cli("sweep --model ising --start 0.5 --stop 1 --count 2 --sizes 64,128,256,512,1024,2048,4096 -o " +
              csv.string());
  REQUIRE(r.code == 0);
  r = cli("classify " + csv.string());
  CHECK(r.code == 0);
  const CsvTable k = parse(r.out);
  REQUIRE(k.rows.size() == 2);
  CHECK(k.rows[0][k.column("class")] == "1");
  CHECK(k.rows[1][k.column("class")] == "2");

  r = cli("exponents --mu 1.3333333333333333 --nu 0.6666666666666666 --d-a 0");
  CHECK(r.code == 0);
  CHECK(r.out.find("predicted_alpha,2") != std::string::npos);
  r = cli("exponents --mu 1 --nu 0 --d-a 0");
  CHECK(r.code == 2);

  const fs::path near = scratch() / "near.csv";
  r = cli("sweep --model ising --start 1.01 --stop 1.1 --count 6 --log --sizes 4096 -o " + near.string());
  REQUIRE(r.code == 0);
  r = cli("exponents " + near.string() + " --lambda-c 1 --side above");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("size,alpha,r2\n4096,", 0) == 0);
}
