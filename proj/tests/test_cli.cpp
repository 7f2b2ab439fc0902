#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "cli.hpp"
#include "sylkit/analysis.hpp"
#include "sylkit/dense_io.hpp"
#include "sylkit/sparse.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sylkit;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("sylkit_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string out, err;
};

Run sylkit_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sylkit");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorCode::InvalidConfig) == 64);
  CHECK(cli::exit_code_for(ErrorCode::UnknownGenerator) == 64);
  CHECK(cli::exit_code_for(ErrorCode::InvalidField) == 64);
  CHECK(cli::exit_code_for(ErrorCode::ParseError) == 65);
  CHECK(cli::exit_code_for(ErrorCode::IoError) == 65);
  CHECK(cli::exit_code_for(ErrorCode::Breakdown) == 65);
  CHECK(cli::exit_code_for(ErrorCode::ReplayMismatch) == 70);
}

TEST_CASE("config parsing: comments, whitespace, overrides by later lines") {
  std::istringstream is("# desk run\n engine = sketched \n\ntol=1e-6 # inline\nk=10\nk=12\n");
  const cli::ConfigMap c = cli::parse_config(is);
  CHECK(c.size() == 3);
  CHECK(c.at("engine") == "sketched");
  CHECK(c.at("tol") == "1e-6");
  CHECK(c.at("k") == "12");
}

TEST_CASE("config parsing: malformed lines are rejected with the line number") {
  std::istringstream no_eq("tol=1e-6\nengine sketched\n");
  try {
    cli::parse_config(no_eq);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream unknown("tolerance=1e-6\n");
  CHECK_THROWS_AS(cli::parse_config(unknown), Error);
  std::istringstream empty("tol=\n");
  CHECK_THROWS_AS(cli::parse_config(empty), Error);
}

TEST_CASE("gen: convdiff2d writes an n = grid^2 operator and a manifest") {
  const fs::path dir = scratch("gen2d");
  const Run r = sylkit_cli({"gen", "convdiff2d", "--grid", "100", "--nu", "0.1", "--field", "example61_A",
                     "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto A = sparse::read_matrix_market((dir / "A.mtx").string());
  CHECK(A.n_rows() == 10000);
  CHECK(A.n_cols() == 10000);
  CHECK_FALSE(fs::exists(dir / "B.mtx"));
  CHECK(la::read_matrix_market_array((dir / "C1.mtx").string()).rows() == 10000);
  const json m = load_json(dir / "manifest.json");
  CHECK(m["nu"] == 0.1);
  CHECK(m["grid"] == 100);
  CHECK(m["seed"] == 1);
}

TEST_CASE("gen: example61 defines both operators") {
  const fs::path dir = scratch("gen61");
  REQUIRE(sylkit_cli({"gen", "example61", "--grid", "10", "--nu", "0.1", "--out", dir.string()}).code == 0);
  const auto A = sparse::read_matrix_market((dir / "A.mtx").string());
  const auto B = sparse::read_matrix_market((dir / "B.mtx").string());
  CHECK(A == sparse::gen_convdiff_2d(10, 0.1, sparse::parse_field("example61_A")));
  CHECK(B == sparse::gen_convdiff_2d(10, 0.1, sparse::parse_field("example61_B")));
}

TEST_CASE("gen: toeplitz41 round-trips the generator exactly") {
  const fs::path dir = scratch("gen41");
  REQUIRE(sylkit_cli({"gen", "toeplitz41", "--n", "30", "--out", dir.string()}).code == 0);
  CHECK(sparse::read_matrix_market((dir / "A.mtx").string()) == sparse::gen_toeplitz_ex41(30));
}

TEST_CASE("gen: usage errors") {
  const fs::path dir = scratch("genbad");
  CHECK(sylkit_cli({"gen", "convdiff2d", "--grid", "100", "--field", "example61_A", "--out",
             dir.string()})
            .code == 64);
  CHECK(sylkit_cli({"gen", "nosuch", "--out", dir.string()}).code == 64);
  CHECK(sylkit_cli({"gen", "convdiff2d", "--grid", "10", "--nu", "0.1", "--field", "swirl", "--out",
             dir.string()})
            .code == 64);
  CHECK(sylkit_cli({"gen"}).code == 64);
  CHECK(sylkit_cli({}).code == 64);
}

TEST_CASE("solve: desk-scale sketched run and the paired full run") {
  const fs::path sk = scratch("solve_sk"), full = scratch("solve_full");
  const std::vector<std::string> common = {"solve", "--problem", "example61", "--grid", "100",
                                           "--nu", "0.1", "--k", "10", "--s", "400", "--p", "10",
                                           "--tol", "1e-6"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = common;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  REQUIRE(sylkit_cli(with({"--engine", "sketched", "--out", sk.string()})).code == 0);
  REQUIRE(sylkit_cli(with({"--engine", "full", "--out", full.string()})).code == 0);
  const json a = load_json(sk / "result.json"), b = load_json(full / "result.json");
  CHECK(a["converged"] == true);
  CHECK(a["engine"] == "sketched");
  CHECK(a["mem_long_vectors"].get<int>() <= 100);
  CHECK(a["true_residual"].get<double>() <= 5e-6);
  const int d = b["d"], l = b["rank"];
  CHECK(b["mem_long_vectors"].get<int>() == 2 * (d + 1) + 2 * l);
  CHECK(b["mem_long_vectors"].get<int>() > a["mem_long_vectors"].get<int>());
  for (const fs::path& dir : {sk, full}) {
    const auto h = lines(dir / "history.csv");
    CHECK(h.front() == "d,rho,true_res,wall_s,mem_vectors");
    CHECK(h.size() > 1);
    const auto X1 = la::read_matrix_market_array((dir / "X1.mtx").string());
    CHECK(X1.rows() == 10000);
  }
  CHECK(la::read_matrix_market_array((sk / "X1.mtx").string()).cols() == a["rank"].get<std::size_t>());
}

TEST_CASE("solve: config file, flag override and byte-identical reruns") {
  const fs::path dir = scratch("solve_cfg");
  {
    std::ofstream os(dir / "run.cfg");
    os << "# small problem\nproblem=example61\ngrid=20\nnu=0.1\nengine=sketched\n"
          "k=4\ns=200\np=5\ntol=1e-3\n";
  }
  const std::string cfg = (dir / "run.cfg").string();
  REQUIRE(sylkit_cli({"solve", "--config", cfg, "--tol", "1e-6", "--no-timing", "--out",
               (dir / "a").string()})
              .code == 0);
  REQUIRE(sylkit_cli({"solve", "--config", cfg, "--tol", "1e-6", "--no-timing", "--out",
               (dir / "b").string()})
              .code == 0);
  const json a = load_json(dir / "a" / "result.json");
  CHECK(a["config"]["tol"] == 1e-6);
  CHECK(a["config"]["k"] == 4);
  CHECK(a["wall_seconds"] == 0.0);
  CHECK(slurp(dir / "a" / "history.csv") == slurp(dir / "b" / "history.csv"));
  CHECK(slurp(dir / "a" / "X1.mtx") == slurp(dir / "b" / "X1.mtx"));
}

TEST_CASE("solve: files produced by gen give the same run as the generator") {
  const fs::path dir = scratch("solve_files");
  REQUIRE(sylkit_cli({"gen", "example61", "--grid", "20", "--nu", "0.1", "--out", (dir / "p").string()})
              .code == 0);
  const auto p = [&](const char* f) { return (dir / "p" / f).string(); };
  REQUIRE(sylkit_cli({"solve", "--A", p("A.mtx"), "--B", p("B.mtx"), "--C1", p("C1.mtx"), "--C2",
               p("C2.mtx"), "--k", "4", "--s", "200", "--no-timing", "--out",
               (dir / "files").string()})
              .code == 0);
  REQUIRE(sylkit_cli({"solve", "--problem", "example61", "--grid", "20", "--nu", "0.1", "--k", "4", "--s",
               "200", "--no-timing", "--out", (dir / "gen").string()})
              .code == 0);
  CHECK(slurp(dir / "files" / "history.csv") == slurp(dir / "gen" / "history.csv"));
}

TEST_CASE("solve: max iterations exits 2 with an unconverged result") {
  const fs::path dir = scratch("solve_maxit");
  const Run r = sylkit_cli({"solve", "--problem", "example61", "--grid", "20", "--nu", "0.1", "--maxit",
                     "10", "--p", "5", "--tol", "1e-12", "--out", dir.string()});
  CHECK(r.code == 2);
  const json j = load_json(dir / "result.json");
  CHECK(j["converged"] == false);
  CHECK(j["d"] == 10);
}

TEST_CASE("solve: verification mode reports the true residual") {
  const fs::path dir = scratch("solve_verify");
  REQUIRE(sylkit_cli({"solve", "--problem", "example61", "--grid", "15", "--nu", "0.1", "--k", "4",
               "--s", "150", "--verification", "true", "--out", dir.string()})
              .code == 0);
  const json j = load_json(dir / "result.json");
  CHECK(j.contains("verification_true_residual"));
  const auto h = lines(dir / "history.csv");
  CHECK(h[1].find(",,") == std::string::npos);
}

TEST_CASE("solve: configuration and data errors") {
  const fs::path dir = scratch("solve_bad");
  {
    std::ofstream os(dir / "bad.cfg");
    os << "problem=example61\ngrid 20\n";
  }
  Run r = sylkit_cli({"solve", "--config", (dir / "bad.cfg").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 64);
  CHECK(r.err.find("line 2") != std::string::npos);

  CHECK(sylkit_cli({"solve", "--out", (dir / "none").string()}).code == 64);  // no problem source
  CHECK(sylkit_cli({"solve", "--problem", "example61", "--grid", "10", "--nu", "0.1", "--A", "x.mtx",
             "--out", (dir / "both").string()})
            .code == 64);
  CHECK(sylkit_cli({"solve", "--problem", "example61", "--grid", "10", "--nu", "0.1", "--engine", "gmres",
             "--out", (dir / "eng").string()})
            .code == 64);
  CHECK(sylkit_cli({"solve", "--problem", "example61", "--grid", "10", "--nu", "0.1", "--tol", "tiny",
             "--out", (dir / "tol").string()})
            .code == 64);

  r = sylkit_cli({"solve", "--A", (dir / "missing.mtx").string(), "--C1", (dir / "missing.mtx").string(),
           "--out", (dir / "io").string()});
  CHECK(r.code == 65);
  const json j = load_json(dir / "io" / "result.json");
  CHECK(j["error"]["code"] == "IoError");

  // verification is limited to small problems
  r = sylkit_cli({"solve", "--problem", "example61", "--grid", "50", "--nu", "0.1", "--verification",
           "true", "--out", (dir / "ver").string()});
  CHECK(r.code == 64);
  CHECK(load_json(dir / "ver" / "result.json")["error"]["code"] == "InvalidConfig");
}

TEST_CASE("bench: table3-desk ranks, determinism across worker counts") {
  const fs::path dir = scratch("bench3");
  REQUIRE(sylkit_cli({"bench", "table3-desk", "--no-timing", "--out", (dir / "one").string()}).code == 0);
  ::setenv("SYLKIT_THREADS", "2", 1);
  const int code = sylkit_cli({"bench", "table3-desk", "--no-timing", "--out", (dir / "two").string()}).code;
  ::unsetenv("SYLKIT_THREADS");
  REQUIRE(code == 0);
  CHECK(slurp(dir / "one" / "report.csv") == slurp(dir / "two" / "report.csv"));
  const auto rows = lines(dir / "one" / "report.csv");
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::vector<std::string> f;
    std::stringstream ss(rows[i]);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    CHECK(f[11] == "true");
    const int rank = std::stoi(f[12]);
    CHECK(rank >= 20);
    CHECK(rank <= 45);
  }
}

TEST_CASE("bench: unknown suite and bad worker count") {
  const fs::path dir = scratch("bench_bad");
  CHECK(sylkit_cli({"bench", "table9", "--out", dir.string()}).code == 64);
  ::setenv("SYLKIT_THREADS", "zero", 1);
  CHECK(sylkit_cli({"bench", "table3-desk", "--out", dir.string()}).code == 64);
  ::unsetenv("SYLKIT_THREADS");
}

TEST_CASE("fov boundary: 256 samples by default") {
  const fs::path dir = scratch("fov_boundary");
  REQUIRE(sylkit_cli({"gen", "toeplitz41", "--n", "30", "--out", dir.string()}).code == 0);
  REQUIRE(sylkit_cli({"fov", "--out", dir.string(), "boundary", "--matrix", (dir / "A.mtx").string()})
              .code == 0);
  const auto rows = lines(dir / "boundary.csv");
  CHECK(rows.front() == "theta,re,im");
  CHECK(rows.size() == 257);
  CHECK(sylkit_cli({"fov", "boundary"}).code == 64);
}

TEST_CASE("fov effective: counts and spectrum agree with the analysis module") {
  const fs::path dir = scratch("fov_effective");
  const Run r = sylkit_cli({"fov", "--out", dir.string(), "effective", "--example45", "--d", "100"});
  REQUIRE(r.code == 0);
  const auto inst = sparse::gen_hhat_ex45(100, 219);
  const auto eff = analysis::effective_fov(inst.Hhat, inst.hhat);
  const json j = load_json(dir / "effective.json");
  CHECK(j["kept"] == eff.kept);
  CHECK(j["dropped"] == eff.dropped);
  CHECK(j["max_re_eig_full"].get<double>() > 0.0);
  CHECK(j["max_re_eig_compressed"].get<double>() < 0.0);
  CHECK(lines(dir / "compressed_spectrum.csv").size() == eff.kept + 1);
  CHECK(lines(dir / "spectrum.csv").size() == 101);
  CHECK(fs::exists(dir / "fov_effective.csv"));
}

TEST_CASE("fov effective: seed sweep finds the recorded seed") {
  const fs::path dir = scratch("fov_sweep45");
  REQUIRE(sylkit_cli({"fov", "--out", dir.string(), "effective", "--example45", "--seed", "215",
               "--sweep", "10"})
              .code == 0);
  CHECK(load_json(dir / "effective.json")["example45"]["seed"] == 219);
  CHECK(sylkit_cli({"fov", "--out", dir.string(), "effective", "--example45", "--seed", "0", "--sweep",
             "3"})
            .code == 64);
}

TEST_CASE("fov effective: instance from files") {
  const fs::path dir = scratch("fov_files");
  REQUIRE(sylkit_cli({"gen", "hhat45", "--d", "40", "--seed", "5", "--out", dir.string()}).code == 0);
  REQUIRE(sylkit_cli({"fov", "--out", dir.string(), "effective", "--hhat", (dir / "Hhat.mtx").string(),
               "--hvec", (dir / "hhat.mtx").string()})
              .code == 0);
  const auto inst = sparse::gen_hhat_ex45(40, 5);
  CHECK(load_json(dir / "effective.json")["kept"] ==
        analysis::effective_fov(inst.Hhat, inst.hhat).kept);
  CHECK(sylkit_cli({"fov", "effective"}).code == 64);
}

TEST_CASE("fov decay: one row per eigenvalue, sorted by distance") {
  const fs::path dir = scratch("fov_decay");
  REQUIRE(sylkit_cli({"fov", "--out", dir.string(), "decay", "--example45", "--d", "60", "--seed", "11"})
              .code == 0);
  const auto rows = lines(dir / "decay.csv");
  CHECK(rows.front() == "dist,first_entry_mag");
  REQUIRE(rows.size() == 61);
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dist = std::stod(rows[i].substr(0, rows[i].find(',')));
    CHECK(dist >= prev);
    prev = dist;
  }
}

TEST_CASE("fov sketch-sweep: per-seed table reproduces the frozen maximum") {
  const fs::path dir = scratch("fov_41");
  const Run r = sylkit_cli({"fov", "--out", dir.string(), "--angles", "64", "sketch-sweep", "--example41",
                     "--seeds", "50"});
  REQUIRE(r.code == 0);
  const auto rows = lines(dir / "sketch_sweep.csv");
  CHECK(rows.front() == "seed,alpha_plain,alpha_sketched,shift,norm_A");
  CHECK(rows.size() == 51);
  CHECK(r.out.find("at seed 38") != std::string::npos);
}
