#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sylkit/analysis.hpp"
#include "sylkit/dense_io.hpp"
#include "sylkit/krylov.hpp"
#include "sylkit/linalg.hpp"
#include "sylkit/sketch.hpp"
#include "sylkit/sparse.hpp"

namespace sylkit::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using la::DenseMat;
using la::format_double;
using sparse::SparseMatrix;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownGenerator:
    case ErrorCode::InvalidField:
      return kExitUsage;
    case ErrorCode::ReplayMismatch:
      return kExitInternal;
    default:
      return kExitData;
  }
}

namespace {

Error config_error(const std::string& msg) { return Error(ErrorCode::InvalidConfig, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// ---------------------------------------------------------------------------
// Value parsing

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw config_error("bad value for " + key + ": '" + text + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  const double v = parse_number<double>(key, text);
  if (!std::isfinite(v)) throw config_error("bad value for " + key + ": '" + text + "'");
  return v;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
  if (text == "inf") return krylov::kFull;
  return parse_number<std::size_t>(key, text);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw config_error("bad value for " + key + ": '" + text + "'");
}

template <class F>
auto get_or(const ConfigMap& c, const std::string& key, F parse,
            decltype(parse(key, std::string())) fallback) {
  const auto it = c.find(key);
  return it == c.end() ? fallback : parse(key, it->second);
}

std::optional<std::string> get_opt(const ConfigMap& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Files

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorCode::IoError, "cannot create output directory: " + dir);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  return os;
}

void write_json(const json& j, const fs::path& path) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

bool is_array_market(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  std::string header;
  std::getline(is, header);
  return header.find(" array") != std::string::npos;
}

SparseMatrix read_operator(const std::string& path) {
  if (is_array_market(path)) return SparseMatrix::from_dense(la::read_matrix_market_array(path));
  return sparse::read_matrix_market(path);
}

DenseMat read_block(const std::string& path) {
  if (is_array_market(path)) return la::read_matrix_market_array(path);
  return sparse::read_matrix_market(path).to_dense();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// ---------------------------------------------------------------------------
// Problem generation shared by gen, solve and bench

struct GenSpec {
  std::string name;
  std::size_t grid = 0;
  std::optional<double> nu;
  std::string field_A;
  std::string field_B;
  std::size_t n = 30;
  std::size_t d = 100;
  std::size_t r = 1;
  std::uint64_t seed = 1;
};

struct Problem {
  SparseMatrix A;
  SparseMatrix B;
  bool has_B = false;  // B defined by the example rather than taken as A^T
  DenseMat C1, C2;
  json params;
};

bool is_convdiff(const std::string& name) {
  return name == "convdiff2d" || name == "convdiff3d" || name == "example61" ||
         name == "example63";
}

Problem generate(const GenSpec& g) {
  Problem p;
  p.params = {{"generator", g.name}, {"r", g.r}, {"seed", g.seed}};
  if (is_convdiff(g.name)) {
    const bool three_d = g.name == "convdiff3d" || g.name == "example63";
    if (g.grid == 0) throw config_error(g.name + " requires grid > 0");
    if (!g.nu) throw config_error(g.name + " requires nu");
    const bool example = g.name == "example61" || g.name == "example63";
    std::string fa = g.field_A, fb = g.field_B;
    if (fa.empty()) fa = three_d ? "example63_A" : "example61_A";
    if (fb.empty() && example) fb = three_d ? "example63_B" : "example61_B";
    auto gen = [&](const std::string& f) {
      const auto field = sparse::parse_field(f);
      return three_d ? sparse::gen_convdiff_3d(g.grid, *g.nu, field)
                     : sparse::gen_convdiff_2d(g.grid, *g.nu, field);
    };
    p.A = gen(fa);
    if (!fb.empty()) {
      p.B = gen(fb);
      p.has_B = true;
    } else {
      p.B = p.A.transposed();
    }
    p.params["grid"] = g.grid;
    p.params["nu"] = *g.nu;
    p.params["field_A"] = fa;
    if (!fb.empty()) p.params["field_B"] = fb;
  } else if (g.name == "toeplitz41") {
    if (g.n == 0) throw config_error("toeplitz41 requires n > 0");
    p.A = sparse::gen_toeplitz_ex41(g.n);
    p.B = p.A.transposed();
    p.params["n"] = g.n;
  } else {
    throw Error(ErrorCode::UnknownGenerator, "unknown generator '" + g.name + "'");
  }
  if (g.r == 0) throw config_error("r must be positive");
  const std::size_t n = p.A.n_rows();
  p.C1 = sparse::gen_rhs(n, g.r, g.seed);
  p.C2 = sparse::gen_rhs(n, g.r, g.seed + 1);
  p.params["n_rows"] = n;
  return p;
}

// ---------------------------------------------------------------------------
// Config

const std::vector<std::string> kProblemKeys = {"problem", "grid",  "nu", "field_A", "field_B",
                                               "n",       "r",     "rhs_seed", "A", "B",
                                               "C1",      "C2"};
const std::vector<std::string> kSolverKeys = {
    "engine", "tol",   "maxit",        "k",             "k_B",     "p",      "s",
    "sketch", "seed",  "rank_tol",     "chunk",         "verification", "literal_scale",
    "timing", "out"};

Problem problem_from_config(const ConfigMap& c) {
  const bool gen = c.count("problem") > 0;
  const bool paths = c.count("A") || c.count("B") || c.count("C1") || c.count("C2");
  if (gen == paths)
    throw config_error("exactly one problem source is required: problem=<generator> or A/C1 paths");
  if (gen) {
    GenSpec g;
    g.name = c.at("problem");
    g.grid = get_or(c, "grid", parse_size, std::size_t{0});
    if (auto nu = get_opt(c, "nu")) g.nu = parse_double("nu", *nu);
    g.field_A = get_opt(c, "field_A").value_or("");
    g.field_B = get_opt(c, "field_B").value_or("");
    g.n = get_or(c, "n", parse_size, std::size_t{30});
    g.r = get_or(c, "r", parse_size, std::size_t{1});
    g.seed = get_or(c, "rhs_seed", parse_number<std::uint64_t>, std::uint64_t{1});
    return generate(g);
  }
  if (!c.count("A") || !c.count("C1")) throw config_error("file problems need at least A and C1");
  Problem p;
  p.A = read_operator(c.at("A"));
  if (c.count("B")) {
    p.B = read_operator(c.at("B"));
    p.has_B = true;
  } else {
    p.B = p.A.transposed();
  }
  p.C1 = read_block(c.at("C1"));
  p.C2 = c.count("C2") ? read_block(c.at("C2")) : p.C1;
  p.params = {{"A", c.at("A")}, {"B", c.count("B") ? json(c.at("B")) : json("A^T")},
              {"C1", c.at("C1")}, {"C2", c.count("C2") ? json(c.at("C2")) : json("C1")}};
  return p;
}

krylov::SolverConfig solver_from_config(const ConfigMap& c) {
  krylov::SolverConfig cfg;
  if (auto e = get_opt(c, "engine")) cfg.engine = krylov::parse_engine(*e);
  cfg.tol = get_or(c, "tol", parse_double, cfg.tol);
  cfg.maxit = get_or(c, "maxit", parse_size, cfg.maxit);
  cfg.k = get_or(c, "k", parse_size, cfg.k);
  cfg.k_B = get_or(c, "k_B", parse_size, cfg.k_B);
  cfg.p = get_or(c, "p", parse_size, cfg.p);
  cfg.s = get_or(c, "s", parse_size, cfg.s);
  if (auto s = get_opt(c, "sketch")) cfg.sketch = sketch::parse_sketch_kind(*s);
  cfg.seed = get_or(c, "seed", parse_number<std::uint64_t>, cfg.seed);
  cfg.rank_tol = get_or(c, "rank_tol", parse_double, cfg.rank_tol);
  cfg.chunk = get_or(c, "chunk", parse_size, cfg.chunk);
  cfg.verification = get_or(c, "verification", parse_bool, cfg.verification);
  cfg.literal_scale = get_or(c, "literal_scale", parse_bool, cfg.literal_scale);
  cfg.record_timing = get_or(c, "timing", parse_bool, cfg.record_timing);
  return cfg;
}

json config_json(const krylov::SolverConfig& cfg) {
  auto sz = [](std::size_t v) { return v == krylov::kFull ? json("inf") : json(v); };
  return {{"engine", krylov::to_string(cfg.engine)},
          {"tol", cfg.tol},
          {"maxit", cfg.maxit},
          {"k", sz(cfg.k)},
          {"k_B", sz(cfg.k_B)},
          {"p", cfg.p},
          {"s", cfg.s},
          {"sketch", sketch::to_string(cfg.sketch)},
          {"seed", cfg.seed},
          {"rank_tol", cfg.rank_tol},
          {"chunk", cfg.chunk},
          {"verification", cfg.verification},
          {"literal_scale", cfg.literal_scale}};
}

// ---------------------------------------------------------------------------
// Solving

struct Outcome {
  krylov::SolveResult result;
  double wall_s = 0.0;
  double true_res = std::numeric_limits<double>::quiet_NaN();
};

Outcome run_solver(const Problem& p, const krylov::SolverConfig& cfg) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  o.result = krylov::solve(p.A, p.B, p.C1, p.C2, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  if (cfg.record_timing) o.wall_s = std::chrono::duration<double>(t1 - t0).count();
  if (o.result.rank > 0)
    o.true_res = krylov::relative_residual(p.A, p.B, p.C1, p.C2, o.result.X1, o.result.X2);
  return o;
}

void write_history(const krylov::SolveResult& r, const fs::path& path) {
  auto os = open_out(path);
  os << "d,rho,true_res,wall_s,mem_vectors\n";
  for (const auto& h : r.history) {
    os << h.d << ',' << format_double(h.rho) << ','
       << (h.true_res ? format_double(*h.true_res) : std::string()) << ','
       << format_double(h.wall_s) << ',' << h.mem_vectors << '\n';
  }
}

int cmd_solve(const ConfigMap& c, std::ostream& out, std::ostream& err) {
  const std::string out_dir = get_opt(c, "out").value_or("out");
  json result = {{"metadata", {{"timestamp", timestamp_utc()}}}};
  auto fail = [&](const Error& e) {
    result["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    const int code = exit_code_for(e.code());
    result["exit_code"] = code;
    try {
      ensure_dir(out_dir);
      write_json(result, fs::path(out_dir) / "result.json");
    } catch (const Error&) {
    }
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return code;
  };
  try {
    const krylov::SolverConfig cfg = solver_from_config(c);
    ensure_dir(out_dir);
    result["config"] = config_json(cfg);
    const Problem p = problem_from_config(c);
    result["problem"] = p.params;
    const Outcome o = run_solver(p, cfg);
    const auto& r = o.result;
    write_history(r, fs::path(out_dir) / "history.csv");
    la::write_matrix_market_array(r.X1, (fs::path(out_dir) / "X1.mtx").string());
    la::write_matrix_market_array(r.X2, (fs::path(out_dir) / "X2.mtx").string());
    result["engine"] = krylov::to_string(r.engine);
    result["d"] = r.iterations;
    result["rank"] = r.rank;
    result["converged"] = r.converged;
    result["breakdown"] = r.breakdown;
    result["wall_seconds"] = o.wall_s;
    result["mem_long_vectors"] = r.mem_long_vectors;
    result["rho"] = r.rho;
    result["rhs_norm"] = r.rhs_norm;
    result["rho_relative"] = r.rhs_norm > 0.0 ? r.rho / r.rhs_norm : 0.0;
    result["true_residual"] = number_or_null(o.true_res);
    if (cfg.verification && !r.history.empty() && r.history.back().true_res)
      result["verification_true_residual"] = *r.history.back().true_res;
    result["notes"] = r.notes;
    const int code = r.converged ? kExitOk : kExitMaxIterations;
    result["exit_code"] = code;
    write_json(result, fs::path(out_dir) / "result.json");
    out << krylov::to_string(r.engine) << ": d=" << r.iterations << " rank=" << r.rank
        << " converged=" << (r.converged ? "true" : "false")
        << " mem=" << r.mem_long_vectors << " true_res=" << format_double(o.true_res) << '\n';
    return code;
  } catch (const Error& e) {
    return fail(e);
  }
}

// ---------------------------------------------------------------------------
// Bench

struct BenchCase {
  std::string suite;
  std::string label;
  GenSpec gen;
  krylov::SolverConfig cfg;
};

struct BenchRow {
  BenchCase c;
  std::size_t n = 0;
  std::size_t d = 0;
  bool converged = false;
  std::size_t rank = 0;
  std::size_t mem = 0;
  double time_s = 0.0;
  double true_res = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

krylov::SolverConfig bench_config(krylov::Engine engine, std::size_t k, std::size_t p,
                                  std::size_t s, std::size_t maxit, bool timing) {
  krylov::SolverConfig cfg;
  cfg.engine = engine;
  cfg.tol = 1e-6;
  cfg.k = k;
  cfg.p = p;
  cfg.s = s;
  cfg.maxit = maxit;
  cfg.sketch = sketch::SketchKind::SRDCT;
  cfg.seed = 1;
  cfg.record_timing = timing;
  return cfg;
}

GenSpec convdiff_spec(const std::string& example, std::size_t grid, double nu) {
  GenSpec g;
  g.name = example;
  g.grid = grid;
  g.nu = nu;
  g.r = 1;
  g.seed = 1;
  return g;
}

std::vector<BenchCase> suite_cases(const std::string& suite, bool full_scale, bool timing) {
  using krylov::Engine;
  std::vector<BenchCase> cases;
  auto add = [&](const std::string& label, GenSpec g, krylov::SolverConfig cfg) {
    cases.push_back({suite, label, std::move(g), cfg});
  };
  if (suite == "table1-desk") {
    const std::size_t grid = full_scale ? 300 : 100;
    const std::size_t s = full_scale ? 1200 : 400;
    std::vector<double> nus = {0.1, 0.01};
    if (full_scale) nus.push_back(0.001);
    for (double nu : nus)
      for (std::size_t p : {std::size_t{1}, std::size_t{10}}) {
        add("full", convdiff_spec("example61", grid, nu),
            bench_config(Engine::Full, krylov::kFull, p, 0, 600, timing));
        add("sketched", convdiff_spec("example61", grid, nu),
            bench_config(Engine::Sketched, 10, p, s, 600, timing));
      }
  } else if (suite == "table2-desk") {
    const std::size_t grid = full_scale ? 300 : 100;
    // p = 1 with the truncated engine re-solves a projected equation of
    // dimension 300+ at every step, which alone exceeds the desk time budget.
    std::vector<std::size_t> ps = {10};
    if (full_scale) ps = {1, 10};
    for (double nu : {0.1, 0.01}) {
      for (std::size_t p : ps)
        add("full", convdiff_spec("example61", grid, nu),
            bench_config(Engine::Full, krylov::kFull, p, 0, 1000, timing));
      for (std::size_t kB : {std::size_t{40}, std::size_t{60}})
        for (std::size_t p : ps) {
          auto cfg = bench_config(Engine::Truncated, 40, p, 0, 1000, timing);
          cfg.k_B = kB;
          add("truncated", convdiff_spec("example61", grid, nu), cfg);
        }
    }
  } else if (suite == "table3-desk") {
    std::vector<std::size_t> grids = {22, 27};
    if (full_scale) grids = {50, 60, 70, 80, 90, 100};
    for (std::size_t grid : grids)
      add("sketched", convdiff_spec("example63", grid, 0.005),
          bench_config(Engine::Sketched, 3, 10, 500, 250, timing));
  } else {
    throw config_error("unknown suite '" + suite + "'");
  }
  return cases;
}

BenchRow run_case(const BenchCase& c) {
  BenchRow row;
  row.c = c;
  try {
    const Problem p = generate(c.gen);
    row.n = p.A.n_rows();
    const Outcome o = run_solver(p, c.cfg);
    row.d = o.result.iterations;
    row.converged = o.result.converged;
    row.rank = o.result.rank;
    row.mem = o.result.mem_long_vectors;
    row.time_s = o.wall_s;
    row.true_res = o.true_res;
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.error = std::string("internal: ") + e.what();
  }
  return row;
}

std::size_t worker_count() {
  const char* env = std::getenv("SYLKIT_THREADS");
  if (!env || !*env) return 1;
  const std::size_t t = parse_number<std::size_t>("SYLKIT_THREADS", env);
  if (t == 0) throw config_error("SYLKIT_THREADS must be positive");
  return t;
}

std::vector<BenchRow> run_cases(const std::vector<BenchCase>& cases, std::size_t workers) {
  std::vector<BenchRow> rows(cases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) rows[i] = run_case(cases[i]);
  };
  workers = std::min(workers, cases.size());
  if (workers <= 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch == '\n' ? ' ' : ch;
  }
  return q + '"';
}

void write_report(const std::vector<BenchRow>& rows, std::ostream& os) {
  os << "suite,engine,nu,grid,n,k,k_B,p,s,maxit,d,converged,rank,mem,time_s,true_res,error\n";
  auto sz = [](std::size_t v) { return v == krylov::kFull ? std::string("inf") : std::to_string(v); };
  for (const auto& r : rows) {
    const auto& cfg = r.c.cfg;
    const std::size_t kB = cfg.engine == krylov::Engine::Truncated && cfg.k_B ? cfg.k_B : cfg.k;
    os << r.c.suite << ',' << r.c.label << ',' << format_double(r.c.gen.nu.value_or(0.0)) << ','
       << r.c.gen.grid << ',' << r.n << ',' << sz(cfg.k) << ',' << sz(kB) << ',' << cfg.p << ','
       << (cfg.engine == krylov::Engine::Sketched ? std::to_string(cfg.s) : std::string()) << ','
       << cfg.maxit << ',' << r.d << ',' << (r.converged ? "true" : "false") << ',' << r.rank
       << ',' << r.mem << ',' << format_double(r.time_s) << ','
       << (std::isfinite(r.true_res) ? format_double(r.true_res) : std::string()) << ','
       << csv_field(r.error) << '\n';
  }
}

int cmd_bench(const std::string& suite, const std::string& out_dir, bool full_scale, bool timing,
              std::ostream& out) {
  const auto cases = suite_cases(suite, full_scale, timing);
  const std::size_t workers = worker_count();
  ensure_dir(out_dir);
  const auto rows = run_cases(cases, workers);
  auto os = open_out(fs::path(out_dir) / "report.csv");
  write_report(rows, os);
  write_report(rows, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Field-of-values exports

void write_boundary(const analysis::FovBoundary& f, const fs::path& path) {
  auto os = open_out(path);
  os << "theta,re,im\n";
  for (std::size_t i = 0; i < f.points.size(); ++i)
    os << format_double(f.angles[i]) << ',' << format_double(f.points[i].real()) << ','
       << format_double(f.points[i].imag()) << '\n';
}

struct HhatSource {
  bool example45 = false;
  std::size_t d = 100;
  std::uint64_t seed = 219;
  std::size_t sweep = 0;
  std::string hhat_path;
  std::string hvec_path;
};

sparse::HhatInstance load_hhat(const HhatSource& src, json& info) {
  if (src.example45 == !src.hhat_path.empty())
    throw config_error("give either --example45 or --hhat/--hvec");
  if (src.example45) {
    std::uint64_t seed = src.seed;
    if (src.sweep > 0) {
      const auto found = analysis::find_ex45_seed(src.d, src.seed, src.sweep);
      if (!found)
        throw Error(ErrorCode::InvalidConfig, "no qualifying seed in [" + std::to_string(src.seed) +
                                                  ", " + std::to_string(src.seed + src.sweep) +
                                                  ")");
      seed = *found;
    }
    info["example45"] = {{"d", src.d}, {"seed", seed}};
    return sparse::gen_hhat_ex45(src.d, seed);
  }
  if (src.hvec_path.empty()) throw config_error("--hhat requires --hvec");
  sparse::HhatInstance inst;
  inst.Hhat = read_block(src.hhat_path);
  const DenseMat h = read_block(src.hvec_path);
  if (inst.Hhat.rows() != inst.Hhat.cols() || h.rows() * h.cols() != inst.Hhat.rows())
    throw DimensionMismatch("Hhat must be square and hhat must have d entries");
  inst.hhat.assign(h.storage().begin(), h.storage().end());
  info["hhat"] = src.hhat_path;
  info["hvec"] = src.hvec_path;
  return inst;
}

int fov_boundary_cmd(const std::string& matrix, std::size_t angles, const std::string& out_dir,
                     std::ostream& out) {
  const DenseMat M = read_block(matrix);
  if (M.rows() != M.cols()) throw DimensionMismatch("field of values needs a square matrix");
  if (M.rows() > 2000) throw config_error("boundary sampling is limited to n <= 2000");
  const auto f = analysis::fov_boundary(M, angles);
  ensure_dir(out_dir);
  write_boundary(f, fs::path(out_dir) / "boundary.csv");
  out << "alpha=" << format_double(f.alpha) << " points=" << f.points.size() << '\n';
  return kExitOk;
}

int fov_effective_cmd(const HhatSource& src, double threshold, std::size_t angles,
                      const std::string& out_dir, std::ostream& out) {
  json info;
  const auto inst = load_hhat(src, info);
  const auto eff = analysis::effective_fov(inst.Hhat, inst.hhat, threshold);
  const DenseMat M = analysis::perturbed_matrix(inst.Hhat, inst.hhat);
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  {
    auto os = open_out(dir / "spectrum.csv");
    os << "re,im,first_entry_mag,kept\n";
    for (std::size_t i = 0; i < eff.eigenvalues.size(); ++i)
      os << format_double(eff.eigenvalues[i].real()) << ','
         << format_double(eff.eigenvalues[i].imag()) << ','
         << format_double(eff.eigenvector_first[i]) << ',' << (i >= eff.dropped ? 1 : 0) << '\n';
  }
  const auto compressed_eigs = la::eigenvalues(eff.compressed);
  {
    auto os = open_out(dir / "compressed_spectrum.csv");
    os << "re,im\n";
    for (const auto& z : compressed_eigs)
      os << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
  }
  const auto f_hhat = analysis::fov_boundary(inst.Hhat, angles);
  const auto f_full = analysis::fov_boundary(M, angles);
  write_boundary(f_hhat, dir / "fov_hhat.csv");
  write_boundary(f_full, dir / "fov_full.csv");
  double alpha_eff = -std::numeric_limits<double>::infinity();
  if (eff.kept > 0) {
    const auto f_eff = analysis::fov_boundary(eff.compressed, angles);
    write_boundary(f_eff, dir / "fov_effective.csv");
    alpha_eff = f_eff.alpha;
  }
  double max_re_M = -std::numeric_limits<double>::infinity();
  for (const auto& z : la::eigenvalues(M)) max_re_M = std::max(max_re_M, z.real());
  double max_re_K = -std::numeric_limits<double>::infinity();
  for (const auto& z : compressed_eigs) max_re_K = std::max(max_re_K, z.real());
  info["kept"] = eff.kept;
  info["dropped"] = eff.dropped;
  info["threshold"] = eff.threshold;
  info["alpha_hhat"] = f_hhat.alpha;
  info["alpha_full"] = f_full.alpha;
  info["alpha_effective"] = number_or_null(alpha_eff);
  info["max_re_eig_full"] = max_re_M;
  info["max_re_eig_compressed"] = number_or_null(max_re_K);
  write_json(info, dir / "effective.json");
  out << "kept=" << eff.kept << " dropped=" << eff.dropped
      << " max_re_eig_full=" << format_double(max_re_M)
      << " max_re_eig_compressed=" << format_double(max_re_K) << '\n';
  return kExitOk;
}

int fov_decay_cmd(const HhatSource& src, std::size_t angles, const std::string& out_dir,
                  std::ostream& out) {
  json info;
  const auto inst = load_hhat(src, info);
  const auto prof = analysis::schur_decay_profile(inst.Hhat, inst.hhat, angles);
  ensure_dir(out_dir);
  auto os = open_out(fs::path(out_dir) / "decay.csv");
  os << "dist,first_entry_mag\n";
  for (const auto& pt : prof.points)
    os << format_double(pt.distance) << ',' << format_double(pt.first_entry) << '\n';
  out << "points=" << prof.points.size() << " spearman="
      << (prof.spearman ? format_double(*prof.spearman) : std::string("undefined")) << '\n';
  return kExitOk;
}

int fov_sweep_cmd(std::size_t n, std::size_t d, std::size_t s, std::size_t seeds,
                  const std::string& kind, std::size_t angles, const std::string& out_dir,
                  std::ostream& out) {
  if (d == 0 || d > n || s == 0 || s > n) throw config_error("need 0 < d <= n and 0 < s <= n");
  const SparseMatrix A = sparse::gen_toeplitz_ex41(n);
  const DenseMat V = analysis::toeplitz_krylov_basis(A, d);
  const auto sk = sketch::parse_sketch_kind(kind);
  ensure_dir(out_dir);
  auto os = open_out(fs::path(out_dir) / "sketch_sweep.csv");
  os << "seed,alpha_plain,alpha_sketched,shift,norm_A\n";
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_seed = 0;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto S = sketch::SketchOperator::make(sk, n, s, seed);
    const auto g = analysis::sketch_fov_gap(A, V, S, angles);
    const double shift = g.alpha_sketched - g.alpha_plain;
    os << seed << ',' << format_double(g.alpha_plain) << ',' << format_double(g.alpha_sketched)
       << ',' << format_double(shift) << ',' << format_double(g.norm_A) << '\n';
    if (shift > best) {
      best = shift;
      best_seed = seed;
    }
  }
  out << "seeds=" << seeds << " max_shift=" << format_double(best) << " at seed " << best_seed
      << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const GenSpec& g, const std::string& out_dir, std::ostream& out) {
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  json manifest;
  std::vector<std::string> files;
  if (g.name == "hhat45") {
    const auto inst = sparse::gen_hhat_ex45(g.d, g.seed);
    la::write_matrix_market_array(inst.Hhat, (dir / "Hhat.mtx").string());
    DenseMat h(inst.hhat.size(), 1);
    for (std::size_t i = 0; i < inst.hhat.size(); ++i) h(i, 0) = inst.hhat[i];
    la::write_matrix_market_array(h, (dir / "hhat.mtx").string());
    manifest = {{"generator", g.name}, {"d", g.d}, {"seed", g.seed}};
    files = {"Hhat.mtx", "hhat.mtx"};
  } else {
    const Problem p = generate(g);
    sparse::write_matrix_market(p.A, (dir / "A.mtx").string());
    files.push_back("A.mtx");
    if (p.has_B) {
      sparse::write_matrix_market(p.B, (dir / "B.mtx").string());
      files.push_back("B.mtx");
    }
    la::write_matrix_market_array(p.C1, (dir / "C1.mtx").string());
    la::write_matrix_market_array(p.C2, (dir / "C2.mtx").string());
    files.push_back("C1.mtx");
    files.push_back("C2.mtx");
    manifest = p.params;
    manifest["rhs_seeds"] = {g.seed, g.seed + 1};
  }
  manifest["files"] = files;
  write_json(manifest, dir / "manifest.json");
  out << "wrote";
  for (const auto& f : files) out << ' ' << (dir / f).string();
  out << '\n';
  return kExitOk;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k = kProblemKeys;
    k.insert(k.end(), kSolverKeys.begin(), kSolverKeys.end());
    return k;
  }();
  return keys;
}

ConfigMap parse_config(std::istream& is) {
  const auto& keys = config_keys();
  ConfigMap c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty())
      throw config_error("config line " + std::to_string(lineno) + ": empty value for " + key);
    c[key] = value;
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sketched and truncated Krylov solvers for Sylvester equations"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a generated problem as Matrix Market files");
  GenSpec gs;
  std::string gen_out = ".";
  double gen_nu = 0.0;
  gen->add_option("generator", gs.name,
                  "convdiff2d | convdiff3d | example61 | example63 | toeplitz41 | hhat45")
      ->required();
  auto* gen_grid = gen->add_option("--grid", gs.grid, "interior nodes per direction");
  auto* gen_nu_opt = gen->add_option("--nu", gen_nu, "viscosity");
  gen->add_option("--field", gs.field_A, "convection field of A");
  gen->add_option("--field-b", gs.field_B, "convection field of B");
  gen->add_option("--n", gs.n, "toeplitz41 size");
  gen->add_option("--d", gs.d, "hhat45 size");
  gen->add_option("--r", gs.r, "right-hand side rank");
  gen->add_option("--seed", gs.seed, "right-hand side seed (C2 uses seed+1)");
  gen->add_option("--out", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "solve A X + X B = C1 C2^T");
  std::string config_path;
  solve->add_option("--config", config_path, "key=value config file");
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<std::string, CLI::Option*>> flag_opts;
  for (const auto& key : config_keys())
    flag_opts.emplace_back(key, solve->add_option("--" + key, flag_values[key]));
  bool no_timing = false, literal_scale = false;
  solve->add_flag("--no-timing", no_timing, "record zero wall times");
  solve->add_flag("--literal-scale", literal_scale, "SRDCT scale sqrt(s/n)");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite, bench_out = ".";
  bool full_scale = false, bench_no_timing = false;
  bench->add_option("suite", suite, "table1-desk | table2-desk | table3-desk")->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_flag("--full-scale", full_scale, "grid 300 and n up to 10^6");
  bench->add_flag("--no-timing", bench_no_timing, "record zero wall times");

  // fov
  auto* fov = app.add_subcommand("fov", "field-of-values exports");
  fov->require_subcommand(1);
  std::string fov_out = ".";
  std::size_t angles = analysis::kDefaultAngles;
  fov->add_option("--out", fov_out, "output directory");
  fov->add_option("--angles", angles, "boundary samples");

  auto* fb = fov->add_subcommand("boundary", "boundary of W(M)");
  std::string matrix_path;
  fb->add_option("--matrix", matrix_path, "Matrix Market file")->required();

  HhatSource hs;
  double threshold = -1.0;
  auto add_hhat = [&](CLI::App* sub) {
    sub->add_flag("--example45", hs.example45, "generate the Hhat test instance");
    sub->add_option("--d", hs.d, "instance size");
    sub->add_option("--seed", hs.seed, "instance seed, or first seed of a sweep");
    sub->add_option("--sweep", hs.sweep, "search this many seeds for a qualifying one");
    sub->add_option("--hhat", hs.hhat_path, "Hhat as Matrix Market");
    sub->add_option("--hvec", hs.hvec_path, "hhat as Matrix Market");
  };
  auto* fe = fov->add_subcommand("effective", "effective field of values");
  add_hhat(fe);
  fe->add_option("--threshold", threshold, "drop threshold; negative selects the default");
  auto* fd = fov->add_subcommand("decay", "Schur vector first-entry decay profile");
  add_hhat(fd);

  auto* fs_ = fov->add_subcommand("sketch-sweep", "alpha shift of sketched projections");
  bool example41 = false;
  std::size_t sw_n = 30, sw_d = 5, sw_s = 10, sw_seeds = 50;
  std::string sw_kind = "gaussian";
  fs_->add_flag("--example41", example41, "Toeplitz test matrix")->required();
  fs_->add_option("--n", sw_n, "matrix size");
  fs_->add_option("--d", sw_d, "Krylov dimension");
  fs_->add_option("--s", sw_s, "sketch rows");
  fs_->add_option("--seeds", sw_seeds, "number of sketch seeds");
  fs_->add_option("--sketch", sw_kind, "gaussian | srdct | exact");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      if (gen_nu_opt->count()) gs.nu = gen_nu;
      if (is_convdiff(gs.name) && (!gen_grid->count() || !gen_nu_opt->count())) {
        err << "usage: gen " << gs.name << " requires --grid and --nu\n";
        return kExitUsage;
      }
      return cmd_gen(gs, gen_out, out);
    }
    if (*solve) {
      ConfigMap c;
      if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw config_error("cannot read config file " + config_path);
        c = parse_config(is);
      }
      for (const auto& [key, opt] : flag_opts)
        if (opt->count()) c[key] = flag_values[key];
      if (no_timing) c["timing"] = "false";
      if (literal_scale) c["literal_scale"] = "true";
      return cmd_solve(c, out, err);
    }
    if (*bench) return cmd_bench(suite, bench_out, full_scale, !bench_no_timing, out);
    if (*fb) return fov_boundary_cmd(matrix_path, angles, fov_out, out);
    if (*fe) return fov_effective_cmd(hs, threshold, angles, fov_out, out);
    if (*fd) return fov_decay_cmd(hs, angles, fov_out, out);
    if (*fs_) return fov_sweep_cmd(sw_n, sw_d, sw_s, sw_seeds, sw_kind, angles, fov_out, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace sylkit::cli
