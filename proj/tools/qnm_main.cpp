// Command-line front end: compute single modes, rotation sweeps,
// order-convergence tables, and run the validation suites.

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "kdsqnm/checks.hpp"
#include "kdsqnm/io.hpp"

namespace {

using namespace kdsqnm;

struct CliOptions {
  RunConfig cfg;
  std::string a_range_text;
  std::string l_text = "2";
  std::string k_text = "0";
  std::string format_text = "csv";
  std::string validate_level = "quick";
};

// Run tasks 0..n-1 on a bounded pool; results are collected by index, so the
// output order never depends on scheduling.
template <typename Fn>
void run_indexed(int jobs, int n, Fn&& fn) {
  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int width = std::min(jobs, n);
  pool.reserve(width);
  for (int w = 0; w < width; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  return file;
}

std::vector<int> k_list(const std::string& text, int l) {
  if (text == "all") {
    std::vector<int> ks;
    for (int k = -l; k <= l; ++k) ks.push_back(k);
    return ks;
  }
  const int k = std::stoi(text);
  if (std::abs(k) > l)
    throw std::invalid_argument("need |k| <= l, got k=" + std::to_string(k) +
                                " with l=" + std::to_string(l));
  return {k};
}

int emit_results(const CliOptions& opt, std::vector<QnmResult> rows) {
  sort_results(rows);
  std::ofstream file;
  std::ostream& os = open_output(file, opt.cfg.out_path);
  if (opt.cfg.format == OutputFormat::csv) {
    write_csv_header(os);
    for (const QnmResult& r : rows) write_csv_row(os, r);
  } else {
    os << results_to_json(rows) << '\n';
  }
  const bool all_ok =
      std::all_of(rows.begin(), rows.end(), [](const QnmResult& r) { return r.converged; });
  return all_ok ? 0 : 2;
}

int cmd_compute(const CliOptions& opt) {
  const SpectralParams params(opt.cfg.M0, opt.cfg.Lambda, opt.cfg.a);
  std::vector<QnmQuery> tasks;
  for (int l : parse_int_range(opt.l_text))
    for (int k : k_list(opt.k_text, l))
      tasks.push_back({params, opt.cfg.m, l, k, opt.cfg.order_J, {}, opt.cfg.history});
  std::vector<QnmResult> rows(tasks.size());
  run_indexed(opt.cfg.jobs, static_cast<int>(tasks.size()),
              [&](int i) { rows[i] = solve(tasks[i]); });
  return emit_results(opt, std::move(rows));
}

int cmd_sweep(const CliOptions& opt) {
  if (opt.a_range_text.empty())
    throw std::invalid_argument("sweep requires --a-range start:step:stop");
  const std::vector<double> grid = parse_range(opt.a_range_text);
  const SpectralParams params(opt.cfg.M0, opt.cfg.Lambda, grid.front());
  std::vector<QnmQuery> tasks;
  for (int l : parse_int_range(opt.l_text))
    for (int k : k_list(opt.k_text, l))
      tasks.push_back({params, opt.cfg.m, l, k, opt.cfg.order_J, {}, opt.cfg.history});
  std::vector<ContinuationBranch> branches(tasks.size());
  run_indexed(opt.cfg.jobs, static_cast<int>(tasks.size()),
              [&](int i) { branches[i] = continuation_sweep(tasks[i], grid); });

  bool all_ok = true;
  for (const ContinuationBranch& b : branches) {
    if (b.truncated) all_ok = false;
    for (const QnmResult& r : b.points)
      if (!r.converged) all_ok = false;
  }
  std::ofstream file;
  std::ostream& os = open_output(file, opt.cfg.out_path);
  if (opt.cfg.format == OutputFormat::csv) {
    std::vector<QnmResult> rows;
    for (const ContinuationBranch& b : branches)
      rows.insert(rows.end(), b.points.begin(), b.points.end());
    sort_results(rows);
    write_csv_header(os);
    for (const QnmResult& r : rows) write_csv_row(os, r);
  } else {
    os << branches_to_json(branches) << '\n';
  }
  return all_ok ? 0 : 2;
}

int cmd_convergence(const CliOptions& opt) {
  const SpectralParams params(opt.cfg.M0, opt.cfg.Lambda, opt.cfg.a);
  const auto ls = parse_int_range(opt.l_text);
  std::vector<QnmResult> rows;
  for (int l : ls) {
    for (int k : k_list(opt.k_text, l)) {
      QnmQuery q{params, opt.cfg.m, l, k, opt.cfg.order_J, {}, false};
      for (auto& [J, r] : order_convergence(q, opt.cfg.order_J)) rows.push_back(std::move(r));
    }
  }
  return emit_results(opt, std::move(rows));
}

int cmd_validate(const std::string& level) {
  if (level != "quick" && level != "full")
    throw std::invalid_argument("validate level must be 'quick' or 'full'");
  const auto results = level == "full" ? checks::run_all() : checks::run_quick();
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %-32s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    all_ok = all_ok && r.passed;
  }
  std::printf("%s\n", all_ok ? "validation passed" : "validation FAILED");
  return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-normal modes of slowly rotating Kerr-de Sitter black holes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config")->description("flat key = value file; flags take precedence");

  CliOptions opt;
  app.add_option("--M0", opt.cfg.M0, "black-hole mass (geometric units)")->capture_default_str();
  app.add_option("--Lambda", opt.cfg.Lambda, "cosmological constant")->capture_default_str();
  app.add_option("--a", opt.cfg.a, "rotation parameter")->capture_default_str();
  app.add_option("--a-range", opt.a_range_text, "rotation grid start:step:stop (sweep)");
  app.add_option("--m", opt.cfg.m, "overtone index")->capture_default_str();
  app.add_option("--l,--l-range", opt.l_text, "angular degree, single value or lo:hi")
      ->capture_default_str();
  app.add_option("--k", opt.k_text, "axial index, integer or 'all'")->capture_default_str();
  app.add_option("--order", opt.cfg.order_J, "highest expansion order J")->capture_default_str();
  app.add_option("--format", opt.format_text, "output format: csv or json")
      ->capture_default_str();
  app.add_option("--out", opt.cfg.out_path, "output path (default stdout)");
  app.add_flag("--history", opt.cfg.history, "record per-order omegas (json output)");
  app.add_option("--jobs", opt.cfg.jobs, "worker threads")->capture_default_str();

  CLI::App* compute = app.add_subcommand("compute", "solve modes at fixed rotation");
  CLI::App* sweep = app.add_subcommand("sweep", "continuation branches over an a-grid");
  CLI::App* convergence = app.add_subcommand("convergence", "solutions at orders 1..J");
  CLI::App* validate = app.add_subcommand("validate", "run the validation suites");
  validate->add_option("level", opt.validate_level, "quick or full")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (opt.format_text == "csv") opt.cfg.format = OutputFormat::csv;
    else if (opt.format_text == "json") opt.cfg.format = OutputFormat::json;
    else throw std::invalid_argument("unknown format '" + opt.format_text + "'");
    if (opt.cfg.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");

    if (compute->parsed()) return cmd_compute(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (convergence->parsed()) return cmd_convergence(opt);
    if (validate->parsed()) return cmd_validate(opt.validate_level);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
