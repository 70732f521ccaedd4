#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "driver.hpp"
#include "report_io.hpp"
#include "straighten.hpp"

namespace foulkes::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kInvalidArgs = 2,
  kRetryExhausted = 3,
  kCoverage = 4,
  kConjectureWitness = 5,
};

struct RunConfig {
  std::string command;
  int a = 0;
  int b = 0;
  std::vector<std::string> lambda;
  std::uint64_t seed = 1;
  int shards = 1;
  std::optional<int> shard_id;
  int depth = 0;
  std::string out;
  std::string checkpoint;
  int workers = default_workers();
  std::string format = "json";
  std::string order = "column";
  bool no_symmetry = false;
  bool no_memo = false;
  std::vector<std::string> files;
  // verify-example
  int points = 20;
  bool corrupt_sign = false;
  // straighten
  std::string filling;
  bool psi = false;
};

namespace detail {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void require_ab(const RunConfig& c)
{
  if (c.a < 1 || c.b < 1) throw UsageError("--a and --b must be >= 1");
}

inline std::optional<std::vector<Partition>> lambda_filter(const RunConfig& c)
{
  if (c.lambda.empty()) return std::nullopt;
  std::vector<Partition> out;
  for (const auto& text : c.lambda) {
    Partition lambda;
    try {
      lambda = Partition::parse(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (lambda.weight() != c.a * c.b)
      throw UsageError("lambda " + text + " has weight " + std::to_string(lambda.weight()) + ", expected a*b = " +
                       std::to_string(c.a * c.b));
    out.push_back(std::move(lambda));
  }
  return out;
}

inline std::optional<std::filesystem::path> checkpoint_dir(const RunConfig& c)
{
  if (!c.checkpoint.empty()) return std::filesystem::path(c.checkpoint);
  if (const char* env = std::getenv("PKW_CHECKPOINT_DIR"); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

inline SearchOptions search_options(const RunConfig& c)
{
  SearchOptions s;
  s.order = c.order == "fewest" ? CellOrder::FewestChoices : CellOrder::ColumnMajor;
  s.symmetry_pruning = !c.no_symmetry;
  s.memoize = !c.no_memo;
  return s;
}

inline std::string render_reports(const std::vector<KernelReport>& reports, const std::string& format)
{
  std::string text;
  if (format == "csv") {
    text = summary_csv_header();
    for (const auto& r : reports) text += summary_csv_line(r);
  } else {
    for (const auto& r : reports) text += report_line(r);
  }
  return text;
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& out)
{
  if (c.out.empty()) {
    out << text;
    return;
  }
  // Report files only grow; a CSV header is written once.
  std::string body = text;
  const std::string header = summary_csv_header();
  std::error_code ec;
  if (std::filesystem::file_size(c.out, ec) > 0 && !ec && body.rfind(header, 0) == 0) body.erase(0, header.size());
  std::ofstream file(c.out, std::ios::app);
  file << body;
  if (!file) throw std::runtime_error("cannot write " + c.out);
}

inline void write_manifest(const RunConfig& c, const std::vector<KernelReport>& reports)
{
  if (c.out.empty()) return;
  Json m;
  m["command"] = c.command;
  m["version"] = kVersion;
  m["a"] = c.a;
  m["b"] = c.b;
  m["lambda_filter"] = c.lambda;
  m["seed"] = c.seed;
  m["depth"] = c.depth;
  m["shards"] = c.shards;
  if (c.shard_id) m["shard_id"] = *c.shard_id;
  m["workers"] = c.workers;
  m["order"] = c.order;
  m["symmetry_pruning"] = !c.no_symmetry;
  m["memoize"] = !c.no_memo;
  Json timing = Json::object();
  for (const auto& r : reports) timing[r.lambda.to_string()] = r.elapsed;
  m["elapsed_seconds"] = std::move(timing);
  std::ofstream file(c.out + ".manifest.jsonl", std::ios::app);  // one line per run
  file << m.dump() << '\n';
}

inline int exit_code_for(const std::vector<KernelReport>& reports)
{
  int code = kOk;
  for (const auto& r : reports) {
    if (r.status == ReportStatus::RetryExhausted) return kRetryExhausted;
    if (r.status == ReportStatus::ConjectureWitness) code = kConjectureWitness;
    if (r.status == ReportStatus::Failed && code == kOk) code = kMismatch;
  }
  return code;
}

} // namespace detail

inline int cmd_dims(const RunConfig& c, std::ostream& out)
{
  detail::require_ab(c);
  const auto filter = detail::lambda_filter(c);
  std::string text = c.format == "csv" ? "lambda,p,p_prime\n" : "";
  for (const auto& lambda : kernel_partitions(c.a, c.b, filter)) {
    const auto p = plethysm_coefficient(c.a, c.b, lambda);
    const auto pp = plethysm_coefficient(c.b, c.a, lambda);
    if (c.format == "csv")
      text += "\"" + lambda.to_string() + "\"," + std::to_string(p) + "," + std::to_string(pp) + "\n";
    else
      text += Json{{"lambda", lambda.to_string()}, {"p", p}, {"p_prime", pp}}.dump() + "\n";
  }
  detail::emit(c, text, out);
  return kOk;
}

inline int cmd_kernel(const RunConfig& c, std::ostream& out, std::ostream& err)
{
  detail::require_ab(c);
  ShardSpec{c.depth, c.shards, c.shard_id.value_or(0)}.validate();
  const auto filter = detail::lambda_filter(c);
  const auto search = detail::search_options(c);
  auto ckpt = detail::checkpoint_dir(c);
  if (c.shards > 1 && !ckpt) ckpt = std::filesystem::path("checkpoints");
  const auto lambdas = kernel_partitions(c.a, c.b, filter);

  // per-lambda setup, independent tasks
  std::vector<std::optional<KernelProblem>> problems(lambdas.size());
  std::vector<KernelReport> reports(lambdas.size());
  std::vector<double> setup_time(lambdas.size(), 0);
  parallel_for(lambdas.size(), c.workers, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    try {
      problems[k] = prepare_kernel_problem(c.a, c.b, lambdas[k], c.seed);
    } catch (const RetryExhausted& e) {
      reports[k] = error_report(c.a, c.b, lambdas[k], c.seed, ReportStatus::RetryExhausted, e.what());
    } catch (const ConjectureWitness& e) {
      reports[k] = error_report(c.a, c.b, lambdas[k], c.seed, ReportStatus::ConjectureWitness, e.what());
    } catch (const std::exception& e) {
      reports[k] = error_report(c.a, c.b, lambdas[k], c.seed, ReportStatus::Failed, e.what());
    }
    setup_time[k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    if (!problems[k]) err << "lambda " << lambdas[k].to_string() << ": " << reports[k].error << '\n';

  if (c.shards > 1) {
    std::string text;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      if (!problems[k]) {
        text += report_line(reports[k]);
        continue;
      }
      const int first = c.shard_id.value_or(0);
      const int last = c.shard_id ? first + 1 : c.shards;
      for (int id = first; id < last; ++id) {
        const auto path = shard_path(*ckpt, c.a, c.b, lambdas[k], id, c.shards);
        const ShardFile s = run_shard(*problems[k], ShardSpec{c.depth, c.shards, id}, search, c.workers, path);
        text += Json{{"lambda", lambdas[k].to_string()}, {"shard", id}, {"shards", c.shards},
                     {"entries", s.entries.size()}, {"path", path.string()}}
                    .dump() +
                "\n";
      }
    }
    detail::emit(c, text, out);
    return detail::exit_code_for(reports);
  }

  const KernelOptions opt{c.depth, 1, search, c.workers, {}};
  if (ckpt) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      if (!problems[k]) continue;
      const auto start = std::chrono::steady_clock::now();
      const auto path = shard_path(*ckpt, c.a, c.b, lambdas[k], 0, 1);
      reports[k] = checkpoint_merge({run_shard(*problems[k], ShardSpec{c.depth, 1, 0}, search, c.workers, path)}).front();
      reports[k].elapsed = setup_time[k] + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  } else {
    std::vector<const KernelProblem*> ready;
    for (const auto& pr : problems)
      if (pr) ready.push_back(&*pr);
    const auto start = std::chrono::steady_clock::now();
    auto matrices = foulkes::detail::evaluate_all(ready, opt);
    const double eval_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::size_t next = 0;
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      if (problems[k]) {
        reports[k] = finish_report(*problems[k], std::move(matrices[next++]));
        reports[k].elapsed = setup_time[k] + eval_time;
      }
  }
  detail::emit(c, detail::render_reports(reports, c.format), out);
  detail::write_manifest(c, reports);
  return detail::exit_code_for(reports);
}

inline int cmd_merge(const RunConfig& c, std::ostream& out)
{
  detail::require_ab(c);
  const auto filter = detail::lambda_filter(c);
  std::vector<std::filesystem::path> paths;
  for (const auto& f : c.files) paths.emplace_back(f);
  if (paths.empty()) {
    const auto dir = detail::checkpoint_dir(c).value_or("checkpoints");
    paths = find_shard_files(dir, c.a, c.b);
  }
  const auto wanted = kernel_partitions(c.a, c.b, filter);
  std::vector<ShardFile> files;
  for (const auto& path : paths) {
    ShardFile s;
    try {
      s = read_shard_file(path);
    } catch (const std::exception& e) {
      throw IncompleteCoverage(e.what());
    }
    if (s.head.a != c.a || s.head.b != c.b) continue;
    if (std::find(wanted.begin(), wanted.end(), s.head.lambda) == wanted.end()) continue;
    if (c.shards > 1 && s.shards != c.shards)
      throw IncompleteCoverage(path.string() + " was written for " + std::to_string(s.shards) + " shards, expected " +
                               std::to_string(c.shards));
    files.push_back(std::move(s));
  }
  auto reports = checkpoint_merge(files);
  for (const auto& lambda : wanted)
    if (std::none_of(reports.begin(), reports.end(), [&](const KernelReport& r) { return r.lambda == lambda; }))
      throw IncompleteCoverage("no shard files for lambda = " + lambda.to_string());
  detail::emit(c, detail::render_reports(reports, c.format), out);
  return kOk;
}

inline int cmd_straighten(const RunConfig& c, std::ostream& out)
{
  TableauSum result;
  try {
    if (c.psi) {
      const bool letters = std::any_of(c.filling.begin(), c.filling.end(), [](char ch) { return ch >= 'A' && ch <= 'Z'; });
      result = apply_psi_symbolic(letters ? SymmetrizedTableau::parse_letters(c.filling)
                                          : SymmetrizedTableau(Filling::parse(c.filling)));
    } else {
      result = straighten(Filling::parse(c.filling));
    }
  } catch (const std::invalid_argument& e) {
    throw detail::UsageError(e.what());
  }
  out << (result.empty() ? "0\n" : result.to_string());
  return kOk;
}

/// Psi_{3,2} of the symmetrized AACC/BB against -4 times the standard
/// tableau 1112/22, symbolically and at random points.
inline int cmd_verify_example(const RunConfig& c, std::ostream& out)
{
  if (c.points < 1) throw detail::UsageError("--points must be >= 1");
  const auto f = SymmetrizedTableau::parse_letters("AACC/BB");
  const Filling standard = Filling::parse("1 1 1 2/2 2", ContentSpec{2, 3});
  const BigInt coeff = c.corrupt_sign ? 4 : -4;

  const TableauSum symbolic = apply_psi_symbolic(f);
  TableauSum expected;
  expected.add(standard, coeff);
  const bool symbolic_ok = symbolic == expected;
  out << "symbolic: Psi(" << f.letters() << ") straightens to\n" << symbolic.to_string();
  out << "expected: " << expected.to_string();
  out << "symbolic " << (symbolic_ok ? "match" : "MISMATCH") << '\n';

  const auto lengths = column_lengths(f.shape());
  int agree = 0, nonzero = 0;
  for (int k = 0; k < c.points; ++k) {
    const Point v = random_point(2, 2, 3, derive_seed(c.seed, {0x76u, static_cast<std::uint64_t>(k)}));
    const MinorCache cache(v, lengths);
    const BigInt lhs = evaluate_psi_image(f, v, cache);
    const BigInt rhs = coeff * evaluate_tableau(standard, v, cache);
    if (lhs == rhs) ++agree;
    if (sgn(rhs) != 0) ++nonzero;
    out << "point " << k << ": Psi(f)(v') = " << to_decimal(lhs) << ", " << to_decimal(coeff) << " * T(v') = "
        << to_decimal(rhs) << (lhs == rhs ? "" : "  MISMATCH") << '\n';
  }
  const bool numeric_ok = agree == c.points && nonzero > 0;
  out << "numeric " << agree << "/" << c.points << " points agree (" << nonzero << " nonzero)\n";
  out << (symbolic_ok && numeric_ok ? "verify-example: OK" : "verify-example: FAILED") << '\n';
  return symbolic_ok && numeric_ok ? kOk : kMismatch;
}

/// Parses and dispatches. Never throws; returns the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Kernel multiplicities of the Foulkes-Howe map Sym^a Sym^b V -> Sym^b Sym^a V"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  RunConfig c;

  auto add_ab = [&](CLI::App* sub) {
    sub->add_option("--a", c.a, "outer degree a")->required();
    sub->add_option("--b", c.b, "inner degree b")->required();
    sub->add_option("--lambda", c.lambda, "restrict to these types, e.g. 14,7,2,2 (repeatable)")->take_all();
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out, "write output here instead of stdout");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "run seed");
    sub->add_option("--shards", c.shards, "number of shards N")->check(CLI::PositiveNumber);
    sub->add_option("--checkpoint", c.checkpoint, "checkpoint directory (fallback: PKW_CHECKPOINT_DIR)");
  };

  auto* dims = app.add_subcommand("dims", "print p and p' for every type");
  add_ab(dims);

  auto* kernel = app.add_subcommand("kernel", "kernel multiplicities per type");
  add_ab(kernel);
  add_run(kernel);
  kernel->add_option("--shard-id", c.shard_id, "shard C in 0..N-1; all shards when omitted");
  kernel->add_option("--depth", c.depth, "tree depth D at which subtrees are dealt to shards")->check(CLI::NonNegativeNumber);
  kernel->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  kernel->add_option("--order", c.order, "cell order: column or fewest")->check(CLI::IsMember({"column", "fewest"}));
  kernel->add_flag("--no-symmetry", c.no_symmetry, "disable coinciding-column pruning");
  kernel->add_flag("--no-memo", c.no_memo, "disable the subtree cache");

  auto* merge = app.add_subcommand("merge", "merge shard files into reports");
  add_ab(merge);
  add_run(merge);
  merge->add_option("files", c.files, "shard files (default: all under the checkpoint directory)");

  auto* str = app.add_subcommand("straighten", "straighten a filling, or expand Psi of a symmetrized tableau");
  str->add_option("filling", c.filling, "rows separated by '/', e.g. \"1 2 2/1 3\" or AACC/BB")->required();
  str->add_flag("--psi", c.psi, "apply Psi_{a,b} symbolically first");

  auto* verify = app.add_subcommand("verify-example", "check Psi(AACC/BB) = -4 * 1112/22");
  verify->add_option("--points", c.points, "random points for the numeric check");
  verify->add_option("--seed", c.seed, "seed for the points");
  verify->add_flag("--corrupt-sign", c.corrupt_sign, "negative control: expect +4")->group("");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalidArgs;
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (c.command == "dims") return cmd_dims(c, out);
    if (c.command == "kernel") return cmd_kernel(c, out, err);
    if (c.command == "merge") return cmd_merge(c, out);
    if (c.command == "straighten") return cmd_straighten(c, out);
    return cmd_verify_example(c, out);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArgs;
  } catch (const RetryExhausted& e) {
    err << "retry budget exhausted: " << e.what() << '\n';
    return kRetryExhausted;
  } catch (const ConjectureWitness& e) {
    err << "conjecture witness: " << e.what() << '\n';
    return kConjectureWitness;
  } catch (const IncompleteCoverage& e) {
    err << "incomplete coverage: " << e.what() << '\n';
    return kCoverage;
  } catch (const DuplicateShard& e) {
    err << "duplicate shard: " << e.what() << '\n';
    return kCoverage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArgs;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kMismatch;
  }
}

} // namespace foulkes::cli
