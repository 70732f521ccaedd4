#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "driver.hpp"
#include "errors.hpp"
#include "report_io.hpp"

namespace foulkes {

// Shard files are JSON lines: one header carrying the report head and the
// shard plan, then one line per computed (f, point) value of that shard.

struct ShardEntry {
  int f = 0;
  int point = 0;
  BigInt value;
};

struct ShardFile {
  KernelReport head;  // no rank, no matrix
  int depth = 0;
  int shards = 1;
  int shard_id = 0;
  std::vector<ShardEntry> entries;
};

inline std::filesystem::path shard_path(const std::filesystem::path& dir, int a, int b, const Partition& lambda,
                                        int shard_id, int shards)
{
  return dir / (std::to_string(a) + "x" + std::to_string(b)) / lambda.to_string() /
         ("shard-" + std::to_string(shard_id) + "-of-" + std::to_string(shards) + ".jsonl");
}

inline Json shard_header_json(const ShardFile& s)
{
  Json j;
  j["kind"] = "header";
  j["depth"] = s.depth;
  j["shards"] = s.shards;
  j["shard"] = s.shard_id;
  const Json head = report_head_json(s.head);
  for (const auto& [key, value] : head.items()) j[key] = value;
  return j;
}

inline Json shard_entry_json(const ShardFile& s, const ShardEntry& e)
{
  return Json{{"kind", "entry"},  {"f", e.f},          {"point", e.point},           {"depth", s.depth},
              {"shards", s.shards}, {"shard", s.shard_id}, {"value", to_decimal(e.value)}};
}

namespace detail {

inline ReportStatus parse_status(const std::string& s)
{
  for (auto st : {ReportStatus::Ok, ReportStatus::Skipped, ReportStatus::RetryExhausted,
                  ReportStatus::ConjectureWitness, ReportStatus::Failed})
    if (s == status_name(st)) return st;
  throw std::invalid_argument("unknown report status '" + s + "'");
}

inline ShardFile shard_from_header(const Json& j)
{
  ShardFile s;
  s.depth = j.at("depth").get<int>();
  s.shards = j.at("shards").get<int>();
  s.shard_id = j.at("shard").get<int>();
  KernelReport& r = s.head;
  r.a = j.at("a").get<int>();
  r.b = j.at("b").get<int>();
  r.lambda = Partition::parse(j.at("lambda").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.p = j.at("p").get<std::int64_t>();
  r.p_prime = j.at("p_prime").get<std::int64_t>();
  r.status = parse_status(j.at("status").get<std::string>());
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  r.source_tableaux = fillings_from_json(j.at("source_tableaux"), ContentSpec{r.a, r.b});
  r.source_points = points_from_json(j.at("source_points"));
  r.target_tableaux = fillings_from_json(j.at("target_tableaux"), ContentSpec{r.b, r.a});
  r.target_points = points_from_json(j.at("target_points"));
  ShardSpec{s.depth, s.shards, s.shard_id}.validate();
  return s;
}

} // namespace detail

/// Reads a shard file. A torn last line (interrupted write) is ignored; a
/// malformed line anywhere else is an error.
inline ShardFile read_shard_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open shard file " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(std::move(line));
  if (lines.empty()) throw std::runtime_error("empty shard file " + path.string());

  ShardFile s;
  bool have_header = false;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    Json j;
    try {
      j = Json::parse(lines[k]);
    } catch (const Json::parse_error&) {
      if (k + 1 == lines.size() && have_header) break;
      throw std::runtime_error("malformed line " + std::to_string(k + 1) + " in " + path.string());
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "header") {
      if (have_header) throw std::runtime_error("second header in " + path.string());
      s = detail::shard_from_header(j);
      have_header = true;
    } else if (kind == "entry") {
      if (!have_header) throw std::runtime_error("entry before header in " + path.string());
      if (j.at("shard").get<int>() != s.shard_id || j.at("shards").get<int>() != s.shards ||
          j.at("depth").get<int>() != s.depth)
        throw std::runtime_error("entry with a foreign shard plan in " + path.string());
      s.entries.push_back({j.at("f").get<int>(), j.at("point").get<int>(), parse_bigint(j.at("value").get<std::string>())});
    } else {
      throw std::runtime_error("unknown line kind '" + kind + "' in " + path.string());
    }
  }
  if (!have_header) throw std::runtime_error("no header in " + path.string());
  return s;
}

inline void write_shard_file(const std::filesystem::path& path, const ShardFile& s)
{
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << shard_header_json(s).dump() << '\n';
    for (const auto& e : s.entries) out << shard_entry_json(s, e).dump() << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

/// Computes one shard of one problem. With a checkpoint path, entries already
/// on disk for the same run are reused and new ones are appended as they finish.
inline ShardFile run_shard(const KernelProblem& pr, const ShardSpec& shard, const SearchOptions& search, int workers,
                           const std::optional<std::filesystem::path>& checkpoint = std::nullopt)
{
  shard.validate();
  ShardFile s;
  s.head = report_head(pr);
  s.depth = shard.depth;
  s.shards = shard.shards;
  s.shard_id = shard.shard_id;

  std::set<std::pair<int, int>> done;
  if (checkpoint && std::filesystem::exists(*checkpoint)) {
    ShardFile old = read_shard_file(*checkpoint);
    if (shard_header_json(old) != shard_header_json(s))
      throw std::runtime_error("checkpoint " + checkpoint->string() + " belongs to a different run");
    for (auto& e : old.entries)
      if (e.f >= 0 && e.f < pr.cols() && e.point >= 0 && e.point < pr.rows() && done.insert({e.f, e.point}).second)
        s.entries.push_back(std::move(e));
  }
  if (checkpoint) write_shard_file(*checkpoint, s);

  std::vector<std::pair<int, int>> todo;
  for (int j = 0; j < pr.rows(); ++j)
    for (int i = 0; i < pr.cols(); ++i)
      if (!done.count({i, j})) todo.push_back({i, j});

  std::ofstream append;
  if (checkpoint) append.open(*checkpoint, std::ios::app);
  std::mutex sink;
  std::vector<ShardEntry> fresh(todo.size());
  parallel_for(todo.size(), workers, [&](std::size_t k) {
    auto [i, j] = todo[k];
    fresh[k] = {i, j, evaluate_entry(pr, i, j, shard, search)};
    if (checkpoint) {
      std::lock_guard lock(sink);
      append << shard_entry_json(s, fresh[k]).dump() << '\n' << std::flush;
    }
  });
  for (auto& e : fresh) s.entries.push_back(std::move(e));
  std::sort(s.entries.begin(), s.entries.end(),
            [](const ShardEntry& x, const ShardEntry& y) { return std::pair(x.point, x.f) < std::pair(y.point, y.f); });
  if (checkpoint) {
    append.close();
    write_shard_file(*checkpoint, s);  // canonical order on disk once complete
  }
  return s;
}

namespace detail {

inline KernelReport merge_group(const std::vector<const ShardFile*>& files)
{
  const ShardFile& first = *files.front();
  const KernelReport& head = first.head;
  Json plan = shard_header_json(first);
  plan.erase("shard");
  const int n = first.shards;
  std::vector<const ShardFile*> by_id(static_cast<std::size_t>(n), nullptr);
  for (const ShardFile* f : files) {
    Json other = shard_header_json(*f);
    other.erase("shard");
    if (other != plan)
      throw DuplicateShard("shard files for lambda = " + head.lambda.to_string() + " disagree on run or shard plan");
    auto& slot = by_id[static_cast<std::size_t>(f->shard_id)];
    if (slot) throw DuplicateShard("shard " + std::to_string(f->shard_id) + " of lambda = " + head.lambda.to_string() +
                                   " appears twice");
    slot = f;
  }
  for (int c = 0; c < n; ++c)
    if (!by_id[static_cast<std::size_t>(c)])
      throw IncompleteCoverage("shard " + std::to_string(c) + " of " + std::to_string(n) + " for lambda = " +
                               head.lambda.to_string() + " is missing");

  const int rows = static_cast<int>(head.target_points.size());
  const int cols = static_cast<int>(head.source_tableaux.size());
  IntMatrix m(rows, cols);
  for (const ShardFile* f : by_id) {
    std::vector<char> seen(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
    for (const auto& e : f->entries) {
      if (e.f < 0 || e.f >= cols || e.point < 0 || e.point >= rows)
        throw std::runtime_error("shard entry (" + std::to_string(e.f) + ", " + std::to_string(e.point) +
                                 ") outside the matrix for lambda = " + head.lambda.to_string());
      char& s = seen[static_cast<std::size_t>(e.point) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(e.f)];
      if (s)
        throw DuplicateShard("entry (f=" + std::to_string(e.f) + ", point=" + std::to_string(e.point) + ", shard=" +
                             std::to_string(f->shard_id) + ") repeated for lambda = " + head.lambda.to_string());
      s = 1;
      m(e.point, e.f) += e.value;
    }
    const auto missing = std::count(seen.begin(), seen.end(), 0);
    if (missing)
      throw IncompleteCoverage(std::to_string(missing) + " entries missing from shard " + std::to_string(f->shard_id) +
                               " of lambda = " + head.lambda.to_string());
  }

  KernelReport r = head;
  r.rank = rank(m);
  r.matrix = std::move(m);
  r.kernel_mult = r.p - r.rank;
  return r;
}

} // namespace detail

/// Sums shards entrywise and finishes one report per lambda, in decreasing
/// lambda order. Every (f, point, shard) must occur exactly once.
inline std::vector<KernelReport> checkpoint_merge(const std::vector<ShardFile>& files)
{
  std::map<std::tuple<int, int, Partition>, std::vector<const ShardFile*>> groups;
  for (const auto& f : files) groups[{f.head.a, f.head.b, f.head.lambda}].push_back(&f);
  std::vector<KernelReport> out;
  for (const auto& [key, group] : groups) out.push_back(detail::merge_group(group));
  std::sort(out.begin(), out.end(), [](const KernelReport& x, const KernelReport& y) {
    return std::tie(x.a, x.b) != std::tie(y.a, y.b) ? std::tie(x.a, x.b) < std::tie(y.a, y.b) : y.lambda < x.lambda;
  });
  return out;
}

/// Shard files of (a, b) under a checkpoint root.
inline std::vector<std::filesystem::path> find_shard_files(const std::filesystem::path& dir, int a, int b)
{
  std::vector<std::filesystem::path> out;
  const auto root = dir / (std::to_string(a) + "x" + std::to_string(b));
  if (!std::filesystem::is_directory(root)) return out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("shard-", 0) == 0 && entry.path().extension() == ".jsonl")
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace foulkes
