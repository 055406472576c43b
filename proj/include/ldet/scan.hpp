/*
 * Copyright 2026 The ldet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LDET_SCAN_HPP
#define LDET_SCAN_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ldet/theorems.hpp"

namespace ldet {

using ordered_json = nlohmann::ordered_json;

/// Bad task parameters, checkpoint mismatch and similar caller errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Records

inline ordered_json to_json(const VerificationRecord& rec, bool with_timing) {
  ordered_json j;
  j["statement_id"] = std::string(to_string(rec.statement_id));
  j["p_or_q"] = rec.params.p_or_q;
  j["ext_degree"] = rec.params.ext_degree;
  j["d_class"] = rec.params.d_class ? ordered_json(std::string(to_string(*rec.params.d_class))) : ordered_json();
  j["m"] = rec.params.m ? ordered_json(*rec.params.m) : ordered_json();
  ordered_json computed = ordered_json::object();
  for (const auto& [k, v] : rec.computed) computed[k] = v;
  j["computed"] = std::move(computed);
  j["verdict"] = std::string(to_string(rec.verdict));
  if (rec.verdict == Verdict::skipped_precondition) j["precondition"] = rec.precondition;
  if (with_timing) j["elapsed_ms"] = std::round(rec.elapsed_ms * 1000.0) / 1000.0;
  return j;
}

/// Schema check for one output line; returns an empty string when valid.
inline std::string validate_record(const nlohmann::json& j) {
  static const std::set<std::string> verdicts{"pass", "fail", "degenerate_zero", "report_only",
                                              "skipped_precondition"};
  static const std::set<std::string> known{"statement_id", "p_or_q", "ext_degree", "d_class", "m",
                                           "computed", "verdict", "precondition", "elapsed_ms"};
  if (!j.is_object()) return "record is not an object";
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) return "unknown field " + k;
  }
  for (const char* k : {"statement_id", "p_or_q", "ext_degree", "d_class", "m", "computed", "verdict"}) {
    if (!j.contains(k)) return std::string("missing field ") + k;
  }
  if (!j["statement_id"].is_string() || !parse_statement(j["statement_id"].get<std::string>())) {
    return "bad statement_id";
  }
  if (!j["p_or_q"].is_number_unsigned()) return "p_or_q is not a nonnegative integer";
  if (!j["ext_degree"].is_number_unsigned() || j["ext_degree"].get<unsigned>() < 1) return "bad ext_degree";
  if (!j["d_class"].is_null() && j["d_class"] != "square" && j["d_class"] != "nonsquare") return "bad d_class";
  if (!j["m"].is_null() && !j["m"].is_number_unsigned()) return "bad m";
  if (!j["computed"].is_object()) return "computed is not an object";
  for (const auto& [k, v] : j["computed"].items()) {
    if (!v.is_string()) return "computed." + k + " is not a string";
  }
  if (!j["verdict"].is_string() || !verdicts.count(j["verdict"].get<std::string>())) return "bad verdict";
  const bool skipped = j["verdict"] == "skipped_precondition";
  if (skipped != j.contains("precondition")) return "precondition present iff skipped";
  if (j.contains("elapsed_ms") && !j["elapsed_ms"].is_number()) return "bad elapsed_ms";
  return {};
}

// ---------------------------------------------------------------------------
// Tasks

enum class DSelector { square, nonsquare, both };

struct ScanTask {
  StatementId statement = StatementId::thm1_4;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  DSelector d_class = DSelector::both;
  std::vector<unsigned> ext_degrees{1};
  /// exponent for thm1.3
  std::optional<unsigned> m;
  std::string out_path;
  std::string checkpoint_path;
  unsigned jobs = 1;
  bool timing = false;
};

/// Identity of the computation, independent of paths and parallelism.
inline std::string canonical_form(const ScanTask& t) {
  std::ostringstream os;
  os << "statement=" << to_string(t.statement) << ";min=" << t.min << ";max=" << t.max << ";d_class=";
  os << (t.d_class == DSelector::both ? "both" : t.d_class == DSelector::square ? "square" : "nonsquare");
  os << ";ext=";
  std::vector<unsigned> ext = t.ext_degrees;
  std::sort(ext.begin(), ext.end());
  ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
  for (std::size_t i = 0; i < ext.size(); ++i) os << (i ? "," : "") << ext[i];
  os << ";m=" << (t.m ? std::to_string(*t.m) : "-") << ";timing=" << t.timing;
  return os.str();
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string task_fingerprint(const ScanTask& t) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(canonical_form(t));
  return os.str();
}

/// One parameter value; may produce one record per d class.
struct ScanUnit {
  std::uint64_t param;
  unsigned ext_degree = 1;
};

namespace detail {

inline bool ext_allowed(const ScanTask& t, unsigned k) {
  return std::find(t.ext_degrees.begin(), t.ext_degrees.end(), k) != t.ext_degrees.end();
}

inline std::vector<DClass> d_classes(DSelector s) {
  switch (s) {
    case DSelector::square: return {DClass::square};
    case DSelector::nonsquare: return {DClass::nonsquare};
    case DSelector::both: break;
  }
  return {DClass::square, DClass::nonsquare};
}

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi,
                                                 std::optional<ResidueFilter> filter = std::nullopt) {
  if (hi < lo || hi < 2) return {};
  return primes_in(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi), filter);
}

}  // namespace detail

/// Parameter values visited by a task, ascending. Values outside a statement's
/// natural domain are not enumerated; those inside it that miss a stated
/// precondition produce skipped records. A single-value task (min == max) is
/// always evaluated, so an explicit request reports its precondition.
inline std::vector<ScanUnit> enumerate_units(const ScanTask& t) {
  if (t.min > t.max) throw UsageError("--min must not exceed --max");
  std::vector<ScanUnit> out;
  switch (t.statement) {
    case StatementId::thm1_1:
    case StatementId::thm1_2:
    case StatementId::lemma2_3:
      for (std::uint64_t q = std::max<std::uint64_t>(t.min, 3) | 1; q <= t.max; q += 2) {
        const auto pp = as_prime_power(q);
        if (!pp) continue;
        if (t.statement == StatementId::lemma2_3 || detail::ext_allowed(t, pp->k)) out.push_back({q, pp->k});
      }
      break;
    case StatementId::cor1_1:
      for (auto p : detail::primes_between(std::max<std::uint64_t>(t.min, 5), t.max)) {
        if (p != 11) out.push_back({p, 1});
      }
      break;
    case StatementId::cor1_2:
      for (auto p : detail::primes_between(std::max<std::uint64_t>(t.min, 11), t.max)) out.push_back({p, 1});
      break;
    case StatementId::thm1_3:
    case StatementId::thm1_4:
    case StatementId::thm1_5:
      for (auto p : detail::primes_between(t.min, t.max, ResidueFilter{1, 4})) out.push_back({p, 1});
      break;
    case StatementId::identities:
      for (auto p : detail::primes_between(std::max<std::uint64_t>(t.min, 5), t.max)) out.push_back({p, 1});
      break;
    case StatementId::lemma2_1:
    case StatementId::lemma2_2:
      for (std::uint64_t n = std::max<std::uint64_t>(t.min, 1); n <= t.max; ++n) out.push_back({n, 1});
      break;
  }
  if (out.empty() && t.min == t.max) {
    if (t.min == 0 && (t.statement == StatementId::lemma2_1 || t.statement == StatementId::lemma2_2)) {
      throw UsageError("order must be positive");
    }
    const auto pp = as_prime_power(t.min);
    out.push_back({t.min, pp ? pp->k : 1u});
  }
  return out;
}

inline std::vector<VerificationRecord> run_unit(const ScanTask& t, const ScanUnit& u) {
  std::vector<VerificationRecord> out;
  switch (t.statement) {
    case StatementId::thm1_1:
      for (DClass c : detail::d_classes(t.d_class)) out.push_back(verify_thm_1_1(u.param, u.ext_degree, c));
      break;
    case StatementId::thm1_2:
      for (DClass c : detail::d_classes(t.d_class)) out.push_back(verify_thm_1_2(u.param, u.ext_degree, c));
      break;
    case StatementId::cor1_2:
      for (DClass c : detail::d_classes(t.d_class)) out.push_back(verify_cor_1_2(u.param, c));
      break;
    case StatementId::cor1_1: out.push_back(verify_cor_1_1(u.param)); break;
    case StatementId::thm1_3: out.push_back(verify_thm_1_3(u.param, *t.m)); break;
    case StatementId::thm1_4: out.push_back(verify_thm_1_4(u.param)); break;
    case StatementId::thm1_5: out.push_back(verify_thm_1_5(u.param)); break;
    case StatementId::identities: out.push_back(verify_identities(u.param)); break;
    case StatementId::lemma2_1: out.push_back(verify_lemma_2_1_at(static_cast<unsigned>(u.param))); break;
    case StatementId::lemma2_2: out.push_back(verify_lemma_2_2_at(u.param)); break;
    case StatementId::lemma2_3: out.push_back(verify_lemma_2_3_at(u.param)); break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

struct Checkpoint {
  std::string fingerprint;
  std::uint64_t units_done = 0;
  std::optional<std::uint64_t> last_completed;
  std::uint64_t output_bytes = 0;
};

inline std::optional<Checkpoint> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
    Checkpoint c;
    c.fingerprint = j.at("fingerprint").get<std::string>();
    c.units_done = j.at("units_done").get<std::uint64_t>();
    if (!j.at("last_completed").is_null()) c.last_completed = j.at("last_completed").get<std::uint64_t>();
    c.output_bytes = j.at("output_bytes").get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("unreadable checkpoint " + path + ": " + e.what());
  }
}

/// Write to a sibling temporary, then rename over the target.
inline void save_checkpoint(const std::string& path, const Checkpoint& c) {
  ordered_json j;
  j["fingerprint"] = c.fingerprint;
  j["units_done"] = c.units_done;
  j["last_completed"] = c.last_completed ? ordered_json(*c.last_completed) : ordered_json();
  j["output_bytes"] = c.output_bytes;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Driver

struct ScanSummary {
  std::uint64_t records = 0;
  std::map<std::string, std::uint64_t> verdicts;
  /// p mod 7 over records whose computed symbol is -1 (cor1.2)
  std::set<std::uint64_t> minus_one_classes_mod_7;
  bool any_fail = false;

  void add(const nlohmann::json& rec) {
    ++records;
    const std::string v = rec.at("verdict").get<std::string>();
    ++verdicts[v];
    if (v == "fail") any_fail = true;
    const auto& c = rec.at("computed");
    if (c.contains("p_mod_7") && c.contains("symbol") && c["symbol"] == "-1") {
      minus_one_classes_mod_7.insert(std::stoull(c["p_mod_7"].get<std::string>()));
    }
  }

  void print(std::ostream& os, const ScanTask& t) const {
    os << to_string(t.statement) << " [" << t.min << ", " << t.max << "]: " << records << " records";
    for (const auto& [v, n] : verdicts) os << ", " << v << " " << n;
    os << '\n';
    if (t.statement == StatementId::cor1_2) {
      os << "p mod 7 over symbol -1 instances: {";
      bool first = true;
      for (auto r : minus_one_classes_mod_7) {
        os << (first ? "" : ", ") << r;
        first = false;
      }
      os << "}\n";
    }
  }
};

struct ScanOptions {
  /// Stop after this many newly completed units, as if interrupted. Test hook.
  std::optional<std::uint64_t> stop_after_units;
  std::uint64_t checkpoint_every = 16;
};

struct ScanResult {
  ScanSummary summary;
  bool completed = true;
};

namespace detail {

inline void validate_task(const ScanTask& t) {
  if (t.min > t.max) throw UsageError("--min must not exceed --max");
  if (t.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (t.ext_degrees.empty()) throw UsageError("no extension degree selected");
  for (unsigned k : t.ext_degrees) {
    if (k < 1 || k > kMaxExtensionDegree) throw UsageError("extension degree out of range");
  }
  if (t.statement == StatementId::thm1_3 && (!t.m || *t.m % 2 == 0)) throw UsageError("thm1.3 needs an odd --m");
  if (!t.checkpoint_path.empty() && t.out_path.empty()) throw UsageError("--checkpoint requires --out");
  if (t.statement == StatementId::lemma2_1 && t.max > 64) throw UsageError("lemma2.1 orders are limited to 64");
}

}  // namespace detail

/// Runs every unit of the task, writing records in ascending parameter order to
/// `out`. Workers take units from a shared counter; the calling thread is the
/// only writer and drains a reorder buffer. With a checkpoint path, progress is
/// committed every `checkpoint_every` units and an existing checkpoint resumes
/// the run after truncating the output to its last committed length.
inline ScanResult run_scan(const ScanTask& task, std::ostream* stream_out = nullptr, const ScanOptions& opts = {}) {
  detail::validate_task(task);
  const std::vector<ScanUnit> units = enumerate_units(task);
  const std::string fingerprint = task_fingerprint(task);
  ScanResult result;

  std::uint64_t start = 0;
  std::uint64_t offset = 0;
  std::optional<std::uint64_t> last_completed;
  std::ofstream file;
  std::ostream* out = stream_out;
  if (!task.out_path.empty()) {
    std::optional<Checkpoint> cp;
    if (!task.checkpoint_path.empty()) cp = load_checkpoint(task.checkpoint_path);
    if (cp) {
      if (cp->fingerprint != fingerprint) throw UsageError("checkpoint belongs to a different task");
      if (cp->units_done > units.size()) throw UsageError("checkpoint is ahead of the task");
      if (!std::filesystem::exists(task.out_path) || std::filesystem::file_size(task.out_path) < cp->output_bytes) {
        throw UsageError("output file is shorter than the checkpoint records");
      }
      std::filesystem::resize_file(task.out_path, cp->output_bytes);
      start = cp->units_done;
      offset = cp->output_bytes;
      last_completed = cp->last_completed;
      std::ifstream prev(task.out_path);
      std::string line;
      while (std::getline(prev, line)) {
        if (!line.empty()) result.summary.add(nlohmann::json::parse(line));
      }
      file.open(task.out_path, std::ios::binary | std::ios::app);
    } else {
      file.open(task.out_path, std::ios::binary | std::ios::trunc);
    }
    if (!file) throw UsageError("cannot open output " + task.out_path);
    out = &file;
  }
  if (out == nullptr) throw UsageError("no output stream");

  const std::uint64_t total = units.size();
  std::uint64_t end = total;
  if (opts.stop_after_units) end = std::min<std::uint64_t>(total, start + *opts.stop_after_units);

  std::mutex mu;
  std::condition_variable ready_cv, space_cv;
  std::map<std::uint64_t, std::string> ready;
  std::exception_ptr error;
  std::atomic<std::uint64_t> next{start};
  std::uint64_t written = start;
  const std::uint64_t window = 64 * std::uint64_t{task.jobs};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= end) return;
      {
        std::unique_lock lock(mu);
        space_cv.wait(lock, [&] { return i < written + window || error; });
        if (error) return;
      }
      std::string text;
      try {
        for (const auto& rec : run_unit(task, units[i])) text += to_json(rec, task.timing).dump() + '\n';
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        ready_cv.notify_all();
        space_cv.notify_all();
        return;
      }
      std::lock_guard lock(mu);
      ready.emplace(i, std::move(text));
      ready_cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < task.jobs; ++w) pool.emplace_back(worker);

  auto commit = [&] {
    out->flush();
    if (!task.checkpoint_path.empty()) {
      save_checkpoint(task.checkpoint_path, {fingerprint, written, last_completed, offset});
    }
  };

  try {
    while (written < end) {
      std::string text;
      {
        std::unique_lock lock(mu);
        ready_cv.wait(lock, [&] { return ready.count(written) || error; });
        if (error) break;
        text = std::move(ready[written]);
        ready.erase(written);
      }
      *out << text;
      offset += text.size();
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) result.summary.add(nlohmann::json::parse(line));
      last_completed = units[written].param;
      {
        std::lock_guard lock(mu);
        ++written;
      }
      space_cv.notify_all();
      if ((written - start) % opts.checkpoint_every == 0) commit();
    }
  } catch (...) {
    std::lock_guard lock(mu);
    if (!error) error = std::current_exception();
    space_cv.notify_all();
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  commit();
  result.completed = written == total;
  return result;
}

}  // namespace ldet

#endif  // LDET_SCAN_HPP
