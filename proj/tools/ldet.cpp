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

// ldet: evaluate the determinant families, scan the statements about them,
// search E(m), and run the self-test battery.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldet/field.hpp"
#include "ldet/matrix.hpp"
#include "ldet/ntheory.hpp"
#include "ldet/scan.hpp"
#include "ldet/selftest.hpp"
#include "ldet/theorems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIncomplete = 3;

using ldet::UsageError;

struct DetArgs {
  std::string family;
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> q;
  unsigned ext_degree = 1;
  std::optional<std::int64_t> d;
  std::optional<std::string> d_class;
  std::uint64_t m = 0;
  bool print_matrix = false;
};

struct VerifyArgs {
  std::string statement;
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> min;
  std::optional<std::uint64_t> max;
  std::vector<unsigned> ext_degrees{1};
  std::string d_class = "both";
  std::optional<unsigned> m;
  unsigned jobs = 1;
  std::string out;
  std::string checkpoint;
  bool timing = false;
};

struct SearchArgs {
  unsigned m = 0;
  std::uint64_t direct_bound = ldet::kDefaultDirectBound;
  std::string out;
};

ldet::Field field_for(const DetArgs& a) {
  if (a.q) {
    const auto pp = ldet::as_prime_power(*a.q);
    if (!pp || pp->p == 2) throw UsageError("--q must be an odd prime power");
    return ldet::field_create(pp->p, pp->k);
  }
  if (!a.p) throw UsageError("--p or --q is required");
  return ldet::field_create(*a.p, a.ext_degree);
}

void print_result(const ldet::MatrixOverField& mat, bool print_matrix) {
  const auto& f = *mat.ctx();
  std::cout << "field = F_" << f.order() << "\n";
  std::cout << "order = " << mat.order() << "\n";
  if (print_matrix) std::cout << "matrix =\n" << mat.to_string();
  std::cout << "det = " << ldet::det(mat).to_string() << "\n";
  if (mat.order() % 2 == 0 && mat.is_skew_symmetric()) {
    std::cout << "pfaffian = " << ldet::pfaffian(mat).to_string() << "\n";
  }
}

int cmd_det(const DetArgs& a) {
  const std::int64_t d = a.d.value_or(1);
  if (a.family == "T") {
    if (!a.p) throw UsageError("--p is required");
    print_result(ldet::build_T(*a.p, d, a.m), a.print_matrix);
  } else if (a.family == "Ttilde") {
    const ldet::Field f = field_for(a);
    ldet::FieldElem dd = ldet::embed_int(f, d);
    if (a.d_class) {
      if (a.d) throw UsageError("--d and --d-class are exclusive");
      if (*a.d_class == "square") dd = ldet::one(f);
      else if (*a.d_class == "nonsquare") dd = ldet::smallest_nonsquare(f);
      else throw UsageError("--d-class must be square or nonsquare here");
    }
    print_result(ldet::build_T_tilde(f, dd, a.m), a.print_matrix);
  } else if (a.family == "D") {
    if (!a.p) throw UsageError("--p is required");
    if (a.m == 0) throw UsageError("--m must be positive for D");
    const std::uint64_t n = *a.p;
    if (n >= 3 && n % 2 == 1 && !ldet::is_prime(n)) {
      const ldet::ResidueMatrix r = ldet::build_D_residue(n, a.m);
      std::cout << "ring = Z/" << n << "Z\n";
      std::cout << "order = " << r.n << "\n";
      if (a.print_matrix) {
        std::cout << "matrix =\n";
        for (std::size_t i = 0; i < r.n; ++i) {
          for (std::size_t j = 0; j < r.n; ++j) std::cout << (j ? " " : "") << r.entries[i * r.n + j];
          std::cout << "\n";
        }
      }
      std::cout << "det = " << ldet::det_mod(r) << "\n";
    } else {
      print_result(ldet::build_D(n, a.m), a.print_matrix);
    }
  } else if (a.family == "S") {
    if (!a.p) throw UsageError("--p is required");
    print_result(ldet::build_S(*a.p, d, a.m), a.print_matrix);
  } else {
    throw UsageError("unknown family " + a.family);
  }
  return kExitOk;
}

ldet::DSelector parse_selector(const std::string& s) {
  if (s == "square") return ldet::DSelector::square;
  if (s == "nonsquare") return ldet::DSelector::nonsquare;
  if (s == "both") return ldet::DSelector::both;
  throw UsageError("--d-class must be square, nonsquare or both");
}

int cmd_verify(const VerifyArgs& a) {
  const auto id = ldet::parse_statement(a.statement);
  if (!id) throw UsageError("unknown statement " + a.statement);
  ldet::ScanTask task;
  task.statement = *id;
  if (a.p) {
    if (a.min || a.max) throw UsageError("--p/--q excludes --min/--max");
    task.min = task.max = *a.p;
  } else {
    if (!a.min || !a.max) throw UsageError("give --p/--q or both --min and --max");
    task.min = *a.min;
    task.max = *a.max;
  }
  task.d_class = parse_selector(a.d_class);
  task.ext_degrees = a.ext_degrees;
  task.m = a.m;
  task.out_path = a.out;
  task.checkpoint_path = a.checkpoint;
  task.jobs = a.jobs;
  task.timing = a.timing;

  const ldet::ScanResult result = ldet::run_scan(task, &std::cout);
  result.summary.print(std::cerr, task);
  return result.summary.any_fail ? kExitAssertion : kExitOk;
}

nlohmann::ordered_json big(const ldet::BigInt& v) {
  if (ldet::detail::fits_u64(v)) return static_cast<std::uint64_t>(v);
  return ldet::to_string(v);
}

int cmd_search_e(const SearchArgs& a) {
  if (a.m == 0 || a.m % 2 == 0) throw UsageError("--m must be odd and positive");
  const ldet::EmReport r = ldet::compute_E(a.m, a.direct_bound);
  nlohmann::ordered_json j;
  j["m"] = r.m;
  j["members"] = nlohmann::ordered_json::array();
  for (const auto& p : r.members) j["members"].push_back(big(p));
  j["complete"] = r.complete;
  j["bound_M"] = big(r.bound_M);
  j["direct_bound"] = a.direct_bound;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [p, pv] : r.provenance) {
    nlohmann::ordered_json e;
    e["direct_scan"] = pv.direct_scan;
    e["fmk_k"] = pv.fmk_ks;
    e["determinant_confirmed"] = pv.determinant_confirmed ? nlohmann::ordered_json(*pv.determinant_confirmed)
                                                          : nlohmann::ordered_json();
    e["coefficient_confirmed"] = pv.coefficient_confirmed;
    prov[ldet::to_string(p)] = std::move(e);
  }
  j["provenance"] = std::move(prov);
  j["fmk"] = nlohmann::ordered_json::array();
  for (const auto& row : r.fmk_table) {
    nlohmann::ordered_json e;
    e["k"] = row.value.k;
    e["value"] = big(row.value.value);
    nlohmann::ordered_json factors = nlohmann::ordered_json::object();
    for (const auto& [prime, exp] : row.factorization.factors) factors[ldet::to_string(prime)] = exp;
    e["factors"] = std::move(factors);
    e["complete"] = row.factorization.complete;
    j["fmk"].push_back(std::move(e));
  }
  j["rejected"] = nlohmann::ordered_json::array();
  for (const auto& p : r.rejected) j["rejected"].push_back(big(p));

  const std::string text = j.dump() + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open output " + a.out);
    out << text;
  }
  std::cerr << "E(" << r.m << ") = {";
  for (std::size_t i = 0; i < r.members.size(); ++i) std::cerr << (i ? ", " : "") << r.members[i];
  std::cerr << "}" << (r.complete ? "" : " (incomplete factorization)") << "\n";
  return r.complete ? kExitOk : kExitIncomplete;
}

int cmd_selftest() {
  const auto results = ldet::run_selftest({}, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.ok() ? 0 : 1;
  std::cout << (failed == 0 ? "selftest: all checks passed" : "selftest: " + std::to_string(failed) + " checks failed")
            << std::endl;
  return failed == 0 ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character-weighted determinants over finite fields"};
  app.require_subcommand(1);

  DetArgs det_args;
  auto* det = app.add_subcommand("det", "Evaluate one matrix of a family");
  det->add_option("--family", det_args.family, "T, Ttilde, D or S")
      ->required()
      ->check(CLI::IsMember({"T", "Ttilde", "D", "S"}));
  det->add_option("--p", det_args.p, "Prime (or odd modulus for D)");
  det->add_option("--q", det_args.q, "Prime power, Ttilde only");
  det->add_option("--ext-degree", det_args.ext_degree, "Extension degree with --p");
  det->add_option("--d", det_args.d, "Integer parameter d");
  det->add_option("--d-class", det_args.d_class, "Canonical d for Ttilde: square or nonsquare");
  det->add_option("--m", det_args.m, "Exponent m (for S: 0 or (p-1)/2..p-1)");
  det->add_flag("--print-matrix", det_args.print_matrix, "Print the matrix");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Scan a statement over a parameter range");
  verify->add_option("--statement", ver.statement, "Statement id")->required();
  verify->add_option("--p,--q", ver.p, "Single parameter value");
  verify->add_option("--min", ver.min, "Smallest parameter");
  verify->add_option("--max", ver.max, "Largest parameter");
  verify->add_option("--ext-degree", ver.ext_degrees, "Extension degrees to include")->delimiter(',');
  verify->add_option("--d-class", ver.d_class, "square, nonsquare or both");
  verify->add_option("--m", ver.m, "Exponent for thm1.3");
  verify->add_option("--jobs", ver.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out", ver.out, "Output file (default stdout)");
  verify->add_option("--checkpoint", ver.checkpoint, "Checkpoint file for resumable runs");
  verify->add_flag("--timing", ver.timing, "Include elapsed_ms in records");

  SearchArgs search;
  auto* search_e = app.add_subcommand("search-e", "Compute E(m)");
  search_e->add_option("--m", search.m, "Odd exponent")->required();
  search_e->add_option("--direct-bound", search.direct_bound, "Largest (p-1)/2 confirmed by determinant");
  search_e->add_option("--out", search.out, "Output file (default stdout)");

  auto* selftest = app.add_subcommand("selftest", "Run the property battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (det->parsed()) return cmd_det(det_args);
    if (verify->parsed()) return cmd_verify(ver);
    if (search_e->parsed()) return cmd_search_e(search);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
