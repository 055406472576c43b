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

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "ldet/theorems.hpp"

using namespace ldet;

namespace {

std::vector<BigInt> big(std::initializer_list<std::uint64_t> xs) {
  std::vector<BigInt> out;
  for (auto x : xs) out.emplace_back(x);
  return out;
}

std::vector<BigInt> below(const std::vector<BigInt>& xs, std::uint64_t bound) {
  std::vector<BigInt> out;
  for (const auto& x : xs) {
    if (x < bound) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST(StatementIds, RoundTrip) {
  for (auto id : {StatementId::thm1_1, StatementId::cor1_1, StatementId::thm1_2, StatementId::cor1_2,
                  StatementId::thm1_3, StatementId::thm1_4, StatementId::thm1_5, StatementId::lemma2_1,
                  StatementId::lemma2_2, StatementId::lemma2_3, StatementId::identities}) {
    EXPECT_EQ(parse_statement(to_string(id)), id);
  }
  EXPECT_FALSE(parse_statement("thm9.9"));
}

TEST(SqrtDSymbol, SpecExamples) {
  EXPECT_EQ(sqrt_D_symbol(5, 1), -1);
  EXPECT_EQ(sqrt_D_symbol(5, 3), -1);
  EXPECT_EQ(sqrt_D_symbol(29, 5), 0);
  EXPECT_THROW(sqrt_D_symbol(7, 1), std::invalid_argument);
  EXPECT_THROW(sqrt_D_symbol(13, 2), std::invalid_argument);
}

TEST(CountNonresiduesQuarter, SpecExamples) {
  EXPECT_EQ(count_nonresidues_quarter(5), 0u);
  EXPECT_EQ(count_nonresidues_quarter(13), 1u);
  EXPECT_EQ(count_nonresidues_quarter(17), 1u);
}

TEST(SqrtDTheorems, SmallPrimes) {
  for (std::uint64_t p : {5u, 13u, 17u}) {
    EXPECT_EQ(verify_thm_1_4(p).verdict, Verdict::pass) << p;
    EXPECT_EQ(verify_thm_1_5(p).verdict, Verdict::pass) << p;
  }
  EXPECT_EQ(verify_thm_1_4(7).verdict, Verdict::skipped_precondition);
  const auto r = verify_thm_1_5(5);
  EXPECT_EQ(r.computed.at("lhs"), "-1");
  EXPECT_EQ(r.computed.at("symbol_modulus"), "3");
}

TEST(SqrtDTheorems, AllPrimesToTwoHundred) {
  for (std::uint64_t p : primes_in(5, 200, ResidueFilter{1, 4})) {
    EXPECT_EQ(verify_thm_1_4(p).verdict, Verdict::pass) << p;
    EXPECT_EQ(verify_thm_1_5(p).verdict, Verdict::pass) << p;
  }
}

TEST(Cor11, Examples) {
  const auto r5 = verify_cor_1_1(5);
  EXPECT_EQ(r5.verdict, Verdict::report_only);
  EXPECT_EQ(r5.computed.at("symbol"), "1");
  EXPECT_EQ(r5.computed.at("predicted"), "-1");
  EXPECT_EQ(r5.computed.at("raw_verdict"), "fail");
  EXPECT_EQ(verify_cor_1_1(7).verdict, Verdict::pass);
  EXPECT_EQ(verify_cor_1_1(13).verdict, Verdict::pass);
  EXPECT_EQ(verify_cor_1_1(11).verdict, Verdict::skipped_precondition);
  EXPECT_EQ(verify_cor_1_1(3).verdict, Verdict::skipped_precondition);
}

TEST(Thm11, PrimeFieldsPassBothClasses) {
  for (std::uint64_t p : primes_in(7, 150)) {
    for (DClass c : {DClass::square, DClass::nonsquare}) EXPECT_EQ(verify_thm_1_1(p, 1, c).verdict, Verdict::pass) << p;
  }
  EXPECT_EQ(verify_thm_1_1(5, 1, DClass::square).verdict, Verdict::report_only);
  EXPECT_EQ(verify_thm_1_1(3, 1, DClass::square).verdict, Verdict::skipped_precondition);
  EXPECT_THROW(verify_thm_1_1(15, 1, DClass::square), std::invalid_argument);
  EXPECT_THROW(verify_thm_1_1(25, 1, DClass::square), std::invalid_argument);
}

TEST(Thm11, ExtensionFieldsAreReported) {
  for (std::uint64_t q : {25u, 49u, 121u}) {
    const auto r = verify_thm_1_1(q, 2, DClass::square);
    EXPECT_EQ(r.verdict, Verdict::report_only) << q;
    EXPECT_EQ(r.computed.at("factorial_vanishes"), "true");
  }
}

TEST(Thm12, Examples) {
  const auto r11 = verify_thm_1_2(11, 1, DClass::square);
  EXPECT_EQ(r11.verdict, Verdict::report_only);
  EXPECT_EQ(r11.params.m, 0u);
  EXPECT_EQ(r11.computed.at("ratio"), "7");
  EXPECT_TRUE(r11.computed.count("raw_verdict"));
  const auto r13 = verify_thm_1_2(13, 1, DClass::square);
  EXPECT_EQ(r13.verdict, Verdict::report_only);
  EXPECT_EQ(r13.params.m, 1u);
  EXPECT_EQ(verify_thm_1_2(7, 1, DClass::square).verdict, Verdict::skipped_precondition);
}

TEST(Cor12, Examples) {
  const auto r = verify_cor_1_2(11, std::int64_t{1});
  EXPECT_EQ(r.verdict, Verdict::report_only);
  EXPECT_EQ(r.computed.at("raw_verdict"), "pass");
  EXPECT_EQ(r.computed.at("p_mod_7"), "4");
  EXPECT_EQ(verify_cor_1_2(7, std::int64_t{1}).verdict, Verdict::skipped_precondition);
  EXPECT_EQ(verify_cor_1_2(11, DClass::nonsquare).verdict, Verdict::skipped_precondition);
  EXPECT_EQ(verify_cor_1_2(13, DClass::square).params.d_class, DClass::square);
}

TEST(CoefficientVanishes, Examples) {
  EXPECT_TRUE(coefficient_vanishes(29, 5, 0));
  for (unsigned k = 0; k <= 2; ++k) EXPECT_FALSE(coefficient_vanishes(13, 5, k));
  for (std::uint64_t p : primes_in(5, 300, ResidueFilter{1, 4})) {
    for (unsigned m : {3u, 5u, 7u, 9u}) {
      for (unsigned k = 0; k <= m; ++k) EXPECT_EQ(coefficient_vanishes(p, m, k), coefficient_vanishes(p, m, m - k));
    }
  }
  EXPECT_EQ(coefficient_vanishes(BigInt(29), 5, 0), true);
}

TEST(CoefficientVanishes, AgreesWithFmkDivisibility) {
  for (std::uint64_t p : primes_in(30, 2000, ResidueFilter{1, 4})) {
    for (unsigned m : {1u, 3u, 5u, 7u, 9u, 11u}) {
      for (unsigned k = 0; k <= (m - 1) / 2; ++k) {
        EXPECT_EQ(coefficient_vanishes(p, m, k), fmk(m, k).value % p == 0) << p << " " << m << " " << k;
      }
    }
  }
}

TEST(PDividesD, Examples) {
  EXPECT_TRUE(p_divides_D(29, 5));
  EXPECT_FALSE(p_divides_D(5, 1));
  EXPECT_TRUE(p_divides_D(13, 7));
}

TEST(ComputeE, SmallSets) {
  EXPECT_TRUE(compute_E(1).members.empty());
  EXPECT_TRUE(compute_E(3).members.empty());
  const auto e5 = compute_E(5);
  EXPECT_EQ(e5.members, big({29}));
  EXPECT_TRUE(e5.complete);
  EXPECT_THROW(compute_E(4), std::invalid_argument);
}

TEST(ComputeE, MembersBelowOneThousand) {
  EXPECT_EQ(below(compute_E(7).members, 1000), big({13, 53}));
  EXPECT_EQ(below(compute_E(9).members, 1000), big({13, 17, 29}));
  EXPECT_EQ(below(compute_E(11).members, 1000), big({17, 29}));
  EXPECT_EQ(below(compute_E(13).members, 1000), big({17, 109, 401}));
}

TEST(ComputeE, LargeMembersConfirmedByDeterminant) {
  // members above 1000 that fall inside the direct bound
  const std::vector<std::pair<unsigned, std::uint64_t>> cases{{7, 2477}, {9, 1201}, {11, 1597}};
  for (const auto& [m, p] : cases) {
    const auto e = compute_E(m);
    ASSERT_TRUE(e.provenance.count(BigInt(p))) << m;
    const auto& prov = e.provenance.at(BigInt(p));
    EXPECT_EQ(prov.determinant_confirmed, true);
    EXPECT_TRUE(prov.coefficient_confirmed);
    EXPECT_TRUE(p_divides_D(p, m));
    EXPECT_TRUE(e.rejected.empty());
  }
  EXPECT_FALSE(p_divides_D(2473, 7));
}

TEST(ComputeE, MatchesDirectScanUpToBound) {
  for (unsigned m : {1u, 3u, 5u, 7u}) {
    const auto e = compute_E(m);
    std::vector<BigInt> scanned;
    for (std::uint64_t p : primes_in(2, 400, ResidueFilter{1, 4})) {
      if (p_divides_D(p, m)) scanned.emplace_back(p);
    }
    EXPECT_EQ(below(e.members, 400), scanned) << m;
  }
}

TEST(Thm13, Consistency) {
  for (std::uint64_t p : primes_in(5, 200, ResidueFilter{1, 4})) {
    for (unsigned m : {1u, 3u, 5u, 7u}) EXPECT_EQ(verify_thm_1_3(p, m).verdict, Verdict::pass) << p << " " << m;
  }
  const auto r = verify_thm_1_3(29, 5);
  EXPECT_EQ(r.computed.at("divides_D"), "true");
  EXPECT_EQ(r.computed.at("member_of_E"), "true");
  EXPECT_THROW(verify_thm_1_3(29, 4), std::invalid_argument);
}

TEST(AssertionPolicy, DegenerateZeroRequiresMembership) {
  VerificationRecord rec{StatementId::thm1_4, {29, 1, std::nullopt, 1}, {}, Verdict::degenerate_zero, {}, 0};
  VerificationRecord bare = rec;
  apply_assertion_policy(bare);
  EXPECT_EQ(bare.verdict, Verdict::fail);
  EXPECT_EQ(bare.computed.at("raw_verdict"), "degenerate_zero");
  rec.computed["member_of_E"] = "true";
  apply_assertion_policy(rec);
  EXPECT_EQ(rec.verdict, Verdict::degenerate_zero);
}

TEST(AssertionPolicy, Domains) {
  VerificationRecord r{StatementId::thm1_1, {343, 3, DClass::square, 2}, {}, Verdict::pass, {}, 0};
  EXPECT_FALSE(is_asserted(r));
  r.params = {13, 1, DClass::square, 2};
  EXPECT_TRUE(is_asserted(r));
  r.statement_id = StatementId::cor1_2;
  EXPECT_FALSE(is_asserted(r));
  r.statement_id = StatementId::identities;
  EXPECT_TRUE(is_asserted(r));
}

TEST(Identities, SmallPrimes) {
  for (std::uint64_t p : primes_in(5, 300)) EXPECT_EQ(verify_identities(p).verdict, Verdict::pass) << p;
  const auto r7 = verify_identities(7);
  EXPECT_EQ(r7.computed.at("product_of_square_differences"), "n/a");
  EXPECT_EQ(r7.computed.at("S_p_minus_2"), "pass");
  const auto r13 = verify_identities(13);
  EXPECT_EQ(r13.computed.at("half_factorial_squared"), "pass");
  EXPECT_EQ(r13.computed.at("S_p_minus_2"), "n/a");
  EXPECT_EQ(verify_identities(3).verdict, Verdict::skipped_precondition);
}

TEST(Lemmas, Verifiers) {
  EXPECT_EQ(verify_lemma_2_1(field_create(101), 5, 30, 7).verdict, Verdict::pass);
  EXPECT_EQ(verify_lemma_2_1(field_create(7, 2), 6, 30, 8).verdict, Verdict::pass);
  EXPECT_EQ(verify_lemma_2_1_at(4, 10).verdict, Verdict::pass);
  EXPECT_EQ(verify_lemma_2_2(60).verdict, Verdict::pass);
  EXPECT_EQ(verify_lemma_2_2(60).computed.at("failed_instances"), "0");
  EXPECT_EQ(verify_lemma_2_3(243).verdict, Verdict::pass);
  EXPECT_EQ(verify_lemma_2_3_at(9).computed.at("explicit_sign"), verify_lemma_2_3_at(9).computed.at("formula_sign"));
  EXPECT_EQ(verify_lemma_2_3_at(15).verdict, Verdict::skipped_precondition);
}

TEST(HuangPan, AgreesForSmallPrimes) {
  for (std::uint64_t p : primes_in(3, 200)) EXPECT_TRUE(huang_pan_agrees(p)) << p;
}
