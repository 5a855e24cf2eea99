// Copyright 2026 The grandnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "grandnorm/verify.hpp"

using namespace grandnorm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const StepFunction& neg_log() {
  static const StepFunction f = discretize(AnalyticFunctionSpec::log_power(1.0, 100000));
  return f;
}

}  // namespace

TEST_CASE("equivalence checks pass on an indicator") {
  const auto f = discretize(AnalyticFunctionSpec::indicator(0.0, 0.3, 100));
  for (double theta : {0.0, 0.5, 1.0, 2.0}) {
    const auto r = verify_equivalence(f, theta);
    CHECK(r.passed());
    CHECK(r.split_pairs > 0);
    CHECK(r.domination_worst_ratio <= 1.0);
  }
}

TEST_CASE("equivalence checks pass on 200 random step functions") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto f = discretize(AnalyticFunctionSpec::random_step(derive_seed(77, s), 24));
    const auto r = verify_equivalence(f, 1.0);
    INFO("seed " << s);
    CHECK(r.split_passed());
    CHECK(r.domination_passed());
    CHECK(r.chain_passed());
  }
}

TEST_CASE("weak and grand norms of -ln x") {
  // Oracles: M_p(-ln x) = sup_t t e^(-t/p) = p/e, so p^-1 M_p = 1/e for every p;
  // p^-1 Gamma(p+1)^(1/p) is maximal at p = 1 where it equals 1.
  const auto r = verify_equivalence(neg_log(), 1.0);
  CHECK(r.passed());
  CHECK_THAT(r.grand_value, WithinRel(1.0, 0.02));
  CHECK_THAT(r.weak_value, WithinRel(1.0 / std::numbers::e, 0.02));
  CHECK_THAT(r.observed_constant, WithinRel(std::numbers::e, 0.03));
}

TEST_CASE("the whole analytic corpus passes the equivalence checks") {
  for (const auto& spec : analytic_corpus(20000)) {
    INFO(spec.describe());
    const auto r = verify_equivalence(discretize(spec), 1.0);
    CHECK(r.domination_violations == 0);
    CHECK(r.split_violations == 0);
  }
}

TEST_CASE("norm axioms on random pairs") {
  std::vector<std::pair<StepFunction, StepFunction>> pairs;
  for (std::uint64_t s = 0; s < 100; ++s) pairs.push_back(random_pair(derive_seed(3, s), 32));
  const double thetas[] = {0.0, 0.5, 1.0, 2.0};
  const auto r = verify_norm_axioms(pairs, thetas);
  CHECK(r.pairs == 100);
  CHECK(r.passed());
  CHECK(r.worst_triangle_ratio <= 1.0 + 1e-10);
  CHECK(r.worst_homogeneity_error <= 1e-12);
}

TEST_CASE("axioms with f = -g give a zero sum") {
  const StepFunction f({{1.0, 0.25}, {-2.0, 0.25}, {3.0, 0.5}});
  const StepFunction g = f.scaled(-1.0);
  const std::pair<StepFunction, StepFunction> pair[] = {{f, g}};
  const double thetas[] = {0.0, 1.0};
  const auto r = verify_norm_axioms(pair, thetas);
  CHECK(r.definiteness_violations == 0);
  CHECK(r.passed());
  CHECK(sum_on_shared_partition(f, g).is_zero());
}

TEST_CASE("inclusions are ordered and L^q is controlled") {
  for (double theta : {0.25, 0.5}) {
    const auto f = discretize(AnalyticFunctionSpec::log_power(theta, 20000));
    for (double q : {1.0, 2.0, 7.0, 50.0}) {
      const auto r = verify_inclusions(f, theta, 1.0, q);
      CHECK(r.passed());
      CHECK(r.q >= q);
      CHECK(r.norm_theta_prime <= r.norm_theta);
      CHECK(r.norm_theta <= r.sup_norm);
    }
  }
  const auto c = discretize(AnalyticFunctionSpec::constant(2.0, 4));
  CHECK_THROWS_AS(verify_inclusions(c, 1.0, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_inclusions(c, 0.5, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("log power witnesses a proper inclusion") {
  const std::size_t ns[] = {2000, 4000, 8000};
  for (double theta : {0.5, 1.0}) {
    const auto w = witness_log_power(theta, ns);
    CHECK(w.sup_growing());
    CHECK(w.grand_bounded(std::pow(2.0, theta)));
  }
}

TEST_CASE("layer-cake sweep") {
  std::vector<StepFunction> corpus;
  for (std::uint64_t s = 0; s < 30; ++s) {
    corpus.push_back(discretize(AnalyticFunctionSpec::random_step(derive_seed(11, s), 40)));
  }
  corpus.push_back(neg_log());
  const double exps[] = {1.0, 1.5, 2.0, 3.0, 7.0};
  const auto r = verify_layer_cake(corpus, exps);
  CHECK(r.cases == corpus.size() * 5);
  CHECK(r.passed());
  CHECK(r.worst_discrepancy <= 1e-10);
}

TEST_CASE("EXP norm and its equivalence with the theta = 1 grand norm") {
  // mean exp(-ln x / lambda) = 1 / (1 - 1/lambda) equals 2 at lambda = 2.
  CHECK_THAT(exp_class_norm(neg_log()), WithinRel(2.0, 0.01));
  // A constant c needs exp(c / lambda) = 2.
  const auto c = discretize(AnalyticFunctionSpec::constant(3.0, 8));
  CHECK_THAT(exp_class_norm(c), WithinRel(3.0 / std::log(2.0), 1e-9));

  const auto r = verify_exp_equivalence(exp_corpus(20000));
  CHECK(r.entries.size() == exp_corpus(1).size());
  CHECK(r.stable(0.05));
  CHECK(r.min_ratio > 0.0);
  CHECK(std::isfinite(r.max_ratio));
}
