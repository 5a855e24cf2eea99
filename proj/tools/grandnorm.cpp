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

// grandnorm command-line front end. Exit codes: 0 pass, 1 fail,
// 2 malformed CSV, 64 usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "grandnorm/run.hpp"

namespace {

using grandnorm::Command;
using grandnorm::RunConfig;

// Options shared by every subcommand. Optional values are staged in plain
// variables and copied into the config after parsing.
struct Staged {
  double tol = 0.0;
  double p = 0.0;
  double theta_prime = 0.0;
  std::size_t count = 0;
  std::size_t n = 0;
};

void add_common(CLI::App* app, RunConfig& c, Staged& s) {
  app->add_option("--gen", c.gens, "generator spec, e.g. log_power:theta=1,n=100000");
  app->add_option("--input", c.input, "input CSV (step function or grid function)");
  app->add_option("--weight", c.weight, "weight grid CSV");
  app->add_option("--boundary", c.boundary, "boundary CSV (index,value) for monotone relax");
  app->add_option("--theta", c.thetas, "theta value(s)")->delimiter(',');
  app->add_option("--p-max", c.p_max, "largest exponent of the p-grid")->capture_default_str();
  app->add_option("--ratio", c.ratio, "geometric ratio of the p-grid")->capture_default_str();
  app->add_option("--tol", s.tol, "tolerance (command specific default)");
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
  app->add_option("--out", c.out, "report path (default: stdout)");
  app->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_option("--p", s.p, "exponent (grand L^p, A_p, relax, Holder q)");
  app->add_option("--theta-prime", s.theta_prime, "larger theta for verify inclusions");
  app->add_option("--pairs", c.pairs, "random pairs for verify axioms")->capture_default_str();
  app->add_option("--count", s.count, "random corpus size");
  app->add_option("--n", s.n, "resolution");
  app->add_option("--alpha", c.alpha, "exponent of the default weight |x|^alpha")->capture_default_str();
  app->add_option("--operator", c.op, "opnorm operator")
      ->check(CLI::IsMember({"maximal", "cz"}))
      ->capture_default_str();
  app->add_option("--form", c.form, "grand L^p weighting")
      ->check(CLI::IsMember({"outer", "inner"}))
      ->capture_default_str();
  app->add_option("--grid-out", c.grid_out, "write the produced grid function as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grandnorm: grand Lebesgue norms, weak quasi-norms and their checks"};
  app.require_subcommand(1);
  RunConfig c;
  Staged s;

  struct Sub {
    const char* name;
    Command command;
    const char* help;
    const char* positional;
  };
  const Sub subs[] = {
      {"norm", Command::norm, "norms of one function", nullptr},
      {"verify", Command::verify, "verification suites", "axioms|inclusions|weak-strong|exp-equiv|layer-cake (thm31 is an alias of weak-strong)"},
      {"operators", Command::operators, "weighted operators", "maximal|hilbert|ap|doubling|opnorm"},
      {"monotone", Command::monotone, "weak monotonicity", "check|relax"},
      {"corpus", Command::corpus, "emit a generated step function as CSV", nullptr},
  };
  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const Sub& sub : subs) {
    CLI::App* a = app.add_subcommand(sub.name, sub.help);
    if (sub.positional) a->add_option("action", c.sub, sub.positional)->required();
    add_common(a, c, s);
    apps.emplace_back(a, sub.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return grandnorm::kExitUsage;
  }

  for (const auto& [a, command] : apps) {
    if (!a->parsed()) continue;
    c.command = command;
    if (a->count("--tol")) c.tol = s.tol;
    if (a->count("--p")) c.p = s.p;
    if (a->count("--theta-prime")) c.theta_prime = s.theta_prime;
    if (a->count("--count")) c.count = s.count;
    if (a->count("--n")) c.n = s.n;
  }
  return grandnorm::emit(c, std::cout, std::cerr);
}
