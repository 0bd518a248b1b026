// Copyright 2026 The ffslab Authors.
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

// ffslab: batch experiments on polynomial values in affine subspaces of
// finite fields. Every report is JSON (or CSV) with the resolved config.

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_io.hpp"
#include "ffslab/charsum.hpp"
#include "ffslab/constants.hpp"
#include "ffslab/counting.hpp"
#include "ffslab/family.hpp"
#include "ffslab/identity_suite.hpp"
#include "ffslab/waring.hpp"

namespace ffslab::cli {
namespace {

using nlohmann::json;

// -- parsing helpers ---------------------------------------------------------

Rational parse_rational(const std::string& text) {
  const std::string t = trim(text);
  try {
    if (const auto slash = t.find('/'); slash != std::string::npos) {
      std::size_t a = 0, b = 0;
      const auto num = std::stoll(t.substr(0, slash), &a);
      const auto den = std::stoll(t.substr(slash + 1), &b);
      if (a != slash || b != t.size() - slash - 1 || den == 0) throw std::invalid_argument(t);
      return Rational(num, den);
    }
    if (const auto dot = t.find('.'); dot != std::string::npos) {
      const std::string digits = t.substr(0, dot) + t.substr(dot + 1);
      const std::size_t places = t.size() - dot - 1;
      if (places > 15) throw std::invalid_argument(t);
      std::size_t used = 0;
      const auto num = std::stoll(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(t);
      return Rational(num, static_cast<std::int64_t>(*checked_pow(10, static_cast<unsigned>(places))));
    }
    std::size_t used = 0;
    const auto v = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return Rational(v);
  } catch (const std::logic_error&) {
    fail(ErrorCode::kConfigError, "not a rational number: '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_rational(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_rational(item).to_double());
  return out;
}

/// "p=2,e=1,r=8,pi=1,1,0,1,1,0,0,0,1": items without '=' continue the
/// previous value.
std::string field_descriptor_text(const std::string& text) {
  std::vector<std::string> tokens;
  for (const auto& item : split(text, ',')) {
    for (const auto& word : split(item, ' ')) {
      if (word.find('=') == std::string::npos && !tokens.empty()) {
        tokens.back() += "," + word;
      } else {
        tokens.push_back(word);
      }
    }
  }
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

// -- shared run state --------------------------------------------------------

struct Globals {
  unsigned threads = 1;
  std::uint64_t seed = 1;
  FieldOptions field_options;
};

std::mt19937_64 rng_for(const Globals& g, std::uint64_t stream, std::uint64_t index = 0) {
  std::seed_seq seq{g.seed, stream, index};
  std::array<std::uint64_t, 1> word{};
  seq.generate(word.begin(), word.end());
  return std::mt19937_64(word[0]);
}

Field make_field(const std::string& text, const Globals& g) {
  return Field::parse_descriptor(field_descriptor_text(text), g.field_options);
}

Element element_or_random(const Field& f, const std::optional<std::string>& text, std::mt19937_64& rng) {
  return text ? f.parse_element(*text) : f.from_index(rng());
}

AffineSubspace random_subspace(const Field& f, unsigned dim, std::mt19937_64& rng) {
  if (dim > f.r()) fail(ErrorCode::kDimensionMismatch, "subspace dimension exceeds r");
  for (;;) {
    std::vector<Element> basis;
    for (unsigned i = 0; i < dim; ++i) basis.push_back(f.from_index(rng()));
    try {
      return make_subspace(f, f.from_index(rng()), basis);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDependentBasis) throw;
    }
  }
}

/// --X "offset;b1;b2" or --dimX n (random, seeded).
struct SubspaceOption {
  std::string name;
  std::optional<std::string> text;
  std::optional<unsigned> dim;

  void attach(CLI::App* app, const std::string& what) {
    app->add_option("--" + name, text, what + " as 'offset;b1;b2;...', elements as coefficient lists");
    app->add_option("--dim" + name, dim, "dimension of a random " + what);
  }
  bool given() const { return text || dim; }
  AffineSubspace build(const Field& f, std::mt19937_64& rng) const {
    if (text) {
      std::string lines = *text;
      std::replace(lines.begin(), lines.end(), ';', '\n');
      return parse_subspace(f, lines);
    }
    if (dim) return random_subspace(f, *dim, rng);
    return whole_field(f);
  }
};

json subspace_json(const AffineSubspace& a) {
  std::vector<std::string> basis;
  for (const auto& b : a.basis()) basis.push_back(a.field().format(b));
  return {{"offset", a.field().format(a.offset())}, {"basis", basis}, {"dim", a.dim()}, {"size", a.size()}};
}

json field_json(const Field& f) {
  return {{"descriptor", f.descriptor()}, {"p", f.p()}, {"e", f.e()}, {"r", f.r()},
          {"m", f.m()},                   {"q", f.q()}, {"size", f.size()}};
}

unsigned cascade_degree(const Field& f, const UniPoly& g) {
  const auto form = classify_admissible_form(f, g);
  return form ? form->d : static_cast<unsigned>(std::max(0, g.degree()));
}

// -- output ------------------------------------------------------------------

struct Output {
  std::optional<std::string> path;

  void write(const std::string& text) const {
    if (!path) {
      std::cout << text;
      return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) fail(ErrorCode::kConfigError, "cannot write " + *path);
    out << text;
  }
};

/// Every option of the app and the selected subcommand with its effective
/// value. The worker count is left out so reports do not depend on it.
json resolved_config(const CLI::App& app, const CLI::App& sub, const Globals& g) {
  json cfg = json::object();
  cfg["command"] = sub.get_name();
  auto collect = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "config" || name == "threads" || name == "out") continue;
      std::string value;
      if (opt->get_expected_min() == 0) {
        value = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
      } else {
        value = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
      }
      cfg[name] = typed_value(value);
    }
  };
  collect(app);
  collect(sub);
  cfg["budget"] = g.field_options.budget;
  return cfg;
}

// -- subcommands -------------------------------------------------------------

struct Command {
  CLI::App* app = nullptr;
  std::function<void(const json& config)> run;
};

struct FieldArgs {
  std::string field;
  std::optional<std::string> f;
  std::string eps = "1/2";
  std::string eta = "1";
  Output out;

  void attach(CLI::App* app, bool needs_poly, bool needs_eps) {
    app->add_option("--field", field, "field as p=..,e=..,r=..[,pi=..]")->required();
    if (needs_poly) app->add_option("--f", f, "polynomial in X, e.g. 'X^3 + X'")->required();
    if (needs_eps) {
      app->add_option("--eps", eps, "epsilon in (0, 1]");
      app->add_option("--eta", eta, "eta in (0, 1]");
    }
    app->add_option("--out", out.path, "output file (default stdout)");
  }
};

void emit(const Output& out, const json& config, json result) {
  out.write(dump({{"config", config}, {"result", std::move(result)}}));
}

Command field_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("field", "construct a field and print its parameters");
  auto args = std::make_shared<FieldArgs>();
  args->attach(app, false, false);
  return {app, [args, &g](const json& config) {
            const auto f = make_field(args->field, g);
            json res = field_json(f);
            res["generator"] = f.format(f.generator());
            json subs = json::array();
            for (const auto& s : f.subfields()) subs.push_back({{"degree", s.degree}, {"size", s.size}});
            res["subfields"] = subs;
            emit(args->out, config, res);
          }};
}

Command delta_verify_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("delta-verify", "run the difference-operator identity suite");
  auto cfg = std::make_shared<IdentitySuiteConfig>();
  auto out = std::make_shared<Output>();
  app->add_option("--p", cfg->p, "prime");
  app->add_option("--dmin", cfg->dmin, "smallest degree");
  app->add_option("--dmax", cfg->dmax, "largest degree (clamped to p - 1)");
  app->add_option("--trials", cfg->trials, "random polynomials per degree");
  app->add_option("--r", cfg->r, "coefficients are drawn from F_{p^r}");
  app->add_option("--out", out->path, "output file (default stdout)");
  return {app, [cfg, out, &g](const json& config) {
            cfg->seed = g.seed;
            emit(*out, config, to_json(run_identity_suite(*cfg)));
          }};
}

Command eta_good_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("eta-good", "largest intersection of a subspace with subfield translates");
  auto args = std::make_shared<FieldArgs>();
  auto sub = std::make_shared<SubspaceOption>(SubspaceOption{"A", {}, {}});
  args->attach(app, false, true);
  sub->attach(app, "subspace");
  return {app, [args, sub, &g](const json& config) {
            const auto f = make_field(args->field, g);
            auto rng = rng_for(g, 1);
            const auto a = sub->build(f, rng);
            const auto rep = eta_goodness(a);
            json res = to_json(f, rep);
            res["subspace"] = subspace_json(a);
            res["eta_good"] = is_eta_good(rep, f.e() * a.dim(), parse_rational(args->eta));
            emit(args->out, config, res);
          }};
}

Command expsum_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("expsum", "additive character sum of f over an affine subspace");
  auto args = std::make_shared<FieldArgs>();
  auto sub = std::make_shared<SubspaceOption>(SubspaceOption{"A", {}, {}});
  auto tau = std::make_shared<std::string>("1");
  args->attach(app, true, true);
  sub->attach(app, "subspace (default: the whole field)");
  app->add_option("--tau", *tau, "character parameter as a coefficient list");
  return {app, [args, sub, tau, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            auto rng = rng_for(g, 1);
            const auto a = sub->build(f, rng);
            const auto sum = sum_over_subspace(poly, a, f.parse_element(*tau));
            const auto eps = parse_rational(args->eps), eta = parse_rational(args->eta);
            SubspaceSumParams in;
            in.p = f.p();
            in.q = f.q();
            in.r = f.r();
            in.s = a.dim();
            in.d = cascade_degree(f, poly);
            in.eps = eps;
            in.eta = eta;
            in.B = static_cast<double>(a.size());
            in.eta_good = is_eta_good(eta_goodness(a), f.e() * a.dim(), eta);
            in.form_ok = classify_admissible_form(f, poly).has_value();
            json res = to_json(sum);
            res["subspace"] = subspace_json(a);
            res["bound"] = to_json(bound_subspace_sum(in, sum.magnitude(), static_cast<double>(a.size())));
            const auto d = static_cast<unsigned>(std::max(0, poly.degree()));
            const bool whole = a.dim() == f.r();
            res["weil_applicable"] = whole && d >= 1 && std::gcd(d, f.p()) == 1;
            res["weil_bound"] = (d >= 1 ? d - 1.0 : 0.0) * std::sqrt(static_cast<double>(f.size()));
            emit(args->out, config, res);
          }};
}

Command multilinear_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("multilinear", "character sum of products a_1 a_2 ... a_n over sets");
  auto args = std::make_shared<FieldArgs>();
  auto sizes = std::make_shared<std::string>();
  auto sets = std::make_shared<std::string>();
  auto tau = std::make_shared<std::string>("1");
  args->attach(app, false, true);
  app->add_option("--sizes", *sizes, "sizes of random nonzero sets, e.g. 4,4,4");
  app->add_option("--sets", *sets, "explicit sets as 'a;b|c;d|...'");
  app->add_option("--tau", *tau, "character parameter as a coefficient list");
  return {app, [args, sizes, sets, tau, &g](const json& config) {
            const auto f = make_field(args->field, g);
            std::vector<std::vector<Element>> family;
            if (!sets->empty()) {
              for (const auto& block : split(*sets, '|')) {
                std::vector<Element> set;
                for (const auto& item : split(block, ';')) set.push_back(f.parse_element(item));
                family.push_back(std::move(set));
              }
            } else {
              auto rng = rng_for(g, 2);
              for (const auto& item : split(*sizes, ',')) {
                const auto n = static_cast<std::uint64_t>(parse_rational(item).num());
                if (n + 1 > f.size()) fail(ErrorCode::kInvalidArgument, "set larger than the nonzero elements");
                std::vector<std::uint32_t> pool(f.size() - 1);
                std::iota(pool.begin(), pool.end(), 1u);
                for (std::uint64_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
                std::vector<Element> set;
                for (std::uint64_t i = 0; i < n; ++i) set.push_back(Element{pool[i]});
                family.push_back(std::move(set));
              }
            }
            if (family.size() < 2) fail(ErrorCode::kConfigError, "multilinear needs --sizes or --sets with n >= 2");
            const Element t = f.parse_element(*tau);
            const auto sum = multilinear_sum(f, family, t);
            MultilinearParams in;
            in.p = f.p();
            in.q = f.q();
            in.r = f.r();
            in.eps = parse_rational(args->eps);
            in.eta = parse_rational(args->eta);
            for (const auto& set : family) in.sizes.push_back(set.size());
            in.eta_good.assign(family.size(), false);  // arbitrary sets are not certified
            json res = to_json(sum);
            res["sizes"] = in.sizes;
            res["abs_sum"] = multilinear_abs_sum(f, family, t);
            res["bound"] = to_json(bound_multilinear(in, sum.magnitude()));
            emit(args->out, config, res);
          }};
}

Command digits_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("digits", "twisted sum over the first N digit points xi_n");
  auto args = std::make_shared<FieldArgs>();
  struct Opts {
    std::optional<unsigned> s;
    std::optional<std::uint64_t> N;
    std::string alphas;
    std::string tau = "1";
    bool include_zero = false;
    bool refined = false;
  };
  auto o = std::make_shared<Opts>();
  args->attach(app, true, true);
  app->add_option("--s", o->s, "number of digits (default r)");
  app->add_option("--N", o->N, "window end (default p^s - 1)");
  app->add_option("--alphas", o->alphas, "digit phases of chi, e.g. 1/3,0 (default: chi = 1)");
  app->add_option("--tau", o->tau, "character parameter as a coefficient list");
  app->add_flag("--include-zero", o->include_zero, "start the window at n = 0");
  app->add_flag("--refined", o->refined, "use the refined bound variant");
  return {app, [args, o, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            const unsigned s = o->s.value_or(f.r());
            const auto dm = DigitMap::power_basis(f, s);
            const std::uint64_t n_max = o->N.value_or(dm.period() - 1);
            PMultiplicative chi{parse_double_list(o->alphas)};
            if (chi.alphas.size() > s) fail(ErrorCode::kInvalidArgument, "more digit phases than digits");
            chi.alphas.resize(s, 0.0);
            const Element t = f.parse_element(o->tau);
            const auto sum = twisted_sum_N(poly, dm, chi, t, n_max, o->include_zero);
            const auto span = subspace_of_digits(f, dm.omega(), s);
            DigitSumParams in;
            in.p = f.p();
            in.r = f.r();
            in.s = s;
            in.d = cascade_degree(f, poly);
            in.N = n_max;
            in.eps = parse_rational(args->eps);
            in.eta = parse_rational(args->eta);
            in.eta_good = is_eta_good(eta_goodness(span), span.dim(), in.eta);
            in.form_ok = classify_admissible_form(f, poly).has_value();
            json res = to_json(sum);
            res["s"] = s;
            res["N"] = n_max;
            res["subspace_sum"] = to_json(sum_over_subspace(poly, span, t));
            res["bound"] = to_json(bound_digit_sum(in, sum.magnitude(), o->refined));
            emit(args->out, config, res);
          }};
}

Command intersect_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("intersect", "count x in A with f(x) in B over a sweep of random subspaces");
  auto args = std::make_shared<FieldArgs>();
  auto a = std::make_shared<SubspaceOption>(SubspaceOption{"A", {}, {}});
  auto b = std::make_shared<SubspaceOption>(SubspaceOption{"B", {}, {}});
  auto sweep = std::make_shared<unsigned>(1);
  auto format = std::make_shared<std::string>("csv");
  args->attach(app, true, true);
  a->attach(app, "domain subspace A");
  b->attach(app, "target subspace B");
  app->add_option("--sweep", *sweep, "number of random (A, B) draws");
  app->add_option("--format", *format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  return {app, [args, a, b, sweep, format, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            if (!a->given() || !b->given()) fail(ErrorCode::kConfigError, "intersect needs A and B (or their dimensions)");
            const auto eps = parse_rational(args->eps), eta = parse_rational(args->eta);
            std::vector<IntersectReport> reports;
            for (unsigned i = 0; i < *sweep; ++i) {
              auto rng = rng_for(g, 3, i);
              const auto sa = a->build(f, rng);
              const auto sb = b->build(f, rng);
              reports.push_back(intersect_report(poly, sa, sb, eps, eta));
            }
            if (*format == "csv") {
              std::string text = "# config: " + config.dump() + "\n" + intersect_csv_header() + "\n";
              for (const auto& rep : reports) text += intersect_csv_row(rep) + "\n";
              args->out.write(text);
              return;
            }
            json rows = json::array();
            for (const auto& rep : reports) rows.push_back(to_json(rep));
            emit(args->out, config, {{"reports", rows}});
          }};
}

Command orbit_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("orbit", "orbit of u under f and its visits to a subspace");
  auto args = std::make_shared<FieldArgs>();
  auto sub = std::make_shared<SubspaceOption>(SubspaceOption{"A", {}, {}});
  struct Opts {
    std::optional<std::string> u;
    std::optional<std::uint64_t> maxlen;
    std::optional<std::uint64_t> N;
    bool allow_beyond = false;
  };
  auto o = std::make_shared<Opts>();
  args->attach(app, true, true);
  sub->attach(app, "subspace whose visits are counted");
  app->add_option("--u", o->u, "starting point (default random)");
  app->add_option("--maxlen", o->maxlen, "stop after this many distinct points");
  app->add_option("--N", o->N, "visit window n = 1..N (default: orbit length)");
  app->add_flag("--allow-beyond", o->allow_beyond, "let N run past the orbit length");
  return {app, [args, sub, o, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            auto rng = rng_for(g, 4);
            const Element u = element_or_random(f, o->u, rng);
            const auto stats = orbit(f, poly, u, o->maxlen);
            json res = {{"orbit", to_json(f, stats)}};
            if (sub->given()) {
              const auto a = sub->build(f, rng);
              OrbitHitOptions opt;
              opt.N = o->N;
              opt.allow_beyond_orbit = o->allow_beyond;
              opt.eps = parse_rational(args->eps);
              opt.eta = parse_rational(args->eta);
              res["subspace"] = subspace_json(a);
              res["hits"] = to_json(orbit_hits(stats, poly, a, opt));
            }
            emit(args->out, config, res);
          }};
}

Command orbit_intersect_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("orbit-intersect", "common points of an f-orbit and an l-orbit");
  auto args = std::make_shared<FieldArgs>();
  struct Opts {
    std::optional<std::string> u, v;
    std::string l;
  };
  auto o = std::make_shared<Opts>();
  args->attach(app, true, true);
  app->add_option("--l", o->l, "linearised polynomial 'p:b0,b1,...' meaning sum b_i X^{p^i}")->required();
  app->add_option("--u", o->u, "start of the f-orbit (default random)");
  app->add_option("--v", o->v, "start of the l-orbit (default random)");
  return {app, [args, o, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            const auto l = parse_linearised(f, o->l);
            auto rng = rng_for(g, 5);
            const Element u = element_or_random(f, o->u, rng);
            const Element v = element_or_random(f, o->v, rng);
            json res = to_json(orbit_intersection(f, poly, u, l, v, parse_rational(args->eps), parse_rational(args->eta)));
            res["u"] = f.format(u);
            res["v"] = f.format(v);
            emit(args->out, config, res);
          }};
}

template <class Counts>
std::string rep_counts_csv(const Field& f, const Counts& counts, unsigned k) {
  std::string text = "y,k,count\n";
  for (std::size_t y = 0; y < counts.size(); ++y) {
    text += "\"" + f.format(f.from_index(y)) + "\"," + std::to_string(k) + "," + counts[y].str() + "\n";
  }
  return text;
}

Command waring_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("waring", "smallest k with f(A) + ... + f(A) = L, and the k-fold counts");
  auto args = std::make_shared<FieldArgs>();
  auto sub = std::make_shared<SubspaceOption>(SubspaceOption{"A", {}, {}});
  struct Opts {
    std::optional<std::uint64_t> digits_N;
    std::optional<unsigned> s;
    bool include_zero = false;
    unsigned k = 0;
    std::optional<std::string> csv;
  };
  auto o = std::make_shared<Opts>();
  args->attach(app, true, true);
  sub->attach(app, "subspace (default: the whole field)");
  app->add_option("--digits-N", o->digits_N, "use the digit points xi_n, n <= N, instead of a subspace");
  app->add_option("--s", o->s, "digit count for --digits-N (default r)");
  app->add_flag("--include-zero", o->include_zero, "include n = 0 in the digit window");
  app->add_option("--k", o->k, "also compute N_k(y) for every y");
  app->add_option("--rep-counts-csv", o->csv, "write N_k(y) as CSV to this file");
  return {app, [args, sub, o, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            const auto eps = parse_rational(args->eps), eta = parse_rational(args->eta);
            json res;
            ValueMultiset mult;
            if (o->digits_N) {
              const auto dm = DigitMap::power_basis(f, o->s.value_or(f.r()));
              res = to_json(waring_G(poly, dm, *o->digits_N, eps, eta, o->include_zero));
              mult = digit_value_multiset(poly, dm, *o->digits_N, o->include_zero);
            } else {
              auto rng = rng_for(g, 6);
              const auto a = sub->build(f, rng);
              res = to_json(waring_report(poly, a, eps, eta));
              res["subspace"] = subspace_json(a);
              mult = value_multiset(poly, a);
            }
            if (o->k > 0) {
              const auto counts = rep_counts<boost::multiprecision::cpp_int>(f, mult, o->k);
              boost::multiprecision::cpp_int total = 0, least = counts.empty() ? 0 : counts[0];
              for (const auto& c : counts) {
                total += c;
                least = std::min(least, c);
              }
              res["rep_counts"] = {{"k", o->k}, {"total", total.str()}, {"min", least.str()}, {"covers", least > 0}};
              if (o->csv) Output{o->csv}.write(rep_counts_csv(f, counts, o->k));
            }
            emit(args->out, config, res);
          }};
}

Command disperser_command(CLI::App& root, Globals& g) {
  auto* app = root.add_subcommand("disperser", "check that Tr(tau f(x)) is nonconstant on every small subspace");
  auto args = std::make_shared<FieldArgs>();
  auto opt = std::make_shared<DisperserOptions>();
  auto tau = std::make_shared<std::string>("1");
  args->attach(app, true, true);
  app->add_option("--samples", opt->samples, "sample count when enumeration is over budget");
  app->add_option("--tau", *tau, "projection parameter as a coefficient list");
  return {app, [args, opt, tau, &g](const json& config) {
            const auto f = make_field(args->field, g);
            const auto poly = parse_poly(f, *args->f);
            DisperserOptions run = *opt;
            run.seed = g.seed;
            run.tau = f.parse_element(*tau);
            emit(args->out, config, to_json(disperser_check(f, poly, parse_rational(args->eps), run)));
          }};
}

json rational_json(const Rational& x) { return {{"exact", x.to_string()}, {"value", x.to_double()}}; }

Command constants_command(CLI::App& root, Globals&) {
  auto* app = root.add_subcommand("constants", "tables of gamma, delta and the theta exponents");
  struct Opts {
    std::string eps = "1/2,1/3";
    std::string eta = "1";
    std::string d = "4,8,16";
    std::string rho = "1/2,1";
    Output out;
  };
  auto o = std::make_shared<Opts>();
  app->add_option("--eps", o->eps, "epsilon grid");
  app->add_option("--eta", o->eta, "eta grid");
  app->add_option("--d", o->d, "degree grid");
  app->add_option("--rho", o->rho, "rho grid");
  app->add_option("--out", o->out.path, "output file (default stdout)");
  return {app, [o](const json& config) {
            const auto eps = parse_rational_list(o->eps), eta = parse_rational_list(o->eta);
            const auto ds = parse_double_list(o->d), rhos = parse_double_list(o->rho);
            json gamma = json::array(), delta = json::array(), theta = json::array();
            json theta_rho = json::array(), theta_eta = json::array();
            for (const auto& h : eta) {
              auto row = rational_json(constants::gamma(h));
              row["eta"] = h.to_string();
              gamma.push_back(row);
            }
            for (const auto& e : eps) {
              for (const auto& h : eta) {
                auto row = rational_json(constants::delta(e, h));
                row["eps"] = e.to_string();
                row["eta"] = h.to_string();
                delta.push_back(row);
              }
              for (double d : ds) {
                theta.push_back({{"eps", e.to_string()}, {"d", d}, {"value", constants::theta(e, d)}});
                for (double rho : rhos) {
                  theta_rho.push_back(
                      {{"eps", e.to_string()}, {"rho", rho}, {"d", d}, {"value", constants::theta_rho(e, rho, d)}});
                }
                for (const auto& h : eta) {
                  theta_eta.push_back({{"eps", e.to_string()},
                                       {"eta", h.to_string()},
                                       {"d", d},
                                       {"value", constants::theta_eta(e, h, d)},
                                       {"refined", constants::theta_eta_refined(e, h, d)}});
                }
              }
            }
            emit(o->out, config,
                 {{"gamma", gamma}, {"delta", delta}, {"theta", theta}, {"theta_rho", theta_rho}, {"theta_eta", theta_eta}});
          }};
}

// -- entry point -------------------------------------------------------------

void print_error(const std::string& code, const std::string& message) {
  std::cout << dump({{"error", code}, {"message", message}});
}

std::uint64_t budget_from_env() {
  const char* env = std::getenv("FFSLAB_BUDGET");
  if (!env) return kDefaultBudget;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size() && v > 0) return v;
  } catch (const std::logic_error&) {
  }
  fail(ErrorCode::kConfigError, std::string("FFSLAB_BUDGET is not a positive integer: ") + env);
}

/// Moves --config out of the arguments and splices the file's settings in
/// right after the subcommand, so later command-line values win.
std::vector<std::string> expand_args(std::vector<std::string> args, const std::vector<std::string>& commands) {
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorCode::kConfigError, "--config needs a path");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      --i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    }
  }
  auto is_command = [&](const std::string& a) { return std::find(commands.begin(), commands.end(), a) != commands.end(); };
  const auto cmd = std::find_if(args.begin(), args.end(), is_command);
  std::optional<std::string> command;
  if (cmd != args.end()) {
    command = *cmd;
    args.erase(cmd);
  }
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  if (config_path) {
    auto file = load_config(*config_path);
    if (!command) command = file.command;
    from_file = std::move(file.args);
  }
  const bool wants_help = std::find_if(args.begin(), args.end(), [](const std::string& a) {
                            return a == "--help" || a == "-h";
                          }) != args.end();
  if (!command && !wants_help) fail(ErrorCode::kConfigError, "no subcommand given");
  if (command) out.push_back(*command);
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), args.begin(), args.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"ffslab: polynomial values in affine subspaces of finite fields", "ffslab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--config", "config file: JSON object or key=value lines");

  std::vector<Command> commands = {
      field_command(app, g),         delta_verify_command(app, g), eta_good_command(app, g),
      expsum_command(app, g),        multilinear_command(app, g),  digits_command(app, g),
      intersect_command(app, g),     orbit_command(app, g),        orbit_intersect_command(app, g),
      waring_command(app, g),        disperser_command(app, g),    constants_command(app, g)};
  std::vector<std::string> names;
  for (const auto& c : commands) names.push_back(c.app->get_name());

  try {
    auto args = expand_args(std::vector<std::string>(argv + 1, argv + argc), names);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      fail(ErrorCode::kConfigError, e.what());
    }
    g.field_options.budget = budget_from_env();
    set_thread_count(g.threads);
    for (const auto& c : commands) {
      if (c.app->parsed()) c.run(resolved_config(app, *c.app, g));
    }
    return 0;
  } catch (const Error& e) {
    print_error(std::string(error_name(e.code())), e.what());
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
  }
  return 1;
}

}  // namespace
}  // namespace ffslab::cli

int main(int argc, char** argv) { return ffslab::cli::run(argc, argv); }
