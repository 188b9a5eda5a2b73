#include "experiments.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "mlab/asymptotics.hpp"
#include "mlab/errors.hpp"
#include "mlab/kernels.hpp"
#include "mlab/multiplier.hpp"
#include "mlab/random.hpp"
#include "mlab/rearrange.hpp"
#include "mlab/weights.hpp"
#include "numerics.hpp"

namespace mlab::harness::detail {

using nlohmann::json;
using weights::WeightFunction;

double Context::num(const char* key, double def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_number()) throw precondition_error(std::string("param \"") + key + "\" must be a number");
  return v.get<double>();
}

int Context::integer(const char* key, int def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_number_integer()) throw precondition_error(std::string("param \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> Context::vec(const char* key, std::vector<double> def) const {
  if (!has(key)) return def;
  const auto& v = at(key);
  if (!v.is_array()) throw precondition_error(std::string("param \"") + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw precondition_error(std::string("param \"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> Context::grid(const char* key, double lo, double hi, std::size_t count) const {
  if (!has(key)) return mlab::detail::logspace(lo, hi, count);
  const auto& v = at(key);
  if (v.is_array()) return vec(key, {});
  if (v.is_object()) {
    try {
      return mlab::detail::logspace(v.at("log10Min").get<double>(), v.at("log10Max").get<double>(),
                                    v.at("count").get<std::size_t>());
    } catch (const json::exception&) {
    }
  }
  throw precondition_error(std::string("param \"") + key + "\" must be a list or {log10Min, log10Max, count}");
}

Table& Context::table(std::string name, std::vector<std::string> header) {
  tables.push_back(Table{std::move(name), std::move(header), {}});
  return tables.back();
}

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

json fit_json(const asymptotics::FitResult& f) {
  return json{{"exponent", f.exponent},
              {"logPower", f.log_power},
              {"cLow", f.c_low},
              {"cHigh", f.c_high},
              {"residual", f.residual}};
}

std::vector<double> s_param(const Context& ctx, std::vector<double> def) {
  auto s = ctx.vec("s", std::move(def));
  if (s.empty() || s.size() > 3) throw precondition_error("s needs 1 to 3 entries");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0 && s[i] < 1)) throw precondition_error("every s_i must lie in (0, 1)");
    if (i && s[i] < s[i - 1]) throw precondition_error("s must be sorted ascending");
  }
  return s;
}

int tie_count(const std::vector<double>& s) {
  int d = 0;
  for (std::size_t i = 1; i < s.size(); ++i) d += std::abs(s[i] - s[0]) <= 1e-12;
  return d;
}

std::vector<Axis> cube_axes(std::size_t n, double half_width, std::size_t count) {
  return std::vector<Axis>(n, Axis{0.0, half_width, count});
}

// Grid function with ties, zeros, and a random dimension.
SampledFunction random_grid_function(std::mt19937_64& g) {
  std::size_t n = 1 + g() % 3;
  int lo = n == 1 ? 4 : n == 2 ? 3 : 2;
  int hi = n == 1 ? 10 : n == 2 ? 6 : 4;
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < n; ++i)
    axes.push_back(Axis{uniform(g, -1, 1), uniform(g, 0.5, 4), std::size_t{1} << (lo + g() % (hi - lo + 1))});
  SampledFunction f = SampledFunction::zeros(axes);
  int style = static_cast<int>(g() % 3);
  double zero_frac = uniform(g, 0, 0.5);
  std::normal_distribution<double> nd;
  for (auto& v : f.mutable_values()) {
    if (uniform(g, 0, 1) < zero_frac) continue;
    if (style == 0)
      v = static_cast<double>(1 + g() % 5) * 0.25;
    else if (style == 1)
      v = {nd(g), nd(g)};
    else
      v = std::exp(3 * nd(g));
  }
  return f;
}

// ---------------------------------------------------------------- weights

Verdict run_weights_indices(Context& ctx) {
  auto sg = ctx.vec("sGrid", {0.1, 0.3, 0.5, 0.7, 0.9});
  auto bg = ctx.vec("betaGrid", {-2, -1, 0, 1, 2, 3});
  const double tol = ctx.tol(ctx.num("tolerance", 0.02));
  struct Item {
    int kind;
    double s, b, gamma = 0, delta = 0;
  };
  std::vector<Item> items;
  for (int kind : {0, 1})
    for (double s : sg)
      for (double b : bg) {
        if (!(s > 0 && s < 1)) throw precondition_error("sGrid entries must lie in (0, 1)");
        items.push_back({kind, s, b});
      }
  parallel_for(items.size(), ctx.threads(), [&](std::size_t i) {
    auto& it = items[i];
    auto w = it.kind == 0 ? WeightFunction::phi(it.s, it.b) : WeightFunction::omega(it.s, it.b);
    auto ix = weights::indices(w);
    it.gamma = ix.gamma;
    it.delta = ix.delta;
  });
  auto& t = ctx.table("indices", {"kind", "s", "beta", "gamma", "delta", "error"});
  double worst = 0;
  for (const auto& it : items) {
    double err = std::max(std::abs(it.gamma - it.s), std::abs(it.delta - it.s));
    worst = std::max(worst, err);
    t.rows.push_back({double(it.kind), it.s, it.b, it.gamma, it.delta, err});
    ctx.add_case({{"kind", it.kind == 0 ? "phi" : "omega"},
                  {"s", it.s},
                  {"beta", it.b},
                  {"gamma", it.gamma},
                  {"delta", it.delta}});
  }
  ctx.summary = {{"points", items.size()}, {"maxError", worst}, {"tolerance", tol}};
  return worst <= tol ? Verdict::Pass : Verdict::Fail;
}

// ---------------------------------------------------------------- rearrange

Verdict run_rearrange_props(Context& ctx) {
  const int count = ctx.integer("functions", 100);
  const int taus = ctx.integer("randomTaus", 100);
  if (count < 1) throw precondition_error("functions must be positive");
  struct Row {
    std::size_t n = 0, cells = 0, steps = 0, mismatches = 0;
    bool star_ok = true, invariant = true, first_step = true;
    double norm = 0;
  };
  std::vector<Row> rows(static_cast<std::size_t>(count));
  parallel_for(rows.size(), ctx.threads(), [&](std::size_t i) {
    auto g = random::stream(ctx.seed(), i);
    auto f = random_grid_function(g);
    auto prof = rearrange::rearrangement(f);
    Row& r = rows[i];
    r.n = f.dim();
    r.cells = f.size();
    r.steps = prof.steps();
    std::vector<double> probe{0.0};
    const auto& v = prof.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
      probe.push_back(v[k]);
      probe.push_back(std::nextafter(v[k], 0.0));
      if (k + 1 < v.size()) probe.push_back(0.5 * (v[k] + v[k + 1]));
    }
    double top = v.empty() ? 1.0 : v.front();
    for (int k = 0; k < taus; ++k) probe.push_back(uniform(g, 0, 1.2 * top));
    for (double tau : probe)
      if (prof.measure_above(tau) != rearrange::distribution_function(f, tau)) ++r.mismatches;
    for (double t : prof.breaks())
      if (rearrange::double_star(prof, t) < prof.at(std::nextafter(t, 0.0)) * (1 - 1e-15)) r.star_ok = false;
    // beta <= 3s keeps phi(s, beta) nondecreasing
    double ws = uniform(g, 0.1, 0.9);
    auto w = WeightFunction::phi(ws, uniform(g, 0, 3 * ws));
    r.norm = rearrange::lorentz_norm(prof, w);
    auto shuffled = f;
    std::shuffle(shuffled.mutable_values().begin(), shuffled.mutable_values().end(), g);
    r.invariant = rearrange::lorentz_norm(shuffled, w) == r.norm;
    if (!v.empty()) r.first_step = r.norm >= v.front() * w(prof.breaks().front());
  });
  auto& t = ctx.table("cases", {"case", "n", "cells", "steps", "mismatches", "lorentz_norm"});
  std::size_t bad = 0, mism = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    mism += r.mismatches;
    bool ok = r.mismatches == 0 && r.star_ok && r.invariant && r.first_step;
    bad += !ok;
    t.rows.push_back({double(i), double(r.n), double(r.cells), double(r.steps), double(r.mismatches), r.norm});
    ctx.add_case({{"case", i},
                  {"n", r.n},
                  {"steps", r.steps},
                  {"equimeasurable", r.mismatches == 0},
                  {"doubleStarDominates", r.star_ok},
                  {"rearrangementInvariant", r.invariant},
                  {"firstStepBound", r.first_step}});
  }
  ctx.summary = {{"functions", count}, {"mismatches", mism}, {"failedCases", bad}};
  return bad == 0 ? Verdict::Pass : Verdict::Fail;
}

Verdict run_holder(Context& ctx) {
  const int count = ctx.integer("pairs", 1000);
  const double slack = ctx.tol(ctx.num("slack", 1e-9));
  if (count < 1) throw precondition_error("pairs must be positive");
  std::vector<rearrange::RatioReport> reps(static_cast<std::size_t>(count));
  std::vector<std::pair<double, double>> sb(reps.size());
  parallel_for(reps.size(), ctx.threads(), [&](std::size_t i) {
    auto g = random::stream(ctx.seed(), i);
    auto f = random_grid_function(g);
    auto h = f;
    auto g2 = random_grid_function(g);
    for (auto& v : h.mutable_values()) v = g2.values()[g() % g2.size()] * (uniform(g, 0, 1) < 0.3 ? 0.0 : 1.0);
    double s = uniform(g, 0.1, 0.9), b = uniform(g, -2, 3);
    sb[i] = {s, b};
    reps[i] = rearrange::check_holder(f, h, WeightFunction::phi(s, b));
  });
  auto& t = ctx.table("pairs", {"pair", "s", "beta", "lhs", "rhs", "ratio"});
  std::size_t violations = 0;
  double worst = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    bool ok = r.lhs <= r.rhs * (1 + slack);
    violations += !ok;
    worst = std::max(worst, r.ratio);
    t.rows.push_back({double(i), sb[i].first, sb[i].second, r.lhs, r.rhs, r.ratio});
  }
  ctx.summary = {{"pairs", count}, {"violations", violations}, {"maxRatio", worst}, {"slack", slack}};
  return violations == 0 ? Verdict::Pass : Verdict::Fail;
}

Verdict run_hardy(Context& ctx) {
  const int count = ctx.integer("cases", 100);
  if (count < 1) throw precondition_error("cases must be positive");
  struct Row {
    double s, b, p;
    rearrange::RatioReport r;
  };
  std::vector<Row> rows(static_cast<std::size_t>(count));
  parallel_for(rows.size(), ctx.threads(), [&](std::size_t i) {
    auto g = random::stream(ctx.seed(), i);
    auto f = random_grid_function(g);
    double s = uniform(g, 0.1, 0.7);
    double b = uniform(g, -1, 2);
    double p = std::min(1.0, uniform(g, s + 0.15, 1.2));
    rows[i] = {s, b, p, rearrange::check_hardy(f, WeightFunction::phi(s, b), p)};
  });
  auto& t = ctx.table("cases", {"case", "s", "beta", "p", "ratio", "bound"});
  std::size_t bad = 0;
  double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    bad += !(r.r.ratio <= r.r.bound);
    worst = std::max(worst, r.r.ratio / r.r.bound);
    t.rows.push_back({double(i), r.s, r.b, r.p, r.r.ratio, r.r.bound});
  }
  ctx.summary = {{"cases", count}, {"violations", bad}, {"maxRatioOverBound", worst}};
  return bad == 0 ? Verdict::Pass : Verdict::Fail;
}

Verdict run_sunrise(Context& ctx) {
  const int count = ctx.integer("functions", 10);
  std::vector<std::array<double, 3>> triples{{0.5, 0.3, 1}, {0.3, 0.6, 1}, {0.2, 0.8, 0}, {0.4, 0.5, 2}};
  if (ctx.has("cases")) {
    triples.clear();
    for (const auto& c : ctx.at("cases")) {
      try {
        triples.push_back({c.at("alpha").get<double>(), c.at("beta").get<double>(), c.at("gamma").get<double>()});
      } catch (const json::exception&) {
        throw precondition_error("sunrise cases need alpha, beta, gamma");
      }
    }
  }
  for (const auto& c : triples)
    if (!(c[0] > 0 && c[0] < 1 && c[1] > 0 && c[1] < 1 && c[2] >= 0))
      throw precondition_error("sunrise needs 0 < alpha, beta < 1 and gamma >= 0");
  const double exact_tol = ctx.tol(1e-6);
  std::size_t total = triples.size() * static_cast<std::size_t>(count);
  std::vector<rearrange::SunriseReport> reps(total);
  parallel_for(total, ctx.threads(), [&](std::size_t i) {
    auto g = random::stream(ctx.seed(), i / triples.size());
    auto f = random_grid_function(g);
    const auto& c = triples[i % triples.size()];
    reps[i] = rearrange::check_sunrise(f, c[0], c[1], c[2]);
  });
  auto& t = ctx.table("cases", {"case", "alpha", "beta", "gamma", "lhs", "rhs", "ratio", "ratio_refined"});
  std::size_t bad = 0;
  double worst = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const auto& c = triples[i % triples.size()];
    const auto& r = reps[i];
    bool ok = r.pass && (c[1] > c[0] || std::abs(r.ratio - 1) <= exact_tol);
    bad += !ok;
    if (r.finite) worst = std::max(worst, r.ratio);
    t.rows.push_back({double(i), c[0], c[1], c[2], r.lhs, r.rhs, r.ratio, r.ratio_refined});
  }
  ctx.summary = {{"cases", total}, {"failed", bad}, {"maxRatio", worst}};
  return bad == 0 ? Verdict::Pass : Verdict::Fail;
}

Verdict run_hausdorff_young(Context& ctx) {
  const int battery = ctx.integer("battery", 100);
  const double L = ctx.num("halfWidth", 8);
  const int N = ctx.integer("points", 256);
  const int modes = ctx.integer("maxMode", 8);
  const double stab = ctx.tol(ctx.num("stability", 0.2));
  auto w = ctx.has("weight") ? weights::weight_from_json(ctx.at("weight")) : WeightFunction::phi(0.7, 1);
  if (battery < 1 || N < 4 || (N & (N - 1))) throw precondition_error("battery >= 1 and points a power of two");
  std::vector<double> r1(static_cast<std::size_t>(battery)), r2(r1.size());
  parallel_for(r1.size(), ctx.threads(), [&](std::size_t i) {
    std::uint64_t seed = random::stream(ctx.seed(), i)();
    auto f1 = random::band_limited({Axis{0, L, std::size_t(N)}}, modes, seed);
    auto f2 = random::band_limited({Axis{0, L, std::size_t(2 * N)}}, modes, seed);
    r1[i] = rearrange::hausdorff_young_lorentz(f1, w).ratio;
    r2[i] = rearrange::hausdorff_young_lorentz(f2, w).ratio;
  });
  auto& t = ctx.table("battery", {"function", "ratio", "ratio_refined"});
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    m1 = std::max(m1, r1[i]);
    m2 = std::max(m2, r2[i]);
    t.rows.push_back({double(i), r1[i], r2[i]});
  }
  double change = std::abs(m2 / m1 - 1);
  bool ok = std::isfinite(m1) && std::isfinite(m2) && m1 > 0 && change < stab;
  ctx.summary = {{"weight", weights::to_json(w)}, {"maxRatio", m1}, {"maxRatioRefined", m2},
                 {"relativeChange", change}, {"stability", stab}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

// ---------------------------------------------------------------- asymptotics

// k in {2,3,4}; rho_1 in [0.5, 2]; each later variable either ties with rho_1 or sits
// at least 0.5 above it; every alpha stays in (1.1, 5).
asymptotics::IntegralSpec random_integral_spec(std::mt19937_64& g) {
  std::size_t k = 2 + g() % 3;
  double rho = uniform(g, 0.5, 2.0);
  std::vector<double> alpha, r;
  double r1 = uniform(g, 0.5, std::min(2.0, 3.9 / rho));
  alpha.push_back(1 + rho * r1);
  r.push_back(r1);
  for (std::size_t i = 1; i < k; ++i) {
    double ri, rhoi = rho;
    if (g() % 2 == 0) {
      ri = uniform(g, 0.5, std::min(2.0, 3.9 / rho));
    } else {
      rhoi = rho + uniform(g, 0.5, 2.0);
      ri = uniform(g, 0.3, std::min(2.0, 3.9 / rhoi));
    }
    alpha.push_back(1 + rhoi * ri);
    r.push_back(ri);
  }
  return asymptotics::IntegralSpec(alpha, r, 2.0);
}

void integral_table(Context& ctx, const std::string& name, const asymptotics::IntegralSpec& spec,
                    const std::vector<double>& a_grid) {
  auto& t = ctx.table(name, {"a", "I", "predicted", "ratio"});
  const double e = spec.exponent();
  const int dp = spec.d_prime();
  for (double a : a_grid) {
    double li = asymptotics::eval_log_integral(spec.with_threshold(a), 1e-9);
    double lp = e * std::log(a) + dp * mlab::detail::loglog_e_plus_exp(std::log(a));
    t.rows.push_back({a, std::exp(li), std::exp(lp), std::exp(li - lp)});
  }
}

Verdict lemma31_closed_form(Context& ctx) {
  const double tol = ctx.tol(1e-6);
  auto grid = ctx.vec("aValues", {std::exp(1.0), std::exp(2.0), 10.0, 1e3, 1e6});
  auto& t = ctx.table("closed_form", {"a", "I", "exact", "relative_error"});
  double worst = 0;
  for (double a : grid) {
    if (!(a > 1)) throw precondition_error("aValues must exceed 1");
    double v = asymptotics::eval_integral(asymptotics::IntegralSpec({2, 2}, {1, 1}, a));
    double exact = (1 + std::log(a)) / a;
    double err = std::abs(v / exact - 1);
    worst = std::max(worst, err);
    t.rows.push_back({a, v, exact, err});
  }
  ctx.summary = {{"maxRelativeError", worst}, {"tolerance", tol}};
  return worst <= tol ? Verdict::Pass : Verdict::Fail;
}

Verdict lemma31_fit(Context& ctx) {
  auto alpha = ctx.vec("alpha", {2, 2});
  auto r = ctx.vec("r", {1, 1});
  auto grid = ctx.grid("aGrid", 10, 60, 51);
  asymptotics::IntegralSpec spec(alpha, r, 2.0);
  auto fit = asymptotics::fit_asymptotics(spec, grid);
  const double etol = ctx.tol(ctx.num("exponentTolerance", 0.02));
  const double ptol = ctx.tol(ctx.num("logPowerTolerance", 0.15));
  integral_table(ctx, "integral", spec, grid);
  bool ok = std::abs(fit.exponent - spec.exponent()) <= etol && std::abs(fit.log_power - spec.d_prime()) <= ptol;
  ctx.summary = {{"alpha", spec.alpha()}, {"r", spec.r()},          {"expectedExponent", spec.exponent()},
                 {"dPrime", spec.d_prime()}, {"fit", fit_json(fit)}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict lemma31_random(Context& ctx) {
  const int count = ctx.integer("specs", 10);
  const auto env_grid = ctx.grid("envelopeGrid", std::log10(2.0), 8, 33);
  const auto fit_grid = ctx.grid("aGrid", 10, 60, 51);
  const double env_max = ctx.num("maxEnvelope", 50) * ctx.config().tolerance_scale;
  const double erel = ctx.tol(ctx.num("exponentTolerance", 0.02));
  const double ptol = ctx.tol(ctx.num("logPowerTolerance", 0.3));
  const int spots = ctx.integer("mcSpots", 3);
  const auto samples = static_cast<std::uint64_t>(ctx.num("mcSamples", 1e6));
  if (count < 1) throw precondition_error("specs must be positive");
  for (double a : env_grid)
    if (!(a >= 2)) throw precondition_error("envelope grid values must be >= 2");
  auto gen = random::stream(ctx.seed(), 0);
  std::vector<asymptotics::IntegralSpec> specs;
  for (int i = 0; i < count; ++i) specs.push_back(random_integral_spec(gen));
  std::vector<asymptotics::FitResult> env(specs.size()), fit(specs.size());
  parallel_for(specs.size(), ctx.threads(), [&](std::size_t i) {
    env[i] = asymptotics::fit_asymptotics(specs[i], env_grid);
    fit[i] = asymptotics::fit_asymptotics(specs[i], fit_grid);
  });
  bool ok = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& sp = specs[i];
    double ratio = env[i].c_high / env[i].c_low;
    bool e_ok = std::abs(fit[i].exponent / sp.exponent() - 1) <= erel;
    bool p_ok = std::abs(fit[i].log_power - sp.d_prime()) <= ptol;
    bool env_ok = ratio <= env_max;
    ok = ok && e_ok && p_ok && env_ok;
    ctx.add_case({{"alpha", sp.alpha()},
                  {"r", sp.r()},
                  {"expectedExponent", sp.exponent()},
                  {"dPrime", sp.d_prime()},
                  {"fit", fit_json(fit[i])},
                  {"envelope", ratio},
                  {"pass", e_ok && p_ok && env_ok}});
    integral_table(ctx, "spec" + std::to_string(i), sp, env_grid);
  }
  const double spot_a[] = {10.0, 1e2, 1e3};
  json mc = json::array();
  for (int i = 0; i < spots; ++i) {
    const auto& sp = specs[static_cast<std::size_t>(i) % specs.size()];
    auto at = sp.with_threshold(spot_a[i % 3]);
    double v = asymptotics::eval_integral(at);
    auto est = asymptotics::mc_oracle(at, samples, random::stream(ctx.seed(), 100 + i)());
    double z = (est.estimate - v) / est.stderr_;
    bool z_ok = std::abs(z) <= 3 * ctx.config().tolerance_scale;
    ok = ok && z_ok;
    mc.push_back({{"spec", i % specs.size()}, {"a", at.a()}, {"I", v}, {"estimate", est.estimate},
                  {"stderr", est.stderr_}, {"z", z}, {"pass", z_ok}});
  }
  ctx.summary = {{"specs", count}, {"maxEnvelopeAllowed", env_max}, {"monteCarlo", mc}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_lemma31(Context& ctx) {
  std::string check = ctx.has("check") ? ctx.at("check").get<std::string>() : "fit";
  if (check == "fit") return lemma31_fit(ctx);
  if (check == "closed-form") return lemma31_closed_form(ctx);
  if (check == "random") return lemma31_random(ctx);
  throw precondition_error("lemma31 check must be fit, closed-form, or random");
}

Verdict run_superlevel(Context& ctx) {
  auto s = s_param(ctx, {0.5, 0.5});
  const std::size_t n = s.size();
  const int d = ctx.integer("d", tie_count(s));
  if (d != tie_count(s)) throw precondition_error("d must equal the tie count of s");
  const double L = ctx.num("halfWidth", 1e30);
  const int cells = ctx.integer("cells", 16);
  auto grid = ctx.grid("aGrid", -12, -2, 21);
  const double etol = ctx.tol(ctx.num("exponentTolerance", 0.05));
  const double ptol = ctx.tol(ctx.num("logPowerTolerance", 0.4));
  auto g = SampledFunction::sample(cube_axes(n, L, std::size_t(cells)), [](auto) { return cplx(1.0); });
  auto fit = asymptotics::superlevel_measure_check(g, s, d, grid);
  auto& t = ctx.table("superlevel", {"a", "measure", "predicted", "ratio"});
  for (double a : grid) {
    double m = asymptotics::superlevel_measure(g, s, a);
    double pred = std::pow(a, -1 / s[0]) * std::pow(std::log(std::exp(1.0) + 1 / a), d);
    t.rows.push_back({a, m, pred, m / pred});
  }
  double expected = -1 / s[0];
  bool fit_ok = std::abs(fit.exponent / expected - 1) <= etol && std::abs(fit.log_power - d) <= ptol;

  // weighted rearrangement battery on a grid and its refinement
  const int battery = ctx.integer("battery", 50);
  const double gl = ctx.num("gHalfWidth", 4);
  const int gn = ctx.integer("gPoints", 32);
  const double stab = ctx.tol(ctx.num("stability", 0.2));
  std::vector<double> r1(static_cast<std::size_t>(battery)), r2(r1.size());
  parallel_for(r1.size(), ctx.threads(), [&](std::size_t i) {
    auto gen = random::stream(ctx.seed(), i);
    std::uint64_t fs = gen();
    std::vector<int> j(n);
    for (auto& ji : j) ji = static_cast<int>(gen() % 5) - 2;
    std::vector<std::size_t> idx(n);
    for (auto& k : idx) k = gen() % std::size_t(gn);
    auto g1 = random::band_limited(cube_axes(n, gl, std::size_t(gn)), 3, fs);
    auto g2 = random::band_limited(cube_axes(n, gl, std::size_t(2 * gn)), 3, fs);
    std::vector<std::size_t> idx2(n);
    for (std::size_t k = 0; k < n; ++k) idx2[k] = 2 * idx[k];
    r1[i] = asymptotics::weighted_rearrangement_check(g1, s, d, j, g1.flatten(idx)).ratio;
    r2[i] = asymptotics::weighted_rearrangement_check(g2, s, d, j, g2.flatten(idx2)).ratio;
  });
  auto& wt = ctx.table("weighted", {"case", "ratio", "ratio_refined"});
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    m1 = std::max(m1, r1[i]);
    m2 = std::max(m2, r2[i]);
    wt.rows.push_back({double(i), r1[i], r2[i]});
  }
  double change = m1 > 0 ? std::abs(m2 / m1 - 1) : 0.0;
  bool w_ok = std::isfinite(m1) && std::isfinite(m2) && change <= stab;
  ctx.summary = {{"s", s},
                 {"d", d},
                 {"expectedExponent", expected},
                 {"fit", fit_json(fit)},
                 {"weightedEnvelope", m1},
                 {"weightedEnvelopeRefined", m2},
                 {"weightedChange", change}};
  return fit_ok && w_ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_cube_support(Context& ctx) {
  auto s = s_param(ctx, {0.6, 0.6});
  const std::size_t n = s.size();
  const int d = tie_count(s);
  const double r = ctx.num("r", 2), q = ctx.num("q", 4);
  const int count = ctx.integer("functions", 100);
  const int N = ctx.integer("points", 32);
  if (!(1 / q < 1 / r && 1 / r < s[0])) throw precondition_error("cube-support needs 1/q < 1/r < s_1");
  auto axes = cube_axes(n, 1.0, std::size_t(N));
  std::vector<asymptotics::CubeSupportReport> reps(static_cast<std::size_t>(count) + 1);
  parallel_for(reps.size(), ctx.threads(), [&](std::size_t i) {
    SampledFunction h;
    if (i == 0) {
      h = SampledFunction::sample(axes, [](auto) { return cplx(1.0); });
    } else {
      auto g = random::stream(ctx.seed(), i);
      h = SampledFunction::zeros(axes);
      std::normal_distribution<double> nd;
      double keep = uniform(g, 0.05, 1.0);
      for (auto& v : h.mutable_values())
        if (uniform(g, 0, 1) < keep) v = {nd(g), nd(g)};
    }
    reps[i] = asymptotics::cube_support_check(h, s, d, r, q);
  });
  auto& t = ctx.table("cases", {"case", "marcinkiewicz", "weak", "maximal", "c12", "c23"});
  std::size_t bad = 0;
  double c12 = 0, c23 = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& x = reps[i];
    bad += !x.pass;
    c12 = std::max(c12, x.c12);
    c23 = std::max(c23, x.c23);
    t.rows.push_back({double(i), x.marcinkiewicz, x.weak, x.maximal, x.c12, x.c23});
  }
  ctx.summary = {{"cases", reps.size()},     {"failed", bad},
                 {"maxC12", c12},            {"maxC23", c23},
                 {"bound12", reps[0].bound12}, {"bound23", reps[0].bound23}};
  return bad == 0 ? Verdict::Pass : Verdict::Fail;
}

// ---------------------------------------------------------------- kernels

Verdict run_kernel_tails(Context& ctx) {
  auto s = s_param(ctx, {0.5, 0.5});
  const int d = tie_count(s);
  auto grid = ctx.grid("lambdaGrid", 3, 30, 21);
  const double etol = ctx.tol(ctx.num("exponentTolerance", 0.05));
  const double ptol = ctx.tol(ctx.num("logPowerTolerance", 0.4));
  auto res = kernels::tensor_kernel_distribution(s, grid);
  auto& t = ctx.table("tails", {"lambda", "measure", "predicted", "ratio"});
  const double e = -1 / (1 - s[0]);
  for (std::size_t i = 0; i < res.lambda.size(); ++i) {
    double l = res.lambda[i];
    double pred = std::pow(l, e) * std::pow(std::log(std::exp(1.0) + l), d);
    t.rows.push_back({l, res.measure[i], pred, res.measure[i] / pred});
  }
  bool ok = std::abs(res.fit.exponent / e - 1) <= etol && std::abs(res.fit.log_power - d) <= ptol;
  ctx.summary = {{"s", s}, {"d", d}, {"expectedExponent", e}, {"fit", fit_json(res.fit)}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_optimality(Context& ctx) {
  auto s = s_param(ctx, {0.5, 0.5});
  const int d = tie_count(s);
  auto grid = ctx.grid("tGrid", -5, -2, 13);
  const int pd = ctx.integer("perDecade", 32);
  for (double t : grid)
    if (!(t > 0 && t <= 1e-2)) throw precondition_error("tGrid must lie in (0, 1e-2]");
  auto rep = kernels::rearrangement_lower_bound_check(s, d, grid, pd);
  auto prof = kernels::tensor_kernel_profile(s, pd);
  auto& t = ctx.table("profile", {"t", "kernel_star", "ratio"});
  for (double x : grid) {
    double base = std::pow(x, s[0] - 1) * std::pow(std::log(std::exp(1.0) + 1 / x), (1 - s[0]) * d);
    t.rows.push_back({x, prof.at(x), prof.at(x) / base});
  }
  ctx.summary = {{"s", s},
                 {"d", d},
                 {"infRatio", rep.inf_ratio},
                 {"supRatio", rep.sup_ratio},
                 {"infRefined", rep.inf_refined},
                 {"supRefined", rep.sup_refined},
                 {"stable", rep.stable}};
  return rep.pass ? Verdict::Pass : Verdict::Fail;
}

Verdict run_embedding(Context& ctx) {
  auto s = s_param(ctx, {0.5, 0.5});
  const int d = tie_count(s);
  const int battery = ctx.integer("battery", 50);
  const double L = ctx.num("halfWidth", 16);
  const int N = ctx.integer("points", 64);
  const int modes = ctx.integer("maxMode", 4);
  const double stab = ctx.tol(ctx.num("stability", 0.2));
  const double chain_tol = ctx.tol(ctx.num("chainTolerance", 1e-6));
  if (battery < 50) throw precondition_error("embedding needs a battery of at least 50");
  auto axes = cube_axes(s.size(), L, std::size_t(N));
  auto axes2 = cube_axes(s.size(), L, std::size_t(2 * N));
  auto base = kernels::embedding_ratio(s, d, std::size_t(battery), axes, modes, ctx.seed());
  auto big = kernels::embedding_ratio(s, d, std::size_t(4 * battery), axes, modes, ctx.seed());
  auto fine = kernels::embedding_ratio(s, d, std::size_t(battery), axes2, modes, ctx.seed());
  auto& t = ctx.table("embedding", {"battery", "points", "max_ratio", "chain_max"});
  for (const auto& [b, n, r] : {std::tuple{battery, N, base}, {4 * battery, N, big}, {battery, 2 * N, fine}})
    t.rows.push_back({double(b), double(n), r.max_ratio, r.chain_max});
  double cb = std::abs(big.max_ratio / base.max_ratio - 1);
  double cf = std::abs(fine.max_ratio / base.max_ratio - 1);
  double chain = std::max({base.chain_max, big.chain_max, fine.chain_max});
  bool ok = std::isfinite(base.max_ratio) && cb <= stab && cf <= stab && chain <= 1 + chain_tol;
  ctx.summary = {{"s", s},
                 {"d", d},
                 {"maxRatio", base.max_ratio},
                 {"maxRatioBatteryX4", big.max_ratio},
                 {"maxRatioRefined", fine.max_ratio},
                 {"kernelNorm", base.kernel_norm},
                 {"chainMax", chain}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_necessity(Context& ctx) {
  struct Case {
    double s1;
    int d;
    double beta;
  };
  std::vector<Case> cases;
  if (ctx.has("cases")) {
    for (const auto& c : ctx.at("cases")) {
      try {
        cases.push_back({c.at("s1").get<double>(), c.at("d").get<int>(), c.at("beta").get<double>()});
      } catch (const json::exception&) {
        throw precondition_error("necessity cases need s1, d, beta");
      }
    }
  } else if (ctx.has("s1") || ctx.has("beta")) {
    cases.push_back({ctx.num("s1", 0.5), ctx.integer("d", 1), ctx.num("beta", 0.5)});
  } else {
    for (double s1 : {0.3, 0.5, 0.7})
      for (int d : {1, 2})
        for (double off : {-0.25, 0.25}) cases.push_back({s1, d, (1 - s1) * d + off});
  }
  for (const auto& c : cases)
    if (!(c.s1 > 0 && c.s1 < 1) || c.d < 0) throw precondition_error("necessity needs s1 in (0,1) and d >= 0");
  auto& t = ctx.table("cases", {"s1", "d", "beta", "log_factor", "diverges", "expected"});
  std::size_t mismatches = 0, boundary = 0;
  for (const auto& c : cases) {
    auto rep = kernels::necessity_divergence(c.s1, c.d, c.beta, kernels::default_necessity_grid());
    double crit = (1 - c.s1) * c.d;
    bool edge = std::abs(c.beta - crit) <= 1e-12;
    bool expected = c.beta < crit && !edge;
    boundary += edge;
    mismatches += rep.diverges != expected;
    t.rows.push_back({c.s1, double(c.d), c.beta, rep.log_factor, double(rep.diverges), double(expected)});
    ctx.add_case({{"s1", c.s1},
                  {"d", c.d},
                  {"beta", c.beta},
                  {"verdict", rep.diverges ? "DIVERGES" : "BOUNDED"},
                  {"expected", expected ? "DIVERGES" : "BOUNDED"},
                  {"boundary", edge},
                  {"logFactor", rep.log_factor},
                  {"minLogT", rep.log_t.back()}});
  }
  ctx.summary = {{"cases", cases.size()}, {"mismatches", mismatches}, {"boundaryCases", boundary}};
  if (mismatches) return Verdict::Fail;
  return boundary == cases.size() ? Verdict::Recorded : Verdict::Pass;
}

// ---------------------------------------------------------------- multiplier

double rel_l2(const SampledFunction& a, const SampledFunction& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

double rel_sup(const SampledFunction& a, const SampledFunction& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0 ? num / den : num;
}

Verdict run_lp_family(Context& ctx) {
  using multiplier::LittlewoodPaleyFamily;
  const int ppo = ctx.integer("pointsPerOctave", 32);
  const double L = ctx.num("halfWidth", 8);
  const int N = ctx.integer("points", 256);
  if (ppo < 16) throw precondition_error("pointsPerOctave must be at least 16");
  auto fam = multiplier::build_lp_family(ppo);
  auto& t = ctx.table("psi", {"xi", "psi", "psi_b"});
  double support_err = 0, b_err = 0;
  for (const auto& [xi, v] : fam.psi_b_samples()) {
    double p = LittlewoodPaleyFamily::psi(xi);
    t.rows.push_back({xi, p, v});
    b_err = std::max(b_err, std::abs(v * p - p));
    if (xi < 0.5 || xi > 2) support_err = std::max(support_err, std::abs(p));
  }
  Axis ax{0, L, std::size_t(N)};
  Axis fx = frequency_axis(ax);
  auto range = LittlewoodPaleyFamily::resolvable(fx);
  if (range.empty()) throw precondition_error("grid resolves no dyadic band");
  double lo = std::ldexp(1.0, range.j_min), hi = std::ldexp(1.0, range.j_max);
  double pou = 0;
  for (std::size_t k = 0; k < fx.count; ++k) {
    double xi = std::abs(fx.coord(k));
    if (xi < lo || xi > hi) continue;
    double sum = 0;
    for (int j = -40; j <= 40; ++j) sum += LittlewoodPaleyFamily::psi(std::ldexp(xi, -j));
    pou = std::max(pou, std::abs(sum - 1));
  }
  // f spectrally inside [2^{j_min}, 2^{j_max}]
  auto gen = random::stream(ctx.seed(), 0);
  std::normal_distribution<double> nd;
  std::vector<std::pair<int, cplx>> modes;
  for (int m = -N / 2; m < N / 2; ++m) {
    double xi = std::abs(m / (2 * L));
    if (xi >= lo && xi <= hi) modes.push_back({m, {nd(gen), nd(gen)}});
  }
  auto f = SampledFunction::sample({ax}, [&](std::span<const double> x) {
    cplx acc{};
    for (const auto& [m, c] : modes) acc += c * std::polar(1.0, 2 * kPi * m * x[0] / (2 * L));
    return acc;
  });
  auto sum = SampledFunction::zeros({ax});
  double bpsi = 0;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    auto dj = multiplier::littlewood_paley_apply(f, j, 0, multiplier::Variant::Psi);
    for (std::size_t i = 0; i < f.size(); ++i) sum.mutable_values()[i] += dj[i];
    auto bb = multiplier::littlewood_paley_apply(dj, j, 0, multiplier::Variant::PsiB);
    bpsi = std::max(bpsi, rel_sup(bb, dj) * dj.sup_norm() / std::max(f.sup_norm(), 1e-300));
  }
  double recon = rel_l2(sum, f);

  // operator identities on a 2-d grid
  std::vector<Axis> ax2{Axis{0, L, 64}, Axis{0, L, 64}};
  auto g2 = random::band_limited(ax2, 6, random::stream(ctx.seed(), 1)());
  auto faxes = multiplier::symbol_axes_for(ax2);
  std::vector<double> sv{0.6, 0.6};
  auto one = multiplier::catalog_symbol("constant", faxes, sv, 2.0);
  double ident = rel_sup(multiplier::apply_multiplier(one, g2), g2);
  multiplier::SymbolParams sp;
  double h = ax2[0].spacing();
  sp.shift = {3 * h, -5 * h};
  auto mod = multiplier::catalog_symbol("modulation", faxes, sv, 2.0, sp);
  auto moved = multiplier::apply_multiplier(mod, g2);
  double norm_err = 0;
  for (double p : {1.0, 2.0, 4.0, mlab::detail::kInf}) {
    double a = std::isinf(p) ? moved.sup_norm() : moved.lp_norm(p);
    double b = std::isinf(p) ? g2.sup_norm() : g2.lp_norm(p);
    norm_err = std::max(norm_err, std::abs(a / b - 1));
  }
  std::vector<cplx> ord{0.6, 0.6};
  auto rt = multiplier::gamma_apply(multiplier::gamma_apply(g2, ord, multiplier::Direction::Forward), ord,
                                    multiplier::Direction::Inverse);
  double roundtrip = rel_l2(rt, g2);

  struct Check {
    const char* name;
    double value, limit;
  };
  Check checks[] = {{"supportLeak", support_err, 0.0},
                    {"psiBTimesPsi", b_err, ctx.tol(1e-12)},
                    {"partitionOfUnity", pou, ctx.tol(1e-12)},
                    {"reconstruction", recon, ctx.tol(1e-9)},
                    {"psiBAbsorbsPsi", bpsi, ctx.tol(1e-10)},
                    {"identitySymbol", ident, ctx.tol(1e-12)},
                    {"modulationNorms", norm_err, ctx.tol(1e-12)},
                    {"gammaRoundtrip", roundtrip, ctx.tol(1e-9)}};
  bool ok = true;
  for (const auto& c : checks) {
    bool pass = c.value <= c.limit;
    ok = ok && pass;
    ctx.add_case({{"check", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", pass}});
  }
  ctx.summary = {{"pointsPerOctave", ppo}, {"jMin", range.j_min}, {"jMax", range.j_max}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

struct BatteryItem {
  std::string label;
  multiplier::MultiplierSymbol sigma;
};

// The i-th symbol cycles through the catalog with parameters from stream (seed, i).
std::vector<BatteryItem> symbol_battery(std::size_t count, const std::vector<Axis>& spatial,
                                        const std::vector<double>& s, double p, std::uint64_t seed) {
  const auto& names = multiplier::catalog_names();
  auto faxes = multiplier::symbol_axes_for(spatial);
  std::vector<BatteryItem> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto g = random::stream(seed, 0x5000 + i);
    const std::string& name = names[i % names.size()];
    multiplier::SymbolParams prm;
    prm.c = std::polar(uniform(g, 0.5, 2.0), uniform(g, 0, 2 * kPi));
    for (std::size_t k = 0; k < spatial.size(); ++k) {
      prm.shift.push_back(std::round(uniform(g, -1, 1) * 8) / 8);
      prm.tau.push_back(uniform(g, -3, 3));
    }
    prm.seed = g();
    out.push_back({name + "#" + std::to_string(i), multiplier::catalog_symbol(name, faxes, s, p, prm)});
  }
  return out;
}

struct MultiplierSetup {
  std::vector<double> s;
  double p;
  std::vector<Axis> axes;
  std::size_t symbols;
};

MultiplierSetup multiplier_setup(const Context& ctx) {
  MultiplierSetup m;
  m.s = s_param(ctx, {0.6, 0.6});
  m.p = ctx.num("p", 4.0 / 3);
  if (!(m.p > 1)) throw precondition_error("p must exceed 1");
  m.axes = cube_axes(m.s.size(), ctx.num("halfWidth", 8), std::size_t(ctx.integer("points", 128)));
  int c = ctx.integer("symbols", 20);
  if (c < 1) throw precondition_error("symbols must be positive");
  m.symbols = std::size_t(c);
  return m;
}

Verdict run_k_constant(Context& ctx) {
  auto m = multiplier_setup(ctx);
  auto bat = symbol_battery(m.symbols, m.axes, m.s, m.p, ctx.seed());
  const cplx c{2.5, -1.0};
  const int shift = ctx.integer("dilation", 1);
  const double tol = ctx.tol(1e-12);
  struct Row {
    double K, scaled, dilated;
    std::vector<int> argmax;
  };
  std::vector<Row> rows(bat.size());
  parallel_for(bat.size(), ctx.threads(), [&](std::size_t i) {
    const auto& sg = bat[i].sigma;
    auto w = multiplier::k_weight(sg);
    auto k = multiplier::marcinkiewicz_constant(sg, w);
    auto ks = multiplier::marcinkiewicz_constant(sg.scaled(c), w);
    auto kd = multiplier::marcinkiewicz_constant(sg.dilated(std::vector<int>(m.s.size(), shift)), w);
    rows[i] = {k.K, ks.K, kd.K, k.argmax};
  });
  auto& t = ctx.table("symbols", {"symbol", "K", "scaling_error", "dilation_error"});
  double se = 0, de = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    double e1 = std::abs(r.scaled / (std::abs(c) * r.K) - 1);
    double e2 = std::abs(r.dilated / r.K - 1);
    se = std::max(se, e1);
    de = std::max(de, e2);
    t.rows.push_back({double(i), r.K, e1, e2});
    ctx.add_case({{"symbol", bat[i].label}, {"K", r.K}, {"argmax", r.argmax}});
  }
  bool ok = se <= tol && de <= tol;
  for (const auto& r : rows) ok = ok && std::isfinite(r.K) && r.K > 0;
  ctx.summary = {{"symbols", rows.size()}, {"maxScalingError", se}, {"maxDilationError", de}, {"tolerance", tol}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_operator_norm(Context& ctx) {
  auto m = multiplier_setup(ctx);
  const int battery = ctx.integer("battery", 100);
  const int modes = ctx.integer("maxMode", 4);
  const double stab = ctx.tol(ctx.num("stability", 0.25));
  if (battery < 100) throw precondition_error("operator-norm needs a battery of at least 100");
  if (!(std::abs(1 / m.p - 0.5) < m.s[0])) warn("operator-norm: |1/p - 1/2| >= s_1, outside the theorem's range");
  auto bat = symbol_battery(m.symbols, m.axes, m.s, m.p, ctx.seed());
  struct Row {
    double K, e1, e4;
    bool probe1, probe4;
  };
  std::vector<Row> rows(bat.size());
  parallel_for(bat.size(), ctx.threads(), [&](std::size_t i) {
    const auto& sg = bat[i].sigma;
    double K = multiplier::marcinkiewicz_constant(sg, multiplier::k_weight(sg)).K;
    std::uint64_t seed = random::stream(ctx.seed(), i)();
    auto a = multiplier::lp_operator_norm_estimate(sg, m.axes, m.p, std::size_t(battery), seed, modes);
    auto b = multiplier::lp_operator_norm_estimate(sg, m.axes, m.p, std::size_t(4 * battery), seed, modes);
    rows[i] = {K, a.estimate, b.estimate, a.from_probe, b.from_probe};
  });
  auto& t = ctx.table("symbols", {"symbol", "K", "estimate", "ratio", "estimate_x4", "ratio_x4"});
  double c1 = 0, c4 = 0;
  std::size_t probe1 = 0, probe4 = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    c1 = std::max(c1, r.e1 / r.K);
    c4 = std::max(c4, r.e4 / r.K);
    probe1 += r.probe1;
    probe4 += r.probe4;
    t.rows.push_back({double(i), r.K, r.e1, r.e1 / r.K, r.e4, r.e4 / r.K});
    ctx.add_case({{"symbol", bat[i].label}, {"K", r.K}, {"estimate", r.e1}, {"estimateX4", r.e4},
                  {"fromProbe", r.probe1}, {"fromProbeX4", r.probe4}});
  }
  double change = std::abs(c4 / c1 - 1);
  bool ok = std::isfinite(c1) && std::isfinite(c4) && c1 > 0 && change < stab;
  // fromProbe counts symbols whose estimate came from a single-mode probe rather than the battery.
  ctx.summary = {{"symbols", rows.size()}, {"cEmp", c1}, {"cEmpBatteryX4", c4}, {"relativeChange", change},
                 {"stability", stab}, {"fromProbe", probe1}, {"fromProbeX4", probe4}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_pointwise(Context& ctx) {
  auto m = multiplier_setup(ctx);
  const double q = ctx.num("q", multiplier::default_q(m.s[0]));
  if (!(q > 1 / m.s[0])) throw precondition_error("pointwise-52 needs q > 1/s_1 (got q = " + std::to_string(q) + ")");
  const int modes = ctx.integer("maxMode", 24);
  const double stab = ctx.tol(ctx.num("stability", 0.3));
  auto fine = m.axes;
  for (auto& a : fine) a.count *= 2;
  auto bat = symbol_battery(m.symbols, m.axes, m.s, m.p, ctx.seed());
  auto bat2 = symbol_battery(m.symbols, fine, m.s, m.p, ctx.seed());
  std::vector<double> e1(bat.size()), e2(bat.size());
  parallel_for(bat.size(), ctx.threads(), [&](std::size_t i) {
    std::uint64_t seed = random::stream(ctx.seed(), 1000 + i)();
    e1[i] = multiplier::pointwise_estimate_check(bat[i].sigma, random::band_limited(m.axes, modes, seed), q).envelope;
    e2[i] = multiplier::pointwise_estimate_check(bat2[i].sigma, random::band_limited(fine, modes, seed), q).envelope;
  });
  auto& t = ctx.table("cases", {"case", "envelope", "envelope_refined"});
  double m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    m1 = std::max(m1, e1[i]);
    m2 = std::max(m2, e2[i]);
    t.rows.push_back({double(i), e1[i], e2[i]});
    ctx.add_case({{"symbol", bat[i].label}, {"envelope", e1[i]}, {"envelopeRefined", e2[i]}});
  }
  double change = m1 > 0 ? std::abs(m2 / m1 - 1) : 0.0;
  bool ok = std::isfinite(m1) && std::isfinite(m2) && change <= stab;
  ctx.summary = {{"q", q}, {"envelope", m1}, {"envelopeRefined", m2}, {"relativeChange", change},
                 {"stability", stab}};
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict run_imaginary_growth(Context& ctx) {
  const int n = ctx.integer("dimension", 1);
  if (n < 1 || n > 3) throw precondition_error("dimension must be 1, 2, or 3");
  const double L = ctx.num("halfWidth", 8);
  const int N = ctx.integer("points", n == 1 ? 256 : 64);
  auto tg = ctx.vec("tGrid", {0, 0.5, 1, 2, 4, 8, 16, 32, 50});
  auto w = ctx.has("weight") ? weights::weight_from_json(ctx.at("weight")) : WeightFunction::phi(0.5, 1);
  auto f = random::band_limited(cube_axes(std::size_t(n), L, std::size_t(N)), ctx.integer("maxMode", 8),
                                random::stream(ctx.seed(), 0)());
  auto rep = multiplier::imaginary_order_growth_check(f, tg, w);
  auto& t = ctx.table("growth", {"t", "ratio"});
  bool zero_ok = true;
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    t.rows.push_back({rep.t[i], rep.ratio[i]});
    if (rep.t[i] == 0) zero_ok = zero_ok && rep.ratio[i] == 1.0;
  }
  ctx.summary = {{"dimension", n}, {"degree", rep.degree}, {"limit", n + 0.5}, {"weight", weights::to_json(w)}};
  return rep.pass && zero_ok ? Verdict::Pass : Verdict::Fail;
}

}  // namespace

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> list{
      {"weights-indices", "lower and upper dilation indices of the phi and omega weights", run_weights_indices},
      {"rearrange-props", "equimeasurability and basic properties of the nonincreasing rearrangement",
       run_rearrange_props},
      {"holder", "Hoelder inequality between a Lorentz space and the Marcinkiewicz space of the dual weight",
       run_holder},
      {"hardy", "Hardy-type inequality comparing f** and f* in weighted L^p", run_hardy},
      {"sunrise", "rearrangement of f*(r) r^{b-a} against phi weights", run_sunrise},
      {"hausdorff-young", "Hausdorff-Young inequality between Lorentz spaces", run_hausdorff_young},
      {"lemma31", "two-sided asymptotics of the truncated product integral", run_lemma31},
      {"superlevel", "superlevel sets of weighted functions and weighted rearrangements", run_superlevel},
      {"cube-support", "Marcinkiewicz, weak-type, and maximal bounds for functions on the unit cube",
       run_cube_support},
      {"kernel-tails", "distribution function of tensor Bessel kernels", run_kernel_tails},
      {"optimality", "lower bound for the rearrangement of tensor Bessel kernels", run_optimality},
      {"embedding", "limiting embedding of Bessel potentials into bounded functions", run_embedding},
      {"necessity", "divergence of the weight ratio when the log power is too small", run_necessity},
      {"lp-family", "Littlewood-Paley family and exact multiplier identities", run_lp_family},
      {"K-constant", "dilation and scaling behavior of the multiplier constant K", run_k_constant},
      {"operator-norm", "L^p operator norm lower bounds against K", run_operator_norm},
      {"pointwise-52", "pointwise control of Littlewood-Paley pieces by the strong maximal function",
       run_pointwise},
      {"imaginary-growth", "growth of Lorentz norms under imaginary-order Bessel potentials", run_imaginary_growth},
  };
  return list;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace mlab::harness::detail
