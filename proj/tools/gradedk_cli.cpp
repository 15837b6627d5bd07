#include "report.hpp"

#include "gradedk/audit.hpp"
#include "gradedk/elliptic.hpp"
#include "gradedk/graded.hpp"
#include "gradedk/io.hpp"
#include "gradedk/ktheory.hpp"
#include "gradedk/random.hpp"
#include "gradedk/spectral_hom.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gradedk;
using gradedk::cli::number;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Typed, key-checked view of one experiment config.
class Config {
 public:
  Config(Json j, std::set<std::string> allowed) : j_(std::move(j)) {
    if (!j_.is_object()) throw ConfigError("config must be a JSON object");
    allowed.insert({"experiment", "seed"});
    for (const auto& [key, _] : j_.items())
      if (!allowed.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  const Json& raw() const { return j_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& at(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError("missing config key '" + key + "'");
    return j_.at(key);
  }

  double real(const std::string& key, std::optional<double> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError("missing config key '" + key + "'");
    }
    if (!j_.at(key).is_number()) throw ConfigError("'" + key + "' must be a number");
    const double v = j_.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
    return v;
  }

  Index integer(const std::string& key, std::optional<Index> fallback, Index lo, Index hi) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError("missing config key '" + key + "'");
    }
    if (!j_.at(key).is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    const auto v = j_.at(key).get<long long>();
    if (v < lo || v > hi)
      throw ConfigError("'" + key + "' must lie in [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    return static_cast<Index>(v);
  }

  std::vector<double> grid(const std::string& key, double lower_bound, bool allow_equal) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError("'" + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError("'" + key + "' entries must be numbers");
      out.push_back(x.get<double>());
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!std::isfinite(out[i]) || out[i] < lower_bound || (!allow_equal && out[i] == lower_bound))
        throw ConfigError("'" + key + "' entries out of range");
      if (i && out[i] <= out[i - 1]) throw ConfigError("'" + key + "' must be strictly increasing");
    }
    return out;
  }

 private:
  Json j_;
};

struct Check {
  std::string name;
  std::string anchor;
  bool pass;
  double value;
  double tolerance;
  std::string detail;
};

// Accumulates checks; the report's verdict is the conjunction.
struct Report {
  Json data = Json::object();
  Json table = {{"columns", Json::array()}, {"rows", Json::array()}};
  Json series = Json::array();
  Json axes;
  std::vector<Check> checks;

  void check(Check c) { checks.push_back(std::move(c)); }
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

Json assemble(const std::string& experiment, std::uint64_t seed, const Json& config,
              const Report& r) {
  Json out;
  out["experiment"] = experiment;
  out["seed"] = seed;
  out["config"] = config;
  out["status"] = r.pass() ? "pass" : "fail";
  Json checks = Json::array(), failures = Json::array();
  for (const auto& c : r.checks) {
    Json j = {{"name", c.name}, {"anchor", c.anchor}, {"pass", c.pass},
              {"value", c.value}, {"tolerance", c.tolerance}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
    if (!c.pass) failures.push_back(j);
  }
  out["checks"] = checks;
  out["failures"] = failures;
  out["data"] = r.data;
  out["table"] = r.table;
  if (!r.series.empty()) {
    out["series"] = r.series;
    out["axes"] = r.axes;
  }
  return out;
}

// Functions ------------------------------------------------------------------

FunctionSpec lookup_function(const std::string& name) {
  static const auto catalog = function_catalog();
  if (const auto* f = find_function(catalog, name)) return *f;
  for (const auto& [prefix, odd] : {std::pair{"odd_gauss_s", true}, std::pair{"gauss_s", false}}) {
    const std::string p = prefix;
    if (name.rfind(p, 0) != 0) continue;
    try {
      std::size_t used = 0;
      const double s = std::stod(name.substr(p.size()), &used);
      if (used == name.size() - p.size() && s > 0.0 && std::isfinite(s))
        return odd ? odd_gaussian(s) : gaussian(s);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown function '" + name + "'");
}

std::vector<FunctionSpec> functions_from(const Config& c, const std::string& key) {
  if (!c.has(key)) return function_catalog();
  const Json& v = c.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError("'" + key + "' must be a nonempty array");
  std::vector<FunctionSpec> out;
  for (const auto& n : v) {
    if (!n.is_string()) throw ConfigError("'" + key + "' entries must be strings");
    out.push_back(lookup_function(n.get<std::string>()));
  }
  return out;
}

// Laurent polynomial sum_k c_k e^{ik theta}, given as [{"power", "re", "im"}].
std::function<Complex(double)> laurent_from(const Json& terms, const std::string& what) {
  if (!terms.is_array() || terms.empty()) throw ConfigError(what + " must be a nonempty term list");
  std::vector<std::pair<int, Complex>> cs;
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("power") || !t.at("power").is_number_integer())
      throw ConfigError(what + ": each term needs an integer 'power'");
    for (const auto& [key, val] : t.items()) {
      if (key != "power" && key != "re" && key != "im")
        throw ConfigError(what + ": unknown term key '" + key + "'");
      if (!val.is_number()) throw ConfigError(what + ": term values must be numbers");
    }
    const auto power = t.at("power").get<long long>();
    if (std::abs(power) > 1000) throw ConfigError(what + ": |power| must be <= 1000");
    cs.emplace_back(static_cast<int>(power), Complex(t.value("re", 0.0), t.value("im", 0.0)));
  }
  return [cs](double th) {
    Complex s = 0.0;
    for (const auto& [k, c] : cs) s += c * std::polar(1.0, k * th);
    return s;
  };
}

int sign(int exponent) { return exponent % 2 == 0 ? 1 : -1; }

// Experiments ----------------------------------------------------------------

Report tensor_audit(const Config& c, std::uint64_t seed) {
  const Index pairs = c.integer("pairs", 100, 0, 100000);
  const Index triples = c.integer("triples", 100, 0, 100000);
  const Index min_dim = c.integer("min_dim", 2, 2, 16);
  const Index max_dim = c.integer("max_dim", 8, min_dim, 16);
  const double tol = c.real("tolerance", 1e-12);

  Rng rng(seed);
  auto grading = [&] {
    const Index n = rng.integer(min_dim, max_dim);
    const Index even = rng.integer(1, n - 1);
    return GradingOperator(random_grading(rng, even, n - even, true));
  };
  auto element = [&](const GradingOperator& g, int& degree) {
    degree = static_cast<int>(rng.integer(0, 1));
    return GradedMatrix(random_homogeneous(rng, g.matrix(), degree), g);
  };
  Report r;
  r.table["columns"] = {"case", "kind", "dims", "degrees", "product", "involution",
                        "associativity", "degree_ok"};
  double product = 0, involution = 0, assoc = 0;
  long degree_failures = 0;
  for (Index i = 0; i < pairs; ++i) {
    const GradingOperator ga = grading(), gb = grading();
    int da, db, da2, db2;
    const GradedMatrix a = element(ga, da), a2 = element(ga, da2);
    const GradedMatrix b = element(gb, db), b2 = element(gb, db2);
    const GradedMatrix ab = graded_tensor(a, b);
    const double pr =
        (ab.value * graded_tensor(a2, b2).value -
         sign(db * da2) * graded_tensor(graded_product(a, a2), graded_product(b, b2)).value)
            .norm();
    const double inv =
        (ab.value.adjoint() -
         sign(da * db) * graded_tensor(graded_adjoint(a), graded_adjoint(b)).value)
            .norm();
    const auto d = degree_of(ab, tol);
    const bool dok = d && *d == (da + db) % 2;
    product = std::max(product, pr);
    involution = std::max(involution, inv);
    degree_failures += !dok;
    r.table["rows"].push_back({i, "pair", Json::array({ga.dim(), gb.dim()}),
                               Json::array({da, db, da2, db2}), pr, inv, nullptr, dok});
  }
  for (Index i = 0; i < triples; ++i) {
    const GradingOperator ga = grading(), gb = grading(), gc = grading();
    int da, db, dc;
    const GradedMatrix a = element(ga, da), b = element(gb, db), cc = element(gc, dc);
    const GradedMatrix left = graded_tensor(graded_tensor(a, b), cc);
    const GradedMatrix right = graded_tensor(a, graded_tensor(b, cc));
    const double as = std::max((left.value - right.value).norm(),
                               (left.grading.matrix() - right.grading.matrix()).norm());
    const auto d = degree_of(left, tol);
    const bool dok = d && *d == (da + db + dc) % 2;
    assoc = std::max(assoc, as);
    degree_failures += !dok;
    r.table["rows"].push_back({pairs + i, "triple", Json::array({ga.dim(), gb.dim(), gc.dim()}),
                               Json::array({da, db, dc}), nullptr, nullptr, as, dok});
  }
  r.check({"product_rule", "koszul-product-sign", product < tol, product, tol, ""});
  r.check({"involution_rule", "graded-tensor-involution-sign", involution < tol, involution, tol,
           ""});
  r.check({"associativity", "graded-tensor-associativity", assoc < tol, assoc, tol, ""});
  r.check({"degree_additivity", "graded-tensor-degree", degree_failures == 0,
           static_cast<double>(degree_failures), 0.0, "count of cases with a wrong degree"});
  r.data = {{"pairs", pairs}, {"triples", triples}};
  return r;
}

Report cfc_roundtrip(const Config& c, std::uint64_t seed) {
  const Index trials = c.integer("trials", 100, 1, 100000);
  const Index min_dim = c.integer("min_dim", 2, 2, 512);
  const Index max_dim = c.integer("max_dim", 32, min_dim, 512);
  const double tol = c.real("tolerance", 1e-9);
  Rng rng(seed);
  Report r;
  r.table["columns"] = {"trial", "dim", "even_dim", "op_norm", "residual", "support_rank"};
  double worst = 0.0;
  bool support_ok = true;
  for (Index i = 0; i < trials; ++i) {
    const Index n = rng.integer(min_dim, max_dim);
    const Index even = rng.integer(1, n - 1);
    const GradingOperator eps = GradingOperator::standard(even, n - even);
    const ComplexMatrix d = random_odd_hermitian(rng, eps.matrix());
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix res = Eigen::PartialPivLU<ComplexMatrix>(d - kI * id).inverse();
    const SpectralHom phi = recover_operator(res, eps);
    const double e = op_norm(phi.op() - d);
    worst = std::max(worst, e);
    support_ok = support_ok && phi.support_rank() == n;
    r.table["rows"].push_back({i, n, even, op_norm(d), e, phi.support_rank()});
  }
  r.check({"recovered_operator", "converse-functional-calculus", worst < tol, worst, tol, ""});
  r.check({"full_support", "converse-functional-calculus-support", support_ok,
           support_ok ? 1.0 : 0.0, 1.0, "resolvent images of D have full support"});
  return r;
}

FiniteCStar algebra_from(const Config& c) {
  const Json& v = c.at("algebra");
  if (!v.is_array() || v.empty()) throw ConfigError("'algebra' must be a nonempty array of block sizes");
  std::vector<Index> blocks;
  for (const auto& b : v) {
    if (!b.is_number_integer() || b.get<long long>() < 1 || b.get<long long>() > 16)
      throw ConfigError("'algebra' block sizes must be integers in [1, 16]");
    blocks.push_back(b.get<Index>());
  }
  return FiniteCStar(blocks);
}

Report ktheory_roundtrip(const Config& c, std::uint64_t seed) {
  const FiniteCStar algebra = algebra_from(c);
  const Index amplification = c.integer("amplification", 2, 1, 16);
  const Index classes = c.integer("classes", 50, 1, 100000);
  const AmbientLayout layout(algebra, amplification);
  Rng rng(seed);
  Report r;
  r.table["columns"] = {"trial", "input", "output", "equal"};
  long mismatches = 0;
  for (Index i = 0; i < classes; ++i) {
    const RoundtripVerdict v = roundtrip_check(random_class(rng, layout), layout);
    mismatches += !v.equal;
    r.table["rows"].push_back({i, v.input, v.output, v.equal});
  }
  r.check({"rank_vectors_equal", "mu-nu-inverse", mismatches == 0,
           static_cast<double>(mismatches), 0.0, "count of classes with nu(mu(x)) != x"});
  return r;
}

std::vector<SpectralHom> homs_from(const Config& c, Rng& rng) {
  if (c.has("operator") == c.has("random"))
    throw ConfigError("inverse-decay needs exactly one of 'operator' or 'random'");
  if (c.has("operator")) {
    const Json& op = c.at("operator");
    if (!op.is_object()) throw ConfigError("'operator' must be an object");
    const Index half = op.contains("half_dim") && op.at("half_dim").is_number_integer()
                           ? op.at("half_dim").get<Index>()
                           : -1;
    if (half < 1 || half > 64) throw ConfigError("'operator.half_dim' must be an integer in [1, 64]");
    const GradingOperator eps = GradingOperator::standard(half, half);
    ComplexMatrix d = ComplexMatrix::Zero(2 * half, 2 * half);
    if (op.contains("matrix")) d = matrix_from_json(op.at("matrix"));
    if (d.rows() != 2 * half || d.cols() != 2 * half)
      throw ConfigError("'operator.matrix' must be 2*half_dim square");
    ComplexMatrix p = ComplexMatrix::Identity(2 * half, 2 * half);
    if (op.contains("support")) p = matrix_from_json(op.at("support"));
    return {SpectralHom(eps, p, d)};
  }
  const Json& rnd = c.at("random");
  if (!rnd.is_object()) throw ConfigError("'random' must be an object");
  Config sub(rnd, {"algebra", "amplification", "count"});
  const AmbientLayout layout(algebra_from(sub), sub.integer("amplification", 1, 1, 16));
  const Index count = sub.integer("count", 4, 1, 1000);
  std::vector<SpectralHom> out;
  for (Index i = 0; i < count; ++i) out.push_back(random_amplified_hom(rng, layout).hom);
  return out;
}

Report inverse_decay(const Config& c, std::uint64_t seed) {
  const auto grid = c.grid("t_grid", 0.0, true);
  const auto functions = functions_from(c, "functions");
  const bool append_terminal = c.has("append_terminal") ? c.at("append_terminal").get<bool>() : false;
  const double terminal_tol = c.real("terminal_tolerance", 1e-6);
  Rng rng(seed);
  const auto homs = homs_from(c, rng);
  Report r;
  r.table["columns"] = {"hom", "function", "t", "norm", "tail_bound", "gap"};
  r.axes = {"t", "|f(D_t)|"};
  bool gap_ok = true, bounded = true, terminal_ok = true;
  double worst_terminal = 0.0, worst_endpoint = 0.0;
  Json homs_data = Json::array();
  for (std::size_t h = 0; h < homs.size(); ++h) {
    const SpectralHom& phi = homs[h];
    const double rho = phi.spectrum().size() ? phi.spectrum().cwiseAbs().maxCoeff() : 0.0;
    std::vector<double> g = grid;
    if (append_terminal && 16.0 * (1.0 + rho) > g.back()) g.push_back(16.0 * (1.0 + rho));
    homs_data.push_back({{"spectral_radius", rho}, {"support_rank", phi.support_rank()},
                         {"t_grid", g}});
    for (const auto& f : functions) {
      const HomotopyTrace tr = inverse_homotopy_norms(phi, f, g);
      gap_ok = gap_ok && tr.verdict.gap_ok;
      bounded = bounded && tr.verdict.bounded;
      worst_endpoint = std::max(worst_endpoint, tr.endpoint_residual);
      if (append_terminal && f.tail == TailKind::rapid) {
        worst_terminal = std::max(worst_terminal, tr.verdict.terminal_norm);
        terminal_ok = terminal_ok && tr.verdict.terminal_norm < terminal_tol;
      }
      for (std::size_t i = 0; i < g.size(); ++i)
        r.table["rows"].push_back({h, f.name, g[i], tr.norms[i], tr.bounds[i], tr.gaps[i]});
      r.series.push_back({{"name", homs.size() > 1 ? f.name + "#" + std::to_string(h) : f.name},
                          {"x", g},
                          {"y", tr.norms}});
    }
  }
  r.data = {{"homs", homs_data}};
  r.check({"gap", "inverse-homotopy-gap", gap_ok, gap_ok ? 1.0 : 0.0, 1e-9,
           "min spec(D_t^2) >= t^2"});
  r.check({"tail_bound", "inverse-homotopy-decay", bounded, bounded ? 1.0 : 0.0, 1e-10,
           "|f(D_t)| <= sup_{|x|>=t} |f(x)|"});
  r.check({"endpoint", "inverse-homotopy-endpoint", worst_endpoint < 1e-10, worst_endpoint, 1e-10,
           "D_0 restricts to phi (+) phi^op"});
  if (append_terminal)
    r.check({"terminal_norm", "inverse-homotopy-terminal", terminal_ok, worst_terminal,
             terminal_tol, "rapidly decaying functions at t = 16 (1 + rho)"});
  return r;
}

Report toeplitz_index(const Config& c, std::uint64_t) {
  const Index n = c.integer("truncation", 64, 1, 4096);
  const Json& symbols = c.at("symbols");
  if (!symbols.is_array() || symbols.empty()) throw ConfigError("'symbols' must be a nonempty array");
  std::vector<std::pair<std::string, std::function<Complex(double)>>> gs;
  for (const auto& s : symbols) {
    if (!s.is_object() || !s.contains("name") || !s.at("name").is_string() || !s.contains("terms"))
      throw ConfigError("each symbol needs 'name' and 'terms'");
    gs.emplace_back(s.at("name").get<std::string>(),
                    laurent_from(s.at("terms"), "symbol " + s.at("name").get<std::string>()));
  }
  Report r;
  r.table["columns"] = {"symbol", "winding", "index", "kernel", "cokernel", "stable", "ambiguous"};
  for (const auto& [name, g] : gs) {
    const ToeplitzReport t = toeplitz_experiment(g, n);
    r.table["rows"].push_back(
        {name, t.winding, t.index, t.kernel_dim, t.cokernel_dim, t.stable, t.ambiguous});
    r.check({"index:" + name, "toeplitz-index-minus-winding", t.agrees() && !t.ambiguous,
             static_cast<double>(t.index), static_cast<double>(-t.winding),
             t.ambiguous ? "threshold or localization ambiguous" : ""});
  }
  return r;
}

Report quantize_converge(const Config& c, std::uint64_t) {
  QuantizationConfig q;
  q.truncation = c.integer("truncation", 64, 1, 4096);
  q.samples = c.integer("samples", 4 * q.truncation + 4, 4 * q.truncation + 1, 1 << 20);
  q.tau_tail = c.real("tau_tail", 1e-3);
  q.xi_max = c.real("xi_max", 0.0);
  if (q.tau_tail <= 0.0 || q.xi_max < 0.0) throw ConfigError("tau_tail > 0 and xi_max >= 0 required");
  const auto grid = c.grid("t_grid", 0.0, false);
  const auto functions = functions_from(c, "functions");
  const double max_exponent = c.real("max_fit_exponent", -0.8);
  std::map<std::string, double> thresholds;
  if (c.has("thresholds")) {
    const Json& t = c.at("thresholds");
    if (!t.is_object()) throw ConfigError("'thresholds' must map function names to numbers");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) throw ConfigError("'thresholds' values must be numbers");
      thresholds[k] = v.get<double>();
    }
    for (const auto& [k, _] : thresholds)
      if (std::none_of(functions.begin(), functions.end(),
                       [&k](const FunctionSpec& f) { return f.name == k; }))
        throw ConfigError("threshold for function '" + k + "' not in the run");
  }
  const auto a = laurent_from(c.at("a"), "a");
  const auto b = laurent_from(c.at("b"), "b");
  const auto spec = scalar_circle_spec(q.samples, a, b);
  const auto report = index_theorem_experiment(spec, functions, grid, q);

  Report r;
  r.table["columns"] = {"function", "t", "error"};
  r.axes = {"t", "e(t)"};
  Json curves = Json::array();
  for (const auto& curve : report.curves) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      r.table["rows"].push_back({curve.function, grid[i], curve.errors[i]});
    r.series.push_back({{"name", curve.function}, {"x", grid}, {"y", curve.errors}});
    curves.push_back({{"function", curve.function},
                      {"errors", curve.errors},
                      {"contaminated", curve.contaminated}});
    if (grid.size() >= 2) {
      curves.back()["fit_exponent"] = curve.fit_exponent;
      r.check({"decreasing:" + curve.function, "quantization-convergence",
               curve.strictly_decreasing, curve.strictly_decreasing ? 1.0 : 0.0, 1.0, ""});
      r.check({"fit_exponent:" + curve.function, "quantization-convergence-rate",
               curve.fit_exponent <= max_exponent, curve.fit_exponent, max_exponent, ""});
    }
    if (const auto it = thresholds.find(curve.function); it != thresholds.end())
      r.check({"final_error:" + curve.function, "quantization-convergence-calibrated",
               curve.errors.back() < it->second, curve.errors.back(), it->second,
               "e(t) at the last t below the calibrated threshold"});
  }
  r.data = {{"curves", curves},
            {"index_analytic", report.index_analytic},
            {"index_symbolic", report.index_symbolic},
            {"index_ambiguous", report.index_ambiguous},
            {"xi_max", report.xi_max},
            {"truncation", report.truncation},
            {"samples", q.samples}};
  r.check({"index_agreement", "analytic-equals-symbolic-index",
           report.index_analytic == report.index_symbolic && !report.index_ambiguous,
           static_cast<double>(report.index_analytic), static_cast<double>(report.index_symbolic),
           report.index_ambiguous ? "analytic index ambiguous" : ""});
  if (c.has("expected_index")) {
    const auto expected = c.integer("expected_index", {}, -1000000, 1000000);
    r.check({"expected_index", "analytic-index", report.index_analytic == expected,
             static_cast<double>(report.index_analytic), static_cast<double>(expected), ""});
  }
  return r;
}

Report identity_audit_run(const Config&, std::uint64_t seed) {
  Report r;
  r.table["columns"] = {"id", "anchor", "primary", "displayed", "forced", "counterexample",
                        "displayed_residual", "forced_residual", "confirmed"};
  for (const auto& e : identity_audit(seed)) {
    r.table["rows"].push_back({e.id, e.anchor, e.primary, e.displayed, e.forced, e.counterexample,
                               e.displayed_residual, e.forced_residual, e.correction_confirmed()});
    r.check({"correction:" + e.id, e.anchor, e.correction_confirmed(), e.forced_residual, 1e-12,
             "displayed residual " + number(e.displayed_residual, "%.6g") +
                 " on the counterexample; forced identity residual as value"});
  }
  return r;
}

struct Experiment {
  const char* name;
  const char* description;
  std::set<std::string> keys;
  Report (*run)(const Config&, std::uint64_t);
};

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> list{
      {"tensor-audit", "Koszul sign rules on random homogeneous graded tensors",
       {"pairs", "triples", "min_dim", "max_dim", "tolerance"}, tensor_audit},
      {"cfc-roundtrip", "recover D from its resolvent image",
       {"trials", "min_dim", "max_dim", "tolerance"}, cfc_roundtrip},
      {"ktheory-roundtrip", "nu(mu(x)) = x on random K0 classes",
       {"algebra", "amplification", "classes"}, ktheory_roundtrip},
      {"inverse-decay", "norm decay along the inverse-class homotopy",
       {"t_grid", "functions", "operator", "random", "append_terminal", "terminal_tolerance"},
       inverse_decay},
      {"toeplitz-index", "Toeplitz section index against the winding number",
       {"truncation", "symbols"}, toeplitz_index},
      {"quantize-converge", "quantized symbol calculus against f(D / t) on the circle",
       {"truncation", "samples", "tau_tail", "xi_max", "t_grid", "functions", "a", "b",
        "thresholds", "max_fit_exponent", "expected_index"},
       quantize_converge},
      {"paper-audit", "discrepancy report for displayed identities and their corrections", {},
       identity_audit_run},
  };
  return list;
}

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("malformed config '" + path + "': " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradedk: graded K-theory numerical experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format = "json";
  std::optional<std::uint64_t> seed_flag;
  bool plot = false;

  for (const auto& e : experiments()) {
    auto* sub = app.add_subcommand(e.name, e.description);
    sub->add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default $GRADEDK_OUT_DIR or ./gradedk-out)");
    sub->add_option("--seed", seed_flag, "RNG seed, overrides the config");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--plot", plot, "also write an SVG plot when the report has series");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const Experiment* chosen = nullptr;
  for (const auto& e : experiments())
    if (app.got_subcommand(e.name)) chosen = &e;

  Json report;
  try {
    Json raw = config_path.empty() ? Json::object() : read_config(config_path);
    if (raw.is_object() && raw.contains("experiment") &&
        raw.at("experiment") != Json(chosen->name))
      throw ConfigError("config is for experiment " + raw.at("experiment").dump());
    const Config config(raw, chosen->keys);
    std::uint64_t seed = 0;
    if (config.has("seed")) {
      if (!config.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be an unsigned integer");
      seed = config.at("seed").get<std::uint64_t>();
    }
    if (seed_flag) seed = *seed_flag;
    const Report r = chosen->run(config, seed);
    report = assemble(chosen->name, seed, raw, r);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gradedk::Error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  // Render everything before touching the filesystem.
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back(std::string(chosen->name) + ".json", report.dump(2) + "\n");
  if (format == "csv") files.emplace_back(std::string(chosen->name) + ".csv", cli::render_csv(report));
  if (plot && cli::has_plot(report))
    files.emplace_back(std::string(chosen->name) + ".svg", cli::render_svg(report));

  if (out_dir.empty()) {
    const char* env = std::getenv("GRADEDK_OUT_DIR");
    out_dir = env && *env ? env : "gradedk-out";
  }
  try {
    fs::create_directories(out_dir);
    for (const auto& [name, content] : files) write_file(fs::path(out_dir) / name, content);
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfig;
  }

  const bool pass = report.at("status") == "pass";
  std::cout << chosen->name << ": " << (pass ? "pass" : "fail") << " ("
            << report.at("checks").size() << " checks, " << report.at("failures").size()
            << " failed) -> " << (fs::path(out_dir) / (std::string(chosen->name) + ".json")).string()
            << "\n";
  return pass ? kExitPass : kExitFail;
}
