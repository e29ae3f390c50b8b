// Runs every acceptance criterion against the shipped configs and prints one
// [PASS]/[FAIL] line per criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "qhkit/experiments.hpp"
#include "qhkit/maps.hpp"
#include "qhkit/qh_metric.hpp"

namespace {

using namespace qhkit;

// Pinned tolerances.
constexpr double kBracket = 1.02;
constexpr double kHalfspaceSeconds = 60.0;
constexpr double kQuadratureRel = 1e-9;
constexpr std::size_t kMinSuiteSamples = 1000;
constexpr double kSolidNuMax = 8.0;
constexpr std::size_t kChainInstances = 100;
constexpr double kChainMaxN = 9.0;
constexpr double kSlitFinalMin = 25.0;
constexpr double kJohnMax = 10.0;
constexpr double kMaxDrift = 0.15;
constexpr std::size_t kCertifiedArcs = 50;

std::string g_config_dir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double value(const ReportRow& r, const std::string& key) {
  for (const auto& [k, v] : r.values) {
    if (k == key) return v;
  }
  return std::nan("");
}

// Reports are cached so criteria sharing an experiment run it once.
const ExperimentReport& run(const std::string& file) {
  static std::map<std::string, ExperimentReport> cache;
  auto it = cache.find(file);
  if (it == cache.end()) it = cache.emplace(file, run_experiment(load_config(g_config_dir + "/" + file))).first;
  return it->second;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome halfspace_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport& rep = run("halfspace_validation.json");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t n = 0;
  bool ok = true;
  double worst = 0.0;
  for (const ReportRow& r : rep.rows) {
    if (r.check != "oracle_bracket") continue;
    ++n;
    const double oracle = value(r, "oracle");
    const double upper = value(r, "upper");
    worst = std::max(worst, upper / oracle);
    ok = ok && upper >= oracle && upper <= kBracket * oracle;
  }
  return {ok && n == 50 && rep.skipped.empty() && secs <= kHalfspaceSeconds,
          fmt("pairs=%g max upper/oracle=%.5f runtime=%.1fs", static_cast<double>(n), worst, secs)};
}

Outcome quadrature() {
  const Domain half = Domain::upper_half_plane(Box{Point{-4.0, 0.0}, Point{4.0, 8.0}});
  const Domain disk = Domain::ball(Point{0.0, 0.0}, 1.0);
  double worst = 0.0;
  for (const auto& [a, b] : {std::pair{0.1, 2.0}, std::pair{1.0, 2.0}, std::pair{0.01, 5.0}, std::pair{0.5, 0.7}}) {
    const double exact = std::log(b / a);
    const double v = qh_segment_length(half, Point{0.3, a}, Point{0.3, b}).value;
    worst = std::max(worst, std::abs(v - exact) / exact);
  }
  for (const auto& [r1, r2] : {std::pair{0.0, 0.5}, std::pair{0.2, 0.9}, std::pair{0.5, 0.99}}) {
    const double exact = std::log((1.0 - r1) / (1.0 - r2));
    const double v = qh_segment_length(disk, Point{r1 * 0.6, r1 * 0.8}, Point{r2 * 0.6, r2 * 0.8}).value;
    worst = std::max(worst, std::abs(v - exact) / exact);
  }
  return {worst <= kQuadratureRel, fmt("max relative error=%.3g", worst)};
}

Outcome inequality_suite() {
  const ExperimentReport& rep = run("bounds_suite.json");
  std::map<std::string, std::set<std::size_t>> samples;
  std::map<std::string, std::size_t> per_check;
  for (const ReportRow& r : rep.rows) {
    const auto slash = r.check.find('/');
    samples[r.check.substr(0, slash)].insert(r.index);
    ++per_check[r.check];
  }
  bool ok = rep.violations() == 0 && samples.size() == 3;
  std::string detail = "violations=" + std::to_string(rep.violations());
  for (const auto& [domain, idx] : samples) {
    ok = ok && idx.size() >= kMinSuiteSamples;
    for (const char* c : {"/length_growth_arc", "/growth_close", "/local_bracket", "/short_arc_length"}) {
      ok = ok && per_check[domain + c] >= kMinSuiteSamples;
    }
    detail += " " + domain + "=" + std::to_string(idx.size());
  }
  return {ok, detail};
}

Outcome uniform_k() {
  const ExperimentReport& rep = run("bounds_suite.json");
  std::size_t n = 0;
  std::size_t bad = 0;
  for (const ReportRow& r : rep.rows) {
    if (r.check != "ball/uniform_k_bound") continue;
    ++n;
    if (!r.pass) ++bad;
  }
  return {n >= kMinSuiteSamples && bad == 0, "pairs=" + std::to_string(n) + " violations=" + std::to_string(bad)};
}

Outcome solidity() {
  const SolidParams sp = solid_params_from_cqh(1.0, 0.0);
  const ExperimentReport& rep = run("halfspace_validation.json");
  std::size_t n = 0;
  bool ok = sp.nu == 8.0 && sp.h == 2.0;
  double worst = 0.0;
  for (const ReportRow& r : rep.rows) {
    if (r.check != "solidity") continue;
    ++n;
    worst = std::max(worst, value(r, "nu_hat"));
    ok = ok && r.pass && value(r, "nu_hat") <= kSolidNuMax && value(r, "h") == 2.0;
  }
  return {ok && n > 0, fmt("solid_params(1,0)=(%g,%g) max nu_hat=%.4f", sp.nu, sp.h, worst) +
                           " arcs=" + std::to_string(n)};
}

Outcome chain_suite() {
  const ExperimentReport& rep = run("chain_suite.json");
  std::size_t n = 0;
  bool ok = chain_image_bound(1.0, 2.0) == 9216.0;
  double worst = 0.0;
  for (const ReportRow& r : rep.rows) {
    if (r.check != "chain_count" || value(r, "c") != 1.0) continue;
    ++n;
    worst = std::max(worst, value(r, "n"));
    ok = ok && r.pass && value(r, "n") <= kChainMaxN;
  }
  return {ok && n >= kChainInstances && rep.passed(),
          fmt("instances(c=1)=%g max n=%g chain_image_bound(1,2)=%g", static_cast<double>(n), worst,
              chain_image_bound(1.0, 2.0))};
}

Outcome slit() {
  const ExperimentReport& rep = run("slit_counterexample.json");
  std::vector<double> c_hat;
  double cone = 0.0;
  for (const ReportRow& r : rep.rows) {
    if (r.check == "quasiconvexity") c_hat.push_back(value(r, "c_hat"));
    if (r.check == "john_cone") cone = std::max(cone, value(r, "cone"));
  }
  bool ok = c_hat.size() == 3;
  for (std::size_t i = 1; i < c_hat.size(); ++i) ok = ok && c_hat[i] > c_hat[i - 1];
  ok = ok && !c_hat.empty() && c_hat.back() >= kSlitFinalMin && cone <= kJohnMax && rep.passed();
  return {ok, fmt("c_hat final=%.2f max john cone=%.2f", c_hat.empty() ? 0.0 : c_hat.back(), cone)};
}

Outcome subinvariance() {
  const ExperimentReport& rep = run("subinvariance.json");
  bool ok = rep.passed();
  double drift = std::nan("");
  std::size_t pairs = 0;
  for (const ReportRow& r : rep.rows) {
    if (r.check == "pair_uniformity") {
      ++pairs;
      for (const auto& [k, v] : r.values) ok = ok && std::isfinite(v);
    }
    if (r.check == "drift") drift = value(r, "drift");
  }
  ok = ok && pairs > 0 && std::isfinite(drift) && drift <= kMaxDrift;
  return {ok, fmt("pairs=%g drift=%.4f", static_cast<double>(pairs), drift)};
}

Outcome short_arc_image() {
  const ExperimentReport& rep = run("short_arc_image.json");
  double found = 0.0;
  std::size_t case2 = 0;
  for (const ReportRow& r : rep.rows) {
    if (r.check == "certified_arcs") found = value(r, "found");
    if (r.check == "case2_cigar") ++case2;
  }
  return {found >= static_cast<double>(kCertifiedArcs) && rep.violations() == 0,
          fmt("certified arcs=%g case2 rows=%g violations=%g", found, static_cast<double>(case2),
              static_cast<double>(rep.violations()))};
}

}  // namespace

int main(int argc, char** argv) {
  g_config_dir = argc > 1 ? argv[1] : QHKIT_CONFIG_DIR;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"half-space oracle bracket", halfspace_oracle},
      {"quadrature closed forms", quadrature},
      {"inequality suite", inequality_suite},
      {"uniform-domain k bound on the ball", uniform_k},
      {"solidity of short half-space arcs", solidity},
      {"chain suite", chain_suite},
      {"slit disk counterexample", slit},
      {"subinvariance of uniformity", subinvariance},
      {"short-arc image cigar bound", short_arc_image},
  };
  int failures = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
