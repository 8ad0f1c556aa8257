// pwcert: scattering certificates, verification suites and 1-D models.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pwcert/io.hpp"
#include "pwcert/pwcert.hpp"

namespace {

using pwcert::io::json;

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kRegimeError = 3 };

// ---------------------------------------------------------------------------
// Config files: JSON or TOML, either sectioned by command ([certify] / {"certify": {...}})
// or flat with a top-level `command` key.

class ConfigAny : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool defaults, bool write_desc, std::string prefix) const override {
    return CLI::ConfigTOML().to_config(app, defaults, write_desc, std::move(prefix));
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<CLI::ConfigItem> items;
    if (first != std::string::npos && text[first] == '{') {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw CLI::ConfigError(std::string("malformed JSON config: ") + e.what());
      }
      flatten(j, {}, items);
    } else {
      std::istringstream again(text);
      items = CLI::ConfigTOML().from_config(again);
    }
    return reparent(std::move(items));
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::ConfigError("JSON config must be an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        std::vector<std::string> sub = parents;
        sub.push_back(key);
        out.push_back({sub, "++", {}});
        flatten(value, sub, out);
        out.push_back({sub, "--", {}});
        continue;
      }
      CLI::ConfigItem item{parents, key, {}};
      if (value.is_array()) {
        for (const json& e : value) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }

  // A root-level `command = "x"` moves the other root keys into section x.
  static std::vector<CLI::ConfigItem> reparent(std::vector<CLI::ConfigItem> items) {
    auto it = std::find_if(items.begin(), items.end(),
                           [](const CLI::ConfigItem& c) { return c.parents.empty() && c.name == "command"; });
    if (it == items.end()) return items;
    if (it->inputs.size() != 1) throw CLI::ConfigError("config: 'command' must be a single string");
    const std::string command = it->inputs.front();
    std::vector<CLI::ConfigItem> out{{{command}, "++", {}}};
    std::vector<CLI::ConfigItem> rest;
    for (auto& item : items) {
      if (item.parents.empty()) {
        if (item.name == "command") continue;
        item.parents = {command};
        out.push_back(std::move(item));
      } else {
        rest.push_back(std::move(item));
      }
    }
    out.push_back({{command}, "--", {}});
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
};

// ---------------------------------------------------------------------------
// Options shared across commands

struct Options {
  std::string domain_file;
  double a = 1.0;
  double q = 0.0;
  double eta = 0.0;
  double k = 0.0;
  std::string k_range;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int angles = 360;
  int threads = 0;
  int count = 50;
  std::string fault;
  std::string domain_id;
  double width = 1.0;
  double radius = 1.0;
  bool high_k = false;
};

struct KRange {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    std::vector<double> ks(steps);
    for (int i = 0; i < steps; ++i) ks[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    return ks;
  }
};

KRange parse_k_range(const std::string& text) {
  KRange r;
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) throw pwcert::InvalidInput("--k-range must be LO:HI:N");
  try {
    r.lo = std::stod(text.substr(0, c1));
    r.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    r.steps = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw pwcert::InvalidInput("--k-range must be LO:HI:N with numeric fields");
  }
  if (!(r.lo > 0.0)) throw pwcert::InvalidInput("--k-range: LO must be > 0");
  if (!(r.hi >= r.lo)) throw pwcert::InvalidInput("--k-range: HI must be >= LO");
  if (r.steps < 1) throw pwcert::InvalidInput("--k-range: N must be >= 1");
  return r;
}

std::string domain_label(const Options& o) {
  if (!o.domain_id.empty()) return o.domain_id;
  const auto slash = o.domain_file.find_last_of('/');
  std::string base = slash == std::string::npos ? o.domain_file : o.domain_file.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

json tolerances(const Options& o) {
  const pwcert::quad::Tolerance q;
  return {{"quadrature_abs", q.abs},
          {"quadrature_rel", q.rel},
          {"exceptional_angle", pwcert::kExceptionalAngleTol},
          {"h_samples", pwcert::kHSamples},
          {"slab", pwcert::kSlabTolerance},
          {"verify", o.tol},
          {"sign_guard", "1e-9 * area * width"}};
}

// Report envelope: version, a hash of the effective configuration, tolerances.
json envelope(const std::string& command, const json& config, const Options& o) {
  return {{"tool", "pwcert"},
          {"version", pwcert::io::kToolVersion},
          {"command", command},
          {"config", config},
          {"config_hash", pwcert::io::fnv1a_hex(config.dump())},
          {"tolerances", tolerances(o)}};
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw pwcert::InvalidInput("cannot write '" + o.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string fmt(double x) { return pwcert::io::format_double(x); }

std::string bound_text(double x) { return std::isinf(x) ? "inf" : fmt(x); }

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw pwcert::InvalidInput("--format must be json or csv");
}

// ---------------------------------------------------------------------------
// certify

int cmd_certify(const Options& o) {
  check_format(o);
  const pwcert::Domain domain = pwcert::io::read_domain(o.domain_file);
  const pwcert::Material material(o.a, o.q);
  std::vector<double> checks;
  double k_max = o.k > 0.0 ? o.k : 1000.0;
  if (!o.k_range.empty()) {
    const KRange r = parse_k_range(o.k_range);
    checks = r.values();
    k_max = std::max(k_max, r.hi);
  }
  const pwcert::Direction eta(o.eta);
  const pwcert::Certificate cert = pwcert::certify(domain, eta, material, k_max);

  json threshold = nullptr;
  const bool threshold_regime = material.n() > 1.0 && material.na_above_one() &&
                                cert.convexity == pwcert::Convexity::strictly_convex;
  if (o.high_k || threshold_regime) {
    const auto t = pwcert::high_k_threshold(domain, material);  // RegimeError when --high-k is out of regime
    if (t) threshold = *t;
  }

  json config = {{"domain", pwcert::io::domain_to_json(domain)}, {"a", o.a},     {"q", o.q},
                 {"eta", o.eta},    {"k_max", k_max},  {"k_range", o.k_range}, {"high_k", o.high_k}};
  json report = envelope("certify", config, o);
  report["certificate"] = pwcert::io::certificate_to_json(cert);
  report["high_k_threshold"] = threshold;
  const auto first = cert.first_uncovered();
  report["summary"] = {{"full_spectrum", cert.full_spectrum}, {"first_uncovered", first ? json(*first) : json(nullptr)}};
  if (!checks.empty()) {
    json rows = json::array();
    for (double k : checks) rows.push_back({{"k", k}, {"certified", cert.covers(k)}});
    report["k_checks"] = rows;
  }

  if (o.format == "json") {
    emit(o, report.dump(2));
  } else {
    std::ostringstream os;
    os << "lo,hi,lo_closed,hi_closed,source,punctures\n";
    for (const pwcert::Band& b : cert.bands) {
      os << fmt(b.lo) << ',' << bound_text(b.hi) << ',' << (b.lo_closed ? 1 : 0) << ',' << (b.hi_closed ? 1 : 0) << ','
         << b.source << ',';
      for (std::size_t i = 0; i < b.punctures.size(); ++i) os << (i ? ";" : "") << fmt(b.punctures[i]);
      os << '\n';
    }
    emit(o, os.str());
  }
  std::cerr << "certify: full_spectrum=" << (cert.full_spectrum ? "true" : "false");
  if (first) std::cerr << " first_uncovered=" << fmt(*first);
  std::cerr << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// scan

struct ScanEntry {
  double eta = 0.0;
  pwcert::Certificate cert;
};

int cmd_scan(const Options& o) {
  check_format(o);
  if (o.angles < 1) throw pwcert::InvalidInput("--angles must be >= 1");
  const pwcert::Domain domain = pwcert::io::read_domain(o.domain_file);
  const pwcert::Material material(o.a, o.q);
  const double k_max = o.k > 0.0 ? o.k : 1000.0;

  std::vector<ScanEntry> entries(o.angles);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < o.angles; i = next++) {
      try {
        const double angle = pwcert::kTwoPi * i / o.angles;
        entries[i] = {angle, pwcert::certify(domain, pwcert::Direction(angle), material, k_max)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int threads = std::clamp(o.threads > 0 ? o.threads : static_cast<int>(hw), 1, o.angles);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  bool all_full = true;
  for (const ScanEntry& e : entries) all_full = all_full && e.cert.full_spectrum;

  if (o.format == "json") {
    json config = {{"domain", pwcert::io::domain_to_json(domain)}, {"a", o.a}, {"q", o.q},
                   {"angles", o.angles}, {"k_max", k_max}};
    json report = envelope("scan", config, o);
    json rows = json::array();
    for (const ScanEntry& e : entries) {
      const auto first = e.cert.first_uncovered();
      json gaps = json::array();
      for (const pwcert::Gap& g : e.cert.coverage_gaps) gaps.push_back({{"lo", g.lo}, {"hi", pwcert::io::bound(g.hi)}});
      json sources = json::array();
      for (const pwcert::Band& b : e.cert.bands) sources.push_back(b.source);
      rows.push_back({{"eta", e.eta},
                      {"h0", e.cert.h0 ? json(*e.cert.h0) : json(nullptr)},
                      {"h1", e.cert.h1 ? json(*e.cert.h1) : json(nullptr)},
                      {"full_spectrum", e.cert.full_spectrum},
                      {"first_uncovered", first ? json(*first) : json(nullptr)},
                      {"gaps", gaps},
                      {"sources", sources}});
    }
    report["entries"] = rows;
    report["convexity"] = std::string(pwcert::to_string(pwcert::classify_convexity(domain)));
    report["all_full_spectrum"] = all_full;
    emit(o, report.dump(2));
  } else {
    std::ostringstream os;
    os << "eta,h0,h1,full_spectrum,first_uncovered,gap_count\n";
    for (const ScanEntry& e : entries) {
      const auto first = e.cert.first_uncovered();
      os << fmt(e.eta) << ',' << (e.cert.h0 ? fmt(*e.cert.h0) : "") << ',' << (e.cert.h1 ? fmt(*e.cert.h1) : "") << ','
         << (e.cert.full_spectrum ? 1 : 0) << ',' << (first ? fmt(*first) : "") << ',' << e.cert.coverage_gaps.size()
         << '\n';
    }
    emit(o, os.str());
  }
  std::cerr << "scan: " << o.angles << " directions, all_full_spectrum=" << (all_full ? "true" : "false") << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct Case {
  std::string suite;
  pwcert::io::VerificationRow row;
  json params;
};

class VerifySuites {
 public:
  VerifySuites(const pwcert::Domain& d, const pwcert::Material& m, const Options& o)
      : d_(d), m_(m), o_(o), eta_(o.eta), rng_(o.seed), area_(pwcert::area(d)), diam_(pwcert::diameter(d)) {}

  std::vector<Case> run() {
    agreement();
    signs();
    lemma();
    if (m_.index_below_one()) positivity();
    return std::move(cases_);
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  void add(const std::string& suite, const std::string& method, pwcert::cplx I, pwcert::cplx C, double err, bool ok,
           json params) {
    cases_.push_back({suite, {domain_label(o_), method, I, C, err, ok}, std::move(params)});
  }

  // Random real xi and k with |k (eta + n xi)| diam <= 40.
  std::pair<pwcert::ComplexDirection, double> random_real_xi() {
    for (;;) {
      const pwcert::ComplexDirection xi = pwcert::ComplexDirection::real(pwcert::Direction(uniform(0.0, pwcert::kTwoPi)));
      const pwcert::Vec2 v{eta_.x() + m_.n() * xi.xi1.real(), eta_.y() + m_.n() * xi.xi2.real()};
      const double len = pwcert::norm(v);
      if (len < 1e-3) continue;
      const double rho = uniform(0.05, 40.0) / diam_;
      return {xi, rho / len};
    }
  }

  void agreement() {
    for (int i = 0; i < o_.count; ++i) {
      const auto [xi, k] = random_real_xi();
      const pwcert::WaveVector kappa = pwcert::wave_vector(eta_, m_.n(), k, xi);
      const pwcert::cplx C = pwcert::c_coefficient(xi, eta_, m_);
      const pwcert::IntegralValue s = pwcert::exp_integral(d_, kappa, pwcert::IntegralMethod::slice);
      const pwcert::IntegralValue a = pwcert::exp_integral(d_, kappa, pwcert::IntegralMethod::area);
      std::vector<pwcert::IntegralValue> values{s, a};
      try {
        values.push_back(pwcert::exp_integral(d_, kappa, pwcert::IntegralMethod::closed_form));
      } catch (const pwcert::MethodError&) {
      }
      const double scale = std::max(std::abs(a.value), 1e-3 * area_);
      bool ok = true;
      for (const auto& v : values) ok = ok && std::abs(v.value - a.value) <= o_.tol * scale;
      const json params = {{"case", i}, {"k", k}, {"xi", {xi.xi1.real(), xi.xi2.real()}}};
      for (const auto& v : values) {
        add("agreement", std::string(pwcert::to_string(v.method)), v.value, C, v.est_error, ok, params);
      }
    }
  }

  void signs() {
    const bool strict = pwcert::classify_convexity(d_) == pwcert::Convexity::strictly_convex;
    for (int i = 0; i < o_.count; ++i) {
      const pwcert::Direction lam(uniform(0.0, pwcert::kTwoPi));
      pwcert::SliceProfile prof = pwcert::slice_profile(d_, lam, 16);
      if (o_.fault == "negate-profile") {
        auto original = prof.length_fn;
        prof.length_fn = [original](double t) { return -original(t); };
      }
      const double rate = uniform(0.01, 1.0) * std::numbers::pi / prof.width;
      const pwcert::SignReport s = pwcert::verify_sign_properties(prof, area_, rate);
      add("sign_im", "slice", {s.re_value, s.im_value}, 0.0, 0.0, s.im_positive.value_or(false),
          {{"case", i}, {"lambda", lam.angle()}, {"R", rate}, {"Rw", s.rw}});
      if (!strict) continue;
      const int m = 1 + i % 5;
      const double rate_m = pwcert::kTwoPi * m / prof.width;
      const pwcert::SignReport r = pwcert::verify_sign_properties(prof, area_, rate_m);
      add("sign_re", "slice", {r.re_value, r.im_value}, 0.0, 0.0, r.re_negative_at_2pim.value_or(false),
          {{"case", i}, {"lambda", lam.angle()}, {"R", rate_m}, {"m", m}});
    }
  }

  void lemma() {
    for (int i = 0; i < o_.count; ++i) {
      pwcert::ComplexDirection xi;
      double k = 0.0;
      if (m_.index_below_one() && i % 2 == 1) {
        xi = pwcert::complex_xi_sub1(m_, eta_);
        k = uniform(0.1, 20.0) / diam_;
      } else {
        std::tie(xi, k) = random_real_xi();
      }
      const pwcert::LemmaResidual r = pwcert::lemma_phi_residual(d_, eta_, m_, k, xi);
      const bool ok = r.residual <= o_.tol && r.gradient_residual <= o_.tol;
      add("lemma", "area", r.rhs, pwcert::c_coefficient(xi, eta_, m_), r.residual, ok,
          {{"case", i},
           {"k", k},
           {"xi", {{xi.xi1.real(), xi.xi1.imag()}, {xi.xi2.real(), xi.xi2.imag()}}},
           {"residual", r.residual},
           {"gradient_residual", r.gradient_residual}});
    }
  }

  void positivity() {
    const pwcert::ComplexDirection xi = pwcert::complex_xi_sub1(m_, eta_);
    const double y = std::sqrt(1.0 / (m_.n() * m_.n()) - 1.0);
    for (int i = 0; i < o_.count; ++i) {
      const double k = uniform(0.1, 20.0) / diam_;
      const pwcert::OscillatoryIntegralReport r =
          pwcert::integral_I(d_, eta_, m_, k, xi, pwcert::IntegralMethod::area);
      const double floor = area_ * std::exp(-k * m_.n() * y * diam_);
      const bool ok = std::fabs(r.I_value.imag()) <= 1e-10 * std::abs(r.I_value) && r.I_value.real() >= floor;
      add("complex_xi", "area", r.I_value, r.C_value, r.est_error, ok, {{"case", i}, {"k", k}, {"lower_bound", floor}});
    }
  }

  const pwcert::Domain& d_;
  const pwcert::Material& m_;
  const Options& o_;
  pwcert::Direction eta_;
  std::mt19937_64 rng_;
  double area_;
  double diam_;
  std::vector<Case> cases_;
};

int cmd_verify(const Options& o) {
  check_format(o);
  if (o.count < 1) throw pwcert::InvalidInput("--count must be >= 1");
  if (!o.fault.empty() && o.fault != "negate-profile") throw pwcert::InvalidInput("--inject-fault: unknown fault '" + o.fault + "'");
  if (!(o.tol > 0.0)) throw pwcert::InvalidInput("--tol must be > 0");
  const pwcert::Domain domain = pwcert::io::read_domain(o.domain_file);
  const pwcert::Material material(o.a, o.q);
  VerifySuites suites(domain, material, o);
  const std::vector<Case> cases = suites.run();

  int failures = 0;
  for (const Case& c : cases) {
    if (c.row.checks_passed) continue;
    ++failures;
    std::cerr << "FAIL " << c.suite << ' ' << c.row.method << ' ' << c.params.dump() << " I=(" << fmt(c.row.I.real())
              << ',' << fmt(c.row.I.imag()) << ")\n";
  }

  if (o.format == "csv") {
    std::ostringstream os;
    os << pwcert::io::csv_header() << '\n';
    for (const Case& c : cases) os << pwcert::io::to_csv(c.row) << '\n';
    emit(o, os.str());
  } else {
    json config = {{"domain", pwcert::io::domain_to_json(domain)}, {"a", o.a}, {"q", o.q}, {"eta", o.eta},
                   {"seed", o.seed}, {"count", o.count}, {"fault", o.fault}};
    json report = envelope("verify", config, o);
    json rows = json::array();
    for (const Case& c : cases) {
      rows.push_back({{"suite", c.suite},
                      {"domain_id", c.row.domain_id},
                      {"method", c.row.method},
                      {"I", {c.row.I.real(), c.row.I.imag()}},
                      {"C", {c.row.C.real(), c.row.C.imag()}},
                      {"est_error", c.row.est_error},
                      {"checks_passed", c.row.checks_passed},
                      {"params", c.params}});
    }
    report["cases"] = rows;
    report["failures"] = failures;
    report["passed"] = failures == 0;
    emit(o, report.dump(2));
  }
  std::cerr << "verify: " << cases.size() << " rows, " << failures << " failures\n";
  return failures == 0 ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// slab and disk

int cmd_slab(const Options& o) {
  check_format(o);
  std::vector<double> ks;
  if (!o.k_range.empty()) {
    ks = parse_k_range(o.k_range).values();
  } else if (o.k > 0.0) {
    ks = {o.k};
  } else {
    throw pwcert::InvalidInput("slab: give --k or --k-range");
  }
  const pwcert::Material material(o.a, o.q);
  json rows = json::array();
  std::ostringstream csv;
  csv << "thickness,n,k,nonscattering,matched_case,m,l,residual_sin,residual_cos,scattered_magnitude,oracle_agrees\n";
  int disagreements = 0;
  int hits = 0;
  for (double k : ks) {
    const pwcert::SlabModel model(o.width, material, k);
    const pwcert::SlabVerdict v = pwcert::slab_nonscattering(model);
    const pwcert::SlabScattering s = pwcert::slab_reflection(model);
    const bool agrees = v.nonscattering == (s.magnitude() <= pwcert::kSlabTolerance);
    disagreements += agrees ? 0 : 1;
    hits += v.nonscattering ? 1 : 0;
    json row = pwcert::io::slab_to_json(model, v, s);
    row["oracle_agrees"] = agrees;
    rows.push_back(row);
    csv << fmt(model.thickness()) << ',' << fmt(model.n()) << ',' << fmt(k) << ',' << (v.nonscattering ? 1 : 0) << ','
        << pwcert::to_string(v.matched_case) << ',' << (v.m >= 0 ? std::to_string(v.m) : "") << ','
        << (v.l >= 0 ? std::to_string(v.l) : "") << ',' << fmt(v.residual_sin) << ',' << fmt(v.residual_cos) << ','
        << fmt(s.magnitude()) << ',' << (agrees ? 1 : 0) << '\n';
  }
  if (o.format == "json") {
    json config = {{"thickness", o.width}, {"a", o.a}, {"q", o.q}, {"k", o.k}, {"k_range", o.k_range}};
    json report = envelope("slab", config, o);
    report["cases"] = rows;
    emit(o, report.dump(2));
  } else {
    emit(o, csv.str());
  }
  std::cerr << "slab: " << ks.size() << " wave numbers, " << hits << " non-scattering, " << disagreements
            << " oracle disagreements\n";
  return disagreements == 0 ? kOk : kVerifyFailed;
}

int cmd_disk(const Options& o) {
  check_format(o);
  const pwcert::Material material(o.a, o.q);
  const double k_max = o.k > 0.0 ? o.k : 20.0;
  const std::vector<double> roots = pwcert::disk_herglotz_roots(o.radius, material, k_max);
  if (o.format == "json") {
    json config = {{"radius", o.radius}, {"a", o.a}, {"q", o.q}, {"k_max", k_max}};
    json report = envelope("disk", config, o);
    json residuals = json::array();
    for (double k : roots) residuals.push_back(pwcert::disk_herglotz_residual(o.radius, material, k));
    report["roots"] = roots;
    report["residuals"] = residuals;
    emit(o, report.dump(2));
  } else {
    std::ostringstream os;
    os << "k,residual\n";
    for (double k : roots) os << fmt(k) << ',' << fmt(pwcert::disk_herglotz_residual(o.radius, material, k)) << '\n';
    emit(o, os.str());
  }
  std::cerr << "disk: " << roots.size() << " roots in (0, " << fmt(k_max) << "]\n";
  return kOk;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Write the report to FILE instead of stdout");
  cmd->add_option("--format", o.format, "json or csv")->capture_default_str();
  cmd->add_option("--a", o.a, "Material parameter a")->capture_default_str();
  cmd->add_option("--q", o.q, "Material parameter q")->required();
  cmd->configurable();
}

void add_domain(CLI::App* cmd, Options& o) {
  cmd->add_option("--domain", o.domain_file, "Domain description (JSON)")->required();
  cmd->add_option("--eta", o.eta, "Incidence angle in radians")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pwcert: wave-number bands of guaranteed scattering for penetrable inhomogeneities"};
  app.set_version_flag("--version", std::string(pwcert::io::kToolVersion));
  app.config_formatter(std::make_shared<ConfigAny>());
  app.set_config("--config", "", "Read options from a TOML or JSON file");
  app.require_subcommand(1);
  Options o;

  CLI::App* certify = app.add_subcommand("certify", "Certified scattering bands for one incidence direction");
  add_common(certify, o);
  add_domain(certify, o);
  certify->add_option("--k", o.k, "Report bound k_max (default 1000)");
  certify->add_option("--k-range", o.k_range, "LO:HI:N wave numbers to check against the certificate");
  certify->add_flag("--high-k", o.high_k, "Require the direction-independent high-k threshold");

  CLI::App* scan = app.add_subcommand("scan", "Certificates over a grid of incidence angles");
  add_common(scan, o);
  scan->add_option("--domain", o.domain_file, "Domain description (JSON)")->required();
  scan->add_option("--k", o.k, "Report bound k_max (default 1000)");
  scan->add_option("--angles", o.angles, "Number of incidence angles")->capture_default_str();
  scan->add_option("--threads", o.threads, "Worker threads (default: hardware concurrency)");

  CLI::App* verify = app.add_subcommand("verify", "Quadrature property suites on a domain");
  add_common(verify, o);
  add_domain(verify, o);
  verify->add_option("--seed", o.seed, "Seed for randomized cases")->capture_default_str();
  verify->add_option("--count", o.count, "Cases per suite")->capture_default_str();
  verify->add_option("--tol", o.tol, "Pass threshold for agreement and identity residuals")->capture_default_str();
  verify->add_option("--inject-fault", o.fault, "Corrupt the computation on purpose (negate-profile)");
  verify->add_option("--domain-id", o.domain_id, "Label for CSV rows (default: domain file stem)");

  CLI::App* slab = app.add_subcommand("slab", "Normal incidence on an infinite slab (a = 1)");
  add_common(slab, o);
  slab->add_option("--width", o.width, "Slab thickness")->capture_default_str();
  slab->add_option("--k", o.k, "Wave number");
  slab->add_option("--k-range", o.k_range, "LO:HI:N wave numbers");

  CLI::App* disk = app.add_subcommand("disk", "Radial Herglotz wave on a disk (a = 1)");
  add_common(disk, o);
  disk->add_option("--radius", o.radius, "Disk radius")->capture_default_str();
  disk->add_option("--k", o.k, "Search bound k_max (default 20)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  std::vector<CLI::App*> chosen;
  for (CLI::App* sub : app.get_subcommands()) {
    if (std::find(chosen.begin(), chosen.end(), sub) == chosen.end()) chosen.push_back(sub);
  }
  if (chosen.size() != 1) {
    std::cerr << "error: exactly one command is required\n";
    return kInputError;
  }

  try {
    const std::string name = chosen.front()->get_name();
    if (name == "certify") return cmd_certify(o);
    if (name == "scan") return cmd_scan(o);
    if (name == "verify") return cmd_verify(o);
    if (name == "slab") return cmd_slab(o);
    return cmd_disk(o);
  } catch (const pwcert::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    return kRegimeError;
  } catch (const pwcert::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const pwcert::MethodError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  }
}
