#include "cli.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pointres/error.hpp"
#include "pointres/experiments.hpp"
#include "pointres/exppoly.hpp"
#include "pointres/parallel.hpp"
#include "pointres/rootfind.hpp"
#include "pointres/sampler.hpp"
#include "pointres/serialize.hpp"

namespace pointres::cli {

namespace {

// Bad user input that is not a library error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + item + "' in '" + s + "'");
    }
  }
  return v;
}

Complex parse_alpha(const Json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) {
    const auto v = parse_list(j.get<std::string>());
    if (v.size() == 1) return {v[0], 0.0};
    if (v.size() == 2) return {v[0], v[1]};
  }
  throw UsageError("alpha must be 're,im'");
}

// Settings from --config, overridden key by key by explicit flags.
class Settings {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    try {
      data_ = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw UsageError("config file '" + path + "': " + e.what());
    }
    if (!data_.is_object()) throw UsageError("config file must hold a JSON object");
  }

  void set(const std::string& key, Json v) { data_[key] = std::move(v); }
  bool has(const std::string& key) const { return data_.contains(key) && !data_[key].is_null(); }
  const Json& at(const std::string& key) const { return data_.at(key); }

  template <class T>
  T get(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    try {
      return data_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw UsageError("setting '" + key + "' has the wrong type");
    }
  }

  template <class T>
  T require(const std::string& key) const {
    if (!has(key)) throw UsageError("missing required setting --" + key);
    return get<T>(key, T{});
  }

 private:
  Json data_ = Json::object();
};

Configuration read_configuration(const Settings& s) {
  if (!s.has("points")) throw UsageError("missing required setting --points");
  Json pts = s.at("points");
  if (pts.is_string()) {
    try {
      pts = Json::parse(pts.get<std::string>());
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("--points is not valid JSON: ") + e.what());
    }
  }
  const Complex alpha = s.has("alpha") ? parse_alpha(s.at("alpha")) : Complex{1.0, 0.0};
  try {
    return configuration_from_json(Json{{"points", pts}, {"alpha", Json::array({alpha.real(), alpha.imag()})}});
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed points: ") + e.what());
  }
}

unsigned read_workers(const Settings& s) {
  const long w = s.get<long>("workers", static_cast<long>(default_workers()));
  if (w < 1) throw UsageError("--workers must be at least 1");
  return static_cast<unsigned>(w);
}

void emit(const Settings& s, const std::string& text, std::ostream& out) {
  const std::string path = s.get<std::string>("out", "");
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

void write_side_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

std::string format_of(const Settings& s) {
  const std::string f = s.get<std::string>("format", "json");
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

double positive(const Settings& s, const std::string& key, double fallback) {
  const double v = s.get<double>(key, fallback);
  if (!(v > 0.0)) throw UsageError("--" + key + " must be positive");
  return v;
}

void cmd_resonances(const Settings& s, std::ostream& out) {
  const Configuration c = read_configuration(s);
  const double R = s.has("radius") ? positive(s, "radius", 0.0) : throw UsageError("missing required setting --radius");
  const auto n_radii = static_cast<std::size_t>(s.get<long>("radii_count", 10));
  const double h_max = positive(s, "h_max", 5.0);
  const double h_step = positive(s, "h_step", 0.01);
  if (n_radii < 1) throw UsageError("--radii-count must be at least 1");
  const std::string format = format_of(s);

  RootFindOptions opt;
  opt.workers = read_workers(s);
  opt.residual_tol = positive(s, "residual_tol", opt.residual_tol);
  opt.min_cell_rel = positive(s, "min_cell_rel", opt.min_cell_rel);
  const ResonanceSet rs = find_resonances(c, R, opt);
  const auto radii = uniform_grid(R / static_cast<double>(n_radii), R, n_radii);
  const auto h_grid = uniform_grid(0.0, h_max, static_cast<std::size_t>(std::llround(h_max / h_step)) + 1);
  const CountingReport report = counting_report(rs, radii, h_grid);

  const std::string counting_path = s.get<std::string>("counting_out", "");
  if (!counting_path.empty()) write_side_file(counting_path, to_json(report).dump(2) + "\n");
  if (format == "csv") {
    emit(s, to_csv(rs), out);
  } else {
    emit(s, Json{{"resonances", to_json(rs)}, {"counting", to_json(report)}}.dump(2) + "\n", out);
  }
}

void cmd_asymptotics(const Settings& s, std::ostream& out) {
  const Configuration c = read_configuration(s);
  ExpPolyOptions opt;
  opt.n_max = static_cast<std::size_t>(s.get<long>("n_max", static_cast<long>(opt.n_max)));
  const SizeResult v = size_V(c);
  const double diam = diameter(c);
  const CanonicalExpPoly p = canonical_form(c, opt);
  const KMultiset k = k_multiset(distribution_diagram(p), diam);

  Json j = {{"n", c.size()},
            {"V", v.value},
            {"permutation", v.permutation},
            {"diam", diam},
            {"K", to_json(k)},
            {"weyl", is_weyl(p, v)},
            {"canonical", to_json(p)}};
  if (p.terms.size() >= 2) {
    j["Ad"] = symbolic_density(p);
  } else {
    j["Ad"] = 0.0;
    j["note"] = "single frequency: finitely many resonances, empty K multiset";
  }
  emit(s, j.dump(2) + "\n", out);
}

void cmd_sample(const Settings& s, std::ostream& out) {
  SamplerConfig cfg;
  const std::string kind = s.get<std::string>("kind", "uniform_ball");
  if (kind == "uniform_ball") {
    cfg.kind = SamplerKind::UniformBall;
    cfg.m = static_cast<std::size_t>(s.require<long>("m"));
  } else if (kind == "mixed_binomial") {
    cfg.kind = SamplerKind::MixedBinomial;
    cfg.mixing = three_point_mixing();
    if (s.has("mixing")) cfg.mixing = s.get<std::vector<std::pair<std::size_t, double>>>("mixing", {});
  } else {
    throw UsageError("unknown sampler kind '" + kind + "'");
  }
  cfg.r = positive(s, "r", 1.0);
  cfg.seed = s.require<std::uint64_t>("seed");
  cfg.stream_id = s.get<std::uint64_t>("stream", 0);
  emit(s, to_json(sample(cfg)).dump(2) + "\n", out);
}

void cmd_experiment(const Settings& s, std::ostream& out) {
  const std::string kind = s.require<std::string>("experiment");
  if (!s.has("seed")) throw UsageError("--seed is required for experiments");
  const auto seed = s.get<std::uint64_t>("seed", 0);
  const unsigned workers = read_workers(s);
  const double r = positive(s, "r", 1.0);
  const auto trials = static_cast<std::size_t>(s.get<long>("trials", 100));
  ExpPolyOptions opt;
  opt.n_max = static_cast<std::size_t>(s.get<long>("n_max", static_cast<long>(opt.n_max)));
  const std::string format = format_of(s);

  ExperimentReport rep;
  if (kind == "moments") {
    rep = run_moments_experiment(static_cast<std::size_t>(s.get<long>("pairs", 1000000)), r, seed, workers);
  } else {
    const bool known = kind == "weyl" || kind == "kmin" || kind == "vgrowth" || kind == "kmax";
    if (!known) throw UsageError("unknown experiment kind '" + kind + "' (weyl|kmin|vgrowth|kmax|moments)");
    const auto m = static_cast<std::size_t>(s.require<long>("m"));
    if (kind == "weyl") rep = run_weyl_experiment(m, r, trials, seed, workers, opt);
    if (kind == "kmin") rep = run_kmin_experiment(m, r, trials, seed, workers);
    if (kind == "kmax") rep = run_kmax_bound_check(m, r, trials, seed, workers, opt);
    if (kind == "vgrowth") {
      Json tg = s.has("t_grid") ? s.at("t_grid") : Json("0,1");
      const std::vector<double> t_grid =
          tg.is_string() ? parse_list(tg.get<std::string>()) : tg.get<std::vector<double>>();
      rep = run_vgrowth_experiment(m, r, trials, t_grid, seed, workers);
    }
  }
  const std::string cdf_path = s.get<std::string>("cdf_out", "");
  if (!cdf_path.empty()) write_side_file(cdf_path, cdf_csv(rep));
  emit(s, format == "csv" ? trials_csv(rep) : to_json(rep).dump(2) + "\n", out);
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DuplicatePoints:
      return kUsage;
    default:
      return kComputation;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonances of point interactions in R^3: root finding, asymptotics, sampling, experiments"};
  app.name("pointres");
  app.require_subcommand(1);

  // Every flag is collected as a string and applied on top of --config.
  std::vector<std::pair<std::string, CLI::Option*>> registered;
  std::deque<std::string> storage;  // stable addresses for CLI11
  std::string config_path;

  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    storage.emplace_back();
    registered.emplace_back(key, sub->add_option(name, storage.back(), help));
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON settings file; flags override its keys");
    flag(sub, "--out,-o", "out", "Output path (default: standard output)");
  };
  auto config_input = [&](CLI::App* sub) {
    flag(sub, "--points", "points", "Centers as JSON, e.g. '[[0,0,0],[1,0,0]]'");
    flag(sub, "--alpha", "alpha", "Strength parameter as 're,im' (default 1,0)");
  };

  CLI::App* res = app.add_subcommand("resonances", "Find resonances in the disc |k| <= radius");
  common(res);
  config_input(res);
  flag(res, "--radius,-R", "radius", "Disc radius");
  flag(res, "--radii-count", "radii_count", "Number of radii in the counting grid (default 10)");
  flag(res, "--h-max", "h_max", "Largest h of the logarithmic counting grid (default 5)");
  flag(res, "--h-step", "h_step", "Step of the logarithmic counting grid (default 0.01)");
  flag(res, "--residual-tol", "residual_tol", "Accepted |det| relative to the cell boundary maximum");
  flag(res, "--min-cell-rel", "min_cell_rel", "Smallest cell size relative to the radius");
  flag(res, "--format", "format", "json or csv (csv: roots only)");
  flag(res, "--counting-out", "counting_out", "Also write the counting report as JSON here");
  flag(res, "--workers", "workers", "Worker threads (default: POINTRES_WORKERS or all cores)");

  CLI::App* asy = app.add_subcommand("asymptotics", "Size, density, chain parameters and canonical form");
  common(asy);
  config_input(asy);
  flag(asy, "--n-max", "n_max", "Largest N for the symbolic expansion (default 8)");

  CLI::App* smp = app.add_subcommand("sample", "Draw a seeded random configuration");
  common(smp);
  flag(smp, "--kind", "kind", "uniform_ball or mixed_binomial");
  flag(smp, "--m", "m", "Sample size (uniform_ball)");
  flag(smp, "--r", "r", "Ball radius (default 1)");
  flag(smp, "--seed", "seed", "64-bit seed");
  flag(smp, "--stream", "stream", "Stream id (default 0)");

  CLI::App* exp = app.add_subcommand("experiment", "Seeded Monte Carlo experiment");
  common(exp);
  flag(exp, "kind", "experiment", "weyl | kmin | vgrowth | kmax | moments");
  flag(exp, "--m", "m", "Points per trial");
  flag(exp, "--r", "r", "Ball radius (default 1)");
  flag(exp, "--trials", "trials", "Number of trials (default 100)");
  flag(exp, "--pairs", "pairs", "Number of pairs for moments (default 1000000)");
  flag(exp, "--t-grid", "t_grid", "Comma-separated t values for vgrowth (default 0,1)");
  flag(exp, "--seed", "seed", "64-bit seed (required)");
  flag(exp, "--n-max", "n_max", "Largest N for the symbolic expansion (default 8)");
  flag(exp, "--format", "format", "json (full report) or csv (per-trial rows)");
  flag(exp, "--cdf-out", "cdf_out", "Also write the CDF table as two-column CSV here");
  flag(exp, "--workers", "workers", "Worker threads (default: POINTRES_WORKERS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Settings s;
    if (!config_path.empty()) s.load_file(config_path);
    for (std::size_t i = 0; i < registered.size(); ++i) {
      const auto& [key, opt] = registered[i];
      if (opt->count() == 0) continue;
      const std::string& raw = storage[i];
      // Numbers stay numbers so typed getters work; everything else is a string.
      Json v = Json::parse(raw, nullptr, false);
      s.set(key, !v.is_discarded() && v.is_number() ? v : Json(raw));
    }
    if (res->parsed()) cmd_resonances(s, out);
    if (asy->parsed()) cmd_asymptotics(s, out);
    if (smp->parsed()) cmd_sample(s, out);
    if (exp->parsed()) cmd_experiment(s, out);
  } catch (const UsageError& e) {
    err << "pointres: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "pointres: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    err << "pointres: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace pointres::cli
