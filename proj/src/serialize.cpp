#include "pointres/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pointres/error.hpp"

namespace pointres {

namespace {

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex cparse(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, "complex must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json points_json(const std::vector<Vec3>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(Json::array({p[0], p[1], p[2]}));
  return a;
}

std::vector<Vec3> points_parse(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "points must be an array");
  std::vector<Vec3> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 3) throw Error(ErrorCode::InvalidArgument, "each point must be [x, y, z]");
    pts.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  return pts;
}

// JSON has no infinities; non-finite values become null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double num_parse(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string_view kind_name(SamplerKind k) {
  return k == SamplerKind::UniformBall ? "uniform_ball" : "mixed_binomial";
}

SamplerKind kind_parse(const std::string& s) {
  if (s == "uniform_ball") return SamplerKind::UniformBall;
  if (s == "mixed_binomial") return SamplerKind::MixedBinomial;
  throw Error(ErrorCode::InvalidArgument, "unknown sampler kind '" + s + "'");
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::EmptyConfiguration: return "EmptyConfiguration";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroSeparation: return "ZeroSeparation";
    case ErrorCode::SingularGamma: return "SingularGamma";
    case ErrorCode::PointOnCenter: return "PointOnCenter";
    case ErrorCode::CoincidentArguments: return "CoincidentArguments";
    case ErrorCode::FullCancellation: return "FullCancellation";
    case ErrorCode::DiamMismatch: return "DiamMismatch";
    case ErrorCode::DegenerateSingleTerm: return "DegenerateSingleTerm";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BoundaryZero: return "BoundaryZero";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::RegionExceeded: return "RegionExceeded";
    case ErrorCode::InsufficientRadius: return "InsufficientRadius";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const Configuration& c) {
  return {{"alpha", cjson(c.alpha())}, {"points", points_json(c.points())}};
}

Configuration configuration_from_json(const Json& j) {
  const Complex alpha = j.contains("alpha") ? cparse(j.at("alpha")) : Complex{1.0, 0.0};
  return Configuration::create(points_parse(j.at("points")), alpha);
}

Json to_json(const CanonicalExpPoly& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms) {
    Json coeffs = Json::array();
    for (Complex a : t.coeffs) coeffs.push_back(cjson(a));
    terms.push_back({{"freq", t.freq}, {"coeffs", coeffs}});
  }
  return {{"alpha", cjson(p.alpha)}, {"n", p.n_points}, {"terms", terms}};
}

CanonicalExpPoly canonical_from_json(const Json& j) {
  CanonicalExpPoly p;
  p.alpha = cparse(j.at("alpha"));
  p.n_points = j.at("n").get<std::size_t>();
  for (const auto& t : j.at("terms")) {
    ExpTerm term;
    term.freq = t.at("freq").get<double>();
    for (const auto& a : t.at("coeffs")) term.coeffs.push_back(cparse(a));
    p.terms.push_back(std::move(term));
  }
  return p;
}

Json to_json(const KMultiset& k) { return k.values; }

Json to_json(const ResonanceSet& rs) {
  Json roots = Json::array();
  for (const auto& r : rs.roots)
    roots.push_back({{"k", cjson(r.k)}, {"multiplicity", r.multiplicity}, {"residual", r.residual}});
  return {{"region", rs.region}, {"config_hash", rs.config_hash}, {"roots", roots}};
}

ResonanceSet resonances_from_json(const Json& j) {
  ResonanceSet rs;
  rs.region = j.at("region").get<double>();
  rs.config_hash = j.at("config_hash").get<std::string>();
  for (const auto& r : j.at("roots"))
    rs.roots.push_back({cparse(r.at("k")), r.at("multiplicity").get<int>(), r.at("residual").get<double>()});
  return rs;
}

std::string to_csv(const ResonanceSet& rs) {
  std::string out = "re,im,multiplicity,residual\n";
  for (const auto& r : rs.roots) {
    out += format_double(r.k.real()) + ',' + format_double(r.k.imag()) + ',' +
           std::to_string(r.multiplicity) + ',' + format_double(r.residual) + '\n';
  }
  return out;
}

Json to_json(const CountingReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.ad_log_steps) steps.push_back({{"h", s.h}, {"height", s.height}});
  return {{"radii", r.radii},           {"counts", r.counts},           {"h_grid", r.h_grid},
          {"log_counts", r.log_counts}, {"ad_estimate", r.ad_estimate}, {"ad_log_steps", steps}};
}

CountingReport counting_from_json(const Json& j) {
  CountingReport r;
  r.radii = j.at("radii").get<std::vector<double>>();
  r.counts = j.at("counts").get<std::vector<int>>();
  r.h_grid = j.at("h_grid").get<std::vector<double>>();
  r.log_counts = j.at("log_counts").get<std::vector<std::vector<int>>>();
  r.ad_estimate = j.at("ad_estimate").get<double>();
  for (const auto& s : j.at("ad_log_steps")) r.ad_log_steps.push_back({s.at("h").get<double>(), s.at("height").get<double>()});
  return r;
}

Json to_json(const KEstimate& k) {
  Json jumps = Json::array();
  for (const auto& jp : k.jumps)
    jumps.push_back({{"h", jp.h}, {"confidence", jp.confidence}, {"raw_weight", jp.raw_weight}, {"weight", jp.weight}});
  return {{"jumps", jumps}, {"values", k.values()}};
}

Json to_json(const SampleSet& s) {
  return {{"points", points_json(s.points)}, {"kind", kind_name(s.kind)}, {"r", s.r},
          {"seed_used", s.seed_used},        {"stream_id", s.stream_id},  {"next_position", s.next_position}};
}

SampleSet sample_from_json(const Json& j) {
  SampleSet s;
  s.points = points_parse(j.at("points"));
  s.kind = kind_parse(j.at("kind").get<std::string>());
  s.r = j.at("r").get<double>();
  s.seed_used = j.at("seed_used").get<std::uint64_t>();
  s.stream_id = j.at("stream_id").get<std::uint64_t>();
  s.next_position = j.at("next_position").get<std::uint64_t>();
  return s;
}

Json to_json(const TrialSummary& t) {
  Json j = {{"trial_id", t.trial_id}, {"stream_id", t.stream_id}, {"n_points", t.n_points},
            {"diameter", t.diameter}, {"k_min", num(t.k_min)}};
  j["v_size"] = t.v_size ? Json(*t.v_size) : Json(nullptr);
  j["k_multiset"] = t.k_multiset ? to_json(*t.k_multiset) : Json(nullptr);
  j["weyl"] = t.weyl ? Json(*t.weyl) : Json(nullptr);
  j["ad_symbolic"] = t.ad_symbolic ? Json(*t.ad_symbolic) : Json(nullptr);
  if (!t.error.empty()) j["error"] = t.error;
  return j;
}

namespace {

TrialSummary trial_from_json(const Json& j) {
  TrialSummary t;
  t.trial_id = j.at("trial_id").get<std::size_t>();
  t.stream_id = j.at("stream_id").get<std::uint64_t>();
  t.n_points = j.at("n_points").get<std::size_t>();
  t.diameter = j.at("diameter").get<double>();
  t.k_min = num_parse(j.at("k_min"));
  if (!j.at("v_size").is_null()) t.v_size = j["v_size"].get<double>();
  if (!j.at("k_multiset").is_null()) t.k_multiset = KMultiset{j["k_multiset"].get<std::vector<double>>()};
  if (!j.at("weyl").is_null()) t.weyl = j["weyl"].get<bool>();
  if (!j.at("ad_symbolic").is_null()) t.ad_symbolic = j["ad_symbolic"].get<double>();
  if (j.contains("error")) t.error = j["error"].get<std::string>();
  return t;
}

}  // namespace

Json to_json(const ExperimentReport& r) {
  Json cfg = {{"kind", r.config.kind},   {"m", r.config.m},         {"r", r.config.r},
              {"trials", r.config.trials}, {"pairs", r.config.pairs}, {"seed", r.config.seed},
              {"t_grid", r.config.t_grid}};
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(to_json(t));
  Json cdf = Json::array();
  for (const auto& c : r.cdf) cdf.push_back({c.x, c.empirical, c.target});
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"value", v.value},
                        {"target", v.target},
                        {"tolerance", v.tolerance},
                        {"relation", v.relation},
                        {"pass", v.pass}});
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = num(v);
  return {{"config", cfg},
          {"stats", stats},
          {"verdicts", verdicts},
          {"failed_trials", r.failed_trials},
          {"all_pass", r.all_pass()},
          {"cdf", cdf},
          {"trials", trials}};
}

ExperimentReport experiment_from_json(const Json& j) {
  ExperimentReport r;
  const Json& cfg = j.at("config");
  r.config.kind = cfg.at("kind").get<std::string>();
  r.config.m = cfg.at("m").get<std::size_t>();
  r.config.r = cfg.at("r").get<double>();
  r.config.trials = cfg.at("trials").get<std::size_t>();
  r.config.pairs = cfg.at("pairs").get<std::size_t>();
  r.config.seed = cfg.at("seed").get<std::uint64_t>();
  r.config.t_grid = cfg.at("t_grid").get<std::vector<double>>();
  for (const auto& [k, v] : j.at("stats").items()) r.stats[k] = num_parse(v);
  for (const auto& v : j.at("verdicts"))
    r.verdicts.push_back({v.at("name").get<std::string>(), v.at("value").get<double>(),
                          v.at("target").get<double>(), v.at("tolerance").get<double>(),
                          v.at("relation").get<std::string>(), v.at("pass").get<bool>()});
  r.failed_trials = j.at("failed_trials").get<std::size_t>();
  for (const auto& c : j.at("cdf")) r.cdf.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
  for (const auto& t : j.at("trials")) r.trials.push_back(trial_from_json(t));
  return r;
}

std::string trials_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "trial_id,stream_id,n_points,diameter,k_min,v_size,n_k,weyl,ad_symbolic,error\n";
  for (const auto& t : r.trials) {
    out << t.trial_id << ',' << t.stream_id << ',' << t.n_points << ',' << format_double(t.diameter) << ','
        << format_double(t.k_min) << ',' << (t.v_size ? format_double(*t.v_size) : "") << ','
        << (t.k_multiset ? std::to_string(t.k_multiset->size()) : "") << ','
        << (t.weyl ? (*t.weyl ? "1" : "0") : "") << ','
        << (t.ad_symbolic ? format_double(*t.ad_symbolic) : "") << ',' << '"' << t.error << '"' << '\n';
  }
  return out.str();
}

std::string cdf_csv(const ExperimentReport& r) {
  std::string out = "x,empirical\n";
  for (const auto& c : r.cdf) out += format_double(c.x) + ',' + format_double(c.empirical) + '\n';
  return out;
}

}  // namespace pointres
