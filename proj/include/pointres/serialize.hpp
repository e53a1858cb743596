#pragma once

#include <string>

#include "json.hpp"
#include "pointres/experiments.hpp"
#include "pointres/exppoly.hpp"
#include "pointres/geometry.hpp"
#include "pointres/rootfind.hpp"
#include "pointres/sampler.hpp"

namespace pointres {

using Json = nlohmann::json;

// Complex numbers are written as [re, im]; 3-vectors as [x, y, z].

/// {"alpha": [re, im], "points": [[x, y, z], ...]}
Json to_json(const Configuration& c);
/// Validates through Configuration::create.
Configuration configuration_from_json(const Json& j);

/// {"alpha": [re, im], "n": N, "terms": [{"freq": B, "coeffs": [[re, im], ...]}]}
Json to_json(const CanonicalExpPoly& p);
CanonicalExpPoly canonical_from_json(const Json& j);

Json to_json(const KMultiset& k);
Json to_json(const ResonanceSet& rs);
ResonanceSet resonances_from_json(const Json& j);
/// Header `re,im,multiplicity,residual`, numbers in %.17g.
std::string to_csv(const ResonanceSet& rs);

Json to_json(const CountingReport& r);
CountingReport counting_from_json(const Json& j);
Json to_json(const KEstimate& k);

/// Same point schema as a configuration, plus provenance.
Json to_json(const SampleSet& s);
SampleSet sample_from_json(const Json& j);

Json to_json(const TrialSummary& t);
Json to_json(const ExperimentReport& r);
ExperimentReport experiment_from_json(const Json& j);
/// One row per trial.
std::string trials_csv(const ExperimentReport& r);
/// Two columns: x and the empirical value (CDF, or exceedance for vgrowth).
std::string cdf_csv(const ExperimentReport& r);

std::string format_double(double x);

}  // namespace pointres
