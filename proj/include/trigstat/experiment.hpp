#ifndef TRIGSTAT_EXPERIMENT_HPP
#define TRIGSTAT_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "trigstat/dist.hpp"
#include "trigstat/local_classifier.hpp"
#include "trigstat/trigonal_family.hpp"

namespace trigstat {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
    u64 q = 5;
    int m = 1;
    u64 count = 1000; // ignored in enumerate mode
    u64 seed = 0;
    Ensemble ensemble = Ensemble::all;
    int precision_cap = 64;
    unsigned workers = 0; // 0 = auto; never serialized, must not affect output
    bool exhaustive = false;
    bool dedup_rescale = false; // enumerate mode only
    std::optional<std::pair<LocalConditions, LocalConditions>> density;
    std::vector<std::pair<Place, Place>> joint_places; // defaults to (0, inf)
};

struct ExperimentReport {
    RunConfig config;
    u64 models = 0;
    ExactDist reference_law; // law the histograms are compared against
    std::map<Place, EmpiricalHist> histograms;
    std::map<Place, Rat> tv;
    std::map<Place, Rat> chi2;
    std::map<std::pair<Place, Place>, JointHist> joints;
    std::map<std::pair<Place, Place>, Rat> independence_gap;
    u64 weil_violations = 0;
    u64 genus_undetermined = 0;
    std::optional<DensityEstimate> density;

    ExperimentReport() : reference_law(ExactDist::point_mass(0)) {}
};

ExperimentReport run_experiment(const RunConfig& cfg);

// machine-readable renderings; byte-stable for a fixed config and seed
ordered_json report_json(const ExperimentReport& r);
std::string report_csv(const ExperimentReport& r);

ordered_json distribution_json(u64 q, const ExactDist& law);
std::string distribution_csv(u64 q, const ExactDist& law);

// sigma parsing for the CLI: "PLACE=TYPE" with PLACE one of 0..q-1, inf
LocalConditions parse_conditions(const std::vector<std::string>& specs, u64 q);

} // namespace trigstat

#endif
