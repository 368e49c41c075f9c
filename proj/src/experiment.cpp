#include "trigstat/experiment.hpp"

#include <sstream>
#include <stdexcept>

namespace trigstat {

namespace {

std::vector<Place> all_places(u64 q) {
    std::vector<Place> out;
    for (u64 z = 0; z < q; ++z) out.push_back(Place::finite(Fp(z, q)));
    out.push_back(Place::at_infinity(q));
    return out;
}

int place_index(const Place& v, u64 q) {
    return v.is_infinity() ? static_cast<int>(q) : static_cast<int>(v.z().value());
}

} // namespace

ExperimentReport run_experiment(const RunConfig& cfg) {
    ExperimentReport r;
    r.config = cfg;
    if (r.config.joint_places.empty())
        r.config.joint_places.emplace_back(Place::finite(Fp(0, cfg.q)), Place::at_infinity(cfg.q));
    r.reference_law = cfg.ensemble == Ensemble::squarefree_disc
                          ? fiber_law_conditional_squarefree(cfg.q)
                          : fiber_law(cfg.q);

    auto places = all_places(cfg.q);
    for (auto& v : places) r.histograms.emplace(v, EmpiricalHist{});
    for (auto& pp : r.config.joint_places) r.joints.emplace(pp, JointHist{});
    DensityEstimate dens;

    auto absorb = [&](const CurveSummary& s) {
        for (std::size_t i = 0; i < places.size(); ++i)
            r.histograms.at(places[i]).add(s.fibers[i]);
        for (auto& pp : r.config.joint_places)
            r.joints.at(pp).add(s.fibers[place_index(pp.first, cfg.q)],
                                s.fibers[place_index(pp.second, cfg.q)]);
        if (s.genus) {
            if (!s.weil_bound_holds(cfg.q)) ++r.weil_violations;
        } else {
            ++r.genus_undetermined;
        }
        ++r.models;
    };
    auto match_density = [&](const TrigonalModel& M) {
        if (!cfg.density) return;
        if (matches_conditions(M, cfg.density->first, cfg.precision_cap)) ++dens.sigma_count;
        if (matches_conditions(M, cfg.density->second, cfg.precision_cap)) ++dens.sigma_prime_count;
        ++dens.total_models;
    };

    if (cfg.exhaustive) {
        enumerate_models(cfg.q, cfg.m, cfg.ensemble,
                         [&](const TrigonalModel& M) {
                             absorb(point_count(M, cfg.precision_cap));
                             match_density(M);
                         },
                         cfg.dedup_rescale);
    } else {
        for (auto& s : sample_models(cfg.q, cfg.m, cfg.count, cfg.seed, cfg.ensemble, cfg.workers,
                                     cfg.precision_cap)) {
            absorb(s.summary);
            match_density(s.model);
        }
    }

    for (auto& v : places) {
        r.tv.emplace(v, tv_distance(r.reference_law, r.histograms.at(v)));
        r.chi2.emplace(v, chi_square(r.histograms.at(v), r.reference_law));
    }
    for (auto& pp : r.config.joint_places)
        r.independence_gap.emplace(pp, joint_independence_gap(r.joints.at(pp)));
    if (cfg.density) r.density = dens;
    return r;
}

namespace {

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.exhaustive ? "enumerate" : "sample";
    j["q"] = c.q;
    j["m"] = c.m;
    if (!c.exhaustive) {
        j["count"] = c.count;
        j["seed"] = c.seed;
    }
    j["ensemble"] = to_string(c.ensemble);
    j["precision_cap"] = c.precision_cap;
    if (c.exhaustive) j["dedup_rescale"] = c.dedup_rescale;
    if (c.density) {
        auto conds = [](const LocalConditions& lc) {
            ordered_json o;
            for (auto& [v, t] : lc) o[v.to_string()] = to_string(t);
            return o;
        };
        j["sigma"] = conds(c.density->first);
        j["sigma_prime"] = conds(c.density->second);
    }
    return j;
}

std::string joint_key(const std::pair<Place, Place>& pp) {
    return pp.first.to_string() + "," + pp.second.to_string();
}

} // namespace

ordered_json report_json(const ExperimentReport& r) {
    ordered_json j;
    j["config"] = config_json(r.config);
    j["models"] = r.models;
    ordered_json law;
    for (auto& [k, v] : r.reference_law.masses()) law[std::to_string(k)] = rat_str(v);
    j["reference_law"] = law;
    ordered_json hist;
    for (auto& [v, h] : r.histograms) {
        ordered_json o;
        for (long k = 0; k <= 3; ++k) {
            auto it = h.counts.find(k);
            o[std::to_string(k)] = it == h.counts.end() ? 0 : it->second;
        }
        hist[v.to_string()] = o;
    }
    j["histograms"] = hist;
    ordered_json tv;
    for (auto& [v, d] : r.tv) tv[v.to_string()] = rat_str(d);
    j["tv"] = tv;
    ordered_json chi;
    for (auto& [v, d] : r.chi2) chi[v.to_string()] = rat_str(d);
    j["chi2"] = chi;
    ordered_json joint;
    for (auto& [pp, h] : r.joints) {
        ordered_json o;
        for (auto& [ij, c] : h.counts)
            o[std::to_string(ij.first) + "," + std::to_string(ij.second)] = c;
        joint[joint_key(pp)] = o;
    }
    j["joint"] = joint;
    ordered_json gaps;
    for (auto& [pp, g] : r.independence_gap) gaps[joint_key(pp)] = rat_str(g);
    j["independence_gap"] = gaps;
    j["weil_violations"] = r.weil_violations;
    j["genus_undetermined"] = r.genus_undetermined;
    if (r.density) {
        ordered_json d;
        d["sigma_count"] = r.density->sigma_count;
        d["sigma_prime_count"] = r.density->sigma_prime_count;
        auto ratio = r.density->ratio();
        d["ratio"] = ratio ? rat_str(*ratio) : "undefined";
        j["relative_density"] = d;
    }
    return j;
}

std::string report_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "section,key,subkey,value\n";
    auto cfg = config_json(r.config);
    for (auto& [k, v] : cfg.items())
        os << "config," << k << ",," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    os << "models,,," << r.models << "\n";
    for (auto& [k, v] : r.reference_law.masses())
        os << "reference_law," << k << ",," << rat_str(v) << "\n";
    for (auto& [p, h] : r.histograms)
        for (long k = 0; k <= 3; ++k) {
            auto it = h.counts.find(k);
            os << "histogram," << p.to_string() << "," << k << ","
               << (it == h.counts.end() ? 0 : it->second) << "\n";
        }
    for (auto& [p, d] : r.tv) os << "tv," << p.to_string() << ",," << rat_str(d) << "\n";
    for (auto& [p, d] : r.chi2) os << "chi2," << p.to_string() << ",," << rat_str(d) << "\n";
    for (auto& [pp, h] : r.joints)
        for (auto& [ij, c] : h.counts)
            os << "joint," << joint_key(pp) << "," << ij.first << ":" << ij.second << "," << c << "\n";
    for (auto& [pp, g] : r.independence_gap)
        os << "independence_gap," << joint_key(pp) << ",," << rat_str(g) << "\n";
    os << "weil_violations,,," << r.weil_violations << "\n";
    os << "genus_undetermined,,," << r.genus_undetermined << "\n";
    if (r.density) {
        os << "relative_density,sigma_count,," << r.density->sigma_count << "\n";
        os << "relative_density,sigma_prime_count,," << r.density->sigma_prime_count << "\n";
        auto ratio = r.density->ratio();
        os << "relative_density,ratio,," << (ratio ? rat_str(*ratio) : "undefined") << "\n";
    }
    return os.str();
}

ordered_json distribution_json(u64 q, const ExactDist& law) {
    ordered_json j;
    j["q"] = q;
    ordered_json m;
    for (auto& [k, v] : law.masses()) m[std::to_string(k)] = rat_str(v);
    j["law"] = m;
    j["mean"] = rat_str(law.mean());
    return j;
}

std::string distribution_csv(u64 q, const ExactDist& law) {
    std::ostringstream os;
    os << "q,k,mass\n";
    for (auto& [k, v] : law.masses()) os << q << "," << k << "," << rat_str(v) << "\n";
    os << q << ",mean," << rat_str(law.mean()) << "\n";
    return os.str();
}

LocalConditions parse_conditions(const std::vector<std::string>& specs, u64 q) {
    LocalConditions out;
    for (auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("condition must look like PLACE=TYPE, got '" + s + "'");
        auto place = Place::parse(s.substr(0, eq), q);
        if (!place)
            throw std::invalid_argument("bad place '" + s.substr(0, eq) + "' (use 0.." +
                                        std::to_string(q - 1) + " or inf)");
        auto type = splitting_type_from_string(s.substr(eq + 1));
        if (!type) throw std::invalid_argument("bad splitting type '" + s.substr(eq + 1) + "'");
        if (!out.emplace(*place, *type).second)
            throw std::invalid_argument("duplicate place in conditions: " + place->to_string());
    }
    return out;
}

} // namespace trigstat
