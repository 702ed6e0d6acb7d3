#ifndef OODLAB_IO_HPP
#define OODLAB_IO_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oodlab/common.hpp"
#include "oodlab/counterexamples.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/fcnn.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/learners.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

using nlohmann::json;

/// One domain file: the feature space plus the mixture over it.
struct DomainFile {
    FeatureSpace X;
    FiniteDomain domain;
};

namespace io_detail {

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
}

/// Enforce the load rule: masses must total 1 within 1e-9, then are divided
/// through so the constructor's 1e-12 invariant holds exactly.
inline void renormalize(std::vector<double>& mass, const std::string& what, bool* warned) {
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) throw ParseError(what + ": masses must be nonnegative");
        total += m;
    }
    if (std::abs(total - 1.0) > kLoadTol)
        throw ParseError(what + ": masses total " + std::to_string(total) +
                         ", outside the 1e-9 load tolerance");
    if (total != 1.0) {
        if (warned && !*warned) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", total);
            std::cerr << "warning: " << what << " renormalized from total " << buf << "\n";
            *warned = true;
        }
        for (double& m : mass) m /= total;
    }
}

}  // namespace io_detail

inline json domain_to_json(const FeatureSpace& X, const FiniteDomain& d) {
    json j;
    j["points"] = json::array();
    for (const auto& p : X.points()) j["points"].push_back(p);
    j["K"] = d.k();
    j["pi_out"] = d.pi_out();
    j["id_mass"] = json::array();
    for (int x = 0; x < d.num_points(); ++x)
        for (int y = 1; y <= d.k(); ++y)
            if (d.id_part().mass(x, y) > 0.0)
                j["id_mass"].push_back({{"point", x}, {"label", y}, {"p", d.id_part().mass(x, y)}});
    j["ood_mass"] = json::array();
    for (int x = 0; x < d.num_points(); ++x)
        if (d.ood_part().mass(x) > 0.0)
            j["ood_mass"].push_back({{"point", x}, {"p", d.ood_part().mass(x)}});
    return j;
}

inline DomainFile domain_from_json(const json& j) {
    std::vector<Point> points;
    for (const auto& p : j.at("points")) points.push_back(p.get<Point>());
    FeatureSpace X(std::move(points));
    const int k = j.at("K").get<int>();
    const double pi_out = j.value("pi_out", 0.5);
    std::vector<double> id_mass(static_cast<std::size_t>(X.size()) * k, 0.0);
    for (const auto& e : j.at("id_mass")) {
        const int x = e.at("point").get<int>();
        const int y = e.at("label").get<int>();
        if (x < 0 || x >= X.size() || y < 1 || y > k)
            throw ParseError("id_mass entry out of range");
        id_mass[static_cast<std::size_t>(x) * k + (y - 1)] += e.at("p").get<double>();
    }
    std::vector<double> ood_mass(static_cast<std::size_t>(X.size()), 0.0);
    for (const auto& e : j.at("ood_mass")) {
        const int x = e.at("point").get<int>();
        if (x < 0 || x >= X.size()) throw ParseError("ood_mass entry out of range");
        ood_mass[static_cast<std::size_t>(x)] += e.at("p").get<double>();
    }
    bool warned = false;
    io_detail::renormalize(id_mass, "id_mass", &warned);
    io_detail::renormalize(ood_mass, "ood_mass", &warned);
    const int nx = X.size();
    FiniteDomain d(IdJoint(nx, k, std::move(id_mass)), OodMarginal(std::move(ood_mass)), pi_out);
    return DomainFile{std::move(X), std::move(d)};
}

inline DomainFile load_domain(const std::string& path) {
    return domain_from_json(io_detail::load_file(path));
}

inline json space_to_json(const HypothesisSpace& space) {
    json j;
    j["K"] = space.k();
    j["labels"] = json::array();
    for (const auto& h : space.members()) j["labels"].push_back(h.labels);
    return j;
}

inline HypothesisSpace space_from_json(const json& j) {
    const int k = j.at("K").get<int>();
    std::vector<Hypothesis> members;
    for (const auto& row : j.at("labels")) members.push_back(Hypothesis{row.get<std::vector<int>>(), k});
    return HypothesisSpace(std::move(members));
}

inline json rankers_to_json(const std::vector<RankingFunction>& rankers) {
    json j = json::array();
    for (const auto& r : rankers) j.push_back({{"scores", r.scores}});
    return j;
}

inline std::vector<RankingFunction> rankers_from_json(const json& j) {
    std::vector<RankingFunction> out;
    for (const auto& e : j) out.push_back(RankingFunction{e.at("scores").get<std::vector<double>>()});
    return out;
}

inline json network_to_json(const ReluNetwork& net) {
    json j;
    j["widths"] = net.arch.widths;
    j["weights"] = net.weights;
    j["biases"] = net.biases;
    if (net.depth_pad_bias_shift != 0.0) j["depth_pad_bias_shift"] = net.depth_pad_bias_shift;
    return j;
}

inline ReluNetwork network_from_json(const json& j) {
    ReluNetwork net;
    net.arch.widths = j.at("widths").get<std::vector<int>>();
    net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    net.depth_pad_bias_shift = j.value("depth_pad_bias_shift", 0.0);
    net.validate();
    return net;
}

inline LossTable loss_from_json(const json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        const auto pos = name.find(':');
        if (name.rfind("zero-one", 0) == 0) {
            const int k = pos == std::string::npos ? 1 : std::stoi(name.substr(pos + 1));
            return LossTable::zero_one(k);
        }
        throw ParseError("unknown loss name: " + name);
    }
    return LossTable(j.at("K").get<int>(), j.at("values").get<std::vector<double>>());
}

inline json loss_to_json(const LossTable& loss) {
    return json{{"K", loss.k()}, {"values", loss.raw()}};
}

inline json dispatch_to_json(const DispatchOutput& out) {
    json j;
    j["labels"] = out.hypothesis.labels;
    j["K"] = out.hypothesis.k;
    j["dispatched"] = out.dispatched;
    j["mmd_distances"] = out.distances;
    j["bandwidth"] = out.bandwidth;
    j["min_reference_gap"] = out.min_reference_gap;
    j["low_separation"] = out.low_separation;
    return j;
}

inline json certificate_to_json(const Certificate& cert, const FeatureSpace* X = nullptr) {
    json j;
    j["kind"] = cert.kind;
    j["verdict"] = cert.verdict;
    j["verified"] = cert.verified;
    j["measured"] = cert.measured;
    j["counts"] = cert.counts;
    j["domains"] = json::array();
    for (const auto& d : cert.domains) {
        if (X)
            j["domains"].push_back(domain_to_json(*X, d));
        else {
            json dj;
            dj["K"] = d.k();
            dj["pi_out"] = d.pi_out();
            dj["id_mass"] = json::array();
            for (int x = 0; x < d.num_points(); ++x)
                for (int y = 1; y <= d.k(); ++y)
                    if (d.id_part().mass(x, y) > 0.0)
                        dj["id_mass"].push_back(
                            {{"point", x}, {"label", y}, {"p", d.id_part().mass(x, y)}});
            dj["ood_mass"] = json::array();
            for (int x = 0; x < d.num_points(); ++x)
                if (d.ood_part().mass(x) > 0.0)
                    dj["ood_mass"].push_back({{"point", x}, {"p", d.ood_part().mass(x)}});
            j["domains"].push_back(std::move(dj));
        }
    }
    return j;
}

inline json domain_space_to_json(const DomainSpaceSpec& spec, const FeatureSpace& X) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["members"] = json::array();
    for (const auto& d : spec.members) j["members"].push_back(domain_to_json(X, d));
    if (spec.kind == DomainSpaceKind::FiniteID) {
        j["id_list"] = json::array();
        for (const auto& id : spec.id_list) {
            json e;
            e["K"] = id.k();
            e["mass"] = id.raw();
            j["id_list"].push_back(std::move(e));
        }
    }
    if (spec.kind == DomainSpaceKind::DensityBased) {
        j["base"] = spec.base_weights;
        j["b"] = spec.density_bound;
    }
    return j;
}

struct DomainSpaceFile {
    FeatureSpace X;
    DomainSpaceSpec spec;
};

inline DomainSpaceFile domain_space_from_json(const json& j) {
    const std::string kind_s = j.at("kind").get<std::string>();
    DomainSpaceSpec spec;
    if (kind_s == "single")
        spec.kind = DomainSpaceKind::Single;
    else if (kind_s == "total")
        spec.kind = DomainSpaceKind::Total;
    else if (kind_s == "separate")
        spec.kind = DomainSpaceKind::Separate;
    else if (kind_s == "finite-id")
        spec.kind = DomainSpaceKind::FiniteID;
    else if (kind_s == "density-based")
        spec.kind = DomainSpaceKind::DensityBased;
    else
        throw ParseError("unknown domain-space kind: " + kind_s);

    if (j.at("members").empty()) throw ParseError("domain space needs at least one member");
    std::vector<DomainFile> members;
    for (const auto& m : j.at("members")) members.push_back(domain_from_json(m));
    FeatureSpace X = members.front().X;
    for (const auto& m : members)
        if (m.X.points() != X.points())
            throw ParseError("all domain-space members must share one point list");
    for (auto& m : members) spec.members.push_back(std::move(m.domain));

    if (spec.kind == DomainSpaceKind::FiniteID) {
        if (j.contains("id_list")) {
            for (const auto& e : j.at("id_list"))
                spec.id_list.emplace_back(X.size(), e.at("K").get<int>(),
                                          e.at("mass").get<std::vector<double>>());
        } else {
            for (const auto& d : spec.members) {
                bool seen = false;
                for (const auto& id : spec.id_list)
                    if (id.equal_within(d.id_part())) seen = true;
                if (!seen) spec.id_list.push_back(d.id_part());
            }
        }
    }
    if (spec.kind == DomainSpaceKind::DensityBased) {
        spec.base_weights = j.at("base").get<std::vector<double>>();
        spec.density_bound = j.at("b").get<double>();
    }
    spec.validate();
    return DomainSpaceFile{std::move(X), std::move(spec)};
}

}  // namespace oodlab

#endif
