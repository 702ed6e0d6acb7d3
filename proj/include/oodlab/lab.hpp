#ifndef OODLAB_LAB_HPP
#define OODLAB_LAB_HPP

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "oodlab/auc.hpp"
#include "oodlab/common.hpp"
#include "oodlab/conditions.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/io.hpp"
#include "oodlab/learners.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

enum class LearnerKind { NnThreshold, ErmId, ConstrainedReject };

struct ExperimentConfig {
    std::string mode;  // curve | check | counterexample | verdict
    Metric metric = Metric::Risk;
    std::string domain_path;
    std::string space_path;        // hypothesis space file, or empty for exhaustive
    std::string space_spec_path;   // domain-space file (check/verdict)
    std::string rankers_path;      // ranking space file
    std::vector<double> tau_grid{0.5};  // thresholds paired with rankers (AUC curves)
    std::string counterexample_kind;
    LearnerKind learner = LearnerKind::NnThreshold;
    std::vector<long long> n_grid;
    int trials = 1;
    std::uint64_t seed = 0;
    std::vector<double> alpha_grid{0.0, 0.5, 1.0};
    double theta = 0.5;
    double anchor_constant = 1.0;
    std::string loss_name = "zero-one";
    json loss_json;
    std::string out_path;
    std::string format = "table";
    json raw;

    void validate() const {
        if (trials < 1) throw DomainParameterError("config: trials must be >= 1");
        if (!(theta > 0.0 && theta < 1.0)) throw DomainParameterError("config: theta must lie in (0,1)");
        for (std::size_t i = 1; i < n_grid.size(); ++i)
            if (n_grid[i] <= n_grid[i - 1])
                throw DomainParameterError("config: n_grid must be strictly increasing");
    }
};

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.raw = j;
    c.mode = j.at("mode").get<std::string>();
    if (j.contains("metric")) c.metric = j.at("metric") == "auc" ? Metric::Auc : Metric::Risk;
    c.domain_path = j.value("domain", "");
    c.space_path = j.value("space", "");
    c.space_spec_path = j.value("space_spec", "");
    c.rankers_path = j.value("rankers", "");
    if (j.contains("tau_grid")) c.tau_grid = j.at("tau_grid").get<std::vector<double>>();
    c.counterexample_kind = j.value("kind", "");
    if (j.contains("learner")) {
        const std::string l = j.at("learner").get<std::string>();
        if (l == "nn")
            c.learner = LearnerKind::NnThreshold;
        else if (l == "erm")
            c.learner = LearnerKind::ErmId;
        else if (l == "constrained-reject")
            c.learner = LearnerKind::ConstrainedReject;
        else
            throw ParseError("unknown learner: " + l);
    }
    if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<long long>>();
    c.trials = j.value("trials", 1);
    c.seed = j.value("seed", static_cast<std::uint64_t>(0));
    if (j.contains("alpha_grid")) c.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    c.theta = j.value("theta", 0.5);
    c.anchor_constant = j.value("anchor_constant", 1.0);
    if (j.contains("loss")) c.loss_json = j.at("loss");
    c.out_path = j.value("out", "");
    c.format = j.value("format", "table");
    c.validate();
    return c;
}

/// One row of a learning curve: sample size, per-alpha mean excess, and the
/// reference decay anchors.
struct CurveRow {
    long long n = 0;
    std::vector<double> mean_excess;  // one per alpha (risk) or a single regret (auc)
    double nn_bound = 0.0;
    double sqrt_anchor = 0.0;
    double inv_n_anchor = 0.0;
};

namespace lab_detail {

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace lab_detail

/// Learning curve for one learner on one domain: mean excess alpha-risk per
/// grid alpha, with exact infima from enumeration. Trials derive their seed
/// streams as seed + trial index.
inline std::vector<CurveRow> run_learning_curve(const ExperimentConfig& cfg, const FeatureSpace& X,
                                                const FiniteDomain& domain,
                                                const HypothesisSpace& space,
                                                const LossTable& loss) {
    cfg.validate();
    if (cfg.n_grid.empty()) throw DomainParameterError("curve: n_grid must be non-empty");

    std::vector<double> inf_values;
    inf_values.reserve(cfg.alpha_grid.size());
    for (double a : cfg.alpha_grid) inf_values.push_back(inf_alpha_risk(space, domain, loss, a).value);

    std::vector<int> all_points(static_cast<std::size_t>(X.size()));
    for (int i = 0; i < X.size(); ++i) all_points[static_cast<std::size_t>(i)] = i;

    std::vector<CurveRow> rows;
    for (long long n : cfg.n_grid) {
        CurveRow row;
        row.n = n;
        row.mean_excess.assign(cfg.alpha_grid.size(), 0.0);
        for (int t = 0; t < cfg.trials; ++t) {
            const auto draws = sample_id(domain, static_cast<int>(n), cfg.seed + static_cast<std::uint64_t>(t));
            const TrainingSet s = to_training_set(draws);
            Hypothesis h;
            switch (cfg.learner) {
                case LearnerKind::NnThreshold: h = nn_threshold_learner(s, X); break;
                case LearnerKind::ErmId: h = erm_id(s, space, loss); break;
                case LearnerKind::ConstrainedReject:
                    h = constrained_reject_learner(s, all_points, space, loss);
                    break;
            }
            for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a)
                row.mean_excess[a] += alpha_risk(h, domain, loss, cfg.alpha_grid[a]) - inf_values[a];
        }
        for (double& e : row.mean_excess) e /= static_cast<double>(cfg.trials);
        row.nn_bound = nn_rate_bound(X.dim(), n);
        row.sqrt_anchor = cfg.anchor_constant / std::sqrt(std::pow(static_cast<double>(n), 1.0 - cfg.theta));
        row.inv_n_anchor = cfg.anchor_constant / static_cast<double>(n);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// AUC learning curve: the constrained threshold rule over (ranker, tau)
/// pairs, with aux = X and the exact ranker-set supremum as the baseline.
/// The row's single excess entry is the mean AUC regret.
inline std::vector<CurveRow> run_auc_learning_curve(const ExperimentConfig& cfg,
                                                    const FeatureSpace& X,
                                                    const FiniteDomain& domain,
                                                    const std::vector<RankingFunction>& rankers) {
    cfg.validate();
    if (cfg.n_grid.empty()) throw DomainParameterError("curve: n_grid must be non-empty");
    if (rankers.empty()) throw DomainParameterError("curve: ranker set must be non-empty");

    std::vector<ThresholdedRanker> pairs;
    for (const auto& r : rankers)
        for (double tau : cfg.tau_grid) pairs.push_back({r, tau});
    const double sup = sup_auc(rankers, domain).value;
    std::vector<int> all_points(static_cast<std::size_t>(X.size()));
    for (int i = 0; i < X.size(); ++i) all_points[static_cast<std::size_t>(i)] = i;

    std::vector<CurveRow> rows;
    for (long long n : cfg.n_grid) {
        CurveRow row;
        row.n = n;
        row.mean_excess.assign(1, 0.0);
        for (int t = 0; t < cfg.trials; ++t) {
            const auto draws =
                sample_id(domain, static_cast<int>(n), cfg.seed + static_cast<std::uint64_t>(t));
            const auto picked = constrained_auc_learner(to_training_set(draws), all_points, pairs);
            row.mean_excess[0] += sup - auc(picked.ranker, domain);
        }
        row.mean_excess[0] /= static_cast<double>(cfg.trials);
        row.nn_bound = nn_rate_bound(X.dim(), n);
        row.sqrt_anchor = cfg.anchor_constant / std::sqrt(std::pow(static_cast<double>(n), 1.0 - cfg.theta));
        row.inv_n_anchor = cfg.anchor_constant / static_cast<double>(n);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Fixed CSV schema; numbers carry 12 significant digits.
inline std::string curve_to_csv(const std::vector<CurveRow>& rows,
                                const std::vector<double>& alpha_grid) {
    std::ostringstream os;
    os << "n,alpha,mean_excess,nn_rate_bound,sqrt_rate_anchor,inv_n_anchor\n";
    for (const auto& row : rows)
        for (std::size_t a = 0; a < alpha_grid.size(); ++a)
            os << row.n << "," << lab_detail::fmt12(alpha_grid[a]) << ","
               << lab_detail::fmt12(row.mean_excess[a]) << "," << lab_detail::fmt12(row.nn_bound)
               << "," << lab_detail::fmt12(row.sqrt_anchor) << ","
               << lab_detail::fmt12(row.inv_n_anchor) << "\n";
    return os.str();
}

/// Fixed CSV schema for AUC-regret curves.
inline std::string auc_curve_to_csv(const std::vector<CurveRow>& rows) {
    std::ostringstream os;
    os << "n,mean_regret,nn_rate_bound,sqrt_rate_anchor,inv_n_anchor\n";
    for (const auto& row : rows)
        os << row.n << "," << lab_detail::fmt12(row.mean_excess[0]) << ","
           << lab_detail::fmt12(row.nn_bound) << "," << lab_detail::fmt12(row.sqrt_anchor) << ","
           << lab_detail::fmt12(row.inv_n_anchor) << "\n";
    return os.str();
}

/// Least-squares slope of log(excess) against log(n), over rows with
/// positive excess. Reported alongside the anchors, never as a pass/fail.
inline double fitted_loglog_slope(const std::vector<CurveRow>& rows, std::size_t alpha_index) {
    std::vector<double> xs, ys;
    for (const auto& row : rows)
        if (row.mean_excess[alpha_index] > 0.0) {
            xs.push_back(std::log(static_cast<double>(row.n)));
            ys.push_back(std::log(row.mean_excess[alpha_index]));
        }
    if (xs.size() < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return den > 0.0 ? num / den : 0.0;
}

struct ConditionBundle {
    std::vector<ConditionReport> reports;
    VerdictRecord verdict;
};

/// All implemented condition checks for a domain space against a hypothesis
/// space, plus the learnability verdict.
inline ConditionBundle run_condition_report(const DomainSpaceSpec& spec,
                                            const HypothesisSpace& space, const LossTable& loss) {
    ConditionBundle bundle;
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
        auto rep = check_linear_risk(space, spec.members[i], loss);
        rep.notes = "member " + std::to_string(i);
        bundle.reports.push_back(std::move(rep));
    }
    // Multi-part linearity against the canonical Dirac decomposition of
    // each member's OOD part.
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
        const auto& d = spec.members[i];
        std::vector<OodMarginal> atoms;
        for (int x : d.ood_part().support()) {
            std::vector<double> m(static_cast<std::size_t>(d.num_points()), 0.0);
            m[static_cast<std::size_t>(x)] = 1.0;
            atoms.emplace_back(std::move(m));
        }
        auto rep = check_multilinear(space, d.id_part(), atoms, loss);
        rep.notes = "member " + std::to_string(i) + ", Dirac decomposition";
        bundle.reports.push_back(std::move(rep));
    }
    for (const auto& group : detail::group_by_id_key(spec.members)) {
        std::vector<FiniteDomain> cls;
        for (const auto* d : group) cls.push_back(*d);
        auto rep = check_compatibility(space, cls, loss);
        bundle.reports.push_back(std::move(rep));
    }
    bundle.verdict = learnability_verdict(spec, space, loss);
    return bundle;
}

/// AUC-side condition bundle: mixture-linearity reports for every ordered
/// member pair sharing an ID part, plus the verdict.
inline ConditionBundle run_condition_report_auc(const DomainSpaceSpec& spec,
                                                const std::vector<RankingFunction>& rankers) {
    ConditionBundle bundle;
    const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (std::size_t i = 0; i < spec.members.size(); ++i)
        for (std::size_t j = i + 1; j < spec.members.size(); ++j) {
            const auto& a = spec.members[i];
            const auto& b = spec.members[j];
            if (!a.id_part().equal_within(b.id_part())) continue;
            auto rep = check_linear_auc(rankers, a.id_part(), a.ood_part(), b.ood_part(), grid);
            rep.notes = "members " + std::to_string(i) + "," + std::to_string(j);
            bundle.reports.push_back(std::move(rep));
        }
    bundle.verdict = learnability_verdict_auc(spec, rankers);
    return bundle;
}

inline json condition_report_to_json(const ConditionReport& rep) {
    json j;
    j["condition"] = rep.condition_id;
    j["holds"] = rep.holds;
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    if (!rep.rules_triggered.empty()) j["rules"] = rep.rules_triggered;
    if (rep.witness) {
        j["witness"] = {{"alpha", rep.witness->alpha}, {"lhs", rep.witness->lhs},
                        {"rhs", rep.witness->rhs},     {"gap", rep.witness->gap},
                        {"note", rep.witness->note}};
        if (rep.witness->domain_index >= 0) j["witness"]["domain_index"] = rep.witness->domain_index;
    }
    return j;
}

inline json verdict_to_json(const VerdictRecord& v) {
    json j;
    j["outcome"] = to_string(v.outcome);
    j["premises"] = v.premises;
    if (!v.note.empty()) j["note"] = v.note;
    j["reports"] = json::array();
    for (const auto& rep : v.reports) j["reports"].push_back(condition_report_to_json(rep));
    return j;
}

inline std::string verdict_to_table(const VerdictRecord& v) {
    std::ostringstream os;
    os << "verdict: " << to_string(v.outcome) << "\n";
    for (const auto& p : v.premises) os << "  premise: " << p << "\n";
    if (!v.note.empty()) os << "  note: " << v.note << "\n";
    for (const auto& rep : v.reports)
        os << "  condition " << rep.condition_id << ": " << (rep.holds ? "holds" : "fails") << "\n";
    return os.str();
}

}  // namespace oodlab

#endif
