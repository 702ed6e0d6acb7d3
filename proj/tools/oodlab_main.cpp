// Command-line front end: condition checks, learning curves, counterexample
// searches, and learnability verdicts over JSON-described fixtures.
//
// Exit codes: 0 success, 2 when a counterexample search comes up empty,
// 1 on any error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "oodlab/oodlab.hpp"

namespace {

using namespace oodlab;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::string out_override;
    std::string format_override;
};

ExperimentConfig load_config(const CliOptions& opt) {
    ExperimentConfig cfg = config_from_json(io_detail::load_file(opt.config_path));
    if (opt.seed_override) cfg.seed = *opt.seed_override;
    if (!opt.out_override.empty()) cfg.out_path = opt.out_override;
    if (!opt.format_override.empty()) cfg.format = opt.format_override;
    return cfg;
}

void write_output(const ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + cfg.out_path);
    out << text;
}

LossTable resolve_loss(const ExperimentConfig& cfg, int k) {
    if (cfg.loss_json.is_null()) return LossTable::zero_one(k);
    if (cfg.loss_json.is_string() && cfg.loss_json.get<std::string>() == "zero-one")
        return LossTable::zero_one(k);
    return loss_from_json(cfg.loss_json);
}

HypothesisSpace resolve_space(const ExperimentConfig& cfg, int num_points, int k) {
    if (cfg.space_path.empty() || cfg.space_path == "exhaustive")
        return exhaustive_space(num_points, k);
    return space_from_json(io_detail::load_file(cfg.space_path));
}

int run_curve(const ExperimentConfig& cfg) {
    const auto df = load_domain(cfg.domain_path);
    if (cfg.metric == Metric::Auc) {
        const auto rankers = rankers_from_json(io_detail::load_file(cfg.rankers_path));
        const auto rows = run_auc_learning_curve(cfg, df.X, df.domain, rankers);
        if (cfg.format == "json") {
            json j;
            j["rows"] = json::array();
            for (const auto& row : rows)
                j["rows"].push_back({{"n", row.n},
                                     {"mean_regret", row.mean_excess[0]},
                                     {"nn_rate_bound", row.nn_bound},
                                     {"sqrt_rate_anchor", row.sqrt_anchor},
                                     {"inv_n_anchor", row.inv_n_anchor}});
            j["loglog_slope"] = fitted_loglog_slope(rows, 0);
            write_output(cfg, j.dump(2) + "\n");
        } else {
            write_output(cfg, auc_curve_to_csv(rows));
        }
        return 0;
    }
    const auto loss = resolve_loss(cfg, df.domain.k());
    const auto space = resolve_space(cfg, df.X.size(), df.domain.k());
    const auto rows = run_learning_curve(cfg, df.X, df.domain, space, loss);
    if (cfg.format == "json") {
        json j;
        j["rows"] = json::array();
        for (const auto& row : rows) {
            json r;
            r["n"] = row.n;
            r["mean_excess"] = row.mean_excess;
            r["nn_rate_bound"] = row.nn_bound;
            r["sqrt_rate_anchor"] = row.sqrt_anchor;
            r["inv_n_anchor"] = row.inv_n_anchor;
            j["rows"].push_back(std::move(r));
        }
        j["alpha_grid"] = cfg.alpha_grid;
        json slopes = json::array();
        for (std::size_t a = 0; a < cfg.alpha_grid.size(); ++a)
            slopes.push_back(fitted_loglog_slope(rows, a));
        j["loglog_slope"] = std::move(slopes);
        write_output(cfg, j.dump(2) + "\n");
    } else {
        write_output(cfg, curve_to_csv(rows, cfg.alpha_grid));
    }
    return 0;
}

int run_check(const ExperimentConfig& cfg, bool verdict_only) {
    const auto sf = domain_space_from_json(io_detail::load_file(cfg.space_spec_path));
    if (cfg.metric == Metric::Auc) {
        const auto rankers = rankers_from_json(io_detail::load_file(cfg.rankers_path));
        if (verdict_only) {
            const auto verdict = learnability_verdict_auc(sf.spec, rankers);
            if (cfg.format == "json")
                write_output(cfg, verdict_to_json(verdict).dump(2) + "\n");
            else
                write_output(cfg, verdict_to_table(verdict));
            return 0;
        }
        const auto bundle = run_condition_report_auc(sf.spec, rankers);
        if (cfg.format == "json") {
            json j;
            j["reports"] = json::array();
            for (const auto& rep : bundle.reports)
                j["reports"].push_back(condition_report_to_json(rep));
            j["verdict"] = verdict_to_json(bundle.verdict);
            write_output(cfg, j.dump(2) + "\n");
        } else {
            std::ostringstream os;
            for (const auto& rep : bundle.reports)
                os << "condition " << rep.condition_id << " [" << rep.notes
                   << "]: " << (rep.holds ? "holds" : "fails") << "\n";
            os << verdict_to_table(bundle.verdict);
            write_output(cfg, os.str());
        }
        return 0;
    }
    const int k = sf.spec.members.front().k();
    const auto loss = resolve_loss(cfg, k);
    const auto space = resolve_space(cfg, sf.X.size(), k);
    if (verdict_only) {
        const auto verdict = learnability_verdict(sf.spec, space, loss);
        if (cfg.format == "json")
            write_output(cfg, verdict_to_json(verdict).dump(2) + "\n");
        else
            write_output(cfg, verdict_to_table(verdict));
        return 0;
    }
    const auto bundle = run_condition_report(sf.spec, space, loss);
    if (cfg.format == "json") {
        json j;
        j["reports"] = json::array();
        for (const auto& rep : bundle.reports) j["reports"].push_back(condition_report_to_json(rep));
        j["verdict"] = verdict_to_json(bundle.verdict);
        write_output(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        for (const auto& rep : bundle.reports)
            os << "condition " << rep.condition_id << " [" << rep.notes
               << "]: " << (rep.holds ? "holds" : "fails") << "\n";
        os << verdict_to_table(bundle.verdict);
        write_output(cfg, os.str());
    }
    return 0;
}

int run_counterexample(const ExperimentConfig& cfg) {
    const auto emit = [&](const Certificate& cert, const FeatureSpace* X) {
        write_output(cfg, certificate_to_json(cert, X).dump(2) + "\n");
    };
    if (cfg.counterexample_kind == "overlap") {
        const auto df = load_domain(cfg.domain_path);
        const auto loss = resolve_loss(cfg, df.domain.k());
        const auto space = resolve_space(cfg, df.X.size(), df.domain.k());
        const auto d = overlap_domain(space);
        const auto rep = alpha_risk_gap_report(d, space, loss, 0.5);
        Certificate cert;
        cert.kind = "overlap-impossibility";
        cert.measured["gap_at_half"] = rep.gap;
        cert.measured["c_alpha"] = rep.c_alpha;
        cert.measured["m0"] = rep.m0;
        cert.measured["overlap_measure"] = rep.overlap_measure;
        cert.measured["lower_bound"] = rep.lower_bound;
        cert.verified = rep.gap > kMassTol && rep.bound_satisfied;
        cert.verdict = cert.verified ? "overlap defeats the affine alpha-risk decomposition"
                                     : "recomputation failed";
        cert.domains.push_back(d);
        emit(cert, &df.X);
        return 0;
    }
    if (cfg.counterexample_kind == "pattern-count") {
        const auto df = load_domain(cfg.domain_path);
        const auto loss = resolve_loss(cfg, df.domain.k());
        const auto space = resolve_space(cfg, df.X.size(), df.domain.k());
        emit(sauer_pattern_domain(space, loss), &df.X);
        return 0;
    }
    if (cfg.counterexample_kind == "auc-split") {
        const auto df = load_domain(cfg.domain_path);
        const auto rankers = rankers_from_json(io_detail::load_file(cfg.rankers_path));
        emit(auc_unrealizable_split(rankers, df.X.size()), &df.X);
        return 0;
    }
    if (cfg.counterexample_kind == "dirac-auc") {
        const auto df = load_domain(cfg.domain_path);
        const auto rankers = rankers_from_json(io_detail::load_file(cfg.rankers_path));
        const int x = cfg.raw.at("x").get<int>();
        const int xp = cfg.raw.at("x_prime").get<int>();
        emit(dirac_auc_overlap_pair(df.domain.id_part(), x, xp, rankers), &df.X);
        return 0;
    }
    throw ParseError("unknown counterexample kind: " + cfg.counterexample_kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-domain OOD-detection learnability laboratory"};
    app.require_subcommand(1);

    CliOptions opt;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", opt.seed_override, "override the config seed");
        sub->add_option("--out", opt.out_override, "output path (default: stdout)");
        sub->add_option("--format", opt.format_override, "json | csv | table");
    };

    auto* check = app.add_subcommand("check", "condition reports plus a verdict");
    auto* curve = app.add_subcommand("curve", "learning curves with exact infima");
    auto* cex = app.add_subcommand("counterexample", "materialize an impossibility witness");
    auto* verdict = app.add_subcommand("verdict", "learnability verdict only");
    for (auto* sub : {check, curve, cex, verdict}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load_config(opt);
        if (curve->parsed()) return run_curve(cfg);
        if (check->parsed()) return run_check(cfg, false);
        if (verdict->parsed()) return run_check(cfg, true);
        return run_counterexample(cfg);
    } catch (const oodlab::NoCounterexampleError& e) {
        std::cerr << "no counterexample: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
