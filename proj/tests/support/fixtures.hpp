#ifndef OODLAB_TEST_FIXTURES_HPP
#define OODLAB_TEST_FIXTURES_HPP

#include <vector>

#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"

// Shared deterministic fixture generators. Masses are dyadic (integer
// numerators over a power-of-two denominator) so sums and products stay
// exact in double arithmetic.

namespace fixtures {

using namespace oodlab;

// A 1-D grid 0, 1, ..., n-1.
inline FeatureSpace line_space(int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({static_cast<double>(i)});
    return FeatureSpace(std::move(pts));
}

// Random composition of `denom` into `parts` positive dyadic masses.
inline std::vector<double> dyadic_masses(Rng& rng, int parts, int denom = 64) {
    std::vector<int> numerators(static_cast<std::size_t>(parts), 1);
    int remaining = denom - parts;
    for (int i = 0; i < remaining; ++i)
        ++numerators[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(parts)))];
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(parts));
    for (int v : numerators) out.push_back(static_cast<double>(v) / denom);
    return out;
}

// A random domain over n points with K labels. OOD support may overlap ID
// support unless `separate` is set, in which case supports partition X.
// Smaller denominators bound the ID/OOD density ratios away from sigmoid
// saturation.
inline FiniteDomain random_domain(Rng& rng, int n, int k, bool separate, int denom = 64) {
    std::vector<int> id_points, ood_points;
    if (separate) {
        if (n < 2) throw DomainParameterError("separate fixture needs n >= 2");
        const int split = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        for (int x = 0; x < n; ++x) (x < split ? id_points : ood_points).push_back(x);
    } else {
        for (int x = 0; x < n; ++x) {
            if (rng.below(2)) id_points.push_back(x);
            if (rng.below(2)) ood_points.push_back(x);
        }
        if (id_points.empty()) id_points.push_back(0);
        if (ood_points.empty()) ood_points.push_back(n - 1);
    }
    // Spread ID mass over (point, random label) atoms.
    const auto idm = dyadic_masses(rng, static_cast<int>(id_points.size()), denom);
    std::vector<double> id_mass(static_cast<std::size_t>(n) * k, 0.0);
    for (std::size_t i = 0; i < id_points.size(); ++i) {
        const int y = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        id_mass[static_cast<std::size_t>(id_points[i]) * k + (y - 1)] += idm[i];
    }
    const auto oodm = dyadic_masses(rng, static_cast<int>(ood_points.size()), denom);
    std::vector<double> ood_mass(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < ood_points.size(); ++i)
        ood_mass[static_cast<std::size_t>(ood_points[i])] += oodm[i];
    const double pi = static_cast<double>(rng.below(8)) / 8.0;  // in [0, 1)
    return FiniteDomain(IdJoint(n, k, std::move(id_mass)), OodMarginal(std::move(ood_mass)), pi);
}

// A random space of `count` hypotheses (duplicates collapse).
inline HypothesisSpace random_space(Rng& rng, int n, int k, int count) {
    std::vector<Hypothesis> members;
    for (int i = 0; i < count; ++i) {
        Hypothesis h;
        h.k = k;
        for (int x = 0; x < n; ++x)
            h.labels.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k + 1))));
        members.push_back(std::move(h));
    }
    return HypothesisSpace(std::move(members));
}

// All total preorders of {0..n-1} as rankers (score = level index).
inline std::vector<RankingFunction> all_order_types(int n) {
    std::vector<RankingFunction> out;
    std::vector<int> levels(static_cast<std::size_t>(n), 0);
    for (;;) {
        int top = 0;
        for (int v : levels) top = std::max(top, v);
        bool contiguous = true;
        for (int lv = 0; lv <= top && contiguous; ++lv) {
            bool used = false;
            for (int v : levels)
                if (v == lv) used = true;
            contiguous = used;
        }
        if (contiguous) {
            RankingFunction r;
            for (int v : levels) r.scores.push_back(static_cast<double>(v));
            out.push_back(std::move(r));
        }
        int i = n - 1;
        while (i >= 0 && levels[static_cast<std::size_t>(i)] == n - 1) {
            levels[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++levels[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace fixtures

#endif
