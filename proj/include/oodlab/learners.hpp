#ifndef OODLAB_LEARNERS_HPP
#define OODLAB_LEARNERS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "oodlab/auc.hpp"
#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"
#include "oodlab/risk.hpp"

namespace oodlab {

struct Sample {
    int point = 0;
    int label = 1;
};

using TrainingSet = std::vector<Sample>;

inline TrainingSet to_training_set(const std::vector<std::pair<int, int>>& draws) {
    TrainingSet s;
    s.reserve(draws.size());
    for (const auto& d : draws) s.push_back(Sample{d.first, d.second});
    return s;
}

using LearnerFn = std::function<Hypothesis(const TrainingSet&)>;

/// Accept a point iff it lies within 0.5 * d0 of some training point.
/// Binary output: 1 = ID, 2 = OOD.
inline Hypothesis nn_threshold_learner(const TrainingSet& s, const FeatureSpace& X) {
    if (s.empty()) throw DomainParameterError("nn_threshold_learner: empty training set");
    Hypothesis h;
    h.k = 1;
    h.labels.resize(static_cast<std::size_t>(X.size()));
    const double radius = 0.5 * X.d0();
    for (int x = 0; x < X.size(); ++x) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& smp : s)
            nearest = std::min(nearest, euclidean(X.point(x), X.point(smp.point)));
        h.labels[static_cast<std::size_t>(x)] = nearest < radius ? 1 : 2;
    }
    return h;
}

/// The covering-argument consistency rate 2*sqrt(d)/n^{1/(d+1)} +
/// sqrt(d)/(2^d * e * n^{1/(d+1)}).
inline double nn_rate_bound(int d, long long n) {
    if (d < 1 || n < 1) throw DomainParameterError("nn_rate_bound: d, n must be >= 1");
    const double root = std::pow(static_cast<double>(n), 1.0 / (d + 1));
    const double sd = std::sqrt(static_cast<double>(d));
    return 2.0 * sd / root + sd / (std::pow(2.0, d) * std::exp(1.0) * root);
}

/// Empirical-risk minimizer over the ID sample; ties go to the lowest index.
inline Hypothesis erm_id(const TrainingSet& s, const HypothesisSpace& space,
                         const LossTable& loss) {
    if (space.size() == 0) throw DomainParameterError("erm_id: empty space");
    const auto best = detail::minimize_over(space.size(), [&](int i) {
        double r = 0.0;
        for (const auto& smp : s) r += loss(space.member(i)(smp.point), smp.label);
        return r;
    });
    return space.member(best.canonical);
}

inline TrainingSet phi_training_set(const TrainingSet& s) {
    TrainingSet out = s;
    for (auto& smp : out) smp.label = 1;
    return out;
}

/// max loss among ID label pairs over min rejection loss; the cost ratio the
/// composite bound is stated with.
inline double composite_cost_ratio(const LossTable& loss, int k) {
    double worst = 0.0;
    for (int y1 = 1; y1 <= k; ++y1)
        for (int y2 = 1; y2 <= k; ++y2) worst = std::max(worst, loss(y1, y2));
    const double denom = std::min(loss(1, 2), loss(2, 1));
    return worst / denom;
}

/// Defer to the binary learner for accept/reject and to the ID learner for
/// the class label of accepted points.
inline Hypothesis composite_learner(const TrainingSet& s, const LearnerFn& a_in,
                                    const LearnerFn& a_b) {
    const Hypothesis hin = a_in(s);
    const Hypothesis hb = a_b(phi_training_set(s));
    if (hin.num_points() != hb.num_points())
        throw DomainParameterError("composite_learner: learners disagree on X");
    Hypothesis h;
    h.k = hin.k;
    h.labels.resize(hin.labels.size());
    for (std::size_t x = 0; x < h.labels.size(); ++x)
        h.labels[x] = hb.labels[x] == 1 ? hin.labels[x] : hin.k + 1;
    return h;
}

/// Among members with zero empirical ID risk, minimize the mean rejection
/// loss over the auxiliary points. Ties go to the lowest index.
inline Hypothesis constrained_reject_learner(const TrainingSet& s, const std::vector<int>& aux,
                                             const HypothesisSpace& space, const LossTable& loss) {
    std::vector<int> feasible;
    for (int i = 0; i < space.size(); ++i) {
        double emp = 0.0;
        for (const auto& smp : s) emp += loss(space.member(i)(smp.point), smp.label);
        if (emp == 0.0) feasible.push_back(i);
    }
    if (feasible.empty())
        throw RealizabilityError("constrained_reject_learner: no member fits the sample exactly");
    const int kp1 = space.k() + 1;
    int best = feasible.front();
    double best_obj = std::numeric_limits<double>::infinity();
    for (int i : feasible) {
        double obj = 0.0;
        for (int x : aux) obj += loss(space.member(i)(x), kp1);
        if (!aux.empty()) obj /= static_cast<double>(aux.size());
        if (obj < best_obj - kMassTol) {
            best_obj = obj;
            best = i;
        }
    }
    return space.member(best);
}

struct ThresholdedRanker {
    RankingFunction ranker;
    double tau = 0.0;
};

/// Among (ranker, tau) pairs placing no training point at or below tau,
/// maximize the count of auxiliary points at or below tau.
inline ThresholdedRanker constrained_auc_learner(const TrainingSet& s, const std::vector<int>& aux,
                                                 const std::vector<ThresholdedRanker>& pairs) {
    int best = -1;
    int best_count = -1;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        bool ok = true;
        for (const auto& smp : s)
            if (pairs[i].ranker(smp.point) <= pairs[i].tau) {
                ok = false;
                break;
            }
        if (!ok) continue;
        int count = 0;
        for (int x : aux)
            if (pairs[i].ranker(x) <= pairs[i].tau) ++count;
        if (count > best_count) {
            best_count = count;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) throw InfeasibleError("constrained_auc_learner: no feasible (ranker, tau) pair");
    return pairs[static_cast<std::size_t>(best)];
}

namespace detail {

// Embedding of a labeled sample point: coordinates followed by a one-hot
// label block.
inline std::vector<double> embed_sample(const Sample& s, const FeatureSpace& X, int k) {
    std::vector<double> v = X.point(s.point);
    v.resize(v.size() + static_cast<std::size_t>(k), 0.0);
    v[X.point(s.point).size() + static_cast<std::size_t>(s.label - 1)] = 1.0;
    return v;
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace detail

/// Gaussian-kernel MMD between the empirical measures of two labeled
/// samples (biased V-statistic). Zero iff the empirical measures coincide.
inline double mmd(const TrainingSet& a, const TrainingSet& b, const FeatureSpace& X, int k,
                  double bandwidth) {
    if (a.empty() || b.empty()) throw DomainParameterError("mmd: samples must be non-empty");
    if (!(bandwidth > 0.0)) throw DomainParameterError("mmd: bandwidth must be positive");
    std::vector<std::vector<double>> ea, eb;
    ea.reserve(a.size());
    eb.reserve(b.size());
    for (const auto& s : a) ea.push_back(detail::embed_sample(s, X, k));
    for (const auto& s : b) eb.push_back(detail::embed_sample(s, X, k));
    const double gamma = 1.0 / (2.0 * bandwidth * bandwidth);
    auto kernel_mean = [&](const std::vector<std::vector<double>>& u,
                           const std::vector<std::vector<double>>& v) {
        double s = 0.0;
        for (const auto& x : u)
            for (const auto& y : v) s += std::exp(-gamma * detail::sq_dist(x, y));
        return s / (static_cast<double>(u.size()) * static_cast<double>(v.size()));
    };
    const double m2 = kernel_mean(ea, ea) + kernel_mean(eb, eb) - 2.0 * kernel_mean(ea, eb);
    return std::sqrt(std::max(m2, 0.0));
}

/// Median pairwise embedded distance of the pooled sample; the default
/// dispatch bandwidth.
inline double median_pairwise_distance(const std::vector<TrainingSet>& samples,
                                       const FeatureSpace& X, int k) {
    std::vector<std::vector<double>> pool;
    for (const auto& s : samples)
        for (const auto& smp : s) pool.push_back(detail::embed_sample(smp, X, k));
    std::vector<double> dists;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j)
            dists.push_back(std::sqrt(detail::sq_dist(pool[i], pool[j])));
    if (dists.empty()) return 1.0;
    std::sort(dists.begin(), dists.end());
    const double med = dists[dists.size() / 2];
    return med > 0.0 ? med : 1.0;
}

struct Reference {
    TrainingSet sample;
    LearnerFn learner;
};

struct DispatchOutput {
    Hypothesis hypothesis;
    int dispatched = -1;
    std::vector<double> distances;
    double bandwidth = 1.0;
    double min_reference_gap = 0.0;
    bool low_separation = false;
};

/// Route the sample to the reference with the smallest MMD and run that
/// reference's learner. Ties go to the lowest class index.
inline DispatchOutput mmd_dispatch_learner(const TrainingSet& s,
                                           const std::vector<Reference>& references,
                                           const FeatureSpace& X, int k) {
    if (references.empty()) throw DomainParameterError("mmd_dispatch_learner: no references");
    std::vector<TrainingSet> pool;
    pool.push_back(s);
    for (const auto& ref : references) pool.push_back(ref.sample);
    DispatchOutput out;
    out.bandwidth = median_pairwise_distance(pool, X, k);
    out.distances.reserve(references.size());
    for (const auto& ref : references)
        out.distances.push_back(mmd(s, ref.sample, X, k, out.bandwidth));
    out.dispatched = static_cast<int>(std::min_element(out.distances.begin(), out.distances.end()) -
                                      out.distances.begin());
    out.min_reference_gap = std::numeric_limits<double>::infinity();
    std::size_t n_min = s.size();
    for (std::size_t i = 0; i < references.size(); ++i) {
        n_min = std::min(n_min, references[i].sample.size());
        for (std::size_t j = i + 1; j < references.size(); ++j)
            out.min_reference_gap = std::min(
                out.min_reference_gap, mmd(references[i].sample, references[j].sample, X, k, out.bandwidth));
    }
    if (references.size() < 2) out.min_reference_gap = 0.0;
    // Estimated class separation should clear the sampling noise scale.
    out.low_separation =
        out.min_reference_gap < 10.0 * std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(n_min, 1)));
    out.hypothesis = references[static_cast<std::size_t>(out.dispatched)].learner(s);
    return out;
}

}  // namespace oodlab

#endif
