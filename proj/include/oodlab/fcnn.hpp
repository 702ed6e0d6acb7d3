#ifndef OODLAB_FCNN_HPP
#define OODLAB_FCNN_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"
#include "oodlab/hypothesis.hpp"

namespace oodlab {

/// Layer widths (l_1, ..., l_g); depth g must exceed 2.
struct Architecture {
    std::vector<int> widths;

    int depth() const { return static_cast<int>(widths.size()); }
    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }

    void validate() const {
        if (depth() <= 2) throw DomainParameterError("architecture depth must exceed 2");
        for (int w : widths)
            if (w < 1) throw DomainParameterError("layer widths must be positive");
    }

    bool operator==(const Architecture& o) const { return widths == o.widths; }
};

/// ReLU feed-forward network. Layer i in 2..g-1 computes sigma(W x + b);
/// the last layer is affine. Weights are stored row-major per layer.
struct ReluNetwork {
    Architecture arch;
    std::vector<std::vector<double>> weights;  // weights[i]: layer i+2, (l_{i+2} x l_{i+1})
    std::vector<std::vector<double>> biases;
    double depth_pad_bias_shift = 0.0;  // metadata set by embed_network

    void validate() const {
        arch.validate();
        const int g = arch.depth();
        if (static_cast<int>(weights.size()) != g - 1 || static_cast<int>(biases.size()) != g - 1)
            throw DomainParameterError("network must provide weights/biases for layers 2..g");
        for (int i = 0; i < g - 1; ++i) {
            const std::size_t rows = static_cast<std::size_t>(arch.widths[static_cast<std::size_t>(i + 1)]);
            const std::size_t cols = static_cast<std::size_t>(arch.widths[static_cast<std::size_t>(i)]);
            if (weights[static_cast<std::size_t>(i)].size() != rows * cols)
                throw DomainParameterError("weight matrix shape mismatch");
            if (biases[static_cast<std::size_t>(i)].size() != rows)
                throw DomainParameterError("bias vector shape mismatch");
            for (double v : weights[static_cast<std::size_t>(i)])
                if (!std::isfinite(v)) throw DomainParameterError("weights must be finite");
            for (double v : biases[static_cast<std::size_t>(i)])
                if (!std::isfinite(v)) throw DomainParameterError("biases must be finite");
        }
    }

    std::vector<double> forward(const Point& x) const {
        if (static_cast<int>(x.size()) != arch.input_dim())
            throw EvaluationError("input dimension mismatch");
        std::vector<double> cur = x;
        const int g = arch.depth();
        for (int layer = 0; layer < g - 1; ++layer) {
            const std::size_t rows = static_cast<std::size_t>(arch.widths[static_cast<std::size_t>(layer + 1)]);
            const std::size_t cols = cur.size();
            const auto& w = weights[static_cast<std::size_t>(layer)];
            const auto& b = biases[static_cast<std::size_t>(layer)];
            std::vector<double> next(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < cols; ++c) s += w[r * cols + c] * cur[c];
                s += b[r];
                next[r] = (layer < g - 2) ? std::max(s, 0.0) : s;
            }
            cur = std::move(next);
        }
        return cur;
    }
};

/// Argmax with the largest index winning ties (labels are 1-based).
inline int argmax_last(const std::vector<double>& v) {
    int best = 1;
    for (int i = 2; i <= static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i - 1)] >= v[static_cast<std::size_t>(best - 1)]) best = i;
    return best;
}

/// Materialize the induced hypothesis over X. Requires l_g = K+1.
inline Hypothesis induced_hypothesis(const ReluNetwork& net, int k, const FeatureSpace& X) {
    if (net.arch.output_dim() != k + 1)
        throw DomainParameterError("induced_hypothesis: output width must be K+1");
    Hypothesis h;
    h.k = k;
    h.labels.reserve(static_cast<std::size_t>(X.size()));
    for (int i = 0; i < X.size(); ++i) h.labels.push_back(argmax_last(net.forward(X.point(i))));
    return h;
}

enum class ScoreKind { Softmax, TempScaled, Energy };

/// A score function over network outputs plus its accept threshold.
struct ScoreFunction {
    ScoreKind kind = ScoreKind::Softmax;
    double temperature = 1.0;
    double lambda = 0.5;

    void validate(int l) const {
        if (temperature <= 0.0) throw DomainParameterError("temperature must be positive");
        if (kind == ScoreKind::Energy) {
            if (!(lambda > 0.0))
                throw DomainParameterError("energy threshold must lie in (0, inf)");
        } else {
            if (!(lambda > 1.0 / l && lambda < 1.0))
                throw DomainParameterError("softmax threshold must lie in (1/l, 1)");
        }
    }
};

inline double score_value(const ScoreFunction& e, const std::vector<double>& v) {
    if (v.empty()) throw DomainParameterError("score of an empty vector");
    const double t = e.kind == ScoreKind::Softmax ? 1.0 : e.temperature;
    const double vmax = *std::max_element(v.begin(), v.end());
    double denom = 0.0;
    for (double x : v) denom += std::exp((x - vmax) / t);
    switch (e.kind) {
        case ScoreKind::Softmax:
        case ScoreKind::TempScaled:
            // max softmax coordinate; the max logit contributes exp(0).
            return 1.0 / denom;
        case ScoreKind::Energy:
            return t * (std::log(denom) + vmax / t);
    }
    return 0.0;
}

/// Materialize the accept/reject rule score >= lambda over X (1 = ID, 2 = OOD).
inline Hypothesis score_classifier(const ReluNetwork& net, const ScoreFunction& e,
                                   const FeatureSpace& X) {
    e.validate(net.arch.output_dim());
    Hypothesis h;
    h.k = 1;
    h.labels.reserve(static_cast<std::size_t>(X.size()));
    for (int i = 0; i < X.size(); ++i) {
        const double s = score_value(e, net.forward(X.point(i)));
        h.labels.push_back(s >= e.lambda ? 1 : 2);
    }
    return h;
}

/// The architecture comparison: q embeds into q' iff depths and end widths
/// line up and every hidden width only grows.
inline bool arch_precedes(const Architecture& q, const Architecture& qp) {
    const int g = q.depth(), gp = qp.depth();
    if (g > gp) return false;
    if (q.widths.front() != qp.widths.front()) return false;
    if (q.widths.back() != qp.widths.back()) return false;
    for (int i = 0; i + 1 < g; ++i)
        if (q.widths[static_cast<std::size_t>(i)] > qp.widths[static_cast<std::size_t>(i)]) return false;
    for (int i = g - 1; i + 1 < gp; ++i)
        if (q.widths[static_cast<std::size_t>(g - 2)] > qp.widths[static_cast<std::size_t>(i)]) return false;
    return true;
}

namespace detail {

// Identity layers inserted after a sigma layer see nonnegative activations,
// so no bias shift is needed for ReLU to act as the identity.
inline ReluNetwork pad_depth(const ReluNetwork& net, int new_depth) {
    const int g = net.arch.depth();
    if (new_depth == g) return net;
    const int hid = net.arch.widths[static_cast<std::size_t>(g - 2)];
    ReluNetwork out;
    out.arch.widths.assign(net.arch.widths.begin(), net.arch.widths.end() - 1);
    for (int i = g; i < new_depth; ++i) out.arch.widths.push_back(hid);
    out.arch.widths.push_back(net.arch.output_dim());
    for (int i = 0; i < g - 2; ++i) {
        out.weights.push_back(net.weights[static_cast<std::size_t>(i)]);
        out.biases.push_back(net.biases[static_cast<std::size_t>(i)]);
    }
    for (int i = g; i < new_depth; ++i) {
        std::vector<double> w(static_cast<std::size_t>(hid) * hid, 0.0);
        for (int r = 0; r < hid; ++r) w[static_cast<std::size_t>(r) * hid + r] = 1.0;
        out.weights.push_back(std::move(w));
        out.biases.push_back(std::vector<double>(static_cast<std::size_t>(hid), 0.0));
    }
    out.weights.push_back(net.weights.back());
    out.biases.push_back(net.biases.back());
    out.validate();
    return out;
}

// Zero-pad every layer to the target widths; padded units stay at zero.
inline ReluNetwork pad_width(const ReluNetwork& net, const Architecture& target) {
    ReluNetwork out;
    out.arch = target;
    const int g = net.arch.depth();
    for (int layer = 0; layer < g - 1; ++layer) {
        const int rows = net.arch.widths[static_cast<std::size_t>(layer + 1)];
        const int cols = net.arch.widths[static_cast<std::size_t>(layer)];
        const int rows2 = target.widths[static_cast<std::size_t>(layer + 1)];
        const int cols2 = target.widths[static_cast<std::size_t>(layer)];
        std::vector<double> w(static_cast<std::size_t>(rows2) * cols2, 0.0);
        std::vector<double> b(static_cast<std::size_t>(rows2), 0.0);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c)
                w[static_cast<std::size_t>(r) * cols2 + c] =
                    net.weights[static_cast<std::size_t>(layer)][static_cast<std::size_t>(r) * cols + c];
            b[static_cast<std::size_t>(r)] = net.biases[static_cast<std::size_t>(layer)][static_cast<std::size_t>(r)];
        }
        out.weights.push_back(std::move(w));
        out.biases.push_back(std::move(b));
    }
    out.validate();
    return out;
}

}  // namespace detail

/// Embed a network into a larger architecture without changing its outputs.
/// Depth grows by identity layers on post-activation values, width by zero
/// blocks, so the forward pass is preserved exactly.
inline ReluNetwork embed_network(const ReluNetwork& net, const Architecture& target) {
    net.validate();
    target.validate();
    if (!arch_precedes(net.arch, target))
        throw DomainParameterError("embed_network: target architecture does not dominate the source");
    ReluNetwork deep = detail::pad_depth(net, target.depth());
    ReluNetwork out = detail::pad_width(deep, target);
    out.depth_pad_bias_shift = 0.0;
    return out;
}

/// A scalar network computing the L1 distance to x: zero at x, strictly
/// positive everywhere else. Architecture (d, 2d, 1).
inline ReluNetwork point_isolating_ranker(const Point& x, const FeatureSpace& X) {
    const int d = X.dim();
    if (static_cast<int>(x.size()) != d)
        throw DomainParameterError("point dimension mismatch");
    ReluNetwork net;
    net.arch.widths = {d, 2 * d, 1};
    std::vector<double> w2(static_cast<std::size_t>(2 * d) * d, 0.0);
    std::vector<double> b2(static_cast<std::size_t>(2 * d), 0.0);
    for (int i = 0; i < d; ++i) {
        w2[static_cast<std::size_t>(2 * i) * d + i] = 1.0;
        b2[static_cast<std::size_t>(2 * i)] = -x[static_cast<std::size_t>(i)];
        w2[static_cast<std::size_t>(2 * i + 1) * d + i] = -1.0;
        b2[static_cast<std::size_t>(2 * i + 1)] = x[static_cast<std::size_t>(i)];
    }
    net.weights.push_back(std::move(w2));
    net.biases.push_back(std::move(b2));
    net.weights.push_back(std::vector<double>(static_cast<std::size_t>(2 * d), 1.0));
    net.biases.push_back(std::vector<double>{0.0});
    net.validate();
    return net;
}

/// Materialize the ranker values of a scalar-output network over X.
inline RankingFunction ranker_of(const ReluNetwork& net, const FeatureSpace& X) {
    if (net.arch.output_dim() != 1)
        throw DomainParameterError("ranker_of: network must be scalar-valued");
    RankingFunction r;
    r.scores.reserve(static_cast<std::size_t>(X.size()));
    for (int i = 0; i < X.size(); ++i) r.scores.push_back(net.forward(X.point(i))[0]);
    return r;
}

/// A network whose induced hypothesis realizes an arbitrary labeling of a
/// finite X exactly: one L1 bump per point, summed into a one-hot head.
inline ReluNetwork interpolating_network(const std::vector<int>& labels, int k,
                                         const FeatureSpace& X) {
    const int n = X.size();
    const int d = X.dim();
    const int l = k + 1;
    if (static_cast<int>(labels.size()) != n)
        throw DomainParameterError("one label per point required");
    for (int lab : labels)
        if (lab < 1 || lab > l) throw DomainParameterError("label out of range 1..K+1");

    const bool constant = std::all_of(labels.begin(), labels.end(),
                                      [&](int lab) { return lab == labels[0]; });
    if (constant) {
        // Zero weights, one-hot output bias.
        ReluNetwork net;
        net.arch.widths = {d, 1, l};
        net.weights.push_back(std::vector<double>(static_cast<std::size_t>(d), 0.0));
        net.biases.push_back(std::vector<double>{0.0});
        net.weights.push_back(std::vector<double>(static_cast<std::size_t>(l), 0.0));
        std::vector<double> bias(static_cast<std::size_t>(l), 0.0);
        bias[static_cast<std::size_t>(labels[0] - 1)] = 1.0;
        net.biases.push_back(std::move(bias));
        net.validate();
        return net;
    }

    double min_l1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) min_l1 = std::min(min_l1, l1_distance(X.point(i), X.point(j)));
    const double theta = 0.5 * min_l1;

    ReluNetwork net;
    net.arch.widths = {d, 2 * d * n, n, l};
    // Layer 2: per point j, the 2d half-differences of the L1 distance to x_j.
    std::vector<double> w2(static_cast<std::size_t>(2 * d * n) * d, 0.0);
    std::vector<double> b2(static_cast<std::size_t>(2 * d * n), 0.0);
    for (int j = 0; j < n; ++j) {
        const auto& xj = X.point(j);
        for (int i = 0; i < d; ++i) {
            const std::size_t r0 = static_cast<std::size_t>(j * 2 * d + 2 * i);
            w2[r0 * d + static_cast<std::size_t>(i)] = 1.0;
            b2[r0] = -xj[static_cast<std::size_t>(i)];
            w2[(r0 + 1) * d + static_cast<std::size_t>(i)] = -1.0;
            b2[r0 + 1] = xj[static_cast<std::size_t>(i)];
        }
    }
    net.weights.push_back(std::move(w2));
    net.biases.push_back(std::move(b2));
    // Layer 3: bump_j = sigma(1 - L1(x, x_j) / theta).
    std::vector<double> w3(static_cast<std::size_t>(n) * (2 * d * n), 0.0);
    std::vector<double> b3(static_cast<std::size_t>(n), 1.0);
    for (int j = 0; j < n; ++j)
        for (int u = 0; u < 2 * d; ++u)
            w3[static_cast<std::size_t>(j) * (2 * d * n) + static_cast<std::size_t>(j * 2 * d + u)] =
                -1.0 / theta;
    net.weights.push_back(std::move(w3));
    net.biases.push_back(std::move(b3));
    // Output: route bump_j to its label coordinate.
    std::vector<double> w4(static_cast<std::size_t>(l) * n, 0.0);
    for (int j = 0; j < n; ++j)
        w4[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)] - 1) * n +
           static_cast<std::size_t>(j)] = 1.0;
    net.weights.push_back(std::move(w4));
    net.biases.push_back(std::vector<double>(static_cast<std::size_t>(l), 0.0));
    net.validate();
    return net;
}

/// Collapse a (K+1)-output network to a 2-output one whose induced binary
/// hypothesis equals phi of the original: coordinate 1 accumulates
/// sigma(f_i - f_{K+1}) over ID coordinates, coordinate 2 stays at zero.
inline ReluNetwork binary_head_projection(const ReluNetwork& net) {
    net.validate();
    const int kp1 = net.arch.output_dim();
    if (kp1 < 2) throw DomainParameterError("binary_head_projection: output width must be K+1 >= 2");
    const int g = net.arch.depth();
    const int prev = net.arch.widths[static_cast<std::size_t>(g - 2)];

    ReluNetwork out;
    out.arch.widths.assign(net.arch.widths.begin(), net.arch.widths.end() - 1);
    out.arch.widths.push_back(kp1);
    out.arch.widths.push_back(2);
    for (int i = 0; i < g - 2; ++i) {
        out.weights.push_back(net.weights[static_cast<std::size_t>(i)]);
        out.biases.push_back(net.biases[static_cast<std::size_t>(i)]);
    }
    // Fold the difference matrix into the old affine head; the new hidden
    // layer computes sigma(f_i - f_{K+1}) for i <= K and sigma(0).
    const auto& wg = net.weights.back();
    const auto& bg = net.biases.back();
    std::vector<double> wB(static_cast<std::size_t>(kp1) * prev, 0.0);
    std::vector<double> bB(static_cast<std::size_t>(kp1), 0.0);
    for (int i = 0; i < kp1 - 1; ++i) {
        for (int c = 0; c < prev; ++c)
            wB[static_cast<std::size_t>(i) * prev + c] =
                wg[static_cast<std::size_t>(i) * prev + c] -
                wg[static_cast<std::size_t>(kp1 - 1) * prev + c];
        bB[static_cast<std::size_t>(i)] =
            bg[static_cast<std::size_t>(i)] - bg[static_cast<std::size_t>(kp1 - 1)];
    }
    out.weights.push_back(std::move(wB));
    out.biases.push_back(std::move(bB));
    std::vector<double> wM(static_cast<std::size_t>(2) * kp1, 0.0);
    for (int i = 0; i < kp1 - 1; ++i) wM[static_cast<std::size_t>(i)] = 1.0;
    wM[static_cast<std::size_t>(kp1) + kp1 - 1] = 1.0;
    out.weights.push_back(std::move(wM));
    out.biases.push_back(std::vector<double>(2, 0.0));
    out.validate();
    return out;
}

}  // namespace oodlab

#endif
