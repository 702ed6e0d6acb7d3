#ifndef OODLAB_HYPOTHESIS_HPP
#define OODLAB_HYPOTHESIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oodlab/common.hpp"
#include "oodlab/domain.hpp"

namespace oodlab {

/// Total label assignment X -> {1..K+1}; the reject label is K+1.
struct Hypothesis {
    std::vector<int> labels;  // labels[x] in 1..K+1
    int k = 1;

    int operator()(int x) const { return labels[static_cast<std::size_t>(x)]; }
    int num_points() const { return static_cast<int>(labels.size()); }

    bool operator==(const Hypothesis& o) const { return k == o.k && labels == o.labels; }
    bool operator<(const Hypothesis& o) const { return labels < o.labels; }
};

inline Hypothesis constant_hypothesis(int num_points, int k, int label) {
    return Hypothesis{std::vector<int>(static_cast<std::size_t>(num_points), label), k};
}

enum class Provenance { Explicit, Exhaustive, FcnnInduced, ScoreInduced, Composed };

/// A finite duplicate-free collection of hypotheses over one X with one K.
class HypothesisSpace {
public:
    HypothesisSpace(std::vector<Hypothesis> members, Provenance prov = Provenance::Explicit)
        : prov_(prov) {
        if (members.empty()) throw DomainParameterError("hypothesis space must be non-empty");
        k_ = members[0].k;
        num_points_ = members[0].num_points();
        std::set<std::vector<int>> seen;
        for (auto& h : members) {
            if (h.k != k_ || h.num_points() != num_points_)
                throw DomainParameterError("all members must share X and K");
            for (int lab : h.labels)
                if (lab < 1 || lab > k_ + 1)
                    throw DomainParameterError("label out of range 1..K+1");
            if (seen.insert(h.labels).second) members_.push_back(std::move(h));
        }
        if (members_.size() > kSpaceCap) throw SizeCapError("hypothesis space exceeds the enumeration cap");
    }

    const std::vector<Hypothesis>& members() const { return members_; }
    const Hypothesis& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(members_.size()); }
    int k() const { return k_; }
    int num_points() const { return num_points_; }
    Provenance provenance() const { return prov_; }

    bool contains(const Hypothesis& h) const {
        for (const auto& m : members_)
            if (m == h) return true;
        return false;
    }

private:
    std::vector<Hypothesis> members_;
    int k_ = 1;
    int num_points_ = 0;
    Provenance prov_ = Provenance::Explicit;
};

inline int phi_label(int label, int k) { return label <= k ? 1 : 2; }

/// Project every member through phi (ID labels -> 1, reject -> 2), dedup.
inline HypothesisSpace phi_project(const HypothesisSpace& space) {
    std::vector<Hypothesis> out;
    out.reserve(static_cast<std::size_t>(space.size()));
    for (const auto& h : space.members()) {
        Hypothesis b;
        b.k = 1;
        b.labels.reserve(h.labels.size());
        for (int lab : h.labels) b.labels.push_back(phi_label(lab, space.k()));
        out.push_back(std::move(b));
    }
    return HypothesisSpace(std::move(out), space.provenance());
}

/// All h with h(x) = h_in(x) where h_b(x) = 1 and h(x) = K+1 elsewhere.
inline HypothesisSpace bullet_compose(const HypothesisSpace& h_in_space,
                                      const HypothesisSpace& h_b_space) {
    if (h_b_space.k() != 1) throw DomainParameterError("bullet_compose: binary space must have K=1");
    if (h_in_space.num_points() != h_b_space.num_points())
        throw DomainParameterError("bullet_compose: spaces must share X");
    const int k = h_in_space.k();
    for (const auto& h : h_in_space.members())
        for (int lab : h.labels)
            if (lab > k) throw DomainParameterError("bullet_compose: ID space may not use the reject label");
    std::vector<Hypothesis> out;
    out.reserve(static_cast<std::size_t>(h_in_space.size()) * h_b_space.size());
    for (const auto& hin : h_in_space.members())
        for (const auto& hb : h_b_space.members()) {
            Hypothesis h;
            h.k = k;
            h.labels.resize(hin.labels.size());
            for (std::size_t x = 0; x < hin.labels.size(); ++x)
                h.labels[x] = hb.labels[x] == 1 ? hin.labels[x] : k + 1;
            out.push_back(std::move(h));
        }
    return HypothesisSpace(std::move(out), Provenance::Composed);
}

/// All (K+1)^|X| total labelings.
inline HypothesisSpace exhaustive_space(int num_points, int k) {
    double count = std::pow(static_cast<double>(k + 1), num_points);
    if (count > static_cast<double>(kSpaceCap))
        throw SizeCapError("exhaustive space exceeds the enumeration cap");
    std::vector<Hypothesis> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> labels(static_cast<std::size_t>(num_points), 1);
    for (;;) {
        out.push_back(Hypothesis{labels, k});
        int i = num_points - 1;
        while (i >= 0 && labels[static_cast<std::size_t>(i)] == k + 1) {
            labels[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++labels[static_cast<std::size_t>(i)];
    }
    return HypothesisSpace(std::move(out), Provenance::Exhaustive);
}

namespace detail {

// Distinct binary restriction patterns on `subset`, encoded as bitmasks
// (bit j set iff label at subset[j] is 2).
inline std::set<std::uint32_t> binary_patterns(const HypothesisSpace& space,
                                               const std::vector<int>& subset) {
    std::set<std::uint32_t> pats;
    for (const auto& h : space.members()) {
        std::uint32_t m = 0;
        for (std::size_t j = 0; j < subset.size(); ++j)
            if (h(subset[j]) == 2) m |= (1u << j);
        pats.insert(m);
    }
    return pats;
}

template <typename Fn>
inline bool any_subset_of_size(int n, int m, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
        if (fn(idx)) return true;
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace detail

/// Largest m such that some m-subset of X is shattered, by exhaustive search.
inline int vc_dimension(const HypothesisSpace& space) {
    if (space.k() != 1) throw DomainParameterError("vc_dimension: space must be binary");
    if (space.num_points() > 24) throw SizeCapError("vc_dimension: |X| must be <= 24");
    const int n = space.num_points();
    int max_m = 0;
    {
        std::size_t sz = space.members().size();
        while ((1ull << (max_m + 1)) <= sz && max_m + 1 <= n) ++max_m;
    }
    int vc = 0;
    for (int m = 1; m <= max_m; ++m) {
        const bool found = detail::any_subset_of_size(n, m, [&](const std::vector<int>& subset) {
            return detail::binary_patterns(space, subset).size() == (1ull << m);
        });
        if (!found) break;
        vc = m;
    }
    return vc;
}

namespace detail {

// Patterns over `subset` encoded base-(K+1).
inline std::set<std::uint64_t> multiclass_patterns(const HypothesisSpace& space,
                                                   const std::vector<int>& subset) {
    std::set<std::uint64_t> pats;
    const std::uint64_t base = static_cast<std::uint64_t>(space.k()) + 1;
    for (const auto& h : space.members()) {
        std::uint64_t code = 0;
        for (int p : subset) code = code * base + static_cast<std::uint64_t>(h(p) - 1);
        pats.insert(code);
    }
    return pats;
}

// Natarajan shattering of one subset: two pointwise-distinct witness
// labelings f1, f2 such that every {f1,f2}-mixture pattern is realized.
inline bool natarajan_witness_search(const std::set<std::uint64_t>& pats,
                                     const std::vector<std::vector<std::pair<int, int>>>& pairs,
                                     const std::vector<std::uint64_t>& place,
                                     std::vector<std::pair<int, int>>& choice, int depth, int m) {
    if (depth == m) {
        for (std::uint64_t t = 0; t < (1ull << m); ++t) {
            std::uint64_t code = 0;
            for (int i = 0; i < m; ++i) {
                const auto& c = choice[static_cast<std::size_t>(i)];
                const int lab = ((t >> (m - 1 - i)) & 1) ? c.first : c.second;
                code += place[static_cast<std::size_t>(i)] * static_cast<std::uint64_t>(lab - 1);
            }
            if (pats.count(code) == 0) return false;
        }
        return true;
    }
    for (const auto& c : pairs[static_cast<std::size_t>(depth)]) {
        choice[static_cast<std::size_t>(depth)] = c;
        if (natarajan_witness_search(pats, pairs, place, choice, depth + 1, m)) return true;
    }
    return false;
}

inline bool natarajan_shattered(const std::set<std::uint64_t>& pats,
                                const std::vector<std::vector<int>>& values_at, int m, int k) {
    if (pats.size() < (1ull << m)) return false;
    const std::uint64_t base = static_cast<std::uint64_t>(k) + 1;
    std::vector<std::uint64_t> place(static_cast<std::size_t>(m));
    std::uint64_t p = 1;
    for (int i = m - 1; i >= 0; --i) {
        place[static_cast<std::size_t>(i)] = p;
        p *= base;
    }
    std::vector<std::vector<std::pair<int, int>>> pairs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        for (int a : values_at[static_cast<std::size_t>(i)])
            for (int b : values_at[static_cast<std::size_t>(i)])
                if (a != b) pairs[static_cast<std::size_t>(i)].emplace_back(a, b);
        if (pairs[static_cast<std::size_t>(i)].empty()) return false;
    }
    std::vector<std::pair<int, int>> choice(static_cast<std::size_t>(m));
    return natarajan_witness_search(pats, pairs, place, choice, 0, m);
}

}  // namespace detail

/// Brute-force Natarajan dimension (two witness labelings per subset).
inline int natarajan_dimension(const HypothesisSpace& space) {
    if (space.num_points() > 16) throw SizeCapError("natarajan_dimension: |X| must be <= 16");
    const int n = space.num_points();
    int max_m = 0;
    {
        std::size_t sz = space.members().size();
        while ((1ull << (max_m + 1)) <= sz && max_m + 1 <= n) ++max_m;
    }
    int nat = 0;
    for (int m = 1; m <= max_m; ++m) {
        const bool found = detail::any_subset_of_size(n, m, [&](const std::vector<int>& subset) {
            auto pats = detail::multiclass_patterns(space, subset);
            std::vector<std::vector<int>> values_at(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) {
                std::set<int> vals;
                for (const auto& h : space.members()) vals.insert(h(subset[static_cast<std::size_t>(i)]));
                values_at[static_cast<std::size_t>(i)].assign(vals.begin(), vals.end());
            }
            return detail::natarajan_shattered(pats, values_at, m, space.k());
        });
        if (!found) break;
        nat = m;
    }
    return nat;
}

/// Sum_{i=0..v} C(m+1, i), the growth bound for a VC-v class on m+1 points.
inline unsigned long long sauer_bound(int v, int m) {
    if (v < 0 || m < 0) throw DomainParameterError("sauer_bound: v, m must be >= 0");
    const int rows = m + 2;
    std::vector<unsigned long long> binom(static_cast<std::size_t>(rows), 0);
    binom[0] = 1;
    for (int r = 1; r <= m + 1; ++r)
        for (int c = r; c >= 1; --c) binom[static_cast<std::size_t>(c)] += binom[static_cast<std::size_t>(c - 1)];
    unsigned long long total = 0;
    for (int i = 0; i <= std::min(v, m + 1); ++i) total += binom[static_cast<std::size_t>(i)];
    return total;
}

/// Every point can be rejected by some member.
inline bool check_separate_assumption(const HypothesisSpace& space) {
    for (int x = 0; x < space.num_points(); ++x) {
        bool ok = false;
        for (const auto& h : space.members())
            if (h(x) == space.k() + 1) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

struct RankingFunction {
    std::vector<double> scores;

    double operator()(int x) const { return scores[static_cast<std::size_t>(x)]; }
    int num_points() const { return static_cast<int>(scores.size()); }

    bool operator==(const RankingFunction& o) const { return scores == o.scores; }
};

/// Every point admits a member ranking it strictly below all others.
inline bool check_separate_ranking(const std::vector<RankingFunction>& space) {
    if (space.empty()) return false;
    const int n = space[0].num_points();
    for (int x = 0; x < n; ++x) {
        bool ok = false;
        for (const auto& r : space) {
            bool strict_min = true;
            for (int x2 = 0; x2 < n && strict_min; ++x2)
                if (x2 != x && !(r(x) < r(x2))) strict_min = false;
            if (strict_min) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

/// Every constant in the designated pool appears as a constant member.
/// The pool is explicit; an empty pool holds vacuously.
inline bool check_constant_closure(const std::vector<RankingFunction>& space,
                                   const std::vector<double>& constant_pool) {
    for (double c : constant_pool) {
        bool found = false;
        for (const auto& r : space) {
            bool is_const = true;
            for (double s : r.scores)
                if (s != c) {
                    is_const = false;
                    break;
                }
            if (is_const) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace oodlab

#endif
