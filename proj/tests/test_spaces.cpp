#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oodlab/hypothesis.hpp"
#include "support/fixtures.hpp"

using namespace oodlab;

namespace {

// The 1-D threshold family h_t(x) = 1 iff x >= t over n collinear points,
// one member per cut (includes all-accept and all-reject).
HypothesisSpace threshold_family(int n) {
    std::vector<Hypothesis> members;
    for (int cut = 0; cut <= n; ++cut) {
        Hypothesis h;
        h.k = 1;
        for (int x = 0; x < n; ++x) h.labels.push_back(x >= cut ? 1 : 2);
        members.push_back(std::move(h));
    }
    return HypothesisSpace(std::move(members));
}

}  // namespace

TEST_CASE("phi projection collapses ID labels") {
    const int k = 2;
    HypothesisSpace space({constant_hypothesis(2, k, 1), constant_hypothesis(2, k, 2),
                           constant_hypothesis(2, k, 3)});
    const auto binary = phi_project(space);
    CHECK(binary.size() == 2);  // labels 1 and 2 merge
    CHECK(binary.k() == 1);

    HypothesisSpace reject_only({constant_hypothesis(3, 2, 3)});
    const auto proj = phi_project(reject_only);
    CHECK(proj.size() == 1);
    CHECK(proj.member(0) == constant_hypothesis(3, 1, 2));

    const auto all = exhaustive_space(2, 2);
    CHECK(phi_project(all).size() == 4);
}

TEST_CASE("bullet composition") {
    const int k = 2;
    std::vector<Hypothesis> ins;
    for (int y : {1, 2}) ins.push_back(constant_hypothesis(2, k, y));
    HypothesisSpace h_in(ins);

    HypothesisSpace accept_all({constant_hypothesis(2, 1, 1)});
    const auto same = bullet_compose(h_in, accept_all);
    CHECK(same.size() == h_in.size());
    for (const auto& h : h_in.members()) CHECK(same.contains(h));

    HypothesisSpace reject_all({constant_hypothesis(2, 1, 2)});
    const auto rejected = bullet_compose(h_in, reject_all);
    CHECK(rejected.size() == 1);
    CHECK(rejected.member(0) == constant_hypothesis(2, k, 3));

    const auto hb = exhaustive_space(2, 1);
    const auto composed = bullet_compose(h_in, hb);
    CHECK(composed.size() <= h_in.size() * hb.size());
    // Direct enumeration of the rule.
    std::set<std::vector<int>> expect;
    for (const auto& hi : h_in.members())
        for (const auto& hb1 : hb.members()) {
            std::vector<int> lab(2);
            for (int x = 0; x < 2; ++x) lab[static_cast<std::size_t>(x)] =
                hb1(x) == 1 ? hi(x) : k + 1;
            expect.insert(lab);
        }
    CHECK(composed.size() == static_cast<int>(expect.size()));
    for (const auto& h : composed.members()) CHECK(expect.count(h.labels) == 1);

    // ID space must not use the reject label.
    HypothesisSpace bad({constant_hypothesis(2, 2, 3)});
    CHECK_THROWS_AS(bullet_compose(bad, hb), DomainParameterError);
}

TEST_CASE("exhaustive space sizes") {
    CHECK(exhaustive_space(1, 1).size() == 2);
    CHECK(exhaustive_space(3, 1).size() == 8);
    CHECK(exhaustive_space(2, 2).size() == 9);
    CHECK_THROWS_AS(exhaustive_space(30, 2), SizeCapError);
}

TEST_CASE("vc dimension by shattering search") {
    for (int m : {1, 2, 3}) CHECK(vc_dimension(exhaustive_space(m, 1)) == m);
    CHECK(vc_dimension(HypothesisSpace({constant_hypothesis(3, 1, 1)})) == 0);
    CHECK(vc_dimension(threshold_family(3)) == 1);
    CHECK_THROWS_AS(vc_dimension(exhaustive_space(2, 2)), DomainParameterError);
}

TEST_CASE("dimension searches enforce their size caps") {
    std::vector<Hypothesis> big25{constant_hypothesis(25, 1, 1), constant_hypothesis(25, 1, 2)};
    CHECK_THROWS_AS(vc_dimension(HypothesisSpace(big25)), SizeCapError);
    std::vector<Hypothesis> big17{constant_hypothesis(17, 1, 1), constant_hypothesis(17, 1, 2)};
    CHECK_THROWS_AS(natarajan_dimension(HypothesisSpace(big17)), SizeCapError);
}

TEST_CASE("natarajan dimension") {
    // Binary spaces: equals the VC dimension.
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
        const auto space = fixtures::random_space(rng, 4, 1, 6);
        CHECK(natarajan_dimension(space) == vc_dimension(space));
    }
    for (int m : {1, 2}) CHECK(natarajan_dimension(exhaustive_space(m, 2)) == m);
    CHECK(natarajan_dimension(exhaustive_space(3, 1)) == 3);
    CHECK(natarajan_dimension(HypothesisSpace({constant_hypothesis(3, 2, 2)})) == 0);
}

TEST_CASE("growth bound arithmetic") {
    CHECK(sauer_bound(0, 5) == 1);
    CHECK(sauer_bound(2, 4) == 16);  // 1 + 5 + 10
    CHECK(sauer_bound(7, 6) == 128); // v >= m+1: the full power 2^{m+1}
    CHECK(sauer_bound(3, 2) == 8);

    // Sauer consequence: VC <= log2 |members|.
    Rng rng(33);
    for (int t = 0; t < 10; ++t) {
        const auto space = fixtures::random_space(rng, 5, 1, 12);
        CHECK((1ull << vc_dimension(space)) <= static_cast<unsigned long long>(space.size()));
    }
}

TEST_CASE("phi projection never raises the vc dimension") {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        const auto space = fixtures::random_space(rng, 4, 2, 10);
        const auto binary = phi_project(space);
        // Any shattered set for the projection is shattered through phi.
        CHECK(vc_dimension(binary) <= natarajan_dimension(space) + 4);  // coarse sanity
        CHECK(vc_dimension(binary) <= std::log2(space.size()) + 1e-9);
    }
}

TEST_CASE("composed exhaustive rejection spans all binary patterns") {
    // One total ID labeling composed with every binary gate projects onto
    // every accept/reject pattern.
    HypothesisSpace h_in({constant_hypothesis(2, 2, 1)});
    const auto hb = exhaustive_space(2, 1);
    const auto composed = bullet_compose(h_in, hb);
    const auto binary = phi_project(composed);
    CHECK(binary.size() == 4);
    CHECK(vc_dimension(binary) == 2);
}

TEST_CASE("separate-space assumptions") {
    CHECK(check_separate_assumption(exhaustive_space(3, 1)));
    CHECK(check_separate_assumption(HypothesisSpace({constant_hypothesis(3, 1, 2)})));
    CHECK_FALSE(check_separate_assumption(HypothesisSpace({constant_hypothesis(3, 1, 1)})));
}

TEST_CASE("separate ranking spaces") {
    // Per-point isolating rankers.
    std::vector<RankingFunction> isolating;
    for (int x = 0; x < 3; ++x) {
        RankingFunction r;
        for (int i = 0; i < 3; ++i) r.scores.push_back(i == x ? -1.0 : 0.0);
        isolating.push_back(std::move(r));
    }
    CHECK(check_separate_ranking(isolating));

    std::vector<RankingFunction> constants{RankingFunction{{1.0, 1.0, 1.0}}};
    CHECK_FALSE(check_separate_ranking(constants));

    // Linear rankers on a 1-D grid never put the middle point strictly last.
    std::vector<RankingFunction> linear;
    for (double a : {-2.0, -1.0, 0.0, 1.0, 2.0})
        linear.push_back(RankingFunction{{a * 0.0, a * 1.0, a * 2.0}});
    CHECK_FALSE(check_separate_ranking(linear));
}

namespace {

// Reference shattering checks, written independently of the library's
// search: enumerate candidate witnesses as raw label vectors.
bool naive_shattered_binary(const HypothesisSpace& space, const std::vector<int>& subset) {
    const int m = static_cast<int>(subset.size());
    for (int pattern = 0; pattern < (1 << m); ++pattern) {
        bool realized = false;
        for (const auto& h : space.members()) {
            bool match = true;
            for (int i = 0; i < m && match; ++i) {
                const int want = (pattern >> i) & 1 ? 2 : 1;
                if (h(subset[static_cast<std::size_t>(i)]) != want) match = false;
            }
            if (match) realized = true;
        }
        if (!realized) return false;
    }
    return true;
}

int naive_vc(const HypothesisSpace& space) {
    const int n = space.num_points();
    int best = 0;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> subset;
        for (int x = 0; x < n; ++x)
            if (mask & (1 << x)) subset.push_back(x);
        if (naive_shattered_binary(space, subset)) best = std::max(best, static_cast<int>(subset.size()));
    }
    return best;
}

int naive_natarajan(const HypothesisSpace& space) {
    const int n = space.num_points();
    const int l = space.k() + 1;
    int best = 0;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> subset;
        for (int x = 0; x < n; ++x)
            if (mask & (1 << x)) subset.push_back(x);
        const int m = static_cast<int>(subset.size());
        // All pairs of witness labelings on the subset.
        long long total = 1;
        for (int i = 0; i < m; ++i) total *= l;
        bool shattered = false;
        for (long long f1 = 0; f1 < total && !shattered; ++f1)
            for (long long f2 = 0; f2 < total && !shattered; ++f2) {
                std::vector<int> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
                long long u = f1, v = f2;
                bool distinct = true;
                for (int i = 0; i < m; ++i) {
                    a[static_cast<std::size_t>(i)] = 1 + static_cast<int>(u % l);
                    b[static_cast<std::size_t>(i)] = 1 + static_cast<int>(v % l);
                    if (a[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(i)]) distinct = false;
                    u /= l;
                    v /= l;
                }
                if (!distinct) continue;
                bool all_mixtures = true;
                for (int t = 0; t < (1 << m) && all_mixtures; ++t) {
                    bool realized = false;
                    for (const auto& h : space.members()) {
                        bool match = true;
                        for (int i = 0; i < m && match; ++i) {
                            const int want = (t >> i) & 1 ? a[static_cast<std::size_t>(i)]
                                                          : b[static_cast<std::size_t>(i)];
                            if (h(subset[static_cast<std::size_t>(i)]) != want) match = false;
                        }
                        if (match) realized = true;
                    }
                    all_mixtures = realized;
                }
                shattered = all_mixtures;
            }
        if (shattered) best = std::max(best, m);
    }
    return best;
}

}  // namespace

TEST_CASE("dimension searches agree with naive references") {
    Rng rng(77);
    for (int t = 0; t < 25; ++t) {
        const auto binary = fixtures::random_space(rng, 4, 1, 3 + static_cast<int>(rng.below(10)));
        CHECK(vc_dimension(binary) == naive_vc(binary));
        CHECK(natarajan_dimension(binary) == naive_natarajan(binary));
    }
    for (int t = 0; t < 15; ++t) {
        const auto multi = fixtures::random_space(rng, 3, 2, 3 + static_cast<int>(rng.below(12)));
        CHECK(natarajan_dimension(multi) == naive_natarajan(multi));
    }
}

TEST_CASE("constant closure against an explicit pool") {
    std::vector<RankingFunction> space{RankingFunction{{0.0, 0.0}}, RankingFunction{{1.0, 1.0}},
                                       RankingFunction{{0.0, 1.0}}};
    CHECK(check_constant_closure(space, {0.0, 1.0}));
    CHECK_FALSE(check_constant_closure(space, {0.5}));
    std::vector<RankingFunction> no_constants{RankingFunction{{0.0, 1.0}}};
    CHECK_FALSE(check_constant_closure(no_constants, {0.0}));
    CHECK(check_constant_closure(no_constants, {}));
}
