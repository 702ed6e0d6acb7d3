#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oodlab/auc.hpp"
#include "support/fixtures.hpp"

using namespace oodlab;

namespace {

// D_I uniform{x0,x1}, D_O = delta_{x0}: the hand-enumerated 0.75 fixture.
FiniteDomain quarter_overlap() {
    return FiniteDomain(IdJoint(2, 1, {0.5, 0.5}), OodMarginal({1.0, 0.0}), 0.5);
}

}  // namespace

TEST_CASE("auc basics") {
    const auto d = quarter_overlap();
    RankingFunction constant{{1.0, 1.0}};
    CHECK(auc(constant, d) == doctest::Approx(0.5).epsilon(1e-12));

    // Perfect separation on a separate domain.
    FiniteDomain sep(IdJoint(2, 1, {1.0, 0.0}), OodMarginal({0.0, 1.0}), 0.2);
    RankingFunction perfect{{1.0, 0.0}};
    CHECK(auc(perfect, sep) == 1.0);

    // Both ordered pairs of the 0.75 fixture, counted against the tie rule.
    RankingFunction up{{0.0, 1.0}};
    CHECK(auc(up, d) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("auc ignores the class prior") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto d = fixtures::random_domain(rng, 5, 1, false);
        RankingFunction r;
        for (int i = 0; i < 5; ++i) r.scores.push_back(rng.uniform01());
        const double base = auc(r, d);
        for (double a : {0.0, 0.4, 0.9})
            CHECK(auc(r, mix_alpha(d, a)) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("auc of the negated ranker complements for tie-free rankers") {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const auto d = fixtures::random_domain(rng, 5, 1, false);
        RankingFunction r;
        for (int i = 0; i < 5; ++i) r.scores.push_back(static_cast<double>(i) + (t % 3));
        RankingFunction neg;
        for (double s : r.scores) neg.scores.push_back(-s);
        CHECK(auc(r, d) + auc(neg, d) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    Rng rng(6);
    const auto d = fixtures::random_domain(rng, 4, 1, false);
    RankingFunction r{{0.25, -1.0, 3.0, 0.5}};
    RankingFunction stretched;
    for (double s : r.scores) stretched.scores.push_back(2.0 * s + 3.0);
    CHECK(auc(r, d) == doctest::Approx(auc(stretched, d)).epsilon(1e-12));
    CHECK(auc_equivalent(r, stretched, d));
}

TEST_CASE("sup over a finite ranker set") {
    const auto d = quarter_overlap();
    const auto types = fixtures::all_order_types(2);
    const auto sup = sup_auc(types, d);
    CHECK(sup.value == doctest::Approx(0.75).epsilon(1e-12));

    FiniteDomain sep(IdJoint(2, 1, {1.0, 0.0}), OodMarginal({0.0, 1.0}), 0.2);
    CHECK(sup_auc(types, sep).value == 1.0);

    std::vector<RankingFunction> constants{RankingFunction{{2.0, 2.0}}};
    CHECK(sup_auc(constants, d).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed-form supremum matches hand values") {
    FiniteDomain sep(IdJoint(2, 1, {1.0, 0.0}), OodMarginal({0.0, 1.0}), 0.2);
    CHECK(bayes_sup_auc(sep) == doctest::Approx(1.0).epsilon(1e-12));

    FiniteDomain equal(IdJoint(2, 1, {0.5, 0.5}), OodMarginal({0.5, 0.5}), 0.5);
    CHECK(bayes_sup_auc(equal) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(bayes_sup_auc(quarter_overlap()) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("closed form equals exhaustive order-type search on random domains") {
    Rng rng(8);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + static_cast<int>(rng.below(3));
        const auto d = fixtures::random_domain(rng, n, 1, false);
        const auto types = fixtures::all_order_types(n);
        CHECK(bayes_sup_auc(d) == doctest::Approx(sup_auc(types, d).value).epsilon(1e-12));
    }
}

TEST_CASE("optimal ranker attains the closed form") {
    const auto d = quarter_overlap();
    const auto r = bayes_ranker(d);
    CHECK(r.scores[1] == 1.0);                              // OOD density vanishes there
    CHECK(r.scores[0] == doctest::Approx(sigmoid(0.5)));    // density ratio 0.5 / 1.0
    CHECK(auc(r, d) == doctest::Approx(bayes_sup_auc(d)).epsilon(1e-12));

    FiniteDomain equal(IdJoint(2, 1, {0.5, 0.5}), OodMarginal({0.5, 0.5}), 0.5);
    const auto re = bayes_ranker(equal);
    CHECK(re.scores[0] == doctest::Approx(sigmoid(1.0)));
    CHECK(re.scores[0] == re.scores[1]);

    FiniteDomain sep(IdJoint(2, 1, {1.0, 0.0}), OodMarginal({0.0, 1.0}), 0.2);
    CHECK(bayes_ranker(sep).scores[0] == 1.0);

    // Denominator 16 keeps density ratios below sigmoid saturation, so the
    // induced ordering stays strict where it must be.
    Rng rng(12);
    for (int t = 0; t < 40; ++t) {
        const auto rd = fixtures::random_domain(rng, 4, 1, false, 16);
        CHECK(auc(bayes_ranker(rd), rd) == doctest::Approx(bayes_sup_auc(rd)).epsilon(1e-12));
    }
}

TEST_CASE("closed form dominates every ranker") {
    Rng rng(14);
    for (int t = 0; t < 20; ++t) {
        const auto d = fixtures::random_domain(rng, 4, 1, false);
        const double cap = bayes_sup_auc(d);
        for (const auto& r : fixtures::all_order_types(4)) CHECK(auc(r, d) <= cap + 1e-12);
    }
}

TEST_CASE("auc is linear in the OOD mixture") {
    Rng rng(16);
    for (int t = 0; t < 20; ++t) {
        const auto d1 = fixtures::random_domain(rng, 4, 1, false);
        const auto d2 = fixtures::random_domain(rng, 4, 1, false);
        const auto idm = id_marginal_of(d1);
        RankingFunction r;
        for (int i = 0; i < 4; ++i) r.scores.push_back(rng.uniform01());
        for (double a : {0.25, 0.5, 0.75}) {
            std::vector<double> mixed(4);
            for (int x = 0; x < 4; ++x)
                mixed[static_cast<std::size_t>(x)] =
                    a * d1.ood_part().mass(x) + (1.0 - a) * d2.ood_part().mass(x);
            const double lhs = auc(r, idm, mixed);
            const double rhs = a * auc(r, idm, d1.ood_part().raw()) +
                               (1.0 - a) * auc(r, idm, d2.ood_part().raw());
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("auc equivalence looks only at supported pairs") {
    const auto d = quarter_overlap();
    RankingFunction r1{{0.0, 1.0}};
    RankingFunction r2{{-3.0, 5.0}};
    CHECK(auc_equivalent(r1, r2, d));
    RankingFunction flipped{{1.0, 0.0}};
    CHECK_FALSE(auc_equivalent(r1, flipped, d));

    // Differences off the product support are invisible.
    FiniteDomain corner(IdJoint(3, 1, {1.0, 0.0, 0.0}), OodMarginal({0.0, 1.0, 0.0}), 0.5);
    RankingFunction a{{1.0, 0.0, 7.0}};
    RankingFunction b{{1.0, 0.0, -7.0}};
    CHECK(auc_equivalent(a, b, corner));
}
