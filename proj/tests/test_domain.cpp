#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oodlab/domain.hpp"
#include "support/fixtures.hpp"

using namespace oodlab;

namespace {

FiniteDomain two_atom_domain(double pi = 0.3) {
    // D_I = delta_{(x0, 1)}, D_O = delta_{x1}, K = 1 over three points.
    IdJoint id(3, 1, {1.0, 0.0, 0.0});
    OodMarginal ood({0.0, 1.0, 0.0});
    return FiniteDomain(id, ood, pi);
}

}  // namespace

TEST_CASE("feature space invariants") {
    FeatureSpace X({{0.0, 0.0}, {3.0, 4.0}, {0.0, 1.0}});
    CHECK(X.size() == 3);
    CHECK(X.dim() == 2);
    CHECK(X.d0() == doctest::Approx(1.0));
    CHECK_THROWS_AS(FeatureSpace({{0.0}, {0.0}}), DomainParameterError);
    CHECK_THROWS_AS(FeatureSpace(std::vector<Point>{}), DomainParameterError);
}

TEST_CASE("mass invariants enforced") {
    CHECK_THROWS_AS(IdJoint(2, 1, {0.5, 0.4}), DomainParameterError);
    CHECK_THROWS_AS(OodMarginal({0.5, 0.6}), DomainParameterError);
    CHECK_THROWS_AS(FiniteDomain(IdJoint(1, 1, {1.0}), OodMarginal({1.0}), 1.0),
                    DomainParameterError);
}

TEST_CASE("mix_alpha replaces the prior and keeps the parts") {
    const auto d = two_atom_domain(0.3);
    const auto d0 = mix_alpha(d, 0.0);
    CHECK(d0.pi_out() == 0.0);
    CHECK(d0.id_part().equal_within(d.id_part()));
    CHECK(d0.ood_part().equal_within(d.ood_part()));

    const auto dh = mix_alpha(d, 0.5);
    for (int x = 0; x < d.num_points(); ++x)
        CHECK(dh.mixture_marginal(x) ==
              doctest::Approx(0.5 * d.id_part().marginal(x) + 0.5 * d.ood_part().mass(x))
                  .epsilon(1e-12));

    // Remixing is alpha-independent in the parts.
    const auto twice = mix_alpha(mix_alpha(d, 0.2), 0.7);
    const auto once = mix_alpha(d, 0.7);
    CHECK(twice.id_part().equal_within(once.id_part()));
    CHECK(twice.ood_part().equal_within(once.ood_part()));
    CHECK(twice.pi_out() == once.pi_out());

    CHECK_THROWS_AS(mix_alpha(d, 1.0), DomainParameterError);
    CHECK_THROWS_AS(mix_alpha(d, -0.1), DomainParameterError);
}

TEST_CASE("overlap set and separateness") {
    const auto d = two_atom_domain();
    CHECK(overlap_set(d).empty());
    CHECK(is_separate(d));

    IdJoint id(2, 1, {1.0, 0.0});
    OodMarginal same({1.0, 0.0});
    FiniteDomain coincident(id, same, 0.5);
    CHECK(overlap_set(coincident) == std::vector<int>{0});
    CHECK_FALSE(is_separate(coincident));

    IdJoint uniform(2, 1, {0.5, 0.5});
    FiniteDomain partial(uniform, same, 0.5);
    CHECK(overlap_set(partial) == std::vector<int>{0});

    IdJoint u01(3, 1, {0.5, 0.5, 0.0});
    OodMarginal u12({0.0, 0.5, 0.5});
    CHECK_FALSE(is_separate(FiniteDomain(u01, u12, 0.5)));
}

TEST_CASE("density bounds against a base measure") {
    // Uniform halves over 4 points, base = counting/4, b = 2.
    IdJoint id(4, 1, {0.5, 0.5, 0.0, 0.0});
    OodMarginal ood({0.0, 0.0, 0.5, 0.5});
    FiniteDomain d(id, ood, 0.5);
    const std::vector<double> base(4, 0.25);
    CHECK(check_density_bounds(d, base, 2.0));
    CHECK(check_density_bounds(d, base, 1.0));  // mixture exactly equals base

    IdJoint spike(4, 1, {1.0, 0.0, 0.0, 0.0});
    FiniteDomain peaked(spike, ood, 0.5);
    CHECK_FALSE(check_density_bounds(peaked, base, 2.0));

    // Mixture mass outside the base support is a violation, not an error.
    const std::vector<double> partial_base{0.5, 0.5, 0.0, 0.0};
    CHECK_FALSE(check_density_bounds(d, partial_base, 2.0));
    CHECK_THROWS_AS(check_density_bounds(d, base, 0.5), DomainParameterError);
}

TEST_CASE("sampling is deterministic and distributed") {
    const auto d = two_atom_domain();
    const auto s = sample_id(d, 3, 42);
    REQUIRE(s.size() == 3);
    for (const auto& [x, y] : s) {
        CHECK(x == 0);
        CHECK(y == 1);
    }
    CHECK(sample_id(d, 100, 7) == sample_id(d, 100, 7));

    IdJoint uniform(2, 1, {0.5, 0.5});
    FiniteDomain u(uniform, OodMarginal({0.0, 1.0}), 0.0);
    const auto big = sample_id(u, 10000, 11);
    int count0 = 0;
    for (const auto& [x, y] : big) count0 += x == 0;
    CHECK(std::abs(count0 / 10000.0 - 0.5) < 0.05);
}

TEST_CASE("equivalence keys track the ID part only") {
    const auto d = two_atom_domain(0.3);
    CHECK(id_equivalence_key(d) == id_equivalence_key(mix_alpha(d, 0.9)));

    IdJoint label1(1, 2, {1.0, 0.0});
    IdJoint label2(1, 2, {0.0, 1.0});
    OodMarginal o({1.0});
    CHECK(id_equivalence_key(FiniteDomain(label1, o, 0.1)) !=
          id_equivalence_key(FiniteDomain(label2, o, 0.1)));

    // Keys are invariant to how the mass table was assembled.
    IdJoint a(2, 1, {0.25, 0.75});
    IdJoint b(2, 1, {0.25, 0.75});
    CHECK(id_equivalence_key(FiniteDomain(a, OodMarginal({1.0, 0.0}), 0.2)) ==
          id_equivalence_key(FiniteDomain(b, OodMarginal({0.0, 1.0}), 0.8)));

    // Sub-tolerance wobble rounds away in the key encoding.
    IdJoint wobble(2, 1, {0.25 + 2e-13, 0.75 - 2e-13});
    CHECK(id_equivalence_key(FiniteDomain(wobble, OodMarginal({1.0, 0.0}), 0.2)) ==
          id_equivalence_key(FiniteDomain(a, OodMarginal({1.0, 0.0}), 0.2)));
}

TEST_CASE("domain space membership is closed under remixing") {
    Rng rng(5);
    DomainSpaceSpec sep;
    sep.kind = DomainSpaceKind::Separate;
    sep.members.push_back(fixtures::random_domain(rng, 4, 1, true));
    sep.validate();
    for (const auto& d : sep.members)
        for (int i = 0; i < 10; ++i) CHECK(sep.contains(mix_alpha(d, i / 10.0)));

    DomainSpaceSpec dens;
    dens.kind = DomainSpaceKind::DensityBased;
    dens.base_weights = {0.25, 0.25, 0.25, 0.25};
    dens.density_bound = 2.0;
    IdJoint id(4, 1, {0.5, 0.5, 0.0, 0.0});
    OodMarginal ood({0.0, 0.0, 0.5, 0.5});
    dens.members.emplace_back(id, ood, 0.3);
    dens.validate();
    for (int i = 0; i < 10; ++i) CHECK(dens.contains(mix_alpha(dens.members[0], i / 10.0)));

    DomainSpaceSpec fin;
    fin.kind = DomainSpaceKind::FiniteID;
    fin.id_list.push_back(id);
    fin.members.emplace_back(id, ood, 0.3);
    fin.validate();
    for (int i = 0; i < 10; ++i) CHECK(fin.contains(mix_alpha(fin.members[0], i / 10.0)));

    DomainSpaceSpec dup;
    dup.kind = DomainSpaceKind::FiniteID;
    dup.id_list = {id, id};
    CHECK_THROWS_AS(dup.validate(), DomainParameterError);
}

TEST_CASE("random domains satisfy the mixture identity") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        const auto d = fixtures::random_domain(rng, 5, 2, false);
        for (int x = 0; x < d.num_points(); ++x) {
            const double lhs = d.mixture_marginal(x, 0.3);
            const double rhs = 0.7 * d.id_part().marginal(x) + 0.3 * d.ood_part().mass(x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
        CHECK(is_separate(d) == overlap_set(d).empty());
    }
}
