#include <doctest.h>

#include "support/gen.hpp"
#include "twk/error.hpp"
#include "twk/typed.hpp"

using namespace twk;

namespace {

TypeDStructure one_gen(const AlgebraPtr& alg, const std::string& name, int idem) {
    TypeDStructure n;
    n.alg = alg;
    n.gens.push_back({name, idem});
    return n;
}

} // namespace

TEST_CASE("check_structure catches idempotent-labeled loops") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    n.add_arrow(0, 0, element_from_names(*t, {"i0"}));
    CheckReport r = check_structure(n);
    CHECK(!r.ok());  // i0 . i0 = i0 != 0
}

TEST_CASE("check_structure accepts an fg loop") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    n.add_arrow(0, 0, element_from_names(*t, {"fg"}));
    CHECK(check_structure(n).ok());  // fg . fg contains gf = 0
}

TEST_CASE("check_structure on the empty structure") {
    TypeDStructure n;
    n.alg = torus_algebra();
    CHECK(check_structure(n).ok());
}

TEST_CASE("idempotent compatibility is reported") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    n.gens.push_back({"y", 0});
    n.add_arrow(0, 1, element_from_names(*t, {"f"}));  // f targets i1, y sits at i0
    CHECK(!check_structure(n).ok());
}

TEST_CASE("morphism unit laws and zero composition") {
    gen::Rng rng(11);
    auto alg = strand_algebra_torus();
    TypeDStructure n = gen::random_structure(rng, alg, 4, "n");
    TypeDStructure m = gen::random_structure(rng, alg, 4, "m");
    TypeDMorphism phi = gen::random_closed_morphism(rng, n, m);
    CHECK(compose_morphisms(phi, identity_morphism(m)) == phi);
    CHECK(compose_morphisms(identity_morphism(n), phi) == phi);
    CHECK(compose_morphisms(zero_morphism(m, n), phi).comps.empty());
}

TEST_CASE("composition of closed morphisms is closed") {
    gen::Rng rng(12);
    for (auto alg : {torus_algebra(), strand_algebra_torus(), trivial_algebra()}) {
        for (int trial = 0; trial < 25; ++trial) {
            TypeDStructure a = gen::random_structure(rng, alg, 4, "a");
            TypeDStructure b = gen::random_structure(rng, alg, 4, "b");
            TypeDStructure c = gen::random_structure(rng, alg, 4, "c");
            TypeDMorphism phi = gen::random_closed_morphism(rng, a, b);
            TypeDMorphism psi = gen::random_closed_morphism(rng, b, c);
            CHECK(is_closed(compose_morphisms(phi, psi)));
        }
    }
}

TEST_CASE("cone of the identity is contractible") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    TypeDStructure c = cone(identity_morphism(n));
    CHECK(c.gens.size() == 2);
    CHECK(c.arrows.size() == 1);
    CHECK(is_contractible(c));
}

TEST_CASE("cone of zero is the direct sum") {
    gen::Rng rng(13);
    auto alg = torus_algebra();
    TypeDStructure a = gen::random_structure(rng, alg, 3, "a");
    TypeDStructure b = gen::random_structure(rng, alg, 3, "b");
    TypeDStructure c = cone(zero_morphism(a, b));
    std::map<std::string, std::string> names;
    for (const auto& g : a.gens) names[g.name] = "0." + g.name;
    for (const auto& g : b.gens) names[g.name] = "1." + g.name;
    TypeDStructure sum = rename_generators(direct_sum(a, b), names);
    CHECK(c == sum);
}

TEST_CASE("cone rejects non-closed morphisms") {
    auto t = torus_algebra();
    TypeDStructure src = one_gen(t, "x", 0);
    TypeDStructure tgt;
    tgt.alg = t;
    tgt.gens.push_back({"y", 1});
    tgt.gens.push_back({"z", 0});
    tgt.add_arrow(0, 1, element_from_names(*t, {"g"}));
    TypeDMorphism phi{src, tgt, {}};
    comp_put(phi.comps, {0, 0}, element_from_names(*t, {"f"}));  // d(phi) has an fg term
    CHECK(!is_closed(phi));
    CHECK_THROWS_AS((void)cone(phi), Error);
}

TEST_CASE("cone of closed morphisms passes check_structure") {
    gen::Rng rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        auto alg = trial % 2 ? torus_algebra() : strand_algebra_torus();
        TypeDStructure a = gen::random_structure(rng, alg, 4, "a");
        TypeDStructure b = gen::random_structure(rng, alg, 4, "b");
        TypeDMorphism phi = gen::random_closed_morphism(rng, a, b);
        CHECK(check_structure(cone(phi)).ok());
    }
}

TEST_CASE("reduce cancels a contractible cone to zero") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    ReduceResult r = reduce(cone(identity_morphism(n)));
    CHECK(r.reduced.gens.empty());
}

TEST_CASE("reduce leaves a reduced structure unchanged") {
    auto t = torus_algebra();
    TypeDStructure n = one_gen(t, "x", 0);
    n.gens.push_back({"y", 1});
    n.add_arrow(0, 1, element_from_names(*t, {"f"}));
    ReduceResult r = reduce(n);
    CHECK(r.reduced == n);
    CHECK(compose_morphisms(r.backward, r.forward) == identity_morphism(r.reduced));
}

TEST_CASE("reduce emits genuine homotopy equivalences") {
    gen::Rng rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        auto alg = trial % 2 ? torus_algebra() : trivial_algebra();
        TypeDStructure n = gen::random_structure(rng, alg, 5, "n");
        ReduceResult r = reduce(n);
        CHECK(check_structure(r.reduced).ok());
        CHECK(is_closed(r.forward));
        CHECK(is_closed(r.backward));
        // forward then backward is homotopic to the identity via the emitted
        // homotopy; the other composite is the identity on the nose.
        CHECK(homotopy_check(r.homotopy, compose_morphisms(r.forward, r.backward),
                             identity_morphism(n)));
        CHECK(compose_morphisms(r.backward, r.forward) == identity_morphism(r.reduced));
        // No idempotent component survives.
        for (const auto& [k, coeff] : r.reduced.arrows) {
            int e = alg->idempotent_of_vertex(r.reduced.gens[k.first].idem);
            CHECK(!coeff.get(std::size_t(e)));
        }
        CHECK(equivalent(n, r.reduced));
    }
}

TEST_CASE("reduce handles mixed idempotent-plus-nilpotent coefficients") {
    auto t = torus_algebra();
    TypeDStructure n;
    n.alg = t;
    n.gens.push_back({"x", 0});
    n.gens.push_back({"y", 0});
    n.add_arrow(0, 1, element_from_names(*t, {"i0", "fg"}));
    REQUIRE(check_structure(n).ok());
    ReduceResult r = reduce(n);
    CHECK(r.reduced.gens.empty());
    CHECK(homotopy_check(r.homotopy, compose_morphisms(r.forward, r.backward),
                         identity_morphism(n)));
}

TEST_CASE("is_homotopy_equivalence") {
    gen::Rng rng(16);
    auto alg = torus_algebra();
    TypeDStructure n = gen::random_structure(rng, alg, 4, "n");
    CHECK(is_homotopy_equivalence(identity_morphism(n)));
    // Zero between nonzero reduced structures is not an equivalence.
    auto t = torus_algebra();
    TypeDStructure a = one_gen(t, "x", 0);
    TypeDStructure b = one_gen(t, "y", 1);
    CHECK(!is_homotopy_equivalence(zero_morphism(a, b)));
}

TEST_CASE("homotopy_check basics") {
    gen::Rng rng(17);
    auto alg = strand_algebra_torus();
    TypeDStructure a = gen::random_structure(rng, alg, 4, "a");
    TypeDStructure b = gen::random_structure(rng, alg, 4, "b");
    TypeDMorphism phi = gen::random_closed_morphism(rng, a, b);
    CHECK(homotopy_check(zero_morphism(a, b), phi, phi));
    auto basis = closed_morphism_basis(a, b);
    if (!basis.empty()) {
        TypeDMorphism psi = add_morphisms(phi, TypeDMorphism{a, b, basis.front()});
        if (!(psi == phi)) CHECK(!homotopy_check(zero_morphism(a, b), phi, psi));
    }
    CHECK_THROWS_AS((void)homotopy_check(zero_morphism(b, a), phi, phi), Error);
}

TEST_CASE("equivalent: contractible summands do not matter") {
    gen::Rng rng(18);
    auto alg = torus_algebra();
    TypeDStructure n = gen::random_structure(rng, alg, 4, "n");
    TypeDStructure padded = direct_sum(n, cone(identity_morphism(one_gen(alg, "pad", 1))));
    CHECK(equivalent(n, padded));
    CHECK(equivalent(n, n));
}

TEST_CASE("equivalent distinguishes arrow labels") {
    auto s = strand_algebra_torus();
    TypeDStructure a;
    a.alg = s;
    a.gens.push_back({"p", 0});
    a.gens.push_back({"q", 1});
    a.add_arrow(0, 1, element_from_names(*s, {"rho3"}));
    TypeDStructure b;
    b.alg = s;
    b.gens.push_back({"r", 0});
    b.gens.push_back({"t", 1});
    b.add_arrow(0, 1, element_from_names(*s, {"rho1"}));
    CHECK(!equivalent(a, b));
    CHECK(equivalent(a, a));
}

TEST_CASE("equivalent requires matching algebras") {
    TypeDStructure a;
    a.alg = torus_algebra();
    TypeDStructure b;
    b.alg = strand_algebra_torus();
    CHECK_THROWS_AS((void)equivalent(a, b), Error);
}

TEST_CASE("idempotent_slice basics") {
    auto t = torus_algebra();
    TypeDStructure n;
    n.alg = t;
    n.gens.push_back({"x", 0});
    n.gens.push_back({"y", 1});
    n.gens.push_back({"z", 0});
    n.add_arrow(0, 1, element_from_names(*t, {"f"}));
    n.add_arrow(0, 2, element_from_names(*t, {"i0", "fg"}));
    TypeDStructure s0 = idempotent_slice(n, 0);
    CHECK(s0.gens.size() == 2);
    CHECK(s0.arrows.size() == 1);  // only the idempotent part of x -> z
    TypeDStructure s1 = idempotent_slice(n, 1);
    CHECK(s1.gens.size() == 1);
    CHECK(s1.arrows.empty());
    TypeDStructure empty;
    empty.alg = t;
    CHECK(idempotent_slice(empty, 0).gens.empty());
    CHECK_THROWS_AS((void)idempotent_slice(s0, 0), Error);  // wrong algebra
}

TEST_CASE("morphisms homotopic to the identity are equivalences") {
    gen::Rng rng(20);
    for (int trial = 0; trial < 15; ++trial) {
        auto alg = trial % 2 ? strand_algebra_torus() : torus_algebra();
        TypeDStructure n = gen::random_structure(rng, alg, 4, "n");
        CompMap k = gen::random_comp_map(rng, n, n);
        TypeDMorphism km{n, n, k};
        TypeDMorphism phi = add_morphisms(identity_morphism(n), boundary(km));
        REQUIRE(is_closed(phi));
        CHECK(is_homotopy_equivalence(phi));
    }
}

TEST_CASE("solve_boundary solves exactly when a primitive exists") {
    gen::Rng rng(19);
    auto alg = torus_algebra();
    for (int trial = 0; trial < 20; ++trial) {
        TypeDStructure a = gen::random_structure(rng, alg, 4, "a");
        TypeDStructure b = gen::random_structure(rng, alg, 4, "b");
        CompMap x = gen::random_comp_map(rng, a, b);
        TypeDMorphism xm{a, b, x};
        CompMap rhs = boundary(xm).comps;
        auto sol = solve_boundary(a, b, rhs);
        REQUIRE(sol.has_value());
        TypeDMorphism sm{a, b, *sol};
        CHECK(boundary(sm).comps == rhs);
    }
}
