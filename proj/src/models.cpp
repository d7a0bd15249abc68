#include "twk/models.hpp"

#include "twk/error.hpp"

namespace twk {

Typewriter model_m() {
    AlgebraPtr strands = strand_algebra_torus();
    TypeDStructure m0, m1;
    m0.alg = m1.alg = strands;
    m0.gens.push_back({"a", strands->vertex_index("j0")});
    m1.gens.push_back({"b", strands->vertex_index("j1")});

    CompMap d_f, d_h;
    comp_put(d_f, {0, 0}, element_from_names(*strands, {"rho3"}));
    comp_put(d_h, {0, 0}, element_from_names(*strands, {"rho1"}));
    ConeBlocks cr;
    comp_put(cr.g, {0, 0}, element_from_names(*strands, {"rho2"}));
    comp_put(cr.fgh, {0, 0}, element_from_names(*strands, {"rho123"}));
    return make_typewriter(std::move(m0), std::move(m1), std::move(d_f), std::move(d_h),
                           std::move(cr));
}

DDBimodule cfdd_identity() {
    AlgebraPtr strands = strand_algebra_torus();
    const TorusLabels& l = torus_labels();
    DDBimodule dd = dd_create(strands);
    dd_add_generator(dd, "x", strands->vertex_index("j0"), 0);
    dd_add_generator(dd, "y", strands->vertex_index("j1"), 1);
    // delta(x) = (rho1 (x) sigma3 + rho3 (x) sigma1 + rho123 (x) sigma123) y,
    // with the right factors transported by the inverse torus isomorphism.
    dd_add_arrow(dd, 0, 1, element_from_names(*strands, {"rho1"}), l.h);
    dd_add_arrow(dd, 0, 1, element_from_names(*strands, {"rho3"}), l.f);
    dd_add_arrow(dd, 0, 1, element_from_names(*strands, {"rho123"}), l.fgh);
    dd_add_arrow(dd, 1, 0, element_from_names(*strands, {"rho2"}), l.g);
    return dd;
}

bool verify_m_is_cfdd() {
    DDBimodule image = cmd_object(model_m());
    TypeDStructure renamed = rename_generators(image.flat, {{"a", "x"}, {"b", "y"}});
    return renamed == cfdd_identity().flat;
}

CheckReport check_flip(const FlipModule& f) {
    CheckReport report;
    if (!f.complex.alg->same_as(*trivial_algebra())) {
        report.violations.push_back("flip module complex must live over the trivial algebra");
        return report;
    }
    CheckReport base = check_structure(f.complex);
    report.violations.insert(report.violations.end(), base.violations.begin(),
                             base.violations.end());
    auto check_endo = [&](const TypeDMorphism& m, const std::string& label) {
        if (!(m.source == f.complex) || !(m.target == f.complex)) {
            report.violations.push_back(label + " is not an endomorphism of the complex");
            return false;
        }
        if (!is_closed(m)) report.violations.push_back(label + " does not commute with the differential");
        return true;
    };
    bool shapes = check_endo(f.u, "U");
    shapes = check_endo(f.v, "V") && shapes;
    if (!shapes || !report.ok()) return report;
    if (!compose_morphisms(f.u, f.v).comps.empty())
        report.violations.push_back("UV != 0");
    if (!compose_morphisms(f.v, f.u).comps.empty())
        report.violations.push_back("VU != 0");
    TypeDStructure cone_u = cone(f.u);
    TypeDStructure cone_v = cone(f.v);
    if (!(f.flip.source == cone_u) || !(f.flip.target == cone_v)) {
        report.violations.push_back("flip endpoints do not match Cone(U) -> Cone(V)");
        return report;
    }
    if (!is_closed(f.flip)) report.violations.push_back("flip is not closed");
    if (f.inverse) {
        const auto& inv = *f.inverse;
        if (!(inv.inverse.source == cone_v) || !(inv.inverse.target == cone_u)) {
            report.violations.push_back("inverse endpoints do not match Cone(V) -> Cone(U)");
            return report;
        }
        if (!is_closed(inv.inverse)) report.violations.push_back("inverse is not closed");
        if (report.ok()) {
            if (!homotopy_check(inv.h_fwd, compose_morphisms(f.flip, inv.inverse),
                                identity_morphism(cone_u)))
                report.violations.push_back("h_fwd does not witness flip then inverse ~ id");
            if (!homotopy_check(inv.h_bwd, compose_morphisms(inv.inverse, f.flip),
                                identity_morphism(cone_v)))
                report.violations.push_back("h_bwd does not witness inverse then flip ~ id");
        }
    }
    return report;
}

Typewriter div_functor(const FlipModule& f) {
    CheckReport report = check_flip(f);
    if (!report.ok())
        fail(ErrorKind::HomotopyIdentityFailed, "div_functor: " + report.violations.front());
    // The two copies of the complex get slot-prefixed generator names so they
    // stay distinguishable once merged by cmd.
    std::map<std::string, std::string> name0, name1;
    for (const auto& g : f.complex.gens) {
        name0[g.name] = "0." + g.name;
        name1[g.name] = "1." + g.name;
    }
    int n = int(f.complex.gens.size());
    return make_typewriter(rename_generators(f.complex, name0),
                           rename_generators(f.complex, name1), f.u.comps, f.v.comps,
                           split_cone_map(f.flip.comps, n, n));
}

TypeDStructure collapse_trivial_left(const DDBimodule& m) {
    if (!m.left->same_as(*trivial_algebra()))
        fail(ErrorKind::WrongAlgebra, "collapse_trivial_left: left algebra is not trivial");
    AlgebraPtr torus = torus_algebra();
    TypeDStructure out;
    out.alg = torus;
    for (std::size_t i = 0; i < m.flat.gens.size(); ++i)
        out.gens.push_back({m.flat.gens[i].name, m.right_side(int(i))});
    // Tensor basis index (e, t) is exactly t, so coefficients carry over by
    // re-sizing.
    for (const auto& [k, v] : m.flat.arrows) {
        BitVec coeff(torus->dim());
        for (auto bit : v.ones()) coeff.flip(bit);
        comp_put(out.arrows, k, coeff);
    }
    return out;
}

TypeDStructure bsd_infty(const FlipModule& f) {
    return collapse_trivial_left(cmd_object(div_functor(f)));
}

} // namespace twk
