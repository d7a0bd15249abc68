#include "twk/typewriter.hpp"

#include "twk/error.hpp"

namespace twk {

ConeBlocks split_cone_map(const CompMap& comps, int n0_src, int n0_tgt) {
    ConeBlocks b;
    for (const auto& [k, v] : comps) {
        bool src1 = k.first >= n0_src;
        bool tgt1 = k.second >= n0_tgt;
        int s = src1 ? k.first - n0_src : k.first;
        int t = tgt1 ? k.second - n0_tgt : k.second;
        if (src1 && !tgt1)
            comp_put(b.g, {s, t}, v);
        else if (!src1 && !tgt1)
            comp_put(b.fg, {s, t}, v);
        else if (src1 && tgt1)
            comp_put(b.gh, {s, t}, v);
        else
            comp_put(b.fgh, {s, t}, v);
    }
    return b;
}

CompMap join_cone_map(const ConeBlocks& blocks, int n0_src, int n0_tgt) {
    CompMap out;
    for (const auto& [k, v] : blocks.fg) comp_put(out, {k.first, k.second}, v);
    for (const auto& [k, v] : blocks.fgh) comp_put(out, {k.first, k.second + n0_tgt}, v);
    for (const auto& [k, v] : blocks.g) comp_put(out, {k.first + n0_src, k.second}, v);
    for (const auto& [k, v] : blocks.gh) comp_put(out, {k.first + n0_src, k.second + n0_tgt}, v);
    return out;
}

Typewriter make_typewriter(TypeDStructure m0, TypeDStructure m1, CompMap d_f, CompMap d_h,
                           ConeBlocks d_cr) {
    Typewriter tw;
    tw.m0 = std::move(m0);
    tw.m1 = std::move(m1);
    tw.d_f = TypeDMorphism{tw.m0, tw.m1, std::move(d_f)};
    tw.d_h = TypeDMorphism{tw.m0, tw.m1, std::move(d_h)};
    TypeDStructure cone_f = cone(tw.d_f);
    TypeDStructure cone_h = cone(tw.d_h);
    int n0 = int(tw.m0.gens.size());
    tw.d_cr = TypeDMorphism{std::move(cone_f), std::move(cone_h), join_cone_map(d_cr, n0, n0)};
    return tw;
}

namespace {

void check_closed(const TypeDMorphism& m, const std::string& label, CheckReport& report) {
    TypeDMorphism d = boundary(m);
    for (const auto& [k, coeff] : d.comps)
        for (auto b : coeff.ones())
            report.violations.push_back(label + " is not closed at " + m.source.gens[k.first].name +
                                        "->" + m.target.gens[k.second].name + ": term " +
                                        m.source.alg->basis(int(b)).name);
}

} // namespace

CheckReport check_typewriter(const Typewriter& m) {
    CheckReport report;
    if (!m.m0.alg->same_as(*m.m1.alg)) {
        report.violations.push_back("M0 and M1 live over different algebras");
        return report;
    }
    if (!(m.d_f.source == m.m0) || !(m.d_f.target == m.m1))
        report.violations.push_back("D_f endpoints do not match M0 -> M1");
    if (!(m.d_h.source == m.m0) || !(m.d_h.target == m.m1))
        report.violations.push_back("D_h endpoints do not match M0 -> M1");
    if (!report.ok()) return report;
    CheckReport s0 = check_structure(m.m0), s1 = check_structure(m.m1);
    report.violations.insert(report.violations.end(), s0.violations.begin(), s0.violations.end());
    report.violations.insert(report.violations.end(), s1.violations.begin(), s1.violations.end());
    check_closed(m.d_f, "D_f", report);
    check_closed(m.d_h, "D_h", report);
    if (!report.ok()) return report;
    if (!(m.d_cr.source == cone(m.d_f)) || !(m.d_cr.target == cone(m.d_h))) {
        report.violations.push_back("D_CR endpoints do not match Cone(D_f) -> Cone(D_h)");
        return report;
    }
    check_closed(m.d_cr, "D_CR", report);
    return report;
}

TypeDMorphism induced_cone_map(const TypeDMorphism& d_star, const TypeDMorphism& d_star_prime,
                               const CompMap& t0, const CompMap& t1, const CompMap& tstar) {
    TypeDStructure src = cone(d_star);
    TypeDStructure tgt = cone(d_star_prime);
    int n0s = int(d_star.source.gens.size());
    int n0t = int(d_star_prime.source.gens.size());
    CompMap comps;
    for (const auto& [k, v] : t0) comp_put(comps, k, v);
    for (const auto& [k, v] : t1) comp_put(comps, {k.first + n0s, k.second + n0t}, v);
    for (const auto& [k, v] : tstar) comp_put(comps, {k.first, k.second + n0t}, v);
    return TypeDMorphism{std::move(src), std::move(tgt), std::move(comps)};
}

namespace {

// dX for a component map between fixed structures (X need not be closed).
CompMap comp_boundary(const TypeDStructure& src, const TypeDStructure& tgt, const CompMap& x) {
    const Algebra& a = *src.alg;
    return comp_add(comp_mul(a, src.arrows, x), comp_mul(a, x, tgt.arrows));
}

void check_equal(const TypeDStructure& src, const TypeDStructure& tgt, const CompMap& lhs,
                 const CompMap& rhs, const std::string& what, CheckReport& report) {
    CompMap diff = comp_add(lhs, rhs);
    for (const auto& [k, coeff] : diff)
        for (auto b : coeff.ones())
            report.violations.push_back(what + " fails at " + src.gens[k.first].name + "->" +
                                        tgt.gens[k.second].name + ": term " +
                                        src.alg->basis(int(b)).name);
}

} // namespace

CheckReport check_typewriter_morphism(const TypewriterMorphism& t) {
    CheckReport report;
    const Typewriter& m = t.source;
    const Typewriter& mp = t.target;
    if (!m.m0.alg->same_as(*mp.m0.alg)) {
        report.violations.push_back("source and target typewriters use different algebras");
        return report;
    }
    const Algebra& a = *m.m0.alg;

    check_equal(m.m0, mp.m0, comp_boundary(m.m0, mp.m0, t.t0), {}, "closedness of T0", report);
    check_equal(m.m1, mp.m1, comp_boundary(m.m1, mp.m1, t.t1), {}, "closedness of T1", report);

    // dT_* = D_* T1 + T0 D'_* for * = f, h.
    CompMap rhs_f = comp_add(comp_mul(a, m.d_f.comps, t.t1), comp_mul(a, t.t0, mp.d_f.comps));
    check_equal(m.m0, mp.m1, comp_boundary(m.m0, mp.m1, t.tf), rhs_f, "witness identity for T_f",
                report);
    CompMap rhs_h = comp_add(comp_mul(a, m.d_h.comps, t.t1), comp_mul(a, t.t0, mp.d_h.comps));
    check_equal(m.m0, mp.m1, comp_boundary(m.m0, mp.m1, t.th), rhs_h, "witness identity for T_h",
                report);

    TypeDMorphism cone_tf = induced_cone_map(m.d_f, mp.d_f, t.t0, t.t1, t.tf);
    TypeDMorphism cone_th = induced_cone_map(m.d_h, mp.d_h, t.t0, t.t1, t.th);
    check_closed(cone_tf, "induced cone map for f", report);
    check_closed(cone_th, "induced cone map for h", report);

    // dT_CR = D_CR T_h + T_f D'_CR, as maps Cone(D_f) -> Cone(D'_h).
    CompMap rhs_cr =
        comp_add(comp_mul(a, m.d_cr.comps, cone_th.comps), comp_mul(a, cone_tf.comps, mp.d_cr.comps));
    check_equal(m.d_cr.source, mp.d_cr.target,
                comp_boundary(m.d_cr.source, mp.d_cr.target, t.tcr), rhs_cr,
                "witness identity for T_CR", report);

    // The induced map on Cone(D_CR) must be closed as well.
    TypeDMorphism cone_tcr =
        induced_cone_map(m.d_cr, mp.d_cr, cone_tf.comps, cone_th.comps, t.tcr);
    check_closed(cone_tcr, "induced map on Cone(D_CR)", report);
    return report;
}

TypewriterMorphism identity_typewriter_morphism(const Typewriter& m) {
    TypewriterMorphism t;
    t.source = m;
    t.target = m;
    t.t0 = identity_morphism(m.m0).comps;
    t.t1 = identity_morphism(m.m1).comps;
    return t;
}

TypewriterMorphism zero_typewriter_morphism(const Typewriter& source, const Typewriter& target) {
    TypewriterMorphism t;
    t.source = source;
    t.target = target;
    return t;
}

TypewriterMorphism compose_typewriter_morphisms(const TypewriterMorphism& t,
                                                const TypewriterMorphism& u) {
    if (!(t.target == u.source))
        fail(ErrorKind::EndpointMismatch, "compose_typewriter_morphisms: endpoint mismatch");
    const Algebra& a = *t.source.m0.alg;
    TypewriterMorphism out;
    out.source = t.source;
    out.target = u.target;
    out.t0 = comp_mul(a, t.t0, u.t0);
    out.t1 = comp_mul(a, t.t1, u.t1);
    out.tf = comp_add(comp_mul(a, t.tf, u.t1), comp_mul(a, t.t0, u.tf));
    out.th = comp_add(comp_mul(a, t.th, u.t1), comp_mul(a, t.t0, u.th));
    TypeDMorphism cone_tf =
        induced_cone_map(t.source.d_f, t.target.d_f, t.t0, t.t1, t.tf);
    TypeDMorphism cone_uh =
        induced_cone_map(u.source.d_h, u.target.d_h, u.t0, u.t1, u.th);
    out.tcr = comp_add(comp_mul(a, cone_tf.comps, u.tcr), comp_mul(a, t.tcr, cone_uh.comps));
    return out;
}

CheckReport check_typewriter_homotopy(const TypewriterHomotopy& h, const TypewriterMorphism& t,
                                      const TypewriterMorphism& u) {
    if (!(t.source == u.source) || !(t.target == u.target))
        fail(ErrorKind::EndpointMismatch, "check_typewriter_homotopy: endpoint mismatch");
    CheckReport report;
    const Typewriter& m = t.source;
    const Typewriter& mp = t.target;
    const Algebra& a = *m.m0.alg;

    check_equal(m.m0, mp.m0, comp_boundary(m.m0, mp.m0, h.h0), comp_add(t.t0, u.t0),
                "homotopy identity for H0", report);
    check_equal(m.m1, mp.m1, comp_boundary(m.m1, mp.m1, h.h1), comp_add(t.t1, u.t1),
                "homotopy identity for H1", report);

    // dH_* + D_* H1 + H0 D'_* = T_* + U_*.
    auto star_identity = [&](const CompMap& hstar, const TypeDMorphism& d,
                             const TypeDMorphism& dp, const CompMap& tstar, const CompMap& ustar,
                             const std::string& what) {
        CompMap lhs = comp_boundary(m.m0, mp.m1, hstar);
        lhs = comp_add(lhs, comp_mul(a, d.comps, h.h1));
        lhs = comp_add(lhs, comp_mul(a, h.h0, dp.comps));
        check_equal(m.m0, mp.m1, lhs, comp_add(tstar, ustar), what, report);
    };
    star_identity(h.hf, m.d_f, mp.d_f, t.tf, u.tf, "homotopy identity for H_f");
    star_identity(h.hh, m.d_h, mp.d_h, t.th, u.th, "homotopy identity for H_h");

    // dH_CR + D_CR H_h + H_f D'_CR = T_CR + U_CR on Cone(D_f) -> Cone(D'_h).
    TypeDMorphism cone_hf = induced_cone_map(m.d_f, mp.d_f, h.h0, h.h1, h.hf);
    TypeDMorphism cone_hh = induced_cone_map(m.d_h, mp.d_h, h.h0, h.h1, h.hh);
    CompMap lhs = comp_boundary(m.d_cr.source, mp.d_cr.target, h.hcr);
    lhs = comp_add(lhs, comp_mul(a, m.d_cr.comps, cone_hh.comps));
    lhs = comp_add(lhs, comp_mul(a, cone_hf.comps, mp.d_cr.comps));
    check_equal(m.d_cr.source, mp.d_cr.target, lhs, comp_add(t.tcr, u.tcr),
                "homotopy identity for H_CR", report);
    return report;
}

TypewriterMorphism push_by_homotopy(const TypewriterMorphism& t, const TypewriterHomotopy& h) {
    const Typewriter& m = t.source;
    const Typewriter& mp = t.target;
    const Algebra& a = *m.m0.alg;
    TypewriterMorphism out = t;
    out.t0 = comp_add(t.t0, comp_boundary(m.m0, mp.m0, h.h0));
    out.t1 = comp_add(t.t1, comp_boundary(m.m1, mp.m1, h.h1));
    auto pushed_star = [&](const CompMap& tstar, const CompMap& hstar, const TypeDMorphism& d,
                           const TypeDMorphism& dp) {
        CompMap add = comp_boundary(m.m0, mp.m1, hstar);
        add = comp_add(add, comp_mul(a, d.comps, h.h1));
        add = comp_add(add, comp_mul(a, h.h0, dp.comps));
        return comp_add(tstar, add);
    };
    out.tf = pushed_star(t.tf, h.hf, m.d_f, mp.d_f);
    out.th = pushed_star(t.th, h.hh, m.d_h, mp.d_h);
    TypeDMorphism cone_hf = induced_cone_map(m.d_f, mp.d_f, h.h0, h.h1, h.hf);
    TypeDMorphism cone_hh = induced_cone_map(m.d_h, mp.d_h, h.h0, h.h1, h.hh);
    CompMap add = comp_boundary(m.d_cr.source, mp.d_cr.target, h.hcr);
    add = comp_add(add, comp_mul(a, m.d_cr.comps, cone_hh.comps));
    add = comp_add(add, comp_mul(a, cone_hf.comps, mp.d_cr.comps));
    out.tcr = comp_add(t.tcr, add);
    return out;
}

std::pair<Typewriter, CheckReport> star(const Typewriter& m, const Typewriter& mprime) {
    if (!(m.m1 == mprime.m0))
        fail(ErrorKind::EndpointMismatch, "star: M1 of the first factor must equal M0 of the second");
    const Algebra& a = *m.m0.alg;
    int n0 = int(m.m0.gens.size());
    int n0p = int(mprime.m0.gens.size());
    ConeBlocks cr = split_cone_map(m.d_cr.comps, n0, n0);
    ConeBlocks crp = split_cone_map(mprime.d_cr.comps, n0p, n0p);

    CompMap star_f = comp_mul(a, m.d_f.comps, mprime.d_f.comps);
    CompMap star_h = comp_mul(a, m.d_h.comps, mprime.d_h.comps);
    ConeBlocks star_cr;
    star_cr.g = comp_mul(a, crp.g, cr.g);
    star_cr.fg = comp_mul(a, comp_mul(a, m.d_f.comps, crp.fg), cr.g);
    star_cr.gh = comp_mul(a, comp_mul(a, crp.g, cr.gh), mprime.d_h.comps);
    star_cr.fgh = comp_mul(a, comp_mul(a, comp_mul(a, m.d_f.comps, crp.fg), cr.gh),
                           mprime.d_h.comps);

    Typewriter out = make_typewriter(m.m0, mprime.m1, std::move(star_f), std::move(star_h),
                                     std::move(star_cr));
    CheckReport report = check_typewriter(out);
    return {std::move(out), std::move(report)};
}

bool is_partially_extendable(const Typewriter& m) { return is_homotopy_equivalence(m.d_cr); }

} // namespace twk
