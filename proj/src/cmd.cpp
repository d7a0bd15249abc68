#include "twk/cmd.hpp"

#include <set>

#include "twk/error.hpp"

namespace twk {

namespace {

void shift_into(CompMap& dst, const CompMap& block, int src_off, int tgt_off) {
    for (const auto& [k, v] : block) comp_put(dst, {k.first + src_off, k.second + tgt_off}, v);
}

CoefficientSystem coefficients_of_typewriter(const Typewriter& m) {
    CoefficientSystem c;
    c.left = m.m0.alg;
    std::set<std::string> names;
    for (const auto& g : m.m0.gens) {
        c.gens.push_back({g.name, g.idem});
        c.right_side.push_back(0);
        names.insert(g.name);
    }
    for (const auto& g : m.m1.gens) {
        c.gens.push_back({g.name, g.idem});
        c.right_side.push_back(1);
        if (!names.insert(g.name).second)
            fail(ErrorKind::IllFormedPresentation,
                 "cmd: generator name shared between M0 and M1: " + g.name);
    }
    int n0 = int(m.m0.gens.size());
    const TorusLabels& l = torus_labels();
    shift_into(c.maps[l.i0], m.m0.arrows, 0, 0);
    shift_into(c.maps[l.i1], m.m1.arrows, n0, n0);
    shift_into(c.maps[l.f], m.d_f.comps, 0, n0);
    shift_into(c.maps[l.h], m.d_h.comps, 0, n0);
    ConeBlocks cr = split_cone_map(m.d_cr.comps, n0, n0);
    shift_into(c.maps[l.g], cr.g, n0, 0);
    shift_into(c.maps[l.fg], cr.fg, 0, 0);
    shift_into(c.maps[l.gh], cr.gh, n0, n0);
    shift_into(c.maps[l.fgh], cr.fgh, 0, n0);
    return c;
}

} // namespace

DDBimodule cmd_object(const Typewriter& m) {
    return from_coefficients(coefficients_of_typewriter(m));
}

Typewriter uncmd(const DDBimodule& m) {
    if (!m.right->same_as(*torus_algebra()))
        fail(ErrorKind::WrongAlgebra, "uncmd: right algebra must be the torus algebra");
    CoefficientSystem c = to_coefficients(m);
    const TorusLabels& l = torus_labels();

    TypeDStructure m0, m1;
    m0.alg = m1.alg = m.left;
    std::vector<int> local(c.gens.size(), -1);
    for (std::size_t i = 0; i < c.gens.size(); ++i) {
        if (c.right_side[i] == 0) {
            local[i] = int(m0.gens.size());
            m0.gens.push_back(c.gens[i]);
        } else {
            local[i] = int(m1.gens.size());
            m1.gens.push_back(c.gens[i]);
        }
    }
    auto remap = [&](const CompMap& in) {
        CompMap out;
        for (const auto& [k, v] : in) comp_put(out, {local[k.first], local[k.second]}, v);
        return out;
    };
    m0.arrows = remap(c.maps[l.i0]);
    m1.arrows = remap(c.maps[l.i1]);
    ConeBlocks cr;
    cr.g = remap(c.maps[l.g]);
    cr.fg = remap(c.maps[l.fg]);
    cr.gh = remap(c.maps[l.gh]);
    cr.fgh = remap(c.maps[l.fgh]);
    return make_typewriter(std::move(m0), std::move(m1), remap(c.maps[l.f]),
                           remap(c.maps[l.h]), std::move(cr));
}

namespace {

// Assembles a component map over the tensor algebra from per-label blocks.
struct FlatAssembler {
    const DDBimodule& src;
    const DDBimodule& tgt;
    CompMap comps;

    // Adds block (x) label t, with src/tgt offsets into the flat index space.
    void add(const CompMap& block, int src_off, int tgt_off, int t) {
        int dimR = src.right_dim();
        for (const auto& [k, v] : block) {
            BitVec coeff(src.tensor->dim());
            for (auto p : v.ones()) coeff.flip(p * std::size_t(dimR) + std::size_t(t));
            comp_put(comps, {k.first + src_off, k.second + tgt_off}, coeff);
        }
    }

    // Idempotent labels depend on the generator's right side, so diagonal
    // blocks are added rowwise.
    void add_unit(const CompMap& block, int src_off, int tgt_off, int side) {
        const TorusLabels& l = torus_labels();
        add(block, src_off, tgt_off, side == 0 ? l.i0 : l.i1);
    }
};

} // namespace

TypeDMorphism cmd_morphism(const TypewriterMorphism& t) {
    DDBimodule src = cmd_object(t.source);
    DDBimodule tgt = cmd_object(t.target);
    const TorusLabels& l = torus_labels();
    int n0s = int(t.source.m0.gens.size());
    int n0t = int(t.target.m0.gens.size());
    FlatAssembler fa{src, tgt, {}};
    fa.add_unit(t.t0, 0, 0, 0);
    fa.add_unit(t.t1, n0s, n0t, 1);
    fa.add(t.tf, 0, n0t, l.f);
    fa.add(t.th, 0, n0t, l.h);
    ConeBlocks cr = split_cone_map(t.tcr, n0s, n0t);
    fa.add(cr.g, n0s, 0, l.g);
    fa.add(cr.fg, 0, 0, l.fg);
    fa.add(cr.gh, n0s, n0t, l.gh);
    fa.add(cr.fgh, 0, n0t, l.fgh);
    return TypeDMorphism{std::move(src.flat), std::move(tgt.flat), std::move(fa.comps)};
}

TypeDHomotopy cmd_homotopy(const TypewriterMorphism& t, const TypewriterMorphism& u,
                           const TypewriterHomotopy& h) {
    if (!(t.source == u.source) || !(t.target == u.target))
        fail(ErrorKind::EndpointMismatch, "cmd_homotopy: endpoint mismatch");
    DDBimodule src = cmd_object(t.source);
    DDBimodule tgt = cmd_object(t.target);
    const TorusLabels& l = torus_labels();
    int n0s = int(t.source.m0.gens.size());
    int n0t = int(t.target.m0.gens.size());
    FlatAssembler fa{src, tgt, {}};
    fa.add_unit(h.h0, 0, 0, 0);
    fa.add_unit(h.h1, n0s, n0t, 1);
    fa.add(h.hf, 0, n0t, l.f);
    fa.add(h.hh, 0, n0t, l.h);
    ConeBlocks cr = split_cone_map(h.hcr, n0s, n0t);
    fa.add(cr.g, n0s, 0, l.g);
    fa.add(cr.fg, 0, 0, l.fg);
    fa.add(cr.gh, n0s, n0t, l.gh);
    fa.add(cr.fgh, 0, n0t, l.fgh);
    return TypeDHomotopy{std::move(src.flat), std::move(tgt.flat), std::move(fa.comps)};
}

GeneralizedCoefficientSystem departure_to_generalized(const Typewriter& m,
                                                      const TypeDMorphism& d_cd,
                                                      const TypeDHomotopy& h_fwd,
                                                      const TypeDHomotopy& h_bwd) {
    TypeDStructure cone_f = cone(m.d_f);
    TypeDStructure cone_h = cone(m.d_h);
    if (!(d_cd.source == cone_h) || !(d_cd.target == cone_f))
        fail(ErrorKind::EndpointMismatch,
             "departure_to_generalized: D_CD must run Cone(D_h) -> Cone(D_f)");
    if (!is_closed(d_cd))
        fail(ErrorKind::NonClosedMorphism, "departure_to_generalized: D_CD is not closed");
    TypeDMorphism fwd_composite = compose_morphisms(m.d_cr, d_cd);   // endo of Cone(D_f)
    TypeDMorphism bwd_composite = compose_morphisms(d_cd, m.d_cr);   // endo of Cone(D_h)
    if (!homotopy_check(h_fwd, fwd_composite, identity_morphism(cone_f)))
        fail(ErrorKind::HomotopyIdentityFailed,
             "departure_to_generalized: h_fwd is not a homotopy from D_CR then D_CD to the identity");
    if (!homotopy_check(h_bwd, bwd_composite, identity_morphism(cone_h)))
        fail(ErrorKind::HomotopyIdentityFailed,
             "departure_to_generalized: h_bwd is not a homotopy from D_CD then D_CR to the identity");

    GeneralizedCoefficientSystem g;
    g.base = coefficients_of_typewriter(m);
    int n0 = int(m.m0.gens.size());
    auto shifted = [&](const CompMap& block, int src_side, int tgt_side) {
        CompMap out;
        shift_into(out, block, src_side == 0 ? 0 : n0, tgt_side == 0 ? 0 : n0);
        return out;
    };

    ConeBlocks cd = split_cone_map(d_cd.comps, n0, n0);
    g.extended["0"] = shifted(cd.g, 1, 0);
    g.extended["30"] = shifted(cd.fg, 0, 0);
    g.extended["01"] = shifted(cd.gh, 1, 1);
    g.extended["301"] = shifted(cd.fgh, 0, 1);

    ConeBlocks fw = split_cone_map(h_fwd.comps, n0, n0);
    g.extended["1230"] = shifted(fw.fg, 0, 0);
    g.extended["230"] = shifted(fw.g, 1, 0);
    g.extended["2301"] = shifted(fw.gh, 1, 1);
    g.stored_only["12301"] = shifted(fw.fgh, 0, 1);

    ConeBlocks bw = split_cone_map(h_bwd.comps, n0, n0);
    g.extended["3012"] = shifted(bw.fg, 0, 0);
    g.extended["012"] = shifted(bw.g, 1, 0);
    g.extended["0123"] = shifted(bw.gh, 1, 1);
    g.stored_only["30123"] = shifted(bw.fgh, 0, 1);

    CheckReport report = check_generalized(g);
    if (!report.ok())
        fail(ErrorKind::Internal,
             "departure_to_generalized: transferred system fails verification: " +
                 report.violations.front());
    return g;
}

} // namespace twk
