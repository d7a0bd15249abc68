#include "support/gen.hpp"

namespace twk::gen {

namespace {

TypeDStructure bipartite(Rng& rng, const AlgebraPtr& alg, int size, const std::string& prefix) {
    TypeDStructure n;
    n.alg = alg;
    size = std::max(size, 1);
    for (int i = 0; i < size; ++i)
        n.gens.push_back({prefix + std::to_string(i),
                          int(rng() % alg->vertex_count())});
    // Arrows only run from the first half to the second, so no two-step path
    // exists and delta^2 vanishes identically.
    int half = size / 2;
    for (int u = 0; u < half; ++u)
        for (int v = half; v < size; ++v) {
            BitVec coeff(alg->dim());
            for (std::size_t b = 0; b < alg->dim(); ++b) {
                if (alg->basis(int(b)).source != n.gens[u].idem ||
                    alg->basis(int(b)).target != n.gens[v].idem)
                    continue;
                if (rng() % 2) coeff.flip(b);
            }
            if (coeff.any()) n.add_arrow(u, v, coeff);
        }
    return n;
}

} // namespace

TypeDStructure random_structure(Rng& rng, const AlgebraPtr& alg, int size,
                                const std::string& prefix) {
    switch (rng() % 3) {
        case 0:
            return bipartite(rng, alg, size, prefix);
        case 1: {
            TypeDStructure a = bipartite(rng, alg, std::max(size / 2, 1), prefix + "a");
            TypeDStructure b = bipartite(rng, alg, std::max(size / 2, 1), prefix + "b");
            return cone(random_closed_morphism(rng, a, b));
        }
        default: {
            TypeDStructure a = bipartite(rng, alg, std::max(size / 2, 1), prefix + "a");
            TypeDStructure b = bipartite(rng, alg, std::max(size / 2, 1), prefix + "b");
            return direct_sum(a, b);
        }
    }
}

TypeDMorphism random_closed_morphism(Rng& rng, const TypeDStructure& src,
                                     const TypeDStructure& tgt) {
    CompMap comps;
    for (const auto& basis_map : closed_morphism_basis(src, tgt))
        if (rng() % 2) comps = comp_add(comps, basis_map);
    return TypeDMorphism{src, tgt, std::move(comps)};
}

CompMap random_comp_map(Rng& rng, const TypeDStructure& src, const TypeDStructure& tgt) {
    HomSpace hs = hom_space(src, tgt);
    BitVec v(hs.vars.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (rng() % 2) v.set(i);
    return hs.unpack(v);
}

Typewriter random_typewriter(Rng& rng, const AlgebraPtr& alg, int size,
                             const std::string& prefix) {
    return random_typewriter_from(rng, random_structure(rng, alg, size, prefix + "x"), size,
                                  prefix);
}

Typewriter random_typewriter_from(Rng& rng, TypeDStructure m0, int size,
                                  const std::string& prefix) {
    AlgebraPtr alg = m0.alg;
    TypeDStructure m1 = random_structure(rng, alg, size, prefix + "y");
    TypeDMorphism d_f = random_closed_morphism(rng, m0, m1);
    TypeDMorphism d_h = random_closed_morphism(rng, m0, m1);
    TypeDMorphism d_cr = random_closed_morphism(rng, cone(d_f), cone(d_h));
    Typewriter tw;
    tw.m0 = std::move(m0);
    tw.m1 = std::move(m1);
    tw.d_f = std::move(d_f);
    tw.d_h = std::move(d_h);
    tw.d_cr = std::move(d_cr);
    return tw;
}

TypewriterMorphism random_typewriter_morphism(Rng& rng, const Typewriter& src,
                                              const Typewriter& tgt) {
    const Algebra& a = *src.m0.alg;
    for (int attempt = 0; attempt < 8; ++attempt) {
        TypewriterMorphism t;
        t.source = src;
        t.target = tgt;
        t.t0 = random_closed_morphism(rng, src.m0, tgt.m0).comps;
        t.t1 = random_closed_morphism(rng, src.m1, tgt.m1).comps;
        CompMap rhs_f =
            comp_add(comp_mul(a, src.d_f.comps, t.t1), comp_mul(a, t.t0, tgt.d_f.comps));
        auto tf = solve_boundary(src.m0, tgt.m1, rhs_f);
        if (!tf) continue;
        CompMap rhs_h =
            comp_add(comp_mul(a, src.d_h.comps, t.t1), comp_mul(a, t.t0, tgt.d_h.comps));
        auto th = solve_boundary(src.m0, tgt.m1, rhs_h);
        if (!th) continue;
        t.tf = comp_add(*tf, random_closed_morphism(rng, src.m0, tgt.m1).comps);
        t.th = comp_add(*th, random_closed_morphism(rng, src.m0, tgt.m1).comps);
        TypeDMorphism cone_tf = induced_cone_map(src.d_f, tgt.d_f, t.t0, t.t1, t.tf);
        TypeDMorphism cone_th = induced_cone_map(src.d_h, tgt.d_h, t.t0, t.t1, t.th);
        CompMap rhs_cr = comp_add(comp_mul(a, src.d_cr.comps, cone_th.comps),
                                  comp_mul(a, cone_tf.comps, tgt.d_cr.comps));
        auto tcr = solve_boundary(src.d_cr.source, tgt.d_cr.target, rhs_cr);
        if (!tcr) continue;
        t.tcr = comp_add(*tcr,
                         random_closed_morphism(rng, src.d_cr.source, tgt.d_cr.target).comps);
        return t;
    }
    return zero_typewriter_morphism(src, tgt);
}

TypewriterHomotopy random_raw_homotopy(Rng& rng, const TypewriterMorphism& t) {
    TypewriterHomotopy h;
    h.h0 = random_comp_map(rng, t.source.m0, t.target.m0);
    h.h1 = random_comp_map(rng, t.source.m1, t.target.m1);
    h.hf = random_comp_map(rng, t.source.m0, t.target.m1);
    h.hh = random_comp_map(rng, t.source.m0, t.target.m1);
    h.hcr = random_comp_map(rng, t.source.d_cr.source, t.target.d_cr.target);
    return h;
}

ExtendedSample random_partially_extended(Rng& rng, const AlgebraPtr& alg, int size,
                                         const std::string& prefix) {
    const Algebra& a = *alg;
    TypeDStructure m0 = random_structure(rng, alg, size, prefix + "x");
    TypeDStructure m1 = random_structure(rng, alg, size, prefix + "y");
    TypeDMorphism d = random_closed_morphism(rng, m0, m1);
    TypeDStructure c = cone(d);
    // d_cr = id + dK is homotopic to the identity of the common cone; then
    // d_cd = id + dK is a homotopy inverse with witness K dK on both sides.
    CompMap k = random_comp_map(rng, c, c);
    CompMap dk = comp_add(comp_mul(a, c.arrows, k), comp_mul(a, k, c.arrows));
    CompMap cr = comp_add(identity_morphism(c).comps, dk);
    ExtendedSample s;
    s.tw.m0 = std::move(m0);
    s.tw.m1 = std::move(m1);
    s.tw.d_f = d;
    s.tw.d_h = d;
    s.tw.d_cr = TypeDMorphism{c, c, cr};
    s.d_cd = TypeDMorphism{c, c, cr};
    CompMap witness = comp_mul(a, k, dk);
    s.h_fwd = TypeDHomotopy{c, c, witness};
    s.h_bwd = TypeDHomotopy{c, c, witness};
    return s;
}

FlipModule random_flip(Rng& rng, int size) {
    AlgebraPtr triv = trivial_algebra();
    FlipModule f;
    f.complex = bipartite(rng, triv, size, "m");
    TypeDMorphism zero = zero_morphism(f.complex, f.complex);
    switch (rng() % 3) {
        case 0:
            f.u = random_closed_morphism(rng, f.complex, f.complex);
            f.v = zero;
            break;
        case 1:
            f.u = zero;
            f.v = random_closed_morphism(rng, f.complex, f.complex);
            break;
        default:
            f.u = zero;
            f.v = zero;
            break;
    }
    f.flip = random_closed_morphism(rng, cone(f.u), cone(f.v));
    return f;
}

} // namespace twk::gen
