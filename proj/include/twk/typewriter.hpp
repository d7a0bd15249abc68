#pragma once

#include "twk/typed.hpp"

namespace twk {

/// The tuple (M0, M1; D_f, D_h; D_CR): two structures over a common algebra,
/// two closed maps M0 -> M1, and a carriage return Cone(D_f) -> Cone(D_h).
struct Typewriter {
    TypeDStructure m0, m1;
    TypeDMorphism d_f, d_h;
    TypeDMorphism d_cr;

    bool operator==(const Typewriter& o) const {
        return m0 == o.m0 && m1 == o.m1 && d_f == o.d_f && d_h == o.d_h && d_cr == o.d_cr;
    }
};

/// The four cone-slot blocks of a map Cone(a) -> Cone(b) between two-slot
/// cones, named by the torus labels they turn into: the slot-1 -> slot-0
/// block is g, slot-0 -> slot-0 is fg, slot-1 -> slot-1 is gh and
/// slot-0 -> slot-1 is fgh. Block keys are indices into the underlying
/// structures, not cone indices.
struct ConeBlocks {
    CompMap g, fg, gh, fgh;
};

ConeBlocks split_cone_map(const CompMap& comps, int n0_src, int n0_tgt);
CompMap join_cone_map(const ConeBlocks& blocks, int n0_src, int n0_tgt);

/// Assembles a typewriter from component maps; the carriage return is given
/// by its four blocks over the plain M0/M1 generators.
Typewriter make_typewriter(TypeDStructure m0, TypeDStructure m1, CompMap d_f, CompMap d_h,
                           ConeBlocks d_cr);

/// Closedness of D_f, D_h and D_CR, plus endpoint coherence.
CheckReport check_typewriter(const Typewriter& m);

/// A morphism of typewriters: chain maps T0, T1, homotopy witnesses T_f, T_h
/// for the two squares, and a cone-level witness T_CR whose keys are cone
/// indices of Cone(D_f) and Cone(D'_h).
struct TypewriterMorphism {
    Typewriter source, target;
    CompMap t0, t1;
    CompMap tf, th;
    CompMap tcr;

    bool operator==(const TypewriterMorphism& o) const {
        return source == o.source && target == o.target && t0 == o.t0 && t1 == o.t1 &&
               tf == o.tf && th == o.th && tcr == o.tcr;
    }
};

struct TypewriterHomotopy {
    CompMap h0, h1;
    CompMap hf, hh;
    CompMap hcr;  // cone indices: Cone(D_f) -> Cone(D'_h)
};

/// The induced map Cone(d_star) -> Cone(d_star') with blocks
/// (x, y) -> (t0(x), t1(y) + tstar(x)).
TypeDMorphism induced_cone_map(const TypeDMorphism& d_star, const TypeDMorphism& d_star_prime,
                               const CompMap& t0, const CompMap& t1, const CompMap& tstar);

/// Verifies exactly: T0, T1 closed; the witness identities
/// dT_* = D_* T1 + T0 D'_* for * in {f, h}; closedness of the induced cone
/// maps; the carriage-return witness dT_CR = D_CR T_h + T_f D'_CR; and
/// closedness of the induced map on Cone(D_CR).
CheckReport check_typewriter_morphism(const TypewriterMorphism& t);

TypewriterMorphism identity_typewriter_morphism(const Typewriter& m);
TypewriterMorphism zero_typewriter_morphism(const Typewriter& source, const Typewriter& target);

/// t then u. Components are the unique ones compatible with composing the
/// induced cone maps.
TypewriterMorphism compose_typewriter_morphisms(const TypewriterMorphism& t,
                                                const TypewriterMorphism& u);

/// Exact check of all homotopy identities between t and u.
CheckReport check_typewriter_homotopy(const TypewriterHomotopy& h, const TypewriterMorphism& t,
                                      const TypewriterMorphism& u);

/// Pushes t by the boundary of h, producing a morphism homotopic to t via h.
TypewriterMorphism push_by_homotopy(const TypewriterMorphism& t, const TypewriterHomotopy& h);

/// Horizontal composite of (M0, M1; ...) and (M1, M2; ...). The carriage
/// return components are the four displayed composites; the result is run
/// through check_typewriter and the report returned alongside.
std::pair<Typewriter, CheckReport> star(const Typewriter& m, const Typewriter& mprime);

/// True iff the carriage return is a homotopy equivalence (contractible cone).
bool is_partially_extendable(const Typewriter& m);

} // namespace twk
