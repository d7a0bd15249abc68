#pragma once

#include <optional>

#include "twk/cmd.hpp"
#include "twk/dd.hpp"
#include "twk/typewriter.hpp"

namespace twk {

/// The thickened-torus typewriter over the strand algebra: M0 = span{a} at
/// j0, M1 = span{b} at j1, zero differentials, D_f(a) = rho3 b,
/// D_h(a) = rho1 b, and carriage return with D_g(b) = rho2 a and
/// D_fgh(a) = rho123 b. The f/h label assignment is the one under which the
/// carriage return is a chain map and cmd agrees with the identity bimodule.
Typewriter model_m();

/// The identity DD bimodule over (strand algebra, torus algebra): generators
/// x, y with delta(x) = (rho1|h + rho3|f + rho123|fgh) x) y and
/// delta(y) = (rho2|g) (x) x.
DDBimodule cfdd_identity();

/// cmd_object(model_m) equals cfdd_identity under a -> x, b -> y,
/// coefficient for coefficient.
bool verify_m_is_cfdd();

/// Finite complex over the trivial algebra with endomorphisms U, V squaring
/// to zero against each other and a chain homotopy equivalence between their
/// cones. Models knot complexes over F[U,V]/(UV=0) truncated to finite rank.
struct FlipModule {
    TypeDStructure complex;
    TypeDMorphism u, v;    // endomorphisms of `complex`
    TypeDMorphism flip;    // Cone(u) -> Cone(v)

    struct InverseData {
        TypeDMorphism inverse;  // Cone(v) -> Cone(u)
        TypeDHomotopy h_fwd;    // on Cone(u): d(h_fwd) = (flip then inverse) + id
        TypeDHomotopy h_bwd;    // on Cone(v)
    };
    std::optional<InverseData> inverse;
};

/// U, V chain maps; UV = VU = 0; flip closed with the right endpoints; the
/// inverse data, when present, witnesses flip as a homotopy equivalence.
CheckReport check_flip(const FlipModule& f);

/// The evident typewriter (M, M; U, V; flip) over the trivial algebra.
/// Throws on an invalid flip module.
Typewriter div_functor(const FlipModule& f);

/// cmd of div, collapsed to a type D structure over the torus algebra.
TypeDStructure bsd_infty(const FlipModule& f);

/// A DD bimodule with trivial left algebra is a type D structure over the
/// torus algebra.
TypeDStructure collapse_trivial_left(const DDBimodule& m);

} // namespace twk
