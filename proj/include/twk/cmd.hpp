#pragma once

#include "twk/dd.hpp"
#include "twk/typewriter.hpp"

namespace twk {

/// Typewriter over A -> DD bimodule over (A, T). The internal differentials
/// become the idempotent-labeled blocks, D_f and D_h keep their labels, and
/// the four cone blocks of the carriage return become the g, fg, gh, fgh
/// coefficient maps. Generator names of M0 and M1 must be disjoint.
DDBimodule cmd_object(const Typewriter& m);

/// Constructive inverse: splits generators by right idempotent and
/// reassembles the typewriter. Exact two-sided inverse to cmd_object.
Typewriter uncmd(const DDBimodule& m);

/// psi = (T0, T1) (x) 1 + sum_t T_t (x) t, a morphism of the flattened DD
/// bimodules. Sends identities to identities and compositions to
/// compositions on the nose.
TypeDMorphism cmd_morphism(const TypewriterMorphism& t);

/// Homotopy transport: the image of a typewriter homotopy between t and u is
/// a DD homotopy between cmd_morphism(t) and cmd_morphism(u).
TypeDHomotopy cmd_homotopy(const TypewriterMorphism& t, const TypewriterMorphism& u,
                           const TypewriterHomotopy& h);

/// Transfers a carriage departure d_cd (a closed map Cone(D_h) -> Cone(D_f))
/// together with homotopies h_fwd (on Cone(D_f), witnessing d_cr then d_cd
/// homotopic to the identity) and h_bwd (on Cone(D_h), the other composite)
/// into a generalized coefficient system: the departure blocks give D_0,
/// D_01, D_30, D_301, the forward homotopy gives D_1230, D_230, D_2301, and
/// the backward one gives D_3012, D_012, D_0123. The two length-5 blocks are
/// stored but excluded from relation checking.
GeneralizedCoefficientSystem departure_to_generalized(const Typewriter& m,
                                                      const TypeDMorphism& d_cd,
                                                      const TypeDHomotopy& h_fwd,
                                                      const TypeDHomotopy& h_bwd);

} // namespace twk
