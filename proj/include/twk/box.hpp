#pragma once

#include "twk/dd.hpp"
#include "twk/typewriter.hpp"

namespace twk {

inline constexpr int kDefaultBoxCap = 64;

/// DA bimodule with finitely many actions. An action
/// (src, (a_1 ... a_j), c, tgt) consumes a composable sequence of input-
/// algebra basis elements and outputs c in the output algebra; j = 0 actions
/// form the differential part.
struct DABimodule {
    struct Gen {
        std::string name;
        int out_idem = 0;  // vertex of the output algebra
        int in_idem = 0;   // vertex of the input algebra
    };
    struct Action {
        int src = 0;
        std::vector<int> inputs;  // input-algebra basis indices
        BitVec out;               // output-algebra element
        int tgt = 0;
    };

    AlgebraPtr out_alg, in_alg;
    std::vector<Gen> gens;
    std::vector<Action> actions;

    int max_arity() const;
};

/// Idempotent compatibility plus the structure relation, checked exhaustively
/// on all composable input sequences up to twice the maximal action arity
/// (beyond which every term vanishes).
CheckReport check_da(const DABimodule& p);

/// One generator per idempotent; actions delta_2(e_v, a) = a (x) e_w for
/// every basis element a. The unit for box pairing.
DABimodule identity_da(const AlgebraPtr& a);

/// One generator at the given vertex, trivial output algebra, sole action
/// consuming that idempotent. Pairing with it computes the idempotent slice.
DABimodule elementary_module(const AlgebraPtr& alg, int vertex);

/// Pairs actions with structure paths: for an action (p, (a_1..a_j), c, q)
/// and each delta-path x_0 ->(a_1) ... ->(a_j) x_j, emit (p|x_0) ->(c) (q|x_j),
/// summed mod 2. Throws NonTerminatingBoxTensor when an action arity exceeds
/// the cap.
TypeDStructure box_type_d(const DABimodule& p, const TypeDStructure& n, int cap = kDefaultBoxCap);

/// As box_type_d, carrying right torus labels along the path, multiplied in
/// application order.
DDBimodule box_dd(const DABimodule& p, const DDBimodule& m, int cap = kDefaultBoxCap);

/// Identity (x) phi: inserts phi once into each path expansion, summed over
/// the insertion position. Accepts morphisms over the input algebra or over
/// its tensor with the torus algebra.
TypeDMorphism box_morphism(const DABimodule& p, const TypeDMorphism& phi,
                           int cap = kDefaultBoxCap);

/// Boxes both structures and all three maps, then rewrites the boxed cones
/// through the canonical identification box(Cone(phi)) = Cone(box(phi)).
/// The identification is asserted per instance; a mismatch throws
/// ConeIdentificationFailed.
Typewriter box_typewriter(const DABimodule& p, const Typewriter& m, int cap = kDefaultBoxCap);

} // namespace twk
