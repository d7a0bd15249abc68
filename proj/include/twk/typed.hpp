#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twk/algebra.hpp"

namespace twk {

struct CheckReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct Generator {
    std::string name;
    int idem = 0;  // vertex index in the structure's algebra
    friend bool operator==(const Generator&, const Generator&) = default;
};

/// Component matrix between two generator lists; keys are (source index,
/// target index), values are algebra elements. Zero entries are absent.
using CompKey = std::pair<int, int>;
using CompMap = std::map<CompKey, BitVec>;

/// XOR-accumulate into a component map, dropping entries that become zero.
void comp_put(CompMap& m, CompKey key, const BitVec& value);
CompMap comp_add(const CompMap& a, const CompMap& b);
/// Matrix product in application order: (a then b), labels multiplied
/// first-map-first.
CompMap comp_mul(const Algebra& alg, const CompMap& a, const CompMap& b);

/// Generators with idempotent labels plus algebra-labeled arrows encoding the
/// structure map. Valid when every arrow is idempotent-compatible and all
/// two-step label products cancel (see check_structure).
struct TypeDStructure {
    AlgebraPtr alg;
    std::vector<Generator> gens;
    CompMap arrows;

    int gen_index(const std::string& name) const;  // -1 when absent
    void add_arrow(const std::string& src, const std::string& tgt, const BitVec& coeff);
    void add_arrow(int src, int tgt, const BitVec& coeff) { comp_put(arrows, {src, tgt}, coeff); }

    /// Order-insensitive equality: same algebra content, same named
    /// generators, same arrow coefficients keyed by generator names.
    bool operator==(const TypeDStructure& o) const;
};

struct TypeDMorphism {
    TypeDStructure source;
    TypeDStructure target;
    CompMap comps;

    bool operator==(const TypeDMorphism& o) const;
};

/// Homotopies carry the same data as morphisms (gradings are suppressed).
using TypeDHomotopy = TypeDMorphism;

CheckReport check_structure(const TypeDStructure& n);

TypeDMorphism identity_morphism(const TypeDStructure& n);
TypeDMorphism zero_morphism(const TypeDStructure& n, const TypeDStructure& m);
TypeDMorphism add_morphisms(const TypeDMorphism& a, const TypeDMorphism& b);

/// phi then psi: components (x -> z) = sum of a.b over x ->(a) y via phi and
/// y ->(b) z via psi.
TypeDMorphism compose_morphisms(const TypeDMorphism& phi, const TypeDMorphism& psi);

/// D_src . phi + phi . D_tgt.
TypeDMorphism boundary(const TypeDMorphism& phi);
bool is_closed(const TypeDMorphism& phi);

/// Exact check that dH = phi + psi. Endpoint mismatch throws.
bool homotopy_check(const TypeDHomotopy& h, const TypeDMorphism& phi, const TypeDMorphism& psi);

/// Mapping cone of a closed morphism. Generators are the disjoint union with
/// slot prefixes "0." (source) and "1." (target); the morphism components run
/// from slot 0 to slot 1.
TypeDStructure cone(const TypeDMorphism& phi);

TypeDStructure direct_sum(const TypeDStructure& a, const TypeDStructure& b);

struct ReduceResult {
    TypeDStructure reduced;
    TypeDMorphism forward;   // N -> reduced
    TypeDMorphism backward;  // reduced -> N
    /// Homotopy on N with d(homotopy) = (forward then backward) + identity.
    /// On the reduced side (backward then forward) equals the identity on the
    /// nose, so the zero homotopy witnesses it.
    TypeDHomotopy homotopy;
};

/// Cancellation: repeatedly removes an arrow pair x -> y whose coefficient
/// contains the idempotent of its ends. The coefficient e + r is invertible
/// (r is a nilpotent corner element), with inverse e + r + r^2 + ...; each
/// cancellation rewires u -> y, x -> v pairs through that inverse. Candidates
/// are taken lexicographically first by (source name, target name). The
/// result has no arrow with an idempotent component.
ReduceResult reduce(const TypeDStructure& n);

bool is_contractible(const TypeDStructure& n);

/// True iff cone(phi) is contractible; over these algebras that decides
/// homotopy equivalence of closed morphisms.
bool is_homotopy_equivalence(const TypeDMorphism& phi);

/// Reduces both sides and searches for an idempotent- and label-preserving
/// generator bijection between the reduced structures. A negative answer
/// relies on reduced homotopy-equivalent structures being isomorphic.
bool equivalent(const TypeDStructure& a, const TypeDStructure& b);

/// Exact isomorphism search without reduction.
bool isomorphic(const TypeDStructure& a, const TypeDStructure& b);

/// Generators with idempotent iota_i of a structure over the torus algebra,
/// keeping the idempotent components of arrows; lands over the trivial
/// algebra. Agrees with pairing against the elementary module.
TypeDStructure idempotent_slice(const TypeDStructure& n, int i);

/// Rename generators via an explicit name map (must be a bijection onto
/// fresh names). Used for unit-law comparisons.
TypeDStructure rename_generators(const TypeDStructure& n,
                                 const std::map<std::string, std::string>& names);

/// Transport a structure along a basis-indexed algebra isomorphism; with
/// forward = false the inverse direction is used.
TypeDStructure transport_structure(const TypeDStructure& n, const AlgebraIso& iso,
                                   bool forward = true);

// ---- morphism-space linear algebra --------------------------------------
//
// The component space between two structures is finite dimensional over the
// two-element field; the boundary operator is linear on it. These helpers
// expose it for solving and sampling.

struct HomSpace {
    const TypeDStructure* source;
    const TypeDStructure* target;
    // Variables: (source gen, target gen, basis element) triples, idempotent
    // compatible, in deterministic order.
    std::vector<std::tuple<int, int, int>> vars;
    std::map<std::tuple<int, int, int>, int> var_index;

    BitVec pack(const CompMap& comps) const;
    CompMap unpack(const BitVec& v) const;
};

HomSpace hom_space(const TypeDStructure& source, const TypeDStructure& target);
/// Matrix of the boundary operator on the component space.
BitMatrix boundary_matrix(const HomSpace& hs);
/// Basis of closed component maps.
std::vector<CompMap> closed_morphism_basis(const TypeDStructure& source,
                                           const TypeDStructure& target);
/// Some X with dX = rhs, or nothing when rhs is not a boundary.
std::optional<CompMap> solve_boundary(const TypeDStructure& source, const TypeDStructure& target,
                                      const CompMap& rhs);

} // namespace twk
