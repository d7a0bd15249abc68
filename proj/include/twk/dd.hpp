#pragma once

#include <array>
#include <optional>
#include <string>

#include "twk/typed.hpp"

namespace twk {

/// DD bimodule over (A, T) with T the torus algebra, stored flat as a type D
/// structure over the tensor algebra A (x) T. Arrow coefficients are sums of
/// (left basis, right basis) pairs; tensor basis index = left * dim(T) + right.
struct DDBimodule {
    AlgebraPtr left;
    AlgebraPtr right;   // always torus_algebra content
    AlgebraPtr tensor;  // tensor_product(left, right)
    TypeDStructure flat;

    int right_dim() const { return int(right->dim()); }
    /// Right vertex (0 or 1) of a generator.
    int right_side(int gen) const { return flat.gens[gen].idem % int(right->vertex_count()); }
    int left_vertex(int gen) const { return flat.gens[gen].idem / int(right->vertex_count()); }

    bool operator==(const DDBimodule& o) const {
        return left->same_as(*o.left) && flat == o.flat;
    }
};

/// Empty DD bimodule over (left, torus).
DDBimodule dd_create(const AlgebraPtr& left);
void dd_add_generator(DDBimodule& dd, const std::string& name, int left_vertex, int right_side);
/// Adds (left_elem) (x) (right torus basis element) to the arrow src -> tgt.
void dd_add_arrow(DDBimodule& dd, int src, int tgt, const BitVec& left_elem, int right_basis);

CheckReport dd_check(const DDBimodule& m);

/// Torus basis indices by label, resolved once.
struct TorusLabels {
    int i0, i1, f, g, h, fg, gh, fgh;
};
const TorusLabels& torus_labels();

/// The structure map of a DD bimodule, decomposed by right-hand torus label.
/// maps[t] holds the block of arrows carrying label t; the idempotent labels
/// i0/i1 together form D_empty. All maps are matrices over the left algebra
/// keyed by generator index pairs.
struct CoefficientSystem {
    AlgebraPtr left;
    std::vector<Generator> gens;   // idem = left vertex
    std::vector<int> right_side;   // 0 or 1 per generator
    std::array<CompMap, 8> maps;   // indexed by torus basis index

    CompMap d_empty() const;
};

/// Verifies the coefficient relations exactly: D_empty squares to zero, the
/// f/g/h blocks are chain maps, and the fg, gh, fgh blocks satisfy
/// d(D_fg) = D_f D_g, d(D_gh) = D_g D_h, d(D_fgh) = D_f D_gh + D_fg D_h
/// (products written in application order). Violations are named by label.
CheckReport check_coefficients(const CoefficientSystem& c);

/// Assembles delta^1 = D_empty (x) 1 + sum_t D_t (x) t. Throws
/// CoefficientRelationViolated when check_coefficients fails.
DDBimodule from_coefficients(const CoefficientSystem& c);
CoefficientSystem to_coefficients(const DDBimodule& m);

/// Cyclic interval of {0,1,2,3}: `len` consecutive indices starting at
/// `start`. The index dictionary is f=1, g=2, h=3 with the closing arrow 0
/// running from side 1 to side 0.
struct CyclicInterval {
    int start = 0;
    int len = 1;
    std::string key() const;
    int domain_side() const;    // 0 or 1
    int codomain_side() const;
    friend bool operator==(const CyclicInterval&, const CyclicInterval&) = default;
};

/// All twelve proper cyclic intervals in deterministic order (length, start).
std::vector<CyclicInterval> proper_intervals();
/// The ten intervals whose maps are not determined by the coefficient system
/// (the six proper intervals containing 0, then the four length-4 maps).
std::vector<CyclicInterval> unknown_intervals();

/// A coefficient system extended by maps for every proper cyclic interval
/// containing 0 plus the four length-4 maps. `stored_only` may carry the two
/// length-5 components arising from carriage data; they are kept but take no
/// part in any relation check.
struct GeneralizedCoefficientSystem {
    CoefficientSystem base;
    std::map<std::string, CompMap> extended;
    std::map<std::string, CompMap> stored_only;

    const CompMap& interval_map(const CyclicInterval& i) const;
};

/// Verifies every interval relation
///   sum_{I = J then K} D_K o D_J + D_empty o D_I + D_I o D_empty = 0
/// and the four identity relations
///   D o D_I + sum_{I = J then K} D_K o D_J + D_I o D = Id  (I of length 4)
/// exactly.
CheckReport check_generalized(const GeneralizedCoefficientSystem& g);

/// Decides semi-extendability as one linear solve over the two-element
/// field: the unknown maps' entries are idempotent-compatible basis
/// coefficients, every relation summand contains at most one unknown (the
/// assembly asserts this), and solve_linear picks the lexicographically
/// least solution, so output is reproducible. Returns nothing when the
/// system is inconsistent.
std::optional<GeneralizedCoefficientSystem> semi_extend(const DDBimodule& m);

} // namespace twk
