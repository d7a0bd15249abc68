#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twk/bits.hpp"

namespace twk {

/// A quiver with monomial relations. Relations are composable arrow paths
/// declared zero, written in application order (first arrow first).
struct QuiverPresentation {
    struct Arrow {
        std::string name;
        std::string source;
        std::string target;
    };
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<std::vector<std::string>> relations;
    // Optional display names for composite basis paths, keyed by arrow-name
    // sequence. Unlisted paths are named by concatenating arrow names.
    std::map<std::vector<std::string>, std::string> aliases;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Finite-dimensional algebra over the two-element field with a fixed basis,
/// orthogonal idempotents indexed by vertices, and a basis-times-basis
/// multiplication table (entry -1 meaning zero). Products are taken in
/// application order: mul(a, b) is "a, then b".
///
/// Elements are BitVecs over the basis; all element-level operations live on
/// free functions that take the algebra as context.
class Algebra {
public:
    struct BasisElement {
        std::string name;
        int source = 0;              // vertex index
        int target = 0;              // vertex index
        std::vector<int> arrows;     // arrow-index path; empty for idempotents
    };

    std::size_t dim() const { return basis_.size(); }
    std::size_t vertex_count() const { return vertices_.size(); }

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& vertex_name(int v) const { return vertices_[v]; }
    int vertex_index(const std::string& name) const;

    const BasisElement& basis(int i) const { return basis_[i]; }
    int basis_index(const std::string& name) const;  // -1 when absent
    int idempotent_of_vertex(int v) const { return idem_of_vertex_[v]; }
    bool is_idempotent(int i) const { return basis_[i].arrows.empty(); }

    /// Basis product; -1 means zero.
    int table(int i, int j) const { return table_[i * dim() + j]; }

    const std::optional<QuiverPresentation>& presentation() const { return presentation_; }
    const std::string& reserved_name() const { return reserved_name_; }

    /// Content equality: same vertex names, basis names with sources/targets,
    /// and multiplication table.
    bool same_as(const Algebra& other) const;

    friend AlgebraPtr build_algebra(const QuiverPresentation& p, int max_path_len);
    friend AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);
    friend AlgebraPtr tag_reserved(AlgebraPtr a, const std::string& name);

private:
    std::vector<std::string> vertices_;
    std::vector<BasisElement> basis_;
    std::vector<int> idem_of_vertex_;
    std::vector<int> table_;
    std::map<std::string, int> name_index_;
    std::optional<QuiverPresentation> presentation_;
    std::string reserved_name_;

    void index_names();
};

/// Enumerates all composable paths of length <= max_path_len avoiding the
/// relations, certifying finite dimension by checking that nothing survives
/// at length max_path_len + 1. Throws NotFiniteAtBound otherwise.
AlgebraPtr build_algebra(const QuiverPresentation& p, int max_path_len);

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);

/// The torus algebra: vertices i0, i1; arrows f, h: i0 -> i1 and g: i1 -> i0;
/// the paths g,f and h,g are zero. Eight-dimensional. Shared instance.
AlgebraPtr torus_algebra();

/// Same shape with basis j0, j1, rho1, rho2, rho3, rho12, rho23, rho123.
AlgebraPtr strand_algebra_torus();

/// One vertex, no arrows; basis {e}. Chain complexes live over this.
AlgebraPtr trivial_algebra();

/// Basis-indexed algebra isomorphism (a bijection multiplicative on basis
/// pairs). apply/unapply act on elements.
struct AlgebraIso {
    AlgebraPtr from;
    AlgebraPtr to;
    std::vector<int> forward;   // from-basis index -> to-basis index
    std::vector<int> backward;

    BitVec apply(const BitVec& x) const;
    BitVec unapply(const BitVec& x) const;
};

/// f -> rho1, g -> rho2, h -> rho3, extended multiplicatively.
const AlgebraIso& torus_iso();

// ---- element operations -------------------------------------------------

BitVec zero_element(const Algebra& a);
BitVec basis_element(const Algebra& a, int i);
BitVec element_from_names(const Algebra& a, const std::vector<std::string>& names);
std::vector<std::string> element_names(const Algebra& a, const BitVec& x);

/// Bilinear product in application order (x first, then y).
BitVec mul(const Algebra& a, const BitVec& x, const BitVec& y);

} // namespace twk
