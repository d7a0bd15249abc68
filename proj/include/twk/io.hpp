#pragma once

#include <json.hpp>

#include "twk/box.hpp"
#include "twk/models.hpp"

namespace twk {

/// A parsed structure file. `kind` selects the live member.
struct AnyValue {
    enum class Kind { Algebra, TypeD, DD, DA, Typewriter, Morphism, Homotopy, Flip, Generalized };

    struct MorphismFile {
        bool is_dd = false;
        AlgebraPtr left;  // for the dd flavor
        TypeDMorphism mor;
    };
    struct HomotopyFile {
        bool is_dd = false;
        AlgebraPtr left;
        TypeDMorphism phi, psi, h;
    };

    Kind kind = Kind::Algebra;
    AlgebraPtr algebra;
    TypeDStructure typed;
    DDBimodule dd;
    DABimodule da;
    Typewriter tw;
    MorphismFile morphism;
    HomotopyFile homotopy;
    FlipModule flip;
    GeneralizedCoefficientSystem generalized;
};

/// Parse a structure file. Malformed input throws Error(ParseError).
AnyValue parse_value(const nlohmann::json& j);

/// Canonical serialization: fixed key order, generators sorted by name,
/// arrows sorted by (source, target, right label), coefficients listed in
/// basis order. Canonical files re-parse to equal values and re-serialize
/// byte-identically.
nlohmann::ordered_json serialize_value(const AnyValue& v);

std::string dump_canonical(const nlohmann::ordered_json& j);

AnyValue wrap_typed(TypeDStructure n);
AnyValue wrap_dd(DDBimodule m);
AnyValue wrap_typewriter(Typewriter tw);
AnyValue wrap_generalized(GeneralizedCoefficientSystem g);

/// Built-in values addressable as "models:<name>": the algebras "torus",
/// "strands-torus", "trivial", the typewriter "m" and the bimodule "cfdd-id".
AnyValue resolve_model(const std::string& name);
std::vector<std::pair<std::string, std::string>> model_catalog();  // (name, kind)

/// Exhaustive associativity, idempotent completeness and unit laws.
CheckReport verify_algebra(const Algebra& a);

/// Dispatches to the appropriate checker for the value's kind.
CheckReport verify_value(const AnyValue& v);

} // namespace twk
