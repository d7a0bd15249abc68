#include "twk/io.hpp"

#include <algorithm>

#include "twk/error.hpp"

namespace twk {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field: ") + key);
    return j.at(key);
}

std::string str(const json& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

// ---- algebra references --------------------------------------------------

AlgebraPtr parse_algebra_ref(const json& j) {
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name == "torus") return torus_algebra();
        if (name == "strands-torus") return strand_algebra_torus();
        if (name == "trivial") return trivial_algebra();
        bad("unknown reserved algebra: " + name);
    }
    if (!j.is_object()) bad("algebra reference must be a string or an object");
    QuiverPresentation p;
    for (const auto& v : field(j, "vertices")) p.vertices.push_back(str(v, "vertex"));
    if (j.contains("arrows"))
        for (const auto& a : j.at("arrows")) {
            if (!a.is_array() || a.size() != 3) bad("arrow must be [name, source, target]");
            p.arrows.push_back({str(a[0], "arrow name"), str(a[1], "arrow source"),
                                str(a[2], "arrow target")});
        }
    if (j.contains("relations"))
        for (const auto& r : j.at("relations")) {
            std::vector<std::string> rel;
            for (const auto& s : r) rel.push_back(str(s, "relation arrow"));
            p.relations.push_back(std::move(rel));
        }
    if (j.contains("aliases"))
        for (const auto& al : j.at("aliases")) {
            if (!al.is_array() || al.size() != 2) bad("alias must be [[arrows...], name]");
            std::vector<std::string> path;
            for (const auto& s : al[0]) path.push_back(str(s, "alias arrow"));
            p.aliases[path] = str(al[1], "alias name");
        }
    int bound = 8;
    if (j.contains("max_path_len")) bound = j.at("max_path_len").get<int>();
    try {
        return build_algebra(p, bound);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotFiniteAtBound) throw;
        bad(std::string("invalid algebra presentation: ") + e.what());
    }
}

ordered_json serialize_algebra_ref(const AlgebraPtr& a) {
    if (!a->reserved_name().empty()) return a->reserved_name();
    if (!a->presentation())
        fail(ErrorKind::Internal, "cannot serialize an algebra without a presentation");
    const QuiverPresentation& p = *a->presentation();
    ordered_json out;
    out["vertices"] = p.vertices;
    ordered_json arrows = ordered_json::array();
    for (const auto& ar : p.arrows) arrows.push_back({ar.name, ar.source, ar.target});
    out["arrows"] = std::move(arrows);
    out["relations"] = p.relations;
    if (!p.aliases.empty()) {
        ordered_json aliases = ordered_json::array();
        for (const auto& [path, name] : p.aliases) aliases.push_back({path, name});
        out["aliases"] = std::move(aliases);
    }
    int bound = 1;
    for (std::size_t i = 0; i < a->dim(); ++i)
        bound = std::max(bound, int(a->basis(int(i)).arrows.size()));
    out["max_path_len"] = bound;
    return out;
}

// ---- typed bodies --------------------------------------------------------

void parse_typed_body(const json& j, TypeDStructure& n) {
    for (const auto& g : field(j, "generators")) {
        if (!g.is_array() || g.size() != 2) bad("generator must be [name, idempotent]");
        std::string name = str(g[0], "generator name");
        if (n.gen_index(name) >= 0) bad("duplicate generator name: " + name);
        n.gens.push_back({name, n.alg->vertex_index(str(g[1], "generator idempotent"))});
    }
    if (!j.contains("arrows")) return;
    for (const auto& a : j.at("arrows")) {
        if (!a.is_array() || a.size() != 3) bad("arrow must be [source, target, [coefficients]]");
        int s = n.gen_index(str(a[0], "arrow source"));
        int t = n.gen_index(str(a[1], "arrow target"));
        if (s < 0 || t < 0) bad("arrow references unknown generator");
        std::vector<std::string> names;
        for (const auto& c : a[2]) names.push_back(str(c, "coefficient"));
        n.add_arrow(s, t, element_from_names(*n.alg, names));
    }
}

// Generator order for canonical output.
std::vector<int> sorted_gen_order(const std::vector<Generator>& gens) {
    std::vector<int> order(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return gens[a].name < gens[b].name; });
    return order;
}

ordered_json serialize_comp_list(const TypeDStructure& src, const TypeDStructure& tgt,
                                 const Algebra& coeff_alg, const CompMap& comps) {
    std::vector<std::tuple<std::string, std::string, std::vector<std::string>>> rows;
    for (const auto& [k, v] : comps)
        rows.push_back({src.gens[k.first].name, tgt.gens[k.second].name,
                        element_names(coeff_alg, v)});
    std::sort(rows.begin(), rows.end());
    ordered_json out = ordered_json::array();
    for (const auto& [s, t, names] : rows) out.push_back({s, t, names});
    return out;
}

ordered_json serialize_typed_body(const TypeDStructure& n) {
    ordered_json out;
    ordered_json gens = ordered_json::array();
    for (int i : sorted_gen_order(n.gens))
        gens.push_back({n.gens[i].name, n.alg->vertex_name(n.gens[i].idem)});
    out["generators"] = std::move(gens);
    out["arrows"] = serialize_comp_list(n, n, *n.alg, n.arrows);
    return out;
}

CompMap parse_comp_list(const json& j, const TypeDStructure& src, const TypeDStructure& tgt,
                        const Algebra& coeff_alg) {
    CompMap out;
    for (const auto& a : j) {
        if (!a.is_array() || a.size() != 3) bad("component must be [source, target, [coefficients]]");
        int s = src.gen_index(str(a[0], "component source"));
        int t = tgt.gen_index(str(a[1], "component target"));
        if (s < 0 || t < 0) bad("component references unknown generator");
        std::vector<std::string> names;
        for (const auto& c : a[2]) names.push_back(str(c, "coefficient"));
        comp_put(out, {s, t}, element_from_names(coeff_alg, names));
    }
    return out;
}

// ---- dd bodies -----------------------------------------------------------

int parse_right_label(const std::string& name, int src_side) {
    const TorusLabels& l = torus_labels();
    if (name == "1") return src_side == 0 ? l.i0 : l.i1;
    int t = torus_algebra()->basis_index(name);
    if (t < 0) bad("unknown right coefficient: " + name);
    return t;
}

std::string right_label_name(int t) {
    const TorusLabels& l = torus_labels();
    if (t == l.i0 || t == l.i1) return "1";
    return torus_algebra()->basis(t).name;
}

void parse_dd_generators(const json& j, DDBimodule& dd) {
    for (const auto& g : field(j, "generators")) {
        if (!g.is_array() || g.size() != 3)
            bad("dd generator must be [name, left idempotent, right side]");
        std::string name = str(g[0], "generator name");
        if (dd.flat.gen_index(name) >= 0) bad("duplicate generator name: " + name);
        std::string side = str(g[2], "right side");
        if (side != "0" && side != "1") bad("right side must be \"0\" or \"1\"");
        dd_add_generator(dd, name, dd.left->vertex_index(str(g[1], "left idempotent")),
                         side == "0" ? 0 : 1);
    }
}

void parse_dd_arrows(const json& j, DDBimodule& dd) {
    if (!j.contains("arrows")) return;
    for (const auto& a : j.at("arrows")) {
        if (!a.is_array() || a.size() != 4)
            bad("dd arrow must be [source, target, [left coefficients], right]");
        int s = dd.flat.gen_index(str(a[0], "arrow source"));
        int t = dd.flat.gen_index(str(a[1], "arrow target"));
        if (s < 0 || t < 0) bad("arrow references unknown generator");
        std::vector<std::string> names;
        for (const auto& c : a[2]) names.push_back(str(c, "left coefficient"));
        int label = parse_right_label(str(a[3], "right coefficient"), dd.right_side(s));
        dd_add_arrow(dd, s, t, element_from_names(*dd.left, names), label);
    }
}

ordered_json serialize_dd_generators(const DDBimodule& dd) {
    ordered_json gens = ordered_json::array();
    for (int i : sorted_gen_order(dd.flat.gens))
        gens.push_back({dd.flat.gens[i].name, dd.left->vertex_name(dd.left_vertex(i)),
                        dd.right_side(i) == 0 ? "0" : "1"});
    return gens;
}

ordered_json serialize_dd_arrows(const DDBimodule& dd) {
    int dimR = dd.right_dim();
    // (src, tgt, label index) -> left element
    std::map<std::tuple<std::string, std::string, int>, BitVec> rows;
    for (const auto& [k, v] : dd.flat.arrows)
        for (auto bit : v.ones()) {
            auto key = std::tuple(dd.flat.gens[k.first].name, dd.flat.gens[k.second].name,
                                  int(bit) % dimR);
            auto [it, inserted] = rows.try_emplace(key, BitVec(dd.left->dim()));
            it->second.flip(bit / std::size_t(dimR));
        }
    ordered_json out = ordered_json::array();
    for (const auto& [key, left] : rows)
        out.push_back({std::get<0>(key), std::get<1>(key), element_names(*dd.left, left),
                       right_label_name(std::get<2>(key))});
    return out;
}

// Cone-shaped structure without the closedness requirement; parsing must not
// reject files that verify is supposed to report on.
TypeDStructure cone_shape(const TypeDStructure& s, const TypeDStructure& t, const CompMap& comps) {
    TypeDStructure c;
    c.alg = s.alg;
    for (const auto& g : s.gens) c.gens.push_back({"0." + g.name, g.idem});
    for (const auto& g : t.gens) c.gens.push_back({"1." + g.name, g.idem});
    int off = int(s.gens.size());
    for (const auto& [k, v] : s.arrows) comp_put(c.arrows, k, v);
    for (const auto& [k, v] : t.arrows) comp_put(c.arrows, {k.first + off, k.second + off}, v);
    for (const auto& [k, v] : comps) comp_put(c.arrows, {k.first, k.second + off}, v);
    return c;
}

ConeBlocks parse_cone_blocks(const json& j, const TypeDStructure& m0s, const TypeDStructure& m1s,
                             const TypeDStructure& m0t, const TypeDStructure& m1t,
                             const Algebra& alg) {
    ConeBlocks b;
    if (j.contains("g")) b.g = parse_comp_list(j.at("g"), m1s, m0t, alg);
    if (j.contains("fg")) b.fg = parse_comp_list(j.at("fg"), m0s, m0t, alg);
    if (j.contains("gh")) b.gh = parse_comp_list(j.at("gh"), m1s, m1t, alg);
    if (j.contains("fgh")) b.fgh = parse_comp_list(j.at("fgh"), m0s, m1t, alg);
    return b;
}

ordered_json serialize_cone_blocks(const ConeBlocks& b, const TypeDStructure& m0s,
                                   const TypeDStructure& m1s, const TypeDStructure& m0t,
                                   const TypeDStructure& m1t, const Algebra& alg) {
    ordered_json out;
    out["g"] = serialize_comp_list(m1s, m0t, alg, b.g);
    out["fg"] = serialize_comp_list(m0s, m0t, alg, b.fg);
    out["gh"] = serialize_comp_list(m1s, m1t, alg, b.gh);
    out["fgh"] = serialize_comp_list(m0s, m1t, alg, b.fgh);
    return out;
}

} // namespace

// ---- top-level parse -----------------------------------------------------

AnyValue parse_value(const json& j) {
    if (!j.is_object()) bad("structure file must be a JSON object");
    if (field(j, "format").get<int>() != 1) bad("unsupported format version");
    std::string kind = str(field(j, "kind"), "kind");
    AnyValue v;
    if (kind == "algebra") {
        v.kind = AnyValue::Kind::Algebra;
        v.algebra = parse_algebra_ref(field(j, "algebra"));
        return v;
    }
    if (kind == "typed") {
        v.kind = AnyValue::Kind::TypeD;
        v.typed.alg = parse_algebra_ref(field(j, "algebra"));
        parse_typed_body(j, v.typed);
        return v;
    }
    if (kind == "dd") {
        v.kind = AnyValue::Kind::DD;
        v.dd = dd_create(parse_algebra_ref(field(j, "left_algebra")));
        parse_dd_generators(j, v.dd);
        parse_dd_arrows(j, v.dd);
        return v;
    }
    if (kind == "da") {
        v.kind = AnyValue::Kind::DA;
        v.da.out_alg = parse_algebra_ref(field(j, "out_algebra"));
        v.da.in_alg = parse_algebra_ref(field(j, "in_algebra"));
        for (const auto& g : field(j, "generators")) {
            if (!g.is_array() || g.size() != 3)
                bad("da generator must be [name, out idempotent, in idempotent]");
            v.da.gens.push_back({str(g[0], "generator name"),
                                 v.da.out_alg->vertex_index(str(g[1], "out idempotent")),
                                 v.da.in_alg->vertex_index(str(g[2], "in idempotent"))});
        }
        auto gen_index = [&](const std::string& name) {
            for (std::size_t i = 0; i < v.da.gens.size(); ++i)
                if (v.da.gens[i].name == name) return int(i);
            bad("action references unknown generator: " + name);
        };
        if (j.contains("actions"))
            for (const auto& a : j.at("actions")) {
                if (!a.is_array() || a.size() != 4)
                    bad("action must be [source, [inputs], [outputs], target]");
                DABimodule::Action act;
                act.src = gen_index(str(a[0], "action source"));
                for (const auto& in : a[1]) {
                    int b = v.da.in_alg->basis_index(str(in, "action input"));
                    if (b < 0) bad("unknown input basis element");
                    act.inputs.push_back(b);
                }
                std::vector<std::string> names;
                for (const auto& c : a[2]) names.push_back(str(c, "action output"));
                act.out = element_from_names(*v.da.out_alg, names);
                act.tgt = gen_index(str(a[3], "action target"));
                v.da.actions.push_back(std::move(act));
            }
        return v;
    }
    if (kind == "typewriter") {
        v.kind = AnyValue::Kind::Typewriter;
        AlgebraPtr alg = parse_algebra_ref(field(j, "algebra"));
        TypeDStructure m0, m1;
        m0.alg = m1.alg = alg;
        parse_typed_body(field(j, "m0"), m0);
        parse_typed_body(field(j, "m1"), m1);
        CompMap d_f = parse_comp_list(field(j, "d_f"), m0, m1, *alg);
        CompMap d_h = parse_comp_list(field(j, "d_h"), m0, m1, *alg);
        ConeBlocks cr = parse_cone_blocks(field(j, "d_cr"), m0, m1, m0, m1, *alg);
        v.tw = make_typewriter(std::move(m0), std::move(m1), std::move(d_f), std::move(d_h),
                               std::move(cr));
        return v;
    }
    if (kind == "morphism" || kind == "homotopy") {
        std::string flavor = str(field(j, "flavor"), "flavor");
        bool is_dd = flavor == "dd";
        if (!is_dd && flavor != "typed") bad("flavor must be \"typed\" or \"dd\"");
        TypeDStructure src, tgt;
        AlgebraPtr left, coeff_alg;
        if (is_dd) {
            left = parse_algebra_ref(field(j, "left_algebra"));
            DDBimodule sdd = dd_create(left), tdd = dd_create(left);
            parse_dd_generators(field(j, "source"), sdd);
            {
                // arrows are nested inside the body objects
                const json& sb = field(j, "source");
                parse_dd_arrows(sb, sdd);
                DDBimodule& t = tdd;
                const json& tb = field(j, "target");
                parse_dd_generators(tb, t);
                parse_dd_arrows(tb, t);
            }
            src = sdd.flat;
            tgt = tdd.flat;
            coeff_alg = sdd.tensor;
        } else {
            coeff_alg = parse_algebra_ref(field(j, "algebra"));
            src.alg = tgt.alg = coeff_alg;
            parse_typed_body(field(j, "source"), src);
            parse_typed_body(field(j, "target"), tgt);
        }
        auto parse_comps = [&](const json& arr) {
            if (!is_dd) return parse_comp_list(arr, src, tgt, *coeff_alg);
            CompMap out;
            int dimR = int(torus_algebra()->dim());
            int nv = int(torus_algebra()->vertex_count());
            for (const auto& a : arr) {
                if (!a.is_array() || a.size() != 4)
                    bad("dd component must be [source, target, [left], right]");
                int s = src.gen_index(str(a[0], "component source"));
                int t = tgt.gen_index(str(a[1], "component target"));
                if (s < 0 || t < 0) bad("component references unknown generator");
                std::vector<std::string> names;
                for (const auto& c : a[2]) names.push_back(str(c, "left coefficient"));
                BitVec leftel = element_from_names(*left, names);
                int label = parse_right_label(str(a[3], "right coefficient"),
                                              src.gens[s].idem % nv);
                BitVec coeff(coeff_alg->dim());
                for (auto p : leftel.ones()) coeff.flip(p * std::size_t(dimR) + std::size_t(label));
                comp_put(out, {s, t}, coeff);
            }
            return out;
        };
        if (kind == "morphism") {
            v.kind = AnyValue::Kind::Morphism;
            v.morphism.is_dd = is_dd;
            v.morphism.left = left;
            CompMap comps = parse_comps(field(j, "components"));
            v.morphism.mor = TypeDMorphism{std::move(src), std::move(tgt), std::move(comps)};
        } else {
            v.kind = AnyValue::Kind::Homotopy;
            v.homotopy.is_dd = is_dd;
            v.homotopy.left = left;
            CompMap phi = parse_comps(field(j, "phi"));
            CompMap psi = parse_comps(field(j, "psi"));
            CompMap h = parse_comps(field(j, "h"));
            v.homotopy.phi = TypeDMorphism{src, tgt, std::move(phi)};
            v.homotopy.psi = TypeDMorphism{src, tgt, std::move(psi)};
            v.homotopy.h = TypeDMorphism{std::move(src), std::move(tgt), std::move(h)};
        }
        return v;
    }
    if (kind == "flip") {
        v.kind = AnyValue::Kind::Flip;
        AlgebraPtr triv = trivial_algebra();
        TypeDStructure complex;
        complex.alg = triv;
        parse_typed_body(field(j, "complex"), complex);
        CompMap u = parse_comp_list(field(j, "u"), complex, complex, *triv);
        CompMap vv = parse_comp_list(field(j, "v"), complex, complex, *triv);
        v.flip.complex = complex;
        v.flip.u = TypeDMorphism{complex, complex, std::move(u)};
        v.flip.v = TypeDMorphism{complex, complex, std::move(vv)};
        ConeBlocks fb =
            parse_cone_blocks(field(j, "flip"), complex, complex, complex, complex, *triv);
        int n = int(complex.gens.size());
        TypeDStructure cone_u = cone_shape(complex, complex, v.flip.u.comps);
        TypeDStructure cone_v = cone_shape(complex, complex, v.flip.v.comps);
        v.flip.flip = TypeDMorphism{cone_u, cone_v, join_cone_map(fb, n, n)};
        if (j.contains("inverse")) {
            const json& inv = j.at("inverse");
            FlipModule::InverseData data;
            ConeBlocks ib =
                parse_cone_blocks(field(inv, "inverse"), complex, complex, complex, complex, *triv);
            data.inverse = TypeDMorphism{cone_v, cone_u, join_cone_map(ib, n, n)};
            auto parse_endo = [&](const json& ej, const TypeDStructure& on) {
                CompMap comps;
                auto block = [&](const char* key, int so, int to) {
                    if (!ej.contains(key)) return;
                    CompMap b = parse_comp_list(ej.at(key), complex, complex, *triv);
                    for (const auto& [k, val] : b)
                        comp_put(comps, {k.first + so, k.second + to}, val);
                };
                block("00", 0, 0);
                block("01", 0, n);
                block("10", n, 0);
                block("11", n, n);
                return TypeDMorphism{on, on, std::move(comps)};
            };
            data.h_fwd = parse_endo(field(inv, "h_fwd"), cone_u);
            data.h_bwd = parse_endo(field(inv, "h_bwd"), cone_v);
            v.flip.inverse = std::move(data);
        }
        return v;
    }
    if (kind == "generalized") {
        v.kind = AnyValue::Kind::Generalized;
        AlgebraPtr left = parse_algebra_ref(field(j, "left_algebra"));
        // Reuse the dd generator syntax for the module skeleton.
        DDBimodule skeleton = dd_create(left);
        parse_dd_generators(j, skeleton);
        CoefficientSystem& base = v.generalized.base;
        base.left = left;
        for (std::size_t i = 0; i < skeleton.flat.gens.size(); ++i) {
            base.gens.push_back({skeleton.flat.gens[i].name, skeleton.left_vertex(int(i))});
            base.right_side.push_back(skeleton.right_side(int(i)));
        }
        TypeDStructure skel;  // only used for name lookup in component lists
        skel.alg = left;
        skel.gens = base.gens;
        const json& bj = field(j, "base");
        const TorusLabels& l = torus_labels();
        auto block = [&](const char* key) {
            return bj.contains(key) ? parse_comp_list(bj.at(key), skel, skel, *left) : CompMap{};
        };
        CompMap d0 = block("1");
        for (const auto& [k, val] : d0) {
            int side = base.right_side[k.first];
            comp_put(base.maps[side == 0 ? l.i0 : l.i1], k, val);
        }
        base.maps[l.f] = block("f");
        base.maps[l.g] = block("g");
        base.maps[l.h] = block("h");
        base.maps[l.fg] = block("fg");
        base.maps[l.gh] = block("gh");
        base.maps[l.fgh] = block("fgh");
        if (j.contains("extended")) {
            for (const auto& [key, arr] : j.at("extended").items())
                v.generalized.extended[key] = parse_comp_list(arr, skel, skel, *left);
        }
        if (j.contains("stored")) {
            for (const auto& [key, arr] : j.at("stored").items())
                v.generalized.stored_only[key] = parse_comp_list(arr, skel, skel, *left);
        }
        return v;
    }
    bad("unknown kind: " + kind);
}

// ---- top-level serialize -------------------------------------------------

namespace {

ordered_json serialize_typed_file(const TypeDStructure& n) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "typed";
    out["algebra"] = serialize_algebra_ref(n.alg);
    ordered_json body = serialize_typed_body(n);
    out["generators"] = body["generators"];
    out["arrows"] = body["arrows"];
    return out;
}

ordered_json serialize_dd_file(const DDBimodule& dd) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "dd";
    out["left_algebra"] = serialize_algebra_ref(dd.left);
    out["generators"] = serialize_dd_generators(dd);
    out["arrows"] = serialize_dd_arrows(dd);
    return out;
}

ordered_json serialize_typewriter_file(const Typewriter& tw) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "typewriter";
    out["algebra"] = serialize_algebra_ref(tw.m0.alg);
    out["m0"] = serialize_typed_body(tw.m0);
    out["m1"] = serialize_typed_body(tw.m1);
    out["d_f"] = serialize_comp_list(tw.m0, tw.m1, *tw.m0.alg, tw.d_f.comps);
    out["d_h"] = serialize_comp_list(tw.m0, tw.m1, *tw.m0.alg, tw.d_h.comps);
    int n0 = int(tw.m0.gens.size());
    ConeBlocks cr = split_cone_map(tw.d_cr.comps, n0, n0);
    out["d_cr"] = serialize_cone_blocks(cr, tw.m0, tw.m1, tw.m0, tw.m1, *tw.m0.alg);
    return out;
}

ordered_json serialize_da_file(const DABimodule& da) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "da";
    out["out_algebra"] = serialize_algebra_ref(da.out_alg);
    out["in_algebra"] = serialize_algebra_ref(da.in_alg);
    std::vector<int> order(da.gens.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return da.gens[a].name < da.gens[b].name; });
    ordered_json gens = ordered_json::array();
    for (int i : order)
        gens.push_back({da.gens[i].name, da.out_alg->vertex_name(da.gens[i].out_idem),
                        da.in_alg->vertex_name(da.gens[i].in_idem)});
    out["generators"] = std::move(gens);
    std::vector<std::tuple<std::string, std::vector<std::string>, std::vector<std::string>,
                           std::string>>
        rows;
    for (const auto& a : da.actions) {
        std::vector<std::string> inputs;
        for (int b : a.inputs) inputs.push_back(da.in_alg->basis(b).name);
        rows.push_back({da.gens[a.src].name, std::move(inputs),
                        element_names(*da.out_alg, a.out), da.gens[a.tgt].name});
    }
    std::sort(rows.begin(), rows.end());
    ordered_json actions = ordered_json::array();
    for (const auto& [s, ins, outs, t] : rows) actions.push_back({s, ins, outs, t});
    out["actions"] = std::move(actions);
    return out;
}

ordered_json serialize_morphism_file(const AnyValue::MorphismFile& m) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "morphism";
    out["flavor"] = m.is_dd ? "dd" : "typed";
    auto dd_body = [&](const TypeDStructure& flat) {
        DDBimodule dd{m.left, torus_algebra(), flat.alg, flat};
        ordered_json body;
        body["generators"] = serialize_dd_generators(dd);
        body["arrows"] = serialize_dd_arrows(dd);
        return body;
    };
    auto dd_comps = [&](const TypeDMorphism& mor) {
        int dimR = int(torus_algebra()->dim());
        std::map<std::tuple<std::string, std::string, int>, BitVec> rows;
        for (const auto& [k, v] : mor.comps)
            for (auto bit : v.ones()) {
                auto key = std::tuple(mor.source.gens[k.first].name,
                                      mor.target.gens[k.second].name, int(bit) % dimR);
                auto [it, ins] = rows.try_emplace(key, BitVec(m.left->dim()));
                it->second.flip(bit / std::size_t(dimR));
            }
        ordered_json arr = ordered_json::array();
        for (const auto& [key, leftel] : rows)
            arr.push_back({std::get<0>(key), std::get<1>(key), element_names(*m.left, leftel),
                           right_label_name(std::get<2>(key))});
        return arr;
    };
    if (m.is_dd) {
        out["left_algebra"] = serialize_algebra_ref(m.left);
        out["source"] = dd_body(m.mor.source);
        out["target"] = dd_body(m.mor.target);
        out["components"] = dd_comps(m.mor);
    } else {
        out["algebra"] = serialize_algebra_ref(m.mor.source.alg);
        out["source"] = serialize_typed_body(m.mor.source);
        out["target"] = serialize_typed_body(m.mor.target);
        out["components"] =
            serialize_comp_list(m.mor.source, m.mor.target, *m.mor.source.alg, m.mor.comps);
    }
    return out;
}

ordered_json serialize_homotopy_file(const AnyValue::HomotopyFile& h) {
    AnyValue::MorphismFile as_mor{h.is_dd, h.left, h.phi};
    ordered_json out = serialize_morphism_file(as_mor);
    out["kind"] = "homotopy";
    out.erase("components");
    AnyValue::MorphismFile psi{h.is_dd, h.left, h.psi};
    AnyValue::MorphismFile hh{h.is_dd, h.left, h.h};
    out["phi"] = serialize_morphism_file(as_mor)["components"];
    out["psi"] = serialize_morphism_file(psi)["components"];
    out["h"] = serialize_morphism_file(hh)["components"];
    return out;
}

ordered_json serialize_flip_file(const FlipModule& f) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "flip";
    out["complex"] = serialize_typed_body(f.complex);
    const Algebra& triv = *f.complex.alg;
    out["u"] = serialize_comp_list(f.complex, f.complex, triv, f.u.comps);
    out["v"] = serialize_comp_list(f.complex, f.complex, triv, f.v.comps);
    int n = int(f.complex.gens.size());
    out["flip"] = serialize_cone_blocks(split_cone_map(f.flip.comps, n, n), f.complex, f.complex,
                                        f.complex, f.complex, triv);
    if (f.inverse) {
        ordered_json inv;
        inv["inverse"] = serialize_cone_blocks(split_cone_map(f.inverse->inverse.comps, n, n),
                                               f.complex, f.complex, f.complex, f.complex, triv);
        auto endo = [&](const TypeDMorphism& m) {
            ConeBlocks b = split_cone_map(m.comps, n, n);
            ordered_json e;
            e["00"] = serialize_comp_list(f.complex, f.complex, triv, b.fg);
            e["01"] = serialize_comp_list(f.complex, f.complex, triv, b.fgh);
            e["10"] = serialize_comp_list(f.complex, f.complex, triv, b.g);
            e["11"] = serialize_comp_list(f.complex, f.complex, triv, b.gh);
            return e;
        };
        inv["h_fwd"] = endo(f.inverse->h_fwd);
        inv["h_bwd"] = endo(f.inverse->h_bwd);
        out["inverse"] = std::move(inv);
    }
    return out;
}

ordered_json serialize_generalized_file(const GeneralizedCoefficientSystem& g) {
    ordered_json out;
    out["format"] = 1;
    out["kind"] = "generalized";
    out["left_algebra"] = serialize_algebra_ref(g.base.left);
    ordered_json gens = ordered_json::array();
    for (int i : sorted_gen_order(g.base.gens))
        gens.push_back({g.base.gens[i].name, g.base.left->vertex_name(g.base.gens[i].idem),
                        g.base.right_side[i] == 0 ? "0" : "1"});
    out["generators"] = std::move(gens);
    TypeDStructure skel;
    skel.alg = g.base.left;
    skel.gens = g.base.gens;
    const TorusLabels& l = torus_labels();
    ordered_json base;
    base["1"] = serialize_comp_list(skel, skel, *g.base.left, g.base.d_empty());
    base["f"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.f]);
    base["g"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.g]);
    base["h"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.h]);
    base["fg"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.fg]);
    base["gh"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.gh]);
    base["fgh"] = serialize_comp_list(skel, skel, *g.base.left, g.base.maps[l.fgh]);
    out["base"] = std::move(base);
    ordered_json ext;
    for (const auto& iv : unknown_intervals()) {
        auto it = g.extended.find(iv.key());
        ext[iv.key()] = serialize_comp_list(skel, skel, *g.base.left,
                                            it == g.extended.end() ? CompMap{} : it->second);
    }
    out["extended"] = std::move(ext);
    if (!g.stored_only.empty()) {
        ordered_json stored;
        for (const auto& [key, comps] : g.stored_only)
            stored[key] = serialize_comp_list(skel, skel, *g.base.left, comps);
        out["stored"] = std::move(stored);
    }
    return out;
}

} // namespace

ordered_json serialize_value(const AnyValue& v) {
    switch (v.kind) {
        case AnyValue::Kind::Algebra: {
            ordered_json out;
            out["format"] = 1;
            out["kind"] = "algebra";
            out["algebra"] = serialize_algebra_ref(v.algebra);
            return out;
        }
        case AnyValue::Kind::TypeD:
            return serialize_typed_file(v.typed);
        case AnyValue::Kind::DD:
            return serialize_dd_file(v.dd);
        case AnyValue::Kind::DA:
            return serialize_da_file(v.da);
        case AnyValue::Kind::Typewriter:
            return serialize_typewriter_file(v.tw);
        case AnyValue::Kind::Morphism:
            return serialize_morphism_file(v.morphism);
        case AnyValue::Kind::Homotopy:
            return serialize_homotopy_file(v.homotopy);
        case AnyValue::Kind::Flip:
            return serialize_flip_file(v.flip);
        case AnyValue::Kind::Generalized:
            return serialize_generalized_file(v.generalized);
    }
    fail(ErrorKind::Internal, "serialize_value: unknown kind");
}

std::string dump_canonical(const ordered_json& j) { return j.dump(2) + "\n"; }

AnyValue wrap_typed(TypeDStructure n) {
    AnyValue v;
    v.kind = AnyValue::Kind::TypeD;
    v.typed = std::move(n);
    return v;
}

AnyValue wrap_dd(DDBimodule m) {
    AnyValue v;
    v.kind = AnyValue::Kind::DD;
    v.dd = std::move(m);
    return v;
}

AnyValue wrap_typewriter(Typewriter tw) {
    AnyValue v;
    v.kind = AnyValue::Kind::Typewriter;
    v.tw = std::move(tw);
    return v;
}

AnyValue wrap_generalized(GeneralizedCoefficientSystem g) {
    AnyValue v;
    v.kind = AnyValue::Kind::Generalized;
    v.generalized = std::move(g);
    return v;
}

AnyValue resolve_model(const std::string& name) {
    if (name == "m") return wrap_typewriter(model_m());
    if (name == "cfdd-id") return wrap_dd(cfdd_identity());
    if (name == "torus" || name == "strands-torus" || name == "trivial") {
        AnyValue v;
        v.kind = AnyValue::Kind::Algebra;
        v.algebra = name == "torus" ? torus_algebra()
                    : name == "strands-torus" ? strand_algebra_torus()
                                              : trivial_algebra();
        return v;
    }
    fail(ErrorKind::ParseError, "unknown model: " + name);
}

std::vector<std::pair<std::string, std::string>> model_catalog() {
    return {{"torus", "algebra"},
            {"strands-torus", "algebra"},
            {"trivial", "algebra"},
            {"m", "typewriter"},
            {"cfdd-id", "dd"}};
}

CheckReport verify_algebra(const Algebra& a) {
    CheckReport report;
    std::size_t d = a.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                BitVec lhs = mul(a, mul(a, basis_element(a, int(i)), basis_element(a, int(j))),
                                 basis_element(a, int(k)));
                BitVec rhs = mul(a, basis_element(a, int(i)),
                                 mul(a, basis_element(a, int(j)), basis_element(a, int(k))));
                if (!(lhs == rhs))
                    report.violations.push_back("associativity fails on (" + a.basis(int(i)).name +
                                                ", " + a.basis(int(j)).name + ", " +
                                                a.basis(int(k)).name + ")");
            }
    BitVec unit(d);
    for (std::size_t v = 0; v < a.vertex_count(); ++v)
        unit.set(std::size_t(a.idempotent_of_vertex(int(v))));
    for (std::size_t i = 0; i < d; ++i) {
        BitVec b = basis_element(a, int(i));
        if (!(mul(a, unit, b) == b) || !(mul(a, b, unit) == b))
            report.violations.push_back("unit law fails on " + a.basis(int(i)).name);
    }
    return report;
}

CheckReport verify_value(const AnyValue& v) {
    switch (v.kind) {
        case AnyValue::Kind::Algebra:
            return verify_algebra(*v.algebra);
        case AnyValue::Kind::TypeD:
            return check_structure(v.typed);
        case AnyValue::Kind::DD:
            return dd_check(v.dd);
        case AnyValue::Kind::DA:
            return check_da(v.da);
        case AnyValue::Kind::Typewriter:
            return check_typewriter(v.tw);
        case AnyValue::Kind::Morphism: {
            CheckReport report;
            TypeDMorphism d = boundary(v.morphism.mor);
            for (const auto& [k, coeff] : d.comps)
                for (auto b : coeff.ones())
                    report.violations.push_back(
                        "morphism is not closed at " + v.morphism.mor.source.gens[k.first].name +
                        "->" + v.morphism.mor.target.gens[k.second].name + ": term " +
                        v.morphism.mor.source.alg->basis(int(b)).name);
            return report;
        }
        case AnyValue::Kind::Homotopy: {
            CheckReport report;
            if (!homotopy_check(v.homotopy.h, v.homotopy.phi, v.homotopy.psi))
                report.violations.push_back("dH differs from phi + psi");
            return report;
        }
        case AnyValue::Kind::Flip:
            return check_flip(v.flip);
        case AnyValue::Kind::Generalized:
            return check_generalized(v.generalized);
    }
    fail(ErrorKind::Internal, "verify_value: unknown kind");
}

} // namespace twk
