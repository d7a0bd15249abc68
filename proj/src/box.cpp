#include "twk/box.hpp"

#include <algorithm>
#include <map>

#include "twk/error.hpp"

namespace twk {

int DABimodule::max_arity() const {
    int m = 0;
    for (const auto& a : actions) m = std::max(m, int(a.inputs.size()));
    return m;
}

namespace {

// Actions keyed by (source, input sequence), outputs merged mod 2.
using ActionTable = std::map<std::pair<int, std::vector<int>>, std::map<int, BitVec>>;

ActionTable action_table(const DABimodule& p) {
    ActionTable t;
    for (const auto& a : p.actions) {
        auto& outs = t[{a.src, a.inputs}];
        auto it = outs.find(a.tgt);
        if (it == outs.end())
            outs.emplace(a.tgt, a.out);
        else {
            it->second ^= a.out;
            if (it->second.none()) outs.erase(it);
        }
    }
    return t;
}

const std::map<int, BitVec>& lookup(const ActionTable& t, int src, const std::vector<int>& inputs) {
    static const std::map<int, BitVec> empty;
    auto it = t.find({src, inputs});
    return it == t.end() ? empty : it->second;
}

} // namespace

CheckReport check_da(const DABimodule& p) {
    CheckReport report;
    const Algebra& out = *p.out_alg;
    const Algebra& in = *p.in_alg;
    for (const auto& a : p.actions) {
        const auto& src = p.gens[a.src];
        const auto& tgt = p.gens[a.tgt];
        for (auto b : a.out.ones())
            if (out.basis(int(b)).source != src.out_idem || out.basis(int(b)).target != tgt.out_idem)
                report.violations.push_back("action from " + src.name +
                                            " has idempotent-incompatible output term " +
                                            out.basis(int(b)).name);
        int at = src.in_idem;
        for (int b : a.inputs) {
            if (in.basis(b).source != at)
                report.violations.push_back("action from " + src.name +
                                            " has non-composable input sequence");
            at = in.basis(b).target;
        }
        if (at != tgt.in_idem)
            report.violations.push_back("action from " + src.name + " to " + tgt.name +
                                        " ends at the wrong right idempotent");
    }
    if (!report.ok()) return report;

    ActionTable table = action_table(p);
    int max_len = 2 * p.max_arity();

    // All composable basis sequences from `vertex` up to max_len, checked
    // against the structure relation for every generator at that vertex.
    for (std::size_t x = 0; x < p.gens.size(); ++x) {
        std::vector<int> seq;
        auto relation_at = [&](const std::vector<int>& s) {
            std::map<std::pair<int, int>, int> accum;  // (target gen, out basis) -> parity
            for (std::size_t i = 0; i <= s.size(); ++i) {
                std::vector<int> pre(s.begin(), s.begin() + i);
                std::vector<int> suf(s.begin() + i, s.end());
                for (const auto& [y, c1] : lookup(table, int(x), pre))
                    for (const auto& [z, c2] : lookup(table, y, suf))
                        for (auto q1 : c1.ones())
                            for (auto q2 : c2.ones()) {
                                int prod = out.table(int(q1), int(q2));
                                if (prod >= 0) accum[{z, prod}] ^= 1;
                            }
            }
            for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                int b = in.table(s[i], s[i + 1]);
                if (b < 0) continue;
                std::vector<int> merged(s.begin(), s.begin() + i);
                merged.push_back(b);
                merged.insert(merged.end(), s.begin() + i + 2, s.end());
                for (const auto& [z, c] : lookup(table, int(x), merged))
                    for (auto q : c.ones()) accum[{z, int(q)}] ^= 1;
            }
            for (const auto& [k, parity] : accum)
                if (parity) {
                    std::string inputs;
                    for (int b : s) inputs += (inputs.empty() ? "" : ",") + in.basis(b).name;
                    report.violations.push_back("structure relation fails at " + p.gens[x].name +
                                                " on inputs (" + inputs + "): output term " +
                                                out.basis(k.second).name + " to " +
                                                p.gens[k.first].name);
                }
        };
        auto walk = [&](auto&& self, int vertex) -> void {
            relation_at(seq);
            if (int(seq.size()) == max_len) return;
            for (std::size_t b = 0; b < in.dim(); ++b) {
                if (in.basis(int(b)).source != vertex) continue;
                seq.push_back(int(b));
                self(self, in.basis(int(b)).target);
                seq.pop_back();
            }
        };
        walk(walk, p.gens[x].in_idem);
    }
    return report;
}

DABimodule identity_da(const AlgebraPtr& a) {
    DABimodule p;
    p.out_alg = p.in_alg = a;
    for (std::size_t v = 0; v < a->vertex_count(); ++v)
        p.gens.push_back({a->vertex_name(int(v)), int(v), int(v)});
    for (std::size_t b = 0; b < a->dim(); ++b) {
        DABimodule::Action act;
        act.src = a->basis(int(b)).source;
        act.inputs = {int(b)};
        act.out = basis_element(*a, int(b));
        act.tgt = a->basis(int(b)).target;
        p.actions.push_back(std::move(act));
    }
    return p;
}

DABimodule elementary_module(const AlgebraPtr& alg, int vertex) {
    if (vertex < 0 || vertex >= int(alg->vertex_count()))
        fail(ErrorKind::WrongAlgebra, "elementary_module: vertex out of range");
    DABimodule p;
    p.out_alg = trivial_algebra();
    p.in_alg = alg;
    p.gens.push_back({"s", 0, vertex});
    DABimodule::Action act;
    act.src = 0;
    act.inputs = {alg->idempotent_of_vertex(vertex)};
    act.out = basis_element(*p.out_alg, 0);
    act.tgt = 0;
    p.actions.push_back(std::move(act));
    return p;
}

namespace {

struct PairedGens {
    std::vector<Generator> gens;                 // boxed generators
    std::map<std::pair<int, int>, int> index;    // (p gen, structure gen) -> boxed index
};

PairedGens paired_generators(const DABimodule& p, const std::vector<Generator>& gens,
                             const std::vector<int>& right_idem) {
    PairedGens out;
    for (std::size_t i = 0; i < p.gens.size(); ++i)
        for (std::size_t x = 0; x < gens.size(); ++x) {
            if (p.gens[i].in_idem != right_idem[x]) continue;
            out.index[{int(i), int(x)}] = int(out.gens.size());
            out.gens.push_back({p.gens[i].name + "|" + gens[x].name, p.gens[i].out_idem});
        }
    return out;
}

void require_cap(const DABimodule& p, int cap) {
    if (p.max_arity() > cap)
        fail(ErrorKind::NonTerminatingBoxTensor,
             "box tensor: action arity " + std::to_string(p.max_arity()) +
                 " exceeds the expansion cap " + std::to_string(cap));
}

// Parity-weighted endpoints of delta-paths through `arrows` consuming the
// label sequence; `carried` accumulates the right torus label when dimR > 1.
// State space: (generator, carried torus basis index).
using Frontier = std::map<std::pair<int, int>, int>;

Frontier walk_paths(const CompMap& arrows, int start, int start_label,
                    const std::vector<int>& inputs, int dimR) {
    Frontier frontier{{{start, start_label}, 1}};
    for (int a : inputs) {
        Frontier next;
        for (const auto& [state, parity] : frontier) {
            for (const auto& [k, coeff] : arrows) {
                if (k.first != state.first) continue;
                for (auto bit : coeff.ones()) {
                    int left = int(bit) / dimR;
                    if (left != a) continue;
                    int carried = state.second;
                    if (dimR > 1) {
                        carried = torus_algebra()->table(state.second, int(bit) % dimR);
                        if (carried < 0) continue;
                    }
                    next[{k.second, carried}] ^= parity;
                }
            }
        }
        frontier.clear();
        for (const auto& [state, parity] : next)
            if (parity) frontier[state] = 1;
    }
    return frontier;
}

} // namespace

TypeDStructure box_type_d(const DABimodule& p, const TypeDStructure& n, int cap) {
    if (!p.in_alg->same_as(*n.alg))
        fail(ErrorKind::WrongAlgebra, "box_type_d: input algebra does not match the structure");
    require_cap(p, cap);
    std::vector<int> idems;
    for (const auto& g : n.gens) idems.push_back(g.idem);
    PairedGens pg = paired_generators(p, n.gens, idems);
    TypeDStructure out;
    out.alg = p.out_alg;
    out.gens = pg.gens;
    // Arrow labels live in n.alg directly; treat them as pairs with a trivial
    // carried factor.
    for (const auto& act : p.actions) {
        for (std::size_t x = 0; x < n.gens.size(); ++x) {
            auto it = pg.index.find({act.src, int(x)});
            if (it == pg.index.end()) continue;
            Frontier ends = walk_paths(n.arrows, int(x), 0, act.inputs, 1);
            for (const auto& [state, parity] : ends) {
                if (!parity) continue;
                auto jt = pg.index.find({act.tgt, state.first});
                if (jt == pg.index.end())
                    fail(ErrorKind::Internal, "box_type_d: path ends outside paired generators");
                comp_put(out.arrows, {it->second, jt->second}, act.out);
            }
        }
    }
    return out;
}

DDBimodule box_dd(const DABimodule& p, const DDBimodule& m, int cap) {
    if (!p.in_alg->same_as(*m.left))
        fail(ErrorKind::WrongAlgebra, "box_dd: input algebra does not match the left algebra");
    require_cap(p, cap);
    int dimR = m.right_dim();
    std::vector<int> left_idems;
    for (std::size_t i = 0; i < m.flat.gens.size(); ++i) left_idems.push_back(m.left_vertex(int(i)));
    PairedGens pg = paired_generators(p, m.flat.gens, left_idems);

    DDBimodule out = dd_create(p.out_alg);
    for (std::size_t i = 0; i < p.gens.size(); ++i)
        for (std::size_t x = 0; x < m.flat.gens.size(); ++x) {
            auto it = pg.index.find({int(i), int(x)});
            if (it == pg.index.end()) continue;
            dd_add_generator(out, pg.gens[it->second].name, p.gens[i].out_idem,
                             m.right_side(int(x)));
        }
    for (const auto& act : p.actions) {
        for (std::size_t x = 0; x < m.flat.gens.size(); ++x) {
            auto it = pg.index.find({act.src, int(x)});
            if (it == pg.index.end()) continue;
            int start_label = torus_algebra()->idempotent_of_vertex(m.right_side(int(x)));
            Frontier ends = walk_paths(m.flat.arrows, int(x), start_label, act.inputs, dimR);
            for (const auto& [state, parity] : ends) {
                if (!parity) continue;
                auto jt = pg.index.find({act.tgt, state.first});
                if (jt == pg.index.end())
                    fail(ErrorKind::Internal, "box_dd: path ends outside paired generators");
                dd_add_arrow(out, it->second, jt->second, act.out, state.second);
            }
        }
    }
    return out;
}

namespace {

// Walks a path with phi inserted at step `pos`: steps before use src arrows,
// the step at `pos` uses phi, later steps use tgt arrows.
Frontier walk_with_insertion(const CompMap& src_arrows, const CompMap& tgt_arrows,
                             const CompMap& phi, int pos, int start, int start_label,
                             const std::vector<int>& inputs, int dimR) {
    Frontier frontier{{{start, start_label}, 1}};
    for (std::size_t step = 0; step < inputs.size(); ++step) {
        const CompMap& edges =
            int(step) < pos ? src_arrows : (int(step) == pos ? phi : tgt_arrows);
        Frontier next;
        for (const auto& [state, parity] : frontier) {
            for (const auto& [k, coeff] : edges) {
                if (k.first != state.first) continue;
                for (auto bit : coeff.ones()) {
                    if (int(bit) / dimR != inputs[step]) continue;
                    int carried = state.second;
                    if (dimR > 1) {
                        carried = torus_algebra()->table(state.second, int(bit) % dimR);
                        if (carried < 0) continue;
                    }
                    next[{k.second, carried}] ^= parity;
                }
            }
        }
        frontier.clear();
        for (const auto& [state, parity] : next)
            if (parity) frontier[state] = 1;
    }
    return frontier;
}

} // namespace

TypeDMorphism box_morphism(const DABimodule& p, const TypeDMorphism& phi, int cap) {
    bool over_tensor = phi.source.alg->same_as(*tensor_product(p.in_alg, torus_algebra()));
    if (!over_tensor && !phi.source.alg->same_as(*p.in_alg))
        fail(ErrorKind::WrongAlgebra, "box_morphism: morphism algebra does not match");
    require_cap(p, cap);
    int dimR = over_tensor ? int(torus_algebra()->dim()) : 1;

    auto idems_of = [&](const TypeDStructure& n) {
        std::vector<int> out;
        for (const auto& g : n.gens)
            out.push_back(over_tensor ? g.idem / int(torus_algebra()->vertex_count()) : g.idem);
        return out;
    };
    PairedGens src_pg = paired_generators(p, phi.source.gens, idems_of(phi.source));
    PairedGens tgt_pg = paired_generators(p, phi.target.gens, idems_of(phi.target));

    TypeDStructure boxed_src, boxed_tgt;
    CompMap comps;
    for (const auto& act : p.actions) {
        if (act.inputs.empty()) continue;  // no position for the insertion
        for (std::size_t x = 0; x < phi.source.gens.size(); ++x) {
            auto it = src_pg.index.find({act.src, int(x)});
            if (it == src_pg.index.end()) continue;
            int start_label = 0;
            if (over_tensor) {
                int rv = phi.source.gens[x].idem % int(torus_algebra()->vertex_count());
                start_label = torus_algebra()->idempotent_of_vertex(rv);
            }
            for (int pos = 0; pos < int(act.inputs.size()); ++pos) {
                Frontier ends =
                    walk_with_insertion(phi.source.arrows, phi.target.arrows, phi.comps, pos,
                                        int(x), start_label, act.inputs, dimR);
                for (const auto& [state, parity] : ends) {
                    if (!parity) continue;
                    auto jt = tgt_pg.index.find({act.tgt, state.first});
                    if (jt == tgt_pg.index.end())
                        fail(ErrorKind::Internal, "box_morphism: path ends outside paired generators");
                    if (over_tensor) {
                        BitVec coeff(tensor_product(p.out_alg, torus_algebra())->dim());
                        for (auto o : act.out.ones())
                            coeff.flip(o * torus_algebra()->dim() + std::size_t(state.second));
                        comp_put(comps, {it->second, jt->second}, coeff);
                    } else {
                        comp_put(comps, {it->second, jt->second}, act.out);
                    }
                }
            }
        }
    }
    if (over_tensor) {
        // Rebuild endpoints as flattened DD bimodules over (out_alg, T).
        DDBimodule s = box_dd(p, DDBimodule{p.in_alg, torus_algebra(),
                                            tensor_product(p.in_alg, torus_algebra()), phi.source},
                              cap);
        DDBimodule t = box_dd(p, DDBimodule{p.in_alg, torus_algebra(),
                                            tensor_product(p.in_alg, torus_algebra()), phi.target},
                              cap);
        return TypeDMorphism{std::move(s.flat), std::move(t.flat), std::move(comps)};
    }
    boxed_src = box_type_d(p, phi.source, cap);
    boxed_tgt = box_type_d(p, phi.target, cap);
    return TypeDMorphism{std::move(boxed_src), std::move(boxed_tgt), std::move(comps)};
}

namespace {

// Rewrites box(Cone(phi)) as Cone(box(phi)): "p|0.x" <-> "0.p|x". Returns the
// index translation from boxed-cone indices to cone-of-boxed indices and
// verifies the two structures agree arrow-for-arrow.
std::vector<int> identify_cone(const TypeDStructure& boxed_cone, const TypeDStructure& cone_boxed) {
    if (boxed_cone.gens.size() != cone_boxed.gens.size())
        fail(ErrorKind::ConeIdentificationFailed, "boxed cone has wrong generator count");
    std::vector<int> translate(boxed_cone.gens.size(), -1);
    std::map<std::string, std::string> rename;
    for (std::size_t i = 0; i < boxed_cone.gens.size(); ++i) {
        const std::string& name = boxed_cone.gens[i].name;  // "p|<slot>.x"
        auto bar = name.find('|');
        if (bar == std::string::npos || bar + 2 >= name.size() || name[bar + 2] != '.')
            fail(ErrorKind::ConeIdentificationFailed, "unexpected boxed generator name: " + name);
        std::string slot = name.substr(bar + 1, 2);  // "0." or "1."
        std::string flipped = slot + name.substr(0, bar) + "|" + name.substr(bar + 3);
        int j = cone_boxed.gen_index(flipped);
        if (j < 0)
            fail(ErrorKind::ConeIdentificationFailed,
                 "boxed cone generator has no counterpart: " + name);
        translate[i] = j;
        rename[name] = flipped;
    }
    if (!(rename_generators(boxed_cone, rename) == cone_boxed))
        fail(ErrorKind::ConeIdentificationFailed,
             "box(Cone(phi)) and Cone(box(phi)) disagree on arrows");
    return translate;
}

} // namespace

Typewriter box_typewriter(const DABimodule& p, const Typewriter& m, int cap) {
    TypeDMorphism bdf = box_morphism(p, m.d_f, cap);
    TypeDMorphism bdh = box_morphism(p, m.d_h, cap);
    TypeDMorphism bcr = box_morphism(p, m.d_cr, cap);

    TypeDStructure cone_f = cone(bdf);
    TypeDStructure cone_h = cone(bdh);
    std::vector<int> src_translate = identify_cone(bcr.source, cone_f);
    std::vector<int> tgt_translate = identify_cone(bcr.target, cone_h);
    CompMap comps;
    for (const auto& [k, v] : bcr.comps)
        comp_put(comps, {src_translate[k.first], tgt_translate[k.second]}, v);

    Typewriter out;
    out.m0 = bdf.source;
    out.m1 = bdf.target;
    out.d_f = std::move(bdf);
    out.d_h = std::move(bdh);
    out.d_cr = TypeDMorphism{std::move(cone_f), std::move(cone_h), std::move(comps)};
    return out;
}

} // namespace twk
