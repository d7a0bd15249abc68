#include "twk/dd.hpp"

#include <algorithm>

#include "twk/error.hpp"

namespace twk {

DDBimodule dd_create(const AlgebraPtr& left) {
    DDBimodule dd;
    dd.left = left;
    dd.right = torus_algebra();
    dd.tensor = tensor_product(left, dd.right);
    dd.flat.alg = dd.tensor;
    return dd;
}

void dd_add_generator(DDBimodule& dd, const std::string& name, int left_vertex, int right_side) {
    dd.flat.gens.push_back({name, left_vertex * int(dd.right->vertex_count()) + right_side});
}

void dd_add_arrow(DDBimodule& dd, int src, int tgt, const BitVec& left_elem, int right_basis) {
    BitVec coeff(dd.tensor->dim());
    for (auto l : left_elem.ones()) coeff.flip(l * dd.right->dim() + std::size_t(right_basis));
    dd.flat.add_arrow(src, tgt, coeff);
}

CheckReport dd_check(const DDBimodule& m) { return check_structure(m.flat); }

const TorusLabels& torus_labels() {
    static TorusLabels l = [] {
        const Algebra& t = *torus_algebra();
        TorusLabels out;
        out.i0 = t.basis_index("i0");
        out.i1 = t.basis_index("i1");
        out.f = t.basis_index("f");
        out.g = t.basis_index("g");
        out.h = t.basis_index("h");
        out.fg = t.basis_index("fg");
        out.gh = t.basis_index("gh");
        out.fgh = t.basis_index("fgh");
        return out;
    }();
    return l;
}

CompMap CoefficientSystem::d_empty() const {
    const TorusLabels& l = torus_labels();
    return comp_add(maps[l.i0], maps[l.i1]);
}

namespace {

// Right vertex reached by following torus arrow i; arrows 1 (f) and 3 (h)
// run side 0 -> 1, arrows 2 (g) and 0 run side 1 -> 0.
int arrow_source_side(int i) { return (i == 1 || i == 3) ? 0 : 1; }
int arrow_target_side(int i) { return 1 - arrow_source_side(i); }

// Sides required of entries in maps[t]; torus vertices coincide with sides.
std::pair<int, int> label_sides(int t) {
    const auto& b = torus_algebra()->basis(t);
    return {b.source, b.target};
}

struct LabelName {
    int index;
    std::string name;
};

std::vector<LabelName> nonidem_labels() {
    const TorusLabels& l = torus_labels();
    return {{l.f, "f"}, {l.g, "g"}, {l.h, "h"}, {l.fg, "fg"}, {l.gh, "gh"}, {l.fgh, "fgh"}};
}

void check_map_shape(const CoefficientSystem& c, const CompMap& m, int t, const std::string& label,
                     CheckReport& report) {
    auto [dom, cod] = label_sides(t);
    const Algebra& a = *c.left;
    for (const auto& [k, coeff] : m) {
        if (c.right_side[k.first] != dom || c.right_side[k.second] != cod)
            report.violations.push_back("map D_" + label + " entry " + c.gens[k.first].name +
                                        "->" + c.gens[k.second].name + " has wrong sides");
        for (auto b : coeff.ones())
            if (a.basis(int(b)).source != c.gens[k.first].idem ||
                a.basis(int(b)).target != c.gens[k.second].idem)
                report.violations.push_back("map D_" + label + " entry " + c.gens[k.first].name +
                                            "->" + c.gens[k.second].name +
                                            " has idempotent-incompatible term " +
                                            a.basis(int(b)).name);
    }
}

void check_zero(const CoefficientSystem& c, const CompMap& m, const std::string& relation,
                CheckReport& report) {
    const Algebra& a = *c.left;
    for (const auto& [k, coeff] : m)
        for (auto b : coeff.ones())
            report.violations.push_back("coefficient relation " + relation + " fails at " +
                                        c.gens[k.first].name + "->" + c.gens[k.second].name +
                                        ": term " + a.basis(int(b)).name);
}

} // namespace

CheckReport check_coefficients(const CoefficientSystem& c) {
    CheckReport report;
    const Algebra& a = *c.left;
    const TorusLabels& l = torus_labels();
    check_map_shape(c, c.maps[l.i0], l.i0, "1", report);
    check_map_shape(c, c.maps[l.i1], l.i1, "1", report);
    for (const auto& [t, name] : nonidem_labels()) check_map_shape(c, c.maps[t], t, name, report);

    CompMap d0 = c.d_empty();
    auto anticommutator = [&](const CompMap& x) {
        return comp_add(comp_mul(a, d0, x), comp_mul(a, x, d0));
    };
    check_zero(c, comp_mul(a, d0, d0), "1", report);
    check_zero(c, anticommutator(c.maps[l.f]), "f", report);
    check_zero(c, anticommutator(c.maps[l.g]), "g", report);
    check_zero(c, anticommutator(c.maps[l.h]), "h", report);
    check_zero(c,
               comp_add(anticommutator(c.maps[l.fg]),
                        comp_mul(a, c.maps[l.f], c.maps[l.g])),
               "fg", report);
    check_zero(c,
               comp_add(anticommutator(c.maps[l.gh]),
                        comp_mul(a, c.maps[l.g], c.maps[l.h])),
               "gh", report);
    check_zero(c,
               comp_add(anticommutator(c.maps[l.fgh]),
                        comp_add(comp_mul(a, c.maps[l.f], c.maps[l.gh]),
                                 comp_mul(a, c.maps[l.fg], c.maps[l.h]))),
               "fgh", report);
    return report;
}

DDBimodule from_coefficients(const CoefficientSystem& c) {
    CheckReport report = check_coefficients(c);
    if (!report.ok())
        fail(ErrorKind::CoefficientRelationViolated, report.violations.front());
    DDBimodule dd = dd_create(c.left);
    for (std::size_t i = 0; i < c.gens.size(); ++i)
        dd_add_generator(dd, c.gens[i].name, c.gens[i].idem, c.right_side[i]);
    for (int t = 0; t < 8; ++t)
        for (const auto& [k, coeff] : c.maps[t]) dd_add_arrow(dd, k.first, k.second, coeff, t);
    return dd;
}

CoefficientSystem to_coefficients(const DDBimodule& m) {
    CoefficientSystem c;
    c.left = m.left;
    int dimR = m.right_dim();
    for (std::size_t i = 0; i < m.flat.gens.size(); ++i) {
        c.gens.push_back({m.flat.gens[i].name, m.left_vertex(int(i))});
        c.right_side.push_back(m.right_side(int(i)));
    }
    for (const auto& [k, coeff] : m.flat.arrows) {
        for (auto bit : coeff.ones()) {
            int t = int(bit) % dimR;
            BitVec left_elem(m.left->dim());
            left_elem.set(std::size_t(int(bit) / dimR));
            comp_put(c.maps[t], k, left_elem);
        }
    }
    return c;
}

std::string CyclicInterval::key() const {
    std::string s;
    for (int k = 0; k < len; ++k) s += char('0' + (start + k) % 4);
    return s;
}

int CyclicInterval::domain_side() const { return arrow_source_side(start); }
int CyclicInterval::codomain_side() const { return arrow_target_side((start + len - 1) % 4); }

std::vector<CyclicInterval> proper_intervals() {
    std::vector<CyclicInterval> out;
    for (int len = 1; len <= 3; ++len)
        for (int start = 0; start < 4; ++start) out.push_back({start, len});
    return out;
}

std::vector<CyclicInterval> unknown_intervals() {
    std::vector<CyclicInterval> out;
    for (const auto& i : proper_intervals()) {
        bool has_zero = false;
        for (int k = 0; k < i.len; ++k)
            if ((i.start + k) % 4 == 0) has_zero = true;
        if (has_zero) out.push_back(i);
    }
    for (int start = 0; start < 4; ++start) out.push_back({start, 4});
    return out;
}

namespace {

// Torus label for an interval inside {1,2,3}, or -1.
int known_label(const CyclicInterval& i) {
    const TorusLabels& l = torus_labels();
    if (i.start == 1 && i.len == 1) return l.f;
    if (i.start == 2 && i.len == 1) return l.g;
    if (i.start == 3 && i.len == 1) return l.h;
    if (i.start == 1 && i.len == 2) return l.fg;
    if (i.start == 2 && i.len == 2) return l.gh;
    if (i.start == 1 && i.len == 3) return l.fgh;
    return -1;
}

const CompMap& empty_comp_map() {
    static const CompMap empty;
    return empty;
}

} // namespace

const CompMap& GeneralizedCoefficientSystem::interval_map(const CyclicInterval& i) const {
    int t = known_label(i);
    if (t >= 0) return base.maps[t];
    auto it = extended.find(i.key());
    return it == extended.end() ? empty_comp_map() : it->second;
}

CheckReport check_generalized(const GeneralizedCoefficientSystem& g) {
    CheckReport report = check_coefficients(g.base);
    const Algebra& a = *g.base.left;
    CompMap d0 = g.base.d_empty();

    // Shape of extended maps.
    for (const auto& i : unknown_intervals()) {
        const CompMap& m = g.interval_map(i);
        for (const auto& [k, coeff] : m) {
            if (g.base.right_side[k.first] != i.domain_side() ||
                g.base.right_side[k.second] != i.codomain_side())
                report.violations.push_back("map D_" + i.key() + " entry " +
                                            g.base.gens[k.first].name + "->" +
                                            g.base.gens[k.second].name + " has wrong sides");
            for (auto b : coeff.ones())
                if (a.basis(int(b)).source != g.base.gens[k.first].idem ||
                    a.basis(int(b)).target != g.base.gens[k.second].idem)
                    report.violations.push_back("map D_" + i.key() + " entry " +
                                                g.base.gens[k.first].name + "->" +
                                                g.base.gens[k.second].name +
                                                " has idempotent-incompatible term " +
                                                a.basis(int(b)).name);
        }
    }

    auto interval_relation = [&](const CyclicInterval& i) {
        const CompMap& di = g.interval_map(i);
        CompMap sum = comp_add(comp_mul(a, d0, di), comp_mul(a, di, d0));
        for (int j = 1; j < i.len; ++j) {
            CyclicInterval first{i.start, j};
            CyclicInterval second{(i.start + j) % 4, i.len - j};
            sum = comp_add(sum, comp_mul(a, g.interval_map(first), g.interval_map(second)));
        }
        return sum;
    };

    for (const auto& i : proper_intervals()) {
        CompMap rel = interval_relation(i);
        for (const auto& [k, coeff] : rel)
            for (auto b : coeff.ones())
                report.violations.push_back("interval relation " + i.key() + " fails at " +
                                            g.base.gens[k.first].name + "->" +
                                            g.base.gens[k.second].name + ": term " +
                                            a.basis(int(b)).name);
    }

    // Identity relations for the four length-4 intervals.
    for (int start = 0; start < 4; ++start) {
        CyclicInterval full{start, 4};
        CompMap sum = interval_relation(full);
        int side = arrow_source_side(start);
        for (std::size_t x = 0; x < g.base.gens.size(); ++x) {
            if (g.base.right_side[x] != side) continue;
            comp_put(sum, {int(x), int(x)},
                     basis_element(a, a.idempotent_of_vertex(g.base.gens[x].idem)));
        }
        for (const auto& [k, coeff] : sum)
            for (auto b : coeff.ones())
                report.violations.push_back("identity relation " + full.key() + " fails at " +
                                            g.base.gens[k.first].name + "->" +
                                            g.base.gens[k.second].name + ": term " +
                                            a.basis(int(b)).name);
    }
    return report;
}

std::optional<GeneralizedCoefficientSystem> semi_extend(const DDBimodule& m) {
    if (!dd_check(m).ok())
        fail(ErrorKind::InvalidStructure, "semi_extend: input DD bimodule is invalid");
    CoefficientSystem cs = to_coefficients(m);
    const Algebra& a = *cs.left;
    std::size_t ngens = cs.gens.size();

    // Unknown variables: (interval, src, tgt, left basis), deterministic order.
    struct Var {
        int interval;  // index into unknown_intervals()
        int src, tgt, basis;
    };
    std::vector<CyclicInterval> unknowns = unknown_intervals();
    std::vector<Var> vars;
    std::map<std::tuple<int, int, int, int>, int> var_index;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto& iv = unknowns[u];
        for (std::size_t x = 0; x < ngens; ++x) {
            if (cs.right_side[x] != iv.domain_side()) continue;
            for (std::size_t y = 0; y < ngens; ++y) {
                if (cs.right_side[y] != iv.codomain_side()) continue;
                for (std::size_t b = 0; b < a.dim(); ++b) {
                    if (a.basis(int(b)).source != cs.gens[x].idem ||
                        a.basis(int(b)).target != cs.gens[y].idem)
                        continue;
                    var_index[{int(u), int(x), int(y), int(b)}] = int(vars.size());
                    vars.push_back({int(u), int(x), int(y), int(b)});
                }
            }
        }
    }
    auto unknown_of = [&](const CyclicInterval& iv) -> int {
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if (unknowns[u] == iv) return int(u);
        return -1;
    };

    // Equation slots: one relation per interval containing 0 plus the four
    // identity relations; each slot is (relation, src, tgt, basis).
    struct Slot {
        int relation;
        int src, tgt, basis;
    };
    std::vector<CyclicInterval> relations;
    for (const auto& i : proper_intervals())
        if (unknown_of(i) >= 0) relations.push_back(i);
    for (int s = 0; s < 4; ++s) relations.push_back({s, 4});

    std::vector<Slot> slots;
    std::map<std::tuple<int, int, int, int>, int> slot_index;
    for (std::size_t r = 0; r < relations.size(); ++r) {
        const auto& iv = relations[r];
        for (std::size_t x = 0; x < ngens; ++x) {
            if (cs.right_side[x] != iv.domain_side()) continue;
            for (std::size_t y = 0; y < ngens; ++y) {
                // A full cycle returns to its starting side, so codomain_side
                // also covers the length-4 identity relations.
                if (cs.right_side[y] != iv.codomain_side()) continue;
                for (std::size_t b = 0; b < a.dim(); ++b) {
                    if (a.basis(int(b)).source != cs.gens[x].idem ||
                        a.basis(int(b)).target != cs.gens[y].idem)
                        continue;
                    slot_index[{int(r), int(x), int(y), int(b)}] = int(slots.size());
                    slots.push_back({int(r), int(x), int(y), int(b)});
                }
            }
        }
    }

    BitMatrix mat(slots.size(), vars.size());
    BitVec rhs(slots.size());

    auto flip_slot = [&](int relation, int x, int y, int b) {
        auto it = slot_index.find({relation, x, y, b});
        if (it == slot_index.end())
            fail(ErrorKind::Internal, "semi_extend: relation term outside slot space");
        return it->second;
    };

    // Contribution of (known first, unknown second) or the reverse.
    auto add_known_unknown = [&](int relation, const CompMap& known, int unknown) {
        for (const auto& [k, coeff] : known)
            for (auto p : coeff.ones())
                for (std::size_t v = 0; v < vars.size(); ++v) {
                    if (vars[v].interval != unknown || vars[v].src != k.second) continue;
                    int prod = a.table(int(p), vars[v].basis);
                    if (prod < 0) continue;
                    mat.flip(std::size_t(flip_slot(relation, k.first, vars[v].tgt, prod)), v);
                }
    };
    auto add_unknown_known = [&](int relation, int unknown, const CompMap& known) {
        for (const auto& [k, coeff] : known)
            for (auto p : coeff.ones())
                for (std::size_t v = 0; v < vars.size(); ++v) {
                    if (vars[v].interval != unknown || vars[v].tgt != k.first) continue;
                    int prod = a.table(vars[v].basis, int(p));
                    if (prod < 0) continue;
                    mat.flip(std::size_t(flip_slot(relation, vars[v].src, k.second, prod)), v);
                }
    };

    CompMap d0 = cs.d_empty();
    for (std::size_t r = 0; r < relations.size(); ++r) {
        const auto& iv = relations[r];
        // Differential terms D_empty o D_I + D_I o D_empty; D_I is unknown here.
        int self = unknown_of(iv);
        if (self < 0) fail(ErrorKind::Internal, "semi_extend: relation interval must be unknown");
        add_known_unknown(int(r), d0, self);
        add_unknown_known(int(r), self, d0);
        // Splittings I = J then K.
        for (int j = 1; j < iv.len; ++j) {
            CyclicInterval first{iv.start, j};
            CyclicInterval second{(iv.start + j) % 4, iv.len - j};
            int fu = unknown_of(first), su = unknown_of(second);
            // Linearity audit: exactly one factor may be unknown.
            if (fu >= 0 && su >= 0)
                fail(ErrorKind::Internal, "semi_extend: two unknown factors in one term");
            if (fu < 0 && su < 0)
                fail(ErrorKind::Internal, "semi_extend: no unknown factor in a relation term");
            if (fu >= 0)
                add_unknown_known(int(r), fu, cs.maps[known_label(second)]);
            else
                add_known_unknown(int(r), cs.maps[known_label(first)], su);
        }
        // Identity right-hand side for the length-4 relations.
        if (iv.len == 4) {
            for (std::size_t x = 0; x < ngens; ++x) {
                if (cs.right_side[x] != iv.domain_side()) continue;
                int e = a.idempotent_of_vertex(cs.gens[x].idem);
                rhs.flip(std::size_t(flip_slot(int(r), int(x), int(x), e)));
            }
        }
    }

    auto solution = solve_linear(mat, rhs);
    if (!solution) return std::nullopt;

    GeneralizedCoefficientSystem g;
    g.base = cs;
    for (const auto& iv : unknowns) g.extended[iv.key()] = {};
    for (auto v : solution->ones()) {
        const Var& var = vars[v];
        comp_put(g.extended[unknowns[var.interval].key()], {var.src, var.tgt},
                 basis_element(a, var.basis));
    }
    CheckReport verify = check_generalized(g);
    if (!verify.ok())
        fail(ErrorKind::Internal, "semi_extend: solver output fails verification: " +
                                      verify.violations.front());
    return g;
}

} // namespace twk
