#include "twk/typed.hpp"

#include "twk/error.hpp"

namespace twk {

void comp_put(CompMap& m, CompKey key, const BitVec& value) {
    if (value.none()) return;
    auto it = m.find(key);
    if (it == m.end()) {
        m.emplace(key, value);
        return;
    }
    it->second ^= value;
    if (it->second.none()) m.erase(it);
}

CompMap comp_add(const CompMap& a, const CompMap& b) {
    CompMap out = a;
    for (const auto& [k, v] : b) comp_put(out, k, v);
    return out;
}

CompMap comp_mul(const Algebra& alg, const CompMap& a, const CompMap& b) {
    CompMap out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            if (ka.second != kb.first) continue;
            comp_put(out, {ka.first, kb.second}, mul(alg, va, vb));
        }
    return out;
}

int TypeDStructure::gen_index(const std::string& name) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return int(i);
    return -1;
}

void TypeDStructure::add_arrow(const std::string& src, const std::string& tgt,
                               const BitVec& coeff) {
    int s = gen_index(src), t = gen_index(tgt);
    if (s < 0 || t < 0) fail(ErrorKind::Internal, "add_arrow: unknown generator");
    add_arrow(s, t, coeff);
}

namespace {

// Name-keyed normal form used for order-insensitive comparison.
std::map<std::string, int> gen_idems(const TypeDStructure& n) {
    std::map<std::string, int> out;
    for (const auto& g : n.gens) out[g.name] = g.idem;
    return out;
}

std::map<std::pair<std::string, std::string>, BitVec> named_arrows(const TypeDStructure& n) {
    std::map<std::pair<std::string, std::string>, BitVec> out;
    for (const auto& [k, v] : n.arrows)
        out[{n.gens[k.first].name, n.gens[k.second].name}] = v;
    return out;
}

std::map<std::pair<std::string, std::string>, BitVec> named_comps(const TypeDMorphism& m) {
    std::map<std::pair<std::string, std::string>, BitVec> out;
    for (const auto& [k, v] : m.comps)
        out[{m.source.gens[k.first].name, m.target.gens[k.second].name}] = v;
    return out;
}

} // namespace

bool TypeDStructure::operator==(const TypeDStructure& o) const {
    if (!alg || !o.alg || !alg->same_as(*o.alg)) return false;
    return gen_idems(*this) == gen_idems(o) && named_arrows(*this) == named_arrows(o);
}

bool TypeDMorphism::operator==(const TypeDMorphism& o) const {
    return source == o.source && target == o.target && named_comps(*this) == named_comps(o);
}

CheckReport check_structure(const TypeDStructure& n) {
    CheckReport report;
    const Algebra& a = *n.alg;
    for (const auto& [k, coeff] : n.arrows) {
        const auto& src = n.gens[k.first];
        const auto& tgt = n.gens[k.second];
        for (auto b : coeff.ones()) {
            if (a.basis(int(b)).source != src.idem || a.basis(int(b)).target != tgt.idem)
                report.violations.push_back("idempotent violation: arrow " + src.name + "->" +
                                            tgt.name + " term " + a.basis(int(b)).name);
        }
    }
    CompMap square = comp_mul(a, n.arrows, n.arrows);
    for (const auto& [k, coeff] : square) {
        for (auto b : coeff.ones())
            report.violations.push_back("delta^2 violation at " + n.gens[k.first].name + "->" +
                                        n.gens[k.second].name + ": term " + a.basis(int(b)).name);
    }
    return report;
}

TypeDMorphism identity_morphism(const TypeDStructure& n) {
    TypeDMorphism m{n, n, {}};
    for (std::size_t i = 0; i < n.gens.size(); ++i)
        comp_put(m.comps, {int(i), int(i)},
                 basis_element(*n.alg, n.alg->idempotent_of_vertex(n.gens[i].idem)));
    return m;
}

TypeDMorphism zero_morphism(const TypeDStructure& n, const TypeDStructure& m) {
    return TypeDMorphism{n, m, {}};
}

static void require_same_endpoints(const TypeDMorphism& a, const TypeDMorphism& b,
                                   const char* what) {
    if (!(a.source == b.source) || !(a.target == b.target))
        fail(ErrorKind::EndpointMismatch, std::string(what) + ": endpoint mismatch");
}

TypeDMorphism add_morphisms(const TypeDMorphism& a, const TypeDMorphism& b) {
    require_same_endpoints(a, b, "add_morphisms");
    return TypeDMorphism{a.source, a.target, comp_add(a.comps, b.comps)};
}

TypeDMorphism compose_morphisms(const TypeDMorphism& phi, const TypeDMorphism& psi) {
    if (!(phi.target == psi.source))
        fail(ErrorKind::EndpointMismatch, "compose_morphisms: target of first != source of second");
    return TypeDMorphism{phi.source, psi.target, comp_mul(*phi.source.alg, phi.comps, psi.comps)};
}

TypeDMorphism boundary(const TypeDMorphism& phi) {
    const Algebra& a = *phi.source.alg;
    CompMap d = comp_add(comp_mul(a, phi.source.arrows, phi.comps),
                         comp_mul(a, phi.comps, phi.target.arrows));
    return TypeDMorphism{phi.source, phi.target, std::move(d)};
}

bool is_closed(const TypeDMorphism& phi) { return boundary(phi).comps.empty(); }

bool homotopy_check(const TypeDHomotopy& h, const TypeDMorphism& phi, const TypeDMorphism& psi) {
    require_same_endpoints(phi, psi, "homotopy_check");
    require_same_endpoints(h, phi, "homotopy_check");
    return boundary(h).comps == comp_add(phi.comps, psi.comps);
}

TypeDStructure cone(const TypeDMorphism& phi) {
    if (!is_closed(phi)) fail(ErrorKind::NonClosedMorphism, "cone: morphism is not closed");
    const TypeDStructure& s = phi.source;
    const TypeDStructure& t = phi.target;
    TypeDStructure c;
    c.alg = s.alg;
    for (const auto& g : s.gens) c.gens.push_back({"0." + g.name, g.idem});
    for (const auto& g : t.gens) c.gens.push_back({"1." + g.name, g.idem});
    int off = int(s.gens.size());
    for (const auto& [k, v] : s.arrows) comp_put(c.arrows, k, v);
    for (const auto& [k, v] : t.arrows) comp_put(c.arrows, {k.first + off, k.second + off}, v);
    for (const auto& [k, v] : phi.comps) comp_put(c.arrows, {k.first, k.second + off}, v);
    return c;
}

TypeDStructure direct_sum(const TypeDStructure& a, const TypeDStructure& b) {
    if (!a.alg->same_as(*b.alg)) fail(ErrorKind::WrongAlgebra, "direct_sum: different algebras");
    TypeDStructure s;
    s.alg = a.alg;
    s.gens = a.gens;
    for (const auto& g : b.gens) {
        if (s.gen_index(g.name) >= 0)
            fail(ErrorKind::Internal, "direct_sum: generator name clash: " + g.name);
        s.gens.push_back(g);
    }
    int off = int(a.gens.size());
    s.arrows = a.arrows;
    for (const auto& [k, v] : b.arrows) comp_put(s.arrows, {k.first + off, k.second + off}, v);
    return s;
}

namespace {

// Inverse of e + r for r a nilpotent corner element: e + r + r^2 + ...
BitVec corner_inverse(const Algebra& a, const BitVec& idem, const BitVec& rest) {
    BitVec inv = idem;
    BitVec power = rest;
    int steps = 0;
    while (power.any()) {
        inv ^= power;
        power = mul(a, power, rest);
        if (++steps > int(a.dim()) + 1)
            fail(ErrorKind::Internal, "corner element is not nilpotent");
    }
    return inv;
}

struct Cancellation {
    TypeDStructure smaller;
    CompMap pi;    // cur -> smaller
    CompMap iota;  // smaller -> cur
    CompMap h;     // on cur: d(h) = (pi then iota) + identity
};

Cancellation cancel_pair(const TypeDStructure& cur, int x, int y) {
    const Algebra& a = *cur.alg;
    BitVec c = cur.arrows.at({x, y});
    int ev = a.idempotent_of_vertex(cur.gens[x].idem);
    BitVec e = basis_element(a, ev);
    BitVec r = c ^ e;
    BitVec cinv = corner_inverse(a, e, r);

    Cancellation out;
    out.smaller.alg = cur.alg;
    std::vector<int> keep;  // smaller index -> cur index
    std::vector<int> back(cur.gens.size(), -1);
    for (std::size_t i = 0; i < cur.gens.size(); ++i) {
        if (int(i) == x || int(i) == y) continue;
        back[i] = int(keep.size());
        keep.push_back(int(i));
        out.smaller.gens.push_back(cur.gens[i]);
    }
    auto at = [&](int s, int t) -> BitVec {
        auto it = cur.arrows.find({s, t});
        return it == cur.arrows.end() ? zero_element(a) : it->second;
    };
    for (int u : keep)
        for (int v : keep) {
            BitVec coeff = at(u, v);
            BitVec uy = at(u, y), xv = at(x, v);
            if (uy.any() && xv.any()) coeff ^= mul(a, mul(a, uy, cinv), xv);
            comp_put(out.smaller.arrows, {back[u], back[v]}, coeff);
        }
    // pi: identity on kept generators, y -> cinv . delta(x, -).
    for (int u : keep)
        comp_put(out.pi, {u, back[u]},
                 basis_element(a, a.idempotent_of_vertex(cur.gens[u].idem)));
    for (int v : keep) {
        BitVec xv = at(x, v);
        if (xv.any()) comp_put(out.pi, {y, back[v]}, mul(a, cinv, xv));
    }
    // iota: identity plus correction into x.
    for (int u : keep) {
        comp_put(out.iota, {back[u], u},
                 basis_element(a, a.idempotent_of_vertex(cur.gens[u].idem)));
        BitVec uy = at(u, y);
        if (uy.any()) comp_put(out.iota, {back[u], x}, mul(a, uy, cinv));
    }
    comp_put(out.h, {y, x}, cinv);
    return out;
}

} // namespace

ReduceResult reduce(const TypeDStructure& n) {
    const Algebra& a = *n.alg;
    TypeDStructure cur = n;
    CompMap fwd, bwd, hom;
    for (std::size_t i = 0; i < n.gens.size(); ++i) {
        BitVec e = basis_element(a, a.idempotent_of_vertex(n.gens[i].idem));
        comp_put(fwd, {int(i), int(i)}, e);
        comp_put(bwd, {int(i), int(i)}, e);
    }
    for (;;) {
        // Lexicographically first cancellable arrow by generator names.
        int bx = -1, by = -1;
        for (const auto& [k, coeff] : cur.arrows) {
            if (k.first == k.second) continue;
            int ev = a.idempotent_of_vertex(cur.gens[k.first].idem);
            if (!coeff.get(std::size_t(ev))) continue;
            if (bx < 0 || std::pair(cur.gens[k.first].name, cur.gens[k.second].name) <
                              std::pair(cur.gens[bx].name, cur.gens[by].name)) {
                bx = k.first;
                by = k.second;
            }
        }
        if (bx < 0) break;
        Cancellation c = cancel_pair(cur, bx, by);
        hom = comp_add(hom, comp_mul(a, comp_mul(a, fwd, c.h), bwd));
        fwd = comp_mul(a, fwd, c.pi);
        bwd = comp_mul(a, c.iota, bwd);
        cur = std::move(c.smaller);
    }
    ReduceResult out;
    out.reduced = cur;
    out.forward = TypeDMorphism{n, cur, std::move(fwd)};
    out.backward = TypeDMorphism{cur, n, std::move(bwd)};
    out.homotopy = TypeDHomotopy{n, n, std::move(hom)};
    return out;
}

bool is_contractible(const TypeDStructure& n) { return reduce(n).reduced.gens.empty(); }

bool is_homotopy_equivalence(const TypeDMorphism& phi) {
    if (!is_closed(phi))
        fail(ErrorKind::NonClosedMorphism, "is_homotopy_equivalence: morphism is not closed");
    return is_contractible(cone(phi));
}

namespace {

bool isomorphism_search(const TypeDStructure& a, const TypeDStructure& b, std::vector<int>& map,
                        std::vector<bool>& used, std::size_t next) {
    if (next == a.gens.size()) return true;
    auto arrow = [](const TypeDStructure& n, int s, int t) -> const BitVec* {
        auto it = n.arrows.find({s, t});
        return it == n.arrows.end() ? nullptr : &it->second;
    };
    for (std::size_t cand = 0; cand < b.gens.size(); ++cand) {
        if (used[cand] || b.gens[cand].idem != a.gens[next].idem) continue;
        bool consistent = true;
        for (std::size_t prev = 0; prev <= next && consistent; ++prev) {
            int pm = prev == next ? int(cand) : map[prev];
            const BitVec* fwd_a = arrow(a, int(next), int(prev));
            const BitVec* fwd_b = arrow(b, int(cand), pm);
            if ((fwd_a == nullptr) != (fwd_b == nullptr) ||
                (fwd_a && !(*fwd_a == *fwd_b)))
                consistent = false;
            if (prev == next) continue;
            const BitVec* bwd_a = arrow(a, int(prev), int(next));
            const BitVec* bwd_b = arrow(b, pm, int(cand));
            if ((bwd_a == nullptr) != (bwd_b == nullptr) ||
                (bwd_a && !(*bwd_a == *bwd_b)))
                consistent = false;
        }
        if (!consistent) continue;
        map[next] = int(cand);
        used[cand] = true;
        if (isomorphism_search(a, b, map, used, next + 1)) return true;
        used[cand] = false;
    }
    return false;
}

} // namespace

bool isomorphic(const TypeDStructure& a, const TypeDStructure& b) {
    if (!a.alg->same_as(*b.alg)) return false;
    if (a.gens.size() != b.gens.size() || a.arrows.size() != b.arrows.size()) return false;
    std::map<int, int> idem_counts;
    for (const auto& g : a.gens) idem_counts[g.idem]++;
    for (const auto& g : b.gens) idem_counts[g.idem]--;
    for (const auto& [v, c] : idem_counts)
        if (c != 0) return false;
    std::vector<int> map(a.gens.size(), -1);
    std::vector<bool> used(b.gens.size(), false);
    return isomorphism_search(a, b, map, used, 0);
}

bool equivalent(const TypeDStructure& a, const TypeDStructure& b) {
    if (!a.alg->same_as(*b.alg)) fail(ErrorKind::WrongAlgebra, "equivalent: different algebras");
    return isomorphic(reduce(a).reduced, reduce(b).reduced);
}

TypeDStructure idempotent_slice(const TypeDStructure& n, int i) {
    if (!n.alg->same_as(*torus_algebra()))
        fail(ErrorKind::WrongAlgebra, "idempotent_slice: structure is not over the torus algebra");
    if (i != 0 && i != 1) fail(ErrorKind::WrongAlgebra, "idempotent_slice: index must be 0 or 1");
    const Algebra& a = *n.alg;
    AlgebraPtr triv = trivial_algebra();
    TypeDStructure out;
    out.alg = triv;
    std::vector<int> back(n.gens.size(), -1);
    for (std::size_t g = 0; g < n.gens.size(); ++g) {
        if (n.gens[g].idem != i) continue;
        back[g] = int(out.gens.size());
        out.gens.push_back({n.gens[g].name, 0});
    }
    int ev = a.idempotent_of_vertex(i);
    for (const auto& [k, coeff] : n.arrows) {
        if (back[k.first] < 0 || back[k.second] < 0) continue;
        if (coeff.get(std::size_t(ev)))
            comp_put(out.arrows, {back[k.first], back[k.second]}, basis_element(*triv, 0));
    }
    return out;
}

TypeDStructure rename_generators(const TypeDStructure& n,
                                 const std::map<std::string, std::string>& names) {
    TypeDStructure out = n;
    for (auto& g : out.gens) {
        auto it = names.find(g.name);
        if (it == names.end()) fail(ErrorKind::Internal, "rename_generators: missing name");
        g.name = it->second;
    }
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < out.gens.size(); ++i)
        if (!seen.emplace(out.gens[i].name, int(i)).second)
            fail(ErrorKind::Internal, "rename_generators: name collision");
    return out;
}

TypeDStructure transport_structure(const TypeDStructure& n, const AlgebraIso& iso, bool forward) {
    const AlgebraPtr& from = forward ? iso.from : iso.to;
    const AlgebraPtr& to = forward ? iso.to : iso.from;
    if (!n.alg->same_as(*from))
        fail(ErrorKind::WrongAlgebra, "transport_structure: structure algebra mismatch");
    auto map_elem = [&](const BitVec& x) { return forward ? iso.apply(x) : iso.unapply(x); };
    TypeDStructure out;
    out.alg = to;
    for (const auto& g : n.gens) {
        BitVec e = map_elem(basis_element(*from, from->idempotent_of_vertex(g.idem)));
        auto ones = e.ones();
        if (ones.size() != 1 || !to->is_idempotent(int(ones.front())))
            fail(ErrorKind::Internal, "transport_structure: idempotent image is not an idempotent");
        out.gens.push_back({g.name, to->basis(int(ones.front())).source});
    }
    for (const auto& [k, v] : n.arrows) comp_put(out.arrows, k, map_elem(v));
    return out;
}

HomSpace hom_space(const TypeDStructure& source, const TypeDStructure& target) {
    HomSpace hs;
    hs.source = &source;
    hs.target = &target;
    const Algebra& a = *source.alg;
    for (std::size_t x = 0; x < source.gens.size(); ++x)
        for (std::size_t y = 0; y < target.gens.size(); ++y)
            for (std::size_t b = 0; b < a.dim(); ++b) {
                if (a.basis(int(b)).source != source.gens[x].idem ||
                    a.basis(int(b)).target != target.gens[y].idem)
                    continue;
                hs.var_index[{int(x), int(y), int(b)}] = int(hs.vars.size());
                hs.vars.push_back({int(x), int(y), int(b)});
            }
    return hs;
}

BitVec HomSpace::pack(const CompMap& comps) const {
    BitVec v(vars.size());
    for (const auto& [k, coeff] : comps)
        for (auto b : coeff.ones()) {
            auto it = var_index.find({k.first, k.second, int(b)});
            if (it == var_index.end())
                fail(ErrorKind::Internal, "pack: component outside idempotent-compatible space");
            v.flip(std::size_t(it->second));
        }
    return v;
}

CompMap HomSpace::unpack(const BitVec& v) const {
    CompMap comps;
    const Algebra& a = *source->alg;
    for (auto i : v.ones()) {
        auto [x, y, b] = vars[i];
        comp_put(comps, {x, y}, basis_element(a, b));
    }
    return comps;
}

BitMatrix boundary_matrix(const HomSpace& hs) {
    const TypeDStructure& s = *hs.source;
    const TypeDStructure& t = *hs.target;
    const Algebra& a = *s.alg;
    BitMatrix m(hs.vars.size(), hs.vars.size());
    for (std::size_t col = 0; col < hs.vars.size(); ++col) {
        auto [y, z, q] = hs.vars[col];
        // D_source . X contributions.
        for (const auto& [k, coeff] : s.arrows) {
            if (k.second != y) continue;
            for (auto p : coeff.ones()) {
                int prod = a.table(int(p), q);
                if (prod < 0) continue;
                m.flip(std::size_t(hs.var_index.at({k.first, z, prod})), col);
            }
        }
        // X . D_target contributions.
        for (const auto& [k, coeff] : t.arrows) {
            if (k.first != z) continue;
            for (auto r : coeff.ones()) {
                int prod = a.table(q, int(r));
                if (prod < 0) continue;
                m.flip(std::size_t(hs.var_index.at({y, k.second, prod})), col);
            }
        }
    }
    return m;
}

std::vector<CompMap> closed_morphism_basis(const TypeDStructure& source,
                                           const TypeDStructure& target) {
    HomSpace hs = hom_space(source, target);
    std::vector<CompMap> out;
    for (const auto& v : nullspace(boundary_matrix(hs))) out.push_back(hs.unpack(v));
    return out;
}

std::optional<CompMap> solve_boundary(const TypeDStructure& source, const TypeDStructure& target,
                                      const CompMap& rhs) {
    HomSpace hs = hom_space(source, target);
    auto x = solve_linear(boundary_matrix(hs), hs.pack(rhs));
    if (!x) return std::nullopt;
    return hs.unpack(*x);
}

} // namespace twk
