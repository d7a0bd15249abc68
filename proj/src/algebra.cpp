#include "twk/algebra.hpp"

#include <algorithm>
#include <map>

#include "twk/error.hpp"

namespace twk {

int Algebra::vertex_index(const std::string& name) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == name) return int(i);
    fail(ErrorKind::ForeignBasisElement, "unknown vertex: " + name);
}

int Algebra::basis_index(const std::string& name) const {
    auto it = name_index_.find(name);
    return it == name_index_.end() ? -1 : it->second;
}

void Algebra::index_names() {
    name_index_.clear();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        auto [it, inserted] = name_index_.emplace(basis_[i].name, int(i));
        if (!inserted)
            fail(ErrorKind::IllFormedPresentation, "ambiguous basis path name: " + basis_[i].name);
    }
}

bool Algebra::same_as(const Algebra& other) const {
    if (this == &other) return true;
    if (vertices_ != other.vertices_ || basis_.size() != other.basis_.size()) return false;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (basis_[i].name != other.basis_[i].name || basis_[i].source != other.basis_[i].source ||
            basis_[i].target != other.basis_[i].target)
            return false;
    }
    return table_ == other.table_;
}

namespace {

int find_name(const std::vector<std::string>& v, const std::string& s) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == s) return int(i);
    return -1;
}

// True when `rel` occurs as a contiguous subsequence ending at the last
// position of `path`. Prefixes of `path` are already relation-free, so this
// is the only placement a fresh extension can create.
bool tail_matches(const std::vector<int>& path, const std::vector<int>& rel) {
    if (rel.size() > path.size()) return false;
    return std::equal(rel.begin(), rel.end(), path.end() - rel.size());
}

} // namespace

AlgebraPtr build_algebra(const QuiverPresentation& p, int max_path_len) {
    if (max_path_len < 1)
        fail(ErrorKind::IllFormedPresentation, "max_path_len must be at least 1");
    if (p.vertices.empty()) fail(ErrorKind::IllFormedPresentation, "no vertices");

    auto alg = std::make_shared<Algebra>();
    alg->vertices_ = p.vertices;
    alg->presentation_ = p;

    std::vector<std::string> arrow_names;
    std::vector<int> arrow_src, arrow_tgt;
    for (const auto& a : p.arrows) {
        int s = find_name(p.vertices, a.source);
        int t = find_name(p.vertices, a.target);
        if (s < 0 || t < 0)
            fail(ErrorKind::IllFormedPresentation, "arrow " + a.name + " references unknown vertex");
        if (find_name(arrow_names, a.name) >= 0)
            fail(ErrorKind::IllFormedPresentation, "duplicate arrow name: " + a.name);
        arrow_names.push_back(a.name);
        arrow_src.push_back(s);
        arrow_tgt.push_back(t);
    }

    std::vector<std::vector<int>> relations;
    for (const auto& rel : p.relations) {
        std::vector<int> r;
        for (const auto& an : rel) {
            int i = find_name(arrow_names, an);
            if (i < 0) fail(ErrorKind::IllFormedRelation, "relation uses unknown arrow: " + an);
            r.push_back(i);
        }
        if (r.empty()) fail(ErrorKind::IllFormedRelation, "empty relation");
        for (std::size_t k = 0; k + 1 < r.size(); ++k)
            if (arrow_tgt[r[k]] != arrow_src[r[k + 1]])
                fail(ErrorKind::IllFormedRelation, "relation path is not composable");
        relations.push_back(std::move(r));
    }

    // Idempotents first, then surviving paths by length, lexicographic within
    // a length (inherited from construction order).
    for (std::size_t v = 0; v < p.vertices.size(); ++v) {
        Algebra::BasisElement e{p.vertices[v], int(v), int(v), {}};
        alg->idem_of_vertex_.push_back(int(alg->basis_.size()));
        alg->basis_.push_back(std::move(e));
    }

    auto path_name = [&](const std::vector<int>& path) -> std::string {
        std::vector<std::string> names;
        for (int a : path) names.push_back(arrow_names[a]);
        if (auto it = p.aliases.find(names); it != p.aliases.end()) return it->second;
        std::string s;
        for (const auto& n : names) s += n;
        return s;
    };

    std::vector<std::vector<int>> frontier;  // surviving paths of current length
    for (std::size_t a = 0; a < arrow_names.size(); ++a) frontier.push_back({int(a)});
    int length = 1;
    std::map<std::vector<int>, int> path_index;
    while (!frontier.empty()) {
        if (length > max_path_len)
            fail(ErrorKind::NotFiniteAtBound,
                 "surviving path of length " + std::to_string(length) +
                     " at the horizon; algebra not certified finite-dimensional at bound " +
                     std::to_string(max_path_len));
        for (auto& path : frontier) {
            bool dead = false;
            for (const auto& r : relations)
                if (tail_matches(path, r)) {
                    dead = true;
                    break;
                }
            if (dead) continue;
            Algebra::BasisElement e;
            e.name = path_name(path);
            e.source = arrow_src[path.front()];
            e.target = arrow_tgt[path.back()];
            e.arrows = path;
            path_index[path] = int(alg->basis_.size());
            alg->basis_.push_back(std::move(e));
        }
        std::vector<std::vector<int>> next;
        for (auto& [path, idx] : path_index) {
            if (int(path.size()) != length) continue;
            for (std::size_t a = 0; a < arrow_names.size(); ++a) {
                if (arrow_tgt[path.back()] != arrow_src[a]) continue;
                auto ext = path;
                ext.push_back(int(a));
                next.push_back(std::move(ext));
            }
        }
        // Keep only extensions not killed at the new tail.
        std::vector<std::vector<int>> survivors;
        for (auto& path : next) {
            bool dead = false;
            for (const auto& r : relations)
                if (tail_matches(path, r)) {
                    dead = true;
                    break;
                }
            if (!dead) survivors.push_back(std::move(path));
        }
        frontier = std::move(survivors);
        ++length;
    }

    alg->index_names();

    // Multiplication table: concatenate, look up. The horizon check above
    // guarantees any relation-free concatenation is already in the basis.
    std::size_t dim = alg->basis_.size();
    alg->table_.assign(dim * dim, -1);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto& x = alg->basis_[i];
            const auto& y = alg->basis_[j];
            if (x.target != y.source) continue;
            std::vector<int> cat = x.arrows;
            cat.insert(cat.end(), y.arrows.begin(), y.arrows.end());
            if (cat.empty()) {
                alg->table_[i * dim + j] = alg->idem_of_vertex_[x.source];
                continue;
            }
            auto it = path_index.find(cat);
            if (it != path_index.end()) alg->table_[i * dim + j] = it->second;
        }
    }
    return alg;
}

AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b) {
    auto t = std::make_shared<Algebra>();
    std::size_t nb = b->dim();
    for (const auto& u : a->vertices())
        for (const auto& v : b->vertices()) t->vertices_.push_back(u + "|" + v);
    std::size_t nvb = b->vertex_count();
    t->idem_of_vertex_.assign(t->vertices_.size(), -1);
    for (std::size_t i = 0; i < a->dim(); ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            const auto& x = a->basis(int(i));
            const auto& y = b->basis(int(j));
            Algebra::BasisElement e;
            e.name = x.name + "|" + y.name;
            e.source = int(x.source * nvb + y.source);
            e.target = int(x.target * nvb + y.target);
            t->basis_.push_back(std::move(e));
            if (x.arrows.empty() && y.arrows.empty())
                t->idem_of_vertex_[x.source * nvb + y.source] = int(i * nb + j);
        }
    }
    std::size_t dim = t->basis_.size();
    t->table_.assign(dim * dim, -1);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            int pa = a->table(int(i / nb), int(j / nb));
            int pb = b->table(int(i % nb), int(j % nb));
            if (pa >= 0 && pb >= 0) t->table_[i * dim + j] = int(pa * nb + pb);
        }
    }
    t->index_names();
    return t;
}

AlgebraPtr tag_reserved(AlgebraPtr a, const std::string& name) {
    auto copy = std::make_shared<Algebra>(*a);
    copy->reserved_name_ = name;
    return copy;
}

AlgebraPtr torus_algebra() {
    static AlgebraPtr alg = [] {
        QuiverPresentation p;
        p.vertices = {"i0", "i1"};
        p.arrows = {{"f", "i0", "i1"}, {"g", "i1", "i0"}, {"h", "i0", "i1"}};
        p.relations = {{"g", "f"}, {"h", "g"}};
        return tag_reserved(build_algebra(p, 8), "torus");
    }();
    return alg;
}

AlgebraPtr strand_algebra_torus() {
    static AlgebraPtr alg = [] {
        QuiverPresentation p;
        p.vertices = {"j0", "j1"};
        p.arrows = {{"rho1", "j0", "j1"}, {"rho2", "j1", "j0"}, {"rho3", "j0", "j1"}};
        p.relations = {{"rho2", "rho1"}, {"rho3", "rho2"}};
        p.aliases[{"rho1", "rho2"}] = "rho12";
        p.aliases[{"rho2", "rho3"}] = "rho23";
        p.aliases[{"rho1", "rho2", "rho3"}] = "rho123";
        return tag_reserved(build_algebra(p, 8), "strands-torus");
    }();
    return alg;
}

AlgebraPtr trivial_algebra() {
    static AlgebraPtr alg = [] {
        QuiverPresentation p;
        p.vertices = {"e"};
        return tag_reserved(build_algebra(p, 1), "trivial");
    }();
    return alg;
}

BitVec AlgebraIso::apply(const BitVec& x) const {
    BitVec out(to->dim());
    for (auto i : x.ones()) out.flip(std::size_t(forward[i]));
    return out;
}

BitVec AlgebraIso::unapply(const BitVec& x) const {
    BitVec out(from->dim());
    for (auto i : x.ones()) out.flip(std::size_t(backward[i]));
    return out;
}

const AlgebraIso& torus_iso() {
    static AlgebraIso iso = [] {
        AlgebraIso m;
        m.from = torus_algebra();
        m.to = strand_algebra_torus();
        std::map<std::string, std::string> arrow_map{{"f", "rho1"}, {"g", "rho2"}, {"h", "rho3"}};
        m.forward.assign(m.from->dim(), -1);
        m.backward.assign(m.to->dim(), -1);
        const auto& fp = *m.from->presentation();
        const auto& tp = *m.to->presentation();
        for (std::size_t i = 0; i < m.from->dim(); ++i) {
            const auto& e = m.from->basis(int(i));
            int j;
            if (e.arrows.empty()) {
                j = m.to->idempotent_of_vertex(e.source);
            } else {
                std::vector<std::string> mapped;
                for (int a : e.arrows) mapped.push_back(arrow_map.at(fp.arrows[a].name));
                std::string name;
                if (auto it = tp.aliases.find(mapped); it != tp.aliases.end())
                    name = it->second;
                else
                    for (const auto& s : mapped) name += s;
                j = m.to->basis_index(name);
            }
            if (j < 0) fail(ErrorKind::Internal, "torus_iso: image basis element missing");
            m.forward[i] = j;
            m.backward[j] = int(i);
        }
        return m;
    }();
    return iso;
}

BitVec zero_element(const Algebra& a) { return BitVec(a.dim()); }

BitVec basis_element(const Algebra& a, int i) {
    BitVec v(a.dim());
    v.set(std::size_t(i));
    return v;
}

BitVec element_from_names(const Algebra& a, const std::vector<std::string>& names) {
    BitVec v(a.dim());
    for (const auto& n : names) {
        int i = a.basis_index(n);
        if (i < 0) fail(ErrorKind::ForeignBasisElement, "unknown basis element: " + n);
        v.flip(std::size_t(i));
    }
    return v;
}

std::vector<std::string> element_names(const Algebra& a, const BitVec& x) {
    std::vector<std::string> out;
    for (auto i : x.ones()) out.push_back(a.basis(int(i)).name);
    return out;
}

BitVec mul(const Algebra& a, const BitVec& x, const BitVec& y) {
    if (x.size() != a.dim() || y.size() != a.dim())
        fail(ErrorKind::ForeignBasisElement, "element does not belong to this algebra");
    BitVec out(a.dim());
    for (auto i : x.ones())
        for (auto j : y.ones()) {
            int t = a.table(int(i), int(j));
            if (t >= 0) out.flip(std::size_t(t));
        }
    return out;
}

} // namespace twk
