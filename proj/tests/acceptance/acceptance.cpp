// Acceptance suite: one line per criterion, exact tolerances throughout.
// Usage: acceptance [path-to-cli [path-to-fixtures]]; the CLI path is needed
// only for the determinism criterion.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

#include "support/gen.hpp"
#include "twk/box.hpp"
#include "twk/cmd.hpp"
#include "twk/io.hpp"
#include "twk/models.hpp"

using namespace twk;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

struct Runner {
    int failed = 0;

    void run(int number, const std::string& title, const std::function<void()>& body) {
        try {
            body();
            std::printf("[PASS] %2d. %s\n", number, title.c_str());
        } catch (const std::exception& e) {
            std::printf("[FAIL] %2d. %s: %s\n", number, title.c_str(), e.what());
            ++failed;
        }
        std::fflush(stdout);
    }
};

// ---- criterion 1 helpers: independent path enumeration ---------------------

// Brute-force basis of the torus quiver: all arrow sequences up to length 8,
// composable, containing neither (g,f) nor (h,g).
std::set<std::string> enumerate_torus_paths() {
    struct Arrow {
        char name;
        int src, tgt;
    };
    const std::vector<Arrow> arrows = {{'f', 0, 1}, {'g', 1, 0}, {'h', 0, 1}};
    std::set<std::string> out;
    std::function<void(std::string, int)> walk = [&](std::string word, int at) {
        if (word.size() >= 8) return;
        for (const auto& a : arrows) {
            if (a.src != at) continue;
            std::string next = word + a.name;
            if (next.find("gf") != std::string::npos || next.find("hg") != std::string::npos)
                continue;
            out.insert(next);
            walk(next, a.tgt);
        }
    };
    walk("", 0);
    walk("", 1);
    return out;
}

// ---- shared random instance builders ---------------------------------------

Typewriter trivial_identity_typewriter() {
    AlgebraPtr triv = trivial_algebra();
    TypeDStructure m0, m1;
    m0.alg = m1.alg = triv;
    m0.gens.push_back({"u", 0});
    m1.gens.push_back({"v", 0});
    BitVec e = basis_element(*triv, 0);
    CompMap f, h;
    comp_put(f, {0, 0}, e);
    comp_put(h, {0, 0}, e);
    ConeBlocks cr;
    comp_put(cr.fg, {0, 0}, e);
    comp_put(cr.gh, {0, 0}, e);
    return make_typewriter(std::move(m0), std::move(m1), std::move(f), std::move(h),
                           std::move(cr));
}

// ---- CLI runner for the determinism criterion ------------------------------

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_shell(const std::string& command) {
    CliResult r;
    FILE* p = popen((command + " 2>/dev/null").c_str(), "r");
    if (!p) throw Failure("cannot spawn: " + command);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    std::string fixtures = argc > 2 ? argv[2] : "";
    Runner runner;

    runner.run(1, "torus algebra: eight basis elements, strand products match", [] {
        std::set<std::string> oracle = enumerate_torus_paths();
        AlgebraPtr t = torus_algebra();
        require(t->dim() == oracle.size() + 2, "dimension disagrees with the path oracle");
        require(t->dim() == 8, "torus algebra must be eight-dimensional");
        for (const auto& word : oracle)
            require(t->basis_index(word) >= 0, "missing path " + word);
        // Generator products under the name map: rho1 rho2 = rho12,
        // rho2 rho3 = rho23, rho1 rho2 rho3 = rho123, all others zero.
        AlgebraPtr s = strand_algebra_torus();
        const AlgebraIso& iso = torus_iso();
        auto rho = [&](const char* n) { return element_from_names(*s, {n}); };
        auto prod = [&](const char* a, const char* b) { return mul(*s, rho(a), rho(b)); };
        require(prod("rho1", "rho2") == rho("rho12"), "rho1 rho2 != rho12");
        require(prod("rho2", "rho3") == rho("rho23"), "rho2 rho3 != rho23");
        require(mul(*s, prod("rho1", "rho2"), rho("rho3")) == rho("rho123"),
                "rho1 rho2 rho3 != rho123");
        const char* gens[3] = {"rho1", "rho2", "rho3"};
        for (const char* a : gens)
            for (const char* b : gens) {
                bool expected_nonzero = (std::string(a) == "rho1" && std::string(b) == "rho2") ||
                                        (std::string(a) == "rho2" && std::string(b) == "rho3");
                require(prod(a, b).any() == expected_nonzero,
                        std::string("unexpected product ") + a + " " + b);
            }
        // The name map is an isomorphism on the whole table.
        for (std::size_t i = 0; i < t->dim(); ++i)
            for (std::size_t j = 0; j < t->dim(); ++j) {
                BitVec lhs = iso.apply(mul(*t, basis_element(*t, int(i)),
                                           basis_element(*t, int(j))));
                BitVec rhs = mul(*s, iso.apply(basis_element(*t, int(i))),
                                 iso.apply(basis_element(*t, int(j))));
                require(lhs == rhs, "torus_iso fails multiplicativity");
            }
    });

    runner.run(2, "model identification: cmd(m) equals the identity bimodule", [] {
        require(verify_m_is_cfdd(), "cmd_object(model_m) differs from cfdd_identity");
    });

    runner.run(3, "structure soundness of the model and its cones", [] {
        require(dd_check(cfdd_identity()).ok(), "cfdd_identity fails dd_check");
        Typewriter m = model_m();
        require(dd_check(cmd_object(m)).ok(), "cmd_object(model_m) fails dd_check");
        require(check_structure(cone(m.d_f)).ok(), "cone(D_f) fails");
        require(check_structure(cone(m.d_h)).ok(), "cone(D_h) fails");
        require(check_structure(cone(m.d_cr)).ok(), "cone(D_CR) fails");
    });

    runner.run(4, "cmd and uncmd are exact mutual inverses on 200 instances", [] {
        gen::Rng rng(1004);
        int count = 0;
        while (count < 200) {
            AlgebraPtr alg = count % 3 ? strand_algebra_torus() : trivial_algebra();
            DDBimodule dd = cmd_object(
                gen::random_typewriter(rng, alg, 2 + int(rng() % 3), "i" + std::to_string(count)));
            if (count % 5 == 2) {
                // Direct sums of instances.
                DDBimodule other = cmd_object(gen::random_typewriter(
                    rng, alg, 2, "j" + std::to_string(count)));
                dd = DDBimodule{dd.left, dd.right, dd.tensor,
                                direct_sum(dd.flat, other.flat)};
            } else if (count % 7 == 3) {
                // Cones of random closed endomorphisms.
                TypeDMorphism phi = gen::random_closed_morphism(rng, dd.flat, dd.flat);
                dd = DDBimodule{dd.left, dd.right, dd.tensor, cone(phi)};
            }
            require(dd_check(dd).ok(), "random instance is invalid");
            Typewriter tw = uncmd(dd);
            require(cmd_object(tw) == dd, "cmd(uncmd(dd)) != dd");
            require(uncmd(cmd_object(tw)) == tw, "uncmd(cmd(tw)) != tw");
            ++count;
        }
    });

    runner.run(5, "cmd functoriality on 100 morphism pairs", [] {
        gen::Rng rng(1005);
        for (int trial = 0; trial < 100; ++trial) {
            AlgebraPtr alg = trial % 2 ? strand_algebra_torus() : trivial_algebra();
            Typewriter a = gen::random_typewriter(rng, alg, 3, "a" + std::to_string(trial));
            Typewriter b = gen::random_typewriter(rng, alg, 3, "b" + std::to_string(trial));
            Typewriter c = gen::random_typewriter(rng, alg, 3, "c" + std::to_string(trial));
            require(cmd_morphism(identity_typewriter_morphism(a)) ==
                        identity_morphism(cmd_object(a).flat),
                    "identity is not sent to the identity");
            TypewriterMorphism t = gen::random_typewriter_morphism(rng, a, b);
            TypewriterMorphism u = gen::random_typewriter_morphism(rng, b, c);
            require(cmd_morphism(compose_typewriter_morphisms(t, u)) ==
                        compose_morphisms(cmd_morphism(t), cmd_morphism(u)),
                    "composition is not preserved");
        }
    });

    runner.run(6, "homotopy transport on 100 homotopies plus equivalences", [] {
        gen::Rng rng(1006);
        for (int trial = 0; trial < 100; ++trial) {
            AlgebraPtr alg = trial % 2 ? strand_algebra_torus() : trivial_algebra();
            Typewriter a = gen::random_typewriter(rng, alg, 3, "a" + std::to_string(trial));
            Typewriter b = gen::random_typewriter(rng, alg, 3, "b" + std::to_string(trial));
            TypewriterMorphism t = gen::random_typewriter_morphism(rng, a, b);
            TypewriterHomotopy h = gen::random_raw_homotopy(rng, t);
            TypewriterMorphism u = push_by_homotopy(t, h);
            require(check_typewriter_homotopy(h, t, u).ok(), "generated homotopy is invalid");
            require(homotopy_check(cmd_homotopy(t, u, h), cmd_morphism(t), cmd_morphism(u)),
                    "transported homotopy fails the DD check");
        }
        for (int trial = 0; trial < 25; ++trial) {
            Typewriter a =
                gen::random_typewriter(rng, trivial_algebra(), 3, "e" + std::to_string(trial));
            TypewriterMorphism id = identity_typewriter_morphism(a);
            TypewriterHomotopy h = gen::random_raw_homotopy(rng, id);
            TypewriterMorphism t = push_by_homotopy(id, h);
            require(is_homotopy_equivalence(cmd_morphism(t)),
                    "equivalence image has a non-contractible cone");
        }
    });

    runner.run(7, "semi-extension solver: solvable and unsolvable sides", [] {
        DDBimodule solvable = cmd_object(trivial_identity_typewriter());
        auto g = semi_extend(solvable);
        require(g.has_value(), "identity typewriter must be semi-extendable");
        require(check_generalized(*g).ok(), "solver output fails verification");
        // Hand solution: D_01 = id, D_30 = id, D_0 = 0, D_012 = 0, rest zero.
        GeneralizedCoefficientSystem hand;
        hand.base = to_coefficients(solvable);
        int u = -1, v = -1;
        for (std::size_t i = 0; i < hand.base.gens.size(); ++i)
            (hand.base.right_side[i] == 0 ? u : v) = int(i);
        BitVec e = basis_element(*hand.base.left, 0);
        comp_put(hand.extended["01"], {v, v}, e);
        comp_put(hand.extended["30"], {u, u}, e);
        require(check_generalized(hand).ok(), "hand solution fails verification");
        require(!semi_extend(cmd_object(model_m())).has_value(),
                "the model bimodule must not be semi-extendable");
    });

    runner.run(8, "partial extendability decisions", [] {
        require(!is_partially_extendable(model_m()), "model must not be partially extendable");
        gen::Rng rng(1008);
        for (int trial = 0; trial < 10; ++trial) {
            gen::ExtendedSample s = gen::random_partially_extended(
                rng, trial % 2 ? strand_algebra_torus() : trivial_algebra(), 3,
                "p" + std::to_string(trial));
            require(check_typewriter(s.tw).ok(), "generated typewriter invalid");
            require(is_partially_extendable(s.tw),
                    "an invertible carriage return must be partially extendable");
        }
    });

    runner.run(9, "box tensor unit laws and elementary pairing", [] {
        gen::Rng rng(1009);
        auto strip = [](const std::vector<Generator>& gens) {
            std::map<std::string, std::string> names;
            for (const auto& g : gens) names[g.name] = g.name.substr(g.name.find('|') + 1);
            return names;
        };
        for (int trial = 0; trial < 50; ++trial) {
            AlgebraPtr alg = trial % 2 ? torus_algebra() : strand_algebra_torus();
            TypeDStructure n = gen::random_structure(rng, alg, 4, "n" + std::to_string(trial));
            TypeDStructure boxed = box_type_d(identity_da(alg), n);
            require(rename_generators(boxed, strip(boxed.gens)) == n,
                    "identity pairing is not the identity on structures");
            TypeDStructure m = gen::random_structure(rng, alg, 4, "m" + std::to_string(trial));
            TypeDMorphism phi = gen::random_closed_morphism(rng, n, m);
            TypeDMorphism bphi = box_morphism(identity_da(alg), phi);
            require(is_closed(bphi), "boxed morphism is not closed");
            require(bphi.comps.size() == phi.comps.size(),
                    "identity pairing changed morphism support");
        }
        DDBimodule id = cfdd_identity();
        DDBimodule boxed_id = box_dd(identity_da(strand_algebra_torus()), id);
        require(rename_generators(boxed_id.flat, strip(boxed_id.flat.gens)) == id.flat,
                "identity pairing is not the identity on the identity bimodule");
        Typewriter m = model_m();
        Typewriter boxed_m = box_typewriter(identity_da(strand_algebra_torus()), m);
        require(check_typewriter(boxed_m).ok(), "boxed model fails the typewriter check");
        require(cmd_object(boxed_m) == box_dd(identity_da(strand_algebra_torus()), cmd_object(m)),
                "box and cmd do not interchange on the model");
        for (int trial = 0; trial < 100; ++trial) {
            TypeDStructure n =
                gen::random_structure(rng, torus_algebra(), 4, "s" + std::to_string(trial));
            int i = trial % 2;
            TypeDStructure paired = box_type_d(elementary_module(torus_algebra(), i), n);
            require(rename_generators(paired, strip(paired.gens)) == idempotent_slice(n, i),
                    "elementary pairing disagrees with the idempotent slice");
        }
    });

    runner.run(10, "star products of 200 composable pairs verify", [&] {
        gen::Rng rng(1010);
        for (int trial = 0; trial < 200; ++trial) {
            AlgebraPtr alg = trial % 2 ? strand_algebra_torus() : trivial_algebra();
            Typewriter m = gen::random_typewriter(rng, alg, 3, "m" + std::to_string(trial));
            Typewriter m2 =
                gen::random_typewriter_from(rng, m.m1, 3, "n" + std::to_string(trial));
            auto [out, report] = star(m, m2);
            if (!report.ok()) {
                // Log the counterexample rather than masking it.
                std::string path = "star_counterexample_" + std::to_string(trial) + ".json";
                std::ofstream f(path);
                f << dump_canonical(serialize_value(wrap_typewriter(m)));
                f << dump_canonical(serialize_value(wrap_typewriter(m2)));
                throw Failure("star output failed check_typewriter; counterexample in " + path);
            }
            require(out.m0.gens.size() + out.m1.gens.size() ==
                        m.m0.gens.size() + m2.m1.gens.size(),
                    "star generator count mismatch");
        }
    });

    runner.run(11, "flip pipeline", [] {
        gen::Rng rng(1011);
        for (int trial = 0; trial < 50; ++trial) {
            FlipModule f = gen::random_flip(rng, 2 + int(rng() % 3));
            require(check_flip(f).ok(), "random flip module invalid");
            TypeDStructure bsd = bsd_infty(f);
            require(check_structure(bsd).ok(), "bsd output fails the structure check");
            require(bsd.gens.size() == 2 * f.complex.gens.size(),
                    "bsd output must have one generator per side and input generator");
        }
        // U = V = 0 with the identity flip.
        AlgebraPtr triv = trivial_algebra();
        FlipModule f;
        f.complex.alg = triv;
        f.complex.gens.push_back({"m", 0});
        f.complex.gens.push_back({"n", 0});
        f.u = zero_morphism(f.complex, f.complex);
        f.v = f.u;
        f.flip = identity_morphism(cone(f.u));
        TypeDStructure bsd = bsd_infty(f);
        require(bsd.gens.size() == 4, "expected one iota0 and one iota1 copy per generator");
        AlgebraPtr torus = torus_algebra();
        for (const auto& [k, coeff] : bsd.arrows) {
            require(k.first == k.second, "identity flip must give diagonal arrows only");
            bool fg = coeff == element_from_names(*torus, {"fg"});
            bool gh = coeff == element_from_names(*torus, {"gh"});
            require(fg || gh, "identity flip arrows must be labeled fg or gh");
        }
        require(bsd.arrows.size() == 4, "each copy carries exactly one loop");
    });

    runner.run(12, "CLI determinism and output re-verification", [&] {
        require(!cli.empty(), "no CLI path given");
        require(!fixtures.empty(), "no fixtures path given");
        struct Step {
            std::string args;
            int expect_code;
            bool json_output;
        };
        const std::vector<Step> steps = {
            {"verify models:m models:cfdd-id models:torus models:strands-torus models:trivial", 0,
             false},
            {"cmd models:m", 0, true},
            {"uncmd models:cfdd-id", 0, true},
            {"cmd " + fixtures + "/trivial_identity_typewriter.json", 0, true},
            {"cmd models:m | " + cli + " reduce -", 0, true},
            {"cmd models:m | " + cli + " equiv - models:cfdd-id", 0, false},
            {"cmd models:m | " + cli + " semiextend -", 1, false},
            {"cone " + fixtures + "/morphism_df.json", 0, true},
            {"box " + fixtures + "/identity_da_strands.json models:cfdd-id", 0, true},
            {"box " + fixtures + "/identity_da_torus.json " + fixtures + "/typed_example.json", 0,
             true},
            {"star " + fixtures + "/tw_chain_a.json " + fixtures + "/tw_chain_b.json", 0, true},
            {"semiextend " + fixtures + "/dd_trivial_identity.json", 0, true},
            {"flip " + fixtures + "/flip_identity.json", 0, true},
            {"flip --typewriter " + fixtures + "/flip_identity.json", 0, true},
            {"verify " + fixtures + "/homotopy_zero.json", 0, false},
            {"models", 0, false},
        };
        for (const auto& step : steps) {
            std::string command = cli + " " + step.args;
            CliResult first = run_shell(command);
            CliResult second = run_shell(command);
            require(first.code == step.expect_code,
                    "unexpected exit code " + std::to_string(first.code) + " from: " + step.args);
            require(first.code == second.code && first.out == second.out,
                    "non-deterministic output from: " + step.args);
            if (step.json_output) {
                AnyValue v = parse_value(nlohmann::json::parse(first.out));
                require(verify_value(v).ok(), "output does not re-verify: " + step.args);
                require(dump_canonical(serialize_value(v)) == first.out,
                        "output is not canonical: " + step.args);
            }
        }
    });

    if (runner.failed == 0) {
        std::printf("all %d criteria passed\n", 12);
        return 0;
    }
    std::printf("%d criterion(s) failed\n", runner.failed);
    return 1;
}
