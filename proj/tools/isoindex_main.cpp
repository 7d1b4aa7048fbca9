#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isoindex/json_io.hpp"
#include "isoindex/manifolds.hpp"
#include "isoindex/skewmap.hpp"

namespace {

using namespace isoindex;

constexpr int kExitUsage = 2;
constexpr int kExitSchema = 3;
constexpr int kExitBudget = 4;
constexpr int kExitDisagree = 5;

struct JobConfig {
    std::string ring = "Q";
    bool brute_check = false;
    bool witnesses = false;
    bool json = false;
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t seed = 0;
    unsigned restarts = 32;
    bool dim3_mod2 = false;
};

void add_common_flags(CLI::App* cmd, JobConfig& cfg) {
    cmd->add_option("--ring", cfg.ring, "coefficient ring: Z, Q, GF(p), GF(p,k)");
    cmd->add_flag("--json", cfg.json, "emit stable JSON instead of text");
    cmd->add_option("--budget", cfg.budget, "enumeration candidate budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "seed for randomized searches");
    cmd->add_option("--restarts", cfg.restarts, "greedy restarts for interval mode")
        ->check(CLI::PositiveNumber);
}

nlohmann::json rank_set_json(const RankSet& s) {
    nlohmann::json a = nlohmann::json::array();
    for (auto v : s.values()) a.push_back(v);
    return a;
}

void print_witness(const Subspace& w) {
    std::cout << "  witness (rank " << w.rank() << "):";
    if (w.rank() == 0) std::cout << " {0}";
    std::cout << "\n";
    for (std::size_t i = 0; i < w.rank(); ++i) {
        std::cout << "    [";
        for (std::size_t j = 0; j < w.ambient_dim(); ++j)
            std::cout << (j ? " " : "") << w.basis().at(i, j).str();
        std::cout << "]\n";
    }
}

int cmd_eval(const JobConfig& cfg, const std::string& expr_text) {
    RingSpec ring = RingSpec::parse(cfg.ring);
    ManifoldExpr expr = parse_expr(expr_text);
    EvalResult ev = eval_structural(expr, ring);
    BoundsCheck bc = bounds_check(expr, ring);

    std::optional<RankSet> oracle;
    std::string verdict;
    if (cfg.brute_check) {
        if (!ring.is_finite())
            throw CLI::ValidationError("--brute-check requires a finite field ring");
        oracle = rank_set(compile(expr, ring), cfg.budget);
        verdict = (*oracle == ev.rank_set) ? "AGREE" : "DISAGREE";
    }

    if (cfg.json) {
        nlohmann::json j;
        j["b1"] = ev.b1;
        j["rank_set"] = rank_set_json(ev.rank_set);
        j["h"] = ev.h;
        j["h_interval"] = {ev.h, ev.h};
        if (ev.corank) j["corank"] = *ev.corank; else j["corank"] = nullptr;
        j["bounds"] = {{"lo", bc.lo}, {"hi", bc.hi}, {"exception", bc.exception}};
        if (oracle) {
            j["oracle"] = {{"rank_set", rank_set_json(*oracle)}};
            j["verdict"] = verdict;
        } else {
            j["oracle"] = nullptr;
            j["verdict"] = nullptr;
        }
        std::cout << canonical_dump(j);
    } else {
        std::cout << "expr: " << expr.str() << "\n"
                  << "ring: " << ring.name() << "\n"
                  << "b1: " << ev.b1 << "\n"
                  << "rank_set: " << ev.rank_set.str() << "\n"
                  << "h: " << ev.h << "\n";
        if (ev.corank) std::cout << "corank: " << *ev.corank << "\n";
        std::cout << "bounds: [" << bc.lo << ", " << bc.hi << "]"
                  << (bc.exception ? " (char-2 exception: upper bound only)" : "")
                  << (bc.pass ? " OK" : " VIOLATED") << "\n";
        for (const auto& tag : ev.exceptions_applied)
            std::cout << "note: " << tag << "\n";
        if (oracle)
            std::cout << "oracle rank_set: " << oracle->str() << "\nverdict: " << verdict << "\n";
        if (cfg.witnesses) {
            IsotropyReport rep = isotropy_index(compile(expr, ring), cfg.budget,
                                                cfg.restarts, cfg.seed);
            for (const Subspace& w : rep.witnesses) print_witness(w);
        }
    }
    return verdict == "DISAGREE" ? kExitDisagree : 0;
}

const char* method_name(IsotropyMethod m) {
    switch (m) {
        case IsotropyMethod::Bruteforce: return "bruteforce";
        case IsotropyMethod::SingleForm: return "single-form";
        case IsotropyMethod::Structural: return "structural";
        case IsotropyMethod::BoundsGreedy: return "bounds+greedy";
    }
    return "?";
}

int cmd_map(const JobConfig& cfg, const std::string& path, bool ring_given) {
    SkewBilinearMap phi = load_map_file(path);
    if (ring_given) {
        RingSpec target = RingSpec::parse(cfg.ring);
        if (target != phi.ring()) phi = extend_scalars(phi, target);
    }
    IsotropyReport rep = isotropy_index(phi, cfg.budget, cfg.restarts, cfg.seed);
    std::size_t k = kernel(phi).rank();
    Bounds b = bounds(static_cast<long>(phi.dim_l()), static_cast<long>(phi.dim_v()),
                      static_cast<long>(k), phi.ring().characteristic() == 2, false);

    if (cfg.json) {
        nlohmann::json j;
        j["ring"] = phi.ring().name();
        j["dim_l"] = phi.dim_l();
        j["dim_v"] = phi.dim_v();
        j["h_interval"] = {rep.h_lower, rep.h_upper};
        if (rep.rank_set) {
            j["rank_set"] = rank_set_json(*rep.rank_set);
            j["h"] = rep.rank_set->max();
        } else {
            j["rank_set"] = nullptr;
            j["h"] = nullptr;
        }
        j["kernel_rank"] = k;
        j["bounds"] = {{"lo", b.lo}, {"hi", b.hi}, {"exception", b.exception_applied}};
        j["method"] = method_name(rep.method);
        std::cout << canonical_dump(j);
    } else {
        std::cout << "ring: " << phi.ring().name() << "\n"
                  << "dim_l: " << phi.dim_l() << "\ndim_v: " << phi.dim_v() << "\n"
                  << "kernel rank: " << k << "\n"
                  << "h: [" << rep.h_lower << ", " << rep.h_upper << "]"
                  << (rep.exact() ? " (exact)" : "") << "\n";
        if (rep.rank_set) std::cout << "rank_set: " << rep.rank_set->str() << "\n";
        std::cout << "method: " << method_name(rep.method) << "\n"
                  << "bounds: [" << b.lo << ", " << b.hi << "]\n";
        if (cfg.witnesses)
            for (const Subspace& w : rep.witnesses) print_witness(w);
    }
    return 0;
}

int cmd_realize(const JobConfig& cfg, std::size_t h, std::size_t b) {
    ManifoldExpr expr;
    RingSpec check_ring = RingSpec::rationals();
    try {
        if (cfg.dim3_mod2) {
            expr = realize_dim3_mod2(h, b);
            check_ring = RingSpec::prime_field(2);
        } else {
            expr = realize(h, b);
            if (h == 0 && b == 1) check_ring = RingSpec::prime_field(2);  // RP3 case
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    EvalResult ev = eval_structural(expr, check_ring);
    bool ok = ev.h == h && ev.b1 == b;
    if (cfg.json) {
        nlohmann::json j;
        j["expr"] = expr.str();
        j["ring"] = check_ring.name();
        j["h"] = ev.h;
        j["b1"] = ev.b1;
        j["rank_set"] = rank_set_json(ev.rank_set);
        j["verified"] = ok;
        std::cout << canonical_dump(j);
    } else {
        std::cout << expr.str() << "\n"
                  << "verified over " << check_ring.name() << ": h=" << ev.h
                  << " b1=" << ev.b1 << " rank_set=" << ev.rank_set.str()
                  << (ok ? " OK" : " MISMATCH") << "\n";
    }
    return ok ? 0 : kExitDisagree;
}

// ---- selftest ----

struct SelftestRunner {
    const JobConfig& cfg;
    int failures = 0;
    bool budget_hit = false;

    void check(const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    }

    void oracle_case(const std::string& expr_text, const RingSpec& ring) {
        ManifoldExpr expr = parse_expr(expr_text);
        std::string name = "oracle " + ring.name() + " " + expr_text;
        try {
            RankSet structural = eval_structural(expr, ring).rank_set;
            RankSet brute = rank_set(compile(expr, ring), cfg.budget);
            check(name, structural == brute);
        } catch (const BudgetExceeded& e) {
            std::cout << "FAIL " << name << " (" << e.what() << ")\n";
            ++failures;
            budget_hit = true;
        }
    }

    int run() {
        RingSpec q = RingSpec::rationals();
        RingSpec z = RingSpec::integers();
        RingSpec gf2 = RingSpec::prime_field(2);
        RingSpec gf3 = RingSpec::prime_field(3);

        // reference fixtures, structural path
        for (std::size_t g = 0; g <= 4; ++g) {
            auto ev = eval_structural(ManifoldExpr::surface(g), q);
            check("H(Sg(" + std::to_string(g) + ");Q) = {" + std::to_string(g) + "}",
                  ev.rank_set == RankSet::singleton(g));
        }
        for (std::size_t n = 1; n <= 5; ++n)
            check("H(T(" + std::to_string(n) + ");Q) = {1}",
                  eval_structural(ManifoldExpr::torus(n), q).rank_set == RankSet::singleton(1));
        check("H(Sg(2) x S(1);Z) = {1,2}",
              eval_structural(parse_expr("Sg(2) x S(1)"), z).rank_set == RankSet({1, 2}));
        check("H(Sg(2) x Sg(3);Q) = {1,2,3}",
              eval_structural(parse_expr("Sg(2) x Sg(3)"), q).rank_set == RankSet({1, 2, 3}));
        check("H((Sg(2) x S(1)) # (Sg(2) x S(1));Z) = {2,3,4}",
              eval_structural(parse_expr("Sg(2) x S(1) # Sg(2) x S(1)"), z).rank_set ==
                  RankSet({2, 3, 4}));
        {
            auto ev = eval_structural(ManifoldExpr::rp3(), gf2);
            check("RP3 over GF(2): h=0, b1=1", ev.h == 0 && ev.b1 == 1);
        }
        {
            auto ev = eval_structural(ManifoldExpr::heisenberg(), z);
            check("Heisenberg: b'=1, h=2, b1=2",
                  ev.corank == std::size_t{1} && ev.h == 2 && ev.b1 == 2);
        }
        {
            auto ev = eval_structural(ManifoldExpr::kodaira_thurston(), z);
            check("Kodaira-Thurston: b'=1, h=2, b1=3",
                  ev.corank == std::size_t{1} && ev.h == 2 && ev.b1 == 3);
        }

        // structural vs brute force on the compiled corpus
        std::vector<std::string> corpus = {
            "S(1)", "S(2)", "S(3)", "Sg(1)", "Sg(2)", "T(2)", "T(3)", "RP3",
            "Sg(1) # Sg(2)", "Sg(2) x S(1)", "T(2) x S(2)", "S(1) x S(3)",
            "RP3 # RP3", "RP3 # T(3)", "Sg(1) x S(1)",
        };
        for (const auto& text : corpus) {
            ManifoldExpr expr = parse_expr(text);
            for (const RingSpec& f : {gf2, gf3}) {
                if (betti(expr, f)[1] > 6) continue;
                oracle_case(text, f);
            }
        }

        // random-map laws
        for (const RingSpec& f : {gf2, gf3}) {
            bool sum_ok = true, prod_ok = true, ker_ok = true;
            for (int i = 0; i < 25; ++i) {
                auto phi1 = random_skew_map(f, 1 + i % 3, 1 + i % 2, cfg.seed + 2 * i);
                auto phi2 = random_skew_map(f, 1 + (i + 1) % 3, 1 + (i + 1) % 2,
                                            cfg.seed + 2 * i + 1);
                try {
                    RankSet s1 = rank_set(phi1, cfg.budget), s2 = rank_set(phi2, cfg.budget);
                    sum_ok &= rank_set(direct_sum(phi1, phi2), cfg.budget) ==
                              rank_set_sum_law(s1, s2);
                    if (f.characteristic() != 2)
                        prod_ok &= rank_set(product_map(phi1, phi2), cfg.budget) ==
                                   rank_set_product_law(s1, s2, s1.max(), s2.max());
                    Subspace ker = kernel(phi1);
                    for (const Subspace& m : enumerate_maximal_isotropic(phi1, cfg.budget))
                        ker_ok &= m.contains(ker);
                } catch (const BudgetExceeded&) {
                    budget_hit = true;
                    sum_ok = false;
                }
            }
            check("sum law over " + f.name(), sum_ok);
            if (f.characteristic() != 2) check("product law over " + f.name(), prod_ok);
            check("kernel containment over " + f.name(), ker_ok);
        }

        if (failures == 0) {
            std::cout << "selftest: all checks passed\n";
            return 0;
        }
        std::cout << "selftest: " << failures << " check(s) failed\n";
        return budget_hit ? kExitBudget : kExitDisagree;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isotropy index calculator for skew-symmetric bilinear maps and manifold expressions"};
    app.require_subcommand(1);
    JobConfig cfg;
    if (const char* env = std::getenv("ISOINDEX_BUDGET")) {
        try {
            cfg.budget = std::stoull(env);
        } catch (const std::logic_error&) {
            std::cerr << "error: bad ISOINDEX_BUDGET value\n";
            return kExitUsage;
        }
    }

    std::string expr_text, map_path;
    std::size_t realize_h = 0, realize_b = 0;

    CLI::App* eval = app.add_subcommand("eval", "evaluate a manifold expression");
    eval->add_option("expr", expr_text, "manifold expression, e.g. \"Sg(2) x S(1)\"")->required();
    add_common_flags(eval, cfg);
    eval->add_flag("--brute-check", cfg.brute_check, "cross-check with the enumeration oracle");
    eval->add_flag("--witnesses", cfg.witnesses, "print maximal isotropic witnesses");

    CLI::App* map = app.add_subcommand("map", "analyze a skew map from a JSON file");
    map->add_option("path", map_path, "map JSON file")->required();
    add_common_flags(map, cfg);
    map->add_flag("--witnesses", cfg.witnesses, "print maximal isotropic witnesses");

    CLI::App* realize_cmd = app.add_subcommand("realize", "construct M with given (h, b1)");
    realize_cmd->add_option("target_h", realize_h, "target isotropy index")->required();
    realize_cmd->add_option("target_b", realize_b, "target first Betti number")->required();
    add_common_flags(realize_cmd, cfg);
    realize_cmd->add_flag("--dim3-mod2", cfg.dim3_mod2, "3-dimensional GF(2) construction");

    CLI::App* selftest = app.add_subcommand("selftest", "run the fixture and property suites");
    add_common_flags(selftest, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(cfg, expr_text);
        if (map->parsed()) return cmd_map(cfg, map_path, map->count("--ring") > 0);
        if (realize_cmd->parsed()) return cmd_realize(cfg, realize_h, realize_b);
        if (selftest->parsed()) return SelftestRunner{cfg}.run();
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
