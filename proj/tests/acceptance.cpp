// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Everything here is exact integer arithmetic; there are no
// tolerances.

#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "isoindex/manifolds.hpp"
#include "isoindex/skewmap.hpp"

using namespace isoindex;

namespace {

int failures = 0;

std::uint64_t pow_u64(std::uint64_t b, std::size_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

Vec vec_of_code(const RingSpec& ring, std::size_t n, std::uint64_t code) {
    Vec v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(Scalar::from_index(ring, code % ring.order()));
        code /= ring.order();
    }
    return v;
}

// Random map with the diagonal cleared: alternating even in characteristic
// 2, which is the scope of the Betti-number bounds.
SkewBilinearMap random_alternating(const RingSpec& ring, std::size_t n, std::size_t m,
                                   std::uint64_t seed) {
    SkewBilinearMap raw = random_skew_map(ring, n, m, seed);
    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < m; ++t) {
        Matrix g = raw.gram(t);
        for (std::size_t i = 0; i < n; ++i) g.at(i, i) = Scalar::zero(ring);
        gram.push_back(std::move(g));
    }
    return SkewBilinearMap::from_gram(ring, n, std::move(gram));
}

void criterion(int number, const std::string& label, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
        ok = body();
    } catch (const std::exception& e) {
        detail = std::string(" (") + e.what() + ")";
    }
    std::printf("%s: criterion %d, %s%s\n", ok ? "pass" : "FAIL", number, label.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

bool structural_matches(const std::string& expr, const RingSpec& ring,
                        const std::vector<std::size_t>& want) {
    return eval_structural(parse_expr(expr), ring).rank_set == RankSet(want);
}

// The named expressions evaluated everywhere below; RP3 carries a GF(2)-only
// cup product on H^1.
struct Fixture {
    std::string expr;
    bool gf2_only = false;
};

const std::vector<Fixture> kFixtures = {
    {"Sg(0)"}, {"Sg(1)"}, {"Sg(2)"}, {"Sg(3)"}, {"Sg(4)"},
    {"T(1)"},  {"T(2)"},  {"T(3)"},  {"T(4)"},  {"T(5)"},
    {"Sg(2) x S(1)"},
    {"RP3", true},
};

bool fixtures_pass() {
    RingSpec q = RingSpec::rationals();
    RingSpec z = RingSpec::integers();
    RingSpec f2 = RingSpec::prime_field(2);
    bool ok = true;
    for (std::size_t g = 0; g <= 4; ++g)
        ok = ok && structural_matches("Sg(" + std::to_string(g) + ")", q, {g});
    for (std::size_t n = 1; n <= 5; ++n)
        ok = ok && structural_matches("T(" + std::to_string(n) + ")", q, {1});
    ok = ok && structural_matches("Sg(2) x S(1)", z, {1, 2});
    ok = ok && structural_matches("Sg(2) x Sg(3)", q, {1, 2, 3});
    ok = ok && structural_matches("Sg(2) x S(1) # Sg(2) x S(1)", z, {2, 3, 4});
    ok = ok && structural_matches("Sg(2) x Sg(3) # Sg(2) x Sg(3)", q, {2, 3, 4, 5, 6});
    EvalResult rp3 = eval_structural(parse_expr("RP3"), f2);
    ok = ok && rp3.h == 0 && rp3.b1 == 1;
    EvalResult heis = eval_structural(parse_expr("Heis"), z);
    ok = ok && heis.h == 2 && heis.b1 == 2 && heis.corank == 1;
    EvalResult kt = eval_structural(parse_expr("KT"), z);
    ok = ok && kt.h == 2 && kt.b1 == 3 && kt.corank == 1;
    return ok;
}

bool oracle_equivalence() {
    bool ok = true;
    for (const Fixture& f : kFixtures) {
        for (const RingSpec& ring : {RingSpec::prime_field(2), RingSpec::prime_field(3)}) {
            if (f.gf2_only && ring.characteristic() != 2) continue;
            ManifoldExpr e = parse_expr(f.expr);
            EvalResult structural = eval_structural(e, ring);
            if (structural.b1 > 6) continue;
            SkewBilinearMap phi = compile(e, ring);
            ok = ok && rank_set(phi) == structural.rank_set;
        }
    }
    return ok;
}

bool random_map_laws() {
    bool ok = true;
    for (std::uint32_t p : {2u, 3u}) {
        RingSpec ring = RingSpec::prime_field(p);
        for (std::uint64_t i = 0; i < 200; ++i) {
            std::size_t n = 1 + i % 4;  // n <= 4
            std::size_t m = 1 + i % 3;  // m <= 3
            SkewBilinearMap a = random_skew_map(ring, n, m, 1000 * p + i);
            // Kernel containment and the h = 0 criterion on every instance.
            Subspace ker = kernel(a);
            RankSet ha = rank_set(a);
            for (const Subspace& s : enumerate_maximal_isotropic(a))
                ok = ok && s.contains(ker);
            // The h = 0 criterion: for a rank-one codomain it is the
            // closed-form lemma; in general h >= 1 exactly when some
            // nonzero vector has vanishing diagonal (it spans an isotropic
            // line).
            if (m == 1) {
                bool h_zero_expected = p == 2 && n == 1 && !a.is_zero_map();
                ok = ok && ((ha.max() == 0) == h_zero_expected);
            }
            bool isotropic_line = false;
            for (std::uint64_t code = 1; code < pow_u64(p, n); ++code) {
                Vec v = vec_of_code(ring, n, code);
                if (a.diagonal_vanishes(v)) isotropic_line = true;
            }
            ok = ok && ((ha.max() >= 1) == isotropic_line);
            // Laws against a small partner to keep the composites exact and
            // fast.
            SkewBilinearMap b = random_skew_map(ring, 1 + i % 2, 1 + i % 2, 5000 * p + i);
            RankSet hb = rank_set(b);
            ok = ok && rank_set(direct_sum(a, b)) == rank_set_sum_law(ha, hb);
            ok = ok && rank_set(product_map(a, b)) ==
                           rank_set_product_law(ha, hb, ha.max(), hb.max());
            if (!ok) return false;
        }
    }
    return ok;
}

bool bounds_suite() {
    bool ok = true;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        RingSpec ring = RingSpec::prime_field(p);
        for (std::uint64_t i = 0; i < 60; ++i) {
            std::size_t n = 1 + i % 4;
            std::size_t m = 1 + i % 3;
            SkewBilinearMap phi = random_alternating(ring, n, m, 77 * p + i);
            long b1 = static_cast<long>(n);
            long b2 = static_cast<long>(m);
            long k = static_cast<long>(kernel(phi).rank());
            bool char2 = p == 2;
            Bounds bd = bounds(b1, b2, k, char2, false);
            long h = static_cast<long>(rank_set(phi).max());
            if (!bd.exception_applied) ok = ok && bd.lo <= h;
            ok = ok && h <= bd.hi;
            // Single forms collapse the sandwich to h = (b1 + k) / 2.
            if (m == 1 && !bd.exception_applied) ok = ok && 2 * h == b1 + k;
            if (!ok) return false;
        }
    }
    // Surjective tightening reproduces the geometric values.
    RingSpec q = RingSpec::rationals();
    for (std::size_t n = 2; n <= 5; ++n) {
        BoundsCheck bc = bounds_check(parse_expr("T(" + std::to_string(n) + ")"), q);
        ok = ok && bc.surjective && bc.hi == 1 && bc.pass;
    }
    for (std::size_t g = 1; g <= 4; ++g) {
        BoundsCheck bc = bounds_check(parse_expr("Sg(" + std::to_string(g) + ")"), q);
        ok = ok && bc.hi == static_cast<long>(g) && bc.pass;
    }
    return ok;
}

bool extension_monotonicity() {
    bool ok = true;
    struct Pair {
        std::uint32_t p;
        RingSpec ext;
    };
    for (const Pair& pr : {Pair{2, RingSpec::ext_field_default(2, 2)},
                           Pair{3, RingSpec::ext_field_default(3, 2)}}) {
        RingSpec base = RingSpec::prime_field(pr.p);
        for (std::uint64_t i = 0; i < 100; ++i) {
            std::size_t n = 1 + i % 3;
            std::size_t m = 1 + i % 2;
            SkewBilinearMap phi = random_skew_map(base, n, m, 31 * pr.p + i);
            ok = ok && rank_set(phi).max() <= rank_set(extend_scalars(phi, pr.ext)).max();
            if (!ok) return false;
        }
    }
    // Gram [[0,2],[-2,0]]: h depends on whether p divides the entry.
    for (const RingSpec& ring : {RingSpec::rationals(), RingSpec::prime_field(3)}) {
        Matrix g = Matrix::from_rows(ring, {{0, 2}, {-2, 0}});
        ok = ok && isotropy_index(SkewBilinearMap::from_gram(ring, 2, {g})).h_upper == 1;
    }
    RingSpec f2 = RingSpec::prime_field(2);
    Matrix g2 = Matrix::from_rows(f2, {{0, 2}, {-2, 0}});
    ok = ok && isotropy_index(SkewBilinearMap::from_gram(f2, 2, {g2})).h_upper == 2;
    return ok;
}

bool realization_round_trip() {
    RingSpec q = RingSpec::rationals();
    RingSpec f2 = RingSpec::prime_field(2);
    bool ok = true;
    for (std::size_t h = 1; h <= 6; ++h)
        for (std::size_t b = h; b <= 6; ++b) {
            ManifoldExpr e = realize(h, b);
            EvalResult r = eval_structural(e, q);
            ok = ok && r.h == h && r.b1 == b && corank(e) == h;
        }
    for (std::size_t b = 1; b <= 5; ++b)
        for (std::size_t h = 0; h <= b; ++h) {
            ManifoldExpr e = realize_dim3_mod2(h, b);
            EvalResult r = eval_structural(e, f2);
            ok = ok && e.dim() == 3 && r.h == h && r.b1 == b;
        }
    return ok;
}

bool rank_set_realization() {
    RingSpec q = RingSpec::rationals();
    bool ok = true;
    for (unsigned mask = 1; mask < 32; ++mask) {
        std::vector<std::size_t> vals;
        for (std::size_t v = 1; v <= 5; ++v)
            if (mask & (1u << (v - 1))) vals.push_back(v);
        RankSet want(vals);
        ok = ok && eval_structural(realize_rank_set(want), q).rank_set == want;
        if (!ok) return false;
    }
    ManifoldExpr trivial = realize_rank_set(RankSet({0}));
    ok = ok && trivial.node == NodeKind::Atom && trivial.atom == AtomKind::Sphere &&
         eval_structural(trivial, q).rank_set == RankSet({0});
    return ok;
}

}  // namespace

int main() {
    criterion(1, "reference fixtures, structural path, exact equality", fixtures_pass);
    criterion(2, "enumeration matches structural rank sets (b1 <= 6, GF(2)/GF(3))",
              oracle_equivalence);
    criterion(3, "random-map laws: direct sum, product, kernel, h = 0 (200 per field)",
              random_map_laws);
    criterion(4, "bounds sandwich, single-form equality, surjective tightening",
              bounds_suite);
    criterion(5, "extension monotonicity GF(2)->GF(4), GF(3)->GF(9); [[0,2],[-2,0]]",
              extension_monotonicity);
    criterion(6, "realize and realize_dim3_mod2 round-trip; corank = h",
              realization_round_trip);
    criterion(7, "rank-set realization for every nonempty S in {1..5} and {0}",
              rank_set_realization);
    return failures == 0 ? 0 : 1;
}
