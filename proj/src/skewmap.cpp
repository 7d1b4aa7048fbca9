#include "isoindex/skewmap.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace isoindex {

namespace {

void validate_antisymmetry(const RingSpec& ring, std::size_t n,
                           const std::vector<Matrix>& gram) {
    bool char2 = ring.characteristic() == 2;
    for (std::size_t t = 0; t < gram.size(); ++t) {
        if (gram[t].rows() != n || gram[t].cols() != n)
            throw std::invalid_argument("gram[" + std::to_string(t) + "] is not n x n");
        if (gram[t].ring() != ring)
            throw std::invalid_argument("gram[" + std::to_string(t) + "] ring mismatch");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                if (gram[t].at(j, i) != -gram[t].at(i, j))
                    throw std::invalid_argument("antisymmetry violated at t=" + std::to_string(t) +
                                                " i=" + std::to_string(i) + " j=" + std::to_string(j));
                if (i == j && !char2 && !gram[t].at(i, i).is_zero())
                    throw std::invalid_argument("nonzero diagonal at t=" + std::to_string(t) +
                                                " i=" + std::to_string(i) +
                                                " (characteristic != 2)");
            }
    }
}

// Comparator for reduced candidate rows over a finite field.
struct VecLess {
    bool operator()(const Vec& a, const Vec& b) const {
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto x = a[i].index(), y = b[i].index();
            if (x != y) return x < y;
        }
        return false;
    }
};

}  // namespace

SkewBilinearMap SkewBilinearMap::from_gram(RingSpec ring, std::size_t dim_l,
                                           std::vector<Matrix> gram) {
    validate_antisymmetry(ring, dim_l, gram);
    return SkewBilinearMap(std::move(ring), dim_l, std::move(gram));
}

SkewBilinearMap SkewBilinearMap::zero(const RingSpec& ring, std::size_t dim_l,
                                      std::size_t dim_v) {
    std::vector<Matrix> gram(dim_v, Matrix(ring, dim_l, dim_l));
    return SkewBilinearMap(ring, dim_l, std::move(gram));
}

SkewBilinearMap SkewBilinearMap::symplectic(const RingSpec& ring, std::size_t genus) {
    Matrix g(ring, 2 * genus, 2 * genus);
    for (std::size_t i = 0; i < genus; ++i) {
        g.at(2 * i, 2 * i + 1) = Scalar::one(ring);
        g.at(2 * i + 1, 2 * i) = -Scalar::one(ring);
    }
    std::vector<Matrix> gram;
    gram.push_back(std::move(g));
    return SkewBilinearMap(ring, 2 * genus, std::move(gram));
}

Vec SkewBilinearMap::evaluate(const Vec& x, const Vec& y) const {
    if (x.size() != dim_l_ || y.size() != dim_l_)
        throw std::invalid_argument("evaluate: vector length != dim L");
    Vec out;
    out.reserve(gram_.size());
    for (const Matrix& g : gram_) {
        Scalar acc = Scalar::zero(ring_);
        for (std::size_t i = 0; i < dim_l_; ++i) {
            if (x[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_l_; ++j)
                if (!g.at(i, j).is_zero()) acc = acc + x[i] * g.at(i, j) * y[j];
        }
        out.push_back(acc);
    }
    return out;
}

bool SkewBilinearMap::diagonal_vanishes(const Vec& v) const {
    return vec_is_zero(evaluate(v, v));
}

bool SkewBilinearMap::is_zero_map() const {
    return std::all_of(gram_.begin(), gram_.end(),
                       [](const Matrix& g) { return g.is_zero(); });
}

// ---- Subspace ----

Subspace Subspace::from_rows(const RingSpec& ring, std::size_t ambient_dim,
                             const std::vector<Vec>& rows) {
    Matrix m(ring, rows.size(), ambient_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    RrefResult rr = rref(m);
    Matrix basis(rr.reduced.ring(), rr.rank, ambient_dim);
    for (std::size_t i = 0; i < rr.rank; ++i) basis.set_row(i, rr.reduced.row(i));
    return Subspace(std::move(basis));
}

Subspace Subspace::zero(const RingSpec& ring, std::size_t ambient_dim) {
    RingSpec r = ring.kind() == RingKind::Integers ? RingSpec::rationals() : ring;
    return Subspace(Matrix(r, 0, ambient_dim));
}

Subspace Subspace::full(const RingSpec& ring, std::size_t ambient_dim) {
    RingSpec r = ring.kind() == RingKind::Integers ? RingSpec::rationals() : ring;
    return Subspace(Matrix::identity(r, ambient_dim));
}

Vec Subspace::reduce(const Vec& v) const {
    Vec r = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        std::size_t p = 0;
        while (p < ambient_dim() && basis_.at(i, p).is_zero()) ++p;
        if (p == ambient_dim() || r[p].is_zero()) continue;
        Scalar f = r[p];
        for (std::size_t j = 0; j < ambient_dim(); ++j)
            r[j] = r[j] - f * basis_.at(i, j);
    }
    return r;
}

bool Subspace::contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& other) const {
    for (std::size_t i = 0; i < other.rank(); ++i)
        if (!contains(other.basis_.row(i))) return false;
    return true;
}

Subspace Subspace::extended(const Vec& v) const {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < rank(); ++i) rows.push_back(basis_.row(i));
    rows.push_back(v);
    return from_rows(ring(), ambient_dim(), rows);
}

bool Subspace::operator<(const Subspace& o) const {
    if (rank() != o.rank()) return rank() < o.rank();
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < ambient_dim(); ++j) {
            auto a = basis_.at(i, j).index(), b = o.basis_.at(i, j).index();
            if (a != b) return a < b;
        }
    return false;
}

// ---- RankSet ----

RankSet::RankSet(std::vector<std::size_t> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    if (values_.empty()) throw std::invalid_argument("RankSet: empty");
    if (values_.front() == 0 && values_.size() > 1)
        throw std::invalid_argument("RankSet: 0 present in a non-singleton set");
}

std::string RankSet::str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < values_.size(); ++i)
        os << (i ? "," : "") << values_[i];
    os << "}";
    return os.str();
}

// ---- map-level operations ----

namespace {

SkewBilinearMap promote_to_q(const SkewBilinearMap& phi) {
    if (phi.ring().kind() != RingKind::Integers) return phi;
    return extend_scalars(phi, RingSpec::rationals());
}

// Stacked linear conditions phi(v, h) = 0 for the basis rows h of the
// subspace: one row (G_t h)^T per (t, h).
Matrix constraint_matrix(const SkewBilinearMap& phi, const Subspace& h) {
    std::size_t n = phi.dim_l();
    Matrix c(phi.ring(), phi.dim_v() * h.rank(), n);
    std::size_t r = 0;
    for (std::size_t b = 0; b < h.rank(); ++b) {
        Vec hb = h.basis().row(b);
        for (std::size_t t = 0; t < phi.dim_v(); ++t) {
            Vec gh = isoindex::apply(phi.gram(t), hb);
            c.set_row(r++, gh);
        }
    }
    return c;
}

// All elements of the row space of `basis`, including zero.
template <typename Fn>
void for_each_element(const Matrix& basis, Fn&& fn) {
    const RingSpec& ring = basis.ring();
    std::uint64_t q = ring.order();
    std::size_t d = basis.rows();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= q;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Vec v = zero_vec(ring, basis.cols());
        std::uint64_t t = idx;
        for (std::size_t i = 0; i < d; ++i) {
            Scalar c = Scalar::from_index(ring, t % q);
            t /= q;
            if (!c.is_zero()) v = vec_add(v, vec_scale(c, basis.row(i)));
        }
        if (!fn(v)) return;
    }
}

Vec normalize_leading(Vec v) {
    for (const Scalar& s : v)
        if (!s.is_zero()) return vec_scale(s.inverse(), v);
    return v;
}

long leading_index(const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return static_cast<long>(i);
    return -1;
}

struct DfsState {
    const SkewBilinearMap& phi;
    std::uint64_t budget;
    std::uint64_t used = 0;
    std::vector<Subspace> out;

    // Rows are added in decreasing pivot order. For a target subspace H the
    // partial span after i steps is then forced to be {v in H : leading
    // index of v >= p_i}, so every subspace is reached along exactly one
    // chain. Extensions with pivot >= min_pivot still witness
    // non-maximality; they are just explored from a different parent.
    void visit(const Subspace& h, long min_pivot) {
        Subspace w = orthogonal_space(phi, h);
        bool extendable = false;
        std::set<Vec, VecLess> children;
        for_each_element(w.basis(), [&](const Vec& v) {
            if (++used > budget) throw BudgetExceeded(budget);
            Vec r = h.reduce(v);
            if (vec_is_zero(r)) return true;            // v in H
            if (!phi.diagonal_vanishes(r)) return true; // char-2 diagonal obstruction
            extendable = true;
            long p = leading_index(r);
            if (p < min_pivot) children.insert(normalize_leading(std::move(r)));
            return true;
        });
        if (!extendable) {
            out.push_back(h);
            return;
        }
        for (const Vec& r : children) visit(h.extended(r), leading_index(r));
    }
};

}  // namespace

Subspace kernel(const SkewBilinearMap& phi) {
    SkewBilinearMap p = promote_to_q(phi);
    if (!p.ring().is_field()) throw std::invalid_argument("kernel: field required");
    Matrix stacked(p.ring(), p.dim_v() * p.dim_l(), p.dim_l());
    std::size_t r = 0;
    for (std::size_t t = 0; t < p.dim_v(); ++t)
        for (std::size_t i = 0; i < p.dim_l(); ++i)
            stacked.set_row(r++, p.gram(t).row(i));
    Matrix basis = kernel_basis(stacked);
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < basis.rows(); ++i) rows.push_back(basis.row(i));
    return Subspace::from_rows(p.ring(), p.dim_l(), rows);
}

bool is_isotropic(const SkewBilinearMap& phi, const Subspace& h) {
    if (h.ambient_dim() != phi.dim_l())
        throw std::invalid_argument("is_isotropic: ambient dimension mismatch");
    for (std::size_t i = 0; i < h.rank(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (!vec_is_zero(phi.evaluate(h.basis().row(i), h.basis().row(j))))
                return false;
    return true;
}

Subspace orthogonal_space(const SkewBilinearMap& phi, const Subspace& h) {
    Matrix basis = kernel_basis(constraint_matrix(phi, h));
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < basis.rows(); ++i) rows.push_back(basis.row(i));
    return Subspace::from_rows(basis.ring(), phi.dim_l(), rows);
}

bool is_maximal_isotropic(const SkewBilinearMap& phi_in, const Subspace& h) {
    SkewBilinearMap phi = promote_to_q(phi_in);
    if (!is_isotropic(phi, h))
        throw std::invalid_argument("is_maximal_isotropic: input is not isotropic");
    Subspace w = orthogonal_space(phi, h);
    if (phi.ring().characteristic() != 2) return w.rank() == h.rank();
    // characteristic 2: maximal iff no v in W \ H has phi(v,v) = 0
    bool maximal = true;
    for_each_element(w.basis(), [&](const Vec& v) {
        Vec r = h.reduce(v);
        if (!vec_is_zero(r) && phi.diagonal_vanishes(r)) {
            maximal = false;
            return false;
        }
        return true;
    });
    return maximal;
}

std::vector<Subspace> enumerate_maximal_isotropic(const SkewBilinearMap& phi,
                                                  std::uint64_t budget) {
    if (!phi.ring().is_finite())
        throw std::invalid_argument("enumerate_maximal_isotropic: finite field required");
    if (phi.dim_l() > 10)
        throw std::invalid_argument("enumerate_maximal_isotropic: dim L <= 10 required");
    DfsState state{phi, budget};
    state.visit(Subspace::zero(phi.ring(), phi.dim_l()),
                static_cast<long>(phi.dim_l()));
    std::sort(state.out.begin(), state.out.end());
    return state.out;
}

RankSet rank_set(const SkewBilinearMap& phi_in, std::uint64_t budget) {
    SkewBilinearMap phi = promote_to_q(phi_in);
    if (phi.ring().is_finite()) {
        std::vector<std::size_t> ranks;
        for (const Subspace& s : enumerate_maximal_isotropic(phi, budget))
            ranks.push_back(s.rank());
        return RankSet(std::move(ranks));
    }
    std::size_t n = phi.dim_l();
    if (phi.is_zero_map()) return RankSet::singleton(n);
    if (phi.dim_v() == 1) {
        std::size_t s = rank(phi.gram(0)) / 2;
        return RankSet::singleton(n - s);
    }
    throw std::domain_error(
        "rank_set over Q is only available for zero maps and single forms; "
        "use isotropy_index for a certified interval");
}

SkewBilinearMap direct_sum(const SkewBilinearMap& a, const SkewBilinearMap& b) {
    if (a.ring() != b.ring()) throw std::invalid_argument("direct_sum: ring mismatch");
    std::size_t n1 = a.dim_l(), n2 = b.dim_l(), n = n1 + n2;
    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < a.dim_v(); ++t) {
        Matrix g(a.ring(), n, n);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n1; ++j) g.at(i, j) = a.gram(t).at(i, j);
        gram.push_back(std::move(g));
    }
    for (std::size_t t = 0; t < b.dim_v(); ++t) {
        Matrix g(a.ring(), n, n);
        for (std::size_t i = 0; i < n2; ++i)
            for (std::size_t j = 0; j < n2; ++j) g.at(n1 + i, n1 + j) = b.gram(t).at(i, j);
        gram.push_back(std::move(g));
    }
    return SkewBilinearMap::from_gram(a.ring(), n, std::move(gram));
}

SkewBilinearMap product_map(const SkewBilinearMap& a, const SkewBilinearMap& b) {
    SkewBilinearMap base = direct_sum(a, b);
    std::size_t n1 = a.dim_l(), n2 = b.dim_l(), n = n1 + n2;
    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < base.dim_v(); ++t) gram.push_back(base.gram(t));
    // tensor block: coordinate (i,j) of L1 (x) L2 picks up x1_i y2_j - y1_i x2_j
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            Matrix g(a.ring(), n, n);
            g.at(i, n1 + j) = Scalar::one(a.ring());
            g.at(n1 + j, i) = -Scalar::one(a.ring());
            gram.push_back(std::move(g));
        }
    return SkewBilinearMap::from_gram(a.ring(), n, std::move(gram));
}

RankSet rank_set_sum_law(const RankSet& s1, const RankSet& s2) {
    std::vector<std::size_t> out;
    for (auto x : s1.values())
        for (auto y : s2.values()) out.push_back(x + y);
    return RankSet(std::move(out));
}

RankSet rank_set_product_law(const RankSet& s1, const RankSet& s2,
                             std::size_t h1, std::size_t h2) {
    if (h1 != s1.max() || h2 != s2.max())
        throw std::invalid_argument("rank_set_product_law: h_i must equal max(s_i)");
    if (h1 == 0) return s2;
    if (h2 == 0) return s1;
    std::vector<std::size_t> out{1};
    for (auto x : s1.values()) out.push_back(x);
    for (auto y : s2.values()) out.push_back(y);
    return RankSet(std::move(out));
}

SkewBilinearMap extend_scalars(const SkewBilinearMap& phi, const RingSpec& target) {
    const RingSpec& src = phi.ring();
    bool legal =
        (src.kind() == RingKind::Integers &&
         (target.kind() == RingKind::Rationals || target.kind() == RingKind::PrimeField)) ||
        (src.kind() == RingKind::PrimeField && target.kind() == RingKind::ExtField &&
         src.p() == target.p());
    if (!legal)
        throw std::invalid_argument("extend_scalars: illegal ring pair " + src.name() +
                                    " -> " + target.name());
    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < phi.dim_v(); ++t) gram.push_back(phi.gram(t).convert(target));
    return SkewBilinearMap::from_gram(target, phi.dim_l(), std::move(gram));
}

Subspace greedy_maximal(const SkewBilinearMap& phi_in, std::uint64_t seed) {
    SkewBilinearMap phi = promote_to_q(phi_in);
    if (!phi.ring().is_field()) throw std::invalid_argument("greedy_maximal: field required");
    std::mt19937_64 rng(seed);
    const RingSpec& ring = phi.ring();
    bool char2 = ring.characteristic() == 2;
    Subspace h = kernel(phi);
    for (;;) {
        Subspace w = orthogonal_space(phi, h);
        if (!char2) {
            if (w.rank() == h.rank()) break;
            // any vector of W \ H extends; phi(v,v) = 0 is automatic
            Vec v = zero_vec(ring, phi.dim_l());
            for (int tries = 0; tries < 16 && h.contains(v); ++tries) {
                v = zero_vec(ring, phi.dim_l());
                for (std::size_t i = 0; i < w.rank(); ++i) {
                    long c = ring.is_finite()
                                 ? static_cast<long>(rng() % ring.order())
                                 : static_cast<long>(rng() % 7) - 3;
                    if (c != 0)
                        v = vec_add(v, vec_scale(Scalar(ring, c), w.basis().row(i)));
                }
            }
            if (h.contains(v)) {
                for (std::size_t i = 0; i < w.rank(); ++i)
                    if (!h.contains(w.basis().row(i))) {
                        v = w.basis().row(i);
                        break;
                    }
            }
            h = h.extended(v);
        } else {
            std::set<Vec, VecLess> admissible;
            for_each_element(w.basis(), [&](const Vec& v) {
                Vec r = h.reduce(v);
                if (!vec_is_zero(r) && phi.diagonal_vanishes(r))
                    admissible.insert(normalize_leading(std::move(r)));
                return true;
            });
            if (admissible.empty()) break;
            std::size_t pick = rng() % admissible.size();
            auto it = admissible.begin();
            std::advance(it, pick);
            h = h.extended(*it);
        }
    }
    return h;
}

namespace {

// Is the span of all Gram image vectors the whole codomain?
bool image_spans_codomain(const SkewBilinearMap& phi) {
    std::size_t n = phi.dim_l(), m = phi.dim_v();
    if (m == 0) return true;
    Matrix img(phi.ring(), n * n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < m; ++t)
                img.at(i * n + j, t) = phi.gram(t).at(i, j);
    return rank(img) == m;
}

}  // namespace

IsotropyReport isotropy_index(const SkewBilinearMap& phi_in, std::uint64_t budget,
                              unsigned restarts, std::uint64_t seed) {
    SkewBilinearMap phi = promote_to_q(phi_in);
    IsotropyReport rep;
    std::size_t n = phi.dim_l();
    if (phi.ring().is_finite()) {
        auto subs = enumerate_maximal_isotropic(phi, budget);
        std::vector<std::size_t> ranks;
        std::map<std::size_t, Subspace> witness_by_rank;
        for (const Subspace& s : subs) {
            ranks.push_back(s.rank());
            witness_by_rank.emplace(s.rank(), s);
        }
        rep.rank_set = RankSet(std::move(ranks));
        rep.h_lower = rep.h_upper = rep.rank_set->max();
        for (auto& [r, s] : witness_by_rank) rep.witnesses.push_back(s);
        rep.method = IsotropyMethod::Bruteforce;
        return rep;
    }
    if (phi.is_zero_map()) {
        rep.h_lower = rep.h_upper = n;
        rep.rank_set = RankSet::singleton(n);
        rep.witnesses.push_back(Subspace::full(phi.ring(), n));
        rep.method = IsotropyMethod::SingleForm;
        return rep;
    }
    if (phi.dim_v() == 1) {
        std::size_t s = rank(phi.gram(0)) / 2;
        rep.h_lower = rep.h_upper = n - s;
        rep.rank_set = RankSet::singleton(n - s);
        rep.method = IsotropyMethod::SingleForm;
        return rep;
    }
    // general Q map: greedy witnesses below, Betti-style bounds above
    std::size_t best = 0;
    std::optional<Subspace> best_witness;
    for (unsigned r = 0; r < restarts; ++r) {
        Subspace w = greedy_maximal(phi, seed + r);
        if (!best_witness || w.rank() > best) {
            best = w.rank();
            best_witness = w;
        }
    }
    if (best_witness) rep.witnesses.push_back(*best_witness);
    std::size_t k = kernel(phi).rank();
    Bounds b = bounds(static_cast<long>(n), static_cast<long>(phi.dim_v()),
                      static_cast<long>(k), false, image_spans_codomain(phi));
    rep.h_lower = best;
    rep.h_upper = static_cast<std::size_t>(std::max<long>(b.hi, 0));
    rep.method = IsotropyMethod::BoundsGreedy;
    return rep;
}

SkewBilinearMap random_skew_map(const RingSpec& ring, std::size_t dim_l,
                                std::size_t dim_v, std::uint64_t seed) {
    if (!ring.is_finite()) throw std::invalid_argument("random_skew_map: finite field required");
    std::mt19937_64 rng(seed);
    bool char2 = ring.characteristic() == 2;
    std::vector<Matrix> gram;
    for (std::size_t t = 0; t < dim_v; ++t) {
        Matrix g(ring, dim_l, dim_l);
        for (std::size_t i = 0; i < dim_l; ++i) {
            if (char2) g.at(i, i) = Scalar::from_index(ring, rng() % ring.order());
            for (std::size_t j = i + 1; j < dim_l; ++j) {
                Scalar s = Scalar::from_index(ring, rng() % ring.order());
                g.at(i, j) = s;
                g.at(j, i) = -s;
            }
        }
        gram.push_back(std::move(g));
    }
    return SkewBilinearMap::from_gram(ring, dim_l, std::move(gram));
}

Bounds bounds(long b1, long b2, long k, bool char2, bool surjective) {
    if (k < 0 || k > b1 || b2 < 0) throw std::invalid_argument("bounds: need 0 <= k <= b1, b2 >= 0");
    Bounds out;
    long num_lo = b1 + k * b2;
    long num_hi = b1 * b2 + k;
    long den = b2 + 1;
    out.lo = (num_lo + den - 1) / den;  // ceil
    out.hi = num_hi / den;              // floor
    out.exception_applied = char2 && b1 == 1 && k == 0;
    if (out.exception_applied) out.lo = 0;
    if (surjective && !out.exception_applied) {
        long rad = (2 * b1 - 2 * k - 1) * (2 * b1 - 2 * k - 1) - 8 * b2;
        if (rad < 0) {
            out.radicand_negative = true;
        } else {
            // largest h with h <= k, or h > k and (2h-2k-1)^2 <= rad
            long best = k;
            for (long h = k + 1; h <= out.hi; ++h) {
                long d = 2 * (h - k) - 1;
                if (d * d <= rad) best = h;
                else break;
            }
            out.hi = std::min(out.hi, best);
        }
    }
    return out;
}

}  // namespace isoindex
