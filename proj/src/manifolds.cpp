#include "isoindex/manifolds.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace isoindex {

ManifoldExpr ManifoldExpr::sphere(std::size_t n) {
    if (n < 1) throw std::invalid_argument("S(n): n >= 1 required");
    ManifoldExpr e;
    e.atom = AtomKind::Sphere;
    e.param = n;
    return e;
}

ManifoldExpr ManifoldExpr::surface(std::size_t g) {
    ManifoldExpr e;
    e.atom = AtomKind::Surface;
    e.param = g;
    return e;
}

ManifoldExpr ManifoldExpr::torus(std::size_t n) {
    if (n < 1) throw std::invalid_argument("T(n): n >= 1 required");
    ManifoldExpr e;
    e.atom = AtomKind::Torus;
    e.param = n;
    return e;
}

ManifoldExpr ManifoldExpr::rp3() {
    ManifoldExpr e;
    e.atom = AtomKind::RP3;
    return e;
}

ManifoldExpr ManifoldExpr::heisenberg() {
    ManifoldExpr e;
    e.atom = AtomKind::Heisenberg;
    return e;
}

ManifoldExpr ManifoldExpr::kodaira_thurston() {
    ManifoldExpr e;
    e.atom = AtomKind::KodairaThurston;
    return e;
}

ManifoldExpr ManifoldExpr::conn_sum(std::vector<ManifoldExpr> children) {
    if (children.empty()) throw std::invalid_argument("conn_sum: no children");
    if (children.size() == 1) return children[0];
    std::size_t d = children[0].dim();
    if (d < 2) throw std::invalid_argument("conn_sum: dimension >= 2 required");
    for (const auto& c : children)
        if (c.dim() != d)
            throw std::invalid_argument("conn-sum dimension mismatch (" +
                                        std::to_string(d) + " vs " + std::to_string(c.dim()) + ")");
    ManifoldExpr e;
    e.node = NodeKind::ConnSum;
    e.children = std::move(children);
    return e;
}

ManifoldExpr ManifoldExpr::product(std::vector<ManifoldExpr> children) {
    if (children.empty()) throw std::invalid_argument("product: no children");
    if (children.size() == 1) return children[0];
    ManifoldExpr e;
    e.node = NodeKind::Product;
    e.children = std::move(children);
    return e;
}

std::size_t ManifoldExpr::dim() const {
    switch (node) {
        case NodeKind::Atom:
            switch (atom) {
                case AtomKind::Sphere: return param;
                case AtomKind::Surface: return 2;
                case AtomKind::Torus: return param;
                case AtomKind::RP3: return 3;
                case AtomKind::Heisenberg: return 3;
                case AtomKind::KodairaThurston: return 4;
            }
            break;
        case NodeKind::ConnSum:
            return children[0].dim();
        case NodeKind::Product: {
            std::size_t d = 0;
            for (const auto& c : children) d += c.dim();
            return d;
        }
    }
    return 0;
}

std::string ManifoldExpr::str() const {
    switch (node) {
        case NodeKind::Atom:
            switch (atom) {
                case AtomKind::Sphere: return "S(" + std::to_string(param) + ")";
                case AtomKind::Surface: return "Sg(" + std::to_string(param) + ")";
                case AtomKind::Torus: return "T(" + std::to_string(param) + ")";
                case AtomKind::RP3: return "RP3";
                case AtomKind::Heisenberg: return "Heis";
                case AtomKind::KodairaThurston: return "KT";
            }
            break;
        case NodeKind::ConnSum: {
            std::string s;
            for (std::size_t i = 0; i < children.size(); ++i)
                s += (i ? " # " : "") + children[i].str();
            return s;
        }
        case NodeKind::Product: {
            std::string s;
            for (std::size_t i = 0; i < children.size(); ++i) {
                const auto& c = children[i];
                std::string cs = c.str();
                if (c.node == NodeKind::ConnSum) cs = "(" + cs + ")";
                s += (i ? " x " : "") + cs;
            }
            return s;
        }
    }
    return "?";
}

// ---- parser ----

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    ManifoldExpr parse() {
        ManifoldExpr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isalnum(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::size_t number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected a number", pos_);
        return static_cast<std::size_t>(std::stoul(text_.substr(start, pos_ - start)));
    }

    std::size_t paren_number() {
        if (!eat('(')) throw ParseError("expected '('", pos_);
        std::size_t n = number();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return n;
    }

    ManifoldExpr parse_sum() {  // '#' binds looser than 'x'
        std::vector<ManifoldExpr> parts{parse_product()};
        while (eat('#')) parts.push_back(parse_product());
        std::size_t here = pos_;
        try {
            return ManifoldExpr::conn_sum(std::move(parts));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), here);
        }
    }

    ManifoldExpr parse_product() {
        std::vector<ManifoldExpr> parts{parse_factor()};
        for (;;) {
            std::size_t save = pos_;
            skip_ws();
            if (pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == 'X')) {
                ++pos_;
                parts.push_back(parse_factor());
            } else {
                pos_ = save;
                break;
            }
        }
        return ManifoldExpr::product(std::move(parts));
    }

    ManifoldExpr parse_factor() {
        skip_ws();
        if (eat('(')) {
            ManifoldExpr e = parse_sum();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        std::size_t here = pos_;
        std::string name = ident();
        try {
            if (name == "S") return ManifoldExpr::sphere(paren_number());
            if (name == "Sg") return ManifoldExpr::surface(paren_number());
            if (name == "T") return ManifoldExpr::torus(paren_number());
            if (name == "RP3") return ManifoldExpr::rp3();
            if (name == "Heis") return ManifoldExpr::heisenberg();
            if (name == "KT") return ManifoldExpr::kodaira_thurston();
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), here);
        }
        throw ParseError("expected an atom or '('", here);
    }
};

}  // namespace

ManifoldExpr parse_expr(const std::string& text) { return Parser(text).parse(); }

// ---- evaluation ----

namespace {

// T(n) -> product of circles, KT -> Heis x S^1, Sg(0) -> S^2.
ManifoldExpr normalized(const ManifoldExpr& e) {
    switch (e.node) {
        case NodeKind::Atom:
            switch (e.atom) {
                case AtomKind::Torus: {
                    std::vector<ManifoldExpr> circles(e.param, ManifoldExpr::sphere(1));
                    return ManifoldExpr::product(std::move(circles));
                }
                case AtomKind::KodairaThurston:
                    return ManifoldExpr::product(
                        {ManifoldExpr::heisenberg(), ManifoldExpr::sphere(1)});
                case AtomKind::Surface:
                    if (e.param == 0) return ManifoldExpr::sphere(2);
                    return e;
                default:
                    return e;
            }
        case NodeKind::ConnSum:
        case NodeKind::Product: {
            std::vector<ManifoldExpr> kids;
            for (const auto& c : e.children) kids.push_back(normalized(c));
            return e.node == NodeKind::ConnSum ? ManifoldExpr::conn_sum(std::move(kids))
                                              : ManifoldExpr::product(std::move(kids));
        }
    }
    return e;
}

RingSpec field_of(const RingSpec& ring) {
    return ring.kind() == RingKind::Integers ? RingSpec::rationals() : ring;
}

}  // namespace

CohomologyModel atom_model(AtomKind atom, std::size_t param, const RingSpec& ring) {
    RingSpec f = field_of(ring);
    switch (atom) {
        case AtomKind::Sphere: {
            std::size_t n = param;
            if (n == 1)
                return {{1, 1}, SkewBilinearMap::zero(f, 1, 0)};
            std::vector<std::size_t> b(n + 1, 0);
            b[0] = b[n] = 1;
            return {b, SkewBilinearMap::zero(f, 0, b.size() > 2 ? b[2] : 0)};
        }
        case AtomKind::Surface: {
            if (param == 0) return atom_model(AtomKind::Sphere, 2, ring);
            return {{1, 2 * param, 1}, SkewBilinearMap::symplectic(f, param)};
        }
        case AtomKind::RP3: {
            if (f.characteristic() == 2) {
                Matrix g = Matrix::from_rows(f, {{1}});
                std::vector<Matrix> gram{g};
                return {{1, 1, 1, 1}, SkewBilinearMap::from_gram(f, 1, std::move(gram))};
            }
            return {{1, 0, 0, 1}, SkewBilinearMap::zero(f, 0, 0)};
        }
        case AtomKind::Heisenberg: {
            if (f.characteristic() != 0)
                throw std::invalid_argument("Heisenberg model is only defined over Z/Q");
            return {{1, 2, 2, 1}, SkewBilinearMap::zero(f, 2, 2)};
        }
        case AtomKind::Torus:
        case AtomKind::KodairaThurston:
            throw std::logic_error("atom_model: normalize Torus/KT first");
    }
    throw std::logic_error("unreachable");
}

std::vector<std::size_t> betti(const ManifoldExpr& expr_in, const RingSpec& ring) {
    ManifoldExpr expr = normalized(expr_in);
    switch (expr.node) {
        case NodeKind::Atom:
            return atom_model(expr.atom, expr.param, ring).betti;
        case NodeKind::ConnSum: {
            std::size_t n = expr.dim();
            std::vector<std::size_t> b(n + 1, 0);
            b[0] = b[n] = 1;
            for (const auto& c : expr.children) {
                auto cb = betti(c, ring);
                for (std::size_t i = 1; i < n; ++i) b[i] += cb[i];
            }
            return b;
        }
        case NodeKind::Product: {
            std::vector<std::size_t> b{1};
            for (const auto& c : expr.children) {
                auto cb = betti(c, ring);
                std::vector<std::size_t> conv(b.size() + cb.size() - 1, 0);
                for (std::size_t i = 0; i < b.size(); ++i)
                    for (std::size_t j = 0; j < cb.size(); ++j) conv[i + j] += b[i] * cb[j];
                b = std::move(conv);
            }
            return b;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

struct StructEval {
    RankSet rank_set{{0}};
    std::vector<std::string> exceptions;
};

StructEval eval_rank_set(const ManifoldExpr& expr, const RingSpec& ring) {
    switch (expr.node) {
        case NodeKind::Atom:
            // Closed forms; normalization already removed Torus/KT/Sg(0).
            switch (expr.atom) {
                case AtomKind::Sphere:
                    return {RankSet::singleton(expr.param == 1 ? 1 : 0), {}};
                case AtomKind::Surface:
                    return {RankSet::singleton(expr.param), {}};
                case AtomKind::RP3:
                    // b1 = 1 with alpha^2 != 0 mod 2, b1 = 0 otherwise.
                    return {RankSet::singleton(0), {}};
                case AtomKind::Heisenberg:
                    if (ring.is_finite())
                        throw std::invalid_argument("Heisenberg: characteristic 0 required");
                    return {RankSet::singleton(2), {}};  // cup product on H^1 vanishes
                default:
                    throw std::logic_error("unnormalized atom in eval");
            }
        case NodeKind::ConnSum: {
            StructEval acc = eval_rank_set(expr.children[0], ring);
            for (std::size_t i = 1; i < expr.children.size(); ++i) {
                StructEval next = eval_rank_set(expr.children[i], ring);
                acc.rank_set = rank_set_sum_law(acc.rank_set, next.rank_set);
                for (auto& t : next.exceptions) acc.exceptions.push_back(std::move(t));
            }
            return acc;
        }
        case NodeKind::Product: {
            StructEval acc = eval_rank_set(expr.children[0], ring);
            for (std::size_t i = 1; i < expr.children.size(); ++i) {
                StructEval next = eval_rank_set(expr.children[i], ring);
                std::size_t h1 = acc.rank_set.max(), h2 = next.rank_set.max();
                if (h1 == 0 || h2 == 0)
                    acc.exceptions.push_back("dir_prod: factor with h=0 at " +
                                             expr.children[h1 == 0 ? 0 : i].str());
                acc.rank_set = rank_set_product_law(acc.rank_set, next.rank_set, h1, h2);
                for (auto& t : next.exceptions) acc.exceptions.push_back(std::move(t));
            }
            return acc;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

EvalResult eval_structural(const ManifoldExpr& expr_in, const RingSpec& ring) {
    ManifoldExpr expr = normalized(expr_in);
    StructEval se = eval_rank_set(expr, ring);
    EvalResult r;
    r.b1 = betti(expr, ring)[1];
    r.rank_set = se.rank_set;
    r.h = se.rank_set.max();
    r.corank = corank(expr);
    r.exceptions_applied = std::move(se.exceptions);
    return r;
}

SkewBilinearMap compile(const ManifoldExpr& expr_in, const RingSpec& ring) {
    ManifoldExpr expr = normalized(expr_in);
    switch (expr.node) {
        case NodeKind::Atom:
            return atom_model(expr.atom, expr.param, ring).phi;
        case NodeKind::ConnSum: {
            SkewBilinearMap acc = compile(expr.children[0], ring);
            for (std::size_t i = 1; i < expr.children.size(); ++i)
                acc = direct_sum(acc, compile(expr.children[i], ring));
            return acc;
        }
        case NodeKind::Product: {
            SkewBilinearMap acc = compile(expr.children[0], ring);
            for (std::size_t i = 1; i < expr.children.size(); ++i)
                acc = product_map(acc, compile(expr.children[i], ring));
            return acc;
        }
    }
    throw std::logic_error("unreachable");
}

ManifoldExpr realize(std::size_t h, std::size_t b) {
    if (h == 0 && b == 0) return ManifoldExpr::sphere(3);
    if (h == 0 && b == 1) return ManifoldExpr::rp3();  // valid over GF(2) only
    if (!(h >= 1 && h <= b))
        throw std::invalid_argument("realize: inadmissible (h,b)=(" + std::to_string(h) +
                                    "," + std::to_string(b) + ")");
    std::size_t ceil_bh = (b + h - 1) / h;
    std::size_t n = 2 + ceil_bh;
    std::vector<ManifoldExpr> parts;
    std::size_t rem = b;
    for (std::size_t i = 0; i < h; ++i) {
        std::size_t left = h - i;
        std::size_t mi = (rem + left - 1) / left;  // balanced partition
        rem -= mi;
        parts.push_back(ManifoldExpr::product(
            {ManifoldExpr::torus(mi), ManifoldExpr::sphere(n - mi)}));
    }
    return ManifoldExpr::conn_sum(std::move(parts));
}

ManifoldExpr realize_dim3_mod2(std::size_t h, std::size_t b) {
    if (h == 0 && b == 0) return ManifoldExpr::sphere(3);
    if (h > b || b < 1)
        throw std::invalid_argument("realize_dim3_mod2: inadmissible (h,b)");
    std::vector<ManifoldExpr> parts;
    for (std::size_t i = 0; i < h; ++i)
        parts.push_back(ManifoldExpr::product(
            {ManifoldExpr::sphere(1), ManifoldExpr::sphere(2)}));
    for (std::size_t i = 0; i < b - h; ++i) parts.push_back(ManifoldExpr::rp3());
    return ManifoldExpr::conn_sum(std::move(parts));
}

ManifoldExpr realize_rank_set(const RankSet& s) {
    const auto& v = s.values();
    if (v.size() == 1) {
        if (v[0] == 0) return ManifoldExpr::sphere(3);
        return ManifoldExpr::surface(v[0]);
    }
    std::size_t m = v.front();
    if (m < 1) throw std::invalid_argument("realize_rank_set: min >= 1 required for |S| >= 2");
    std::size_t n_parts = v.size();
    std::vector<ManifoldExpr> factors;
    for (auto si : v) factors.push_back(ManifoldExpr::surface(si - m + 1));
    ManifoldExpr m1 = ManifoldExpr::product(std::move(factors));
    ManifoldExpr m2 = ManifoldExpr::product(
        {ManifoldExpr::surface(m - 1), ManifoldExpr::sphere(2 * n_parts - 2)});
    return ManifoldExpr::conn_sum({std::move(m1), std::move(m2)});
}

std::size_t corank(const ManifoldExpr& expr_in) {
    ManifoldExpr expr = normalized(expr_in);
    switch (expr.node) {
        case NodeKind::Atom:
            switch (expr.atom) {
                case AtomKind::Sphere: return expr.param == 1 ? 1 : 0;
                case AtomKind::Surface: return expr.param;
                case AtomKind::RP3: return 0;
                case AtomKind::Heisenberg: return 1;
                default: throw std::logic_error("corank: unnormalized atom");
            }
        case NodeKind::ConnSum: {
            std::size_t s = 0;
            for (const auto& c : expr.children) s += corank(c);
            return s;
        }
        case NodeKind::Product: {
            std::size_t s = 0;
            for (const auto& c : expr.children) s = std::max(s, corank(c));
            return s;
        }
    }
    throw std::logic_error("unreachable");
}

BoundsCheck bounds_check(const ManifoldExpr& expr, const RingSpec& ring) {
    auto bv = betti(expr, ring);
    long b1 = static_cast<long>(bv[1]);
    long b2 = bv.size() > 2 ? static_cast<long>(bv[2]) : 0;
    SkewBilinearMap phi = compile(expr, ring);
    long k = static_cast<long>(kernel(phi).rank());
    EvalResult ev = eval_structural(expr, ring);

    // surjectivity against the true b2, not the formal codomain
    Matrix img(phi.ring(), phi.dim_l() * phi.dim_l(), phi.dim_v());
    for (std::size_t i = 0; i < phi.dim_l(); ++i)
        for (std::size_t j = 0; j < phi.dim_l(); ++j)
            for (std::size_t t = 0; t < phi.dim_v(); ++t)
                img.at(i * phi.dim_l() + j, t) = phi.gram(t).at(i, j);
    bool surjective = phi.dim_v() == 0 ? b2 == 0
                                       : static_cast<long>(rank(img)) == b2;

    bool char2 = ring.characteristic() == 2;
    Bounds b = bounds(b1, b2, k, char2, surjective);
    BoundsCheck out;
    out.lo = b.lo;
    out.hi = b.hi;
    out.h = ev.h;
    out.exception = b.exception_applied;
    out.surjective = surjective && !b.radicand_negative;
    long h = static_cast<long>(ev.h);
    out.pass = b.exception_applied ? h <= b.hi : (b.lo <= h && h <= b.hi);
    return out;
}

}  // namespace isoindex
