#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slc/rational.hpp"
#include "slc/vartable.hpp"

namespace slc {

/// Monomial of a supercommutative algebra: even variables with exponents,
/// odd variables as a subset (theta^2 = 0).  The odd factors of a monomial
/// are always read in ascending canonical order; all signs in the system
/// are defined relative to that normal form.
struct SuperMonomial {
    std::vector<std::pair<int, int>> even;  // (var id, exponent>0), sorted by id
    std::uint64_t odd = 0;                  // bit i <-> odd variable with odd_bit i

    int degree() const {
        int d = 0;
        for (const auto& [v, e] : even) d += e;
        return d + __builtin_popcountll(odd);
    }
    int parity() const { return __builtin_popcountll(odd) & 1; }
    bool is_constant() const { return even.empty() && odd == 0; }

    int even_exp(int var_id) const {
        for (const auto& [v, e] : even)
            if (v == var_id) return e;
        return 0;
    }

    bool operator==(const SuperMonomial& o) const { return odd == o.odd && even == o.even; }
};

/// Canonical order: total degree first, then a lexicographic rule in which
/// a larger exponent on an earlier variable makes the monomial smaller
/// (so xi1*xi2 < xi1*eta1 when xi2 precedes eta1).
inline int cmp_monomial(const SuperMonomial& a, const SuperMonomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    // Even part: merged walk over sorted (id, exp) lists.
    size_t i = 0, j = 0;
    while (i < a.even.size() || j < b.even.size()) {
        int va = i < a.even.size() ? a.even[i].first : INT32_MAX;
        int vb = j < b.even.size() ? b.even[j].first : INT32_MAX;
        if (va < vb) return -1;  // a has positive exponent on an earlier var
        if (vb < va) return 1;
        int ea = a.even[i].second, eb = b.even[j].second;
        if (ea != eb) return ea > eb ? -1 : 1;
        ++i, ++j;
    }
    if (a.odd != b.odd) {
        std::uint64_t diff = a.odd ^ b.odd;
        std::uint64_t low = diff & (~diff + 1);
        return (a.odd & low) ? -1 : 1;  // owner of the lowest differing bit is smaller
    }
    return 0;
}

struct MonomialLess {
    bool operator()(const SuperMonomial& a, const SuperMonomial& b) const {
        return cmp_monomial(a, b) < 0;
    }
};

/// Koszul sign of reordering (odd part A)(odd part B) into ascending form:
/// (-1)^{#(a in A, b in B : a > b)}.  Squares must be excluded beforehand.
inline int koszul_sign(std::uint64_t a, std::uint64_t b) {
    int inversions = 0;
    std::uint64_t rest = b;
    while (rest) {
        int bit = __builtin_ctzll(rest);
        rest &= rest - 1;
        std::uint64_t above = bit == 63 ? 0 : (a >> (bit + 1));
        inversions += __builtin_popcountll(above);
    }
    return (inversions & 1) ? -1 : 1;
}

/// Sparse supercommutative polynomial over exact rationals.
/// Immutable by convention: operations return fresh values.
class SuperPoly {
public:
    using TermMap = std::map<SuperMonomial, Rat, MonomialLess>;

    SuperPoly() = default;
    explicit SuperPoly(TablePtr table) : table_(std::move(table)) {}

    static SuperPoly zero(TablePtr table) { return SuperPoly(std::move(table)); }

    static SuperPoly constant(TablePtr table, const Rat& c) {
        SuperPoly p(std::move(table));
        if (!is_zero(c)) p.terms_.emplace(SuperMonomial{}, c);
        return p;
    }

    static SuperPoly variable(TablePtr table, int var_id, const Rat& c = Rat(1)) {
        SuperPoly p(table);
        if (is_zero(c)) return p;
        SuperMonomial m;
        if (table->is_odd(var_id))
            m.odd = 1ull << table->odd_bit(var_id);
        else
            m.even = {{var_id, 1}};
        p.terms_.emplace(std::move(m), c);
        return p;
    }

    static SuperPoly monomial(TablePtr table, SuperMonomial m, const Rat& c) {
        SuperPoly p(std::move(table));
        if (!is_zero(c)) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const TablePtr& table() const { return table_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    Rat coeff(const SuperMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    /// Constant term.
    Rat constant_coeff() const { return coeff(SuperMonomial{}); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }

    int degree() const {  // -1 for the zero polynomial
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    /// 0, 1, or nullopt when terms of both parities occur.
    std::optional<int> parity() const {
        std::optional<int> p;
        for (const auto& [m, c] : terms_) {
            int mp = m.parity();
            if (!p)
                p = mp;
            else if (*p != mp)
                return std::nullopt;
        }
        return p ? p : std::optional<int>(0);
    }

    std::pair<SuperPoly, SuperPoly> parity_split() const {
        SuperPoly ev(table_), od(table_);
        for (const auto& [m, c] : terms_) (m.parity() ? od : ev).terms_.emplace(m, c);
        return {std::move(ev), std::move(od)};
    }

    void add_term(const SuperMonomial& m, const Rat& c) {
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    SuperPoly& operator+=(const SuperPoly& o) {
        require_same_table(table_, o.table_, "addition");
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SuperPoly& operator-=(const SuperPoly& o) {
        require_same_table(table_, o.table_, "subtraction");
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    SuperPoly& operator*=(const Rat& c) {
        if (is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }

    friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
    friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
    friend SuperPoly operator*(SuperPoly a, const Rat& c) { return a *= c; }
    friend SuperPoly operator*(const Rat& c, SuperPoly a) { return a *= c; }
    friend SuperPoly operator-(SuperPoly a) { return a *= Rat(-1); }

    bool operator==(const SuperPoly& o) const {
        return same_table(table_, o.table_) && terms_ == o.terms_;
    }
    bool operator!=(const SuperPoly& o) const { return !(*this == o); }

private:
    TablePtr table_;
    TermMap terms_;
};

/// Product of monomials; returns nullopt when an odd variable squares to zero.
inline std::optional<std::pair<SuperMonomial, int>> mul_monomials(const SuperMonomial& a,
                                                                  const SuperMonomial& b) {
    if (a.odd & b.odd) return std::nullopt;
    SuperMonomial r;
    r.odd = a.odd | b.odd;
    r.even.reserve(a.even.size() + b.even.size());
    size_t i = 0, j = 0;
    while (i < a.even.size() || j < b.even.size()) {
        if (j == b.even.size() || (i < a.even.size() && a.even[i].first < b.even[j].first))
            r.even.push_back(a.even[i++]);
        else if (i == a.even.size() || b.even[j].first < a.even[i].first)
            r.even.push_back(b.even[j++]);
        else {
            r.even.emplace_back(a.even[i].first, a.even[i].second + b.even[j].second);
            ++i, ++j;
        }
    }
    return std::make_pair(std::move(r), koszul_sign(a.odd, b.odd));
}

inline SuperPoly mul(const SuperPoly& a, const SuperPoly& b) {
    require_same_table(a.table(), b.table(), "multiplication");
    SuperPoly out(a.table());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            auto prod = mul_monomials(ma, mb);
            if (!prod) continue;
            Rat c = ca * cb;
            if (prod->second < 0) c = -c;
            out.add_term(prod->first, c);
        }
    }
    return out;
}

inline SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) { return mul(a, b); }

inline SuperPoly pow(const SuperPoly& a, int k) {
    if (k < 0) throw Error("negative power");
    SuperPoly r = SuperPoly::constant(a.table(), Rat(1));
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

/// Left derivative with respect to an odd variable: strips v from each
/// monomial containing it, with sign (-1)^{number of odd factors before v}.
inline SuperPoly left_deriv(const SuperPoly& f, int var_id) {
    const auto& tab = f.table();
    if (!tab->is_odd(var_id)) throw Error("left_deriv: variable is not odd");
    int bit = tab->odd_bit(var_id);
    std::uint64_t vbit = 1ull << bit;
    std::uint64_t below = vbit - 1;
    SuperPoly out(tab);
    for (const auto& [m, c] : f.terms()) {
        if (!(m.odd & vbit)) continue;
        SuperMonomial r = m;
        r.odd &= ~vbit;
        int sign = (__builtin_popcountll(m.odd & below) & 1) ? -1 : 1;
        out.add_term(r, sign > 0 ? c : -c);
    }
    return out;
}

/// Partial derivative with respect to an even variable (no signs).
inline SuperPoly even_deriv(const SuperPoly& f, int var_id) {
    const auto& tab = f.table();
    if (tab->is_odd(var_id)) throw Error("even_deriv: variable is odd");
    SuperPoly out(tab);
    for (const auto& [m, c] : f.terms()) {
        int e = m.even_exp(var_id);
        if (e == 0) continue;
        SuperMonomial r = m;
        for (auto& [v, ex] : r.even)
            if (v == var_id) ex -= 1;
        std::erase_if(r.even, [](const auto& p) { return p.second == 0; });
        out.add_term(r, c * e);
    }
    return out;
}

/// Derivative dispatching on the variable's parity; this is the building
/// block for superderivations D = sum D(v) d/dv.
inline SuperPoly poly_deriv(const SuperPoly& f, int var_id) {
    return f.table()->is_odd(var_id) ? left_deriv(f, var_id) : even_deriv(f, var_id);
}

/// Algebra-homomorphism extension of a (partial) variable assignment.
/// Unassigned variables map to themselves; each image must match the
/// variable's parity, otherwise the extension would not be a homomorphism.
inline SuperPoly substitute(const SuperPoly& f, const std::map<int, SuperPoly>& assignment) {
    const auto& tab = f.table();
    for (const auto& [v, img] : assignment) {
        require_same_table(tab, img.table(), "substitution");
        auto p = img.parity();
        if (!img.is_zero_poly() && (!p || *p != tab->parity(v)))
            throw Error("substitution image has wrong parity for " + tab->name(v));
    }
    auto image_of = [&](int v) -> SuperPoly {
        auto it = assignment.find(v);
        return it == assignment.end() ? SuperPoly::variable(tab, v) : it->second;
    };
    SuperPoly out(tab);
    for (const auto& [m, c] : f.terms()) {
        SuperPoly term = SuperPoly::constant(tab, c);
        for (const auto& [v, e] : m.even) {
            SuperPoly img = image_of(v);
            for (int i = 0; i < e; ++i) term = mul(term, img);
        }
        std::uint64_t rest = m.odd;
        while (rest) {  // odd factors in ascending canonical order
            int bit = __builtin_ctzll(rest);
            rest &= rest - 1;
            term = mul(term, image_of(tab->odd_bit_to_id(bit)));
        }
        out += term;
    }
    return out;
}

/// Berezin integral on a purely odd table: the coefficient of the product
/// of all odd variables taken in canonical order (normalized to 1).
inline Rat berezin(const SuperPoly& f) {
    const auto& tab = f.table();
    if (tab->even_count() != 0) throw Error("berezin: table has even variables");
    size_t m = tab->odd_count();
    std::uint64_t top = m == 64 ? ~0ull : ((1ull << m) - 1);
    SuperMonomial t;
    t.odd = top;
    return f.coeff(t);
}

/// Partial Berezin integral over a contiguous block of the highest odd
/// bits [odd_count-block, odd_count).  Requires the block at the top so
/// the extraction is sign-free; returns the coefficient series in the
/// remaining variables.
inline SuperPoly berezin_block(const SuperPoly& f, int block) {
    const auto& tab = f.table();
    int no = static_cast<int>(tab->odd_count());
    if (block <= 0 || block > no) throw Error("berezin_block: bad block size");
    std::uint64_t block_mask = ((block == 64 ? 0 : (1ull << block)) - 1) << (no - block);
    SuperPoly out(tab);
    for (const auto& [m, c] : f.terms()) {
        if ((m.odd & block_mask) != block_mask) continue;
        SuperMonomial r = m;
        r.odd &= ~block_mask;
        out.add_term(r, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Canonical text form: terms sorted by (total degree, lexicographic
// monomial), rational coefficients as "p/q".
// ---------------------------------------------------------------------------

inline std::string monomial_str(const VarTable& tab, const SuperMonomial& m) {
    std::string out;
    auto emit = [&](const std::string& nm, int e) {
        if (!out.empty()) out += "*";
        out += nm;
        if (e > 1) out += "^" + std::to_string(e);
    };
    for (const auto& [v, e] : m.even) emit(tab.name(v), e);
    std::uint64_t rest = m.odd;
    while (rest) {
        int bit = __builtin_ctzll(rest);
        rest &= rest - 1;
        emit(tab.name(tab.odd_bit_to_id(bit)), 1);
    }
    return out;
}

inline std::string to_string(const SuperPoly& f) {
    if (f.is_zero_poly()) return "0";
    const auto& tab = *f.table();
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        Rat a = c;
        bool neg = sgn(a) < 0;
        if (neg) a = -a;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono = monomial_str(tab, m);
        if (mono.empty())
            out += rat_str(a);
        else if (is_one(a))
            out += mono;
        else
            out += rat_str(a) + "*" + mono;
    }
    return out;
}

namespace detail {

struct PolyParser {
    const VarTable& tab;
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::string read_number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) ++pos;
        if (pos == start) throw Error("expected number in polynomial at offset " + std::to_string(pos));
        return std::string(s.substr(start, pos - start));
    }

    std::string read_name() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos == start) throw Error("expected variable name at offset " + std::to_string(pos));
        return std::string(s.substr(start, pos - start));
    }

    // term := [rational] {"*" factor} | factor {"*" factor}
    SuperPoly parse_term(TablePtr table) {
        SuperPoly acc = SuperPoly::constant(table, Rat(1));
        bool first = true;
        while (true) {
            skip_ws();
            if (first && std::isdigit(static_cast<unsigned char>(peek()))) {
                std::string num = read_number();
                std::string lit = num;
                if (peek() == '/') {
                    ++pos;
                    lit += "/" + read_number();
                }
                acc = acc * parse_rat(lit);
            } else {
                std::string nm = read_name();
                int id = tab.id_of(nm);
                int e = 1;
                if (peek() == '^') {
                    ++pos;
                    e = std::stoi(read_number());
                }
                if (tab.is_odd(id) && e != 1) throw Error("odd variable power in input: " + nm);
                SuperPoly v = SuperPoly::variable(table, id);
                for (int i = 0; i < e; ++i) acc = mul(acc, v);
            }
            first = false;
            if (peek() == '*') {
                ++pos;
                continue;
            }
            break;
        }
        return acc;
    }
};

}  // namespace detail

inline SuperPoly parse_poly(TablePtr table, std::string_view text) {
    detail::PolyParser p{*table, text};
    SuperPoly out(table);
    if (p.eof()) throw Error("empty polynomial text");
    bool neg = false;
    if (p.peek() == '-') {
        neg = true;
        ++p.pos;
    } else if (p.peek() == '+') {
        ++p.pos;
    }
    while (true) {
        if (p.peek() == '0' && p.pos + 1 >= text.size()) {  // the zero polynomial
            ++p.pos;
            break;
        }
        SuperPoly term = p.parse_term(table);
        out += neg ? -term : term;
        if (p.eof()) break;
        char c = p.peek();
        if (c == '+')
            neg = false;
        else if (c == '-')
            neg = true;
        else
            throw Error("unexpected character in polynomial at offset " + std::to_string(p.pos));
        ++p.pos;
    }
    return out;
}

/// Reproducible pseudo-random parity- and degree-homogeneous element.
/// Same seed, same table, same output.
inline SuperPoly random_homogeneous(TablePtr table, int degree, int parity, std::uint64_t seed,
                                    int max_terms = 6) {
    if (degree < 0) throw Error("random_homogeneous: negative degree");
    if (parity != 0 && parity != 1) throw Error("random_homogeneous: parity must be 0 or 1");
    int ne = static_cast<int>(table->even_count());
    int no = static_cast<int>(table->odd_count());
    std::vector<int> odd_sizes;  // feasible numbers of odd factors
    for (int j = 0; j <= std::min(no, degree); ++j)
        if ((j & 1) == parity && (degree - j == 0 || ne > 0)) odd_sizes.push_back(j);
    if (odd_sizes.empty())
        throw Error("random_homogeneous: no monomial of degree " + std::to_string(degree) +
                    " and parity " + std::to_string(parity) + " in this table");

    SplitMix64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        SuperPoly out(table);
        int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
        for (int t = 0; t < terms; ++t) {
            int j = odd_sizes[rng.below(odd_sizes.size())];
            SuperMonomial m;
            // odd subset of size j, sampled without replacement
            std::vector<int> bits(static_cast<size_t>(no));
            for (int i = 0; i < no; ++i) bits[static_cast<size_t>(i)] = i;
            for (int i = 0; i < j; ++i) {
                size_t k = static_cast<size_t>(i) + rng.below(static_cast<std::uint64_t>(no - i));
                std::swap(bits[static_cast<size_t>(i)], bits[k]);
                m.odd |= 1ull << bits[static_cast<size_t>(i)];
            }
            std::map<int, int> exps;
            for (int r = 0; r < degree - j; ++r) exps[static_cast<int>(rng.below(static_cast<std::uint64_t>(ne)))] += 1;
            for (const auto& [v, e] : exps) m.even.emplace_back(v, e);
            Rat c(rng.range(-9, 9), rng.range(1, 3));
            c.canonicalize();
            if (is_zero(c)) c = Rat(1);
            out.add_term(m, c);
        }
        if (!out.is_zero_poly()) return out;
    }
    throw Error("random_homogeneous: cancellation storm");  // practically unreachable
}

}  // namespace slc
