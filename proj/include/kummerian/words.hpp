#pragma once

// Free-group words, presentations of pro-p groups, and their text formats.
//
// Word grammar:
//   word := term+
//   term := atom ('^' int)?
//   atom := ident | '1' | '[' word ',' word ']' | '(' word ')'
//   int  := '-'? digit+ 'p'?
// Juxtaposition is product. [a,b] = a^-1 b^-1 a b. A trailing 'p' marks a truncated p-adic
// exponent, which needs a declared prime and precision. '1' is the empty word.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kummerian/padic.hpp"

namespace kummerian {

// ---------------------------------------------------------------------------
// Exponents

/// An integer or a truncated p-adic exponent.
using Exponent = std::variant<BigInt, PadicScalar>;

inline bool is_truncated(const Exponent& e) { return std::holds_alternative<PadicScalar>(e); }

inline bool is_zero(const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return *n == 0;
    return std::get<PadicScalar>(e).is_zero();
}

inline Exponent negate(const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return BigInt(-*n);
    return -std::get<PadicScalar>(e);
}

/// Sum of two exponents; an integer meeting a truncated exponent is reduced mod p^N first.
inline Exponent add(const Exponent& a, const Exponent& b) {
    const auto* ia = std::get_if<BigInt>(&a);
    const auto* ib = std::get_if<BigInt>(&b);
    if (ia && ib) return BigInt(*ia + *ib);
    if (ia) {
        const auto& tb = std::get<PadicScalar>(b);
        return PadicScalar(tb.prime(), tb.precision(), *ia) + tb;
    }
    const auto& ta = std::get<PadicScalar>(a);
    if (ib) return ta + PadicScalar(ta.prime(), ta.precision(), *ib);
    return ta + std::get<PadicScalar>(b);
}

inline Exponent multiply(const Exponent& a, const Exponent& b) {
    const auto* ia = std::get_if<BigInt>(&a);
    const auto* ib = std::get_if<BigInt>(&b);
    if (ia && ib) return BigInt(*ia * *ib);
    if (ia) {
        const auto& tb = std::get<PadicScalar>(b);
        return PadicScalar(tb.prime(), tb.precision(), *ia * tb.residue());
    }
    const auto& ta = std::get<PadicScalar>(a);
    if (ib) return PadicScalar(ta.prime(), ta.precision(), ta.residue() * *ib);
    return ta * std::get<PadicScalar>(b);
}

/// Integer value of an exponent; truncated exponents contribute their residue.
inline BigInt integer_value(const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return *n;
    return std::get<PadicScalar>(e).residue();
}

inline std::string render_exponent(const Exponent& e) {
    if (auto* n = std::get_if<BigInt>(&e)) return n->str();
    return std::get<PadicScalar>(e).residue().str() + "p";
}

// ---------------------------------------------------------------------------
// Words

struct Letter {
    int generator = 0;  // 0-based
    Exponent exponent = BigInt(1);

    bool operator==(const Letter& o) const {
        return generator == o.generator && exponent == o.exponent;
    }
};

/// A freely reduced word: no zero exponents and no two adjacent letters on the same generator.
class Word {
public:
    Word() = default;

    static Word from_letters(const std::vector<Letter>& letters) {
        Word w;
        for (const auto& l : letters) w.push(l);
        return w;
    }
    static Word generator(int index, const Exponent& e = BigInt(1)) { return from_letters({{index, e}}); }

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    bool operator==(const Word& o) const { return letters_ == o.letters_; }

    /// Largest generator index used plus one.
    int span() const {
        int m = 0;
        for (const auto& l : letters_) m = std::max(m, l.generator + 1);
        return m;
    }

    bool has_truncated_exponents() const {
        for (const auto& l : letters_)
            if (is_truncated(l.exponent)) return true;
        return false;
    }

    Word inverse() const {
        Word w;
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->generator, negate(it->exponent)});
        return w;
    }

    Word operator*(const Word& o) const {
        Word w = *this;
        for (const auto& l : o.letters_) w.push(l);
        return w;
    }
    Word& operator*=(const Word& o) {
        for (const auto& l : o.letters_) push(l);
        return *this;
    }

    /// Appends a letter and restores the canonical form.
    void push(const Letter& l) {
        if (is_zero(l.exponent)) return;
        if (!letters_.empty() && letters_.back().generator == l.generator) {
            Exponent merged = add(letters_.back().exponent, l.exponent);
            letters_.pop_back();
            push({l.generator, merged});
            return;
        }
        letters_.push_back(l);
    }

private:
    std::vector<Letter> letters_;
};

inline constexpr std::size_t kMaxExpandedLength = 2'000'000;

/// w^n for an integer n. A single-letter word multiplies its exponent; longer words are
/// expanded by repetition.
inline Word power(const Word& w, const BigInt& n) {
    if (n == 0 || w.empty()) return {};
    if (w.size() == 1) return Word::generator(w.letters()[0].generator, multiply(w.letters()[0].exponent, Exponent(n)));
    const BigInt count = n < 0 ? BigInt(-n) : n;
    if (count * w.size() > kMaxExpandedLength) throw std::length_error("word power too long to expand");
    const Word base = n < 0 ? w.inverse() : w;
    Word out;
    for (BigInt i = 0; i < count; ++i) out *= base;
    return out;
}

/// w^lambda for a truncated exponent; only single-letter words have such powers as words.
inline Word power(const Word& w, const PadicScalar& lambda) {
    if (w.empty() || lambda.is_zero()) return {};
    if (w.size() != 1) throw std::invalid_argument("truncated power of a word with more than one letter");
    return Word::generator(w.letters()[0].generator, multiply(w.letters()[0].exponent, Exponent(lambda)));
}

/// [a,b] = a^-1 b^-1 a b.
inline Word commutator(const Word& a, const Word& b) { return a.inverse() * b.inverse() * a * b; }

/// Componentwise exponent sums over `d` generators. Truncated exponents contribute their
/// residue; `truncated` (when given) is set if any did.
inline std::vector<BigInt> exponent_sums(const Word& w, int d, bool* truncated = nullptr) {
    std::vector<BigInt> sums(static_cast<std::size_t>(std::max(d, w.span())), BigInt(0));
    bool any = false;
    for (const auto& l : w.letters()) {
        sums[static_cast<std::size_t>(l.generator)] += integer_value(l.exponent);
        any = any || is_truncated(l.exponent);
    }
    if (truncated) *truncated = any;
    return sums;
}

// ---------------------------------------------------------------------------
// Parsing and rendering

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Prime and precision against which truncated exponent literals are read.
struct ExponentContext {
    std::uint64_t p = 0;
    std::optional<int> precision;
};

namespace detail {

class WordParser {
public:
    WordParser(std::string_view text, const std::vector<std::string>& names, const ExponentContext& ctx, int line, int column0)
        : text_(text), names_(names), ctx_(ctx), line_(line), column0_(column0) {}

    Word parse_all() {
        Word w = parse_word();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return w;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_, column0_ + static_cast<int>(pos_) + 1, msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    void expect(char c) {
        if (!at(c)) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    bool at_atom_start() {
        skip_ws();
        if (pos_ >= text_.size()) return false;
        const char c = text_[pos_];
        return c == '[' || c == '(' || c == '1' || c == '_' || std::isalpha(static_cast<unsigned char>(c));
    }

    Word parse_word() {
        if (!at_atom_start()) fail("expected a generator, '1', '[' or '('");
        Word w;
        while (at_atom_start()) w *= parse_term();
        return w;
    }

    Word parse_term() {
        Word atom = parse_atom();
        if (!at('^')) return atom;
        ++pos_;
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        const std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer exponent");
        }
        const BigInt value(std::string(text_.substr(start, pos_ - start)));
        if (pos_ < text_.size() && text_[pos_] == 'p') {
            if (ctx_.p == 0 || !ctx_.precision) {
                pos_ = start;
                fail("truncated exponent without a declared prime and precision");
            }
            ++pos_;
            return checked_power(atom, PadicScalar(ctx_.p, *ctx_.precision, value), start);
        }
        return checked_power(atom, value, start);
    }

    template <class E>
    Word checked_power(const Word& atom, const E& e, std::size_t at) {
        try {
            return power(atom, e);
        } catch (const std::logic_error& ex) {
            pos_ = at;
            fail(ex.what());
        }
    }

    Word parse_atom() {
        skip_ws();
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            Word a = parse_word();
            expect(',');
            Word b = parse_word();
            expect(']');
            return commutator(a, b);
        }
        if (c == '(') {
            ++pos_;
            Word a = parse_word();
            expect(')');
            return a;
        }
        if (c == '1') {
            ++pos_;
            return {};
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return Word::generator(static_cast<int>(i));
        pos_ = start;
        fail("unknown generator '" + name + "'");
    }

    std::string_view text_;
    const std::vector<std::string>& names_;
    ExponentContext ctx_;
    int line_;
    int column0_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text, const std::vector<std::string>& names, const ExponentContext& ctx = {}) {
    return detail::WordParser(text, names, ctx, 1, 0).parse_all();
}

/// Canonical text form, accepted back by parse_word.
inline std::string render(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& l : w.letters()) {
        if (!out.empty()) out += ' ';
        out += names.at(static_cast<std::size_t>(l.generator));
        const bool unit = std::holds_alternative<BigInt>(l.exponent) && std::get<BigInt>(l.exponent) == 1;
        if (!unit) out += "^" + render_exponent(l.exponent);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presentations

class InvalidPresentation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Presentation {
    std::uint64_t p = 2;
    std::vector<std::string> names;
    std::vector<Word> relators;
    std::optional<int> precision;         // from a `precision` line
    std::optional<std::vector<BigInt>> theta;  // from a `theta` line

    int d() const { return static_cast<int>(names.size()); }

    ExponentContext exponent_context() const { return {p, precision}; }

    /// Index of the first relator whose exponent-sum vector is not 0 mod p, if any.
    std::optional<std::size_t> first_non_frattini() const {
        for (std::size_t j = 0; j < relators.size(); ++j)
            for (const auto& s : exponent_sums(relators[j], d()))
                if (s % p != 0) return j;
        return std::nullopt;
    }

    /// Throws InvalidPresentation unless p is prime, names are distinct identifiers, relators
    /// only use declared generators, and every relator lies in the Frattini subgroup.
    void validate() const {
        if (!is_prime(p)) throw InvalidPresentation("p = " + std::to_string(p) + " is not prime");
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second) throw InvalidPresentation("duplicate generator name '" + n + "'");
        if (precision && *precision < 1) throw InvalidPresentation("precision must be >= 1");
        for (std::size_t j = 0; j < relators.size(); ++j)
            if (relators[j].span() > d()) throw InvalidPresentation("relator " + std::to_string(j + 1) + " uses an undeclared generator");
        if (auto j = first_non_frattini()) {
            const auto sums = exponent_sums(relators[*j], d());
            std::string detail;
            for (std::size_t i = 0; i < sums.size(); ++i)
                if (sums[i] % p != 0) {
                    detail = "exponent sum of " + names[i] + " is " + sums[i].str();
                    break;
                }
            throw InvalidPresentation("relator " + std::to_string(*j + 1) + " is not in the Frattini subgroup (" + detail + ")");
        }
        if (theta && static_cast<int>(theta->size()) != d())
            throw InvalidPresentation("theta has " + std::to_string(theta->size()) + " values for " + std::to_string(d()) + " generators");
    }
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

inline BigInt parse_integer(const std::string& s, int line, int column) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw ParseError(line, column, "expected an integer, got '" + s + "'");
    for (std::size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw ParseError(line, column, "expected an integer, got '" + s + "'");
    return BigInt(s);
}

}  // namespace detail

/// Reads the line-oriented presentation format:
///   p <prime> | precision <N> | gens <name>+ | rel <word> | theta <r1>,<r2>,...
/// '#' starts a comment. Relators are parsed after all header lines, so order is free.
inline Presentation parse_presentation(std::string_view text, bool validate = true) {
    Presentation P;
    bool have_p = false, have_gens = false;
    struct PendingRel {
        std::string body;
        int line;
        int column;
    };
    std::vector<PendingRel> rels;

    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto kw_end = line.find_first_of(" \t\r", first);
        const std::string keyword = line.substr(first, kw_end == std::string::npos ? std::string::npos : kw_end - first);
        const std::size_t rest_pos = kw_end == std::string::npos ? line.size() : kw_end;
        const std::string rest = line.substr(rest_pos);
        const int rest_col = static_cast<int>(rest_pos);
        const auto args = detail::split_ws(rest);

        if (keyword == "p") {
            if (args.size() != 1) throw ParseError(line_no, rest_col + 1, "expected 'p <prime>'");
            const BigInt v = detail::parse_integer(args[0], line_no, rest_col + 2);
            if (v < 2 || v > 1'000'000'000 || !is_prime(static_cast<std::uint64_t>(v)))
                throw ParseError(line_no, rest_col + 2, "p must be a prime, got " + args[0]);
            P.p = static_cast<std::uint64_t>(v);
            have_p = true;
        } else if (keyword == "precision") {
            if (args.size() != 1) throw ParseError(line_no, rest_col + 1, "expected 'precision <N>'");
            const BigInt v = detail::parse_integer(args[0], line_no, rest_col + 2);
            if (v < 1 || v > 64) throw ParseError(line_no, rest_col + 2, "precision must be in 1..64");
            P.precision = static_cast<int>(v);
        } else if (keyword == "gens") {
            if (args.empty()) throw ParseError(line_no, rest_col + 1, "expected at least one generator name");
            for (const auto& a : args) {
                if (!detail::is_identifier(a)) throw ParseError(line_no, static_cast<int>(line.find(a, rest_pos)) + 1, "invalid generator name '" + a + "'");
                P.names.push_back(a);
            }
            have_gens = true;
        } else if (keyword == "rel") {
            rels.push_back({rest, line_no, rest_col});
        } else if (keyword == "theta") {
            std::string joined;
            for (const auto& a : args) joined += a;
            std::vector<BigInt> values;
            std::size_t start = 0;
            while (start <= joined.size()) {
                const auto comma = joined.find(',', start);
                const std::string item = joined.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                values.push_back(detail::parse_integer(item, line_no, rest_col + 2));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            P.theta = values;
        } else {
            throw ParseError(line_no, static_cast<int>(first) + 1, "unknown keyword '" + keyword + "'");
        }
    }
    if (!have_p) throw ParseError(line_no, 1, "missing 'p' line");
    if (!have_gens) throw ParseError(line_no, 1, "missing 'gens' line");
    for (const auto& r : rels) {
        if (detail::split_ws(r.body).empty()) throw ParseError(r.line, r.column + 1, "empty relator");
        P.relators.push_back(detail::WordParser(r.body, P.names, P.exponent_context(), r.line, r.column).parse_all());
    }
    if (validate) P.validate();
    return P;
}

inline std::string render(const Presentation& P) {
    std::string out = "p " + std::to_string(P.p) + "\n";
    if (P.precision) out += "precision " + std::to_string(*P.precision) + "\n";
    out += "gens";
    for (const auto& n : P.names) out += " " + n;
    out += "\n";
    for (const auto& r : P.relators) out += "rel " + render(r, P.names) + "\n";
    if (P.theta) {
        out += "theta ";
        for (std::size_t i = 0; i < P.theta->size(); ++i) out += (i ? "," : "") + (*P.theta)[i].str();
        out += "\n";
    }
    return out;
}

/// Free product: generators and relators side by side, colliding names of the second factor
/// renamed with a numeric suffix.
inline Presentation free_product(const Presentation& a, const Presentation& b) {
    if (a.p != b.p) throw PrimeMismatch(a.p, b.p);
    Presentation out;
    out.p = a.p;
    out.names = a.names;
    std::set<std::string> used(a.names.begin(), a.names.end());
    used.insert(b.names.begin(), b.names.end());
    for (const auto& n : b.names) {
        std::string name = n;
        if (std::find(a.names.begin(), a.names.end(), n) != a.names.end()) {
            for (int k = 2;; ++k) {
                name = n + "_" + std::to_string(k);
                if (!used.count(name)) break;
            }
            used.insert(name);
        }
        out.names.push_back(name);
    }
    out.relators = a.relators;
    const int shift = a.d();
    for (const auto& r : b.relators) {
        std::vector<Letter> letters = r.letters();
        for (auto& l : letters) l.generator += shift;
        out.relators.push_back(Word::from_letters(letters));
    }
    if (a.precision && b.precision) out.precision = std::min(*a.precision, *b.precision);
    if (a.theta && b.theta) {
        std::vector<BigInt> t = *a.theta;
        t.insert(t.end(), b.theta->begin(), b.theta->end());
        out.theta = t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Randomness

/// Seeded deterministic stream. fork() derives an independent child stream.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_); }
    bool coin() { return uniform(0, 1) == 1; }
    RandomSource fork() { return RandomSource(next()); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Random word with `length` letters (before reduction) and nonzero exponents in
/// [-max_exponent, max_exponent].
inline Word random_word(int d, RandomSource& rng, int length, int max_exponent = 2) {
    Word w;
    for (int k = 0; k < length; ++k) {
        std::int64_t e = rng.uniform(1, max_exponent);
        if (rng.coin()) e = -e;
        w.push({static_cast<int>(rng.uniform(0, d - 1)), BigInt(e)});
    }
    return w;
}

enum class SamplePattern { Random, PowerOfFirstGenerator };

inline constexpr int kMaxSampleDepth = 6;

namespace detail {

inline Word sample_lower_p_central(int d, std::uint64_t p, int depth, RandomSource& rng) {
    if (depth == 1) return random_word(d, rng, static_cast<int>(rng.uniform(1, 3)));
    const auto step = [&]() -> Word {
        if (rng.uniform(0, 2) == 0) return power(sample_lower_p_central(d, p, depth - 1, rng), BigInt(p));
        Word g = random_word(d, rng, static_cast<int>(rng.uniform(1, 2)));
        Word h = sample_lower_p_central(d, p, depth - 1, rng);
        return rng.coin() ? commutator(g, h) : commutator(h, g);
    };
    Word w = step();
    if (depth <= 3 && rng.uniform(0, 3) == 0) w *= step();
    return w;
}

}  // namespace detail

/// A word in the i-th term of the lower p-central series of the free group on P's generators,
/// built from p-th powers and commutators with random words.
inline Word sample_lower_p_central(const Presentation& P, int depth, RandomSource& rng,
                                   SamplePattern pattern = SamplePattern::Random) {
    if (depth < 1 || depth > kMaxSampleDepth) throw std::invalid_argument("sampling depth must be in 1.." + std::to_string(kMaxSampleDepth));
    if (P.d() < 1) throw std::invalid_argument("presentation has no generators");
    if (pattern == SamplePattern::PowerOfFirstGenerator) return Word::generator(0, ipow(P.p, static_cast<unsigned>(depth - 1)));
    return detail::sample_lower_p_central(P.d(), P.p, depth, rng);
}

}  // namespace kummerian
