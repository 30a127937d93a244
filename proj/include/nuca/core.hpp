#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nuca {

using Cell = std::int64_t;
using Symbol = std::uint8_t;

// Errors ----------------------------------------------------------------------

// Violated precondition of an operation (wrong window length, mismatched domains, ...).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed input file. `line` is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    std::size_t line;
};

// An exhaustive enumeration would exceed the configured budget.
struct CapExceeded : std::runtime_error {
    CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
        : std::runtime_error(what), required(required), cap(cap) {}
    std::uint64_t required; // saturates at uint64 max
    std::uint64_t cap;
};

struct UnsupportedClosedForm : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 26;

// Integer helpers --------------------------------------------------------------

inline Cell floor_mod(Cell a, Cell m) {
    Cell r = a % m;
    return r < 0 ? r + m : r;
}

// base^exp, saturating at uint64 max.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result *= base;
    }
    return result;
}

// Number of patterns s^len, or CapExceeded naming the required budget.
inline std::uint64_t checked_pattern_count(std::uint64_t s, std::uint64_t len, std::uint64_t cap,
                                           std::string_view what) {
    const std::uint64_t n = saturating_pow(s, len);
    if (n > cap) {
        std::string need = n == std::numeric_limits<std::uint64_t>::max() ? std::string(">2^64")
                                                                         : std::to_string(n);
        throw CapExceeded(std::string(what) + ": enumeration needs " + std::to_string(s) + "^" +
                              std::to_string(len) + " = " + need + " patterns, cap is " +
                              std::to_string(cap),
                          n, cap);
    }
    return n;
}

// Interval domain [lo, hi], or empty ----------------------------------------------

class Interval {
public:
    Interval() = default; // empty
    Interval(Cell lo, Cell hi) : lo_(lo), hi_(hi), empty_(false) {
        if (lo > hi) throw ContractError("interval bounds out of order");
    }
    static Interval empty() { return {}; }
    static Interval single(Cell x) { return {x, x}; }

    bool is_empty() const { return empty_; }
    Cell lo() const { return lo_; }
    Cell hi() const { return hi_; }
    std::size_t size() const { return empty_ ? 0 : static_cast<std::size_t>(hi_ - lo_ + 1); }

    bool contains(Cell x) const { return !empty_ && lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const {
        return o.empty_ || (!empty_ && lo_ <= o.lo_ && o.hi_ <= hi_);
    }
    Interval shifted(Cell k) const { return empty_ ? Interval{} : Interval{lo_ + k, hi_ + k}; }
    Interval widened(Cell left, Cell right) const {
        return empty_ ? Interval{} : Interval{lo_ - left, hi_ + right};
    }
    // Smallest interval containing both.
    Interval hull(const Interval& o) const {
        if (empty_) return o;
        if (o.empty_) return *this;
        return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
    }
    // Offset of x inside the interval.
    std::size_t offset(Cell x) const { return static_cast<std::size_t>(x - lo_); }

    friend bool operator==(const Interval& a, const Interval& b) {
        if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    std::string str() const {
        return empty_ ? "[]" : "[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
    }

private:
    Cell lo_ = 0;
    Cell hi_ = -1;
    bool empty_ = true;
};

// Alphabet ---------------------------------------------------------------------------

class Alphabet {
public:
    static constexpr std::string_view kStandardGlyphs =
        "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+*";

    explicit Alphabet(std::string glyphs) : glyphs_(std::move(glyphs)) {
        if (glyphs_.empty()) throw ContractError("alphabet must have at least one symbol");
        if (glyphs_.size() > 255) throw ContractError("alphabet larger than 255 symbols");
        std::string sorted = glyphs_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ContractError("alphabet glyphs must be distinct: \"" + glyphs_ + "\"");
        }
        for (char ch : glyphs_) {
            if (ch <= ' ' || ch == ',' || ch == '"' || ch == '.' || ch == '#') {
                throw ContractError("alphabet glyph not allowed: '" + std::string(1, ch) + "'");
            }
        }
    }

    // Size-n alphabet labelled 0-9, a-z, A-Z, '+', '*'.
    static Alphabet standard(std::size_t n) {
        if (n == 0 || n > kStandardGlyphs.size()) {
            throw ContractError("no standard glyph set for alphabet size " + std::to_string(n));
        }
        return Alphabet(std::string(kStandardGlyphs.substr(0, n)));
    }

    std::size_t size() const { return glyphs_.size(); }
    const std::string& glyphs() const { return glyphs_; }
    char glyph(Symbol s) const { return glyphs_.at(s); }

    std::optional<Symbol> find(char glyph) const {
        auto pos = glyphs_.find(glyph);
        if (pos == std::string::npos) return std::nullopt;
        return static_cast<Symbol>(pos);
    }
    Symbol symbol(char glyph) const {
        if (auto s = find(glyph)) return *s;
        throw ContractError("glyph '" + std::string(1, glyph) + "' not in alphabet \"" + glyphs_ + "\"");
    }

    std::vector<Symbol> parse_word(std::string_view text) const {
        std::vector<Symbol> out;
        out.reserve(text.size());
        for (char ch : text) out.push_back(symbol(ch));
        return out;
    }
    std::string format_word(const std::vector<Symbol>& word) const {
        std::string out;
        out.reserve(word.size());
        for (Symbol s : word) out.push_back(glyph(s));
        return out;
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string glyphs_;
};

// Two-sided eventually periodic word ---------------------------------------------------
//
// Cells [anchor, anchor + |center|) read `center`. To the right the `right` word repeats.
// To the left the `left` word repeats leftward, so cell anchor-1 holds left.back() and the
// word reads in natural order inside the tail.

template <typename T>
struct TwoSidedWord {
    std::vector<T> left;
    std::vector<T> center;
    Cell anchor = 0;
    std::vector<T> right;

    static TwoSidedWord constant(T value) { return {{value}, {}, 0, {value}}; }

    void validate() const {
        if (left.empty() || right.empty()) throw ContractError("period words must be nonempty");
    }

    Cell center_end() const { return anchor + static_cast<Cell>(center.size()); }

    const T& at(Cell x) const {
        if (x >= anchor) {
            const Cell off = x - anchor;
            if (off < static_cast<Cell>(center.size())) return center[static_cast<std::size_t>(off)];
            const Cell r = floor_mod(off - static_cast<Cell>(center.size()), static_cast<Cell>(right.size()));
            return right[static_cast<std::size_t>(r)];
        }
        const Cell d = floor_mod(anchor - 1 - x, static_cast<Cell>(left.size()));
        return left[left.size() - 1 - static_cast<std::size_t>(d)];
    }

    // Result r satisfies r.at(x) == at(x + k).
    TwoSidedWord shifted(Cell k) const {
        TwoSidedWord out = *this;
        out.anchor = anchor - k;
        return out;
    }

    friend bool operator==(const TwoSidedWord&, const TwoSidedWord&) = default;
};

// Lexicographic (leftmost most significant) index of a word over an s-letter alphabet.
template <typename It>
std::uint64_t encode_word(It first, It last, std::size_t s) {
    std::uint64_t idx = 0;
    for (; first != last; ++first) idx = idx * s + static_cast<std::uint64_t>(*first);
    return idx;
}

inline std::vector<Symbol> decode_word(std::uint64_t idx, std::size_t s, std::size_t len) {
    std::vector<Symbol> out(len);
    for (std::size_t i = len; i-- > 0;) {
        out[i] = static_cast<Symbol>(idx % s);
        idx /= s;
    }
    return out;
}

// Advances `word` to its lexicographic successor; false after the last word.
inline bool next_word(std::vector<Symbol>& word, std::size_t s) {
    for (std::size_t i = word.size(); i-- > 0;) {
        if (static_cast<std::size_t>(word[i]) + 1 < s) {
            ++word[i];
            return true;
        }
        word[i] = 0;
    }
    return false;
}

} // namespace nuca
