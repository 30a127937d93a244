#pragma once

#include "nuca/config.hpp"

#include <unordered_map>

namespace nuca {

// H_{θ|D}: Σ^{N_θ(D)} -> Σ^D.
class FiniteNucaMap {
public:
    FiniteNucaMap(RuleDistribution theta, Interval domain)
        : theta_(std::move(theta)), domain_(domain), extended_(neighborhood_of(theta_, domain_)) {
        if (domain_.is_empty()) return;
        for (Cell x = domain_.lo(); x <= domain_.hi(); ++x) {
            const LocalRule& rule = theta_.at(x);
            cells_.push_back({&rule, extended_.offset(x - rule.radius())});
        }
    }

    const RuleDistribution& distribution() const { return theta_; }
    const Interval& domain() const { return domain_; }
    const Interval& extended() const { return extended_; }
    std::size_t alphabet_size() const { return theta_.alphabet().size(); }

    // Raw form: `q` spans the extended domain, `out` receives |D| symbols.
    void apply(std::span<const Symbol> q, std::span<Symbol> out) const {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const auto& cell = cells_[i];
            out[i] = (*cell.rule)(q.subspan(cell.first, cell.rule->width()));
        }
    }

    // Lexicographic index of the image of `q`.
    std::uint64_t apply_index(std::span<const Symbol> q) const {
        const std::size_t s = alphabet_size();
        std::uint64_t idx = 0;
        for (const auto& cell : cells_) {
            idx = idx * s + (*cell.rule)(q.subspan(cell.first, cell.rule->width()));
        }
        return idx;
    }

    Pattern apply(const Pattern& q) const {
        if (!(q.domain == extended_)) {
            throw ContractError("finite map over " + domain_.str() + " expects a pattern on " + extended_.str() +
                                ", got " + q.domain.str());
        }
        std::vector<Symbol> out(domain_.size());
        apply(q.symbols, out);
        return {domain_, std::move(out)};
    }

private:
    struct CellRule {
        const LocalRule* rule;
        std::size_t first;
    };
    RuleDistribution theta_;
    Interval domain_;
    Interval extended_;
    std::vector<CellRule> cells_;
};

inline Pattern finite_map_apply(const RuleDistribution& theta, const Interval& d, const Pattern& q) {
    return FiniteNucaMap(theta, d).apply(q);
}

// Histogram of image indices over all of Σ^E, enumerated in lexicographic order.
// `on_preimage(q, image_index)` is called for each q when provided.
template <typename OnPreimage>
std::vector<std::uint64_t> preimage_tally(const FiniteNucaMap& map, std::uint64_t cap, OnPreimage&& on_preimage) {
    const std::size_t s = map.alphabet_size();
    checked_pattern_count(s, map.extended().size(), cap, "pre-image enumeration over " + map.extended().str());
    std::vector<std::uint64_t> tally(saturating_pow(s, map.domain().size()), 0);
    std::vector<Symbol> q(map.extended().size(), 0);
    do {
        const auto img = map.apply_index(q);
        ++tally[img];
        on_preimage(q, img);
    } while (next_word(q, s));
    return tally;
}

inline std::vector<std::uint64_t> preimage_tally(const FiniteNucaMap& map, std::uint64_t cap = kDefaultCap) {
    return preimage_tally(map, cap, [](const std::vector<Symbol>&, std::uint64_t) {});
}

struct PreimageCount {
    std::uint64_t count = 0;
    std::uint64_t expected = 0; // s^{|E| - |D|}
    std::vector<Pattern> preimages; // filled when listing was requested
};

inline PreimageCount preimage_count(const RuleDistribution& theta, const Interval& d, const Pattern& p,
                                    bool list_witnesses = false, std::uint64_t cap = kDefaultCap) {
    if (!(p.domain == d)) throw ContractError("pattern domain " + p.domain.str() + " differs from " + d.str());
    const FiniteNucaMap map(theta, d);
    const std::size_t s = map.alphabet_size();
    const auto target = encode_word(p.symbols.begin(), p.symbols.end(), s);
    PreimageCount out;
    out.expected = saturating_pow(s, map.extended().size() - d.size());
    const auto tally = preimage_tally(map, cap, [&](const std::vector<Symbol>& q, std::uint64_t img) {
        if (list_witnesses && img == target) out.preimages.emplace_back(map.extended(), q);
    });
    out.count = tally[target];
    return out;
}

struct BalanceWitness {
    Pattern pattern;
    std::uint64_t count = 0;
    std::uint64_t expected = 0;
};

struct BalanceReport {
    bool balanced = true;
    Interval domain;
    Interval extended;
    std::uint64_t expected = 0;
    std::optional<BalanceWitness> witness;
    std::vector<std::uint64_t> tally; // indexed by lexicographic pattern index; empty unless requested
};

// Balanced iff every pattern on D has exactly s^{|E|-|D|} pre-images. When unbalanced the
// witness is the lexicographically first over-represented pattern (one always exists since
// the counts sum to s^{|E|}).
inline BalanceReport balance_audit(const RuleDistribution& theta, const Interval& d, bool keep_tally = false,
                                   std::uint64_t cap = kDefaultCap) {
    const FiniteNucaMap map(theta, d);
    const std::size_t s = map.alphabet_size();
    auto tally = preimage_tally(map, cap);
    BalanceReport report;
    report.domain = d;
    report.extended = map.extended();
    report.expected = saturating_pow(s, map.extended().size() - d.size());
    for (std::uint64_t i = 0; i < tally.size(); ++i) {
        if (tally[i] != report.expected) report.balanced = false;
        if (tally[i] > report.expected && !report.witness) {
            report.witness = BalanceWitness{Pattern(d, decode_word(i, s, d.size())), tally[i], report.expected};
        }
    }
    if (keep_tally) report.tally = std::move(tally);
    return report;
}

struct SurjectivityCheck {
    bool all_attained = true;
    std::optional<Pattern> orphan; // lexicographically first pattern with no pre-image
};

// Necessary condition for surjectivity: false proves non-surjectivity, true is inconclusive.
inline SurjectivityCheck surjectivity_window_check(const RuleDistribution& theta, const Interval& d,
                                                   std::uint64_t cap = kDefaultCap) {
    const FiniteNucaMap map(theta, d);
    const auto tally = preimage_tally(map, cap);
    for (std::uint64_t i = 0; i < tally.size(); ++i) {
        if (tally[i] == 0) return {false, Pattern(d, decode_word(i, map.alphabet_size(), d.size()))};
    }
    return {};
}

struct ErasablePair {
    Interval interval;
    Symbol pad = 0;
    Pattern p;
    Pattern q;
    Pattern image; // shared image on the interval
};

// Searches for p != q on `interval` such that, padding both with the constant `pad`, the
// images on the interval agree. Candidates must agree on the radius_bound outermost cells on
// each side, so differences stay r cells inside the border and cannot influence any cell
// outside the interval: the padded configurations are asymptotic with equal global images.
// The reported pair is the first collision in lexicographic enumeration order of q.
inline std::optional<ErasablePair> mutual_erasability_search(const RuleDistribution& theta, const Interval& interval,
                                                             Symbol pad, std::uint64_t cap = kDefaultCap) {
    const std::size_t s = theta.alphabet().size();
    if (pad >= s) throw ContractError("pad symbol outside alphabet");
    if (interval.is_empty()) return std::nullopt;
    checked_pattern_count(s, interval.size(), cap, "erasability search over " + interval.str());

    const std::size_t band = static_cast<std::size_t>(theta.radius_bound());
    if (interval.size() <= 2 * band) return std::nullopt; // no free interior cell

    const FiniteNucaMap map(theta, interval);
    const Interval ext = map.extended();
    std::vector<Symbol> q(ext.size(), pad);
    const std::size_t first = ext.offset(interval.lo());
    std::vector<Symbol> p(interval.size(), 0);

    const auto border_key = [&](const std::vector<Symbol>& w) {
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < band; ++i) key = key * s + w[i];
        for (std::size_t i = w.size() - band; i < w.size(); ++i) key = key * s + w[i];
        return key;
    };
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
            return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
        }
    };
    // (image, border) -> first pattern index
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t, KeyHash> seen;
    std::uint64_t index = 0;
    do {
        std::copy(p.begin(), p.end(), q.begin() + static_cast<std::ptrdiff_t>(first));
        const auto img = map.apply_index(q);
        auto [it, inserted] = seen.emplace(std::pair{img, border_key(p)}, index);
        if (!inserted) {
            const std::size_t n = interval.size();
            return ErasablePair{interval, pad, Pattern(interval, decode_word(it->second, s, n)), Pattern(interval, p),
                                Pattern(interval, decode_word(img, s, n))};
        }
        ++index;
    } while (next_word(p, s));
    return std::nullopt;
}

} // namespace nuca
