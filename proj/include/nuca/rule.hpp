#pragma once

#include "nuca/core.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <variant>

namespace nuca {

// Local rule: a total truth table Σ^{2r+1} -> Σ. Windows are indexed lexicographically with
// the leftmost cell most significant.
class LocalRule {
public:
    LocalRule(std::string name, int radius, std::size_t alphabet_size, std::vector<Symbol> table)
        : name_(std::move(name)), radius_(radius), s_(alphabet_size), table_(std::move(table)) {
        if (radius_ < 0) throw ContractError("rule " + name_ + ": negative radius");
        if (s_ == 0) throw ContractError("rule " + name_ + ": empty alphabet");
        const auto n = saturating_pow(s_, width());
        if (table_.size() != n) {
            throw ContractError("rule " + name_ + ": table has " + std::to_string(table_.size()) +
                                " entries, expected " + std::to_string(n));
        }
        for (Symbol v : table_) {
            if (v >= s_) throw ContractError("rule " + name_ + ": output symbol outside alphabet");
        }
    }

    // Tabulates `f(window)` over every window of Σ^{2r+1}.
    template <typename F>
    static LocalRule from_function(std::string name, int radius, std::size_t s, F&& f) {
        const std::size_t w = 2 * static_cast<std::size_t>(radius) + 1;
        const auto n = saturating_pow(s, w);
        std::vector<Symbol> table;
        table.reserve(n);
        std::vector<Symbol> window(w, 0);
        do {
            table.push_back(static_cast<Symbol>(f(std::span<const Symbol>(window))));
        } while (next_word(window, s));
        return LocalRule(std::move(name), radius, s, std::move(table));
    }

    const std::string& name() const { return name_; }
    int radius() const { return radius_; }
    std::size_t width() const { return 2 * static_cast<std::size_t>(radius_) + 1; }
    std::size_t alphabet_size() const { return s_; }
    const std::vector<Symbol>& table() const { return table_; }

    Symbol at_index(std::uint64_t idx) const { return table_[idx]; }

    Symbol operator()(std::span<const Symbol> window) const {
        if (window.size() != width()) {
            throw ContractError("rule " + name_ + ": window of length " + std::to_string(window.size()) +
                                ", expected " + std::to_string(width()));
        }
        std::uint64_t idx = 0;
        for (Symbol v : window) {
            if (v >= s_) throw ContractError("rule " + name_ + ": window symbol outside alphabet");
            idx = idx * s_ + v;
        }
        return table_[idx];
    }

    LocalRule renamed(std::string name) const {
        LocalRule r = *this;
        r.name_ = std::move(name);
        return r;
    }

    friend bool operator==(const LocalRule&, const LocalRule&) = default;

private:
    std::string name_;
    int radius_;
    std::size_t s_;
    std::vector<Symbol> table_;
};

inline Symbol eval_rule(const LocalRule& rule, std::span<const Symbol> window) { return rule(window); }
inline Symbol eval_rule(const LocalRule& rule, std::initializer_list<Symbol> window) {
    return rule(std::span<const Symbol>(window.begin(), window.size()));
}

// True iff the larger-radius rule ignores its outer cells and agrees with the smaller one.
inline bool rules_identical(const LocalRule& f, const LocalRule& g) {
    if (f.alphabet_size() != g.alphabet_size()) {
        throw ContractError("rules " + f.name() + " and " + g.name() + " have different alphabets");
    }
    const LocalRule& small = f.radius() <= g.radius() ? f : g;
    const LocalRule& large = f.radius() <= g.radius() ? g : f;
    const std::size_t s = f.alphabet_size();
    const std::uint64_t inner = saturating_pow(s, small.width());
    const std::uint64_t outer = saturating_pow(s, static_cast<std::uint64_t>(large.radius() - small.radius()));
    const auto& big = large.table();
    for (std::uint64_t idx = 0; idx < big.size(); ++idx) {
        if (big[idx] != small.at_index((idx / outer) % inner)) return false;
    }
    return true;
}

class RuleSet {
public:
    RuleSet(Alphabet alphabet, std::vector<LocalRule> rules)
        : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
        std::set<std::string> names;
        for (const auto& r : rules_) {
            if (r.alphabet_size() != alphabet_.size()) {
                throw ContractError("rule " + r.name() + " does not match the rule set alphabet");
            }
            if (!names.insert(r.name()).second) throw ContractError("duplicate rule name " + r.name());
        }
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<LocalRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    const LocalRule& operator[](std::size_t i) const { return rules_.at(i); }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            if (rules_[i].name() == name) return i;
        }
        return std::nullopt;
    }
    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw ContractError("unknown rule " + std::string(name));
    }

    friend bool operator==(const RuleSet&, const RuleSet&) = default;

private:
    Alphabet alphabet_;
    std::vector<LocalRule> rules_;
};

struct NormalizedRuleSet {
    RuleSet rules;
    std::map<std::string, std::string> renaming; // original name -> representative name
};

// Collapses identical rules. The representative of a class is its lowest-radius member,
// ties broken by the lexicographically first name; representatives keep their original order.
inline NormalizedRuleSet normalize_ruleset(const RuleSet& rs) {
    const auto& rules = rs.rules();
    const std::size_t n = rules.size();
    std::vector<std::size_t> rep(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep[i] = i;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !rules_identical(rules[i], rules[j])) continue;
            const auto& a = rules[j];
            const auto& b = rules[rep[i]];
            if (a.radius() < b.radius() || (a.radius() == b.radius() && a.name() < b.name())) rep[i] = j;
        }
    }
    std::vector<LocalRule> kept;
    std::map<std::string, std::string> renaming;
    for (std::size_t i = 0; i < n; ++i) {
        renaming[rules[i].name()] = rules[rep[i]].name();
        if (rep[i] == i) kept.push_back(rules[i]);
    }
    return {RuleSet(rs.alphabet(), std::move(kept)), std::move(renaming)};
}

// Rule distributions ------------------------------------------------------------------

struct UniformDescription {
    std::size_t rule = 0;
    friend bool operator==(const UniformDescription&, const UniformDescription&) = default;
};

using TwoSidedDescription = TwoSidedWord<std::size_t>;

// ... w3 w2 w1 w2 w3 ... with u_n = fr^n g fl^n and w_n = u_1 ... u_n.
// w1 occupies [0, 2]; w2, w3, ... continue rightward from 3, and leftward w2 occupies
// [-8, -1], then w3 to its left, each block in natural reading order.
// `offset` shifts the whole word: cell x reads the unshifted word at x + offset.
struct MirroredPyramidDescription {
    std::size_t fr = 0;
    std::size_t g = 1;
    std::size_t fl = 2;
    Cell offset = 0;
    friend bool operator==(const MirroredPyramidDescription&, const MirroredPyramidDescription&) = default;
};

using DistributionDescription =
    std::variant<UniformDescription, TwoSidedDescription, MirroredPyramidDescription>;

namespace detail {

// Total length of w_1 ... w_n.
inline Cell pyramid_prefix(Cell n) { return n * (n + 1) * (2 * n + 1) / 6 + n * (n + 1); }

// Role inside any w_n at 0-based position i: 0 = fr, 1 = g, 2 = fl.
inline int pyramid_role_in_block(Cell i) {
    // u_k starts at k^2 - 1 inside w_n.
    Cell k = static_cast<Cell>(std::sqrt(static_cast<double>(i + 1)));
    while (k * k - 1 > i) --k;
    while ((k + 1) * (k + 1) - 1 <= i) ++k;
    const Cell j = i - (k * k - 1);
    return j < k ? 0 : (j == k ? 1 : 2);
}

inline int pyramid_role(Cell x) {
    if (x >= 0) {
        Cell n = 1;
        while (pyramid_prefix(n) <= x) ++n;
        return pyramid_role_in_block(x - pyramid_prefix(n - 1));
    }
    const Cell d = -x - 1;
    Cell n = 2;
    while (pyramid_prefix(n) - 3 <= d) ++n;
    return pyramid_role_in_block(x + pyramid_prefix(n) - 3);
}

} // namespace detail

class RuleDistribution {
public:
    RuleDistribution(std::string name, std::shared_ptr<const RuleSet> rules, DistributionDescription desc)
        : name_(std::move(name)), rules_(std::move(rules)), desc_(std::move(desc)) {
        if (!rules_) throw ContractError("distribution " + name_ + " has no rule set");
        std::vector<std::size_t> used;
        std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, UniformDescription>) {
                    used = {d.rule};
                } else if constexpr (std::is_same_v<D, TwoSidedDescription>) {
                    d.validate();
                    used.insert(used.end(), d.left.begin(), d.left.end());
                    used.insert(used.end(), d.center.begin(), d.center.end());
                    used.insert(used.end(), d.right.begin(), d.right.end());
                } else {
                    used = {d.fr, d.g, d.fl};
                }
            },
            desc_);
        min_radius_ = std::numeric_limits<int>::max();
        for (std::size_t i : used) {
            if (i >= rules_->size()) {
                throw ContractError("distribution " + name_ + " references rule index " + std::to_string(i) +
                                    " outside its rule set");
            }
            radius_bound_ = std::max(radius_bound_, (*rules_)[i].radius());
            min_radius_ = std::min(min_radius_, (*rules_)[i].radius());
        }
    }

    const std::string& name() const { return name_; }
    const std::shared_ptr<const RuleSet>& ruleset_ptr() const { return rules_; }
    const RuleSet& ruleset() const { return *rules_; }
    const Alphabet& alphabet() const { return rules_->alphabet(); }
    const DistributionDescription& description() const { return desc_; }
    int radius_bound() const { return radius_bound_; }
    // True when every reachable rule has the same radius.
    bool constant_radius() const { return min_radius_ == radius_bound_; }

    std::size_t index_at(Cell x) const {
        return std::visit(
            [x](const auto& d) -> std::size_t {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, UniformDescription>) {
                    return d.rule;
                } else if constexpr (std::is_same_v<D, TwoSidedDescription>) {
                    return d.at(x);
                } else {
                    switch (detail::pyramid_role(x + d.offset)) {
                    case 0: return d.fr;
                    case 1: return d.g;
                    default: return d.fl;
                    }
                }
            },
            desc_);
    }

    const LocalRule& at(Cell x) const { return (*rules_)[index_at(x)]; }

    RuleDistribution with_name(std::string name) const {
        RuleDistribution d = *this;
        d.name_ = std::move(name);
        return d;
    }

private:
    std::string name_;
    std::shared_ptr<const RuleSet> rules_;
    DistributionDescription desc_;
    int radius_bound_ = 0;
    int min_radius_ = 0;
};

inline const LocalRule& distribution_at(const RuleDistribution& theta, Cell x) { return theta.at(x); }

// Smallest interval containing the union of [x - r_x, x + r_x] over x in D.
inline Interval neighborhood_of(const RuleDistribution& theta, const Interval& d) {
    if (d.is_empty()) return d;
    if (theta.constant_radius()) return d.widened(theta.radius_bound(), theta.radius_bound());
    Cell lo = d.lo(), hi = d.hi();
    for (Cell x = d.lo(); x <= d.hi(); ++x) {
        const int r = theta.at(x).radius();
        lo = std::min(lo, x - r);
        hi = std::max(hi, x + r);
    }
    return {lo, hi};
}

// Result θ' satisfies θ'(x) = θ(x + k).
inline RuleDistribution shift_distribution(const RuleDistribution& theta, Cell k) {
    DistributionDescription d = std::visit(
        [k](const auto& desc) -> DistributionDescription {
            using D = std::decay_t<decltype(desc)>;
            if constexpr (std::is_same_v<D, UniformDescription>) {
                return desc;
            } else if constexpr (std::is_same_v<D, TwoSidedDescription>) {
                return desc.shifted(k);
            } else {
                auto out = desc;
                out.offset += k;
                return out;
            }
        },
        theta.description());
    return RuleDistribution(theta.name(), theta.ruleset_ptr(), std::move(d));
}

// Rule indices of θ over an interval.
inline std::vector<std::size_t> rule_word(const RuleDistribution& theta, const Interval& d) {
    std::vector<std::size_t> out;
    out.reserve(d.size());
    if (d.is_empty()) return out;
    for (Cell x = d.lo(); x <= d.hi(); ++x) out.push_back(theta.index_at(x));
    return out;
}

// Center of the first run of at least `min_len` consecutive cells using rule `rule`, scanning
// `search` left to right. Runs are cut at the ends of `search`.
inline std::optional<Cell> find_rule_run(const RuleDistribution& theta, std::size_t rule, std::size_t min_len,
                                         const Interval& search) {
    if (search.is_empty() || min_len == 0) return std::nullopt;
    Cell start = search.lo();
    std::size_t len = 0;
    for (Cell x = search.lo(); x <= search.hi() + 1; ++x) {
        if (x <= search.hi() && theta.index_at(x) == rule) {
            if (len++ == 0) start = x;
            continue;
        }
        if (len >= min_len) return start + static_cast<Cell>((len - 1) / 2);
        len = 0;
    }
    return std::nullopt;
}

inline constexpr std::size_t kRecurrenceDomainCap = std::size_t{1} << 16;

// Bounded search for k != 0 (tried in the order 1, -1, 2, -2, ...) such that θ on D + k is a
// translated copy of θ on D. Absence says nothing beyond the bound.
inline std::optional<Cell> recurrence_witness(const RuleDistribution& theta, const Interval& d, Cell search_radius,
                                              std::size_t domain_cap = kRecurrenceDomainCap) {
    if (d.is_empty()) throw ContractError("recurrence_witness: empty domain");
    if (d.size() > domain_cap) {
        throw CapExceeded("recurrence_witness: domain of " + std::to_string(d.size()) + " cells exceeds cap " +
                              std::to_string(domain_cap),
                          d.size(), domain_cap);
    }
    if (search_radius <= 0) throw ContractError("recurrence_witness: search radius must be positive");
    const Interval span = d.widened(search_radius, search_radius);
    const auto word = rule_word(theta, span);
    const auto at = [&](Cell x) { return word[span.offset(x)]; };
    const auto matches = [&](Cell k) {
        for (Cell x = d.lo(); x <= d.hi(); ++x) {
            if (at(x + k) != at(x)) return false;
        }
        return true;
    };
    for (Cell k = 1; k <= search_radius; ++k) {
        if (matches(k)) return k;
        if (matches(-k)) return -k;
    }
    return std::nullopt;
}

struct UniformRecurrenceProbe {
    bool holds = true;
    std::optional<Cell> first_violation; // left endpoint of the first window without a copy
};

// Empirical check that every window [x, x + gap - 1], x in `span`, contains a copy of θ on D.
inline UniformRecurrenceProbe uniform_recurrence_probe(const RuleDistribution& theta, const Interval& d,
                                                       std::size_t gap, const Interval& span) {
    if (d.is_empty()) throw ContractError("uniform_recurrence_probe: empty domain");
    if (gap == 0) throw ContractError("uniform_recurrence_probe: gap must be positive");
    if (span.is_empty()) return {};
    if (gap < d.size()) return {false, span.lo()};

    const auto pattern = rule_word(theta, d);
    const Interval cover(span.lo(), span.hi() + static_cast<Cell>(gap) - 1);
    const auto word = rule_word(theta, cover);

    // starts[i] = 1 iff a copy begins at cover.lo() + i; prefix sums for range queries.
    const std::size_t n_starts = cover.size() - d.size() + 1;
    std::vector<std::size_t> prefix(n_starts + 1, 0);
    for (std::size_t i = 0; i < n_starts; ++i) {
        const bool hit = std::equal(pattern.begin(), pattern.end(), word.begin() + static_cast<std::ptrdiff_t>(i));
        prefix[i + 1] = prefix[i] + (hit ? 1 : 0);
    }
    const std::size_t placements = gap - d.size() + 1;
    for (Cell x = span.lo(); x <= span.hi(); ++x) {
        const std::size_t first = cover.offset(x);
        if (prefix[first + placements] == prefix[first]) return {false, x};
    }
    return {};
}

} // namespace nuca
