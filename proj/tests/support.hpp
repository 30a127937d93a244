#pragma once

#include "nuca/nuca.hpp"
#include "oracle.hpp"

#include <random>

namespace support {

using namespace nuca;

inline std::vector<int> ints(const std::vector<Symbol>& w) { return {w.begin(), w.end()}; }

// Table lookup done by hand, so the oracle does not share LocalRule's indexing.
inline oracle::Rule to_oracle(const LocalRule& r) {
    const auto table = r.table();
    const auto s = static_cast<std::uint64_t>(r.alphabet_size());
    return {r.radius(), [table, s](const std::vector<int>& w) {
                std::uint64_t idx = 0;
                for (int v : w) idx = idx * s + static_cast<std::uint64_t>(v);
                return static_cast<int>(table.at(idx));
            }};
}

inline oracle::Config to_oracle(const Configuration& c) {
    const auto& w = c.word();
    return oracle::two_sided(ints(w.left), ints(w.center), w.anchor, ints(w.right));
}

// Per-cell oracle rules for a two-sided description, read from the raw description fields.
inline oracle::Dist to_oracle(const RuleSet& rules, const TwoSidedDescription& d) {
    std::vector<oracle::Rule> rs;
    for (const auto& r : rules.rules()) rs.push_back(to_oracle(r));
    auto as_int = [](const std::vector<std::size_t>& v) { return std::vector<int>(v.begin(), v.end()); };
    auto idx = oracle::two_sided(as_int(d.left), as_int(d.center), d.anchor, as_int(d.right));
    return [rs, idx](oracle::Cell x) { return rs.at(static_cast<std::size_t>(idx(x))); };
}

inline LocalRule random_rule(std::mt19937_64& rng, std::string name, int radius, std::size_t s) {
    std::uniform_int_distribution<int> sym(0, static_cast<int>(s) - 1);
    std::vector<Symbol> table(oracle::power(s, 2 * static_cast<std::size_t>(radius) + 1));
    for (auto& v : table) v = static_cast<Symbol>(sym(rng));
    return LocalRule(std::move(name), radius, s, std::move(table));
}

inline std::vector<std::size_t> random_indices(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    std::vector<std::size_t> out(n);
    for (auto& v : out) v = pick(rng);
    return out;
}

// A two-rule, two-sided distribution with random radii in [0, max_radius].
struct RandomDistribution {
    std::shared_ptr<const RuleSet> rules;
    TwoSidedDescription desc;
    RuleDistribution theta;
};

inline RandomDistribution random_distribution(std::mt19937_64& rng, std::size_t s, int max_radius,
                                              std::size_t n_rules = 2) {
    std::uniform_int_distribution<int> rad(0, max_radius);
    std::uniform_int_distribution<std::size_t> len(1, 3);
    std::uniform_int_distribution<Cell> anchor(-4, 4);
    std::vector<LocalRule> rs;
    for (std::size_t i = 0; i < n_rules; ++i) rs.push_back(random_rule(rng, "r" + std::to_string(i), rad(rng), s));
    auto rules = std::make_shared<const RuleSet>(Alphabet::standard(s), std::move(rs));
    TwoSidedDescription d{random_indices(rng, len(rng), n_rules), random_indices(rng, len(rng) - 1, n_rules),
                          anchor(rng), random_indices(rng, len(rng), n_rules)};
    return {rules, d, RuleDistribution("random", rules, d)};
}

inline const RuleDistribution& example1() {
    static const auto theta = gallery::build_entry("example1").distribution;
    return theta;
}

inline const oracle::Pyramid& pyramid() {
    static const oracle::Pyramid p(20000);
    return p;
}

} // namespace support
