#pragma once

// Text formats: rule files, distribution files, configuration files, experiment specs, and
// space-time renderings.

#include "nuca/config.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nuca::io {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_commas(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(',', start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(std::string_view text, std::size_t line, std::string_view what) {
    Int value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("expected integer " + std::string(what) + ", got \"" + std::string(text) + "\"", line);
    }
    return value;
}

struct Line {
    std::size_t number;
    std::string text;
};

// Non-blank lines with '#' comments removed.
inline std::vector<Line> content_lines(std::istream& in) {
    std::vector<Line> out;
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        std::string_view view = raw;
        bool in_quotes = false;
        std::size_t cut = view.size();
        for (std::size_t i = 0; i < view.size(); ++i) {
            if (view[i] == '"') in_quotes = !in_quotes;
            if (view[i] == '#' && !in_quotes) {
                cut = i;
                break;
            }
        }
        auto t = trim(view.substr(0, cut));
        if (!t.empty()) out.push_back({n, std::string(t)});
    }
    return out;
}

// `key value key value ...` after a leading keyword sequence.
inline std::map<std::string, std::string> key_values(const std::vector<std::string>& toks, std::size_t from,
                                                     std::size_t line) {
    std::map<std::string, std::string> kv;
    if ((toks.size() - from) % 2 != 0) throw ParseError("expected key/value pairs", line);
    for (std::size_t i = from; i < toks.size(); i += 2) {
        if (!kv.emplace(toks[i], toks[i + 1]).second) throw ParseError("duplicate key " + toks[i], line);
    }
    return kv;
}

inline const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key,
                                  std::size_t line) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing '" + key + "'", line);
    return it->second;
}

} // namespace detail

// Rule files -------------------------------------------------------------------------------

struct RuleFile {
    Alphabet alphabet;
    std::vector<LocalRule> rules;
};

inline RuleFile parse_rules(std::istream& in) {
    const auto lines = detail::content_lines(in);
    std::optional<Alphabet> alphabet;
    std::vector<LocalRule> rules;

    std::size_t i = 0;
    while (i < lines.size()) {
        const auto& header = lines[i];
        const auto toks = detail::split_ws(header.text);
        if (toks.size() != 6 || toks[0] != "rule" || toks[2] != "radius" || toks[4] != "alphabet") {
            throw ParseError("expected 'rule <name> radius <r> alphabet <glyphs>'", header.number);
        }
        const std::string& name = toks[1];
        const int radius = detail::parse_int<int>(toks[3], header.number, "radius");
        if (radius < 0) throw ParseError("negative radius", header.number);
        Alphabet a = [&] {
            try {
                return Alphabet(toks[5]);
            } catch (const ContractError& ex) {
                throw ParseError(ex.what(), header.number);
            }
        }();
        if (alphabet && !(*alphabet == a)) throw ParseError("rule alphabets differ within one file", header.number);
        alphabet = a;

        const std::size_t s = a.size();
        const std::size_t width = 2 * static_cast<std::size_t>(radius) + 1;
        const auto n = checked_pattern_count(s, width, kDefaultCap, "rule table of " + name);
        std::vector<int> table(n, -1);
        std::optional<Symbol> fallback;

        auto glyph_symbol = [&](std::string_view tok, std::size_t line) {
            if (tok.size() != 1 || !a.find(tok[0])) throw ParseError("unknown symbol \"" + std::string(tok) + "\"", line);
            return *a.find(tok[0]);
        };

        ++i;
        for (; i < lines.size(); ++i) {
            const auto& ln = lines[i];
            if (ln.text.rfind("rule ", 0) == 0) break;
            if (fallback) throw ParseError("'default' must be the last line of a rule", ln.number);
            const auto arrow = ln.text.find("->");
            if (arrow == std::string::npos) throw ParseError("expected '\"<window>\" -> <symbol>'", ln.number);
            const auto lhs = detail::trim(std::string_view(ln.text).substr(0, arrow));
            const auto rhs = detail::trim(std::string_view(ln.text).substr(arrow + 2));
            const Symbol out = glyph_symbol(rhs, ln.number);
            if (lhs == "default") {
                fallback = out;
                continue;
            }
            if (lhs.size() < 2 || lhs.front() != '"' || lhs.back() != '"') {
                throw ParseError("window must be quoted", ln.number);
            }
            const auto window = lhs.substr(1, lhs.size() - 2);
            if (window.size() != width) {
                throw ParseError("window \"" + std::string(window) + "\" has length " + std::to_string(window.size()) +
                                     ", expected " + std::to_string(width),
                                 ln.number);
            }
            std::uint64_t idx = 0;
            for (char ch : window) idx = idx * s + glyph_symbol(std::string_view(&ch, 1), ln.number);
            if (table[idx] != -1) throw ParseError("duplicate window \"" + std::string(window) + "\"", ln.number);
            table[idx] = out;
        }

        std::vector<Symbol> final_table(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (table[k] == -1) {
                if (!fallback) {
                    throw ParseError("rule " + name + " misses window \"" + a.format_word(decode_word(k, s, width)) +
                                         "\" and has no default",
                                     header.number);
                }
                final_table[k] = *fallback;
            } else {
                final_table[k] = static_cast<Symbol>(table[k]);
            }
        }
        try {
            rules.emplace_back(name, radius, s, std::move(final_table));
        } catch (const ContractError& ex) {
            throw ParseError(ex.what(), header.number);
        }
    }
    if (!alphabet) throw ParseError("no rules found");
    return {*alphabet, std::move(rules)};
}

// Every window listed, lexicographic order.
inline void write_rule(std::ostream& out, const Alphabet& a, const LocalRule& rule) {
    out << "rule " << rule.name() << " radius " << rule.radius() << " alphabet " << a.glyphs() << '\n';
    std::vector<Symbol> window(rule.width(), 0);
    std::uint64_t idx = 0;
    do {
        out << '"' << a.format_word(window) << "\" -> " << a.glyph(rule.at_index(idx++)) << '\n';
    } while (next_word(window, a.size()));
}

inline void write_rules(std::ostream& out, const RuleSet& rs) {
    for (const auto& r : rs.rules()) write_rule(out, rs.alphabet(), r);
}

// Distribution files --------------------------------------------------------------------------

namespace detail {

inline std::vector<std::size_t> rule_word(const RuleSet& rs, std::string_view text, bool allow_empty,
                                          std::size_t line) {
    if (text == ".") {
        if (!allow_empty) throw ParseError("period word must be nonempty", line);
        return {};
    }
    std::vector<std::size_t> out;
    for (const auto& name : split_commas(text)) {
        auto i = rs.find(name);
        if (!i) throw ParseError("unknown rule \"" + name + "\"", line);
        out.push_back(*i);
    }
    return out;
}

inline std::string format_rule_word(const RuleSet& rs, const std::vector<std::size_t>& word) {
    if (word.empty()) return ".";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += ',';
        out += rs[word[i]].name();
    }
    return out;
}

} // namespace detail

inline std::vector<RuleDistribution> parse_distributions(std::istream& in, const std::shared_ptr<const RuleSet>& rules) {
    const auto lines = detail::content_lines(in);
    if (lines.empty()) throw ParseError("no distribution found");
    if (lines.size() % 2 != 0) throw ParseError("expected 'distribution <name>' followed by a 'kind' line", lines.back().number);
    std::vector<RuleDistribution> out;
    for (std::size_t i = 0; i < lines.size(); i += 2) {
        const auto head = detail::split_ws(lines[i].text);
        if (head.size() != 2 || head[0] != "distribution") {
            throw ParseError("expected 'distribution <name>'", lines[i].number);
        }
        const std::size_t ln = lines[i + 1].number;
        const auto toks = detail::split_ws(lines[i + 1].text);
        if (toks.size() < 2 || toks[0] != "kind") throw ParseError("expected 'kind ...'", ln);
        const auto kv = detail::key_values(toks, 2, ln);
        DistributionDescription desc;
        if (toks[1] == "uniform") {
            desc = UniformDescription{detail::rule_word(*rules, detail::require(kv, "rule", ln), false, ln).at(0)};
            if (kv.size() != 1) throw ParseError("unexpected keys for uniform distribution", ln);
        } else if (toks[1] == "two_sided") {
            TwoSidedDescription d;
            d.left = detail::rule_word(*rules, detail::require(kv, "left", ln), false, ln);
            d.center = detail::rule_word(*rules, detail::require(kv, "center", ln), true, ln);
            d.anchor = detail::parse_int<Cell>(detail::require(kv, "anchor", ln), ln, "anchor");
            d.right = detail::rule_word(*rules, detail::require(kv, "right", ln), false, ln);
            if (kv.size() != 4) throw ParseError("unexpected keys for two_sided distribution", ln);
            desc = std::move(d);
        } else if (toks[1] == "mirrored_pyramid") {
            MirroredPyramidDescription d;
            d.fr = rules->find(detail::require(kv, "fr", ln)).value_or(rules->size());
            d.g = rules->find(detail::require(kv, "g", ln)).value_or(rules->size());
            d.fl = rules->find(detail::require(kv, "fl", ln)).value_or(rules->size());
            if (d.fr == rules->size() || d.g == rules->size() || d.fl == rules->size()) {
                throw ParseError("unknown rule in mirrored_pyramid", ln);
            }
            if (kv.count("offset")) d.offset = detail::parse_int<Cell>(kv.at("offset"), ln, "offset");
            if (kv.size() != 3 + kv.count("offset")) throw ParseError("unexpected keys for mirrored_pyramid", ln);
            desc = d;
        } else {
            throw ParseError("unknown distribution kind \"" + toks[1] + "\"", ln);
        }
        try {
            out.emplace_back(head[1], rules, std::move(desc));
        } catch (const ContractError& ex) {
            throw ParseError(ex.what(), ln);
        }
    }
    return out;
}

inline void write_distribution(std::ostream& out, const RuleDistribution& theta) {
    const auto& rs = theta.ruleset();
    out << "distribution " << theta.name() << '\n';
    std::visit(
        [&](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, UniformDescription>) {
                out << "kind uniform rule " << rs[d.rule].name() << '\n';
            } else if constexpr (std::is_same_v<D, TwoSidedDescription>) {
                out << "kind two_sided left " << detail::format_rule_word(rs, d.left) << " center "
                    << detail::format_rule_word(rs, d.center) << " anchor " << d.anchor << " right "
                    << detail::format_rule_word(rs, d.right) << '\n';
            } else {
                out << "kind mirrored_pyramid fr " << rs[d.fr].name() << " g " << rs[d.g].name() << " fl "
                    << rs[d.fl].name();
                if (d.offset != 0) out << " offset " << d.offset;
                out << '\n';
            }
        },
        theta.description());
}

// Configuration files ------------------------------------------------------------------------

inline std::vector<Configuration> parse_configs(std::istream& in) {
    const auto lines = detail::content_lines(in);
    if (lines.empty()) throw ParseError("no configuration found");
    if (lines.size() % 2 != 0) throw ParseError("expected 'config' followed by a 'kind' line", lines.back().number);
    std::vector<Configuration> out;
    for (std::size_t i = 0; i < lines.size(); i += 2) {
        const auto head = detail::split_ws(lines[i].text);
        if (head.size() != 4 || head[0] != "config" || head[2] != "alphabet") {
            throw ParseError("expected 'config <name> alphabet <glyphs>'", lines[i].number);
        }
        const std::size_t ln = lines[i + 1].number;
        const auto toks = detail::split_ws(lines[i + 1].text);
        if (toks.size() < 2 || toks[0] != "kind" || toks[1] != "two_sided") {
            throw ParseError("expected 'kind two_sided ...'", ln);
        }
        const auto kv = detail::key_values(toks, 2, ln);
        if (kv.size() != 4) throw ParseError("expected keys left, center, anchor, right", ln);
        try {
            const Alphabet a(head[3]);
            const auto& center = detail::require(kv, "center", ln);
            TwoSidedWord<Symbol> w{a.parse_word(detail::require(kv, "left", ln)),
                                   center == "." ? std::vector<Symbol>{} : a.parse_word(center),
                                   detail::parse_int<Cell>(detail::require(kv, "anchor", ln), ln, "anchor"),
                                   a.parse_word(detail::require(kv, "right", ln))};
            out.emplace_back(a, std::move(w), head[1]);
        } catch (const ContractError& ex) {
            throw ParseError(ex.what(), ln);
        }
    }
    return out;
}

inline void write_config(std::ostream& out, const Configuration& c) {
    const auto& a = c.alphabet();
    const auto& w = c.word();
    out << "config " << (c.name().empty() ? "unnamed" : c.name()) << " alphabet " << a.glyphs() << '\n';
    out << "kind two_sided left " << a.format_word(w.left) << " center "
        << (w.center.empty() ? std::string(".") : a.format_word(w.center)) << " anchor " << w.anchor << " right "
        << a.format_word(w.right) << '\n';
}

// Experiment specs -----------------------------------------------------------------------------

struct ExperimentSpec {
    std::string name;
    std::string distribution;
    std::string base;
    Interval d;
    Interval e;
    std::vector<std::string> probes; // glyph words, each a periodic fill
    std::size_t tmax = 0;
};

inline ExperimentSpec parse_experiment(std::istream& in) {
    ExperimentSpec spec;
    std::map<std::string, std::size_t> seen;
    for (const auto& ln : detail::content_lines(in)) {
        const auto toks = detail::split_ws(ln.text);
        const auto& key = toks[0];
        if (!seen.emplace(key, ln.number).second) throw ParseError("duplicate '" + key + "'", ln.number);
        auto expect = [&](std::size_t n) {
            if (toks.size() != n + 1) throw ParseError("'" + key + "' takes " + std::to_string(n) + " argument(s)", ln.number);
        };
        if (key == "experiment") {
            expect(1);
            spec.name = toks[1];
        } else if (key == "distribution") {
            expect(1);
            spec.distribution = toks[1];
        } else if (key == "base") {
            expect(1);
            spec.base = toks[1];
        } else if (key == "D" || key == "E") {
            expect(2);
            const Cell lo = detail::parse_int<Cell>(toks[1], ln.number, "bound");
            const Cell hi = detail::parse_int<Cell>(toks[2], ln.number, "bound");
            if (lo > hi) throw ParseError("interval bounds out of order", ln.number);
            (key == "D" ? spec.d : spec.e) = Interval(lo, hi);
        } else if (key == "probes") {
            expect(1);
            spec.probes = detail::split_commas(toks[1]);
            for (const auto& p : spec.probes) {
                if (p.empty()) throw ParseError("empty probe", ln.number);
            }
        } else if (key == "tmax") {
            expect(1);
            spec.tmax = detail::parse_int<std::size_t>(toks[1], ln.number, "tmax");
        } else {
            throw ParseError("unknown key '" + key + "'", ln.number);
        }
    }
    for (const char* key : {"experiment", "distribution", "base", "D", "E", "probes", "tmax"}) {
        if (!seen.count(key)) throw ParseError(std::string("experiment spec misses '") + key + "'");
    }
    return spec;
}

inline void write_experiment(std::ostream& out, const ExperimentSpec& spec) {
    out << "experiment " << spec.name << '\n'
        << "distribution " << spec.distribution << '\n'
        << "base " << spec.base << '\n'
        << "D " << spec.d.lo() << ' ' << spec.d.hi() << '\n'
        << "E " << spec.e.lo() << ' ' << spec.e.hi() << '\n'
        << "probes ";
    for (std::size_t i = 0; i < spec.probes.size(); ++i) out << (i ? "," : "") << spec.probes[i];
    out << '\n' << "tmax " << spec.tmax << '\n';
}

// Space-time renderings -------------------------------------------------------------------------

// One row per time step, one glyph per cell, t = 0 first.
inline void render_text(std::ostream& out, const SpaceTimeGrid& grid, const Alphabet& a) {
    for (const auto& row : grid.rows) out << a.format_word(row) << '\n';
}

// Plain PGM; symbol i maps to gray floor(255 i / (s - 1)), and to 0 when s = 1.
inline void render_pgm(std::ostream& out, const SpaceTimeGrid& grid, std::size_t s) {
    out << "P2\n" << grid.window.size() << ' ' << grid.rows.size() << "\n255\n";
    for (const auto& row : grid.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            const unsigned gray = s <= 1 ? 0u : static_cast<unsigned>(255u * row[i] / (s - 1));
            out << (i ? " " : "") << gray;
        }
        out << '\n';
    }
}

} // namespace nuca::io
