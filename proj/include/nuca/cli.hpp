#pragma once

// Command-line front end. Exit codes: 0 completed (whatever the verdict), 2 input or parse
// error, 3 enumeration cap exceeded, 4 internal invariant violation.

#include "nuca/gallery.hpp"
#include "nuca/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>

namespace nuca::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kCapExceeded = 3, kInternal = 4 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::string_view kGalleryPrefix = "gallery:";

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

// Parse errors are re-raised with the file name.
template <typename F>
auto parse_file(const std::string& path, F&& parse) {
    auto in = open_input(path);
    try {
        return parse(in);
    } catch (const ParseError& ex) {
        throw ParseError(path + ": " + ex.what());
    }
}

inline Interval interval_of(const std::vector<Cell>& bounds, std::string_view what) {
    if (bounds.size() != 2) throw InputError(std::string(what) + " takes two bounds");
    if (bounds[0] > bounds[1]) throw InputError(std::string(what) + " bounds out of order");
    return {bounds[0], bounds[1]};
}

struct Inputs {
    std::vector<std::string> rule_files;
    std::vector<std::string> distributions;
    std::vector<std::string> configs;
    std::string out;
    std::uint64_t cap = kDefaultCap;
    std::optional<std::uint64_t> seed;

    std::optional<gallery::GalleryEntry> entry; // set when a gallery distribution was resolved

    std::shared_ptr<const RuleSet> load_rules() const {
        if (rule_files.empty()) throw InputError("--rules is required for distribution files");
        std::optional<Alphabet> alphabet;
        std::vector<LocalRule> rules;
        for (const auto& path : rule_files) {
            auto file = parse_file(path, [](std::istream& in) { return io::parse_rules(in); });
            if (alphabet && !(*alphabet == file.alphabet)) throw InputError(path + ": alphabet differs from other rule files");
            alphabet = file.alphabet;
            for (auto& r : file.rules) rules.push_back(std::move(r));
        }
        try {
            return std::make_shared<const RuleSet>(*alphabet, std::move(rules));
        } catch (const ContractError& ex) {
            throw InputError(ex.what());
        }
    }

    std::vector<RuleDistribution> all_distributions() {
        std::vector<RuleDistribution> out;
        std::shared_ptr<const RuleSet> rules;
        for (const auto& d : distributions) {
            if (d.rfind(kGalleryPrefix, 0) == 0) {
                entry = gallery::build_entry(d.substr(kGalleryPrefix.size()));
                out.push_back(entry->distribution);
                continue;
            }
            if (!rules) rules = load_rules();
            for (auto& theta : parse_file(d, [&](std::istream& in) { return io::parse_distributions(in, rules); })) {
                out.push_back(std::move(theta));
            }
        }
        return out;
    }

    RuleDistribution distribution() {
        if (distributions.size() != 1) throw InputError("exactly one --distribution is required");
        auto all = all_distributions();
        return all.front();
    }

    std::vector<Configuration> all_configs() const {
        std::vector<Configuration> out;
        for (const auto& c : configs) {
            if (c.rfind(kGalleryPrefix, 0) == 0) {
                out.push_back(gallery_config(c.substr(kGalleryPrefix.size())));
                continue;
            }
            for (auto& cfg : parse_file(c, [](std::istream& in) { return io::parse_configs(in); })) {
                out.push_back(std::move(cfg));
            }
        }
        return out;
    }

    // "<entry>/<config>", or "<config>" of the entry named by --distribution.
    Configuration gallery_config(const std::string& ref) const {
        const auto slash = ref.find('/');
        if (slash != std::string::npos) {
            return gallery::build_entry(ref.substr(0, slash)).config(ref.substr(slash + 1));
        }
        if (!entry) throw InputError("gallery:" + ref + " needs a gallery distribution or the form gallery:<entry>/<config>");
        return entry->config(ref);
    }

    Configuration config() const {
        if (configs.size() != 1) throw InputError("exactly one --config is required");
        return all_configs().front();
    }

    template <typename F>
    void write(std::ostream& fallback, F&& emit) const {
        if (out.empty()) {
            emit(fallback);
            return;
        }
        std::ofstream file(out);
        if (!file) throw InputError("cannot write " + out);
        emit(file);
    }
};

inline void add_common(CLI::App* cmd, Inputs& in, bool with_config) {
    cmd->add_option("--rules", in.rule_files, "rule files")->expected(1, -1);
    cmd->add_option("--distribution", in.distributions, "distribution file or gallery:<name>")->expected(1, -1);
    if (with_config) cmd->add_option("--config", in.configs, "configuration file or gallery:[<entry>/]<name>")->expected(1, -1);
    cmd->add_option("--out", in.out, "output path (default stdout)");
    cmd->add_option("--cap", in.cap, "enumeration cap in patterns")->capture_default_str();
    cmd->add_option("--seed", in.seed, "seed for randomized trials");
}

inline std::string pattern_text(const Alphabet& a, const Pattern& p) {
    return a.format_word(p.symbols) + " on " + p.domain.str();
}

inline std::vector<Symbol> parse_glyphs(const Alphabet& a, const std::string& text, std::string_view what) {
    try {
        return a.parse_word(text);
    } catch (const ContractError& ex) {
        throw InputError(std::string(what) + ": " + ex.what());
    }
}

} // namespace detail

// Builds the command tree. Handlers write to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using detail::Inputs;
    CLI::App app{"Non-uniform cellular automata toolkit", "nuca"};
    app.require_subcommand(1);

    Inputs in;
    std::function<void()> action;

    // simulate
    std::vector<Cell> window;
    std::size_t steps = 0;
    std::string format = "text";
    auto* simulate = app.add_subcommand("simulate", "space-time diagram");
    detail::add_common(simulate, in, true);
    simulate->add_option("--window", window, "cells LO HI")->expected(2)->required()->allow_extra_args(false);
    simulate->add_option("--steps", steps, "time steps T")->required();
    simulate->add_option("--format", format, "text or pgm")->check(CLI::IsMember({"text", "pgm"}));
    simulate->callback([&] {
        action = [&] {
            const auto theta = in.distribution();
            const auto c = in.config();
            const auto grid = spacetime(theta, c, detail::interval_of(window, "--window"), steps);
            in.write(out, [&](std::ostream& o) {
                if (format == "pgm") {
                    io::render_pgm(o, grid, theta.alphabet().size());
                } else {
                    io::render_text(o, grid, theta.alphabet());
                }
            });
        };
    });

    // balance
    std::vector<Cell> domain;
    auto* balance = app.add_subcommand("balance", "pre-image tally and balance verdict on an interval");
    detail::add_common(balance, in, false);
    balance->add_option("--domain", domain, "cells LO HI")->expected(2)->required();
    balance->callback([&] {
        action = [&] {
            const auto theta = in.distribution();
            const auto d = detail::interval_of(domain, "--domain");
            const auto report = balance_audit(theta, d, true, in.cap);
            const auto& a = theta.alphabet();
            in.write(out, [&](std::ostream& o) {
                o << "pattern,count,expected\n";
                for (std::uint64_t i = 0; i < report.tally.size(); ++i) {
                    o << a.format_word(decode_word(i, a.size(), d.size())) << ',' << report.tally[i] << ','
                      << report.expected << '\n';
                }
                o << "# domain=" << d.str() << " extended=" << report.extended.str() << '\n';
                o << "# verdict=" << (report.balanced ? "Balanced" : "Unbalanced") << '\n';
            });
        };
    });

    // preimages
    std::string pattern;
    bool list = false;
    auto* preimages = app.add_subcommand("preimages", "pre-image count of one pattern");
    detail::add_common(preimages, in, false);
    preimages->add_option("--domain", domain, "cells LO HI")->expected(2)->required();
    preimages->add_option("--pattern", pattern, "pattern glyphs on the domain")->required();
    preimages->add_flag("--list", list, "list every pre-image");
    preimages->callback([&] {
        action = [&] {
            const auto theta = in.distribution();
            const auto d = detail::interval_of(domain, "--domain");
            const auto& a = theta.alphabet();
            const auto word = detail::parse_glyphs(a, pattern, "--pattern");
            if (word.size() != d.size()) throw InputError("--pattern length does not match --domain");
            const auto count = preimage_count(theta, d, Pattern(d, word), list, in.cap);
            const auto report = balance_audit(theta, d, false, in.cap);
            in.write(out, [&](std::ostream& o) {
                o << "pattern,count,expected\n" << pattern << ',' << count.count << ',' << count.expected << '\n';
                for (const auto& q : count.preimages) o << "# preimage " << a.format_word(q.symbols) << '\n';
                o << "# domain=" << d.str() << " extended=" << report.extended.str() << '\n';
                o << "# verdict=" << (report.balanced ? "Balanced" : "Unbalanced") << '\n';
            });
        };
    });

    // erasable
    std::vector<Cell> interval;
    std::string pad = "0";
    auto* erasable = app.add_subcommand("erasable", "search for mutually erasable patterns");
    detail::add_common(erasable, in, false);
    erasable->add_option("--interval", interval, "cells LO HI")->expected(2)->required();
    erasable->add_option("--pad", pad, "background glyph")->capture_default_str();
    erasable->callback([&] {
        action = [&] {
            const auto theta = in.distribution();
            const auto& a = theta.alphabet();
            const auto iv = detail::interval_of(interval, "--interval");
            const auto padw = detail::parse_glyphs(a, pad, "--pad");
            if (padw.size() != 1) throw InputError("--pad takes one glyph");
            const auto pair = mutual_erasability_search(theta, iv, padw[0], in.cap);
            in.write(out, [&](std::ostream& o) {
                o << "erasable interval=" << iv.str() << " pad=" << pad << '\n';
                if (!pair) {
                    o << "result none\n";
                    return;
                }
                o << "result found\n"
                  << "p " << detail::pattern_text(a, pair->p) << '\n'
                  << "q " << detail::pattern_text(a, pair->q) << '\n'
                  << "image " << detail::pattern_text(a, pair->image) << '\n';
            });
        };
    });

    // inverse
    int radius = 1;
    std::size_t trials = 0;
    auto* inverse = app.add_subcommand("inverse", "assemble a local inverse on an interval");
    detail::add_common(inverse, in, false);
    inverse->add_option("--interval", interval, "cells LO HI")->expected(2)->required();
    inverse->add_option("--radius", radius, "inverse radius R")->required()->check(CLI::NonNegativeNumber);
    inverse->add_option("--trials", trials, "randomized composition trials (needs --seed)");
    inverse->callback([&] {
        action = [&] {
            if (trials > 0 && !in.seed) throw InputError("--trials requires --seed");
            const auto theta = in.distribution();
            const auto& a = theta.alphabet();
            const auto iv = detail::interval_of(interval, "--interval");
            const auto phi = assemble_inverse(theta, iv, radius, in.cap);
            std::optional<ComposeCheck> check;
            if (phi.ok() && trials > 0) check = compose_check(theta, phi, trials, *in.seed);
            in.write(out, [&](std::ostream& o) {
                if (!phi.ok()) {
                    const auto& cf = *phi.failure;
                    o << "conflict cell=" << cf.cell << " radius=" << cf.radius << '\n'
                      << "w1 " << detail::pattern_text(a, cf.w1) << '\n'
                      << "w2 " << detail::pattern_text(a, cf.w2) << '\n'
                      << "image " << detail::pattern_text(a, cf.image) << '\n';
                    return;
                }
                o << "# inverse interval=" << iv.str() << " radius=" << radius << '\n';
                for (Cell x = iv.lo(); x <= iv.hi(); ++x) o << "# cell " << x << ' ' << phi.rule_at(x).name() << '\n';
                if (check) {
                    o << "# compose_check trials=" << trials << " seed=" << *in.seed
                      << " result=" << (check->ok ? "pass" : "fail");
                    if (check->counterexample) {
                        o << " trial=" << check->counterexample->trial << " cell=" << check->counterexample->cell;
                    }
                    o << '\n';
                }
                io::write_rules(o, *phi.rules);
            });
        };
    });

    // experiment
    std::string spec_path;
    std::string render;
    auto* experiment = app.add_subcommand("experiment", "run an equicontinuity/sensitivity experiment spec");
    detail::add_common(experiment, in, true);
    experiment->add_option("spec", spec_path, "experiment spec file")->required();
    experiment->add_option("--render", render, "write <prefix>_base.txt and <prefix>_probe.txt diagrams");
    experiment->callback([&] {
        action = [&] {
            const auto spec = detail::parse_file(spec_path, [](std::istream& s) { return io::parse_experiment(s); });
            std::optional<RuleDistribution> theta;
            for (auto& d : in.all_distributions()) {
                if (d.name() == spec.distribution) theta = d;
            }
            if (!theta) {
                in.entry = gallery::build_entry(spec.distribution);
                theta = in.entry->distribution;
            }
            std::optional<Configuration> base;
            for (auto& c : in.all_configs()) {
                if (c.name() == spec.base) base = c;
            }
            if (!base) {
                if (!in.entry) throw InputError("base configuration " + spec.base + " not found");
                base = in.entry->config(spec.base);
            }
            const auto& a = theta->alphabet();
            std::vector<std::vector<Symbol>> probes;
            for (const auto& p : spec.probes) probes.push_back(detail::parse_glyphs(a, p, "probe"));

            const auto cert = cylinder_invariance_check(*theta, *base, spec.d, in.cap);
            const auto witness = divergence_search(*theta, *base, spec.d, spec.e, probes, spec.tmax);
            in.write(out, [&](std::ostream& o) {
                o << "experiment " << spec.name << '\n'
                  << "distribution " << theta->name() << '\n'
                  << "base " << spec.base << '\n'
                  << "D " << spec.d.str() << '\n'
                  << "E " << spec.e.str() << '\n';
                if (cert.invariant) {
                    o << "invariance Invariant\n";
                } else {
                    o << "invariance Escapes extension=" << detail::pattern_text(a, *cert.escape)
                      << " image=" << a.format_word(cert.escape_image->symbols) << '\n';
                }
                if (witness) {
                    o << "divergence witness probe=" << a.format_word(witness->background) << " n=" << witness->time
                      << " x=" << witness->cell << " base=" << a.glyph(witness->base_value)
                      << " probe_value=" << a.glyph(witness->probe_value) << '\n';
                } else {
                    o << "divergence none tmax=" << spec.tmax << '\n';
                }
            });
            if (!render.empty()) {
                const Interval view = spec.d.hull(spec.e).widened(4, 4);
                std::ofstream base_file(render + "_base.txt");
                io::render_text(base_file, spacetime(*theta, *base, view, spec.tmax), a);
                if (witness) {
                    std::ofstream probe_file(render + "_probe.txt");
                    io::render_text(probe_file, spacetime(*theta, witness->probe, view, spec.tmax), a);
                }
            }
        };
    });

    // recurrence
    Cell bound = 0;
    std::size_t gap = 0;
    std::vector<Cell> span;
    auto* recurrence = app.add_subcommand("recurrence", "bounded recurrence / uniform recurrence probes");
    detail::add_common(recurrence, in, false);
    recurrence->add_option("--domain", domain, "cells LO HI")->expected(2)->required();
    auto* bound_opt = recurrence->add_option("--bound", bound, "search radius for a translated copy");
    auto* gap_opt = recurrence->add_option("--gap", gap, "window length for the uniform probe");
    auto* span_opt = recurrence->add_option("--span", span, "left endpoints LO HI")->expected(2);
    gap_opt->needs(span_opt);
    span_opt->needs(gap_opt);
    recurrence->callback([&] {
        action = [&] {
            if (!bound_opt->count() && !gap_opt->count()) throw InputError("give --bound or --gap/--span");
            const auto theta = in.distribution();
            const auto d = detail::interval_of(domain, "--domain");
            in.write(out, [&](std::ostream& o) {
                if (bound_opt->count()) {
                    const auto k = recurrence_witness(theta, d, bound);
                    o << "recurrence domain=" << d.str() << " bound=" << bound;
                    if (k) {
                        o << " witness k=" << *k << '\n';
                    } else {
                        o << " none (inconclusive beyond bound)\n";
                    }
                }
                if (gap_opt->count()) {
                    const auto sp = detail::interval_of(span, "--span");
                    const auto probe = uniform_recurrence_probe(theta, d, gap, sp);
                    o << "uniform_recurrence domain=" << d.str() << " gap=" << gap << " span=" << sp.str();
                    if (probe.holds) {
                        o << " holds\n";
                    } else {
                        o << " violated x=" << *probe.first_violation << '\n';
                    }
                }
            });
        };
    });

    // gallery
    auto* gal = app.add_subcommand("gallery", "built-in constructions");
    gal->require_subcommand(1);
    auto* gal_list = gal->add_subcommand("list", "list entries");
    gal_list->callback([&] {
        action = [&] {
            for (const auto& name : gallery::entry_names()) {
                out << name << "  " << gallery::build_entry(name).summary << '\n';
            }
        };
    });
    std::string entry_name;
    std::string dir;
    auto* gal_export = gal->add_subcommand("export", "write rule, distribution and configuration files");
    gal_export->add_option("name", entry_name, "entry name")->required();
    gal_export->add_option("--dir", dir, "output directory")->required();
    gal_export->callback([&] {
        action = [&] {
            const auto entry = gallery::build_entry(entry_name);
            const std::filesystem::path base(dir);
            std::filesystem::create_directories(base);
            auto write_file = [&](const std::filesystem::path& p, auto&& emit) {
                std::ofstream f(p);
                if (!f) throw InputError("cannot write " + p.string());
                emit(f);
                out << p.string() << '\n';
            };
            write_file(base / (entry.name + ".rules"), [&](std::ostream& o) { io::write_rules(o, *entry.rules); });
            write_file(base / (entry.name + ".dist"),
                       [&](std::ostream& o) { io::write_distribution(o, entry.distribution); });
            for (const auto& c : entry.configs) {
                write_file(base / (entry.name + "." + c.name() + ".config"),
                           [&](std::ostream& o) { io::write_config(o, c); });
            }
        };
    });
    std::vector<std::string> check_names;
    auto* gal_check = gal->add_subcommand("check", "run pinned facts");
    gal_check->add_option("names", check_names, "entries (default all)");
    int check_status = kOk;
    gal_check->callback([&] {
        action = [&] {
            const auto names = check_names.empty() ? gallery::entry_names() : check_names;
            for (const auto& name : names) {
                for (const auto& f : gallery::run_pinned_facts(gallery::build_entry(name))) {
                    out << (f.passed ? "PASS " : "FAIL ") << name << ": " << f.fact;
                    if (!f.detail.empty()) out << " (" << f.detail << ')';
                    out << '\n';
                    if (!f.passed) check_status = kInternal;
                }
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        app.exit(e, msg, msg);
        err << msg.str();
        return e.get_exit_code() == 0 ? kOk : kInputError;
    }

    try {
        if (action) action();
        return check_status;
    } catch (const CapExceeded& ex) {
        err << "error: " << ex.what() << '\n';
        return kCapExceeded;
    } catch (const ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return kInputError;
    } catch (const InputError& ex) {
        err << "error: " << ex.what() << '\n';
        return kInputError;
    } catch (const ContractError& ex) {
        err << "error: " << ex.what() << '\n';
        return kInputError;
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << '\n';
        return kInternal;
    }
}

} // namespace nuca::cli
