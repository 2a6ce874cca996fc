#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "errors.hpp"
#include "expsum.hpp"
#include "montecarlo.hpp"
#include "solver.hpp"
#include "sublattice.hpp"
#include "theory.hpp"

namespace latcong {

inline constexpr const char* kVersion = "0.1.0";

struct usage_error : error {
    using error::error;
};

struct CliConfig {
    enum class Command {
        theory,
        solve,
        lattices,
        simulate_rdist,
        simulate_primitive,
        hecke_average,
        expsum
    };
    Command command = Command::theory;

    std::string format = "csv";
    std::string output;
    int threads = 1;

    std::string box_name = "square";
    double a = 1.0;
    double cube_scale = 0.5;

    u64 rmax = 9;
    u64 modulus = 0;
    std::vector<u64> row;

    std::vector<u64> modulus_list;
    std::string modulus_kind = "prime";
    u64 range_lo = 100000, range_hi = 1000000;
    u64 count = 10;

    u64 samples = 1000;
    u64 seed = 0;
    int n = 2, j = 1;
    u64 r = 1;
};

namespace detail {

inline std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline double round9(double x) { return std::stod(fmt9(x)); }

inline const char* command_name(CliConfig::Command c) {
    switch (c) {
    case CliConfig::Command::theory: return "theory";
    case CliConfig::Command::solve: return "solve";
    case CliConfig::Command::lattices: return "lattices";
    case CliConfig::Command::simulate_rdist: return "simulate-rdist";
    case CliConfig::Command::simulate_primitive: return "simulate-primitive";
    case CliConfig::Command::hecke_average: return "hecke-average";
    case CliConfig::Command::expsum: return "expsum";
    }
    return "?";
}

template <typename T>
inline std::string join(const std::vector<T>& v, char sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

inline BoxSpec box_from(const CliConfig& cfg) {
    if (cfg.box_name == "square") return BoxSpec::square(cfg.a);
    if (cfg.box_name == "rect") return BoxSpec::rect(cfg.a);
    if (cfg.box_name == "cube") return BoxSpec::cube(cfg.cube_scale);
    throw usage_error("unknown box shape: " + cfg.box_name);
}

// Box volume in units of N for n = 2, when the closed forms apply.
inline std::optional<double> comparison_volume(const CliConfig& cfg, int n, int j) {
    if (n != 2 || j != 1) return std::nullopt;
    if (cfg.box_name == "cube") {
        double v = 4.0 * cfg.cube_scale * cfg.cube_scale;
        if (v > 2.0) return std::nullopt;
        return v;
    }
    return cfg.a;
}

inline std::string box_flags(const CliConfig& cfg) {
    std::string s = " --box " + cfg.box_name + " --a " + fmt9(cfg.a);
    if (cfg.box_name == "cube") s += " --cube-scale " + fmt9(cfg.cube_scale);
    return s;
}

inline std::string modulus_source_flags(const CliConfig& cfg) {
    std::string s;
    if (!cfg.modulus_list.empty()) {
        for (u64 m : cfg.modulus_list) s += " --modulus " + std::to_string(m);
        return s;
    }
    s += " --modulus-kind " + cfg.modulus_kind;
    s += " --range " + std::to_string(cfg.range_lo) + ":" + std::to_string(cfg.range_hi);
    s += " --count " + std::to_string(cfg.count);
    return s;
}

// Canonical reparsable flag string; --threads and --output are execution
// detail and stay out, so reruns under any worker count echo identically.
inline std::string echo_config(const CliConfig& cfg) {
    using Command = CliConfig::Command;
    std::string s = command_name(cfg.command);
    switch (cfg.command) {
    case Command::theory:
        s += " --a " + fmt9(cfg.a) + " --rmax " + std::to_string(cfg.rmax);
        break;
    case Command::solve:
        s += " --modulus " + std::to_string(cfg.modulus) + " --row " + join(cfg.row, ',');
        s += box_flags(cfg);
        break;
    case Command::lattices:
        s += " --modulus " + std::to_string(cfg.modulus);
        break;
    case Command::simulate_rdist:
        s += " --n " + std::to_string(cfg.n) + " --j " + std::to_string(cfg.j);
        s += modulus_source_flags(cfg);
        s += " --samples " + std::to_string(cfg.samples);
        s += box_flags(cfg);
        s += " --seed " + std::to_string(cfg.seed);
        break;
    case Command::simulate_primitive:
        s += modulus_source_flags(cfg);
        s += " --samples " + std::to_string(cfg.samples);
        s += " --a " + fmt9(cfg.a);
        s += " --seed " + std::to_string(cfg.seed);
        break;
    case Command::hecke_average:
        s += " --n " + std::to_string(cfg.n) + " --j " + std::to_string(cfg.j);
        s += " --modulus " + std::to_string(cfg.modulus) + " --r " + std::to_string(cfg.r);
        s += box_flags(cfg);
        break;
    case Command::expsum:
        s += " --range " + std::to_string(cfg.range_lo) + ":" + std::to_string(cfg.range_hi);
        s += " --count " + std::to_string(cfg.count);
        s += " --samples " + std::to_string(cfg.samples);
        s += " --a " + fmt9(cfg.a);
        s += " --seed " + std::to_string(cfg.seed);
        break;
    }
    s += " --format " + cfg.format;
    return s;
}

inline void parse_range(const std::string& text, u64& lo, u64& hi) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw usage_error("--range expects lo:hi");
    try {
        lo = std::stoull(text.substr(0, colon));
        hi = std::stoull(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw usage_error("--range expects numeric lo:hi");
    }
    if (lo < 2 || lo > hi) throw usage_error("--range needs 2 <= lo <= hi");
}

} // namespace detail

struct ParseResult {
    int exit_code = -1;  // -1 run the config, 0 help text, 2 usage error
    std::string message;
    CliConfig config;
};

inline ParseResult parse_args(const std::vector<std::string>& args) {
    using Command = CliConfig::Command;
    ParseResult res;
    CliConfig& cfg = res.config;

    CLI::App app{"short solutions of homogeneous linear congruences"};
    app.require_subcommand(1);

    std::string range_text;
    bool range_given = false, kind_given = false, count_given = false;

    auto add_format = [&](CLI::App* sc) {
        sc->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sc->add_option("--output", cfg.output, "output path (default stdout)");
    };
    auto add_box = [&](CLI::App* sc) {
        sc->add_option("--box", cfg.box_name, "box shape: square, rect or cube")
            ->check(CLI::IsMember({"square", "rect", "cube"}));
        sc->add_option("--a", cfg.a, "box volume parameter, in (0, 2]");
        sc->add_option("--cube-scale", cfg.cube_scale, "cube half-width scale D, in (0, 1)");
    };
    auto add_modulus_source = [&](CLI::App* sc) {
        sc->add_option("--modulus", cfg.modulus_list, "explicit modulus, repeatable");
        sc->add_option("--modulus-kind", cfg.modulus_kind, "prime, squarefree or any")
            ->check(CLI::IsMember({"prime", "squarefree", "any"}));
        auto* r = sc->add_option("--range", range_text, "modulus range lo:hi");
        auto* c = sc->add_option("--count", cfg.count, "how many moduli to draw");
        sc->parse_complete_callback([&, r, c, sc] {
            range_given = r->count() > 0;
            count_given = c->count() > 0;
            kind_given = sc->get_option("--modulus-kind")->count() > 0;
        });
    };
    auto add_threads = [&](CLI::App* sc) {
        sc->add_option("--threads", cfg.threads, "worker count; never affects results")
            ->check(CLI::PositiveNumber);
    };

    auto* theory = app.add_subcommand("theory", "closed-form probability table (n = 2)");
    theory->add_option("--a", cfg.a, "box volume parameter, in (0, 2]");
    theory->add_option("--rmax", cfg.rmax, "largest r in the table");
    add_format(theory);

    auto* solve = app.add_subcommand("solve", "solve one congruence row and survey a box");
    solve->add_option("--modulus", cfg.modulus, "modulus N >= 2")->required();
    solve->add_option("--row", cfg.row, "coefficient row, comma separated")
        ->required()
        ->delimiter(',');
    add_box(solve);
    add_format(solve);

    auto* lattices = app.add_subcommand("lattices", "index-N sublattices of Z^2 and their congruences");
    lattices->add_option("--modulus", cfg.modulus, "modulus N >= 2")->required();
    add_format(lattices);

    auto* rdist = app.add_subcommand("simulate-rdist", "sampled distribution of box solution counts");
    rdist->add_option("--n", cfg.n, "number of variables");
    rdist->add_option("--j", cfg.j, "number of congruence rows");
    add_modulus_source(rdist);
    rdist->add_option("--samples", cfg.samples, "samples per modulus");
    add_box(rdist);
    rdist->add_option("--seed", cfg.seed, "experiment seed");
    add_threads(rdist);
    add_format(rdist);

    auto* prim = app.add_subcommand("simulate-primitive", "sampled primitive-solution fractions (n = 2)");
    add_modulus_source(prim);
    prim->add_option("--samples", cfg.samples, "samples per modulus");
    prim->add_option("--a", cfg.a, "box volume parameter, in (0, 2]");
    prim->add_option("--seed", cfg.seed, "experiment seed");
    add_threads(prim);
    add_format(prim);

    auto* hecke = app.add_subcommand("hecke-average", "exact orbit fraction with a given box count");
    hecke->add_option("--n", cfg.n, "lattice dimension");
    hecke->add_option("--j", cfg.j, "quotient rank");
    hecke->add_option("--modulus", cfg.modulus, "modulus N >= 2")->required();
    hecke->add_option("--r", cfg.r, "target nonzero point count")->required();
    add_box(hecke);
    add_format(hecke);

    auto* expsum = app.add_subcommand("expsum", "binomial exponential sum experiment");
    expsum->add_option("--range", range_text, "prime range lo:hi");
    expsum->add_option("--count", cfg.count, "number of primes");
    expsum->add_option("--samples", cfg.samples, "records per prime");
    expsum->add_option("--a", cfg.a, "improved-bound parameter, in (0, 2]");
    expsum->add_option("--seed", cfg.seed, "experiment seed");
    add_threads(expsum);
    add_format(expsum);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        auto subs = app.get_subcommands();
        res.exit_code = 0;
        res.message = subs.empty() ? app.help() : subs[0]->help();
        return res;
    } catch (const CLI::CallForAllHelp&) {
        res.exit_code = 0;
        res.message = app.help("", CLI::AppFormatMode::All);
        return res;
    } catch (const CLI::ParseError& e) {
        res.exit_code = 2;
        res.message = e.what();
        return res;
    }

    try {
        if (theory->parsed()) cfg.command = Command::theory;
        if (solve->parsed()) cfg.command = Command::solve;
        if (lattices->parsed()) cfg.command = Command::lattices;
        if (rdist->parsed()) cfg.command = Command::simulate_rdist;
        if (prim->parsed()) cfg.command = Command::simulate_primitive;
        if (hecke->parsed()) cfg.command = Command::hecke_average;
        if (expsum->parsed()) {
            cfg.command = Command::expsum;
            if (!range_text.empty()) detail::parse_range(range_text, cfg.range_lo, cfg.range_hi);
            if (expsum->get_option("--range")->count() == 0) {
                cfg.range_lo = 1000;
                cfg.range_hi = 10000;
            }
            if (expsum->get_option("--count")->count() == 0) cfg.count = 200;
            if (expsum->get_option("--samples")->count() == 0) cfg.samples = 5;
        }

        bool wants_moduli = cfg.command == Command::simulate_rdist ||
                            cfg.command == Command::simulate_primitive;
        if (wants_moduli) {
            if (!cfg.modulus_list.empty() && (range_given || kind_given || count_given))
                throw usage_error("--modulus excludes --modulus-kind/--range/--count");
            if (range_given) detail::parse_range(range_text, cfg.range_lo, cfg.range_hi);
            for (u64 m : cfg.modulus_list)
                if (m < 2) throw usage_error("--modulus values must be >= 2");
            if (cfg.count < 1) throw usage_error("--count must be positive");
        }
        if (cfg.command == Command::expsum && cfg.range_lo < 3)
            throw usage_error("expsum --range needs lo >= 3");

        if (cfg.command == Command::solve) {
            if (cfg.row.size() < 2) throw usage_error("--row needs at least two entries");
            cfg.n = (int)cfg.row.size();
            cfg.j = 1;
        }
        if ((solve->parsed() || lattices->parsed() || hecke->parsed()) && cfg.modulus < 2)
            throw usage_error("--modulus must be >= 2");

        if (cfg.command == Command::simulate_rdist || cfg.command == Command::hecke_average ||
            cfg.command == Command::solve) {
            if (cfg.n < 2) throw usage_error("--n must be at least 2");
            if (cfg.j < 1 || cfg.j >= cfg.n) throw usage_error("--j must satisfy 1 <= j <= n - 1");
            detail::box_from(cfg).check_compatible(cfg.n, cfg.j);
        } else {
            if (!(cfg.a > 0.0 && cfg.a <= 2.0)) throw usage_error("--a must lie in (0, 2]");
        }
        if (cfg.samples < 1) throw usage_error("--samples must be positive");
    } catch (const error& e) {
        res.exit_code = 2;
        res.message = e.what();
        return res;
    }
    return res;
}

// Throwing variant for tests: a config ready to run, or usage_error.
inline CliConfig parse_config(const std::vector<std::string>& args) {
    ParseResult res = parse_args(args);
    if (res.exit_code == 2) throw usage_error(res.message);
    if (res.exit_code == 0) throw usage_error("help requested");
    return res.config;
}

namespace detail {

struct Emitter {
    const CliConfig& cfg;
    std::ostringstream csv;
    nlohmann::ordered_json json;

    explicit Emitter(const CliConfig& c) : cfg(c) {
        std::string name = command_name(cfg.command);
        if (is_csv()) {
            csv << "# artifact: latcong/" << name << " " << kVersion << "\n";
            csv << "# config: " << echo_config(cfg) << "\n";
        } else {
            json["artifact"] = "latcong/" + name;
            json["version"] = kVersion;
            json["config"] = echo_config(cfg);
        }
    }

    bool is_csv() const { return cfg.format == "csv"; }

    void comment(const std::string& key, const std::string& value) {
        if (is_csv()) csv << "# " << key << ": " << value << "\n";
    }

    void flush(std::ostream& out) {
        if (is_csv())
            out << csv.str();
        else
            out << json.dump(2) << "\n";
    }
};

inline nlohmann::ordered_json json_i64_list(const std::vector<i64>& v) {
    return nlohmann::ordered_json(v);
}

inline void run_theory(const CliConfig& cfg, Emitter& em) {
    TheoryTable t = theory_summary(cfg.a, cfg.rmax);
    if (em.is_csv()) {
        em.csv << "quantity,r,value\n";
        for (const auto& [r, v] : t.entries)
            em.csv << "c2r," << r << "," << fmt9(v) << "\n";
        em.csv << "tail,," << fmt9(t.tail) << "\n";
        em.csv << "p_nontrivial,," << fmt9(t.p_nontrivial) << "\n";
        em.csv << "primitive_lower_bound,," << fmt9(t.primitive_bound) << "\n";
        return;
    }
    em.json["a"] = round9(t.a);
    em.json["r_max"] = t.r_max;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& [r, v] : t.entries) rows.push_back({{"r", r}, {"value", round9(v)}});
    em.json["entries"] = rows;
    em.json["tail"] = round9(t.tail);
    em.json["p_nontrivial"] = round9(t.p_nontrivial);
    em.json["primitive_lower_bound"] = round9(t.primitive_bound);
}

inline void run_solve(const CliConfig& cfg, Emitter& em) {
    Modulus modulus(cfg.modulus);
    int n = (int)cfg.row.size();
    auto sys = make_system(modulus, n, 1, cfg.row);
    BoxSpec box = box_from(cfg);
    auto shortest = shortest_nontrivial(sys);
    u64 in_box = count_solutions_in_box(sys, box);
    double bound = sup_norm_bound(sys);

    std::vector<i64> generator;
    std::vector<CensusEntry> census;
    if (n == 2) {
        auto sol = solve_two_var(sys.rows[0], sys.rows[1], modulus);
        generator = {(i64)sol.generator[0], (i64)sol.generator[1]};
        census = short_solution_census(sys.rows[0], sys.rows[1], modulus, box);
    }

    if (em.is_csv()) {
        auto join_signed = [](const std::vector<i64>& v) {
            std::string s;
            for (size_t i = 0; i < v.size(); ++i) {
                if (i) s += ';';
                s += std::to_string(v[i]);
            }
            return s;
        };
        em.csv << "key,value\n";
        em.csv << "modulus," << cfg.modulus << "\n";
        em.csv << "n," << n << "\n";
        em.csv << "row," << join(cfg.row, ';') << "\n";
        if (n == 2) em.csv << "generator," << join_signed(generator) << "\n";
        em.csv << "shortest," << join_signed(shortest.point) << "\n";
        em.csv << "shortest_sup," << shortest.sup << "\n";
        em.csv << "sup_norm_bound," << fmt9(bound) << "\n";
        em.csv << "box_count," << in_box << "\n";
        if (n == 2) {
            std::vector<i64> ks, ds, xs, ys;
            for (const auto& e : census) {
                ks.push_back((i64)e.k);
                ds.push_back((i64)e.d);
                xs.push_back(e.x);
                ys.push_back(e.y);
            }
            em.csv << "census_size," << census.size() << "\n";
            em.csv << "census_k," << join_signed(ks) << "\n";
            em.csv << "census_d," << join_signed(ds) << "\n";
            em.csv << "census_x," << join_signed(xs) << "\n";
            em.csv << "census_y," << join_signed(ys) << "\n";
        }
        return;
    }
    em.json["modulus"] = cfg.modulus;
    em.json["n"] = n;
    em.json["row"] = cfg.row;
    if (n == 2) em.json["generator"] = json_i64_list(generator);
    em.json["shortest"] = json_i64_list(shortest.point);
    em.json["shortest_sup"] = shortest.sup;
    em.json["sup_norm_bound"] = round9(bound);
    em.json["box_count"] = in_box;
    if (n == 2) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& e : census)
            rows.push_back({{"k", e.k}, {"d", e.d}, {"x", e.x}, {"y", e.y}});
        em.json["census"] = rows;
    }
}

inline void run_lattices(const CliConfig& cfg, Emitter& em) {
    Modulus modulus(cfg.modulus);
    auto all = enumerate_D_N(modulus);
    if (em.is_csv()) em.csv << "d,a,snf1,snf2,cyclic,row_a,row_b\n";
    auto rows = nlohmann::ordered_json::array();
    for (const auto& b : all) {
        auto snf = snf_2x2(b);
        auto row = congruence_from_lattice(b);
        if (em.is_csv()) {
            em.csv << b.d << "," << b.a << "," << snf.d1 << "," << snf.d2 << ","
                   << (row ? 1 : 0) << ",";
            if (row)
                em.csv << (*row)[0] << "," << (*row)[1];
            else
                em.csv << ",";
            em.csv << "\n";
        } else {
            nlohmann::ordered_json obj{{"d", b.d},     {"a", b.a},
                                       {"snf1", snf.d1}, {"snf2", snf.d2},
                                       {"cyclic", (bool)row}};
            if (row) obj["row"] = {(*row)[0], (*row)[1]};
            rows.push_back(obj);
        }
    }
    if (!em.is_csv()) {
        em.json["modulus"] = cfg.modulus;
        em.json["sigma"] = modulus.sigma();
        em.json["lattices"] = rows;
    }
}

inline std::vector<Modulus> resolve_moduli(const CliConfig& cfg) {
    std::vector<Modulus> moduli;
    if (!cfg.modulus_list.empty()) {
        for (u64 m : cfg.modulus_list) moduli.emplace_back(m);
        return moduli;
    }
    ModulusKind kind = cfg.modulus_kind == "prime"        ? ModulusKind::prime
                       : cfg.modulus_kind == "squarefree" ? ModulusKind::squarefree
                                                          : ModulusKind::any;
    SeededStream stream = derive_stream(cfg.seed, kReservedStreamBase);
    return draw_distinct_moduli(kind, cfg.range_lo, cfg.range_hi, cfg.count, stream);
}

inline void run_rdist(const CliConfig& cfg, Emitter& em) {
    BoxSpec box = box_from(cfg);
    auto moduli = resolve_moduli(cfg);
    auto dist = simulate_r_distribution(cfg.n, cfg.j, moduli, box, cfg.samples, cfg.seed,
                                        cfg.threads);
    auto volume = comparison_volume(cfg, cfg.n, cfg.j);

    em.comment("moduli", join(dist.moduli, ';'));
    em.comment("samples_per_modulus", std::to_string(cfg.samples));
    if (volume) em.comment("theory_volume", fmt9(*volume));

    auto emit_rows = [&](const std::map<u64, u64>& counts, u64 samples, u64 modulus,
                         nlohmann::ordered_json* sink) {
        std::map<u64, u64> rows(counts);
        for (u64 r = 1; r <= 9; r += 2) rows.emplace(r, 0);
        std::vector<TheoryComparisonRow> cmp;
        if (volume) cmp = compare_to_theory(counts, samples, *volume);
        size_t ci = 0;
        for (const auto& [r, count] : rows) {
            double freq = (double)count / (double)samples;
            const TheoryComparisonRow* tc = nullptr;
            if (volume) {
                while (ci < cmp.size() && cmp[ci].r < r) ++ci;
                if (ci < cmp.size() && cmp[ci].r == r) tc = &cmp[ci];
            }
            if (em.is_csv()) {
                em.csv << modulus << "," << r << "," << count << "," << fmt9(freq) << ",";
                if (tc) em.csv << fmt9(tc->theory);
                em.csv << ",";
                if (tc) em.csv << fmt9(tc->z);
                em.csv << "\n";
            } else {
                nlohmann::ordered_json obj{{"r", r}, {"count", count}, {"freq", round9(freq)}};
                if (tc) {
                    obj["theory_freq"] = round9(tc->theory);
                    obj["z"] = round9(tc->z);
                }
                sink->push_back(obj);
            }
        }
    };

    if (em.is_csv()) {
        em.csv << "N,r,count,freq,theory_freq,z\n";
        for (size_t i = 0; i < dist.moduli.size(); ++i)
            emit_rows(dist.per_modulus[i], cfg.samples, dist.moduli[i], nullptr);
        return;
    }
    em.json["n"] = cfg.n;
    em.json["j"] = cfg.j;
    em.json["seed"] = cfg.seed;
    em.json["samples_per_modulus"] = cfg.samples;
    em.json["moduli"] = dist.moduli;
    auto blocks = nlohmann::ordered_json::array();
    for (size_t i = 0; i < dist.moduli.size(); ++i) {
        auto rows = nlohmann::ordered_json::array();
        emit_rows(dist.per_modulus[i], cfg.samples, dist.moduli[i], &rows);
        blocks.push_back({{"N", dist.moduli[i]}, {"rows", rows}});
    }
    em.json["per_modulus"] = blocks;
    auto merged = nlohmann::ordered_json::array();
    emit_rows(dist.merged, dist.samples_total, 0, &merged);
    em.json["merged"] = {{"samples", dist.samples_total}, {"rows", merged}};
}

inline void run_primitive(const CliConfig& cfg, Emitter& em) {
    auto moduli = resolve_moduli(cfg);
    auto frac = simulate_primitive_fraction(moduli, cfg.a, cfg.samples, cfg.seed, cfg.threads);
    em.comment("moduli", join(frac.moduli, ';'));
    double f_non = (double)frac.nontrivial / (double)frac.samples_total;
    double f_prim = (double)frac.primitive / (double)frac.samples_total;
    if (em.is_csv()) {
        em.csv << "quantity,key,value\n";
        em.csv << "samples,," << frac.samples_total << "\n";
        em.csv << "nontrivial,," << frac.nontrivial << "\n";
        em.csv << "primitive,," << frac.primitive << "\n";
        em.csv << "fraction_nontrivial,," << fmt9(f_non) << "\n";
        em.csv << "fraction_primitive,," << fmt9(f_prim) << "\n";
        em.csv << "theory_p_nontrivial,," << fmt9(p_nontrivial(cfg.a)) << "\n";
        em.csv << "theory_primitive_lower_bound,," << fmt9(primitive_lower_bound(cfg.a)) << "\n";
        for (const auto& [d, c] : frac.shortest_d_hist)
            em.csv << "shortest_d," << d << "," << c << "\n";
        return;
    }
    em.json["a"] = round9(cfg.a);
    em.json["seed"] = cfg.seed;
    em.json["moduli"] = frac.moduli;
    em.json["samples"] = frac.samples_total;
    em.json["nontrivial"] = frac.nontrivial;
    em.json["primitive"] = frac.primitive;
    em.json["fraction_nontrivial"] = round9(f_non);
    em.json["fraction_primitive"] = round9(f_prim);
    em.json["theory_p_nontrivial"] = round9(p_nontrivial(cfg.a));
    em.json["theory_primitive_lower_bound"] = round9(primitive_lower_bound(cfg.a));
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [d, c] : frac.shortest_d_hist)
        hist.push_back({{"d", d}, {"count", c}});
    em.json["shortest_d_hist"] = hist;
}

inline void run_hecke(const CliConfig& cfg, Emitter& em) {
    Modulus modulus(cfg.modulus);
    BoxSpec box = box_from(cfg);
    auto orbit = enumerate_hecke_orbit(cfg.n, cfg.j, modulus);
    auto counts = hecke_point_counts(orbit, box);
    u64 matching = 0;
    for (u64 c : counts)
        if (c == cfg.r) ++matching;
    double fraction = (double)matching / (double)counts.size();
    if (em.is_csv()) {
        em.csv << "n,j,N,r,orbit_size,matching,fraction\n";
        em.csv << cfg.n << "," << cfg.j << "," << cfg.modulus << "," << cfg.r << ","
               << counts.size() << "," << matching << "," << fmt9(fraction) << "\n";
        return;
    }
    em.json["n"] = cfg.n;
    em.json["j"] = cfg.j;
    em.json["modulus"] = cfg.modulus;
    em.json["r"] = cfg.r;
    em.json["orbit_size"] = counts.size();
    em.json["matching"] = matching;
    em.json["fraction"] = round9(fraction);
}

inline void run_expsum(const CliConfig& cfg, Emitter& em) {
    auto ex = bound_experiment(cfg.range_lo, cfg.range_hi, cfg.count, cfg.a, cfg.samples,
                               cfg.seed, cfg.threads);
    em.comment("primes", join(ex.primes, ';'));
    em.comment("records", std::to_string(ex.records.size()));
    em.comment("weil_failures", std::to_string(ex.weil_failures));
    em.comment("max_weil_ratio", fmt9(ex.max_weil_ratio));
    em.comment("improved_fraction", fmt9(ex.improved_fraction));
    if (em.is_csv()) {
        em.csv << "p,g,h1,h2,r1,r2,a1,a2,abs_S,weil_bound,M_unsigned,M_signed,improved_holds\n";
        for (const auto& rec : ex.records) {
            em.csv << rec.p << "," << rec.g << "," << rec.h1 << "," << rec.h2 << "," << rec.r1
                   << "," << rec.r2 << "," << rec.a1 << "," << rec.a2 << "," << fmt9(rec.abs_s)
                   << "," << fmt9(rec.weil_bound) << "," << rec.m_unsigned << ","
                   << rec.m_signed << "," << (rec.improved_holds ? 1 : 0) << "\n";
        }
        return;
    }
    em.json["a"] = round9(cfg.a);
    em.json["seed"] = cfg.seed;
    em.json["primes"] = ex.primes;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& rec : ex.records) {
        rows.push_back({{"p", rec.p},
                        {"g", rec.g},
                        {"h1", rec.h1},
                        {"h2", rec.h2},
                        {"r1", rec.r1},
                        {"r2", rec.r2},
                        {"a1", rec.a1},
                        {"a2", rec.a2},
                        {"abs_S", round9(rec.abs_s)},
                        {"weil_bound", round9(rec.weil_bound)},
                        {"M_unsigned", rec.m_unsigned},
                        {"M_signed", rec.m_signed},
                        {"improved_holds", rec.improved_holds}});
    }
    em.json["records"] = rows;
    em.json["summary"] = {{"records", ex.records.size()},
                          {"weil_failures", ex.weil_failures},
                          {"max_weil_ratio", round9(ex.max_weil_ratio)},
                          {"improved_fraction", round9(ex.improved_fraction)}};
}

} // namespace detail

// Runs a parsed config, writing the artifact to `out`. Returns 0, or 1 on a
// runtime guard or sampling failure (the artifact then carries an error
// record instead of data).
inline int run(const CliConfig& cfg, std::ostream& out) {
    using Command = CliConfig::Command;
    detail::Emitter em(cfg);
    try {
        switch (cfg.command) {
        case Command::theory: detail::run_theory(cfg, em); break;
        case Command::solve: detail::run_solve(cfg, em); break;
        case Command::lattices: detail::run_lattices(cfg, em); break;
        case Command::simulate_rdist: detail::run_rdist(cfg, em); break;
        case Command::simulate_primitive: detail::run_primitive(cfg, em); break;
        case Command::hecke_average: detail::run_hecke(cfg, em); break;
        case Command::expsum: detail::run_expsum(cfg, em); break;
        }
    } catch (const error& e) {
        detail::Emitter fail(cfg);
        if (fail.is_csv())
            fail.csv << "# error: " << e.what() << "\n";
        else
            fail.json["error"] = e.what();
        fail.flush(out);
        return 1;
    }
    em.flush(out);
    return 0;
}

// argv-shaped entry point: parses, opens --output if given, runs.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    ParseResult res = parse_args(args);
    if (res.exit_code == 0) {
        out << res.message;
        return 0;
    }
    if (res.exit_code == 2) {
        err << "usage error: " << res.message << "\n";
        return 2;
    }
    if (!res.config.output.empty()) {
        std::ofstream file(res.config.output);
        if (!file) {
            err << "cannot open output path: " << res.config.output << "\n";
            return 1;
        }
        return run(res.config, file);
    }
    return run(res.config, out);
}

} // namespace latcong
