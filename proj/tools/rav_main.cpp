#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "rav/avoid.hpp"
#include "rav/circuit.hpp"
#include "rav/codec.hpp"
#include "rav/generator.hpp"
#include "rav/gridcolor.hpp"
#include "rav/hardlang.hpp"
#include "rav/s2game.hpp"
#include "rav/store.hpp"
#include "rav/version.hpp"

using json = nlohmann::ordered_json;
using namespace rav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitContract = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Globals {
    uint64_t budget = uint64_t{1} << 22;
    uint64_t seed = 0;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string scheme = "micro";
    std::string format = "json";
    std::string cache_dir = "rav-cache";

    codec::Scheme scheme_value() const { return codec::scheme_from_name(scheme); }
};

void render_text(const json& j, const std::string& prefix, std::ostream& os) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            render_text(value, name, os);
        } else {
            os << name << ": " << value.dump() << "\n";
        }
    }
}

/// Every run emits exactly one report.
void emit_report(const Globals& g, const std::string& command, const json& params,
                 const json& result, double elapsed_ms, uint64_t budget_used,
                 uint64_t cache_hits) {
    json report;
    report["schema"] = kReportSchema;
    report["command"] = command;
    report["params"] = params;
    report["result"] = result;
    report["elapsed_ms"] = elapsed_ms;
    report["budget_used"] = budget_used;
    report["cache_hits"] = cache_hits;
    report["workers"] = g.workers;
    if (g.format == "json") {
        std::cout << report.dump(2) << "\n";
    } else {
        render_text(report, "", std::cout);
    }
}

Circuit load_circuit(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot open circuit file " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return circuit_from_text(buf.str());
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path + " for writing");
    }
    f << text;
}

BitVec parse_bits(const std::string& s) { return BitVec::from_string(s); }

/// One handler per subcommand; returns (result json, exit code, budget used,
/// cache hits).
struct Outcome {
    json result;
    int exit_code = kExitOk;
    uint64_t budget_used = 0;
    uint64_t cache_hits = 0;
};

json coloring_to_json(const gridcolor::Coloring& g) {
    json rows = json::array();
    for (uint32_t r = 1; r <= g.rows; ++r) {
        std::string row;
        for (uint32_t c = 1; c <= g.cols; ++c) {
            row += std::to_string(static_cast<int>(g.at(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

s2game::LangOracle cli_language(const std::string& pred, uint32_t n) {
    if (pred == "divisor" || pred == "divisor-succ") {
        return s2game::toys::composites(n);
    }
    throw ParseError("no built-in language oracle for predicate \"" + pred + "\"");
}

/// A predicate from the registry or from a circuit file over (x, y, z).
s2game::S2Predicate cli_predicate(const std::string& name, const std::string& circuit_path,
                                  uint32_t n, uint32_t ell) {
    if (!circuit_path.empty()) {
        return s2game::toys::from_circuit(load_circuit(circuit_path), n, ell);
    }
    return s2game::toys::registry(name, n, ell);
}

/// For circuit-backed predicates the language is what the symmetric game
/// itself decides; an invalid x is a contract violation.
s2game::LangOracle decide_language(const s2game::S2Predicate& p, uint64_t budget) {
    return [p, budget](const BitVec& x) {
        const s2game::Decision d = s2game::decide_s2(p, x, budget);
        if (d == s2game::Decision::Invalid) {
            throw ContractError("x = " + x.to_string() + " is invalid for the predicate");
        }
        return d == s2game::Decision::Member;
    };
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean-circuit synthesis and Range-Avoidance toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true); // global flags may follow the subcommand
    Globals g;
    app.add_option("--budget", g.budget, "work budget for exhaustive operations");
    app.add_option("--seed", g.seed, "seed for sampled modes");
    app.add_option("--workers", g.workers, "worker thread count");
    app.add_option("--scheme", g.scheme, "circuit encoding scheme (paper|micro)")
        ->check(CLI::IsMember({"paper", "micro"}));
    app.add_option("--format", g.format, "report format (json|text)")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cache-dir", g.cache_dir, "persistent artifact store directory");

    std::string command;
    json params;
    std::function<Outcome()> handler;
    auto arm = [&](CLI::App* cmd, const std::string& name, std::function<Outcome()> fn) {
        cmd->callback([&command, &handler, name, fn] {
            command = name;
            handler = fn;
        });
    };

    // ---- encode ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("encode", "encode a circuit file bit-exactly");
        auto circuit_path = std::make_shared<std::string>();
        auto n = std::make_shared<uint32_t>(0);
        auto s = std::make_shared<uint32_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--circuit", *circuit_path, "circuit text file")->required();
        cmd->add_option("--n", *n, "declared input count")->required();
        cmd->add_option("--s", *s, "declared gate count")->required();
        cmd->add_option("--out", *out, "write a binary encoding file here");
        arm(cmd, "encode", [&g, circuit_path, n, s, out, &params]() {
            const codec::Encoding e =
                codec::encode(load_circuit(*circuit_path), *n, *s, g.scheme_value());
            params = {{"circuit", *circuit_path}, {"n", *n}, {"s", *s}, {"scheme", g.scheme}};
            if (!out->empty()) {
                codec::write_encoding_file(e, *out);
            }
            Outcome o;
            o.result = {{"bits_hex", e.bits.to_hex()},
                        {"bit_length", e.bits.size()},
                        {"written", *out}};
            return o;
        });
    }

    // ---- decode ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("decode", "decode an encoding to a circuit");
        auto in = std::make_shared<std::string>();
        auto hex = std::make_shared<std::string>();
        auto n = std::make_shared<uint32_t>(0);
        auto s = std::make_shared<uint32_t>(0);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--in", *in, "binary encoding file");
        cmd->add_option("--hex", *hex, "hex bitstream (needs --n and --s)");
        cmd->add_option("--n", *n, "input count for --hex");
        cmd->add_option("--s", *s, "gate count for --hex");
        cmd->add_option("--out", *out, "write the circuit text here");
        arm(cmd, "decode", [&g, in, hex, n, s, out, &params]() {
            codec::Encoding e;
            if (!in->empty()) {
                e = codec::read_encoding_file(*in);
            } else if (!hex->empty()) {
                const uint64_t len = codec::encoding_length(*n, *s, g.scheme_value());
                e = codec::make_encoding(BitVec::from_hex(*hex, len), *n, *s, g.scheme_value());
            } else {
                throw ParseError("decode needs --in or --hex");
            }
            params = {{"n", e.n}, {"s", e.s}, {"scheme", codec::scheme_name(e.scheme)}};
            const Circuit c = codec::decode(e);
            const std::string text = to_text(c);
            if (!out->empty()) {
                save_text(*out, text);
            }
            Outcome o;
            o.result = {{"circuit", text}, {"gates", c.gates.size()}};
            return o;
        });
    }

    // ---- eval ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("eval", "evaluate a circuit on one assignment");
        auto circuit_path = std::make_shared<std::string>();
        auto input = std::make_shared<std::string>();
        cmd->add_option("--circuit", *circuit_path, "circuit text file")->required();
        cmd->add_option("--input", *input, "assignment bits")->required();
        arm(cmd, "eval", [circuit_path, input, &params]() {
            const Circuit c = load_circuit(*circuit_path);
            params = {{"circuit", *circuit_path}, {"input", *input}};
            Outcome o;
            o.result = {{"output", eval(c, parse_bits(*input)).to_string()}};
            return o;
        });
    }

    // ---- tt --------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("tt", "truth table prefix of a circuit");
        auto circuit_path = std::make_shared<std::string>();
        auto k = std::make_shared<uint64_t>(0);
        cmd->add_option("--circuit", *circuit_path, "circuit text file")->required();
        cmd->add_option("--k", *k, "number of lexicographic rows (default full)");
        arm(cmd, "tt", [circuit_path, k, &params]() {
            const Circuit c = load_circuit(*circuit_path);
            const uint64_t rows = *k == 0 ? (uint64_t{1} << c.n_inputs) : *k;
            params = {{"circuit", *circuit_path}, {"k", rows}};
            const TruthTable tt = truth_table(c, rows);
            Outcome o;
            o.result = {{"bits_hex", tt.bits.to_hex()}, {"bit_length", tt.bits.size()}};
            if (tt.bits.size() <= 64) {
                o.result["bits"] = tt.bits.to_string();
            }
            return o;
        });
    }

    // ---- gen build / gen check -------------------------------------------
    {
        auto* gen = app.add_subcommand("gen", "truth table generator circuits");
        gen->require_subcommand(1);
        auto n = std::make_shared<uint32_t>(0);
        auto s = std::make_shared<uint32_t>(0);
        auto k = std::make_shared<uint64_t>(0);
        auto out = std::make_shared<std::string>();
        auto samples = std::make_shared<uint64_t>(200);
        auto exhaustive = std::make_shared<bool>(false);

        auto* build = gen->add_subcommand("build", "construct the generator circuit");
        build->add_option("--n", *n)->required();
        build->add_option("--s", *s)->required();
        build->add_option("--k", *k, "output count (default |E|+1, the prefix generator)");
        build->add_option("--out", *out, "write the generator circuit text here");
        arm(build, "gen build", [&g, n, s, k, out, &params]() {
            generator::GeneratorSpec spec = *k == 0
                ? generator::ptt_spec(*n, *s, g.scheme_value())
                : generator::GeneratorSpec{*n, *s, g.scheme_value(), *k};
            const generator::SizeReport r = generator::generator_size_report(spec);
            if (!out->empty()) {
                save_text(*out, to_text(generator::build_tt_generator(spec)));
            }
            params = {{"n", *n}, {"s", *s}, {"scheme", g.scheme}, {"k", spec.k}};
            Outcome o;
            o.result = {{"n", spec.n},          {"s", spec.s},
                        {"scheme", g.scheme},   {"k", spec.k},
                        {"gates", r.gates},     {"bound", r.bound},
                        {"pass", r.pass},       {"encoding_bits", r.encoding_bits},
                        {"written", *out}};
            o.exit_code = r.pass ? kExitOk : kExitContract;
            return o;
        });

        auto* check = gen->add_subcommand("check", "compare the generator against decode+eval");
        check->add_option("--n", *n)->required();
        check->add_option("--s", *s)->required();
        check->add_option("--k", *k, "output count (default |E|+1)");
        check->add_option("--samples", *samples, "random encodings to test");
        check->add_flag("--exhaustive", *exhaustive, "sweep every encoding");
        arm(check, "gen check", [&g, n, s, k, samples, exhaustive, &params]() {
            generator::GeneratorSpec spec = *k == 0
                ? generator::ptt_spec(*n, *s, g.scheme_value())
                : generator::GeneratorSpec{*n, *s, g.scheme_value(), *k};
            const Circuit gen_circ = generator::build_tt_generator(spec);
            const uint64_t enc_bits = spec.encoding_bits();
            params = {{"n", *n},
                      {"s", *s},
                      {"scheme", g.scheme},
                      {"k", spec.k},
                      {"samples", *samples},
                      {"exhaustive", *exhaustive}};
            uint64_t checked = 0;
            uint64_t mismatches = 0;
            std::mt19937_64 rng(g.seed);
            auto one = [&](const BitVec& e) {
                const Circuit c =
                    codec::decode(codec::make_encoding(e, *n, *s, g.scheme_value()));
                if (eval(gen_circ, e) != truth_table(c, spec.k).bits) {
                    ++mismatches;
                }
                ++checked;
            };
            if (*exhaustive) {
                if (enc_bits >= 63 || (uint64_t{1} << enc_bits) > g.budget) {
                    throw BudgetExceededError("exhaustive generator check over budget");
                }
                for (uint64_t v = 0; v < (uint64_t{1} << enc_bits); ++v) {
                    one(BitVec::from_value(v, enc_bits));
                }
            } else {
                for (uint64_t t = 0; t < *samples; ++t) {
                    BitVec e(enc_bits);
                    for (uint64_t i = 0; i < enc_bits; ++i) {
                        e.set(i, (rng() & 1) != 0);
                    }
                    one(e);
                }
            }
            Outcome o;
            o.result = {{"checked", checked}, {"mismatches", mismatches}};
            o.budget_used = checked;
            o.exit_code = mismatches == 0 ? kExitOk : kExitContract;
            return o;
        });
    }

    // ---- avoid solve / avoid verify ---------------------------------------
    {
        auto* av = app.add_subcommand("avoid", "range avoidance");
        av->require_subcommand(1);
        auto circuit_path = std::make_shared<std::string>();
        auto mode = std::make_shared<std::string>("exhaustive");
        auto y_bits = std::make_shared<std::string>();

        auto* slv = av->add_subcommand("solve", "find a string outside the range");
        slv->add_option("--circuit", *circuit_path, "instance circuit text file")->required();
        slv->add_option("--mode", *mode, "exhaustive|sampled")
            ->check(CLI::IsMember({"exhaustive", "sampled"}));
        arm(slv, "avoid solve", [&g, circuit_path, mode, &params]() {
            const Circuit instance_circuit = load_circuit(*circuit_path);
            const avoid::AvoidInstance inst{instance_circuit};
            avoid::SolveOptions opt;
            opt.mode = *mode == "exhaustive" ? avoid::SolveMode::Exhaustive
                                             : avoid::SolveMode::Sampled;
            opt.budget = g.budget;
            opt.seed = g.seed;
            opt.workers = g.workers;
            params = {{"circuit", *circuit_path}, {"mode", *mode}};
            const avoid::AvoidSolution sol = avoid::solve(inst, opt);

            // Canonical solutions persist, keyed by the instance content.
            char instance_key[24];
            std::snprintf(instance_key, sizeof instance_key, "%016llx",
                          static_cast<unsigned long long>(
                              store::fnv1a64(to_text(instance_circuit))));
            store::Store st(g.cache_dir);
            std::string key = std::string("instance=") + instance_key + ",mode=" + *mode;
            if (*mode == "sampled") {
                key += ",seed=" + std::to_string(g.seed);
            }
            st.put(store::make_entry("avoid-solution", key, sol.y));

            Outcome o;
            o.result = {{"y_hex", sol.y.to_hex()},
                        {"y_bits", sol.y.size() <= 128 ? sol.y.to_string() : ""},
                        {"certificate",
                         sol.certificate == avoid::Certificate::ExhaustiveVerified
                             ? "exhaustive-verified"
                             : "heuristic-sampled"},
                        {"canonical", sol.canonical},
                        {"n_in", inst.n_in()},
                        {"m_out", inst.m_out()}};
            o.budget_used = inst.n_in() < 63 ? (uint64_t{1} << inst.n_in()) : 0;
            return o;
        });

        auto* ver = av->add_subcommand("verify", "check a claimed avoided string");
        ver->add_option("--circuit", *circuit_path, "instance circuit text file")->required();
        ver->add_option("--y", *y_bits, "candidate bits")->required();
        arm(ver, "avoid verify", [&g, circuit_path, y_bits, &params]() {
            const avoid::AvoidInstance inst{load_circuit(*circuit_path)};
            params = {{"circuit", *circuit_path}, {"y", *y_bits}};
            const avoid::VerifyResult r =
                avoid::verify_avoided(inst, parse_bits(*y_bits), g.budget);
            Outcome o;
            switch (r.status) {
            case avoid::VerifyStatus::Verified:
                o.result = {{"status", "verified"}};
                break;
            case avoid::VerifyStatus::Refuted:
                o.result = {{"status", "refuted"}, {"witness", r.witness->to_string()}};
                o.exit_code = kExitContract;
                break;
            case avoid::VerifyStatus::BudgetExceeded:
                o.result = {{"status", "budget-exceeded"}};
                o.exit_code = kExitBudget;
                break;
            }
            return o;
        });
    }

    // ---- hardlang ----------------------------------------------------------
    {
        auto* hl = app.add_subcommand("hardlang", "explicit hard languages");
        hl->require_subcommand(1);
        auto n = std::make_shared<uint32_t>(0);
        auto s = std::make_shared<uint32_t>(0);
        auto x_bits = std::make_shared<std::string>();
        auto s_max = std::make_shared<uint32_t>(0);
        auto force = std::make_shared<bool>(false);
        auto heuristic = std::make_shared<bool>(false);
        auto extension = std::make_shared<bool>(false);

        auto t_exponent = std::make_shared<uint32_t>(0);
        auto* build = hl->add_subcommand("build", "derive the canonical characteristic string");
        build->add_option("--n", *n)->required();
        build->add_option("--s", *s, "target circuit size");
        build->add_option("--t-exponent", *t_exponent,
                          "derive s from the time bound t(n) = n^e instead");
        build->add_flag("--force", *force, "re-derive and re-attest against the store");
        build->add_flag("--heuristic", *heuristic,
                        "allow a sampled Avoid solve when over budget");
        arm(build, "hardlang build", [&g, n, s, t_exponent, force, heuristic, &params]() {
            store::Store st(g.cache_dir);
            hardlang::HardLang ctx(st, g.budget, g.workers);
            uint32_t size = *s;
            bool micro_regime = false;
            if (*t_exponent > 0) {
                const hardlang::Params derived =
                    hardlang::params_from_t({*t_exponent}, *n);
                size = static_cast<uint32_t>(derived.s);
                micro_regime = derived.micro_regime;
            } else if (size == 0) {
                throw ParseError("hardlang build needs --s or --t-exponent");
            }
            const hardlang::HardLanguageSpec spec{*n, size, g.scheme_value()};
            params = {{"n", *n},         {"s", size},
                      {"scheme", g.scheme}, {"t_exponent", *t_exponent},
                      {"micro_regime", micro_regime}, {"force", *force},
                      {"heuristic", *heuristic}};
            const hardlang::CharString cs = ctx.build_char_string(spec, *force, *heuristic);
            Outcome o;
            o.result = {{"f_hex", cs.prefix.to_hex()},
                        {"f_bits", cs.prefix.size() <= 128 ? cs.prefix.to_string() : ""},
                        {"prefix_length", cs.prefix.size()},
                        {"full_length", cs.full_length()},
                        {"solves", ctx.solve_count()}};
            o.cache_hits = ctx.cache_hits();
            o.budget_used = ctx.solve_count() > 0 && spec.encoding_bits() < 63
                                ? (uint64_t{1} << spec.encoding_bits())
                                : 0;
            return o;
        });

        auto* query = hl->add_subcommand("query", "membership of one input");
        query->add_option("--n", *n)->required();
        query->add_option("--s", *s)->required();
        query->add_option("--x", *x_bits, "input bits")->required();
        query->add_flag("--extension", *extension, "query the uniformly-sparse extension");
        arm(query, "hardlang query", [&g, n, s, x_bits, extension, &params]() {
            store::Store st(g.cache_dir);
            hardlang::HardLang ctx(st, g.budget, g.workers);
            const hardlang::HardLanguageSpec spec{*n, *s, g.scheme_value()};
            params = {{"n", *n}, {"s", *s}, {"scheme", g.scheme},
                      {"x", *x_bits}, {"extension", *extension}};
            const BitVec x = parse_bits(*x_bits);
            const bool bit = *extension ? ctx.extension_membership(x, spec)
                                        : ctx.membership(x, spec);
            Outcome o;
            o.result = {{"bit", bit ? 1 : 0}, {"solves", ctx.solve_count()}};
            o.cache_hits = ctx.cache_hits();
            return o;
        });

        auto* vlb = hl->add_subcommand("verify-lb", "micro-scale circuit lower bound sweep");
        vlb->add_option("--n", *n)->required();
        vlb->add_option("--s", *s)->required();
        vlb->add_option("--s-max", *s_max, "largest circuit size to enumerate")->required();
        arm(vlb, "hardlang verify-lb", [&g, n, s, s_max, &params]() {
            store::Store st(g.cache_dir);
            hardlang::HardLang ctx(st, g.budget, g.workers);
            const hardlang::HardLanguageSpec spec{*n, *s, g.scheme_value()};
            params = {{"n", *n}, {"s", *s}, {"scheme", g.scheme}, {"s_max", *s_max}};
            const hardlang::CharString cs = ctx.build_char_string(spec);
            const hardlang::LowerBoundReport r =
                hardlang::verify_lower_bound(cs, *s_max, g.budget);
            Outcome o;
            o.result = {{"circuits", r.circuits_checked},
                        {"matches", r.matches},
                        {"min_hamming", r.min_hamming}};
            o.cache_hits = ctx.cache_hits();
            o.budget_used = r.circuits_checked;
            o.exit_code = r.matches == 0 ? kExitOk : kExitContract;
            return o;
        });
    }

    // ---- hierarchy ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("hierarchy", "truth-table size hierarchy experiment");
        auto n = std::make_shared<uint32_t>(0);
        auto s1 = std::make_shared<uint32_t>(0);
        auto s2 = std::make_shared<uint32_t>(0);
        cmd->add_option("--n", *n)->required();
        cmd->add_option("--s1", *s1)->required();
        cmd->add_option("--s2", *s2)->required();
        arm(cmd, "hierarchy", [&g, n, s1, s2, &params]() {
            params = {{"n", *n}, {"s1", *s1}, {"s2", *s2}};
            const hardlang::HierarchyReport r =
                hardlang::hierarchy_experiment(*n, *s1, *s2, g.budget);
            Outcome o;
            o.result = {{"tables_small", r.tables_small},
                        {"tables_large", r.tables_large},
                        {"strict", r.strict},
                        {"witness", r.witness ? r.witness->to_string() : ""}};
            return o;
        });
    }

    // ---- s2 ----------------------------------------------------------------
    {
        auto* s2 = app.add_subcommand("s2", "symmetric/oblivious verification games");
        s2->require_subcommand(1);
        auto pred = std::make_shared<std::string>("divisor");
        auto pred_circuit = std::make_shared<std::string>();
        auto n = std::make_shared<uint32_t>(0);
        auto ell = std::make_shared<uint32_t>(0);
        auto x_bits = std::make_shared<std::string>();
        auto filter_max = std::make_shared<uint64_t>(0);

        auto* dec = s2->add_subcommand("decide", "play the symmetric game on one input");
        dec->add_option("--pred", *pred, "built-in predicate name");
        dec->add_option("--pred-circuit", *pred_circuit,
                        "circuit file over (x, y, z) instead of a built-in");
        dec->add_option("--n", *n)->required();
        dec->add_option("--ell", *ell)->required();
        dec->add_option("--x", *x_bits, "input bits")->required();
        arm(dec, "s2 decide", [&g, pred, pred_circuit, n, ell, x_bits, &params]() {
            const s2game::S2Predicate p = cli_predicate(*pred, *pred_circuit, *n, *ell);
            params = {{"pred", p.name}, {"n", *n}, {"ell", *ell}, {"x", *x_bits}};
            const s2game::Decision d = s2game::decide_s2(p, parse_bits(*x_bits), g.budget);
            Outcome o;
            o.result = {{"decision", d == s2game::Decision::Member      ? "member"
                                     : d == s2game::Decision::NonMember ? "nonmember"
                                                                        : "invalid"}};
            o.budget_used = p.call_count();
            return o;
        });

        auto* obl = s2->add_subcommand("oblivious", "search for slice-wide witnesses");
        obl->add_option("--pred", *pred, "built-in predicate name");
        obl->add_option("--n", *n)->required();
        obl->add_option("--ell", *ell)->required();
        arm(obl, "s2 oblivious", [&g, pred, n, ell, &params]() {
            const s2game::S2Predicate p = s2game::toys::registry(*pred, *n, *ell);
            params = {{"pred", *pred}, {"n", *n}, {"ell", *ell}};
            const auto found =
                s2game::find_oblivious_witnesses(p, cli_language(*pred, *n), g.budget);
            Outcome o;
            o.result = {{"found", found.has_value()},
                        {"y_star", found ? found->first.to_string() : ""},
                        {"z_star", found ? found->second.to_string() : ""}};
            o.budget_used = p.call_count();
            return o;
        });

        auto* tr = s2->add_subcommand("transform", "build the sparse-extension transform");
        tr->add_option("--pred", *pred, "built-in predicate name");
        tr->add_option("--n", *n)->required();
        tr->add_option("--ell", *ell)->required();
        tr->add_option("--filter-max", *filter_max, "filter accepts values <= this")->required();
        arm(tr, "s2 transform", [&g, pred, n, ell, filter_max, &params]() {
            const s2game::S2Predicate p = s2game::toys::registry(*pred, *n, *ell);
            const s2game::SparseFilter f = s2game::toys::value_at_most(*n, *filter_max);
            const s2game::LangOracle lang =
                s2game::toys::restrict_to(cli_language(*pred, *n), f.accept);
            params = {{"pred", *pred}, {"n", *n}, {"ell", *ell}, {"filter_max", *filter_max}};
            const s2game::Transform t = s2game::build_sparse_transform(p, f, lang, g.budget);

            store::Store st(g.cache_dir);
            const std::string key = "pred=" + *pred + ",n=" + std::to_string(*n) +
                                    ",ell=" + std::to_string(*ell) +
                                    ",vmax=" + std::to_string(*filter_max);
            st.put(store::make_entry("witness-table", key + ",part=y",
                                     t.table.serialize_y()));
            if (!t.table.z_star.empty()) {
                st.put(store::make_entry("witness-table", key + ",part=z",
                                         t.table.serialize_z()));
            }

            Outcome o;
            o.result = {{"x_count", t.table.y_star.size()},
                        {"z_records", t.table.z_star.size()},
                        {"y_star_hex", t.table.serialize_y().to_hex()},
                        {"z_star_hex", t.table.serialize_z().to_hex()},
                        {"store_key", key}};
            o.budget_used = p.call_count();
            return o;
        });

        auto* vt = s2->add_subcommand("verify-transform", "re-derive and verify the transform");
        vt->add_option("--pred", *pred, "built-in predicate name");
        vt->add_option("--n", *n)->required();
        vt->add_option("--ell", *ell)->required();
        vt->add_option("--filter-max", *filter_max)->required();
        arm(vt, "s2 verify-transform", [&g, pred, n, ell, filter_max, &params]() {
            const s2game::S2Predicate p = s2game::toys::registry(*pred, *n, *ell);
            const s2game::SparseFilter f = s2game::toys::value_at_most(*n, *filter_max);
            const s2game::LangOracle lang =
                s2game::toys::restrict_to(cli_language(*pred, *n), f.accept);
            params = {{"pred", *pred}, {"n", *n}, {"ell", *ell}, {"filter_max", *filter_max}};
            const s2game::Transform t = s2game::build_sparse_transform(p, f, lang, g.budget);
            const s2game::TransformReport r = s2game::verify_transform(
                t.verifier, t.table, lang, *n, g.budget, 8, g.seed == 0 ? 1 : g.seed);
            Outcome o;
            o.result = {{"inputs_checked", r.inputs_checked},
                        {"yes_violations", r.yes_violations.size()},
                        {"soundness_violations", r.soundness_violations.size()},
                        {"filter_violations", r.filter_violations.size()},
                        {"weak_z_records", r.weak_z_records},
                        {"sampled_checks", r.sampled_checks},
                        {"sampled_failures", r.sampled_failures},
                        {"pass", r.pass()}};
            o.budget_used = p.call_count();
            o.exit_code = r.pass() ? kExitOk : kExitContract;
            return o;
        });
    }

    // ---- gc ----------------------------------------------------------------
    {
        auto* gc = app.add_subcommand("gc", "grid coloring");
        gc->require_subcommand(1);
        auto unary = std::make_shared<std::string>();
        auto n = std::make_shared<uint32_t>(0);
        auto m = std::make_shared<uint32_t>(0);
        auto c = std::make_shared<uint32_t>(0);
        auto mode = std::make_shared<std::string>("square");

        auto* slv = gc->add_subcommand("solve", "find a square-free coloring");
        slv->add_option("instance", *unary, "unary instance string 1^n 0 1^m 0 1^c");
        slv->add_option("--n", *n, "rows");
        slv->add_option("--m", *m, "columns");
        slv->add_option("--c", *c, "colors");
        slv->add_option("--mode", *mode, "square|rectangle")
            ->check(CLI::IsMember({"square", "rectangle"}));
        arm(slv, "gc solve", [&g, unary, n, m, c, mode, &params]() {
            gridcolor::GcInstance inst;
            if (!unary->empty()) {
                const auto parsed = gridcolor::parse_instance(*unary);
                if (!parsed) {
                    throw ParseError("malformed unary grid instance");
                }
                inst = *parsed;
            } else {
                inst = {*n, *m, *c};
            }
            const gridcolor::CheckMode cm = *mode == "square"
                                                ? gridcolor::CheckMode::SquareCorners
                                                : gridcolor::CheckMode::RectangleCorners;
            params = {{"rows", inst.rows}, {"cols", inst.cols}, {"colors", inst.colors},
                      {"mode", *mode}};
            const gridcolor::SolveResult r = gridcolor::solve(inst, g.budget, cm, g.workers);
            Outcome o;
            o.budget_used = r.nodes;
            switch (r.outcome) {
            case gridcolor::Outcome::Accept: {
                o.result = {{"outcome", "accept"}, {"coloring", coloring_to_json(*r.coloring)}};
                // Accepted colorings are canonical; repeated runs must agree.
                store::Store st(g.cache_dir);
                st.put(store::make_entry(
                    "gridcolor",
                    "n=" + std::to_string(inst.rows) + ",m=" + std::to_string(inst.cols) +
                        ",c=" + std::to_string(inst.colors) + ",mode=" + *mode,
                    BitVec::from_bytes(std::vector<uint8_t>(r.coloring->cells.begin(),
                                                            r.coloring->cells.end()),
                                       r.coloring->cells.size() * 8)));
                break;
            }
            case gridcolor::Outcome::Reject:
                o.result = {{"outcome", "reject"}};
                break;
            case gridcolor::Outcome::BudgetExceeded:
                o.result = {{"outcome", "budget-exceeded"}};
                o.exit_code = kExitBudget;
                break;
            }
            return o;
        });

        auto* dec = gc->add_subcommand("decide", "membership of a unary string");
        dec->add_option("instance", *unary, "candidate string")->required();
        dec->add_option("--mode", *mode, "square|rectangle")
            ->check(CLI::IsMember({"square", "rectangle"}));
        arm(dec, "gc decide", [&g, unary, mode, &params]() {
            const gridcolor::CheckMode cm = *mode == "square"
                                                ? gridcolor::CheckMode::SquareCorners
                                                : gridcolor::CheckMode::RectangleCorners;
            params = {{"instance", *unary}, {"mode", *mode}};
            const gridcolor::Membership r = gridcolor::decide_membership(*unary, g.budget, cm);
            Outcome o;
            if (r == gridcolor::Membership::BudgetExceeded) {
                o.result = {{"bit", nullptr}, {"outcome", "budget-exceeded"}};
                o.exit_code = kExitBudget;
            } else {
                o.result = {{"bit", r == gridcolor::Membership::Yes ? 1 : 0}};
            }
            return o;
        });
    }

    // ---- cache -------------------------------------------------------------
    {
        auto* cache = app.add_subcommand("cache", "persistent artifact store");
        cache->require_subcommand(1);

        auto* ls = cache->add_subcommand("ls", "list cached artifacts");
        arm(ls, "cache ls", [&g, &params]() {
            store::Store st(g.cache_dir);
            params = {{"cache_dir", g.cache_dir}};
            json entries = json::array();
            for (const auto& e : st.list()) {
                entries.push_back({{"kind", e.kind},
                                   {"params", e.params},
                                   {"bit_length", e.bit_length},
                                   {"tool_version", e.tool_version},
                                   {"created_at", e.created_at}});
            }
            Outcome o;
            o.result = {{"entries", entries}, {"count", entries.size()}};
            return o;
        });

        auto* verify = cache->add_subcommand("verify", "re-checksum every entry");
        arm(verify, "cache verify", [&g, &params]() {
            store::Store st(g.cache_dir);
            params = {{"cache_dir", g.cache_dir}};
            const auto r = st.verify();
            Outcome o;
            o.result = {{"checked", r.checked}, {"corrupt", r.corrupt}};
            o.exit_code = r.corrupt.empty() ? kExitOk : kExitContract;
            return o;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        const Outcome o = handler();
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        emit_report(g, command, params, o.result, ms, o.budget_used, o.cache_hits);
        return o.exit_code;
    } catch (const BudgetExceededError& e) {
        emit_report(g, command, params, {{"error", e.what()}}, 0.0, 0, 0);
        return kExitBudget;
    } catch (const ParseError& e) {
        emit_report(g, command, params, {{"error", e.what()}}, 0.0, 0, 0);
        return kExitUsage;
    } catch (const Error& e) {
        emit_report(g, command, params, {{"error", e.what()}}, 0.0, 0, 0);
        return kExitContract;
    }
}
