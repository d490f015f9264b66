#include "tal/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "tal/attention.hpp"
#include "tal/benchmarks.hpp"
#include "tal/classifier.hpp"
#include "tal/compiler.hpp"
#include "tal/datagen.hpp"
#include "tal/error.hpp"
#include "tal/semigroup.hpp"
#include "tal/suites.hpp"

namespace tal::cli {

namespace {

struct Options {
    std::string formula;
    std::string string;
    std::string dfa;
    std::string model;
    std::string alphabet;
    std::string name;
    std::string out;
    std::string lengths = "1..20";
    std::string balance = "balanced";
    std::string format = "json";
    int k = 2;
    int m = 2;
    std::uint64_t seed = 7;
    unsigned jobs = 1;
    std::size_t per_length = 100;
    std::size_t trials = 0;
    std::size_t position = 0;
    std::size_t exhaustive = 10;
    std::size_t spot_len = 100;
    std::size_t spot_count = 100;
    std::size_t size = 16;
    double gain = 20.0;
    std::size_t max_length = 10'000;
    bool global = false;
};

struct Result {
    Json payload;
    int code = kOk;
};

std::size_t element_budget() {
    const char* env = std::getenv("TAL_ELEMENT_BUDGET");
    if (!env || !*env) return kDefaultElementBudget;
    std::size_t value = 0;
    const std::string text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
        throw ContractError("TAL_ELEMENT_BUDGET must be a positive integer, got '" + text + "'");
    return value;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// --alphabet when given; otherwise {a, b}, the formula's atoms and the
// characters of `extra`, sorted.
Alphabet pick_alphabet(const Options& o, const std::optional<Formula>& f, const std::string& extra = {}) {
    if (!o.alphabet.empty()) return Alphabet(split_tokens(o.alphabet));
    std::set<std::string> tokens = {"a", "b"};
    if (f)
        for (const std::string& t : atoms(*f)) tokens.insert(t);
    for (char c : extra) tokens.insert(std::string(1, c));
    return Alphabet(std::vector<std::string>(tokens.begin(), tokens.end()));
}

Formula need_formula(const Options& o) {
    if (o.formula.empty()) throw ContractError("--formula is required");
    return parse_formula(o.formula);
}

Dfa need_dfa(const Options& o) {
    if (!o.dfa.empty()) return load_dfa(o.dfa).dfa;
    if (!o.name.empty()) return benchmark(o.name).dfa;
    throw ContractError("--dfa <path> or --name <benchmark> is required");
}

std::pair<std::size_t, std::size_t> parse_lengths(const std::string& text) {
    const auto dots = text.find("..");
    auto number = [&](const std::string& s) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw ContractError("--lengths expects a..b or n, got '" + text + "'");
        return v;
    };
    if (dots == std::string::npos) {
        const std::size_t n = number(text);
        return {n, n};
    }
    const std::size_t lo = number(text.substr(0, dots)), hi = number(text.substr(dots + 2));
    if (lo > hi) throw ContractError("--lengths range is empty: '" + text + "'");
    return {lo, hi};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw Error("write to " + path + " failed");
}

// Writes j to --out when given and returns a short note instead.
Json maybe_to_file(const Options& o, Json j, const char* what) {
    if (o.out.empty()) return j;
    write_file(o.out, j.dump(2) + "\n");
    return Json{{"wrote", o.out}, {"kind", what}};
}

Result cmd_eval(const Options& o) {
    const Formula f = need_formula(o);
    if (o.string.find(' ') != std::string::npos && o.alphabet.empty())
        throw ContractError("space-separated strings need --alphabet");
    const Alphabet sigma = pick_alphabet(o, f, o.alphabet.empty() ? o.string : std::string());
    const Word w = sigma.parse_word(o.string);
    if (o.position == 0) return {Json{{"accepts", accepts(f, sigma, w)}}};
    if (o.position > w.size() + 1)
        throw ContractError("--position must lie in 1.." + std::to_string(w.size() + 1));
    return {Json{{"position", o.position}, {"holds", evaluate(f, sigma, w, o.position)}}};
}

Result cmd_depth(const Options& o) {
    const Formula f = need_formula(o);
    return {Json{{"formula", f.to_string()}, {"depth", operator_depth(f)}}};
}

Result cmd_expand(const Options& o) {
    const Formula g = expand_bounded(need_formula(o));
    return {Json{{"formula", g.to_string()}, {"depth", operator_depth(g)}}};
}

Result cmd_rewrite_mod(const Options& o) {
    const Formula g = rewrite_with_mod(need_formula(o), o.k, o.m);
    return {Json{{"formula", g.to_string()}, {"k", o.k}, {"m", o.m}, {"depth", operator_depth(g)}}};
}

Result cmd_to_dfa(const Options& o) {
    const Formula f = need_formula(o);
    const Dfa d = minimize(ltl_to_dfa(f, pick_alphabet(o, f)));
    return {maybe_to_file(o, dfa_to_json(d), "dfa")};
}

Result cmd_dfa_minimize(const Options& o) { return {maybe_to_file(o, dfa_to_json(minimize(need_dfa(o))), "dfa")}; }

Result cmd_dfa_classify(const Options& o) {
    const Dfa d = need_dfa(o);
    return {to_json(classify_language(d, element_budget()), d.alphabet())};
}

Result cmd_dfa_config(const Options& o) {
    const Dfa d = need_dfa(o);
    const auto w = find_forbidden_config(d, element_budget());
    if (!w) return {Json{{"config", nullptr}}, kOk};
    return {to_json(*w, d.alphabet()), kNegative};
}

Result cmd_semigroup(const Options& o) {
    const Dfa d = need_dfa(o);
    return {to_json(Semigroup::of(minimize(d), element_budget()), d.alphabet())};
}

CompileParams compile_params(const Options& o) {
    CompileParams p;
    p.score_gain = o.gain;
    p.max_length = o.max_length;
    return p;
}

Result cmd_compile(const Options& o) {
    const Formula f = need_formula(o);
    const CompiledModel c = compile(f, pick_alphabet(o, f), compile_params(o));
    Json j = model_to_json(c.model);
    if (!o.out.empty()) {
        write_file(o.out, j.dump(2) + "\n");
        return {Json{{"wrote", o.out},
                     {"kind", "model"},
                     {"layers", c.model.layers.size()},
                     {"width", c.model.d},
                     {"census", to_json(mask_census(c.model))},
                     {"mask", classify_formula(f).to_string()}}};
    }
    return {std::move(j)};
}

Model need_model(const Options& o, const std::optional<Formula>& f) {
    if (!o.model.empty()) return load_model(o.model);
    if (f) return compile(*f, pick_alphabet(o, f), compile_params(o)).model;
    throw ContractError("--model <path> or --formula is required");
}

Result cmd_run_model(const Options& o) {
    std::optional<Formula> f;
    if (!o.formula.empty()) f = parse_formula(o.formula);
    const Model m = need_model(o, f);
    const Word w = m.alphabet.parse_word(o.string);
    return {Json{{"accepts", model_run(m, w)}}};
}

Result cmd_verify(const Options& o) {
    const Formula f = need_formula(o);
    const Model m = need_model(o, f);
    const VerifyReport r = verify_compiled(m, f, o.exhaustive, o.spot_len, o.spot_count, o.seed, o.jobs, true);
    Json j = to_json(r, m.alphabet);
    j["census"] = to_json(mask_census(m));
    return {std::move(j), r.ok() ? kOk : kNegative};
}

Result cmd_gen_data(const Options& o) {
    if (o.name.empty()) throw ContractError("--name <benchmark> is required");
    const auto [lo, hi] = parse_lengths(o.lengths);
    const Dataset d = generate_split(benchmark(o.name), lo, hi, o.per_length, parse_balance(o.balance), o.seed, o.jobs);
    if (o.out.empty()) {
        std::ostringstream text;
        write_dataset(d, text);
        return {Json(text.str())};  // printed verbatim
    }
    write_dataset(d, std::filesystem::path(o.out));
    std::size_t positives = 0;
    for (const DatasetRecord& r : d.records) positives += r.label;
    return {Json{{"wrote", o.out}, {"records", d.records.size()}, {"positives", positives}, {"manifest", to_json(d.manifest)}}};
}

Result cmd_benchmark_list(const Options&) {
    Json list = Json::array();
    for (const BenchmarkLanguage& lang : benchmarks()) {
        list.push_back({{"id", lang.id},
                        {"description", lang.description},
                        {"class", class_name(lang.fragment)},
                        {"alphabet", lang.alphabet().tokens()},
                        {"formula", lang.formula ? Json(lang.formula->to_string()) : Json(nullptr)},
                        {"minimal_states", lang.dfa.size()}});
    }
    return {Json{{"benchmarks", std::move(list)}}};
}

Result cmd_theorem_suite(const Options& o) {
    SuiteOptions so{o.trials, o.seed, o.jobs};
    std::vector<std::string> names;
    if (o.name.empty() || o.name == "all") names = suite_names();
    else names = {o.name};
    Json reports = Json::array();
    bool pass = true;
    for (const std::string& n : names) {
        const SuiteReport r = run_suite(n, so);
        pass = pass && r.pass;
        reports.push_back(to_json(r));
    }
    Json j = names.size() == 1 ? reports[0] : Json{{"pass", pass}, {"suites", std::move(reports)}};
    return {std::move(j), pass ? kOk : kNegative};
}

Result cmd_mask(const Options& o) {
    const Mask mask = o.global ? Mask::global() : Mask::local(o.k);
    Json rows = Json::array();
    for (const auto& row : materialize(mask, o.size)) rows.push_back(row);
    return {Json{{"mask", o.global ? "global" : "local"}, {"k", o.global ? Json(nullptr) : Json(o.k)}, {"size", o.size}, {"rows", std::move(rows)}}};
}

void print_text(const Json& j, std::ostream& out) {
    if (!j.is_object()) {
        out << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
        return;
    }
    for (const auto& [key, value] : j.items()) out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Temporal logic, automata and transformer compilation toolkit", "tal"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    using Handler = std::function<Result(const Options&)>;
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
        commands.emplace_back(sub, std::move(h));
        return sub;
    };
    auto formula = [&](CLI::App* s) { s->add_option("--formula", o.formula, "Formula in the ASCII syntax"); };
    auto alphabet = [&](CLI::App* s) {
        s->add_option("--alphabet", o.alphabet, "Comma-separated tokens (default: a, b and the formula's atoms)");
    };
    auto dfa = [&](CLI::App* s) {
        s->add_option("--dfa", o.dfa, "DFA JSON file");
        s->add_option("--name", o.name, "Benchmark language id instead of --dfa");
    };
    auto compile_flags = [&](CLI::App* s) {
        s->add_option("--gain", o.gain, "Attention score gain C");
        s->add_option("--max-length", o.max_length, "Longest input the margin check covers");
    };

    CLI::App* s = add("eval", "Evaluate a formula on a string", cmd_eval);
    formula(s);
    alphabet(s);
    s->add_option("--string", o.string, "Input string");
    s->add_option("--position", o.position, "Position to evaluate at (default: the end position)");
    formula(add("depth", "Operator depth", cmd_depth));
    formula(add("expand", "Rewrite Y^k and Ystar into Y and P", cmd_expand));
    s = add("rewrite-mod", "Express Y through Y^k and MOD predicates", cmd_rewrite_mod);
    formula(s);
    s->add_option("--k", o.k, "Window k");
    s->add_option("--m", o.m, "Modulus m");
    s = add("to-dfa", "Minimal DFA of a formula", cmd_to_dfa);
    formula(s);
    alphabet(s);
    s->add_option("--out", o.out, "Write the DFA here");
    s = add("dfa-minimize", "Minimize a DFA", cmd_dfa_minimize);
    dfa(s);
    s->add_option("--out", o.out, "Write the DFA here");
    dfa(add("dfa-classify", "Definability report of a regular language", cmd_dfa_classify));
    dfa(add("dfa-config", "Search for a forbidden configuration (exit 1 when found)", cmd_dfa_config));
    dfa(add("semigroup", "Transition semigroup of the minimal DFA", cmd_semigroup));
    s = add("compile", "Compile a formula into a transformer", cmd_compile);
    formula(s);
    alphabet(s);
    compile_flags(s);
    s->add_option("--out", o.out, "Write the model here");
    s = add("run-model", "Run a model on a string", cmd_run_model);
    s->add_option("--model", o.model, "Model JSON file");
    formula(s);
    alphabet(s);
    compile_flags(s);
    s->add_option("--string", o.string, "Input string");
    s = add("verify", "Check a compiled model against the formula (exit 1 on mismatch)", cmd_verify);
    formula(s);
    alphabet(s);
    compile_flags(s);
    s->add_option("--model", o.model, "Model JSON file (default: compile --formula)");
    s->add_option("--exhaustive", o.exhaustive, "Check every string up to this length");
    s->add_option("--spot-len", o.spot_len, "Length of random spot strings");
    s->add_option("--spot-count", o.spot_count, "Number of random spot strings");
    s->add_option("--seed", o.seed, "Seed for spot strings");
    s->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    s = add("gen-data", "Generate a JSONL dataset", cmd_gen_data);
    s->add_option("--name", o.name, "Benchmark language id");
    s->add_option("--lengths", o.lengths, "Length range a..b");
    s->add_option("--per-length", o.per_length, "Strings per length");
    s->add_option("--balance", o.balance, "uniform or balanced")->check(CLI::IsMember({"uniform", "balanced"}));
    s->add_option("--seed", o.seed, "Seed");
    s->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    s->add_option("--out", o.out, "Write the dataset here (default: stdout)");
    add("benchmark-list", "List the benchmark languages", cmd_benchmark_list);
    s = add("theorem-suite", "Run an invariant suite (exit 1 on failure)", cmd_theorem_suite);
    s->add_option("--name", o.name, "Suite name or all");
    s->add_option("--trials", o.trials, "Corpus size (default: the suite's own)");
    s->add_option("--seed", o.seed, "Seed");
    s->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    s = add("mask", "Materialize an attention mask as 0/1 rows", cmd_mask);
    s->add_option("--k", o.k, "Window of the local mask")->check(CLI::PositiveNumber);
    s->add_option("--size", o.size, "Number of positions");
    s->add_flag("--global", o.global, "Global mask instead of a local one");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "tal: " << e.what() << '\n';
        return kUsage;
    }

    for (auto& [sub, handler] : commands) {
        if (!sub->parsed()) continue;
        try {
            const Result r = handler(o);
            if (r.payload.is_string()) out << r.payload.get<std::string>();
            else if (o.format == "text") print_text(r.payload, out);
            else out << r.payload.dump(2) << '\n';
            return r.code;
        } catch (const ResourceError& e) {
            err << "tal: resource limit: " << e.what() << '\n';
            return kResource;
        } catch (const std::exception& e) {
            err << "tal: " << e.what() << '\n';
            return kUsage;
        }
    }
    return kUsage;
}

}  // namespace tal::cli
