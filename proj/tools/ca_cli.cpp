// Command-line front end: run and verify the shipped constructions, apply
// the acceleration and composition transforms, run triangle censuses, and
// render space-time diagrams.

#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ca/algorithms.hpp"
#include "ca/assembly.hpp"
#include "ca/build.hpp"
#include "ca/core.hpp"
#include "ca/timing.hpp"
#include "ca/transform.hpp"
#include "ca/triangles.hpp"

using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

std::vector<std::string> default_alphabet() { return {"a", "b"}; }

// letters of the input word, '-' excluded (it is the blank of h)
std::vector<std::string> alphabet_for(const std::string& input) {
    std::set<std::string> seen;
    for (char ch : input)
        if (ch != '-') seen.insert(std::string(1, ch));
    if (seen.empty()) return default_alphabet();
    return {seen.begin(), seen.end()};
}

ca::Construction named_construction(const std::string& name,
                                    const std::vector<std::string>& alphabet) {
    if (name == "slowed-mirror") return ca::slowed_mirror(alphabet);
    return ca::construction_by_name(name, alphabet);
}

ca::Word parse_word(const std::string& s) { return ca::word_from_string(s); }

std::vector<ca::MacroToken> parse_tokens(const std::string& spec, unsigned arity) {
    // "3,1,2" for values; "(6,12),(2,6)" for pairs
    std::vector<ca::MacroToken> out;
    std::string s = spec;
    if (arity == 1) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            out.push_back({{std::stoull(item)}});
        }
    } else {
        size_t i = 0;
        while (i < s.size()) {
            if (s[i] != '(') {
                ++i;
                continue;
            }
            size_t close = s.find(')', i);
            if (close == std::string::npos)
                throw ca::malformed_input_error("unbalanced token list");
            std::string pair = s.substr(i + 1, close - i - 1);
            size_t comma = pair.find(',');
            if (comma == std::string::npos)
                throw ca::malformed_input_error("pair tokens need two fields");
            out.push_back({{std::stoull(pair.substr(0, comma)),
                            std::stoull(pair.substr(comma + 1))}});
            i = close + 1;
        }
    }
    return out;
}

ca::SmallRule parse_rule(const std::string& spec) {
    if (spec.rfind("elementary:", 0) == 0)
        return ca::SmallRule::elementary(std::stoi(spec.substr(11)));
    if (spec.rfind("random:", 0) == 0) {
        std::string rest = spec.substr(7);
        size_t colon = rest.find(':');
        uint64_t seed = std::stoull(rest.substr(0, colon));
        int sigma = colon == std::string::npos ? 2 : std::stoi(rest.substr(colon + 1));
        return ca::SmallRule::random(sigma, seed);
    }
    // a JSON automaton file with a dense table over single-character states
    std::ifstream in(spec);
    if (!in) throw ca::malformed_input_error("cannot open rule file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    ca::Automaton a = ca::automaton_from_json(ss.str());
    size_t n = a.rule.dense_states();
    // census rules exclude the border: keep states other than '#'
    std::vector<ca::State> keep;
    for (ca::State s = 0; s < n; ++s)
        if (s != a.border) keep.push_back(s);
    if (keep.size() > 16) throw ca::budget_error("rule too large for the census");
    ca::SmallRule r;
    r.sigma = static_cast<int>(keep.size());
    r.table.assign(r.sigma * r.sigma * r.sigma, 0);
    for (int l = 0; l < r.sigma; ++l)
        for (int c = 0; c < r.sigma; ++c)
            for (int rr = 0; rr < r.sigma; ++rr) {
                ca::State v = a.rule(keep[l], keep[c], keep[rr]);
                int idx = 0;
                for (size_t k = 0; k < keep.size(); ++k)
                    if (keep[k] == v) idx = static_cast<int>(k);
                r.table[(l * r.sigma + c) * r.sigma + rr] = static_cast<uint8_t>(idx);
            }
    return r;
}

int run_verify_batch(const ca::Construction& c, const std::vector<ca::Word>& words,
                     bool as_json) {
    size_t passed = 0;
    for (const ca::Word& w : words) {
        ca::VerificationReport rep = ca::verify(c.automaton, c.contract, c.spec, w);
        if (!rep.pass) {
            if (as_json)
                std::cout << rep.to_json() << "\n";
            else
                std::cout << "FAIL " << ca::word_to_string(w) << ": "
                          << rep.first_violation << "\n";
            return kExitFail;
        }
        ++passed;
    }
    if (as_json)
        std::cout << json{{"pass", true}, {"words", passed}}.dump() << "\n";
    else
        std::cout << "pass (" << passed << " words)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cellular automata as parallel function computers"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    // ---- run ----
    auto* cmd_run = app.add_subcommand("run", "simulate a named algorithm");
    std::string run_algo, run_input, run_render = "text", run_out;
    int run_steps = -1;
    bool run_project = false;
    cmd_run->add_option("algorithm", run_algo)->required();
    cmd_run->add_option("--input", run_input)->required();
    cmd_run->add_option("--render", run_render)->check(CLI::IsMember({"text", "json"}));
    cmd_run->add_option("--steps", run_steps);
    cmd_run->add_option("--out", run_out);
    cmd_run->add_flag("--project", run_project,
                      "render the output projection instead of state labels");

    // ---- verify ----
    auto* cmd_verify = app.add_subcommand("verify", "check an algorithm's contract");
    std::string v_algo, v_lengths, v_words_file, v_random;
    cmd_verify->add_option("algorithm", v_algo)->required();
    cmd_verify->add_option("--lengths", v_lengths, "range a..b, exhaustive");
    cmd_verify->add_option("--words", v_words_file, "file with one word per line");
    cmd_verify->add_option("--random", v_random, "count:seed random words");

    // ---- speedup ----
    auto* cmd_speed = app.add_subcommand("speedup", "linear acceleration");
    std::string sp_ratio = "1/2", sp_bound = "1,0", sp_algo = "slowed-mirror",
                sp_input;
    size_t sp_geometry_n = 0;
    cmd_speed->add_option("--ratio", sp_ratio);
    cmd_speed->add_option("--bound", sp_bound, "t(n) = a*n + b as a,b");
    cmd_speed->add_option("--algorithm", sp_algo);
    cmd_speed->add_option("--input", sp_input);
    cmd_speed->add_option("--geometry", sp_geometry_n,
                          "emit the exact geometry report for this n");

    // ---- compose ----
    auto* cmd_comp = app.add_subcommand("compose", "compose two linear computers");
    std::string cp_first = "slowed-mirror", cp_second = "slowed-mirror", cp_input;
    cmd_comp->add_option("--first", cp_first);
    cmd_comp->add_option("--second", cp_second);
    cmd_comp->add_option("--input", cp_input)->required();

    // ---- assembly line ----
    std::string t_tokens, t_mode = "macro";
    unsigned t_width = 4;
    auto add_line = [&](const std::string& name) {
        auto* c = app.add_subcommand(name, name + " on the assembly line");
        c->add_option("--tokens", t_tokens)->required();
        c->add_option("--width", t_width);
        c->add_option("--mode", t_mode)->check(CLI::IsMember({"macro", "ca", "both"}));
        return c;
    };
    auto* cmd_sort = add_line("sort");
    auto* cmd_reorder = add_line("reorder");
    auto* cmd_components = add_line("components");

    // ---- census ----
    auto* cmd_census = app.add_subcommand("census", "uniform triangle census");
    std::string cs_rule = "elementary:110", cs_partition = "01", cs_mode = "exhaustive";
    size_t cs_n = 8;
    unsigned cs_workers = 1;
    cmd_census->add_option("--rule", cs_rule);
    cmd_census->add_option("--partition", cs_partition);
    cmd_census->add_option("--n", cs_n)->required();
    cmd_census->add_option("--mode", cs_mode, "exhaustive | sampled:COUNT:SEED");
    cmd_census->add_option("--workers", cs_workers);

    // ---- vseq ----
    auto* cmd_vseq = app.add_subcommand("vseq", "paper bound sequence");
    int vq_sigma = 2;
    size_t vq_upto = 8;
    cmd_vseq->add_option("--sigma", vq_sigma);
    cmd_vseq->add_option("--upto", vq_upto);

    // ---- render ----
    auto* cmd_render = app.add_subcommand("render", "render a trace file");
    std::string r_trace, r_format = "text", r_out;
    cmd_render->add_option("--trace", r_trace)->required();
    cmd_render->add_option("--format", r_format)->check(CLI::IsMember({"text", "svg"}));
    cmd_render->add_option("--out", r_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            ca::Construction c;
            try {
                c = named_construction(run_algo, alphabet_for(run_input));
            } catch (const ca::domain_error&) {
                std::cerr << "unknown algorithm: " << run_algo << "\n";
                return kExitUsage;
            }
            ca::Word w = parse_word(run_input);
            size_t T = run_steps >= 0 ? static_cast<size_t>(run_steps)
                                      : c.contract.horizon(w.size());
            ca::SpaceTimeDiagram d = ca::run(c.automaton, w, T);
            std::string payload;
            if (run_project) {
                std::ostringstream os;
                for (auto& row : d.rows) {
                    for (ca::State s : row) os << c.automaton.project(s);
                    os << "\n";
                }
                payload = os.str();
            } else {
                payload = run_render == "json" ? ca::diagram_to_json(c.automaton, d)
                                               : ca::diagram_to_text(c.automaton, d);
            }
            if (!run_out.empty()) {
                std::ofstream out(run_out);
                out << payload;
            } else {
                std::cout << payload;
            }
            return 0;
        }

        if (*cmd_verify) {
            ca::Construction c;
            try {
                c = named_construction(v_algo, default_alphabet());
            } catch (const ca::domain_error&) {
                std::cerr << "unknown algorithm: " << v_algo << "\n";
                return kExitUsage;
            }
            std::vector<ca::Word> words;
            if (!v_lengths.empty()) {
                size_t dots = v_lengths.find("..");
                size_t lo = std::stoull(v_lengths.substr(0, dots));
                size_t hi = dots == std::string::npos
                                ? lo
                                : std::stoull(v_lengths.substr(dots + 2));
                for (size_t len = lo; len <= hi; ++len) {
                    // exhaustive over the default two-letter alphabet
                    if (len > 20) throw ca::budget_error("exhaustive range too large");
                    for (size_t m = 0; m < (1ull << len); ++m) {
                        ca::Word w;
                        for (size_t i = 0; i < len; ++i)
                            w.push_back((m >> i) & 1 ? "b" : "a");
                        words.push_back(std::move(w));
                    }
                }
            } else if (!v_words_file.empty()) {
                std::ifstream in(v_words_file);
                if (!in) {
                    std::cerr << "cannot open " << v_words_file << "\n";
                    return kExitUsage;
                }
                std::string line;
                while (std::getline(in, line))
                    if (!line.empty()) words.push_back(parse_word(line));
            } else if (!v_random.empty()) {
                size_t colon = v_random.find(':');
                size_t count = std::stoull(v_random.substr(0, colon));
                uint64_t seed =
                    colon == std::string::npos ? 0 : std::stoull(v_random.substr(colon + 1));
                std::mt19937_64 rng(seed);
                for (size_t i = 0; i < count; ++i) {
                    size_t len = 1 + rng() % 200;
                    ca::Word w;
                    for (size_t k = 0; k < len; ++k) w.push_back(rng() & 1 ? "b" : "a");
                    words.push_back(std::move(w));
                }
            } else {
                std::cerr << "one of --lengths/--words/--random is required\n";
                return kExitUsage;
            }
            // drop words outside the domain (parity-restricted algorithms)
            std::vector<ca::Word> in_domain;
            for (auto& w : words)
                if (!w.empty() && c.spec.domain(w)) in_domain.push_back(w);
            if (in_domain.empty()) throw ca::domain_error("no words in the domain");
            return run_verify_batch(c, in_domain, as_json);
        }

        if (*cmd_speed) {
            ca::Rational ratio = ca::Rational::parse(sp_ratio);
            size_t comma = sp_bound.find(',');
            ca::TimeBound bound{ca::Rational::parse(sp_bound.substr(0, comma)),
                                comma == std::string::npos
                                    ? ca::Rational(0)
                                    : ca::Rational::parse(sp_bound.substr(comma + 1))};
            if (sp_geometry_n > 0) {
                json rep;
                rep["n"] = sp_geometry_n;
                rep["ratio"] = ratio.str();
                auto seg = ca::output_segment(sp_geometry_n, ratio, bound);
                rep["output_segment"] = {{"lo", seg.lo.str()},
                                         {"hi", seg.hi.str()},
                                         {"time", seg.time.str()}};
                ca::Mat2 prod = ca::Scaling::diagonal(ratio).matrix() *
                                ca::Scaling::anti_diagonal(ratio, sp_geometry_n).matrix();
                rep["matrix_product"] = {prod.a.str(), prod.b.str(), prod.c.str(),
                                         prod.d.str()};
                rep["uniform"] = prod == ca::Scaling::uniform(ratio, sp_geometry_n).matrix();
                json links = json::array();
                for (auto& [dc, dt] : ca::mapped_links(ca::Scaling::diagonal(ratio))) {
                    links.push_back({{"dc", dc.str()},
                                     {"dt", dt.str()},
                                     {"feasible", dc.abs() <= dt}});
                }
                rep["mapped_links"] = std::move(links);
                std::cout << rep.dump(2) << "\n";
                return 0;
            }
            ca::Construction base = named_construction(sp_algo, alphabet_for(sp_input));
            ca::SpedUp sp = ca::speedup(base.automaton, base.spec, bound, ratio);
            if (sp_input.empty()) {
                std::cout << "accelerated contract: " << sp.contract.describe() << "\n";
                return 0;
            }
            ca::Word w = parse_word(sp_input);
            ca::VerificationReport rep = ca::verify(sp.automaton, sp.contract, sp.spec, w);
            std::cout << (as_json ? rep.to_json()
                                  : (rep.pass ? "pass: " : "fail: ") +
                                        ca::word_to_string(rep.observed))
                      << "\n";
            return rep.pass ? 0 : kExitFail;
        }

        if (*cmd_comp) {
            ca::Construction a = named_construction(cp_first, alphabet_for(cp_input));
            ca::Construction b = named_construction(cp_second, alphabet_for(cp_input));
            ca::ComposedLinear comp = ca::compose_linear(a.automaton, a.contract, a.spec,
                                                         b.automaton, b.contract, b.spec);
            ca::Word w = parse_word(cp_input);
            ca::VerificationReport rep =
                ca::verify(comp.automaton, comp.contract, comp.spec, w);
            std::cout << (as_json ? rep.to_json()
                                  : (rep.pass ? "pass: " : "fail: ") +
                                        ca::word_to_string(rep.observed))
                      << "\n";
            return rep.pass ? 0 : kExitFail;
        }

        if (*cmd_sort || *cmd_reorder || *cmd_components) {
            ca::AgentProgram prog = *cmd_sort ? ca::sort_program(t_width)
                                   : *cmd_reorder
                                       ? ca::path_reorder_program(t_width)
                                       : ca::components_program(t_width);
            auto tokens = parse_tokens(t_tokens, prog.arity);
            ca::MacroResult res = ca::macro_run(prog, tokens);
            json out;
            out["output"] = res.output;
            if (t_mode != "ca") {
                json trace = json::array();
                for (auto& st : res.trace)
                    trace.push_back({{"agent", st.agent},
                                     {"before", st.agent_before},
                                     {"after", st.agent_after},
                                     {"in", st.token_in},
                                     {"out", st.token_out}});
                out["macro_trace"] = std::move(trace);
            }
            if (t_mode == "ca" || t_mode == "both") {
                ca::CompiledProgram cp = ca::compile_to_ca(prog, t_width);
                ca::Word input = ca::encode_tokens(cp.program, tokens);
                ca::SpaceTimeDiagram d =
                    ca::run(cp.automaton, input, cp.contract.horizon(input.size()));
                out["ca_output"] = ca::word_to_string(
                    ca::read_output(d, cp.contract, cp.automaton.project));
                out["ca_trace_rows"] = d.rows.size();
            }
            std::cout << (as_json ? out.dump() : out.dump(2)) << "\n";
            return 0;
        }

        if (*cmd_census) {
            ca::SmallRule rule = parse_rule(cs_rule);
            ca::Partition part;
            for (char ch : cs_partition)
                part.part.push_back(ch == '1' ? 1 : 0);
            if (part.part.size() != static_cast<size_t>(rule.sigma))
                throw ca::domain_error("partition must cover the rule's states");
            ca::CensusMode mode = ca::CensusMode::all();
            if (cs_mode.rfind("sampled:", 0) == 0) {
                std::string rest = cs_mode.substr(8);
                size_t colon = rest.find(':');
                mode = ca::CensusMode::sampled(
                    std::stoull(rest.substr(0, colon)),
                    colon == std::string::npos ? 0 : std::stoull(rest.substr(colon + 1)));
            }
            ca::CensusReport rep = ca::census(rule, part, cs_n, mode, cs_workers);
            std::cout << rep.to_json() << "\n";
            return 0;
        }

        if (*cmd_vseq) {
            std::cout << ca::v_sequence(vq_sigma, vq_upto).to_json() << "\n";
            return 0;
        }

        if (*cmd_render) {
            std::ifstream in(r_trace);
            if (!in) {
                std::cerr << "cannot open trace: " << r_trace << "\n";
                return kExitUsage;
            }
            json j;
            try {
                in >> j;
            } catch (const std::exception& e) {
                std::cerr << "malformed trace: " << e.what() << "\n";
                return kExitUsage;
            }
            std::string payload;
            if (r_format == "text") {
                std::ostringstream os;
                for (auto& row : j.at("rows")) {
                    bool single = true;
                    for (auto& cell : row)
                        if (cell.get<std::string>().size() != 1) single = false;
                    for (auto& cell : row)
                        os << (single ? cell.get<std::string>()
                                      : "[" + cell.get<std::string>() + "]");
                    os << "\n";
                }
                payload = os.str();
            } else {
                // rebuild a throwaway automaton-free rendering
                size_t width = j.at("width").get<size_t>();
                std::ostringstream svg;
                const int cell = 14;
                size_t rows = j.at("rows").size();
                svg << "<svg xmlns='http://www.w3.org/2000/svg' width='"
                    << width * cell + 2 << "' height='" << rows * cell + 2 << "'>\n";
                std::hash<std::string> h;
                size_t t = 0;
                for (auto& row : j.at("rows")) {
                    size_t c = 0;
                    for (auto& cl : row) {
                        size_t hue = h(cl.get<std::string>()) % 360;
                        svg << "<rect x='" << c * cell + 1 << "' y='" << t * cell + 1
                            << "' width='" << cell - 1 << "' height='" << cell - 1
                            << "' fill='hsl(" << hue << ",60%,70%)'/>\n";
                        ++c;
                    }
                    ++t;
                }
                // mark the synchronous output sites of the trace
                for (size_t c = 0; c < width; ++c)
                    if (width < rows)
                        svg << "<rect class='site' x='" << c * cell + 1 << "' y='"
                            << width * cell + 1 << "' width='" << cell - 1
                            << "' height='" << cell - 1
                            << "' fill='none' stroke='black' stroke-width='2'/>\n";
                svg << "</svg>\n";
                payload = svg.str();
            }
            if (!r_out.empty()) {
                std::ofstream out(r_out);
                out << payload;
            } else {
                std::cout << payload;
            }
            return 0;
        }
    } catch (const ca::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const ca::malformed_input_error& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ca::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return 0;
}
