// Command-line driver for the workbench library.  Every subcommand is a thin
// wrapper around library calls: it builds streams, runs bounded evaluations,
// and writes JSONL/JSON artifacts plus a flat config.txt for reproducibility.
//
// Exit codes: 0 success (including partial results with warnings recorded in
// summary.json), 2 usage errors, 3 corrupt input.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "workbench/fd_fields.hpp"
#include "workbench/grp2fld.hpp"
#include "workbench/hensel.hpp"
#include "workbench/scott.hpp"
#include "workbench/sigma3.hpp"

using namespace wb;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct corrupt_input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Run context: output directory, committed config, summary report
// ---------------------------------------------------------------------------

struct Run {
    std::string command;
    fs::path out;
    std::map<std::string, std::string> config;
    ordered_json results = ordered_json::object();
    std::vector<std::string> warnings;
};

fs::path resolve_out(const std::string& cmd, const std::string& flag) {
    if (!flag.empty()) return fs::path(flag);
    const char* root = std::getenv("WORKBENCH_OUT");
    return fs::path(root ? root : "wbench-out") / cmd;
}

Run make_run(const std::string& cmd, const std::string& out_flag) {
    Run r;
    r.command = cmd;
    r.out = resolve_out(cmd, out_flag);
    fs::create_directories(r.out);
    r.config["command"] = cmd;
    return r;
}

void cfg(Run& r, const std::string& k, const std::string& v) { r.config[k] = v; }
void cfg(Run& r, const std::string& k, u64 v) { r.config[k] = std::to_string(v); }

int finish(Run& r) {
    {
        std::ofstream c(r.out / "config.txt");
        for (const auto& [k, v] : r.config) c << k << "=" << v << "\n";
    }
    ordered_json s;
    s["command"] = r.command;
    s["results"] = r.results;
    s["warnings"] = r.warnings;
    std::ofstream f(r.out / "summary.json");
    f << s.dump(2) << "\n";
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Input parsing helpers
// ---------------------------------------------------------------------------

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> out;
    for (char c : s) {
        if (c != '0' && c != '1') throw corrupt_input_error("bit strings must be over {0,1}");
        out.push_back(c - '0');
    }
    return out;
}

std::set<u64> parse_u64_set(const std::string& s) {
    std::set<u64> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        try {
            out.insert(std::stoull(item));
        } catch (const std::exception&) {
            throw corrupt_input_error("bad number in list: " + item);
        }
    }
    return out;
}

DivisibilityType parse_type_or_die(const std::string& lit) {
    try {
        return parse_type_literal(lit);
    } catch (const std::exception& e) {
        throw corrupt_input_error(std::string("bad type literal '") + lit + "': " + e.what());
    }
}

// Group stream from one or more type literals; rank = number of literals.
StreamPtr build_group(const std::vector<std::string>& literals) {
    if (literals.empty()) throw corrupt_input_error("at least one --group literal required");
    std::vector<DivisibilityType> types;
    for (const auto& l : literals) types.push_back(parse_type_or_die(l));
    if (types.size() == 1) return rank1_from_type(types[0]);
    return group_product(std::move(types));
}

// Basis codes for the canonical generators (1, or the unit vectors) at the
// warm-up stage; nullopt when the budget did not commit them yet.
std::optional<std::vector<u64>> group_basis(const StreamPtr& g, std::size_t rank, u64 warm) {
    std::vector<u64> basis;
    if (rank == 1) {
        auto vs = std::dynamic_pointer_cast<ValueStream<Rational>>(g);
        auto c = vs->code_of(Rational(1), warm);
        if (!c) return std::nullopt;
        basis.push_back(*c);
    } else {
        auto vs = std::dynamic_pointer_cast<ValueStream<QrVector>>(g);
        for (std::size_t i = 0; i < rank; ++i) {
            QrVector u{std::vector<Rational>(rank, Rational(0))};
            u.coords[i] = Rational(1);
            auto c = vs->code_of(u, warm);
            if (!c) return std::nullopt;
            basis.push_back(*c);
        }
    }
    return basis;
}

// Field presets with their tuned evaluation windows (largest inverse-closed
// committed code prefixes) and warm-up stages.
struct FieldPreset {
    StreamPtr stream;
    std::vector<u64> basis;
    u64 scan_cap = 0;
    u64 warm = 0;
};

FieldPreset build_field(const std::string& name) {
    if (name == "q") {
        FieldPreset p;
        p.stream = rationals_field_stream(8);
        p.scan_cap = 7;
        p.warm = 100;
        return p;
    }
    if (name == "qt") {
        FieldPreset p;
        auto q = rationals_field_stream(8);
        auto qt = pure_transcendental(q, 16);
        auto c = qt->code_of(RatFunc<CycloElt>::variable(), 2400);
        if (!c) throw corrupt_input_error("transcendental generator not committed");
        p.stream = qt;
        p.basis = {*c};
        p.scan_cap = 9;
        p.warm = 2400;
        return p;
    }
    if (name == "r3") {
        FieldPreset p;
        auto r3 = radical_field({3});
        auto c = r3->code_of(RadElt::t(), 800);
        if (!c) throw corrupt_input_error("radical generator not committed");
        p.stream = r3;
        p.basis = {*c};
        p.scan_cap = 13;
        p.warm = 800;
        return p;
    }
    throw corrupt_input_error("unknown field preset: " + name);
}

void write_events_file(const DiagramStream& d, u64 stages, u64 cap, const fs::path& file) {
    std::ofstream os(file);
    write_diagram_events(d, stages, os, cap);
}

ordered_json audit_json(const AuditReport& rep) {
    ordered_json j;
    j["clean"] = rep.clean();
    j["queries"] = rep.queries;
    j["violations"] = rep.violations;
    return j;
}

// ---------------------------------------------------------------------------
// Custom Sigma_3 relations: postfix programs over (x, y, z, A, B)
// ---------------------------------------------------------------------------

// Tokens: integer literals; x y z; Ay Az By Bz (stream reads); binary ops
// + - * == <= and or; unary not.  The program leaves one value on the stack;
// R holds iff it is nonzero.  Subtraction saturates at 0, so programs stay
// total over u64.
Sigma3Relation custom_relation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corrupt_input_error("cannot read relation program: " + path);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t)
        if (t[0] != '#') toks.push_back(t);
    if (toks.empty()) throw corrupt_input_error("empty relation program");
    for (const auto& tok : toks) {
        static const std::set<std::string> known = {"x", "y", "z", "Ay", "Az", "By", "Bz", "+",
                                                    "-", "*", "==", "<=", "and", "or", "not"};
        if (known.count(tok)) continue;
        try {
            (void)std::stoull(tok);
        } catch (const std::exception&) {
            throw corrupt_input_error("bad token in relation program: " + tok);
        }
    }
    auto eval = [toks](const BitStream& A, const BitStream& B, u64 x, u64 y, u64 z) {
        std::vector<u64> st;
        auto pop = [&st]() {
            if (st.empty()) throw corrupt_input_error("relation program stack underflow");
            u64 v = st.back();
            st.pop_back();
            return v;
        };
        for (const auto& tok : toks) {
            if (tok == "x") st.push_back(x);
            else if (tok == "y") st.push_back(y);
            else if (tok == "z") st.push_back(z);
            else if (tok == "Ay") st.push_back(static_cast<u64>(A.at(y)));
            else if (tok == "Az") st.push_back(static_cast<u64>(A.at(z)));
            else if (tok == "By") st.push_back(static_cast<u64>(B.at(y)));
            else if (tok == "Bz") st.push_back(static_cast<u64>(B.at(z)));
            else if (tok == "not") st.push_back(pop() == 0 ? 1 : 0);
            else if (tok == "+" || tok == "-" || tok == "*" || tok == "==" || tok == "<=" ||
                     tok == "and" || tok == "or") {
                u64 b = pop(), a = pop();
                if (tok == "+") st.push_back(a + b);
                else if (tok == "-") st.push_back(a >= b ? a - b : 0);
                else if (tok == "*") st.push_back(a * b);
                else if (tok == "==") st.push_back(a == b ? 1 : 0);
                else if (tok == "<=") st.push_back(a <= b ? 1 : 0);
                else if (tok == "and") st.push_back((a != 0 && b != 0) ? 1 : 0);
                else st.push_back((a != 0 || b != 0) ? 1 : 0);
            } else {
                st.push_back(std::stoull(tok));
            }
        }
        if (st.size() != 1) throw corrupt_input_error("relation program must leave one value");
        return st[0] != 0;
    };
    Sigma3Relation rel;
    rel.name = "custom";
    rel.holds = eval;
    rel.use_bound = [](u64, u64 y, u64 z) { return std::max(y, z) + 1; };
    // validate once on a dummy query so malformed programs fail fast
    rel.holds(BitStream::constant(0), BitStream::constant(0), 0, 0, 0);
    return rel;
}

OracleFamily load_oracles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw corrupt_input_error("cannot read oracle file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw corrupt_input_error(std::string("bad oracle file: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw corrupt_input_error("oracle file must be a JSON array");
    OracleFamily fam;
    for (const auto& s : j) {
        std::vector<int> pre, per;
        for (const auto& b : s.value("prefix", ordered_json::array())) pre.push_back(b.get<int>());
        for (const auto& b : s.value("period", ordered_json::array())) per.push_back(b.get<int>());
        if (per.empty()) per.push_back(0);
        try {
            fam.streams.emplace_back(pre, per);
        } catch (const std::exception& e) {
            throw corrupt_input_error(std::string("bad oracle stream: ") + e.what());
        }
    }
    return fam;
}

// ---------------------------------------------------------------------------
// Subcommand options
// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string out;
    u64 seed = 0;
};

struct ScottOpts : CommonOpts {
    std::vector<std::string> group, on_group;
    std::string field, on_field;
    u64 stages = 0, generator_bound = 0, witness_cap = 0, warm = 0;
    u64 check_stage = 24, coeff_bound = 2;
};

struct CompareOpts : CommonOpts {
    std::string a, b, corpus;
    u64 pair = 0;
    bool pair_set = false;
    u64 primes = 64;
};

struct DumpOpts : CommonOpts {  // g2f / henselize / transcend share the shape
    std::vector<std::string> group;
    u64 stages = 0, code_cap = 16, precision = 8;
};

struct E0Opts : CommonOpts {
    std::string prefix, period = "0", prefix2, period2;
    bool second = false;
    u64 stages = 400, code_cap = 16, primes = 8, iso_primes = 32;
};

struct CofOpts : CommonOpts {
    std::string excluded, members;
    u64 stages = 400, code_cap = 16, primes = 8;
};

struct InfOpts : CommonOpts {
    std::string excluded, members;
    u64 stages = 12, pace = 3, code_cap = 12, polys = 12, root_cap = 24;
};

struct RootsetOpts : CommonOpts {
    std::string field = "q";
    u64 stages = 0, polys = 30, code_cap = 48, list_elements = 5;
};

struct AuditOpts : CommonOpts {
    std::vector<std::string> group;
    std::string field;
    u64 stages = 40, code_cap = 8;
};

struct ReduceOpts : CommonOpts {
    std::string relation = "e0", program, oracles;
    u64 stages = 20000, indices = 8, k_bound = 6;
    u64 emit_bits = 2048, audit_triples = 50;
};

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int run_scott(const ScottOpts& o) {
    bool is_field = !o.field.empty();
    if (is_field == !o.group.empty()) {
        std::cerr << "scott: give exactly one of --group / --field\n";
        return 2;
    }
    Run r = make_run("scott", o.out);
    cfg(r, "seed", o.seed);
    SentencePtr sentence;
    StreamPtr target;
    u64 stages, gb, cap;
    if (is_field) {
        FieldPreset self = build_field(o.field);
        stages = o.stages ? o.stages : 6000;
        gb = o.generator_bound ? o.generator_bound : 2400;
        cfg(r, "field", o.field);
        u64 self_cap = o.witness_cap ? o.witness_cap : self.scan_cap;
        u64 warm = o.warm ? o.warm : self.warm;
        sentence = scott_fd(self.stream, self.basis, warm, self_cap);
        std::string on = o.on_field.empty() ? o.field : o.on_field;
        cfg(r, "on", on);
        FieldPreset tgt = build_field(on);
        target = tgt.stream;
        cap = o.witness_cap ? o.witness_cap : tgt.scan_cap;
    } else {
        stages = o.stages ? o.stages : 600000;
        gb = o.generator_bound ? o.generator_bound : 600;
        cap = o.witness_cap ? o.witness_cap : 10;
        u64 warm = o.warm ? o.warm : 400;
        StreamPtr self = build_group(o.group);
        std::string lits;
        for (const auto& l : o.group) lits += (lits.empty() ? "" : ";") + l;
        cfg(r, "group", lits);
        auto basis = group_basis(self, o.group.size(), warm);
        if (!basis) {
            r.warnings.push_back("basis generators not committed by the warm-up stage");
            r.results["verdict"] = "unknown";
            return finish(r);
        }
        sentence = scott_tfab(self, *basis, o.check_stage, o.coeff_bound, cap);
        target = o.on_group.empty() ? build_group(o.group) : build_group(o.on_group);
        std::string on;
        for (const auto& l : (o.on_group.empty() ? o.group : o.on_group))
            on += (on.empty() ? "" : ";") + l;
        cfg(r, "on", on);
    }
    cfg(r, "stages", stages);
    cfg(r, "generator-bound", gb);
    cfg(r, "witness-cap", cap);
    {
        std::ofstream f(r.out / "sentence.json");
        f << sentence_json(sentence, gb).dump(2) << "\n";
    }
    u64 wbnd = std::min<u64>(target->code_bound(gb), cap);
    Verdict v = eval_bounded(sentence, *target, stages, wbnd, gb);
    r.results["verdict"] = verdict_name(v);
    r.results["witness_bound"] = wbnd;
    if (v == Verdict::Unknown)
        r.warnings.push_back("verdict unknown at the configured budgets");
    std::cout << "verdict: " << verdict_name(v) << "\n";
    return finish(r);
}

int run_compare(const CompareOpts& o) {
    Run r = make_run("compare", o.out);
    std::string lit_a = o.a, lit_b = o.b;
    if (!o.corpus.empty()) {
        std::ifstream in(o.corpus);
        if (!in) throw corrupt_input_error("cannot read corpus: " + o.corpus);
        ordered_json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw corrupt_input_error(std::string("bad corpus file: ") + e.what());
        }
        const auto& pairs = j.at("rank1_pairs");
        if (!o.pair_set || o.pair >= pairs.size())
            throw corrupt_input_error("--pair index out of range");
        lit_a = pairs[o.pair].at("a").get<std::string>();
        lit_b = pairs[o.pair].at("b").get<std::string>();
        r.results["expected"] =
            pairs[o.pair].at("iso").get<bool>() ? "isomorphic" : "non-isomorphic";
    }
    if (lit_a.empty() && lit_b.empty()) {
        std::cerr << "compare: give --a/--b literals or --corpus with --pair\n";
        return 2;
    }
    cfg(r, "a", lit_a);
    cfg(r, "b", lit_b);
    cfg(r, "primes", o.primes);
    cfg(r, "seed", o.seed);
    auto verdict = iso_rank1(parse_type_or_die(lit_a), parse_type_or_die(lit_b), o.primes);
    r.results["verdict"] = verdict.name();
    r.results["witness"] = verdict.witness;
    if (!verdict.isomorphic() && !verdict.non_isomorphic())
        r.warnings.push_back("isomorphism status unknown at the scanned bound");
    std::cout << "verdict: " << verdict.name() << " (" << verdict.witness << ")\n";
    return finish(r);
}

int run_g2f(const DumpOpts& o) {
    Run r = make_run("g2f", o.out);
    u64 stages = o.stages ? o.stages : 400;
    cfg(r, "stages", stages);
    cfg(r, "code-cap", o.code_cap);
    auto g = build_group(o.group);
    std::string lits;
    for (const auto& l : o.group) lits += (lits.empty() ? "" : ";") + l;
    cfg(r, "group", lits);
    auto f = phi_object(g);
    write_events_file(*f, stages, o.code_cap, r.out / "field.jsonl");
    auto rep = audit_stream(*f, stages, 8);
    r.results["audit"] = audit_json(rep);
    r.results["codes"] = f->code_bound(stages);
    std::cout << "emitted field diagram: " << f->code_bound(stages) << " codes, audit "
              << (rep.clean() ? "clean" : "VIOLATIONS") << "\n";
    return finish(r);
}

int run_henselize(const DumpOpts& o) {
    Run r = make_run("henselize", o.out);
    u64 stages = o.stages ? o.stages : 12;
    cfg(r, "stages", stages);
    cfg(r, "code-cap", o.code_cap);
    cfg(r, "precision", o.precision);
    HenselConfig hc;
    hc.exact_per_stage = 8;
    hc.lift_per_stage = 600;
    hc.closure_window_growth = 1;
    hc.degree_cap = 4;
    hc.height_cap = 2;
    hc.max_lift_degree = 2;
    auto h = henselize_rationals(hc);
    write_events_file(*h, stages, o.code_cap, r.out / "hensel.jsonl");
    auto rep = audit_stream(*h, stages, 6);
    r.results["audit"] = audit_json(rep);
    r.results["codes"] = h->code_bound(stages);
    // demo lift: the square root of 1 + t as a cached series
    using RQ = RatFunc<Rational>;
    Poly<RQ> f(std::vector<RQ>{-(RQ::constant(Rational(1)) + RQ::variable()), RQ(),
                               RQ::constant(Rational(1))});
    auto root = HElem<Rational>::lift(f, Rational(1));
    r.results["sqrt_1_plus_t"] = root.laurent(static_cast<long>(o.precision)).str();
    std::cout << "sqrt(1+t) = " << root.laurent(static_cast<long>(o.precision)).str() << "\n";
    return finish(r);
}

int run_transcend(const DumpOpts& o) {
    Run r = make_run("transcend", o.out);
    u64 stages = o.stages ? o.stages : 2400;
    cfg(r, "stages", stages);
    cfg(r, "code-cap", o.code_cap);
    auto f = pure_transcendental(rationals_field_stream(8), 16);
    write_events_file(*f, stages, o.code_cap, r.out / "field.jsonl");
    auto rep = audit_stream(*f, stages, 8);
    r.results["audit"] = audit_json(rep);
    r.results["codes"] = f->code_bound(stages);
    std::cout << "emitted Q(t) diagram: " << f->code_bound(stages) << " codes, audit "
              << (rep.clean() ? "clean" : "VIOLATIONS") << "\n";
    return finish(r);
}

int run_e0(const E0Opts& o) {
    Run r = make_run("e0", o.out);
    cfg(r, "prefix", o.prefix);
    cfg(r, "period", o.period);
    cfg(r, "stages", o.stages);
    BitStream f(parse_bits(o.prefix), parse_bits(o.period));
    auto g = e0_to_tfab1(f);
    write_events_file(*g, o.stages, o.code_cap, r.out / "group.jsonl");
    r.results["type_prefix"] = format_type_prefix(DivisibilityType::from_bits(f), o.stages, o.primes);
    if (o.second || !o.prefix2.empty()) {
        cfg(r, "prefix2", o.prefix2);
        cfg(r, "period2", o.period2);
        BitStream f2(parse_bits(o.prefix2), parse_bits(o.period2));
        bool eq = e0_equivalent(f, f2);
        auto verdict = iso_rank1(DivisibilityType::from_bits(f), DivisibilityType::from_bits(f2),
                                 o.iso_primes);
        r.results["e0_equivalent"] = eq;
        r.results["iso_verdict"] = verdict.name();
        std::cout << "e0: " << (eq ? "equivalent" : "inequivalent") << ", groups "
                  << verdict.name() << "\n";
    } else {
        std::cout << "type prefix: " << r.results["type_prefix"].get<std::string>() << "\n";
    }
    return finish(r);
}

Enumeration enumeration_from(const std::string& excluded, const std::string& members) {
    if (excluded.empty() == members.empty())
        throw corrupt_input_error("give exactly one of --excluded / --members");
    if (!excluded.empty()) {
        auto ex = parse_u64_set(excluded);
        return Enumeration::decidable([ex](u64 k) { return !ex.count(k); });
    }
    auto in = parse_u64_set(members);
    return Enumeration::decidable([in](u64 k) { return in.count(k) > 0; });
}

int run_cof(const CofOpts& o) {
    Run r = make_run("cof", o.out);
    cfg(r, "excluded", o.excluded);
    cfg(r, "members", o.members);
    cfg(r, "stages", o.stages);
    Enumeration w = enumeration_from(o.excluded, o.members);
    auto g = cof_to_tfab1(w);
    write_events_file(*g, o.stages, o.code_cap, r.out / "group.jsonl");
    r.results["type_prefix"] =
        format_type_prefix(DivisibilityType::from_enumeration(w), o.stages, o.primes);
    r.results["cofinite"] = !o.excluded.empty();
    std::cout << "type prefix: " << r.results["type_prefix"].get<std::string>() << "\n";
    return finish(r);
}

int run_inf_field(const InfOpts& o) {
    Run r = make_run("inf-field", o.out);
    cfg(r, "excluded", o.excluded);
    cfg(r, "members", o.members);
    cfg(r, "stages", o.stages);
    cfg(r, "pace", o.pace);
    Enumeration w = enumeration_from(o.excluded, o.members);
    auto f = inf_reduction(w, o.pace, 1);
    write_events_file(*f, o.stages, o.code_cap, r.out / "field.jsonl");
    auto roots = root_set(*f, o.stages, o.polys, o.root_cap);
    r.results["root_set"] = std::vector<u64>(roots.begin(), roots.end());
    r.results["infinite_input"] = !o.excluded.empty();
    std::cout << "confirmed roots: " << roots.size() << " of " << o.polys << " polynomials\n";
    return finish(r);
}

int run_rootset(const RootsetOpts& o) {
    Run r = make_run("rootset", o.out);
    cfg(r, "field", o.field);
    StreamPtr f;
    u64 stages = o.stages;
    if (o.field == "tower") {
        f = example_field_F(3, 1);
        if (!stages) stages = 12;
    } else {
        f = build_field(o.field).stream;
        if (!stages) stages = 400;
    }
    cfg(r, "stages", stages);
    cfg(r, "polys", o.polys);
    auto roots = root_set(*f, stages, o.polys, o.code_cap);
    r.results["root_set"] = std::vector<u64>(roots.begin(), roots.end());
    std::ostringstream line;
    for (u64 n : roots) line << (line.tellp() > 0 ? "," : "") << n;
    std::cout << "root set: {" << line.str() << "}\n";
    if (o.field == "r3") {
        auto vs = std::dynamic_pointer_cast<ValueStream<RadElt>>(f);
        std::cout << "level 3: t = u^3\n";
        std::vector<std::string> elems;
        u64 n = std::min<u64>(o.list_elements, vs->code_bound(stages));
        for (u64 c = 0; c < n; ++c) {
            elems.push_back(vs->value(c).str());
            std::cout << "  [" << c << "] " << elems.back() << "\n";
        }
        r.results["elements"] = elems;
    }
    std::ofstream rs(r.out / "rootset.json");
    rs << r.results.dump(2) << "\n";
    return finish(r);
}

int run_audit(const AuditOpts& o) {
    if (o.group.empty() == o.field.empty()) {
        std::cerr << "audit: give exactly one of --group / --field\n";
        return 2;
    }
    Run r = make_run("audit", o.out);
    cfg(r, "stages", o.stages);
    cfg(r, "code-cap", o.code_cap);
    StreamPtr d;
    if (!o.group.empty()) {
        d = build_group(o.group);
        std::string lits;
        for (const auto& l : o.group) lits += (lits.empty() ? "" : ";") + l;
        cfg(r, "group", lits);
    } else {
        d = build_field(o.field).stream;
        cfg(r, "field", o.field);
    }
    auto rep = audit_stream(*d, o.stages, o.code_cap);
    r.results["audit"] = audit_json(rep);
    {
        std::ofstream f(r.out / "audit.json");
        f << audit_json(rep).dump(2) << "\n";
    }
    if (!rep.clean()) r.warnings.push_back("audit reported violations");
    std::cout << "audit: " << (rep.clean() ? "clean" : "VIOLATIONS") << " (" << rep.queries
              << " queries)\n";
    return finish(r);
}

int run_reduce_sigma3(const ReduceOpts& o) {
    Run r = make_run("reduce-sigma3", o.out);
    cfg(r, "relation", o.relation);
    cfg(r, "stages", o.stages);
    cfg(r, "indices", o.indices);
    cfg(r, "k-bound", o.k_bound);
    cfg(r, "seed", o.seed);
    Sigma3Relation rel;
    if (o.relation == "e0") rel = rel_e0();
    else if (o.relation == "const-true") rel = rel_const_true();
    else if (o.relation == "const-false") rel = rel_const_false();
    else if (o.relation == "custom") {
        if (o.program.empty()) {
            std::cerr << "reduce-sigma3: --relation custom requires --program\n";
            return 2;
        }
        cfg(r, "program", o.program);
        rel = custom_relation(o.program);
    } else {
        std::cerr << "reduce-sigma3: unknown relation " << o.relation << "\n";
        return 2;
    }
    OracleFamily fam = o.oracles.empty() ? e0_demo_family() : load_oracles(o.oracles);
    cfg(r, "oracles", o.oracles.empty() ? std::string("shipped-8") : o.oracles);
    auto ctx = make_family(std::move(fam), std::move(rel));
    auto jn = sigma3_reduce(ctx, o.indices);

    for (u64 l = 0; l < o.indices; ++l) {
        std::ofstream os(r.out / ("group_" + std::to_string(l) + ".jsonl"));
        write_raw_bits(*jn->project(l), o.stages, o.emit_bits, os);
    }
    if (o.stages > 0) ctx->scheduler().run_to(o.stages - 1);
    {
        std::ofstream chips(r.out / "chips.log");
        for (const Chip& c : ctx->scheduler().log())
            chips << c.stage << "," << c.m << "," << c.n << "," << c.value << "\n";
    }
    std::vector<Triple> sample;
    for (u64 m = 0; m < o.indices && sample.size() < o.audit_triples; ++m)
        for (u64 n = m + 1; n < o.indices && sample.size() < o.audit_triples; ++n)
            for (u64 k = 0; k < o.k_bound && sample.size() < o.audit_triples; ++k)
                sample.push_back({m, n, k});
    auto rep = sigma3_audit(*ctx, o.stages, sample, o.indices);
    ordered_json aj;
    aj["clean"] = rep.clean();
    aj["stages_checked"] = rep.stages_checked;
    aj["triples_checked"] = rep.triples_checked;
    aj["violations"] = rep.violations;
    {
        std::ofstream f(r.out / "audit.json");
        f << aj.dump(2) << "\n";
    }
    r.results["audit"] = aj;
    if (!rep.clean()) r.warnings.push_back("sigma3 audit reported violations");
    std::cout << "emitted " << o.indices << " group diagrams, " << ctx->scheduler().processed()
              << " chips, audit " << (rep.clean() ? "clean" : "VIOLATIONS") << "\n";
    return finish(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench: bounded evaluations and diagram emission"};
    app.require_subcommand(1);

    ScottOpts scott_o;
    auto* sc = app.add_subcommand("scott", "build and evaluate Scott sentences");
    sc->add_option("--group", scott_o.group, "group type literal (repeat for higher rank)");
    sc->add_option("--field", scott_o.field, "field preset: q, qt, r3");
    sc->add_option("--on-group", scott_o.on_group, "evaluate on this group instead of self");
    sc->add_option("--on-field", scott_o.on_field, "evaluate on this field preset");
    sc->add_option("--stages", scott_o.stages, "evaluation stage");
    sc->add_option("--generator-bound", scott_o.generator_bound, "generator budget");
    sc->add_option("--witness-bound", scott_o.witness_cap, "witness window cap");
    sc->add_option("--warm", scott_o.warm, "warm-up stage for basis discovery");
    sc->add_option("--check-stage", scott_o.check_stage, "basis validation stage");
    sc->add_option("--coeff-bound", scott_o.coeff_bound, "basis dependence coefficient bound");
    sc->add_option("--seed", scott_o.seed, "seed (recorded)");
    sc->add_option("--out", scott_o.out, "output directory");

    CompareOpts cmp_o;
    auto* cp = app.add_subcommand("compare", "bounded rank-1 isomorphism check");
    cp->add_option("--a", cmp_o.a, "first type literal");
    cp->add_option("--b", cmp_o.b, "second type literal");
    cp->add_option("--corpus", cmp_o.corpus, "corpus manifest JSON");
    cp->add_option("--pair", cmp_o.pair, "rank1_pairs index in the corpus")
        ->each([&](const std::string&) { cmp_o.pair_set = true; });
    cp->add_option("--stages", cmp_o.primes, "scanned prime bound");
    cp->add_option("--seed", cmp_o.seed, "seed (recorded)");
    cp->add_option("--out", cmp_o.out, "output directory");

    DumpOpts g2f_o;
    auto* gf = app.add_subcommand("g2f", "group-to-field functor output");
    gf->add_option("--group", g2f_o.group, "group type literal (repeatable)")->required();
    gf->add_option("--stages", g2f_o.stages, "emission stage");
    gf->add_option("--witness-bound", g2f_o.code_cap, "emission code cap");
    gf->add_option("--seed", g2f_o.seed, "seed (recorded)");
    gf->add_option("--out", g2f_o.out, "output directory");

    DumpOpts hen_o;
    auto* hz = app.add_subcommand("henselize", "henselization of Q(t)");
    hz->add_option("--stages", hen_o.stages, "emission stage");
    hz->add_option("--witness-bound", hen_o.code_cap, "emission code cap");
    hz->add_option("--precision", hen_o.precision, "series precision for the demo lift");
    hz->add_option("--seed", hen_o.seed, "seed (recorded)");
    hz->add_option("--out", hen_o.out, "output directory");

    DumpOpts tr_o;
    auto* tc = app.add_subcommand("transcend", "pure transcendental extension Q(t)");
    tc->add_option("--stages", tr_o.stages, "emission stage");
    tc->add_option("--witness-bound", tr_o.code_cap, "emission code cap");
    tc->add_option("--seed", tr_o.seed, "seed (recorded)");
    tc->add_option("--out", tr_o.out, "output directory");

    E0Opts e0_o;
    auto* e0c = app.add_subcommand("e0", "eventual-agreement reduction to rank-1 groups");
    e0c->add_option("--prefix", e0_o.prefix, "prefix bits of the stream");
    e0c->add_option("--period", e0_o.period, "period bits of the stream");
    e0c->add_option("--prefix2", e0_o.prefix2, "prefix bits of a second stream");
    e0c->add_option("--period2", e0_o.period2, "period bits of a second stream")
        ->each([&](const std::string&) { e0_o.second = true; });
    e0c->add_option("--stages", e0_o.stages, "emission stage");
    e0c->add_option("--witness-bound", e0_o.code_cap, "emission code cap");
    e0c->add_option("--seed", e0_o.seed, "seed (recorded)");
    e0c->add_option("--out", e0_o.out, "output directory");

    CofOpts cof_o;
    auto* cf = app.add_subcommand("cof", "cofiniteness reduction to rank-1 groups");
    cf->add_option("--excluded", cof_o.excluded, "complement of W (cofinite W)");
    cf->add_option("--members", cof_o.members, "W as an explicit finite set");
    cf->add_option("--stages", cof_o.stages, "emission stage");
    cf->add_option("--witness-bound", cof_o.code_cap, "emission code cap");
    cf->add_option("--seed", cof_o.seed, "seed (recorded)");
    cf->add_option("--out", cof_o.out, "output directory");

    InfOpts inf_o;
    auto* ifc = app.add_subcommand("inf-field", "infinite-W reduction to cyclotomic towers");
    ifc->add_option("--excluded", inf_o.excluded, "complement of W (infinite W)");
    ifc->add_option("--members", inf_o.members, "W as an explicit finite set");
    ifc->add_option("--stages", inf_o.stages, "emission stage");
    ifc->add_option("--pace", inf_o.pace, "stages per conductor prime");
    ifc->add_option("--witness-bound", inf_o.code_cap, "emission code cap");
    ifc->add_option("--seed", inf_o.seed, "seed (recorded)");
    ifc->add_option("--out", inf_o.out, "output directory");

    RootsetOpts rs_o;
    auto* rsc = app.add_subcommand("rootset", "stagewise-confirmed root sets");
    rsc->add_option("--field", rs_o.field, "field preset: q, tower, qt, r3");
    rsc->add_option("--stages", rs_o.stages, "confirmation stage");
    rsc->add_option("--precision", rs_o.polys, "number of scanned polynomials");
    rsc->add_option("--witness-bound", rs_o.code_cap, "code cap for confirmations");
    rsc->add_option("--seed", rs_o.seed, "seed (recorded)");
    rsc->add_option("--out", rs_o.out, "output directory");

    AuditOpts au_o;
    auto* au = app.add_subcommand("audit", "monotonicity audit of a diagram stream");
    au->add_option("--group", au_o.group, "group type literal (repeatable)");
    au->add_option("--field", au_o.field, "field preset: q, qt, r3");
    au->add_option("--stages", au_o.stages, "audited stages");
    au->add_option("--witness-bound", au_o.code_cap, "audited code cap");
    au->add_option("--seed", au_o.seed, "seed (recorded)");
    au->add_option("--out", au_o.out, "output directory");

    ReduceOpts red_o;
    auto* rd = app.add_subcommand("reduce-sigma3", "chip-driven reduction to rank-1 families");
    rd->add_option("--relation", red_o.relation, "e0, const-true, const-false, custom");
    rd->add_option("--program", red_o.program, "postfix program for --relation custom");
    rd->add_option("--oracles", red_o.oracles, "JSON file of {prefix, period} streams");
    rd->add_option("--stages", red_o.stages, "construction stages");
    rd->add_option("--indices", red_o.indices, "number of emitted groups");
    rd->add_option("--k-bound", red_o.k_bound, "k bound for the audit sample");
    rd->add_option("--emit-bits", red_o.emit_bits, "diagram bits emitted per group");
    rd->add_option("--seed", red_o.seed, "seed (recorded)");
    rd->add_option("--out", red_o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sc->parsed()) return run_scott(scott_o);
        if (cp->parsed()) return run_compare(cmp_o);
        if (gf->parsed()) return run_g2f(g2f_o);
        if (hz->parsed()) return run_henselize(hen_o);
        if (tc->parsed()) return run_transcend(tr_o);
        if (e0c->parsed()) return run_e0(e0_o);
        if (cf->parsed()) return run_cof(cof_o);
        if (ifc->parsed()) return run_inf_field(inf_o);
        if (rsc->parsed()) return run_rootset(rs_o);
        if (au->parsed()) return run_audit(au_o);
        if (rd->parsed()) return run_reduce_sigma3(red_o);
    } catch (const corrupt_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
