// tascheck: command-line front end for the tile-assembly verification kit.
//
// Commands map the library pipelines onto stable exit codes:
//   0  success (verify: UniqueTerminal; modelcheck: ran to either answer)
//   1  usage, I/O, or parse errors
//   2  verify: NotRectilinear
//   3  verify: NonUniqueTerminal
//   4  verify: NotLocallyDeterministic
//   5  state budget exceeded
//
// With --format structured every command emits one versioned TASREPORT
// document (except export-smart, whose output is the SMART model itself).

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <tascheck/counting.hpp>
#include <tascheck/ctl.hpp>
#include <tascheck/ingest.hpp>
#include <tascheck/petri.hpp>
#include <tascheck/report.hpp>

namespace {

using namespace tascheck;

constexpr const char* kUsage =
    R"(usage: tascheck <command> [options] [formula]

commands:
  verify        decide whether the system produces a unique terminal assembly
                on the n x n surface
  modelcheck    evaluate a CTL formula over the explicit transition system
                (the formula is the one positional argument)
  count         configuration counts: closed form, diamond decoration, and the
                explicit state count when the system verifies
  export-smart  print the system's guarded Petri net as a SMART model
  simulate      run one random assembly sequence until no tile can attach

options:
  --tileset PATH   tile set file: ISU-TAS records, or TASV1 (embeds its seed)
  --seed PATH      ISU-TAS seed list (required unless the tile set is TASV1)
  --size N         surface side length n >= 1 (required)
  --format F       output format: human (default) or structured
  --state-budget N cap on explicitly explored states (default 10000000)
  --strict-paper-rectilinearity
                   judge exposed strength-2 side glues by the literal west-side
                   reading instead of the corrected east-side one
  --rng-seed N     random seed for simulate (default 0)
  --model-name S   SMART model name (default: derived from the tile set path)
  --out PATH       write the command's output to PATH instead of stdout
  --help           show this message

exit codes: 0 success or UniqueTerminal; 1 usage or parse error;
2 NotRectilinear; 3 NonUniqueTerminal; 4 NotLocallyDeterministic;
5 state budget exceeded
)";

struct Options {
    std::string command;
    std::string tileset;
    std::string seed;
    int size = 0;  // 0 = unset
    std::string format = "human";
    size_t state_budget = kDefaultStateBudget;
    bool strict = false;
    uint64_t rng_seed = 0;
    std::string model_name;
    std::string out;
    std::vector<std::string> positional;
};

int usage_error(const std::string& message) {
    std::cerr << "tascheck: " << message << "\n"
              << "run 'tascheck --help' for usage\n";
    return 1;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<std::string> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_diagnostics(const std::string& path, const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        std::cerr << path << ":" << d.line << ":" << d.column << ": "
                  << (d.severity == Diagnostic::Severity::error ? "error" : "warning") << ": "
                  << d.message << "\n";
}

bool is_native_format(const std::string& text) {
    size_t nl = text.find('\n');
    std::string_view first(text.data(), nl == std::string::npos ? text.size() : nl);
    return detail::rtrim(first) == "TASV1";
}

/// Load the system from --tileset (and --seed for the ISU-TAS pair format).
/// Returns 0 and fills `sys`, or prints diagnostics and returns an exit code.
int load_system(const Options& opt, TileAssemblySystem& sys) {
    auto text = slurp(opt.tileset);
    if (!text) {
        std::cerr << "tascheck: cannot open " << opt.tileset << "\n";
        return 1;
    }
    if (is_native_format(*text)) {
        if (!opt.seed.empty())
            return usage_error("a TASV1 tile set embeds its seed; --seed does not apply");
        auto parsed = parse_native(*text);
        print_diagnostics(opt.tileset, parsed.diagnostics);
        if (!parsed.ok()) return 1;
        sys = std::move(*parsed.value);
        return 0;
    }
    if (opt.seed.empty()) return usage_error("--seed is required with an ISU-TAS tile set");
    auto seed_text = slurp(opt.seed);
    if (!seed_text) {
        std::cerr << "tascheck: cannot open " << opt.seed << "\n";
        return 1;
    }
    auto tiles = parse_tileset(*text);
    print_diagnostics(opt.tileset, tiles.diagnostics);
    auto seed = parse_seed(*seed_text);
    print_diagnostics(opt.seed, seed.diagnostics);
    if (!tiles.ok() || !seed.ok()) return 1;
    auto elaborated = elaborate(*tiles.value, *seed.value);
    // Elaboration diagnostics point into whichever file the message names.
    for (const auto& d : elaborated.diagnostics)
        print_diagnostics(d.message.find("seed") != std::string::npos ? opt.seed : opt.tileset,
                          {d});
    if (!elaborated.ok()) return 1;
    sys = std::move(*elaborated.value);
    return 0;
}

/// Write the command's primary output to --out (or stdout). Returns an exit
/// code: 0, or 1 when the path cannot be written.
int emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(opt.out, std::ios::binary);
    out << text;
    out.flush();
    if (!out) {
        std::cerr << "tascheck: cannot write " << opt.out << "\n";
        return 1;
    }
    return 0;
}

void append_steps_human(std::ostringstream& h, const TileAssemblySystem& sys,
                        const std::vector<AttachmentStep>& steps) {
    for (size_t s = 0; s < steps.size(); ++s)
        h << "  step " << (s + 1) << ": " << sys.tile(steps[s].tile).name << " @ "
          << format_coord(steps[s].loc) << "\n";
}

// ── verify ──────────────────────────────────────────────────────────────────

int cmd_verify(const Options& opt, const TileAssemblySystem& sys) {
    VerifyOptions vo;
    vo.strict_paper_rectilinearity = opt.strict;
    VerificationReport rep = verify(sys, opt.size, vo);

    std::string text;
    if (opt.format == "structured") {
        text = write_report(report_of(sys, rep));
    } else {
        std::ostringstream h;
        h << "verdict: " << verdict_name(rep.verdict) << "\n"
          << "configurations evaluated: " << rep.configurations_evaluated << "\n";
        if (!rep.detail.empty()) h << rep.detail << "\n";
        if (rep.terminal)
            h << "terminal assembly: " << rep.terminal->tile_count() << " tiles on a " << opt.size
              << " x " << opt.size << " surface\n";
        for (size_t i = 0; i < rep.witnesses.size(); ++i) {
            h << "witness " << (i + 1) << ": " << rep.witnesses[i].description << "\n";
            append_steps_human(h, sys, rep.witnesses[i].steps);
        }
        text = h.str();
    }
    if (int rc = emit(opt, text)) return rc;
    switch (rep.verdict) {
        case Verdict::UniqueTerminal: return 0;
        case Verdict::NotRectilinear: return 2;
        case Verdict::NonUniqueTerminal: return 3;
        case Verdict::NotLocallyDeterministic: return 4;
    }
    return 1;
}

// ── modelcheck ──────────────────────────────────────────────────────────────

int cmd_modelcheck(const Options& opt, const TileAssemblySystem& sys) {
    FormulaParse fp = parse_formula(opt.positional.front());
    if (!fp.ok()) {
        std::cerr << "tascheck: formula:1:" << fp.column << ": error: " << fp.error << "\n";
        return 1;
    }
    TransitionSystem ts = build_transition_system(sys, opt.size, opt.state_budget);
    Kripke k = kripke_of(sys, ts);
    CheckResult cr = check(k, fp.formula);

    size_t satisfying = 0;
    for (char b : cr.sat) satisfying += b ? 1 : 0;

    // A witness path walks transition-system edges; recover the attachment
    // behind each hop.
    std::vector<AttachmentStep> steps;
    int loops_to = -1;
    if (cr.witness) {
        const auto& st = cr.witness->states;
        for (size_t i = 0; i + 1 < st.size(); ++i)
            for (const auto& e : ts.edges[size_t(st[i])])
                if (e.target == st[i + 1]) {
                    steps.push_back(e.step);
                    break;
                }
        loops_to = cr.witness->lasso_start;
    }
    const char* path_label = cr.holds ? "witness path" : "counterexample path";

    std::string text;
    if (opt.format == "structured") {
        StructuredReport r;
        r.set("command", "modelcheck");
        r.set("formula", to_text(fp.formula));
        r.set("surface", std::to_string(opt.size));
        r.set("states", std::to_string(ts.states.size()));
        r.set("result", cr.holds ? "true" : "false");
        r.set("satisfying-states", std::to_string(satisfying));
        if (cr.witness) {
            if (loops_to >= 0) r.set("loops-to-step", std::to_string(loops_to));
            r.traces.push_back(trace_of(sys, path_label, steps));
        }
        text = write_report(r);
    } else {
        std::ostringstream h;
        h << "formula: " << to_text(fp.formula) << "\n"
          << "states: " << ts.states.size() << "\n"
          << "result: " << (cr.holds ? "true" : "false") << "\n"
          << "satisfying states: " << satisfying << " of " << ts.states.size() << "\n";
        if (cr.witness) {
            h << path_label << ":\n";
            append_steps_human(h, sys, steps);
            if (loops_to >= 0) h << "  (loops back to step " << loops_to << ")\n";
        }
        text = h.str();
    }
    return emit(opt, text);
}

// ── count ───────────────────────────────────────────────────────────────────

int cmd_count(const Options& opt, const TileAssemblySystem& sys) {
    BigInt formula = worst_case_config_count(opt.size);
    BigInt diamond = diamond_enumeration(opt.size).total;

    // The explicit recount is best-effort: it needs a verified system and an
    // in-budget state space, and the closed-form values stand on their own.
    std::optional<BigInt> explicit_count;
    std::string omitted;
    VerifyOptions vo;
    vo.strict_paper_rectilinearity = opt.strict;
    try {
        VerificationReport rep = verify(sys, opt.size, vo);
        if (rep.verdict == Verdict::UniqueTerminal)
            explicit_count = BigInt(build_transition_system(sys, opt.size, opt.state_budget)
                                        .states.size());
        else
            omitted = std::string("verification returned ") + verdict_name(rep.verdict);
    } catch (const StateBudgetExceeded& e) {
        omitted = e.what();
    }

    std::string text;
    if (opt.format == "structured") {
        StructuredReport r;
        r.set("command", "count");
        r.set("surface", std::to_string(opt.size));
        r.set("formula", formula.str());
        r.set("diamond", diamond.str());
        if (explicit_count)
            r.set("explicit", explicit_count->str());
        else
            r.set("explicit-omitted", omitted);
        text = write_report(r);
    } else {
        std::ostringstream h;
        h << "formula=" << formula << " diamond=" << diamond;
        if (explicit_count) h << " explicit=" << *explicit_count;
        h << "\n";
        if (!explicit_count) h << "explicit unavailable: " << omitted << "\n";
        text = h.str();
    }
    return emit(opt, text);
}

// ── export-smart ────────────────────────────────────────────────────────────

std::string model_name_from_path(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    size_t dot = stem.rfind('.');
    if (dot != std::string::npos && dot > 0) stem.resize(dot);
    std::string name;
    for (char c : stem) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '_';
        name += ok ? c : '_';
    }
    if (name.empty()) name = "model";
    if (name[0] >= '0' && name[0] <= '9') name.insert(name.begin(), '_');
    return name;
}

int cmd_export_smart(const Options& opt, const TileAssemblySystem& sys) {
    std::string name = opt.model_name.empty() ? model_name_from_path(opt.tileset) : opt.model_name;
    return emit(opt, export_smart(sys, opt.size, name));
}

// ── simulate ────────────────────────────────────────────────────────────────

int cmd_simulate(const Options& opt, const TileAssemblySystem& sys) {
    std::vector<AttachmentStep> steps = random_assembly_sequence(sys, opt.size, opt.rng_seed);
    Configuration end = replay(sys, opt.size, steps);

    std::string text;
    if (opt.format == "structured") {
        StructuredReport r;
        r.set("command", "simulate");
        r.set("surface", std::to_string(opt.size));
        r.set("rng-seed", std::to_string(opt.rng_seed));
        r.set("final-tiles", std::to_string(end.tile_count()));
        r.traces.push_back(trace_of(sys, "random assembly sequence", steps));
        text = write_report(r);
    } else {
        std::ostringstream h;
        h << "rng seed: " << opt.rng_seed << "\n";
        append_steps_human(h, sys, steps);
        h << "final assembly: " << end.tile_count() << " tiles on a " << opt.size << " x "
          << opt.size << " surface\n";
        text = h.str();
    }
    return emit(opt, text);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args)
        if (a == "--help" || a == "-h") {
            std::cout << kUsage;
            return 0;
        }
    if (args.empty()) return usage_error("missing command");

    Options opt;
    opt.command = args[0];
    bool known_command = opt.command == "verify" || opt.command == "modelcheck" ||
                         opt.command == "count" || opt.command == "export-smart" ||
                         opt.command == "simulate";
    if (!known_command) return usage_error("unknown command '" + opt.command + "'");

    for (size_t i = 1; i < args.size(); ++i) {
        std::string arg = args[i];
        std::string inline_value;
        bool has_inline = false;
        if (arg.rfind("--", 0) == 0) {
            size_t eq = arg.find('=');
            if (eq != std::string::npos) {
                inline_value = arg.substr(eq + 1);
                has_inline = true;
                arg.resize(eq);
            }
        }
        if (arg == "--strict-paper-rectilinearity") {
            if (has_inline) return usage_error(arg + " takes no value");
            opt.strict = true;
        } else if (arg == "--tileset" || arg == "--seed" || arg == "--size" ||
                   arg == "--format" || arg == "--state-budget" || arg == "--rng-seed" ||
                   arg == "--model-name" || arg == "--out") {
            std::string v;
            if (has_inline) {
                v = inline_value;
            } else if (i + 1 < args.size()) {
                v = args[++i];
            } else {
                return usage_error(arg + " needs a value");
            }
            if (arg == "--tileset") {
                opt.tileset = v;
            } else if (arg == "--seed") {
                opt.seed = v;
            } else if (arg == "--size") {
                if (!parse_number(v, opt.size) || opt.size < 1)
                    return usage_error("--size needs a positive integer");
            } else if (arg == "--format") {
                if (v != "human" && v != "structured")
                    return usage_error("--format must be 'human' or 'structured'");
                opt.format = v;
            } else if (arg == "--state-budget") {
                if (!parse_number(v, opt.state_budget) || opt.state_budget == 0)
                    return usage_error("--state-budget needs a positive integer");
            } else if (arg == "--rng-seed") {
                if (!parse_number(v, opt.rng_seed))
                    return usage_error("--rng-seed needs a non-negative integer");
            } else if (arg == "--model-name") {
                opt.model_name = v;
            } else {
                opt.out = v;
            }
        } else if (arg.rfind("--", 0) == 0) {
            return usage_error("unknown option " + arg);
        } else {
            opt.positional.push_back(arg);
        }
    }

    if (opt.command == "modelcheck") {
        if (opt.positional.size() != 1)
            return usage_error("modelcheck takes exactly one formula argument");
    } else if (!opt.positional.empty()) {
        return usage_error("unexpected argument '" + opt.positional.front() + "'");
    }
    if (opt.tileset.empty()) return usage_error("--tileset is required");
    if (opt.size == 0) return usage_error("--size is required");

    TileAssemblySystem sys;
    if (int rc = load_system(opt, sys)) return rc;

    try {
        if (opt.command == "verify") return cmd_verify(opt, sys);
        if (opt.command == "modelcheck") return cmd_modelcheck(opt, sys);
        if (opt.command == "count") return cmd_count(opt, sys);
        if (opt.command == "export-smart") return cmd_export_smart(opt, sys);
        return cmd_simulate(opt, sys);
    } catch (const StateBudgetExceeded& e) {
        std::cerr << "tascheck: " << e.what() << "\n";
        return 5;
    } catch (const Error& e) {
        std::cerr << "tascheck: " << e.what() << "\n";
        return 1;
    }
}
