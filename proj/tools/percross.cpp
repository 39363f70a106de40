// percross: evaluate crossing-event formulas, verify the identity suites,
// manipulate exponent tableaux, and drive the lattice simulator.
//
// Output records are JSON lines with insertion-ordered keys and floats
// rendered at 17 significant digits, so identical invocations produce
// byte-identical output. Exit codes: 0 success, 1 verification failure,
// 2 usage or domain error.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percross/conformal.hpp"
#include "percross/crossing.hpp"
#include "percross/elliptic.hpp"
#include "percross/percsim.hpp"
#include "percross/psymbol.hpp"
#include "percross/verify.hpp"

namespace {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Output records
// ---------------------------------------------------------------------------

std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// Flat JSON object that preserves insertion order.
class Record {
public:
    Record& str(const std::string& k, const std::string& v) {
        return raw(k, "\"" + json_escape(v) + "\"");
    }
    Record& num(const std::string& k, double v) { return raw(k, fmt17(v)); }
    Record& integer(const std::string& k, long long v) {
        return raw(k, std::to_string(v));
    }
    Record& boolean(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }

    std::string line() const { return body_ + "}"; }

private:
    Record& raw(const std::string& k, const std::string& v) {
        body_ += body_.size() == 1 ? "" : ",";
        body_ += "\"" + json_escape(k) + "\":" + v;
        return *this;
    }
    std::string body_ = "{";
};

// ---------------------------------------------------------------------------
// Crossing-function dispatch
// ---------------------------------------------------------------------------

enum class Fn { P_h, P_hv, P_hbar_v, N_h, P_surr };

Fn parse_fn(const std::string& name) {
    if (name == "P_h") return Fn::P_h;
    if (name == "P_hv") return Fn::P_hv;
    if (name == "P_hbar_v") return Fn::P_hbar_v;
    if (name == "N_h") return Fn::N_h;
    if (name == "P_surr") return Fn::P_surr;
    throw std::invalid_argument("unknown function '" + name +
                                "' (expected P_h, P_hv, P_hbar_v, N_h, P_surr)");
}

double eval_at_z(Fn f, double z) {
    switch (f) {
        case Fn::P_h: return percross::crossing::p_h(z);
        case Fn::P_hv: return percross::crossing::p_hv(z);
        case Fn::P_hbar_v: return percross::crossing::p_hbar_v(z);
        case Fn::N_h: return percross::crossing::n_h(z);
        case Fn::P_surr: return percross::crossing::p_surr(z);
    }
    throw std::logic_error("unreachable");
}

// Shared lazily-built elliptic context: construction computes series seeds,
// so commands that never touch triangle coordinates skip it.
const percross::elliptic::EquianharmonicContext& context() {
    static percross::elliptic::EquianharmonicContext ctx;
    return ctx;
}

// Evaluate at the fraction t along the relevant image segment: BC of the
// equilateral triangle for the four-arc events, the real segment
// [0, 2 omega2] for the surround event. For the former the half-plane
// coordinate actually used, z = S(w), is reported through z_out.
double eval_at_fraction(Fn f, double t, std::optional<double>& z_out) {
    const auto& ctx = context();
    if (f == Fn::P_surr) {
        const Complex w(2.0 * ctx.omega2() * t, 0.0);
        return percross::crossing::p_surr_triangle(ctx, w);
    }
    const Complex w = ctx.W0_bar() + t * (ctx.W0() - ctx.W0_bar());
    z_out = percross::conformal::schwarz_S(ctx, w).real();
    switch (f) {
        case Fn::P_h: return percross::crossing::p_h_triangle(ctx, w);
        case Fn::P_hv: return percross::crossing::p_hv_triangle(ctx, w);
        case Fn::P_hbar_v:
            return percross::crossing::p_h_triangle(ctx, w) -
                   percross::crossing::p_hv_triangle(ctx, w);
        case Fn::N_h: return percross::crossing::n_h_triangle(ctx, w);
        default: break;
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string function;
    double z = 0.0, r = 0.0, w_fraction = 0.0;
    CLI::Option *oz = nullptr, *orr = nullptr, *ow = nullptr;
};

int run_eval(const EvalArgs& a) {
    const Fn f = parse_fn(a.function);
    Record rec;
    rec.str("command", "eval").str("function", a.function);
    double value = 0.0;
    if (a.oz->count() > 0) {
        rec.str("coordinate", "z").num("z", a.z);
        value = eval_at_z(f, a.z);
    } else if (a.orr->count() > 0) {
        const double z = percross::crossing::aspect_ratio_to_z(a.r);
        rec.str("coordinate", "r").num("r", a.r).num("z", z);
        value = eval_at_z(f, z);
    } else {
        std::optional<double> z;
        value = eval_at_fraction(f, a.w_fraction, z);
        rec.str("coordinate", "w_fraction").num("w_fraction", a.w_fraction);
        if (z) rec.num("z", *z);
    }
    rec.num("value", value).str("provenance", "formula");
    std::cout << rec.line() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite;
    percross::verify::Options opt;
};

int run_verify(const VerifyArgs& a) {
    using namespace percross::verify;
    std::vector<Check> checks;
    if (a.suite == "identities") checks = identities(a.opt);
    else if (a.suite == "whipple") checks = whipple(a.opt);
    else if (a.suite == "elliptic") checks = elliptic_core(a.opt);
    else if (a.suite == "psymbol") checks = psymbol_identities();
    else if (a.suite == "ode-residuals") checks = ode_residuals();
    else if (a.suite == "all") checks = all(a.opt);
    else
        throw std::invalid_argument(
            "unknown suite '" + a.suite +
            "' (expected identities, whipple, elliptic, psymbol, ode-residuals, all)");

    int failures = 0;
    for (const auto& c : checks) {
        Record rec;
        rec.str("command", "verify")
            .str("suite", c.suite)
            .str("check", c.name)
            .num("residual", c.residual)
            .num("bound", c.bound)
            .boolean("pass", c.pass)
            .str("provenance", "identity-check");
        std::cout << rec.line() << "\n";
        if (!c.pass) ++failures;
    }
    Record summary;
    summary.str("command", "verify")
        .str("suite", a.suite)
        .integer("checks", static_cast<long long>(checks.size()))
        .integer("failures", failures)
        .boolean("pass", failures == 0)
        .str("provenance", "identity-check");
    std::cout << summary.line() << "\n";
    return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string geometry = "rectangle";
    int L = 128;
    double r = 1.0, t = 0.5, p = 0.5;
    long trials = 100000;
    std::uint64_t seed = 1;
    int workers = 0;
    bool square_bond = false;
    std::string observable;   // empty = all the geometry supports
    std::string config_path;
    std::string format = "json";
    CLI::Option *og = nullptr, *oL = nullptr, *orr = nullptr, *ot = nullptr,
                *op = nullptr, *otr = nullptr, *os = nullptr, *ow = nullptr,
                *ob = nullptr;
};

percross::percsim::Geometry parse_geometry(const std::string& g) {
    using percross::percsim::Geometry;
    if (g == "rectangle") return Geometry::rectangle;
    if (g == "triangle") return Geometry::equilateral_triangle;
    if (g == "schramm") return Geometry::isosceles_schramm;
    throw std::invalid_argument("unknown geometry '" + g +
                                "' (expected rectangle, triangle, schramm)");
}

std::string observable_name(percross::percsim::Observable o) {
    using percross::percsim::Observable;
    switch (o) {
        case Observable::horizontal: return "P_h";
        case Observable::horizontal_vertical: return "P_hv";
        case Observable::cluster_count: return "N_h";
        case Observable::surround: return "P_surr";
    }
    return "?";
}

// Continuum value the estimate should approach.
double formula_value(const percross::percsim::LatticeRun& run,
                     percross::percsim::Observable obs) {
    using percross::percsim::Geometry;
    using percross::percsim::Observable;
    if (run.geometry == Geometry::isosceles_schramm) return run.split;
    if (run.geometry == Geometry::equilateral_triangle) {
        if (obs == Observable::horizontal) return run.split;
        std::optional<double> z;
        const Fn f = obs == Observable::horizontal_vertical ? Fn::P_hv : Fn::N_h;
        return eval_at_fraction(f, run.split, z);
    }
    const double z = percross::crossing::aspect_ratio_to_z(run.aspect);
    switch (obs) {
        case Observable::horizontal: return percross::crossing::p_h(z);
        case Observable::horizontal_vertical: return percross::crossing::p_hv(z);
        case Observable::cluster_count: return percross::crossing::n_h(z);
        default: break;
    }
    throw std::logic_error("unreachable");
}

void apply_config_file(SimulateArgs& a) {
    std::ifstream in(a.config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + a.config_path);
    nlohmann::json cfg = nlohmann::json::parse(in);

    auto want = [&cfg](const char* key) { return cfg.contains(key); };
    if (want("geometry") && a.og->count() == 0) a.geometry = cfg["geometry"].get<std::string>();
    if (want("side_sites") && a.oL->count() == 0) a.L = cfg["side_sites"].get<int>();
    if (want("aspect") && a.orr->count() == 0) a.r = cfg["aspect"].get<double>();
    if (want("split") && a.ot->count() == 0) a.t = cfg["split"].get<double>();
    if (want("occupation_p") && a.op->count() == 0) a.p = cfg["occupation_p"].get<double>();
    if (want("trials") && a.otr->count() == 0) a.trials = cfg["trials"].get<long>();
    if (want("seed") && a.os->count() == 0) a.seed = cfg["seed"].get<std::uint64_t>();
    if (want("workers") && a.ow->count() == 0) a.workers = cfg["workers"].get<int>();
    if (want("square_bond") && a.ob->count() == 0) a.square_bond = cfg["square_bond"].get<bool>();
}

int run_simulate(SimulateArgs& a) {
    if (!a.config_path.empty()) apply_config_file(a);

    percross::percsim::LatticeRun run;
    run.geometry = parse_geometry(a.geometry);
    run.side_sites = a.L;
    run.aspect = a.r;
    run.split = a.t;
    run.occupation_p = a.p;
    run.trials = a.trials;
    run.seed = a.seed;
    run.workers = a.workers;
    run.square_bond = a.square_bond;

    const auto estimates = percross::percsim::run(run);

    bool matched = a.observable.empty();
    if (a.format == "csv")
        std::cout << "geometry,observable,L,aspect,split,p,trials,seed,workers,"
                     "mean,std_error,digest,formula,z_score\n";
    for (const auto& est : estimates) {
        const std::string name = observable_name(est.observable);
        if (!a.observable.empty() && name != a.observable) continue;
        matched = true;
        const double formula = formula_value(run, est.observable);
        const double z_score =
            est.std_error > 0.0 ? (est.mean - formula) / est.std_error : 0.0;
        char digest[20];
        std::snprintf(digest, sizeof digest, "%016llx",
                      static_cast<unsigned long long>(est.digest));
        if (a.format == "csv") {
            std::cout << a.geometry << ',' << name << ',' << a.L << ','
                      << fmt17(a.r) << ',' << fmt17(a.t) << ',' << fmt17(a.p) << ','
                      << a.trials << ',' << a.seed << ',' << a.workers << ','
                      << fmt17(est.mean) << ',' << fmt17(est.std_error) << ','
                      << digest << ',' << fmt17(formula) << ',' << fmt17(z_score)
                      << "\n";
        } else {
            Record rec;
            rec.str("command", "simulate")
                .str("geometry", a.geometry)
                .str("observable", name)
                .integer("L", a.L)
                .num("aspect", a.r)
                .num("split", a.t)
                .num("p", a.p)
                .integer("trials", a.trials)
                .integer("seed", static_cast<long long>(a.seed))
                .integer("workers", a.workers)
                .num("mean", est.mean)
                .num("std_error", est.std_error)
                .str("digest", digest)
                .num("formula", formula)
                .num("z_score", z_score)
                .str("provenance", "simulation");
            std::cout << rec.line() << "\n";
        }
    }
    if (!matched)
        throw std::invalid_argument("observable '" + a.observable +
                                    "' is not produced by geometry '" + a.geometry + "'");
    return 0;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

struct TableArgs {
    std::string function;
    std::string z_range, r_range, w_range;
    std::string format = "csv";
    CLI::Option *oz = nullptr, *orr = nullptr, *ow = nullptr;
};

struct Range {
    double lo = 0.0, hi = 0.0, step = 0.0;
    int points = 0;
};

Range parse_range(const std::string& spec) {
    Range r;
    char extra;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.hi, &r.step, &extra) != 3)
        throw std::invalid_argument("range must be lo:hi:step, got '" + spec + "'");
    if (r.step <= 0.0 || r.hi < r.lo)
        throw std::invalid_argument("range needs step > 0 and hi >= lo");
    r.points = static_cast<int>(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
    return r;
}

int run_table(const TableArgs& a) {
    const Fn f = parse_fn(a.function);
    std::string coord;
    Range range;
    if (a.oz->count() > 0) {
        coord = "z";
        range = parse_range(a.z_range);
    } else if (a.orr->count() > 0) {
        coord = "r";
        range = parse_range(a.r_range);
    } else {
        coord = "w_fraction";
        range = parse_range(a.w_range);
    }

    if (a.format == "csv") std::cout << coord << ",value\n";
    for (int k = 0; k < range.points; ++k) {
        const double x = range.lo + k * range.step;
        double value;
        if (coord == "z") {
            value = eval_at_z(f, x);
        } else if (coord == "r") {
            value = eval_at_z(f, percross::crossing::aspect_ratio_to_z(x));
        } else {
            std::optional<double> ignored;
            value = eval_at_fraction(f, x, ignored);
        }
        if (a.format == "csv") {
            std::cout << fmt17(x) << ',' << fmt17(value) << "\n";
        } else {
            Record rec;
            rec.str("command", "table")
                .str("function", a.function)
                .num(coord, x)
                .num("value", value)
                .str("provenance", "formula");
            std::cout << rec.line() << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// psymbol: declarative tableau scripts
// ---------------------------------------------------------------------------
//
//   hyper <uppers...> / <lowers...>   start from the series tableau
//   shift <point> <c>                 multiply by (x - point)^c (inf adjusts)
//   pullback <pre>=<image>:<mult>...  pull back; image "." = declared ordinary
//   sum                               print the exponent sum
//   render                            print the tableau
//
// Rationals are n or n/d. Lines starting with # and blank lines are skipped.

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

int run_psymbol(const std::string& path) {
    using namespace percross::psymbol;

    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open script " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }

    std::optional<PSymbol> sym;
    auto need_symbol = [&sym]() -> PSymbol& {
        if (!sym) throw std::invalid_argument("psymbol script must start with 'hyper'");
        return *sym;
    };

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        try {
            const std::string& op = toks[0];
            if (op == "hyper") {
                std::vector<Rational> upper, lower;
                bool past_slash = false;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    if (toks[i] == "/") {
                        past_slash = true;
                        continue;
                    }
                    (past_slash ? lower : upper).push_back(Rational::parse(toks[i]));
                }
                if (!past_slash)
                    throw std::invalid_argument("hyper needs '/' between parameter lists");
                sym = hyper_psymbol(upper, lower);
            } else if (op == "shift") {
                if (toks.size() != 3)
                    throw std::invalid_argument("shift takes: point exponent");
                sym = shift_by_prefactor(need_symbol(), toks[1], Rational::parse(toks[2]));
            } else if (op == "pullback") {
                BranchMap branches;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    const auto eq = toks[i].find('=');
                    const auto colon = toks[i].rfind(':');
                    if (eq == std::string::npos || colon == std::string::npos || colon < eq)
                        throw std::invalid_argument(
                            "pullback entries look like pre=image:mult");
                    BranchPoint bp;
                    bp.preimage = toks[i].substr(0, eq);
                    bp.image = toks[i].substr(eq + 1, colon - eq - 1);
                    bp.multiplicity = std::stoi(toks[i].substr(colon + 1));
                    if (bp.image == ".") {
                        bp.image = "(ordinary)";
                        bp.image_is_ordinary = true;
                    }
                    branches.push_back(std::move(bp));
                }
                if (branches.empty())
                    throw std::invalid_argument("pullback needs at least one branch point");
                sym = pullback(need_symbol(), branches);
            } else if (op == "sum") {
                std::cout << "exponent sum: " << exponent_sum(need_symbol()).str() << "\n";
            } else if (op == "render") {
                std::cout << render(need_symbol());
            } else {
                throw std::invalid_argument("unknown op '" + op + "'");
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!sym) throw std::invalid_argument("empty psymbol script");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossing-event formulas, identity verification, exponent tableaux, "
                 "and a triangular-lattice percolation simulator"};
    app.require_subcommand(1);

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate one crossing function at a point");
    eval_cmd->add_option("function", eval_args.function,
                         "P_h | P_hv | P_hbar_v | N_h | P_surr")
        ->required();
    eval_args.oz = eval_cmd->add_option("--z", eval_args.z, "half-plane cross ratio");
    eval_args.orr = eval_cmd->add_option("--r", eval_args.r, "rectangle aspect ratio");
    eval_args.ow = eval_cmd->add_option("--w-fraction", eval_args.w_fraction,
                                        "fraction t along the image segment");
    eval_args.oz->excludes(eval_args.orr)->excludes(eval_args.ow);
    eval_args.orr->excludes(eval_args.ow);

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "run an identity suite");
    verify_cmd->add_option("suite", verify_args.suite,
                           "identities | whipple | elliptic | psymbol | ode-residuals | all")
        ->required();
    verify_cmd->add_option("--grid", verify_args.opt.grid, "identity-grid size")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--samples", verify_args.opt.samples,
                           "random draws for the transform sweeps")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", verify_args.opt.seed, "seed for sampled checks");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo crossing estimates");
    sim_args.og = sim_cmd->add_option("--geometry", sim_args.geometry,
                                      "rectangle | triangle | schramm");
    sim_args.oL = sim_cmd->add_option("--L", sim_args.L, "site rows per side");
    sim_args.orr = sim_cmd->add_option("--r", sim_args.r, "rectangle aspect ratio");
    sim_args.ot = sim_cmd->add_option("--t", sim_args.t, "boundary split fraction");
    sim_args.op = sim_cmd->add_option("--p", sim_args.p, "site occupation probability");
    sim_args.otr = sim_cmd->add_option("--trials", sim_args.trials, "trial count");
    sim_args.os = sim_cmd->add_option("--seed", sim_args.seed, "RNG seed")
                      ->envname("PERCROSS_SEED");
    sim_args.ow = sim_cmd->add_option("--workers", sim_args.workers,
                                      "worker threads (0 = hardware)");
    sim_args.ob = sim_cmd->add_flag("--square-bond", sim_args.square_bond,
                                    "square-lattice bond variant (duality check)");
    sim_cmd->add_option("--observable", sim_args.observable,
                        "restrict output to one observable");
    sim_cmd->add_option("--config", sim_args.config_path,
                        "JSON config file mirroring the run fields");
    sim_cmd->add_option("--format", sim_args.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    TableArgs table_args;
    auto* table_cmd = app.add_subcommand("table", "tabulate a function over a grid");
    table_cmd->add_option("function", table_args.function,
                          "P_h | P_hv | P_hbar_v | N_h | P_surr")
        ->required();
    table_args.oz = table_cmd->add_option("--z", table_args.z_range, "z range lo:hi:step");
    table_args.orr = table_cmd->add_option("--r", table_args.r_range, "r range lo:hi:step");
    table_args.ow = table_cmd->add_option("--w-fraction", table_args.w_range,
                                          "fraction range lo:hi:step");
    table_args.oz->excludes(table_args.orr)->excludes(table_args.ow);
    table_args.orr->excludes(table_args.ow);
    table_cmd->add_option("--format", table_args.format, "csv | json")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string psymbol_path;
    auto* psym_cmd = app.add_subcommand("psymbol", "run a declarative tableau script");
    psym_cmd->add_option("script", psymbol_path, "script file, or - for stdin")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval_cmd) {
            if (eval_args.oz->count() + eval_args.orr->count() + eval_args.ow->count() != 1)
                throw std::invalid_argument(
                    "eval needs exactly one of --z, --r, --w-fraction");
            return run_eval(eval_args);
        }
        if (*verify_cmd) return run_verify(verify_args);
        if (*sim_cmd) return run_simulate(sim_args);
        if (*table_cmd) {
            if (table_args.oz->count() + table_args.orr->count() +
                    table_args.ow->count() != 1)
                throw std::invalid_argument(
                    "table needs exactly one of --z, --r, --w-fraction");
            return run_table(table_args);
        }
        if (*psym_cmd) return run_psymbol(psymbol_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
