#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "projmerge/bounds.hpp"
#include "projmerge/conductors.hpp"
#include "projmerge/grid.hpp"
#include "projmerge/io.hpp"
#include "projmerge/mergers.hpp"
#include "projmerge/schemes.hpp"
#include "projmerge/search.hpp"

using json = nlohmann::ordered_json;
using namespace projmerge;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitIo = 4;

Rat parse_rat(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(s));
    const long long num = std::stoll(s.substr(0, slash));
    const long long den = std::stoll(s.substr(slash + 1));
    return Rat(num, den);
}

std::string rat_str(const Rat& r) {
    std::ostringstream ss;
    ss << r.numerator();
    if (r.denominator() != 1) ss << '/' << r.denominator();
    return ss.str();
}

json table_json(const std::vector<ProjectionEntry>& table) {
    json arr = json::array();
    for (const auto& e : table) {
        json row;
        row["part"] = e.part;
        row["axes"] = e.axes.indices;
        row["size"] = e.size;
        row["fraction"] = rat_str(e.fraction);
        row["fraction_float"] = to_double(e.fraction);
        arr.push_back(row);
    }
    return arr;
}

json partition_json_obj(const PartLabeling& p) {
    return json::parse(partition_to_json(p));
}

struct Envelope {
    std::string command;
    json input;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void emit(json results) const {
        json out;
        out["command"] = command;
        out["input"] = input;
        out["results"] = std::move(results);
        out["version"] = kVersion;
        out["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::cout << out.dump(2) << '\n';
    }
};

int cmd_verify_scheme(const std::string& scheme, std::uint64_t n, std::uint32_t t,
                      std::uint64_t k, const std::vector<std::uint32_t>& cutoffs) {
    Envelope env{"verify-scheme",
                 {{"scheme", scheme}, {"n", n}, {"t", t}, {"k", k}, {"cutoffs", cutoffs}}};

    PartLabeling p(GridDims(1, 1), 1, {0});
    double bound = 0.0;
    std::string bound_name;
    if (scheme == "maj3") {
        p = maj3_partition(n);
        bound = 0.75;
        bound_name = "two-part 3/4 lower bound";
    } else if (scheme == "gr3-figure" || scheme == "gr3-literal") {
        p = gr3_partition(n, scheme == "gr3-figure" ? GrVariant::figure
                                                    : GrVariant::literal);
        bound = (std::sqrt(5.0) - 1.0) / 2.0;
        bound_name = "golden ratio u";
    } else if (scheme == "product") {
        p = product_partition(n, t, k);
        bound = shearer_bound(p.parts(), 2, t);
        bound_name = "Shearer bound";
    } else if (scheme == "threshold") {
        p = threshold_partition(n, t, cutoffs);
        bound = shearer_bound(p.parts(), 2, t);
        bound_name = "Shearer bound";
    } else {
        std::cerr << "unknown scheme: " << scheme << '\n';
        return kExitUsage;
    }

    const auto table = projection_fraction_table(p, 2);
    const auto mx = max_projection(p, 2);
    const double max_frac = to_double(mx.fraction);

    json results;
    results["parts"] = p.parts();
    results["projection_table"] = table_json(table);
    results["max_projection"] = {{"size", mx.size},
                                 {"part", mx.part},
                                 {"axes", mx.axes.indices},
                                 {"fraction", rat_str(mx.fraction)},
                                 {"fraction_float", max_frac}};
    results["bound"] = {{"name", bound_name},
                        {"fraction", bound},
                        {"discrete", discrete_bound(bound, n, 2)}};
    const bool tight = mx.size == static_cast<std::uint64_t>(discrete_bound(bound, n, 2));
    results["verdict"] = tight ? "TIGHT" : "NOT TIGHT";

    std::cerr << "part,axes,size,fraction\n";
    for (const auto& e : table) {
        std::cerr << e.part << ',';
        for (std::size_t i = 0; i < e.axes.indices.size(); ++i)
            std::cerr << (i ? "+" : "") << e.axes.indices[i];
        std::cerr << ',' << e.size << ',' << to_double(e.fraction) << '\n';
    }
    std::cerr << scheme << " on [" << n << "]^" << p.dims().t << ": max projection "
              << mx.size << " (fraction " << max_frac << "), " << bound_name << ' '
              << bound << " -> " << (tight ? "TIGHT" : "NOT TIGHT") << '\n';

    if (scheme == "gr3-literal") {
        // the literal thresholds leave part 2 covering entire mixed columns, so
        // its XZ/YZ projections are full; the headline ~0.854 only shows up in
        // the XY projection of part 2.
        for (const auto& e : table) {
            if (e.part == 2 && e.axes.indices == std::vector<std::uint32_t>{0, 1}) {
                results["discrepancy"] = {
                    {"part2_xy_fraction", to_double(e.fraction)},
                    {"note",
                     "literal thresholds give part 2 full XZ and YZ projections; "
                     "only its XY projection is near 0.854, so the scheme is not "
                     "projection-bounded as the figure variant is"}};
                std::cerr << "discrepancy: part 2 XY fraction " << to_double(e.fraction)
                          << " but XZ/YZ projections are full (fraction 1)\n";
            }
        }
    }
    env.emit(results);
    return kExitOk;
}

json search_result_json(const SearchResult& r, std::uint32_t s) {
    json out;
    out["minmax_value"] = r.minmax_value;
    out["minmax_fraction"] =
        static_cast<double>(r.minmax_value) /
        std::pow(static_cast<double>(r.witness.dims().side), static_cast<double>(s));
    out["witness"] = partition_json_obj(r.witness);
    out["states_visited"] = r.states_visited;
    out["certified"] = r.certified;
    return out;
}

int cmd_search(bool exhaustive, std::uint64_t n, std::uint32_t t, std::uint32_t c,
               std::uint32_t s, std::uint64_t seed, std::uint64_t steps,
               std::uint32_t shards, bool no_symmetry) {
    Envelope env{exhaustive ? "search-exhaustive" : "search-local",
                 {{"n", n},
                  {"t", t},
                  {"c", c},
                  {"s", s},
                  {"seed", seed},
                  {"steps", steps},
                  {"shards", shards}}};
    SearchConfig cfg;
    cfg.dims = GridDims(t, n);
    cfg.parts = c;
    cfg.s = s;
    cfg.rng_seed = seed;
    cfg.schedule.steps = steps;
    cfg.shards = shards;
    if (no_symmetry) cfg.symmetry = SymmetryOptions{false, false};
    cfg.mode = exhaustive ? SearchMode::exhaustive : SearchMode::anneal;

    try {
        const SearchResult r =
            exhaustive ? exhaustive_minmax(cfg) : local_search_minmax(cfg);
        std::cerr << (r.certified ? "certified" : "heuristic") << " min-max "
                  << r.minmax_value << " after " << r.states_visited << " states\n";
        env.emit(search_result_json(r, s));
        return kExitOk;
    } catch (const BudgetError& b) {
        std::cerr << "budget refusal: " << b.what() << " (~" << b.estimated_states
                  << " states)\n";
        return kExitBudget;
    }
}

int cmd_solve_constants(double tolerance, bool literal) {
    Envelope env{"solve-constants",
                 {{"tolerance", tolerance}, {"literal_equation", literal}}};
    json results;
    if (literal) {
        const double root = solve_eta0_literal_equation(tolerance);
        results["literal_equation_root"] = root;
        results["banner"] = "printed-form, inconsistent";
        std::cerr << "printed-form, inconsistent: literal-equation root " << root
                  << " (disagrees with every constant around it)\n";
    } else {
        const BoundConstants bc = solve_eta0(tolerance);
        results["u_golden"] = bc.u_golden;
        results["eta0"] = bc.eta0;
        results["u_of_eta0"] = bc.u_of_eta0;
        results["lambda_star"] = bc.lambda_star;
        results["solver_tolerance"] = bc.solver_tolerance;
        results["solver_iterations"] = bc.solver_iterations;
        results["discrepancy_note"] =
            "lambda_star = 4 - 6*eta0 = " + std::to_string(bc.lambda_star) +
            "; the printed value 0.856 is inconsistent with eta0 ~ 0.5264";
        std::cerr << "eta0 " << bc.eta0 << ", u(eta0) " << bc.u_of_eta0
                  << ", lambda* " << bc.lambda_star
                  << " (printed 0.856 is inconsistent)\n";
    }
    env.emit(results);
    return kExitOk;
}

int cmd_render(const std::string& infile, const std::vector<std::string>& axes_specs,
               const std::string& out_prefix) {
    Envelope env{"render",
                 {{"input", infile}, {"axes", axes_specs}, {"out", out_prefix}}};
    PartLabeling p = partition_from_json(read_file(infile));
    json files = json::array();
    for (const auto& spec : axes_specs) {
        std::uint32_t a = 0, b = 0;
        if (std::sscanf(spec.c_str(), "%u,%u", &a, &b) != 2) {
            std::cerr << "bad axes spec (expect i,j): " << spec << '\n';
            return kExitUsage;
        }
        const AxisSubset axes({a, b});
        const std::string svg = render_projection_svg(p, axes);
        const std::string path =
            out_prefix + "_" + std::to_string(a) + std::to_string(b) + ".svg";
        write_file(path, svg);
        files.push_back(path);
        std::cerr << "wrote " << path << '\n';
    }
    env.emit({{"files", files}});
    return kExitOk;
}

int cmd_merger_eval(const std::string& infile, const std::string& eps_str,
                    const std::string& mode, std::uint32_t s) {
    Envelope env{"merger-eval",
                 {{"input", infile}, {"eps", eps_str}, {"mode", mode}, {"uniform_set", s}}};
    const MergerTable e = merger_from_json(read_file(infile));
    const Rat eps = parse_rat(eps_str);
    json results;
    try {
        if (mode == "exact") {
            const MergerVerdict v = is_eps_merger_exhaustive(e, eps, s);
            results["is_merger"] = v.is_merger;
            results["worst_bad_seed_fraction"] = rat_str(v.worst_bad_seed_fraction);
            results["adversaries_checked"] = v.adversaries_checked;
            std::cerr << (v.is_merger ? "PASS" : "FAIL") << ": bad-seed fraction "
                      << rat_str(v.worst_bad_seed_fraction) << " vs eps " << eps_str
                      << '\n';
        } else if (mode == "heuristic") {
            const Rat sd = weak_merger_sd(e, s);
            results["weak_joint_sd"] = rat_str(sd);
            results["weak_joint_sd_float"] = to_double(sd);
            results["within_eps"] = sd <= eps;
            std::cerr << "weak joint SD " << rat_str(sd) << '\n';
        } else {
            std::cerr << "mode must be exact or heuristic\n";
            return kExitUsage;
        }
    } catch (const BudgetError& b) {
        std::cerr << "budget refusal: " << b.what() << " (~" << b.estimated_states
                  << " states)\n";
        return kExitBudget;
    }
    env.emit(results);
    return kExitOk;
}

int cmd_abnormal(const std::string& infile, const std::string& gamma_str,
                 const std::string& lambda_str, std::uint64_t samples,
                 std::uint64_t seed) {
    Envelope env{"abnormal",
                 {{"input", infile},
                  {"gamma", gamma_str},
                  {"lambda", lambda_str},
                  {"samples", samples},
                  {"seed", seed}}};
    const Conductor c = conductor_from_json(read_file(infile));
    const Rat gamma = parse_rat(gamma_str);
    const Rat lambda = parse_rat(lambda_str);
    const AbnormalityResult r = abnormality_probability(c, lambda, samples, seed);
    json results;
    results["exact"] = r.exact;
    results["probability"] = rat_str(r.probability);
    results["probability_float"] = to_double(r.probability);
    if (r.exact) {
        results["subsets_with_mostly_miss"] = r.subsets_with_mostly_miss;
        results["subsets_total"] = r.subsets_total;
    } else {
        results["samples"] = r.samples;
        results["ci_low"] = r.ci_low;
        results["ci_high"] = r.ci_high;
    }
    const bool abnormal = r.probability < Rat(1) - gamma;
    results["abnormal"] = abnormal;
    std::cerr << (r.exact ? "exact" : "monte-carlo") << " Pr[some x mostly misses] = "
              << to_double(r.probability) << " -> "
              << (abnormal ? "ABNORMAL" : "not abnormal") << '\n';
    env.emit(results);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"projection / merger toolkit"};
    app.require_subcommand(1);

    // verify-scheme
    std::string scheme;
    std::uint64_t vs_n = 10, vs_k = 2;
    std::uint32_t vs_t = 3;
    std::vector<std::uint32_t> vs_cutoffs;
    auto* vs = app.add_subcommand("verify-scheme", "build a named scheme and check its bound");
    vs->add_option("scheme", scheme,
                   "maj3 | gr3-figure | gr3-literal | product | threshold")
        ->required();
    vs->add_option("--n", vs_n, "grid side")->required();
    vs->add_option("--t", vs_t, "dimension (product/threshold)");
    vs->add_option("--k", vs_k, "per-axis factor (product)");
    vs->add_option("--cutoffs", vs_cutoffs, "threshold band cutoffs");

    // search-exhaustive / search-local
    std::uint64_t se_n = 2, se_seed = 0, se_steps = 100000;
    std::uint32_t se_t = 3, se_c = 2, se_s = 2, se_shards = 1;
    bool se_nosym = false;
    auto* se = app.add_subcommand("search-exhaustive", "certified min-max projection search");
    auto* sl = app.add_subcommand("search-local", "simulated annealing search");
    for (auto* sub : {se, sl}) {
        sub->add_option("--n", se_n)->required();
        sub->add_option("--t", se_t)->required();
        sub->add_option("--c", se_c)->required();
        sub->add_option("--s", se_s);
        sub->add_option("--shards", se_shards);
    }
    se->add_flag("--no-symmetry", se_nosym, "disable symmetry reductions");
    sl->add_option("--seed", se_seed);
    sl->add_option("--steps", se_steps);

    // solve-constants
    double sc_tol = 1e-10;
    bool sc_literal = false;
    auto* sc = app.add_subcommand("solve-constants", "bound constants via bisection");
    sc->add_option("--tolerance", sc_tol)->check(CLI::PositiveNumber);
    sc->add_flag("--literal-equation", sc_literal);

    // render
    std::string r_in, r_out = "projection";
    std::vector<std::string> r_axes = {"0,1"};
    auto* rd = app.add_subcommand("render", "SVG projection heatmaps");
    rd->add_option("partition", r_in, "partition file")->required();
    rd->add_option("--axes", r_axes, "axis pairs i,j");
    rd->add_option("--out", r_out, "output path prefix");

    // merger-eval
    std::string me_in, me_eps = "1/4", me_mode = "exact";
    std::uint32_t me_s = 1;
    auto* me = app.add_subcommand("merger-eval", "strong/weak merger check");
    me->add_option("merger", me_in, "merger table file")->required();
    me->add_option("--eps", me_eps, "closeness parameter, rational p/q");
    me->add_option("--mode", me_mode, "exact | heuristic");
    me->add_option("--uniform-set", me_s, "size of the jointly-uniform coordinate set");

    // abnormal
    std::string ab_in, ab_gamma = "1/8", ab_lambda = "1/2";
    std::uint64_t ab_samples = 100000, ab_seed = 1;
    auto* ab = app.add_subcommand("abnormal", "conductor abnormality probability");
    ab->add_option("conductor", ab_in, "conductor file")->required();
    ab->add_option("--gamma", ab_gamma);
    ab->add_option("--lambda", ab_lambda);
    ab->add_option("--samples", ab_samples);
    ab->add_option("--seed", ab_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (vs->parsed()) return cmd_verify_scheme(scheme, vs_n, vs_t, vs_k, vs_cutoffs);
        if (se->parsed())
            return cmd_search(true, se_n, se_t, se_c, se_s, 0, 0, se_shards, se_nosym);
        if (sl->parsed())
            return cmd_search(false, se_n, se_t, se_c, se_s, se_seed, se_steps, 1, false);
        if (sc->parsed()) return cmd_solve_constants(sc_tol, sc_literal);
        if (rd->parsed()) return cmd_render(r_in, r_axes, r_out);
        if (me->parsed()) return cmd_merger_eval(me_in, me_eps, me_mode, me_s);
        if (ab->parsed()) return cmd_abnormal(ab_in, ab_gamma, ab_lambda, ab_samples, ab_seed);
    } catch (const BudgetError& b) {
        std::cerr << "budget refusal: " << b.what() << '\n';
        return kExitBudget;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.rfind("cannot read", 0) == 0 || what.rfind("cannot write", 0) == 0 ||
            what.rfind("write failed", 0) == 0) {
            std::cerr << "I/O error: " << what << '\n';
            return kExitIo;
        }
        std::cerr << "error: " << what << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
