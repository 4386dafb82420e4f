#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vslicer/basis.hpp"
#include "vslicer/complexity.hpp"
#include "vslicer/errors.hpp"
#include "vslicer/geometry.hpp"
#include "vslicer/lattice.hpp"
#include "vslicer/polytope.hpp"
#include "vslicer/random.hpp"
#include "vslicer/report.hpp"
#include "vslicer/slicer.hpp"

namespace vslicer::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Largest list the volume command will materialize (n * d doubles).
constexpr std::size_t kMaxListEntries = std::size_t{1} << 25;

struct Common {
    std::optional<int> dim;
    std::optional<double> alpha;
    std::optional<std::int64_t> trials;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
    std::optional<int> threads;
    std::string basis_file;
};

struct Outcome {
    std::vector<ResultRow> rows;
    int exit_code = kExitOk;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dim", c.dim, "Dimension d")->check(CLI::Range(2, 1000));
    cmd->add_option("--alpha", c.alpha, "List radius factor alpha (cap height for `cap`)");
    cmd->add_option("--trials", c.trials, "Number of trials, rays or samples")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Root seed (default 0)");
    cmd->add_option("--out", c.out_path, "Output file (default stdout)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", c.threads, "Worker threads (fallback: VSLICER_THREADS)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--basis-file", c.basis_file, "Lattice basis in the text basis format");
}

int resolve_threads(const Common& c) {
    if (c.threads) return *c.threads;
    if (const char* env = std::getenv("VSLICER_THREADS")) {
        try {
            const int t = std::stoi(env);
            if (t < 0) throw InputError("");
            return t;
        } catch (const std::exception&) {
            throw InputError(std::string("VSLICER_THREADS is not a non-negative integer: ") + env);
        }
    }
    return 0;
}

int require_dim(const Common& c, const char* cmd) {
    if (!c.dim) throw InputError(std::string(cmd) + ": --dim is required");
    return *c.dim;
}

double require_alpha_above_one(const Common& c, const char* cmd) {
    if (!c.alpha) throw InputError(std::string(cmd) + ": --alpha is required");
    if (!(*c.alpha > 1.0) || !std::isfinite(*c.alpha)) {
        throw InputError(std::string(cmd) + ": --alpha must be > 1");
    }
    return *c.alpha;
}

// Comma-separated items, each a number or an inclusive range lo:hi:step.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    std::stringstream items(spec);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        std::vector<double> parts;
        std::stringstream fields(item);
        std::string f;
        while (std::getline(fields, f, ':')) parts.push_back(parse_number(f));
        if (parts.size() == 1) {
            grid.push_back(parts[0]);
        } else if (parts.size() == 3) {
            const double lo = parts[0], hi = parts[1], step = parts[2];
            if (!(step > 0.0) || hi < lo) throw InputError("grid range '" + item + "' is empty");
            const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
            for (long long k = 0; k <= count; ++k) {
                // Trim accumulated rounding so 0.2 + 3 * 0.3 prints as 1.1.
                grid.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12);
            }
        } else {
            throw InputError("cannot parse grid item '" + item + "'");
        }
    }
    for (double g : grid) {
        if (!std::isfinite(g)) throw InputError("grid values must be finite");
    }
    if (grid.empty()) throw InputError("grid is empty");
    return grid;
}

ResultRow base_row(const std::string& experiment, const Common& c) {
    ResultRow r;
    r.experiment = experiment;
    r.set("seed", c.seed);
    return r;
}

LatticeBasis load_or_draw_basis(const Common& c, int d, const RandomStream& rng) {
    if (!c.basis_file.empty()) {
        LatticeBasis b = read_basis_file(c.basis_file);
        if (b.dim() != d) throw InputError("--basis-file dimension does not match --dim");
        return b;
    }
    RandomStream lattice_rng = rng.split(0);
    return random_lattice(d, lattice_rng);
}

constexpr std::size_t kExactBoundednessEntries = std::size_t{1} << 16;

Outcome cmd_volume(const Common& c, const std::string& source, std::optional<double> beta, int threads) {
    const int d = require_dim(c, "volume");
    const double alpha = require_alpha_above_one(c, "volume");
    const std::int64_t trials = c.trials.value_or(100000);
    const RandomStream root(c.seed);
    const std::size_t n = list_size(alpha, d);
    if (n > kMaxListEntries / static_cast<std::size_t>(d)) {
        throw ResourceError("volume: list of " + std::to_string(n) + " vectors in dimension " + std::to_string(d) +
                            " exceeds the memory limit");
    }

    ResultRow row = base_row("volume", c);
    row.set("source", source).set("dim", d).set("alpha", alpha).set("trials", trials).set("n", static_cast<std::int64_t>(n));

    RandomStream list_rng = root.split(0);
    std::optional<HalfspaceList> list;
    if (source == "sphere") {
        list = sphere_list(d, n, list_rng);
        row.predictor = volume_predictor_sphere(alpha).log2_per_dim;
    } else if (source == "ball") {
        list = ball_list(d, n, 1.0, list_rng);
        row.predictor = volume_predictor_ball(alpha).log2_per_dim;
    } else if (source == "beta_ball") {
        if (!beta) throw InputError("volume: --source beta_ball needs --beta");
        if (!(*beta > 0.0)) throw InputError("volume: --beta must be > 0");
        list = ball_list(d, n, *beta, list_rng);
        row.set("beta", *beta);
        row.predictor = volume_predictor_beta_ball(alpha, *beta).log2_per_dim;
    } else {
        // lattice: scaled so that vol(V) = vol(B); the ratio is then vol(V_L) / vol(V).
        if (d > 24) throw InputError("volume: --source lattice needs --dim <= 24");
        const LatticeBasis basis = load_or_draw_basis(c, d, root);
        const LatticeBasis unit = basis.scaled(1.0 / gh_radius(basis));
        const ShortVectorList svl = enumerate_short_vectors(unit, n);
        list = HalfspaceList(d, svl.vectors);
        row.set("alpha_effective", svl.alpha_effective);
        row.set("basis", c.basis_file.empty() ? std::string("random") : std::string("file"));
        row.predictor = volume_predictor_beta_ball(alpha, alpha).log2_per_dim;
    }

    VolumeOptions opts;
    opts.threads = threads;
    const VolumeEstimate est = estimate_volume(*list, trials, root.split(1), opts);
    // Rays miss thin unbounded cones, so small lists also get the exact test.
    // Past the cutoff n is far above 2d and unboundedness is negligible.
    bool bounded = est.bounded();
    const bool exact = n * static_cast<std::size_t>(d) <= kExactBoundednessEntries;
    if (bounded && exact) bounded = is_bounded(*list);
    row.estimate = bounded ? est.log2_ratio_per_dim : std::numeric_limits<double>::infinity();
    row.std_error = bounded ? est.std_error : std::numeric_limits<double>::quiet_NaN();
    row.set("bounded", bounded ? "true" : "false");
    row.set("bounded_check", exact ? "exact" : "rays");
    row.set("unbounded_rays", est.unbounded_rays_hit);

    Outcome o;
    o.rows.push_back(std::move(row));
    if (!bounded) o.exit_code = kExitDegenerate;
    return o;
}

Outcome cmd_wendel(const Common& c, std::optional<int> n_only, int threads) {
    const std::int64_t trials = c.trials.value_or(10000);
    std::vector<int> dims;
    if (c.dim) {
        dims.push_back(*c.dim);
    } else {
        for (int d = 2; d <= 5; ++d) dims.push_back(d);
    }
    const RandomStream root(c.seed);
    Outcome o;
    std::uint64_t cell = 0;
    for (int d : dims) {
        if (d > 6) throw InputError("wendel: the simulated column needs --dim <= 6");
        std::vector<int> ns;
        if (n_only) {
            if (*n_only < 1) throw InputError("wendel: --n must be >= 1");
            ns.push_back(*n_only);
        } else {
            for (int n = d + 1; n <= 3 * d; ++n) ns.push_back(n);
        }
        for (int n : ns) {
            const double exact = wendel_probability(n, d);
            const double freq = boundedness_frequency(d, n, trials, root.split(cell++), threads);
            ResultRow row = base_row("wendel", c);
            row.set("dim", d).set("n", n).set("trials", trials);
            row.estimate = freq;
            row.std_error = std::sqrt(exact * (1.0 - exact) / static_cast<double>(trials));
            row.predictor = exact;
            o.rows.push_back(std::move(row));
        }
    }
    return o;
}

std::vector<int> budget_ladder(std::optional<int> max_budget) {
    const int top = max_budget.value_or(8);
    if (top < 1) throw InputError("slicer: --budget must be >= 1");
    std::vector<int> ks;
    for (int k = 1; k <= top; k *= 2) ks.push_back(k);
    return ks;
}

Outcome cmd_slicer(const Common& c, const std::string& mode, std::optional<double> width_s,
                   std::optional<int> budget, const std::string& grid_spec, int threads) {
    const int d = require_dim(c, "slicer");
    const double alpha = require_alpha_above_one(c, "slicer");
    if (mode != "phase_scan" && d > kMaxExactDim) {
        throw InputError("slicer: --mode " + mode + " needs --dim <= 12 (exact CVP oracle)");
    }
    if (width_s && !(*width_s > 0.0)) throw InputError("slicer: --width-s must be > 0");
    const RandomStream root(c.seed);
    const LatticeBasis basis = load_or_draw_basis(c, d, root);
    const double width = width_s.value_or(default_width(basis));

    Outcome o;
    if (mode == "success_prob") {
        const std::int64_t trials = c.trials.value_or(2000);
        const int k = budget.value_or(1);
        if (k < 1) throw InputError("slicer: --budget must be >= 1");
        const ShortVectorList list = enumerate_short_vectors(basis, list_size(alpha, d));
        const SuccessStats s = success_by_budget(basis, list, {k}, trials, width, root.split(1), threads).front();
        ResultRow row = base_row("slicer_success", c);
        row.set("dim", d).set("alpha", alpha).set("trials", trials).set("width_s", width).set("budget", k);
        row.set("list_size", static_cast<std::int64_t>(s.list_size)).set("successes", s.successes);
        row.set("ci95_lo", s.ci95.first).set("ci95_hi", s.ci95.second);
        const BoundValue p_new = p_lower_bound_new(std::min(alpha, std::sqrt(2.0)));
        row.set("bound_new_log2_per_dim", p_new.log2_per_dim);
        try {
            row.set("bound_dlw_log2_per_dim", p_lower_bound_dlw(alpha).log2_per_dim);
        } catch (const DomainError&) {
            row.set("bound_dlw_log2_per_dim", "undefined");
        }
        row.estimate = s.p_hat;
        row.std_error = s.binomial_sigma();
        row.predictor = std::exp2(p_new.log2_per_dim * d);
        o.rows.push_back(std::move(row));
    } else if (mode == "budget_scaling") {
        const std::int64_t trials = c.trials.value_or(2000);
        const std::vector<int> ks = budget_ladder(budget);
        const ShortVectorList list = enumerate_short_vectors(basis, list_size(alpha, d));
        const std::vector<SuccessStats> stats = success_by_budget(basis, list, ks, trials, width, root.split(1), threads);
        const double p1 = stats.front().p_hat;
        for (const SuccessStats& s : stats) {
            ResultRow row = base_row("slicer_budget", c);
            row.set("dim", d).set("alpha", alpha).set("trials", trials).set("width_s", width).set("budget", s.budget);
            row.set("list_size", static_cast<std::int64_t>(s.list_size)).set("successes", s.successes);
            row.estimate = s.p_hat;
            row.std_error = s.binomial_sigma();
            row.predictor = std::min(1.0, s.budget * p1);
            o.rows.push_back(std::move(row));
        }
    } else {
        const std::int64_t samples = c.trials.value_or(1000);
        const std::vector<double> grid = parse_grid(grid_spec);
        const std::vector<PhasePoint> curve = phase_scan(basis, alpha, grid, samples, root.split(1), threads);
        for (const PhasePoint& p : curve) {
            ResultRow row = base_row("slicer_phase", c);
            row.set("dim", d).set("alpha", alpha).set("samples", samples).set("norm", p.norm);
            row.set("bin_width", p.bin_width).set("attempts", p.attempts);
            row.set("missing", p.missing ? "true" : "false");
            row.estimate = p.probability;
            row.std_error = p.missing ? kNaN
                                      : std::sqrt(p.probability * (1.0 - p.probability) / static_cast<double>(p.samples));
            row.predictor = kNaN;
            o.rows.push_back(std::move(row));
        }
    }
    return o;
}

Outcome cmd_tradeoff(const Common& c, const std::string& grid_spec) {
    const std::vector<double> grid = parse_grid(grid_spec);
    for (double g : grid) {
        if (!(g > 0.0)) throw InputError("tradeoff: space grid values must be positive");
    }
    Outcome o;
    for (const TradeoffPoint& p : tradeoff_curve(grid)) {
        ResultRow row = base_row("tradeoff", c);
        row.set("target_space", p.target_space).set("feasible", p.feasible ? "true" : "false");
        row.set("alpha", p.alpha).set("u", p.u).set("space", p.space_log2_per_dim);
        row.estimate = p.time_log2_per_dim;
        row.std_error = 0.0;
        row.predictor = kNaN;
        o.rows.push_back(std::move(row));
    }

    ResultRow cross = base_row("tradeoff_crossover", c);
    const double a = crossover_alpha();
    cross.set("bound_base", p_lower_bound_new(a).base);
    cross.estimate = a;
    cross.std_error = 0.0;
    cross.predictor = std::sqrt(10.0) / 3.0;
    o.rows.push_back(std::move(cross));

    // Closed-form anchor: alpha^2 = 10/9 with u at its lower limit delta, where
    // both bases are continuous.
    const double anchor_alpha = std::sqrt(10.0 / 9.0);
    const double anchor_u = tradeoff_delta(anchor_alpha);
    ResultRow arow = base_row("tradeoff_anchor", c);
    arow.set("alpha", anchor_alpha).set("u", anchor_u);
    arow.set("space", 0.5 * std::log2(tradeoff_space_base(anchor_alpha, anchor_u)));
    arow.estimate = 0.5 * std::log2(tradeoff_time_base(anchor_alpha, anchor_u));
    arow.std_error = 0.0;
    arow.predictor = 0.5 * std::log2(55.0 / 18.0);
    o.rows.push_back(std::move(arow));
    return o;
}

Outcome cmd_cap(const Common& c) {
    const int d = require_dim(c, "cap");
    if (!c.alpha) throw InputError("cap: --alpha is required");
    const CapRatio cr = cap_ratio(*c.alpha, d);
    ResultRow row = base_row("cap", c);
    row.set("dim", d).set("alpha", cr.alpha).set("exact_ratio", cr.exact_ratio);
    row.estimate = std::log2(cr.exact_ratio) / d;
    row.std_error = 0.0;
    row.predictor = cr.log2_per_dim;
    Outcome o;
    o.rows.push_back(std::move(row));
    return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Approximate Voronoi cells, random polytopes and the randomized slicer"};
    app.require_subcommand(1);

    Common common;
    std::string source = "sphere";
    std::optional<double> beta;
    std::string mode = "success_prob";
    std::optional<double> width_s;
    std::optional<int> budget;
    std::optional<int> wendel_n;
    std::string phase_grid = "0.2:3.0:0.2";
    std::string space_grid = "0.001,0.005:0.2:0.005";

    CLI::App* volume = app.add_subcommand("volume", "Volume of V_L relative to the unit ball");
    add_common(volume, common);
    volume->add_option("--source", source, "Where the list vectors come from")
        ->check(CLI::IsMember({"sphere", "ball", "beta_ball", "lattice"}));
    volume->add_option("--beta", beta, "Ball radius for --source beta_ball");

    CLI::App* wendel = app.add_subcommand("wendel", "Boundedness frequency against the exact formula");
    add_common(wendel, common);
    wendel->add_option("--n", wendel_n, "Single list size (default d+1..3d)");

    CLI::App* slicer = app.add_subcommand("slicer", "Randomized slicer experiments");
    add_common(slicer, common);
    slicer->add_option("--mode", mode, "Experiment")->check(CLI::IsMember({"success_prob", "phase_scan", "budget_scaling"}));
    slicer->add_option("--width-s", width_s, "Rerandomization width s (default 2 * gh radius)");
    slicer->add_option("--budget", budget, "Rerandomizations (success_prob) or largest K (budget_scaling)");
    slicer->add_option("--grid", phase_grid, "Norm grid for phase_scan, in gh units");

    CLI::App* tradeoff = app.add_subcommand("tradeoff", "Optimized space/time exponent curve");
    add_common(tradeoff, common);
    tradeoff->add_option("--grid", space_grid, "Space exponent grid: numbers or lo:hi:step, comma-separated");

    CLI::App* cap = app.add_subcommand("cap", "Spherical cap volume ratio");
    add_common(cap, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        const int threads = resolve_threads(common);
        if (common.trials && *common.trials < 1) throw InputError("--trials must be >= 1");
        Outcome o;
        if (volume->parsed()) {
            o = cmd_volume(common, source, beta, threads);
        } else if (wendel->parsed()) {
            o = cmd_wendel(common, wendel_n, threads);
        } else if (slicer->parsed()) {
            o = cmd_slicer(common, mode, width_s, budget, phase_grid, threads);
        } else if (tradeoff->parsed()) {
            o = cmd_tradeoff(common, space_grid);
        } else {
            o = cmd_cap(common);
        }

        const OutputFormat fmt = common.format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (common.out_path.empty()) {
            write_rows(out, o.rows, fmt);
        } else {
            std::ofstream file(common.out_path, std::ios::binary);
            if (!file) throw InputError("cannot open --out file '" + common.out_path + "'");
            write_rows(file, o.rows, fmt);
            if (!file) throw ResourceError("failed writing '" + common.out_path + "'");
        }
        if (o.exit_code == kExitDegenerate) err << "warning: polytope is unbounded\n";
        return o.exit_code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const DegenerateError& e) {
        err << "degenerate: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ResourceError& e) {
        err << "resource exhausted: " << e.what() << '\n';
        return kExitResource;
    }
}

}  // namespace vslicer::cli
