#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "plnmf/cost_model.hpp"
#include "plnmf/hals.hpp"
#include "plnmf/linalg.hpp"
#include "plnmf/matrix_market.hpp"
#include "plnmf/metrics.hpp"
#include "plnmf/run_report.hpp"
#include "plnmf/solver.hpp"
#include "plnmf/tiled.hpp"

using namespace plnmf;

namespace {

struct Options {
    std::string input;
    index_t k = 0;
    std::string algorithm = "pl-nmf";
    std::string tile = "auto";
    std::uint64_t cache_bytes = 35ull << 20;
    std::uint64_t word_bytes = 8;
    index_t max_iters = 100;
    double tol = 1e-6;
    double epsilon = 1e-16;
    std::uint64_t seed = 0;
    int threads = 0;
    bool deterministic = false;
    index_t error_every = 1;
    std::string output;
    std::string format = "json";
    // model-only shape flags
    index_t v = 0;
    index_t d = 0;
    // sweep-only grid
    std::string grid;
};

struct TileChoice {
    index_t size = 0;
    std::string provenance = "none";
};

MachineModel machine_of(const Options& o) { return MachineModel{o.cache_bytes, o.word_bytes}; }

SolverConfig config_of(const Options& o) {
    SolverConfig cfg;
    cfg.rank = o.k;
    cfg.epsilon = o.epsilon;
    cfg.max_iters = o.max_iters;
    cfg.rel_tol = o.tol;
    cfg.seed = o.seed;
    cfg.error_every = o.error_every;
    cfg.deterministic = o.deterministic;
    return cfg;
}

ReportFormat format_of(const Options& o) {
    if (o.format == "json") return ReportFormat::json;
    if (o.format == "csv-trace") return ReportFormat::csv_trace;
    throw std::invalid_argument("--format must be json or csv-trace");
}

Algorithm algorithm_of(const Options& o) {
    if (o.algorithm == "fast-hals") return Algorithm::reference;
    if (o.algorithm == "pl-nmf") return Algorithm::tiled;
    throw std::invalid_argument("--algorithm must be fast-hals or pl-nmf");
}

TileChoice resolve_tile(const Options& o, const ProblemShape& shape) {
    const MachineModel machine = machine_of(o);
    if (o.tile == "auto") {
        const double t_model = model_tile_size(shape.k, machine);
        const index_t lo = std::clamp<index_t>(static_cast<index_t>(std::floor(t_model)), 1, shape.k);
        const index_t hi = std::clamp<index_t>(static_cast<index_t>(std::ceil(t_model)), 1, shape.k);
        index_t pick = lo;
        if (hi != lo && vol(shape, machine, hi).total < vol(shape, machine, lo).total) pick = hi;
        return {pick, "model"};
    }
    if (o.tile == "scan") return {best_integer_tile(shape, machine), "brute-force"};
    index_t value = 0;
    try {
        value = static_cast<index_t>(std::stoll(o.tile));
    } catch (...) {
        throw std::invalid_argument("--tile must be an integer, 'auto', or 'scan'");
    }
    if (value < 1 || value > shape.k)
        throw std::invalid_argument("--tile must lie in [1, K]");
    return {value, "explicit"};
}

void apply_threads(const Options& o) {
    if (o.threads > 0) omp_set_num_threads(o.threads);
}

void warn_rank(const ProblemShape& shape) {
    if (shape.k > std::min(shape.v, shape.d))
        std::cerr << "warning: K = " << shape.k << " exceeds min(V, D) = "
                  << std::min(shape.v, shape.d) << "\n";
}

void emit_report(const RunReport& report, const Options& o) {
    if (o.output.empty())
        write_run_report(report, std::cout, format_of(o));
    else
        write_run_report(report, o.output, format_of(o));
}

RunReport build_report(const Options& o, const InputMatrix& a, const TileChoice& tile,
                       const ConvergenceTrace& trace) {
    RunReport r;
    r.v = a.rows();
    r.d = a.cols();
    r.k = o.k;
    r.nnz = a.nnz();
    r.sparsity = a.sparsity();
    r.algorithm = o.algorithm;
    r.tile_size = tile.size;
    r.tile_provenance = tile.provenance;
    r.epsilon = o.epsilon;
    r.seed = o.seed;
    r.max_iters = o.max_iters;
    r.rel_tol = o.tol;
    r.error_every = o.error_every;
    r.threads = omp_get_max_threads();
    r.deterministic = o.deterministic;
    r.initial_rel_error = trace.initial_error;
    r.final_rel_error = trace.records.empty() ? trace.initial_error
                                              : trace.records.back().rel_error;
    r.total_seconds = trace.total_seconds;
    r.phase_seconds = trace.totals;
    const ProblemShape shape{a.rows(), a.cols(), o.k};
    r.cost_fasthals_total = cost_fasthals_total(shape, machine_of(o)).total;
    if (tile.size > 0) r.cost_vol_at_tile = vol(shape, machine_of(o), tile.size).total;
    r.trace = trace.records;
    return r;
}

int run_factorize(const Options& o) {
    apply_threads(o);
    const InputMatrix a = read_matrix_market(o.input);
    const ProblemShape shape{a.rows(), a.cols(), o.k};
    warn_rank(shape);

    const Algorithm alg = algorithm_of(o);
    TileChoice tile;
    SolverConfig cfg = config_of(o);
    if (alg == Algorithm::tiled) {
        tile = resolve_tile(o, shape);
        cfg.tile_size = tile.size;
    }

    FactorPair factors = init_factors(a.rows(), a.cols(), cfg);
    const ConvergenceTrace trace = iterate(a, factors, cfg, alg);
    emit_report(build_report(o, a, tile, trace), o);
    return 0;
}

int run_model(const Options& o) {
    index_t v = o.v;
    index_t d = o.d;
    if (!o.input.empty()) {
        const auto [rows, cols] = peek_matrix_market_shape(o.input);
        v = rows;
        d = cols;
    }
    if (v < 1) throw std::invalid_argument("model: provide --v (or --input)");
    if (o.k < 1) throw std::invalid_argument("model: provide --k");
    const MachineModel machine = machine_of(o);
    const ProblemShape shape{v, std::max<index_t>(d, 1), o.k};

    std::printf("shape: V=%lld D=%s K=%lld\n", static_cast<long long>(v),
                d >= 1 ? std::to_string(d).c_str() : "?", static_cast<long long>(o.k));
    std::printf("cache: %llu bytes = %llu words of %llu bytes\n",
                static_cast<unsigned long long>(machine.cache_bytes),
                static_cast<unsigned long long>(machine.cache_words()),
                static_cast<unsigned long long>(machine.word_bytes));

    std::printf("w column-loop movement: %llu\n",
                static_cast<unsigned long long>(cost_w_column_loop(shape)));
    if (d >= 1) {
        std::printf("h row-loop movement: %llu\n",
                    static_cast<unsigned long long>(cost_h_row_loop(shape)));
        std::printf("total movement per iteration: %.6e\n",
                    cost_fasthals_total(shape, machine).total);
    } else {
        std::printf("h row-loop movement: (needs --d)\n");
        std::printf("total movement per iteration: (needs --d)\n");
    }

    const double t_model = model_tile_size(o.k, machine);
    std::printf("analytic tile size: %.2f\n", t_model);
    std::printf("stationary-point tile size: %.4f\n", stationary_tile_size(o.k, machine));
    const index_t best = best_integer_tile(shape, machine);
    const double best_vol = vol(shape, machine, best).total;
    std::printf("best integer tile: %lld\n", static_cast<long long>(best));
    std::printf("w update movement at best tile: %.6e\n", best_vol);
    std::printf("movement ratio (column-loop / tiled): %.2f\n",
                static_cast<double>(cost_w_column_loop(shape)) / best_vol);
    return 0;
}

std::vector<index_t> parse_grid(const Options& o, const ProblemShape& shape) {
    std::set<index_t> grid;
    if (!o.grid.empty()) {
        std::stringstream ss(o.grid);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const index_t t = static_cast<index_t>(std::stoll(item));
            if (t < 1 || t > shape.k)
                throw std::invalid_argument("--grid entries must lie in [1, K]");
            grid.insert(t);
        }
    } else {
        for (index_t t = 1; t <= shape.k; t *= 2) grid.insert(t);
        grid.insert(shape.k);
        Options auto_opt = o;
        auto_opt.tile = "auto";
        grid.insert(resolve_tile(auto_opt, shape).size);
    }
    return {grid.begin(), grid.end()};
}

int run_sweep_tiles(const Options& o) {
    if (algorithm_of(o) != Algorithm::tiled)
        throw std::invalid_argument("sweep-tiles requires --algorithm pl-nmf");
    apply_threads(o);
    const InputMatrix a = read_matrix_market(o.input);
    const ProblemShape shape{a.rows(), a.cols(), o.k};
    warn_rank(shape);
    const MachineModel machine = machine_of(o);

    Options auto_opt = o;
    auto_opt.tile = "auto";
    const index_t recommended = resolve_tile(auto_opt, shape).size;
    const std::vector<index_t> grid = parse_grid(o, shape);

    std::printf("%6s  %12s  %16s  %s\n", "tile", "seconds", "predicted_vol", "");
    std::vector<double> seconds(grid.size());
    std::vector<double> predicted(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SolverConfig cfg = config_of(o);
        cfg.tile_size = grid[i];
        FactorPair factors = init_factors(a.rows(), a.cols(), cfg);
        const ConvergenceTrace trace = iterate(a, factors, cfg, Algorithm::tiled);
        seconds[i] = trace.total_seconds - trace.totals.error_eval;
        predicted[i] = vol(shape, machine, grid[i]).total;
        std::printf("%6lld  %12.4f  %16.0f  %s\n", static_cast<long long>(grid[i]), seconds[i],
                    predicted[i], grid[i] == recommended ? "<- model" : "");
    }

    const auto measured_arg = std::min_element(seconds.begin(), seconds.end()) - seconds.begin();
    const auto predicted_arg =
        std::min_element(predicted.begin(), predicted.end()) - predicted.begin();
    if (std::abs(measured_arg - predicted_arg) > 1)
        std::cerr << "warning: measured optimum (T=" << grid[measured_arg]
                  << ") is more than one grid step from the predicted optimum (T="
                  << grid[predicted_arg] << ")\n";

    if (!o.output.empty()) {
        std::ofstream f(o.output);
        if (!f) throw std::runtime_error("cannot open " + o.output);
        f << "tile,seconds,predicted_vol,model_recommended\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            f << grid[i] << ',' << seconds[i] << ',' << predicted[i] << ','
              << (grid[i] == recommended ? 1 : 0) << '\n';
        if (!f) throw std::runtime_error("write failed for " + o.output);
    }
    return 0;
}

int run_compare(const Options& o) {
    apply_threads(o);
    const InputMatrix a = read_matrix_market(o.input);
    const ProblemShape shape{a.rows(), a.cols(), o.k};
    warn_rank(shape);

    SolverConfig cfg = config_of(o);
    const TileChoice tile = resolve_tile(o, shape);
    cfg.tile_size = tile.size;
    const TilingPlan plan = plan_tiles(o.k, tile.size);

    const FactorPair start = init_factors(a.rows(), a.cols(), cfg);
    FactorPair ref = start;
    FactorPair til = start;
    UpdateWorkspace ws_ref(a.rows(), a.cols(), o.k);
    UpdateWorkspace ws_til(a.rows(), a.cols(), o.k);

    auto eval = [&](const FactorPair& f, UpdateWorkspace& ws) {
        gram_into(f.w, ws.s);
        ErrorReport rep = relative_error_gram(a.norm_sq(), f.w, f.ht, ws.p, ws.q, ws.s);
        if (rep.relative < 1e-6) rep = relative_error_direct(a, f.w, f.ht);
        return rep.relative;
    };

    // Shared initialization: one error value for both runs.
    precompute_w_products(a, start.ht, ws_ref);
    const double initial = eval(start, ws_ref);
    std::printf("initial rel error: %.12e\n", initial);
    const std::string tiled_head = "pl-nmf(T=" + std::to_string(tile.size) + ")";
    std::printf("%6s  %18s  %18s  %12s  %12s\n", "iter", "fast-hals", tiled_head.c_str(), "dev(W)",
                "dev(Ht)");

    double max_dev = 0.0;
    for (index_t it = 1; it <= o.max_iters; ++it) {
        precompute_h_products(a, ref.w, ws_ref);
        update_h_reference(ref, ws_ref, cfg);
        precompute_w_products(a, ref.ht, ws_ref);
        update_w_reference(ref, ws_ref, cfg);

        precompute_h_products(a, til.w, ws_til);
        update_h_tiled(til, ws_til, plan, cfg);
        precompute_w_products(a, til.ht, ws_til);
        update_w_tiled(til, ws_til, plan, cfg);

        const double dev_w = factor_deviation(ref.w, til.w);
        const double dev_h = factor_deviation(ref.ht, til.ht);
        max_dev = std::max({max_dev, dev_w, dev_h});
        std::printf("%6lld  %18.12e  %18.12e  %12.3e  %12.3e\n", static_cast<long long>(it),
                    eval(ref, ws_ref), eval(til, ws_til), dev_w, dev_h);
    }
    std::printf("max factor deviation: %.3e\n", max_dev);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-negative matrix factorization with locality-tiled HALS updates"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", o.input, "Matrix Market file");
        if (needs_input) in->required();
        cmd->add_option("--k", o.k, "factorization rank")->required();
        cmd->add_option("--tile", o.tile, "tile size: integer, 'auto', or 'scan'");
        cmd->add_option("--cache-bytes", o.cache_bytes, "cache size for the movement model");
        cmd->add_option("--word-bytes", o.word_bytes, "bytes per modeled word");
        cmd->add_option("--max-iters", o.max_iters, "outer iteration cap");
        cmd->add_option("--tol", o.tol, "relative objective-change stop tolerance");
        cmd->add_option("--epsilon", o.epsilon, "clamp floor");
        cmd->add_option("--seed", o.seed, "factor initialization seed");
        cmd->add_option("--threads", o.threads, "worker thread cap (default: all)");
        cmd->add_flag("--deterministic", o.deterministic, "fixed reduction order");
        cmd->add_option("--error-every", o.error_every, "objective evaluation cadence");
        cmd->add_option("--output", o.output, "report path (default: stdout)");
        cmd->add_option("--format", o.format, "json | csv-trace");
    };

    CLI::App* fact = app.add_subcommand("factorize", "run one factorization and write a report");
    add_common(fact, true);
    fact->add_option("--algorithm", o.algorithm, "fast-hals | pl-nmf");

    CLI::App* sweep = app.add_subcommand("sweep-tiles", "time a grid of tile sizes");
    add_common(sweep, true);
    sweep->add_option("--algorithm", o.algorithm, "must be pl-nmf");
    sweep->add_option("--grid", o.grid, "comma-separated tile sizes (default: powers of two)");

    CLI::App* model = app.add_subcommand("model", "print the data-movement model");
    model->add_option("--input", o.input, "Matrix Market file (shape only)");
    model->add_option("--v", o.v, "rows of A");
    model->add_option("--d", o.d, "columns of A");
    model->add_option("--k", o.k, "factorization rank")->required();
    model->add_option("--cache-bytes", o.cache_bytes, "cache size");
    model->add_option("--word-bytes", o.word_bytes, "bytes per modeled word");

    CLI::App* compare = app.add_subcommand("compare", "run fast-hals and pl-nmf in lockstep");
    add_common(compare, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (fact->parsed()) return run_factorize(o);
        if (sweep->parsed()) return run_sweep_tiles(o);
        if (model->parsed()) return run_model(o);
        if (compare->parsed()) return run_compare(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
