#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plnmf/solver.hpp"
#include "plnmf/workspace.hpp"

namespace plnmf {

enum class ReportFormat { json, csv_trace };

// Everything one factorization run produces, serialized with stable field
// names (schema documented in the README).
struct RunReport {
    index_t v = 0;
    index_t d = 0;
    index_t k = 0;
    index_t nnz = 0;
    double sparsity = 0;

    std::string algorithm;  // "fast-hals" | "pl-nmf"
    index_t tile_size = 0;
    std::string tile_provenance;  // "explicit" | "model" | "brute-force" | "none"

    double epsilon = 0;
    std::uint64_t seed = 0;
    index_t max_iters = 0;
    double rel_tol = 0;
    index_t error_every = 1;
    int threads = 0;
    bool deterministic = false;

    double initial_rel_error = 0;
    double final_rel_error = 0;
    double total_seconds = 0;
    PhaseTimes phase_seconds;

    double cost_fasthals_total = 0;
    std::optional<double> cost_vol_at_tile;  // tiled runs only

    std::vector<TraceRecord> trace;
};

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// csv_trace writes "iteration,rel_error,elapsed_s" plus one row per record.
void write_run_report(const RunReport& report, const std::string& path, ReportFormat format);
void write_run_report(const RunReport& report, std::ostream& out, ReportFormat format);

}  // namespace plnmf
