#include "plnmf/run_report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace plnmf {

namespace {

using nlohmann::json;

json phases_to_json(const PhaseTimes& pt) {
    return json{{"precompute_h", pt.precompute_h}, {"update_h", pt.update_h},
                {"precompute_w", pt.precompute_w}, {"update_w", pt.update_w},
                {"phase1", pt.phase1},             {"phase2", pt.phase2},
                {"phase3", pt.phase3},             {"normalize", pt.normalize},
                {"error_eval", pt.error_eval}};
}

PhaseTimes phases_from_json(const json& j) {
    PhaseTimes pt;
    pt.precompute_h = j.at("precompute_h").get<double>();
    pt.update_h = j.at("update_h").get<double>();
    pt.precompute_w = j.at("precompute_w").get<double>();
    pt.update_w = j.at("update_w").get<double>();
    pt.phase1 = j.at("phase1").get<double>();
    pt.phase2 = j.at("phase2").get<double>();
    pt.phase3 = j.at("phase3").get<double>();
    pt.normalize = j.at("normalize").get<double>();
    pt.error_eval = j.at("error_eval").get<double>();
    return pt;
}

}  // namespace

std::string report_to_json(const RunReport& r) {
    json j;
    j["problem"] = {{"v", r.v}, {"d", r.d}, {"k", r.k}, {"nnz", r.nnz}, {"sparsity", r.sparsity}};
    j["algorithm"] = r.algorithm;
    j["tile"] = {{"size", r.tile_size}, {"provenance", r.tile_provenance}};
    j["config"] = {{"epsilon", r.epsilon},
                   {"seed", r.seed},
                   {"max_iters", r.max_iters},
                   {"rel_tol", r.rel_tol},
                   {"error_every", r.error_every},
                   {"threads", r.threads},
                   {"deterministic", r.deterministic}};
    j["initial_rel_error"] = r.initial_rel_error;
    j["final_rel_error"] = r.final_rel_error;
    j["total_seconds"] = r.total_seconds;
    j["phase_seconds"] = phases_to_json(r.phase_seconds);
    j["cost_model"] = json{{"fasthals_total", r.cost_fasthals_total}};
    if (r.cost_vol_at_tile) j["cost_model"]["vol_at_tile"] = *r.cost_vol_at_tile;
    j["trace"] = json::array();
    for (const TraceRecord& rec : r.trace) {
        j["trace"].push_back({{"iteration", rec.iteration},
                              {"rel_error", rec.rel_error},
                              {"elapsed_s", rec.elapsed_s},
                              {"phases", phases_to_json(rec.phases)}});
    }
    return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunReport r;
    r.v = j.at("problem").at("v").get<index_t>();
    r.d = j.at("problem").at("d").get<index_t>();
    r.k = j.at("problem").at("k").get<index_t>();
    r.nnz = j.at("problem").at("nnz").get<index_t>();
    r.sparsity = j.at("problem").at("sparsity").get<double>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.tile_size = j.at("tile").at("size").get<index_t>();
    r.tile_provenance = j.at("tile").at("provenance").get<std::string>();
    r.epsilon = j.at("config").at("epsilon").get<double>();
    r.seed = j.at("config").at("seed").get<std::uint64_t>();
    r.max_iters = j.at("config").at("max_iters").get<index_t>();
    r.rel_tol = j.at("config").at("rel_tol").get<double>();
    r.error_every = j.at("config").at("error_every").get<index_t>();
    r.threads = j.at("config").at("threads").get<int>();
    r.deterministic = j.at("config").at("deterministic").get<bool>();
    r.initial_rel_error = j.at("initial_rel_error").get<double>();
    r.final_rel_error = j.at("final_rel_error").get<double>();
    r.total_seconds = j.at("total_seconds").get<double>();
    r.phase_seconds = phases_from_json(j.at("phase_seconds"));
    r.cost_fasthals_total = j.at("cost_model").at("fasthals_total").get<double>();
    if (j.at("cost_model").contains("vol_at_tile"))
        r.cost_vol_at_tile = j.at("cost_model").at("vol_at_tile").get<double>();
    for (const json& rec : j.at("trace")) {
        TraceRecord tr;
        tr.iteration = rec.at("iteration").get<index_t>();
        tr.rel_error = rec.at("rel_error").get<double>();
        tr.elapsed_s = rec.at("elapsed_s").get<double>();
        tr.phases = phases_from_json(rec.at("phases"));
        r.trace.push_back(tr);
    }
    return r;
}

void write_run_report(const RunReport& report, std::ostream& out, ReportFormat format) {
    if (format == ReportFormat::json) {
        out << report_to_json(report) << '\n';
    } else {
        out << "iteration,rel_error,elapsed_s\n";
        char buf[96];
        for (const TraceRecord& rec : report.trace) {
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.9g\n",
                          static_cast<long long>(rec.iteration), rec.rel_error, rec.elapsed_s);
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("write_run_report: stream write failed");
}

void write_run_report(const RunReport& report, const std::string& path, ReportFormat format) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_run_report: cannot open " + path);
    write_run_report(report, f, format);
    f.flush();
    if (!f) throw std::runtime_error("write_run_report: write failed for " + path);
}

}  // namespace plnmf
