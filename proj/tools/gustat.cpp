// gustat: partitions, diagrams, exact cumulants and RCM simulation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "gustat/gustat.hpp"

namespace fs = std::filesystem;
using namespace gustat;

namespace {

struct Globals {
    int threads = 1;
    int cap = kDefaultCellCap;
    std::string out_dir = ".";

    fs::path resolve(const std::string& name) const {
        fs::path p(name);
        return p.is_absolute() ? p : fs::path(out_dir) / p;
    }
};

int run_partitions(const Globals& g, int j, int k, bool cnf, bool non_flat, bool connected, int blocks, const std::string& out) {
    EnumerationOptions eo;
    eo.cap = g.cap;
    eo.non_flat_only = cnf || non_flat;
    eo.connected_only = cnf || connected;
    if (blocks > 0) eo.block_count = blocks;
    auto parts = PartitionEnumerator(j, k, eo).collect();
    auto path = g.resolve(out);
    write_csv_atomic(path, partitions_table(parts));
    std::cout << parts.size() << " partitions -> " << path.string() << "\n";
    return 0;
}

int run_diagram(const Globals& g, const std::string& motif_name, int j, const std::string& out, const std::string& d_out) {
    auto motif = resolve_motif(motif_name);
    auto points = sigma_diagram(motif, j, g.cap);
    auto hull = upper_hull(points);
    auto path = g.resolve(out);
    write_csv_atomic(path, diagram_table(points, hull, j, motif));
    auto dpath = g.resolve(d_out);
    write_csv_atomic(dpath, profile_table(cnf_profile(motif, j, g.cap)));
    std::cout << points.size() << " points, " << hull.on_hull.size() << " on the upper hull -> " << path.string() << "\n";
    return 0;
}

int run_exact(const Globals& g, const std::string& spec_file, long long n, int order, bool oracle, const std::string& out,
              const std::string& csv) {
    auto req = exact_request_from_json(read_json(spec_file));
    req.n = n;
    req.order = order;
    req.oracle = oracle;
    req.options.cap = g.cap;
    req.options.threads = g.threads;
    if (n < 1 || order < 1) throw ArgumentError("n and order must be positive");
    auto result = exact_analysis(req);
    auto path = g.resolve(out);
    write_json_atomic(path, result);
    write_csv_atomic(g.resolve(csv), cumulant_table(cumulant_report_from_json(result)));
    std::cout << "kappa_1 = " << result["cumulants"][0].get<std::string>();
    if (order >= 2) std::cout << ", kappa_2 = " << result["cumulants"][1].get<std::string>();
    std::cout << " -> " << path.string() << "\n";
    if (oracle) std::cout << "oracle_match: " << (result["oracle_match"].get<bool>() ? "true" : "false") << "\n";
    return 0;
}

int run_simulate(const Globals& g, const std::string& config_file, bool threshold) {
    auto doc = read_json(config_file);
    auto cfg = simulation_config_from_json(doc);
    threshold = threshold || doc.value("experiment", "") == "threshold";
    auto res = threshold ? threshold_experiment(cfg, g.threads) : run_simulation(cfg, g.threads);
    auto csv = g.resolve(cfg.replicates_csv);
    auto summary = g.resolve(cfg.summary_json);
    write_csv_atomic(csv, replicates_table(res));
    write_json_atomic(summary, to_json(res));
    for (const auto& r : res.rows)
        std::cout << "a=" << r.a << " c=" << r.c << " n=" << r.n << " mean=" << (r.cumulants.empty() ? 0.0 : r.cumulants[0])
                  << " P(N=0)=" << r.p_zero << "\n";
    std::cout << "-> " << csv.string() << ", " << summary.string() << "\n";
    return 0;
}

int run_report(const Globals& g, const std::vector<std::string>& inputs, const std::string& out, const std::string& csv) {
    if (inputs.empty()) throw ArgumentError("report needs at least one input");
    std::vector<std::pair<std::string, nlohmann::json>> docs;
    for (const auto& in : inputs) {
        if (!fs::exists(in)) throw ArgumentError("missing input " + in);
        docs.emplace_back(fs::path(in).filename().string(), read_json(in));
    }
    CsvTable table;
    auto merged = merge_reports(docs, table);
    write_json_atomic(g.resolve(out), merged);
    write_csv_atomic(g.resolve(csv), table);
    std::cout << merged["rows"].size() << " rows -> " << g.resolve(out).string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized U-statistics and random-connection subgraph counts"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--cap", g.cap, "largest grid (j*k cells) to enumerate")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "directory for relative output paths");

    int j = 0, k = 0, blocks = 0, order = 2;
    long long n = 0;
    bool cnf = false, non_flat = false, connected = false, oracle = false, threshold = false;
    std::string out, d_out = "diagram_d.csv", csv, motif = "triangle", spec, config;
    std::vector<std::string> inputs;

    auto* parts = app.add_subcommand("partitions", "enumerate set partitions of the j x k grid");
    parts->add_option("--j", j, "rows")->required();
    parts->add_option("--k", k, "columns")->required();
    parts->add_flag("--cnf", cnf, "connected non-flat only");
    parts->add_flag("--non-flat", non_flat);
    parts->add_flag("--connected", connected);
    parts->add_option("--blocks", blocks, "exact block count");
    parts->add_option("--out", out)->default_str("partitions.csv");

    auto* diag = app.add_subcommand("diagram", "integer diagram of a motif");
    diag->add_option("--motif", motif, "triangle, cycle<k>, path<k>, complete<k>, star<k> or an edge-list file");
    diag->add_option("--j", j)->required();
    diag->add_option("--out", out)->default_str("diagram.csv");
    diag->add_option("--d-out", d_out, "per-block-count table");

    auto* exact = app.add_subcommand("exact", "exact moments and cumulants from a spec file");
    exact->add_option("--spec", spec)->required()->check(CLI::ExistingFile);
    exact->add_option("--n", n)->required();
    exact->add_option("--order", order);
    exact->add_flag("--oracle", oracle, "compare with exhaustive enumeration");
    exact->add_option("--out", out)->default_str("cumulants.json");
    exact->add_option("--csv", csv)->default_str("cumulants.csv");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo runs from a config file");
    sim->add_option("config", config)->required()->check(CLI::ExistingFile);
    sim->add_flag("--threshold", threshold, "containment experiment checks");

    auto* rep = app.add_subcommand("report", "merge summaries");
    rep->add_option("inputs", inputs);
    rep->add_option("--out", out)->default_str("report.json");
    rep->add_option("--csv", csv)->default_str("report.csv");

    app.fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (out.empty()) {
            if (*parts) out = "partitions.csv";
            else if (*diag) out = "diagram.csv";
            else if (*exact) out = "cumulants.json";
            else out = "report.json";
        }
        if (csv.empty()) csv = *exact ? "cumulants.csv" : "report.csv";
        if (*parts) return run_partitions(g, j, k, cnf, non_flat, connected, blocks, out);
        if (*diag) return run_diagram(g, motif, j, out, d_out);
        if (*exact) return run_exact(g, spec, n, order, oracle, out, csv);
        if (*sim) return run_simulate(g, config, threshold);
        if (*rep) return run_report(g, inputs, out, csv);
    } catch (const SizeLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        // invalid_argument / domain_error land here too
        if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e)) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
