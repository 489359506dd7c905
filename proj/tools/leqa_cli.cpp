// leqa: command-line front end for latency estimation and the reference mapper.
//
//   leqa estimate  --in circuit.qn [--fabric 60x60] [--format json]
//   leqa simulate  --in circuit.qn [--seed 7] [--trace trace.csv]
//   leqa compare   --in bench/ [--seed 7] [--format text]
//   leqa calibrate --in a.qn --in b.qn --in c.qn
//   leqa generate  --qubits 50 --ops 10000 --cnot-fraction 0.4 --seed 1 --out random.qn
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 config error.

#include <leqa/leqa.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

class InputError : public leqa::Error {
public:
    using leqa::Error::Error;
};

class UsageError : public leqa::Error {
public:
    using leqa::Error::Error;
};

struct RunConfig {
    std::vector<std::string> inputs;
    std::string out;
    std::string fabric;
    std::size_t q_max = 0;
    std::uint64_t seed = 1;
    std::string path_factor;
    std::string config_file;
    std::string format;
    std::string dot_file;
    std::string iig_file;
    std::string trace_file;
    std::size_t gen_qubits = 0;
    std::size_t gen_ops = 0;
    double gen_cnot_fraction = 0.4;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read '" + p.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

bool is_netlist(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".qn" || ext == ".real";
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    if (inputs.empty()) throw UsageError("--in is required");
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p)) {
                if (e.is_regular_file() && is_netlist(e.path())) found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    if (out.empty()) throw InputError("no input circuits");
    return out;
}

leqa::Circuit load_circuit(const fs::path& p) {
    const std::string text = read_file(p);
    try {
        leqa::Circuit c = p.extension() == ".real" ? leqa::parse_real(text) : leqa::parse_netlist(text);
        return leqa::lower(c);
    } catch (const leqa::ParseError& e) {
        throw InputError(p.string() + ": " + e.what());
    }
}

leqa::FabricConfig make_config(const RunConfig& run) {
    leqa::FabricConfig cfg;
    if (!run.config_file.empty()) leqa::apply_config_text(cfg, read_file(run.config_file));
    if (!run.fabric.empty()) std::tie(cfg.width, cfg.length) = leqa::parse_fabric_dims(run.fabric);
    if (run.q_max) cfg.q_max = run.q_max;
    if (!run.path_factor.empty()) cfg.path_factor = leqa::parse_path_factor(run.path_factor);
    cfg.validate();
    return cfg;
}

std::vector<std::string> config_notes(const leqa::FabricConfig& cfg) {
    std::vector<std::string> notes;
    if (cfg.delay(leqa::GateKind::S) == leqa::FabricConfig{}.delay(leqa::GateKind::S)) {
        notes.emplace_back("d_S = 5240 us is an assumed default (same class as X/Y/Z); no measured value exists");
    }
    if (cfg.path_factor == leqa::PathFactor::Corrected) {
        notes.emplace_back("Hamiltonian path factor M/(M+1) in use instead of (M-1)/M");
    }
    return notes;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run_estimate(const RunConfig& run) {
    const auto cfg = make_config(run);
    const auto paths = expand_inputs(run.inputs);
    nlohmann::json docs = nlohmann::json::array();
    std::string text;
    std::ostringstream csv;
    csv.precision(10);
    csv << "input,qubits,operations,latency_us,latency_s,l_cnot_avg_us,l_g_avg_us,d_uncong_us,zone_area\n";

    for (const auto& p : paths) {
        const auto c = load_circuit(p);
        const auto r = leqa::estimate(c, cfg);
        for (const auto& w : r.warnings) std::cerr << "warning: " << p.string() << ": " << w << '\n';

        if (!run.dot_file.empty() || !run.iig_file.empty()) {
            if (!run.dot_file.empty()) {
                auto g = leqa::update_delays(leqa::build_qodg(c), cfg, r.l_cnot_avg, r.l_g_avg);
                const auto counts = leqa::critical_path(g);
                write_output(run.dot_file, leqa::to_dot(g, &counts));
            }
            if (!run.iig_file.empty()) write_output(run.iig_file, leqa::build_iig(c).edge_list());
        }

        auto j = leqa::to_json(r);
        j["input"] = p.string();
        j["notes"] = config_notes(cfg);
        docs.push_back(j);
        text += "== " + p.string() + "\n" + leqa::to_text(r);
        csv << p.string() << ',' << r.qubit_count << ',' << r.operation_count << ',' << r.latency << ','
            << r.latency_seconds() << ',' << r.l_cnot_avg << ',' << r.l_g_avg << ',' << r.d_uncong << ','
            << (r.zone_area ? *r.zone_area : 0.0) << '\n';
    }
    for (const auto& n : config_notes(cfg)) text += "note: " + n + "\n";

    if (run.format == "text") {
        write_output(run.out, text);
    } else if (run.format == "csv") {
        write_output(run.out, csv.str());
    } else {
        write_output(run.out, render(docs.size() == 1 ? docs[0] : docs));
    }
    return 0;
}

int run_simulate(const RunConfig& run) {
    const auto cfg = make_config(run);
    const auto paths = expand_inputs(run.inputs);
    nlohmann::json docs = nlohmann::json::array();
    std::ostringstream text;
    std::ostringstream csv;
    csv.precision(10);
    csv << "input,qubits,operations,latency_us,latency_s,total_hops,max_channel_queue,max_channel_wait_us\n";

    for (const auto& p : paths) {
        const auto c = load_circuit(p);
        leqa::MappingOptions opt;
        opt.seed = run.seed;
        opt.trace = !run.trace_file.empty();
        const auto r = leqa::simulate(c, cfg, opt);
        if (opt.trace) write_output(run.trace_file, leqa::trace_csv(r));
        docs.push_back({
            {"input", p.string()},
            {"qubits", c.qubit_count()},
            {"operations", c.size()},
            {"seed", run.seed},
            {"latency_us", r.latency},
            {"latency_s", r.latency * 1e-6},
            {"latency_s_text", leqa::format_seconds(r.latency * 1e-6)},
            {"total_hops", r.total_hops},
            {"max_channel_queue", r.max_channel_queue},
            {"max_channel_wait_us", r.max_channel_wait},
        });
        text << p.string() << ": latency " << r.latency << " us (" << leqa::format_seconds(r.latency * 1e-6)
             << " s), hops " << r.total_hops << ", max channel queue " << r.max_channel_queue << '\n';
        csv << p.string() << ',' << c.qubit_count() << ',' << c.size() << ',' << r.latency << ','
            << r.latency * 1e-6 << ',' << r.total_hops << ',' << r.max_channel_queue << ',' << r.max_channel_wait
            << '\n';
    }
    if (run.format == "text") {
        write_output(run.out, text.str());
    } else if (run.format == "csv") {
        write_output(run.out, csv.str());
    } else {
        write_output(run.out, render(docs.size() == 1 ? docs[0] : docs));
    }
    return 0;
}

int run_compare(const RunConfig& run) {
    const auto cfg = make_config(run);
    const auto paths = expand_inputs(run.inputs);
    leqa::BenchReport report;
    report.notes = config_notes(cfg);
    for (const auto& p : paths) {
        const auto c = load_circuit(p);
        leqa::BenchRow row;
        row.name = p.stem().string();
        row.qubits = c.qubit_count();
        row.operations = c.size();

        auto t0 = std::chrono::steady_clock::now();
        const auto est = leqa::estimate(c, cfg);
        row.estimator_seconds = seconds_since(t0);
        row.estimated_us = est.latency;

        t0 = std::chrono::steady_clock::now();
        const auto sim = leqa::simulate(c, cfg, run.seed);
        row.mapper_seconds = seconds_since(t0);
        row.simulated_us = sim.latency;
        report.rows.push_back(row);
    }
    if (run.format == "json") {
        write_output(run.out, render(leqa::to_json(report)));
    } else if (run.format == "csv") {
        write_output(run.out, leqa::to_csv(report));
    } else {
        write_output(run.out, leqa::to_text(report));
    }
    return 0;
}

int run_calibrate(const RunConfig& run) {
    const auto cfg = make_config(run);
    const auto paths = expand_inputs(run.inputs);
    std::vector<leqa::Circuit> circuits;
    for (const auto& p : paths) circuits.push_back(load_circuit(p));
    const auto r = leqa::calibrate_v(circuits, cfg, run.seed);
    nlohmann::json j = {
        {"v", r.speed},
        {"training_mean_abs_rel_error", r.training_error},
        {"circuits", circuits.size()},
        {"evaluations", r.evaluations},
        {"seed", run.seed},
    };
    if (run.format == "text") {
        std::ostringstream s;
        s << "v = " << r.speed << "\ntraining mean absolute relative error = " << r.training_error * 100.0
          << " %\n";
        write_output(run.out, s.str());
    } else if (run.format == "csv") {
        std::ostringstream s;
        s.precision(10);
        s << "v,training_error\n" << r.speed << ',' << r.training_error << '\n';
        write_output(run.out, s.str());
    } else {
        write_output(run.out, render(j));
    }
    return 0;
}

int run_generate(const RunConfig& run) {
    if (run.gen_qubits == 0) throw leqa::ConfigError("generate needs --qubits >= 1");
    const auto c = leqa::generate_random_circuit(run.gen_qubits, run.gen_ops, run.gen_cnot_fraction, run.seed);
    write_output(run.out, leqa::serialize(c));
    return 0;
}

// --in is checked after the configuration so that config errors are reported first.
void add_common(CLI::App* sub, RunConfig& run, bool needs_input) {
    if (needs_input) sub->add_option("--in", run.inputs, "Input netlist(s) or directories");
    sub->add_option("--out", run.out, "Write the report to this file instead of stdout");
    sub->add_option("--fabric", run.fabric, "Fabric size AxB in ULBs");
    sub->add_option("--qmax", run.q_max, "Number of coverage terms computed");
    sub->add_option("--seed", run.seed, "Random seed");
    sub->add_option("--path-factor", run.path_factor, "Hamiltonian path factor")
        ->check(CLI::IsMember({"paper", "corrected"}));
    sub->add_option("--config", run.config_file, "Flat key = value fabric configuration file");
    sub->add_option("--format", run.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latency estimation for quantum circuits on tiled fabrics"};
    app.require_subcommand(1, 1);
    RunConfig run;

    auto* est = app.add_subcommand("estimate", "Estimate latency without mapping");
    add_common(est, run, true);
    est->add_option("--dot", run.dot_file, "Write the delay-annotated QODG (Graphviz)");
    est->add_option("--iig", run.iig_file, "Write the interaction graph edge list");

    auto* sim = app.add_subcommand("simulate", "Run the reference mapper");
    add_common(sim, run, true);
    sim->add_option("--trace", run.trace_file, "Write the event trace (CSV)");

    auto* cmp = app.add_subcommand("compare", "Estimator versus mapper benchmark table");
    add_common(cmp, run, true);

    auto* cal = app.add_subcommand("calibrate", "Fit the qubit speed v against the mapper");
    add_common(cal, run, true);

    auto* gen = app.add_subcommand("generate", "Generate a random FT circuit");
    add_common(gen, run, false);
    gen->add_option("--qubits", run.gen_qubits, "Qubit count")->required();
    gen->add_option("--ops", run.gen_ops, "Operation count")->required();
    gen->add_option("--cnot-fraction", run.gen_cnot_fraction, "Fraction of CNOT operations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (run.format.empty()) run.format = (*cmp || *gen) ? "text" : "json";

    try {
        if (*est) return run_estimate(run);
        if (*sim) return run_simulate(run);
        if (*cmp) return run_compare(run);
        if (*cal) return run_calibrate(run);
        return run_generate(run);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const leqa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const leqa::Error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }
}
