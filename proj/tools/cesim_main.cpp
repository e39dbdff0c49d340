// Command-line front end: concurrence/witness curves, Kraus diagnostics,
// netlist circuit runs, and seeded counting experiments.
//
// Exit codes: 0 success, 2 usage or parse error, 3 I/O failure,
// 4 self-check failure, 5 netlist validation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cesim/channel.hpp"
#include "cesim/circuit.hpp"
#include "cesim/entanglement.hpp"
#include "cesim/rng.hpp"
#include "cesim/sweep.hpp"

namespace {

using json = nlohmann::json;
using namespace cesim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSelfCheck = 4;
constexpr int kExitValidation = 5;

struct OutputConfig {
    std::string path;    // empty = stdout
    std::string format;  // "csv" or "json"
};

class Sink {
  public:
    explicit Sink(const OutputConfig& cfg) : cfg_(cfg) {
        if (!cfg.path.empty()) {
            file_.open(cfg.path);
            if (!file_.good())
                throw std::ios_base::failure("cannot open output file '" +
                                             cfg.path + "'");
        }
    }
    std::ostream& stream() { return cfg_.path.empty() ? std::cout : file_; }
    void finish() {
        stream().flush();
        if (!cfg_.path.empty() && !file_.good())
            throw std::ios_base::failure("write to '" + cfg_.path + "' failed");
    }

  private:
    OutputConfig cfg_;
    std::ofstream file_;
};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

/// One flat table: header + rows of preformatted cells.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << row[i];
            os << "\n";
        }
    }
    json to_json() const {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t i = 0; i < columns.size(); ++i) {
                // numeric cells stay numeric in JSON
                try {
                    std::size_t used = 0;
                    const double v = std::stod(row[i], &used);
                    if (used == row[i].size()) {
                        obj[columns[i]] = v;
                        continue;
                    }
                } catch (...) {
                }
                obj[columns[i]] = row[i];
            }
            arr.push_back(obj);
        }
        return arr;
    }
};

void emit(const Table& table, const OutputConfig& cfg) {
    Sink sink(cfg);
    if (cfg.format == "json")
        sink.stream() << table.to_json().dump(2) << "\n";
    else
        table.write_csv(sink.stream());
    sink.finish();
}

json matrix_to_json(const Mat4& m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j)
            row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
        rows.push_back(row);
    }
    return rows;
}

void print_matrix(std::ostream& os, const Mat4& m) {
    os << std::setprecision(6) << std::fixed;
    for (int i = 0; i < 4; ++i) {
        os << "    ";
        for (int j = 0; j < 4; ++j) {
            os << std::setw(10) << m(i, j).real();
            const double im = m(i, j).imag();
            os << (im < 0 ? "-" : "+") << std::setw(8) << std::abs(im) << "i  ";
        }
        os << "\n";
    }
    os.unsetf(std::ios_base::floatfield);
    os << std::setprecision(17);
}

// ---------------------------------------------------------------- curve --

struct CurveArgs {
    std::string param = "gammaT";
    double start = 0.0;
    double stop = 5.0;
    int points = 51;
    OutputConfig out;
};

int cmd_curve(const CurveArgs& args) {
    sweep::SweepSpec spec;
    spec.parameter = args.param == "gt" ? EnvironmentKind::SingleModeCavity
                                        : EnvironmentKind::MultimodeVacuum;
    spec.start = args.start;
    spec.stop = args.stop;
    spec.points = args.points;
    if (!spec.valid() || spec.start < 0.0) {
        std::cerr << "curve: need points >= 2, 0 <= start < stop\n";
        return kExitUsage;
    }
    const auto rows = sweep::concurrence_curve(spec);
    Table table;
    table.columns = {args.param, "concurrence_analytic", "concurrence_numeric",
                     "witness_trace"};
    for (const auto& row : rows)
        table.rows.push_back({fmt(row.param), fmt(row.concurrenceClosedForm),
                              fmt(row.concurrenceNumeric), fmt(row.witnessTrace)});
    emit(table, args.out);
    return kExitOk;
}

// ---------------------------------------------------------------- kraus --

struct KrausArgs {
    double gammaT = 0.0;
    std::uint64_t seed = 1;
    OutputConfig out;
};

int cmd_kraus(const KrausArgs& args) {
    if (args.gammaT < 0.0 || !std::isfinite(args.gammaT)) {
        std::cerr << "kraus: gammaT must be finite and >= 0\n";
        return kExitUsage;
    }
    const auto [closed, kc] = kraus_closed_form(args.gammaT);
    const KrausSet choi = kraus_from_choi(args.gammaT);
    const double residualClosed = closed.completeness_residual();
    const double residualChoi = choi.completeness_residual();

    const KrausSet closedComp = closed.in_basis(Basis::Computational);
    const KrausSet choiComp = choi.in_basis(Basis::Computational);
    rng::Stream stream(rng::splitmix64(args.seed));
    double discrepancy = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix4 rho = rng::random_state(stream);
        const Mat4 viaAnalytic = evolve_analytic(rho, args.gammaT).matrix();
        const Mat4 viaClosed = apply_channel(closedComp, rho).matrix();
        const Mat4 viaChoi = apply_channel(choiComp, rho).matrix();
        discrepancy = std::max(discrepancy, linalg::max_norm(viaClosed - viaAnalytic));
        discrepancy = std::max(discrepancy, linalg::max_norm(viaChoi - viaAnalytic));
    }
    const bool failed =
        residualClosed > 1e-6 || residualChoi > 1e-6 || discrepancy > 1e-6;

    Sink sink(args.out);
    std::ostream& os = sink.stream();
    if (args.out.format == "json") {
        json doc;
        doc["gammaT"] = args.gammaT;
        doc["closed_form"] = json::array();
        for (std::size_t i = 0; i < closed.operators.size(); ++i)
            doc["closed_form"].push_back({{"label", closed.labels[i]},
                                          {"matrix", matrix_to_json(closed.operators[i])}});
        doc["choi_extracted"] = json::array();
        for (std::size_t i = 0; i < choi.operators.size(); ++i)
            doc["choi_extracted"].push_back({{"label", choi.labels[i]},
                                             {"matrix", matrix_to_json(choi.operators[i])}});
        doc["completeness_residual_closed"] = residualClosed;
        doc["completeness_residual_choi"] = residualChoi;
        doc["max_action_discrepancy"] = discrepancy;
        doc["coefficients"] = {{"A", kc.A}, {"B", kc.B}, {"C", kc.C}, {"D", kc.D},
                               {"E", kc.E}, {"F", kc.F}, {"G", kc.G}, {"H", kc.H},
                               {"X", kc.X}, {"Y", kc.Y}, {"Z", kc.Z}, {"W", kc.W}};
        os << doc.dump(2) << "\n";
    } else {
        os << std::setprecision(17);
        os << "Kraus diagnostics at gammaT = " << args.gammaT << "\n\n";
        os << "closed-form set (collective basis):\n";
        for (std::size_t i = 0; i < closed.operators.size(); ++i) {
            os << "  " << closed.labels[i] << ":\n";
            print_matrix(os, closed.operators[i]);
        }
        os << "\nChoi-extracted set (collective basis), rank "
           << choi.operators.size() << ":\n";
        for (std::size_t i = 0; i < choi.operators.size(); ++i) {
            os << "  " << choi.labels[i] << ":\n";
            print_matrix(os, choi.operators[i]);
        }
        os << "\ncoefficients: A=" << kc.A << " B=" << kc.B << " C=" << kc.C
           << " D=" << kc.D << " E=" << kc.E << " F=" << kc.F << "\n";
        os << "completeness residual (closed form):    " << residualClosed << "\n";
        os << "completeness residual (Choi extracted): " << residualChoi << "\n";
        os << "max channel-action discrepancy over 20 random states: "
           << discrepancy << "\n";
        os << "self-check: " << (failed ? "FAILED" : "ok") << "\n";
    }
    sink.finish();
    return failed ? kExitSelfCheck : kExitOk;
}

// -------------------------------------------------------------- circuit --

struct CircuitArgs {
    std::string netlist;
    std::string pol;   // empty = netlist prep
    std::string mode;  // empty = netlist prep
    std::vector<std::string> sets;
    OutputConfig out;
};

int cmd_circuit(const CircuitArgs& args) {
    std::ifstream in(args.netlist);
    if (!in.good()) {
        std::cerr << "circuit: cannot read netlist '" << args.netlist << "'\n";
        return kExitIo;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::map<std::string, std::string> vars;
    for (const std::string& kv : args.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "circuit: --set expects name=value, got '" << kv << "'\n";
            return kExitUsage;
        }
        vars[kv.substr(0, eq)] = kv.substr(eq + 1);
    }

    optics::CircuitIR ir;
    try {
        ir = optics::parse_netlist(optics::substitute(buf.str(), vars));
    } catch (const optics::NetlistError& err) {
        std::cerr << err.what() << "\n";
        const bool parseClass = err.kind == optics::NetlistErrorKind::SyntaxError ||
                                err.kind == optics::NetlistErrorKind::UnknownElement;
        return parseClass ? kExitUsage : kExitValidation;
    }

    const optics::CompiledCircuit cc = optics::compile(ir);
    optics::SourceSpec prep = cc.prep;
    if (!args.pol.empty()) prep.pol = args.pol[0];
    if (!args.mode.empty()) prep.mode = args.mode[0];
    Vec4 system = Vec4::Zero();
    system(optics::sys_index(prep.pol, prep.mode)) = 1.0;
    const optics::PhotonState final =
        cc.propagate(cc.inject(system, cc.pathIndex.at(prep.path)));

    Table table;
    table.columns = {"record", "pol", "mode", "path", "detector",
                     "re",     "im",  "probability"};
    const char pols[] = {'V', 'V', 'H', 'H'};
    const char modes[] = {'v', 'h', 'v', 'h'};
    for (int p = 0; p < cc.pathCount; ++p) {
        if (cc.hidden_path(p)) continue;
        for (int sys = 0; sys < 4; ++sys) {
            const Complex amp = final.amp(sys, p);
            if (std::abs(amp) < 1e-14) continue;
            table.rows.push_back({"amplitude", std::string(1, pols[sys]),
                                  std::string(1, modes[sys]), cc.pathNames[p], "",
                                  fmt(amp.real()), fmt(amp.imag()),
                                  fmt(std::norm(amp))});
        }
    }
    const std::vector<double> probs = cc.detector_probabilities(final);
    for (std::size_t d = 0; d < cc.detectors.size(); ++d)
        table.rows.push_back({"detector", "", "", cc.pathNames[cc.detectors[d].path],
                              cc.detectors[d].id, "", "", fmt(probs[d])});
    emit(table, args.out);
    return kExitOk;
}

// ----------------------------------------------------------- experiment --

struct ExperimentArgs {
    double gammaT = 0.0;
    std::uint64_t shots = 10000;
    std::uint64_t seed = 1;
    bool exact = false;
    OutputConfig out;
};

int cmd_experiment(const ExperimentArgs& args) {
    if (args.gammaT < 0.0 || !std::isfinite(args.gammaT)) {
        std::cerr << "experiment: gammaT must be finite and >= 0\n";
        return kExitUsage;
    }
    if (!args.exact && args.shots < 1) {
        std::cerr << "experiment: shots must be >= 1 (or pass --exact)\n";
        return kExitUsage;
    }
    const optics::ExperimentResult res =
        optics::run_experiment(args.gammaT, args.exact ? 0 : args.shots, args.seed);

    Table table;
    table.columns = {"quantity", "value"};
    auto add = [&table](const std::string& name, const std::string& value) {
        table.rows.push_back({name, value});
    };
    add("gammaT", fmt(args.gammaT));
    add("shots", std::to_string(args.exact ? 0 : args.shots));
    add("seed", std::to_string(args.seed));
    for (int i = 0; i < 4; ++i) {
        const std::string id = "D" + std::to_string(i + 1);
        const auto it = res.record.counts.find(id);
        add("counts_" + id,
            std::to_string(it == res.record.counts.end() ? 0 : it->second));
    }
    for (int i = 0; i < 4; ++i)
        add("p" + std::to_string(i + 1) + "_exact", fmt(res.exactProbs[i]));
    add("witness_estimate", fmt(res.witnessEstimate));
    add("concurrence_estimate", fmt(res.concurrenceEstimate));
    add("witness_exact", fmt(res.witnessExact));
    add("concurrence_exact", fmt(res.concurrenceExact));
    add("witness_std_error", fmt(res.witnessStdError));
    add("concurrence_std_error", fmt(res.concurrenceStdError));
    emit(table, args.out);
    return kExitOk;
}

void add_output_options(CLI::App* sub, OutputConfig& out) {
    sub->add_option("--out", out.path, "output file (default: stdout)");
    sub->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit collective-decay channel and single-photon circuit toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags take precedence");

    CurveArgs curve;
    curve.out.format = "csv";
    CLI::App* curveCmd = app.add_subcommand(
        "curve", "sweep concurrence and witness trace over gammaT or gt");
    curveCmd->add_option("--param", curve.param, "sweep parameter")
        ->check(CLI::IsMember({"gammaT", "gt"}))
        ->capture_default_str();
    curveCmd->add_option("--start", curve.start, "first grid value")
        ->capture_default_str();
    curveCmd->add_option("--stop", curve.stop, "last grid value")
        ->capture_default_str();
    curveCmd->add_option("--points", curve.points, "grid size (>= 2)")
        ->capture_default_str();
    add_output_options(curveCmd, curve.out);

    KrausArgs kraus;
    kraus.out.format = "text";
    CLI::App* krausCmd = app.add_subcommand(
        "kraus", "print both Kraus sets with completeness and action checks");
    krausCmd->add_option("--gammaT", kraus.gammaT, "channel time Gamma*t")
        ->required();
    krausCmd->add_option("--seed", kraus.seed, "seed for the random-state check")
        ->capture_default_str();
    krausCmd->add_option("--out", kraus.out.path, "output file (default: stdout)");
    krausCmd->add_option("--format", kraus.out.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    CircuitArgs circuit;
    circuit.out.format = "csv";
    CLI::App* circuitCmd = app.add_subcommand(
        "circuit", "propagate a photon through a netlist file");
    circuitCmd->add_option("--netlist", circuit.netlist, "netlist path")->required();
    circuitCmd->add_option("--pol", circuit.pol, "initial polarization (H|V)")
        ->check(CLI::IsMember({"H", "V"}));
    circuitCmd->add_option("--mode", circuit.mode, "initial transverse mode (h|v)")
        ->check(CLI::IsMember({"h", "v"}));
    circuitCmd
        ->add_option("--set", circuit.sets,
                     "template substitution name=value (repeatable)")
        ->take_all();
    add_output_options(circuitCmd, circuit.out);

    ExperimentArgs experiment;
    experiment.out.format = "csv";
    CLI::App* expCmd = app.add_subcommand(
        "experiment", "witness estimation from multinomial detector counts");
    expCmd->add_option("--gammaT", experiment.gammaT, "channel time Gamma*t")
        ->required();
    expCmd->add_option("--shots", experiment.shots, "number of heralded photons")
        ->capture_default_str();
    expCmd->add_option("--seed", experiment.seed, "sampling seed")
        ->capture_default_str();
    expCmd->add_flag("--exact", experiment.exact,
                     "skip sampling, report exact probabilities");
    add_output_options(expCmd, experiment.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (curveCmd->parsed()) return cmd_curve(curve);
        if (krausCmd->parsed()) return cmd_kraus(kraus);
        if (circuitCmd->parsed()) return cmd_circuit(circuit);
        if (expCmd->parsed()) return cmd_experiment(experiment);
    } catch (const std::ios_base::failure& err) {
        std::cerr << "I/O error: " << err.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitSelfCheck;
    }
    return kExitUsage;
}
