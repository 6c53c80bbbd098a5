#include "alh/alh.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

using json = nlohmann::ordered_json;

namespace {

enum Exit { Pass = 0, IdentityFailure = 1, NumericalGuardHit = 2, Usage = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json manifest(const std::string& command, json parameters)
{
    return json{{"command", command}, {"tool_version", alh::version}, {"parameters", std::move(parameters)}};
}

void emit(const json& doc, const std::string& path)
{
    std::string text = doc.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---- theta

struct ThetaArgs {
    int alpha = 2;
    int kmin = 1;
    int kmax = 2;
    std::string method = "recursion";
    std::string out;
};

int cmd_theta(const ThetaArgs& a)
{
    if (a.alpha < 0 || a.alpha > 2) throw UsageError("--alpha must be 0, 1 or 2");
    if (a.kmin > a.kmax) throw UsageError("--kmin exceeds --kmax");
    if (a.alpha != 0 && a.kmin < 0) throw UsageError("theta_{1,k} and theta_{2,k} need k >= 0");
    bool residue = a.method == "residue" || a.method == "both";
    if (residue && a.kmin <= 0 && a.kmax >= 0) throw UsageError("the residue method has no formula at k = 0");

    json doc{{"schema", 1},
             {"manifest", manifest("theta", {{"alpha", a.alpha}, {"kmin", a.kmin}, {"kmax", a.kmax}, {"method", a.method}})}};
    json entries = json::array();
    bool agree = true;
    for (int k = a.kmin; k <= a.kmax; ++k) {
        json e{{"alpha", a.alpha}, {"k", k}};
        if (a.method == "recursion") {
            e["expression"] = alh::theta(a.alpha, k).to_string();
        } else if (a.method == "residue") {
            e["expression"] = alh::theta_by_residue(a.alpha, k).to_string();
        } else {
            alh::VFrac rec = alh::theta(a.alpha, k), res = alh::theta_by_residue(a.alpha, k);
            e["recursion"] = rec.to_string();
            e["residue"] = res.to_string();
            e["agree"] = rec == res;
            agree = agree && rec == res;
        }
        entries.push_back(std::move(e));
    }
    doc["entries"] = std::move(entries);
    if (a.method == "both") doc["agree"] = agree;
    emit(doc, a.out);
    return agree ? Pass : IdentityFailure;
}

// ---- verify

struct VerifyArgs {
    std::string suite = "all";
    int order = 2;
    int window = 12;
    std::string out;
};

int cmd_verify(const VerifyArgs& a)
{
    if (a.order < 1) throw UsageError("--order must be positive");
    if (a.window < 4) throw UsageError("--window must be at least 4");
    if (a.suite != "all" && std::find(alh::suite_names().begin(), alh::suite_names().end(), a.suite) == alh::suite_names().end())
        throw UsageError("unknown suite '" + a.suite + "'");

    auto results = alh::run_suite(a.suite, {a.order, alh::Window{a.window}});
    json doc{{"schema", 1}, {"manifest", manifest("verify", {{"suite", a.suite}, {"order", a.order}, {"window", a.window}})}};
    json identities = json::array();
    const alh::CheckResult* first_failure = nullptr;
    std::size_t passed = 0;
    for (auto& r : results) {
        json e{{"suite", r.suite}, {"name", r.name}, {"pass", r.pass}};
        if (!r.pass) {
            json sides = json::array();
            for (auto& [l, rr] : r.sides) sides.push_back({{"lhs", l}, {"rhs", rr}});
            e["sides"] = std::move(sides);
            if (!first_failure) first_failure = &r;
        } else {
            ++passed;
        }
        identities.push_back(std::move(e));
    }
    doc["identities"] = std::move(identities);
    doc["passed"] = passed;
    doc["total"] = results.size();
    doc["pass"] = first_failure == nullptr;
    emit(doc, a.out);
    if (first_failure) {
        std::cerr << "identity failed: " << first_failure->suite << ": " << first_failure->name << "\n";
        for (auto& [l, r] : first_failure->sides) std::cerr << "  lhs: " << l << "\n  rhs: " << r << "\n";
        return IdentityFailure;
    }
    return Pass;
}

// ---- simulate

struct SimulateArgs {
    std::size_t N = 32;
    double dt = 1e-3;
    long steps = 1000;
    std::string flow = "t20";
    std::uint64_t seed = 12345;
    int modes = 3;
    long cadence = 100;
    std::string csv = "simulation.csv";
    std::string manifest_path;
    std::string init;
};

alh::LatticeState read_state(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("P") || !j.contains("Q")) throw UsageError(path + ": expected a JSON object with arrays P and Q");
    alh::LatticeState s;
    s.P = j["P"].get<std::vector<double>>();
    s.Q = j["Q"].get<std::vector<double>>();
    if (s.P.size() != s.Q.size() || s.P.empty()) throw UsageError(path + ": P and Q must have equal nonzero length");
    return s;
}

int cmd_simulate(const SimulateArgs& a)
{
    alh::LatticeFlow flow;
    try {
        flow = alh::parse_flow(a.flow);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (!(a.dt > 0) || a.steps < 0 || a.cadence < 0) throw UsageError("need dt > 0, steps >= 0, cadence >= 0");
    if (a.init.empty() && a.N < 3) throw UsageError("--N must be at least 3");

    alh::LatticeState s = a.init.empty() ? alh::random_state(a.N, a.seed, a.modes) : read_state(a.init);
    alh::IntegratorConfig cfg{a.dt, a.steps, a.cadence};
    json params{{"N", s.size()}, {"dt", a.dt}, {"steps", a.steps}, {"flow", a.flow}, {"cadence", a.cadence}, {"csv", a.csv}};
    if (a.init.empty()) {
        params["seed"] = a.seed;
        params["modes"] = a.modes;
    } else {
        params["init"] = a.init;
    }
    json doc{{"schema", 1}, {"manifest", manifest("simulate", params)}};
    doc["manifest"]["seeds"] = a.init.empty() ? json::array({a.seed}) : json::array();
    doc["manifest"]["conserved"] = {{"pmax", 3}, {"qmax", 2}};

    std::string manifest_path = a.manifest_path.empty() ? a.csv + ".manifest.json" : a.manifest_path;
    alh::RunResult r;
    try {
        r = alh::integrate(s, flow, cfg);
    } catch (const alh::NumericalGuard& g) {
        doc["status"] = "numerical-guard";
        doc["site"] = g.site;
        doc["message"] = g.what();
        emit(doc, manifest_path);
        std::cerr << "numerical guard: " << g.what() << "\n";
        return NumericalGuardHit;
    }

    std::ofstream csv(a.csv, std::ios::binary);
    if (!csv) throw UsageError("cannot write " + a.csv);
    csv << "t";
    for (auto& l : r.labels) csv << ",\"" << l << "\"";
    csv << ",defect\n";
    for (auto& smp : r.samples) {
        csv << fmt(smp.t);
        for (double v : smp.values) csv << "," << fmt(v);
        csv << "," << fmt(smp.drift) << "\n";
    }

    doc["status"] = "ok";
    doc["max_relative_drift"] = r.max_drift;
    json fin{{"P", r.final_state.P}, {"Q", r.final_state.Q}};
    doc["final_state"] = std::move(fin);
    emit(doc, manifest_path);
    return Pass;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ablowitz-Ladik hierarchy toolkit: theta functions, identity suites and lattice simulation"};
    app.require_subcommand(1);

    ThetaArgs ta;
    auto* theta = app.add_subcommand("theta", "theta functions of the Frobenius manifold as JSON");
    theta->add_option("--alpha", ta.alpha, "index alpha in {0, 1, 2}");
    theta->add_option("--kmin", ta.kmin, "lowest level");
    theta->add_option("--kmax", ta.kmax, "highest level");
    theta->add_option("--method", ta.method, "recursion, residue, or both (diff report)")->check(CLI::IsMember({"recursion", "residue", "both"}));
    theta->add_option("--out", ta.out, "output file (default stdout)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run an identity suite; exit 1 on the first failure");
    verify->add_option("--suite", va.suite, "tau-symmetry, recursion, virasoro, backlund, super or all")
        ->check(CLI::IsMember({"tau-symmetry", "recursion", "virasoro", "backlund", "super", "all"}));
    verify->add_option("--order", va.order, "truncation order");
    verify->add_option("--window", va.window, "Virasoro time window P_max");
    verify->add_option("--out", va.out, "JSON report file (default stdout)");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "RK4 lattice run with conserved-quantity log");
    sim->add_option("--N", sa.N, "lattice size");
    sim->add_option("--dt", sa.dt, "time step");
    sim->add_option("--steps", sa.steps, "number of steps");
    sim->add_option("--flow", sa.flow, "t20 or t0m1")->check(CLI::IsMember({"t20", "t0m1"}));
    sim->add_option("--seed", sa.seed, "random seed for the initial data");
    sim->add_option("--modes", sa.modes, "Fourier modes in the initial data; 0 draws each site independently");
    sim->add_option("--cadence", sa.cadence, "steps between conserved-quantity samples");
    sim->add_option("--csv", sa.csv, "CSV output file");
    sim->add_option("--manifest", sa.manifest_path, "manifest file (default <csv>.manifest.json)");
    sim->add_option("--init", sa.init, "JSON file with arrays P and Q instead of random data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Usage;
    }

    try {
        if (*theta) return cmd_theta(ta);
        if (*verify) return cmd_verify(va);
        if (*sim) return cmd_simulate(sa);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    } catch (const alh::NumericalGuard& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return NumericalGuardHit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    return Usage;
}
