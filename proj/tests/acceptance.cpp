#include "alh/alh.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace alh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) o.require(false, "runtime " + std::to_string(secs) + " s over the " + std::to_string(limit_s) + " s limit");
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %s (%.2f s)%s%s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), secs, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    std::fflush(stdout);
}

RingElem inv(const RingElem& x) { return *x.inverse(); }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(ALH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

} // namespace

int main()
{
    criterion(1, "Lax expansion fidelity", 1.0, [] {
        Outcome o;
        Op L = build_L(3), M = build_M(3);
        o.require(L.coeff(1) == RingElem(1), "L Lambda^1");
        o.require(L.coeff(0) == Q() - P(), "L Lambda^0");
        o.require(L.coeff(-1) == Q() * (Q(-1) - P(-1)), "L Lambda^-1");
        o.require(M.coeff(-1) == Q() * inv(P()), "M Lambda^-1");
        o.require(M.coeff(0) == Q(1) * inv(P() * P(1)) - inv(P()), "M Lambda^0");
        o.require(M.coeff(1) == Q(2) * inv(P() * P(1) * P(2)) - inv(P() * P(1)), "M Lambda^1");
        return o;
    });

    criterion(2, "theta golden set and residue agreement", 10.0, [] {
        Outcome o;
        RingElem t21 = v1() * ev2() + v1(2) * Rational(1, 2);
        o.require(theta(1, 1) == VFrac((v2() + logv1()) * v1() + ev2() - v1()), "theta_{1,1}");
        o.require(theta(2, 1) == VFrac(t21), "theta_{2,1}");
        o.require(theta(1, 2) == VFrac((v2() + logv1()) * t21 + (ev2(2) - v1() * ev2() * Rational(4) - v1(2)) * Rational(1, 4)), "theta_{1,2}");
        o.require(theta(2, 2) == VFrac(v1() * ev2(2) * Rational(1, 2) + v1(2) * ev2() + v1(3) * Rational(1, 6)), "theta_{2,2}");
        o.require(theta(0, 1) == VFrac(v1() * v2()), "theta_{0,1}");
        o.require(theta(0, 2) == VFrac((v2() + 1) * v1(2) * Rational(1, 2) + (v2() - 1) * ev2() * v1()), "theta_{0,2}");
        o.require(theta(0, -1) == VFrac(-v1(), 2), "theta_{0,-1}");
        o.require(theta(0, -2) == VFrac(t21 * Rational(2), 4), "theta_{0,-2}");
        for (int alpha : {0, 1, 2})
            for (int k = 1; k <= 2; ++k)
                o.require(theta_by_residue(alpha, k) == theta(alpha, k), "residue theta_{" + std::to_string(alpha) + "," + std::to_string(k) + "}");
        for (int k = -3; k <= -1; ++k) o.require(theta_by_residue(0, k) == theta(0, k), "residue theta_{0," + std::to_string(k) + "}");
        return o;
    });

    criterion(3, "dispersionless consistency of densities", 30.0, [] {
        Outcome o;
        for (int p = 0; p <= 2; ++p) o.require(density_leading_check(2, p).pass, "h_{2," + std::to_string(p) + "}");
        for (int q = 1; q <= 2; ++q) o.require(density_leading_check(0, -q).pass, "h_{0,-" + std::to_string(q) + "}");
        o.require(density_leading_check(0, 0).pass, "h_{0,0}");
        return o;
    });

    criterion(4, "tau-symmetry suite", 120.0, [] {
        Outcome o;
        std::vector<FlowLabel> L{{2, 0}, {2, 1}, {2, 2}, {0, -1}, {0, -2}};
        for (std::size_t i = 0; i < L.size(); ++i)
            for (std::size_t j = i + 1; j < L.size(); ++j) {
                auto r = tau_symmetry(L[i], L[j]);
                o.require(r.pass, r.name);
            }
        return o;
    });

    criterion(5, "bihamiltonian recursion", 60.0, [] {
        Outcome o;
        for (Coords c : {Coords::PQ, Coords::W}) {
            for (int p = 1; p <= 2; ++p) o.require(recursion_positive(p, c).pass, "positive p=" + std::to_string(p));
            o.require(recursion_negative(1, c).pass, "negative p=1");
        }
        return o;
    });

    criterion(6, "Virasoro algebra on the P_max = 12 window", 60.0, [] {
        Outcome o;
        Window w{12};
        for (int m = -1; m <= 3; ++m) {
            VirasoroOp L = build_virasoro(m, w);
            o.require(is_symmetric(L.a) && is_symmetric(L.c), "symmetry of L_" + std::to_string(m));
        }
        for (int m = -1; m <= 3; ++m)
            for (int n = -1; n <= 3; ++n)
                o.require(virasoro_commutator(m, n, w).pass, "[L_" + std::to_string(m) + ", L_" + std::to_string(n) + "]");
        return o;
    });

    criterion(7, "Backlund transformation", 60.0, [] {
        Outcome o;
        for (auto r : {backlund_identity_check(), backlund_order_eps_check(), backlund_frechet_invariance_check()}) o.require(r.pass, r.name);
        return o;
    });

    criterion(8, "super suite", 120.0, [] {
        Outcome o;
        o.require(verify_AB(5).pass, "verify_AB(5)");
        for (int j = 0; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k)
                o.require(odd_flow_commutativity_check(j, k).pass, "odd flows " + std::to_string(j) + "," + std::to_string(k));
        o.require(odd_lax_check(3).pass, "odd Lax equations to depth 3");
        return o;
    });

    criterion(9, "numerics", 60.0, [] {
        Outcome o;
        LatticeState s = random_state(32, 12345);
        for (auto f : {LatticeFlow::T20, LatticeFlow::T0m1}) {
            RunResult r = integrate(s, f, {1e-3, 1000, 100});
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s drift %.2e", flow_name(f).c_str(), r.max_drift);
            o.require(r.max_drift < 1e-8, buf);
        }
        double ratio = probe_ratio(LatticeFlow::T20, LatticeFlow::T0m1, 1e-2, s);
        o.require(ratio >= 7 && ratio <= 9, "probe ratio " + std::to_string(ratio));
        double bd = backlund_commutation_defect(s, LatticeFlow::T20, 1e-3, 100);
        o.require(bd < 1e-8, "Backlund commutation " + std::to_string(bd));
        return o;
    });

    criterion(10, "determinism of CLI outputs", 120.0, [] {
        Outcome o;
        fs::path dir = fs::temp_directory_path() / "alh_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::string runs[2];
        for (int i = 0; i < 2; ++i) {
            fs::path sub = dir / std::to_string(i);
            fs::create_directories(sub);
            std::string csv = (sub / "sim.csv").string();
            o.require(run_cli("simulate --N 32 --dt 1e-3 --steps 1000 --flow t0m1 --seed 99 --csv " + csv) == 0, "simulate run");
            o.require(run_cli("verify --suite backlund --out " + (sub / "verify.json").string()) == 0, "verify run");
            o.require(run_cli("theta --alpha 0 --kmin -2 --kmax 2 --out " + (sub / "theta.json").string()) == 0, "theta run");
            std::string manifest = slurp(csv + ".manifest.json");
            // the manifest names its own CSV path; compare with that path neutralized
            for (std::size_t pos; (pos = manifest.find(sub.string())) != std::string::npos;) manifest.replace(pos, sub.string().size(), "<dir>");
            runs[i] = slurp(csv) + manifest + slurp(sub / "verify.json") + slurp(sub / "theta.json");
        }
        o.require(!runs[0].empty() && runs[0] == runs[1], "outputs differ");
        fs::remove_all(dir);
        return o;
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
