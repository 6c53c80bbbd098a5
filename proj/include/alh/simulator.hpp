#pragma once

// Periodic-lattice integration of the t^{2,0} and t^{0,-1} flows with eps = 1,
// lattice conserved quantities, the commutativity probe and the numerical
// Backlund check.

#include "backlund.hpp"
#include "lax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace alh {

struct LatticeState {
    std::vector<double> P, Q;
    std::map<std::string, double> time;  // elapsed time per flow

    std::size_t size() const { return P.size(); }
};

enum class LatticeFlow { T20, T0m1, T0m1Perturbed };

inline std::string flow_name(LatticeFlow f)
{
    switch (f) {
    case LatticeFlow::T20: return "t20";
    case LatticeFlow::T0m1: return "t0m1";
    case LatticeFlow::T0m1Perturbed: return "t0m1-perturbed";
    }
    return "?";
}

inline LatticeFlow parse_flow(const std::string& s)
{
    if (s == "t20") return LatticeFlow::T20;
    if (s == "t0m1") return LatticeFlow::T0m1;
    if (s == "t0m1-perturbed") return LatticeFlow::T0m1Perturbed;
    throw std::invalid_argument("unknown flow '" + s + "'");
}

struct NumericalGuard : std::runtime_error {
    std::size_t site;
    NumericalGuard(const std::string& what, std::size_t n) : std::runtime_error(what), site(n) {}
};

struct IntegratorConfig {
    double dt = 1e-3;
    long steps = 1000;
    long cadence = 100;  // steps between conserved-quantity samples; 0 disables
};

// Both fields positive is linearly unstable at wavenumbers near pi (growth rate
// up to 2 sqrt(PQ)), so independent per-site draws blow up before unit time.
// The default draws a random combination of the lowest `modes` Fourier modes
// scaled into the same ranges; modes = 0 gives independent per-site draws.
inline LatticeState random_state(std::size_t N, std::uint64_t seed, int modes = 3)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    LatticeState s;
    s.P.resize(N);
    s.Q.resize(N);
    if (modes <= 0) {
        for (std::size_t i = 0; i < N; ++i) {
            s.P[i] = 0.5 + unit(gen);
            s.Q[i] = 2.0 + unit(gen);
        }
        return s;
    }
    const double two_pi = 2 * std::acos(-1.0);
    auto fill = [&](std::vector<double>& f, double centre) {
        std::vector<double> amp(modes), phase(modes);
        double total = 0;
        for (int m = 0; m < modes; ++m) {
            amp[m] = unit(gen);
            phase[m] = two_pi * unit(gen);
            total += amp[m];
        }
        for (std::size_t n = 0; n < N; ++n) {
            double v = 0;
            for (int m = 0; m < modes; ++m) v += amp[m] * std::sin(two_pi * (m + 1) * static_cast<double>(n) / static_cast<double>(N) + phase[m]);
            f[n] = centre + 0.5 * v / total;
        }
    };
    fill(s.P, 1.0);
    fill(s.Q, 2.5);
    return s;
}

inline void check_state(const LatticeState& s)
{
    const std::size_t N = s.size();
    if (N == 0 || s.Q.size() != N) throw std::invalid_argument("lattice fields must have equal nonzero length");
    for (std::size_t n = 0; n < N; ++n) {
        if (!std::isfinite(s.P[n]) || !std::isfinite(s.Q[n])) throw NumericalGuard("non-finite value at site " + std::to_string(n), n);
        if (std::abs(s.P[n]) < 1e-12) throw NumericalGuard("P vanishes at site " + std::to_string(n), n);
        if (std::abs(s.Q[n]) < 1e-12) throw NumericalGuard("Q vanishes at site " + std::to_string(n), n);
        if (std::abs(s.Q[n] - s.P[(n + N - 1) % N]) < 1e-12) throw NumericalGuard("Q_n = P_{n-1} at site " + std::to_string(n), n);
    }
}

inline unsigned thread_count()
{
    if (const char* env = std::getenv("ALH_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

namespace detail {

// per-site work split over ALH_THREADS threads; results do not depend on the split
inline void for_sites(std::size_t N, const std::function<void(std::size_t, std::size_t)>& body)
{
    unsigned T = std::min<unsigned>(thread_count(), static_cast<unsigned>(N / 256 + 1));
    if (T <= 1) {
        body(0, N);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (N + T - 1) / T;
    for (unsigned t = 0; t < T; ++t) {
        std::size_t a = t * chunk, b = std::min(N, a + chunk);
        if (a < b) pool.emplace_back(body, a, b);
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

// eps dP/dt, eps dQ/dt with eps = 1
inline void rhs(LatticeFlow flow, const std::vector<double>& P, const std::vector<double>& Q, std::vector<double>& dP,
                std::vector<double>& dQ)
{
    const std::size_t N = P.size();
    dP.assign(N, 0.0);
    dQ.assign(N, 0.0);
    detail::for_sites(N, [&](std::size_t a, std::size_t b) {
        for (std::size_t n = a; n < b; ++n) {
            std::size_t np = (n + 1) % N, nm = (n + N - 1) % N;
            switch (flow) {
            case LatticeFlow::T20:
                dP[n] = P[n] * (Q[np] - Q[n]);
                dQ[n] = Q[n] * (Q[np] - Q[nm] - P[n] + P[nm]);
                break;
            case LatticeFlow::T0m1:
                dP[n] = Q[np] / P[np] - Q[n] / P[nm];
                dQ[n] = Q[n] / P[n] - Q[n] / P[nm];
                break;
            case LatticeFlow::T0m1Perturbed:
                // one sign flipped: a non-commuting control
                dP[n] = Q[np] / P[np] + Q[n] / P[nm];
                dQ[n] = Q[n] / P[n] - Q[n] / P[nm];
                break;
            }
        }
    });
    for (std::size_t n = 0; n < N; ++n)
        if (!std::isfinite(dP[n]) || !std::isfinite(dQ[n])) throw NumericalGuard("non-finite right-hand side at site " + std::to_string(n), n);
}

inline void rk4_step(LatticeFlow flow, LatticeState& s, double h)
{
    const std::size_t N = s.size();
    std::vector<double> k1P, k1Q, k2P, k2Q, k3P, k3Q, k4P, k4Q, tP(N), tQ(N);
    auto stage = [&](const std::vector<double>& kP, const std::vector<double>& kQ, double c) {
        for (std::size_t n = 0; n < N; ++n) {
            tP[n] = s.P[n] + c * kP[n];
            tQ[n] = s.Q[n] + c * kQ[n];
        }
    };
    rhs(flow, s.P, s.Q, k1P, k1Q);
    stage(k1P, k1Q, h / 2);
    rhs(flow, tP, tQ, k2P, k2Q);
    stage(k2P, k2Q, h / 2);
    rhs(flow, tP, tQ, k3P, k3Q);
    stage(k3P, k3Q, h);
    rhs(flow, tP, tQ, k4P, k4Q);
    for (std::size_t n = 0; n < N; ++n) {
        s.P[n] += h / 6 * (k1P[n] + 2 * k2P[n] + 2 * k3P[n] + k4P[n]);
        s.Q[n] += h / 6 * (k1Q[n] + 2 * k2Q[n] + 2 * k3Q[n] + k4Q[n]);
    }
    s.time[flow_name(flow)] += h;
    check_state(s);
}

inline void euler_step(LatticeFlow flow, LatticeState& s, double h)
{
    std::vector<double> dP, dQ;
    rhs(flow, s.P, s.Q, dP, dQ);
    for (std::size_t n = 0; n < s.size(); ++n) {
        s.P[n] += h * dP[n];
        s.Q[n] += h * dQ[n];
    }
    s.time[flow_name(flow)] += h;
}

// ---- conserved quantities

// a shift-picture density as a list of monomials over (field, offset, exponent)
class CompiledDensity {
public:
    explicit CompiledDensity(const RingElem& e)
    {
        for (auto& [m, c] : e.terms()) {
            Term t{to_double(c), {}};
            for (auto& [g, ex] : m) {
                if (g.kind == Kind::Shift) {
                    t.factors.push_back({g.var() == Var::P ? 0 : 1, g.idx, ex});
                } else if (g.kind == Kind::Trans && g.tag() == Tag::LogQminusLogP) {
                    t.factors.push_back({2, g.idx, ex});
                } else {
                    throw std::domain_error("density generator has no lattice evaluation: " + to_string(g));
                }
            }
            terms_.push_back(std::move(t));
        }
    }

    double sum(const LatticeState& s) const
    {
        const long N = static_cast<long>(s.size());
        double total = 0;
        for (long n = 0; n < N; ++n) {
            for (auto& t : terms_) {
                double v = t.coeff;
                for (auto& f : t.factors) {
                    std::size_t i = static_cast<std::size_t>(((n + f.offset) % N + N) % N);
                    double x = f.field == 0 ? s.P[i] : f.field == 1 ? s.Q[i] : std::log(s.Q[i] / s.P[i]);
                    v *= f.exponent == 1 ? x : std::pow(x, f.exponent);
                }
                total += v;
            }
        }
        return total;
    }

private:
    struct Factor {
        int field;  // 0 = P, 1 = Q, 2 = log(Q/P)
        int offset;
        int exponent;
    };
    struct Term {
        double coeff;
        std::vector<Factor> factors;
    };
    std::vector<Term> terms_;
};

struct ConservedSet {
    std::vector<std::string> labels;
    std::vector<CompiledDensity> densities;

    std::vector<double> evaluate(const LatticeState& s) const
    {
        std::vector<double> r;
        r.reserve(densities.size());
        for (auto& d : densities) r.push_back(d.sum(s));
        return r;
    }
};

// H_{2,p} = sum h_{2,p+1} for -1 <= p <= pmax; H_{0,-1} = sum log(Q/P);
// H_{0,-q} = sum h_{0,-q+1} for 2 <= q <= qmax
inline ConservedSet conserved_set(int pmax, int qmax)
{
    ConservedSet c;
    c.labels.push_back("H_{2,-1}");
    c.densities.emplace_back(Q() - P());
    for (int p = 0; p <= pmax; ++p) {
        c.labels.push_back("H_{2," + std::to_string(p) + "}");
        c.densities.emplace_back(density_positive(p + 1).value);
    }
    if (qmax >= 1) {
        c.labels.push_back("H_{0,-1}");
        c.densities.emplace_back(tr(Tag::LogQminusLogP));
    }
    for (int q = 2; q <= qmax; ++q) {
        c.labels.push_back("H_{0,-" + std::to_string(q) + "}");
        c.densities.emplace_back(density_negative(q - 1).value);
    }
    return c;
}

inline std::map<std::string, double> conserved_quantities(const LatticeState& s, int pmax, int qmax)
{
    ConservedSet c = conserved_set(pmax, qmax);
    std::vector<double> v = c.evaluate(s);
    std::map<std::string, double> r;
    for (std::size_t i = 0; i < v.size(); ++i) r[c.labels[i]] = v[i];
    return r;
}

struct Sample {
    double t = 0;
    std::vector<double> values;
    double drift = 0;  // max relative drift over all quantities so far
};

struct RunResult {
    LatticeState final_state;
    std::vector<std::string> labels;
    std::vector<Sample> samples;
    double max_drift = 0;
};

inline double relative_drift(double now, double start) { return std::abs(now - start) / std::max(std::abs(start), 1e-300); }

inline RunResult integrate(LatticeState s, LatticeFlow flow, const IntegratorConfig& cfg, const ConservedSet& cons)
{
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt) || cfg.steps < 0) throw std::invalid_argument("invalid integrator configuration");
    check_state(s);
    RunResult r;
    r.labels = cons.labels;
    std::vector<double> start = cons.evaluate(s);
    auto sample = [&](long step) {
        Sample smp{static_cast<double>(step) * cfg.dt, cons.evaluate(s), 0};
        for (std::size_t i = 0; i < start.size(); ++i) smp.drift = std::max(smp.drift, relative_drift(smp.values[i], start[i]));
        r.max_drift = std::max(r.max_drift, smp.drift);
        r.samples.push_back(std::move(smp));
    };
    sample(0);
    for (long step = 1; step <= cfg.steps; ++step) {
        rk4_step(flow, s, cfg.dt);
        if ((cfg.cadence > 0 && step % cfg.cadence == 0) || step == cfg.steps) sample(step);
    }
    r.final_state = std::move(s);
    return r;
}

inline RunResult integrate(const LatticeState& s, LatticeFlow flow, const IntegratorConfig& cfg)
{
    return integrate(s, flow, cfg, conserved_set(3, 2));
}

inline double max_abs_diff(const LatticeState& a, const LatticeState& b)
{
    double d = 0;
    for (std::size_t n = 0; n < a.size(); ++n) d = std::max({d, std::abs(a.P[n] - b.P[n]), std::abs(a.Q[n] - b.Q[n])});
    return d;
}

// |E_A^h E_B^h x - E_B^h E_A^h x| with explicit Euler maps E: O(h^3) when the
// flows commute, O(h^2) otherwise
inline double commutativity_probe(LatticeFlow A, LatticeFlow B, double h, const LatticeState& s)
{
    LatticeState ab = s, ba = s;
    euler_step(B, ab, h);
    euler_step(A, ab, h);
    euler_step(A, ba, h);
    euler_step(B, ba, h);
    return max_abs_diff(ab, ba);
}

inline double probe_ratio(LatticeFlow A, LatticeFlow B, double h, const LatticeState& s)
{
    return commutativity_probe(A, B, h, s) / commutativity_probe(A, B, h / 2, s);
}

inline LatticeState backlund_state(const LatticeState& s)
{
    LatticeState r;
    backlund_apply(s.P, s.Q, r.P, r.Q, 1e-12);
    r.time = s.time;
    return r;
}

// transform-then-evolve against evolve-then-transform
inline double backlund_commutation_defect(const LatticeState& s, LatticeFlow flow, double dt, long steps)
{
    LatticeState a = backlund_state(s), b = s;
    for (long i = 0; i < steps; ++i) {
        rk4_step(flow, a, dt);
        rk4_step(flow, b, dt);
    }
    return max_abs_diff(a, backlund_state(b));
}

// error ratio e(h) / e(h/2) against a fine reference; about 16 for RK4
inline double rk4_order_ratio(const LatticeState& s, LatticeFlow flow, double h, double T)
{
    auto run = [&](double dt) {
        LatticeState x = s;
        long n = std::lround(T / dt);
        for (long i = 0; i < n; ++i) rk4_step(flow, x, dt);
        return x;
    };
    LatticeState ref = run(h / 16), x1 = run(h), x2 = run(h / 2);
    return max_abs_diff(x1, ref) / max_abs_diff(x2, ref);
}

} // namespace alh
