#pragma once

// Named identity suites shared by the command-line tool and the acceptance runner.

#include "backlund.hpp"
#include "principal.hpp"
#include "super.hpp"
#include "virasoro.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace alh {

struct CheckResult {
    std::string suite;
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> sides;  // lhs/rhs of failing components
};

struct SuiteOptions {
    int order = 2;
    Window window{};
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"tau-symmetry", "recursion", "virasoro", "backlund", "super"};
    return names;
}

namespace detail {

inline CheckResult from(const std::string& suite, const IdentityReport& r) { return {suite, r.name, r.pass, r.sides}; }
inline CheckResult from(const std::string& suite, const BacklundReport& r) { return {suite, r.name, r.pass, r.sides}; }

inline CheckResult from(const std::string& suite, const SuperReport& r)
{
    CheckResult c{suite, r.name, r.pass, {}};
    for (auto& s : r.residuals) c.sides.emplace_back(s, "0");
    return c;
}

inline CheckResult from(const std::string& suite, const VirasoroReport& r)
{
    CheckResult c{suite, "[L_" + std::to_string(r.m) + ", L_" + std::to_string(r.n) + "] = " + std::to_string(r.m - r.n) + " L_" +
                             std::to_string(r.m + r.n),
                  r.pass, {}};
    for (auto& mm : r.mismatches) c.sides.emplace_back(mm.monomial + ": " + to_string(mm.lhs), to_string(mm.rhs));
    if (r.constant != 0) c.sides.emplace_back("constant term: " + to_string(r.constant), "0");
    return c;
}

inline CheckResult flag(const std::string& suite, const std::string& name, bool ok) { return {suite, name, ok, {}}; }

inline std::string label(int alpha, int k) { return std::to_string(alpha) + "," + std::to_string(k); }

inline std::vector<FlowLabel> flow_labels(int order)
{
    std::vector<FlowLabel> L;
    for (int p = 0; p <= order; ++p) L.push_back({2, p});
    for (int q = 1; q <= order; ++q) L.push_back({0, -q});
    return L;
}

} // namespace detail

inline std::vector<CheckResult> suite_tau_symmetry(const SuiteOptions& o)
{
    const std::string s = "tau-symmetry";
    std::vector<CheckResult> out;
    auto L = detail::flow_labels(o.order);
    for (std::size_t i = 0; i < L.size(); ++i)
        for (std::size_t j = i + 1; j < L.size(); ++j) out.push_back(detail::from(s, tau_symmetry(L[i], L[j])));
    for (auto& l : L) out.push_back(detail::from(s, density_leading_check(l.alpha, l.q)));
    out.push_back(detail::from(s, density_leading_check(0, 0)));
    for (auto& l : L) out.push_back(detail::from(s, principal_flow_check(l)));
    return out;
}

inline std::vector<CheckResult> suite_recursion(const SuiteOptions& o)
{
    using detail::flag;
    using detail::label;
    const std::string s = "recursion";
    std::vector<CheckResult> out;
    for (Coords c : {Coords::PQ, Coords::W}) {
        std::string tag = c == Coords::PQ ? " (P, Q)" : " (w1, w2)";
        for (int p = 1; p <= o.order; ++p) {
            auto r = recursion_positive(p, c);
            r.name += tag;
            out.push_back(detail::from(s, r));
        }
        for (int p = 1; p <= std::max(1, o.order - 1); ++p) {
            auto r = recursion_negative(p, c);
            r.name += tag;
            out.push_back(detail::from(s, r));
        }
        out.push_back(flag(s, "P0 skew-adjoint" + tag, is_skew_adjoint(P0(c))));
        out.push_back(flag(s, "P1 skew-adjoint" + tag, is_skew_adjoint(P1(c))));
    }
    out.push_back(flag(s, "structure constants symmetric", check_symmetry_of_c3()));
    out.push_back(flag(s, "product associative", check_associativity()));
    out.push_back(flag(s, "unity", check_unity()));
    for (int alpha : {1, 2, 0}) {
        for (int k = 1; k <= o.order + 1; ++k) {
            out.push_back(flag(s, "theta recursion " + label(alpha, k), check_recursion(alpha, k)));
            out.push_back(flag(s, "theta quasi-homogeneity " + label(alpha, k), check_quasi_homogeneity(alpha, k)));
            out.push_back(flag(s, "theta residue agreement " + label(alpha, k), theta_by_residue(alpha, k) == theta(alpha, k)));
        }
    }
    for (int k = 1; k <= std::max(3, o.order + 1); ++k) {
        out.push_back(flag(s, "theta recursion " + label(0, -k), check_recursion(0, -k)));
        out.push_back(flag(s, "theta quasi-homogeneity " + label(0, -k), check_quasi_homogeneity(0, -k)));
        out.push_back(flag(s, "theta residue agreement " + label(0, -k), theta_by_residue(0, -k) == theta(0, -k)));
    }
    for (int a : {0, 1, 2})
        for (int k = a ? 0 : -2; k <= 2; ++k)
            for (int b : {0, 1, 2})
                for (int l = b ? 0 : -2; l <= 2; ++l) {
                    if (k + l > 2 || k + l < -3 || std::make_pair(a, k) > std::make_pair(b, l)) continue;
                    std::string n = label(a, k) + ";" + label(b, l);
                    out.push_back(flag(s, "Omega symmetric " + n, omega0(a, k, b, l) == omega0(b, l, a, k)));
                    out.push_back(flag(s, "Omega x-derivative " + n, check_omega_dx(a, k, b, l)));
                }
    return out;
}

inline std::vector<CheckResult> suite_virasoro(const SuiteOptions& o)
{
    using detail::flag;
    const std::string s = "virasoro";
    std::vector<CheckResult> out;
    const int top = std::max(0, o.order);
    for (int m = -1; m <= top; ++m) {
        VirasoroOp L = build_virasoro(m, o.window);
        out.push_back(flag(s, "L_" + std::to_string(m) + " a symmetric", is_symmetric(L.a)));
        out.push_back(flag(s, "L_" + std::to_string(m) + " c symmetric", is_symmetric(L.c)));
    }
    for (int m = -1; m <= top; ++m)
        for (int n = -1; n <= top; ++n) {
            if (m + n < -1 && m != n) continue;
            out.push_back(detail::from(s, virasoro_commutator(m, n, o.window)));
        }
    out.push_back(flag(s, "central constant forced to zero", virasoro_kappa(o.window) == 0));
    return out;
}

inline std::vector<CheckResult> suite_backlund(const SuiteOptions&)
{
    const std::string s = "backlund";
    return {detail::from(s, backlund_identity_check()), detail::from(s, backlund_order_eps_check()),
            detail::from(s, backlund_frechet_invariance_check())};
}

inline std::vector<CheckResult> suite_super(const SuiteOptions& o)
{
    const std::string s = "super";
    const int top = std::max(0, o.order);
    std::vector<CheckResult> out;
    auto residual = sigma_recursion_residual(0, Reduction::Full);
    out.push_back(detail::flag(s, "sigma recursions reduce to zero", residual.r1.is_zero() && residual.r2.is_zero()));
    out.push_back(detail::from(s, verify_AB(std::max(5, top + 3))));
    for (int j = 0; j <= top; ++j)
        for (int k = 0; k <= top; ++k) out.push_back(detail::from(s, odd_flow_commutativity_check(j, k)));
    for (int k = 0; k <= top; ++k) {
        out.push_back(detail::from(s, odd_flow_bihamiltonian_check(k)));
        for (int level = -1; level <= 1; ++level) out.push_back(detail::from(s, odd_flow_preserves_relations(k, level)));
    }
    out.push_back(detail::from(s, odd_lax_check(std::max(3, top + 1))));
    return out;
}

inline std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& o = {})
{
    if (name == "tau-symmetry") return suite_tau_symmetry(o);
    if (name == "recursion") return suite_recursion(o);
    if (name == "virasoro") return suite_virasoro(o);
    if (name == "backlund") return suite_backlund(o);
    if (name == "super") return suite_super(o);
    if (name == "all") {
        std::vector<CheckResult> all;
        for (auto& n : suite_names()) {
            auto part = run_suite(n, o);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace alh
