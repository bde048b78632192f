#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sticky/bounds/coinciding.hpp"
#include "sticky/bounds/explicit.hpp"
#include "sticky/bounds/interpolation.hpp"
#include "sticky/bounds/sobolev.hpp"
#include "sticky/error.hpp"
#include "sticky/geometry/benchmark.hpp"
#include "sticky/geometry/curvature.hpp"
#include "sticky/geometry/weights.hpp"

namespace sticky {

/// One computed constant with its optimizer locations and intermediate values.
struct BoundEntry {
    double value = 0.0;
    bool conditional = false;  ///< depends on user-supplied constants
    bool vacuous = false;
    std::vector<std::string> assumptions;
    std::map<std::string, double> details;
    std::string note;
};

struct BoundReport {
    std::map<std::string, BoundEntry> entries;
    std::map<std::string, std::string> skipped;  ///< key -> reason
    double A = 0.0;
    double B = 0.0;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    const BoundEntry& at(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw DomainError("report has no entry '" + key + "'");
        return it->second;
    }
    double value(const std::string& key) const { return at(key).value; }
};

/// Everything the bound formulas consume.
struct BoundsProblem {
    BenchmarkGeometry geometry = BenchmarkGeometry::flat_disk(1.0);
    WeightPair weights;
    CurvatureBounds curvature;
    double C_la = 0.0;
    double C_sib = 0.0;
    std::optional<double> L_la;
    std::optional<double> L_sib;
    std::optional<double> L_boundary;  ///< used when no Sobolev table applies
    SobolevTable sobolev;              ///< unweighted C_{p,2}; needs d >= 3
    bool coinciding = false;
    std::optional<double> ii_lower;  ///< for the direct coinciding bound; defaults to gamma1
};

namespace report_keys {
inline constexpr const char* kK1Mixed = "K1_general";
inline constexpr const char* kK1Trace = "K1_alt";
inline constexpr const char* kK1 = "K1";
inline constexpr const char* kK2 = "K2";
inline constexpr const char* kKBoundary = "K_boundary";
inline constexpr const char* kPoincare = "C_mu_bound";
inline constexpr const char* kPoincareNoBd = "C_hat_bound";
inline constexpr const char* kSteklov = "sigma_lower";
inline constexpr const char* kTrace = "trace_bound";
inline constexpr const char* kLBoundary = "L_boundary";
inline constexpr const char* kLogSob = "L_mu_bound";
inline constexpr const char* kLogSobNoBd = "L_hat_bound";
inline constexpr const char* kLogFactor = "bernoulli_logfactor";
inline constexpr const char* kCoincidingK1 = "coinciding_K1";
inline constexpr const char* kCoincidingDirect = "coinciding_direct";
}  // namespace report_keys

inline BoundReport evaluate_bounds(const BoundsProblem& pb) {
    namespace key = report_keys;
    const auto& g = pb.geometry;
    const auto& w = pb.weights;
    const auto& curv = pb.curvature;
    curv.validate();
    require(pb.C_la >= 0.0 && pb.C_sib >= 0.0, "C_la and C_sib must be nonnegative");

    BoundReport rep;
    rep.A = w.A;
    rep.B = w.B;
    const std::vector<std::string> curvature_assumptions{"Ric >= (d-1) k1", "sect <= k2", "gamma1 <= II <= gamma2"};

    const auto kb = K_boundary(g, w, curv, pb.C_la);
    {
        BoundEntry e;
        e.value = kb.value;
        e.assumptions = {"sect <= k2", "II <= gamma2"};
        e.details = {{"negpart", kb.negpart},
                     {"t1", kb.optimum.t1},
                     {"grid_t1", kb.optimum.grid_t1},
                     {"grid_value", kb.optimum.grid_value},
                     {"grid_size", kb.optimum.grid_size},
                     {"grid_ratio", kb.optimum.grid_ratio},
                     {"beta_over_alpha_sup", w.beta_over_alpha_sup}};
        rep.entries[key::kKBoundary] = e;
        BoundEntry alt = e;
        rep.entries[key::kK1Trace] = alt;
    }

    double K1 = kb.value;
    std::string K1_source = key::kK1Trace;
    if (curv.d == g.dimension()) {
        const auto k1 = K1_general(g, w, curv, pb.C_la);
        BoundEntry e;
        e.value = k1.value;
        e.assumptions = curvature_assumptions;
        e.details = {{"t0", k1.t0},
                     {"eps", k1.eps},
                     {"grad_sq", k1.grad_sq},
                     {"drift_sq_bound", k1.drift_sq_bound},
                     {"prefactor", k1.prefactor},
                     {"grid_value", k1.grid_value},
                     {"grid_size", k1.grid_size},
                     {"grid_ratio", k1.grid_ratio}};
        rep.entries[key::kK1Mixed] = e;
        if (k1.value < K1) {
            K1 = k1.value;
            K1_source = key::kK1Mixed;
        }
    } else {
        rep.skipped[key::kK1Mixed] = "tube integrals need curvature data in the dimension of the geometry";
    }
    {
        BoundEntry e;
        e.value = K1;
        e.note = "minimum of " + std::string(key::kK1Mixed) + " and " + key::kK1Trace + ", taken from " + K1_source;
        e.assumptions = rep.entries[K1_source].assumptions;
        rep.entries[key::kK1] = e;
        BoundEntry k2;
        k2.value = 0.0;
        k2.note = "every construction achieves K2 = 0";
        rep.entries[key::kK2] = k2;
    }

    InterpolationInputs in;
    in.C_la = pb.C_la;
    in.C_sib = pb.C_sib;
    in.K1 = K1;
    in.K2 = 0.0;
    in.K_boundary = kb.value;
    in.A = w.A;
    in.B = w.B;
    {
        const auto p = interpolate_poincare(in);
        BoundEntry e;
        e.value = p.value;
        e.assumptions = curvature_assumptions;
        e.details = {{"t", p.t}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}};
        rep.entries[key::kPoincare] = e;
        BoundEntry nb;
        nb.value = poincare_no_bd(pb.C_la, K1, kb.value, w.A, w.B);
        nb.assumptions = curvature_assumptions;
        rep.entries[key::kPoincareNoBd] = nb;
    }
    {
        const auto s = steklov_lower(g, w, curv, pb.C_la);
        BoundEntry e;
        e.value = s.value;
        e.vacuous = s.vacuous;
        e.assumptions = {"sect <= k2", "II <= gamma2"};
        e.details = {{"negpart", s.negpart}};
        rep.entries[key::kSteklov] = e;
        const auto t = trace_norm_bound(g, w, curv);
        BoundEntry tr;
        tr.value = t.value;
        tr.assumptions = {"sect <= k2", "II <= gamma2"};
        tr.details = {{"negpart", t.negpart}};
        rep.entries[key::kTrace] = tr;
    }

    const double lf = bernoulli_logfactor(w.A, w.B);
    rep.entries[key::kLogFactor] = BoundEntry{lf, false, false, {}, {}, ""};

    std::optional<double> L_boundary;
    if (curv.d >= 3 && pb.sobolev) {
        const auto lb = L_boundary_interior(curv.d, kb.negpart, w, pb.C_la, pb.sobolev);
        BoundEntry e;
        e.value = lb.value;
        e.conditional = true;
        e.assumptions = {"sect <= k2", "II <= gamma2", "d >= 3", "user-supplied C_{p,2}"};
        e.details = {{"p", lb.p},
                     {"entropy_term", lb.entropy_term},
                     {"rothaus_term", lb.rothaus_term},
                     {"negpart", lb.negpart},
                     {"grid_size", lb.grid_size}};
        rep.entries[key::kLBoundary] = e;
        L_boundary = lb.value;
    } else if (pb.L_boundary) {
        BoundEntry e;
        e.value = *pb.L_boundary;
        e.conditional = true;
        e.note = "user-supplied";
        rep.entries[key::kLBoundary] = e;
        L_boundary = pb.L_boundary;
    } else {
        rep.skipped[key::kLBoundary] = "needs d >= 3 with Sobolev constants, or a supplied value";
    }

    if (L_boundary && pb.L_la && pb.L_sib) {
        in.L_la = *pb.L_la;
        in.L_sib = *pb.L_sib;
        in.L_boundary = *L_boundary;
        const auto l = interpolate_logsob(in);
        BoundEntry e;
        e.value = l.value;
        e.conditional = true;
        e.assumptions = curvature_assumptions;
        e.details = {{"s", l.s}, {"t", l.t}, {"logfactor", l.logfactor}};
        rep.entries[key::kLogSob] = e;
    } else {
        rep.skipped[key::kLogSob] = "needs L_la, L_sib and L_boundary";
    }
    if (L_boundary && pb.L_la) {
        BoundEntry nb;
        nb.value = logsob_no_bd(*pb.L_la, *L_boundary, pb.C_la, kb.value, K1, w.A, w.B);
        nb.conditional = true;
        nb.assumptions = curvature_assumptions;
        rep.entries[key::kLogSobNoBd] = nb;
    } else {
        rep.skipped[key::kLogSobNoBd] = "needs L_la and L_boundary";
    }

    if (pb.coinciding) {
        BoundEntry e;
        e.value = coinciding_K1(curv);
        e.assumptions = {"beta = alpha on boundary", "Ric_{alpha,n} >= k_alpha_n", "II >= 0",
                         "integral of H_alpha >= 0"};
        e.details = {{"n", curv.n}, {"k_alpha_n", *curv.k_alpha_n}};
        rep.entries[key::kCoincidingK1] = e;
        const double ii = pb.ii_lower.value_or(curv.gamma1);
        BoundEntry d;
        d.value = coinciding_direct(curv.n, *curv.k_alpha_n, ii, curv.flags);
        d.assumptions = {"beta = alpha on boundary", "Ric_{alpha,n} >= k_alpha_n", "II >= ii_lower > 0",
                         "H_alpha >= 0"};
        d.details = {{"n", curv.n}, {"k_alpha_n", *curv.k_alpha_n}, {"ii_lower", ii}};
        rep.entries[key::kCoincidingDirect] = d;
    }
    return rep;
}

}  // namespace sticky
