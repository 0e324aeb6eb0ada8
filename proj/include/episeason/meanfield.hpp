#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "episeason/error.hpp"
#include "episeason/graph_stats.hpp"

namespace episeason {

// Per-degree-class vaccination probabilities v_k, constrained so that
// sum_k P(k) v_k equals the target proportion.
struct VaccProfile {
    std::vector<double> v_k; // index k = 0..max_degree of the distribution
    double target_v = 0.0;
    bool degenerate_uniform = false; // set when update_vk had no epidemic signal
};

inline VaccProfile uniform_profile(const DegreeDistribution& dist, double v) {
    if (!(v >= 0.0 && v < 1.0)) fail("param", "vaccinated proportion must be in [0,1)");
    return {std::vector<double>(static_cast<std::size_t>(dist.max_degree()) + 1, v), v, false};
}

// Probability that an edge points to an infected node, excess-degree
// weighted: Theta = sum_k (k-1) P(k) i_k / <k>.
inline double theta(const DegreeDistribution& dist, std::span<const double> i_k) {
    if (dist.mean() <= 0.0) fail("param", "degenerate degree distribution: <k> = 0");
    double acc = 0.0;
    const int km = dist.max_degree();
    for (int k = 1; k <= km; ++k) {
        if (static_cast<std::size_t>(k) < i_k.size())
            acc += (k - 1) * dist.prob(k) * i_k[static_cast<std::size_t>(k)];
    }
    return acc / dist.mean();
}

struct SeasonIntegration {
    std::vector<double> r_k; // terminal recovered density per degree class
    bool converged = true;   // false when the horizon was hit before extinction
    double max_conservation_error = 0.0;
};

// Integrates the degree-class SIR system
//   di_k/dt = beta (1 - v_k) k s_k Theta - i_k
//   ds_k/dt = -beta (1 - v_k) k s_k Theta
//   dr_k/dt = i_k
// from s_k(0) = 1 - i0, i_k(0) = i0, r_k(0) = 0 with fixed-step RK4, stopping
// when max_k i_k < 1e-9 or at the horizon.
inline SeasonIntegration integrate_season(const DegreeDistribution& dist, const VaccProfile& profile,
                                          double beta, double i0, double h = 0.01,
                                          double horizon = 500.0) {
    if (!(i0 > 0.0 && i0 < 1.0)) fail("param", "i0 must be in (0,1)");
    if (!(h > 0.0)) fail("param", "step size must be positive");
    if (beta < 0.0 || beta > 1.0) fail("param", "beta must be in [0,1]");
    const std::size_t classes = static_cast<std::size_t>(dist.max_degree()) + 1;
    if (profile.v_k.size() != classes) fail("param", "vaccination profile does not match distribution");
    for (double vk : profile.v_k)
        if (vk < 0.0 || vk > 1.0) fail("param", "v_k out of [0,1]");
    if (dist.mean() <= 0.0) fail("param", "degenerate degree distribution: <k> = 0");

    std::vector<double> s(classes, 1.0 - i0), i(classes, i0), r(classes, 0.0);
    std::vector<double> rate(classes); // beta (1 - v_k) k
    for (std::size_t k = 0; k < classes; ++k)
        rate[k] = beta * (1.0 - profile.v_k[k]) * static_cast<double>(k);

    // derivative of (s, i) given state; dr/dt = i needs no storage
    std::vector<double> ks1(classes), ks2(classes), ks3(classes), ks4(classes);
    std::vector<double> ki1(classes), ki2(classes), ki3(classes), ki4(classes);
    std::vector<double> ts(classes), ti(classes);
    const auto derive = [&](const std::vector<double>& sv, const std::vector<double>& iv,
                            std::vector<double>& ds, std::vector<double>& di) {
        const double th = theta(dist, iv);
        for (std::size_t k = 0; k < classes; ++k) {
            const double inf = rate[k] * sv[k] * th;
            ds[k] = -inf;
            di[k] = inf - iv[k];
        }
    };

    SeasonIntegration out;
    double t = 0.0;
    const auto max_i = [&] { return *std::max_element(i.begin(), i.end()); };
    while (max_i() >= 1e-9) {
        if (t >= horizon) {
            out.converged = false;
            break;
        }
        derive(s, i, ks1, ki1);
        for (std::size_t k = 0; k < classes; ++k) {
            ts[k] = s[k] + 0.5 * h * ks1[k];
            ti[k] = i[k] + 0.5 * h * ki1[k];
        }
        derive(ts, ti, ks2, ki2);
        for (std::size_t k = 0; k < classes; ++k) {
            ts[k] = s[k] + 0.5 * h * ks2[k];
            ti[k] = i[k] + 0.5 * h * ki2[k];
        }
        derive(ts, ti, ks3, ki3);
        for (std::size_t k = 0; k < classes; ++k) {
            ts[k] = s[k] + h * ks3[k];
            ti[k] = i[k] + h * ki3[k];
        }
        derive(ts, ti, ks4, ki4);
        for (std::size_t k = 0; k < classes; ++k) {
            // dr/dt = i, so the four RK4 stage values for r are the i values
            // at the corresponding stage states
            r[k] += h / 6.0 * (i[k] + 2.0 * (i[k] + 0.5 * h * ki1[k]) +
                               2.0 * (i[k] + 0.5 * h * ki2[k]) + (i[k] + h * ki3[k]));
            s[k] += h / 6.0 * (ks1[k] + 2.0 * ks2[k] + 2.0 * ks3[k] + ks4[k]);
            i[k] += h / 6.0 * (ki1[k] + 2.0 * ki2[k] + 2.0 * ki3[k] + ki4[k]);
            out.max_conservation_error =
                std::max(out.max_conservation_error, std::abs(s[k] + i[k] + r[k] - 1.0));
        }
        t += h;
    }
    out.r_k = std::move(r);
    return out;
}

// Total prevalence of the first season from the transcendental
// self-consistency equation: solves
//   phi = 1 - 1/<k> - (1/<k>) sum_k (k-1) P(k) exp(-beta (1-v) k phi)
// by damped fixed-point iteration from phi = 1, then returns
//   r = sum_k P(k) (1 - exp(-beta (1-v) k phi)).
// Below the epidemic threshold the iteration collapses to the trivial root
// phi = 0 and r = 0.
inline double closed_form_prevalence(const DegreeDistribution& dist, double beta, double v) {
    if (beta < 0.0 || beta > 1.0) fail("param", "beta must be in [0,1]");
    if (!(v >= 0.0 && v < 1.0)) fail("param", "vaccinated proportion must be in [0,1)");
    const double mk = dist.mean();
    if (mk <= 0.0) fail("param", "degenerate degree distribution: <k> = 0");
    const double bv = beta * (1.0 - v);
    const int km = dist.max_degree();

    const auto g = [&](double phi) {
        double acc = 0.0;
        for (int k = 1; k <= km; ++k)
            acc += (k - 1) * dist.prob(k) * std::exp(-bv * k * phi);
        return 1.0 - 1.0 / mk - acc / mk;
    };

    double phi = 1.0;
    const double damping = 0.5;
    bool converged = false;
    for (int iter = 0; iter < 100000; ++iter) {
        const double next = g(phi);
        if (std::abs(next - phi) < 1e-12) {
            phi = next;
            converged = true;
            break;
        }
        phi += damping * (next - phi);
        phi = std::clamp(phi, 0.0, 1.0);
    }
    if (!converged) fail("numeric", "prevalence fixed point did not converge");
    if (phi < 0.0) phi = 0.0;

    double r = 0.0;
    for (int k = 0; k <= km; ++k) r += dist.prob(k) * (1.0 - std::exp(-bv * k * phi));
    return r;
}

struct ThresholdResult {
    double value;             // may be negative: no immunization needed
    bool immunization_needed; // value > 0
};

// Uniform-immunization threshold v_c = 1 - <k> / (beta (<k^2> - <k>)).
inline ThresholdResult uniform_threshold(double mean_k, double mean_k2, double beta) {
    if (!(beta > 0.0)) fail("param", "beta must be positive");
    if (!(mean_k > 0.0)) fail("param", "mean degree must be positive");
    if (mean_k2 < mean_k) fail("param", "second moment below first moment");
    if (mean_k2 == mean_k) fail("numeric", "degenerate moments: <k^2> = <k>");
    const double value = 1.0 - mean_k / (beta * (mean_k2 - mean_k));
    return {value, value > 0.0};
}

// Next-season vaccination profile: v_k proportional to the expected W value
// of a degree-k node, W_k = k p + r_k with p = sum_k eta(k) r_k and
// eta(k) = k P(k) / <k>. Values above 1 are clamped and the excess
// redistributed over unclamped classes so sum_k P(k) v_k = v is preserved.
inline VaccProfile update_vk(const DegreeDistribution& dist, std::span<const double> r_k, double v) {
    if (!(v >= 0.0 && v < 1.0)) fail("param", "vaccinated proportion must be in [0,1)");
    const std::size_t classes = static_cast<std::size_t>(dist.max_degree()) + 1;
    if (r_k.size() != classes) fail("param", "r_k does not match distribution");
    for (double x : r_k)
        if (x < -1e-12 || x > 1.0 + 1e-12) fail("param", "r_k out of [0,1]");
    const double mk = dist.mean();
    if (mk <= 0.0) fail("param", "degenerate degree distribution: <k> = 0");

    double p = 0.0;
    for (std::size_t k = 1; k < classes; ++k)
        p += static_cast<double>(k) * dist.prob(static_cast<int>(k)) * r_k[k] / mk;
    double denom = 0.0;
    for (std::size_t k = 0; k < classes; ++k)
        denom += (static_cast<double>(k) * p + r_k[k]) * dist.prob(static_cast<int>(k));
    if (denom <= 0.0) {
        auto profile = uniform_profile(dist, v);
        profile.degenerate_uniform = true;
        return profile;
    }

    VaccProfile profile{std::vector<double>(classes, 0.0), v, false};
    for (std::size_t k = 0; k < classes; ++k)
        profile.v_k[k] = (static_cast<double>(k) * p + r_k[k]) * v / denom;

    // Clamp support classes at 1 and rescale the rest to keep the budget.
    std::vector<char> clamped(classes, 0);
    for (;;) {
        bool changed = false;
        for (std::size_t k = 0; k < classes; ++k) {
            if (!clamped[k] && dist.prob(static_cast<int>(k)) > 0.0 && profile.v_k[k] > 1.0) {
                profile.v_k[k] = 1.0;
                clamped[k] = 1;
                changed = true;
            }
        }
        if (!changed) break;
        double held = 0.0, free_mass = 0.0;
        for (std::size_t k = 0; k < classes; ++k) {
            if (dist.prob(static_cast<int>(k)) <= 0.0) continue;
            if (clamped[k]) held += dist.prob(static_cast<int>(k));
            else free_mass += profile.v_k[k] * dist.prob(static_cast<int>(k));
        }
        if (free_mass <= 0.0) break;
        const double scale = (v - held) / free_mass;
        for (std::size_t k = 0; k < classes; ++k)
            if (!clamped[k] && dist.prob(static_cast<int>(k)) > 0.0) profile.v_k[k] *= scale;
    }
    // Zero-probability classes carry no budget; just keep them in range.
    for (std::size_t k = 0; k < classes; ++k)
        if (dist.prob(static_cast<int>(k)) <= 0.0) profile.v_k[k] = std::min(profile.v_k[k], 1.0);
    return profile;
}

struct MeanFieldSeries {
    std::vector<double> r_inf; // aggregate prevalence per season
    bool all_converged = true;
};

// Season 1 runs with the uniform profile; every later season re-integrates
// with the profile updated from the previous season's per-class prevalence.
inline MeanFieldSeries run_meanfield_seasons(const DegreeDistribution& dist, double beta, double v,
                                             double i0, int seasons, double h = 0.01,
                                             double horizon = 500.0) {
    if (seasons < 1) fail("param", "need at least one season");
    MeanFieldSeries series;
    VaccProfile profile = uniform_profile(dist, v);
    for (int s = 1; s <= seasons; ++s) {
        const auto integ = integrate_season(dist, profile, beta, i0, h, horizon);
        series.all_converged = series.all_converged && integ.converged;
        double r = 0.0;
        for (std::size_t k = 0; k < integ.r_k.size(); ++k)
            r += dist.prob(static_cast<int>(k)) * integ.r_k[k];
        series.r_inf.push_back(r);
        if (s < seasons) profile = update_vk(dist, integ.r_k, v);
    }
    return series;
}

} // namespace episeason
