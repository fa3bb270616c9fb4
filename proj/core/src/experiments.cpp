#include "tev/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tev/charfn.hpp"
#include "tev/spectrum.hpp"

namespace tev {

std::pair<RefractiveProfile, RefractiveProfile> build_counterexample_pair() {
    const Bounds b{4.0, 16.0};
    std::vector<Segment> s1{{0.0, 0.5, {LawKind::Constant, {4.0}}},
                            {0.5, 1.0, {LawKind::Constant, {16.0}}}};
    std::vector<Segment> s2{{0.0, 0.5, {LawKind::Constant, {16.0}}},
                            {0.5, 1.0, {LawKind::Constant, {4.0}}}};
    return {RefractiveProfile(std::move(s1), Regularity::PiecewiseConstant, b),
            RefractiveProfile(std::move(s2), Regularity::PiecewiseConstant, b)};
}

namespace {

double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return 1e300;
    const auto one_sided = [](const std::vector<double>& x, const std::vector<double>& y) {
        double worst = 0.0;
        for (double v : x) {
            double best = 1e300;
            for (double w : y) best = std::min(best, std::abs(v - w));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

CounterexampleReport verify_counterexample(const std::vector<double>& k_grid, double zero_k_max,
                                           double tol) {
    const auto [p1, p2] = build_counterexample_pair();
    CounterexampleReport rep;
    rep.grid_points = static_cast<int>(k_grid.size());
    for (double k : k_grid) {
        if (k < kFloor) throw std::domain_error("verify_counterexample: grid below the zero floor");
        const Cplx d1 = d_of_k(p1, k, tol).d;
        const Cplx d2 = d_of_k(p2, k, tol).d;
        const double stated = 9.0 / (16.0 * k) * (std::sin(2.0 * k) + std::sin(4.0 * k));
        const double exact = 9.0 / (16.0 * k) * (std::sin(4.0 * k) - 2.0 * std::sin(2.0 * k));
        rep.max_identity_dev = std::max(rep.max_identity_dev, std::abs(d1 - 3.0 * d2));
        rep.max_stated_form_dev = std::max(rep.max_stated_form_dev, std::abs(d1 - stated));
        rep.max_exact_form_dev = std::max(rep.max_exact_form_dev, std::abs(d1 - exact));
    }
    const EigenvalueSet e1 = real_eigs(p1, zero_k_max, tol);
    const EigenvalueSet e2 = real_eigs(p2, zero_k_max, tol);
    rep.zero_set_hausdorff = hausdorff(e1.real_zeros, e2.real_zeros);
    return rep;
}

namespace {

RefractiveProfile assemble(const FitProblem& prob, const std::vector<double>& theta) {
    std::vector<Segment> segs;
    double lo = 0.0, hi = 1e9;
    switch (prob.model) {
        case FitModelKind::TwoLayerInner:
            segs.push_back({0.0, prob.known_r1, {LawKind::Constant, {theta.at(0)}}});
            segs.push_back({prob.known_r1, 1.0, {LawKind::Constant, {prob.known_outer}}});
            lo = std::min(theta.at(0), prob.known_outer);
            hi = std::max(theta.at(0), prob.known_outer);
            break;
        case FitModelKind::LConstants: {
            std::vector<double> cuts{0.0};
            cuts.insert(cuts.end(), prob.known_breakpoints.begin(), prob.known_breakpoints.end());
            cuts.push_back(1.0);
            if (theta.size() + 1 != cuts.size())
                throw std::invalid_argument("fit: parameter count must match breakpoints");
            lo = 1e300;
            hi = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                segs.push_back({cuts[i], cuts[i + 1], {LawKind::Constant, {theta[i]}}});
                lo = std::min(lo, theta[i]);
                hi = std::max(hi, theta[i]);
            }
            break;
        }
        case FitModelKind::SinglePolynomial: {
            SegmentLaw law{LawKind::Polynomial, theta};
            segs.push_back({0.0, prob.tail_law ? prob.tail_from : 1.0, law});
            lo = 1e300;
            hi = 0.0;
            for (int i = 0; i <= 64; ++i) {
                const double v = law.value(static_cast<double>(i) / 64.0);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            break;
        }
    }
    if (prob.tail_law && prob.tail_from < 1.0 && prob.model != FitModelKind::LConstants) {
        if (prob.model == FitModelKind::TwoLayerInner)
            throw std::invalid_argument("fit: tail constraint unsupported for two-layer model");
        segs.back().end = prob.tail_from;
        segs.push_back({prob.tail_from, 1.0, *prob.tail_law});
        for (int i = 0; i <= 16; ++i) {
            const double v = prob.tail_law->value(prob.tail_from + (1.0 - prob.tail_from) * i / 16.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const Bounds b{lo * 0.999999, hi * 1.000001};
    const bool pc = std::all_of(segs.begin(), segs.end(),
                                [](const Segment& s) { return s.law.is_constant(); });
    return RefractiveProfile(std::move(segs), pc ? Regularity::PiecewiseConstant : Regularity::PiecewiseC2, b);
}

double objective(const FitProblem& prob, const std::vector<double>& theta) {
    for (double v : theta)
        if (!std::isfinite(v)) return 1e200;
    try {
        const RefractiveProfile p = assemble(prob, theta);
        double acc = 0.0;
        for (double k : prob.eigenvalues) {
            const Cplx d = d_of_k(p, k).d;
            acc += std::norm(d);
        }
        return acc;
    } catch (const std::exception&) {
        return 1e200;  // infeasible parameters (nonpositive law etc.)
    }
}

FitMinimum nelder_mead_once(const FitProblem& prob, std::vector<double> x0, double spread) {
    const std::size_t n = x0.size();
    const int max_iter = static_cast<int>(200 * n);
    const double ftol = 1e-14;

    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i)
        simplex[i + 1][i] += (x0[i] != 0.0 ? spread * std::abs(x0[i]) : spread / 2.0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = objective(prob, simplex[i]);

    FitMinimum out;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        // order
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sx(n + 1);
        std::vector<double> sf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sx[i] = simplex[idx[i]];
            sf[i] = fv[idx[i]];
        }
        simplex = sx;
        fv = sf;
        if (std::abs(fv[n] - fv[0]) <= ftol * (1.0 + std::abs(fv[0]))) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

        const auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (simplex[n][j] - centroid[j]);
            return x;
        };
        const std::vector<double> xr = blend(-1.0);
        const double fr = objective(prob, xr);
        if (fr < fv[0]) {
            const std::vector<double> xe = blend(-2.0);
            const double fe = objective(prob, xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const std::vector<double> xc = blend(fr < fv[n] ? -0.5 : 0.5);
            const double fc = objective(prob, xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = objective(prob, simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    out.params = simplex[best];
    out.residual = fv[best];
    out.converged = iter < max_iter;
    return out;
}

FitMinimum nelder_mead(const FitProblem& prob, std::vector<double> x0) {
    FitMinimum first = nelder_mead_once(prob, std::move(x0), 0.05);
    // restart with a tight simplex: the absolute ftol floor stalls the first
    // pass early when the objective is already ~1e-14
    FitMinimum second = nelder_mead_once(prob, first.params, 1e-3);
    second.converged = first.converged && second.converged;
    return second.residual <= first.residual ? second : first;
}

}  // namespace

FitResult fit_profile(const FitProblem& problem) {
    if (problem.eigenvalues.empty())
        throw std::invalid_argument("fit_profile: needs at least one eigenvalue");
    if (problem.initial_guesses.empty())
        throw std::invalid_argument("fit_profile: needs at least one initial guess");
    std::size_t dim = 0;
    switch (problem.model) {
        case FitModelKind::TwoLayerInner: dim = 1; break;
        case FitModelKind::LConstants: dim = problem.known_breakpoints.size() + 1; break;
        case FitModelKind::SinglePolynomial: dim = problem.degree + 1; break;
    }
    if (dim > problem.eigenvalues.size())
        throw std::invalid_argument("fit_profile: more parameters than eigenvalues");

    FitResult out;
    for (const std::vector<double>& guess : problem.initial_guesses) {
        if (guess.size() != dim) throw std::invalid_argument("fit_profile: guess has wrong dimension");
        FitMinimum m = nelder_mead(problem, guess);
        if (!m.converged)
            out.notes.push_back("optimizer stagnated from a start; result kept");
        bool duplicate = false;
        for (FitMinimum& seen : out.minima) {
            double dist = 0.0;
            for (std::size_t j = 0; j < dim; ++j)
                dist = std::max(dist, std::abs(seen.params[j] - m.params[j]));
            if (dist < 1e-4) {
                duplicate = true;
                if (m.residual < seen.residual) seen = m;
                break;
            }
        }
        if (!duplicate) out.minima.push_back(std::move(m));
    }
    std::sort(out.minima.begin(), out.minima.end(),
              [](const FitMinimum& a, const FitMinimum& b) { return a.residual < b.residual; });
    out.best_params = out.minima.front().params;
    out.best_residual = out.minima.front().residual;

    for (std::size_t i = 0; i < out.minima.size() && !out.non_uniqueness_flag; ++i) {
        for (std::size_t j = i + 1; j < out.minima.size(); ++j) {
            if (out.minima[i].residual > 1e-10 || out.minima[j].residual > 1e-10) continue;
            double dist = 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                dist = std::max(dist, std::abs(out.minima[i].params[c] - out.minima[j].params[c]));
            if (dist > 1e-3) {
                out.non_uniqueness_flag = true;
                break;
            }
        }
    }
    return out;
}

std::string fit_result_json(const FitResult& r) {
    nlohmann::json j;
    j["best_params"] = r.best_params;
    j["best_residual"] = r.best_residual;
    j["non_uniqueness_flag"] = r.non_uniqueness_flag;
    j["minima"] = nlohmann::json::array();
    for (const FitMinimum& m : r.minima)
        j["minima"].push_back(
            {{"params", m.params}, {"residual", m.residual}, {"converged", m.converged}});
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j.dump(2);
}

std::vector<double> read_eigenvalue_csv(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("index", 0) == 0) continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3) continue;
        const double re = std::stod(cells[1]);
        const double im = std::stod(cells[2]);
        if (im == 0.0) out.push_back(re);
    }
    return out;
}

}  // namespace tev
