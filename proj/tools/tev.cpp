#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tev/analysis.hpp"
#include "tev/charfn.hpp"
#include "tev/experiments.hpp"
#include "tev/liouville.hpp"
#include "tev/mollifier.hpp"
#include "tev/parallel.hpp"
#include "tev/profile_io.hpp"
#include "tev/spectrum.hpp"
#include "tev/textio.hpp"

namespace {

using namespace tev;

void deliver(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

std::string provenance(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string head = "# tev " + cmd + "\n";
    for (const auto& [k, v] : kv) head += "# " + k + "=" + v + "\n";
    return head;
}

struct CommonOpts {
    std::string profile_path;
    std::string out_path;
    double tol = 1e-10;
    int jobs = 0;
};

int cmd_eval(const CommonOpts& o, const std::vector<std::string>& ks) {
    const RefractiveProfile p = load_profile(o.profile_path);
    for (const std::string& ktxt : ks) {
        const Cplx k = parse_complex(ktxt);
        const CharacteristicValue v = d_of_k(p, k, o.tol);
        std::cout << "k = " << complex_to_string(k) << "  d = " << complex_to_string(v.d)
                  << "  y1 = " << complex_to_string(v.y1)
                  << "  yp1 = " << complex_to_string(v.yp1);
        if (v.degenerate) std::cout << "  (limit at k = 0)";
        std::cout << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& o, double kmin, double kmax, int n, double imag) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const DominantTermModel model = dominant_coeffs(p);
    std::vector<Cplx> ks(n);
    for (int i = 0; i < n; ++i)
        ks[i] = Cplx(kmin + (kmax - kmin) * i / std::max(1, n - 1), imag);
    std::vector<std::string> rows(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            const CharacteristicValue v = d_of_k(p, ks[i], o.tol);
            const Cplx dd = v.degenerate ? Cplx{} : dominant_eval(model, ks[i]);
            rows[i] = fmt17(ks[i].real()) + "," + fmt17(ks[i].imag()) + "," + fmt17(v.d.real()) +
                      "," + fmt17(v.d.imag()) + "," + fmt17(dd.real()) + "," + fmt17(dd.imag()) +
                      "\n";
        },
        resolve_jobs(o.jobs));
    std::string body = provenance("sweep", {{"profile", o.profile_path},
                                            {"kmin", fmt17(kmin)},
                                            {"kmax", fmt17(kmax)},
                                            {"n", std::to_string(n)},
                                            {"imag", fmt17(imag)},
                                            {"tol", fmt17(o.tol)}});
    body += "k_re,k_im,d_re,d_im,Dd_re,Dd_im\n";
    for (const std::string& r : rows) body += r;
    deliver(o.out_path, body);
    return 0;
}

int cmd_eigs(const CommonOpts& o, double kmax) {
    const RefractiveProfile p = load_profile(o.profile_path);
    EigenvalueSet s = real_eigs(p, kmax, o.tol);
    s.real_multiplicities.resize(s.real_zeros.size(), 1);
    parallel_for(
        s.real_zeros.size(),
        [&](std::size_t i) {
            const double z = s.real_zeros[i];
            double gap = 1e300;
            if (i > 0) gap = std::min(gap, z - s.real_zeros[i - 1]);
            if (i + 1 < s.real_zeros.size()) gap = std::min(gap, s.real_zeros[i + 1] - z);
            s.real_multiplicities[i] =
                real_zero_multiplicity(p, z, std::min(0.35 * gap, 0.2), o.tol);
        },
        resolve_jobs(o.jobs));
    std::string body = provenance(
        "eigs", {{"profile", o.profile_path}, {"kmax", fmt17(kmax)}, {"tol", fmt17(o.tol)}});
    body += eigenvalues_csv(s);
    deliver(o.out_path, body);
    for (const std::string& w : s.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_ceigs(const CommonOpts& o, double re0, double re1, double im0, double im1) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const std::vector<ComplexZero> zs = complex_eigs(p, {re0, re1, im0, im1}, o.tol);
    EigenvalueSet s;
    s.complex_zeros = zs;
    s.region = {re0, re1, im0, im1};
    std::string body = provenance("ceigs", {{"profile", o.profile_path},
                                            {"re0", fmt17(re0)},
                                            {"re1", fmt17(re1)},
                                            {"im0", fmt17(im0)},
                                            {"im1", fmt17(im1)}});
    body += eigenvalues_csv(s);
    deliver(o.out_path, body);
    return 0;
}

int cmd_density(const CommonOpts& o, double tmax, double height) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const CountingFit fit = density_fit(p, tmax, height, o.tol);
    std::string body = provenance("density", {{"profile", o.profile_path},
                                              {"tmax", fmt17(tmax)},
                                              {"height", fmt17(height)}});
    body += counting_csv(fit);
    deliver(o.out_path, body);
    std::cout << "slope = " << fmt17(fit.slope) << "\nintercept = " << fmt17(fit.intercept)
              << "\ndelta_estimate = " << fmt17(fit.delta_estimate) << "\ncaveat: " << fit.caveat
              << "\n";
    return 0;
}

int cmd_dominant(const CommonOpts& o, double kmin, double kmax, int n) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const DominantTermModel m = dominant_coeffs(p);
    std::cout << "L = " << m.L << "  delta_L = " << fmt17(m.delta_L) << "\n";
    std::cout << "j,beta,weight\n";
    for (std::size_t j = 0; j < m.betas.size(); ++j)
        std::cout << (j + 1) << "," << fmt17(m.betas[j]) << "," << fmt17(m.weights[j]) << "\n";
    if (!o.out_path.empty()) {
        std::vector<Cplx> ks(n);
        for (int i = 0; i < n; ++i)
            ks[i] = Cplx(kmin + (kmax - kmin) * i / std::max(1, n - 1), 0.0);
        std::ostringstream csv;
        csv << provenance("dominant", {{"profile", o.profile_path},
                                       {"kmin", fmt17(kmin)},
                                       {"kmax", fmt17(kmax)},
                                       {"n", std::to_string(n)}});
        write_sweep_csv(csv, p, ks, o.tol);
        atomic_write(o.out_path, csv.str());
    }
    return 0;
}

int cmd_check(const CommonOpts& o, double eps) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const HypothesisReport r = classify_case(p, eps);
    deliver(o.out_path, hypothesis_report_json(r) + "\n");
    return 0;
}

int cmd_kronecker(std::vector<double> v, std::vector<double> a, double eps1, double T,
                  double tcap) {
    const KroneckerResult res = kronecker_search(v, a, eps1, T, tcap);
    if (!res.found) {
        std::cout << "not found below cap\n";
        return 0;
    }
    std::cout << "t = " << fmt17(res.t) << "\n";
    for (std::size_t j = 0; j < res.p.size(); ++j)
        std::cout << "p_" << (j + 1) << " = " << res.p[j]
                  << "  residual = " << fmt17(res.residuals[j]) << "\n";
    return 0;
}

int cmd_contour(const CommonOpts& o, double eps, const std::string& case_name, double tmult,
                const std::string& samples_out) {
    const RefractiveProfile p = load_profile(o.profile_path);
    const HypothesisReport rep = classify_case(p, eps);

    ContourParams params;
    if (case_name == "auto") {
        switch (rep.verdict) {
            case CaseVerdict::Case1: params.contour_case = ContourCase::Case1; break;
            case CaseVerdict::Case2a: params.contour_case = ContourCase::Case2a; break;
            case CaseVerdict::Case2b: params.contour_case = ContourCase::Case2b; break;
            case CaseVerdict::Inapplicable:
                throw std::domain_error("contour: hypotheses inapplicable (" + rep.reason +
                                        "); pass --case to override");
        }
    } else if (case_name == "1") {
        params.contour_case = ContourCase::Case1;
    } else if (case_name == "2a") {
        params.contour_case = ContourCase::Case2a;
    } else if (case_name == "2b") {
        params.contour_case = ContourCase::Case2b;
    } else {
        throw CLI::ValidationError("--case must be auto, 1, 2a or 2b");
    }
    if (params.contour_case != ContourCase::Case1) {
        if (rep.dependence.kind != DependenceKind::Dependent)
            throw std::domain_error("contour: case 2 needs a rationally dependent frequency pair");
        params.q_hat = rep.dependence.q;
        params.p_hat = rep.dependence.p;
    }
    params.c1_fit = std::max(4.0 * remainder_fit(p, 50.0, 200.0, 100, o.tol), 1e-8);
    params.eps = eps;

    ContourSpec spec = build_contour(p, params);
    if (tmult > 1.0) {
        params.T_extra = tmult * spec.t1;
        spec = build_contour(p, params);
    }
    std::cout << "t1 = " << fmt17(spec.t1) << "\nN1 = " << spec.N1
              << "\nC2 = " << fmt17(spec.C2) << "\nradius = " << fmt17(spec.radius)
              << "\neps1 = " << fmt17(spec.eps1) << "\n";
    const double arc = verify_arc_bound(1.0 + p.delta_total(), spec.N1, 1000);
    std::cout << "arc bound min ratio = " << fmt17(arc) << (arc >= 1.0 ? " (>= 1)" : " (VIOLATED)")
              << "\n";
    const ContourBoundReport vb = verify_contour_lower_bound(p, spec, o.tol);
    std::cout << "min |d| |k| exp(-beta1 |Im k|) = " << fmt17(vb.min_normalized) << " at k = "
              << complex_to_string(vb.argmin) << "\nfraction of M1/24 = "
              << fmt17(vb.paper_fraction) << "\n";
    if (!samples_out.empty()) atomic_write(samples_out, contour_samples_csv(p, spec, o.tol));
    return 0;
}

int cmd_counterexample(double kmax, int grid, double zeros_kmax) {
    std::vector<double> ks(grid);
    for (int i = 0; i < grid; ++i) ks[i] = 0.1 + (kmax - 0.1) * (i + 1) / grid;
    const CounterexampleReport rep = verify_counterexample(ks, zeros_kmax);
    std::cout << "grid points = " << rep.grid_points << "\n"
              << "max |d1 - 3 d2| = " << fmt17(rep.max_identity_dev) << "\n"
              << "max |d1 - (9/16k)(sin 4k - 2 sin 2k)| = " << fmt17(rep.max_exact_form_dev)
              << "\n"
              << "max |d1 - (9/16k)(sin 2k + sin 4k)| = " << fmt17(rep.max_stated_form_dev)
              << "  (the sum form printed in the source text does not match the determinant)\n"
              << "zero-set Hausdorff distance on (0," << fmt17(zeros_kmax)
              << "] = " << fmt17(rep.zero_set_hausdorff) << "\n";
    return 0;
}

int cmd_invert(const CommonOpts& o, const std::string& eigs_file, const std::string& model,
               double outer, double r1, std::vector<double> breakpoints, int degree, int count,
               const std::vector<std::string>& starts) {
    std::ifstream in(eigs_file);
    if (!in) throw std::runtime_error("cannot open eigenvalue file: " + eigs_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    // drop provenance comments
    std::string cleaned;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#') cleaned += line + "\n";

    FitProblem prob;
    prob.eigenvalues = read_eigenvalue_csv(cleaned);
    if (count > 0 && static_cast<std::size_t>(count) < prob.eigenvalues.size())
        prob.eigenvalues.resize(count);
    if (model == "two_layer_inner") {
        prob.model = FitModelKind::TwoLayerInner;
        prob.known_outer = outer;
        prob.known_r1 = r1;
    } else if (model == "l_constants") {
        prob.model = FitModelKind::LConstants;
        prob.known_breakpoints = breakpoints;
    } else if (model == "polynomial") {
        prob.model = FitModelKind::SinglePolynomial;
        prob.degree = degree;
    } else {
        throw CLI::ValidationError("--model must be two_layer_inner, l_constants or polynomial");
    }
    for (const std::string& s : starts) {
        std::vector<double> guess;
        std::istringstream gs(s);
        std::string cell;
        while (std::getline(gs, cell, ',')) guess.push_back(std::stod(cell));
        prob.initial_guesses.push_back(std::move(guess));
    }
    const FitResult res = fit_profile(prob);
    deliver(o.out_path, fit_result_json(res) + "\n");
    return 0;
}

int cmd_mollify(const CommonOpts& o, const std::string& fixture, int j, int grid) {
    std::function<double(double)> f, fp;
    if (fixture == "kink") {
        f = [](double x) { return (x - 0.5) * std::abs(x - 0.5) / 2.0 + 0.125; };
        fp = [](double x) { return std::abs(x - 0.5); };
    } else if (fixture == "hat") {
        // f' = min(0.6, |x - 0.3| + 0.1); the clamp engages at x = 0.8
        fp = [](double x) { return std::min(0.6, std::abs(x - 0.3) + 0.1); };
        f = [](double x) {
            if (x <= 0.8) return 0.1 * x + 0.5 * (x - 0.3) * std::abs(x - 0.3) + 0.045;
            return 0.25 + 0.6 * (x - 0.8);
        };
    } else {
        throw CLI::ValidationError("--fixture must be kink or hat");
    }
    const Mollified mol(f, fp, j);
    std::string body = provenance(
        "mollify", {{"fixture", fixture}, {"j", std::to_string(j)}, {"grid", std::to_string(grid)}});
    body += "x,f,f_j,g_j\n";
    for (int i = 0; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        body += fmt17(x) + "," + fmt17(f(x)) + "," + fmt17(mol.fj(x)) + "," + fmt17(mol.g(x)) +
                "\n";
    }
    deliver(o.out_path, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission-eigenvalue laboratory for layered radial media"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<std::string> k_literals;
    double kmin = 0.1, kmax = 50.0, imag = 0.0;
    int n = 500, grid = 500, jval = 8, count = 0, degree = 1;
    double re0 = 0, re1 = 1, im0 = 0.1, im1 = 1, tmax = 200.0, height = 5.0, eps = 0.05;
    double eps1 = 0.05, T = 10.0, tcap = 1e7, outer = 1.0, r1 = 0.5, tmult = 1.0;
    double zeros_kmax = 20.0;
    std::vector<double> v_list, a_list, breakpoints;
    std::string case_name = "auto", samples_out, eigs_file, model = "two_layer_inner",
                fixture = "kink";
    std::vector<std::string> starts;

    const auto add_common = [&](CLI::App* c, bool needs_profile) {
        if (needs_profile)
            c->add_option("--profile", o.profile_path, "profile JSON file")->required();
        c->add_option("--out", o.out_path, "output path (default: stdout)");
        c->add_option("--tol", o.tol, "integrator tolerance");
        c->add_option("--jobs", o.jobs, "worker threads (default: TEV_JOBS or hardware)");
    };

    auto* eval = app.add_subcommand("eval", "evaluate d(k) at one or more wavenumbers");
    add_common(eval, true);
    eval->add_option("--k", k_literals, "wavenumber, complex accepted as a+bi")->required();

    auto* sweep = app.add_subcommand("sweep", "CSV of d and its dominant model over a k grid");
    add_common(sweep, true);
    sweep->add_option("--kmin", kmin);
    sweep->add_option("--kmax", kmax);
    sweep->add_option("--n", n);
    sweep->add_option("--imag", imag, "fixed imaginary part of k");

    auto* eigs = app.add_subcommand("eigs", "real zeros of d with multiplicities");
    add_common(eigs, true);
    eigs->add_option("--kmax", kmax)->required();

    auto* ceigs = app.add_subcommand("ceigs", "zeros in a rectangle via the argument principle");
    add_common(ceigs, true);
    ceigs->add_option("--re0", re0)->required();
    ceigs->add_option("--re1", re1)->required();
    ceigs->add_option("--im0", im0)->required();
    ceigs->add_option("--im1", im1)->required();

    auto* density = app.add_subcommand("density", "zero-counting fit and thickness estimate");
    add_common(density, true);
    density->add_option("--tmax", tmax);
    density->add_option("--height", height, "upper edge of the complex search strip");

    auto* dominant = app.add_subcommand("dominant", "dominant-model coefficients and sweep");
    add_common(dominant, true);
    dominant->add_option("--kmin", kmin);
    dominant->add_option("--kmax", kmax);
    dominant->add_option("--n", n);

    auto* check = app.add_subcommand("check", "hypothesis report for the uniqueness classification");
    add_common(check, true);
    check->add_option("--eps", eps, "epsilon entering the alpha point");

    auto* kron = app.add_subcommand("kronecker", "simultaneous Diophantine approximation search");
    kron->add_option("--v", v_list, "frequencies")->required();
    kron->add_option("--a", a_list, "targets")->required();
    kron->add_option("--eps1", eps1)->required();
    kron->add_option("--T", T);
    kron->add_option("--tcap", tcap);

    auto* contour = app.add_subcommand("contour", "build the lower-bound contour and verify it");
    add_common(contour, true);
    contour->add_option("--eps", eps);
    contour->add_option("--case", case_name, "auto, 1, 2a or 2b");
    contour->add_option("--tmult", tmult, "rebuild with the search start at tmult * t1");
    contour->add_option("--samples-out", samples_out, "CSV of boundary samples");

    auto* cx = app.add_subcommand("counterexample", "verify the two-layer swap identity");
    cx->add_option("--kmax", kmax);
    cx->add_option("--grid", grid);
    cx->add_option("--zeros-kmax", zeros_kmax);

    auto* invert = app.add_subcommand("invert", "least-squares profile fit from eigenvalue data");
    add_common(invert, false);
    invert->add_option("--eigs-file", eigs_file, "eigenvalue CSV")->required();
    invert->add_option("--model", model, "two_layer_inner, l_constants or polynomial");
    invert->add_option("--outer", outer, "known outer constant (two_layer_inner)");
    invert->add_option("--r1", r1, "known breakpoint (two_layer_inner)");
    invert->add_option("--breakpoints", breakpoints, "known breakpoints (l_constants)");
    invert->add_option("--degree", degree, "polynomial degree");
    invert->add_option("--count", count, "use only the first N eigenvalues");
    invert->add_option("--start", starts, "initial guess, comma-separated")->required();

    auto* mollify = app.add_subcommand("mollify", "smooth a built-in fixture with the bump kernel");
    add_common(mollify, false);
    mollify->add_option("--fixture", fixture, "kink or hat");
    mollify->add_option("--j", jval, "kernel width 1/j")->required();
    mollify->add_option("--grid", grid);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eval->parsed()) return cmd_eval(o, k_literals);
        if (sweep->parsed()) return cmd_sweep(o, kmin, kmax, n, imag);
        if (eigs->parsed()) return cmd_eigs(o, kmax);
        if (ceigs->parsed()) return cmd_ceigs(o, re0, re1, im0, im1);
        if (density->parsed()) return cmd_density(o, tmax, height);
        if (dominant->parsed()) return cmd_dominant(o, kmin, kmax, n);
        if (check->parsed()) return cmd_check(o, eps);
        if (kron->parsed()) return cmd_kronecker(v_list, a_list, eps1, T, tcap);
        if (contour->parsed()) return cmd_contour(o, eps, case_name, tmult, samples_out);
        if (cx->parsed()) return cmd_counterexample(kmax, grid, zeros_kmax);
        if (invert->parsed())
            return cmd_invert(o, eigs_file, model, outer, r1, breakpoints, degree, count, starts);
        if (mollify->parsed()) return cmd_mollify(o, fixture, jval, grid);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
