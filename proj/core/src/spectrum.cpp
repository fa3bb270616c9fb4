#include "tev/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tev/textio.hpp"

namespace tev {

namespace {

constexpr double kPi = std::numbers::pi;

double d_real(const RefractiveProfile& p, double k, double tol) {
    return d_of_k(p, k, tol).d.real();
}

void require_nondegenerate(const RefractiveProfile& p, double tol) {
    for (double k : {1.7, 2.3, 5.1, 7.9}) {
        if (std::abs(d_of_k(p, k, tol).d) > 1e-13) return;
    }
    throw std::domain_error("degenerate profile: d(k) vanishes identically (n == 1)");
}

Cplx d_prime(const RefractiveProfile& p, Cplx k, double tol) {
    const double h = 1e-6 * std::max(1.0, std::abs(k));
    return (d_of_k(p, k + h, tol).d - d_of_k(p, k - h, tol).d) / (2.0 * h);
}

// trapezoid of (1/2 pi i) d'/d along one straight edge
Cplx edge_winding(const RefractiveProfile& p, Cplx a, Cplx b, int samples, double tol) {
    Cplx acc = 0.0;
    Cplx prev;
    for (int i = 0; i <= samples; ++i) {
        const Cplx z = a + (b - a) * (static_cast<double>(i) / samples);
        const CharacteristicValue v = d_of_k(p, z, tol);
        const Cplx ratio = d_prime(p, z, tol) / v.d;
        if (i > 0) acc += 0.5 * (ratio + prev) * (b - a) * (1.0 / samples);
        prev = ratio;
    }
    return acc;
}

double boundary_min_abs_d(const RefractiveProfile& p, const Rect& r, double tol) {
    double best = 1e300;
    const Cplx c[4] = {{r.re0, r.im0}, {r.re1, r.im0}, {r.re1, r.im1}, {r.re0, r.im1}};
    for (int e = 0; e < 4; ++e) {
        const Cplx a = c[e], b = c[(e + 1) % 4];
        for (int i = 0; i <= 32; ++i) {
            const Cplx z = a + (b - a) * (i / 32.0);
            best = std::min(best, std::abs(d_of_k(p, z, tol).d));
        }
    }
    return best;
}

// keep_off_axis: nudge the lower edge upward instead of expanding across the
// real axis (quarter-plane searches must not swallow real-axis zeros)
int winding_with_retry(const RefractiveProfile& p, Rect r, double tol, bool keep_off_axis) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        if (boundary_min_abs_d(p, r, tol) < 1e-11) {
            r.re0 -= 1e-4;
            r.re1 += 1e-4;
            r.im1 += 1e-4;
            r.im0 += keep_off_axis ? 1e-4 : -1e-4;
            continue;
        }
        return winding_number(p, r, tol);
    }
    throw std::runtime_error("winding: rectangle boundary keeps hitting zeros");
}

int winding_strict(const RefractiveProfile& p, const Rect& r, double tol) {
    if (boundary_min_abs_d(p, r, tol) < 1e-11)
        throw std::runtime_error("winding: boundary too close to a zero");
    return winding_number(p, r, tol);
}

void polish_cell(const RefractiveProfile& p, const Rect& r, int w, std::vector<ComplexZero>& out,
                 double tol) {
    // Newton from the cell center; a multiplicity-w cluster reports its center
    Cplx z{0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1)};
    for (int it = 0; it < 60; ++it) {
        const Cplx dv = d_of_k(p, z, tol).d;
        const Cplx dp = d_prime(p, z, tol);
        if (std::abs(dp) < 1e-300) break;
        const Cplx step = static_cast<double>(w) * dv / dp;
        z -= step;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) break;
    }
    out.push_back({z, w, std::abs(d_of_k(p, z, tol).d)});
}

void subdivide(const RefractiveProfile& p, const Rect& r, int w, std::vector<ComplexZero>& out,
               double tol, int depth) {
    if (w == 0) return;
    const double dx = r.re1 - r.re0, dy = r.im1 - r.im0;
    if (w == 1 || (dx < 1e-6 && dy < 1e-6) || depth > 40) {
        polish_cell(p, r, w, out, tol);
        return;
    }
    // split so that no child boundary runs through a zero; children tile the
    // parent exactly, so counts stay consistent
    for (double frac : {0.5, 0.47, 0.53, 0.41, 0.59}) {
        const double mx = r.re0 + frac * dx, my = r.im0 + frac * dy;
        const Rect cells[4] = {{r.re0, mx, r.im0, my},
                               {mx, r.re1, r.im0, my},
                               {r.re0, mx, my, r.im1},
                               {mx, r.re1, my, r.im1}};
        int ws[4];
        int total = 0;
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i) {
            try {
                ws[i] = winding_strict(p, cells[i], tol);
                total += ws[i];
            } catch (const std::runtime_error&) {
                ok = false;
            }
        }
        if (!ok || total != w) continue;
        for (int i = 0; i < 4; ++i) subdivide(p, cells[i], ws[i], out, tol, depth + 1);
        return;
    }
    // no clean split found; treat the cell as one cluster
    polish_cell(p, r, w, out, tol);
}

}  // namespace

int winding_number(const RefractiveProfile& p, const Rect& r, double tol) {
    const Cplx c[4] = {{r.re0, r.im0}, {r.re1, r.im0}, {r.re1, r.im1}, {r.re0, r.im1}};
    int samples = 64;
    double prev_w = 1e300;
    for (int round = 0; round < 7; ++round) {
        Cplx acc = 0.0;
        for (int e = 0; e < 4; ++e) acc += edge_winding(p, c[e], c[(e + 1) % 4], samples, tol);
        const double w = (acc / Cplx(0.0, 2.0 * kPi)).real();
        if (std::abs(w - std::round(w)) < 0.02 && std::abs(w - prev_w) < 0.02)
            return static_cast<int>(std::llround(w));
        prev_w = w;
        samples *= 2;
    }
    throw std::runtime_error("winding: integral does not settle to an integer (contour through zero?)");
}

EigenvalueSet real_eigs(const RefractiveProfile& p, double k_max, double tol) {
    if (!(k_max > kFloor)) throw std::domain_error("real_eigs: k_max must exceed the zero floor");
    require_nondegenerate(p, tol);

    EigenvalueSet out;
    out.region = {kFloor, k_max, 0.0, 0.0};
    const double beta1 = 1.0 + p.delta_total();
    const double step = kPi / (8.0 * beta1);

    double a = kFloor;
    double fa = d_real(p, a, tol);
    while (a < k_max) {
        const double b = std::min(a + step, k_max);
        const double fb = d_real(p, b, tol);
        if ((fa < 0.0) != (fb < 0.0) || fb == 0.0) {
            // check the bracket holds a single crossing at this resolution
            int changes = 0;
            double xp = a, fp = fa;
            for (int i = 1; i <= 8; ++i) {
                const double x = a + (b - a) * i / 8.0;
                const double fx = (i == 8) ? fb : d_real(p, x, tol);
                if ((fp < 0.0) != (fx < 0.0)) ++changes;
                xp = x;
                fp = fx;
            }
            (void)xp;
            if (changes > 1)
                out.warnings.push_back("unresolved cluster in [" + fmt17(a) + "," + fmt17(b) + "]");

            double lo = a, hi = b, flo = fa;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = d_real(p, mid, tol);
                if ((flo < 0.0) != (fm < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            double z = 0.5 * (lo + hi);
            // Newton polish, kept only while it reduces |d|; at multiple
            // zeros the difference quotient is noise-dominated and the
            // bisection result already sits within 1e-12
            double fz = std::abs(d_real(p, z, tol));
            for (int it = 0; it < 3; ++it) {
                const double h = 1e-7 * std::max(1.0, z);
                const double df = (d_real(p, z + h, tol) - d_real(p, z - h, tol)) / (2.0 * h);
                if (std::abs(df) < 1e-14) break;
                const double nz = z - d_real(p, z, tol) / df;
                if (!std::isfinite(nz) || nz < lo - 1e-9 || nz > hi + 1e-9) break;
                const double fnz = std::abs(d_real(p, nz, tol));
                if (fnz >= fz) break;
                z = nz;
                fz = fnz;
            }
            if (z > kFloor) {
                const double resid = std::abs(d_of_k(p, z, tol).d);
                const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
                if (resid <= 1e-9 * scale) {
                    if (out.real_zeros.empty() || z - out.real_zeros.back() > 1e-9) {
                        out.real_zeros.push_back(z);
                        out.residuals.push_back(resid);
                    }
                }
            }
        }
        a = b;
        fa = fb;
    }
    return out;
}

std::vector<ComplexZero> complex_eigs(const RefractiveProfile& p, const Rect& r, double tol) {
    // rectangles live in the right half plane; a rectangle straddling the
    // real axis counts the real zeros it encloses (argument principle)
    if (!(r.re0 < r.re1 && r.im0 < r.im1) || r.re0 < 0.0)
        throw std::domain_error("complex_eigs: rectangle must sit in the right half plane");
    require_nondegenerate(p, tol);
    std::vector<ComplexZero> out;
    const int w = winding_with_retry(p, r, tol, /*keep_off_axis=*/r.im0 > 0.0);
    subdivide(p, r, w, out, tol, 0);
    std::sort(out.begin(), out.end(),
              [](const ComplexZero& x, const ComplexZero& y) { return x.z.real() < y.z.real(); });
    return out;
}

int real_zero_multiplicity(const RefractiveProfile& p, double z, double half_width, double tol) {
    const Rect box{z - half_width, z + half_width, -half_width, half_width};
    return winding_with_retry(p, box, tol, /*keep_off_axis=*/false);
}

CountingFit density_fit(const RefractiveProfile& p, double T_max, double rect_height, double tol) {
    CountingFit fit;
    const EigenvalueSet real = real_eigs(p, T_max, tol);

    // multiplicities via winding boxes, sized off the local zero spacing
    std::vector<int> mult(real.real_zeros.size(), 1);
    for (std::size_t i = 0; i < real.real_zeros.size(); ++i) {
        const double z = real.real_zeros[i];
        double gap = 1e300;
        if (i > 0) gap = std::min(gap, z - real.real_zeros[i - 1]);
        if (i + 1 < real.real_zeros.size()) gap = std::min(gap, real.real_zeros[i + 1] - z);
        const double hw = std::min(0.35 * gap, 0.2);
        mult[i] = real_zero_multiplicity(p, z, hw, tol);
    }

    // purely imaginary zeros: d(it) is real for real profiles; scan signs of
    // the scaled mantissa
    std::vector<double> imag_zeros;
    {
        const double beta1 = 1.0 + p.delta_total();
        const double step = kPi / (8.0 * beta1);
        double a = kFloor;
        auto val = [&](double t) {
            const ScaledValue v = d_of_k_scaled(p, Cplx(0.0, t), tol);
            return v.mantissa.real();
        };
        double fa = val(a);
        while (a < T_max) {
            const double b = std::min(a + step, T_max);
            const double fb = val(b);
            if ((fa < 0.0) != (fb < 0.0)) {
                double lo = a, hi = b, flo = fa;
                while (hi - lo > 1e-10) {
                    const double m = 0.5 * (lo + hi);
                    const double fm = val(m);
                    if ((flo < 0.0) != (fm < 0.0))
                        hi = m;
                    else {
                        lo = m;
                        flo = fm;
                    }
                }
                imag_zeros.push_back(0.5 * (lo + hi));
            }
            a = b;
            fa = fb;
        }
    }

    // Complex sweep keeps off the axis: the strip 0 < Im k < 0.25 would put
    // the winding boundary next to every real-axis pole of d'/d. Real-axis
    // zeros are already counted by the scan above. Searched in width-20
    // chunks so each boundary integral settles quickly.
    std::vector<ComplexZero> complex_zeros;
    const double im_min = 0.25;
    if (rect_height > im_min) {
        double lo = kFloor;
        while (lo < T_max) {
            const double hi = std::min(lo + 20.0, T_max);
            const auto part = complex_eigs(p, {lo, hi, im_min, rect_height}, tol);
            complex_zeros.insert(complex_zeros.end(), part.begin(), part.end());
            lo = hi;
        }
        fit.caveat = "complex zeros searched only for " + fmt17(im_min) +
                     " < Im k < " + fmt17(rect_height);
    } else {
        fit.caveat = "complex zeros not searched";
    }

    std::size_t total = 0;
    for (int m : mult) total += m;
    if (total + complex_zeros.size() + imag_zeros.size() < 50)
        throw std::domain_error("density_fit: fewer than 50 zeros below T_max");

    fit.thresholds.resize(10);
    fit.counts.resize(10);
    for (int m = 1; m <= 10; ++m) {
        const double T = T_max * m / 10.0;
        double count = 0.0;
        for (std::size_t i = 0; i < real.real_zeros.size(); ++i)
            if (real.real_zeros[i] <= T) count += 2.0 * mult[i];
        for (double t : imag_zeros)
            if (t <= T) count += 2.0;
        for (const ComplexZero& cz : complex_zeros)
            if (std::abs(cz.z) <= T) count += 4.0 * cz.multiplicity;
        fit.thresholds[m - 1] = T;
        fit.counts[m - 1] = count;
    }

    // least-squares line
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = 10.0;
    for (int i = 0; i < 10; ++i) {
        sx += fit.thresholds[i];
        sy += fit.counts[i];
        sxx += fit.thresholds[i] * fit.thresholds[i];
        sxy += fit.thresholds[i] * fit.counts[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.delta_estimate = fit.slope * kPi / 2.0 - 1.0;
    return fit;
}

std::string eigenvalues_csv(const EigenvalueSet& s) {
    std::ostringstream out;
    out << "index,k_re,k_im,multiplicity,residual\n";
    std::size_t idx = 0;
    for (std::size_t i = 0; i < s.real_zeros.size(); ++i) {
        const int m = i < s.real_multiplicities.size() ? s.real_multiplicities[i] : 1;
        out << idx++ << ',' << fmt17(s.real_zeros[i]) << ",0," << m << ','
            << fmt17(i < s.residuals.size() ? s.residuals[i] : 0.0) << '\n';
    }
    for (const ComplexZero& z : s.complex_zeros) {
        out << idx++ << ',' << fmt17(z.z.real()) << ',' << fmt17(z.z.imag()) << ','
            << z.multiplicity << ',' << fmt17(z.residual) << '\n';
    }
    return out.str();
}

std::string counting_csv(const CountingFit& f) {
    std::ostringstream out;
    out << "T,count\n";
    for (std::size_t i = 0; i < f.thresholds.size(); ++i)
        out << fmt17(f.thresholds[i]) << ',' << fmt17(f.counts[i]) << '\n';
    return out.str();
}

}  // namespace tev
