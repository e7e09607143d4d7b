#include "kms/figures.hpp"

#include "kms/borderline.hpp"
#include "kms/classification.hpp"
#include "kms/singularities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace kms {

namespace {

constexpr double PI = std::numbers::pi;

std::string px(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.2f", v);
    // avoid the "-0.00" artifact so output is stable across math libraries
    std::string s(b);
    return s == "-0.00" ? "0.00" : s;
}

struct Canvas {
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    double width = 840, height = 620;
    double ml = 62, mr = 18, mt = 18, mb = 48;
    std::ostringstream body;

    double plot_w() const { return width - ml - mr; }
    double plot_h() const { return height - mt - mb; }
    double sx(double x) const { return ml + (x - xlo) / (xhi - xlo) * plot_w(); }
    double sy(double y) const { return mt + (yhi - y) / (yhi - ylo) * plot_h(); }

    void set_world(double a, double b, double c, double d) {
        double padx = 0.05 * (b - a), pady = 0.05 * (d - c);
        xlo = a - padx;
        xhi = b + padx;
        ylo = c - pady;
        yhi = d + pady;
    }

    void polyline(const std::vector<cplx>& pts, const std::string& style) {
        if (pts.size() < 2) return;
        body << "<polyline fill=\"none\" " << style << " points=\"";
        for (size_t i = 0; i < pts.size(); ++i) {
            if (i) body << ' ';
            body << px(sx(pts[i].real())) << ',' << px(sy(pts[i].imag()));
        }
        body << "\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& style) {
        body << "<line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
             << "\" y2=\"" << px(y2) << "\" " << style << "/>\n";
    }

    void circle(double x, double y, double r, const std::string& style) {
        body << "<circle cx=\"" << px(sx(x)) << "\" cy=\"" << px(sy(y)) << "\" r=\"" << px(r)
             << "\" " << style << "/>\n";
    }

    void text(double x, double y, const std::string& s, const std::string& style) {
        body << "<text x=\"" << px(x) << "\" y=\"" << px(y) << "\" " << style << ">" << s
             << "</text>\n";
    }

    void axes() {
        double x0 = sx(xlo), x1 = sx(xhi), y0 = sy(ylo), y1 = sy(yhi);
        line(x0, y0, x1, y0, "stroke=\"#000\" stroke-width=\"1\"");
        line(x0, y0, x0, y1, "stroke=\"#000\" stroke-width=\"1\"");
        auto nice = [](double range) {
            double raw = range / 6.0;
            double p = std::pow(10.0, std::floor(std::log10(raw)));
            double b = raw / p;
            return (b < 1.5 ? 1.0 : b < 3.5 ? 2.0 : b < 7.5 ? 5.0 : 10.0) * p;
        };
        double tx = nice(xhi - xlo);
        for (double t = std::ceil(xlo / tx) * tx; t <= xhi + 1e-12; t += tx) {
            double v = std::abs(t) < 1e-12 ? 0.0 : t;
            line(sx(v), y0, sx(v), y0 - 5, "stroke=\"#000\" stroke-width=\"1\"");
            text(sx(v), y0 + 16, format_double(v),
                 "font-size=\"11\" text-anchor=\"middle\" font-family=\"monospace\"");
        }
        double ty = nice(yhi - ylo);
        for (double t = std::ceil(ylo / ty) * ty; t <= yhi + 1e-12; t += ty) {
            double v = std::abs(t) < 1e-12 ? 0.0 : t;
            line(x0, sy(v), x0 + 5, sy(v), "stroke=\"#000\" stroke-width=\"1\"");
            text(x0 - 6, sy(v) + 4, format_double(v),
                 "font-size=\"11\" text-anchor=\"end\" font-family=\"monospace\"");
        }
        // interior zero axes, when visible
        if (xlo < 0.0 && xhi > 0.0)
            line(sx(0), y0, sx(0), y1, "stroke=\"#bbb\" stroke-width=\"0.6\"");
        if (ylo < 0.0 && yhi > 0.0)
            line(x0, sy(0), x1, sy(0), "stroke=\"#bbb\" stroke-width=\"0.6\"");
    }

    std::string finish() const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << int(width)
            << "\" height=\"" << int(height) << "\" viewBox=\"0 0 " << int(width) << ' '
            << int(height) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
            << body.str() << "</svg>\n";
        return out.str();
    }
};

constexpr const char* SOLID = "stroke=\"#000\" stroke-width=\"1.4\"";
constexpr const char* DASHED = "stroke=\"#000\" stroke-width=\"1.4\" stroke-dasharray=\"7 4\"";
constexpr const char* DASHDOT = "stroke=\"#444\" stroke-width=\"1.2\" stroke-dasharray=\"9 3 2 3\"";

std::vector<cplx> curve_points(const TracedCurve& c) {
    std::vector<cplx> pts;
    pts.reserve(c.samples.size() + 1);
    for (const auto& s : c.samples) pts.push_back(s.rho);
    pts.push_back(c.samples.front().rho); // close
    return pts;
}

void figure_curves(int n, Canvas& cv) {
    TracedCurve c1 = trace_curve(n, EigType::Type1);
    TracedCurve c2 = trace_curve(n, EigType::Type2);
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto* c : {&c1, &c2})
        for (const auto& s : c->samples) {
            xlo = std::min(xlo, s.rho.real());
            xhi = std::max(xhi, s.rho.real());
            ylo = std::min(ylo, s.rho.imag());
            yhi = std::max(yhi, s.rho.imag());
        }
    cv.set_world(xlo - 0.3, xhi + 0.3, ylo - 0.3, yhi + 0.3);
    cv.axes();
    cv.polyline(curve_points(c1), SOLID);
    cv.polyline(curve_points(c2), DASHED);
    for (const auto& r : region_labels(n, 128)) {
        std::string lbl = "[" + std::to_string(r.label[0]) + "," + std::to_string(r.label[1]) + "]";
        cv.text(cv.sx(r.representative.real()), cv.sy(r.representative.imag()), lbl,
                "font-size=\"13\" text-anchor=\"middle\" font-family=\"monospace\"");
    }
}

void figure_phase(int n, EigType t, Canvas& cv) {
    const int M = 2048;
    std::vector<double> us, ph;
    for (int k = 0; k <= M; ++k) {
        double u = -PI + 2.0 * PI * double(k) / M;
        cplx b = b_curve(n, u, t);
        us.push_back(u);
        ph.push_back(std::atan2(b.imag(), b.real()));
    }
    cv.set_world(-PI, PI, -PI, PI);
    cv.axes();
    std::vector<cplx> seg;
    std::vector<double> jumps;
    for (size_t k = 0; k < us.size(); ++k) {
        if (!seg.empty() && std::abs(ph[k] - ph[k - 1]) > PI) {
            cv.polyline(seg, SOLID);
            seg.clear();
            // skip the trivial wraps where the eigenvalue passes -n at the
            // parameter endpoints; only interior jumps mark cusps
            double uj = 0.5 * (us[k - 1] + us[k]);
            double edge = 2.0 * (2.0 * PI / M);
            if (std::abs(uj) > edge && PI - std::abs(uj) > edge) jumps.push_back(uj);
        }
        seg.push_back(cplx(us[k], ph[k]));
    }
    cv.polyline(seg, SOLID);
    for (double uj : jumps)
        cv.circle(uj, 0.0, 4.0, "fill=\"none\" stroke=\"#000\" stroke-width=\"1.2\"");
}

void figure_parabola(int n, EigType t, Canvas& cv) {
    TracedCurve c = trace_curve(n, t, 2048, 1e-5);
    ParabolaModel pm = parabola_model(n, t);
    std::vector<cplx> arc;
    double ymax = 0.0;
    for (const auto& s : c.samples)
        if (std::abs(s.u) <= 0.4) {
            arc.push_back(s.rho);
            ymax = std::max(ymax, std::abs(s.rho.imag()));
        }
    double sgn = pm.opening == ParabolaModel::Opening::TowardMinusX ? -1.0 : 1.0;
    std::vector<cplx> par;
    const int P = 200;
    for (int k = 0; k <= P; ++k) {
        double y = -ymax + 2.0 * ymax * double(k) / P;
        par.push_back(cplx(pm.vertex + sgn * y * y / pm.coefficient, y));
    }
    double xlo = 1e300, xhi = -1e300;
    for (const auto& p : arc) {
        xlo = std::min({xlo, p.real()});
        xhi = std::max({xhi, p.real()});
    }
    for (const auto& p : par) {
        xlo = std::min(xlo, p.real());
        xhi = std::max(xhi, p.real());
    }
    cv.set_world(xlo, xhi, -1.05 * ymax, 1.05 * ymax);
    cv.axes();
    cv.polyline(arc, SOLID);
    cv.polyline(par, DASHDOT);
    cv.circle(pm.vertex, 0.0, 3.0, "fill=\"#000\"");
}

void figure_bifurcation(int n, EigType t, Canvas& cv) {
    auto cusps = find_cusps(n, t);
    if (cusps.empty()) throw domain_error("no cusp available for a bifurcation figure");
    const CuspReport* pick = &cusps.front();
    for (const auto& c : cusps) {
        double a = std::abs(c.rho0.real()), b = std::abs(pick->rho0.real());
        if (a < b - 1e-12 ||
            (std::abs(a - b) <= 1e-12 && c.rho0.imag() > pick->rho0.imag()))
            pick = &c;
    }
    double ang = outward_bisector_angle(*pick);
    cplx dir(std::cos(ang), std::sin(ang));
    double dmax = std::min(0.01, std::pow(0.3 * double(n) / pick->eta_abs, 2.0));
    ScanResult sc = scan_path(n, t, pick->rho0, dir, -dmax, dmax, 81);

    std::vector<cplx> hi, lo;
    double mlo = 1e300, mhi = -1e300;
    for (size_t k = 0; k < sc.distances.size(); ++k) {
        double a = std::max(sc.pair_magnitudes[k][0], sc.pair_magnitudes[k][1]);
        double b = std::min(sc.pair_magnitudes[k][0], sc.pair_magnitudes[k][1]);
        hi.push_back(cplx(sc.distances[k], a));
        lo.push_back(cplx(sc.distances[k], b));
        mlo = std::min(mlo, b);
        mhi = std::max(mhi, a);
    }
    double pad = std::max(1e-12, 0.15 * (mhi - mlo));
    cv.set_world(-dmax, dmax, mlo - pad, mhi + pad);
    cv.axes();
    std::vector<cplx> ref{cplx(-dmax, double(n)), cplx(dmax, double(n))};
    cv.polyline(ref, DASHDOT);
    cv.polyline(hi, SOLID);
    cv.polyline(lo, DASHED);
}

} // namespace

void emit_figure(const FigureSpec& spec, std::ostream& out) {
    Canvas cv;
    if (spec.id == "curves")
        figure_curves(spec.n, cv);
    else if (spec.id == "phase")
        figure_phase(spec.n, spec.type, cv);
    else if (spec.id == "parabola")
        figure_parabola(spec.n, spec.type, cv);
    else if (spec.id == "bifurcation")
        figure_bifurcation(spec.n, spec.type, cv);
    else
        throw domain_error("unknown figure id: " + spec.id);
    out << cv.finish();
}

} // namespace kms
