#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cfllab/burgers.hpp"
#include "cfllab/errors.hpp"
#include "cfllab/stability_domain.hpp"
#include "cfllab/transport_models.hpp"

namespace cfllab {

namespace detail {

inline const char* svg_palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};
    return colors[i % 10];
}

struct SvgFrame {
    double xmin, xmax, ymin, ymax;
    double width, height, margin;

    double px(double x) const { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); }
    double py(double y) const { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); }
};

inline void svg_polyline(std::ostringstream& out, const SvgFrame& f, const std::vector<double>& xs,
                         const std::vector<double>& ys, const char* color, bool dashed,
                         const std::string& extra = "") {
    out << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
    if (dashed) out << " stroke-dasharray=\"5,4\"";
    if (!extra.empty()) out << ' ' << extra;
    out << " d=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << (i == 0 ? 'M' : 'L') << f.px(xs[i]) << ' ' << f.py(ys[i]) << ' ';
    out << "\"/>\n";
}

} // namespace detail

/// Stability domains in the complex zeta plane: one path per traced branch,
/// axes through the origin, a legend entry per scheme. Overlays (for example
/// finite-difference spectra) are drawn dashed.
inline std::string render_svg(const std::vector<DomainBoundary>& boundaries,
                              const std::vector<SymbolCurve>& overlays = {}) {
    if (boundaries.empty() && overlays.empty()) throw ContractError("render_svg: nothing to draw");
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    const auto grow = [&](double x, double y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const DomainBoundary& b : boundaries)
        for (const BoundaryBranch& br : b.branches)
            for (const cdouble& z : br.zetas) grow(z.real(), z.imag());
    for (const SymbolCurve& c : overlays)
        for (const cdouble& z : c.sigma_dx) grow(z.real(), z.imag());
    const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    detail::SvgFrame f{xmin - padx, xmax + padx, ymin - pady, ymax + pady, 640.0, 640.0, 40.0};

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
        << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
    out << "<line x1=\"" << f.px(f.xmin) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(f.xmax) << "\" y2=\""
        << f.py(0) << "\" stroke=\"#999\" stroke-width=\"0.8\"/>\n";
    out << "<line x1=\"" << f.px(0) << "\" y1=\"" << f.py(f.ymin) << "\" x2=\"" << f.px(0) << "\" y2=\""
        << f.py(f.ymax) << "\" stroke=\"#999\" stroke-width=\"0.8\"/>\n";

    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const char* color = detail::svg_palette(i);
        for (const BoundaryBranch& br : boundaries[i].branches) {
            std::vector<double> xs, ys;
            xs.reserve(br.zetas.size());
            for (const cdouble& z : br.zetas) {
                xs.push_back(z.real());
                ys.push_back(z.imag());
            }
            detail::svg_polyline(out, f, xs, ys, color, false);
        }
        out << "<text class=\"legend\" x=\"" << f.margin + 8 << "\" y=\"" << f.margin + 16 * (i + 1)
            << "\" fill=\"" << color << "\" font-size=\"12\">" << boundaries[i].scheme_name << "</text>\n";
    }
    for (std::size_t i = 0; i < overlays.size(); ++i) {
        const char* color = detail::svg_palette(boundaries.size() + i);
        std::vector<double> xs, ys;
        for (const cdouble& z : overlays[i].sigma_dx) {
            xs.push_back(z.real());
            ys.push_back(z.imag());
        }
        detail::svg_polyline(out, f, xs, ys, color, true);
        out << "<text class=\"legend\" x=\"" << f.margin + 8 << "\" y=\""
            << f.margin + 16 * (boundaries.size() + i + 1) << "\" fill=\"" << color
            << "\" font-size=\"12\">" << overlays[i].label << " (spectrum)</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

/// Log-log plot of dt_max(N) sweeps with dashed guide lines at the reference
/// slopes -2, -4/3, -6/5, -8/7 and -1. Guide paths carry their slope in a
/// data-slope attribute.
inline std::string render_sweep_svg(const std::vector<SweepResult>& sweeps) {
    if (sweeps.empty()) throw ContractError("render_sweep_svg: no sweeps");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const SweepResult& s : sweeps)
        for (const SweepRow& r : s.rows) {
            if (!r.error.empty()) continue;
            const double x = std::log10(static_cast<double>(r.n));
            const double y = std::log10(r.dt_max);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) throw ContractError("render_sweep_svg: no successful rows");
    detail::SvgFrame f{xmin - 0.1, xmax + 0.1, ymin - 0.3, ymax + 0.3, 720.0, 560.0, 48.0};

    std::ostringstream out;
    out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
        << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
    out << "<text x=\"" << f.width / 2 - 60 << "\" y=\"" << f.height - 8
        << "\" font-size=\"12\">log10 N</text>\n";
    out << "<text x=\"8\" y=\"" << f.margin - 12 << "\" font-size=\"12\">log10 dt_max</text>\n";

    static const struct {
        const char* label;
        double value;
    } guides[] = {{"-2", -2.0}, {"-4/3", -4.0 / 3.0}, {"-6/5", -1.2}, {"-8/7", -8.0 / 7.0}, {"-1", -1.0}};
    for (std::size_t g = 0; g < 5; ++g) {
        const double x0 = f.xmin + 0.05, x1 = f.xmax - 0.05;
        const double y1 = f.ymin + 0.15;
        const double y0 = y1 - guides[g].value * (x1 - x0);
        out << "<path class=\"guide\" data-slope=\"" << guides[g].label
            << "\" fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\"3,3\" d=\"M" << f.px(x0) << ' '
            << f.py(y0) << " L" << f.px(x1) << ' ' << f.py(y1) << "\"/>\n";
    }

    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        const char* color = detail::svg_palette(i);
        std::vector<double> xs, ys;
        for (const SweepRow& r : sweeps[i].rows) {
            if (!r.error.empty()) continue;
            xs.push_back(std::log10(static_cast<double>(r.n)));
            ys.push_back(std::log10(r.dt_max));
        }
        detail::svg_polyline(out, f, xs, ys, color, false);
        for (std::size_t j = 0; j < xs.size(); ++j)
            out << "<circle cx=\"" << f.px(xs[j]) << "\" cy=\"" << f.py(ys[j]) << "\" r=\"2.5\" fill=\""
                << color << "\"/>\n";
        out << "<text class=\"legend\" x=\"" << f.width - 180 << "\" y=\"" << f.margin + 16 * (i + 1)
            << "\" fill=\"" << color << "\" font-size=\"12\">" << sweeps[i].scheme_name << " (slope "
            << sweeps[i].fitted_slope << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace cfllab
