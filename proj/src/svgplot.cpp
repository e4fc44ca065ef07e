#include "vservo/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vservo/errors.hpp"

namespace vservo::svgplot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    bool valid() const { return lo <= hi; }
    void pad(double frac) {
        if (!valid()) {
            lo = -1.0;
            hi = 1.0;
            return;
        }
        double span = hi - lo;
        if (span <= 0.0) {
            span = std::abs(hi) > 0.0 ? std::abs(hi) : 1.0;
            lo -= 0.5 * span;
            hi += 0.5 * span;
        } else {
            lo -= frac * span;
            hi += frac * span;
        }
    }
};

double nice_step(double span, int target) {
    const double raw = span / std::max(target, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double n = raw / mag;
    const double f = n < 1.5 ? 1.0 : n < 3.5 ? 2.0 : n < 7.5 ? 5.0 : 10.0;
    return f * mag;
}

std::vector<double> ticks(const Range& r, int target) {
    const double step = nice_step(r.hi - r.lo, target);
    std::vector<double> out;
    double v = std::ceil(r.lo / step) * step;
    for (; v <= r.hi + 0.5 * step; v += step) {
        const double snapped = std::abs(v) < 1e-12 * step ? 0.0 : v;
        out.push_back(snapped);
        if (out.size() > 40) {
            break;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render(const Figure& fig) {
    bool any_point = false;
    Range rx, ry;
    for (const Series& s : fig.series) {
        if (s.x.size() != s.y.size()) {
            throw ConfigError("series '" + s.label + "' has mismatched x/y lengths");
        }
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
                any_point = true;
                rx.grow(s.x[i]);
                ry.grow(s.y[i]);
            }
        }
    }
    if (!any_point) {
        throw ConfigError("nothing to plot: no finite samples");
    }
    rx.pad(0.0);
    ry.pad(0.05);

    const double ml = 72, mr = 20, mt = 42, mb = 56;
    const double pw = fig.width - ml - mr;
    const double ph = fig.height - mt - mb;
    const auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
    const auto py = [&](double v) { return mt + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fig.width
        << "\" height=\"" << fig.height << "\" viewBox=\"0 0 " << fig.width << " "
        << fig.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#222\">\n";

    // grid + ticks
    for (double tv : ticks(rx, 8)) {
        const double gx = px(tv);
        out << "<line x1=\"" << coord(gx) << "\" y1=\"" << coord(mt) << "\" x2=\""
            << coord(gx) << "\" y2=\"" << coord(mt + ph)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << coord(gx) << "\" y=\"" << coord(mt + ph + 18)
            << "\" text-anchor=\"middle\">" << num(tv) << "</text>\n";
    }
    for (double tv : ticks(ry, 6)) {
        const double gy = py(tv);
        out << "<line x1=\"" << coord(ml) << "\" y1=\"" << coord(gy) << "\" x2=\""
            << coord(ml + pw) << "\" y2=\"" << coord(gy)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << coord(ml - 7) << "\" y=\"" << coord(gy + 4)
            << "\" text-anchor=\"end\">" << num(tv) << "</text>\n";
    }
    out << "<rect x=\"" << coord(ml) << "\" y=\"" << coord(mt) << "\" width=\""
        << coord(pw) << "\" height=\"" << coord(ph)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    // series
    for (size_t k = 0; k < fig.series.size(); ++k) {
        const Series& s = fig.series[k];
        const char* color = kPalette[k % kPaletteSize];
        std::string pts;
        const auto flush = [&] {
            if (!pts.empty()) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.6\" points=\"" << pts << "\"/>\n";
                pts.clear();
            }
        };
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                flush();
                continue;
            }
            if (!pts.empty()) {
                pts += ' ';
            }
            pts += coord(px(s.x[i]));
            pts += ',';
            pts += coord(py(s.y[i]));
        }
        flush();
    }

    // labels + title
    out << "<text x=\"" << coord(ml + pw / 2) << "\" y=\"" << coord(mt + ph + 42)
        << "\" text-anchor=\"middle\">" << escape(fig.xlabel) << "</text>\n";
    out << "<text x=\"18\" y=\"" << coord(mt + ph / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << coord(mt + ph / 2)
        << ")\">" << escape(fig.ylabel) << "</text>\n";
    out << "<text x=\"" << coord(ml + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"15\" font-weight=\"bold\">" << escape(fig.title) << "</text>\n";

    // legend, top-right inside the frame
    if (!fig.series.empty()) {
        size_t maxlen = 0;
        for (const Series& s : fig.series) {
            maxlen = std::max(maxlen, s.label.size());
        }
        const double lw = 46 + 7.6 * static_cast<double>(maxlen);
        const double lh = 8 + 19.0 * static_cast<double>(fig.series.size());
        const double lx = ml + pw - lw - 8, ly = mt + 8;
        out << "<rect x=\"" << coord(lx) << "\" y=\"" << coord(ly) << "\" width=\""
            << coord(lw) << "\" height=\"" << coord(lh)
            << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#888888\"/>\n";
        for (size_t k = 0; k < fig.series.size(); ++k) {
            const double ey = ly + 14 + 19.0 * static_cast<double>(k);
            out << "<line x1=\"" << coord(lx + 8) << "\" y1=\"" << coord(ey) << "\" x2=\""
                << coord(lx + 32) << "\" y2=\"" << coord(ey) << "\" stroke=\""
                << kPalette[k % kPaletteSize] << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << coord(lx + 38) << "\" y=\"" << coord(ey + 4) << "\">"
                << escape(fig.series[k].label) << "</text>\n";
        }
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void write(const std::string& path, const Figure& fig) {
    const std::string svg = render(fig);
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << svg;
}

} // namespace vservo::svgplot
