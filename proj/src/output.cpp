#include "spinsq/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "spinsq/errors.hpp"

namespace spinsq {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("Table: row width mismatch");
    rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
        out << '\n';
    }
}

void Table::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_csv(out);
}

Table series_table(const Series& s) {
    Table t;
    t.columns = {"t_us",          "t_eff_us",      "mean_spin",          "theta_star",       "min_var",
                 "xi2",           "xi2_dB",        "collapsed",          "raw_mean_spin",    "raw_min_var",
                 "raw_xi2",       "raw_xi2_dB",    "corrected_mean_spin", "corrected_min_var", "corrected_xi2",
                 "corrected_xi2_dB"};
    const bool shots = !s.points.empty() && s.points.front().has_shots;
    if (shots) {
        for (const char* c : {"shot_mean", "shot_mean_se", "shot_var", "shot_var_se", "shot_mean_theta",
                              "shot_raw_xi2", "shot_raw_xi2_dB", "shot_raw_xi2_se", "shot_corrected_xi2",
                              "shot_corrected_xi2_dB", "shot_corrected_xi2_se"}) {
            t.columns.emplace_back(c);
        }
    }
    for (const TimePoint& p : s.points) {
        std::vector<double> row{p.t_us,
                                p.t_eff_us,
                                p.exact.mean_spin,
                                p.exact.theta_star,
                                p.exact.min_var,
                                p.exact.xi2,
                                p.exact.xi2_dB,
                                p.exact.collapsed ? 1.0 : 0.0,
                                p.raw.mean_spin,
                                p.raw.min_var,
                                p.raw.xi2,
                                p.raw.xi2_dB,
                                p.corrected.mean_spin,
                                p.corrected.min_var,
                                p.corrected.xi2,
                                p.corrected.xi2_dB};
        if (shots) {
            for (double v : {p.shot_mean, p.shot_mean_se, p.shot_var, p.shot_var_se, p.shot_mean_theta,
                             p.shot_raw.xi2, p.shot_raw.xi2_dB, p.shot_xi2_raw_se, p.shot_corrected.xi2,
                             p.shot_corrected.xi2_dB, p.shot_xi2_corrected_se}) {
                row.push_back(v);
            }
        }
        t.add(std::move(row));
    }
    return t;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_svg(const PlotSpec& plot) {
    const double W = 640, H = 420, L = 70, R = 160, T = 40, B = 55;
    auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const double x = tx(s.x[i]), y = ty(s.y[i]);
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    }
    if (plot.hline && std::isfinite(ty(*plot.hline))) y0 = std::min(y0, ty(*plot.hline)), y1 = std::max(y1, ty(*plot.hline));
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad, y1 += pad;
    auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
        const double sx = L + (W - L - R) * k / 4, sy = H - B - (H - T - B) * k / 4;
        o << "<text x=\"" << sx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
          << format_number(std::round((plot.log_x ? std::pow(10.0, fx) : fx) * 1e4) / 1e4) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
          << format_number(std::round((plot.log_y ? std::pow(10.0, fy) : fy) * 1e4) / 1e4) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(plot.xlabel) << "</text>\n";
    o << "<text transform=\"translate(16," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.ylabel) << "</text>\n";
    if (plot.hline) {
        o << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(*plot.hline) << "\" y2=\"" << py(*plot.hline)
          << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";
    }
    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* col = palette[k % 8];
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(tx(s.x[i])) || !std::isfinite(ty(s.y[i]))) continue;
            pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            if (s.markers) o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"2\" fill=\"" << col << "\"/>\n";
        }
        if (!s.markers) o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        const double ly = T + 14 + 18 * static_cast<double>(k);
        o << "<line x1=\"" << W - R + 10 << "\" x2=\"" << W - R + 30 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

}  // namespace spinsq
