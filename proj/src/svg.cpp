#include "prdim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "prdim/io.hpp"

namespace prdim {

namespace {

struct SeriesPoint {
    double x = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    bool valid = false;
};

struct Series {
    std::string label;
    std::vector<SeriesPoint> points;  // ascending x
};

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

std::string tick_label(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

void render(const std::vector<Series>& series, bool log_x, const std::string& x_label,
            const std::string& y_label, const std::string& path) {
    bool any = false;
    for (const auto& s : series) {
        for (const auto& pt : s.points) any = any || pt.valid;
    }
    if (!any) throw NoValidRecords("plot has no valid records");

    constexpr double kw = 720.0, kh = 480.0;
    constexpr double ml = 70.0, mr = 160.0, mt = 30.0, mb = 55.0;
    const double plot_w = kw - ml - mr;
    const double plot_h = kh - mt - mb;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            if (!pt.valid) continue;
            x_min = std::min(x_min, pt.x);
            x_max = std::max(x_max, pt.x);
            y_min = std::min(y_min, pt.mean - pt.sd);
            y_max = std::max(y_max, pt.mean + pt.sd);
        }
    }
    if (x_min == x_max) {
        x_min = log_x ? x_min / 2.0 : x_min - 1.0;
        x_max = log_x ? x_max * 2.0 : x_max + 1.0;
    }
    if (y_min == y_max) {
        y_min -= 1.0;
        y_max += 1.0;
    }
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto xpos = [&](double x) {
        const double t = log_x ? (std::log(x) - std::log(x_min)) / (std::log(x_max) - std::log(x_min))
                               : (x - x_min) / (x_max - x_min);
        return ml + t * plot_w;
    };
    auto ypos = [&](double y) { return mt + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kw
        << "\" height=\"" << kh << "\" viewBox=\"0 0 " << kw << " " << kh << "\">\n";
    svg << "<rect width=\"" << kw << "\" height=\"" << kh << "\" fill=\"white\"/>\n";

    // axes
    svg << "<g stroke=\"#333333\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\"" << ml + plot_w
        << "\" y2=\"" << mt + plot_h << "\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + plot_h << "\"/>\n";
    svg << "</g>\n";

    // x ticks: the distinct sample positions
    std::set<double> xticks;
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            if (pt.valid) xticks.insert(pt.x);
        }
    }
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    std::size_t shown = 0;
    const std::size_t stride = std::max<std::size_t>(1, xticks.size() / 10);
    for (const double x : xticks) {
        if (shown++ % stride != 0) continue;
        const double px = xpos(x);
        svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << mt + plot_h << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << fmt(px) << "\" y=\"" << mt + plot_h + 18
            << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
    }
    // y ticks: ~6 round values
    const double y_step = std::pow(10.0, std::floor(std::log10((y_max - y_min) / 5.0)));
    double step = y_step;
    while ((y_max - y_min) / step > 8.0) step *= 2.0;
    for (double y = std::ceil(y_min / step) * step; y <= y_max; y += step) {
        const double py = ypos(y);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(py) << "\" x2=\"" << ml << "\" y2=\""
            << fmt(py) << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << ml - 9 << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
    }
    svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << kh - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << mt + plot_h / 2 << ")\">" << y_label << "</text>\n";
    svg << "</g>\n";

    // series
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
        const Series& s = series[si];
        svg << "<g stroke=\"" << color << "\" fill=\"none\" stroke-width=\"1.5\">\n";
        // polyline segments between consecutive valid points
        std::vector<SeriesPoint> run;
        auto flush = [&]() {
            if (run.size() >= 2) {
                svg << "<polyline points=\"";
                for (const auto& pt : run) svg << fmt(xpos(pt.x)) << ',' << fmt(ypos(pt.mean)) << ' ';
                svg << "\"/>\n";
            }
            run.clear();
        };
        for (const auto& pt : s.points) {
            if (pt.valid) {
                run.push_back(pt);
            } else {
                flush();
            }
        }
        flush();
        // error bars and markers
        for (const auto& pt : s.points) {
            if (!pt.valid) continue;
            const double px = xpos(pt.x);
            if (pt.sd > 0.0) {
                const double y0 = ypos(pt.mean - pt.sd);
                const double y1 = ypos(pt.mean + pt.sd);
                svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(px)
                    << "\" y2=\"" << fmt(y1) << "\"/>\n";
                svg << "<line x1=\"" << fmt(px - 3) << "\" y1=\"" << fmt(y0) << "\" x2=\""
                    << fmt(px + 3) << "\" y2=\"" << fmt(y0) << "\"/>\n";
                svg << "<line x1=\"" << fmt(px - 3) << "\" y1=\"" << fmt(y1) << "\" x2=\""
                    << fmt(px + 3) << "\" y2=\"" << fmt(y1) << "\"/>\n";
            }
            svg << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(ypos(pt.mean))
                << "\" r=\"2.5\" fill=\"" << color << "\" stroke=\"none\"/>\n";
        }
        svg << "</g>\n";
        // legend entry
        const double ly = mt + 14.0 + 18.0 * static_cast<double>(si);
        svg << "<line x1=\"" << ml + plot_w + 12 << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << ml + plot_w + 34 << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + plot_w + 40 << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">" << s.label
            << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << svg.str();
    if (!out.good()) throw IoError("write failed for " + path);
}

}  // namespace

void emit_plot(const SweepResult& result, const std::string& path) {
    std::set<Index> ps, qs;
    for (const auto& r : result.records) {
        ps.insert(r.p);
        qs.insert(r.q);
    }
    const bool x_is_p = ps.size() > 1 || qs.size() == 1;
    const bool split_other = x_is_p ? qs.size() > 1 : ps.size() > 1;

    // (correction, fixed-other-axis value) -> x -> samples
    std::map<std::pair<std::string, Index>, std::map<double, std::vector<double>>> buckets;
    std::map<std::pair<std::string, Index>, std::map<double, bool>> any_at_x;
    for (const auto& r : result.records) {
        const std::string corr = to_string(r.estimate.variant.correction);
        const Index other = x_is_p ? r.q : r.p;
        const double x = static_cast<double>(x_is_p ? r.p : r.q);
        const auto key = std::make_pair(corr, split_other ? other : Index{0});
        any_at_x[key][x] = true;
        if (r.estimate.valid) buckets[key][x].push_back(r.estimate.value);
    }

    std::vector<Series> series;
    for (const auto& [key, xs] : any_at_x) {
        Series s;
        s.label = key.first;
        if (split_other) {
            s.label += std::string(" (") + (x_is_p ? "Q=" : "P=") + std::to_string(key.second) + ")";
        }
        for (const auto& [x, _] : xs) {
            SeriesPoint pt;
            pt.x = x;
            const auto it = buckets[key].find(x);
            if (it != buckets[key].end() && !it->second.empty()) {
                const auto& vals = it->second;
                double mean = 0.0;
                for (const double v : vals) mean += v;
                mean /= static_cast<double>(vals.size());
                double var = 0.0;
                for (const double v : vals) var += (v - mean) * (v - mean);
                pt.mean = mean;
                pt.sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
                pt.valid = true;
            }
            s.points.push_back(pt);
        }
        series.push_back(std::move(s));
    }
    render(series, true, x_is_p ? "P (rows)" : "Q (columns)", "estimated dimensionality", path);
}

void emit_plot(const std::vector<LocalDimResult>& results, const std::string& path) {
    Series s;
    s.label = "local dimensionality";
    for (const auto& res : results) {
        SeriesPoint pt;
        pt.x = res.radius;
        if (res.valid_centers > 0) {
            pt.valid = true;
            pt.mean = res.mean_gamma;
            double var = 0.0;
            Index n = 0;
            for (const auto& c : res.per_center) {
                if (!c.estimate.valid) continue;
                var += (c.estimate.value - res.mean_gamma) * (c.estimate.value - res.mean_gamma);
                ++n;
            }
            pt.sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
        }
        s.points.push_back(pt);
    }
    render({s}, true, "ball radius", "mean local dimensionality", path);
}

}  // namespace prdim
