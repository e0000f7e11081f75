#include "hyperwave/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hyperwave {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

json trace_to_json(const IterateTrace& trace) {
    json j;
    j["stopping_reason"] = trace.stopping_reason;
    j["best_iteration"] = trace.best_iteration;
    j["best_misfit"] = trace.best_misfit;
    j["best_alpha"] = trace.best_alpha;
    json recs = json::array();
    for (const IterateRecord& r : trace.records) {
        recs.push_back({{"iteration", r.iteration},
                        {"alpha", r.alpha},
                        {"residual_v", r.residual_v},
                        {"misfit", r.misfit},
                        {"grad_norm", r.grad_norm},
                        {"admissible", r.admissible},
                        {"gap_ok", r.gap_ok}});
    }
    j["iterations"] = recs;
    return j;
}

void write_inversion_report(const std::string& path, const InversionResult& r,
                            const json& extra) {
    json j = trace_to_json(r.trace);
    j["alpha"] = r.alpha;
    if (!extra.is_null())
        for (auto it = extra.begin(); it != extra.end(); ++it)
            j[it.key()] = it.value();
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

ResumeState load_resume(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open resume file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error("resume file '" + path + "': " + e.what());
    }
    ResumeState st;
    if (!j.contains("iterations") || j["iterations"].empty())
        throw Error("resume file '" + path + "': no iterations recorded");
    const json& last = j["iterations"].back();
    st.alpha = last.at("alpha").get<Coeffs>();
    st.iterations_done = last.at("iteration").get<int>() + 1;
    return st;
}

void write_svg_plot(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, bool loglog,
                    const std::string& title) {
    if (xs.size() != ys.size() || xs.empty())
        throw ShapeError("write_svg_plot: mismatched or empty series");
    const double W = 640, H = 420, L = 70, B = 50;
    auto tx = [&](double v) { return loglog ? std::log10(std::max(v, 1e-300)) : v; };
    double xmin = tx(xs[0]), xmax = xmin, ymin = tx(ys[0]), ymax = ymin;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xmin = std::min(xmin, tx(xs[i]));
        xmax = std::max(xmax, tx(xs[i]));
        ymin = std::min(ymin, tx(ys[i]));
        ymax = std::max(ymax, tx(ys[i]));
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto px = [&](double v) { return L + (tx(v) - xmin) / (xmax - xmin) * (W - L - 20); };
    auto py = [&](double v) { return H - B - (tx(v) - ymin) / (ymax - ymin) * (H - B - 30); };

    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
        << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle'>" << title
        << (loglog ? " (log-log)" : "") << "</text>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 20
        << "' y2='" << H - B << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L
        << "' y2='30' stroke='black'/>\n";
    out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << px(xs[i]) << ',' << py(ys[i]) << ' ';
    out << "'/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << "<circle cx='" << px(xs[i]) << "' cy='" << py(ys[i])
            << "' r='3' fill='firebrick'/>\n";
    out << "</svg>\n";
}

}  // namespace hyperwave
