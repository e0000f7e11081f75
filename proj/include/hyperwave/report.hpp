#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwave/inversion.hpp"

namespace hyperwave {

/// %.17g rendering; round-trips doubles exactly and keeps CSV output
/// byte-stable for identical inputs.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const CsvTable& table);

nlohmann::json trace_to_json(const IterateTrace& trace);

/// result.json: final alpha, stopping reason, per-iteration records and any
/// extra run metadata.
void write_inversion_report(const std::string& path, const InversionResult& r,
                            const nlohmann::json& extra = nlohmann::json());

struct ResumeState {
    Coeffs alpha;
    int iterations_done = 0;
};
ResumeState load_resume(const std::string& path);

/// Minimal SVG polyline plot (log-log when requested); gnuplot-free artifact
/// for reports.
void write_svg_plot(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, bool loglog,
                    const std::string& title);

}  // namespace hyperwave
