#include "curvlab/cli/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "curvlab/cli/config.hpp"
#include "curvlab/errors.hpp"

namespace curvlab::cli {

using nlohmann::json;

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
    case Verdict::Violated: return "violated";
    case Verdict::Info: return "info";
    }
    return "?";
}

bool is_success(Verdict v)
{
    return v == Verdict::Pass || v == Verdict::Info;
}

Verdict ExperimentRecord::verdict() const
{
    // Worst verdict wins: violated > fail > skipped > pass.
    Verdict out = Verdict::Pass;
    auto rank = [](Verdict v) {
        switch (v) {
        case Verdict::Violated: return 4;
        case Verdict::Fail: return 3;
        case Verdict::Skipped: return 2;
        default: return 0;
        }
    };
    for (const auto& c : checks) {
        if (rank(c.verdict) > rank(out)) out = c.verdict;
    }
    return out;
}

bool VerificationReport::overall_pass() const
{
    return std::all_of(experiments.begin(), experiments.end(),
                       [](const ExperimentRecord& e) { return is_success(e.verdict()); });
}

json VerificationReport::to_json() const
{
    json exps = json::array();
    for (const auto& e : experiments) {
        json checks = json::array();
        for (const auto& c : e.checks) {
            json jc = {{"name", c.name}, {"verdict", to_string(c.verdict)}, {"values", c.values}};
            if (!c.note.empty()) jc["note"] = c.note;
            checks.push_back(std::move(jc));
        }
        json tables = json::array();
        for (const auto& t : e.tables) {
            json rows = json::array();
            for (const auto& r : t.rows) {
                rows.push_back({{"r", r.r}, {"value", r.value}, {"weight", r.weight}, {"group", r.group},
                                {"verdict", r.verdict}});
            }
            tables.push_back({{"quantity", t.quantity}, {"rows", std::move(rows)}});
        }
        exps.push_back({{"id", e.id},
                        {"op", e.op},
                        {"verdict", to_string(e.verdict())},
                        {"checks", std::move(checks)},
                        {"tables", std::move(tables)}});
    }
    return {{"schema_version", schema_version},
            {"experiment_id", id},
            {"timestamp", timestamp},
            {"config", config},
            {"experiments", std::move(exps)},
            {"overall", overall_pass() ? "pass" : "fail"}};
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string to_csv(const ProfileTable& table)
{
    std::ostringstream out;
    out << "r,value,weight,group,verdict\n";
    for (const auto& row : table.rows) {
        out << fmt::format("{:.17g},{:.17g},{:.17g},{},{}\n", row.r, row.value, row.weight, row.group, row.verdict);
    }
    return out.str();
}

void write_outputs(const VerificationReport& report, const std::string& report_path, const std::string& csv_dir)
{
    namespace fs = std::filesystem;
    if (!report_path.empty()) {
        const fs::path p(report_path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream(p) << report.to_json().dump(2) << '\n';
    }
    if (csv_dir.empty()) return;
    fs::create_directories(csv_dir);
    for (const auto& e : report.experiments) {
        for (const auto& t : e.tables) {
            std::ofstream(fs::path(csv_dir) / (e.id + "_" + t.quantity + ".csv")) << to_csv(t);
        }
    }
}

std::string plot_svg(const json& report, const std::string& quantity)
{
    const json* rows = nullptr;
    std::string title;
    static const json none = json::array();
    const json& experiments = report.contains("experiments") ? report.at("experiments") : none;
    for (const auto& e : experiments) {
        for (const auto& t : e.contains("tables") ? e.at("tables") : none) {
            if (t.value("quantity", "") == quantity || e.value("id", "") + "_" + t.value("quantity", "") == quantity) {
                rows = &t.at("rows");
                title = e.value("id", "") + ": " + t.value("quantity", "");
                break;
            }
        }
        if (rows) break;
    }
    if (!rows || rows->empty()) throw UsageError("report has no profile table for '" + quantity + "'");

    std::vector<std::pair<double, double>> pts;
    for (const auto& r : *rows) pts.emplace_back(r.at("r").get<double>(), r.at("value").get<double>());
    std::sort(pts.begin(), pts.end());
    auto [xmin, xmax] = std::minmax_element(pts.begin(), pts.end());
    double x0 = xmin->first, x1 = xmax->first;
    double y0 = pts[0].second, y1 = pts[0].second;
    for (const auto& p : pts) {
        y0 = std::min(y0, p.second);
        y1 = std::max(y1, p.second);
    }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double w = 640, h = 400, left = 70, right = 20, top = 40, bottom = 50;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
    auto sy = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };

    std::ostringstream svg;
    svg << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif">)",
                       w, h)
        << '\n';
    svg << fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)", w, h) << '\n';
    svg << fmt::format(R"(<text x="{}" y="22" font-size="14">{}</text>)", left, title) << '\n';
    svg << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)", left, h - bottom, w - right)
        << '\n';
    svg << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)", left, top, h - bottom)
        << '\n';
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        svg << fmt::format(R"(<text x="{:.1f}" y="{}" font-size="11" text-anchor="middle">{:.4g}</text>)", sx(xv),
                           h - bottom + 18, xv)
            << '\n';
        svg << fmt::format(R"(<text x="{}" y="{:.1f}" font-size="11" text-anchor="end">{:.4g}</text>)", left - 6,
                           sy(yv) + 4, yv)
            << '\n';
    }
    svg << fmt::format(R"(<text x="{}" y="{}" font-size="12" text-anchor="middle">r</text>)", (left + w - right) / 2,
                       h - 10)
        << '\n';
    svg << R"(<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points=")";
    for (const auto& p : pts) svg << fmt::format("{:.2f},{:.2f} ", sx(p.first), sy(p.second));
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

} // namespace curvlab::cli
