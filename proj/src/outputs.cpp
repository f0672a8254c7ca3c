#include "cadm/outputs.hpp"

#include "cadm/linprog.hpp"
#include "cadm/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace cadm {

namespace {

// 17 significant digits round-trip doubles exactly through strtod; %g also
// keeps short decimals short (0.02 stays "0.02") and prints inf/nan tokens
// strtod understands.
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Barycentric embedding: coordinate i of a distribution maps to corner i.
Vec2 ternary_point(const std::array<Vec2, 3>& corners, double p0, double p1,
                   double p2) {
    Vec2 out;
    out.x = p0 * corners[0].x + p1 * corners[1].x + p2 * corners[2].x;
    out.y = p0 * corners[0].y + p1 * corners[1].y + p2 * corners[2].y;
    return out;
}

/**
 * The belief-block shadow of the inverse-feasible set as a plot polygon.
 * Support-function sampling: maximize each of 36 planar directions over the
 * polytope (the objective only touches the belief block), collect the
 * optimizers, and keep the distinct extreme points in angular order. Empty
 * polytope -> empty polygon.
 */
std::vector<Vec2> polytope_polygon(const Scenario& scenario, const Action& u,
                                   const std::array<Vec2, 3>& corners) {
    const BeliefPolytope poly = build_polytope(scenario, u);
    LinearProgram lp = LinearProgram::zeros(poly.dim());
    lp.a_eq = poly.equality_matrix();
    lp.b_eq = poly.equality_rhs();
    lp.lower_bounds = poly.lower_bounds();

    const double pi = std::acos(-1.0);
    std::vector<Vec2> pts;
    for (int j = 0; j < 36; ++j) {
        const double theta = 2.0 * pi * double(j) / 36.0;
        const Vec2 d{std::cos(theta), std::sin(theta)};
        lp.objective.setZero();
        for (Index i = 0; i < 3; ++i)
            lp.objective[i] = -(d.x * corners[static_cast<std::size_t>(i)].x +
                                d.y * corners[static_cast<std::size_t>(i)].y);
        const SolveStatus st = solve_lp(lp);
        if (st.kind == SolveStatusKind::Infeasible) return {};
        if (st.kind != SolveStatusKind::Optimal) continue;
        Vec2 p;
        for (Index i = 0; i < 3; ++i) {
            p.x += st.x[i] * corners[static_cast<std::size_t>(i)].x;
            p.y += st.x[i] * corners[static_cast<std::size_t>(i)].y;
        }
        bool fresh = true;
        for (const Vec2& q : pts)
            if (std::abs(q.x - p.x) + std::abs(q.y - p.y) < 0.5) {
                fresh = false;
                break;
            }
        if (fresh) pts.push_back(p);
    }

    if (pts.size() > 2) {
        Vec2 c;
        for (const Vec2& q : pts) {
            c.x += q.x;
            c.y += q.y;
        }
        c.x /= double(pts.size());
        c.y /= double(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const Vec2& a, const Vec2& b) {
            return std::atan2(a.y - c.y, a.x - c.x) <
                   std::atan2(b.y - c.y, b.x - c.x);
        });
    }
    return pts;
}

void svg_circle(std::string& out, Vec2 p, double r, const std::string& fill,
                const std::string& extra = "") {
    out += "  <circle cx=\"" + fmt2(p.x) + "\" cy=\"" + fmt2(p.y) + "\" r=\"" +
           fmt2(r) + "\" fill=\"" + fill + "\"" + extra + "/>\n";
}

void svg_square(std::string& out, Vec2 p, double half, const std::string& fill) {
    out += "  <rect x=\"" + fmt2(p.x - half) + "\" y=\"" + fmt2(p.y - half) +
           "\" width=\"" + fmt2(2 * half) + "\" height=\"" + fmt2(2 * half) +
           "\" fill=\"" + fill + "\"/>\n";
}

void svg_triangle_marker(std::string& out, Vec2 p, double r,
                         const std::string& fill) {
    out += "  <polygon points=\"" + fmt2(p.x) + "," + fmt2(p.y - r) + " " +
           fmt2(p.x - 0.87 * r) + "," + fmt2(p.y + 0.5 * r) + " " +
           fmt2(p.x + 0.87 * r) + "," + fmt2(p.y + 0.5 * r) + "\" fill=\"" +
           fill + "\"/>\n";
}

void svg_cross(std::string& out, Vec2 p, double r, const std::string& stroke) {
    out += "  <path d=\"M " + fmt2(p.x - r) + " " + fmt2(p.y - r) + " L " +
           fmt2(p.x + r) + " " + fmt2(p.y + r) + " M " + fmt2(p.x - r) + " " +
           fmt2(p.y + r) + " L " + fmt2(p.x + r) + " " + fmt2(p.y - r) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
}

void svg_polygon(std::string& out, const std::vector<Vec2>& pts,
                 const std::string& color) {
    if (pts.empty()) return;
    if (pts.size() <= 2) {
        svg_circle(out, pts.front(), 5.0, "none",
                   " stroke=\"" + color + "\" stroke-width=\"2\"");
        return;
    }
    out += "  <polygon points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += " ";
        out += fmt2(pts[i].x) + "," + fmt2(pts[i].y);
    }
    out += "\" fill=\"" + color + "\" fill-opacity=\"0.25\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
}

void svg_text(std::string& out, Vec2 p, const std::string& text, int size,
              const std::string& anchor = "middle") {
    out += "  <text x=\"" + fmt2(p.x) + "\" y=\"" + fmt2(p.y) +
           "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
           "\" text-anchor=\"" + anchor + "\">" + text + "</text>\n";
}

void svg_frame(std::string& out, const std::array<Vec2, 3>& corners,
               const std::array<std::string, 3>& labels,
               const std::string& title) {
    out += "  <polygon points=\"" + fmt2(corners[0].x) + "," +
           fmt2(corners[0].y) + " " + fmt2(corners[1].x) + "," +
           fmt2(corners[1].y) + " " + fmt2(corners[2].x) + "," +
           fmt2(corners[2].y) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    svg_text(out, {corners[0].x - 4, corners[0].y + 16}, labels[0], 12, "start");
    svg_text(out, {corners[1].x + 4, corners[1].y + 16}, labels[1], 12, "end");
    svg_text(out, {corners[2].x, corners[2].y - 8}, labels[2], 12);
    svg_text(out, {(corners[0].x + corners[1].x) / 2, corners[2].y - 28}, title,
             14);
}

constexpr const char* kOdmColor = "#1f77b4";
constexpr const char* kCdmColor = "#d62728";
constexpr const char* kPdmColor = "#2ca02c";

}  // namespace

std::string render_timeseries_csv(const std::vector<TimestepRecord>& records) {
    std::string out = "k,agent,cost,cap,privacy,cost_increase\n";
    const auto row = [&out](Index k, const char* agent, const AgentStep& s) {
        out += std::to_string(k);
        out += ',';
        out += agent;
        out += ',';
        out += fmt17(s.cost);
        out += ',';
        out += fmt17(s.cap);
        out += ',';
        out += fmt17(s.privacy);
        out += ',';
        out += fmt17(s.cost_increase);
        out += '\n';
    };
    for (const TimestepRecord& rec : records) {
        if (rec.odm) row(rec.k, "odm", *rec.odm);
        if (rec.cdm) row(rec.k, "cdm", *rec.cdm);
        if (rec.pdm) row(rec.k, "pdm", *rec.pdm);
    }
    return out;
}

std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out =
        "budget,agent,mean_privacy,se_privacy,mean_cost_increase,"
        "se_cost_increase,repeats\n";
    for (const SweepRow& r : rows) {
        out += fmt17(r.budget);
        out += ',';
        out += r.agent;
        out += ',';
        out += fmt17(r.mean_privacy);
        out += ',';
        out += fmt17(r.se_privacy);
        out += ',';
        out += fmt17(r.mean_cost_increase);
        out += ',';
        out += fmt17(r.se_cost_increase);
        out += ',';
        out += std::to_string(r.repeats);
        out += '\n';
    }
    return out;
}

std::string render_simplex_svg(const Scenario& scenario, const ActionGrid& grid,
                               const TimestepRecord& record) {
    if (scenario.num_regimes() != 3 || scenario.num_assets() != 3)
        throw InvalidInput("ternary plots require dimension 3");

    const double width = 920.0;
    const double height = 500.0;
    const double side = 360.0;
    const double h = side * std::sqrt(3.0) / 2.0;
    const double base_y = 420.0;
    // Left panel: the action simplex. Right panel: the belief simplex.
    const std::array<Vec2, 3> act = {Vec2{40.0, base_y}, Vec2{40.0 + side, base_y},
                                     Vec2{40.0 + side / 2, base_y - h}};
    const std::array<Vec2, 3> bel = {Vec2{520.0, base_y},
                                     Vec2{520.0 + side, base_y},
                                     Vec2{520.0 + side / 2, base_y - h}};

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           fmt2(width) + "\" height=\"" + fmt2(height) + "\" viewBox=\"0 0 " +
           fmt2(width) + " " + fmt2(height) + "\">\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg_text(out, {width / 2, 24}, "timestep " + std::to_string(record.k), 16);

    svg_frame(out, act, {"u1", "u2", "u3"}, "actions");
    svg_frame(out, bel, {"regime 1", "regime 2", "regime 3"}, "beliefs");

    for (const Action& u : grid.points)
        svg_circle(out, ternary_point(act, u.alloc[0], u.alloc[1], u.alloc[2]),
                   1.2, "#c8c8c8");

    for (const auto& [index, mass] : record.pdm_support) {
        const Action& u = grid.points[static_cast<std::size_t>(index)];
        const Vec2 p = ternary_point(act, u.alloc[0], u.alloc[1], u.alloc[2]);
        const double bar = 60.0 * mass;
        out += "  <rect x=\"" + fmt2(p.x - 2.0) + "\" y=\"" + fmt2(p.y - bar) +
               "\" width=\"4\" height=\"" + fmt2(bar) + "\" fill=\"" +
               kPdmColor + "\" fill-opacity=\"0.6\"/>\n";
    }

    const auto mark_action = [&](const std::optional<AgentStep>& step,
                                 const char* color, int shape) {
        if (!step) return;
        const Vec2 p = ternary_point(act, step->action.alloc[0],
                                     step->action.alloc[1], step->action.alloc[2]);
        if (shape == 0)
            svg_circle(out, p, 5.0, color);
        else if (shape == 1)
            svg_square(out, p, 4.5, color);
        else
            svg_triangle_marker(out, p, 6.0, color);
    };
    mark_action(record.odm, kOdmColor, 0);
    mark_action(record.cdm, kCdmColor, 1);
    mark_action(record.pdm, kPdmColor, 2);

    const auto shade_polytope = [&](const std::optional<AgentStep>& step,
                                    const char* color) {
        if (!step) return;
        svg_polygon(out, polytope_polygon(scenario, step->action, bel), color);
    };
    shade_polytope(record.odm, kOdmColor);
    shade_polytope(record.cdm, kCdmColor);
    shade_polytope(record.pdm, kPdmColor);

    svg_cross(out,
              ternary_point(bel, record.belief.probs[0], record.belief.probs[1],
                            record.belief.probs[2]),
              6.0, "black");

    double ly = 52.0;
    const auto legend = [&](bool on, const char* color, const char* name) {
        if (!on) return;
        svg_square(out, {width / 2 - 30.0, ly - 4.0}, 5.0, color);
        svg_text(out, {width / 2 - 18.0, ly}, name, 12, "start");
        ly += 18.0;
    };
    legend(record.odm.has_value(), kOdmColor, "odm");
    legend(record.cdm.has_value(), kCdmColor, "cdm");
    legend(record.pdm.has_value(), kPdmColor, "pdm");
    svg_cross(out, {width / 2 - 30.0, ly - 4.0}, 5.0, "black");
    svg_text(out, {width / 2 - 18.0, ly}, "true belief", 12, "start");

    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
    f.write(content.data(), std::streamsize(content.size()));
    f.flush();
    if (!f) throw InvalidInput("failed while writing '" + path + "'");
}

void emit_simulation_outputs(const SimulationResult& result,
                             const std::string& out_dir, bool svg) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw InvalidInput("cannot create output directory '" + out_dir + "': " +
                           ec.message());
    const std::filesystem::path dir(out_dir);
    write_text_file((dir / "timeseries.csv").string(),
                    render_timeseries_csv(result.records));
    if (svg)
        for (const TimestepRecord& rec : result.records)
            write_text_file(
                (dir / ("simplex_" + std::to_string(rec.k) + ".svg")).string(),
                render_simplex_svg(result.scenario, result.grid, rec));
}

void emit_sweep_outputs(const SweepResult& result, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw InvalidInput("cannot create output directory '" + out_dir + "': " +
                           ec.message());
    write_text_file(
        (std::filesystem::path(out_dir) / "sweep.csv").string(),
        render_sweep_csv(result.rows));
}

}  // namespace cadm
