#include "l2d/report.hpp"

#include "l2d/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace l2d::report {

using csv::format_number;

namespace {

std::string join_bandwidth(const Bandwidth& bw)
{
  std::string out;
  for (std::size_t j = 0; j < bw.h.size(); ++j) {
    if (j > 0) {
      out += ';';
    }
    out += format_number(bw.h[j]);
  }
  return out;
}

std::string xml_escape(std::string_view s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

// Fixed-precision coordinates keep SVG output byte-stable and compact.
std::string px(double v)
{
  return fmt::format("{:.2f}", v);
}

struct Panel
{
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double sx(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double sy(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

void draw_axes(std::ostream& out, const Panel& p, const std::string& title,
               const std::string& xlabel, int y_ticks)
{
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>)",
                     px(p.left), px(p.top), px(p.width), px(p.height))
      << '\n';
  out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>)",
                     px(p.left + p.width / 2), px(p.top - 10), xml_escape(title))
      << '\n';
  out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>)",
                     px(p.left + p.width / 2), px(p.top + p.height + 34), xml_escape(xlabel))
      << '\n';
  for (int k = 0; k <= y_ticks; ++k) {
    const double y = p.y_min + (p.y_max - p.y_min) * k / y_ticks;
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="end" font-size="10">{}</text>)",
                       px(p.left - 4), px(p.sy(y) + 3), fmt::format("{:.3g}", y))
        << '\n';
  }
  for (int x = static_cast<int>(std::ceil(p.x_min)); x <= static_cast<int>(p.x_max); ++x) {
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="10">{}</text>)",
                       px(p.sx(x)), px(p.top + p.height + 14), x)
        << '\n';
  }
}

void draw_series(std::ostream& out, const Panel& p, const std::vector<double>& xs,
                 const std::vector<double>& ys, const char* color, bool dashed)
{
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!pts.empty()) {
      pts += ' ';
    }
    pts += px(p.sx(xs[i])) + ',' + px(p.sy(std::clamp(ys[i], p.y_min, p.y_max)));
  }
  out << fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>)",
                     pts, color, dashed ? R"( stroke-dasharray="5,3")" : "")
      << '\n';
}

void draw_hline(std::ostream& out, const Panel& p, double y)
{
  out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1"/>)",
                     px(p.left), px(p.sy(y)), px(p.left + p.width), px(p.sy(y)))
      << '\n';
}

void legend_entry(std::ostream& out, double x, double y, const char* color, bool dashed,
                  const std::string& text)
{
  out << fmt::format(
           R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"{}/>)",
           px(x), px(y), px(x + 22), px(y), color,
           dashed ? R"( stroke-dasharray="5,3")" : "")
      << '\n';
  out << fmt::format(R"(<text x="{}" y="{}" font-size="11">{}</text>)", px(x + 26), px(y + 4),
                     xml_escape(text))
      << '\n';
}

} // namespace

void write_estimate_csv(std::ostream& out, const EstimateReport& r)
{
  csv::write_row(out, { "psi_kernel", "psi_tmle", "se", "se_kernel", "se_tmle", "level",
                        "ci_kernel_lo", "ci_kernel_hi", "ci_tmle_lo", "ci_tmle_hi", "rounds",
                        "criterion_met", "pn_dstar", "sd_dstar", "n0", "n1", "bandwidth0",
                        "bandwidth1", "grid_points_per_dim" });
  csv::write_row(out, { format_number(r.psi_kernel), format_number(r.psi_tmle),
                        format_number(r.se), format_number(r.se_kernel),
                        format_number(r.se_tmle), format_number(r.level),
                        format_number(r.ci_kernel.lo), format_number(r.ci_kernel.hi),
                        format_number(r.ci_tmle.lo), format_number(r.ci_tmle.hi),
                        std::to_string(r.rounds), r.criterion_met ? "true" : "false",
                        format_number(r.pn_dstar), format_number(r.sd_dstar),
                        std::to_string(r.n0), std::to_string(r.n1),
                        join_bandwidth(r.bandwidth0), join_bandwidth(r.bandwidth1),
                        std::to_string(r.grid_points_per_dim) });
}

void write_estimate_text(std::ostream& out, const EstimateReport& r)
{
  const int pct = static_cast<int>(std::lround(100.0 * r.level));
  out << fmt::format("n0 = {}, n1 = {}\n", r.n0, r.n1);
  out << fmt::format("psi_kernel = {:.6g}   {}% CI [{:.6g}, {:.6g}]\n", r.psi_kernel, pct,
                     r.ci_kernel.lo, r.ci_kernel.hi);
  out << fmt::format("psi_tmle   = {:.6g}   {}% CI [{:.6g}, {:.6g}]\n", r.psi_tmle, pct,
                     r.ci_tmle.lo, r.ci_tmle.hi);
  out << fmt::format("se = {:.6g} (kernel fit {:.6g}, targeted fit {:.6g})\n", r.se,
                     r.se_kernel, r.se_tmle);
  out << fmt::format("rounds = {}, criterion_met = {}, mean D* = {:.3g}, sd D* = {:.4g}\n",
                     r.rounds, r.criterion_met ? "true" : "false", r.pn_dstar, r.sd_dstar);
}

void write_sim_csv(std::ostream& out, const std::vector<sim::SimResult>& results)
{
  csv::write_row(out, { "design", "method", "n", "R", "coverage_oracle", "coverage_sample",
                        "mse_n", "var_n", "eff_bound", "mean_rounds" });
  for (const auto& r : results) {
    csv::write_row(out, { r.design, sim::to_string(r.method), std::to_string(r.n),
                          std::to_string(r.replicates), format_number(r.coverage_oracle),
                          format_number(r.coverage_sample), format_number(r.mse_times_n),
                          format_number(r.var_times_n), format_number(r.efficiency_bound),
                          format_number(r.mean_rounds) });
  }
}

void write_sim_svg(std::ostream& out, const std::string& design,
                   const std::vector<sim::SimResult>& results, double level)
{
  std::vector<const sim::SimResult*> kernel;
  std::vector<const sim::SimResult*> tmle;
  for (const auto& r : results) {
    if (r.design != design) {
      continue;
    }
    (r.method == sim::Method::kernel ? kernel : tmle).push_back(&r);
  }
  auto xs_of = [](const std::vector<const sim::SimResult*>& rows) {
    std::vector<double> xs;
    for (const auto* r : rows) {
      xs.push_back(std::log2(static_cast<double>(r->n) / 50.0));
    }
    return xs;
  };
  auto ys_of = [](const std::vector<const sim::SimResult*>& rows, auto field) {
    std::vector<double> ys;
    for (const auto* r : rows) {
      ys.push_back(r->*field);
    }
    return ys;
  };

  const auto xk = xs_of(kernel);
  const auto xt = xs_of(tmle);
  double x_min = 0.0;
  double x_max = 1.0;
  for (double x : xk) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
  }
  double err_max = 0.0;
  double bound = 0.0;
  for (const auto& r : results) {
    if (r.design == design) {
      err_max = std::max({ err_max, r.mse_times_n, r.var_times_n, r.efficiency_bound });
      bound = r.efficiency_bound;
    }
  }
  err_max = err_max > 0.0 ? 1.1 * err_max : 1.0;

  const Panel cov{ 60, 40, 360, 260, x_min, x_max, 0.0, 1.0 };
  const Panel err{ 520, 40, 360, 260, x_min, x_max, 0.0, err_max };

  out << R"(<svg xmlns="http://www.w3.org/2000/svg" width="920" height="420" viewBox="0 0 920 420">)"
      << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  draw_axes(out, cov, design + ": " + fmt::format("{:g}", 100 * level) + "% CI coverage",
            "log2(n / 50)", 5);
  draw_axes(out, err, design + ": n x MSE and n x Var", "log2(n / 50)", 5);
  draw_hline(out, cov, level);
  draw_hline(out, err, bound);

  const char* blue = "#1f4fb4";
  const char* red = "#c8281e";
  draw_series(out, cov, xk, ys_of(kernel, &sim::SimResult::coverage_sample), blue, false);
  draw_series(out, cov, xk, ys_of(kernel, &sim::SimResult::coverage_oracle), blue, true);
  draw_series(out, cov, xt, ys_of(tmle, &sim::SimResult::coverage_sample), red, false);
  draw_series(out, cov, xt, ys_of(tmle, &sim::SimResult::coverage_oracle), red, true);
  draw_series(out, err, xk, ys_of(kernel, &sim::SimResult::mse_times_n), blue, false);
  draw_series(out, err, xk, ys_of(kernel, &sim::SimResult::var_times_n), blue, true);
  draw_series(out, err, xt, ys_of(tmle, &sim::SimResult::mse_times_n), red, false);
  draw_series(out, err, xt, ys_of(tmle, &sim::SimResult::var_times_n), red, true);

  legend_entry(out, 60, 360, blue, false, "kernel, sample SE / MSE");
  legend_entry(out, 60, 380, blue, true, "kernel, oracle SE / Var");
  legend_entry(out, 300, 360, red, false, "TMLE, sample SE / MSE");
  legend_entry(out, 300, 380, red, true, "TMLE, oracle SE / Var");
  out << fmt::format(R"(<text x="540" y="364" font-size="11">black line: {:g}% (left), efficiency bound {:.4g} (right)</text>)",
                     100 * level, bound)
      << '\n';
  out << "</svg>\n";
}

void write_geo_csv(std::ostream& out, const std::vector<geo::CategoryResult>& results)
{
  csv::write_row(out, { "category", "n_before", "n_after", "psi_kernel", "psi_tmle", "se",
                        "ci_kernel_lo", "ci_kernel_hi", "ci_tmle_lo", "ci_tmle_hi", "rounds",
                        "error" });
  for (const auto& c : results) {
    if (c.report) {
      const auto& r = *c.report;
      csv::write_row(out, { c.category, std::to_string(c.n_before),
                            std::to_string(c.n_after), format_number(r.psi_kernel),
                            format_number(r.psi_tmle), format_number(r.se),
                            format_number(r.ci_kernel.lo), format_number(r.ci_kernel.hi),
                            format_number(r.ci_tmle.lo), format_number(r.ci_tmle.hi),
                            std::to_string(r.rounds), "" });
    } else {
      csv::write_row(out, { c.category, std::to_string(c.n_before), std::to_string(c.n_after),
                            "", "", "", "", "", "", "", "", c.error });
    }
  }
}

void write_geo_svg(std::ostream& out, const std::vector<geo::CategoryResult>& results)
{
  double x_min = 0.0;
  double x_max = std::numeric_limits<double>::lowest();
  std::size_t rows = 0;
  for (const auto& c : results) {
    if (!c.report) {
      continue;
    }
    ++rows;
    x_min = std::min({ x_min, c.report->ci_kernel.lo, c.report->ci_tmle.lo });
    x_max = std::max({ x_max, c.report->ci_kernel.hi, c.report->ci_tmle.hi });
  }
  if (rows == 0 || !(x_max > x_min)) {
    x_max = x_min + 1.0;
  }
  const double row_h = 24.0;
  const double top = 50.0;
  const double height = row_h * static_cast<double>(std::max<std::size_t>(rows, 1));
  const Panel p{ 360, top, 480, height, x_min, x_max, 0.0, 1.0 };
  const double total_h = top + height + 70;

  out << fmt::format(
           R"(<svg xmlns="http://www.w3.org/2000/svg" width="880" height="{}" viewBox="0 0 880 {}">)",
           px(total_h), px(total_h))
      << '\n';
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
  out << R"(<text x="20" y="30" font-size="12" font-weight="bold">category</text>)" << '\n';
  out << R"(<text x="240" y="30" font-size="12" font-weight="bold" text-anchor="end">before</text>)"
      << '\n';
  out << R"(<text x="300" y="30" font-size="12" font-weight="bold" text-anchor="end">after</text>)"
      << '\n';
  out << fmt::format(R"(<text x="{}" y="30" font-size="12" text-anchor="middle">L2D with 95% Wald intervals: blue kernel, red TMLE</text>)",
                     px(p.left + p.width / 2))
      << '\n';
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>)",
                     px(p.left), px(p.top), px(p.width), px(p.height))
      << '\n';
  if (x_min <= 0.0 && 0.0 <= x_max) {
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999" stroke-dasharray="3,3"/>)",
                       px(p.sx(0.0)), px(p.top), px(p.sx(0.0)), px(p.top + p.height))
        << '\n';
  }
  for (int k = 0; k <= 4; ++k) {
    const double x = x_min + (x_max - x_min) * k / 4.0;
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="10">{}</text>)",
                       px(p.sx(x)), px(p.top + p.height + 14), fmt::format("{:.3g}", x))
        << '\n';
  }

  std::size_t row = 0;
  for (const auto& c : results) {
    if (!c.report) {
      continue;
    }
    const auto& r = *c.report;
    const double y = top + row_h * (static_cast<double>(row) + 0.5);
    out << fmt::format(R"(<text x="20" y="{}" font-size="11">{}</text>)", px(y + 4),
                       xml_escape(c.category))
        << '\n';
    out << fmt::format(R"(<text x="240" y="{}" font-size="11" text-anchor="end">{}</text>)",
                       px(y + 4), c.n_before)
        << '\n';
    out << fmt::format(R"(<text x="300" y="{}" font-size="11" text-anchor="end">{}</text>)",
                       px(y + 4), c.n_after)
        << '\n';
    const double yk = y - 4;
    const double yt = y + 4;
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f4fb4" stroke-width="2"/>)",
                       px(p.sx(r.ci_kernel.lo)), px(yk), px(p.sx(r.ci_kernel.hi)), px(yk))
        << '\n';
    out << fmt::format(R"(<circle cx="{}" cy="{}" r="3" fill="#1f4fb4"/>)",
                       px(p.sx(r.psi_kernel)), px(yk))
        << '\n';
    out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c8281e" stroke-width="2"/>)",
                       px(p.sx(r.ci_tmle.lo)), px(yt), px(p.sx(r.ci_tmle.hi)), px(yt))
        << '\n';
    out << fmt::format(R"(<circle cx="{}" cy="{}" r="3" fill="#c8281e"/>)",
                       px(p.sx(r.psi_tmle)), px(yt))
        << '\n';
    ++row;
  }
  out << "</svg>\n";
}

} // namespace l2d::report
