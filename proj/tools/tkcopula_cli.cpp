// Command-line front end: sample generation, estimation, bandwidth
// cross-validation and the Monte Carlo studies.

#include "tkcopula/tkcopula.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace tkcopula;

std::vector<double>
parse_list(const std::string& text)
{
  std::vector<double> out;
  for (auto field : split_fields(text))
    out.push_back(parse_real(field));
  return out;
}

Pair
parse_point(const std::string& text)
{
  const auto values = parse_list(text);
  if (values.size() != 2)
    throw DomainError("expected a point U,V but got '" + text + "'");
  return { values[0], values[1] };
}

std::vector<Pair>
parse_points(const std::string& text)
{
  std::vector<Pair> out;
  for (auto field : split_fields(text, ';'))
    out.push_back(parse_point(std::string(field)));
  return out;
}

//! "cv" -> empty, otherwise a numeric bandwidth.
std::optional<double>
parse_bandwidth(const std::string& text)
{
  if (text == "cv")
    return std::nullopt;
  return parse_real(text);
}

Sample
load_sample(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw DomainError("cannot open " + path);
  return read_sample_csv(in);
}

//! Writes to `path`, or to stdout when path is empty or "-".
template<typename Writer>
void
emit(const std::string& path, Writer&& writer)
{
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DomainError("cannot write " + path);
  writer(out);
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Transformation kernel copula estimation" };
  app.require_subcommand(1);
  // Subcommands take a --h bandwidth option, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  // gen
  double gen_theta = 1.0;
  std::size_t gen_n = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Draw a Frank copula sample (x=u, y=v)");
  gen->add_option("--theta", gen_theta, "Frank parameter")->required();
  gen->add_option("--n", gen_n, "Sample size")->required();
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--out", gen_out, "Output CSV (default stdout)");

  // estimate
  std::string est_data;
  std::string est_h = "cv";
  std::size_t est_grid = 9;
  std::string est_out;
  auto* estimate = app.add_subcommand("estimate", "Evaluate the estimator on a grid");
  estimate->add_option("--data", est_data, "Input CSV with columns x,y")->required();
  estimate->add_option("--h", est_h, "Bandwidth, or 'cv'")->required();
  estimate->add_option("--grid", est_grid,
                       "Points per axis; grid is i/(G+1), i=1..G");
  estimate->add_option("--out", est_out, "Output CSV (default stdout)");

  // cv
  std::string cv_data;
  bool cv_rounded = false;
  std::optional<double> cv_a;
  std::optional<double> cv_b;
  double cv_step = 0.001;
  std::string cv_out;
  auto* cv = app.add_subcommand("cv", "Cross-validation curve and selected bandwidth");
  cv->add_option("--data", cv_data, "Input CSV with columns x,y")->required();
  auto* rounded_flag = cv->add_flag("--rounded-endpoints", cv_rounded,
                                  "Scan the rounded interval [0.04, 0.10]");
  cv->add_option("--a", cv_a, "Lower endpoint")->excludes(rounded_flag);
  cv->add_option("--b", cv_b, "Upper endpoint")->excludes(rounded_flag);
  cv->add_option("--step", cv_step, "Grid step");
  cv->add_option("--out", cv_out, "Curve CSV (default stdout)");

  // mc-table
  std::string mc_theta = "-2,1,5";
  std::size_t mc_n = 100;
  std::size_t mc_B = 1000;
  std::string mc_h = "0.085";
  std::uint64_t mc_seed = 0;
  std::string mc_format = "markdown";
  std::string mc_points;
  std::size_t mc_workers = default_workers();
  std::string mc_out;
  auto* mc = app.add_subcommand("mc-table", "Monte Carlo bias / MSE table");
  mc->add_option("--theta", mc_theta, "Comma-separated Frank parameters");
  mc->add_option("--n", mc_n, "Sample size");
  mc->add_option("--B", mc_B, "Replicates");
  mc->add_option("--h", mc_h, "Bandwidth, or 'cv' to select per replicate");
  mc->add_option("--seed", mc_seed, "Master seed");
  mc->add_option("--format", mc_format, "markdown or csv")
    ->check(CLI::IsMember({ "markdown", "csv" }));
  mc->add_option("--points", mc_points, "Points as 'u,v;u,v;...'");
  mc->add_option("--workers", mc_workers, "Worker threads");
  mc->add_option("--out", mc_out, "Output file (default stdout)");

  // bias-check
  double bc_theta = 5.0;
  std::string bc_point = "0.5,0.5";
  std::string bc_hs = "0.1,0.2";
  std::uint64_t bc_seed = 0;
  std::size_t bc_n = 20000;
  std::size_t bc_B = 200;
  std::size_t bc_workers = default_workers();
  auto* bc = app.add_subcommand(
    "bias-check", "Empirical smoothing bias against the h^2 expansion");
  bc->add_option("--theta", bc_theta, "Frank parameter (0 = independence)");
  bc->add_option("--point", bc_point, "Evaluation point U,V");
  bc->add_option("--h-list", bc_hs, "Comma-separated bandwidths");
  bc->add_option("--seed", bc_seed, "Seed");
  bc->add_option("--n-oracle", bc_n, "Draws per replicate");
  bc->add_option("--B", bc_B, "Replicates");
  bc->add_option("--workers", bc_workers, "Worker threads");

  // rate-scan
  double rs_theta = 1.0;
  std::string rs_ns = "100,400,1600";
  std::size_t rs_B = 20;
  std::uint64_t rs_seed = 0;
  std::string rs_h = "span";
  std::size_t rs_workers = default_workers();
  auto* rs = app.add_subcommand("rate-scan", "Sup-norm error and deviation versus n");
  rs->add_option("--theta", rs_theta, "Frank parameter");
  rs->add_option("--n-list", rs_ns, "Comma-separated increasing sample sizes");
  rs->add_option("--B", rs_B, "Replicates per sample size");
  rs->add_option("--seed", rs_seed, "Seed");
  rs->add_option("--h", rs_h, "'span' (5 bandwidths in [a_n,b_n]), 'cv' or a value");
  rs->add_option("--workers", rs_workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto draws = frank_sample(gen_theta, gen_n, gen_seed);
      emit(gen_out, [&](std::ostream& out) { write_sample_csv(out, draws); });
    } else if (*estimate) {
      const auto sample = load_sample(est_data);
      const auto fitted = fit_with_rule(sample, parse_bandwidth(est_h));
      const auto grid = interior_grid(est_grid);
      const auto values = fitted.evaluate_grid(grid, grid);
      emit(est_out, [&](std::ostream& out) {
        out << "u,v,chat\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
          for (std::size_t j = 0; j < grid.size(); ++j)
            out << format_real(grid[i]) << ',' << format_real(grid[j]) << ','
                << format_real(values(i, j)) << '\n';
      });
      std::cerr << "h=" << format_real(fitted.spec().bandwidth()) << '\n';
    } else if (*cv) {
      const auto sample = load_sample(cv_data);
      const auto defaults = admissible_interval(sample.size(), cv_step);
      const double a = cv_rounded ? 0.04 : cv_a.value_or(defaults.lower());
      const double b = cv_rounded ? 0.10 : cv_b.value_or(defaults.upper());
      const auto selection =
        select_bandwidth(sample, BandwidthInterval(a, b, cv_step));
      emit(cv_out, [&](std::ostream& out) { write_csv(out, selection.curve); });
      std::cout << "h_opt=" << format_real(selection.h_opt) << '\n';
    } else if (*mc) {
      std::vector<McReport> reports;
      const auto points =
        mc_points.empty() ? default_table_points() : parse_points(mc_points);
      for (double theta : parse_list(mc_theta)) {
        McConfig config;
        config.theta = theta;
        config.n = mc_n;
        config.replicates = mc_B;
        config.bandwidth = parse_bandwidth(mc_h);
        config.points = points;
        config.master_seed = mc_seed;
        config.workers = mc_workers;
        reports.push_back(mc_bias_mse(config));
        std::cerr << "theta=" << format_real(theta) << " runtime="
                  << reports.back().runtime_seconds << "s\n";
      }
      const auto format =
        mc_format == "csv" ? TableFormat::csv : TableFormat::markdown;
      const auto text = table_emit(reports, format);
      emit(mc_out, [&](std::ostream& out) { out << text; });
    } else if (*bc) {
      const auto at = parse_point(bc_point);
      const auto hs = parse_list(bc_hs);
      const auto report =
        bc_theta == 0.0
          ? bias_expansion_check(IndependenceCopula{}, hs, at.x, at.y, bc_n,
                                 bc_B, bc_seed, bc_workers)
          : bias_expansion_check(FrankCopula(bc_theta), hs, at.x, at.y, bc_n,
                                 bc_B, bc_seed, bc_workers);
      std::cout << "h,formula,empirical,std_error,raw,raw_std_error\n";
      for (const auto& e : report.entries)
        std::cout << format_real(e.h) << ',' << format_real(e.formula) << ','
                  << format_real(e.empirical) << ','
                  << format_real(e.std_error) << ',' << format_real(e.raw)
                  << ',' << format_real(e.raw_std_error) << '\n';
    } else if (*rs) {
      std::vector<std::size_t> ns;
      for (double n : parse_list(rs_ns))
        ns.push_back(static_cast<std::size_t>(n));
      const auto rule = rs_h == "span" ? BandwidthRule::span()
                        : rs_h == "cv" ? BandwidthRule::cross_validated()
                                       : BandwidthRule::fixed(parse_real(rs_h));
      const auto scan =
        consistency_scan(rs_theta, ns, rule, rs_B, rs_seed, rs_workers);
      std::cout << "n,a_n,b_n,sup_error,R_n,sup_deviation,scaled\n";
      for (const auto& e : scan.entries)
        std::cout << e.n << ',' << format_real(e.lower) << ','
                  << format_real(e.upper) << ',' << format_real(e.sup_error)
                  << ',' << format_real(e.rate) << ','
                  << format_real(e.sup_deviation) << ','
                  << format_real(e.scaled) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
