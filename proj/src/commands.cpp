#include "stomoyal/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "stomoyal/document.hpp"
#include "stomoyal/error.hpp"
#include "stomoyal/gaussian_moments.hpp"
#include "stomoyal/monte_carlo.hpp"
#include "stomoyal/serialization.hpp"
#include "stomoyal/star_product.hpp"

namespace stomoyal {

namespace {

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Diag::usage, "cannot open input document \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CommonOptions {
  std::string input_path;
  std::string format = "text";
  std::string metric_name;
  std::string order_text;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  std::size_t chunk = kDefaultChunkSize;
  unsigned workers = 1;
  double p = 2.0;
  std::optional<int> r;
};

void add_common_options(CLI::App* sub, CommonOptions& options) {
  sub->add_option("--input", options.input_path, "problem document (JSON or block format)")
      ->required();
  sub->add_option("--format", options.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--metric", options.metric_name,
                  "override the document metric: flat|phase");
  sub->add_option("--order", options.order_text,
                  "series truncation order: N|auto");
  sub->add_option("--samples", options.samples, "Monte Carlo sample count");
  sub->add_option("--seed", options.seed, "Monte Carlo seed");
  sub->add_option("--chunk", options.chunk, "Monte Carlo chunk size");
  sub->add_option("--workers", options.workers, "Monte Carlo worker threads");
  sub->add_option("--p", options.p, "Sobolev norm exponent");
  sub->add_option("--r", options.r, "derivative order");
}

MetricProfile resolve_metric(const ProblemDocument& doc,
                             const CommonOptions& options) {
  if (options.metric_name.empty()) return doc.metric;
  if (options.metric_name == "flat") return MetricProfile::flat();
  if (options.metric_name == "phase" || options.metric_name == "phase_space") {
    return MetricProfile::phase_space();
  }
  throw Error(Diag::usage, "unknown metric \"" + options.metric_name + "\"");
}

std::optional<int> resolve_order(const ProblemDocument& doc,
                                 const CommonOptions& options) {
  if (options.order_text.empty()) return doc.hbar_order;
  if (options.order_text == "auto") return std::nullopt;
  const Error bad(Diag::usage,
                  "order must be \"auto\" or a nonnegative integer, got \"" +
                      options.order_text + "\"");
  std::size_t consumed = 0;
  int order = 0;
  try {
    order = std::stoi(options.order_text, &consumed);
  } catch (const std::exception&) {
    throw bad;
  }
  if (consumed != options.order_text.size() || order < 0) throw bad;
  return order;
}

int require_r(const CommonOptions& options) {
  if (!options.r) {
    throw Error(Diag::usage, "this command needs --r <derivative order>");
  }
  if (*options.r < 0) {
    throw Error(Diag::usage, "--r must be >= 0");
  }
  return *options.r;
}

void emit(const Json& j, std::ostream& out) { out << j.dump(2) << "\n"; }

int run_star(const ProblemDocument& doc, const CommonOptions& options,
             const std::vector<std::string>& names, std::ostream& out) {
  const PolynomialFunctional f = doc.resolve(names[0]);
  const PolynomialFunctional g = doc.resolve(names[1]);
  const FormalSeries series = moyal_product(
      f, g, resolve_order(doc, options), resolve_metric(doc, options));
  if (options.format == "json") {
    Json j{{"command", "star"},
           {"lhs", names[0]},
           {"rhs", names[1]},
           {"series", series_to_json(series)}};
    emit(j, out);
  } else {
    out << series.text() << "\n";
  }
  return 0;
}

int run_bracket(const ProblemDocument& doc, const CommonOptions& options,
                const std::vector<std::string>& names, std::ostream& out) {
  const PolynomialFunctional result =
      poisson_bracket(doc.resolve(names[0]), doc.resolve(names[1]),
                      resolve_metric(doc, options));
  if (options.format == "json") {
    emit(Json{{"command", "bracket"},
              {"lhs", names[0]},
              {"rhs", names[1]},
              {"result", polynomial_to_json(result)}},
         out);
  } else {
    out << result.text() << "\n";
  }
  return 0;
}

int run_cr(const ProblemDocument& doc, const CommonOptions& options,
           const std::vector<std::string>& names, std::ostream& out) {
  const int r = require_r(options);
  const PolynomialFunctional result =
      c_r(doc.resolve(names[0]), doc.resolve(names[1]), r,
          resolve_metric(doc, options));
  if (options.format == "json") {
    emit(Json{{"command", "cr"},
              {"r", r},
              {"lhs", names[0]},
              {"rhs", names[1]},
              {"result", polynomial_to_json(result)}},
         out);
  } else {
    out << result.text() << "\n";
  }
  return 0;
}

int run_expect(const ProblemDocument& doc, const CommonOptions& options,
               const std::vector<std::string>& names, std::ostream& out) {
  const Rational value = expectation_exact(doc.resolve(names[0]));
  if (options.format == "json") {
    emit(Json{{"command", "expect"},
              {"functional", names[0]},
              {"value", to_string(value)}},
         out);
  } else {
    out << to_string(value) << "\n";
  }
  return 0;
}

int run_norm(const ProblemDocument& doc, const CommonOptions& options,
             const std::vector<std::string>& names, std::ostream& out) {
  const int r = require_r(options);
  const PolynomialFunctional f = doc.resolve(names[0]);
  if (!options.samples) {
    if (options.p != 2.0) {
      throw Error(Diag::usage,
                  "norms with p != 2 have no exact path; pass --samples "
                  "(and optionally --seed/--chunk) for a Monte Carlo "
                  "estimate");
    }
    const SobolevNorm norm = sobolev_norm_exact_p2(f, r);
    if (options.format == "json") {
      emit(Json{{"command", "norm"},
                {"functional", names[0]},
                {"r", r},
                {"p", 2},
                {"squared", to_string(norm.squared)},
                {"value", norm.value}},
           out);
    } else {
      out << "norm_squared = " << to_string(norm.squared) << "\n";
      out << "norm = " << format_double(norm.value) << "\n";
    }
    return 0;
  }
  const SampleBatch batch = realize_samples(doc.atlas, *options.samples,
                                            options.seed, options.chunk,
                                            options.workers);
  const NormEstimate estimate =
      estimate_sobolev_norm(f, r, options.p, batch, options.workers);
  if (options.format == "json") {
    emit(Json{{"command", "norm"},
              {"functional", names[0]},
              {"r", r},
              {"p", options.p},
              {"estimate", estimate.value},
              {"std_error", estimate.std_error},
              {"samples", *options.samples},
              {"seed", options.seed},
              {"chunk", options.chunk}},
         out);
  } else {
    out << "estimate = " << format_double(estimate.value) << "\n";
    out << "std_error = " << format_double(estimate.std_error) << "\n";
  }
  return 0;
}

int run_verify(const ProblemDocument& doc, const CommonOptions& options,
               const std::vector<std::string>& names, std::ostream& out) {
  const PolynomialFunctional f = doc.resolve(names[0]);
  const PolynomialFunctional g = doc.resolve(names[1]);
  const PolynomialFunctional h = doc.resolve(names[2]);
  const MetricProfile metric = resolve_metric(doc, options);
  const std::optional<int> order = resolve_order(doc, options);
  const int check_order =
      order ? *order
            : std::max({f.total_degree(), g.total_degree(), h.total_degree(),
                        0}) *
                  2;
  AxiomReport report = check_bracket_axioms(f, g, h, metric);
  AxiomReport star = check_star_axioms(f, g, h, check_order, metric);
  report.checks.insert(report.checks.end(), star.checks.begin(),
                       star.checks.end());
  if (options.format == "json") {
    emit(axiom_report_to_json(report), out);
  } else {
    int failures = 0;
    for (const auto& check : report.checks) {
      out << (check.passed ? "PASS " : "FAIL ") << check.name;
      if (!check.passed && !check.detail.empty()) {
        out << " (" << check.detail << ")";
      }
      out << "\n";
      if (!check.passed) ++failures;
    }
    if (failures == 0) {
      out << "all " << report.checks.size() << " checks passed\n";
    } else {
      out << failures << " of " << report.checks.size()
          << " checks failed\n";
    }
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"star products, Poisson brackets and Sobolev norms of "
               "polynomial Wiener functionals"};
  app.name("stomoyal");

  CommonOptions options;
  std::vector<std::string> names;

  CLI::App* star = app.add_subcommand("star", "Moyal product of two functionals");
  star->add_option("functionals", names, "F G")->expected(2);
  CLI::App* bracket =
      app.add_subcommand("bracket", "Poisson bracket of two functionals");
  bracket->add_option("functionals", names, "F G")->expected(2);
  CLI::App* cr = app.add_subcommand("cr", "bidifferential coefficient C_r");
  cr->add_option("functionals", names, "F G")->expected(2);
  CLI::App* norm =
      app.add_subcommand("norm", "Sobolev norm, exact (p=2) or Monte Carlo");
  norm->add_option("functionals", names, "F")->expected(1);
  CLI::App* expect =
      app.add_subcommand("expect", "exact expectation of a functional");
  expect->add_option("functionals", names, "F")->expected(1);
  CLI::App* verify = app.add_subcommand(
      "verify", "check star-product and Poisson-bracket axioms");
  verify->add_option("functionals", names, "F G H")->expected(3);

  for (CLI::App* sub : {star, bracket, cr, norm, expect, verify}) {
    add_common_options(sub, options);
  }
  app.require_subcommand(1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[" << diag_code(Diag::usage) << "]: " << e.what() << "\n";
    return 2;
  }

  try {
    const ProblemDocument doc = parse_document(read_file(options.input_path));
    if (star->parsed()) return run_star(doc, options, names, out);
    if (bracket->parsed()) return run_bracket(doc, options, names, out);
    if (cr->parsed()) return run_cr(doc, options, names, out);
    if (norm->parsed()) return run_norm(doc, options, names, out);
    if (expect->parsed()) return run_expect(doc, options, names, out);
    return run_verify(doc, options, names, out);
  } catch (const Error& e) {
    err << "error[" << diag_code(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // last resort: engine errors must surface as diagnostics, not crashes
    err << "error[E-INTERNAL]: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace stomoyal
