#pragma once

// simplexnet command-line front end. Every command writes machine-readable
// errors to stderr as one JSON object and exits with
//   0 success, 1 verification failure, 2 input error, 3 convergence failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

// Eigen must come before httplib: <resolv.h> defines a macro named _res.
#include "simplexnet/simplexnet.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>
#undef _res

namespace simplexnet::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2, kConvergenceFailed = 3 };

/// Parses "1-15,20,25" into {1,...,15,20,25}.
inline std::vector<long> parse_int_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto piece = std::string(io::trim(item));
    if (piece.empty()) continue;
    const auto dash = piece.find('-', 1);
    try {
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(std::stol(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } else {
        const long lo = std::stol(piece.substr(0, dash));
        const long hi = std::stol(piece.substr(dash + 1), &used);
        if (used != piece.size() - dash - 1 || hi < lo) throw std::invalid_argument(piece);
        for (long v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw InputError("invalid integer list item '" + piece + "'");
    }
  }
  if (out.empty()) throw InputError("empty integer list '" + text + "'");
  return out;
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) now = static_cast<std::time_t>(std::atoll(epoch));
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Read-only HTTP service over an exported bundle.
class BundleServer {
 public:
  explicit BundleServer(const std::filesystem::path& bundle, const std::string& static_dir = {}) {
    for (const char* name : {"manifest.json", "model.json", "edges.json"}) {
      const auto path = bundle / name;
      if (!std::filesystem::exists(path)) throw InputError("bundle is missing " + path.string());
      const std::string body = io::read_text(path.string());
      server_.Get(std::string("/") + name, [body](const httplib::Request&, httplib::Response& res) {
        res.set_content(body, "application/json");
      });
    }
    // httplib's default sets SO_REUSEPORT, which lets a second server share a busy port.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                 {"Access-Control-Allow-Methods", "GET, OPTIONS"}});
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    if (!static_dir.empty() && !server_.set_mount_point("/", static_dir))
      throw InputError("static asset directory " + static_dir + " does not exist");
  }

  /// Binds to host:port (port 0 picks a free one). Returns the port.
  int bind(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
    } else {
      port_ = server_.bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) throw InputError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    return port_;
  }

  bool listen() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() { server_.wait_until_ready(); }
  int port() const { return port_; }

 private:
  httplib::Server server_;
  int port_ = -1;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline void emit_error(std::ostream& err, const std::string& kind, const std::string& message,
                       std::optional<std::size_t> row = std::nullopt,
                       std::optional<std::size_t> column = std::nullopt, nlohmann::json extra = nullptr) {
  nlohmann::json j = {{"error", kind}, {"message", message}};
  if (row) j["row"] = *row;
  if (column) j["column"] = *column;
  if (!extra.is_null()) j.update(extra);
  err << j.dump() << '\n';
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  double epsilon = 1e-16;
  double tolerance = 1e-8;
  int max_iters = 100000;
  unsigned threads = 1;
  std::string output;
};

struct DatasetOptions {
  std::string data;
  std::string response;
  std::string predictors;
  std::string delimiter = ",";
  bool no_header = false;
  bool no_normalize = false;
  std::string name;

  io::DatasetSpec spec() const {
    io::DatasetSpec s;
    s.path = data;
    s.response_column = response;
    if (!predictors.empty()) {
      std::stringstream ss(predictors);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!io::trim(item).empty()) s.predictor_columns.emplace_back(io::trim(item));
    }
    if (delimiter.size() != 1 && delimiter != "\\t") throw InputError("delimiter must be one character");
    s.delimiter = delimiter == "\\t" ? '\t' : delimiter.front();
    s.has_header = !no_header;
    s.normalize = !no_normalize;
    s.name = name;
    return s;
  }
};

inline SolverConfig solver_config(const GlobalOptions& g) {
  SolverConfig c;
  c.tolerance = g.tolerance;
  c.max_iterations = g.max_iters;
  c.seed = g.seed;
  c.validate();
  return c;
}

inline void require_output(const GlobalOptions& g, const char* what) {
  if (g.output.empty()) throw InputError(std::string("--output is required for ") + what);
}

// ---------------------------------------------------------------------------

inline int cmd_sample(const GlobalOptions& g, const DatasetOptions& d, int resolution, const std::string& on_failure,
                      bool no_warm_start, Streams io_) {
  require_output(g, "sample");
  if (resolution < 1) throw InputError("--resolution must be at least 1");
  if (on_failure != "abort" && on_failure != "skip") throw InputError("--on-failure must be abort or skip");
  const auto config = solver_config(g);
  const auto spec = d.spec();
  const io::Dataset data = io::load_dataset(spec);
  for (const auto& w : data.warnings) io_.out << "warning: " << w << '\n';
  const ElasticNetProblem problem = data.problem(g.epsilon);
  const auto grid = grid_points(3, resolution);
  io_.out << "dataset " << data.name << ": " << problem.observations() << " observations, " << problem.predictors()
          << " predictors; solving " << grid.size() << " weights\n";

  SampleOptions opts;
  opts.threads = g.threads;
  opts.warm_start = !no_warm_start;
  opts.on_failure = on_failure == "skip" ? SampleOptions::OnFailure::skip : SampleOptions::OnFailure::abort;
  SampleStats stats;
  ParetoSample sample = sample_pareto(problem, grid, config, opts, &stats);
  sample.meta.dataset = data.name;
  sample.meta.resolution = resolution;
  sample.meta.source = spec;
  io::save_sample(sample, g.output);
  io_.out << "wrote " << sample.size() << " records to " << g.output << " (sweeps: total " << stats.total_sweeps
          << ", max " << stats.max_sweeps << "; failures " << sample.failures.size() << ")\n";
  if (!stats.zero_columns.empty()) io_.out << "warning: " << stats.zero_columns.size() << " all-zero predictor columns pinned to 0\n";
  return sample.failures.empty() ? kOk : kConvergenceFailed;
}

inline int cmd_fit(const GlobalOptions& g, const std::string& sample_path, int degree, std::size_t train_count,
                   const std::string& report_path, Streams io_) {
  require_output(g, "fit");
  if (degree < 0) throw InputError("--degree must be non-negative");
  const ParetoSample sample = io::load_sample(sample_path);
  const FitSample data = to_fit_sample(sample);
  auto [fit, report] = fit_and_score(data, 3, degree, train_count, g.seed);
  nlohmann::json meta = {{"dataset", sample.meta.dataset},
                         {"epsilon", sample.meta.epsilon},
                         {"resolution", sample.meta.resolution},
                         {"n", sample.predictors()},
                         {"train_count", report.train_count},
                         {"seed", report.seed}};
  io::save_model(fit.model, g.output, meta);
  const std::string text = io::report_to_json(report).dump(2) + "\n";
  if (report_path.empty())
    io_.out << text;
  else
    io::write_text(report_path, text);
  return kOk;
}

inline int cmd_sweep(const GlobalOptions& g, const std::string& sample_path, const std::string& degrees_text,
                     const std::string& counts_text, int trials, std::string summary_path, Streams io_) {
  require_output(g, "sweep");
  std::vector<int> degrees;
  for (long v : parse_int_list(degrees_text)) degrees.push_back(static_cast<int>(v));
  std::vector<std::size_t> counts;
  for (long v : parse_int_list(counts_text)) {
    if (v < 1) throw InputError("train counts must be positive");
    counts.push_back(static_cast<std::size_t>(v));
  }
  const ParetoSample sample = io::load_sample(sample_path);
  const SweepResult sweep = degree_sweep(to_fit_sample(sample), 3, degrees, counts, trials, g.seed, g.threads);
  if (summary_path.empty()) summary_path = g.output + ".summary.csv";
  io::write_text(g.output, io::sweep_cells_csv(sweep));
  io::write_text(summary_path, io::sweep_summary_csv(sweep));
  for (const auto& [k, d] : sweep.best_degree) {
    const auto it = std::find_if(sweep.summary.begin(), sweep.summary.end(),
                                 [&](const SweepSummary& s) { return s.train_count == k && s.degree == d; });
    io_.out << "train " << k << ": d* = " << d << ", test MSE " << io::format_double(it->test_mean) << " +- "
            << io::format_double(it->test_std) << '\n';
  }
  std::size_t failed = 0;
  for (const auto& c : sweep.cells) failed += c.error ? 1 : 0;
  if (failed > 0) io_.out << "warning: " << failed << " cells failed\n";
  return kOk;
}

inline int cmd_verify(const GlobalOptions& g, const std::string& sample_path, const std::string& builtin,
                      double dominance_tol, double certificate_tol, Streams io_) {
  nlohmann::json checks = nlohmann::json::array();
  bool passed = true;
  auto add = [&](const std::string& name, bool ok, nlohmann::json detail) {
    passed = passed && ok;
    detail["name"] = name;
    detail["passed"] = ok;
    checks.push_back(std::move(detail));
  };

  if (!builtin.empty()) {
    if (builtin != "remark") throw InputError("unknown builtin '" + builtin + "' (expected remark)");
    std::vector<double> w1s;
    for (int k = 0; k <= 100; ++k) w1s.push_back(k / 100.0);
    const auto rep = check_hoelder_bound(remark_path_points(w1s), kRemarkAlpha0, kRemarkK0);
    add("hoelder_bound", rep.max_violation <= 1e-12,
        {{"max_violation", rep.max_violation},
         {"pairs", rep.pairs},
         {"worst_pair", {w1s[rep.worst_first], w1s[rep.worst_second]}}});
  } else {
    if (sample_path.empty()) throw InputError("verify needs --sample or --builtin remark");
    const ParetoSample sample = io::load_sample(sample_path, nullptr, false);
    if (sample.records.empty()) throw InputError("sample is empty");
    const ElasticNetProblem problem = io::problem_for_sample(sample);
    if (problem.predictors() != sample.predictors())
      throw InputError("sample has " + std::to_string(sample.predictors()) + " coefficients, dataset has " +
                       std::to_string(problem.predictors()));

    const auto inconsistent = check_loss_consistency(sample, io::kLossConsistencyTolerance, &problem);
    add("loss_consistency", inconsistent.empty(), {{"violations", inconsistent}});

    auto dom = nlohmann::json::array();
    for (const auto& p : check_weak_dominance(sample, dominance_tol))
      dom.push_back({{"dominated", p.dominated}, {"dominating", p.dominating}});
    add("weak_dominance", dom.empty(), {{"tolerance", dominance_tol}, {"violations", dom}});

    const double tol = certificate_tol > 0 ? certificate_tol : 10.0 * sample.meta.solver.tolerance;
    auto cert = nlohmann::json::array();
    for (const auto& v : check_certificates(problem, sample, tol))
      cert.push_back({{"record", v.record}, {"violation", v.violation}});
    add("subgradient_certificate", cert.empty(), {{"tolerance", tol}, {"violations", cert}});
  }
  (void)g;
  io_.out << nlohmann::json({{"passed", passed}, {"checks", checks}}).dump(2) << '\n';
  return passed ? kOk : kVerificationFailed;
}

inline int cmd_export(const GlobalOptions& g, const std::string& model_path, const std::string& sample_path,
                      const std::string& created_at, Streams io_) {
  require_output(g, "export");
  const BezierSimplexModel model = io::load_model(model_path);
  io::BundleInfo info;
  info.created_at = created_at.empty() ? utc_timestamp() : created_at;
  info.epsilon = g.epsilon;
  if (!sample_path.empty()) {
    const ParetoSample sample = io::load_sample(sample_path);
    if (sample.predictors() + 3 != model.out_dim())
      throw InputError("model out_dim does not match the sample's n + 3");
    info.dataset = sample.meta.dataset;
    info.epsilon = sample.meta.epsilon;
    info.resolution = sample.meta.resolution;
  } else {
    const auto meta = nlohmann::json::parse(io::read_text(model_path)).value("meta", nlohmann::json::object());
    info.dataset = meta.value("dataset", std::string{});
    info.epsilon = meta.value("epsilon", g.epsilon);
    info.resolution = meta.value("resolution", 0);
  }
  const auto dir = io::export_model_bundle(model, info, g.output);
  io_.out << "bundle written to " << dir.string() << '\n';
  return kOk;
}

inline int cmd_serve(const std::string& bundle, const std::string& static_dir, const std::string& host, int port,
                     Streams io_) {
  BundleServer server(bundle, static_dir);
  const int bound = server.bind(host, port);
  io_.out << "serving " << bundle << " on http://" << host << ':' << bound << '\n' << std::flush;
  server.listen();
  return kOk;
}

inline int cmd_synth(const GlobalOptions& g, int predictors, int observations, double noise, Streams io_) {
  require_output(g, "synth");
  io::SyntheticOptions opt;
  opt.predictors = predictors;
  opt.observations = observations;
  opt.noise = noise;
  opt.seed = g.seed;
  io::write_dataset_csv(io::synthetic_dataset(opt), g.output);
  io_.out << "wrote " << observations << " x " << predictors << " synthetic dataset to " << g.output << '\n';
  return kOk;
}

inline int cmd_fixtures(const GlobalOptions& g, const std::string& model_path, int count, Streams io_) {
  require_output(g, "fixtures");
  if (count < 1) throw InputError("--count must be positive");
  const BezierSimplexModel model = io::load_model(model_path);
  io::write_text(g.output, io::model_fixtures(model, count, g.seed).dump(2) + "\n");
  io_.out << "wrote " << count << " fixtures to " << g.output << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

/// Entry point; args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Streams io_{out, err};
  CLI::App app{"Pareto set/front sampling of the multi-objective elastic net and Bezier simplex surrogates",
               "simplexnet"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for splits, fixtures and synthetic data");
  app.add_option("--epsilon", g.epsilon, "Perturbation epsilon (> 0)")->check(CLI::PositiveNumber);
  app.add_option("--tolerance", g.tolerance, "Coordinate descent stopping threshold")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", g.max_iters, "Maximum coordinate descent sweeps")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", g.output, "Output path");

  DatasetOptions d;
  int resolution = 100;
  std::string on_failure = "abort";
  bool no_warm_start = false;
  auto* sample = app.add_subcommand("sample", "Solve the weighted-sum problem on a simplex grid");
  sample->add_option("--data", d.data, "Dataset CSV, or builtin:example1")->required();
  sample->add_option("--response", d.response, "Response column (name or 0-based index; default last)");
  sample->add_option("--predictors", d.predictors, "Comma-separated predictor columns (default all others)");
  sample->add_option("--delimiter", d.delimiter, "Field delimiter");
  sample->add_flag("--no-header", d.no_header, "Input has no header row");
  sample->add_flag("--no-normalize", d.no_normalize, "Skip min-max scaling");
  sample->add_option("--name", d.name, "Dataset name recorded in metadata");
  sample->add_option("--resolution", resolution, "Grid resolution R (C(R+2,2) weights)");
  sample->add_option("--on-failure", on_failure, "abort | skip");
  sample->add_flag("--no-warm-start", no_warm_start, "Solve every weight from the zero start");

  std::string sample_path, report_path, summary_path;
  int degree = 3;
  std::size_t train_count = 0;
  auto* fit = app.add_subcommand("fit", "Fit a Bezier simplex to a sample");
  fit->add_option("--sample", sample_path, "Sample CSV")->required();
  fit->add_option("--degree", degree, "Degree d");
  fit->add_option("--train-count", train_count, "Training set size")->required();
  fit->add_option("--report", report_path, "FitReport JSON path (default stdout)");

  std::string degrees_text = "1-15,20,25,30", counts_text = "51,257,515,2575,5100";
  int trials = 10;
  auto* sweep = app.add_subcommand("sweep", "Degree x train-size sweep");
  sweep->add_option("--sample", sample_path, "Sample CSV")->required();
  sweep->add_option("--degrees", degrees_text, "Degrees, e.g. 1-15,20,25,30");
  sweep->add_option("--train-counts", counts_text, "Training set sizes");
  sweep->add_option("--trials", trials, "Trials per cell")->check(CLI::PositiveNumber);
  sweep->add_option("--summary", summary_path, "Summary CSV (default <output>.summary.csv)");

  std::string builtin;
  double dominance_tol = 1e-7, certificate_tol = 0.0;
  auto* verify = app.add_subcommand("verify", "Check a sample (or a builtin example) against the theory");
  verify->add_option("--sample", sample_path, "Sample CSV");
  verify->add_option("--builtin", builtin, "Builtin check: remark");
  verify->add_option("--dominance-tol", dominance_tol, "Tolerance of the weak dominance check");
  verify->add_option("--certificate-tol", certificate_tol, "Subgradient tolerance (default 10 x solver tolerance)");

  std::string model_path, created_at;
  auto* export_cmd = app.add_subcommand("export", "Write an explorer bundle");
  export_cmd->add_option("--model", model_path, "Model JSON")->required();
  export_cmd->add_option("--sample", sample_path, "Sample the model was fitted to (for metadata)");
  export_cmd->add_option("--created-at", created_at, "Manifest timestamp (default now, or SOURCE_DATE_EPOCH)");

  std::string bundle, static_dir, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a bundle over HTTP (read-only)");
  serve->add_option("--bundle", bundle, "Bundle directory")->required();
  serve->add_option("--static", static_dir, "Explorer static assets directory");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");

  int synth_predictors = 6, synth_observations = 500;
  double noise = 0.1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic regression dataset");
  synth->add_option("--predictors", synth_predictors, "Number of predictors")->check(CLI::PositiveNumber);
  synth->add_option("--observations", synth_observations, "Number of observations")->check(CLI::PositiveNumber);
  synth->add_option("--noise", noise, "Gaussian noise level");

  int fixture_count = 20;
  auto* fixtures = app.add_subcommand("fixtures", "Reference evaluations of a model");
  fixtures->add_option("--model", model_path, "Model JSON")->required();
  fixtures->add_option("--count", fixture_count, "Number of points");

  try {
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kInputError;
  }

  try {
    if (*sample) return cmd_sample(g, d, resolution, on_failure, no_warm_start, io_);
    if (*fit) return cmd_fit(g, sample_path, degree, train_count, report_path, io_);
    if (*sweep) return cmd_sweep(g, sample_path, degrees_text, counts_text, trials, summary_path, io_);
    if (*verify) return cmd_verify(g, sample_path, builtin, dominance_tol, certificate_tol, io_);
    if (*export_cmd) return cmd_export(g, model_path, sample_path, created_at, io_);
    if (*serve) return cmd_serve(bundle, static_dir, host, port, io_);
    if (*synth) return cmd_synth(g, synth_predictors, synth_observations, noise, io_);
    if (*fixtures) return cmd_fixtures(g, model_path, fixture_count, io_);
  } catch (const InputError& e) {
    emit_error(err, "input", e.what(), e.row(), e.column());
    return kInputError;
  } catch (const ValidationError& e) {
    emit_error(err, "validation", e.what());
    return kInputError;
  } catch (const DomainError& e) {
    emit_error(err, "domain", e.what());
    return kInputError;
  } catch (const ConvergenceError& e) {
    emit_error(err, "convergence", e.what(), std::nullopt, std::nullopt,
               {{"w", e.weight()}, {"last_delta", e.last_delta()}});
    return kConvergenceFailed;
  } catch (const nlohmann::json::exception& e) {
    emit_error(err, "input", e.what());
    return kInputError;
  } catch (const Error& e) {
    emit_error(err, "error", e.what());
    return kInputError;
  }
  return kInputError;
}

}  // namespace simplexnet::cli
