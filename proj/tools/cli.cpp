#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kppca/csv.hpp"
#include "kppca/dataset.hpp"
#include "kppca/dual_ppca.hpp"
#include "kppca/errors.hpp"
#include "kppca/mnist.hpp"
#include "kppca/model_io.hpp"
#include "kppca/preimage.hpp"
#include "kppca/run_metadata.hpp"
#include "kppca/toy_data.hpp"
#include "plots.hpp"

namespace fs = std::filesystem;

namespace kppca::cli {

namespace {

struct Options {
  std::string data;
  std::string labels;
  std::string digits;
  std::size_t limit = 0;
  std::string model;
  std::string out;
  std::string kernel = "rbf";
  double gamma = 1.0;
  int q = 0;
  double sigma2 = 0.0;
  long count = 10;
  long toy_count = 20;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  bool clip_negative = true;
  bool uncentered = false;
  std::string grid;
  std::string latent_range = "-1:1";
  std::string plot_dims = "1,2";
  double noise = 0.1;

  // set after parsing
  bool has_q = false;
  bool has_sigma2 = false;
  bool has_epsilon = false;
  bool has_limit = false;
};

[[noreturn]] void usage(const std::string& what) { throw Error(Errc::InvalidArgument, what); }

double parse_number(const std::string& text, const std::string& flag) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) usage(flag + ": '" + text + "' is not a number");
  return v;
}

std::pair<std::string, std::string> split_once(const std::string& text, char sep, const std::string& flag) {
  const auto at = text.find(sep);
  if (at == std::string::npos) usage(flag + ": expected '" + std::string(1, sep) + "' in '" + text + "'");
  return {text.substr(0, at), text.substr(at + 1)};
}

std::vector<int> parse_ints(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const double v = parse_number(item, flag);
    if (v != std::floor(v)) usage(flag + ": '" + item + "' is not an integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

KernelSpec kernel_from(const Options& o) {
  if (o.kernel == "linear") return KernelSpec::linear();
  return KernelSpec::rbf(o.gamma);
}

PreimageConfig preimage_config(const Options& o, Eigen::Index n) {
  return {o.has_epsilon ? o.epsilon : 1e-3 * static_cast<double>(n), o.clip_negative};
}

Dataset load_input(const Options& o) {
  DatasetHandle handle;
  if (is_idx_images(o.data)) {
    if (o.labels.empty()) usage("--labels is required with IDX image files");
    handle.source = IdxSource{o.data, o.labels};
  } else {
    handle.source = CsvSource{o.data};
  }
  if (!o.digits.empty()) {
    const auto digits = parse_ints(o.digits, "--digits");
    handle.filter = std::set<int>(digits.begin(), digits.end());
  }
  if (o.has_limit) handle.limit = o.limit;
  return load_dataset(handle);
}

fs::path out_dir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

RunMetadata metadata_for(const DualModel& m, const std::string& embedded, const std::string& command) {
  RunMetadata meta;
  if (!embedded.empty()) meta = RunMetadata::from_json(embedded);
  meta.kernel = m.spec;
  meta.q = m.q;
  meta.sigma2 = m.sigma2;
  meta.explained_variance = explained_variance(m);
  meta.extra["command"] = command;
  meta.timestamp = utc_timestamp();
  meta.tool_version = KPPCA_VERSION;
  return meta;
}

// Pre-images of centered kernel vectors (one per column).
class Preimager {
 public:
  Preimager(const DualModel& m, const PreimageConfig& cfg, bool uncentered)
      : m_(m), k_(gram(m.spec, m.ts)), cfg_(cfg), uncentered_(uncentered) {}

  const SymMatrix& gram_matrix() const { return k_; }

  Eigen::MatrixXd operator()(const Eigen::MatrixXd& kc) const {
    Eigen::MatrixXd x(m_.ts.dim(), kc.cols());
    for (Eigen::Index j = 0; j < kc.cols(); ++j) {
      const Eigen::VectorXd w = uncentered_ ? uncenter_kernel_vector(k_, kc.col(j)) : Eigen::VectorXd(kc.col(j));
      x.col(j) = kernel_smoother(m_.ts, w, cfg_);
    }
    return x;
  }

 private:
  const DualModel& m_;
  SymMatrix k_;
  PreimageConfig cfg_;
  bool uncentered_;
};

void record_preimage(RunMetadata& meta, const PreimageConfig& cfg, bool uncentered) {
  meta.extra["epsilon"] = format_double(cfg.epsilon);
  meta.extra["clip_negative"] = cfg.clip_negative ? "true" : "false";
  meta.extra["weights"] = uncentered ? "uncentered" : "centered";
}

// Centered kernel vectors of the inputs, one per column.
Eigen::MatrixXd centered_kernels(const DualModel& m, const SymMatrix& k, const Eigen::MatrixXd& x) {
  if (x.rows() != m.ts.dim()) {
    throw Error(Errc::DimensionMismatch, "data has " + std::to_string(x.rows()) +
                                             " features, model expects " + std::to_string(m.ts.dim()));
  }
  Eigen::MatrixXd kc(m.n(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) kc.col(j) = centered_kernel_vector(m.spec, m.ts, k, x.col(j));
  return kc;
}

Eigen::MatrixXd latent_codes(const DualModel& m, const Eigen::MatrixXd& kc) {
  Eigen::MatrixXd h(m.q, kc.cols());
  for (Eigen::Index j = 0; j < kc.cols(); ++j) h.col(j) = dual_latent_map(m, KernelSample{kc.col(j), Reconstructed{}});
  return h;
}

Eigen::MatrixXd map_reconstruct(const DualModel& m, const Eigen::MatrixXd& kc) {
  const Eigen::MatrixXd h = latent_codes(m, kc);
  Eigen::MatrixXd out(m.n(), kc.cols());
  for (Eigen::Index j = 0; j < kc.cols(); ++j) out.col(j) = dual_reconstruct(m, h.col(j)).kc_vec;
  return out;
}

Eigen::MatrixXd plot_coords(const Eigen::MatrixXd& x, const std::vector<int>& dims) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, x.cols());
  for (int r = 0; r < 2; ++r) {
    if (dims[r] < x.rows()) p.row(r) = x.row(dims[r]);
  }
  return p;
}

int cmd_fit(const Options& o) {
  if (o.has_q == o.has_sigma2) usage("fit needs exactly one of --q or --sigma2");
  const Dataset data = load_input(o);
  const KernelSpec spec = kernel_from(o);
  const LatentSpec latent = o.has_q ? LatentSpec::with_q(o.q) : LatentSpec::with_sigma2(o.sigma2);
  const DualModel m = fit_dual(spec, TrainingSet(data.x), latent);

  RunMetadata meta = metadata_for(m, {}, "fit");
  meta.seed = o.seed;
  meta.extra["data"] = o.data;
  meta.extra["n"] = std::to_string(m.n());
  meta.extra["dim"] = std::to_string(m.ts.dim());
  if (!o.digits.empty()) meta.extra["digits"] = o.digits;

  const fs::path dir = out_dir(o);
  save_model(dir / "model.kppca", m, meta.to_json(false));
  meta.write(dir / "run.json");
  std::cout << "q=" << m.q << " sigma2=" << format_double(m.sigma2)
            << " explained_variance=" << format_double(meta.explained_variance) << '\n';
  return kOk;
}

int cmd_project(const Options& o) {
  std::string embedded;
  const DualModel m = load_dual_model(o.model, &embedded);
  const SymMatrix k = gram(m.spec, m.ts);
  const Eigen::MatrixXd x = o.data.empty() ? m.ts.points() : load_input(o).x;
  const Eigen::MatrixXd h = latent_codes(m, centered_kernels(m, k, x));

  RunMetadata meta = metadata_for(m, embedded, "project");
  const fs::path dir = out_dir(o);
  save_csv(dir / "latent.csv", numbered_header("h", m.q), h);
  meta.write(dir / "run.json");
  return kOk;
}

int cmd_reconstruct(const Options& o) {
  std::string embedded;
  const DualModel m = load_dual_model(o.model, &embedded);
  const PreimageConfig cfg = preimage_config(o, m.n());
  const Preimager preimage(m, cfg, o.uncentered);
  const Eigen::MatrixXd x = o.data.empty() ? m.ts.points() : load_input(o).x;
  const Eigen::MatrixXd kc = map_reconstruct(m, centered_kernels(m, preimage.gram_matrix(), x));

  RunMetadata meta = metadata_for(m, embedded, "reconstruct");
  record_preimage(meta, cfg, o.uncentered);
  const fs::path dir = out_dir(o);
  save_csv(dir / "reconstructed_kc.csv", numbered_header("k", m.n()), kc);
  save_csv(dir / "reconstructed.csv", numbered_header("x", m.ts.dim()), preimage(kc));
  meta.write(dir / "run.json");
  return kOk;
}

void write_grid(const Options& o, const DualModel& m, const Preimager& preimage, const fs::path& dir) {
  const auto [a_text, b_text] = split_once(o.grid, 'x', "--grid");
  const auto [lo_text, hi_text] = split_once(o.latent_range, ':', "--latent-range");
  const double a = parse_number(a_text, "--grid"), b = parse_number(b_text, "--grid");
  const double lo = parse_number(lo_text, "--latent-range"), hi = parse_number(hi_text, "--latent-range");
  if (a < 1 || b < 1 || a != std::floor(a) || b != std::floor(b)) usage("--grid needs positive integers AxB");
  if (!(lo <= hi)) usage("--latent-range needs lo <= hi");
  if (m.q < 2) usage("--grid needs a model with q >= 2");

  const int cols = static_cast<int>(a), rows = static_cast<int>(b);
  const auto at = [&](int i, int steps) { return steps == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (steps - 1); };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m.q, static_cast<Eigen::Index>(cols) * rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      h(0, r * cols + c) = at(c, cols);
      h(1, r * cols + c) = at(rows - 1 - r, rows);
    }
  }
  Eigen::MatrixXd kc(m.n(), h.cols());
  for (Eigen::Index j = 0; j < h.cols(); ++j) kc.col(j) = dual_reconstruct(m, h.col(j)).kc_vec;
  const Eigen::MatrixXd x = preimage(kc);

  Eigen::MatrixXd table(2 + x.rows(), x.cols());
  table << h.topRows(2), x;
  std::vector<std::string> header{"h1", "h2"};
  for (const auto& name : numbered_header("x", x.rows())) header.push_back(name);
  save_csv(dir / "grid.csv", header, table);
  if (const int side = image_side(x.rows())) write_pgm_grid(dir / "grid.pgm", x, side, cols);
}

int cmd_generate(const Options& o) {
  if (o.count < 0) usage("--count must be non-negative");
  std::string embedded;
  const DualModel m = load_dual_model(o.model, &embedded);
  const PreimageConfig cfg = preimage_config(o, m.n());
  const Preimager preimage(m, cfg, o.uncentered);
  const auto dims = parse_ints(o.plot_dims, "--plot-dims");
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1 || dims[0] > m.ts.dim() || dims[1] > m.ts.dim()) {
    if (!(m.ts.dim() == 1 && dims == std::vector<int>{1, 2})) usage("--plot-dims needs two input coordinates");
  }
  const std::vector<int> plot_index{dims[0] - 1, dims[1] - 1};

  const auto samples = dual_sample(m, o.seed, o.count);
  Eigen::MatrixXd generated_kc(m.n(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) generated_kc.col(static_cast<Eigen::Index>(i)) = samples[i].kc_vec;
  const Eigen::MatrixXd generated = preimage(generated_kc);

  const Eigen::MatrixXd recon = preimage(map_reconstruct(m, m.kc.matrix()));
  const DualModel limit = fit_dual(m.kc, LatentSpec::fixed(m.q, 0.0), m.spec, m.ts);
  const Eigen::MatrixXd recon_limit = preimage(map_reconstruct(limit, m.kc.matrix()));

  RunMetadata meta = metadata_for(m, embedded, "generate");
  meta.seed = o.seed;
  meta.extra["count"] = std::to_string(o.count);
  record_preimage(meta, cfg, o.uncentered);

  const fs::path dir = out_dir(o);
  save_csv(dir / "generated_kc.csv", numbered_header("k", m.n()), generated_kc);
  save_csv(dir / "generated.csv", numbered_header("x", m.ts.dim()), generated);
  write_svg(dir / "plot.svg", {{"black", 3.0, plot_coords(m.ts.points(), plot_index), "training data"},
                               {"blue", 2.5, plot_coords(recon, plot_index), "reconstruction"},
                               {"red", 2.0, plot_coords(recon_limit, plot_index), "reconstruction, sigma2 = 0"},
                               {"grey", 2.0, plot_coords(generated, plot_index), "generated"}});
  if (const int side = image_side(m.ts.dim()); side && generated.cols() > 0) {
    write_pgm_grid(dir / "generated.pgm", generated, side,
                   static_cast<int>(std::ceil(std::sqrt(static_cast<double>(generated.cols())))));
  }
  if (!o.grid.empty()) write_grid(o, m, preimage, dir);
  meta.write(dir / "run.json");
  return kOk;
}

int cmd_report(const Options& o) {
  const ModelFile file = load_model(o.model);
  Eigen::VectorXd lambda;
  int q = 0, n = 0;
  double sigma2 = 0.0;
  std::string kernel = "none (primal)";
  if (const auto* m = std::get_if<DualModel>(&file.model)) {
    lambda = m->eigenvalues;
    q = m->q;
    n = static_cast<int>(m->n());
    sigma2 = m->sigma2;
    kernel = m->spec.family == KernelFamily::Rbf ? "rbf gamma=" + format_double(m->spec.gamma) : "linear";
  } else {
    const auto& p = std::get<PrimalModel>(file.model);
    lambda = p.eigenvalues;
    q = p.q;
    n = p.n;
    sigma2 = p.sigma2;
  }
  const double total = lambda.sum();
  if (!(total > 0.0)) throw Error(Errc::ZeroSpectrum, "all eigenvalues are zero");
  const double ev = std::get_if<DualModel>(&file.model) ? explained_variance(std::get<DualModel>(file.model))
                                                        : lambda.head(q).sum() / total;

  std::cout << "kernel: " << kernel << '\n'
            << "N: " << n << '\n'
            << "q: " << q << '\n'
            << "sigma2: " << format_double(sigma2) << '\n'
            << "explained_variance: " << format_double(ev) << '\n'
            << "spectrum:\n";
  const Eigen::Index shown = std::min<Eigen::Index>(lambda.size(), std::max(10, q));
  for (Eigen::Index p = 0; p < shown; ++p) {
    std::cout << "  " << p + 1 << ' ' << format_double(lambda(p)) << (p < q ? " *" : "") << '\n';
  }

  if (!o.out.empty()) {
    Eigen::MatrixXd table(4, lambda.size());
    double cumulative = 0.0;
    for (Eigen::Index p = 0; p < lambda.size(); ++p) {
      cumulative += lambda(p);
      table.col(p) << static_cast<double>(p + 1), lambda(p), lambda(p) / n, cumulative / total;
    }
    const fs::path dir = out_dir(o);
    save_csv(dir / "report.csv", {"p", "lambda", "lambda_over_n", "cumulative_explained"}, table);
    RunMetadata meta = file.metadata_json.empty() ? RunMetadata{} : RunMetadata::from_json(file.metadata_json);
    meta.q = q;
    meta.sigma2 = sigma2;
    meta.explained_variance = ev;
    meta.extra["command"] = "report";
    meta.timestamp = utc_timestamp();
    meta.tool_version = KPPCA_VERSION;
    meta.write(dir / "run.json");
  }
  return kOk;
}

int cmd_make_toy(const Options& o) {
  if (o.toy_count < 1) usage("--count must be positive");
  const Eigen::MatrixXd x = two_arcs(o.toy_count, o.seed, o.noise);
  const fs::path dir = out_dir(o);
  save_csv(dir / "toy.csv", {"x1", "x2"}, x);
  RunMetadata meta;
  meta.seed = o.seed;
  meta.timestamp = utc_timestamp();
  meta.extra["command"] = "make-toy";
  meta.extra["count"] = std::to_string(o.toy_count);
  meta.extra["noise"] = format_double(o.noise);
  meta.write(dir / "run.json");
  return kOk;
}

void data_flags(CLI::App* cmd, Options& o, bool required) {
  cmd->add_option("--data", o.data, "CSV file (one sample per row) or IDX image file")->required(required);
  cmd->add_option("--labels", o.labels, "IDX label file matching --data");
  cmd->add_option("--digits", o.digits, "comma-separated labels to keep (IDX only)");
  cmd->add_option("--limit", o.limit, "keep the first N samples")->check(CLI::PositiveNumber);
}

void preimage_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--epsilon", o.epsilon, "normalizer stabilization (default 1e-3 * N)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--clip-negative,!--no-clip-negative", o.clip_negative,
                "clamp negative smoother weights to zero (default on)");
  cmd->add_flag("--uncentered-weights", o.uncentered, "add the training kernel means back before preimaging");
}

}  // namespace

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"Probabilistic PCA in kernel space", "kppca"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KPPCA_VERSION);

  auto* fit = app.add_subcommand("fit", "fit a model and write model.kppca");
  data_flags(fit, o, true);
  fit->add_option("--kernel", o.kernel, "linear or rbf")->check(CLI::IsMember({"linear", "rbf"}));
  fit->add_option("--gamma", o.gamma, "RBF bandwidth")->check(CLI::PositiveNumber);
  auto* q_opt = fit->add_option("--q", o.q, "latent dimension");
  auto* s_opt = fit->add_option("--sigma2", o.sigma2, "noise variance; q follows from it");
  q_opt->excludes(s_opt);
  fit->add_option("--seed", o.seed, "recorded in the run metadata");
  fit->add_option("--out", o.out, "output directory")->required();

  auto* project = app.add_subcommand("project", "MAP latent codes, written to latent.csv");
  project->add_option("--model", o.model)->required();
  data_flags(project, o, false);
  project->add_option("--out", o.out)->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct inputs through the latent space");
  reconstruct->add_option("--model", o.model)->required();
  data_flags(reconstruct, o, false);
  preimage_flags(reconstruct, o);
  reconstruct->add_option("--out", o.out)->required();

  auto* generate = app.add_subcommand("generate", "sample kernel vectors and their preimages");
  generate->add_option("--model", o.model)->required();
  generate->add_option("--count", o.count, "number of samples");
  generate->add_option("--seed", o.seed);
  preimage_flags(generate, o);
  generate->add_option("--grid", o.grid, "AxB sweep of the first two latent components");
  generate->add_option("--latent-range", o.latent_range, "lo:hi range of the sweep");
  generate->add_option("--plot-dims", o.plot_dims, "input coordinates on the plot axes (1-based)");
  generate->add_option("--out", o.out)->required();

  auto* report = app.add_subcommand("report", "print q, sigma2, explained variance and the spectrum");
  report->add_option("--model", o.model)->required();
  report->add_option("--out", o.out, "also write report.csv here");

  auto* toy = app.add_subcommand("make-toy", "write the two-arc demonstration set to toy.csv");
  toy->add_option("--count", o.toy_count, "number of points");
  toy->add_option("--seed", o.seed);
  toy->add_option("--noise", o.noise)->check(CLI::NonNegativeNumber);
  toy->add_option("--out", o.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  for (auto* sub : {reconstruct, generate}) {
    if (sub->parsed()) o.has_epsilon = sub->get_option("--epsilon")->count() > 0;
  }
  for (auto* sub : {fit, project, reconstruct}) {
    if (sub->parsed()) o.has_limit = sub->get_option("--limit")->count() > 0;
  }
  o.has_q = q_opt->count() > 0;
  o.has_sigma2 = s_opt->count() > 0;

  try {
    if (fit->parsed()) return cmd_fit(o);
    if (project->parsed()) return cmd_project(o);
    if (reconstruct->parsed()) return cmd_reconstruct(o);
    if (generate->parsed()) return cmd_generate(o);
    if (report->parsed()) return cmd_report(o);
    return cmd_make_toy(o);
  } catch (const Error& e) {
    std::cerr << "kppca: " << e.what() << '\n';
    switch (classify(e.code())) {
      case ErrorClass::Usage: return kUsage;
      case ErrorClass::Data: return kData;
      case ErrorClass::Numeric: return kNumeric;
    }
  } catch (const fs::filesystem_error& e) {
    std::cerr << "kppca: Io: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "kppca: " << e.what() << '\n';
    return kNumeric;
  }
  return kNumeric;
}

}  // namespace kppca::cli
