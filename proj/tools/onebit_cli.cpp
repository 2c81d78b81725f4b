// Copyright 2026 The onebit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// onebit: command-line front end for synthetic sweeps, the MovieLens
// benchmark, bound tables and mask diagnostics.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "onebit/error.hpp"
#include "onebit/experiments.hpp"
#include "onebit/links.hpp"
#include "onebit/metrics.hpp"
#include "onebit/movielens.hpp"
#include "onebit/observe.hpp"
#include "onebit/rng.hpp"
#include "onebit/sampling.hpp"
#include "onebit/solver.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

using Params = std::vector<std::pair<std::string, std::string>>;

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s << ',';
    if constexpr (std::is_floating_point_v<T>) {
      s << onebit::format_number(values[i]);
    } else {
      s << values[i];
    }
  }
  return s.str();
}

// Options shared by the fitting commands.
struct Common {
  int r = 5;
  std::string link = "probit";
  double sigma = 0.18;
  double alpha = 1.0;
  std::optional<double> lambda0;
  int halvings = 12;
  int folds = 5;
  int max_iters = 500;
  int repeats = 20;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
  bool reproducible = false;
};

void add_fit_options(CLI::App* sub, Common& c) {
  sub->add_option("--r", c.r, "rank")->capture_default_str();
  sub->add_option("--link", c.link, "link function")
      ->check(CLI::IsMember({"logit", "probit"}))
      ->capture_default_str();
  sub->add_option("--sigma", c.sigma, "link noise scale")->capture_default_str();
  sub->add_option("--alpha", c.alpha, "entrywise bound on M")->capture_default_str();
  sub->add_option("--lambda0", c.lambda0,
                  "initial barrier weight (default max(1, F(M0)/(mn)))");
  sub->add_option("--halvings", c.halvings, "number of lambda halvings")
      ->capture_default_str();
  sub->add_option("--folds", c.folds, "cross-validation folds (1 disables)")
      ->capture_default_str();
  sub->add_option("--max-iters", c.max_iters, "gradient steps per lambda")
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads")->capture_default_str();
  sub->add_flag("--reproducible", c.reproducible,
                "zero wall-clock columns so reruns are byte-identical");
}

onebit::SolverConfig solver_config(const Common& c) {
  onebit::SolverConfig cfg;
  cfg.rank_r = c.r;
  cfg.alpha = c.alpha;
  cfg.lambda0 = c.lambda0;
  cfg.lambda_halvings = c.halvings;
  cfg.cv_folds = c.folds;
  cfg.max_iters_per_lambda = c.max_iters;
  cfg.seed = c.seed;
  return cfg;
}

onebit::LinkModel link_model(const Common& c) {
  return {onebit::parse_link_kind(c.link), c.sigma};
}

Params fit_params(const Common& c) {
  return {{"r", std::to_string(c.r)},
          {"link", c.link},
          {"sigma", onebit::format_number(c.sigma)},
          {"alpha", onebit::format_number(c.alpha)},
          {"lambda0", c.lambda0 ? onebit::format_number(*c.lambda0) : "auto"},
          {"halvings", std::to_string(c.halvings)},
          {"folds", std::to_string(c.folds)},
          {"max_iters", std::to_string(c.max_iters)},
          {"repeats", std::to_string(c.repeats)},
          {"threads", std::to_string(c.threads)},
          {"reproducible", c.reproducible ? "true" : "false"},
          {"seed", std::to_string(c.seed)}};
}

std::filesystem::path out_dir(const Common& c) {
  std::filesystem::path dir = c.out.empty() ? "." : c.out;
  std::filesystem::create_directories(dir);
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw onebit::IoError("cannot open " + path.string() + " for writing");
  return out;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  Common common;
  std::string mode = "fig2";
  std::optional<int> n;
  std::vector<int> n_grid;
  std::optional<double> p;
  std::vector<double> p_grid;
  std::optional<double> q;
  double pq_sum = 0.7;
  std::optional<std::string> sampling;
};

int cmd_synth(const SynthArgs& a) {
  using onebit::SamplingKind;
  std::vector<int> ns;
  std::vector<double> ps;
  SamplingKind sampling = SamplingKind::kBernoulli;
  if (a.mode == "fig2") {
    ns = {100};
    ps = {0.2, 0.4, 0.6, 0.8};
  } else if (a.mode == "fig3") {
    ns = {50, 100, 200};
    ps = {0.4};
  } else {
    ns = {100};
    ps = {0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65};
    sampling = SamplingKind::kBlock;
  }
  if (a.n) ns = {*a.n};
  if (!a.n_grid.empty()) ns = a.n_grid;
  if (a.p) ps = {*a.p};
  if (!a.p_grid.empty()) ps = a.p_grid;
  if (a.sampling) sampling = onebit::parse_sampling_kind(*a.sampling);

  std::vector<onebit::SynthPoint> points;
  for (int n : ns) {
    for (double p : ps) {
      onebit::SynthPoint pt{n, a.common.r, p, 0.0, sampling};
      if (sampling == SamplingKind::kBlock) pt.q = a.q ? *a.q : a.pq_sum - p;
      points.push_back(pt);
    }
  }

  onebit::ExperimentSettings settings;
  settings.link = link_model(a.common);
  settings.alpha = a.common.alpha;
  settings.solver = solver_config(a.common);
  settings.repeats = a.common.repeats;
  settings.seed = a.common.seed;
  settings.threads = a.common.threads;
  settings.reproducible = a.common.reproducible;

  Params params = fit_params(a.common);
  params.insert(params.begin(),
                {{"mode", a.mode},
                 {"n_grid", join(ns)},
                 {"p_grid", join(ps)},
                 {"q", a.q ? onebit::format_number(*a.q) : "p+q=" + onebit::format_number(a.pq_sum)},
                 {"sampling", onebit::to_string(sampling)}});

  std::vector<std::string> skipped;
  const auto rows = onebit::run_synth(points, settings, &skipped);
  for (const std::string& s : skipped) std::cerr << "warning: skipped " << s << '\n';
  const auto agg = onebit::aggregate(points, rows);

  const auto dir = out_dir(a.common);
  {
    auto out = open_output(dir / "runs.csv");
    onebit::write_header(out, "synth", params);
    onebit::write_run_csv(out, rows);
  }
  {
    auto out = open_output(dir / "aggregate.csv");
    onebit::write_header(out, "synth", params);
    onebit::write_aggregate_csv(out, agg);
  }
  {
    auto out = open_output(dir / (a.mode + ".gp"));
    out << onebit::gnuplot_script(a.mode, "aggregate.csv");
  }
  onebit::write_aggregate_csv(std::cout, agg);
  if (a.mode == "fig3" && agg.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& g : agg) {
      x.push_back(g.params.n);
      y.push_back(g.mean_relative_mse);
    }
    std::cout << "# log-log slope of relative MSE vs n: "
              << onebit::format_number(onebit::log_log_slope(x, y)) << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- movielens

struct MovielensArgs {
  Common common;
  std::string data;
  bool smoke = false;
  std::vector<double> fractions;
  std::vector<double> sigmas;
  std::vector<int> ranks;
  std::optional<int> subsample;
  // Set when the flag was given explicitly, so smoke defaults do not apply.
  bool folds_given = false;
  bool max_iters_given = false;
};

// Smoke mode trims the solver budget so the whole pipeline runs in minutes.
constexpr int kSmokeFolds = 2;
constexpr int kSmokeMaxIters = 30;

int cmd_movielens(MovielensArgs a) {
  std::string path = a.data;
  if (path.empty()) {
    if (const char* env = std::getenv("ONEBIT_MOVIELENS")) path = env;
  }
  if (path.empty()) {
    throw onebit::IoError(std::string("no ratings file given; download ") +
                          onebit::kMovielensUrl +
                          ", unzip it and pass --data ml-100k/u.data");
  }
  onebit::RatingsTable table = onebit::load_movielens(path);
  std::cerr << "loaded " << table.triples.size() << " ratings from "
            << table.n_users << " users on " << table.n_items << " items";
  if (table.duplicates_replaced)
    std::cerr << " (" << table.duplicates_replaced << " duplicates replaced)";
  std::cerr << '\n';
  if (table.n_users != onebit::kMovielensUsers ||
      table.n_items != onebit::kMovielensItems ||
      table.triples.size() != onebit::kMovielensRatings) {
    std::cerr << "warning: counts differ from the published MovieLens 100k "
                 "release ("
              << onebit::kMovielensUsers << " users, " << onebit::kMovielensItems
              << " items, " << onebit::kMovielensRatings << " ratings)\n";
  }

  onebit::MovielensSettings settings;
  if (a.smoke) {
    if (!a.subsample) a.subsample = 5000;
    settings.realizations = 2;
    settings.sigmas = {1.0};
    settings.ranks = {1, 2};
    if (!a.folds_given) a.common.folds = kSmokeFolds;
    if (!a.max_iters_given) a.common.max_iters = kSmokeMaxIters;
  } else {
    settings.realizations = a.common.repeats;
  }
  if (!a.fractions.empty()) settings.train_fractions = a.fractions;
  if (!a.sigmas.empty()) settings.sigmas = a.sigmas;
  if (!a.ranks.empty()) settings.ranks = a.ranks;
  if (a.subsample && *a.subsample < static_cast<int>(table.triples.size())) {
    table = onebit::subsample(table, static_cast<std::size_t>(*a.subsample),
                              onebit::substream(a.common.seed, "subsample", 0));
  }
  const onebit::BinaryObservations obs = onebit::binarize(table);
  std::size_t positive = 0;
  for (auto y : obs.values()) positive += y > 0;
  std::cerr << "binarized at mean " << onebit::format_number(onebit::mean_rating(table))
            << ": " << obs.size() << " observations, +1 fraction "
            << static_cast<double>(positive) / static_cast<double>(obs.size())
            << '\n';

  settings.alpha = a.common.alpha;
  settings.solver = solver_config(a.common);
  settings.seed = a.common.seed;
  settings.threads = a.common.threads;
  settings.reproducible = a.common.reproducible;

  Params params = fit_params(a.common);
  // r, link and sigma are gridded; realizations replace repeats.
  std::erase_if(params, [](const auto& kv) {
    return kv.first == "r" || kv.first == "link" || kv.first == "sigma" ||
           kv.first == "repeats";
  });
  params.insert(params.begin(),
                {{"data", path},
                 {"smoke", a.smoke ? "true" : "false"},
                 {"subsample", a.subsample ? std::to_string(*a.subsample) : "none"},
                 {"link", "logit"},
                 {"train_fractions", join(settings.train_fractions)},
                 {"realizations", std::to_string(settings.realizations)},
                 {"sigma_grid", join(settings.sigmas)},
                 {"rank_grid", join(settings.ranks)}});

  const auto rows = onebit::run_movielens(obs, settings);
  const auto summary = onebit::summarize_movielens(rows, settings);
  const auto dir = out_dir(a.common);
  {
    auto out = open_output(dir / "movielens_runs.csv");
    onebit::write_header(out, "movielens", params);
    onebit::write_run_csv(out, rows);
  }
  {
    auto out = open_output(dir / "movielens_summary.csv");
    onebit::write_header(out, "movielens", params);
    onebit::write_movielens_summary_csv(out, summary);
  }
  onebit::write_movielens_summary_csv(std::cout, summary);
  return 0;
}

// ----------------------------------------------------------------- bound

struct BoundArgs {
  std::optional<int> m;
  std::optional<int> n;
  std::vector<int> n_grid;
  std::vector<double> p_grid;
  int r = 5;
  std::string link = "probit";
  double sigma = 0.18;
  double alpha = 1.0;
  double c = 3.0;
  std::string sampling = "regular";
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_bound(const BoundArgs& a) {
  onebit::BoundSettings s;
  if (a.n) s.n_grid = {*a.n};
  if (!a.n_grid.empty()) s.n_grid = a.n_grid;
  if (!a.p_grid.empty()) s.p_grid = a.p_grid;
  s.m = a.m.value_or(0);
  s.r = a.r;
  s.alpha = a.alpha;
  s.link = {onebit::parse_link_kind(a.link), a.sigma};
  s.c_spectral = a.c;
  s.sampling = onebit::parse_sampling_kind(a.sampling);
  s.seed = a.seed;
  const auto rows = onebit::run_bounds(s);
  const Params params{{"m", a.m ? std::to_string(*a.m) : "n"},
                      {"n_grid", join(s.n_grid)},
                      {"p_grid", join(s.p_grid)},
                      {"r", std::to_string(a.r)},
                      {"link", a.link},
                      {"sigma", onebit::format_number(a.sigma)},
                      {"alpha", onebit::format_number(a.alpha)},
                      {"c", onebit::format_number(a.c)},
                      {"sampling", a.sampling},
                      {"seed", std::to_string(a.seed)},
                      {"note", "c2_alpha uses L_alpha at the given alpha (not at 2 alpha); "
                               "gamma_alpha and L_alpha are the closed forms"},
                      {"rates", "corollary_rate, prior_rate and ours_rate are rate-only "
                                "(constant 1)"}};
  if (a.out.empty()) {
    onebit::write_header(std::cout, "bound", params);
    onebit::write_bound_csv(std::cout, rows);
  } else {
    auto out = open_output(a.out);
    onebit::write_header(out, "bound", params);
    onebit::write_bound_csv(out, rows);
  }
  return 0;
}

// -------------------------------------------------------------- spectral

struct MaskArgs {
  std::string mask_file;
  int m = 0;
  int n = 200;
  double p = 0.4;
  double q = 0.3;
  int d = 0;
  std::string sampling = "bernoulli";
  std::uint64_t seed = 1;
  std::string out;
};

void add_mask_options(CLI::App* sub, MaskArgs& a) {
  sub->add_option("--m", a.m, "rows (default n)");
  sub->add_option("--n", a.n, "columns")->capture_default_str();
  sub->add_option("--p", a.p, "sampling probability")->capture_default_str();
  sub->add_option("--q", a.q, "off-diagonal probability (block model)")
      ->capture_default_str();
  sub->add_option("--d", a.d, "row degree for regular masks (default round(p n))");
  sub->add_option("--sampling", a.sampling, "mask generator")
      ->check(CLI::IsMember({"bernoulli", "block", "regular"}))
      ->capture_default_str();
  sub->add_option("--seed", a.seed, "seed")->capture_default_str();
}

onebit::Mask make_mask(const MaskArgs& a) {
  if (!a.mask_file.empty()) return onebit::load_mask(a.mask_file);
  const int m = a.m > 0 ? a.m : a.n;
  switch (onebit::parse_sampling_kind(a.sampling)) {
    case onebit::SamplingKind::kBernoulli:
      return onebit::gen_bernoulli(m, a.n, a.p, a.seed);
    case onebit::SamplingKind::kBlock:
      return onebit::gen_block_model(m, a.n, a.p, a.q, a.seed);
    case onebit::SamplingKind::kRegular: {
      const int d = a.d > 0 ? a.d : std::max(1, static_cast<int>(std::lround(a.p * a.n)));
      return onebit::gen_regular(m, a.n, d, a.seed);
    }
  }
  throw onebit::InvalidArgument("unknown sampling kind");
}

int cmd_spectral(const MaskArgs& a) {
  const onebit::Mask mask = make_mask(a);
  std::cout << "mask " << mask.rows() << 'x' << mask.cols() << ", |Omega|="
            << mask.size() << '\n';
  onebit::write_spectral_report(std::cout, onebit::spectral_report(mask));
  return 0;
}

int cmd_gen_mask(const MaskArgs& a) {
  const onebit::Mask mask = make_mask(a);
  if (a.out.empty()) {
    onebit::write_mask(std::cout, mask);
  } else {
    onebit::save_mask(a.out, mask);
  }
  return 0;
}

// ------------------------------------------------------- gen-obs and fit

struct GenObsArgs {
  std::string mask_file;
  int r = 5;
  std::string link = "probit";
  double sigma = 0.18;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth_out;
};

int cmd_gen_obs(const GenObsArgs& a) {
  const onebit::Mask mask = onebit::load_mask(a.mask_file);
  const onebit::GroundTruth truth =
      onebit::gen_ground_truth(mask.rows(), mask.cols(), a.r, a.alpha,
                               onebit::substream(a.seed, "truth", 0));
  const onebit::LinkModel link{onebit::parse_link_kind(a.link), a.sigma};
  const auto obs = onebit::sample_observations(truth, mask, link,
                                               onebit::substream(a.seed, "obs", 0));
  if (a.out.empty()) {
    onebit::write_observations(std::cout, obs);
  } else {
    onebit::save_observations(a.out, obs);
  }
  if (!a.truth_out.empty()) {
    auto out = open_output(a.truth_out);
    onebit::write_dense_matrix(out, truth.m_star);
  }
  return 0;
}

struct FitArgs {
  Common common;
  std::string obs_file;
  std::optional<int> k;
  std::string truth_file;
  std::string test_file;
};

int cmd_fit(const FitArgs& a) {
  const auto obs = onebit::load_observations(a.obs_file);
  onebit::SolverConfig cfg = solver_config(a.common);
  if (a.k) cfg.k = *a.k;
  const onebit::FitReport report = onebit::fit(obs, link_model(a.common), cfg);
  if (a.common.out.empty()) {
    onebit::write_fit_report(std::cout, report);
  } else {
    onebit::save_fit_report(a.common.out, report);
  }
  if (!a.truth_file.empty()) {
    std::ifstream in(a.truth_file);
    if (!in) throw onebit::IoError("cannot open " + a.truth_file);
    std::cerr << "relative_mse="
              << onebit::format_number(
                     onebit::relative_mse(report.m_hat, onebit::read_dense_matrix(in)))
              << '\n';
  }
  if (!a.test_file.empty()) {
    std::cerr << "sign_accuracy="
              << onebit::format_number(onebit::sign_accuracy(
                     report.m_hat, onebit::load_observations(a.test_file)))
              << '\n';
  }
  std::cerr << "lambda_selected=" << onebit::format_number(report.lambda_selected)
            << " certificate=" << onebit::to_string(report.certificate) << '\n';
  return 0;
}

struct GenRatingsArgs {
  int users = onebit::kMovielensUsers;
  int items = onebit::kMovielensItems;
  int count = onebit::kMovielensRatings;
  int rank = 3;
  std::uint64_t seed = 1;
  std::string out;
};

// Synthetic ratings in u.data layout, for exercising the MovieLens pipeline
// without the real dataset.
int cmd_gen_ratings(const GenRatingsArgs& a) {
  const auto table = onebit::synthesize_ratings(
      a.users, a.items, static_cast<std::size_t>(a.count), a.rank, a.seed);
  if (a.out.empty()) {
    onebit::write_movielens(std::cout, table);
  } else {
    auto out = open_output(a.out);
    onebit::write_movielens(out, table);
  }
  return 0;
}

// Expands "--config FILE" into flags for every key the command line does not
// already set, so explicit flags override the file. Lines are key=value;
// '#' starts a comment; list values are comma separated.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config.empty()) return out;
  std::ifstream in(config);
  if (!in) throw onebit::IoError("cannot open config file " + config);
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw onebit::ParseError("config lines must be key=value", line_no);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\"");
      const auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (char& ch : key)
      if (ch == '_') ch = '-';
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& arg : out)
      given = given || arg == flag || arg.rfind(flag + "=", 0) == 0;
    if (given) continue;
    if (value == "true") {
      out.push_back(flag);
    } else if (value != "false") {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("onebit: 1-bit matrix completion with an exact rank constraint");
  app.set_version_flag("--version", std::string(ONEBIT_VERSION));
  app.require_subcommand(1);
  int status = 0;

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "synthetic relative-MSE sweeps");
  s->add_option("--mode", synth.mode, "preset grid")
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}))
      ->capture_default_str();
  s->add_option("--n", synth.n, "matrix size (square)");
  s->add_option("--n-grid", synth.n_grid, "matrix sizes")->delimiter(',');
  s->add_option("--p", synth.p, "single sampling probability");
  s->add_option("--p-grid", synth.p_grid, "sampling probabilities")->delimiter(',');
  s->add_option("--q", synth.q, "fixed off-diagonal probability (block model)");
  s->add_option("--pq-sum", synth.pq_sum, "q = pq_sum - p when --q is absent")
      ->capture_default_str();
  s->add_option("--sampling", synth.sampling, "bernoulli, block or regular");
  add_fit_options(s, synth.common);
  s->add_option("--repeats", synth.common.repeats, "Monte Carlo repeats")
      ->capture_default_str();
  s->add_option("--out", synth.common.out, "output directory");
  s->callback([&] { status = cmd_synth(synth); });

  MovielensArgs ml;
  ml.common.link = "logit";
  auto* mlc = app.add_subcommand("movielens", "MovieLens 100k sign-prediction benchmark");
  mlc->add_option("--data", ml.data,
                  "path to ml-100k/u.data (default $ONEBIT_MOVIELENS)");
  mlc->add_flag("--smoke", ml.smoke,
                "5000-rating subsample, 2 realizations, reduced grid");
  mlc->add_option("--fractions", ml.fractions, "training fractions")->delimiter(',');
  mlc->add_option("--sigma-grid", ml.sigmas, "logit scales to search")->delimiter(',');
  mlc->add_option("--rank-grid", ml.ranks, "ranks to search")->delimiter(',');
  mlc->add_option("--subsample", ml.subsample, "use a random subset of ratings");
  mlc->add_option("--alpha", ml.common.alpha, "entrywise bound")->capture_default_str();
  mlc->add_option("--lambda0", ml.common.lambda0, "initial barrier weight");
  mlc->add_option("--halvings", ml.common.halvings, "lambda halvings")
      ->capture_default_str();
  auto* ml_folds = mlc->add_option("--folds", ml.common.folds,
                                   "cross-validation folds")
                       ->capture_default_str();
  auto* ml_iters = mlc->add_option("--max-iters", ml.common.max_iters,
                                   "gradient steps per lambda")
                       ->capture_default_str();
  mlc->add_option("--repeats", ml.common.repeats, "split realizations")
      ->capture_default_str();
  mlc->add_option("--seed", ml.common.seed, "master seed")->capture_default_str();
  mlc->add_option("--threads", ml.common.threads, "worker threads")
      ->capture_default_str();
  mlc->add_flag("--reproducible", ml.common.reproducible, "zero wall-clock columns");
  mlc->add_option("--out", ml.common.out, "output directory");
  mlc->callback([&] {
    ml.folds_given = ml_folds->count() > 0;
    ml.max_iters_given = ml_iters->count() > 0;
    status = cmd_movielens(ml);
  });

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "tabulate the error bounds over a grid");
  b->add_option("--m", bound.m, "rows (default n)");
  b->add_option("--n", bound.n, "columns");
  b->add_option("--n-grid", bound.n_grid, "column counts")->delimiter(',');
  b->add_option("--p-grid", bound.p_grid, "sampling densities")->delimiter(',');
  b->add_option("--r", bound.r, "rank")->capture_default_str();
  b->add_option("--link", bound.link, "link function")
      ->check(CLI::IsMember({"logit", "probit"}))
      ->capture_default_str();
  b->add_option("--sigma", bound.sigma, "link noise scale")->capture_default_str();
  b->add_option("--alpha", bound.alpha, "entrywise bound")->capture_default_str();
  b->add_option("--c", bound.c, "spectral-gap constant C")->capture_default_str();
  b->add_option("--sampling", bound.sampling, "mask generator")
      ->check(CLI::IsMember({"bernoulli", "block", "regular"}))
      ->capture_default_str();
  b->add_option("--seed", bound.seed, "seed")->capture_default_str();
  b->add_option("--out", bound.out, "output CSV (default stdout)");
  b->callback([&] { status = cmd_bound(bound); });

  MaskArgs spectral;
  auto* sp = app.add_subcommand("spectral", "spectral statistics of a mask");
  sp->add_option("--mask", spectral.mask_file, "mask file (else generate)");
  add_mask_options(sp, spectral);
  sp->callback([&] { status = cmd_spectral(spectral); });

  MaskArgs gen_mask;
  auto* gm = app.add_subcommand("gen-mask", "write a random mask");
  add_mask_options(gm, gen_mask);
  gm->add_option("--out", gen_mask.out, "mask file (default stdout)");
  gm->callback([&] { status = cmd_gen_mask(gen_mask); });

  GenObsArgs gen_obs;
  auto* go = app.add_subcommand("gen-obs", "draw binary observations on a mask");
  go->add_option("--mask", gen_obs.mask_file, "mask file")->required();
  go->add_option("--r", gen_obs.r, "rank")->capture_default_str();
  go->add_option("--link", gen_obs.link, "link function")
      ->check(CLI::IsMember({"logit", "probit"}))
      ->capture_default_str();
  go->add_option("--sigma", gen_obs.sigma, "link noise scale")->capture_default_str();
  go->add_option("--alpha", gen_obs.alpha, "entrywise bound")->capture_default_str();
  go->add_option("--seed", gen_obs.seed, "seed")->capture_default_str();
  go->add_option("--out", gen_obs.out, "observation file (default stdout)");
  go->add_option("--truth-out", gen_obs.truth_out, "write the ground truth matrix");
  go->callback([&] { status = cmd_gen_obs(gen_obs); });

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit one observation file");
  f->add_option("--obs", fit.obs_file, "observation file")->required();
  f->add_option("--k", fit.k, "factor width (default r + 1)");
  f->add_option("--truth", fit.truth_file, "ground truth matrix for relative MSE");
  f->add_option("--test", fit.test_file, "held-out observations for accuracy");
  add_fit_options(f, fit.common);
  f->add_option("--out", fit.common.out, "fit report file (default stdout)");
  f->callback([&] { status = cmd_fit(fit); });

  GenRatingsArgs gen_ratings;
  auto* gr = app.add_subcommand("gen-ratings",
                                "write synthetic ratings in MovieLens u.data layout");
  gr->add_option("--users", gen_ratings.users, "users")->capture_default_str();
  gr->add_option("--items", gen_ratings.items, "items")->capture_default_str();
  gr->add_option("--count", gen_ratings.count, "ratings")->capture_default_str();
  gr->add_option("--rank", gen_ratings.rank, "latent rank")->capture_default_str();
  gr->add_option("--seed", gen_ratings.seed, "seed")->capture_default_str();
  gr->add_option("--out", gen_ratings.out, "output file (default stdout)");
  gr->callback([&] { status = cmd_gen_ratings(gen_ratings); });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const onebit::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const onebit::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const onebit::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::domain_error& e) {
    // InfeasiblePoint, BoundUndefined
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const onebit::CvDegenerate& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return status;
}
