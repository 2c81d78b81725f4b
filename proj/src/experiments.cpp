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

#include "onebit/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "onebit/error.hpp"
#include "onebit/metrics.hpp"
#include "onebit/movielens.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"
#include "onebit/sampling.hpp"

#ifndef ONEBIT_VERSION
#define ONEBIT_VERSION "unknown"
#endif

namespace onebit {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string run_id(int point, int repeat) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pt%03d-rep%03d", point, repeat);
  return buf;
}

Mask draw_mask(const SynthPoint& point, std::uint64_t seed) {
  switch (point.sampling) {
    case SamplingKind::kBernoulli:
      return gen_bernoulli(point.n, point.n, point.p, seed);
    case SamplingKind::kBlock:
      return gen_block_model(point.n, point.n, point.p, point.q, seed);
    case SamplingKind::kRegular: {
      const int d = std::clamp(static_cast<int>(std::lround(point.p * point.n)), 1,
                               point.n);
      return gen_regular(point.n, point.n, d, seed);
    }
  }
  throw InvalidArgument("unknown sampling kind");
}

// Empty string when the point can be run, otherwise the reason it cannot.
std::string infeasibility(const SynthPoint& point) {
  if (point.n <= 0) return "n must be positive";
  if (point.r <= 0 || point.r > point.n) return "rank must lie in [1, n]";
  if (!(point.p > 0.0 && point.p <= 1.0)) return "p must lie in (0, 1]";
  if (point.sampling == SamplingKind::kBlock) {
    if (point.n % 2 != 0) return "block model needs even n";
    if (!(point.q >= 0.0 && point.q <= 1.0)) return "q must lie in [0, 1]";
  }
  return {};
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator); zero for fewer than two.
double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string optional_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

}  // namespace

std::string to_string(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::kBernoulli: return "bernoulli";
    case SamplingKind::kBlock: return "block";
    case SamplingKind::kRegular: return "regular";
  }
  return "unknown";
}

SamplingKind parse_sampling_kind(const std::string& name) {
  if (name == "bernoulli") return SamplingKind::kBernoulli;
  if (name == "block") return SamplingKind::kBlock;
  if (name == "regular") return SamplingKind::kRegular;
  throw InvalidArgument("unknown sampling kind: " + name);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // Shortest decimal that parses back to the same double.
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

RunRow run_synth_once(const SynthPoint& point, int point_index, int repeat,
                      const ExperimentSettings& settings) {
  if (const std::string why = infeasibility(point); !why.empty())
    throw InvalidArgument(why);
  const auto start = std::chrono::steady_clock::now();
  const auto tag = static_cast<std::uint64_t>(repeat);
  const GroundTruth truth = gen_ground_truth(
      point.n, point.n, point.r, settings.alpha, substream(settings.seed, "truth", tag));
  const Mask mask = draw_mask(point, substream(settings.seed, "mask", tag));
  const BinaryObservations obs = sample_observations(
      truth, mask, settings.link, substream(settings.seed, "obs", tag));

  SolverConfig cfg = settings.solver;
  cfg.rank_r = point.r;
  cfg.alpha = settings.alpha;
  cfg.seed = substream(settings.seed, "solver", tag);
  const FitReport report = fit(obs, settings.link, cfg);

  RunRow row;
  row.run_id = run_id(point_index, repeat);
  row.m = point.n;
  row.n = point.n;
  row.r = point.r;
  row.p = point.p;
  row.sigma = settings.link.sigma;
  row.link = settings.link.kind;
  row.lambda_selected = report.lambda_selected;
  row.relative_mse = relative_mse(report.m_hat, truth.m_star);

  // Sign agreement with the ground truth over every entry.
  std::vector<Entry> all;
  std::vector<std::int8_t> signs;
  all.reserve(static_cast<std::size_t>(point.n) * point.n);
  for (int i = 0; i < point.n; ++i) {
    for (int j = 0; j < point.n; ++j) {
      all.push_back({i, j});
      signs.push_back(truth.m_star(i, j) >= 0.0 ? 1 : -1);
    }
  }
  row.sign_accuracy = sign_accuracy(
      report.m_hat, BinaryObservations(Mask(point.n, point.n, std::move(all)),
                                       std::move(signs)));
  const SpectralReport spec = spectral_report(mask);
  row.spectral_gap = spec.sigma2 > 0.0 ? spec.sigma1 / spec.sigma2
                                       : std::numeric_limits<double>::infinity();
  row.certificate = report.certificate;
  row.point = point_index;
  row.repeat = repeat;
  row.wall_time_s = settings.reproducible ? 0.0 : seconds_since(start);
  return row;
}

std::vector<RunRow> run_synth(const std::vector<SynthPoint>& points,
                              const ExperimentSettings& settings,
                              std::vector<std::string>* skipped) {
  if (settings.repeats <= 0) throw InvalidArgument("repeats must be positive");
  std::vector<std::pair<int, int>> tasks;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (const std::string why = infeasibility(points[i]); !why.empty()) {
      if (skipped) {
        skipped->push_back("point " + std::to_string(i) + " (n=" +
                           std::to_string(points[i].n) + ", r=" +
                           std::to_string(points[i].r) + ", p=" +
                           format_number(points[i].p) + "): " + why);
      }
      continue;
    }
    for (int k = 0; k < settings.repeats; ++k)
      tasks.emplace_back(static_cast<int>(i), k);
  }
  std::vector<RunRow> rows(tasks.size());
  parallel_for(tasks.size(), settings.threads, [&](std::size_t t) {
    const auto [i, k] = tasks[t];
    rows[t] = run_synth_once(points[i], i, k, settings);
  });
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<SynthPoint>& points,
                                    const std::vector<RunRow>& rows) {
  std::map<int, std::vector<const RunRow*>> by_point;
  for (const RunRow& row : rows) by_point[row.point].push_back(&row);
  std::vector<AggregateRow> out;
  for (const auto& [index, group] : by_point) {
    std::vector<double> mse, acc, gap;
    for (const RunRow* row : group) {
      if (row->relative_mse) mse.push_back(*row->relative_mse);
      acc.push_back(row->sign_accuracy);
      gap.push_back(row->spectral_gap);
    }
    AggregateRow a;
    a.point = index;
    a.params = points.at(static_cast<std::size_t>(index));
    a.repeats = static_cast<int>(group.size());
    a.mean_relative_mse = mean_of(mse);
    a.stderr_relative_mse =
        mse.empty() ? 0.0 : std_of(mse) / std::sqrt(static_cast<double>(mse.size()));
    a.mean_sign_accuracy = mean_of(acc);
    a.mean_spectral_gap = mean_of(gap);
    a.inv_n = 1.0 / a.params.n;
    out.push_back(a);
  }
  if (!out.empty()) {
    const double c = out.front().mean_relative_mse * out.front().params.n;
    for (AggregateRow& a : out) a.anchored_ref = c / a.params.n;
  }
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("slope needs at least two paired points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidArgument("log-log slope needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean_of(lx), my = mean_of(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope needs distinct x values");
  return sxy / sxx;
}

std::vector<RunRow> run_movielens(const BinaryObservations& all,
                                  const MovielensSettings& settings) {
  if (all.empty()) throw InvalidArgument("no observations to evaluate");
  if (settings.realizations <= 0)
    throw InvalidArgument("realizations must be positive");
  if (settings.sigmas.empty() || settings.ranks.empty())
    throw InvalidArgument("grid search needs at least one sigma and one rank");

  struct Task {
    int fraction;
    int realization;
    int sigma;
    int rank;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < settings.train_fractions.size(); ++f)
    for (int k = 0; k < settings.realizations; ++k)
      for (std::size_t s = 0; s < settings.sigmas.size(); ++s)
        for (std::size_t r = 0; r < settings.ranks.size(); ++r)
          tasks.push_back({static_cast<int>(f), k, static_cast<int>(s),
                           static_cast<int>(r)});

  // Splits are shared by every grid point of one realization.
  std::map<std::pair<int, int>, std::pair<BinaryObservations, BinaryObservations>>
      splits;
  for (std::size_t f = 0; f < settings.train_fractions.size(); ++f) {
    for (int k = 0; k < settings.realizations; ++k) {
      splits.emplace(std::make_pair(static_cast<int>(f), k),
                     split(all, settings.train_fractions[f],
                           substream(settings.seed, "split", f * 100000 + k)));
    }
  }

  std::vector<RunRow> rows(tasks.size());
  parallel_for(tasks.size(), settings.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    const auto start = std::chrono::steady_clock::now();
    const auto& [train, test] = splits.at({task.fraction, task.realization});
    const LinkModel link{LinkKind::kLogit, settings.sigmas[task.sigma]};
    SolverConfig cfg = settings.solver;
    cfg.rank_r = std::min({settings.ranks[task.rank], all.rows(), all.cols()});
    cfg.alpha = settings.alpha;
    cfg.seed = substream(settings.seed, "solver", task.realization);
    const FitReport report = fit(train, link, cfg);

    RunRow row;
    char id[64];
    std::snprintf(id, sizeof id, "f%02d-rep%03d-s%02d-r%02d", task.fraction,
                  task.realization, task.sigma, task.rank);
    row.run_id = id;
    row.m = all.rows();
    row.n = all.cols();
    row.r = cfg.rank_r;
    row.p = settings.train_fractions[task.fraction];
    row.sigma = link.sigma;
    row.link = link.kind;
    row.lambda_selected = report.lambda_selected;
    row.sign_accuracy = sign_accuracy(report.m_hat, test);
    row.point = task.fraction;
    row.repeat = task.realization;
    row.certificate = report.certificate;
    row.wall_time_s = settings.reproducible ? 0.0 : seconds_since(start);
    rows[t] = std::move(row);
  });
  return rows;
}

std::vector<MovielensSummary> summarize_movielens(
    const std::vector<RunRow>& rows, const MovielensSettings& settings) {
  // (fraction, sigma, rank) -> accuracies over realizations.
  std::map<std::tuple<int, double, int>, std::vector<double>> cells;
  for (const RunRow& row : rows)
    cells[{row.point, row.sigma, row.r}].push_back(row.sign_accuracy);
  std::vector<MovielensSummary> out;
  for (std::size_t f = 0; f < settings.train_fractions.size(); ++f) {
    std::optional<MovielensSummary> best;
    for (const auto& [key, acc] : cells) {
      if (std::get<0>(key) != static_cast<int>(f)) continue;
      const double mu = mean_of(acc);
      // Ties keep the first cell in (sigma, rank) order.
      if (!best || mu > best->mean_accuracy) {
        best = MovielensSummary{settings.train_fractions[f], std::get<1>(key),
                                std::get<2>(key), mu, std_of(acc),
                                static_cast<int>(acc.size())};
      }
    }
    if (best) out.push_back(*best);
  }
  return out;
}

std::vector<BoundRow> run_bounds(const BoundSettings& settings) {
  validate(settings.link);
  const LinkConstants constants = link_constants(settings.link, settings.alpha);
  std::vector<BoundRow> out;
  for (int n : settings.n_grid) {
    const int m = settings.m > 0 ? settings.m : n;
    for (double p : settings.p_grid) {
      BoundRow row;
      row.m = m;
      row.n = n;
      row.r = settings.r;
      row.alpha = settings.alpha;
      row.link = settings.link;
      row.constants = constants;
      const std::uint64_t seed = substream(
          settings.seed, "bound-mask", static_cast<std::uint64_t>(out.size()));
      SynthPoint point{n, settings.r, p, 0.7 - p, settings.sampling};
      Mask mask;
      if (settings.sampling == SamplingKind::kRegular) {
        const int d = std::clamp(static_cast<int>(std::lround(p * n)), 1, n);
        mask = gen_regular(m, n, d, seed);
      } else if (settings.sampling == SamplingKind::kBlock) {
        mask = gen_block_model(m, n, p, point.q, seed);
      } else {
        mask = gen_bernoulli(m, n, p, seed);
      }
      const SpectralReport spec = spectral_report(mask);
      row.sigma1 = spec.sigma1;
      row.sigma2 = spec.sigma2;
      row.omega_size = static_cast<long long>(mask.size());
      row.p = static_cast<double>(row.omega_size) /
              (static_cast<double>(m) * static_cast<double>(n));
      BoundInputs in{m,         n,          settings.r,     settings.alpha,
                     constants, spec.sigma1, spec.sigma2, row.omega_size,
                     settings.c_spectral};
      try {
        row.theorem = theorem_bound(in);
        row.corollary = corollary_rate(
            in, row.p, static_cast<double>(std::max(m, n)) / std::min(m, n));
        row.rates = comparison_rates(std::min(m, n), settings.r, row.p);
      } catch (const BoundUndefined& e) {
        row.status = "error:gamma_alpha<=0";
      }
      out.push_back(row);
    }
  }
  return out;
}

std::vector<std::string> spectral_verdicts(const SpectralReport& report) {
  std::vector<std::string> lines;
  char buf[160];
  if (report.a1_residual <= 1e-6) {
    lines.emplace_back("(A1): PASS (residual \u2264 1e-6)");
  } else if (report.a1_residual <= kA1WarnResidual) {
    std::snprintf(buf, sizeof buf, "(A1): APPROX (residual %.3g \u2264 %.3g)",
                  report.a1_residual, kA1WarnResidual);
    lines.emplace_back(buf);
  } else {
    std::snprintf(buf, sizeof buf,
                  "(A1): WARN (residual %.3g > %.3g; top singular vectors are "
                  "not close to all-ones)",
                  report.a1_residual, kA1WarnResidual);
    lines.emplace_back(buf);
  }
  if (report.a2_ratio <= kA2WarnRatio) {
    std::snprintf(buf, sizeof buf,
                  "(A2): PASS (sigma2/sqrt(d) = %.4g \u2264 %.3g)", report.a2_ratio,
                  kA2WarnRatio);
  } else {
    std::snprintf(buf, sizeof buf,
                  "(A2): WARN (sigma2/sqrt(d) = %.4g > %.3g; small spectral gap)",
                  report.a2_ratio, kA2WarnRatio);
  }
  lines.emplace_back(buf);
  return lines;
}

void write_spectral_report(std::ostream& out, const SpectralReport& report) {
  out << "sigma1=" << format_number(report.sigma1) << '\n'
      << "sigma2=" << format_number(report.sigma2) << '\n'
      << "d_mean=" << format_number(report.d_mean) << '\n'
      << "a1_residual=" << format_number(report.a1_residual) << '\n'
      << "a2_ratio=" << format_number(report.a2_ratio) << '\n';
  for (const std::string& line : spectral_verdicts(report)) out << line << '\n';
}

void write_header(std::ostream& out, const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& params) {
  out << "# onebit " << ONEBIT_VERSION << '\n';
  out << "# command=" << command << '\n';
  for (const auto& [key, value] : params) out << "# " << key << '=' << value << '\n';
}

void write_run_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  std::vector<const RunRow*> sorted;
  for (const RunRow& row : rows) sorted.push_back(&row);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRow* a, const RunRow* b) { return a->run_id < b->run_id; });
  out << kRunCsvColumns << '\n';
  for (const RunRow* row : sorted) {
    out << row->run_id << ',' << row->m << ',' << row->n << ',' << row->r << ','
        << format_number(row->p) << ',' << format_number(row->sigma) << ','
        << to_string(row->link) << ',' << format_number(row->lambda_selected) << ','
        << optional_number(row->relative_mse) << ','
        << format_number(row->sign_accuracy) << ','
        << format_number(row->wall_time_s) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "point,n,r,p,q,sampling,repeats,mean_relative_mse,stderr_relative_mse,"
         "mean_sign_accuracy,mean_spectral_gap,inv_n,anchored_inv_n\n";
  for (const AggregateRow& a : rows) {
    out << a.point << ',' << a.params.n << ',' << a.params.r << ','
        << format_number(a.params.p) << ',' << format_number(a.params.q) << ','
        << to_string(a.params.sampling) << ',' << a.repeats << ','
        << format_number(a.mean_relative_mse) << ','
        << format_number(a.stderr_relative_mse) << ','
        << format_number(a.mean_sign_accuracy) << ','
        << format_number(a.mean_spectral_gap) << ',' << format_number(a.inv_n)
        << ',' << format_number(a.anchored_ref) << '\n';
  }
}

void write_movielens_summary_csv(std::ostream& out,
                                 const std::vector<MovielensSummary>& rows) {
  out << "train_fraction,sigma,r,realizations,mean_accuracy,std_accuracy\n";
  for (const MovielensSummary& s : rows) {
    out << format_number(s.train_fraction) << ',' << format_number(s.sigma) << ','
        << s.r << ',' << s.realizations << ',' << format_number(s.mean_accuracy)
        << ',' << format_number(s.std_accuracy) << '\n';
  }
}

void write_bound_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "m,n,r,p,alpha,link,sigma,sigma1,sigma2,omega_size,gamma_alpha,l_alpha,"
         "c1_alpha,c2_alpha,spectral_form,omega_form,corollary_rate,prior_rate,"
         "ours_rate,status\n";
  for (const BoundRow& b : rows) {
    out << b.m << ',' << b.n << ',' << b.r << ',' << format_number(b.p) << ','
        << format_number(b.alpha) << ',' << to_string(b.link.kind) << ','
        << format_number(b.link.sigma) << ',' << format_number(b.sigma1) << ','
        << format_number(b.sigma2) << ',' << b.omega_size << ','
        << format_number(b.constants.gamma_alpha) << ','
        << format_number(b.constants.l_alpha) << ',';
    if (b.theorem) {
      out << format_number(b.theorem->c1_alpha) << ','
          << format_number(b.theorem->c2_alpha) << ','
          << format_number(b.theorem->spectral_form) << ','
          << format_number(b.theorem->omega_form) << ','
          << format_number(b.corollary) << ',' << format_number(b.rates.prior_rate)
          << ',' << format_number(b.rates.ours_rate) << ',';
    } else {
      out << ",,,,,,,";
    }
    out << b.status << '\n';
  }
}

std::string gnuplot_script(const std::string& mode, const std::string& data_file) {
  std::ostringstream s;
  s << "# gnuplot script; render with: gnuplot -p <this file>\n"
    << "set datafile separator ','\n"
    << "set datafile commentschars '#'\n"
    << "set key top right\n"
    << "set ylabel 'relative MSE'\n";
  // Aggregate columns: 2=n 4=p 8=mean 9=stderr 13=anchored 1/n.
  if (mode == "fig3") {
    s << "set logscale xy\n"
      << "set xlabel 'n'\n"
      << "plot '" << data_file << "' using 2:8:9 with yerrorlines"
      << " title 'relative MSE', \\\n"
      << "     '' using 2:13 with lines dashtype 2 title '1/n'\n";
  } else {
    s << "set xlabel 'p'\n"
      << "plot '" << data_file << "' using 4:8:9 with yerrorlines"
      << " title 'relative MSE'\n";
  }
  return s.str();
}

}  // namespace onebit
