// Command-line front end: exact counting, limit-shape constants and curves,
// ensemble sampling, random-environment gap generation, and the experiment
// driver with CSV/JSON reports.
//
//   mdp count --gaps const:1 --n 30
//   mdp constants --q 2
//   mdp shape --q 1 --T tq --scaling unit-area --points 200
//   mdp sample --gaps periodic:1,0 --ensemble uniform-n --n 24 --count 5 --seed 7
//   mdp rwre --dist two-point:p1=0.75,w=1 --a const:2 --b 1 --length 1000 --seed 3
//   mdp experiment limit-shape --gaps const:1 --n 10000 --reps 20 --seed 1 --out report.csv
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdp/counting.hpp"
#include "mdp/errors.hpp"
#include "mdp/harness.hpp"
#include "mdp/rwre.hpp"
#include "mdp/sampler.hpp"
#include "mdp/shape.hpp"
#include "mdp/specparse.hpp"

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report(const mdp::ExperimentReport& report, const std::string& out,
                  const std::string& format) {
  std::ostringstream body;
  if (format == "json") {
    body << report.to_json_string() << '\n';
  } else {
    report.write_csv(body);
  }
  if (out.empty() || out == "-") {
    std::cout << body.str();
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f << body.str();
  }
  std::cerr << "# " << report.experiment << ": " << report.rows.size() << " rows, "
            << fmt_double(report.wall_seconds) << " s\n";
  for (const auto& note : report.notes) std::cerr << "# " << note << '\n';
}

int cmd_count(const std::string& gaps, std::int64_t n, std::int64_t k, bool have_k,
              const std::string& format) {
  auto parsed = mdp::parse_gap_spec(gaps);
  mpz_class value = have_k ? mdp::count_mdp(*parsed.provider, n, k)
                           : mdp::count_mdp_total(*parsed.provider, n);
  if (format == "json") {
    json j;
    j["gaps"] = parsed.text;
    j["n"] = n;
    if (have_k) j["k"] = k;
    j["count"] = value.get_str();  // decimal string: counts overflow doubles fast
    std::cout << j.dump() << '\n';
  } else {
    std::cout << value.get_str() << '\n';
  }
  return 0;
}

int cmd_constants(double q) {
  auto sc = mdp::ShapeConstants::for_gap(q);
  json j;
  j["q"] = q;
  if (std::isinf(sc.T)) j["T_q"] = "inf";
  else j["T_q"] = sc.T;
  j["theta_q"] = sc.theta;
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_shape(double q, const std::string& T_text, const std::string& scaling, int points) {
  double T;
  if (T_text == "tq" || T_text.empty()) {
    T = q > 0 ? mdp::solve_Tq(q) : std::numeric_limits<double>::infinity();
  } else {
    T = std::stod(T_text);
  }
  auto pts = mdp::sample_curve(q, T,
                               scaling == "intrinsic" ? mdp::CurveScaling::Intrinsic
                                                      : mdp::CurveScaling::UnitArea,
                               points);
  std::cout << "x,y\n";
  for (auto [x, y] : pts) std::cout << fmt_double(x) << ',' << fmt_double(y) << '\n';
  return 0;
}

int cmd_sample(const std::string& gaps, const std::string& ensemble, std::int64_t n,
               std::int64_t k, double z, std::int64_t count, std::uint64_t seed,
               const std::string& format) {
  auto parsed = mdp::parse_gap_spec(gaps);
  const auto& g = *parsed.provider;

  // One stream per record, so any record can be regenerated in isolation.
  auto emit = [&](std::int64_t rep, const mdp::Partition& p) {
    std::string stream = "s" + std::to_string(seed) + "/" + std::to_string(rep);
    if (format == "csv") {
      std::cout << rep << ',' << p.weight() << ',' << p.length() << ",\"" << p.to_text()
                << "\"," << stream << '\n';
    } else {
      json j;
      j["parts"] = json::parse(p.to_json());
      j["N"] = p.weight();
      j["K"] = p.length();
      j["seed_stream"] = stream;
      std::cout << j.dump() << '\n';
    }
  };
  if (format == "csv") std::cout << "rep,N,K,parts,seed_stream\n";

  if (ensemble == "uniform-n") {
    auto sampler = mdp::UniformFiberSampler::whole_fiber(g, n);
    for (std::int64_t rep = 0; rep < count; ++rep) {
      mdp::Rng rng(seed, static_cast<std::uint64_t>(rep));
      emit(rep, sampler.draw(rng));
    }
  } else if (ensemble == "uniform-nk") {
    auto sampler = mdp::UniformFiberSampler::fixed_length(g, n, k);
    for (std::int64_t rep = 0; rep < count; ++rep) {
      mdp::Rng rng(seed, static_cast<std::uint64_t>(rep));
      emit(rep, sampler.draw(rng));
    }
  } else if (ensemble == "grand") {
    auto weights = mdp::grand_weights(g, z);
    for (std::int64_t rep = 0; rep < count; ++rep) {
      mdp::Rng rng(seed, static_cast<std::uint64_t>(rep));
      emit(rep, mdp::sample_grand(g, weights, rng));
    }
  } else if (ensemble == "canonical") {
    mdp::CanonicalKSampler sampler(g, z, k);
    for (std::int64_t rep = 0; rep < count; ++rep) {
      mdp::Rng rng(seed, static_cast<std::uint64_t>(rep));
      emit(rep, sampler.draw(rng));
    }
  } else {
    throw mdp::DomainError("unknown ensemble: " + ensemble);
  }
  return 0;
}

int cmd_rwre(const std::string& dist, const std::string& a_text, std::int64_t b,
             std::int64_t length, std::uint64_t seed, const std::string& out) {
  // Reuse the spec grammar for the full description.
  std::ostringstream spec;
  spec << "rwre:dist=" << dist << ";a=" << a_text << ";b=" << b << ";len=" << length
       << ";seed=" << seed;
  auto parsed = mdp::parse_gap_spec(spec.str());
  const auto& meta = *parsed.rwre;

  std::ostringstream gap_file;
  gap_file << "list:";
  for (std::size_t i = 0; i < meta.gaps.size(); ++i) {
    if (i) gap_file << ',';
    gap_file << meta.gaps[i];
  }
  const auto& tail_spec = std::get<mdp::ExplicitGaps>(meta.provider->spec().kind);
  gap_file << ";tail=" << tail_spec.tail;

  json j;
  j["v"] = meta.v;
  if (meta.regime.kappa) j["kappa"] = *meta.regime.kappa;
  else j["kappa"] = nullptr;
  j["regime"] = mdp::regime_name(meta.regime.regime);
  j["q_predicted"] = meta.q_predicted;
  j["eta"] = meta.regime.eta;
  j["error_bound"] = meta.regime.error_bound;

  if (out.empty() || out == "-") {
    std::cout << gap_file.str() << '\n';
    std::cout << j.dump() << '\n';
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f << gap_file.str() << '\n';
    std::cout << j.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal-difference partition ensembles: counting, sampling, limit shapes"};
  app.require_subcommand(1);

  // count
  std::string gaps, format = "plain";
  std::int64_t n = 0, k = 0;
  auto* count = app.add_subcommand("count", "exact p_q(n) or p_q(n,k)");
  count->add_option("--gaps", gaps, "gap sequence spec")->required();
  count->add_option("--n", n, "weight")->required();
  auto* kopt = count->add_option("--k", k, "number of parts");
  count->add_option("--format", format, "plain|json");

  // constants
  double q = 1.0;
  auto* constants = app.add_subcommand("constants", "T_q and theta_q");
  constants->add_option("--q", q, "limiting gap")->required();

  // shape
  double shape_q = 1.0;
  std::string shape_T = "tq", scaling = "unit-area";
  int points = 200;
  auto* shape = app.add_subcommand("shape", "limit-shape curve points (CSV)");
  shape->add_option("--q", shape_q, "limiting gap")->required();
  shape->add_option("--T", shape_T, "horizon or 'tq'");
  shape->add_option("--scaling", scaling, "intrinsic|unit-area");
  shape->add_option("--points", points, "number of points");

  // sample
  std::string ensemble = "uniform-n", sample_format = "jsonl";
  std::int64_t sample_count = 1;
  std::uint64_t seed = 0;
  double z = 0.5;
  auto* sample = app.add_subcommand("sample", "draw partitions from an ensemble");
  sample->add_option("--gaps", gaps, "gap sequence spec")->required();
  sample->add_option("--ensemble", ensemble, "uniform-n|uniform-nk|grand|canonical")->required();
  sample->add_option("--n", n, "weight (uniform ensembles)");
  sample->add_option("--k", k, "length (uniform-nk, canonical)");
  sample->add_option("--z", z, "fugacity parameter (grand, canonical)");
  sample->add_option("--count", sample_count, "number of draws");
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--format", sample_format, "jsonl|csv");

  // rwre
  std::string dist, a_text = "const:2", rwre_out;
  std::int64_t b = 1, length = 1000;
  auto* rwre = app.add_subcommand("rwre", "generate a random-environment gap sequence");
  rwre->add_option("--dist", dist, "two-point:p1=..[,p2=..],w=.. | uniform:lo=..,hi=..")
      ->required();
  rwre->add_option("--a", a_text, "leading sequence: const:<int> or list:..;tail=..");
  rwre->add_option("--b", b, "walk coupling (>= 1)");
  rwre->add_option("--length", length, "number of gaps to materialize");
  rwre->add_option("--seed", seed, "master seed");
  rwre->add_option("--out", rwre_out, "gap-file output path (default stdout)");

  // experiment
  std::string exp_kind, out, exp_format = "csv";
  std::vector<std::int64_t> n_grid;
  std::int64_t reps = 20;
  double tau = 0.5, exp_z = 0.0, exp_q = -1.0;
  std::int64_t equi_samples = 20000;
  double max_median_dev = -1.0;
  auto* experiment = app.add_subcommand("experiment", "run an experiment and write a report");
  experiment->add_option("kind", exp_kind,
                         "limit-shape|parts-lln|ensemble-equivalence|rwre-pipeline")
      ->required();
  experiment->add_option("--gaps", gaps, "gap sequence spec");
  experiment->add_option("--n", n_grid, "weight grid");
  experiment->add_option("--reps", reps, "replicates per cell");
  experiment->add_option("--seed", seed, "master seed");
  experiment->add_option("--out", out, "output path (default stdout)");
  experiment->add_option("--format", exp_format, "csv|json");
  experiment->add_option("--ensemble", ensemble, "limit-shape ensemble");
  experiment->add_option("--tau", tau, "fixed-length ratio k ~ tau sqrt(n)");
  experiment->add_option("--z", exp_z, "fugacity override");
  experiment->add_option("--q", exp_q, "nominal gap (default: Cesaro estimate)");
  experiment->add_option("--samples", equi_samples, "equivalence-test sample size");
  experiment->add_option("--dist", dist, "rwre-pipeline environment");
  experiment->add_option("--a", a_text, "rwre-pipeline leading sequence");
  experiment->add_option("--b", b, "rwre-pipeline walk coupling");
  experiment->add_option("--length", length, "rwre-pipeline gap count");
  experiment->add_option("--max-median-dev", max_median_dev,
                         "exit 2 if the median sup-deviation exceeds this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (count->parsed()) return cmd_count(gaps, n, k, kopt->count() > 0, format);
    if (constants->parsed()) return cmd_constants(q);
    if (shape->parsed()) return cmd_shape(shape_q, shape_T, scaling, points);
    if (sample->parsed())
      return cmd_sample(gaps, ensemble, n, k, z, sample_count, seed, sample_format);
    if (rwre->parsed()) return cmd_rwre(dist, a_text, b, length, seed, rwre_out);

    // experiment
    if (exp_kind == "rwre-pipeline") {
      if (dist.empty()) throw mdp::DomainError("--dist is required for rwre-pipeline");
      mdp::RwreGapParams params{mdp::parse_env_spec(dist, seed),
                                mdp::parse_leading_seq_spec(a_text), b};
      std::int64_t shape_n = n_grid.empty() ? 0 : n_grid[0];
      mdp::LimitShapeOptions opts;
      opts.tau = tau;
      auto report = mdp::run_rwre_pipeline(params, length, shape_n, reps, seed, opts);
      write_report(report, out, exp_format);
      if (max_median_dev > 0.0) {
        for (double m : report.values("sup_dev_median"))
          if (m > max_median_dev) return 2;
      }
      return 0;
    }

    if (gaps.empty()) throw mdp::DomainError("--gaps is required for this experiment");
    auto parsed = mdp::parse_gap_spec(gaps);
    const auto& g = *parsed.provider;
    double q_nominal = exp_q;
    if (q_nominal < 0.0) {
      auto [q_hat, beta_hat] = g.estimate_regularity(10000);
      (void)beta_hat;
      q_nominal = q_hat;
    }
    mdp::LimitShapeOptions options;
    options.tau = tau;
    options.z = exp_z;

    mdp::ExperimentReport report;
    if (exp_kind == "limit-shape") {
      if (n_grid.empty()) throw mdp::DomainError("--n grid is required");
      mdp::EnsembleKind kind = mdp::EnsembleKind::UniformN;
      if (ensemble == "uniform-nk") kind = mdp::EnsembleKind::UniformNK;
      else if (ensemble == "grand") kind = mdp::EnsembleKind::GrandZ;
      else if (ensemble == "canonical") kind = mdp::EnsembleKind::CanonicalZK;
      report = mdp::run_limit_shape_experiment(g, q_nominal, n_grid, reps, kind, seed, options);
    } else if (exp_kind == "parts-lln") {
      if (n_grid.empty()) throw mdp::DomainError("--n grid is required");
      report = mdp::run_parts_experiment(g, q_nominal, n_grid, reps, seed, 0.0, options);
    } else if (exp_kind == "ensemble-equivalence") {
      if (n_grid.size() != 1) throw mdp::DomainError("pass exactly one --n value");
      double zz = exp_z > 0.0 ? exp_z : 0.8;
      report = mdp::run_ensemble_equivalence(g, n_grid[0], zz, equi_samples, seed);
    } else {
      throw mdp::DomainError("unknown experiment kind: " + exp_kind);
    }
    write_report(report, out, exp_format);

    if (max_median_dev > 0.0) {
      auto medians = report.values("sup_dev_median");
      for (double m : medians)
        if (m > max_median_dev) return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
