#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "CLI11.hpp"

#include "cgp/diagnostics.hpp"
#include "cgp/io.hpp"
#include "cgp/partition.hpp"
#include "cgp/synthetic.hpp"

namespace cgp::cli {

namespace {

using nlohmann::json;

void write_json(const std::string& path, const json& j) { atomic_write(path, j.dump(1) + "\n"); }

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path + ": not valid JSON (" + e.what() + ")");
  }
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw ValidationError("config key '" + key + "': not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw ValidationError("config key '" + key + "': not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("config key '" + key + "': expected true or false");
}

std::vector<double> to_list(const std::string& key, std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(key, tok));
  if (out.empty()) throw ValidationError("config key '" + key + "' is empty");
  return out;
}

Vector column_means(const Matrix& x) { return x.colwise().mean().transpose(); }

Matrix sample_covariance(const Matrix& x) {
  const Matrix c = x.rowwise() - x.colwise().mean();
  return (c.transpose() * c) / std::max<double>(1.0, static_cast<double>(x.rows()) - 1.0);
}

Vector parse_mu(const std::string& key, const std::string& v, const Matrix& data) {
  const auto d = data.cols();
  if (v == "zero") return Vector::Zero(d);
  if (v == "sample_mean") return column_means(data);
  const auto xs = to_list(key, v);
  if (xs.size() == 1) return Vector::Constant(d, xs[0]);
  if (static_cast<Eigen::Index>(xs.size()) != d) throw ValidationError("config key '" + key + "': expected 1 or d values");
  return Eigen::Map<const Vector>(xs.data(), d);
}

Matrix parse_scale(const std::string& key, const std::string& v, const Matrix& data) {
  const auto d = data.cols();
  if (v == "sample_diag") return sample_covariance(data).diagonal().asDiagonal();
  if (v == "sample_cov") return sample_covariance(data);
  const auto xs = to_list(key, v);
  if (xs.size() == 1) return xs[0] * Matrix::Identity(d, d);
  if (static_cast<Eigen::Index>(xs.size()) == d) return Eigen::Map<const Vector>(xs.data(), d).asDiagonal();
  if (static_cast<Eigen::Index>(xs.size()) == d * d) return Eigen::Map<const Matrix>(xs.data(), d, d);
  throw ValidationError("config key '" + key + "': expected 1, d or d*d values");
}

std::vector<std::size_t> draw_indices(std::size_t size, int max_draws) {
  std::vector<std::size_t> idx;
  if (max_draws <= 0 || static_cast<std::size_t>(max_draws) >= size) {
    for (std::size_t i = 0; i < size; ++i) idx.push_back(i);
  } else {
    for (int j = 0; j < max_draws; ++j) idx.push_back(static_cast<std::size_t>(j) * size / max_draws);
  }
  return idx;
}

unsigned worker_count(int requested, std::size_t jobs) {
  unsigned t = requested > 0 ? static_cast<unsigned>(requested) : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(jobs, 1)));
}

// Runs job(i) for i in [0, jobs) on a few threads; results land by index.
template <class R, class F>
std::vector<R> parallel_map(std::size_t jobs, unsigned threads, F job) {
  std::vector<R> out(jobs);
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < jobs; i += threads) out[i] = job(i);
    }));
  for (auto& f : workers) f.get();
  return out;
}

struct HeldOut {
  double k = 0;
  double n1 = 0;
  double n2 = 0;
};

}  // namespace

void simulate_species(const SimulateSpeciesOptions& o) {
  const auto seq = gen_discrete_scenario(o.theta, o.sigma, o.beta, o.n, o.seed);
  atomic_write(o.out, species_sequence_csv(seq));
}

json diagnostics_json(const json& trace) {
  if (!trace.is_object()) throw DataError("trace must be a JSON object");
  json out = json::object();
  for (const char* key : {"sigma", "theta", "beta", "mbar", "k"}) {
    if (!trace.contains(key)) continue;
    std::vector<double> chain;
    try {
      chain = trace.at(key).get<std::vector<double>>();
    } catch (const json::exception&) {
      throw DataError(std::string("trace field '") + key + "' is not a numeric array");
    }
    if (chain.empty()) throw DataError(std::string("trace field '") + key + "' is empty");
    const auto s = summarize(chain);
    json e = {{"mean", s.mean}, {"sd", s.sd}, {"ess", nullptr}, {"geweke_z", nullptr}};
    if (s.degenerate) {
      e["ess"] = "degenerate";
      e["geweke_z"] = "degenerate";
    } else {
      if (s.ess) e["ess"] = *s.ess;
      if (s.geweke_z) e["geweke_z"] = *s.geweke_z;
    }
    out[key] = e;
  }
  if (out.empty()) throw DataError("trace has no monitored parameters");
  return out;
}

void fit_species(const FitSpeciesOptions& o) {
  const auto counts = read_species_csv(o.data);
  SpeciesFitConfig cfg;
  cfg.iterations = o.iters;
  cfg.burn_in = o.burnin;
  cfg.thin = o.thin;
  cfg.seed = o.seed;
  cfg.pure_py = o.pure_py;
  cfg.adapt = o.adapt;
  cfg.validate();
  const auto trace = run_chain(counts.frequencies(), cfg);
  const json tj = trace_to_json(trace);
  write_json(o.out + ".trace.json", tj);
  write_json(o.out + ".summary.json", diagnostics_json(tj));
}

Prediction predict(const SpeciesTrace& trace, const FrequencyVector& fv, int m, const std::vector<int>& r,
                   int max_draws) {
  if (m < 1) throw ValidationError("--m must be at least 1");
  for (int v : r)
    if (v < 2) throw ValidationError("--r values must be at least 2");
  if (trace.sigma.empty()) throw DataError("trace has no kept draws");
  const auto idx = draw_indices(trace.sigma.size(), max_draws);
  struct One {
    double km = 0, nm1 = 0;
    std::vector<double> nmr;
  };
  const auto per = parallel_map<One>(idx.size(), worker_count(0, idx.size()), [&](std::size_t j) {
    const std::size_t t = idx[j];
    const CgpParams p(GibbsFamily::pitman_yor(trace.sigma[t], trace.theta[t]), trace.beta[t]);
    One o;
    o.km = posterior_expected_km(fv, p, m);
    o.nm1 = posterior_expected_nm1(fv, p, m);
    for (int v : r) o.nmr.push_back(posterior_expected_nmr(fv, p, m, v));
    return o;
  });
  Prediction out;
  out.draws = idx.size();
  for (const auto& o : per) {
    out.km += o.km;
    out.nm1 += o.nm1;
    for (std::size_t q = 0; q < r.size(); ++q) out.nmr[r[q]] += o.nmr[q];
  }
  const double d = static_cast<double>(idx.size());
  out.km /= d;
  out.nm1 /= d;
  for (auto& [k, v] : out.nmr) v /= d;
  return out;
}

void predict_species(const PredictSpeciesOptions& o) {
  const auto trace = trace_from_json(read_json(o.trace));
  const auto fv = read_species_csv(o.data).frequencies();
  const auto p = predict(trace, fv, o.m, o.r, o.max_draws);
  json nmr = json::object();
  for (const auto& [r, v] : p.nmr) nmr[std::to_string(r)] = v;
  write_json(o.out, {{"n", fv.n()},
                     {"k", fv.k()},
                     {"m1", fv.m1()},
                     {"m", o.m},
                     {"draws", p.draws},
                     {"expected_km", p.km},
                     {"expected_nm1", p.nm1},
                     {"expected_nmr", nmr}});
}

void crossval_species(const CrossvalOptions& o) {
  if (!(o.frac > 0 && o.frac < 1)) throw ValidationError("--frac must lie in (0, 1)");
  if (o.reps < 1) throw ValidationError("--reps must be at least 1");
  const auto counts = read_species_csv(o.data);
  const auto obs = expand_counts(counts);
  const int n = static_cast<int>(obs.size());
  if (n < 2) throw ValidationError("cross-validation needs at least two observations");
  const int n_train = std::clamp(static_cast<int>(std::lround(o.frac * n)), 1, n - 1);
  const int m = n - n_train;

  Rng master(o.seed);
  std::vector<Rng> streams;
  for (int i = 0; i < o.reps; ++i) streams.push_back(master.split());

  struct Rep {
    HeldOut truth;
    Prediction cpy, py;
  };
  auto one = [&](std::size_t rep) {
    Rng rng = streams[rep];
    auto shuffled = obs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::unordered_map<int, int> train, test;
    for (int i = 0; i < n; ++i) ++(i < n_train ? train : test)[shuffled[i]];
    std::vector<int> sizes;
    for (const auto& [label, c] : train) sizes.push_back(c);
    const FrequencyVector fv(sizes);
    Rep out;
    for (const auto& [label, c] : test) {
      if (train.count(label)) continue;
      out.truth.k += 1;
      out.truth.n1 += c == 1;
      out.truth.n2 += c == 2;
    }
    SpeciesFitConfig cfg;
    cfg.iterations = o.iters;
    cfg.burn_in = o.burnin;
    cfg.thin = o.thin;
    cfg.seed = rng();
    const auto cpy_trace = run_chain(fv, cfg, rng);
    cfg.pure_py = true;
    const auto py_trace = run_chain(fv, cfg, rng);
    out.cpy = predict(cpy_trace, fv, m, {2}, o.max_draws);
    out.py = predict(py_trace, fv, m, {2}, o.max_draws);
    return out;
  };
  SpeciesFitConfig probe;
  probe.iterations = o.iters;
  probe.burn_in = o.burnin;
  probe.thin = o.thin;
  probe.validate();
  const auto reps = parallel_map<Rep>(static_cast<std::size_t>(o.reps), worker_count(o.threads, o.reps), one);

  std::string csv = "replicate,model,statistic,predicted,observed\n";
  std::map<std::string, std::map<std::string, double>> mse;
  auto row = [&](int rep, const char* model, const char* stat, double pred, double truth) {
    std::ostringstream line;
    line.precision(17);
    line << rep << ',' << model << ',' << stat << ',' << pred << ',' << truth << '\n';
    csv += line.str();
    mse[model][stat] += (pred - truth) * (pred - truth) / o.reps;
  };
  for (int i = 0; i < o.reps; ++i) {
    const auto& r = reps[i];
    for (const auto& [name, p] : {std::pair<const char*, const Prediction*>{"CPY", &r.cpy}, {"PY", &r.py}}) {
      row(i + 1, name, "K", p->km, r.truth.k);
      row(i + 1, name, "N1", p->nm1, r.truth.n1);
      row(i + 1, name, "N2", p->nmr.at(2), r.truth.n2);
    }
  }
  atomic_write(o.out + ".replicates.csv", csv);
  write_json(o.out + ".mse.json", {{"reps", o.reps}, {"frac", o.frac}, {"n_train", n_train}, {"m", m}, {"mse", mse}});
}

MixtureRunConfig mixture_config(const std::map<std::string, std::string>& kv, const Matrix& data) {
  static const std::set<std::string> known = {
      "iterations",     "burn_in",          "thin",         "adapt",          "pure_py",
      "proposal_sd_psi", "proposal_sd_lambda", "prior_theta.shape", "prior_theta.rate", "prior_sigma.a",
      "prior_sigma.b",  "prior_beta.a",     "prior_beta.b", "base.mu",        "base.kappa",
      "base.nu",        "base.scale",       "contaminant.mu", "contaminant.kappa", "contaminant.nu",
      "contaminant.scale"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ValidationError("unknown config key '" + k + "'");
  for (const char* k : {"base.kappa", "contaminant.kappa"})
    if (!kv.count(k)) throw ValidationError(std::string("missing config key '") + k + "'");
  if (data.rows() < 2 || data.cols() < 1) throw ValidationError("mixture data needs at least two rows");

  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  MixtureRunConfig rc;
  auto& f = rc.fit;
  if (auto v = get("iterations")) f.iterations = to_int("iterations", *v);
  if (auto v = get("burn_in")) f.burn_in = to_int("burn_in", *v);
  if (auto v = get("thin")) f.thin = to_int("thin", *v);
  if (auto v = get("adapt")) f.adapt = to_bool("adapt", *v);
  if (auto v = get("pure_py")) f.pure_py = to_bool("pure_py", *v);
  if (auto v = get("proposal_sd_psi")) f.proposal_sd_psi = to_double("proposal_sd_psi", *v);
  if (auto v = get("proposal_sd_lambda")) f.proposal_sd_lambda = to_double("proposal_sd_lambda", *v);
  if (auto v = get("prior_theta.shape")) f.prior_theta.shape = to_double("prior_theta.shape", *v);
  if (auto v = get("prior_theta.rate")) f.prior_theta.rate = to_double("prior_theta.rate", *v);
  if (auto v = get("prior_sigma.a")) f.prior_sigma.a = to_double("prior_sigma.a", *v);
  if (auto v = get("prior_sigma.b")) f.prior_sigma.b = to_double("prior_sigma.b", *v);
  if (auto v = get("prior_beta.a")) f.prior_beta.a = to_double("prior_beta.a", *v);
  if (auto v = get("prior_beta.b")) f.prior_beta.b = to_double("prior_beta.b", *v);

  const double d = static_cast<double>(data.cols());
  for (auto [prefix, niw] : {std::pair<std::string, NiwParams*>{"base", &rc.base}, {"contaminant", &rc.contaminant}}) {
    const auto* mu = get(prefix + ".mu");
    const auto* nu = get(prefix + ".nu");
    const auto* sc = get(prefix + ".scale");
    niw->mu = parse_mu(prefix + ".mu", mu ? *mu : "zero", data);
    niw->kappa = to_double(prefix + ".kappa", *get(prefix + ".kappa"));
    niw->nu = nu ? to_double(prefix + ".nu", *nu) : d + 3;
    niw->scale = parse_scale(prefix + ".scale", sc ? *sc : "sample_diag", data);
    try {
      niw->validate();
    } catch (const std::exception& e) {
      throw ValidationError(prefix + ": " + e.what());
    }
  }
  return rc;
}

void fit_mixture(const FitMixtureOptions& o) {
  const auto table = read_numeric_csv(o.data);
  auto rc = mixture_config(parse_config(read_file(o.config)), table.data);
  rc.fit.seed = o.seed;
  if (o.pure_py) rc.fit.pure_py = true;
  rc.fit.validate();
  const auto trace = run_mixture_chain(table.data, rc.fit, rc.base, rc.contaminant);

  std::vector<Partition> parts;
  parts.reserve(trace.allocations.size());
  for (const auto& a : trace.allocations) parts.push_back(Partition{a});
  const auto best = vi_point_estimate(parts);
  const auto& labels = best.partition.labels;

  std::string pcsv = "observation,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) pcsv += std::to_string(i + 1) + "," + std::to_string(labels[i]) + "\n";

  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);
  json clusters = json::array();
  for (const auto& [label, rows] : members) {
    if (label == 0) continue;
    Vector mean = Vector::Zero(table.data.cols());
    for (auto i : rows) mean += table.data.row(static_cast<Eigen::Index>(i)).transpose();
    mean /= static_cast<double>(rows.size());
    clusters.push_back({{"label", label}, {"size", rows.size()}, {"mean", std::vector<double>(mean.begin(), mean.end())}});
  }
  const int singletons = count_singletons(best.partition);
  json summary = {{"n", labels.size()},
                  {"singletons", singletons},
                  {"contaminants", members.count(0) ? members.at(0).size() : 0},
                  {"clusters", clusters},
                  {"expected_vi", best.expected_vi},
                  {"point_estimate_draw", best.index},
                  {"acc_sigma", trace.acc_sigma},
                  {"acc_theta", trace.acc_theta}};
  if (table.truth) {
    int hit = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool single = labels[i] == 0 || members.at(labels[i]).size() == 1;
      hit += single && (*table.truth)[i];
    }
    summary["true_outliers"] = std::count(table.truth->begin(), table.truth->end(), 1);
    summary["true_outliers_as_singletons"] = hit;
  }

  write_json(o.out + ".trace.json", trace_to_json(trace));
  atomic_write(o.out + ".allocations.csv", partitions_csv(trace.allocations));
  atomic_write(o.out + ".partition.csv", pcsv);
  write_json(o.out + ".summary.json", summary);
  std::cout << "singletons: " << singletons << "\n";
}

void diagnose(const DiagnoseOptions& o) {
  const auto out = diagnostics_json(read_json(o.trace));
  if (o.out.empty())
    std::cout << out.dump(1) << "\n";
  else
    write_json(o.out, out);
}

void simulate_mixture(const SimulateMixtureOptions& o) {
  SyntheticMixtureConfig cfg;
  cfg.d = o.d;
  cfg.m = o.m;
  cfg.s = o.s;
  cfg.c = o.c;
  cfg.seed = o.seed;
  const auto g = gen_mixture_with_outliers(cfg);
  atomic_write(o.out, numeric_csv(g.data, &g.outlier));
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Contaminated Gibbs-type priors: species and mixture models"};
  app.require_subcommand(1);

  SimulateSpeciesOptions ss;
  auto* c_ss = app.add_subcommand("simulate-species", "Simulate a labelled species sequence");
  c_ss->add_option("--theta", ss.theta)->required();
  c_ss->add_option("--sigma", ss.sigma)->required();
  c_ss->add_option("--beta", ss.beta)->required();
  c_ss->add_option("--n", ss.n)->required()->check(CLI::PositiveNumber);
  c_ss->add_option("--seed", ss.seed)->required();
  c_ss->add_option("--out", ss.out)->required();

  FitSpeciesOptions fs;
  auto* c_fs = app.add_subcommand("fit-species", "Posterior sampling for species data");
  c_fs->add_option("--data", fs.data)->required();
  c_fs->add_option("--iters", fs.iters)->check(CLI::PositiveNumber);
  c_fs->add_option("--burnin", fs.burnin)->check(CLI::NonNegativeNumber);
  c_fs->add_option("--thin", fs.thin)->check(CLI::PositiveNumber);
  c_fs->add_option("--seed", fs.seed)->required();
  c_fs->add_flag("--pure-py", fs.pure_py, "Pin beta to 1");
  c_fs->add_flag("!--no-adapt", fs.adapt, "Keep proposal scales fixed");
  c_fs->add_option("--out", fs.out, "Output prefix")->required();

  PredictSpeciesOptions ps;
  auto* c_ps = app.add_subcommand("predict-species", "Posterior expectations for further samples");
  c_ps->add_option("--trace", ps.trace)->required();
  c_ps->add_option("--data", ps.data)->required();
  c_ps->add_option("--m", ps.m)->required();
  c_ps->add_option("--r", ps.r)->delimiter(',');
  c_ps->add_option("--max-draws", ps.max_draws)->check(CLI::NonNegativeNumber);
  c_ps->add_option("--out", ps.out)->required();

  CrossvalOptions cv;
  auto* c_cv = app.add_subcommand("crossval-species", "Held-out comparison of the contaminated and pure models");
  c_cv->add_option("--data", cv.data)->required();
  c_cv->add_option("--frac", cv.frac);
  c_cv->add_option("--reps", cv.reps);
  c_cv->add_option("--seed", cv.seed)->required();
  c_cv->add_option("--iters", cv.iters)->check(CLI::PositiveNumber);
  c_cv->add_option("--burnin", cv.burnin)->check(CLI::NonNegativeNumber);
  c_cv->add_option("--thin", cv.thin)->check(CLI::PositiveNumber);
  c_cv->add_option("--max-draws", cv.max_draws)->check(CLI::NonNegativeNumber);
  c_cv->add_option("--threads", cv.threads)->check(CLI::NonNegativeNumber);
  c_cv->add_option("--out", cv.out, "Output prefix")->required();

  FitMixtureOptions fm;
  auto* c_fm = app.add_subcommand("fit-mixture", "Gaussian mixture with a contaminant component");
  c_fm->add_option("--data", fm.data)->required();
  c_fm->add_option("--config", fm.config)->required();
  c_fm->add_option("--seed", fm.seed)->required();
  c_fm->add_flag("--pure-py", fm.pure_py, "Drop the contaminant component");
  c_fm->add_option("--out", fm.out, "Output prefix")->required();

  DiagnoseOptions dg;
  auto* c_dg = app.add_subcommand("diagnose", "Chain summaries from a trace");
  c_dg->add_option("--trace", dg.trace)->required();
  c_dg->add_option("--out", dg.out);

  SimulateMixtureOptions sm;
  auto* c_sm = app.add_subcommand("simulate-mixture", "Two-component Gaussian data with outliers");
  c_sm->add_option("--d", sm.d);
  c_sm->add_option("--m", sm.m);
  c_sm->add_option("--s", sm.s);
  c_sm->add_option("--c", sm.c);
  c_sm->add_option("--seed", sm.seed)->required();
  c_sm->add_option("--out", sm.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "ERROR: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*c_ss) simulate_species(ss);
    if (*c_fs) fit_species(fs);
    if (*c_ps) predict_species(ps);
    if (*c_cv) crossval_species(cv);
    if (*c_fm) fit_mixture(fm);
    if (*c_dg) diagnose(dg);
    if (*c_sm) simulate_mixture(sm);
  } catch (const ValidationError& e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace cgp::cli
