#include "cgp/mixture_mcmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void NiwParams::validate() const {
  const auto d = mu.size();
  if (d < 1) throw std::invalid_argument("NIW: empty location");
  if (scale.rows() != d || scale.cols() != d) throw std::invalid_argument("NIW: scale dimension mismatch");
  if (!(kappa > 0)) throw std::invalid_argument("NIW: kappa must be positive");
  if (!(nu > static_cast<double>(d) - 1)) throw std::invalid_argument("NIW: nu must exceed d - 1");
  cholesky(scale);
}

StudentT::StudentT(const NiwParams& niw)
    : df_(niw.nu - niw.dim() + 1.0),
      loc_(niw.mu),
      scale_(niw.scale * ((niw.kappa + 1.0) / (niw.kappa * (niw.nu - niw.dim() + 1.0)))) {}

double StudentT::log_density(const Vector& y) const { return mvt_log_density(y, df_, loc_, scale_); }

double niw_marginal_log(const Vector& y, const NiwParams& niw) {
  niw.validate();
  if (y.size() != niw.mu.size()) throw std::invalid_argument("niw_marginal_log: dimension mismatch");
  return StudentT(niw).log_density(y);
}

NiwParams niw_posterior(const NiwParams& niw, std::span<const Vector> ys) {
  if (ys.empty()) return niw;
  const auto d = niw.mu.size();
  const double m = static_cast<double>(ys.size());
  Vector ybar = Vector::Zero(d);
  for (const auto& y : ys) {
    if (y.size() != d) throw std::invalid_argument("niw_posterior: dimension mismatch");
    ybar += y;
  }
  ybar /= m;
  Matrix scatter = Matrix::Zero(d, d);
  for (const auto& y : ys) scatter += (y - ybar) * (y - ybar).transpose();
  NiwParams out;
  out.kappa = niw.kappa + m;
  out.nu = niw.nu + m;
  out.mu = (niw.kappa * niw.mu + m * ybar) / out.kappa;
  const Vector shift = ybar - niw.mu;
  out.scale = niw.scale + scatter + (niw.kappa * m / out.kappa) * shift * shift.transpose();
  out.scale = 0.5 * (out.scale + out.scale.transpose());
  return out;
}

ClusterParams sample_niw(const NiwParams& niw, Rng& rng) {
  const Matrix sigma = sample_inverse_wishart(niw.nu, niw.scale, rng);
  const Cholesky c(sigma / niw.kappa);
  return ClusterParams(sample_mvn(niw.mu, c, rng), sigma);
}

int MixtureState::contaminants() const {
  int c = 0;
  for (int a : alloc) c += a == 0;
  return c;
}

void MixtureState::check() const {
  if (sizes.size() != clusters.size()) throw std::logic_error("mixture state: sizes/clusters mismatch");
  std::vector<int> count(clusters.size(), 0);
  for (int a : alloc) {
    if (a < 0 || a > k()) throw std::logic_error("mixture state: label out of range");
    if (a > 0) ++count[a - 1];
  }
  for (std::size_t j = 0; j < count.size(); ++j)
    if (count[j] == 0 || count[j] != sizes[j]) throw std::logic_error("mixture state: inconsistent cluster sizes");
}

void MixtureState::compact() {
  std::vector<int> relabel(clusters.size() + 1, 0);
  int next = 0;
  std::vector<int> order;
  for (int a : alloc)
    if (a > 0 && relabel[a] == 0) {
      relabel[a] = ++next;
      order.push_back(a);
    }
  std::vector<ClusterParams> cs;
  std::vector<int> sz;
  cs.reserve(order.size());
  for (int old : order) {
    cs.push_back(std::move(clusters[old - 1]));
    sz.push_back(sizes[old - 1]);
  }
  clusters = std::move(cs);
  sizes = std::move(sz);
  for (auto& a : alloc)
    if (a > 0) a = relabel[a];
}

MixtureData::MixtureData(const Matrix& data, const NiwParams& base, const NiwParams& contaminant)
    : dim_(static_cast<int>(data.cols())), base_(base), contaminant_(contaminant) {
  base.validate();
  contaminant.validate();
  if (data.rows() < 1 || base.dim() != dim_ || contaminant.dim() != dim_)
    throw std::invalid_argument("mixture data: dimension mismatch with NIW parameters");
  const StudentT t0(base);
  const StudentT t1(contaminant);
  rows_.reserve(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    rows_.push_back(data.row(i).transpose());
    if (!rows_.back().allFinite()) throw std::invalid_argument("mixture data: non-finite value");
    log_t0_.push_back(t0.log_density(rows_.back()));
    log_t1_.push_back(t1.log_density(rows_.back()));
  }
}

std::vector<LogValue> allocation_log_weights(const MixtureState& s, std::size_t i, const MixtureData& data) {
  const double others = static_cast<double>(data.n()) - 1.0;
  const double mbar = s.contaminants();
  const double ldenom = std::log(s.theta + others - mbar);
  const double lbeta = std::log(s.beta);
  std::vector<LogValue> w;
  w.reserve(static_cast<std::size_t>(s.k()) + 2);
  w.push_back(s.beta < 1.0 ? std::log1p(-s.beta) + data.log_t_contaminant(i) : kNegInf);
  const Vector& y = data.row(i);
  for (int j = 0; j < s.k(); ++j)
    w.push_back(lbeta + std::log(s.sizes[j] - s.sigma) - ldenom + mvn_log_density(y, s.clusters[j].mean, s.clusters[j].chol));
  w.push_back(lbeta + std::log(s.theta + s.k() * s.sigma) - ldenom + data.log_t_base(i));
  return w;
}

int allocation_step(MixtureState& s, std::size_t i, const MixtureData& data, Rng& rng) {
  const int old = s.alloc[i];
  s.alloc[i] = -1;
  if (old > 0 && --s.sizes[old - 1] == 0) {
    const int last = s.k();
    if (old != last) {
      std::swap(s.clusters[old - 1], s.clusters[last - 1]);
      s.sizes[old - 1] = s.sizes[last - 1];
      for (auto& a : s.alloc)
        if (a == last) a = old;
    }
    s.clusters.pop_back();
    s.sizes.pop_back();
  }
  const auto w = allocation_log_weights(s, i, data);
  const auto idx = static_cast<int>(categorical_from_log_weights(w, rng));
  if (idx <= s.k()) {
    s.alloc[i] = idx;
    if (idx > 0) ++s.sizes[idx - 1];
  } else {
    const Vector& y = data.row(i);
    s.clusters.push_back(sample_niw(niw_posterior(data.base(), std::span<const Vector>(&y, 1)), rng));
    s.sizes.push_back(1);
    s.alloc[i] = s.k();
  }
  return s.alloc[i];
}

void update_cluster_params(MixtureState& s, const MixtureData& data, Rng& rng) {
  std::vector<std::vector<Vector>> members(static_cast<std::size_t>(s.k()));
  for (std::size_t i = 0; i < data.n(); ++i)
    if (s.alloc[i] > 0) members[s.alloc[i] - 1].push_back(data.row(i));
  for (int j = 0; j < s.k(); ++j) s.clusters[j] = sample_niw(niw_posterior(data.base(), members[j]), rng);
}

SpeciesData mixture_species_data(const MixtureState& s) {
  std::vector<int> sizes = s.sizes;
  sizes.insert(sizes.end(), static_cast<std::size_t>(s.contaminants()), 1);
  return SpeciesData::of_sizes(sizes);
}

HyperMoves update_mixture_hyperparams(MixtureState& s, Rng& rng, const MixtureFitConfig& cfg, double sd_sigma,
                                      double sd_theta) {
  const auto d = mixture_species_data(s);
  SpeciesState st{s.sigma, s.theta, s.beta, s.contaminants()};
  HyperMoves moves;
  if (!cfg.fix_sigma) moves.sigma = update_sigma(st, d, rng, cfg, sd_sigma);
  if (!cfg.fix_theta) moves.theta = update_theta(st, d, rng, cfg, sd_theta);
  if (!cfg.pure_py && !cfg.fix_beta) update_beta(st, d, rng, cfg.prior_beta);
  s.sigma = st.sigma;
  s.theta = st.theta;
  s.beta = st.beta;
  return moves;
}

MixtureState initial_mixture_state(const MixtureData& data, const MixtureFitConfig& cfg, Rng& rng) {
  MixtureState s;
  s.sigma = cfg.fix_sigma.value_or(0.5);
  s.theta = cfg.fix_theta.value_or(1.0);
  s.beta = cfg.pure_py ? 1.0 : cfg.fix_beta.value_or(0.95);
  s.alloc.assign(data.n(), 1);
  s.sizes = {static_cast<int>(data.n())};
  s.clusters.push_back(sample_niw(niw_posterior(data.base(), data.rows()), rng));
  return s;
}

HyperMoves mixture_sweep(MixtureState& s, const MixtureData& data, Rng& rng, const MixtureFitConfig& cfg,
                         double sd_sigma, double sd_theta) {
  for (std::size_t i = 0; i < data.n(); ++i) allocation_step(s, i, data, rng);
  update_cluster_params(s, data, rng);
  const auto moves = update_mixture_hyperparams(s, rng, cfg, sd_sigma, sd_theta);
  s.compact();
  return moves;
}

MixtureTrace run_mixture_chain(const Matrix& data, const MixtureFitConfig& cfg, const NiwParams& base,
                               const NiwParams& contaminant, Rng& rng) {
  cfg.validate();
  if (data.rows() < 2 || data.cols() < 1) throw std::invalid_argument("mixture chain needs n >= 2 and d >= 1");
  const MixtureData md(data, base, contaminant);
  auto s = initial_mixture_state(md, cfg, rng);
  MixtureTrace tr;
  tr.seed = cfg.seed;
  tr.config = cfg;
  AdaptiveScale sd_sigma(cfg.proposal_sd_psi);
  AdaptiveScale sd_theta(cfg.proposal_sd_lambda);
  long acc_sigma = 0;
  long acc_theta = 0;
  for (int t = 0; t < cfg.iterations; ++t) {
    const bool burning = t < cfg.burn_in;
    const auto moves = mixture_sweep(s, md, rng, cfg, sd_sigma.sd(), sd_theta.sd());
    if (burning && cfg.adapt) {
      if (!cfg.fix_sigma) sd_sigma.update(moves.sigma, t + 1);
      if (!cfg.fix_theta) sd_theta.update(moves.theta, t + 1);
    }
    if (!burning) {
      acc_sigma += moves.sigma;
      acc_theta += moves.theta;
      if ((t - cfg.burn_in + 1) % cfg.thin == 0) {
        tr.allocations.push_back(s.alloc);
        tr.sigma.push_back(s.sigma);
        tr.theta.push_back(s.theta);
        tr.beta.push_back(s.beta);
        tr.k.push_back(s.k());
      }
    }
  }
  const double post = cfg.iterations - cfg.burn_in;
  tr.acc_sigma = acc_sigma / post;
  tr.acc_theta = acc_theta / post;
  return tr;
}

MixtureTrace run_mixture_chain(const Matrix& data, const MixtureFitConfig& cfg, const NiwParams& base,
                               const NiwParams& contaminant) {
  Rng rng(cfg.seed);
  return run_mixture_chain(data, cfg, base, contaminant, rng);
}

}  // namespace cgp
