#include "ringflow/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace ringflow {

TracerOptions multistart_options() {
  TracerOptions opts;
  opts.max_corrector_iters = 60;
  return opts;
}

std::vector<double> sample_hyperplane(std::size_t n, double s, std::mt19937_64& rng) {
  const auto nd = static_cast<double>(n);
  if (!(s > 0.0 && s < nd)) throw Error(ErrorCode::InvalidArgument, "s must lie in (0, n)");
  const bool reflect = s > nd / 2.0;
  const double mass = reflect ? nd - s : s;

  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(n);
  bool found = false;
  for (int attempt = 0; attempt < 2000 && !found; ++attempt) {
    double total = 0.0;
    for (double& v : x) total += (v = expo(rng));
    found = true;
    for (double& v : x) {
      v *= mass / total;
      if (v > 1.0) found = false;
    }
  }
  if (!found) {
    std::fill(x.begin(), x.end(), mass / nd);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < 50 * n; ++k) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (i == j) continue;
      // move mass from i to j, keeping both in [0,1]
      const double room = std::min(x[i], 1.0 - x[j]);
      const double back = std::min(x[j], 1.0 - x[i]);
      const double delta = -back + unit(rng) * (room + back);
      x[i] -= delta;
      x[j] += delta;
    }
  }
  if (reflect) {
    for (double& v : x) v = 1.0 - v;
  }
  return x;
}

MultistartReport newton_multistart(const ParamVector& lam, double s, std::size_t num_seeds,
                                   std::uint64_t rng_seed) {
  const std::size_t n = lam.size();
  if (num_seeds == 0) throw Error(ErrorCode::InvalidArgument, "num_seeds must be >= 1");
  MultistartReport report;
  report.rng_seed = rng_seed;
  std::mt19937_64 rng(rng_seed);
  const TracerOptions opts = multistart_options();

  std::vector<std::vector<std::vector<double>>> clusters;
  for (std::size_t k = 0; k < num_seeds; ++k) {
    const std::vector<double> seed = sample_hyperplane(n, s, rng);
    ++report.seeds_tried;
    const CorrectorResult r = newton_iterate(lam, s, seed, opts);
    if (!r.converged) {
      ++report.failed;
      continue;
    }
    if (StateVector(r.e, Bounds::Unchecked).cube_violation() > 1e-9) {
      ++report.out_of_cube;
      continue;
    }
    ++report.converged;
    bool placed = false;
    for (auto& cluster : clusters) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(cluster.front()[i] - r.e[i]));
      if (d <= kClusterRadius) {
        cluster.push_back(r.e);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({r.e});
  }

  for (const auto& cluster : clusters) {
    std::vector<double> center(n, 0.0);
    for (const auto& p : cluster) {
      for (std::size_t i = 0; i < n; ++i) center[i] += p[i];
    }
    for (double& c : center) c /= static_cast<double>(cluster.size());
    for (const auto& p : cluster) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(center[i] - p[i]));
      report.max_cluster_radius = std::max(report.max_cluster_radius, d);
    }
    report.cluster_centers.emplace_back(std::move(center), Bounds::Unchecked);
    report.cluster_sizes.push_back(cluster.size());
  }
  return report;
}

DenseMatrix fd_jacobian(JacobianWrt which, const ParamVector& lam, const StateVector& e, double h) {
  require_same_size(lam.size(), e.size(), "fd_jacobian");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  const std::size_t n = e.size();
  std::vector<double> l(lam.values().begin(), lam.values().end());
  std::vector<double> x(e.values().begin(), e.values().end());
  std::vector<double>& varied = which == JacobianWrt::Lambda ? l : x;
  std::vector<double> plus(n - 1), minus(n - 1);

  DenseMatrix out(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const double saved = varied[j];
    varied[j] = saved + h;
    detail::residual(l, x, plus);
    varied[j] = saved - h;
    detail::residual(l, x, minus);
    varied[j] = saved;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (plus[i] - minus[i]) / (2.0 * h);
    }
  }
  return out;
}

}  // namespace ringflow
