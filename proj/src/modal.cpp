#include "platoon/modal.hpp"

#include <algorithm>
#include <complex>
#include <numbers>

#include "platoon/parallel.hpp"

namespace platoon {

void validate(const VehicleParams& params) {
  if (!(params.tau > 0) || !std::isfinite(params.tau)) throw InvalidArgument("tau must be positive");
}

void validate(const ControllerGains& gains) {
  if (!std::isfinite(gains.kp) || !std::isfinite(gains.kv) || !std::isfinite(gains.ka))
    throw InvalidArgument("feedback gains must be finite");
  if (!(gains.c > 0) || !std::isfinite(gains.c)) throw InvalidArgument("coupling strength c must be positive");
}

std::vector<ModalSystem<double>> modal_systems(const VehicleParams& params, const ControllerGains& gains,
                                               const Spectrum& spectrum) {
  validate(params);
  validate(gains);
  std::vector<ModalSystem<double>> modes;
  modes.reserve(spectrum.eigenvalues.size());
  for (double lambda : spectrum.eigenvalues) modes.push_back(make_modal_system(params, gains, lambda));
  return modes;
}

GammaReport gamma_gain(const VehicleParams& params, const ControllerGains& gains, const Spectrum& spectrum) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  GammaReport report{0.0, {}, 0.0, true};
  for (const auto& mode : modal_systems(params, gains, spectrum)) {
    const double lambda = mode.lambda_eff / gains.c;
    if (!is_hurwitz(mode)) {
      report.stable = false;
      report.per_mode.push_back({lambda, inf, std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    const auto h = modal_hinf_norm(mode);
    report.per_mode.push_back({lambda, h.norm, h.peak_frequency});
    report.gamma = std::max(report.gamma, h.norm);
  }
  if (!report.stable) report.gamma = inf;
  report.lower_bound = 1.0 / (gains.c * spectrum.lambda_min() * gains.kp);
  return report;
}

std::vector<double> default_frequency_grid(const std::vector<double>& extra) {
  constexpr int kPoints = 4096;
  std::vector<double> grid;
  grid.reserve(kPoints + 1 + extra.size());
  grid.push_back(0.0);
  for (int i = 0; i < kPoints; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / (kPoints - 1)));
  for (double w : extra)
    if (std::isfinite(w) && w >= 0) grid.push_back(w);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double gamma_gain_full_system(const VehicleParams& params, const ControllerGains& gains,
                              const TopologyMatrix& matrix, const std::vector<double>& freq_grid) {
  using cd = std::complex<double>;
  validate(params);
  validate(gains);
  const auto n = matrix.lp.rows();
  const Eigen::MatrixXcd lp = matrix.lp.cast<cd>();
  double peak = 0.0;
  for (double w : freq_grid) {
    const cd s(0.0, w);
    const cd vehicle = params.tau * s * s * s + s * s;
    const cd feedback = gains.c * (gains.kp + gains.kv * s + gains.ka * s * s);
    Eigen::MatrixXcd m = feedback * lp;
    m.diagonal().array() += vehicle;
    // sigma_max(M^{-1}) = 1 / sigma_min(M)
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > 1e-300)) return std::numeric_limits<double>::infinity();
    peak = std::max(peak, 1.0 / smin);
  }
  return peak;
}

TopologyFamily bd_family() { return {"bd", [](int n) { return build_bd(n); }, TopologyFamily::Bound::kChain}; }

TopologyFamily bdl_family() {
  return {"bdl", [](int n) { return build_bdl(n); }, TopologyFamily::Bound::kPinningRatio};
}

TopologyFamily star_family() {
  return {"star", [](int n) { return build_star(n); }, TopologyFamily::Bound::kPinningRatio};
}

TopologyFamily h_neighbor_family(int h, std::set<int> pinned) {
  if (h < 1) throw InvalidArgument("h must be at least 1");
  const bool chain = h == 1 && pinned == std::set<int>{1};
  return {"h" + std::to_string(h),
          [h, pinned](int n) {
            std::set<int> clipped;
            for (int p : pinned)
              if (p <= n) clipped.insert(p);
            return build_h_neighbor(n, h, clipped);
          },
          chain ? TopologyFamily::Bound::kChain : TopologyFamily::Bound::kPinningRatio};
}

std::vector<SweepRow> scaling_sweep(const TopologyFamily& family, const std::vector<int>& sizes,
                                    const VehicleParams& params, const ControllerGains& gains, unsigned workers) {
  validate(params);
  validate(gains);
  return parallel_map(sizes.size(), workers, [&](std::size_t idx) {
    const int n = sizes[idx];
    const Topology topology = family.build(n);
    if (!is_leader_reachable(topology))
      throw InvalidArgument(family.name + " topology at N=" + std::to_string(n) + " is not leader-reachable");
    const Spectrum spec = spectrum(assemble(topology));
    const GammaReport report = gamma_gain(params, gains, spec);
    double bound = 0.0;
    if (family.bound == TopologyFamily::Bound::kChain) {
      bound = double(n) * n / (gains.c * gains.kp * std::numbers::pi * std::numbers::pi);
    } else {
      bound = double(n) / (gains.c * gains.kp * topology.pin_count());
    }
    return SweepRow{n, report.gamma, bound, spec.lambda_min(), report.stable};
  });
}

}  // namespace platoon
