#include "qbf/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qbf/errors.hpp"

namespace qbf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kExamplePanelNodes = 20;
constexpr std::size_t kExamplePanels = 40;
// chi~ is negligible beyond 12 widths from its centre: exp(-72).
constexpr double kGaussWindow = 12.0;
constexpr int kMaxDoublings = 10;
constexpr double kWignerRelTol = 1e-9;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

QuadratureGrid example_grid(double alpha, std::size_t refine) {
  return composite_gauss_legendre(kExamplePanelNodes, kExamplePanels * refine, 0.0,
                                  MomentumState::kExampleCutoff * alpha);
}

std::vector<complex> example_nodes(const QuadratureGrid& grid, double alpha) {
  std::vector<complex> amps(grid.size());
  const double scale = 1.0 / std::sqrt(alpha);
  for (std::size_t i = 0; i < grid.size(); ++i)
    amps[i] = scale * bm_momentum_amplitude(grid.node(i) / alpha);
  return amps;
}

const QuadratureGrid& unit_panel_rule() {
  static const QuadratureGrid rule = gauss_legendre(32, -1.0, 1.0);
  return rule;
}

struct PanelSum {
  complex value;
  double magnitude = 0.0;  // sum of |w f|, for an absolute floor
};

template <class F>
PanelSum panel_sum(double lo, double hi, std::size_t panels, F&& f) {
  const QuadratureGrid& rule = unit_panel_rule();
  const double width = (hi - lo) / static_cast<double>(panels);
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum mag;
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = lo + width * (static_cast<double>(k) + 0.5);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double w = 0.5 * width * rule.weight(i);
      const complex term = w * f(mid + 0.5 * width * rule.node(i));
      re.add(term.real());
      im.add(term.imag());
      mag.add(std::abs(term));
    }
  }
  return {complex(re.value(), im.value()), mag.value()};
}

// Doubles the panel count from `panels` until two successive sums agree to
// kWignerRelTol, or to the rounding level of the integrand: evaluating a phase
// of size max_phase costs about max_phase * eps absolutely per term.
template <class F>
complex adaptive_integral(double lo, double hi, std::size_t panels, double max_phase,
                          const char* stage, F&& f) {
  const double floor = 1e-15 * (1.0 + max_phase);
  PanelSum previous = panel_sum(lo, hi, panels, f);
  for (int d = 0; d < kMaxDoublings; ++d) {
    panels *= 2;
    const PanelSum current = panel_sum(lo, hi, panels, f);
    const double change = std::abs(current.value - previous.value);
    if (change <= kWignerRelTol * std::abs(current.value) + floor * current.magnitude)
      return current.value;
    previous = current;
  }
  std::ostringstream msg;
  msg << "no agreement to " << kWignerRelTol << " after " << kMaxDoublings
      << " panel doublings on [" << lo << ", " << hi << "]";
  throw QuadratureNotConverged(stage, msg.str());
}

std::size_t initial_panels(double length, double feature, double gauss_width, double phase_rate) {
  const double n = std::ceil(length / (4.0 * feature)) + std::ceil(length / (6.0 * gauss_width)) +
                   std::ceil(std::fabs(phase_rate) * length / 40.0);
  return static_cast<std::size_t>(std::max(1.0, std::min(n, 1e6)));
}

}  // namespace

void PhysicalScales::validate() const {
  if (!positive_finite(hbar)) throw InvalidArgument("hbar must be finite and > 0");
  if (!positive_finite(mass)) throw InvalidArgument("mass must be finite and > 0");
  if (!positive_finite(alpha)) throw InvalidArgument("alpha must be finite and > 0");
  if (!positive_finite(horizon)) throw InvalidArgument("horizon must be finite and > 0");
}

PrecisionSpec::PrecisionSpec(double sigma_tilde, double hbar) : sigma_tilde_(sigma_tilde), hbar_(hbar) {
  if (!positive_finite(sigma_tilde)) throw InvalidArgument("sigma_tilde must be finite and > 0");
  if (!positive_finite(hbar)) throw InvalidArgument("hbar must be finite and > 0");
}

double PrecisionSpec::momentum_amplitude(double p) const {
  const double r = p / sigma_tilde_;
  return std::exp(-0.5 * r * r) / (std::pow(kPi, 0.25) * std::sqrt(sigma_tilde_));
}

double PrecisionSpec::position_amplitude(double x) const {
  const double s = sigma();
  const double r = x / s;
  return std::exp(-0.5 * r * r) / (std::pow(kPi, 0.25) * std::sqrt(s));
}

double bm_momentum_amplitude(double eta) {
  if (!(eta > 0.0)) return 0.0;
  return 18.0 * eta / std::sqrt(35.0) * (std::exp(-eta) - std::exp(-0.5 * eta) / 6.0);
}

complex bm_position_amplitude(double xi) {
  const complex a(1.0, -xi);
  const complex b(1.0, -2.0 * xi);
  return 18.0 / std::sqrt(70.0 * kPi) * (1.0 / (a * a) - (2.0 / 3.0) / (b * b));
}

MomentumState::MomentumState(Kind kind, QuadratureGrid grid, std::vector<complex> amplitudes,
                             const PhysicalScales& scales)
    : kind_(kind), grid_(std::move(grid)), amplitudes_(std::move(amplitudes)), scales_(scales) {}

MomentumState MomentumState::bm_example(const PhysicalScales& scales) {
  scales.validate();
  QuadratureGrid grid = example_grid(scales.alpha, 1);
  std::vector<complex> amps = example_nodes(grid, scales.alpha);
  return MomentumState(Kind::bm_example, std::move(grid), std::move(amps), scales);
}

MomentumState MomentumState::sampled(QuadratureGrid grid, std::vector<complex> amplitudes,
                                     const PhysicalScales& scales) {
  scales.validate();
  if (grid.lo() < 0.0) throw InvalidArgument("sampled state: grid must lie in p >= 0");
  if (amplitudes.size() != grid.size())
    throw InvalidArgument("sampled state: amplitude count differs from node count");
  CompensatedSum norm;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(amplitudes[i].real()) || !std::isfinite(amplitudes[i].imag()))
      throw InvalidArgument("sampled state: non-finite amplitude");
    norm.add(grid.weight(i) * std::norm(amplitudes[i]));
  }
  if (std::fabs(norm.value() - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "sampled state: norm " << norm.value() << " differs from 1 by more than 1e-8";
    throw InvalidArgument(msg.str());
  }
  return MomentumState(Kind::sampled, std::move(grid), std::move(amplitudes), scales);
}

MomentumState MomentumState::at_time(double t) const {
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  MomentumState copy = *this;
  copy.time_ = t;
  return copy;
}

MomentumState MomentumState::refined(std::size_t refine) const {
  if (kind_ != Kind::bm_example) throw InvalidArgument("only the example state can be refined");
  if (refine == 0) throw InvalidArgument("refinement factor must be >= 1");
  QuadratureGrid grid = example_grid(scales_.alpha, refine);
  std::vector<complex> amps = example_nodes(grid, scales_.alpha);
  MomentumState out(kind_, std::move(grid), std::move(amps), scales_);
  out.time_ = time_;
  return out;
}

complex MomentumState::phase(double p) const {
  if (time_ == 0.0) return 1.0;
  const double angle = -p * p * time_ / (2.0 * scales_.mass * scales_.hbar);
  return std::polar(1.0, angle);
}

complex MomentumState::amplitude(double p) const {
  if (!(p >= 0.0)) return 0.0;
  if (kind_ == Kind::bm_example)
    return phase(p) * (bm_momentum_amplitude(p / scales_.alpha) / std::sqrt(scales_.alpha));
  const auto nodes = grid_.nodes();
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), p);
  for (auto cand : {it, it == nodes.begin() ? it : it - 1}) {
    if (cand == nodes.end()) continue;
    if (std::fabs(*cand - p) <= 1e-13 * std::max(1.0, std::fabs(p)))
      return phase(p) * amplitudes_[static_cast<std::size_t>(cand - nodes.begin())];
  }
  if (p < grid_.lo() || p > grid_.hi()) return 0.0;
  std::ostringstream msg;
  msg << "sampled state is defined only at its nodes; p = " << p << " is not a node";
  throw InvalidArgument(msg.str());
}

std::vector<complex> MomentumState::nodal_amplitudes() const {
  std::vector<complex> out(amplitudes_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phase(grid_.node(i)) * amplitudes_[i];
  return out;
}

double MomentumState::norm() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    acc.add(grid_.weight(i) * std::norm(amplitudes_[i]));
  return acc.value();
}

complex wigner_moyal_nodal(const QuadratureGrid& grid, const std::vector<complex>& amplitudes,
                           const PrecisionSpec& prec, PhasePoint pt) {
  if (amplitudes.size() != grid.size())
    throw InvalidArgument("wigner_moyal: amplitude count differs from node count");
  const double hbar = prec.hbar();
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double q = grid.node(i);
    const complex term = grid.weight(i) * prec.momentum_amplitude(q - pt.p) *
                         std::polar(1.0, pt.x * (q - 0.5 * pt.p) / hbar) * amplitudes[i];
    re.add(term.real());
    im.add(term.imag());
  }
  return complex(re.value(), im.value()) / std::sqrt(2.0 * kPi * hbar);
}

complex wigner_moyal(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt) {
  if (!std::isfinite(pt.x) || !std::isfinite(pt.p)) throw InvalidArgument("phase point must be finite");
  if (state.kind() == MomentumState::Kind::sampled)
    return wigner_moyal_nodal(state.grid(), state.nodal_amplitudes(), prec, pt);

  const double hbar = prec.hbar();
  const double width = kGaussWindow * prec.sigma_tilde();
  const double cutoff = state.momentum_cutoff();
  const double lo = std::max(0.0, pt.p - width);
  const double hi = std::min(cutoff, pt.p + width);
  if (!(lo < hi)) return 0.0;
  const std::size_t panels =
      initial_panels(hi - lo, state.scales().alpha, prec.sigma_tilde(), pt.x / hbar);
  const double max_phase =
      std::fabs(pt.x) * std::max(std::fabs(lo - 0.5 * pt.p), std::fabs(hi - 0.5 * pt.p)) / hbar;
  const complex integral = adaptive_integral(lo, hi, panels, max_phase, "wigner_moyal", [&](double q) {
    return prec.momentum_amplitude(q - pt.p) * std::polar(1.0, pt.x * (q - 0.5 * pt.p) / hbar) *
           state.amplitude(q);
  });
  return integral / std::sqrt(2.0 * kPi * hbar);
}

complex wigner_moyal_position(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt) {
  if (state.kind() != MomentumState::Kind::bm_example || state.time() != 0.0)
    throw InvalidArgument("position-form transform needs the example state at t = 0");
  if (!std::isfinite(pt.x) || !std::isfinite(pt.p)) throw InvalidArgument("phase point must be finite");
  const double hbar = prec.hbar();
  const double alpha = state.scales().alpha;
  if (std::fabs(hbar - state.scales().hbar) > 1e-15 * hbar)
    throw InvalidArgument("precision function and state use different hbar");
  const double width = kGaussWindow * prec.sigma();
  const double lo = 0.5 * pt.x - width;
  const double hi = 0.5 * pt.x + width;
  const double amp_scale = std::sqrt(alpha / hbar);
  const std::size_t panels = initial_panels(hi - lo, hbar / alpha, prec.sigma(), pt.p / hbar);
  const double max_phase = std::fabs(pt.p) * std::max(std::fabs(lo), std::fabs(hi)) / hbar +
                           alpha * std::max(std::fabs(lo + 0.5 * pt.x), std::fabs(hi + 0.5 * pt.x)) / hbar;
  const complex integral =
      adaptive_integral(lo, hi, panels, max_phase, "wigner_moyal_position", [&](double y) {
    return std::polar(1.0, -pt.p * y / hbar) * prec.position_amplitude(y - 0.5 * pt.x) * amp_scale *
           bm_position_amplitude(alpha * (y + 0.5 * pt.x) / hbar);
  });
  return integral / std::sqrt(2.0 * kPi * hbar);
}

double husimi(const MomentumState& state, const PrecisionSpec& prec, PhasePoint pt) {
  return std::norm(wigner_moyal(state, prec, pt));
}

namespace {

constexpr std::size_t kMaxCurrentRefine = 16;

double current_sum(const MomentumState& state, LoopOrder order) {
  const auto& grid = state.grid();
  const std::vector<complex> psi = state.nodal_amplitudes();
  const std::size_t n = grid.size();
  std::vector<complex> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = grid.weight(i) * psi[i];

  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum mag;
  for (std::size_t outer = 0; outer < n; ++outer) {
    for (std::size_t inner = 0; inner < n; ++inner) {
      const std::size_t k = order == LoopOrder::p_outer ? outer : inner;  // p
      const std::size_t l = order == LoopOrder::p_outer ? inner : outer;  // p'
      const complex term = std::conj(a[k]) * a[l] * (grid.node(k) + grid.node(l));
      re.add(term.real());
      im.add(term.imag());
      mag.add(std::abs(term));
    }
  }
  if (std::fabs(im.value()) > 1e-12 * mag.value()) {
    std::ostringstream msg;
    msg << "imaginary residue " << im.value() << " exceeds 1e-12 of " << mag.value();
    throw NumericalError("standard_current", msg.str());
  }
  const auto& sc = state.scales();
  return re.value() / (4.0 * kPi * sc.hbar * sc.mass);
}

}  // namespace

double standard_current_zero(const MomentumState& state, double t, LoopOrder order) {
  const MomentumState evolved = state.at_time(t);
  double j = current_sum(evolved, order);
  if (state.kind() != MomentumState::Kind::bm_example) return j;
  // The free-evolution phase is resolved by the default grid only for small
  // t; keep doubling the panels until two successive grids agree.
  for (std::size_t refine = 2; refine <= kMaxCurrentRefine; refine *= 2) {
    const double fine = current_sum(evolved.refined(refine), order);
    if (std::fabs(fine - j) <= 1e-9 * std::fabs(fine) + 1e-15) return fine;
    j = fine;
  }
  std::ostringstream msg;
  msg << "j(0) at t = " << t << " still changes under grid doubling at " << kMaxCurrentRefine
      << "x the default panels";
  throw QuadratureNotConverged("standard_current", msg.str());
}

}  // namespace qbf
