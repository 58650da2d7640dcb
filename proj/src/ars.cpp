#include "khmc/ars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace khmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log integral of exp(h0 + dh * (x - x0)) over [a, b], where a or b may be
// infinite provided the slope sign makes the tail integrable.
double log_segment_mass(double x0, double h0, double dh, double a, double b) {
  if (b <= a) return -kInf;
  if (std::abs(dh) < 1e-14) {
    if (std::isinf(a) || std::isinf(b)) throw ArsError("ars: flat unbounded hull segment");
    return h0 + std::log(b - a);
  }
  // integral = exp(h0)/dh * (exp(dh (b - x0)) - exp(dh (a - x0)))
  const double ca = dh * (a - x0);
  const double cb = dh * (b - x0);
  const double top = std::max(ca, cb);  // finite: integrable tails slope away
  if (std::isinf(top)) throw ArsError("ars: divergent hull segment");
  const double lo = std::min(ca, cb);
  const double diff = -std::expm1(lo - top);  // 1 - exp(lo - top), in (0, 1]
  return h0 + top + std::log(diff / std::abs(dh));
}

}  // namespace

ArsSampler::ArsSampler(Fn logdens, Fn dlogdens, double lo, double hi)
    : logdens_(std::move(logdens)), dlogdens_(std::move(dlogdens)) {
  if (!(lo < hi)) throw ArsError("ars: initial abscissae not increasing");
  const double dlo = dlogdens_(lo);
  const double dhi = dlogdens_(hi);
  if (!(dlo > 0.0) || !(dhi < 0.0))
    throw ArsError("ars: failure to bracket mode (need h'(lo) > 0 > h'(hi))");
  xs_ = {lo, hi};
  hs_ = {logdens_(lo), logdens_(hi)};
  dhs_ = {dlo, dhi};
  n_evals_ += 2;
  if (!std::isfinite(hs_[0]) || !std::isfinite(hs_[1]))
    throw ArsError("ars: non-finite log density at initial abscissae");
}

void ArsSampler::reset_counters() {
  n_proposals_ = n_squeeze_accepts_ = n_evals_ = n_refinements_ = 0;
}

void ArsSampler::rebuild() {
  const std::size_t n = xs_.size();
  segments_.assign(n, {});
  // Breakpoints: intersection of consecutive tangents.
  double prev = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    double z;
    if (i + 1 == n) {
      z = kInf;
    } else {
      const double denom = dhs_[i] - dhs_[i + 1];
      if (denom > 1e-14) {
        z = (hs_[i + 1] - hs_[i] - xs_[i + 1] * dhs_[i + 1] + xs_[i] * dhs_[i]) / denom;
        z = std::clamp(z, xs_[i], xs_[i + 1]);
      } else {
        z = 0.5 * (xs_[i] + xs_[i + 1]);  // parallel tangents on a linear stretch
      }
      z = std::max(z, prev);
    }
    segments_[i].lo = prev;
    segments_[i].hi = z;
    segments_[i].log_mass = log_segment_mass(xs_[i], hs_[i], dhs_[i], prev, z);
    prev = z;
  }
  dirty_ = false;
}

double ArsSampler::upper_hull(double x) const {
  // Tangent of the segment containing x.
  std::size_t i = 0;
  while (i + 1 < segments_.size() && x > segments_[i].hi) ++i;
  return hs_[i] + dhs_[i] * (x - xs_[i]);
}

double ArsSampler::lower_hull(double x) const {
  if (x < xs_.front() || x > xs_.back()) return -kInf;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin() - 1);
  if (j + 1 >= xs_.size()) j = xs_.size() - 2;
  const double w = xs_[j + 1] - xs_[j];
  if (w <= 0.0) return hs_[j];
  return (hs_[j] * (xs_[j + 1] - x) + hs_[j + 1] * (x - xs_[j])) / w;
}

void ArsSampler::insert(double x, double h, double dh) {
  if (xs_.size() >= kMaxAbscissae) return;
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const std::size_t idx = static_cast<std::size_t>(it - xs_.begin());
  if (it != xs_.end() && *it == x) return;
  // Concavity witness: derivatives must be nonincreasing left to right.
  if (idx > 0 && dh > dhs_[idx - 1] + kConcavityTol)
    throw ArsError("ars: derivative not monotone (density not log-concave)");
  if (idx < dhs_.size() && dhs_[idx] > dh + kConcavityTol)
    throw ArsError("ars: derivative not monotone (density not log-concave)");
  xs_.insert(it, x);
  hs_.insert(hs_.begin() + idx, h);
  dhs_.insert(dhs_.begin() + idx, dh);
  ++n_refinements_;
  dirty_ = true;
}

double ArsSampler::draw_from_envelope(Rng& rng) const {
  // Pick a segment proportional to its envelope mass.
  double top = -kInf;
  for (const auto& s : segments_) top = std::max(top, s.log_mass);
  double total = 0.0;
  for (const auto& s : segments_) total += std::exp(s.log_mass - top);
  double u = rng.uniform() * total;
  std::size_t i = 0;
  for (; i + 1 < segments_.size(); ++i) {
    u -= std::exp(segments_[i].log_mass - top);
    if (u <= 0.0) break;
  }
  const auto& seg = segments_[i];
  const double a = seg.lo, b = seg.hi;
  const double c = dhs_[i];
  const double v = rng.uniform();
  if (std::abs(c) < 1e-14) return a + v * (b - a);
  // Inverse CDF of exp(c x) restricted to [a, b], anchored at the finite
  // endpoint on the max side for stability.
  if (c > 0.0) {
    const double e = std::isinf(a) ? 0.0 : std::exp(c * (a - b));
    return b + std::log1p((v - 1.0) * (1.0 - e)) / c;
  }
  const double e = std::isinf(b) ? 0.0 : std::exp(c * (b - a));
  return a + std::log1p(v * (e - 1.0)) / c;
}

double ArsSampler::sample(Rng& rng) {
  for (;;) {
    if (dirty_) rebuild();
    const double x = draw_from_envelope(rng);
    ++n_proposals_;
    if (!std::isfinite(x)) throw ArsError("ars: non-finite envelope draw");
    const double ux = upper_hull(x);
    const double logu = std::log(rng.uniform());
    if (logu <= lower_hull(x) - ux) {
      ++n_squeeze_accepts_;
      return x;
    }
    const double hx = logdens_(x);
    const double dhx = dlogdens_(x);
    ++n_evals_;
    if (hx > ux + kConcavityTol * std::max(1.0, std::abs(ux)))
      throw ArsError("ars: log density above upper hull (not log-concave)");
    insert(x, hx, dhx);
    if (logu <= hx - ux) return x;
  }
}

double ars_sample(const ArsSampler::Fn& logdens, const ArsSampler::Fn& dlogdens,
                  std::pair<double, double> init, Rng& rng) {
  ArsSampler s(logdens, dlogdens, init.first, init.second);
  return s.sample(rng);
}

std::pair<double, double> ars_bracket(const ArsSampler::Fn& dlogdens, double scale) {
  if (!(scale > 0.0)) throw ArsError("ars: bracket scale must be positive");
  double lo = -scale, hi = scale;
  for (int i = 0; i < 60 && !(dlogdens(lo) > 0.0); ++i) lo *= 2.0;
  for (int i = 0; i < 60 && !(dlogdens(hi) < 0.0); ++i) hi *= 2.0;
  if (!(dlogdens(lo) > 0.0) || !(dlogdens(hi) < 0.0))
    throw ArsError("ars: failure to bracket mode after 60 doublings");
  return {lo, hi};
}

}  // namespace khmc
