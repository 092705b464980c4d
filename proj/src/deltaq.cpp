#include "dqwifi/deltaq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dqwifi {
namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kQuantileSlack = 1e-12;

void require_valid_delay(Micros d) {
  if (!std::isfinite(d) || d < 0.0) {
    throw std::invalid_argument("delay must be finite and non-negative, got " +
                                std::to_string(d));
  }
}

// Sorts by delay and merges equal delays. Zero-mass atoms are dropped.
std::vector<Atom> normalise(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.delay < b.delay; });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (a.mass == 0.0) continue;
    if (!out.empty() && out.back().delay == a.delay) {
      out.back().mass += a.mass;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

std::vector<Atom> coalesce_atoms(const std::vector<Atom>& atoms, Micros eps) {
  if (eps <= 0.0 || atoms.empty()) return atoms;
  std::vector<Atom> out;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const Micros start = atoms[i].delay;
    Atom merged{start, 0.0};
    while (i < atoms.size() && atoms[i].delay - start <= eps) {
      merged.delay = atoms[i].delay;
      merged.mass += atoms[i].mass;
      ++i;
    }
    out.push_back(merged);
  }
  return out;
}

}  // namespace

DeltaQ::DeltaQ() = default;

DeltaQ DeltaQ::from_atoms(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    require_valid_delay(a.delay);
    if (!(a.mass >= 0.0)) throw std::invalid_argument("atom mass must be >= 0");
  }
  DeltaQ d;
  d.atoms_ = normalise(std::move(atoms));
  double delivered = 0.0;
  for (const Atom& a : d.atoms_) delivered += a.mass;
  if (delivered > 1.0 + kMassTolerance) {
    throw std::invalid_argument("delivered mass exceeds 1: " +
                                std::to_string(delivered));
  }
  d.delivered_ = std::min(1.0, delivered);
  return d;
}

DeltaQ DeltaQ::with_delivered(std::vector<Atom> atoms, double delivered) {
  DeltaQ d = from_atoms(std::move(atoms));
  d.delivered_ = delivered;
  return d;
}

DeltaQ DeltaQ::point_mass(Micros delay) {
  require_valid_delay(delay);
  DeltaQ d;
  d.atoms_ = {Atom{delay, 1.0}};
  d.delivered_ = 1.0;
  return d;
}

DeltaQ DeltaQ::from_samples(std::vector<Micros> delays, std::size_t losses) {
  if (delays.empty() && losses == 0) {
    throw std::invalid_argument("from_samples needs at least one observation");
  }
  for (Micros d : delays) require_valid_delay(d);
  std::sort(delays.begin(), delays.end());
  DeltaQ d;
  d.form_ = Form::Samples;
  d.samples_ = std::move(delays);
  d.losses_ = losses;
  const auto total = static_cast<double>(d.samples_.size() + losses);
  d.delivered_ = static_cast<double>(d.samples_.size()) / total;
  return d;
}

double DeltaQ::cdf(Micros delay) const {
  if (form_ == Form::Samples) {
    const auto n = std::upper_bound(samples_.begin(), samples_.end(), delay) -
                   samples_.begin();
    return static_cast<double>(n) /
           static_cast<double>(samples_.size() + losses_);
  }
  if (!atoms_.empty() && delay >= atoms_.back().delay) return delivered_;
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    if (a.delay > delay) break;
    acc += a.mass;
  }
  return acc;
}

QuantileEstimate DeltaQ::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0,1)");
  }
  QuantileEstimate est{q, 0.0, false};
  if (form_ == Form::Samples) {
    const auto total = static_cast<double>(samples_.size() + losses_);
    const auto rank = static_cast<std::size_t>(
        std::max(1.0, std::ceil(q * total - kMassTolerance)));
    if (rank > samples_.size()) return est;
    est.value = samples_[rank - 1];
    est.defined = true;
    return est;
  }
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    acc += a.mass;
    if (acc >= q - kQuantileSlack) {
      est.value = a.delay;
      est.defined = true;
      return est;
    }
  }
  return est;
}

Micros DeltaQ::mean_delivered() const {
  if (form_ == Form::Samples) {
    if (samples_.empty()) {
      throw std::domain_error("mean_delivered of an all-loss distribution");
    }
    const double sum = std::accumulate(samples_.begin(), samples_.end(), 0.0);
    return sum / static_cast<double>(samples_.size());
  }
  double mass = 0.0;
  double weighted = 0.0;
  for (const Atom& a : atoms_) {
    mass += a.mass;
    weighted += a.mass * a.delay;
  }
  if (mass <= 0.0) {
    throw std::domain_error("mean_delivered of an all-loss distribution");
  }
  return weighted / mass;
}

std::vector<Atom> DeltaQ::atoms() const {
  if (form_ == Form::Atoms) return atoms_;
  std::vector<Atom> out;
  const auto total = static_cast<double>(samples_.size() + losses_);
  std::size_t i = 0;
  while (i < samples_.size()) {
    std::size_t j = i;
    while (j < samples_.size() && samples_[j] == samples_[i]) ++j;
    out.push_back(Atom{samples_[i], static_cast<double>(j - i) / total});
    i = j;
  }
  return out;
}

DeltaQ DeltaQ::coalesced(Micros epsilon) const {
  if (epsilon <= 0.0) return *this;
  DeltaQ d;
  d.atoms_ = coalesce_atoms(atoms(), epsilon);
  d.delivered_ = delivered_;
  return d;
}

DeltaQ convolve(const DeltaQ& a, const DeltaQ& b, Micros epsilon) {
  const std::vector<Atom> left = a.atoms();
  const std::vector<Atom> right = b.atoms();
  std::vector<Atom> out;
  out.reserve(left.size() * right.size());
  for (const Atom& x : left) {
    for (const Atom& y : right) {
      out.push_back(Atom{x.delay + y.delay, x.mass * y.mass});
    }
  }
  // Survival multiplies; keep it exact rather than re-deriving from sums.
  return DeltaQ::with_delivered(std::move(out),
                                a.delivered_mass() * b.delivered_mass())
      .coalesced(epsilon);
}

DeltaQ mixture(std::span<const std::pair<double, DeltaQ>> components,
               Micros epsilon) {
  if (components.empty()) {
    throw std::invalid_argument("mixture of zero components");
  }
  double weight_sum = 0.0;
  for (const auto& [w, _] : components) {
    if (!(w > 0.0)) throw std::invalid_argument("mixture weights must be > 0");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kMassTolerance) {
    throw std::invalid_argument("mixture weights sum to " +
                                std::to_string(weight_sum) + ", expected 1");
  }
  if (components.size() == 1) return components.front().second.coalesced(epsilon);

  std::vector<Atom> out;
  double delivered = 0.0;
  for (const auto& [w, dq] : components) {
    for (const Atom& a : dq.atoms()) out.push_back(Atom{a.delay, w * a.mass});
    delivered += w * dq.delivered_mass();
  }
  return DeltaQ::with_delivered(std::move(out), delivered).coalesced(epsilon);
}

double ks_distance(const DeltaQ& a, const DeltaQ& b) {
  const std::vector<Atom> left = a.atoms();
  const std::vector<Atom> right = b.atoms();
  double fa = 0.0;
  double fb = 0.0;
  double worst = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < left.size() || j < right.size()) {
    Micros x;
    if (j == right.size() || (i < left.size() && left[i].delay <= right[j].delay)) {
      x = left[i].delay;
    } else {
      x = right[j].delay;
    }
    while (i < left.size() && left[i].delay == x) fa += left[i++].mass;
    while (j < right.size() && right[j].delay == x) fb += right[j++].mass;
    worst = std::max(worst, std::abs(fa - fb));
  }
  return worst;
}

}  // namespace dqwifi
