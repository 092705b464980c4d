#pragma once

// Quality attenuation (Delta-Q) values: improper latency distributions with
// an explicit loss mass, and the two composition operators used to build
// them up from per-transition delays.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dqwifi {

/// Delay in microseconds.
using Micros = double;

/// One point of delivered probability mass.
struct Atom {
  Micros delay = 0.0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct QuantileEstimate {
  double q = 0.0;
  Micros value = 0.0;
  bool defined = false;
};

/// An improper latency distribution.
///
/// Two storage forms share the query interface: an atom list (exact, used by
/// the algebra and the exhaustive evaluator) and an empirical sample set
/// (what Monte Carlo runs produce). Values are immutable once built.
class DeltaQ {
 public:
  enum class Form { Atoms, Samples };

  /// The all-loss distribution: nothing is ever delivered.
  DeltaQ();

  /// Builds an atom-form value. Atoms with equal delay are merged; masses
  /// must be non-negative and sum to at most 1 (the rest is loss).
  static DeltaQ from_atoms(std::vector<Atom> atoms);

  static DeltaQ point_mass(Micros delay);
  static DeltaQ all_loss() { return DeltaQ(); }

  /// Empirical distribution of `delays` plus `losses` packets that never
  /// arrived. Rejects an input with no observations at all.
  static DeltaQ from_samples(std::vector<Micros> delays, std::size_t losses);

  Form form() const { return form_; }
  bool is_samples() const { return form_ == Form::Samples; }

  double loss_mass() const { return 1.0 - delivered_; }
  double delivered_mass() const { return delivered_; }

  /// Probability of delivery within `delay` (inclusive).
  double cdf(Micros delay) const;

  /// Smallest delay at which the CDF reaches q. Undefined when q exceeds
  /// the delivered mass. Throws std::invalid_argument unless 0 < q < 1.
  QuantileEstimate quantile(double q) const;

  /// Mean over delivered outcomes only. Throws std::domain_error when
  /// nothing is delivered.
  Micros mean_delivered() const;

  /// Atom view. Sample form converts exactly: each distinct sample value
  /// becomes an atom carrying its multiplicity share of delivered mass.
  std::vector<Atom> atoms() const;

  /// Sorted delivered samples (sample form only, empty otherwise).
  std::span<const Micros> samples() const { return samples_; }
  std::size_t sample_count() const { return samples_.size(); }
  std::size_t loss_count() const { return losses_; }

  /// Merges neighbouring atoms closer than `epsilon` microseconds. Each
  /// merged group is placed at its largest delay, so the coalesced CDF never
  /// exceeds the original.
  DeltaQ coalesced(Micros epsilon) const;

 private:
  friend DeltaQ convolve(const DeltaQ&, const DeltaQ&, Micros);
  friend DeltaQ mixture(std::span<const std::pair<double, DeltaQ>>, Micros);

  // Atom form with the delivered mass supplied by the caller, so identities
  // like (da * db) survive without re-summing atoms.
  static DeltaQ with_delivered(std::vector<Atom> atoms, double delivered);

  Form form_ = Form::Atoms;
  std::vector<Atom> atoms_;      // Atoms form: sorted, unique delays
  std::vector<Micros> samples_;  // Samples form: sorted ascending
  std::size_t losses_ = 0;
  double delivered_ = 0.0;
};

/// Sequential composition. Delivered parts convolve; survival multiplies.
/// `epsilon` > 0 coalesces the result (see DeltaQ::coalesced).
DeltaQ convolve(const DeltaQ& a, const DeltaQ& b, Micros epsilon = 0.0);

/// Probabilistic choice between alternatives. Weights must be positive and
/// sum to 1 within 1e-9.
DeltaQ mixture(std::span<const std::pair<double, DeltaQ>> components,
               Micros epsilon = 0.0);

/// Largest absolute CDF difference over the union of both supports.
double ks_distance(const DeltaQ& a, const DeltaQ& b);

}  // namespace dqwifi
