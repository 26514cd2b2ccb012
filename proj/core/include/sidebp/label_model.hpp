#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sidebp {

/// Finite label alphabet with the two community-conditional label
/// distributions: mu for community +, nu for community -.
///
/// Zero entries are allowed on either side (revealed-label models); the
/// log-likelihood ratio of such a label is infinite and callers decide how
/// to treat it (density evolution keeps the infinity, BP clamps it).
class LabelModel {
 public:
  /// Throws ValidationError unless both distributions are nonnegative, sum to
  /// 1 within 1e-12, and label names are nonempty and unique.
  LabelModel(std::vector<std::string> labels, std::vector<double> mu, std::vector<double> nu);

  /// mu = (beta, 1-beta), nu = (1-beta, beta).
  static LabelModel noisy(double beta);
  /// mu = (beta_plus, 1-beta_plus), nu = (1-beta_minus, beta_minus).
  static LabelModel noisy(double beta_plus, double beta_minus);
  /// Labels {reveal+, reveal-, none}: mu = (beta, 0, 1-beta), nu = (0, beta, 1-beta).
  static LabelModel revealed(double beta);
  static LabelModel revealed(double beta_plus, double beta_minus);
  /// Single label carrying no information.
  static LabelModel uninformative();

  /// Parses "noisy:B", "noisy:B1,B2", "revealed:B", "revealed:B1,B2", "none".
  static LabelModel from_preset(std::string_view preset);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& nu() const noexcept { return nu_; }
  double mu(std::size_t label) const { return mu_.at(label); }
  double nu(std::size_t label) const { return nu_.at(label); }

  /// log(mu/nu) computed as log(mu) - log(nu) so that swapping mu and nu
  /// negates it exactly. +-infinity when one side vanishes, 0 when both do.
  double log_ratio(std::size_t label) const;

  /// The same model with mu and nu exchanged.
  LabelModel swapped() const;

  bool operator==(const LabelModel&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> mu_;
  std::vector<double> nu_;
};

/// Total variation distance 1/2 * sum |mu - nu|.
double dtv_labels(const LabelModel& model);

}  // namespace sidebp
