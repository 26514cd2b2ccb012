#include "sidebp/label_model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "sidebp/error.hpp"

namespace sidebp {
namespace {

void check_distribution(const std::vector<double>& dist, const char* name) {
  double sum = 0.0;
  for (double v : dist) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " has a negative or non-finite entry");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError(std::string(name) + " sums to " + std::to_string(sum) + ", expected 1");
  }
}

double check_beta(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("label preset parameter must lie in [0, 1]");
  }
  return beta;
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ValidationError("cannot parse preset number '" + std::string(token) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

LabelModel::LabelModel(std::vector<std::string> labels, std::vector<double> mu,
                       std::vector<double> nu)
    : labels_(std::move(labels)), mu_(std::move(mu)), nu_(std::move(nu)) {
  if (labels_.empty()) throw ValidationError("label model needs at least one label");
  if (mu_.size() != labels_.size() || nu_.size() != labels_.size()) {
    throw ValidationError("mu and nu must have one entry per label");
  }
  std::set<std::string> unique(labels_.begin(), labels_.end());
  if (unique.size() != labels_.size()) throw ValidationError("label names must be unique");
  for (const auto& name : labels_) {
    if (name.empty()) throw ValidationError("label names must be nonempty");
  }
  check_distribution(mu_, "mu");
  check_distribution(nu_, "nu");
}

LabelModel LabelModel::noisy(double beta) { return noisy(beta, beta); }

LabelModel LabelModel::noisy(double beta_plus, double beta_minus) {
  check_beta(beta_plus);
  check_beta(beta_minus);
  return LabelModel({"l1", "l2"}, {beta_plus, 1.0 - beta_plus}, {1.0 - beta_minus, beta_minus});
}

LabelModel LabelModel::revealed(double beta) { return revealed(beta, beta); }

LabelModel LabelModel::revealed(double beta_plus, double beta_minus) {
  check_beta(beta_plus);
  check_beta(beta_minus);
  return LabelModel({"reveal+", "reveal-", "none"}, {beta_plus, 0.0, 1.0 - beta_plus},
                    {0.0, beta_minus, 1.0 - beta_minus});
}

LabelModel LabelModel::uninformative() { return LabelModel({"none"}, {1.0}, {1.0}); }

LabelModel LabelModel::from_preset(std::string_view preset) {
  if (preset == "none") return uninformative();
  const auto colon = preset.find(':');
  if (colon == std::string_view::npos) {
    throw ValidationError("unknown label preset '" + std::string(preset) + "'");
  }
  const auto kind = preset.substr(0, colon);
  const auto values = parse_numbers(preset.substr(colon + 1));
  if (values.empty() || values.size() > 2) {
    throw ValidationError("label preset takes one or two parameters");
  }
  const double first = values[0];
  const double second = values.size() == 2 ? values[1] : values[0];
  if (kind == "noisy") return noisy(first, second);
  if (kind == "revealed") return revealed(first, second);
  throw ValidationError("unknown label preset kind '" + std::string(kind) + "'");
}

double LabelModel::log_ratio(std::size_t label) const {
  const double m = mu_.at(label);
  const double n = nu_.at(label);
  if (m == 0.0 && n == 0.0) return 0.0;
  if (n == 0.0) return std::numeric_limits<double>::infinity();
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(m) - std::log(n);
}

LabelModel LabelModel::swapped() const { return LabelModel(labels_, nu_, mu_); }

double dtv_labels(const LabelModel& model) {
  double sum = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) sum += std::abs(model.mu(k) - model.nu(k));
  return 0.5 * sum;
}

}  // namespace sidebp
