#include "sidebp/tree_monte_carlo.hpp"

#include <algorithm>

#include "sidebp/error.hpp"

namespace sidebp {
namespace {

constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 24;
constexpr std::size_t kMaxLabelsOnStack = 8;

}  // namespace

TreeStatisticSampler::TreeStatisticSampler(const SbmParams& params, const LabelModel& labels,
                                           std::uint32_t depth, double llr_cap)
    : depth_(depth), channel_(bp::ChannelFunctions::make(params, labels, llr_cap)) {
  params.validate();
  if (depth == 0) throw ValidationError("tree depth must be >= 1");
  label_probs_[0] = labels.mu();
  label_probs_[1] = labels.nu();

  const double kernel[2][2] = {{params.p * params.a, (1.0 - params.p) * params.b},
                               {params.p * params.b, (1.0 - params.p) * params.c}};
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      for (std::size_t l = 0; l < labels.size(); ++l) {
        children_[s][t].emplace_back(params.d * kernel[s][t] * label_probs_[t][l]);
      }
    }
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const double rate = params.d * (kernel[s][0] * labels.mu(l) + kernel[s][1] * labels.nu(l));
      leaf_counts_[s].emplace_back(rate);
    }
  }
  for (std::size_t l = 0; l < labels.size(); ++l) {
    leaf_transfer_.push_back(channel_.transfer(channel_.clamp(channel_.h[l] + channel_.w)));
  }

  if (depth < 2) return;
  const std::size_t L = labels.size();
  std::uint64_t entries = L;
  for (std::size_t l = 0; l < L; ++l) {
    const std::uint64_t lo = std::min(leaf_counts_[0][l].lo(), leaf_counts_[1][l].lo());
    const std::uint64_t hi = std::max(leaf_counts_[0][l].hi(), leaf_counts_[1][l].hi());
    count_lo_.push_back(lo);
    count_width_.push_back(hi - lo + 1);
    entries *= hi - lo + 1;
    if (entries > kMaxTableEntries) {
      count_lo_.clear();
      count_width_.clear();
      return;
    }
  }
  message_table_.resize(entries);
  std::vector<std::uint64_t> counts(L);
  for (std::uint64_t index = 0; index < entries; ++index) {
    std::uint64_t rest = index;
    for (std::size_t l = L; l-- > 0;) {
      counts[l] = count_lo_[l] + rest % count_width_[l];
      rest /= count_width_[l];
    }
    message_table_[index] = channel_.transfer(channel_.clamp(leaf_parent_value(rest, counts.data())));
  }
}

double TreeStatisticSampler::leaf_parent_value(std::size_t label, const std::uint64_t* counts) const {
  double value = channel_.h[label] + channel_.w;
  for (std::size_t l = 0; l < leaf_transfer_.size(); ++l) {
    if (counts[l] != 0) value += static_cast<double>(counts[l]) * leaf_transfer_[l];
  }
  return value;
}

std::size_t TreeStatisticSampler::draw_label(int spin_index, Rng& rng) const {
  return sample_categorical(label_probs_[spin_index], rng);
}

double TreeStatisticSampler::children_sum(int spin_index, std::uint32_t remaining, Rng& rng) const {
  double sum = 0.0;
  for (int child = 0; child < 2; ++child) {
    const auto& by_label = children_[spin_index][child];
    for (std::size_t l = 0; l < by_label.size(); ++l) {
      const auto k = by_label[l](rng);
      for (std::uint64_t j = 0; j < k; ++j) sum += message(child, l, remaining, rng);
    }
  }
  return sum;
}

double TreeStatisticSampler::node(int spin_index, std::size_t label, std::uint32_t remaining,
                                  Rng& rng) const {
  if (remaining == 0) return channel_.h[label] + channel_.w;
  if (remaining == 1) {
    std::uint64_t counts[kMaxLabelsOnStack];
    std::vector<std::uint64_t> heap;
    std::uint64_t* k = counts;
    if (leaf_transfer_.size() > kMaxLabelsOnStack) {
      heap.resize(leaf_transfer_.size());
      k = heap.data();
    }
    for (std::size_t l = 0; l < leaf_transfer_.size(); ++l) k[l] = leaf_counts_[spin_index][l](rng);
    return leaf_parent_value(label, k);
  }
  return channel_.h[label] + channel_.w + children_sum(spin_index, remaining - 1, rng);
}

double TreeStatisticSampler::message(int spin_index, std::size_t label, std::uint32_t remaining,
                                     Rng& rng) const {
  if (remaining == 1 && !message_table_.empty()) {
    std::uint64_t index = label;
    for (std::size_t l = 0; l < count_width_.size(); ++l) {
      index = index * count_width_[l] + (leaf_counts_[spin_index][l](rng) - count_lo_[l]);
    }
    return message_table_[index];
  }
  return channel_.transfer(channel_.clamp(node(spin_index, label, remaining, rng)));
}

TreeStatisticSampler::Sample TreeStatisticSampler::operator()(Spin root, Rng& rng) const {
  const int s = root == kPlus ? 0 : 1;
  Sample out;
  const std::size_t label = draw_label(s, rng);
  out.field = channel_.h[label] + channel_.w;
  out.xi = out.field;
  if (depth_ == 1) {
    const auto& counts = leaf_counts_[s];
    for (std::size_t l = 0; l < counts.size(); ++l) {
      const auto k = counts[l](rng);
      if (k != 0) out.xi += static_cast<double>(k) * leaf_transfer_[l];
    }
    return out;
  }
  out.xi += children_sum(s, depth_ - 1, rng);
  return out;
}

}  // namespace sidebp
