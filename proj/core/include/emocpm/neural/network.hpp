#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "emocpm/autodiff/layers.hpp"
#include "emocpm/autodiff/parameter.hpp"
#include "emocpm/neural/config.hpp"
#include "emocpm/random.hpp"

namespace emocpm::neural {

// Independent dropout streams, one per architectural role, so that the
// masks drawn for one branch do not depend on which other branches exist.
struct DropoutStreams {
  explicit DropoutStreams(std::uint64_t seed);
  Rng trunk_emo, trunk_cpm, head_emo, head_cpm, cpm_input, combined;
};

struct ForwardOutput {
  ad::Var emotion;  // [1×C] probabilities, null without an emotion head
  ad::Var cpm;      // [1×5] probabilities, null without a component head
};

// BiLSTM -> dropout -> multi-kernel CNN -> ReLU -> max over time -> dropout.
struct Trunk {
  Trunk() = default;
  Trunk(ad::ParameterSet& params, const std::string& name, std::size_t input_dim,
        std::size_t units, const std::vector<std::size_t>& kernels, std::size_t filters, Rng& init);
  ad::Var operator()(const ad::Var& x, double rate, Rng* dropout) const;
  std::size_t pooled_dim() const { return conv.pooled_dim(); }

  ad::BiLstm lstm;
  ad::MultiKernelConv conv;
};

// FC -> ReLU -> dropout -> output layer -> sigmoid.
struct Head {
  Head() = default;
  Head(ad::ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden,
       std::size_t out, Rng& init);
  ad::Var operator()(const ad::Var& x, double rate, Rng* dropout) const;

  ad::Linear fc, out;
};

// One of the six neural architectures, parameters named by role:
//   emo.trunk / cpm.trunk / shared.trunk   encoders
//   emo.fc, emo.out / cpm.fc, cpm.out      task heads
//   cpmin.fc, comb.fc                      component injection (gold, pred)
//   sub.*                                  frozen cpm-nn-base (pred)
//   emo.proj, cpm.proj, xs.alpha           cross-stitch (mtl-xs)
// Initialisation draws come from per-role streams of config.seed, so
// equally configured parts of different architectures start identical.
class Network {
 public:
  // `submodel_config` is required for emo-cpm-nn-pred and sizes the
  // frozen component network.
  Network(NeuralTag tag, const ModelConfig& config, std::size_t input_dim,
          std::size_t num_emotions, const std::optional<ModelConfig>& submodel_config = std::nullopt);

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  // x is T×input_dim with T >= 1. gold_cpm is used by emo-cpm-nn-gold and
  // must then have five entries. dropout == nullptr means inference.
  ForwardOutput forward(const ad::Var& x, std::span<const double> gold_cpm,
                        DropoutStreams* dropout) const;

  // task_weight_emo·wbce(emotion) + task_weight_cpm·wbce(cpm) over the heads
  // present; a task with zero weight is left out of the graph.
  ad::Var loss(const ForwardOutput& out, std::span<const double> emotion_targets,
               std::span<const double> cpm_targets) const;

  // Copies a trained cpm-nn-base into sub.* (emo-cpm-nn-pred only).
  void load_submodel(const Network& cpm_model);

  NeuralTag tag() const noexcept { return tag_; }
  const ModelConfig& config() const noexcept { return config_; }
  const std::optional<ModelConfig>& submodel_config() const noexcept { return sub_config_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t num_emotions() const noexcept { return num_emotions_; }
  bool has_emotion_head() const noexcept { return tag_ != NeuralTag::CpmNnBase; }
  bool has_cpm_head() const noexcept {
    return tag_ == NeuralTag::CpmNnBase || tag_ == NeuralTag::MtlMh || tag_ == NeuralTag::MtlXs;
  }
  ad::ParameterSet& params() noexcept { return params_; }
  const ad::ParameterSet& params() const noexcept { return params_; }
  // Present only for mtl-xs.
  ad::Var alpha() const { return alpha_; }
  bool has_projection() const noexcept { return static_cast<bool>(proj_emo_.weight()); }

 private:
  ad::Var inject(const ad::Var& pooled, const ad::Var& cpm, double rate, DropoutStreams* d) const;

  NeuralTag tag_;
  ModelConfig config_;
  std::optional<ModelConfig> sub_config_;
  std::size_t input_dim_, num_emotions_;
  ad::ParameterSet params_;

  Trunk trunk_emo_, trunk_cpm_;
  Head head_emo_, head_cpm_;
  // Component injection.
  ad::Linear emo_fc_, cpmin_fc_, comb_fc_, emo_out_;
  Trunk sub_trunk_;
  Head sub_head_;
  // Cross-stitch.
  ad::Linear proj_emo_, proj_cpm_;
  ad::Var alpha_;
};

}  // namespace emocpm::neural
