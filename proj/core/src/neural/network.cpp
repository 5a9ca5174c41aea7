#include "emocpm/neural/network.hpp"

#include <algorithm>

#include "emocpm/data/corpus.hpp"
#include "emocpm/error.hpp"

namespace emocpm::neural {

namespace {

constexpr std::size_t data_components = data::kNumComponents;

std::uint64_t role_seed(std::uint64_t seed, std::string_view role) {
  return derive_seed(seed, fnv1a64(role));
}

Rng role_rng(std::uint64_t seed, std::string_view role) { return Rng(role_seed(seed, role)); }

ad::Var maybe_dropout(const ad::Var& x, double rate, Rng* rng) {
  if (!rng || rate == 0.0) return x;
  return ad::dropout(x, rate, true, *rng);
}

}  // namespace

DropoutStreams::DropoutStreams(std::uint64_t seed)
    : trunk_emo(role_seed(seed, "dropout:trunk.emo")),
      trunk_cpm(role_seed(seed, "dropout:trunk.cpm")),
      head_emo(role_seed(seed, "dropout:head.emo")),
      head_cpm(role_seed(seed, "dropout:head.cpm")),
      cpm_input(role_seed(seed, "dropout:cpmin")),
      combined(role_seed(seed, "dropout:comb")) {}

Trunk::Trunk(ad::ParameterSet& params, const std::string& name, std::size_t input_dim,
             std::size_t units, const std::vector<std::size_t>& kernels, std::size_t filters,
             Rng& init)
    : lstm(params, name + ".lstm", input_dim, units, init),
      conv(params, name + ".conv", 2 * units, kernels, filters, init) {}

ad::Var Trunk::operator()(const ad::Var& x, double rate, Rng* dropout) const {
  auto h = maybe_dropout(lstm(x), rate, dropout);
  const auto maps = conv(h, true);
  return maybe_dropout(ad::max_over_time(maps), rate, dropout);
}

Head::Head(ad::ParameterSet& params, const std::string& name, std::size_t in, std::size_t hidden,
           std::size_t out_dim, Rng& init)
    : fc(params, name + ".fc", in, hidden, init), out(params, name + ".out", hidden, out_dim, init) {}

ad::Var Head::operator()(const ad::Var& x, double rate, Rng* dropout) const {
  auto h = maybe_dropout(ad::relu(fc(x)), rate, dropout);
  return ad::sigmoid(out(h));
}

Network::Network(NeuralTag tag, const ModelConfig& config, std::size_t input_dim,
                 std::size_t num_emotions, const std::optional<ModelConfig>& submodel_config)
    : tag_(tag), config_(config), sub_config_(submodel_config), input_dim_(input_dim),
      num_emotions_(num_emotions) {
  config.validate(tag);
  if (input_dim == 0) throw ConfigError("network input dimension must be >= 1");
  if (has_emotion_head() && num_emotions == 0) throw ConfigError("emotion inventory is empty");
  const auto seed = config.seed;
  const auto& ks = config.kernel_sizes;

  auto emo_trunk = [&](const std::string& name) {
    auto rng = role_rng(seed, "init:trunk.emo");
    trunk_emo_ = Trunk(params_, name, input_dim, config.bilstm_units, ks, config.cnn_filters, rng);
  };
  auto cpm_trunk = [&] {
    auto rng = role_rng(seed, "init:trunk.cpm");
    trunk_cpm_ = Trunk(params_, "cpm.trunk", input_dim, config.bilstm_units_cpm, ks,
                       config.cnn_filters_cpm, rng);
  };
  auto emo_head = [&](std::size_t in) {
    auto rng = role_rng(seed, "init:head.emo");
    head_emo_ = Head(params_, "emo", in, config.fc_neurons_emo, num_emotions, rng);
  };
  auto cpm_head = [&](std::size_t in) {
    auto rng = role_rng(seed, "init:head.cpm");
    head_cpm_ = Head(params_, "cpm", in, config.fc_neurons_cpm, data_components, rng);
  };

  switch (tag) {
    case NeuralTag::EmoNnBase:
      emo_trunk("emo.trunk");
      emo_head(trunk_emo_.pooled_dim());
      break;
    case NeuralTag::CpmNnBase:
      cpm_trunk();
      cpm_head(trunk_cpm_.pooled_dim());
      break;
    case NeuralTag::MtlMh:
      emo_trunk("shared.trunk");
      emo_head(trunk_emo_.pooled_dim());
      cpm_head(trunk_emo_.pooled_dim());
      break;
    case NeuralTag::MtlXs: {
      emo_trunk("emo.trunk");
      cpm_trunk();
      const std::size_t pe = trunk_emo_.pooled_dim(), pc = trunk_cpm_.pooled_dim();
      std::size_t width = pe;
      if (pe != pc) {
        // Unequal trunks are mapped to a shared width before mixing.
        width = std::max(pe, pc);
        auto rng = role_rng(seed, "init:proj");
        proj_emo_ = ad::Linear(params_, "emo.proj", pe, width, rng);
        proj_cpm_ = ad::Linear(params_, "cpm.proj", pc, width, rng);
      }
      if (config.per_channel_alpha) {
        alpha_ = params_.add("xs.alpha", {2, 2 * width});
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t t = 0; t < 2; ++t)
            for (std::size_t ch = 0; ch < width; ++ch)
              alpha_->data()[r * 2 * width + t * width + ch] = r == t ? 0.9 : 0.1;
      } else {
        alpha_ = params_.add("xs.alpha", {2, 2});
        alpha_->data() = {0.9, 0.1, 0.1, 0.9};
      }
      if (config.freeze_alpha) params_.freeze_prefix("xs.alpha");
      emo_head(width);
      cpm_head(width);
      break;
    }
    case NeuralTag::EmoCpmNnGold:
    case NeuralTag::EmoCpmNnPred: {
      emo_trunk("emo.trunk");
      {
        auto rng = role_rng(seed, "init:head.emo");
        emo_fc_ = ad::Linear(params_, "emo.fc", trunk_emo_.pooled_dim(), config.fc_neurons_emo, rng);
      }
      std::size_t cpm_width = data_components;
      if (config.fc_neurons_cpm > 0) {
        auto rng = role_rng(seed, "init:cpmin");
        cpmin_fc_ = ad::Linear(params_, "cpmin.fc", data_components, config.fc_neurons_cpm, rng);
        cpm_width = config.fc_neurons_cpm;
      }
      auto rng = role_rng(seed, "init:comb");
      comb_fc_ = ad::Linear(params_, "comb.fc", config.fc_neurons_emo + cpm_width,
                            config.fc_neurons_combined, rng);
      emo_out_ = ad::Linear(params_, "emo.out", config.fc_neurons_combined, num_emotions, rng);
      if (tag == NeuralTag::EmoCpmNnPred) {
        if (!submodel_config) throw ConfigError("emo-cpm-nn-pred needs the cpm-nn-base configuration");
        submodel_config->validate(NeuralTag::CpmNnBase);
        const auto& sc = *submodel_config;
        auto trunk_rng = role_rng(sc.seed, "init:trunk.cpm");
        sub_trunk_ = Trunk(params_, "sub.cpm.trunk", input_dim, sc.bilstm_units_cpm, sc.kernel_sizes,
                           sc.cnn_filters_cpm, trunk_rng);
        auto head_rng = role_rng(sc.seed, "init:head.cpm");
        sub_head_ = Head(params_, "sub.cpm", sub_trunk_.pooled_dim(), sc.fc_neurons_cpm,
                         data_components, head_rng);
        params_.freeze_prefix("sub.");
      }
      break;
    }
  }
}

void Network::load_submodel(const Network& cpm_model) {
  if (tag_ != NeuralTag::EmoCpmNnPred) throw StateError("only emo-cpm-nn-pred has a submodel");
  if (cpm_model.tag() != NeuralTag::CpmNnBase || !cpm_model.has_cpm_head())
    throw ConfigError("the submodel of emo-cpm-nn-pred must be a cpm-nn-base with a 5-way head");
  if (cpm_model.input_dim() != input_dim_)
    throw ShapeError("submodel input dimension " + std::to_string(cpm_model.input_dim()) +
                     " differs from " + std::to_string(input_dim_));
  std::size_t expected = 0;
  for (const auto& p : params_.items())
    if (p.name.starts_with("sub.")) ++expected;
  const auto copied = params_.copy_from(cpm_model.params(), "", "sub.");
  if (copied != expected)
    throw ConfigError("submodel shapes do not match the configured cpm-nn-base (" +
                      std::to_string(copied) + " of " + std::to_string(expected) + " tensors)");
}

ad::Var Network::inject(const ad::Var& pooled, const ad::Var& cpm, double rate,
                        DropoutStreams* d) const {
  auto h_emo = maybe_dropout(ad::relu(emo_fc_(pooled)), rate, d ? &d->head_emo : nullptr);
  ad::Var h_cpm = cpm;
  if (cpmin_fc_.weight()) h_cpm = maybe_dropout(ad::relu(cpmin_fc_(cpm)), rate, d ? &d->cpm_input : nullptr);
  const ad::Var parts[] = {h_emo, h_cpm};
  auto h = maybe_dropout(ad::relu(comb_fc_(ad::concat_cols(parts))), rate, d ? &d->combined : nullptr);
  return ad::sigmoid(emo_out_(h));
}

ForwardOutput Network::forward(const ad::Var& x, std::span<const double> gold_cpm,
                               DropoutStreams* d) const {
  if (x->cols() != input_dim_) {
    throw ShapeError("network expects inputs with " + std::to_string(input_dim_) +
                     " columns, got " + ad::shape_string(x->shape()));
  }
  const double rate = d ? config_.dropout_rate : 0.0;
  ForwardOutput out;
  switch (tag_) {
    case NeuralTag::EmoNnBase:
      out.emotion = head_emo_(trunk_emo_(x, rate, d ? &d->trunk_emo : nullptr), rate,
                              d ? &d->head_emo : nullptr);
      break;
    case NeuralTag::CpmNnBase:
      out.cpm = head_cpm_(trunk_cpm_(x, rate, d ? &d->trunk_cpm : nullptr), rate,
                          d ? &d->head_cpm : nullptr);
      break;
    case NeuralTag::MtlMh: {
      const auto pooled = trunk_emo_(x, rate, d ? &d->trunk_emo : nullptr);
      out.emotion = head_emo_(pooled, rate, d ? &d->head_emo : nullptr);
      out.cpm = head_cpm_(pooled, rate, d ? &d->head_cpm : nullptr);
      break;
    }
    case NeuralTag::MtlXs: {
      auto pe = trunk_emo_(x, rate, d ? &d->trunk_emo : nullptr);
      auto pc = trunk_cpm_(x, rate, d ? &d->trunk_cpm : nullptr);
      if (proj_emo_.weight()) {
        pe = proj_emo_(pe);
        pc = proj_cpm_(pc);
      }
      out.emotion = head_emo_(ad::cross_stitch(pe, pc, alpha_, 0), rate, d ? &d->head_emo : nullptr);
      out.cpm = head_cpm_(ad::cross_stitch(pe, pc, alpha_, 1), rate, d ? &d->head_cpm : nullptr);
      break;
    }
    case NeuralTag::EmoCpmNnGold: {
      if (gold_cpm.size() != data_components)
        throw ShapeError("emo-cpm-nn-gold needs 5 component flags, got " + std::to_string(gold_cpm.size()));
      const auto cpm = ad::tensor({1, data_components}, {gold_cpm.begin(), gold_cpm.end()});
      out.emotion = inject(trunk_emo_(x, rate, d ? &d->trunk_emo : nullptr), cpm, rate, d);
      break;
    }
    case NeuralTag::EmoCpmNnPred: {
      // The frozen component network runs in inference mode; its output is
      // a constant for everything downstream.
      const auto cpm = ad::detach(sub_head_(sub_trunk_(x, 0.0, nullptr), 0.0, nullptr));
      out.emotion = inject(trunk_emo_(x, rate, d ? &d->trunk_emo : nullptr), cpm, rate, d);
      break;
    }
  }
  return out;
}

ad::Var Network::loss(const ForwardOutput& out, std::span<const double> emotion_targets,
                      std::span<const double> cpm_targets) const {
  std::vector<ad::Var> terms;
  if (out.emotion && config_.task_weight_emo != 0.0) {
    auto l = ad::weighted_bce(out.emotion, emotion_targets, config_.loss_weight_emo);
    terms.push_back(config_.task_weight_emo == 1.0 ? l : ad::scale(l, config_.task_weight_emo));
  }
  if (out.cpm && config_.task_weight_cpm != 0.0) {
    auto l = ad::weighted_bce(out.cpm, cpm_targets, config_.loss_weight_cpm);
    terms.push_back(config_.task_weight_cpm == 1.0 ? l : ad::scale(l, config_.task_weight_cpm));
  }
  if (terms.empty()) throw ConfigError("every task weight of " + std::string(to_string(tag_)) + " is zero");
  return terms.size() == 1 ? terms[0] : ad::add_n(terms);
}

}  // namespace emocpm::neural
