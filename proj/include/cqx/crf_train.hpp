// Copyright 2026 The cqx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQX_CRF_TRAIN_HPP_
#define CQX_CRF_TRAIN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cqx/crf.hpp"
#include "cqx/dsgen.hpp"
#include "cqx/error.hpp"
#include "cqx/lbfgs.hpp"
#include "cqx/parallel.hpp"

namespace cqx {

struct TrainingInstance {
  std::vector<std::string> sequence;  // placeholder/lemma sequence
  std::vector<Tag> tags;
};

inline std::vector<TrainingInstance> to_training_instances(
    const std::vector<LabeledSentence>& sentences) {
  std::vector<TrainingInstance> out;
  out.reserve(sentences.size());
  for (const auto& ls : sentences)
    out.push_back({to_placeholder_sequence(ls.sentence), ls.tags});
  return out;
}

inline std::vector<TrainingInstance> to_training_instances(
    const std::vector<TaggedSequence>& sequences) {
  std::vector<TrainingInstance> out;
  out.reserve(sequences.size());
  for (const auto& s : sequences) out.push_back({s.sequence, s.tags});
  return out;
}

struct TrainOptions {
  std::vector<FeatureTemplate> templates = template_set("full");
  // Standard deviation of the Gaussian prior on the weights; the penalty is
  // ||w||^2 / (2 sigma^2).
  double l2_sigma = 1.0;
  int max_iterations = 300;
  double tolerance = 1e-4;
  std::size_t min_feature_frequency = 2;
  std::size_t workers = 1;
};

struct TrainReport {
  int iterations = 0;
  bool converged = false;
  std::string status;
  std::size_t num_features = 0;
  // Penalized conditional log-likelihood; history has one entry per
  // accepted optimizer step.
  double objective = 0.0;
  std::vector<double> objective_history;
};

// Negated L2-penalized conditional log-likelihood of a CRF over encoded
// sequences, with its gradient.
class CrfObjective {
 public:
  // Gradient sums are formed over a fixed number of contiguous blocks and
  // added in block order, so results are bit-identical for any worker count.
  static constexpr std::size_t kBlocks = 16;

  CrfObjective(std::vector<EncodedSequence> inputs,
               std::vector<std::vector<Tag>> outputs, std::size_t num_features,
               double l2_sigma, std::size_t workers = 1)
      : inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        num_features_(num_features),
        l2_sigma_(l2_sigma),
        workers_(workers) {
    if (inputs_.size() != outputs_.size())
      throw InvalidArgument("inputs and outputs differ in length");
    if (!(l2_sigma_ > 0.0)) throw InvalidArgument("l2 sigma must be positive");
  }

  std::size_t dimension() const {
    return CrfModel::parameter_count(num_features_);
  }

  double operator()(std::span<const double> w, std::span<double> grad) const {
    const std::size_t dim = dimension();
    const std::size_t n = inputs_.size();
    const std::size_t blocks = std::min(kBlocks, std::max<std::size_t>(n, 1));
    std::vector<std::vector<double>> block_grad(blocks,
                                                std::vector<double>(dim, 0.0));
    std::vector<double> block_ll(blocks, 0.0);
    const auto tr = crf::transitions(w, num_features_);
    const std::size_t trans_offset = num_features_ * kNumTags;

    parallel_for(blocks, workers_, [&](std::size_t b) {
      auto& g = block_grad[b];
      double ll = 0.0;
      const std::size_t lo = b * n / blocks, hi = (b + 1) * n / blocks;
      for (std::size_t i = lo; i < hi; ++i) {
        const auto& x = inputs_[i];
        const auto& y = outputs_[i];
        if (x.empty()) continue;
        auto e = crf::emission_scores(x, w);
        auto fb = crf::forward_backward(e, tr);
        double score = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) {
          std::size_t yt = tag_index(y[t]);
          score += e[t][yt];
          for (FeatureId f : x[t]) g[f * kNumTags + yt] -= 1.0;
          if (t > 0) {
            std::size_t yp = tag_index(y[t - 1]);
            score += tr[yp * kNumTags + yt];
            g[trans_offset + yp * kNumTags + yt] -= 1.0;
          }
        }
        ll += score - fb.log_z;
        for (std::size_t t = 0; t < x.size(); ++t) {
          for (std::size_t q = 0; q < kNumTags; ++q) {
            double m = std::exp(fb.alpha[t][q] + fb.beta[t][q] - fb.log_z);
            for (FeatureId f : x[t]) g[f * kNumTags + q] += m;
            if (t == 0) continue;
            for (std::size_t p = 0; p < kNumTags; ++p)
              g[trans_offset + p * kNumTags + q] +=
                  std::exp(fb.alpha[t - 1][p] + tr[p * kNumTags + q] + e[t][q] +
                           fb.beta[t][q] - fb.log_z);
          }
        }
      }
      block_ll[b] = ll;
    });

    const double inv_var = 1.0 / (l2_sigma_ * l2_sigma_);
    double ll = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) ll += block_ll[b];
    double penalty = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      double sum = 0.0;
      for (std::size_t b = 0; b < blocks; ++b) sum += block_grad[b][k];
      grad[k] = sum + w[k] * inv_var;
      penalty += w[k] * w[k];
    }
    return -ll + 0.5 * penalty * inv_var;
  }

 private:
  std::vector<EncodedSequence> inputs_;
  std::vector<std::vector<Tag>> outputs_;
  std::size_t num_features_;
  double l2_sigma_;
  std::size_t workers_;
};

struct FeatureDictionary {
  std::vector<std::string> names;  // sorted
  std::map<std::string, FeatureId> ids;
};

// Features seen at least `min_frequency` times across the data.
inline FeatureDictionary build_feature_dictionary(
    std::span<const TrainingInstance> data,
    std::span<const FeatureTemplate> templates, std::size_t min_frequency) {
  std::map<std::string, std::size_t> counts;
  for (const auto& inst : data)
    for (std::size_t t = 0; t < inst.sequence.size(); ++t)
      for (auto& f : extract_features(inst.sequence, t, templates)) ++counts[f];
  FeatureDictionary dict;
  for (const auto& [name, c] : counts) {
    if (c < min_frequency) continue;
    dict.ids.emplace(name, static_cast<FeatureId>(dict.names.size()));
    dict.names.push_back(name);
  }
  return dict;
}

struct TrainedModel {
  CrfModel model;
  TrainReport report;
};

// Maximum-likelihood estimation with L2 regularization via L-BFGS. Refuses
// data without any COUNT tag, since that can only yield a model that never
// predicts a mention.
inline TrainedModel train(std::span<const TrainingInstance> data,
                          const Relation& relation,
                          const TrainOptions& options = {}) {
  if (data.empty()) throw InvalidArgument("no training data");
  bool any_count = false;
  for (const auto& inst : data) {
    if (inst.sequence.size() != inst.tags.size())
      throw InvalidArgument("tag sequence length differs from token count");
    for (Tag t : inst.tags) any_count |= (t == Tag::Count);
  }
  if (!any_count)
    throw InvalidArgument(
        "training data has no COUNT tags; refusing to train a degenerate "
        "model");

  auto dict = build_feature_dictionary(data, options.templates,
                                       options.min_feature_frequency);
  std::vector<EncodedSequence> inputs;
  std::vector<std::vector<Tag>> outputs;
  inputs.reserve(data.size());
  for (const auto& inst : data) {
    EncodedSequence x(inst.sequence.size());
    for (std::size_t t = 0; t < inst.sequence.size(); ++t)
      for (const auto& f : extract_features(inst.sequence, t, options.templates))
        if (auto it = dict.ids.find(f); it != dict.ids.end())
          x[t].push_back(it->second);
    inputs.push_back(std::move(x));
    outputs.push_back(inst.tags);
  }
  CrfObjective objective(std::move(inputs), std::move(outputs),
                         dict.names.size(), options.l2_sigma, options.workers);
  LbfgsOptions lbfgs;
  lbfgs.max_iterations = options.max_iterations;
  lbfgs.tolerance = options.tolerance;
  auto result = lbfgs_minimize(objective,
                               std::vector<double>(objective.dimension(), 0.0),
                               lbfgs);
  TrainReport report;
  report.iterations = result.iterations;
  report.converged = result.converged;
  report.status = result.status;
  report.num_features = dict.names.size();
  report.objective = -result.value;
  for (double v : result.history) report.objective_history.push_back(-v);
  return {CrfModel(std::move(dict.names), std::move(result.x), options.templates,
                   options.l2_sigma, relation),
          std::move(report)};
}

}  // namespace cqx

#endif  // CQX_CRF_TRAIN_HPP_
