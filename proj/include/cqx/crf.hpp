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

#ifndef CQX_CRF_HPP_
#define CQX_CRF_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cqx/error.hpp"
#include "cqx/kbstore.hpp"
#include "cqx/mentions.hpp"
#include "cqx/sentence.hpp"
#include "cqx/tags.hpp"

namespace cqx {

struct FeatureTemplate {
  enum class Kind { TokenNgram, TagBigram };
  Kind kind = Kind::TokenNgram;
  int length = 1;  // n-gram length, 1..5
  int start = 0;   // offset of the first token relative to the position

  static FeatureTemplate ngram(int length, int start) {
    return {Kind::TokenNgram, length, start};
  }
  static FeatureTemplate tag_bigram() { return {Kind::TagBigram, 2, -1}; }

  friend bool operator==(const FeatureTemplate&,
                         const FeatureTemplate&) = default;
};

inline constexpr int kMaxNgram = 5;

// Every n-gram of length 1..max_len lying inside [-window, +window], plus the
// tag-bigram template.
inline std::vector<FeatureTemplate> ngram_templates(int max_len, int window) {
  std::vector<FeatureTemplate> out;
  for (int n = 1; n <= max_len; ++n)
    for (int start = -window; start + n - 1 <= window; ++start)
      out.push_back(FeatureTemplate::ngram(n, start));
  out.push_back(FeatureTemplate::tag_bigram());
  return out;
}

// Named template sets: "full" (n <= 5, window +-4) and "compact" (n <= 3,
// window +-2).
inline std::vector<FeatureTemplate> template_set(std::string_view name) {
  if (name == "full") return ngram_templates(kMaxNgram, 4);
  if (name == "compact") return ngram_templates(3, 2);
  throw InvalidArgument("unknown template set '" + std::string(name) +
                        "' (expected full or compact)");
}

inline constexpr std::string_view kBos = "BOS";
inline constexpr std::string_view kEos = "EOS";

// Feature string for one n-gram template at `position`. The offset is written
// in brackets unless the n-gram is centered on the position:
//   U5:trump|have|CARDINAL|child|from    U1[-1]:BOS
inline std::string feature_string(std::span<const std::string> sequence,
                                  std::size_t position,
                                  const FeatureTemplate& tmpl) {
  std::string out = "U" + std::to_string(tmpl.length);
  bool centered = tmpl.length % 2 == 1 && tmpl.start == -(tmpl.length - 1) / 2;
  if (!centered) out += "[" + std::to_string(tmpl.start) + "]";
  out += ':';
  const auto n = static_cast<std::ptrdiff_t>(sequence.size());
  for (int k = 0; k < tmpl.length; ++k) {
    std::ptrdiff_t at = static_cast<std::ptrdiff_t>(position) + tmpl.start + k;
    if (k > 0) out += '|';
    if (at < 0)
      out += kBos;
    else if (at >= n)
      out += kEos;
    else
      out += sequence[static_cast<std::size_t>(at)];
  }
  return out;
}

inline std::vector<std::string> extract_features(
    std::span<const std::string> sequence, std::size_t position,
    std::span<const FeatureTemplate> templates) {
  std::vector<std::string> out;
  out.reserve(templates.size());
  for (const auto& t : templates)
    if (t.kind == FeatureTemplate::Kind::TokenNgram)
      out.push_back(feature_string(sequence, position, t));
  return out;
}

using FeatureId = std::uint32_t;
// Feature ids active at each position of a sequence.
using EncodedSequence = std::vector<std::vector<FeatureId>>;
// Per-position, per-tag values (scores or probabilities).
using TagMatrix = std::vector<std::array<double, kNumTags>>;

namespace detail {

inline double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace detail

// Linear-chain CRF over {COUNT, COMP, O}. Weights hold one value per
// (feature, tag) pair followed by the 3x3 tag-transition matrix.
class CrfModel {
 public:
  CrfModel() = default;

  CrfModel(std::vector<std::string> feature_names, std::vector<double> weights,
           std::vector<FeatureTemplate> templates, double l2_sigma,
           Relation relation)
      : feature_names_(std::move(feature_names)),
        weights_(std::move(weights)),
        templates_(std::move(templates)),
        l2_sigma_(l2_sigma),
        relation_(std::move(relation)) {
    if (weights_.size() != parameter_count(feature_names_.size()))
      throw InvalidArgument("weight vector size does not match feature count");
    index_.reserve(feature_names_.size());
    for (std::size_t i = 0; i < feature_names_.size(); ++i) {
      if (!index_.emplace(feature_names_[i], static_cast<FeatureId>(i)).second)
        throw InvalidArgument("duplicate feature '" + feature_names_[i] + "'");
    }
  }

  static std::size_t parameter_count(std::size_t num_features) {
    return num_features * kNumTags + kNumTags * kNumTags;
  }

  std::size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::span<const double> weights() const { return weights_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  double l2_sigma() const { return l2_sigma_; }
  const Relation& relation() const { return relation_; }

  std::optional<FeatureId> feature_id(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  double state_weight(FeatureId f, Tag y) const {
    return weights_[f * kNumTags + tag_index(y)];
  }

  double transition(Tag from, Tag to) const {
    return weights_[num_features() * kNumTags + tag_index(from) * kNumTags +
                    tag_index(to)];
  }

  // Known feature ids per position; unseen features are dropped.
  EncodedSequence encode(std::span<const std::string> sequence) const {
    EncodedSequence out(sequence.size());
    for (std::size_t t = 0; t < sequence.size(); ++t)
      for (const auto& tmpl : templates_)
        if (tmpl.kind == FeatureTemplate::Kind::TokenNgram)
          if (auto id = feature_id(feature_string(sequence, t, tmpl)))
            out[t].push_back(*id);
    return out;
  }

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> weights_;
  std::vector<FeatureTemplate> templates_;
  double l2_sigma_ = 1.0;
  Relation relation_;
  std::unordered_map<std::string, FeatureId> index_;
};

// Inference kernels over a raw parameter vector laid out like CrfModel's.
// Training evaluates them at trial weights without building models.
namespace crf {

inline TagMatrix emission_scores(const EncodedSequence& x,
                                 std::span<const double> w) {
  TagMatrix e(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    e[t].fill(0.0);
    for (FeatureId f : x[t])
      for (std::size_t y = 0; y < kNumTags; ++y) e[t][y] += w[f * kNumTags + y];
  }
  return e;
}

inline std::array<double, kNumTags * kNumTags> transitions(
    std::span<const double> w, std::size_t num_features) {
  std::array<double, kNumTags * kNumTags> tr{};
  std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(num_features * kNumTags),
              kNumTags * kNumTags, tr.begin());
  return tr;
}

struct ForwardBackward {
  TagMatrix alpha;  // log
  TagMatrix beta;   // log
  double log_z = 0.0;
};

inline ForwardBackward forward_backward(
    const TagMatrix& e, const std::array<double, kNumTags * kNumTags>& tr) {
  const std::size_t n = e.size();
  ForwardBackward fb;
  fb.alpha.resize(n);
  fb.beta.resize(n);
  if (n == 0) return fb;
  std::array<double, kNumTags> buf{};
  fb.alpha[0] = e[0];
  for (std::size_t t = 1; t < n; ++t)
    for (std::size_t y = 0; y < kNumTags; ++y) {
      for (std::size_t p = 0; p < kNumTags; ++p)
        buf[p] = fb.alpha[t - 1][p] + tr[p * kNumTags + y];
      fb.alpha[t][y] = e[t][y] + detail::log_sum_exp(buf);
    }
  fb.beta[n - 1].fill(0.0);
  for (std::size_t t = n - 1; t-- > 0;)
    for (std::size_t y = 0; y < kNumTags; ++y) {
      for (std::size_t q = 0; q < kNumTags; ++q)
        buf[q] = tr[y * kNumTags + q] + e[t + 1][q] + fb.beta[t + 1][q];
      fb.beta[t][y] = detail::log_sum_exp(buf);
    }
  fb.log_z = detail::log_sum_exp(fb.alpha[n - 1]);
  return fb;
}

inline TagMatrix node_marginals(const ForwardBackward& fb) {
  TagMatrix m(fb.alpha.size());
  for (std::size_t t = 0; t < m.size(); ++t)
    for (std::size_t y = 0; y < kNumTags; ++y)
      m[t][y] = std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
  return m;
}

inline std::vector<Tag> viterbi(
    const TagMatrix& e, const std::array<double, kNumTags * kNumTags>& tr) {
  const std::size_t n = e.size();
  if (n == 0) return {};
  TagMatrix delta(n);
  std::vector<std::array<std::size_t, kNumTags>> back(n);
  delta[0] = e[0];
  for (std::size_t t = 1; t < n; ++t)
    for (std::size_t y = 0; y < kNumTags; ++y) {
      std::size_t best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < kNumTags; ++p) {
        double s = delta[t - 1][p] + tr[p * kNumTags + y];
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      delta[t][y] = best_score + e[t][y];
      back[t][y] = best;
    }
  std::size_t last = static_cast<std::size_t>(
      std::max_element(delta[n - 1].begin(), delta[n - 1].end()) -
      delta[n - 1].begin());
  std::vector<Tag> path(n);
  for (std::size_t t = n; t-- > 0;) {
    path[t] = static_cast<Tag>(last);
    if (t > 0) last = back[t][last];
  }
  return path;
}

}  // namespace crf

inline std::vector<Tag> decode(const CrfModel& model,
                               std::span<const std::string> sequence) {
  auto e = crf::emission_scores(model.encode(sequence), model.weights());
  return crf::viterbi(e, crf::transitions(model.weights(), model.num_features()));
}

inline std::vector<Tag> decode(const CrfModel& model, const Sentence& sentence) {
  return decode(model, to_placeholder_sequence(sentence));
}

// Per-position tag probabilities from forward-backward in log space.
inline TagMatrix marginals(const CrfModel& model,
                           std::span<const std::string> sequence) {
  auto e = crf::emission_scores(model.encode(sequence), model.weights());
  return crf::node_marginals(crf::forward_backward(
      e, crf::transitions(model.weights(), model.num_features())));
}

inline TagMatrix marginals(const CrfModel& model, const Sentence& sentence) {
  return marginals(model, to_placeholder_sequence(sentence));
}

inline double log_partition(const CrfModel& model,
                            std::span<const std::string> sequence) {
  auto e = crf::emission_scores(model.encode(sequence), model.weights());
  return crf::forward_backward(
             e, crf::transitions(model.weights(), model.num_features()))
      .log_z;
}

// Model file: line-based text, fields separated by tabs.
//
//   cqx-crf <version>
//   relation  <class> <property> <label>
//   l2_sigma  <real>
//   tags      COUNT COMP O
//   templates <k>, then k lines `ngram <len> <start>` or `bigram`
//   transitions <9 reals, row = previous tag>
//   features  <F>, then F lines `<name> <w_COUNT> <w_COMP> <w_O>`
//   end
//
// Reals use the shortest round-trip decimal form, so save/load is exact.
inline constexpr std::string_view kModelMagic = "cqx-crf";
inline constexpr int kModelVersion = 1;

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelError("corrupt model file: bad number '" + std::string(s) + "'");
  return v;
}

inline long parse_long(std::string_view s) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelError("corrupt model file: bad integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace detail

inline void save_model(const CrfModel& model, std::ostream& out) {
  out << kModelMagic << '\t' << kModelVersion << '\n';
  const auto& rel = model.relation();
  out << "relation\t" << rel.subject_class << '\t' << rel.property << '\t'
      << rel.label << '\n';
  out << "l2_sigma\t" << detail::format_double(model.l2_sigma()) << '\n';
  out << "tags";
  for (Tag t : kAllTags) out << '\t' << to_string(t);
  out << '\n';
  out << "templates\t" << model.templates().size() << '\n';
  for (const auto& t : model.templates()) {
    if (t.kind == FeatureTemplate::Kind::TagBigram)
      out << "bigram\n";
    else
      out << "ngram\t" << t.length << '\t' << t.start << '\n';
  }
  out << "transitions";
  for (Tag from : kAllTags)
    for (Tag to : kAllTags)
      out << '\t' << detail::format_double(model.transition(from, to));
  out << '\n';
  out << "features\t" << model.num_features() << '\n';
  for (std::size_t f = 0; f < model.num_features(); ++f) {
    out << model.feature_names()[f];
    for (Tag y : kAllTags)
      out << '\t'
          << detail::format_double(
                 model.state_weight(static_cast<FeatureId>(f), y));
    out << '\n';
  }
  out << "end\n";
}

inline void save_model(const CrfModel& model,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path.string());
  save_model(model, out);
  if (!out) throw IoError("write failure on " + path.string());
}

inline CrfModel load_model(std::istream& in) {
  std::string line;
  auto next = [&](std::string_view what) {
    if (!std::getline(in, line))
      throw ModelError("corrupt model file: truncated before " +
                       std::string(what));
    return detail::split_tabs(line);
  };
  auto header = next("header");
  if (header.size() != 2 || header[0] != kModelMagic)
    throw ModelError("not a cqx model file");
  if (detail::parse_long(header[1]) != kModelVersion)
    throw ModelError("unsupported model version " + header[1] +
                     " (expected " + std::to_string(kModelVersion) + ")");
  auto rel = next("relation");
  if (rel.size() != 4 || rel[0] != "relation")
    throw ModelError("corrupt model file: bad relation line");
  Relation relation{rel[1], rel[2], rel[3]};
  auto sigma = next("l2_sigma");
  if (sigma.size() != 2 || sigma[0] != "l2_sigma")
    throw ModelError("corrupt model file: bad l2_sigma line");
  double l2_sigma = detail::parse_double(sigma[1]);
  auto tags = next("tags");
  if (tags != std::vector<std::string>{"tags", "COUNT", "COMP", "O"})
    throw ModelError("corrupt model file: unexpected tag set");
  auto tmpl_header = next("templates");
  if (tmpl_header.size() != 2 || tmpl_header[0] != "templates")
    throw ModelError("corrupt model file: bad templates line");
  long num_templates = detail::parse_long(tmpl_header[1]);
  std::vector<FeatureTemplate> templates;
  for (long i = 0; i < num_templates; ++i) {
    auto t = next("template");
    if (t.size() == 1 && t[0] == "bigram") {
      templates.push_back(FeatureTemplate::tag_bigram());
    } else if (t.size() == 3 && t[0] == "ngram") {
      auto len = static_cast<int>(detail::parse_long(t[1]));
      if (len < 1 || len > kMaxNgram)
        throw ModelError("corrupt model file: n-gram length out of range");
      templates.push_back(FeatureTemplate::ngram(
          len, static_cast<int>(detail::parse_long(t[2]))));
    } else {
      throw ModelError("corrupt model file: bad template line");
    }
  }
  auto trans = next("transitions");
  if (trans.size() != 1 + kNumTags * kNumTags || trans[0] != "transitions")
    throw ModelError("corrupt model file: bad transitions line");
  auto feat_header = next("features");
  if (feat_header.size() != 2 || feat_header[0] != "features")
    throw ModelError("corrupt model file: bad features line");
  long num_features = detail::parse_long(feat_header[1]);
  if (num_features < 0) throw ModelError("corrupt model file: negative count");
  std::vector<std::string> names;
  std::vector<double> weights;
  names.reserve(static_cast<std::size_t>(num_features));
  weights.reserve(CrfModel::parameter_count(static_cast<std::size_t>(num_features)));
  for (long f = 0; f < num_features; ++f) {
    auto row = next("feature weights");
    if (row.size() != 1 + kNumTags)
      throw ModelError("corrupt model file: bad feature line " +
                       std::to_string(f));
    names.push_back(row[0]);
    for (std::size_t y = 0; y < kNumTags; ++y)
      weights.push_back(detail::parse_double(row[1 + y]));
  }
  for (std::size_t k = 0; k < kNumTags * kNumTags; ++k)
    weights.push_back(detail::parse_double(trans[1 + k]));
  auto end = next("end marker");
  if (end.size() != 1 || end[0] != "end")
    throw ModelError("corrupt model file: missing end marker");
  try {
    return CrfModel(std::move(names), std::move(weights), std::move(templates),
                    l2_sigma, std::move(relation));
  } catch (const InvalidArgument& e) {
    throw ModelError(std::string("corrupt model file: ") + e.what());
  }
}

inline CrfModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  return load_model(in);
}

}  // namespace cqx

#endif  // CQX_CRF_HPP_
