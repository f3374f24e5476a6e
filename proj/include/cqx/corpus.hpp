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

#ifndef CQX_CORPUS_HPP_
#define CQX_CORPUS_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <json.hpp>

#include "cqx/error.hpp"
#include "cqx/kbstore.hpp"

namespace cqx {

// Subject id -> document text. Records sharing a subject are concatenated.
using Corpus = std::map<EntityId, std::string>;

// JSON-lines, one `{"subject": id, "text": string}` record per line.
inline Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  Corpus corpus;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(number) + ": " +
                        e.what());
    }
    if (!record.is_object() || !record.contains("subject") ||
        !record.contains("text") || !record["text"].is_string())
      throw FormatError(path.string() + ":" + std::to_string(number) +
                        ": expected {\"subject\": id, \"text\": string}");
    const auto& subject_field = record["subject"];
    std::string subject = subject_field.is_string()
                              ? subject_field.get<std::string>()
                              : subject_field.dump();
    auto& text = corpus[subject];
    if (!text.empty()) text += '\n';
    text += record["text"].get<std::string>();
  }
  return corpus;
}

inline void write_corpus(const std::filesystem::path& path,
                         const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  for (const auto& [subject, text] : corpus)
    out << nlohmann::json{{"subject", subject}, {"text", text}}.dump() << '\n';
}

}  // namespace cqx

#endif  // CQX_CORPUS_HPP_
