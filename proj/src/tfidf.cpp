// Copyright 2026 The kernelrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "krl/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "krl/errors.hpp"

namespace krl {

std::vector<std::string> tokenize(std::string_view doc) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (char c : doc) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      cur.push_back(c);
    } else if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

TfidfModel fit_tfidf(const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw EmptyCorpusError("tf-idf fit requires a non-empty corpus");

  // Ordered map so vocabulary indices are deterministic.
  std::map<std::string, std::size_t> df;
  for (const std::string& doc : corpus) {
    std::set<std::string> seen;
    for (std::string& tok : tokenize(doc)) seen.insert(std::move(tok));
    for (const std::string& tok : seen) ++df[tok];
  }

  TfidfModel model;
  model.document_count = corpus.size();
  model.idf.reserve(df.size());
  const double n = static_cast<double>(corpus.size());
  int index = 0;
  for (const auto& [token, count] : df) {
    model.vocabulary.emplace(token, index++);
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return model;
}

SparseVector vectorize(const TfidfModel& model, std::string_view doc) {
  std::map<int, double> tf;
  for (const std::string& tok : tokenize(doc)) {
    auto it = model.vocabulary.find(tok);
    if (it != model.vocabulary.end()) tf[it->second] += 1.0;
  }

  SparseVector vec;
  vec.entries.reserve(tf.size());
  double norm_sq = 0.0;
  for (const auto& [index, count] : tf) {
    const double w = count * model.idf[static_cast<std::size_t>(index)];
    vec.entries.emplace_back(index, w);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [index, w] : vec.entries) w *= inv;
  }
  return vec;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [i, w] : a.entries) na += w * w;
  for (const auto& [i, w] : b.entries) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;

  std::size_t ia = 0, ib = 0;
  while (ia < a.entries.size() && ib < b.entries.size()) {
    if (a.entries[ia].first == b.entries[ib].first) {
      dot += a.entries[ia].second * b.entries[ib].second;
      ++ia;
      ++ib;
    } else if (a.entries[ia].first < b.entries[ib].first) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace krl
