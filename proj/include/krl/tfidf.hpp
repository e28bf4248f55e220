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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace krl {

// Sparse TF-IDF vector: (index, weight) pairs sorted by index, weights >= 0,
// no duplicate indices.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;

  bool is_zero() const { return entries.empty(); }
};

// Immutable after fit; shareable across threads.
struct TfidfModel {
  std::unordered_map<std::string, int> vocabulary;  // token -> dense index
  std::vector<double> idf;                          // by index
  std::size_t document_count = 0;
};

// Lowercases, splits on non-alphanumeric (ASCII), drops tokens shorter than
// two characters. No stemming, no stop words.
std::vector<std::string> tokenize(std::string_view doc);

// idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the given corpus. Throws
// EmptyCorpusError when the corpus has no documents.
TfidfModel fit_tfidf(const std::vector<std::string>& corpus);

// tf * idf over in-vocabulary tokens, L2-normalized. Out-of-vocabulary tokens
// are ignored; a document with none in vocabulary maps to the zero vector.
SparseVector vectorize(const TfidfModel& model, std::string_view doc);

// Cosine similarity in [0, 1]; zero vectors compare as 0 by convention.
double cosine(const SparseVector& a, const SparseVector& b);

}  // namespace krl
