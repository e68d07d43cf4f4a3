// Copyright 2026 The STT Toolkit Authors.
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

#ifndef STT_ROUGE_H_
#define STT_ROUGE_H_

#include <string>
#include <string_view>
#include <vector>

namespace stt {

// Maximal runs of ASCII letters and digits, lowercased.
std::vector<std::string> TokenizeForRouge(std::string_view text);

// Length of the longest common subsequence of two token sequences.
std::size_t LcsLength(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);

// ROUGE-L F1 between a candidate and a reference: the harmonic mean of
// LCS/|candidate| and LCS/|reference|. Zero when either side has no tokens.
double RougeLF1(std::string_view candidate, std::string_view reference);

}  // namespace stt

#endif  // STT_ROUGE_H_
