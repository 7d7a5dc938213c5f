// Copyright 2026 The editprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "editprob/ep_core.hpp"
#include "editprob/toy_lab.hpp"

namespace editprob::io {

/**
 * Emission files are JSON documents:
 *
 *   {"alphabet": ["A", "#"], "eos": "#",
 *    "frames": [{"y": [...], "r": [C, I, D], "ins": [...]}, ...],
 *    "final_ins": [...]}
 *
 * Parsing validates (and renormalizes) with the given tolerance.
 */
EmissionSequence parseEmissions(std::string_view text, double tolerance = kDefaultSumTolerance);
std::string formatEmissions(const EmissionSequence& em);

EmissionSequence readEmissionFile(const std::string& path, double tolerance = kDefaultSumTolerance);
void writeEmissionFile(const std::string& path, const EmissionSequence& em);

/// One word per line; blank lines and lines starting with '%' are ignored.
std::vector<std::string> readLexiconWords(std::istream& in);
std::vector<std::string> readLexiconFile(const std::string& path);

/// Grid of ln ep values (header j = 0..n, one row per i, "-inf" for zero),
/// a blank line, then the best path as "op,i,j" lines.
void writeMatrixCsv(std::ostream& out, const EpMatrix& matrix, const BestPath& best);

/// Shortest decimal that round-trips, or "-inf"/"inf"/"nan".
std::string formatDouble(double v);

std::string formatModel(const toy::ToyModel& model);
toy::ToyModel parseModel(std::string_view text);

std::string formatReport(const toy::TrainReport& report, toy::LossKind loss);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, std::string_view contents);

} // namespace editprob::io
