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

// A desk-scale recognizer: synthetic frame sequences whose frames can drop
// out or repeat, a frame-local softmax model with output, alignment and
// insertion heads, and EP versus frame-wise training with ADADELTA.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "editprob/decode.hpp"
#include "editprob/ep_grad.hpp"
#include "editprob/types.hpp"

namespace editprob::toy {

struct SynthConfig {
  int alphabetSize = 6; // symbols besides EOS
  int featureDim = 0; // 0 means alphabetSize + 1
  int lenMin = 3;
  int lenMax = 8;
  double noiseSigma = 0.3;
  double pDrop = 0.0; // a character's frame is omitted
  double pDup = 0.0; // a character's frame is repeated
  uint64_t seed = 1;

  int resolvedFeatureDim() const {
    return featureDim > 0 ? featureDim : alphabetSize + 1;
  }
  void validate() const;
};

/// Lower-case letters a.. followed by '#'.
Alphabet toyAlphabet(int alphabetSize);

struct Sample {
  std::vector<std::vector<double>> features; // one row per frame
  TargetString target;
  int droppedChars = 0;
  int duplicatedChars = 0;
};

using Corpus = std::vector<Sample>;

/**
 * Each sample draws a string uniformly, appends EOS and renders every
 * character as a one-hot plus N(0, sigma^2) noise. Each non-EOS character
 * independently loses its frame with pDrop and gains a second frame with
 * pDup. Deterministic in the seed.
 */
Corpus generateCorpus(const SynthConfig& cfg, int count);

/// Corpus text format: frames as comma-separated decimals joined by ';',
/// a tab, then the target string.
void writeCorpus(std::ostream& out, const Corpus& corpus, const Alphabet& alphabet);
Corpus readCorpus(std::istream& in, const Alphabet& alphabet);

/// Row-major affine map in -> out.
struct Head {
  int outputs = 0;
  int inputs = 0;
  std::vector<double> weight;
  std::vector<double> bias;

  Head() = default;
  Head(int out, int in) : outputs(out), inputs(in), weight(static_cast<size_t>(out) * in, 0.0), bias(out, 0.0) {}
};

struct ToyModel {
  Alphabet alphabet;
  int featureDim;
  Head yHead;
  Head rHead; // scores in (C, I, D) order
  Head insHead;
  std::vector<double> finalScores;
  // Frame-wise models have no alignment heads: they emit r = (1, 0, 0).
  bool framewise = false;

  ToyModel(Alphabet alphabet, int featureDim);

  /// Weights drawn from N(0, scale^2); biases zero.
  static ToyModel random(Alphabet alphabet, int featureDim, uint64_t seed, double scale);

  /// Every trainable array in a fixed order.
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;
  size_t parameterCount() const;
};

EmissionSequence forwardModel(const ToyModel& model, const std::vector<std::vector<double>>& features);

/**
 * Frame-wise loss -sum_{j <= min(|T|, n)} ln y_j(T_j). Positions past n are
 * dropped. Alignment and insertion entries get zero gradient.
 */
LossAndGradients fpLoss(const EmissionSequence& em, const TargetString& target);

enum class LossKind { kEp, kFp };

struct SampleLoss {
  double loss;
  ToyModel grads; // same shape as the model
};

/// Loss of one sample and its gradient with respect to every model weight.
SampleLoss sampleLoss(const ToyModel& model, const Sample& sample, LossKind kind);

/// Loss only.
double sampleLossValue(const ToyModel& model, const Sample& sample, LossKind kind);

struct TrainOptions {
  LossKind loss = LossKind::kEp;
  int epochs = 30;
  int batchSize = 32;
  double rho = 0.95;
  double eps = 1e-6;
  double learningRate = 1.0;
  uint64_t seed = 1;
};

struct TrainReport {
  std::vector<double> epochLoss; // mean per-sample loss
  std::vector<double> epochAccuracy; // held-out exact match, if a set was given
  std::optional<double> finalAccuracy;
  double wallSeconds = 0.0;
};

struct TrainResult {
  ToyModel model;
  TrainReport report;
};

/// ADADELTA over shuffled mini-batches; single-threaded and deterministic.
TrainResult train(ToyModel model, const Corpus& corpus, const Corpus& heldOut, const TrainOptions& options);

/// Exact-match accuracy of lexicon-free or lexicon-weighted predictions.
double evaluate(
    const ToyModel& model,
    const Corpus& corpus,
    const Lexicon* lexicon = nullptr,
    double lambda = 1.0);

/// Fraction of samples whose best edit path uses only consumptions.
double diagonalPathFraction(const ToyModel& model, const Corpus& corpus);

/// Lexicon of the distinct ground-truth words in `corpus`.
Lexicon groundTruthLexicon(const Corpus& corpus, const Alphabet& alphabet);

} // namespace editprob::toy
