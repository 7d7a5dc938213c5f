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

// Command-line front end. Exit status: 0 success, 1 a check failed
// (gradcheck, bench result mismatch), 2 usage, parse or validation error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "editprob/decode.hpp"
#include "editprob/ep_core.hpp"
#include "editprob/ep_grad.hpp"
#include "editprob/io.hpp"
#include "editprob/rng.hpp"
#include "editprob/toy_lab.hpp"
#ifdef EDITPROB_WITH_ORACLE
#include "editprob/oracle.hpp"
#endif

namespace {

using namespace editprob;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.12g", v);
  return buf;
}

std::string bodyText(const TargetString& t, const Alphabet& alphabet) {
  std::string out;
  for (int s : t.body()) {
    out += alphabet.symbol(s);
  }
  return out;
}

Lexicon loadLexicon(const std::string& path, const Alphabet& alphabet, bool foldCase) {
  auto build = makeLexicon(io::readLexiconFile(path), alphabet, foldCase);
  for (const auto& word : build.skipped) {
    std::cerr << "warning: skipping lexicon word '" << word << "' (characters outside the alphabet)\n";
  }
  return std::move(build.lexicon);
}

toy::Corpus loadCorpus(const std::string& path, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) {
    throw EpError(ErrorCode::kParseError, "cannot open corpus '" + path + "'");
  }
  return toy::readCorpus(in, alphabet);
}

int runScore(const std::string& emPath, const std::string& target) {
  const auto em = io::readEmissionFile(emPath);
  const auto t = TargetString::parse(target, em.alphabet);
  const double logEp = epScore(em, t);
  std::cout << "log_ep=" << sig12(logEp) << " ep=" << sig12(std::exp(logEp)) << "\n";
  return kExitOk;
}

int runMatrix(const std::string& emPath, const std::string& target, const std::string& outPath) {
  const auto em = io::readEmissionFile(emPath);
  const auto t = TargetString::parse(target, em.alphabet);
  const auto matrix = epForward(em, t);
  const auto best = bestEditPath(em, t);
  if (outPath.empty() || outPath == "-") {
    io::writeMatrixCsv(std::cout, matrix, best);
  } else {
    std::ofstream out(outPath);
    if (!out) {
      throw EpError(ErrorCode::kInvalidArgument, "cannot write '" + outPath + "'");
    }
    io::writeMatrixCsv(out, matrix, best);
  }
  return kExitOk;
}

int runDecode(const std::string& emPath, const std::string& lexPath, double lambda, bool foldCase) {
  const auto em = io::readEmissionFile(emPath);
  Prediction p = [&] {
    if (lexPath.empty()) {
      if (!(lambda >= 0.5 && lambda <= 1.0)) {
        throw EpError(ErrorCode::kLambdaOutOfRange, "lambda must lie in [0.5, 1]");
      }
      return predictFree(em);
    }
    return predictLex(em, loadLexicon(lexPath, em.alphabet, foldCase), lambda);
  }();
  std::cout << "prediction=" << bodyText(p.text, em.alphabet) << " log_ep=" << sig12(p.logScore)
            << " weighted_log_score=" << sig12(p.weightedLogScore)
            << " source=" << (p.source == PredictionSource::kLexicon ? "lexicon" : "free") << "\n";
  return kExitOk;
}

int runBench(const std::string& emPath, const std::string& lexPath, int repeat, double lambda, bool foldCase) {
  if (repeat < 1) {
    throw EpError(ErrorCode::kInvalidArgument, "--repeat must be at least 1");
  }
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const auto em = io::readEmissionFile(emPath);
  const auto lexicon = loadLexicon(lexPath, em.alphabet, foldCase);

  auto t0 = Clock::now();
  const auto trie = LexiconTrie::build(lexicon, em.alphabet);
  const double buildSeconds = seconds(t0, Clock::now());

  double trieSeconds = 0.0;
  double eagerSeconds = 0.0;
  double enumSeconds = 0.0;
  bool same = true;
  std::string result;
  for (int r = 0; r < repeat; ++r) {
    t0 = Clock::now();
    const auto viaTrie = predictLex(em, trie, lambda);
    auto t1 = Clock::now();
    const auto viaEager = predictLex(em, EpTrie(trie, em), lambda);
    auto t2 = Clock::now();
    const auto viaEnum = predictLexEnumerate(em, lexicon, lambda);
    auto t3 = Clock::now();
    trieSeconds += seconds(t0, t1);
    eagerSeconds += seconds(t1, t2);
    enumSeconds += seconds(t2, t3);
    same = same && viaTrie.text == viaEnum.text && viaEager.text == viaEnum.text &&
        viaTrie.logScore == viaEnum.logScore;
    result = bodyText(viaTrie.text, em.alphabet);
  }
  const double trieMs = 1e3 * trieSeconds / repeat;
  const double eagerMs = 1e3 * eagerSeconds / repeat;
  const double enumMs = 1e3 * enumSeconds / repeat;
  std::cout << "words=" << lexicon.size() << " trie_nodes=" << trie.size() << " frames=" << em.length()
            << "\n";
  std::cout << "trie_build_ms=" << 1e3 * buildSeconds << "\n";
  std::cout << "trie_ms_per_query=" << trieMs << "\n";
  std::cout << "eager_trie_ms_per_query=" << eagerMs << "\n";
  std::cout << "enumeration_ms_per_query=" << enumMs << "\n";
  std::cout << "speedup=" << enumMs / trieMs << "\n";
  std::cout << "prediction=" << result << " identical=" << (same ? "yes" : "no") << "\n";
  return same ? kExitOk : kExitCheckFailed;
}

int runGen(const toy::SynthConfig& cfg, int count, const std::string& outPath) {
  const auto corpus = toy::generateCorpus(cfg, count);
  const auto alphabet = toy::toyAlphabet(cfg.alphabetSize);
  if (outPath.empty() || outPath == "-") {
    toy::writeCorpus(std::cout, corpus, alphabet);
  } else {
    std::ofstream out(outPath);
    if (!out) {
      throw EpError(ErrorCode::kInvalidArgument, "cannot write '" + outPath + "'");
    }
    toy::writeCorpus(out, corpus, alphabet);
  }
  return kExitOk;
}

struct TrainArgs {
  std::string corpus;
  std::string heldOut;
  std::string loss = "ep";
  std::string out;
  std::string report;
  int alphabetSize = 6;
  toy::TrainOptions options;
  uint64_t seed = 0;
};

int runTrain(TrainArgs args) {
  const auto alphabet = toy::toyAlphabet(args.alphabetSize);
  const auto corpus = loadCorpus(args.corpus, alphabet);
  if (corpus.empty()) {
    throw EpError(ErrorCode::kInvalidArgument, "training corpus is empty");
  }
  const toy::Corpus heldOut = args.heldOut.empty() ? toy::Corpus{} : loadCorpus(args.heldOut, alphabet);
  args.options.loss = args.loss == "fp" ? toy::LossKind::kFp : toy::LossKind::kEp;
  args.options.seed = args.seed;
  const int dim = static_cast<int>(corpus.front().features.front().size());
  auto model = toy::ToyModel::random(alphabet, dim, args.seed, 0.01);
  auto result = toy::train(std::move(model), corpus, heldOut, args.options);
  const auto report = io::formatReport(result.report, args.options.loss);
  if (!args.out.empty()) {
    io::writeFile(args.out, io::formatModel(result.model));
  }
  if (!args.report.empty()) {
    io::writeFile(args.report, report);
  }
  std::cout << "final_loss=" << sig12(result.report.epochLoss.empty() ? 0.0 : result.report.epochLoss.back());
  if (result.report.finalAccuracy) {
    std::cout << " heldout_accuracy=" << sig12(*result.report.finalAccuracy);
  }
  std::cout << "\n";
  return kExitOk;
}

int runEval(const std::string& modelPath, const std::string& corpusPath, const std::string& lexPath,
            double lambda, bool foldCase) {
  const auto model = io::parseModel(io::readFile(modelPath));
  const auto corpus = loadCorpus(corpusPath, model.alphabet);
  double acc;
  if (lexPath.empty()) {
    acc = toy::evaluate(model, corpus);
  } else {
    const auto lexicon = loadLexicon(lexPath, model.alphabet, foldCase);
    acc = toy::evaluate(model, corpus, &lexicon, lambda);
  }
  std::cout << "accuracy=" << sig12(acc) << " samples=" << corpus.size() << "\n";
  return kExitOk;
}

// Random strictly positive emissions: entries uniform in [0.05, 1], normalized.
EmissionSequence randomEmissions(SplitMix64& rng, int symbols, int frames) {
  auto dist = [&](int size) {
    std::vector<double> v(size);
    double sum = 0.0;
    for (double& x : v) {
      x = 0.05 + 0.95 * rng.uniform();
      sum += x;
    }
    for (double& x : v) {
      x /= sum;
    }
    return v;
  };
  std::string letters;
  for (int k = 0; k + 1 < symbols; ++k) {
    letters.push_back(static_cast<char>('a' + k));
  }
  EmissionSequence em{Alphabet::fromChars(letters), {}, {}};
  for (int j = 0; j < frames; ++j) {
    const auto r = dist(3);
    em.frames.push_back({dist(symbols), {r[0], r[1], r[2]}, dist(symbols)});
  }
  em.finalIns = dist(symbols);
  return em;
}

int runGradcheck(int count, uint64_t seed, double step) {
  SplitMix64 rng(seed);
  double maxRel = 0.0;
  for (int k = 0; k < count; ++k) {
    const int symbols = 2 + static_cast<int>(rng.below(4));
    const int frames = static_cast<int>(rng.below(7));
    auto em = randomEmissions(rng, symbols, frames);
    std::vector<int> body(rng.below(5));
    for (int& c : body) {
      c = static_cast<int>(rng.below(symbols - 1));
    }
    const auto target = TargetString::withEos(body, em.alphabet);
    const auto analytic = epBackward(em, target);

    auto check = [&](double& entry, double grad) {
      const double saved = entry;
      entry = saved + step;
      const double up = -epScore(em, target);
      entry = saved - step;
      const double down = -epScore(em, target);
      entry = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double diff = std::abs(numeric - grad);
      if (diff > 1e-8) {
        maxRel = std::max(maxRel, diff / std::max(std::abs(numeric), std::abs(grad)));
      }
    };
    for (int j = 0; j < frames; ++j) {
      auto& f = em.frames[j];
      const auto& g = analytic.grads.frames[j];
      for (int c = 0; c < symbols; ++c) {
        check(f.y[c], g.dY[c]);
        check(f.ins[c], g.dIns[c]);
      }
      for (int q = 0; q < 3; ++q) {
        check(f.r[q], g.dR[q]);
      }
    }
    for (int c = 0; c < symbols; ++c) {
      check(em.finalIns[c], analytic.grads.dFinalIns[c]);
    }
  }
  std::cout << "instances=" << count << " max_rel_err=" << sig12(maxRel) << "\n";
  return maxRel <= 1e-5 ? kExitOk : kExitCheckFailed;
}

#ifdef EDITPROB_WITH_ORACLE
int runOracle(const std::string& emPath, const std::string& target) {
  const auto em = io::readEmissionFile(emPath);
  const auto t = TargetString::parse(target, em.alphabet);
  const auto paths = oracle::enumeratePaths(em, t);
  std::cout << "paths=" << paths.paths.size() << " total=" << sig12(paths.total)
            << " ep=" << sig12(std::exp(epScore(em, t))) << "\n";
  return kExitOk;
}
#endif

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edit probability scoring, decoding and toy training"};
  app.require_subcommand(1);

  std::string emPath;
  std::string target;
  std::string outPath;
  std::string lexPath;
  double lambda = 1.0;
  bool foldCase = false;
  int repeat = 1;

  auto* score = app.add_subcommand("score", "Print ln EP and EP of a target string");
  score->add_option("emissions", emPath, "Emission file (JSON)")->required();
  score->add_option("target", target, "Target text; EOS is appended when absent")->required();

  auto* matrix = app.add_subcommand("matrix", "Dump the ln ep grid and the best edit path as CSV");
  matrix->add_option("emissions", emPath, "Emission file (JSON)")->required();
  matrix->add_option("target", target, "Target text")->required();
  matrix->add_option("--out", outPath, "Output path (default stdout)");

  auto* decode = app.add_subcommand("decode", "Predict a string, optionally with a lexicon");
  decode->add_option("emissions", emPath, "Emission file (JSON)")->required();
  decode->add_option("--lexicon", lexPath, "Lexicon file, one word per line");
  decode->add_option("--lambda", lambda, "Lexicon trust in [0.5, 1]");
  decode->add_flag("--fold-case", foldCase, "Match lexicon characters case-insensitively");

  auto* bench = app.add_subcommand("bench-lexicon", "Time EP-Trie against per-word enumeration");
  bench->add_option("emissions", emPath, "Emission file (JSON)")->required();
  bench->add_option("lexicon", lexPath, "Lexicon file")->required();
  bench->add_option("--repeat", repeat, "Number of timed queries");
  bench->add_option("--lambda", lambda, "Lexicon trust in [0.5, 1]");
  bench->add_flag("--fold-case", foldCase, "Match lexicon characters case-insensitively");

  toy::SynthConfig synth;
  int count = 1000;
  auto addSynthFlags = [&](CLI::App* cmd) {
    cmd->add_option("--alphabet-size", synth.alphabetSize, "Symbols besides EOS");
    cmd->add_option("--feature-dim", synth.featureDim, "Feature width (0: alphabet size + 1)");
    cmd->add_option("--len-min", synth.lenMin, "Shortest string");
    cmd->add_option("--len-max", synth.lenMax, "Longest string");
    cmd->add_option("--sigma", synth.noiseSigma, "Feature noise standard deviation");
    cmd->add_option("--p-drop", synth.pDrop, "Probability a character has no frame");
    cmd->add_option("--p-dup", synth.pDup, "Probability a character has two frames");
  };
  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  addSynthFlags(gen);
  gen->add_option("--count", count, "Number of samples");
  gen->add_option("--seed", synth.seed, "Generator seed")->required();
  gen->add_option("--out", outPath, "Output path (default stdout)");

  TrainArgs trainArgs;
  auto* trainCmd = app.add_subcommand("train", "Train the toy model with EP or frame-wise loss");
  trainCmd->add_option("--corpus", trainArgs.corpus, "Training corpus")->required();
  trainCmd->add_option("--heldout", trainArgs.heldOut, "Held-out corpus for per-epoch accuracy");
  trainCmd->add_option("--loss", trainArgs.loss, "ep or fp")->check(CLI::IsMember({"ep", "fp"}));
  trainCmd->add_option("--epochs", trainArgs.options.epochs, "Passes over the corpus");
  trainCmd->add_option("--batch", trainArgs.options.batchSize, "Mini-batch size");
  trainCmd->add_option("--rho", trainArgs.options.rho, "ADADELTA decay");
  trainCmd->add_option("--eps", trainArgs.options.eps, "ADADELTA stabilizer");
  trainCmd->add_option("--alphabet-size", trainArgs.alphabetSize, "Symbols besides EOS");
  trainCmd->add_option("--seed", trainArgs.seed, "Initialization and shuffling seed")->required();
  trainCmd->add_option("--out", trainArgs.out, "Model output path");
  trainCmd->add_option("--report", trainArgs.report, "Training report output path");

  std::string modelPath;
  std::string corpusPath;
  auto* eval = app.add_subcommand("eval", "Exact-match accuracy of a trained model");
  eval->add_option("--model", modelPath, "Model file")->required();
  eval->add_option("--corpus", corpusPath, "Corpus to score")->required();
  eval->add_option("--lexicon", lexPath, "Lexicon file");
  eval->add_option("--lambda", lambda, "Lexicon trust in [0.5, 1]");
  eval->add_flag("--fold-case", foldCase, "Match lexicon characters case-insensitively");

  uint64_t seed = 1;
  double step = 1e-6;
  int gradCount = 50;
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare EP gradients with finite differences");
  gradcheck->add_option("--count", gradCount, "Random instances");
  gradcheck->add_option("--seed", seed, "Instance seed");
  gradcheck->add_option("--step", step, "Central difference step");

#ifdef EDITPROB_WITH_ORACLE
  auto* oracleCmd = app.add_subcommand("oracle", "Brute-force path enumeration");
  oracleCmd->group("");
  oracleCmd->add_option("emissions", emPath)->required();
  oracleCmd->add_option("target", target)->required();
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*score) {
      return runScore(emPath, target);
    }
    if (*matrix) {
      return runMatrix(emPath, target, outPath);
    }
    if (*decode) {
      return runDecode(emPath, lexPath, lambda, foldCase);
    }
    if (*bench) {
      return runBench(emPath, lexPath, repeat, lambda, foldCase);
    }
    if (*gen) {
      return runGen(synth, count, outPath);
    }
    if (*trainCmd) {
      return runTrain(trainArgs);
    }
    if (*eval) {
      return runEval(modelPath, corpusPath, lexPath, lambda, foldCase);
    }
    if (*gradcheck) {
      return runGradcheck(gradCount, seed, step);
    }
#ifdef EDITPROB_WITH_ORACLE
    if (*oracleCmd) {
      return runOracle(emPath, target);
    }
#endif
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
