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

#include "editprob/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace editprob::io {

using nlohmann::json;

namespace {

[[noreturn]] void parseFail(const std::string& msg) {
  throw EpError(ErrorCode::kParseError, msg);
}

std::vector<double> numbers(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    parseFail(where + ": missing array '" + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) {
      parseFail(where + ": '" + key + "' holds a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

json toJson(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) {
    arr.push_back(v);
  }
  return arr;
}

} // namespace

EmissionSequence parseEmissions(std::string_view text, double tolerance) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parseFail(std::string("emission file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("alphabet") || !doc.at("alphabet").is_array()) {
    parseFail("emission file needs an 'alphabet' array");
  }
  std::vector<std::string> symbols;
  for (const auto& s : doc.at("alphabet")) {
    if (!s.is_string()) {
      parseFail("alphabet entries must be strings");
    }
    symbols.push_back(s.get<std::string>());
  }
  if (!doc.contains("eos") || !doc.at("eos").is_string()) {
    parseFail("emission file needs an 'eos' string");
  }
  const auto eos = doc.at("eos").get<std::string>();
  int eosIndex = -1;
  for (size_t k = 0; k < symbols.size(); ++k) {
    if (symbols[k] == eos) {
      eosIndex = static_cast<int>(k);
    }
  }
  if (eosIndex < 0) {
    parseFail("eos '" + eos + "' is not in the alphabet");
  }

  EmissionSequence em{Alphabet(std::move(symbols), eosIndex), {}, {}};
  if (!doc.contains("frames") || !doc.at("frames").is_array()) {
    parseFail("emission file needs a 'frames' array");
  }
  int index = 0;
  for (const auto& f : doc.at("frames")) {
    const std::string where = "frame " + std::to_string(++index);
    if (!f.is_object()) {
      parseFail(where + " is not an object");
    }
    Frame frame;
    frame.y = numbers(f, "y", where);
    const auto r = numbers(f, "r", where);
    if (r.size() != 3) {
      throw EpError(ErrorCode::kDimensionMismatch, where + ": 'r' must have 3 entries");
    }
    frame.r = {r[0], r[1], r[2]};
    frame.ins = numbers(f, "ins", where);
    em.frames.push_back(std::move(frame));
  }
  em.finalIns = numbers(doc, "final_ins", "emission file");
  return validateEmissions(std::move(em), tolerance);
}

std::string formatEmissions(const EmissionSequence& em) {
  json doc;
  doc["alphabet"] = em.alphabet.symbols();
  doc["eos"] = em.alphabet.symbol(em.alphabet.eos());
  json frames = json::array();
  for (const auto& f : em.frames) {
    frames.push_back({
        {"y", toJson(f.y)},
        {"r", json::array({f.r.consume, f.r.insert, f.r.remove})},
        {"ins", toJson(f.ins)},
    });
  }
  doc["frames"] = std::move(frames);
  doc["final_ins"] = toJson(em.finalIns);
  return doc.dump(1) + "\n";
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    parseFail("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw EpError(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  }
  out << contents;
}

EmissionSequence readEmissionFile(const std::string& path, double tolerance) {
  return parseEmissions(readFile(path), tolerance);
}

void writeEmissionFile(const std::string& path, const EmissionSequence& em) {
  writeFile(path, formatEmissions(em));
}

std::vector<std::string> readLexiconWords(std::istream& in) {
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '%') {
      continue;
    }
    words.push_back(line);
  }
  return words;
}

std::vector<std::string> readLexiconFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    parseFail("cannot open lexicon '" + path + "'");
  }
  return readLexiconWords(in);
}

std::string formatDouble(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v < 0 ? "-inf" : "inf";
  }
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

void writeMatrixCsv(std::ostream& out, const EpMatrix& matrix, const BestPath& best) {
  out << "i\\j";
  for (int j = 0; j <= matrix.frameLen(); ++j) {
    out << ',' << j;
  }
  out << '\n';
  for (int i = 0; i <= matrix.targetLen(); ++i) {
    out << i;
    for (double v : matrix.row(i)) {
      out << ',' << formatDouble(v);
    }
    out << '\n';
  }
  out << '\n' << "op,i,j\n";
  for (const auto& op : best.path) {
    out << editKindName(op.kind) << ',' << op.i << ',' << op.j << '\n';
  }
}

std::string formatModel(const toy::ToyModel& model) {
  auto head = [](const toy::Head& h) {
    return json{{"outputs", h.outputs}, {"inputs", h.inputs}, {"weight", h.weight}, {"bias", h.bias}};
  };
  json doc;
  doc["alphabet"] = model.alphabet.symbols();
  doc["eos"] = model.alphabet.symbol(model.alphabet.eos());
  doc["feature_dim"] = model.featureDim;
  doc["framewise"] = model.framewise;
  doc["y_head"] = head(model.yHead);
  doc["r_head"] = head(model.rHead);
  doc["ins_head"] = head(model.insHead);
  doc["final_scores"] = model.finalScores;
  return doc.dump(1) + "\n";
}

toy::ToyModel parseModel(std::string_view text) {
  try {
    const json doc = json::parse(text);
    auto symbols = doc.at("alphabet").get<std::vector<std::string>>();
    const auto eos = doc.at("eos").get<std::string>();
    const auto it = std::find(symbols.begin(), symbols.end(), eos);
    if (it == symbols.end()) {
      parseFail("model eos is not in its alphabet");
    }
    const int eosIndex = static_cast<int>(it - symbols.begin());
    toy::ToyModel model(Alphabet(std::move(symbols), eosIndex), doc.at("feature_dim").get<int>());
    model.framewise = doc.at("framewise").get<bool>();
    auto readHead = [&](const json& h, toy::Head& dst) {
      auto weight = h.at("weight").get<std::vector<double>>();
      auto bias = h.at("bias").get<std::vector<double>>();
      if (weight.size() != dst.weight.size() || bias.size() != dst.bias.size()) {
        throw EpError(ErrorCode::kDimensionMismatch, "model head has the wrong shape");
      }
      dst.weight = std::move(weight);
      dst.bias = std::move(bias);
    };
    readHead(doc.at("y_head"), model.yHead);
    readHead(doc.at("r_head"), model.rHead);
    readHead(doc.at("ins_head"), model.insHead);
    auto finalScores = doc.at("final_scores").get<std::vector<double>>();
    if (finalScores.size() != model.finalScores.size()) {
      throw EpError(ErrorCode::kDimensionMismatch, "final_scores has the wrong length");
    }
    model.finalScores = std::move(finalScores);
    return model;
  } catch (const json::exception& e) {
    parseFail(std::string("bad model file: ") + e.what());
  }
}

std::string formatReport(const toy::TrainReport& report, toy::LossKind loss) {
  json doc;
  doc["loss"] = loss == toy::LossKind::kEp ? "ep" : "fp";
  doc["epoch_loss"] = report.epochLoss;
  doc["epoch_accuracy"] = report.epochAccuracy;
  doc["final_accuracy"] = report.finalAccuracy ? json(*report.finalAccuracy) : json(nullptr);
  doc["wall_seconds"] = report.wallSeconds;
  return doc.dump(1) + "\n";
}

} // namespace editprob::io
