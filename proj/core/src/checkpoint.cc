// Copyright 2026 The ndotomo Authors
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

#include "ndotomo/checkpoint.h"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ndotomo {

namespace {

using nlohmann::json;

json matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

RealMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw std::invalid_argument(std::string("checkpoint: '") + what + "' must have " +
                                std::to_string(rows) + " rows");
  }
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument(std::string("checkpoint: '") + what + "' row " +
                                  std::to_string(i) + " must have " + std::to_string(cols) +
                                  " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

RealVector vector_from_json(const json& j, Eigen::Index size, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw std::invalid_argument(std::string("checkpoint: '") + what + "' must have " +
                                std::to_string(size) + " entries");
  }
  RealVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json net_to_json(const RbmParams& net, bool with_aux_bias) {
  json out;
  out["W"] = matrix_to_json(net.weights);
  out["U"] = matrix_to_json(net.aux_weights);
  out["b"] = vector_to_json(net.visible_bias);
  out["c"] = vector_to_json(net.hidden_bias);
  if (with_aux_bias) out["d"] = vector_to_json(net.aux_bias);
  return out;
}

void net_from_json(const json& j, RbmParams& net, int n, int nh, int na, bool with_aux_bias) {
  net.weights = matrix_from_json(j.at("W"), nh, n, "W");
  net.aux_weights = matrix_from_json(j.at("U"), na, n, "U");
  net.visible_bias = vector_from_json(j.at("b"), n, "b");
  net.hidden_bias = vector_from_json(j.at("c"), nh, "c");
  if (with_aux_bias) net.aux_bias = vector_from_json(j.at("d"), na, "d");
}

}  // namespace

void save_checkpoint(const NdoParams& params, std::ostream& out) {
  params.check();
  json doc;
  doc["format"] = "ndotomo-checkpoint";
  doc["version"] = kCheckpointVersion;
  doc["bit_order"] = "msb-first";
  doc["n_visible"] = params.n_visible;
  doc["n_hidden"] = params.n_hidden;
  doc["n_aux"] = params.n_aux;
  doc["amplitude"] = net_to_json(params.amplitude, true);
  doc["phase"] = net_to_json(params.phase, false);
  out << doc.dump(2) << '\n';
}

NdoParams load_checkpoint(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
    if (doc.value("format", "") != "ndotomo-checkpoint") {
      throw std::invalid_argument("checkpoint: not an ndotomo checkpoint");
    }
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      throw std::invalid_argument("checkpoint: unsupported version " + doc.at("version").dump());
    }
    if (doc.at("bit_order").get<std::string>() != "msb-first") {
      throw std::invalid_argument("checkpoint: unsupported bit order");
    }
    NdoParams p = NdoParams::zeros(doc.at("n_visible").get<int>(), doc.at("n_hidden").get<int>(),
                                   doc.at("n_aux").get<int>());
    net_from_json(doc.at("amplitude"), p.amplitude, p.n_visible, p.n_hidden, p.n_aux, true);
    net_from_json(doc.at("phase"), p.phase, p.n_visible, p.n_hidden, p.n_aux, false);
    p.check();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("checkpoint: malformed document: ") + e.what());
  }
}

void save_checkpoint(const NdoParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_checkpoint(params, out);
}

NdoParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_checkpoint(in);
}

}  // namespace ndotomo
