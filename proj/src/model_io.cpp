/*
 * Copyright 2026 The GeoShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoshap/error.hpp"
#include "geoshap/models.hpp"

namespace geoshap {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatName = "geoshap.model";

Json VectorToJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector VectorFromJson(const Json& j) {
  Vector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  }
  return out;
}

Json MatrixToJson(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(VectorToJson(m.row(r).transpose()));
  return out;
}

Matrix MatrixFromJson(const Json& j, std::size_t cols) {
  Matrix out(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j.at(r);
    if (row.size() != cols) Fail(ErrorKind::kModel, "model artifact row width mismatch");
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
    }
  }
  return out;
}

}  // namespace

std::string SerializeModel(const TrainedModel& model) {
  Json out;
  out["format"] = kFormatName;
  out["version"] = kModelFormatVersion;
  out["kind"] = ModelKindName(model.kind());
  out["n_columns"] = model.n_columns();
  switch (model.kind()) {
    case ModelKind::kLinear: {
      const auto& m = static_cast<const LinearModel&>(model);
      out["intercept"] = m.intercept();
      out["coefficients"] = VectorToJson(m.coefficients());
      break;
    }
    case ModelKind::kKernelRidge: {
      const auto& m = static_cast<const KernelRidgeModel&>(model);
      out["lengthscale"] = m.lengthscale();
      out["ridge"] = m.ridge();
      out["offset"] = m.offset();
      out["alpha"] = VectorToJson(m.alpha());
      out["support"] = MatrixToJson(m.support());
      break;
    }
    case ModelKind::kBoostedTrees: {
      const auto& m = static_cast<const BoostedTreesModel&>(model);
      out["base"] = m.base();
      Json trees = Json::array();
      for (const auto& tree : m.trees()) {
        // Nodes as [feature, threshold, left, right, value].
        Json nodes = Json::array();
        for (const auto& node : tree) {
          nodes.push_back(Json::array(
              {node.feature, node.threshold, node.left, node.right, node.value}));
        }
        trees.push_back(std::move(nodes));
      }
      out["trees"] = std::move(trees);
      break;
    }
  }
  return out.dump();
}

TrainedModelPtr DeserializeModel(std::string_view text) {
  Json in;
  try {
    in = Json::parse(text);
  } catch (const Json::exception& e) {
    Fail(ErrorKind::kModel, std::string("corrupt model artifact: ") + e.what());
  }
  try {
    if (in.value("format", "") != kFormatName) {
      Fail(ErrorKind::kModel, "not a geoshap model artifact");
    }
    const int version = in.at("version").get<int>();
    if (version != kModelFormatVersion) {
      Fail(ErrorKind::kModel, "unsupported model artifact version " +
                                  std::to_string(version));
    }
    const auto columns = in.at("n_columns").get<std::size_t>();
    switch (ParseModelKind(in.at("kind").get<std::string>())) {
      case ModelKind::kLinear: {
        Vector coefficients = VectorFromJson(in.at("coefficients"));
        if (static_cast<std::size_t>(coefficients.size()) != columns) {
          Fail(ErrorKind::kModel, "coefficient count does not match n_columns");
        }
        return std::make_shared<LinearModel>(in.at("intercept").get<double>(),
                                             std::move(coefficients));
      }
      case ModelKind::kKernelRidge: {
        return std::make_shared<KernelRidgeModel>(
            MatrixFromJson(in.at("support"), columns), VectorFromJson(in.at("alpha")),
            in.at("offset").get<double>(), in.at("lengthscale").get<double>(),
            in.at("ridge").get<double>());
      }
      case ModelKind::kBoostedTrees: {
        std::vector<RegressionTree> trees;
        for (const Json& nodes : in.at("trees")) {
          RegressionTree tree;
          for (const Json& node : nodes) {
            TreeNode n;
            n.feature = node.at(0).get<int>();
            n.threshold = node.at(1).get<double>();
            n.left = node.at(2).get<int>();
            n.right = node.at(3).get<int>();
            n.value = node.at(4).get<double>();
            if (n.feature >= static_cast<int>(columns)) {
              Fail(ErrorKind::kModel, "tree split references a missing column");
            }
            tree.push_back(n);
          }
          const auto size = static_cast<int>(tree.size());
          for (const auto& n : tree) {
            if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 ||
                                   n.right >= size)) {
              Fail(ErrorKind::kModel, "tree child index out of range");
            }
          }
          if (tree.empty()) Fail(ErrorKind::kModel, "empty tree in artifact");
          trees.push_back(std::move(tree));
        }
        return std::make_shared<BoostedTreesModel>(columns, in.at("base").get<double>(),
                                                   std::move(trees));
      }
    }
  } catch (const Json::exception& e) {
    Fail(ErrorKind::kModel, std::string("corrupt model artifact: ") + e.what());
  }
  Fail(ErrorKind::kModel, "unknown model kind");
}

void SaveModel(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  out << SerializeModel(model) << '\n';
  if (!out) Fail(ErrorKind::kIo, "failed writing " + path.string());
}

TrainedModelPtr LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot read model artifact " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return DeserializeModel(buffer.str());
}

}  // namespace geoshap
