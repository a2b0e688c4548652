#include "reluinv/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "reluinv/errors.hpp"

namespace reluinv {

using nlohmann::json;

Network parse_network(std::string_view json_text) {
  const json doc = detail::parse_json(json_text, "model");
  if (!doc.is_object()) throw InvalidInput("model: top level must be an object");
  const auto input_dim = detail::get_size(doc, "input_dim", "model");
  const json& layers_json = detail::get_field(doc, "layers", "model");
  if (!layers_json.is_array()) throw InvalidInput("model: \"layers\" must be an array");

  std::vector<Layer> layers;
  std::size_t prev = input_dim;
  for (std::size_t l = 0; l < layers_json.size(); ++l) {
    const json& lj = layers_json[l];
    const std::string where = "model layer " + std::to_string(l);
    if (!lj.is_object()) throw InvalidInput(where + ": must be an object");
    const json& wj = detail::get_field(lj, "weights", where);
    if (!wj.is_array() || wj.empty()) throw InvalidInput(where + ": weights must be a nonempty array");
    Layer layer;
    layer.weights.resize(static_cast<Eigen::Index>(wj.size()), static_cast<Eigen::Index>(prev));
    for (std::size_t i = 0; i < wj.size(); ++i) {
      const Vector row = detail::to_vector(wj[i], where + " weights row " + std::to_string(i));
      if (static_cast<std::size_t>(row.size()) != prev) {
        throw InvalidInput(where + ": weights row " + std::to_string(i) + " has " +
                           std::to_string(row.size()) + " entries, expected " +
                           std::to_string(prev));
      }
      layer.weights.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    layer.bias = detail::to_vector(detail::get_field(lj, "bias", where), where + " bias");
    const json& aj = detail::get_field(lj, "activation", where);
    if (aj == "relu") {
      layer.activation = Activation::Relu;
    } else if (aj == "linear") {
      layer.activation = Activation::Linear;
    } else {
      throw InvalidInput(where + ": activation must be \"relu\" or \"linear\"");
    }
    prev = wj.size();
    layers.push_back(std::move(layer));
  }
  return Network(input_dim, std::move(layers));
}

std::string dump_network(const Network& net) {
  json doc;
  doc["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const Layer& layer : net.layers()) {
    json lj;
    json w = json::array();
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      w.push_back(detail::from_vector(layer.weights.row(i).transpose()));
    }
    lj["weights"] = std::move(w);
    lj["bias"] = detail::from_vector(layer.bias);
    lj["activation"] = layer.activation == Activation::Relu ? "relu" : "linear";
    layers.push_back(std::move(lj));
  }
  doc["layers"] = std::move(layers);
  return doc.dump();
}

Network load_network(const std::filesystem::path& path) {
  return parse_network(detail::read_text_file(path));
}

void save_network(const Network& net, const std::filesystem::path& path) {
  detail::write_text_file(path, dump_network(net));
}

}  // namespace reluinv
