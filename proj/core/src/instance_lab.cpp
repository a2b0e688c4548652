#include "reluinv/instance_lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "reluinv/errors.hpp"

namespace reluinv {

Network generate_network(std::span<const std::size_t> arch, std::uint64_t seed) {
  if (arch.size() < 2) throw InvalidInput("architecture needs an input and an output width");
  for (std::size_t w : arch) {
    if (w < 1) throw InvalidInput("architecture widths must be at least 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Layer> layers;
  for (std::size_t l = 1; l < arch.size(); ++l) {
    const auto rows = static_cast<Eigen::Index>(arch[l]);
    const auto cols = static_cast<Eigen::Index>(arch[l - 1]);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    Layer layer;
    layer.weights.resize(rows, cols);
    layer.bias.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) layer.weights(i, j) = scale * normal(rng);
    }
    for (Eigen::Index i = 0; i < rows; ++i) layer.bias[i] = scale * normal(rng);
    layer.activation = l + 1 == arch.size() ? Activation::Linear : Activation::Relu;
    layers.push_back(std::move(layer));
  }
  return Network(arch.front(), std::move(layers));
}

std::vector<std::size_t> parse_arch(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size() || value == 0) {
      throw InvalidInput("malformed architecture '" + std::string(text) + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  if (out.size() < 2) throw InvalidInput("architecture needs an input and an output width");
  return out;
}

NormalizedNetwork normalize_outputs(const Network& net, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidInput("output normalization needs at least 2 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(net.input_dim());
  const auto m = static_cast<Eigen::Index>(net.output_dim());
  Vector lo = Vector::Constant(m, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(m, -std::numeric_limits<double>::infinity());
  Vector x(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = unit(rng);
    const Vector y = forward(net, x).output;
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }

  OutputScaling scaling{Vector(m), Vector(m)};
  for (Eigen::Index o = 0; o < m; ++o) {
    const double range = hi[o] - lo[o];
    if (range < 1e-12) {
      scaling.scale[o] = 0.0;
      scaling.offset[o] = 0.5;
    } else {
      scaling.scale[o] = 1.0 / range;
      scaling.offset[o] = -lo[o] / range;
    }
  }

  std::vector<Layer> layers(net.layers().begin(), net.layers().end());
  Layer& out = layers.back();
  out.weights = scaling.scale.asDiagonal() * out.weights;
  out.bias = scaling.scale.cwiseProduct(out.bias) + scaling.offset;
  return {Network(net.input_dim(), std::move(layers)), std::move(scaling)};
}

Network toy_network_1d() {
  Layer hidden;
  hidden.weights = Matrix::Ones(4, 1);
  hidden.bias = Vector(4);
  hidden.bias << -1.0, -2.0, -3.0, -4.0;
  hidden.activation = Activation::Relu;
  Layer output;
  output.weights = Matrix(1, 4);
  output.weights << 1.0, -2.0, 2.0, -1.0;
  output.bias = Vector::Zero(1);
  output.activation = Activation::Linear;
  return Network(1, {std::move(hidden), std::move(output)});
}

FeasibleSet toy_domain_1d() {
  return FeasibleSet::box(Vector::Constant(1, 0.0), Vector::Constant(1, 5.0));
}

RandomInstance random_instance(const Network& net, std::size_t start_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(net.input_dim());
  const auto m = static_cast<Eigen::Index>(net.output_dim());
  RandomInstance inst;
  inst.target.resize(m);
  for (Eigen::Index o = 0; o < m; ++o) inst.target[o] = unit(rng);
  inst.domain = FeasibleSet::box(Vector::Zero(n), Vector::Ones(n));
  for (std::size_t s = 0; s < start_count; ++s) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = unit(rng);
    inst.starts.push_back(std::move(x));
  }
  return inst;
}

}  // namespace reluinv
