#include "reluinv/network.hpp"

#include <algorithm>
#include <cmath>

#include "reluinv/errors.hpp"

namespace reluinv {

namespace {

void check_input(const Network& net, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != net.input_dim()) {
    throw InvalidInput("input has dimension " + std::to_string(x.size()) + ", network expects " +
                       std::to_string(net.input_dim()));
  }
}

// Per-layer 0/1 masks applied to pre-activations to produce post-activations.
using Masks = std::vector<Vector>;

Masks masks_from_pattern(const Network& net, const ActivationPattern& pattern) {
  if (pattern.size() != net.relu_count()) {
    throw InvalidInput("activation pattern covers " + std::to_string(pattern.size()) +
                       " neurons, network has " + std::to_string(net.relu_count()));
  }
  Masks masks;
  masks.reserve(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    Vector m = Vector::Ones(layer.bias.size());
    if (layer.activation == Activation::Relu) {
      const std::size_t off = net.relu_offset(l);
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        m[i] = pattern.is_active(off + static_cast<std::size_t>(i)) ? 1.0 : 0.0;
      }
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

Masks masks_from_trace(const Network& net, const EvalTrace& trace) {
  Masks masks;
  masks.reserve(net.layer_count());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (net.layer(l).activation == Activation::Relu) {
      masks.push_back((trace.pre[l].array() > 0.0).cast<double>().matrix());
    } else {
      masks.push_back(Vector::Ones(trace.pre[l].size()));
    }
  }
  return masks;
}

ForwardResult masked_forward(const Network& net, const Vector& x, const Masks& masks) {
  ForwardResult r;
  r.trace.pre.reserve(net.layer_count());
  r.trace.post.reserve(net.layer_count());
  const Vector* in = &x;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    Vector a = layer.weights * *in + layer.bias;
    Vector t = a.cwiseProduct(masks[l]);
    r.trace.pre.push_back(std::move(a));
    r.trace.post.push_back(std::move(t));
    in = &r.trace.post.back();
  }
  r.output = r.trace.post.back();
  return r;
}

Vector backward(const Network& net, const Masks& masks, const Vector& dl_dy) {
  Vector delta = dl_dy.cwiseProduct(masks.back());
  for (std::size_t l = net.layer_count() - 1; l > 0; --l) {
    delta = (net.layer(l).weights.transpose() * delta).cwiseProduct(masks[l - 1]);
  }
  return net.layer(0).weights.transpose() * delta;
}

void check_loss(const Network& net, const LossSpec& loss) {
  if (static_cast<std::size_t>(loss.target.size()) != net.output_dim()) {
    throw InvalidInput("loss target has dimension " + std::to_string(loss.target.size()) +
                       ", network output is " + std::to_string(net.output_dim()));
  }
}

}  // namespace

Network::Network(std::size_t input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  if (input_dim_ == 0) throw InvalidInput("network input dimension must be positive");
  if (layers_.empty()) throw InvalidInput("network needs at least one layer");
  std::size_t prev = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.weights.rows() == 0) throw InvalidInput(where + " has no neurons");
    if (static_cast<std::size_t>(layer.weights.cols()) != prev) {
      throw InvalidInput(where + " expects " + std::to_string(layer.weights.cols()) +
                         " inputs, previous layer provides " + std::to_string(prev));
    }
    if (layer.bias.size() != layer.weights.rows()) {
      throw InvalidInput(where + " bias length does not match its neuron count");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw InvalidInput(where + " contains non-finite values");
    }
    relu_offsets_.push_back(relu_count_);
    neuron_offsets_.push_back(neuron_count_);
    if (layer.activation == Activation::Relu) {
      for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
        relu_locations_.push_back({l, static_cast<std::size_t>(i)});
      }
      relu_count_ += static_cast<std::size_t>(layer.weights.rows());
    }
    neuron_count_ += static_cast<std::size_t>(layer.weights.rows());
    prev = static_cast<std::size_t>(layer.weights.rows());
  }
  if (layers_.back().activation != Activation::Linear) {
    throw InvalidInput("final layer must be linear");
  }
}

std::size_t Network::output_dim() const noexcept {
  return static_cast<std::size_t>(layers_.back().weights.rows());
}

Network::ReluLocation Network::locate_relu(std::size_t relu_index) const {
  if (relu_index >= relu_count_) {
    throw InvalidInput("ReLU index " + std::to_string(relu_index) + " out of range");
  }
  return relu_locations_[relu_index];
}

ActivationPattern ActivationPattern::from_active(std::size_t relu_count,
                                                 std::span<const std::size_t> active) {
  ActivationPattern p(relu_count);
  for (std::size_t j : active) p.set(j, true);
  return p;
}

std::size_t ActivationPattern::active_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::size_t> ActivationPattern::active_neurons() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < bits_.size(); ++j) {
    if (bits_[j]) out.push_back(j);
  }
  return out;
}

std::string ActivationPattern::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

bool BoundarySet::contains(std::size_t j) const {
  return std::binary_search(neurons.begin(), neurons.end(), j);
}

double EvalTrace::pre_activation(const Network& net, std::size_t relu_index) const {
  const auto loc = net.locate_relu(relu_index);
  return pre.at(loc.layer)[static_cast<Eigen::Index>(loc.row)];
}

double LossSpec::value(const Vector& y) const {
  switch (kind) {
    case LossKind::MeanSquaredError:
      return (y - target).squaredNorm() / static_cast<double>(y.size());
  }
  return 0.0;
}

Vector LossSpec::output_gradient(const Vector& y) const {
  switch (kind) {
    case LossKind::MeanSquaredError:
      return (2.0 / static_cast<double>(y.size())) * (y - target);
  }
  return Vector::Zero(y.size());
}

ForwardResult forward(const Network& net, const Vector& x) {
  check_input(net, x);
  ForwardResult r;
  r.trace.pre.reserve(net.layer_count());
  r.trace.post.reserve(net.layer_count());
  const Vector* in = &x;
  for (const Layer& layer : net.layers()) {
    Vector a = layer.weights * *in + layer.bias;
    Vector t = layer.activation == Activation::Relu ? Vector(a.cwiseMax(0.0)) : a;
    r.trace.pre.push_back(std::move(a));
    r.trace.post.push_back(std::move(t));
    in = &r.trace.post.back();
  }
  r.output = r.trace.post.back();
  return r;
}

ForwardResult forward_in_pattern(const Network& net, const Vector& x,
                                 const ActivationPattern& pattern) {
  check_input(net, x);
  return masked_forward(net, x, masks_from_pattern(net, pattern));
}

LossGradient loss_and_gradient(const Network& net, const LossSpec& loss, const Vector& x) {
  check_loss(net, loss);
  const ForwardResult fr = forward(net, x);
  const Masks masks = masks_from_trace(net, fr.trace);
  return {loss.value(fr.output), backward(net, masks, loss.output_gradient(fr.output))};
}

LossGradient loss_and_gradient_in_pattern(const Network& net, const LossSpec& loss,
                                          const Vector& x, const ActivationPattern& pattern) {
  check_input(net, x);
  check_loss(net, loss);
  const Masks masks = masks_from_pattern(net, pattern);
  const ForwardResult fr = masked_forward(net, x, masks);
  return {loss.value(fr.output), backward(net, masks, loss.output_gradient(fr.output))};
}

Vector gradient_in_pattern(const Network& net, const LossSpec& loss, const Vector& x,
                           const ActivationPattern& pattern) {
  return loss_and_gradient_in_pattern(net, loss, x, pattern).gradient;
}

PatternAndBoundary pattern_of(const Network& net, const Vector& x, double tau) {
  return pattern_of(net, forward(net, x).trace, tau);
}

PatternAndBoundary pattern_of(const Network& net, const EvalTrace& trace, double tau) {
  if (!(tau >= 0.0)) throw InvalidInput("boundary tolerance must be nonnegative");
  PatternAndBoundary out{ActivationPattern(net.relu_count()), BoundarySet{{}, tau}};
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (net.layer(l).activation != Activation::Relu) continue;
    const Vector& a = trace.pre.at(l);
    const std::size_t off = net.relu_offset(l);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const std::size_t j = off + static_cast<std::size_t>(i);
      if (a[i] > tau) {
        out.pattern.set(j, true);
      } else if (std::abs(a[i]) <= tau) {
        out.boundary.neurons.push_back(j);
      }
    }
  }
  return out;
}

namespace {

// Sweeps layers composing the masked affine map; calls `visit(l, A, c)` with
// the pre-activation map of layer l. Stops early when visit returns false.
template <typename Visit>
void sweep_affine(const Network& net, const Masks& masks, Visit&& visit) {
  Matrix a = net.layer(0).weights;
  Vector c = net.layer(0).bias;
  for (std::size_t l = 0;; ++l) {
    if (!visit(l, a, c)) return;
    if (l + 1 == net.layer_count()) return;
    const Layer& next = net.layer(l + 1);
    const Vector& m = masks[l];
    a = next.weights * m.asDiagonal() * a;
    c = next.weights * c.cwiseProduct(m) + next.bias;
  }
}

}  // namespace

AffineForm masked_affine(const Network& net, const ActivationPattern& pattern,
                         std::size_t relu_index) {
  const auto loc = net.locate_relu(relu_index);
  const Masks masks = masks_from_pattern(net, pattern);
  AffineForm out;
  sweep_affine(net, masks, [&](std::size_t l, const Matrix& a, const Vector& c) {
    if (l < loc.layer) return true;
    const auto r = static_cast<Eigen::Index>(loc.row);
    out.row = a.row(r).transpose();
    out.offset = c[r];
    return false;
  });
  return out;
}

std::vector<AffineForm> masked_affine_all(const Network& net, const ActivationPattern& pattern) {
  const Masks masks = masks_from_pattern(net, pattern);
  std::vector<AffineForm> out;
  out.reserve(net.relu_count());
  sweep_affine(net, masks, [&](std::size_t l, const Matrix& a, const Vector& c) {
    if (net.layer(l).activation == Activation::Relu) {
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        out.push_back({a.row(r).transpose(), c[r]});
      }
    }
    return true;
  });
  return out;
}

std::vector<AffineForm> masked_output_affine(const Network& net,
                                             const ActivationPattern& pattern) {
  const Masks masks = masks_from_pattern(net, pattern);
  std::vector<AffineForm> out;
  sweep_affine(net, masks, [&](std::size_t l, const Matrix& a, const Vector& c) {
    if (l + 1 < net.layer_count()) return true;
    for (Eigen::Index r = 0; r < a.rows(); ++r) out.push_back({a.row(r).transpose(), c[r]});
    return false;
  });
  return out;
}

}  // namespace reluinv
