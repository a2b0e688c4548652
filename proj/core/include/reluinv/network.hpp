#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reluinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { Relu, Linear };

// One dense layer. Row i of `weights` holds the incoming weights of neuron i.
struct Layer {
  Matrix weights;
  Vector bias;
  Activation activation = Activation::Relu;
};

/// Immutable feed-forward network with ReLU or linear layers.
///
/// ReLU neurons are numbered 0..relu_count()-1 layer by layer, so a neuron
/// closer to the input always has a lower index. Activation patterns and
/// boundary sets are expressed in this numbering.
class Network {
 public:
  struct ReluLocation {
    std::size_t layer;
    std::size_t row;
  };

  // Throws InvalidInput on dimension mismatch, non-finite values, or a
  // non-linear final layer.
  Network(std::size_t input_dim, std::vector<Layer> layers);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept;
  std::size_t layer_count() const noexcept { return layers_.size(); }
  const Layer& layer(std::size_t l) const { return layers_.at(l); }
  std::span<const Layer> layers() const noexcept { return layers_; }

  std::size_t relu_count() const noexcept { return relu_count_; }
  // First ReLU index of layer `l`; meaningless for linear layers.
  std::size_t relu_offset(std::size_t l) const { return relu_offsets_.at(l); }
  ReluLocation locate_relu(std::size_t relu_index) const;

  // Global index over all hidden and output neurons, increasing with depth.
  std::size_t neuron_offset(std::size_t l) const { return neuron_offsets_.at(l); }
  std::size_t neuron_count() const noexcept { return neuron_count_; }

 private:
  std::size_t input_dim_;
  std::vector<Layer> layers_;
  std::vector<std::size_t> relu_offsets_;
  std::vector<std::size_t> neuron_offsets_;
  std::vector<ReluLocation> relu_locations_;
  std::size_t relu_count_ = 0;
  std::size_t neuron_count_ = 0;
};

// The set of active ReLU neurons. Neurons not listed are inactive.
class ActivationPattern {
 public:
  ActivationPattern() = default;
  explicit ActivationPattern(std::size_t relu_count) : bits_(relu_count, false) {}

  static ActivationPattern from_active(std::size_t relu_count,
                                       std::span<const std::size_t> active);

  std::size_t size() const noexcept { return bits_.size(); }
  bool is_active(std::size_t j) const { return bits_.at(j); }
  void set(std::size_t j, bool active) { bits_.at(j) = active; }
  std::size_t active_count() const noexcept;
  std::vector<std::size_t> active_neurons() const;
  // '1' for active, '0' for inactive, in neuron order.
  std::string to_string() const;

  friend bool operator==(const ActivationPattern&, const ActivationPattern&) = default;

 private:
  friend struct ActivationPatternHash;
  std::vector<bool> bits_;
};

struct ActivationPatternHash {
  std::size_t operator()(const ActivationPattern& p) const noexcept {
    return std::hash<std::vector<bool>>{}(p.bits_);
  }
};

// Neurons whose pre-activation magnitude is at most `tolerance`.
struct BoundarySet {
  std::vector<std::size_t> neurons;  // ascending
  double tolerance = 0.0;

  bool empty() const noexcept { return neurons.empty(); }
  std::size_t size() const noexcept { return neurons.size(); }
  bool contains(std::size_t j) const;
};

// Per-layer pre- and post-activations of one forward pass.
struct EvalTrace {
  std::vector<Vector> pre;
  std::vector<Vector> post;

  double pre_activation(const Network& net, std::size_t relu_index) const;
};

struct ForwardResult {
  Vector output;
  EvalTrace trace;
};

enum class LossKind { MeanSquaredError };

struct LossSpec {
  Vector target;
  LossKind kind = LossKind::MeanSquaredError;

  double value(const Vector& y) const;
  // dL/dy
  Vector output_gradient(const Vector& y) const;
};

struct LossGradient {
  double value = 0.0;
  Vector gradient;
};

struct PatternAndBoundary {
  ActivationPattern pattern;
  BoundarySet boundary;
};

// Row and offset of an affine function of the input: row . x + offset.
struct AffineForm {
  Vector row;
  double offset = 0.0;

  double evaluate(const Vector& x) const { return row.dot(x) + offset; }
};

inline constexpr double kDefaultBoundaryTolerance = 1e-6;

ForwardResult forward(const Network& net, const Vector& x);

// Forward pass where ReLU neurons are switched on/off by `pattern` instead of
// by the sign of their pre-activation. Inside the pattern's region this equals
// forward(); outside it evaluates the region's affine extension.
ForwardResult forward_in_pattern(const Network& net, const Vector& x,
                                 const ActivationPattern& pattern);

// g(x) = L(f(x), target) and its reverse-mode gradient. A neuron with
// pre-activation exactly zero is treated as inactive.
LossGradient loss_and_gradient(const Network& net, const LossSpec& loss, const Vector& x);

// Value and gradient of the loss of the pattern's affine extension at x.
LossGradient loss_and_gradient_in_pattern(const Network& net, const LossSpec& loss,
                                          const Vector& x, const ActivationPattern& pattern);

Vector gradient_in_pattern(const Network& net, const LossSpec& loss, const Vector& x,
                           const ActivationPattern& pattern);

// active = {j : a_j > tau}, boundary = {j : |a_j| <= tau}.
PatternAndBoundary pattern_of(const Network& net, const Vector& x,
                              double tau = kDefaultBoundaryTolerance);
PatternAndBoundary pattern_of(const Network& net, const EvalTrace& trace, double tau);

// Pre-activation of `relu_index` as an affine function of x when every
// preceding ReLU neuron is masked according to `pattern`.
AffineForm masked_affine(const Network& net, const ActivationPattern& pattern,
                         std::size_t relu_index);

// masked_affine for every ReLU neuron, computed in a single sweep.
std::vector<AffineForm> masked_affine_all(const Network& net, const ActivationPattern& pattern);

// Output of the network as an affine function of x under `pattern`, one form
// per output.
std::vector<AffineForm> masked_output_affine(const Network& net, const ActivationPattern& pattern);

}  // namespace reluinv
