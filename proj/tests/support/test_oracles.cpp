#include "test_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace reluinv::oracle {

namespace {

// Returns post-activations of the final layer; collects ReLU pre-activations.
std::vector<double> sweep(const Network& net, const Vector& x, const std::vector<bool>* mask,
                          std::vector<double>* pre_out) {
  std::vector<double> prev(x.data(), x.data() + x.size());
  std::size_t relu = 0;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    const auto rows = static_cast<std::size_t>(layer.weights.rows());
    std::vector<double> cur(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      double a = layer.bias[static_cast<Eigen::Index>(i)];
      for (std::size_t k = 0; k < prev.size(); ++k) {
        a += layer.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * prev[k];
      }
      if (layer.activation == Activation::Relu) {
        if (pre_out) pre_out->push_back(a);
        const bool pass = mask ? (*mask)[relu] : a > 0.0;
        cur[i] = pass ? a : 0.0;
        ++relu;
      } else {
        cur[i] = a;
      }
    }
    prev = std::move(cur);
  }
  return prev;
}

}  // namespace

std::vector<double> relu_preactivations(const Network& net, const Vector& x,
                                        const std::vector<bool>* mask) {
  std::vector<double> pre;
  sweep(net, x, mask, &pre);
  return pre;
}

Vector output(const Network& net, const Vector& x, const std::vector<bool>* mask) {
  const std::vector<double> y = sweep(net, x, mask, nullptr);
  Vector out(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[i];
  return out;
}

double mse(const Vector& y, const Vector& target) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) s += (y[i] - target[i]) * (y[i] - target[i]);
  return s / static_cast<double>(y.size());
}

double loss(const Network& net, const Vector& target, const Vector& x,
            const std::vector<bool>* mask) {
  return mse(output(net, x, mask), target);
}

std::vector<bool> sign_pattern(const Network& net, const Vector& x) {
  const std::vector<double> pre = relu_preactivations(net, x);
  std::vector<bool> s(pre.size());
  for (std::size_t j = 0; j < pre.size(); ++j) s[j] = pre[j] > 0.0;
  return s;
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector p = x;
    Vector m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

double toy_f(double x) {
  auto r = [](double v) { return v > 0.0 ? v : 0.0; };
  return r(x - 1.0) - 2.0 * r(x - 2.0) + 2.0 * r(x - 3.0) - r(x - 4.0);
}

VertexLpResult vertex_enumeration(const LinearProgram& lp, double tol) {
  const auto d = static_cast<std::size_t>(lp.objective.size());
  // planes a.x = b
  std::vector<Vector> planes;
  std::vector<double> rhs;
  for (const LinearConstraint& c : lp.rows) {
    planes.push_back(c.coeffs);
    rhs.push_back(c.rhs);
  }
  for (std::size_t i = 0; i < d; ++i) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(d));
    e[static_cast<Eigen::Index>(i)] = 1.0;
    planes.push_back(e);
    rhs.push_back(lp.lower[static_cast<Eigen::Index>(i)]);
    planes.push_back(e);
    rhs.push_back(lp.upper[static_cast<Eigen::Index>(i)]);
  }
  auto feasible = [&](const Vector& u) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] < lp.lower[i] - tol || u[i] > lp.upper[i] + tol) return false;
    }
    for (const LinearConstraint& c : lp.rows) {
      const double lhs = c.coeffs.dot(u);
      const double scale = 1.0 + std::abs(c.rhs);
      if (c.sense == RowSense::LessEqual && lhs > c.rhs + tol * scale) return false;
      if (c.sense == RowSense::GreaterEqual && lhs < c.rhs - tol * scale) return false;
      if (c.sense == RowSense::Equal && std::abs(lhs - c.rhs) > tol * scale) return false;
    }
    return true;
  };

  VertexLpResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::size_t p = planes.size();
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  while (true) {
    Matrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Vector b(static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
      a.row(static_cast<Eigen::Index>(r)) = planes[pick[r]].transpose();
      b[static_cast<Eigen::Index>(r)] = rhs[pick[r]];
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.isInvertible()) {
      const Vector u = lu.solve(b);
      if (feasible(u)) {
        const double obj = lp.objective.dot(u);
        if (obj < best.objective) {
          best.feasible = true;
          best.objective = obj;
          best.point = u;
        }
      }
    }
    // next combination
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == p - d + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < d; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

Vector uniform_box(std::mt19937_64& rng, const Vector& lo, const Vector& hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
  return x;
}

Network random_network(const std::vector<std::size_t>& arch, std::mt19937_64& rng,
                       double bias_scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Layer> layers;
  for (std::size_t l = 1; l < arch.size(); ++l) {
    Layer layer;
    layer.weights = Matrix(static_cast<Eigen::Index>(arch[l]), static_cast<Eigen::Index>(arch[l - 1]));
    layer.bias = Vector(static_cast<Eigen::Index>(arch[l]));
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = bias_scale * normal(rng);
    layer.activation = l + 1 == arch.size() ? Activation::Linear : Activation::Relu;
    layers.push_back(std::move(layer));
  }
  return Network(arch.front(), std::move(layers));
}

std::vector<Vector> region_members(const Network& net, const Vector& seed, const Vector& lo,
                                   const Vector& hi, std::size_t count, std::mt19937_64& rng) {
  const std::vector<bool> target = sign_pattern(net, seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> out;
  Vector cur = seed;
  std::size_t failures = 0;
  while (out.size() < count && failures < 200 * count) {
    Vector dir(seed.size());
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = normal(rng);
    dir.normalize();
    double radius = (hi - lo).maxCoeff() * unit(rng);
    bool found = false;
    for (int shrink = 0; shrink < 40 && !found; ++shrink, radius *= 0.5) {
      Vector cand = (cur + radius * dir).cwiseMax(lo).cwiseMin(hi);
      if (sign_pattern(net, cand) == target) {
        out.push_back(cand);
        cur = cand;
        found = true;
      }
    }
    if (!found) ++failures;
  }
  return out;
}

}  // namespace reluinv::oracle
