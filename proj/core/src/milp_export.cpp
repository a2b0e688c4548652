#include "reluinv/milp_export.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "reluinv/errors.hpp"
#include "json_util.hpp"

namespace reluinv {

PreactivationBounds preactivation_bounds(const Network& net, const FeasibleSet& domain) {
  domain.validate();
  if (domain.dim() != net.input_dim()) throw InvalidInput("big-M: dimension mismatch");
  PreactivationBounds out;
  Vector lo = domain.lower;
  Vector hi = domain.upper;
  for (const Layer& layer : net.layers()) {
    const Vector center = 0.5 * (lo + hi);
    const Vector radius = 0.5 * (hi - lo);
    const Vector mid = layer.weights * center + layer.bias;
    const Vector spread = layer.weights.cwiseAbs() * radius;
    Vector a_lo = mid - spread;
    Vector a_hi = mid + spread;
    if (layer.activation == Activation::Relu) {
      for (Eigen::Index i = 0; i < a_lo.size(); ++i) {
        out.lower.push_back(a_lo[i]);
        out.upper.push_back(a_hi[i]);
      }
      lo = a_lo.cwiseMax(0.0);
      hi = a_hi.cwiseMax(0.0);
    } else {
      lo = std::move(a_lo);
      hi = std::move(a_hi);
    }
  }
  return out;
}

std::vector<double> compute_bigM(const Network& net, const FeasibleSet& domain) {
  const PreactivationBounds b = preactivation_bounds(net, domain);
  std::vector<double> m(b.lower.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    m[j] = std::max(std::abs(b.lower[j]), std::abs(b.upper[j]));
  }
  return m;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void term(std::ostream& os, double coeff, const std::string& var) {
  if (coeff == 0.0) return;
  os << (coeff < 0.0 ? " - " : " + ") << num(std::abs(coeff)) << ' ' << var;
}

const char* sense_text(RowSense s) {
  switch (s) {
    case RowSense::LessEqual:
      return "<=";
    case RowSense::GreaterEqual:
      return ">=";
    case RowSense::Equal:
      return "=";
  }
  return "=";
}

// `pattern` set: fixed-pattern LP; unset: big-M MILP.
std::string write_model(const Network& net, const Vector& target, const FeasibleSet& domain,
                        const std::optional<ActivationPattern>& pattern) {
  domain.validate();
  if (domain.dim() != net.input_dim()) throw InvalidInput("export: dimension mismatch");
  if (static_cast<std::size_t>(target.size()) != net.output_dim()) {
    throw InvalidInput("export: target length differs from the network output");
  }
  if (pattern && pattern->size() != net.relu_count()) {
    throw InvalidInput("export: pattern length differs from the ReLU count");
  }
  const std::vector<double> bigm = compute_bigM(net, domain);

  std::ostringstream os;
  os << "\\ reluinv " << (pattern ? "fixed-pattern LP" : "MILP") << '\n';
  os << "\\ objective: minimize (1/" << target.size() << ") * sum_o (y{o} - target{o})^2\n";
  os << "\\ target:";
  for (Eigen::Index o = 0; o < target.size(); ++o) os << ' ' << num(target[o]);
  os << '\n';
  if (pattern) os << "\\ pattern: " << pattern->to_string() << '\n';
  os << "Minimize\n obj:\nSubject To\n";

  std::vector<std::string> prev;
  for (std::size_t i = 0; i < net.input_dim(); ++i) prev.push_back("x" + std::to_string(i));

  std::vector<std::string> free_vars;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const Layer& layer = net.layer(l);
    const bool last = l + 1 == net.layer_count();
    std::vector<std::string> cur;
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
      const auto row = static_cast<std::size_t>(i);
      if (last) {
        const std::string y = "y" + std::to_string(row);
        os << " o" << row << ": 1 " << y;
        for (std::size_t k = 0; k < prev.size(); ++k) {
          term(os, -layer.weights(i, static_cast<Eigen::Index>(k)), prev[k]);
        }
        os << " = " << num(layer.bias[i]) << '\n';
        free_vars.push_back(y);
        cur.push_back(y);
      } else if (layer.activation == Activation::Linear) {
        const std::string a = "a" + std::to_string(l) + "_" + std::to_string(row);
        os << " l" << l << "_" << row << ": 1 " << a;
        for (std::size_t k = 0; k < prev.size(); ++k) {
          term(os, -layer.weights(i, static_cast<Eigen::Index>(k)), prev[k]);
        }
        os << " = " << num(layer.bias[i]) << '\n';
        free_vars.push_back(a);
        cur.push_back(a);
      } else {
        const std::size_t j = net.relu_offset(l) + row;
        const std::string js = std::to_string(j);
        os << " n" << js << ": 1 t" << js << " - 1 s" << js;
        for (std::size_t k = 0; k < prev.size(); ++k) {
          term(os, -layer.weights(i, static_cast<Eigen::Index>(k)), prev[k]);
        }
        os << " = " << num(layer.bias[i]) << '\n';
        if (!pattern) {
          os << " ut" << js << ": 1 t" << js << " - " << num(bigm[j]) << " z" << js << " <= 0\n";
          os << " us" << js << ": 1 s" << js << " + " << num(bigm[j]) << " z" << js
             << " <= " << num(bigm[j]) << '\n';
        }
        cur.push_back("t" + js);
      }
    }
    prev = std::move(cur);
  }
  for (std::size_t k = 0; k < domain.constraints.size(); ++k) {
    const LinearConstraint& c = domain.constraints[k];
    os << " c" << k << ":";
    for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) term(os, c.coeffs[i], "x" + std::to_string(i));
    if (c.coeffs.isZero(0.0)) os << " 0 x0";
    os << ' ' << sense_text(c.sense) << ' ' << num(c.rhs) << '\n';
  }

  os << "Bounds\n";
  for (std::size_t i = 0; i < net.input_dim(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    os << ' ' << num(domain.lower[ii]) << " <= x" << i << " <= " << num(domain.upper[ii]) << '\n';
  }
  if (pattern) {
    for (std::size_t j = 0; j < net.relu_count(); ++j) {
      os << (pattern->is_active(j) ? " s" : " t") << j << " = 0\n";
    }
  }
  for (const std::string& v : free_vars) os << ' ' << v << " free\n";
  if (!pattern && net.relu_count() > 0) {
    os << "Binaries\n";
    for (std::size_t j = 0; j < net.relu_count(); ++j) os << " z" << j << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace

std::string export_milp(const Network& net, const Vector& target, const FeasibleSet& domain) {
  return write_model(net, target, domain, std::nullopt);
}

void export_milp(const Network& net, const Vector& target, const FeasibleSet& domain,
                 const std::filesystem::path& path) {
  detail::write_text_file(path, export_milp(net, target, domain));
}

std::string export_fixed_pattern(const Network& net, const Vector& target,
                                 const FeasibleSet& domain, const ActivationPattern& pattern) {
  return write_model(net, target, domain, pattern);
}

}  // namespace reluinv
