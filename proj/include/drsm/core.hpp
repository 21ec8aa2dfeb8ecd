#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drsm {

using Vec = std::vector<double>;

// Absolute tolerance for equality-style comparisons throughout the library.
inline constexpr double kEqTol = 1e-9;

// Slack allowed when checking that an evaluation point lies in a domain box.
inline constexpr double kDomainSlack = 1e-7;

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_same_dim(const Vec& x, const Vec& y, const char* what) {
  if (x.size() != y.size())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
}

inline bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// Coordinate-wise maximum.
inline Vec join(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "join");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = std::max(x[i], y[i]);
  return r;
}

// Coordinate-wise minimum.
inline Vec meet(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "meet");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = std::min(x[i], y[i]);
  return r;
}

inline double dot(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "dot");
  double s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec operator+(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "operator+");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec operator-(const Vec& x, const Vec& y) {
  require_same_dim(x, y, "operator-");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec operator*(double a, const Vec& x) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

inline bool leq(const Vec& x, const Vec& y, double tol = 0.0) {
  require_same_dim(x, y, "leq");
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] > y[i] + tol) return false;
  return true;
}

// Returns a copy of x with coordinate i set to v.
inline Vec with_coord(const Vec& x, int i, double v) {
  Vec r = x;
  r.at(static_cast<size_t>(i)) = v;
  return r;
}

// Axis-aligned domain [0, upper] with strictly positive upper bounds.
class Box {
 public:
  Box() = default;
  explicit Box(Vec upper) : upper_(std::move(upper)) {
    if (upper_.empty()) throw std::invalid_argument("Box: dimension must be >= 1");
    for (double u : upper_)
      if (!(u > 0.0) || !std::isfinite(u))
        throw std::invalid_argument("Box: upper bounds must be finite and > 0");
  }
  static Box unit(int n) { return Box(Vec(static_cast<size_t>(n), 1.0)); }

  int dim() const { return static_cast<int>(upper_.size()); }
  const Vec& upper() const { return upper_; }
  Vec lower() const { return Vec(upper_.size(), 0.0); }

  bool contains(const Vec& x, double tol = kEqTol) const {
    if (x.size() != upper_.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= -tol) || !(x[i] <= upper_[i] + tol)) return false;
    return true;
  }

  // Clamp into the box; intended for tiny numerical excursions.
  Vec clamp(const Vec& x) const {
    Vec r(x.size());
    for (size_t i = 0; i < x.size(); ++i)
      r[i] = std::min(std::max(x[i], 0.0), upper_[i]);
    return r;
  }

 private:
  Vec upper_;
};

struct ObjectiveFlags {
  bool monotone = false;       // monotone nondecreasing
  bool dr_submodular = false;  // implies submodular
  bool submodular = false;
  std::optional<double> lipschitz;  // gradient Lipschitz constant L
  std::optional<double> strong_dr;  // strong DR parameter mu

  ObjectiveFlags& normalize() {
    if (dr_submodular) submodular = true;
    return *this;
  }
};

struct Eval {
  double value = 0.0;
  Vec grad;
};

// A differentiable objective over a box domain. Evaluation is pure and
// thread-safe; implementations are immutable after construction.
class Objective {
 public:
  Objective(Box domain, ObjectiveFlags flags)
      : domain_(std::move(domain)), flags_(flags.normalize()) {}
  virtual ~Objective() = default;

  const Box& domain() const { return domain_; }
  const ObjectiveFlags& flags() const { return flags_; }
  int dim() const { return domain_.dim(); }

  virtual Eval eval(const Vec& x) const = 0;
  virtual double value(const Vec& x) const { return eval(x).value; }
  Vec grad(const Vec& x) const { return eval(x).grad; }

 protected:
  // Validates x against the domain (with slack) and returns it clamped.
  Vec checked(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim())
      throw std::invalid_argument("objective: point has wrong dimension");
    if (!all_finite(x))
      throw std::invalid_argument("objective: point has non-finite entries");
    if (!domain_.contains(x, kDomainSlack))
      throw std::invalid_argument("objective: point outside domain");
    return domain_.clamp(x);
  }

 private:
  Box domain_;
  ObjectiveFlags flags_;
};

// Adapter wrapping user-supplied value/gradient callables.
class CallableObjective final : public Objective {
 public:
  CallableObjective(Box domain, ObjectiveFlags flags,
                    std::function<double(const Vec&)> value_fn,
                    std::function<Vec(const Vec&)> grad_fn)
      : Objective(std::move(domain), flags),
        value_fn_(std::move(value_fn)),
        grad_fn_(std::move(grad_fn)) {}

  Eval eval(const Vec& x) const override {
    Vec xc = checked(x);
    return {value_fn_(xc), grad_fn_(xc)};
  }
  double value(const Vec& x) const override { return value_fn_(checked(x)); }

 private:
  std::function<double(const Vec&)> value_fn_;
  std::function<Vec(const Vec&)> grad_fn_;
};

}  // namespace drsm
