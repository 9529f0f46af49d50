#include "infogeo/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "infogeo/errors.hpp"

namespace infogeo {
namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double scale_of(double x) { return std::max(1.0, std::abs(x)); }

}  // namespace

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw DomainError("alphabet needs at least 2 symbols");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw DomainError("alphabet labels must be distinct");
}

Alphabet Alphabet::indexed(int d, const std::string& prefix, bool one_based) {
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i) labels.push_back(prefix + std::to_string(one_based ? i + 1 : i));
  return Alphabet(std::move(labels));
}

std::string ProbVector::check(const Vec& w) {
  if (w.size() < 2) return "probability vector needs at least 2 entries";
  for (int i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) return "weight " + std::to_string(i) + " is not finite";
    if (w[i] <= 0.0) return "weight " + std::to_string(i) + " = " + fmt(w[i]) + " is not positive";
  }
  const double s = w.sum();
  if (std::abs(s - 1.0) > 1e-12) return "weights sum to " + fmt(s) + ", not 1";
  return {};
}

ProbVector::ProbVector(Vec weights) : w_(std::move(weights)) {
  if (auto msg = check(w_); !msg.empty()) throw DomainError(msg);
}

ProbVector ProbVector::uniform(int d) { return ProbVector(Vec::Constant(d, 1.0 / d)); }

bool Box::contains(const Vec& theta) const {
  if (theta.size() != lower.size()) return false;
  for (int i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > lower[i] && theta[i] < upper[i])) return false;
  }
  return true;
}

std::string Box::describe() const {
  std::string s;
  for (int i = 0; i < dim(); ++i) {
    if (i) s += " x ";
    s += "(" + fmt(lower[i]) + ", " + fmt(upper[i]) + ")";
  }
  return s;
}

void DiffConfig::validate() const {
  if (!(h2 > 0.0) || !(h3 > 0.0)) throw DomainError("finite-difference steps must be positive");
  if (!(h2 + h3 < margin)) {
    throw DomainError("boundary margin must exceed h2 + h3 so every stencil stays inside the domain");
  }
}

double DiffConfig::step2(double x) const { return h2 * scale_of(x); }
double DiffConfig::step3(double x) const { return h3 * scale_of(x); }

ProbVector ParametricModel::eval(const Vec& theta) const {
  require_interior(theta);
  Vec w = weights(theta);
  if (w.size() != alphabet_size()) {
    throw DimensionError(name + ": weights have length " + std::to_string(w.size()) +
                         ", alphabet has " + std::to_string(alphabet_size()));
  }
  if (auto msg = ProbVector::check(w); !msg.empty()) throw DomainError(name + ": " + msg);
  return ProbVector(std::move(w));
}

void ParametricModel::require_interior(const Vec& theta) const {
  if (theta.size() != param_dim()) {
    throw DimensionError(name + ": expected " + std::to_string(param_dim()) +
                         " parameters, got " + std::to_string(theta.size()));
  }
  if (!domain.contains(theta) || (slack && !(slack(theta) > 0.0))) {
    std::string where = domain.describe();
    if (slack) where += " with sum(theta) < 1";
    throw DomainError(name + ": theta outside Theta = " + where);
  }
}

void ParametricModel::require_margin(const Vec& theta, const DiffConfig& cfg) const {
  require_interior(theta);
  double biggest = 1.0;
  for (int i = 0; i < theta.size(); ++i) {
    const double gap = cfg.margin * scale_of(theta[i]);
    biggest = std::max(biggest, std::abs(theta[i]));
    if (theta[i] - domain.lower[i] < gap || domain.upper[i] - theta[i] < gap) {
      throw DomainError(name + ": theta[" + std::to_string(i) + "] = " + fmt(theta[i]) +
                        " is within the finite-difference margin of Theta = " + domain.describe());
    }
  }
  if (slack && slack(theta) < cfg.margin * biggest) {
    throw DomainError(name + ": theta is within the finite-difference margin of the simplex face");
  }
}

ParametricModel bernoulli() {
  ParametricModel m;
  m.name = "bernoulli";
  m.family = ModelFamily::bernoulli;
  m.alphabet = Alphabet({"0", "1"});
  m.domain = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};
  m.weights = [](const Vec& t) {
    Vec w(2);
    w << 1.0 - t[0], t[0];
    return w;
  };
  m.partials = [](const Vec&) {
    Mat d(2, 1);
    d << -1.0, 1.0;
    return d;
  };
  return m;
}

ParametricModel binomial(int n) {
  if (n < 1) throw DomainError("binomial needs at least one trial");
  ParametricModel m;
  m.name = "binomial(" + std::to_string(n) + ")";
  m.family = ModelFamily::binomial;
  m.trials = n;
  m.alphabet = Alphabet::indexed(n + 1);
  m.domain = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0)};
  m.weights = [n](const Vec& t) {
    Vec w(n + 1);
    for (int x = 0; x <= n; ++x) {
      const double logc = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0);
      w[x] = std::exp(logc) * std::pow(t[0], x) * std::pow(1.0 - t[0], n - x);
    }
    return w;
  };
  m.partials = [w = m.weights, n](const Vec& t) {
    const Vec p = w(t);
    Mat d(n + 1, 1);
    for (int x = 0; x <= n; ++x) d(x, 0) = p[x] * (x / t[0] - (n - x) / (1.0 - t[0]));
    return d;
  };
  return m;
}

ParametricModel categorical(int d) {
  if (d < 2) throw DomainError("categorical needs at least 2 cells");
  ParametricModel m;
  m.name = "categorical(" + std::to_string(d) + ")";
  m.family = ModelFamily::categorical;
  m.alphabet = Alphabet::indexed(d, "a", true);
  m.domain = {Vec::Zero(d - 1), Vec::Ones(d - 1)};
  m.weights = [d](const Vec& t) {
    Vec w(d);
    w.head(d - 1) = t;
    w[d - 1] = 1.0 - t.sum();
    return w;
  };
  m.partials = [d](const Vec&) {
    Mat p = Mat::Zero(d, d - 1);
    p.topRows(d - 1).setIdentity();
    p.row(d - 1).setConstant(-1.0);
    return p;
  };
  m.slack = [](const Vec& t) { return 1.0 - t.sum(); };
  return m;
}

ParametricModel logit_linear(const Mat& statistics, Box domain) {
  if (statistics.rows() < 2 || statistics.cols() < 1) {
    throw DimensionError("logit-linear statistic table must be d x k with d >= 2, k >= 1");
  }
  if (domain.dim() != statistics.cols() || domain.upper.size() != domain.lower.size()) {
    throw DimensionError("logit-linear domain dimension does not match the statistic table");
  }
  ParametricModel m;
  m.name = "logit_linear";
  m.family = ModelFamily::logit_linear;
  m.alphabet = Alphabet::indexed(static_cast<int>(statistics.rows()));
  m.domain = std::move(domain);
  m.weights = [h = statistics](const Vec& t) {
    Vec s = h * t;
    s.array() -= s.maxCoeff();
    Vec w = s.array().exp();
    return Vec(w / w.sum());
  };
  m.partials = [h = statistics, w = m.weights](const Vec& t) {
    const Vec p = w(t);
    const Eigen::RowVectorXd mean = p.transpose() * h;
    Mat centered = h.rowwise() - mean;
    return Mat(p.asDiagonal() * centered);
  };
  return m;
}

ParametricModel logit_linear(const Mat& statistics) {
  const auto k = statistics.cols();
  return logit_linear(statistics, Box{Vec::Constant(k, -5.0), Vec::Constant(k, 5.0)});
}

EscortMap EscortMap::identity() { return EscortMap{}; }

EscortMap EscortMap::alpha(double a) {
  if (!(a > 0.0)) throw DomainError("escort order must be positive, got " + fmt(a));
  if (a == 1.0) throw DispatchError("alpha escort with alpha = 1 is the identity; use EscortMap::identity()");
  EscortMap e;
  e.kind_ = Kind::alpha;
  e.alpha_ = a;
  return e;
}

EscortMap EscortMap::custom(std::string name, Fn fn) {
  EscortMap e;
  e.kind_ = Kind::custom;
  e.name_ = std::move(name);
  e.fn_ = std::move(fn);
  return e;
}

std::string EscortMap::name() const {
  switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::alpha: return "alpha(" + fmt(alpha_) + ")";
    case Kind::custom: return name_.empty() ? "custom" : name_;
  }
  return {};
}

ProbVector escort(const ProbVector& p, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("escort order must be positive, got " + fmt(alpha));
  if (alpha == 1.0) return p;
  Vec l = alpha * p.weights().array().log();
  l.array() -= l.maxCoeff();
  Vec w = l.array().exp();
  w /= w.sum();
  return ProbVector(std::move(w));
}

ProbVector apply_escort(const ProbVector& p, const EscortMap& F) {
  switch (F.kind()) {
    case EscortMap::Kind::identity: return p;
    case EscortMap::Kind::alpha: return escort(p, F.alpha_value());
    case EscortMap::Kind::custom: break;
  }
  Vec out = F.fn()(p);
  if (out.size() != p.size()) {
    throw EscortRangeError(F.name() + ": output length " + std::to_string(out.size()) +
                           " differs from input length " + std::to_string(p.size()));
  }
  if (auto msg = ProbVector::check(out); !msg.empty()) throw EscortRangeError(F.name() + ": " + msg);
  return ProbVector(std::move(out));
}

Mat model_partials(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg) {
  if (m.partials) {
    m.require_interior(theta);
    return m.partials(theta);
  }
  cfg.validate();
  m.require_margin(theta, cfg);
  const int k = m.param_dim();
  Mat out(m.alphabet_size(), k);
  for (int i = 0; i < k; ++i) {
    auto diff = [&](double h) {
      Vec up = theta, dn = theta;
      up[i] += h;
      dn[i] -= h;
      return Vec((m.eval(up).weights() - m.eval(dn).weights()) / (2.0 * h));
    };
    const double h = cfg.step2(theta[i]);
    Vec col = diff(h);
    if (cfg.scheme == DiffConfig::Scheme::richardson) col = (4.0 * diff(0.5 * h) - col) / 3.0;
    out.col(i) = col;
  }
  return out;
}

Mat model_scores(const ParametricModel& m, const Vec& theta, const DiffConfig& cfg) {
  const Vec p = m.eval(theta).weights();
  return p.cwiseInverse().asDiagonal() * model_partials(m, theta, cfg);
}

Mat escort_partials(const ParametricModel& m, const Vec& theta, const EscortMap& F,
                    const DiffConfig& cfg) {
  switch (F.kind()) {
    case EscortMap::Kind::identity: return model_partials(m, theta, cfg);
    case EscortMap::Kind::alpha: {
      // ∂ p^(α) = α p^(α) (s − E_α s)
      const double a = F.alpha_value();
      const Vec pa = escort(m.eval(theta), a).weights();
      const Mat s = model_scores(m, theta, cfg);
      const Eigen::RowVectorXd mean = pa.transpose() * s;
      return a * pa.asDiagonal() * Mat(s.rowwise() - mean);
    }
    case EscortMap::Kind::custom: break;
  }
  cfg.validate();
  m.require_margin(theta, cfg);
  const int k = m.param_dim();
  Mat out(m.alphabet_size(), k);
  auto Fp = [&](const Vec& t) { return apply_escort(m.eval(t), F).weights(); };
  for (int i = 0; i < k; ++i) {
    auto diff = [&](double h) {
      Vec up = theta, dn = theta;
      up[i] += h;
      dn[i] -= h;
      return Vec((Fp(up) - Fp(dn)) / (2.0 * h));
    };
    const double h = cfg.step2(theta[i]);
    Vec col = diff(h);
    if (cfg.scheme == DiffConfig::Scheme::richardson) col = (4.0 * diff(0.5 * h) - col) / 3.0;
    out.col(i) = col;
  }
  return out;
}

Vec alpha_representation(const ParametricModel& m, const Vec& theta, int i, double alpha,
                         const DiffConfig& cfg) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive, got " + fmt(alpha));
  if (alpha == 1.0) throw DispatchError("alpha = 1: use the plain score d_i log p_theta");
  if (i < 0 || i >= m.param_dim()) throw DimensionError("parameter index out of range");
  const ProbVector p = m.eval(theta);
  const Vec pa = escort(p, alpha).weights();
  const Vec s = model_scores(m, theta, cfg).col(i);
  const double mean = pa.dot(s);
  return pa.cwiseQuotient(p.weights()).cwiseProduct(Vec(s.array() - mean));
}

}  // namespace infogeo
