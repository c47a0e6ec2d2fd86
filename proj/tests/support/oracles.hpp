#pragma once

// Brute-force reference implementations used as test oracles. They are
// written from the defining formulas with plain loops and share no code with
// the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ftlab::testing {

inline double oracle_l2(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += static_cast<long double>(v) * v;
  return static_cast<double>(std::sqrt(s));
}

inline double oracle_rmsd(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s / a.size()));
}

inline double oracle_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0.0L, na = 0.0L, nb = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  if (na == 0.0L && nb == 0.0L) return 1.0;
  if (na == 0.0L || nb == 0.0L) return 0.0;
  const double c = static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
  return std::clamp(c, -1.0, 1.0);
}

struct OracleStats {
  double std = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

// Two-pass sample statistics.
inline OracleStats oracle_stats(const std::vector<double>& x) {
  OracleStats s;
  long double sum = 0.0L;
  for (double v : x) sum += v;
  const long double mean = sum / x.size();
  long double ss = 0.0L;
  for (double v : x) ss += (v - mean) * (v - mean);
  s.mean = static_cast<double>(mean);
  s.std = x.size() > 1 ? static_cast<double>(std::sqrt(ss / (x.size() - 1))) : 0.0;
  s.max = *std::max_element(x.begin(), x.end());
  return s;
}

// Confusion matrix by a nested loop over (predicted, actual) cells.
inline void oracle_confusion(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& gold, double& tp,
                             double& fp, double& fn, double& tn) {
  double m[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == p && gold[i] == a) m[p][a] += 1.0;
  tp = m[1][1];
  fp = m[1][0];
  fn = m[0][1];
  tn = m[0][0];
}

inline double oracle_f1(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& gold) {
  double tp, fp, fn, tn;
  oracle_confusion(pred, gold, tp, fp, fn, tn);
  const double den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2 * tp / den;
}

inline double oracle_mcc(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& gold) {
  double tp, fp, fn, tn;
  oracle_confusion(pred, gold, tp, fp, fn, tn);
  const double f = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (f == 0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(f);
}

inline double oracle_accuracy(const std::vector<std::size_t>& pred, const std::vector<std::size_t>& gold) {
  double hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == gold[i] ? 1 : 0;
  return hit / static_cast<double>(pred.size());
}

// Scalar Adam with decoupled weight decay, written as an explicit loop over
// steps. t counts from 1.
struct ScalarAdamTrace {
  std::vector<double> theta;
  std::vector<double> m;
  std::vector<double> v;
};

inline ScalarAdamTrace oracle_adamw_scalar(double theta, const std::vector<double>& grads, double lr, double b1,
                                           double b2, double eps, double wd, bool bias_correction) {
  ScalarAdamTrace trace;
  double m = 0.0, v = 0.0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double t = static_cast<double>(i + 1);
    const double g = grads[i];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    double mh = m, vh = v;
    if (bias_correction) {
      mh = m / (1.0 - std::pow(b1, t));
      vh = v / (1.0 - std::pow(b2, t));
    }
    theta = theta - lr * (mh / (std::sqrt(vh) + eps) + wd * theta);
    trace.theta.push_back(theta);
    trace.m.push_back(m);
    trace.v.push_back(v);
  }
  return trace;
}

// Naive triple-loop matrix product, row-major.
inline std::vector<double> oracle_matmul(const std::vector<double>& a, const std::vector<double>& b, std::size_t m,
                                         std::size_t k, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(a[i * k + p]) * b[p * n + j];
      c[i * n + j] = static_cast<double>(s);
    }
  return c;
}

}  // namespace ftlab::testing
