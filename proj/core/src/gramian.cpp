// Copyright 2026 The obslab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "obslab/gramian.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace obslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum exp(terms)) skipping -inf entries; -inf when all are
double log_sum_exp(const std::vector<double>& terms) {
  double peak = -kInf;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == -kInf) return -kInf;
  double s = 0.0;
  for (double t : terms)
    if (t != -kInf) s += std::exp(t - peak);
  return peak + std::log(s);
}

// log(e^x - e^y) for x > y; -inf when the difference vanishes
double log_diff_exp(double x, double y) {
  if (y >= x) return -kInf;
  double d = 1.0 - std::exp(y - x);
  return d > 0.0 ? x + std::log(d) : -kInf;
}

// c^H B c for real symmetric B: cross terms cancel, only the real and
// imaginary parts contribute quadratically
double quad_form(const MatXd& B, const VecXcd& c) {
  VecXd x = c.real(), y = c.imag();
  return x.dot(B * x) + y.dot(B * y);
}

double log_norm_sq(const VecXd& energies, const VecXcd& c, double t) {
  std::vector<double> terms(energies.size(), -kInf);
  for (int k = 0; k < energies.size(); ++k) {
    double a = std::abs(c[k]);
    if (a > 0.0) terms[k] = -2.0 * energies[k] * t + 2.0 * std::log(a);
  }
  return log_sum_exp(terms);
}

}  // namespace

MatXd mask_gram(const HamiltonianSpectrum& spec, const MaskResult* m) {
  int n = spec.n();
  if (m == nullptr) return MatXd::Identity(n, n);
  if (static_cast<int>(m->indicator.size()) != spec.grid.n)
    throw ConfigError("mask_gram: mask size does not match grid");
  MatXd rows(static_cast<int>(m->nodes.size()), n);
  for (size_t i = 0; i < m->nodes.size(); ++i)
    rows.row(static_cast<int>(i)) = spec.modes.row(m->nodes[i]);
  return spec.grid.h * (rows.transpose() * rows);
}

Complex psi_kernel(double delta, double T) {
  Complex z(0.0, delta * T);
  if (std::abs(delta) * T < 1e-6) {
    return T * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
  }
  Complex i_delta(0.0, delta);
  return (std::exp(z) - 1.0) / i_delta;
}

Gramian schrodinger_gramian(const HamiltonianSpectrum& spec,
                            const MaskResult* m, double T) {
  if (!(T > 0.0)) throw ConfigError("schrodinger_gramian: T must be positive");
  int n = spec.n();
  Gramian G;
  G.T = T;
  G.kind = GramKind::schrodinger;
  G.mask_measure = m ? m->measure : spec.grid.h * spec.grid.n;
  if (m == nullptr) {
    // whole-domain observation: the mask factor is the identity and the
    // time kernel survives only on the diagonal
    G.matrix = Complex(T, 0.0) * MatXcd::Identity(n, n);
    return G;
  }
  MatXd B = mask_gram(spec, m);
  G.matrix.resize(n, n);
  for (int k = 0; k < n; ++k) {
    G.matrix(k, k) = B(k, k) * T;
    for (int j = k + 1; j < n; ++j) {
      Complex v = B(k, j) * psi_kernel(spec.energies[j] - spec.energies[k], T);
      G.matrix(k, j) = v;
      G.matrix(j, k) = std::conj(v);
    }
  }
  return G;
}

ObsConstant observability_constant(const Gramian& G) {
  Eigen::SelfAdjointEigenSolver<MatXcd> es(G.matrix);
  if (es.info() != Eigen::Success)
    throw NumericalError("observability_constant: eigensolver failed");
  double lo = es.eigenvalues()(0);
  double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  double scale = std::max(std::abs(lo), std::abs(hi));
  if (lo <= 1e-14 * scale)
    throw NumericalError("not observable at this resolution");
  ObsConstant out;
  out.lambda_min = lo;
  out.C = 1.0 / lo;
  out.worst = es.eigenvectors().col(0);
  return out;
}

double spectral_ineq_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                              double mu) {
  int r = projector_rank(spec.energies, mu);
  if (r == 0)
    throw ConfigError("spectral_ineq_constant: no modes below the cutoff");
  MatXd block = B.topLeftCorner(r, r);
  Eigen::SelfAdjointEigenSolver<MatXd> es(block);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectral_ineq_constant: eigensolver failed");
  double sigma2 = es.eigenvalues()(0);
  if (sigma2 <= 1e-14) {
    std::ostringstream os;
    os << "spectral block singular at this resolution: " << r
       << " modes below cutoff " << mu << " exceed the observed rank";
    throw NumericalError(os.str());
  }
  return 1.0 / std::sqrt(sigma2);
}

MatXd heat_gramian(const VecXd& energies, const MatXd& B, double T) {
  if (!(T > 0.0)) throw ConfigError("heat_gramian: T must be positive");
  int n = static_cast<int>(energies.size());
  MatXd G(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      double e = energies[k] + energies[j];
      double v = B(k, j) * (1.0 - std::exp(-e * T)) / e;
      G(k, j) = v;
      G(j, k) = v;
    }
  }
  return G;
}

MatXd partial_heat_gramian(const VecXd& energies, const MatXd& B, double t1,
                           double t2) {
  if (!(t1 >= 0.0 && t2 > t1))
    throw ConfigError("partial_heat_gramian: need 0 <= t1 < t2");
  int n = static_cast<int>(energies.size());
  MatXd G(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      double e = energies[k] + energies[j];
      double v = B(k, j) * (std::exp(-e * t1) - std::exp(-e * t2)) / e;
      G(k, j) = v;
      G(j, k) = v;
    }
  }
  return G;
}

HeatConstant heat_obs_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                               double T) {
  if (!(T > 0.0)) throw ConfigError("heat_obs_constant: T must be positive");
  int n = spec.n();
  int kept = 0;
  while (kept < n && 2.0 * spec.energies[kept] * T < 600.0) ++kept;
  if (kept == 0)
    throw NumericalError(
        "heat_obs_constant: every mode weight underflows at this T");
  MatXd Gh = heat_gramian(spec.energies, B, T).topLeftCorner(kept, kept);
  VecXd D(kept);
  for (int k = 0; k < kept; ++k) D[k] = std::exp(-2.0 * spec.energies[k] * T);

  double scale = Gh.cwiseAbs().maxCoeff();
  double shift = 0.0;
  Eigen::LLT<MatXd> llt;
  for (;;) {
    MatXd A = Gh;
    if (shift > 0.0) A.diagonal().array() += shift;
    llt.compute(A);
    if (llt.info() == Eigen::Success) break;
    shift = std::max(10.0 * shift, 1e-18 * scale);
    if (shift > 1e-4 * scale)
      throw NumericalError(
          "heat_obs_constant: Gramian stays singular under regularization");
  }

  // nu = lambda_max(L^-1 D L^-T) for Gh = L L^T
  MatXd Linv_D = llt.matrixL().solve(MatXd(D.asDiagonal()));
  MatXd M = llt.matrixL().solve(Linv_D.transpose());
  Eigen::SelfAdjointEigenSolver<MatXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalError("heat_obs_constant: eigensolver failed");
  int top = kept - 1;
  VecXd y = es.eigenvectors().col(top);
  VecXd x = llt.matrixU().solve(y);
  x /= x.norm();

  HeatConstant out;
  out.nu = es.eigenvalues()(top);
  out.shift_used = shift;
  out.rank = kept;
  out.maximizer = VecXcd::Zero(n);
  for (int k = 0; k < kept; ++k) out.maximizer[k] = x[k];
  return out;
}

double heat_obs_constant_full_mask(const VecXd& energies, double T) {
  if (!(T > 0.0))
    throw ConfigError("heat_obs_constant_full_mask: T must be positive");
  double best = 0.0;
  for (int k = 0; k < energies.size(); ++k) {
    double w = std::exp(-2.0 * energies[k] * T);
    if (w <= 0.0) continue;
    best = std::max(best, 2.0 * energies[k] * w / (1.0 - w));
  }
  return best;
}

double highfreq_obs_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                             double mu, double T) {
  if (!(T > 0.0)) throw ConfigError("highfreq_obs_constant: T must be positive");
  int n = spec.n();
  int r = projector_rank(spec.energies, mu);
  if (r >= n)
    throw ConfigError("highfreq_obs_constant: no modes above the cutoff");
  int m = n - r;
  MatXcd G(m, m);
  for (int k = 0; k < m; ++k) {
    G(k, k) = B(r + k, r + k) * T;
    for (int j = k + 1; j < m; ++j) {
      Complex v = B(r + k, r + j) *
                  psi_kernel(spec.energies[r + j] - spec.energies[r + k], T);
      G(k, j) = v;
      G(j, k) = std::conj(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<MatXcd> es(G);
  if (es.info() != Eigen::Success)
    throw NumericalError("highfreq_obs_constant: eigensolver failed");
  double lo = es.eigenvalues()(0);
  double hi = es.eigenvalues()(m - 1);
  if (lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi)))
    throw NumericalError(
        "highfreq_obs_constant: block not observable at this resolution");
  return T / lo;
}

double resolvent_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                          double mu) {
  if (!(mu > 0.0)) throw ConfigError("resolvent_constant: mu must be positive");
  int n = spec.n();
  MatXd M = B;
  for (int k = 0; k < n; ++k) {
    double d = spec.energies[k] - mu;
    M(k, k) += d * d / mu;
  }
  Eigen::SelfAdjointEigenSolver<MatXd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericalError("resolvent_constant: eigensolver failed");
  double lo = es.eigenvalues()(0);
  double hi = es.eigenvalues()(n - 1);
  if (lo <= 1e-14 * std::max(std::abs(lo), std::abs(hi)))
    throw NumericalError("resolvent_constant: form singular at this resolution");
  return 1.0 / lo;
}

InterpRecord interpolation_heat_check(const HamiltonianSpectrum& spec,
                                      const MatXd& B, const VecXcd& f_coeffs,
                                      double s, double t, double alpha) {
  if (!(s >= 0.0 && t > s))
    throw ConfigError("interpolation_heat_check: need 0 <= s < t");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("interpolation_heat_check: alpha must lie in (0, 1)");
  VecXcd ct = evolve_heat(spec.energies, f_coeffs, t);
  VecXcd cs = evolve_heat(spec.energies, f_coeffs, s);
  double omega_sq = quad_form(B, ct);
  InterpRecord rec;
  if (!(omega_sq > 0.0) || ct.norm() == 0.0 || cs.norm() == 0.0) {
    rec.degenerate = true;
    return rec;
  }
  rec.log_C_impl = std::log(ct.norm()) - 3.0 / (alpha * (t - s)) -
                   (1.0 - alpha) * 0.5 * std::log(omega_sq) -
                   alpha * std::log(cs.norm());
  return rec;
}

TeleResult telescoping_heat_observability(const HamiltonianSpectrum& spec,
                                          const MatXd& B, double T, int depth,
                                          const VecXcd& f_coeffs) {
  if (!(T > 0.0))
    throw ConfigError("telescoping_heat_observability: T must be positive");
  if (depth < 1 || depth > 40)
    throw ConfigError("telescoping_heat_observability: depth must be in [1, 40]");
  VecXcd c = f_coeffs;
  double cn = c.norm();
  if (cn == 0.0)
    throw ConfigError("telescoping_heat_observability: zero state");
  c /= cn;

  const double log4 = std::log(4.0);
  TeleResult res;
  res.log_a.resize(depth + 1);
  for (int m = 0; m <= depth; ++m) {
    double S_m = T / std::pow(2.0, m);
    res.log_a[m] =
        log_norm_sq(spec.energies, c, S_m) - 99.0 * std::pow(2.0, m + 1) / T;
  }

  std::vector<double> log_I(depth);
  std::vector<double> partial_terms;
  res.log_K = -kInf;
  for (int m = 0; m < depth; ++m) {
    double S_m = T / std::pow(2.0, m);
    double S_next = 0.5 * S_m;
    MatXd Gm = partial_heat_gramian(spec.energies, B, S_next, S_m);
    double I_m = quad_form(Gm, c);
    log_I[m] = I_m > 0.0 ? std::log(I_m) : -kInf;
    partial_terms.push_back(-m * log4 + log_I[m]);
    double log_num = log_diff_exp(res.log_a[m], res.log_a[m + 1] - log4);
    if (log_num == -kInf) continue;
    if (log_I[m] == -kInf)
      throw NumericalError(
          "telescoping_heat_observability: an interval carries no observed "
          "mass at this resolution");
    res.log_K = std::max(res.log_K, log_num - std::log(T) - log_I[m]);
  }

  MatXd G_total = heat_gramian(spec.energies, B, T);
  double I_total = quad_form(G_total, c);
  if (!(I_total > 0.0))
    throw NumericalError(
        "telescoping_heat_observability: no observed mass on [0, T]");
  double log_I_total = std::log(I_total);
  double log_I_partial = log_sum_exp(partial_terms);

  double head = -depth * log4 + res.log_a[depth];
  double bulk = res.log_K == -kInf
                    ? -kInf
                    : res.log_K + std::log(T) + log_I_partial;
  res.log_C = 198.0 / T + log_sum_exp({head, bulk}) - log_I_total;
  res.C = std::exp(res.log_C);
  res.tail = 198.0 / T + head - log_I_total;
  return res;
}

}  // namespace obslab
