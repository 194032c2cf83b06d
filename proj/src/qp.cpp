// Copyright 2026 The tmiqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tmiqp/qp.hpp"

#include <algorithm>
#include <cmath>

#include "tmiqp/numerics.hpp"

namespace tmiqp::qp {

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::Optimal:
      return "Optimal";
    case QpStatus::Infeasible:
      return "Infeasible";
    case QpStatus::IterationLimit:
      return "IterationLimit";
    case QpStatus::NonconvexRejected:
      return "NonconvexRejected";
  }
  return "Unknown";
}

double QpProblem::objective(const Vector& z) const {
  Vector Hz;
  apply_H(z, Hz);
  return 0.5 * z.dot(Hz) + h().dot(z) + constant();
}

namespace {

double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Pseudo-inverse based Schur complement step used by the convexity check.
// Returns false when Q is indefinite or has a null direction coupled to the
// rest of the problem.
bool psd_schur_step(const Matrix& Qww, const Matrix& Qwx, double tol,
                    Matrix& pinv_Qwx) {
  const double scale = 1.0 + Qww.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (Qww + Qww.transpose()));
  const Vector& values = eig.eigenvalues();
  const Matrix& V = eig.eigenvectors();
  const double cutoff = tol * scale;
  if (values(0) < -cutoff) {
    return false;
  }
  const Matrix VtQ = V.transpose() * Qwx;
  const double coupling_scale =
      1.0 + (Qwx.size() ? Qwx.cwiseAbs().maxCoeff() : 0.0);
  Matrix scaled = VtQ;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) <= cutoff) {
      if (VtQ.cols() > 0 &&
          VtQ.row(i).cwiseAbs().maxCoeff() > std::sqrt(tol) * coupling_scale) {
        return false;
      }
      scaled.row(i).setZero();
    } else {
      scaled.row(i) /= values(i);
    }
  }
  pinv_Qwx = V * scaled;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseQp

void DenseQp::check() const {
  const auto n = H.rows();
  if (H.cols() != n || h_.size() != n || E.cols() != n || C.cols() != n ||
      E.rows() != e_.size() || C.rows() != d_.size()) {
    throw DimensionError("DenseQp: inconsistent block sizes");
  }
}

namespace {

class DenseKktSolver final : public KktSolver {
 public:
  explicit DenseKktSolver(const DenseQp& qp) : qp_(qp) {}

  bool factor(const Vector& sigma) override {
    const auto n = qp_.num_vars();
    const auto me = qp_.num_eq();
    Matrix K = Matrix::Zero(n + me, n + me);
    K.topLeftCorner(n, n) = qp_.H;
    if (sigma.size() > 0) {
      K.topLeftCorner(n, n).noalias() +=
          qp_.C.transpose() * sigma.asDiagonal() * qp_.C;
    }
    K.bottomLeftCorner(me, n) = qp_.E;
    K.topRightCorner(n, me) = qp_.E.transpose();
    return solver_.factor(K);
  }

  void solve(const Vector& rd, const Vector& rp, Vector& dz,
             Vector& dy) const override {
    const auto n = qp_.num_vars();
    Vector rhs(n + qp_.num_eq());
    rhs << rd, rp;
    const Vector sol = solver_.solve(rhs);
    dz = sol.head(n);
    dy = sol.tail(qp_.num_eq());
  }

 private:
  const DenseQp& qp_;
  numerics::SymmetricIndefiniteSolver solver_;
};

}  // namespace

std::unique_ptr<KktSolver> DenseQp::make_kkt_solver() const {
  return std::make_unique<DenseKktSolver>(*this);
}

bool DenseQp::reduced_hessian_psd(double tol) const {
  if (H.size() == 0) {
    return true;
  }
  Matrix Z;
  if (E.rows() == 0) {
    Z = Matrix::Identity(H.rows(), H.rows());
  } else {
    Eigen::FullPivLU<Matrix> lu(E);
    Z = lu.kernel();
    if (Z.cols() == 1 && Z.norm() == 0.0) {
      return true;  // nullspace is {0}
    }
  }
  const Matrix reduced = Z.transpose() * H * Z;
  const double scale = 1.0 + H.cwiseAbs().maxCoeff();
  return numerics::min_eigenvalue_symmetric(reduced) >= -tol * scale;
}

std::unique_ptr<QpProblem> DenseQp::elastic(double regularization) const {
  auto out = std::make_unique<DenseQp>();
  const auto n = num_vars();
  const auto m = num_ineq();
  out->H = regularization * Matrix::Identity(n + 1, n + 1);
  out->h_ = Vector::Zero(n + 1);
  out->h_(n) = 1.0;
  out->E = Matrix::Zero(num_eq(), n + 1);
  out->E.leftCols(n) = E;
  out->e_ = e_;
  out->C = Matrix::Zero(m + 1, n + 1);
  out->C.topLeftCorner(m, n) = C;
  out->C.col(n).head(m).setConstant(-1.0);
  out->C(m, n) = -1.0;
  out->d_ = Vector::Zero(m + 1);
  out->d_.head(m) = d_;
  out->elastic_vars = 1;
  return out;
}

double DenseQp::elastic_violation(const Vector& z) const {
  return elastic_vars > 0 ? z.tail(elastic_vars).sum() : 0.0;
}

// ---------------------------------------------------------------------------
// OcpQp

QpStage QpStage::empty(int nx, int nw) {
  QpStage s;
  s.Hxx = Matrix::Zero(nx, nx);
  s.Hxw = Matrix::Zero(nx, nw);
  s.Hww = Matrix::Zero(nw, nw);
  s.hx = Vector::Zero(nx);
  s.hw = Vector::Zero(nw);
  s.Cx = Matrix::Zero(0, nx);
  s.Cw = Matrix::Zero(0, nw);
  s.d = Vector::Zero(0);
  s.A = Matrix::Zero(0, nx);
  s.B = Matrix::Zero(0, nw);
  s.c = Vector::Zero(0);
  return s;
}

OcpQp::OcpQp(std::vector<QpStage> stages, double constant)
    : stages_(std::move(stages)), constant_(constant) {
  const int K = static_cast<int>(stages_.size());
  if (K == 0) {
    throw DimensionError("OcpQp: at least one stage required");
  }
  var_offset_.resize(K);
  eq_offset_.resize(K);
  ineq_offset_.resize(K);
  for (int k = 0; k < K; ++k) {
    const auto& s = stages_[k];
    const int nx = s.nx();
    const int nw = s.nw();
    const int m = s.rows();
    if (s.Hxx.cols() != nx || s.Hxw.rows() != nx || s.Hxw.cols() != nw ||
        s.Hww.cols() != nw || s.hx.size() != nx || s.hw.size() != nw ||
        s.Cx.rows() != m || s.Cx.cols() != nx || s.Cw.rows() != m ||
        s.Cw.cols() != nw) {
      throw DimensionError("OcpQp: stage " + std::to_string(k) +
                           " blocks are inconsistent");
    }
    if (k + 1 < K) {
      const int nx_next = stages_[k + 1].nx();
      if (s.A.rows() != nx_next || s.A.cols() != nx || s.B.rows() != nx_next ||
          s.B.cols() != nw || s.c.size() != nx_next) {
        throw DimensionError("OcpQp: dynamics of stage " + std::to_string(k) +
                             " are inconsistent");
      }
    } else if (s.A.rows() != 0 || s.B.rows() != 0 || s.c.size() != 0) {
      throw DimensionError("OcpQp: last stage must not carry dynamics");
    }
    var_offset_[k] = nvar_;
    eq_offset_[k] = neq_;
    ineq_offset_[k] = nineq_;
    nvar_ += nx + nw;
    neq_ += s.c.size();
    nineq_ += m;
  }
  h_.resize(nvar_);
  d_.resize(nineq_);
  e_.resize(neq_);
  for (int k = 0; k < K; ++k) {
    const auto& s = stages_[k];
    h_.segment(x_offset(k), s.nx()) = s.hx;
    h_.segment(w_offset(k), s.nw()) = s.hw;
    d_.segment(ineq_offset_[k], s.rows()) = s.d;
    e_.segment(eq_offset_[k], s.c.size()) = s.c;
  }
  row_start_.assign(1, 0);
  for (int k = 0; k < K; ++k) {
    const auto& s = stages_[k];
    const int x0 = static_cast<int>(x_offset(k));
    const int w0 = static_cast<int>(w_offset(k));
    for (int i = 0; i < s.rows(); ++i) {
      for (int j = 0; j < s.nx(); ++j) {
        if (s.Cx(i, j) != 0.0) {
          col_.push_back(x0 + j);
          val_.push_back(s.Cx(i, j));
        }
      }
      for (int j = 0; j < s.nw(); ++j) {
        if (s.Cw(i, j) != 0.0) {
          col_.push_back(w0 + j);
          val_.push_back(s.Cw(i, j));
        }
      }
      row_start_.push_back(static_cast<int>(col_.size()));
    }
  }
}

namespace {

// y (+)= M x and y (+)= M' x for a column-major block, without the dispatch
// of general products; the stage blocks are small.
void gemv(const Matrix& M, const double* x, double* y, bool accumulate) {
  const Eigen::Index r = M.rows(), c = M.cols();
  if (!accumulate) std::fill(y, y + r, 0.0);
  const double* a = M.data();
  for (Eigen::Index j = 0; j < c; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (Eigen::Index i = 0; i < r; ++i) y[i] += a[i + j * r] * xj;
  }
}

void gemv_t(const Matrix& M, const double* x, double* y, bool accumulate) {
  const Eigen::Index r = M.rows(), c = M.cols();
  const double* a = M.data();
  for (Eigen::Index j = 0; j < c; ++j) {
    double s = accumulate ? y[j] : 0.0;
    for (Eigen::Index i = 0; i < r; ++i) s += a[i + j * r] * x[i];
    y[j] = s;
  }
}

}  // namespace

void OcpQp::apply_H(const Vector& z, Vector& out) const {
  out.resize(nvar_);
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    const auto& s = stages_[k];
    const double* x = z.data() + x_offset(k);
    const double* w = z.data() + w_offset(k);
    double* ox = out.data() + x_offset(k);
    double* ow = out.data() + w_offset(k);
    gemv(s.Hxx, x, ox, false);
    gemv(s.Hxw, w, ox, true);
    gemv_t(s.Hxw, x, ow, false);
    gemv(s.Hww, w, ow, true);
  }
}

void OcpQp::apply_C(const Vector& z, Vector& out) const {
  out.resize(nineq_);
  for (Eigen::Index i = 0; i < nineq_; ++i) {
    double acc = 0.0;
    for (int p = row_start_[i]; p < row_start_[i + 1]; ++p) acc += val_[p] * z[col_[p]];
    out[i] = acc;
  }
}

void OcpQp::apply_Ct(const Vector& lambda, Vector& out) const {
  out.setZero(nvar_);
  for (Eigen::Index i = 0; i < nineq_; ++i) {
    const double l = lambda[i];
    for (int p = row_start_[i]; p < row_start_[i + 1]; ++p) out[col_[p]] += val_[p] * l;
  }
}

void OcpQp::apply_E(const Vector& z, Vector& out) const {
  out.resize(neq_);
  for (std::size_t k = 0; k + 1 < stages_.size(); ++k) {
    const auto& s = stages_[k];
    const int nn = stages_[k + 1].nx();
    double* o = out.data() + eq_offset_[k];
    const double* xn = z.data() + x_offset(k + 1);
    for (int i = 0; i < nn; ++i) o[i] = -xn[i];
    gemv(s.A, z.data() + x_offset(k), o, true);
    gemv(s.B, z.data() + w_offset(k), o, true);
    for (int i = 0; i < nn; ++i) o[i] = -o[i];
  }
}

void OcpQp::apply_Et(const Vector& y, Vector& out) const {
  out.setZero(nvar_);
  for (std::size_t k = 0; k + 1 < stages_.size(); ++k) {
    const auto& s = stages_[k];
    const int nn = stages_[k + 1].nx();
    const double* yk = y.data() + eq_offset_[k];
    double* on = out.data() + x_offset(k + 1);
    for (int i = 0; i < nn; ++i) on[i] += yk[i];
    double* ox = out.data() + x_offset(k);
    double* ow = out.data() + w_offset(k);
    for (Eigen::Index j = 0; j < s.A.cols(); ++j) {
      double acc = 0.0;
      for (int i = 0; i < nn; ++i) acc += s.A(i, j) * yk[i];
      ox[j] -= acc;
    }
    for (Eigen::Index j = 0; j < s.B.cols(); ++j) {
      double acc = 0.0;
      for (int i = 0; i < nn; ++i) acc += s.B(i, j) * yk[i];
      ow[j] -= acc;
    }
  }
}

// Small dense kernels for the Riccati recursion. Stage blocks are tiny in
// the benchmark problems, where the dispatch overhead of general products
// dominates, so these work on raw column-major storage.
namespace kernels {

// In-place lower Cholesky of the n x n matrix at `a` (leading dimension n).
bool cholesky(double* a, int n) {
  for (int j = 0; j < n; ++j) {
    double d = a[j + j * n];
    for (int k = 0; k < j; ++k) d -= a[j + k * n] * a[j + k * n];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a[j + j * n] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = a[i + j * n];
      for (int k = 0; k < j; ++k) s -= a[i + k * n] * a[j + k * n];
      a[i + j * n] = s / d;
    }
  }
  return true;
}

// Cholesky with the same diagonal-shift fallback as robust_llt. `m` keeps
// the matrix, `l` receives the factor.
bool robust_cholesky(const double* m, double* l, int n) {
  std::copy(m, m + n * n, l);
  if (cholesky(l, n)) return true;
  double scale = 0.0;
  for (int i = 0; i < n * n; ++i) scale = std::max(scale, std::abs(m[i]));
  scale += 1.0;
  for (double delta = 1e-12; delta <= 1e-2; delta *= 100.0) {
    std::copy(m, m + n * n, l);
    for (int i = 0; i < n; ++i) l[i + i * n] += delta * scale;
    if (cholesky(l, n)) return true;
  }
  return false;
}

// Solves (L L') X = B in place for the n x r right-hand side at `b`.
void cholesky_solve(const double* l, int n, double* b, int r) {
  for (int c = 0; c < r; ++c) {
    double* x = b + c * n;
    for (int i = 0; i < n; ++i) {
      double s = x[i];
      for (int k = 0; k < i; ++k) s -= l[i + k * n] * x[k];
      x[i] = s / l[i + i * n];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int k = i + 1; k < n; ++k) s -= l[k + i * n] * x[k];
      x[i] = s / l[i + i * n];
    }
  }
}

}  // namespace kernels

// Riccati recursion on the stacked stage variables z_k = (x_k, w_k): with
// M_k = H_k + D_k' S_k D_k + F_k' P_{k+1} F_k, F_k = [A_k B_k], the cost-to-go
// Hessian is P_k = M_xx - M_xw M_ww^{-1} M_wx.
class RiccatiKktSolver final : public KktSolver {
 public:
  explicit RiccatiKktSolver(const OcpQp& qp) : qp_(qp) {
    const auto& stages = qp.stages_;
    const int K = static_cast<int>(stages.size());
    work_.resize(K);
    for (int k = 0; k < K; ++k) {
      const auto& s = stages[k];
      auto& f = work_[k];
      f.nx = s.nx();
      f.nw = s.nw();
      f.m = s.rows();
      f.nn = k + 1 < K ? stages[k + 1].nx() : 0;
      const int n = f.nx + f.nw;
      f.H.resize(n, n);
      f.H << s.Hxx, s.Hxw, s.Hxw.transpose(), s.Hww;
      f.F.resize(f.nn, n);
      if (f.nn > 0) f.F << s.A, s.B;
      f.M.resize(n, n);
      f.PF.resize(f.nn, n);
      f.Mww.resize(f.nw, f.nw);
      f.L.resize(f.nw, f.nw);
      f.K.resize(f.nw, f.nx);
      f.P.resize(f.nx, f.nx);
      f.g.resize(n);
      f.kff.resize(f.nw);
      f.t.resize(f.nn);
    }
    const int nx0 = stages.front().nx();
    initial_L_.resize(nx0, nx0);
  }

  bool factor(const Vector& sigma) override {
    const int K = static_cast<int>(work_.size());
    for (int k = K - 1; k >= 0; --k) {
      auto& f = work_[k];
      const int n = f.nx + f.nw;
      double* M = f.M.data();
      std::copy(f.H.data(), f.H.data() + n * n, M);
      // Lower triangle of D' diag(sigma) D and F' P F.
      {
        const int base = static_cast<int>(qp_.x_offset(k));
        const int* cols = qp_.col_.data();
        const double* vals = qp_.val_.data();
        const int r0 = static_cast<int>(qp_.ineq_offset_[k]);
        for (int r = r0; r < r0 + f.m; ++r) {
          const double sg = sigma[r];
          const int b = qp_.row_start_[r], e = qp_.row_start_[r + 1];
          for (int p = b; p < e; ++p) {
            const double vp = sg * vals[p];
            const int j = cols[p] - base;
            // Columns are ascending within a row, so q >= p is the lower part.
            for (int q = p; q < e; ++q) M[(cols[q] - base) + j * n] += vp * vals[q];
          }
        }
      }
      if (f.nn > 0) {
        const double* P = work_[k + 1].P.data();
        const double* F = f.F.data();
        double* PF = f.PF.data();
        const int nn = f.nn;
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < nn; ++i) {
            double s = 0.0;
            for (int r = 0; r < nn; ++r) s += P[i + r * nn] * F[r + j * nn];
            PF[i + j * nn] = s;
          }
        }
        for (int j = 0; j < n; ++j) {
          for (int i = j; i < n; ++i) {
            double s = 0.0;
            for (int r = 0; r < nn; ++r) s += F[r + i * nn] * PF[r + j * nn];
            M[i + j * n] += s;
          }
        }
      }
      for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) M[j + i * n] = M[i + j * n];
      }

      const int nx = f.nx, nw = f.nw;
      double* P = f.P.data();
      for (int j = 0; j < nx; ++j) {
        for (int i = 0; i < nx; ++i) P[i + j * nx] = M[i + j * n];
      }
      if (nw > 0) {
        double* Mww = f.Mww.data();
        for (int j = 0; j < nw; ++j) {
          for (int i = 0; i < nw; ++i) Mww[i + j * nw] = M[(nx + i) + (nx + j) * n];
        }
        if (!kernels::robust_cholesky(Mww, f.L.data(), nw)) {
          return false;
        }
        // K = -Mww^{-1} Mwx, P += Mxw K.
        double* Kp = f.K.data();
        for (int j = 0; j < nx; ++j) {
          for (int i = 0; i < nw; ++i) Kp[i + j * nw] = -M[(nx + i) + j * n];
        }
        kernels::cholesky_solve(f.L.data(), nw, Kp, nx);
        for (int j = 0; j < nx; ++j) {
          for (int i = j; i < nx; ++i) {
            double s = 0.0;
            for (int r = 0; r < nw; ++r) s += M[(nx + r) + i * n] * Kp[r + j * nw];
            P[i + j * nx] += s;
          }
        }
      }
      for (int j = 0; j < nx; ++j) {
        for (int i = j + 1; i < nx; ++i) P[j + i * nx] = P[i + j * nx];
      }
    }
    const int nx0 = work_.front().nx;
    if (nx0 > 0) {
      return kernels::robust_cholesky(work_.front().P.data(), initial_L_.data(), nx0);
    }
    return true;
  }

  void solve(const Vector& rd, const Vector& rp, Vector& dz,
             Vector& dy) const override {
    const int K = static_cast<int>(work_.size());
    // Backward pass on the linear terms of min 1/2 dz'M dz - rd'dz
    // subject to dx_{k+1} = A dx_k + B dw_k + rp_k.
    for (int k = K - 1; k >= 0; --k) {
      auto& f = work_[k];
      const int nx = f.nx, nw = f.nw, n = nx + nw, nn = f.nn;
      double* g = f.g.data();
      const double* r = rd.data() + qp_.x_offset(k);
      for (int i = 0; i < n; ++i) g[i] = -r[i];
      if (nn > 0) {
        const auto& next = work_[k + 1];
        const double* b = rp.data() + qp_.eq_offset_[k];
        const double* P = next.P.data();
        double* t = f.t.data();
        for (int i = 0; i < nn; ++i) {
          double s = next.g[i];
          for (int c = 0; c < nn; ++c) s += P[i + c * nn] * b[c];
          t[i] = s;
        }
        const double* F = f.F.data();
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int i = 0; i < nn; ++i) s += F[i + j * nn] * t[i];
          g[j] += s;
        }
      }
      if (nw > 0) {
        double* kff = f.kff.data();
        for (int i = 0; i < nw; ++i) kff[i] = -g[nx + i];
        kernels::cholesky_solve(f.L.data(), nw, kff, 1);
        const double* Kp = f.K.data();
        for (int j = 0; j < nx; ++j) {
          double s = 0.0;
          for (int i = 0; i < nw; ++i) s += Kp[i + j * nw] * g[nx + i];
          g[j] += s;
        }
      }
    }
    dz.resize(qp_.nvar_);
    dy.resize(qp_.neq_);
    // Stage 0 state, then roll the dynamics forward.
    const int nx0 = work_.front().nx;
    double* dx = dz.data();
    for (int i = 0; i < nx0; ++i) dx[i] = -work_.front().g[i];
    if (nx0 > 0) kernels::cholesky_solve(initial_L_.data(), nx0, dx, 1);
    for (int k = 0; k < K; ++k) {
      const auto& f = work_[k];
      const int nx = f.nx, nw = f.nw, n = nx + nw, nn = f.nn;
      double* z = dz.data() + qp_.x_offset(k);  // (dx_k, dw_k)
      const double* Kp = f.K.data();
      for (int i = 0; i < nw; ++i) {
        double s = f.kff[i];
        for (int j = 0; j < nx; ++j) s += Kp[i + j * nw] * z[j];
        z[nx + i] = s;
      }
      if (nn > 0) {
        const auto& next = work_[k + 1];
        const double* b = rp.data() + qp_.eq_offset_[k];
        const double* F = f.F.data();
        double* xn = dz.data() + qp_.x_offset(k + 1);
        for (int i = 0; i < nn; ++i) {
          double s = b[i];
          for (int j = 0; j < n; ++j) s += F[i + j * nn] * z[j];
          xn[i] = s;
        }
        const double* P = next.P.data();
        double* y = dy.data() + qp_.eq_offset_[k];
        for (int i = 0; i < nn; ++i) {
          double s = -next.g[i];
          for (int c = 0; c < nn; ++c) s -= P[i + c * nn] * xn[c];
          y[i] = s;
        }
      }
    }
  }

 private:
  struct StageWork {
    int nx = 0, nw = 0, m = 0, nn = 0;
    Matrix H, F;             // stacked stage data
    Matrix M, PF, Mww, L, K, P;
    Vector g, kff, t;        // g holds (p_k, q_k) after the backward pass
  };
  const OcpQp& qp_;
  mutable std::vector<StageWork> work_;
  Matrix initial_L_;
};

std::unique_ptr<KktSolver> OcpQp::make_kkt_solver() const {
  return std::make_unique<RiccatiKktSolver>(*this);
}

bool OcpQp::reduced_hessian_psd(double tol) const {
  const int K = static_cast<int>(stages_.size());
  Matrix P_next;
  for (int k = K - 1; k >= 0; --k) {
    const auto& s = stages_[k];
    Matrix Qxx = s.Hxx;
    Matrix Qwx = s.Hxw.transpose();
    Matrix Qww = s.Hww;
    if (k + 1 < K) {
      Qxx += s.A.transpose() * P_next * s.A;
      Qwx += s.B.transpose() * P_next * s.A;
      Qww += s.B.transpose() * P_next * s.B;
    }
    if (s.nw() > 0) {
      Matrix pinv_Qwx;
      if (!psd_schur_step(Qww, Qwx, tol, pinv_Qwx)) {
        return false;
      }
      P_next = Qxx - Qwx.transpose() * pinv_Qwx;
    } else {
      P_next = Qxx;
    }
    P_next = 0.5 * (P_next + P_next.transpose());
  }
  if (stages_.front().nx() > 0) {
    const double scale = 1.0 + P_next.cwiseAbs().maxCoeff();
    return numerics::min_eigenvalue_symmetric(P_next) >= -tol * scale;
  }
  return true;
}

std::unique_ptr<QpProblem> OcpQp::elastic(double regularization) const {
  std::vector<QpStage> out;
  out.reserve(stages_.size());
  for (const auto& s : stages_) {
    const int nx = s.nx();
    const int m = s.rows();
    const int nw = s.nw() + (m > 0 ? 1 : 0);
    QpStage t = QpStage::empty(nx, nw);
    t.Hxx.diagonal().setConstant(regularization);
    t.Hww.diagonal().setConstant(regularization);
    if (m > 0) {
      t.elastic_index = nw - 1;
      t.hw(nw - 1) = 1.0;
      t.Cx = Matrix::Zero(m + 1, nx);
      t.Cx.topRows(m) = s.Cx;
      t.Cw = Matrix::Zero(m + 1, nw);
      t.Cw.topLeftCorner(m, s.nw()) = s.Cw;
      t.Cw.col(nw - 1).setConstant(-1.0);
      t.d = Vector::Zero(m + 1);
      t.d.head(m) = s.d;
    }
    t.A = s.A;
    t.B = Matrix::Zero(s.B.rows(), nw);
    t.B.leftCols(s.nw()) = s.B;
    t.c = s.c;
    out.push_back(std::move(t));
  }
  return std::make_unique<OcpQp>(std::move(out), 0.0);
}

double OcpQp::elastic_violation(const Vector& z) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    if (stages_[k].elastic_index >= 0) {
      sum += z(w_offset(static_cast<int>(k)) + stages_[k].elastic_index);
    }
  }
  return sum;
}

DenseQp OcpQp::to_dense() const {
  DenseQp out;
  out.H = Matrix::Zero(nvar_, nvar_);
  out.E = Matrix::Zero(neq_, nvar_);
  out.C = Matrix::Zero(nineq_, nvar_);
  out.h_ = h_;
  out.e_ = e_;
  out.d_ = d_;
  out.constant_ = constant_;
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    const auto& s = stages_[k];
    const int ki = static_cast<int>(k);
    const auto xo = x_offset(ki);
    const auto wo = w_offset(ki);
    out.H.block(xo, xo, s.nx(), s.nx()) = s.Hxx;
    out.H.block(xo, wo, s.nx(), s.nw()) = s.Hxw;
    out.H.block(wo, xo, s.nw(), s.nx()) = s.Hxw.transpose();
    out.H.block(wo, wo, s.nw(), s.nw()) = s.Hww;
    out.C.block(ineq_offset_[k], xo, s.rows(), s.nx()) = s.Cx;
    out.C.block(ineq_offset_[k], wo, s.rows(), s.nw()) = s.Cw;
    if (k + 1 < stages_.size()) {
      const int nn = stages_[k + 1].nx();
      out.E.block(eq_offset_[k], x_offset(ki + 1), nn, nn) =
          Matrix::Identity(nn, nn);
      out.E.block(eq_offset_[k], xo, nn, s.nx()) = -s.A;
      out.E.block(eq_offset_[k], wo, nn, s.nw()) = -s.B;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interior-point iteration

namespace {

constexpr double kStepFraction = 0.99;
constexpr double kInfeasMu = 1e-10;
constexpr double kInfeasResidual = 1e-6;
constexpr double kDivergence = 1e12;
constexpr double kElasticRegularization = 1e-6;
constexpr double kElasticThreshold = 1e-6;

double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) {
      alpha = std::min(alpha, -v[i] / dv[i]);
    }
  }
  return alpha;
}

struct Residuals {
  Vector rd, rp, ri;
  double mu = 0.0;
  double dual = 0.0, eq = 0.0, ineq = 0.0;
  double kkt() const { return std::max({dual, eq, ineq, mu}); }
};

enum class Outcome { Converged, Suspect, Limit, FactorFailed };

struct IpmState {
  Vector z, y, lambda, s;
  int iterations = 0;
};

class InteriorPoint {
 public:
  InteriorPoint(const QpProblem& p, const IpmSettings& settings)
      : p_(p),
        settings_(settings),
        kkt_(p.make_kkt_solver()),
        dual_scale_(1.0 + inf_norm(p.h())),
        eq_scale_(1.0 + inf_norm(p.e())),
        ineq_scale_(1.0 + inf_norm(p.d())) {}

  // Mehrotra's starting point: the least-squares solution of the KKT system
  // with unit scaling, then slacks and multipliers shifted into the
  // positive orthant. Falls back to a plain start if the factorization fails.
  void initialize(IpmState& st) {
    const auto n = p_.num_vars();
    const auto m = p_.num_ineq();
    st.z = Vector::Zero(n);
    st.y = Vector::Zero(p_.num_eq());
    st.s = p_.d().cwiseMax(1.0);
    st.lambda = Vector::Ones(m);
    if (m == 0 || !kkt_->factor(Vector::Ones(m))) {
      return;
    }
    p_.apply_Ct(p_.d(), rhs_d_);
    rhs_d_ -= p_.h();
    kkt_->solve(rhs_d_, p_.e(), dz_, dy_);
    if (!dz_.allFinite() || !dy_.allFinite()) {
      return;
    }
    p_.apply_C(dz_, tmp_);
    Vector s = p_.d() - tmp_;
    Vector lambda = -s;
    double ds = std::max(-1.5 * s.minCoeff(), 0.0);
    double dl = std::max(-1.5 * lambda.minCoeff(), 0.0);
    s.array() += ds;
    lambda.array() += dl;
    const double gap = s.dot(lambda);
    ds = 0.5 * gap / lambda.sum();
    dl = 0.5 * gap / s.sum();
    s.array() += ds;
    lambda.array() += dl;
    if (!(s.minCoeff() > 0.0) || !(lambda.minCoeff() > 0.0) || !s.allFinite() ||
        !lambda.allFinite()) {
      return;
    }
    st.z = dz_;
    st.y = dy_;
    st.s = std::move(s);
    st.lambda = std::move(lambda);
  }

  void residuals(const IpmState& st, Residuals& r) {
    const auto m = p_.num_ineq();
    p_.apply_H(st.z, r.rd);
    r.rd += p_.h();
    p_.apply_Et(st.y, tmp_);
    r.rd += tmp_;
    p_.apply_Ct(st.lambda, tmp_);
    r.rd += tmp_;
    p_.apply_E(st.z, r.rp);
    r.rp -= p_.e();
    p_.apply_C(st.z, r.ri);
    r.ri += st.s - p_.d();
    r.mu = m > 0 ? st.s.dot(st.lambda) / static_cast<double>(m) : 0.0;
    r.dual = inf_norm(r.rd) / dual_scale_;
    r.eq = inf_norm(r.rp) / eq_scale_;
    r.ineq = inf_norm(r.ri) / ineq_scale_;
  }

  // Runs until convergence, the iteration limit or (when `watch` is set)
  // a suspicion of infeasibility.
  Outcome run(IpmState& st, bool watch, Residuals& last) {
    const auto m = p_.num_ineq();
    int stalled = 0;
    double best_primal = kInf;
    int since_primal_progress = 0;
    while (true) {
      residuals(st, last);
      if (last.kkt() <= settings_.tol) {
        return Outcome::Converged;
      }
      if (st.iterations >= settings_.max_iter) {
        return Outcome::Limit;
      }
      const double primal = std::max(last.eq, last.ineq);
      if (watch) {
        if (last.mu < kInfeasMu && primal > kInfeasResidual) {
          return Outcome::Suspect;
        }
        if (inf_norm(st.lambda) > kDivergence || inf_norm(st.z) > kDivergence) {
          return Outcome::Suspect;
        }
        if (stalled >= 5) {
          return Outcome::Suspect;
        }
        if (primal < 0.5 * best_primal) {
          best_primal = primal;
          since_primal_progress = 0;
        } else if (primal > kInfeasResidual && ++since_primal_progress >= 15) {
          return Outcome::Suspect;
        }
      }

      sigma_ = st.lambda.cwiseQuotient(st.s);
      if (!kkt_->factor(sigma_)) {
        return Outcome::FactorFailed;
      }

      // Predictor.
      rc_ = st.s.cwiseProduct(st.lambda);
      direction(st, last);
      double alpha_p = max_step(st.s, ds_);
      double alpha_d = max_step(st.lambda, dl_);
      if (m > 0) {
        const double mu_aff = (st.s + alpha_p * ds_).dot(st.lambda + alpha_d * dl_) /
                              static_cast<double>(m);
        const double ratio = last.mu > 0.0 ? mu_aff / last.mu : 0.0;
        const double sigma_c = std::clamp(ratio * ratio * ratio, 0.0, 1.0);
        // Corrector.
        rc_ += ds_.cwiseProduct(dl_);
        rc_.array() -= sigma_c * last.mu;
        direction(st, last);
        alpha_p = max_step(st.s, ds_);
        alpha_d = max_step(st.lambda, dl_);
      }
      const double alpha =
          m > 0 ? std::min(1.0, kStepFraction * std::min(alpha_p, alpha_d)) : 1.0;
      stalled = alpha < 1e-10 ? stalled + 1 : 0;
      st.z += alpha * dz_;
      st.y += alpha * dy_;
      st.s += alpha * ds_;
      st.lambda += alpha * dl_;
      ++st.iterations;
      if (!st.z.allFinite() || !st.lambda.allFinite() || !st.s.allFinite()) {
        return Outcome::FactorFailed;
      }
    }
  }

 private:
  // Fills dz_, dy_, ds_, dl_ for the complementarity target rc_.
  void direction(const IpmState& st, const Residuals& r) {
    rhs_d_ = -r.rd;
    if (p_.num_ineq() > 0) {
      t_ = (rc_ - st.lambda.cwiseProduct(r.ri)).cwiseQuotient(st.s);
      p_.apply_Ct(t_, tmp_);
      rhs_d_ += tmp_;
    }
    rhs_p_ = -r.rp;
    kkt_->solve(rhs_d_, rhs_p_, dz_, dy_);
    p_.apply_C(dz_, ds_);
    ds_ = -r.ri - ds_;
    dl_ = (-rc_ - st.lambda.cwiseProduct(ds_)).cwiseQuotient(st.s);
  }

  const QpProblem& p_;
  IpmSettings settings_;
  std::unique_ptr<KktSolver> kkt_;
  double dual_scale_, eq_scale_, ineq_scale_;
  Vector sigma_, rc_, dz_, dy_, ds_, dl_, rhs_d_, rhs_p_, t_, tmp_;
};

QpSolution pack(const QpProblem& p, const IpmState& st, const Residuals& r,
                QpStatus status) {
  QpSolution out;
  out.status = status;
  out.z = st.z;
  out.y = st.y;
  out.lambda = st.lambda;
  out.s = st.s;
  out.iterations = st.iterations;
  out.kkt_residual = r.kkt();
  out.objective = status == QpStatus::Optimal ? p.objective(st.z) : kInf;
  return out;
}

// Phase-1: minimizes the total constraint violation. Returns true when the
// problem is proven infeasible.
bool proven_infeasible(const QpProblem& p, int& iterations) {
  const auto phase1 = p.elastic(kElasticRegularization);
  IpmSettings settings;
  settings.tol = 1e-9;
  settings.max_iter = 200;
  settings.check_convexity = false;
  settings.verify_infeasibility = false;
  const QpSolution sol = solve(*phase1, settings);
  iterations += sol.iterations;
  return sol.status == QpStatus::Optimal &&
         phase1->elastic_violation(sol.z) > kElasticThreshold;
}

}  // namespace

QpSolution solve(const QpProblem& problem, const IpmSettings& settings) {
  if (settings.check_convexity && !problem.reduced_hessian_psd(1e-9)) {
    QpSolution out;
    out.status = QpStatus::NonconvexRejected;
    return out;
  }
  InteriorPoint ipm(problem, settings);
  IpmState st;
  ipm.initialize(st);
  Residuals last;
  Outcome outcome = ipm.run(st, settings.verify_infeasibility, last);
  if (outcome == Outcome::Converged) {
    return pack(problem, st, last, QpStatus::Optimal);
  }
  if (!settings.verify_infeasibility) {
    return pack(problem, st, last, QpStatus::IterationLimit);
  }
  int extra = 0;
  if (problem.num_ineq() > 0 && proven_infeasible(problem, extra)) {
    QpSolution out = pack(problem, st, last, QpStatus::Infeasible);
    out.iterations += extra;
    return out;
  }
  if (outcome == Outcome::Suspect) {
    // Feasible after all: keep iterating without the infeasibility watch.
    outcome = ipm.run(st, false, last);
    if (outcome == Outcome::Converged) {
      QpSolution out = pack(problem, st, last, QpStatus::Optimal);
      out.iterations += extra;
      return out;
    }
  }
  QpSolution out = pack(problem, st, last, QpStatus::IterationLimit);
  out.iterations += extra;
  return out;
}

}  // namespace tmiqp::qp
