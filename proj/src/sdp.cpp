// SPDX-License-Identifier: Apache-2.0
#include "irsdfrc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irsdfrc::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  std::vector<RMat> x;
  RVec x_lp;
};

// <A, Y> with A given by a BlockCoef and Y a (possibly nonsymmetric) matrix.
double inner(const BlockCoef& a, const RMat& y) {
  if (a.dense) return (a.matrix.array() * y.array()).sum();
  double s = 0.0;
  for (const auto& e : a.entries)
    s += e.row == e.col ? e.value * y(e.row, e.col) : e.value * (y(e.row, e.col) + y(e.col, e.row));
  return s;
}

void add_scaled(const BlockCoef& a, double scale, RMat& out) {
  if (a.dense) {
    out.noalias() += scale * a.matrix;
    return;
  }
  for (const auto& e : a.entries) {
    out(e.row, e.col) += scale * e.value;
    if (e.row != e.col) out(e.col, e.row) += scale * e.value;
  }
}

// Both orientations of every sparse entry.
struct FullEntry {
  int row;
  int col;
  double value;
};

std::vector<FullEntry> expand(const BlockCoef& a) {
  std::vector<FullEntry> out;
  out.reserve(a.entries.size() * 2);
  for (const auto& e : a.entries) {
    out.push_back({e.row, e.col, e.value});
    if (e.row != e.col) out.push_back({e.col, e.row, e.value});
  }
  return out;
}

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : prob_(p), opt_(o) {
    nb_ = static_cast<int>(p.block_sizes.size());
    m_ = static_cast<int>(p.constraints.size());
    by_block_.assign(nb_, {});
    for (int i = 0; i < m_; ++i)
      for (const auto& bc : p.constraints[i].blocks) {
        if (bc.block < 0 || bc.block >= nb_) throw std::invalid_argument("sdp: bad block index");
        by_block_[bc.block].push_back({i, &bc});
      }
    expanded_.resize(m_);
    for (int i = 0; i < m_; ++i)
      for (const auto& bc : p.constraints[i].blocks)
        if (!bc.dense) expanded_[i].push_back(expand(bc));
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_[i] = p.constraints[i].rhs;
    nu_ = p.lp_size;
    for (int n : p.block_sizes) nu_ += n;
  }

  Solution run();

 private:
  struct Ref {
    int index;
    const BlockCoef* coef;
  };

  RVec apply(const std::vector<RMat>& y, const RVec& y_lp) const {
    RVec out = RVec::Zero(m_);
    for (int k = 0; k < nb_; ++k)
      for (const auto& r : by_block_[k]) out[r.index] += inner(*r.coef, y[k]);
    for (int i = 0; i < m_; ++i)
      for (const auto& [idx, v] : prob_.constraints[i].lp) out[i] += v * y_lp[idx];
    return out;
  }

  Point adjoint(const RVec& y) const {
    Point out;
    out.x.resize(nb_);
    for (int k = 0; k < nb_; ++k) {
      out.x[k] = RMat::Zero(prob_.block_sizes[k], prob_.block_sizes[k]);
      for (const auto& r : by_block_[k]) add_scaled(*r.coef, y[r.index], out.x[k]);
    }
    out.x_lp = RVec::Zero(prob_.lp_size);
    for (int i = 0; i < m_; ++i)
      for (const auto& [idx, v] : prob_.constraints[i].lp) out.x_lp[idx] += v * y[i];
    return out;
  }

  RMat schur(const std::vector<RMat>& x, const RVec& x_lp, const std::vector<RMat>& zinv,
             const RVec& z_lp) const;

  static double max_step(const RMat& x, const RMat& dx) {
    Eigen::LLT<RMat> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    const RMat l_inv_dx = llt.matrixL().solve(dx);
    RMat t = llt.matrixL().solve(l_inv_dx.transpose());
    t = 0.5 * (t + t.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<RMat>(t, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : kInf;
  }

  static double max_step_lp(const RVec& x, const RVec& dx) {
    double a = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
    return a;
  }

  const Problem& prob_;
  const Options& opt_;
  int nb_ = 0;
  int m_ = 0;
  int nu_ = 0;
  std::vector<std::vector<Ref>> by_block_;
  // expanded_[i] lists the sparse block coefficients of constraint i in the
  // same order they appear in constraints[i].blocks (dense ones skipped).
  std::vector<std::vector<std::vector<FullEntry>>> expanded_;
  RVec b_;
};

RMat Solver::schur(const std::vector<RMat>& x, const RVec& x_lp, const std::vector<RMat>& zinv,
                   const RVec& z_lp) const {
  RMat mat = RMat::Zero(m_, m_);
  for (int k = 0; k < nb_; ++k) {
    const auto& refs = by_block_[k];
    // Sparse coefficient lookup for this block.
    std::vector<const std::vector<FullEntry>*> full(refs.size(), nullptr);
    for (size_t a = 0; a < refs.size(); ++a) {
      if (refs[a].coef->dense) continue;
      const auto& cons = prob_.constraints[refs[a].index];
      size_t slot = 0;
      for (const auto& bc : cons.blocks) {
        if (bc.dense) continue;
        if (&bc == refs[a].coef) break;
        ++slot;
      }
      full[a] = &expanded_[refs[a].index][slot];
    }
    for (size_t a = 0; a < refs.size(); ++a) {
      const int i = refs[a].index;
      if (refs[a].coef->dense) {
        // tr(A_i X A_j Z^-1) = <A_j, X A_i Z^-1>.
        const RMat g = x[k] * refs[a].coef->matrix * zinv[k];
        for (size_t b = 0; b < refs.size(); ++b) {
          const int j = refs[b].index;
          const double v = inner(*refs[b].coef, g);
          mat(i, j) += v;
          if (!refs[b].coef->dense) mat(j, i) += v;
        }
        continue;
      }
      for (size_t b = a; b < refs.size(); ++b) {
        if (refs[b].coef->dense) continue;
        const int j = refs[b].index;
        double v = 0.0;
        for (const auto& ea : *full[a])
          for (const auto& eb : *full[b])
            v += ea.value * x[k](ea.col, eb.row) * eb.value * zinv[k](eb.col, ea.row);
        mat(i, j) += v;
        if (b != a) mat(j, i) += v;
      }
    }
  }
  if (prob_.lp_size > 0) {
    const RVec d = x_lp.cwiseQuotient(z_lp);
    for (int i = 0; i < m_; ++i)
      for (const auto& [li, vi] : prob_.constraints[i].lp)
        for (int j = 0; j < m_; ++j)
          for (const auto& [lj, vj] : prob_.constraints[j].lp)
            if (li == lj) mat(i, j) += vi * vj * d[li];
  }
  return 0.5 * (mat + mat.transpose());
}

Solution Solver::run() {
  Solution sol;
  const int p = prob_.lp_size;

  // Starting point scaled to the data.
  double b_norm = b_.norm();
  double c_norm = 0.0;
  for (const auto& c : prob_.objective) c_norm += c.squaredNorm();
  c_norm = std::sqrt(c_norm + prob_.objective_lp.squaredNorm());

  std::vector<RMat> x(nb_), z(nb_);
  for (int k = 0; k < nb_; ++k) {
    const int n = prob_.block_sizes[k];
    const double sn = std::sqrt(static_cast<double>(n));
    double xi = std::max(10.0, sn), eta = std::max(10.0, sn);
    for (const auto& r : by_block_[k]) {
      const double an = r.coef->dense ? r.coef->matrix.norm() : [&] {
        double s = 0.0;
        for (const auto& e : r.coef->entries) s += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
        return std::sqrt(s);
      }();
      xi = std::max(xi, sn * (1.0 + std::abs(b_[r.index])) / (1.0 + an));
      eta = std::max(eta, an);
    }
    eta = std::max(eta, prob_.objective[k].norm());
    x[k] = xi * RMat::Identity(n, n);
    z[k] = eta * RMat::Identity(n, n);
  }
  const double b_max = m_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0;
  const double c_max = p > 0 ? prob_.objective_lp.cwiseAbs().maxCoeff() : 0.0;
  RVec x_lp = RVec::Constant(p, std::max(10.0, 1.0 + b_max));
  RVec z_lp = RVec::Constant(p, std::max(10.0, 1.0 + c_max));
  RVec y = RVec::Zero(m_);

  auto objective_value = [&](const std::vector<RMat>& xx, const RVec& xl) {
    double v = 0.0;
    for (int k = 0; k < nb_; ++k) v += (prob_.objective[k].array() * xx[k].array()).sum();
    if (p > 0) v += prob_.objective_lp.dot(xl);
    return v;
  };

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    sol.iterations = iter;
    // Residuals.
    const RVec rp = b_ - apply(x, x_lp);
    Point aty = adjoint(y);
    std::vector<RMat> rd(nb_);
    double rd_norm2 = 0.0;
    for (int k = 0; k < nb_; ++k) {
      rd[k] = prob_.objective[k] - z[k] - aty.x[k];
      rd_norm2 += rd[k].squaredNorm();
    }
    RVec rd_lp = prob_.objective_lp - z_lp - aty.x_lp;
    rd_norm2 += rd_lp.squaredNorm();

    double xz = 0.0;
    for (int k = 0; k < nb_; ++k) xz += (x[k].array() * z[k].array()).sum();
    if (p > 0) xz += x_lp.dot(z_lp);
    const double mu = xz / nu_;

    const double pobj = objective_value(x, x_lp);
    const double dobj = b_.dot(y);
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = std::sqrt(rd_norm2) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double comp = xz / (1.0 + std::abs(pobj) + std::abs(dobj));

    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.primal_residual = pinf;
    sol.dual_residual = dinf;

    const double tol = opt_.tolerance;
    if (pinf < tol && dinf < tol && std::max(gap, comp) < tol) {
      sol.status = Status::optimal;
      break;
    }
    // Dual ray: b^T y grows without bound while Z stays feasible means the
    // primal constraints cannot be met.
    if (dinf < 1e-6 && dobj > 1e10 * (1.0 + std::abs(pobj)) ) {
      sol.status = Status::infeasible;
      break;
    }
    if (iter == opt_.max_iterations) {
      sol.status = (pinf < 1e-6 && dinf < 1e-6 && std::max(gap, comp) < 1e-6)
                       ? Status::optimal
                       : Status::numerical_failure;
      break;
    }

    std::vector<RMat> zinv(nb_);
    bool ok = true;
    for (int k = 0; k < nb_; ++k) {
      Eigen::LLT<RMat> llt(z[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[k] = llt.solve(RMat::Identity(z[k].rows(), z[k].cols()));
      zinv[k] = 0.5 * (zinv[k] + zinv[k].transpose());
    }
    if (!ok) {
      sol.status = Status::numerical_failure;
      break;
    }

    RMat mat = schur(x, x_lp, zinv, z_lp);
    Eigen::LLT<RMat> mchol(mat);
    Eigen::LDLT<RMat> mldlt;
    const bool use_llt = mchol.info() == Eigen::Success;
    if (!use_llt) {
      mat.diagonal().array() += 1e-14 * std::max(1.0, mat.diagonal().cwiseAbs().maxCoeff());
      mldlt.compute(mat);
      if (mldlt.info() != Eigen::Success) {
        sol.status = Status::numerical_failure;
        break;
      }
    }
    auto solve_m = [&](const RVec& r) -> RVec { return use_llt ? RVec(mchol.solve(r)) : RVec(mldlt.solve(r)); };

    // X Rd Z^-1, shared by both steps.
    std::vector<RMat> x_rd_zinv(nb_);
    for (int k = 0; k < nb_; ++k) x_rd_zinv[k] = x[k] * rd[k] * zinv[k];
    const RVec x_rd_zinv_lp = p > 0 ? RVec(x_lp.cwiseProduct(rd_lp).cwiseQuotient(z_lp)) : RVec();
    const RVec a_xrdz = apply(x_rd_zinv, x_rd_zinv_lp);

    struct Direction {
      std::vector<RMat> dx, dz;
      RVec dx_lp, dz_lp, dy;
    };

    // rc_zinv = (sigma mu I - X Z - corr) Z^-1 = sigma mu Z^-1 - X - corr Z^-1.
    auto direction = [&](double sigma_mu, const Direction* corr) {
      std::vector<RMat> rcz(nb_);
      for (int k = 0; k < nb_; ++k) {
        rcz[k] = sigma_mu * zinv[k] - x[k];
        if (corr) rcz[k] -= corr->dx[k] * corr->dz[k] * zinv[k];
      }
      RVec rcz_lp;
      if (p > 0) {
        rcz_lp = sigma_mu * z_lp.cwiseInverse() - x_lp;
        if (corr) rcz_lp -= corr->dx_lp.cwiseProduct(corr->dz_lp).cwiseQuotient(z_lp);
      }
      const RVec rhs = rp - apply(rcz, rcz_lp) + a_xrdz;
      Direction d;
      d.dy = solve_m(rhs);
      Point at = adjoint(d.dy);
      d.dz.resize(nb_);
      d.dx.resize(nb_);
      for (int k = 0; k < nb_; ++k) {
        d.dz[k] = rd[k] - at.x[k];
        RMat dx = rcz[k] - x[k] * d.dz[k] * zinv[k];
        d.dx[k] = 0.5 * (dx + dx.transpose());
      }
      if (p > 0) {
        d.dz_lp = rd_lp - at.x_lp;
        d.dx_lp = rcz_lp - x_lp.cwiseProduct(d.dz_lp).cwiseQuotient(z_lp);
      }
      return d;
    };

    auto steps = [&](const Direction& d) {
      double ap = kInf, ad = kInf;
      for (int k = 0; k < nb_; ++k) {
        ap = std::min(ap, max_step(x[k], d.dx[k]));
        ad = std::min(ad, max_step(z[k], d.dz[k]));
      }
      if (p > 0) {
        ap = std::min(ap, max_step_lp(x_lp, d.dx_lp));
        ad = std::min(ad, max_step_lp(z_lp, d.dz_lp));
      }
      return std::pair<double, double>{ap, ad};
    };

    const Direction pred = direction(0.0, nullptr);
    auto [ap_a, ad_a] = steps(pred);
    ap_a = std::min(1.0, ap_a);
    ad_a = std::min(1.0, ad_a);
    double xz_aff = 0.0;
    for (int k = 0; k < nb_; ++k)
      xz_aff += ((x[k] + ap_a * pred.dx[k]).array() * (z[k] + ad_a * pred.dz[k]).array()).sum();
    if (p > 0) xz_aff += (x_lp + ap_a * pred.dx_lp).dot(z_lp + ad_a * pred.dz_lp);
    const double mu_aff = xz_aff / nu_;
    const double expo = std::max(1.0, 3.0 * std::pow(std::min(ap_a, ad_a), 2));
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expo), 0.0, 1.0);

    const Direction corr = direction(sigma * mu, &pred);
    auto [ap, ad] = steps(corr);
    ap = std::min(1.0, opt_.step_fraction * ap);
    ad = std::min(1.0, opt_.step_fraction * ad);
    if (!(ap > 1e-14) && !(ad > 1e-14)) {
      sol.status = Status::numerical_failure;
      break;
    }

    for (int k = 0; k < nb_; ++k) {
      x[k] += ap * corr.dx[k];
      z[k] += ad * corr.dz[k];
      x[k] = 0.5 * (x[k] + x[k].transpose());
      z[k] = 0.5 * (z[k] + z[k].transpose());
    }
    if (p > 0) {
      x_lp += ap * corr.dx_lp;
      z_lp += ad * corr.dz_lp;
    }
    y += ad * corr.dy;
  }

  sol.x = std::move(x);
  sol.x_lp = std::move(x_lp);
  sol.y = std::move(y);
  return sol;
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  if (problem.objective.size() != problem.block_sizes.size())
    throw std::invalid_argument("sdp: one objective matrix per block is required");
  if (problem.objective_lp.size() != problem.lp_size)
    throw std::invalid_argument("sdp: objective_lp size mismatch");
  Solver s(problem, options);
  return s.run();
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

RMat real_embedding(const CMat& h) {
  const Eigen::Index n = h.rows();
  RMat out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

CMat complex_from_embedding(const RMat& y) {
  const Eigen::Index n = y.rows() / 2;
  CMat out(n, n);
  out.real() = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  out.imag() = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  return out;
}

}  // namespace irsdfrc::sdp
