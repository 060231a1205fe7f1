#include "ratnet/classic.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ratnet/errors.hpp"
#include "ratnet/zolotarev.hpp"

namespace ratnet::classic {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

// Ascending Chebyshev-extrema grid on [-1,1] with n points.
std::vector<double> cheb_grid(int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] =
        std::cos(std::numbers::pi * (n - 1 - i) / (n - 1));
  }
  return x;
}

double cheb_eval(const std::vector<double>& c, double x) {
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + c[i];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

// Pick an alternating-sign subsequence of local extrema of e over the grid,
// trimmed to npts keeping the window with the largest smallest |e|.
std::vector<int> alternating_reference(const std::vector<double>& e, int npts) {
  const int n = static_cast<int>(e.size());
  std::vector<int> idx;
  idx.push_back(0);
  for (int i = 1; i + 1 < n; ++i) {
    if ((e[i] - e[i - 1]) * (e[i + 1] - e[i]) <= 0.0) idx.push_back(i);
  }
  idx.push_back(n - 1);
  std::vector<int> pts;
  for (int i : idx) {
    if (pts.empty()) {
      pts.push_back(i);
    } else if ((e[i] >= 0.0) == (e[pts.back()] >= 0.0)) {
      if (std::fabs(e[i]) > std::fabs(e[pts.back()])) pts.back() = i;
    } else {
      pts.push_back(i);
    }
  }
  if (static_cast<int>(pts.size()) > npts) {
    int best_start = 0;
    double best_min = -1.0;
    for (int s = 0; s + npts <= static_cast<int>(pts.size()); ++s) {
      double mn = std::fabs(e[pts[static_cast<std::size_t>(s)]]);
      for (int j = 1; j < npts; ++j) {
        mn = std::min(mn, std::fabs(e[pts[static_cast<std::size_t>(s + j)]]));
      }
      if (mn > best_min) {
        best_min = mn;
        best_start = s;
      }
    }
    pts = std::vector<int>(pts.begin() + best_start,
                           pts.begin() + best_start + npts);
  }
  return pts;
}

// Classical single-point exchange: swap the worst grid point into the sorted
// reference without breaking sign alternation. Used when the residual has
// fewer alternating extrema than the reference needs (degenerate interpolants
// on symmetric references produce this).
void single_point_exchange(std::vector<int>& ref, const std::vector<double>& e) {
  int imax = 0;
  for (int i = 1; i < static_cast<int>(e.size()); ++i) {
    if (std::fabs(e[static_cast<std::size_t>(i)]) >
        std::fabs(e[static_cast<std::size_t>(imax)])) {
      imax = i;
    }
  }
  const bool pos = e[static_cast<std::size_t>(imax)] >= 0.0;
  auto sign_at = [&](int idx) { return e[static_cast<std::size_t>(idx)] >= 0.0; };
  const auto it = std::lower_bound(ref.begin(), ref.end(), imax);
  if (it != ref.end() && *it == imax) return;
  if (it == ref.begin()) {
    if (sign_at(ref.front()) == pos) {
      ref.front() = imax;
    } else {
      ref.pop_back();
      ref.insert(ref.begin(), imax);
    }
  } else if (it == ref.end()) {
    if (sign_at(ref.back()) == pos) {
      ref.back() = imax;
    } else {
      ref.erase(ref.begin());
      ref.push_back(imax);
    }
  } else {
    const std::size_t hi = static_cast<std::size_t>(it - ref.begin());
    if (sign_at(ref[hi - 1]) == pos) {
      ref[hi - 1] = imax;
    } else {
      ref[hi] = imax;
    }
  }
}

}  // namespace

std::function<double(double)> newman_abs(int N) {
  if (N < 4) {
    throw RangeError("Newman degree too small", "N >= 4");
  }
  if (N > 400) {
    throw RangeError("Newman product overflows doubles beyond N = 400", 400.0);
  }
  const double xi = std::exp(-1.0 / std::sqrt(static_cast<double>(N)));
  return [N, xi](double x) {
    double px = 1.0, pm = 1.0;
    double pow_xi = 1.0;
    for (int i = 0; i < N; ++i) {
      px *= (x + pow_xi);
      pm *= (-x + pow_xi);
      pow_xi *= xi;
    }
    return x * (px - pm) / (px + pm);
  };
}

std::function<double(double)> newman_relu(int N) {
  auto r_abs = newman_abs(N);
  return [r_abs](double x) { return 0.5 * (r_abs(x) + x); };
}

namespace detail {

std::vector<double> cheb_to_monomial(const std::vector<double>& c) {
  // Accumulate c_i * T_i with the T recurrence carried in monomial form.
  std::vector<double> out(c.size(), 0.0);
  std::vector<double> t_prev = {1.0};       // T_0
  std::vector<double> t_cur = {0.0, 1.0};   // T_1
  out[0] += c[0];
  if (c.size() > 1) {
    for (std::size_t i = 0; i < t_cur.size(); ++i) out[i] += c[1] * t_cur[i];
  }
  for (std::size_t k = 2; k < c.size(); ++k) {
    std::vector<double> t_next(k + 1, 0.0);
    for (std::size_t i = 0; i < t_cur.size(); ++i) t_next[i + 1] = 2.0 * t_cur[i];
    for (std::size_t i = 0; i < t_prev.size(); ++i) t_next[i] -= t_prev[i];
    for (std::size_t i = 0; i < t_next.size(); ++i) out[i] += c[k] * t_next[i];
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }
  return out;
}

RemezResult best_poly(const std::function<double(double)>& f, int degree) {
  if (degree < 1) {
    throw PreconditionError("best_poly wants degree >= 1");
  }
  const int ngrid = 10001;
  const int npts = degree + 2;
  const auto xg = cheb_grid(ngrid);
  std::vector<double> fg(xg.size());
  for (std::size_t i = 0; i < xg.size(); ++i) fg[i] = f(xg[i]);

  // Initial reference: Chebyshev extrema snapped to the working grid.
  std::vector<int> ref(static_cast<std::size_t>(npts));
  for (int j = 0; j < npts; ++j) {
    const double target = std::cos(std::numbers::pi * (npts - 1 - j) / (npts - 1));
    const auto it = std::lower_bound(xg.begin(), xg.end(), target);
    int i = static_cast<int>(it - xg.begin());
    if (i > 0 && (i == ngrid ||
                  std::fabs(xg[static_cast<std::size_t>(i - 1)] - target) <
                      std::fabs(xg[static_cast<std::size_t>(i)] - target))) {
      --i;
    }
    ref[static_cast<std::size_t>(j)] = i;
  }

  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  std::vector<double> e(xg.size(), 0.0);
  double prev_err = -1.0;
  double err = 0.0;
  for (int it = 0; it < 100; ++it) {
    // Solve p(x_j) + (-1)^j h = f(x_j) in the Chebyshev basis.
    Eigen::MatrixXd A(npts, npts);
    Eigen::VectorXd rhs(npts);
    for (int j = 0; j < npts; ++j) {
      const double x = xg[static_cast<std::size_t>(ref[static_cast<std::size_t>(j)])];
      double t0 = 1.0, t1 = x;
      A(j, 0) = t0;
      if (degree >= 1) A(j, 1) = t1;
      for (int i = 2; i <= degree; ++i) {
        const double t2 = 2.0 * x * t1 - t0;
        A(j, i) = t2;
        t0 = t1;
        t1 = t2;
      }
      A(j, degree + 1) = (j % 2 == 0) ? 1.0 : -1.0;
      rhs(j) = fg[static_cast<std::size_t>(ref[static_cast<std::size_t>(j)])];
    }
    const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
    for (int i = 0; i <= degree; ++i) c[static_cast<std::size_t>(i)] = sol(i);

    err = 0.0;
    for (std::size_t i = 0; i < xg.size(); ++i) {
      e[i] = fg[i] - cheb_eval(c, xg[i]);
      err = std::max(err, std::fabs(e[i]));
    }
    const auto pts = alternating_reference(e, npts);
    if (static_cast<int>(pts.size()) >= npts) {
      ref = pts;
      if (prev_err >= 0.0 && std::fabs(err - prev_err) < 1e-10) break;
      prev_err = err;
    } else {
      single_point_exchange(ref, e);
      prev_err = -1.0;  // reference is rebuilding; do not test stagnation yet
    }
  }

  RemezResult out;
  out.cheb = std::move(c);
  out.error = err;
  int alt = 1;
  for (std::size_t j = 1; j < ref.size(); ++j) {
    const double a = e[static_cast<std::size_t>(ref[j - 1])];
    const double b = e[static_cast<std::size_t>(ref[j])];
    if ((a >= 0.0) != (b >= 0.0)) ++alt;
  }
  out.alternations = alt;
  return out;
}

}  // namespace detail

std::vector<double> best_poly_relu(int degree) {
  const auto res = detail::best_poly(relu, degree);
  return detail::cheb_to_monomial(res.cheb);
}

namespace {

struct LawsonResult {
  Eigen::VectorXd p, q;  // Chebyshev-basis coefficients in the scaled variable
  double err = 0.0;
  double min_q = 0.0;
};

LawsonResult lawson(const std::function<double(double)>& f, int r_p, int r_q,
                    Interval I) {
  const int ngrid = 2000;
  Eigen::VectorXd t(ngrid), x(ngrid), fx(ngrid);
  for (int i = 0; i < ngrid; ++i) {
    t(i) = std::cos(std::numbers::pi * (ngrid - 1 - i) / (ngrid - 1));
    x(i) = 0.5 * (I.lo + I.hi) + 0.5 * (I.hi - I.lo) * t(i);
    fx(i) = f(x(i));
  }
  auto cheb_vander = [&](int deg) {
    Eigen::MatrixXd V(ngrid, deg + 1);
    V.col(0).setOnes();
    if (deg >= 1) V.col(1) = t;
    for (int i = 2; i <= deg; ++i) {
      V.col(i) = 2.0 * t.cwiseProduct(V.col(i - 1)) - V.col(i - 2);
    }
    return V;
  };
  const Eigen::MatrixXd VP = cheb_vander(r_p);
  const Eigen::MatrixXd VQ = cheb_vander(r_q);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(ngrid, 1.0 / ngrid);

  LawsonResult best;
  bool have_best = false;
  for (int it = 0; it < 300; ++it) {
    const Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::MatrixXd A(ngrid, r_p + r_q + 2);
    A.leftCols(r_p + 1) = sw.asDiagonal() * VP;
    A.rightCols(r_q + 1) = (-(sw.cwiseProduct(fx))).asDiagonal() * VQ;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    const Eigen::VectorXd v = svd.matrixV().col(r_p + r_q + 1);
    const Eigen::VectorXd p = v.head(r_p + 1);
    const Eigen::VectorXd q = v.tail(r_q + 1);
    const Eigen::VectorXd Q = VQ * q;
    const Eigen::VectorXd P = VP * p;
    const double min_q = Q.cwiseAbs().minCoeff();
    if (min_q <= 0.0) break;  // exact pole on the grid: no usable update
    const Eigen::VectorXd e = fx - P.cwiseQuotient(Q);
    const double emax = e.cwiseAbs().maxCoeff();
    // candidates with near-poles stay out of `best` but still reweight
    if (min_q >= 1e-14 && (!have_best || emax < best.err)) {
      best = {p, q, emax, min_q};
      have_best = true;
    }
    w = w.cwiseProduct(e.cwiseAbs());
    const double s = w.sum();
    if (s <= 0.0) break;
    w /= s;
  }
  if (!have_best) {
    throw NumericError(
        "minimax_rational: Lawson iteration found no pole-free candidate");
  }
  return best;
}

// Substitute t = alpha*x + beta into an ascending monomial polynomial in t.
std::vector<double> affine_substitute(const std::vector<double>& c, double alpha,
                                      double beta) {
  std::vector<double> out = {c.empty() ? 0.0 : c.back()};
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    std::vector<double> next(out.size() + 1, 0.0);
    for (std::size_t j = 0; j < out.size(); ++j) {
      next[j] += out[j] * beta;
      next[j + 1] += out[j] * alpha;
    }
    next[0] += c[i];
    out = std::move(next);
  }
  return out;
}

}  // namespace

RationalFunction minimax_rational(const std::function<double(double)>& f,
                                  int r_p, int r_q, Interval I) {
  if (r_p < 0 || r_q < 0 || r_p + r_q > 12) {
    throw PreconditionError("minimax_rational supports types with r_p + r_q <= 12");
  }
  if (!(I.lo < I.hi)) {
    throw PreconditionError("minimax_rational wants a nondegenerate interval");
  }
  LawsonResult lw = lawson(f, r_p, r_q, I);

  // Work in the scaled variable t in [-1,1] throughout the polish.
  const int ngrid = 200001;
  std::vector<double> tg(ngrid), fg(ngrid);
  for (int i = 0; i < ngrid; ++i) {
    tg[static_cast<std::size_t>(i)] =
        std::cos(std::numbers::pi * (ngrid - 1 - i) / (ngrid - 1));
    fg[static_cast<std::size_t>(i)] =
        f(0.5 * (I.lo + I.hi) + 0.5 * (I.hi - I.lo) * tg[static_cast<std::size_t>(i)]);
  }
  double fscale = 0.0;
  for (double v : fg) fscale = std::max(fscale, std::fabs(v));
  if (fscale == 0.0) fscale = 1.0;

  std::vector<double> pc(lw.p.data(), lw.p.data() + lw.p.size());
  std::vector<double> qc(lw.q.data(), lw.q.data() + lw.q.size());
  auto rat_t = [&](double tt) {
    return cheb_eval(pc, tt) / cheb_eval(qc, tt);
  };

  const int npts = r_p + r_q + 2;
  if (lw.err > 1e-12 * fscale) {
    std::vector<double> e(static_cast<std::size_t>(ngrid));
    for (int round = 0; round < 60; ++round) {
      for (int i = 0; i < ngrid; ++i) {
        e[static_cast<std::size_t>(i)] =
            fg[static_cast<std::size_t>(i)] - rat_t(tg[static_cast<std::size_t>(i)]);
      }
      const auto pts = alternating_reference(e, npts);
      if (static_cast<int>(pts.size()) < npts) break;
      double h = 0.0;
      for (int j = 0; j < npts; ++j) {
        h += std::fabs(e[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])]);
      }
      h /= npts;
      if (e[static_cast<std::size_t>(pts[0])] < 0.0) h = -h;

      Eigen::VectorXd pn = lw.p, qn = lw.q;
      for (int hit = 0; hit < 40; ++hit) {
        Eigen::MatrixXd A(npts, npts);
        for (int j = 0; j < npts; ++j) {
          const double tt = tg[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])];
          const double fj = fg[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])];
          const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
          double t0 = 1.0, t1 = tt;
          for (int i = 0; i <= std::max(r_p, r_q); ++i) {
            double ti;
            if (i == 0) {
              ti = t0;
            } else if (i == 1) {
              ti = t1;
            } else {
              ti = 2.0 * tt * t1 - t0;
              t0 = t1;
              t1 = ti;
            }
            if (i <= r_p) A(j, i) = ti;
            if (i <= r_q) A(j, r_p + 1 + i) = -(fj - sgn * h) * ti;
          }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        const Eigen::VectorXd v = svd.matrixV().col(npts - 1);
        pn = v.head(r_p + 1);
        qn = v.tail(r_q + 1);
        std::vector<double> pv(pn.data(), pn.data() + pn.size());
        std::vector<double> qv(qn.data(), qn.data() + qn.size());
        double hnew = 0.0;
        for (int j = 0; j < npts; ++j) {
          const double tt = tg[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])];
          const double fj = fg[static_cast<std::size_t>(pts[static_cast<std::size_t>(j)])];
          const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
          hnew += sgn * (fj - cheb_eval(pv, tt) / cheb_eval(qv, tt));
        }
        hnew /= npts;
        const bool done = std::fabs(hnew - h) < 1e-16;
        h = hnew;
        if (done) break;
      }
      pc.assign(pn.data(), pn.data() + pn.size());
      qc.assign(qn.data(), qn.data() + qn.size());
    }
  }

  // Chebyshev (in t) -> monomial in t -> monomial in x.
  const double alpha = 2.0 / (I.hi - I.lo);
  const double beta = -(I.lo + I.hi) / (I.hi - I.lo);
  std::vector<double> pm = affine_substitute(detail::cheb_to_monomial(pc), alpha, beta);
  std::vector<double> qm = affine_substitute(detail::cheb_to_monomial(qc), alpha, beta);

  double qmax = 0.0;
  for (double v : qm) qmax = std::max(qmax, std::fabs(v));
  const double q0 = qm[0];
  const double scale = (std::fabs(q0) > 1e-12 * qmax) ? q0
                       : *std::max_element(qm.begin(), qm.end(),
                                           [](double a, double b) {
                                             return std::fabs(a) < std::fabs(b);
                                           });
  for (double& v : pm) v /= scale;
  for (double& v : qm) v /= scale;

  RationalFunction r(pm, qm);
  if (!pole_check(r, I)) {
    std::ostringstream msg;
    msg << "minimax_rational: denominator approaches zero on the interval "
        << "(Lawson best error " << lw.err << ", min |Q| on grid " << lw.min_q
        << ")";
    throw NumericError(msg.str());
  }
  return r;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::zolotarev: return "zolotarev";
    case Family::newman: return "newman";
    case Family::best_poly: return "best_poly";
  }
  return "unknown";
}

std::vector<ConvergenceRow> convergence_table(
    Family family, const std::vector<std::size_t>& budgets) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(budgets.size());
  const Interval I{-1.0, 1.0};
  const std::size_t ngrid = 200001;
  for (std::size_t budget : budgets) {
    double err = 0.0;
    switch (family) {
      case Family::zolotarev: {
        if (budget % 7 != 0 || budget / 7 < 1 || budget / 7 > 4) {
          throw RangeError("zolotarev budgets are 7p with 1 <= p <= 4 stages",
                           "budget in {7, 14, 21, 28}");
        }
        const int p = static_cast<int>(budget / 7);
        const double ell =
            4.0 * std::exp(-std::numbers::pi * std::sqrt(std::pow(3.0, p) / 2.0));
        const auto r = zolotarev::compose_stages(p, ell);
        err = sup_error([&](double x) { return 0.5 * (x * r.eval(x) + x); },
                        [](double x) { return relu(x); }, I, ngrid)
                  .max_abs_error;
        break;
      }
      case Family::newman: {
        if (budget % 2 != 0 || budget / 2 < 5) {
          throw RangeError("newman budgets are 2(N+1) raw coefficients, N >= 4",
                           "even budget >= 10");
        }
        const int N = static_cast<int>(budget / 2) - 1;
        const auto r = newman_relu(N);
        err = sup_error(r, [](double x) { return relu(x); }, I, ngrid)
                  .max_abs_error;
        break;
      }
      case Family::best_poly: {
        if (budget < 2) {
          throw RangeError("best_poly budgets are degree+1 coefficients",
                           "budget >= 2");
        }
        const auto res = detail::best_poly(relu, static_cast<int>(budget) - 1);
        err = sup_error([&](double x) { return cheb_eval(res.cheb, x); },
                        [](double x) { return relu(x); }, I, ngrid)
                  .max_abs_error;
        break;
      }
    }
    rows.push_back({family, budget, err});
  }
  return rows;
}

}  // namespace ratnet::classic
