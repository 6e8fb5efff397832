#include "inflow/numerics.hpp"

#include <algorithm>
#include <queue>

namespace inflow::num {

Quintic::Quintic(double h_, double y0, double d0, double s0, double y1, double d1, double s1) : h(h_) {
  const double dy = y1 - y0, a0 = h * d0, a1 = h * d1, b0 = h * h * s0, b1 = h * h * s1;
  c[0] = y0;
  c[1] = a0;
  c[2] = 0.5 * b0;
  c[3] = 10 * dy - 6 * a0 - 4 * a1 - 1.5 * b0 + 0.5 * b1;
  c[4] = -15 * dy + 8 * a0 + 7 * a1 + 1.5 * b0 - b1;
  c[5] = 6 * dy - 3 * a0 - 3 * a1 - 0.5 * b0 + 0.5 * b1;
}

double Quintic::value(double t) const {
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}

double Quintic::deriv(double t) const {
  return (c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))) / h;
}

double Quintic::second(double t) const {
  return (2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))) / (h * h);
}

double Quintic::integral() const {
  return h * (c[0] + c[1] / 2 + c[2] / 3 + c[3] / 4 + c[4] / 5 + c[5] / 6);
}

namespace {

// x^a e^-x / Gamma(a), the common prefactor, in log form.
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double p_series(double a, double x) {
  double ap = a, del = 1.0 / a, sum = del;
  for (int n = 0; n < 100000; ++n) {
    ap += 1;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

double q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-17) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (x <= 0) return 0;
  if (std::isinf(x)) return 1;
  return x < a + 1 ? p_series(a, x) : 1 - q_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (x <= 0) return 1;
  if (std::isinf(x)) return 0;
  return x < a + 1 ? 1 - p_series(a, x) : q_fraction(a, x);
}

double erfcx(double z) {
  if (z < 0) throw DomainError("erfcx: negative argument");
  if (z < 2) return std::exp(z * z) * std::erfc(z);
  // erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
  constexpr double tiny = 1e-300;
  double f = z, c = z, d = 0;
  for (int n = 1; n < 5000; ++n) {
    const double an = 0.5 * n;
    d = z + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double del = c * d;
    f *= del;
    if (std::abs(del - 1) < 1e-17) break;
  }
  return 1 / (std::sqrt(M_PI) * f);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientData("line fit needs at least two samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InsufficientData("line fit: degenerate abscissae");
  const double slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ssr += r * r;
  }
  const double r2 = syy > 0 ? 1 - ssr / syy : 1.0;
  return {slope, my - slope * mx, r2};
}

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b;
  Eigen::ArrayXd val, err;
  double score;
  bool operator<(const Piece& o) const { return score < o.score; }
};

Piece gk15(const VectorIntegrand& f, int m, double a, double b) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  Eigen::ArrayXd fv(m), fc(m), fk = Eigen::ArrayXd::Zero(m), fg = Eigen::ArrayXd::Zero(m);
  f(c, fc);
  fk += kWgk[7] * fc;
  fg += kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    Eigen::ArrayXd f1(m), f2(m);
    f(c - dx, f1);
    f(c + dx, f2);
    fk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) fg += kWg[j / 2] * (f1 + f2);
  }
  Piece p{a, b, fk * hl, ((fk - fg) * hl).abs(), 0};
  return p;
}

}  // namespace

QuadResult integrate_gk(const VectorIntegrand& f, int m, const std::vector<double>& breaks, double rtol,
                        int max_intervals) {
  if (breaks.size() < 2) throw DomainError("integrate_gk needs at least one interval");
  std::vector<Piece> pieces;
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(m), err = Eigen::ArrayXd::Zero(m);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    pieces.push_back(gk15(f, m, breaks[i], breaks[i + 1]));
    total += pieces.back().val;
    err += pieces.back().err;
  }
  auto scale = [&]() {
    Eigen::ArrayXd s = rtol * total.abs();
    for (int i = 0; i < m; ++i) s(i) = std::max(s(i), 1e-300);
    return s;
  };
  Eigen::ArrayXd sc = scale();
  std::priority_queue<Piece> heap;
  for (auto& p : pieces) {
    p.score = (p.err / sc).maxCoeff();
    heap.push(std::move(p));
  }
  int count = int(heap.size());
  auto done = [&]() { return ((err - rtol * total.abs()) <= 1e-300).all(); };
  while (!done() && count < max_intervals) {
    Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) break;
    Piece l = gk15(f, m, p.a, mid), r = gk15(f, m, mid, p.b);
    total += l.val + r.val - p.val;
    err += l.err + r.err - p.err;
    sc = scale();
    l.score = (l.err / sc).maxCoeff();
    r.score = (r.err / sc).maxCoeff();
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++count;
  }
  // Recompute the error sum from the heap to drop cancellation drift.
  Eigen::ArrayXd e = Eigen::ArrayXd::Zero(m);
  auto h = heap;
  while (!h.empty()) {
    e += h.top().err;
    h.pop();
  }
  return {total, e, count, ((e - rtol * total.abs()) <= 1e-300).all()};
}

NewtonResult damped_newton(const VectorFunction& F, Eigen::VectorXd x, const NewtonOptions& o) {
  Eigen::VectorXd r = F(x);
  const int n = int(x.size());
  int it = 0;
  for (; it < o.max_iter; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= o.tol) return {x, r, it, true};
    Eigen::MatrixXd J(r.size(), n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd xp = x;
      const double h = o.fd_rel * std::max(1.0, std::abs(x(j)));
      xp(j) += h;
      J.col(j) = (F(xp) - r) / h;
    }
    const Eigen::VectorXd dx = J.colPivHouseholderQr().solve(-r);
    const double rn = r.norm();
    double lam = 1;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, lam *= 0.5) {
      Eigen::VectorXd xt = x + lam * dx;
      Eigen::VectorXd rt;
      try {
        rt = F(xt);
      } catch (const Error&) {
        continue;
      }
      if (rt.allFinite() && rt.norm() < rn) {
        x = xt;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (lam * dx.norm() <= o.step_tol * std::max(1.0, x.norm())) {
      ++it;
      break;
    }
  }
  return {x, r, it, r.lpNorm<Eigen::Infinity>() <= o.tol};
}

}  // namespace inflow::num
