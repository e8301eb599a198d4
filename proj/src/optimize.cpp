#include "qctrl/optimize.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qctrl {
namespace {

constexpr double kGolden = 0.3819660112501051;  // 1 - 1/phi, golden-section fraction
constexpr double kTiny = 1e-25;
constexpr double kZeps = 1e-12;

double sign_of(double magnitude, double carrier) {
  return carrier >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

void PowellConfig::validate() const {
  if (!(x_tol > 0.0) || !(f_tol > 0.0))
    throw std::invalid_argument("PowellConfig: tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("PowellConfig: max_iter must be >= 1");
  if (!(bracket_growth > 1.0))
    throw std::invalid_argument("PowellConfig: bracket growth must exceed 1");
  if (restarts < 1) throw std::invalid_argument("PowellConfig: restarts must be >= 1");
  if (!(init_range[0] <= init_range[1]))
    throw std::invalid_argument("PowellConfig: empty init range");
}

Bracket bracket_minimum(const std::function<double(double)>& f, double x0, double step,
                        double growth, int max_evals) {
  Bracket br;
  br.a = x0;
  br.b = x0 + step;
  br.fa = f(br.a);
  br.fb = f(br.b);
  int evals = 2;
  if (br.fb > br.fa) {
    std::swap(br.a, br.b);
    std::swap(br.fa, br.fb);
  }
  br.c = br.b + growth * (br.b - br.a);
  br.fc = f(br.c);
  ++evals;
  while (br.fb > br.fc) {
    if (evals >= max_evals)
      throw std::runtime_error("bracket_minimum: max function evaluations exceeded");
    br.a = br.b;
    br.fa = br.fb;
    br.b = br.c;
    br.fb = br.fc;
    br.c = br.b + growth * (br.b - br.a);
    br.fc = f(br.c);
    ++evals;
  }
  return br;
}

ScalarMinResult brent_min(const std::function<double(double)>& f, const Bracket& bracket,
                          double tol, int max_evals) {
  const bool ascending = bracket.a < bracket.b && bracket.b < bracket.c;
  const bool descending = bracket.c < bracket.b && bracket.b < bracket.a;
  if ((!ascending && !descending) || bracket.fb > bracket.fa || bracket.fb > bracket.fc ||
      !std::isfinite(bracket.fa + bracket.fb + bracket.fc))
    throw std::invalid_argument("brent_min: invalid bracket");
  if (!(tol > 0.0)) throw std::invalid_argument("brent_min: tol must be positive");

  double a = std::min(bracket.a, bracket.c);
  double b = std::max(bracket.a, bracket.c);
  double x = bracket.b, w = bracket.b, v = bracket.b;
  double fx = bracket.fb, fw = bracket.fb, fv = bracket.fb;
  double d = 0.0, e = 0.0;
  int evals = 0;

  while (evals < max_evals) {
    const double xm = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + kZeps;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) return {x, fx, evals};

    bool golden = true;
    if (std::abs(e) > tol1) {
      // Trial parabola through x, w, v.
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = sign_of(tol1, xm - x);
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + sign_of(tol1, d);
    const double fu = f(u);
    ++evals;
    if (fu <= fx) {
      if (u >= x)
        a = x;
      else
        b = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  throw std::runtime_error("brent_min: max function evaluations exceeded");
}

PowellResult powell_min(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, const PowellConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("powell_min: empty parameter vector");

  PowellResult res;
  auto F = [&](const Eigen::VectorXd& x) {
    const double val = f(x);
    ++res.n_evals;
    if (!std::isfinite(val)) throw std::runtime_error("powell_min: non-finite objective");
    return val;
  };

  Eigen::VectorXd p = x0;
  double fret = F(p);
  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n);

  // Brent over the step length along dir from p; updates p and fret on improvement.
  auto line_minimize = [&](const Eigen::VectorXd& dir) {
    auto f1d = [&](double lambda) { return F(p + lambda * dir); };
    try {
      const Bracket br =
          bracket_minimum(f1d, 0.0, 1.0, cfg.bracket_growth, cfg.max_line_evals);
      const ScalarMinResult lm = brent_min(f1d, br, cfg.x_tol, cfg.max_line_evals);
      if (lm.f < fret) {
        p += lm.x * dir;
        fret = lm.f;
      }
    } catch (const std::runtime_error&) {
      // No usable bracket along this direction; leave the point where it is.
    }
  };

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    res.n_iter = iter;
    const double fp = fret;
    const Eigen::VectorXd pt = p;
    double del = 0.0;
    int ibig = 0;
    for (int i = 0; i < n; ++i) {
      const double fbefore = fret;
      line_minimize(dirs.col(i));
      if (fbefore - fret > del) {
        del = fbefore - fret;
        ibig = i;
      }
    }
    if (2.0 * (fp - fret) <= cfg.f_tol * (std::abs(fp) + std::abs(fret)) + kTiny) break;

    // Powell's replacement rule on the cycle's net displacement.
    const Eigen::VectorXd net = p - pt;
    const Eigen::VectorXd extrapolated = p + net;
    const double fptt = F(extrapolated);
    if (fptt < fp) {
      const double t = 2.0 * (fp - 2.0 * fret + fptt) * (fp - fret - del) * (fp - fret - del) -
                       del * (fp - fptt) * (fp - fptt);
      if (t < 0.0) {
        line_minimize(net);
        dirs.col(ibig) = dirs.col(n - 1);
        dirs.col(n - 1) = net;
      }
    }
    if (iter % n == 0) dirs.setIdentity();  // periodic reset keeps the set non-degenerate
  }
  res.x = p;
  res.f = fret;
  return res;
}

}  // namespace qctrl
