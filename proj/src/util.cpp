#include "util.hpp"

namespace rw {

// Newton iteration on the Legendre polynomial; standard construction,
// accurate to machine precision for the orders used here.
GaussLegendre::GaussLegendre(int n) {
  node.resize(n);
  weight.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    node[i] = -x;
    node[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weight[i] = w;
    weight[n - 1 - i] = w;
  }
}

const GaussLegendre& gauss_legendre_32() {
  static const GaussLegendre g(32);
  return g;
}

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre g(64);
  return g;
}

Extrapolated aitken(double s1, double s2, double s4) {
  double d1 = s2 - s1, d2 = s4 - s2;
  double den = d1 - d2;
  if (std::fabs(den) < 1e-300 * std::fabs(d2)) return {s4, std::fabs(d2)};
  double corr = d2 * d2 / den;
  // guard wild extrapolations when the ratio is not in (0, 1)
  if (!(d2 * d1 > 0.0) || std::fabs(d2) >= std::fabs(d1))
    return {s4, std::fabs(d2) + std::fabs(d1)};
  return {s4 + corr, corr};
}

Extrapolated aitken5(const std::array<double, 5>& s) {
  Extrapolated t1 = aitken(s[0], s[1], s[2]);
  Extrapolated t2 = aitken(s[1], s[2], s[3]);
  Extrapolated t3 = aitken(s[2], s[3], s[4]);
  Extrapolated e = aitken(t1.value, t2.value, t3.value);
  return {e.value, 0.5 * std::fabs(e.correction) +
                       0.25 * std::fabs(t3.value - t2.value)};
}

Extrapolated richardson5(const std::array<double, 5>& s, double e0,
                         double step) {
  double r[5];
  for (int i = 0; i < 5; ++i) r[i] = s[i];
  int len = 5;
  double amp = 1.0;
  double prev_top = r[4];
  for (int k = 0; k < 4; ++k) {
    double p = std::pow(2.0, e0 + k * step);
    for (int j = 0; j + 1 < len; ++j) r[j] = (p * r[j + 1] - r[j]) / (p - 1.0);
    --len;
    amp *= (p + 1.0) / (p - 1.0);
    if (len > 1) prev_top = r[len - 1];
  }
  return {r[0], std::fabs(r[0] - prev_top) + amp * 1e-14};
}

}  // namespace rw
