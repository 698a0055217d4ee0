#include "kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "nstep.hpp"
#include "status.hpp"
#include "util.hpp"

namespace rw {

double PotentialTable::at(long long x) const {
  if (x < -W || x > W) fail(RW_ERR_INVALID_ARGUMENT, "outside kernel window");
  return a[size_t(x + W)];
}

double PotentialTable::err_at(long long x) const {
  if (x < -W || x > W) fail(RW_ERR_INVALID_ARGUMENT, "outside kernel window");
  return err[size_t(x + W)];
}

double PotentialTable::a_dagger(long long x) const {
  return at(x) + (x == 0 ? 1.0 : 0.0);
}

double PotentialTable::abar(long long x) const {
  return 0.5 * (at(x) + at(-x));
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr int kLevelCap = 140;
constexpr double kOscBudget = 40.0;  // max panel width in units of 1/x

struct QuadNode {
  double th, w;      // node and weight
  double Rd, Id, D;  // Re(1-phi), Im(1-phi), |1-phi|^2
};

// Quadrature node cache over the dyadic levels of (0, pi].  Level l
// covers [pi 2^{-l-1}, pi 2^{-l}]; at depth d it is split into 2^d
// Gauss-Legendre sub-panels (64-node rule plus embedded 32-node rule
// for the error estimate).  Nodes are shared across all x.
class NodeCache {
public:
  explicit NodeCache(const Law& law) : law_(law) {}

  struct PanelSet {
    std::vector<QuadNode> n64, n32;
  };

  const PanelSet& panel(int level, int depth) {
    auto key = std::make_pair(level, depth);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    PanelSet ps;
    double hi = kPi * std::ldexp(1.0, -level);
    double lo = 0.5 * hi;
    long long parts = 1LL << depth;
    double w = (hi - lo) / double(parts);
    for (long long s = 0; s < parts; ++s) {
      double a = lo + w * double(s);
      fill(ps.n64, gauss_legendre_64(), a, a + w);
      fill(ps.n32, gauss_legendre_32(), a, a + w);
    }
    return cache_.emplace(key, std::move(ps)).first->second;
  }

private:
  void fill(std::vector<QuadNode>& out, const GaussLegendre& g, double a,
            double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t i = 0; i < g.node.size(); ++i) {
      QuadNode q;
      q.th = mid + half * g.node[i];
      q.w = half * g.weight[i];
      std::complex<double> omc = law_.one_minus_char(q.th);
      q.Rd = omc.real();
      q.Id = omc.imag();
      q.D = q.Rd * q.Rd + q.Id * q.Id;
      out.push_back(q);
    }
  }

  const Law& law_;
  std::map<std::pair<int, int>, PanelSet> cache_;
};

// integral contribution of one panel set for the pair (x, -x):
// out = {I64(x), I64(-x), I32(x), I32(-x)}
void accumulate_pair(const NodeCache::PanelSet& ps, double x, double out[4]) {
  for (int r = 0; r < 2; ++r) {
    const std::vector<QuadNode>& nodes = r == 0 ? ps.n64 : ps.n32;
    KahanSum plus, minus;
    for (const QuadNode& q : nodes) {
      if (q.D <= 0.0) continue;  // deep underflow; contribution negligible
      double sh = std::sin(0.5 * x * q.th);
      double ch = std::cos(0.5 * x * q.th);
      double u = 2.0 * sh * sh;        // 1 - cos(x th)
      double s = 2.0 * sh * ch;        // sin(x th)
      double t1 = (u * q.Rd) / q.D;
      double t2 = (s * q.Id) / q.D;
      plus.add(q.w * (t1 - t2));
      minus.add(q.w * (t1 + t2));
    }
    out[2 * r] = plus.value();
    out[2 * r + 1] = minus.value();
  }
}

int osc_depth(double x, int level) {
  double width = kPi * std::ldexp(1.0, -level - 1);
  double need = x * width / kOscBudget;
  if (need <= 1.0) return 0;
  return int(std::ceil(std::log2(need)));
}

PotentialTable build_table(const Law& law, long long X_max, double tol) {
  if (X_max < 1) fail(RW_ERR_INVALID_ARGUMENT, "X_max >= 1");
  if (!(tol > 0.0)) fail(RW_ERR_INVALID_ARGUMENT, "tol > 0");
  PotentialTable t;
  t.W = X_max;
  t.a.assign(size_t(2 * X_max + 1), 0.0);
  t.err.assign(size_t(2 * X_max + 1), 0.0);
  const Moments& mom = law.moments();
  t.sigma2_finite = mom.sigma2_finite;
  if (mom.sigma2_finite) t.sigma2 = mom.sigma2;
  t.A = mom.sigma2_finite ? 0.5 : 1.0;

  NodeCache cache(law);
  double target = tol * kPi;  // per-entry budget before the 1/pi factor
  for (long long x = 1; x <= X_max; ++x) {
    KahanSum ip, im;
    double errx = 0.0;
    double prevC = -1.0;
    int small_streak = 0;
    bool converged = false;
    for (int level = 0; level < kLevelCap; ++level) {
      const NodeCache::PanelSet& ps =
          cache.panel(level, osc_depth(double(x), level));
      double I[4];
      accumulate_pair(ps, double(x), I);
      ip.add(I[0]);
      im.add(I[1]);
      errx += std::fabs(I[0] - I[2]) + std::fabs(I[1] - I[3]);
      double C = std::fabs(I[0]) + std::fabs(I[1]);
      if (level >= 6) {
        if (C < target / 16.0) {
          if (++small_streak >= 2) {
            double r = prevC > 0.0 ? C / prevC : 0.9;
            r = std::min(0.9, std::max(0.3, r));
            errx += 2.0 * C * r / (1.0 - r);
            converged = true;
            break;
          }
        } else {
          small_streak = 0;
        }
      }
      prevC = C;
    }
    if (!converged)
      fail(RW_ERR_NO_CONVERGENCE, "potential kernel quadrature stalled");
    double ax = ip.value() / kPi, axm = im.value() / kPi;
    double e = (2.0 * errx) / kPi + 1e-13 * (std::fabs(ax) + std::fabs(axm));
    t.a[size_t(X_max + x)] = ax;
    t.a[size_t(X_max - x)] = axm;
    t.err[size_t(X_max + x)] = e;
    t.err[size_t(X_max - x)] = e;
  }
  return t;
}

// One stepping pass, partial sums tracked for every requested site.
// Five checkpoints n4/16 .. n4, all multiples of the chain period (the
// increments cycle with it), feed two Aitken stages: the first removes
// the leading power tail, the second the next order.
std::vector<OracleValue> series_oracle_multi(const Law& law,
                                             const std::vector<long long>& xs,
                                             int n_max, long long W) {
  for (long long x : xs)
    if (std::llabs(x) > W / 2)
      fail(RW_ERR_INVALID_ARGUMENT, "oracle window too small for x");
  int q = 16 * int(chain_period(law));
  int n4 = std::max(q, n_max - n_max % q);
  int cp[5] = {n4 / 16, n4 / 8, n4 / 4, n4 / 2, n4};
  Stepper st(law, W);
  std::vector<KahanSum> sums(xs.size());
  std::vector<std::array<double, 5>> s(xs.size());
  for (int n = 1; n <= n4; ++n) {
    st.step();
    double p0 = st.at(0);
    for (size_t i = 0; i < xs.size(); ++i) {
      sums[i].add(p0 - st.at(-xs[i]));
      for (int k = 0; k < 5; ++k)
        if (n == cp[k]) s[i][k] = sums[i].value();
    }
  }
  double slack = st.escaped() + st.noise();
  std::vector<OracleValue> out;
  out.reserve(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double base = xs[i] == 0 ? 0.0 : 1.0;  // n = 0 term
    Extrapolated e = aitken5(s[i]);
    out.push_back({base + e.value, e.correction + 8.0 * slack + 1e-11});
  }
  return out;
}

void cross_validate(const Law& law, const PotentialTable& t) {
  bool heavy = law.heavy(Side::Left) || law.heavy(Side::Right);
  int n_max = heavy ? 1024 : 2048;
  long long W = heavy ? 4096 : 1024;
  std::vector<long long> xs;
  for (long long x : {1LL, 2LL, 5LL, 8LL})
    if (x <= t.W) {
      xs.push_back(x);
      xs.push_back(-x);
    }
  std::vector<OracleValue> ov = series_oracle_multi(law, xs, n_max, W);
  for (size_t i = 0; i < xs.size(); ++i) {
    double gap = std::fabs(t.at(xs[i]) - ov[i].value);
    double budget = t.err_at(xs[i]) + ov[i].tol;
    if (gap > budget) {
      std::ostringstream os;
      os << "kernel methods disagree at x=" << xs[i]
         << ": fourier=" << t.at(xs[i]) << " series=" << ov[i].value
         << " gap=" << gap << " budget=" << budget;
      fail(RW_ERR_NO_CONVERGENCE, os.str());
    }
  }
}

}  // namespace

PotentialTable potential_kernel_unchecked(const Law& law, long long X_max,
                                          double tol) {
  return build_table(law, X_max, tol);
}

PotentialTable potential_kernel(const Law& law, long long X_max, double tol) {
  PotentialTable t = build_table(law, X_max, tol);
  cross_validate(law, t);
  return t;
}

OracleValue potential_series_oracle(const Law& law, long long x, int n_max,
                                    long long W) {
  return series_oracle_multi(law, {x}, n_max, W).front();
}

double constant_c(const Law& law, double tol) {
  if (!(tol > 0.0)) fail(RW_ERR_INVALID_ARGUMENT, "tol > 0");
  // primary: c = exp[(1/pi) int_0^pi log|1 - phi| dtheta]
  KahanSum integral;
  double err = 0.0;
  double prevC = -1.0;
  int small_streak = 0;
  bool converged = false;
  const GaussLegendre& g64 = gauss_legendre_64();
  const GaussLegendre& g32 = gauss_legendre_32();
  for (int level = 0; level < kLevelCap && !converged; ++level) {
    double hi = kPi * std::ldexp(1.0, -level), lo = 0.5 * hi;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double i64 = 0.0, i32 = 0.0;
    for (int r = 0; r < 2; ++r) {
      const GaussLegendre& g = r == 0 ? g64 : g32;
      KahanSum acc;
      for (size_t i = 0; i < g.node.size(); ++i) {
        double th = mid + half * g.node[i];
        double m = std::abs(law.one_minus_char(th));
        acc.add(half * g.weight[i] * std::log(m));
      }
      (r == 0 ? i64 : i32) = acc.value();
    }
    integral.add(i64);
    err += std::fabs(i64 - i32);
    double C = std::fabs(i64);
    if (level >= 6) {
      if (C < tol / 16.0) {
        if (++small_streak >= 2) {
          err += 3.0 * C;  // |log| integrand decays like level * 2^{-level}
          converged = true;
        }
      } else {
        small_streak = 0;
      }
    }
    prevC = C;
  }
  (void)prevC;
  if (!converged) fail(RW_ERR_NO_CONVERGENCE, "constant_c quadrature stalled");
  double c = std::exp(integral.value() / kPi);
  double c_err = c * (err / kPi + 1e-13);

  // secondary: c = exp(-sum_k p^k(0)/k), power-tail extrapolated;
  // checkpoints aligned to the chain period as in the kernel oracle
  bool heavy = law.heavy(Side::Left) || law.heavy(Side::Right);
  int n_max = heavy ? 2048 : 4096;
  long long W = heavy ? 4096 : 1024;
  int q = 4 * int(chain_period(law));
  int n4 = std::max(q, n_max - n_max % q);
  Stepper st(law, W);
  KahanSum es;
  double s1 = 0.0, s2 = 0.0;
  for (int n = 1; n <= n4; ++n) {
    st.step();
    es.add(st.at(0) / double(n));
    if (n == n4 / 4) s1 = es.value();
    if (n == n4 / 2) s2 = es.value();
  }
  Extrapolated e = aitken(s1, s2, es.value());
  double c_series = std::exp(-e.value);
  double series_tol =
      c_series * (std::fabs(e.correction) + 8.0 * (st.escaped() + st.noise()) +
                  1e-10);
  if (std::fabs(c - c_series) > c_err + series_tol) {
    std::ostringstream os;
    os << "spitzer constant methods disagree: integral=" << c
       << " series=" << c_series;
    fail(RW_ERR_NO_CONVERGENCE, os.str());
  }
  return c;
}

double check_harmonicity(const Law& law, const PotentialTable& t,
                         long long x_hi) {
  x_hi = std::min(x_hi, t.W);
  double worst = 0.0;
  double a_m1 = t.at(-1) + t.err_at(-1), a_p1 = t.at(1) + t.err_at(1);
  for (long long x = -x_hi; x <= x_hi; ++x) {
    KahanSum s;
    double werr = 0.0;
    for (long long y = -t.W; y <= t.W; ++y) {
      double p = law.pmf(y - x);
      if (p == 0.0) continue;
      s.add(p * t.a[size_t(y + t.W)]);
      werr += p * t.err[size_t(y + t.W)];
    }
    // out-of-window tail: a(y) <= a(+-W) + a(+-1) |y -+ W| by
    // subadditivity along unit steps
    double out = 0.0;
    long long jl = t.W + x;  // y < -W  <=>  X < -(W + x)
    double pl = law.tail_prob(double(jl), Side::Left);
    if (pl > 0.0)
      out += pl * (t.at(-t.W) + t.err_at(-t.W)) +
             a_m1 * law.tail_excess(jl, Side::Left);
    long long jr = t.W - x;
    double pr = law.tail_prob(double(jr), Side::Right);
    if (pr > 0.0)
      out += pr * (t.at(t.W) + t.err_at(t.W)) +
             a_p1 * law.tail_excess(jr, Side::Right);
    double lhs = s.value();
    double rhs = t.a[size_t(x + t.W)] + (x == 0 ? 1.0 : 0.0);
    double resid = std::fabs(lhs - rhs) -
                   std::min(std::fabs(lhs - rhs),
                            werr + out + t.err[size_t(x + t.W)]);
    worst = std::max(worst, resid);
  }
  return worst;
}

}  // namespace rw
