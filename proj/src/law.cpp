#include "law.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "status.hpp"
#include "zeta.hpp"

namespace rw {

namespace {

double tail_mass_from(const TailModel& t, long long m) {
  // sum of amplitude * x^{-1-alpha} over x >= max(start, m)
  if (!t.present) return 0.0;
  long long lo = std::max(t.start, m);
  return t.amplitude * hurwitz_tail(1.0 + t.alpha, lo).value;
}

double tail_first_moment(const TailModel& t) {
  if (!t.present) return 0.0;
  return t.amplitude * hurwitz_tail(t.alpha, t.start).value;
}

}  // namespace

Law Law::build(std::vector<std::pair<long long, double>> core, TailModel left,
               TailModel right, double mass_tol, double mean_tol) {
  Law law;
  for (const TailModel* t : {&left, &right}) {
    if (!t->present) continue;
    if (!(t->alpha > 1.0))
      fail(RW_ERR_BAD_TAIL, "tail exponent must exceed 1 (E|X| < inf)");
    if (!(t->amplitude > 0.0) || t->start < 1)
      fail(RW_ERR_BAD_TAIL, "tail needs amplitude > 0 and start >= 1");
  }
  std::sort(core.begin(), core.end());
  for (size_t i = 0; i + 1 < core.size(); ++i)
    if (core[i].first == core[i + 1].first)
      fail(RW_ERR_PARSE, "duplicate core site");
  for (auto& [x, p] : core) {
    if (!(p >= 0.0) || !std::isfinite(p))
      fail(RW_ERR_PARSE, "core probabilities must be finite and >= 0");
    if (p > 0.0) {
      if (left.present && x <= -left.start)
        fail(RW_ERR_TAIL_OVERLAP, "core site inside left tail range");
      if (right.present && x >= right.start)
        fail(RW_ERR_TAIL_OVERLAP, "core site inside right tail range");
      law.sites_.push_back(x);
      law.probs_.push_back(p);
    }
  }
  if (law.sites_.empty() && !left.present && !right.present)
    fail(RW_ERR_PARSE, "empty law");
  law.left_ = left;
  law.right_ = right;

  // mass and mean
  KahanSum mass, mean, absm, explus, exminus;
  for (size_t i = 0; i < law.sites_.size(); ++i) {
    double x = double(law.sites_[i]), p = law.probs_[i];
    mass.add(p);
    mean.add(x * p);
    absm.add(std::fabs(x) * p);
    if (x > 0) explus.add(x * p);
    if (x < 0) exminus.add(-x * p);
  }
  double lt_mass = tail_mass_from(left, 1), rt_mass = tail_mass_from(right, 1);
  double lt_mom = tail_first_moment(left), rt_mom = tail_first_moment(right);
  Moments m;
  m.mass = mass.value() + lt_mass + rt_mass;
  m.mean = mean.value() + rt_mom - lt_mom;
  m.abs_mean = absm.value() + rt_mom + lt_mom;
  m.ex_plus = explus.value() + rt_mom;
  m.ex_minus = exminus.value() + lt_mom;
  if (std::fabs(m.mass - 1.0) > mass_tol) {
    std::ostringstream os;
    os << "total mass " << m.mass << " differs from 1 beyond " << mass_tol;
    fail(RW_ERR_MASS_NOT_ONE, os.str());
  }
  if (std::fabs(m.mean) > mean_tol) {
    std::ostringstream os;
    os << "mean " << m.mean << " differs from 0 beyond " << mean_tol;
    fail(RW_ERR_MEAN_NOT_ZERO, os.str());
  }
  m.sigma2_finite = !(left.present && left.alpha <= 2.0) &&
                    !(right.present && right.alpha <= 2.0);
  if (m.sigma2_finite) {
    KahanSum s2;
    for (size_t i = 0; i < law.sites_.size(); ++i)
      s2.add(double(law.sites_[i]) * double(law.sites_[i]) * law.probs_[i]);
    double t2 = 0.0;
    for (const TailModel* t : {&left, &right})
      if (t->present)
        t2 += t->amplitude * hurwitz_tail(t->alpha - 1.0, t->start).value;
    m.sigma2 = s2.value() + t2;
  }
  law.mom_ = m;

  // irreducibility: the support must generate all of Z.  An analytic
  // tail covers consecutive integers, so it forces gcd 1 by itself.
  long long g = 0;
  for (size_t i = 0; i < law.sites_.size(); ++i)
    if (law.sites_[i] != 0) g = gcd64(g, law.sites_[i]);
  if (left.present || right.present) g = 1;
  if (g != 1) fail(RW_ERR_REDUCIBLE, "support generates a proper subgroup of Z");
  return law;
}

double Law::pmf(long long x) const {
  if (left_.present && x <= -left_.start)
    return left_.amplitude * std::pow(double(-x), -1.0 - left_.alpha);
  if (right_.present && x >= right_.start)
    return right_.amplitude * std::pow(double(x), -1.0 - right_.alpha);
  auto it = std::lower_bound(sites_.begin(), sites_.end(), x);
  if (it != sites_.end() && *it == x) return probs_[it - sites_.begin()];
  return 0.0;
}

double Law::tail_prob(double t, Side side) const {
  if (t < 0.0) fail(RW_ERR_INVALID_ARGUMENT, "tail_prob: t >= 0");
  // P[X > t] = P[X >= floor(t)+1]; P[X < -t] = P[X <= -(floor(t)+1)]
  long long m = (long long)std::floor(t) + 1;
  KahanSum acc;
  if (side == Side::Right) {
    for (size_t i = 0; i < sites_.size(); ++i)
      if (sites_[i] >= m) acc.add(probs_[i]);
    return acc.value() + tail_mass_from(right_, m);
  }
  for (size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i] <= -m) acc.add(probs_[i]);
  return acc.value() + tail_mass_from(left_, m);
}

namespace {

// Cumulated one-sided tail sums for the m functionals, for one side
// reduced to positive magnitudes: q(k) = P[|X_side| = k].
struct SideView {
  const std::vector<long long>* sites;
  const std::vector<double>* probs;
  TailModel tail;
  bool negate;  // true: look at -X (left side)

  // L(k) = P[|X| >= k+1 on this side] = P[X < -k] resp. P[X > k]
  double L(long long k) const {
    KahanSum acc;
    for (size_t i = 0; i < sites->size(); ++i) {
      long long v = negate ? -(*sites)[i] : (*sites)[i];
      if (v >= k + 1) acc.add((*probs)[i]);
    }
    double t = 0.0;
    if (tail.present) {
      long long lo = std::max(tail.start, k + 1);
      t = tail.amplitude * hurwitz_tail(1.0 + tail.alpha, lo).value;
    }
    return acc.value() + t;
  }

  // SI(j) = sum_{k >= j} L(k) (the integral of the tail from level j)
  double SI(long long j) const {
    KahanSum acc;
    for (size_t i = 0; i < sites->size(); ++i) {
      long long v = negate ? -(*sites)[i] : (*sites)[i];
      if (v - 1 >= j) acc.add(double(v - j) * (*probs)[i]);
    }
    double t = 0.0;
    if (tail.present) {
      long long s = tail.start;
      if (j <= s - 1) t += double(s - j) * hurwitz_tail(1.0 + tail.alpha, s).value;
      long long K = std::max(j, s) + 1;
      t += hurwitz_tail(tail.alpha, K).value -
           double(K - 1) * hurwitz_tail(1.0 + tail.alpha, K).value;
      t *= tail.amplitude;
    }
    return acc.value() + t;
  }

  // m_side(x) = int_0^x dy int_y^inf P[|X| > u on this side] du
  double m_of(double x) const {
    if (x < 0.0) fail(RW_ERR_INVALID_ARGUMENT, "m functional: x >= 0");
    long long J = (long long)std::floor(x);
    KahanSum acc;
    for (long long j = 0; j < J; ++j)
      acc.add(SI(j + 1) + 0.5 * L(j));
    double f = x - double(J);
    if (f > 0.0) acc.add(f * SI(J + 1) + (f - 0.5 * f * f) * L(J));
    return acc.value();
  }
};

}  // namespace

double Law::m_minus(double x) const {
  SideView v{&sites_, &probs_, left_, true};
  return v.m_of(x);
}

double Law::tail_excess(long long j, Side side) const {
  if (j < 0) fail(RW_ERR_INVALID_ARGUMENT, "tail_excess: j >= 0");
  SideView v{&sites_, &probs_, side == Side::Left ? left_ : right_,
             side == Side::Left};
  return v.SI(j);
}

double Law::m_plus(double x) const {
  SideView v{&sites_, &probs_, right_, false};
  return v.m_of(x);
}

std::complex<double> Law::one_minus_char(double theta, double* err) const {
  // 1 - phi = sum_x p(x) (1 - e^{ix theta} + i x theta), exact for a
  // mean-zero law; each summand is evaluated without cancellation.
  KahanSum re, im;
  double e = 0.0;
  for (size_t i = 0; i < sites_.size(); ++i) {
    std::complex<double> c = centered_phase(double(sites_[i]) * theta);
    re.add(probs_[i] * c.real());
    im.add(probs_[i] * c.imag());
  }
  std::complex<double> total(re.value(), im.value());
  if (right_.present) {
    CertifiedComplex t = centered_tail_char(right_.alpha, right_.start, theta);
    total += right_.amplitude * t.value;
    e += right_.amplitude * t.err;
  }
  if (left_.present) {
    CertifiedComplex t = centered_tail_char(left_.alpha, left_.start, theta);
    total += left_.amplitude * std::conj(t.value);
    e += left_.amplitude * t.err;
  }
  // residual mean error from validation plus rounding
  e += (std::fabs(mom_.mean) + 1e-14) * std::fabs(theta);
  e += 4e-16 * (std::abs(total) + 1e-300);
  if (err) *err = e;
  return total;
}

std::complex<double> Law::char_fn(double theta) const {
  return 1.0 - one_minus_char(theta);
}

long long Law::support_max() const {
  if (right_.present) fail(RW_ERR_PRECONDITION, "support unbounded above");
  return sites_.empty() ? 0 : sites_.back();
}

long long Law::support_min() const {
  if (left_.present) fail(RW_ERR_PRECONDITION, "support unbounded below");
  return sites_.empty() ? 0 : sites_.front();
}

bool Law::right_continuous() const {
  if (right_.present) return false;
  for (size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i] >= 2) return false;
  return true;
}

bool Law::left_continuous() const {
  if (left_.present) return false;
  for (size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i] <= -2) return false;
  return true;
}

Law Law::mirrored() const {
  std::vector<std::pair<long long, double>> core;
  for (size_t i = 0; i < sites_.size(); ++i)
    core.emplace_back(-sites_[i], probs_[i]);
  return build(std::move(core), right_, left_);
}

namespace {

double parse_prob(const nlohmann::json& v, const char* what) {
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    size_t pos = 0;
    double d;
    try {
      d = std::stod(s, &pos);
    } catch (const std::exception&) {
      fail(RW_ERR_PARSE, std::string("bad numeric string for ") + what);
    }
    if (pos != s.size())
      fail(RW_ERR_PARSE, std::string("trailing junk in ") + what);
    return d;
  }
  if (v.is_number()) return v.get<double>();
  fail(RW_ERR_PARSE, std::string(what) + " must be a number or decimal string");
}

TailModel parse_tail(const nlohmann::json& j, const char* side) {
  TailModel t;
  if (j.is_null()) return t;
  if (!j.is_object()) fail(RW_ERR_PARSE, "tail must be an object");
  std::string kind = j.value("kind", std::string("none"));
  if (kind == "none") return t;
  if (kind != "power")
    fail(RW_ERR_PARSE, std::string("unknown tail kind for ") + side);
  t.present = true;
  if (!j.contains("alpha") || !j.contains("amplitude") || !j.contains("start"))
    fail(RW_ERR_PARSE, "power tail needs alpha, amplitude, start");
  t.alpha = parse_prob(j.at("alpha"), "alpha");
  t.amplitude = parse_prob(j.at("amplitude"), "amplitude");
  if (!j.at("start").is_number_integer())
    fail(RW_ERR_PARSE, "tail start must be an integer");
  t.start = j.at("start").get<long long>();
  return t;
}

}  // namespace

Law Law::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(RW_ERR_PARSE, std::string("law JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("core") || !j.at("core").is_object())
    fail(RW_ERR_PARSE, "law JSON needs a \"core\" object");
  std::vector<std::pair<long long, double>> core;
  for (auto it = j.at("core").begin(); it != j.at("core").end(); ++it) {
    long long x;
    try {
      size_t pos = 0;
      x = std::stoll(it.key(), &pos);
      if (pos != it.key().size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      fail(RW_ERR_PARSE, "core key is not an integer: " + it.key());
    }
    core.emplace_back(x, parse_prob(it.value(), "core probability"));
  }
  TailModel left = parse_tail(j.value("left_tail", nlohmann::json()), "left");
  TailModel right = parse_tail(j.value("right_tail", nlohmann::json()), "right");
  double mass_tol = j.value("mass_tol", 1e-12);
  double mean_tol = j.value("mean_tol", 1e-10);
  return build(std::move(core), left, right, mass_tol, mean_tol);
}

Law Law::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(RW_ERR_IO, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

long long chain_period(const Law& law) {
  std::vector<long long> up, down;
  for (long long s : law.core_sites()) {
    if (s == 0) return 1;  // self-loop at every site
    (s > 0 ? up : down).push_back(s > 0 ? s : -s);
  }
  // an analytic tail contributes consecutive sites start, start + 1
  for (Side sd : {Side::Right, Side::Left}) {
    const TailModel& t = law.tail(sd);
    if (!t.present) continue;
    std::vector<long long>& v = sd == Side::Right ? up : down;
    v.push_back(t.start);
    v.push_back(t.start + 1);
  }
  // a up-steps of size b and b down-steps of size a (over gcd) close a
  // cycle of length (a + b)/gcd(a, b); the period divides each of these
  long long per = 0;
  for (long long a : up)
    for (long long b : down) per = gcd64(per, (a + b) / gcd64(a, b));
  return per == 0 ? 1 : per;
}

}  // namespace rw
