#include "bingham/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "bingham/constitutive.hpp"
#include "bingham/diagnostics.hpp"
#include "bingham/scenario.hpp"

namespace bingham {

namespace {

/// Records a "lhs <= rhs" check with relative slack.
struct Tally {
  CheckResult r;
  explicit Tally(std::string name) { r.name = std::move(name); }

  void le(double lhs, double rhs, double slack = kRoundingSlack) {
    ++r.samples;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    const double excess = (lhs - rhs) / scale;
    r.worst = std::max(r.worst, excess);
    if (lhs > rhs + slack * scale) ++r.violations;
  }
  void close(double a, double b, double rel) {
    ++r.samples;
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    const double err = std::abs(a - b) / scale;
    r.worst = std::max(r.worst, err);
    if (err > rel) ++r.violations;
  }
  void exact(bool same) {
    ++r.samples;
    if (!same) ++r.violations;
  }
  CheckResult done() {
    r.passed = r.violations == 0 && r.samples > 0;
    return r;
  }
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  FluidParams params() {
    const double mu = log_uniform(0.05, 20.0);
    // One draw in ten is Newtonian.
    const double tau = uniform(0.0, 1.0) < 0.1 ? 0.0 : log_uniform(0.01, 50.0);
    return FluidParams(mu, tau);
  }
  RegIndex reg() {
    // Mix integer and real indices, including the endpoint m = 2.
    const double u = uniform(0.0, 1.0);
    if (u < 0.1) return RegIndex(2.0);
    if (u < 0.4) return RegIndex(std::round(log_uniform(2.0, 1000.0)));
    return RegIndex(log_uniform(2.0, 1000.0));
  }
  SymTensor2 direction() {
    std::normal_distribution<double> n(0.0, 1.0);
    SymTensor2 a{n(rng_), n(rng_), n(rng_)};
    const double s = tensor_norm(a);
    return s > 0.0 ? (1.0 / s) * a : SymTensor2{1.0, 0.0, 0.0};
  }
  /// Tensor of norm about `norm` (up to rounding of the rescale).
  SymTensor2 with_norm(double norm) { return norm * direction(); }

  /// Newtonian-branch tensor (|d| <= gamma) or plastic-branch tensor.
  SymTensor2 on_branch(bool newtonian, double gamma) {
    if (gamma <= 0.0) {
      return with_norm(log_uniform(1e-6, 1e3));
    }
    if (newtonian) {
      const double u = uniform(0.0, 1.0);
      if (u < 0.05) return SymTensor2{};
      return with_norm(gamma * uniform(0.0, 1.0) * (1.0 - 1e-9));
    }
    return with_norm(gamma * log_uniform(1.0 + 1e-9, 1e4));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

std::vector<CheckResult> constitutive_property_suite(const SuiteOptions& opt) {
  Sampler s(opt.seed);
  Tally coercive("coercivity tau_m(A):A >= 2 mu |A|^2");
  Tally growth("growth |tau_m(A)| <= tau_y + 2 mu |A|");
  Tally newton_bound("Newtonian-branch bound |tau_m(A)| <= m/(m-1) tau_y");
  Tally mono("monotonicity gap >= 2 mu |A-B|^2");
  Tally case1("Case 1 gap = 2 m mu |A-B|^2");
  Tally bmono("Bingham monotonicity gap >= 2 mu |A-B|^2");
  Tally cont("branch continuity at gamma_m");
  Tally plastic("plastic branch equals Bingham stress exactly");
  Tally limit("pointwise limit for growing m");
  long combos[4] = {0, 0, 0, 0};

  for (long k = 0; k < opt.pairs; ++k) {
    const FluidParams p = s.params();
    const RegIndex r = s.reg();
    const double gm = gamma_m(p, r);
    const int combo = static_cast<int>(k % 4);  // NN, NP, PN, PP
    const bool a_newton = combo < 2;
    const bool b_newton = combo % 2 == 0;
    ++combos[combo];
    const SymTensor2 a = s.on_branch(a_newton, gm);
    const SymTensor2 b = s.on_branch(b_newton, gm);

    for (const SymTensor2& x : {a, b}) {
      const SymTensor2 t = biviscosity_stress(x, p, r);
      const double n = tensor_norm(x);
      coercive.le(2.0 * p.mu() * n * n, contract(t, x));
      growth.le(tensor_norm(t), p.tau_y() + 2.0 * p.mu() * n);
      if (n <= gm) newton_bound.le(tensor_norm(t), newtonian_branch_stress_bound(p, r));
      if (n > gm) {
        const StressResult bs = bingham_stress(x, p);
        plastic.exact(bs.kind == YieldState::Yielded && bs.stress && *bs.stress == t);
      }
    }
    const SymTensor2 diff = a - b;
    const double dn2 = contract(diff, diff);
    const double gap = monotonicity_gap(a, b, p, r);
    mono.le(2.0 * p.mu() * dn2, gap);
    if (tensor_norm(a) <= gm && tensor_norm(b) <= gm) {
      case1.close(gap, 2.0 * r.m() * p.mu() * dn2, 1e-12);
    }
    if (!a.is_zero() && !b.is_zero()) {
      bmono.le(2.0 * p.mu() * dn2, bingham_monotonicity_gap(a, b, p));
    }

    // Both branch formulas at a tensor of norm gamma_m.
    if (gm > 0.0) {
      const SymTensor2 d = s.with_norm(gm);
      const double n = tensor_norm(d);
      const SymTensor2 newton = (2.0 * r.m() * p.mu()) * d;
      const SymTensor2 plast = (2.0 * p.mu() + p.tau_y() / n) * d;
      cont.le(tensor_norm(newton - plast), 1e-12 * tensor_norm(newton), 0.0);
    }

    // Fixed nonzero d: once gamma_m < |d| the regularized stress is the Bingham one.
    if (k % 16 == 0 && !a.is_zero()) {
      const StressResult bs = bingham_stress(a, p);
      for (double m = 2.0; m <= 1e6; m *= 4.0) {
        const RegIndex rm(m);
        if (gamma_m(p, rm) < tensor_norm(a)) {
          limit.exact(biviscosity_stress(a, p, rm) == *bs.stress);
        }
      }
    }
  }

  std::vector<CheckResult> out{coercive.done(), growth.done(), newton_bound.done(), mono.done(),
                               case1.done(),    bmono.done(),  cont.done(),         plastic.done(),
                               limit.done()};
  std::ostringstream os;
  os << "pairs by branch (NN/NP/PN/PP): " << combos[0] << "/" << combos[1] << "/" << combos[2]
     << "/" << combos[3];
  out[3].detail = os.str();
  return out;
}

std::vector<CheckResult> oracle_checks(const SuiteOptions& opt) {
  Sampler s(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  Tally quad("channel closed form vs quadrature (1e-10 of max)");
  Tally walls("channel wall value 0");
  Tally newton("tau_y = 0 channel is the parabola");
  for (int k = 0; k < opt.oracle_parameter_sets; ++k) {
    const double mu = s.log_uniform(0.1, 10.0);
    const double h = s.log_uniform(0.2, 5.0);
    const double g = s.log_uniform(0.1, 10.0);
    // Keep the yield stress below the wall stress so the core is finite.
    const double tau = s.uniform(0.0, 0.9) * std::numbers::sqrt2 * g * h;
    const FluidParams p(mu, tau);
    const RegIndex r(s.log_uniform(2.0, 200.0));
    const double umax = channel_oracle(0.0, g, h, p, r);
    for (int i = 0; i < opt.oracle_points; ++i) {
      const double y = -h + 2.0 * h * (i + 0.5) / opt.oracle_points;
      const double a = channel_oracle(y, g, h, p, r);
      const double b = channel_oracle_quadrature(y, g, h, p, r);
      ++quad.r.samples;
      const double err = std::abs(a - b) / umax;
      quad.r.worst = std::max(quad.r.worst, err);
      if (err > 1e-10) ++quad.r.violations;
    }
    walls.exact(channel_oracle(h, g, h, p, r) == 0.0 && channel_oracle(-h, g, h, p, r) == 0.0);
    const FluidParams pn(mu, 0.0);
    const double peak = g * h * h / (2.0 * mu);
    for (int i = 0; i <= 10; ++i) {
      const double y = std::clamp(-h + 0.2 * h * i, -h, h);
      const double err = std::abs(channel_oracle(y, g, h, pn, r) - g / (2.0 * mu) * (h * h - y * y));
      newton.le(err, 1e-13 * peak, 0.0);
    }
  }
  return {quad.done(), walls.done(), newton.done()};
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  for (const CheckResult& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %-52s samples=%-8ld violations=%-4ld worst=%.3e",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.samples, c.violations, c.worst);
    os << buf;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace bingham
