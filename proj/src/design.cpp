#include "twoslit/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "twoslit/error.hpp"
#include "twoslit/parallel.hpp"
#include "twoslit/random.hpp"
#include "twoslit/wavemodel.hpp"

namespace twoslit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketLo = 1e-6;
constexpr double kBracketHi = 2e-3;
constexpr double kBisectTol = 1e-9;
constexpr std::size_t kSamplingGrid = 201;
constexpr std::size_t kSweepGrid = 121;
constexpr std::uint64_t kSearchSalt = 0x5ea7c4;

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

double limit_or_inf(const Apparatus& app, double x, Slit slit) {
  try {
    return limiting_half_width(app, x, slit);
  } catch (const Error& e) {
    if (e.code() != Errc::no_bracket) {
      throw;
    }
    return kInf;
  }
}

double mirror_footprint(const Apparatus& app, const MirrorPlacement& m) {
  // Extend S_i -> M_i to the screen line y = L.
  auto project = [&](Slit slit, Point2 end) {
    const Point2 s = slit_position(app, slit);
    return s.x + (end.x - s.x) * (app.L - s.y) / (end.y - s.y);
  };
  return std::abs(project(Slit::one, m.end1) - project(Slit::two, m.end2));
}

double draw(const Interval& iv, Rng& rng) {
  const double u = uniform01(rng);
  return iv.lo == iv.hi ? iv.lo : iv.lo + u * (iv.hi - iv.lo);
}

}  // namespace

MirrorDefaults default_mirror_params(const Apparatus& app) {
  return {fringe_spacing(app) / 7.0, std::numbers::pi / 4};
}

SamplingResult sampling_constraint(const Apparatus& app, double x0) {
  const double fs = fringe_spacing(app);
  if (!(x0 > 2.0 * fs)) {
    throw Error(Errc::x0_too_small, fmt::format("scan extent {} m must exceed 2 F_s = {} m", x0, 2.0 * fs));
  }
  double worst = 0.0;
  for (double x : linspace(0.0, x0, kSamplingGrid)) {
    worst = std::max(worst, mirror_footprint(app, mirror_placement(app, x)));
  }
  return {worst < fs / 2, worst};
}

double limiting_half_width(const Apparatus& app, double x, Slit slit) {
  const DetectorLayout layout = detector_layout(app, x);
  auto margin = [&](double half_width) {
    const MirrorPlacement m = mirror_placement(app, x, 2.0 * half_width);
    const Point2 probe = slit == Slit::one ? m.end1 : m.end2;
    const ClearanceAngles c = clearance_angles(app, m, layout, probe);
    return slit == Slit::one ? c.delta1 : c.delta2;
  };

  double lo = kBracketLo;
  double hi = kBracketHi;
  double f_lo = margin(lo);
  const double f_hi = margin(hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(Errc::no_bracket,
                fmt::format("clearance for slit {} at x = {} m does not bind for half-widths in "
                            "[{}, {}] m; width is limited by w'",
                            static_cast<int>(slit), x, kBracketLo, kBracketHi));
  }
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = margin(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double required_mirror_width(const Apparatus& app) {
  return required_mirror_width(app, default_mirror_params(app).w_prime);
}

double required_mirror_width(const Apparatus& app, double w_prime) {
  const double fs = fringe_spacing(app);
  const double w1 = limit_or_inf(app, 3.0 * fs, Slit::one);
  const double w2 = limit_or_inf(app, 0.0, Slit::two);
  return 2.0 * std::min({w_prime / 2, w1, w2});
}

DesignReport validate(const Apparatus& app) { return validate(app, 3.0 * fringe_spacing(app)); }

DesignReport validate(const Apparatus& app, double x_max) {
  check(app);
  DesignReport report;
  report.warnings = regime_warnings(app);
  report.F_s = fringe_spacing(app);
  report.x_max = x_max;
  report.w_prime = default_mirror_params(app).w_prime;

  report.diaphragm_clear = true;
  const std::vector<double> grid = linspace(-x_max, x_max, kSweepGrid);
  for (double x : grid) {
    if (!reflected_rays_clear_diaphragm(app, x)) {
      report.diaphragm_clear = false;
      report.warnings.push_back(fmt::format("reflected central ray returns to the diaphragm at x = {} m", x));
      break;
    }
  }
  if (!reflected_rays_clear_diaphragm(app, 0.0) || !reflected_rays_clear_diaphragm(app, 3.0 * report.F_s)) {
    // Without a detector layout at the probe positions nothing below is defined.
    report.diaphragm_clear = false;
    report.misdetection_free = false;
    report.sampling_ok = false;
    return report;
  }

  report.w1_limit = limit_or_inf(app, 3.0 * report.F_s, Slit::one);
  report.w2_limit = limit_or_inf(app, 0.0, Slit::two);
  if (std::isinf(report.w1_limit)) {
    report.warnings.emplace_back("slit 1 clearance never binds; w1 is unbounded");
  }
  if (std::isinf(report.w2_limit)) {
    report.warnings.emplace_back("slit 2 clearance never binds; w2 is unbounded");
  }
  report.required_w = 2.0 * std::min({report.w_prime / 2, report.w1_limit, report.w2_limit});
  report.L12 = detector_separation(app, 0.0).exact;
  if (app.w > report.required_w * (1.0 + 1e-9)) {
    report.warnings.push_back(
        fmt::format("mirror width {} m exceeds the required width {} m", app.w, report.required_w));
  }

  if (x_max > 2.0 * report.F_s) {
    const SamplingResult sampling = sampling_constraint(app, x_max);
    report.sampling_ok = sampling.ok;
    report.max_projection = sampling.max_projection;
  } else {
    report.sampling_ok = false;
    report.warnings.push_back(
        fmt::format("scan extent {} m does not exceed 2 F_s = {} m", x_max, 2.0 * report.F_s));
  }

  report.misdetection_free = true;
  for (double x : grid) {
    if (!reflected_rays_clear_diaphragm(app, x)) {
      report.misdetection_free = false;
      break;
    }
    const MirrorPlacement m = mirror_placement(app, x);
    const DetectorLayout layout = detector_layout(app, x);
    for (Point2 p : {m.end2, m.center, m.end1}) {
      const ClearanceAngles c = clearance_angles(app, m, layout, p);
      if (!(c.delta1 > 0.0 && c.delta2 < 0.0)) {
        report.misdetection_free = false;
      }
    }
    if (!report.misdetection_free) {
      report.warnings.push_back(fmt::format("mis-detection possible with the mirror at x = {} m", x));
      break;
    }
  }
  return report;
}

SearchSpace SearchSpace::paper_point() {
  const Apparatus p = Apparatus::paper_defaults();
  return {{p.lambda, p.lambda}, {p.d, p.d}, {p.L, p.L}, {p.theta, p.theta},
          {p.L1, p.L1},         {p.a, p.a}, std::nullopt, p.s};
}

void check(const SearchSpace& space) {
  auto interval = [](const char* name, const Interval& iv) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo <= 0.0 || iv.lo > iv.hi) {
      throw Error(Errc::invalid_argument,
                  fmt::format("search interval {} = [{}, {}] must be positive and ordered", name, iv.lo, iv.hi));
    }
  };
  interval("lambda", space.lambda);
  interval("d", space.d);
  interval("L", space.L);
  interval("theta", space.theta);
  interval("L0", space.L0);
  interval("a", space.a);
  if (space.theta.hi >= std::numbers::pi / 2) {
    throw Error(Errc::invalid_argument, "search interval theta must stay below pi/2");
  }
  if (space.x_max && !(*space.x_max > 0.0)) {
    throw Error(Errc::invalid_argument, "search x_max must be positive");
  }
  if (!(space.s > 0.0)) {
    throw Error(Errc::invalid_argument, "search slit width must be positive");
  }
}

SearchResult design_search(const SearchSpace& space, std::size_t samples, std::uint64_t seed) {
  check(space);
  if (samples == 0) {
    throw Error(Errc::invalid_argument, "design search needs at least one sample");
  }

  std::vector<Apparatus> candidates(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = make_substream(seed, i, kSearchSalt);
    Apparatus& c = candidates[i];
    c.lambda = draw(space.lambda, rng);
    c.d = draw(space.d, rng);
    c.L = draw(space.L, rng);
    c.theta = draw(space.theta, rng);
    c.L1 = c.L2 = draw(space.L0, rng);
    c.a = draw(space.a, rng);
    c.s = space.s;
  }

  std::vector<std::optional<DesignReport>> reports(samples);
  parallel_for(samples, [&](std::size_t i) {
    Apparatus& c = candidates[i];
    try {
      c.w = required_mirror_width(c);
      DesignReport r = space.x_max ? validate(c, *space.x_max) : validate(c);
      if (r.passed()) {
        reports[i] = std::move(r);
      }
    } catch (const Error&) {
      // Geometrically impossible candidates are simply infeasible.
    }
  });

  SearchResult result;
  result.evaluated = samples;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < samples; ++i) {
    if (!reports[i]) {
      continue;
    }
    ++result.feasible;
    if (!best || reports[i]->L12 > reports[*best]->L12) {
      best = i;
    }
  }
  if (best) {
    result.best = candidates[*best];
    result.report = *reports[*best];
  }
  return result;
}

}  // namespace twoslit
