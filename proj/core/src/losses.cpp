#include "rose/losses.hpp"

#include "rose/error.hpp"

#include <algorithm>
#include <cmath>

namespace rose {

namespace {

// Tukey biweight, c = t0.
struct Tukey {
  double c;
  double value(double t) const {
    const double c2 = c * c;
    if (std::fabs(t) > c) return c2 / 6.0;
    const double u = 1.0 - (t / c) * (t / c);
    return c2 / 6.0 * (1.0 - u * u * u);
  }
  double d1(double t) const {
    if (std::fabs(t) > c) return 0.0;
    const double u = 1.0 - (t / c) * (t / c);
    return t * u * u;
  }
  double d2(double t) const {
    if (std::fabs(t) > c) return 0.0;
    const double s = (t / c) * (t / c);
    return (1.0 - s) * (1.0 - 5.0 * s);
  }
  double d3(double t) const {
    if (std::fabs(t) > c) return 0.0;
    const double s = (t / c) * (t / c);
    return -(4.0 * t / (c * c)) * (3.0 - 5.0 * s);
  }
};

struct PseudoHuber {
  double d;
  double value(double t) const {
    const double u = t / d;
    return d * d * (std::sqrt(1.0 + u * u) - 1.0);
  }
  double d1(double t) const {
    const double u = t / d;
    return t / std::sqrt(1.0 + u * u);
  }
  double d2(double t) const {
    const double u = t / d;
    const double q = 1.0 + u * u;
    return 1.0 / (q * std::sqrt(q));
  }
  double d3(double t) const {
    const double u = t / d;
    const double q = 1.0 + u * u;
    return -(3.0 * t / (d * d)) / (q * q * std::sqrt(q));
  }
};

struct Huber {
  double d;
  double value(double t) const {
    const double a = std::fabs(t);
    return a <= d ? 0.5 * t * t : d * a - 0.5 * d * d;
  }
  double d1(double t) const {
    if (t > d) return d;
    if (t < -d) return -d;
    return t;
  }
  // Closed-ball convention at |t| = d.
  double d2(double t) const { return std::fabs(t) <= d ? 1.0 : 0.0; }
  double d3(double) const { return 0.0; }
};

struct Squared {
  double value(double t) const { return 0.5 * t * t; }
  double d1(double t) const { return t; }
  double d2(double) const { return 1.0; }
  double d3(double) const { return 0.0; }
};

template <class F>
decltype(auto) visit(const LossSpec& spec, F&& f) {
  switch (spec.family) {
    case LossFamily::Tukey: return f(Tukey{spec.tuning});
    case LossFamily::PseudoHuber: return f(PseudoHuber{spec.tuning});
    case LossFamily::Huber: return f(Huber{spec.tuning});
    case LossFamily::Squared: break;
  }
  return f(Squared{});
}

}  // namespace

double LossSpec::default_tuning(LossFamily family) {
  switch (family) {
    case LossFamily::Tukey: return kDefaultTukeyTuning;
    case LossFamily::PseudoHuber:
    case LossFamily::Huber: return kDefaultHuberTuning;
    case LossFamily::Squared: break;
  }
  return 1.0;
}

void LossSpec::validate() const {
  if (family != LossFamily::Squared && !(tuning > 0.0 && std::isfinite(tuning))) {
    throw Error(ErrorKind::InvalidArgument, "loss tuning constant must be positive");
  }
}

std::string_view loss_name(LossFamily family) {
  switch (family) {
    case LossFamily::Tukey: return "tukey";
    case LossFamily::PseudoHuber: return "pseudo_huber";
    case LossFamily::Huber: return "huber";
    case LossFamily::Squared: return "squared";
  }
  return "squared";
}

std::optional<LossFamily> parse_loss_family(std::string_view name) {
  for (LossFamily f : {LossFamily::Tukey, LossFamily::PseudoHuber, LossFamily::Huber,
                       LossFamily::Squared}) {
    if (loss_name(f) == name) return f;
  }
  return std::nullopt;
}

double loss_value(const LossSpec& spec, double t) {
  return visit(spec, [t](const auto& l) { return l.value(t); });
}
double loss_d1(const LossSpec& spec, double t) {
  return visit(spec, [t](const auto& l) { return l.d1(t); });
}
double loss_d2(const LossSpec& spec, double t) {
  return visit(spec, [t](const auto& l) { return l.d2(t); });
}
double loss_d3(const LossSpec& spec, double t) {
  return visit(spec, [t](const auto& l) { return l.d3(t); });
}

Vector loss_value(const LossSpec& spec, const Vector& t) {
  return visit(spec, [&t](const auto& l) {
    return Vector(t.unaryExpr([&l](double v) { return l.value(v); }));
  });
}
Vector loss_d1(const LossSpec& spec, const Vector& t) {
  return visit(spec, [&t](const auto& l) {
    return Vector(t.unaryExpr([&l](double v) { return l.d1(v); }));
  });
}
Vector loss_d2(const LossSpec& spec, const Vector& t) {
  return visit(spec, [&t](const auto& l) {
    return Vector(t.unaryExpr([&l](double v) { return l.d2(v); }));
  });
}

LossAuditReport assumption_audit(const LossSpec& spec, std::span<const double> grid) {
  LossAuditReport r;
  visit(spec, [&](const auto& l) {
    for (double t : grid) {
      const double g = l.d1(t);
      r.grid_max_abs_d1_times_t = std::max(r.grid_max_abs_d1_times_t, std::fabs(g * t));
      r.grid_max_abs_d1 = std::max(r.grid_max_abs_d1, std::fabs(g));
      r.grid_max_abs_d2 = std::max(r.grid_max_abs_d2, std::fabs(l.d2(t)));
      r.grid_max_abs_d3 = std::max(r.grid_max_abs_d3, std::fabs(l.d3(t)));
      r.odd_symmetry_violation = std::max(r.odd_symmetry_violation, std::fabs(g + l.d1(-t)));
      if (t > 0.0) r.nonneg_d1_on_pos_violation = std::max(r.nonneg_d1_on_pos_violation, -g);
    }
    return 0;
  });
  return r;
}

}  // namespace rose
