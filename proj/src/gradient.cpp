#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "atomgrape/errors.hpp"
#include "atomgrape/grape.hpp"
#include "atomgrape/parallel.hpp"
#include "atomgrape/units.hpp"

namespace atomgrape {

namespace {

constexpr ComplexPair kI{0.0, 1.0};

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

Mat2 scaled(const Mat2& a, ComplexPair s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

// Max absolute row sum.
double norm_inf(const Mat2& a) {
  return std::max(std::abs(a[0]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[3]));
}

constexpr Mat2 kIdentity{ComplexPair{1.0}, ComplexPair{0.0}, ComplexPair{0.0}, ComplexPair{1.0}};
constexpr Mat2 kZero{};

// exp of the block matrix [[A, B_1, ..., B_m], ...] restricted to the pairs
// [[A, B_j], [0, A]]: returns exp(A) and the upper-right block for every B_j.
// Powers of the block-triangular matrix satisfy
//   [[A, B], [0, A]]^n = [[A^n, D_n], [0, A^n]],  D_{n+1} = A D_n + B A^n,
// so the Taylor series and the squaring phase only need 2x2 products.
template <std::size_t M>
void block_expm(const Mat2& a_in, const std::array<Mat2, M>& b_in, Mat2& exp_out,
                std::array<Mat2, M>& deriv_out) {
  double norm = norm_inf(a_in);
  for (const auto& b : b_in) norm = std::max(norm, norm_inf(a_in) + norm_inf(b));
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const double scale = std::ldexp(1.0, -squarings);

  const Mat2 a = scaled(a_in, scale);
  std::array<Mat2, M> b;
  for (std::size_t j = 0; j < M; ++j) b[j] = scaled(b_in[j], scale);

  Mat2 term_a = kIdentity;  // A^n / n!
  std::array<Mat2, M> term_d;  // D_n / n!
  term_d.fill(kZero);
  Mat2 e = kIdentity;
  std::array<Mat2, M> l;
  l.fill(kZero);
  for (int n = 0; n < 30; ++n) {
    const double inv = 1.0 / static_cast<double>(n + 1);
    double size = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      term_d[j] = scaled(add(mul(a, term_d[j]), mul(b[j], term_a)), inv);
      l[j] = add(l[j], term_d[j]);
      size = std::max(size, norm_inf(term_d[j]));
    }
    term_a = scaled(mul(a, term_a), inv);
    e = add(e, term_a);
    size = std::max(size, norm_inf(term_a));
    if (size < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) {
    for (std::size_t j = 0; j < M; ++j) l[j] = add(mul(e, l[j]), mul(l[j], e));
    e = mul(e, e);
  }
  exp_out = e;
  deriv_out = l;
}

// -i dt H for H = delta/2 sz + scale/2 (c1 sx + c2 sy)
Mat2 generator(double delta, double scale, double c1, double c2, double dt) {
  const ComplexPair off_lower{scale * c1, scale * c2};  // (H)_{21} * 2
  const Mat2 h{ComplexPair{0.5 * delta}, 0.5 * std::conj(off_lower), 0.5 * off_lower,
               ComplexPair{-0.5 * delta}};
  return scaled(h, -kI * dt);
}

struct MemberGradient {
  double fidelity = 0.0;
  std::vector<double> d_c1;
  std::vector<double> d_c2;
};

MemberGradient member_gradient(const std::vector<double>& c1, const std::vector<double>& c2,
                               double dt, const EnsembleMember& member, FidelityKind kind) {
  const std::size_t n = c1.size();
  const double s = member.coupling_scale;
  const Mat2 sx{ComplexPair{0.0}, ComplexPair{1.0}, ComplexPair{1.0}, ComplexPair{0.0}};
  const Mat2 sy{ComplexPair{0.0}, -kI, kI, ComplexPair{0.0}};
  const std::array<Mat2, 2> directions{scaled(sx, -kI * (0.5 * s * dt)),
                                       scaled(sy, -kI * (0.5 * s * dt))};

  std::vector<Mat2> u(n);
  std::vector<std::array<Mat2, 2>> du(n);
  for (std::size_t k = 0; k < n; ++k) {
    block_expm(generator(member.detuning_offset, s, c1[k], c2[k], dt), directions, u[k], du[k]);
  }

  // forward[k] = U_{k-1} ... U_0 |1>
  std::vector<std::array<ComplexPair, 2>> forward(n + 1);
  forward[0] = {ComplexPair{1.0}, ComplexPair{0.0}};
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = forward[k];
    forward[k + 1] = {u[k][0] * p[0] + u[k][1] * p[1], u[k][2] * p[0] + u[k][3] * p[1]};
  }
  const ComplexPair overlap = forward[n][1];

  MemberGradient g;
  g.d_c1.assign(n, 0.0);
  g.d_c2.assign(n, 0.0);
  switch (kind) {
    case FidelityKind::RealOverlap:
      g.fidelity = overlap.real();
      break;
    case FidelityKind::ImagOverlap:
      g.fidelity = overlap.imag();
      break;
    case FidelityKind::SquareOverlap:
      g.fidelity = std::norm(overlap);
      break;
  }

  // back = (U_{n-1} ... U_{k+1})^dagger |2>, walked from the end
  std::array<ComplexPair, 2> back{ComplexPair{0.0}, ComplexPair{1.0}};
  for (std::size_t k = n; k-- > 0;) {
    const auto& psi = forward[k];
    for (std::size_t ch = 0; ch < 2; ++ch) {
      const Mat2& d = du[k][ch];
      const ComplexPair v0 = d[0] * psi[0] + d[1] * psi[1];
      const ComplexPair v1 = d[2] * psi[0] + d[3] * psi[1];
      const ComplexPair d_overlap = std::conj(back[0]) * v0 + std::conj(back[1]) * v1;
      double df = 0.0;
      switch (kind) {
        case FidelityKind::RealOverlap:
          df = d_overlap.real();
          break;
        case FidelityKind::ImagOverlap:
          df = d_overlap.imag();
          break;
        case FidelityKind::SquareOverlap:
          df = 2.0 * (std::conj(overlap) * d_overlap).real();
          break;
      }
      (ch == 0 ? g.d_c1 : g.d_c2)[k] = df;
    }
    const Mat2& uk = u[k];
    back = {std::conj(uk[0]) * back[0] + std::conj(uk[2]) * back[1],
            std::conj(uk[1]) * back[0] + std::conj(uk[3]) * back[1]};
  }
  return g;
}

double require_uniform(const PulseWaveform& pulse) {
  pulse.validate();
  const double dt = uniform_slice_duration(pulse);
  if (dt == 0.0) throw ValidationError("gradient requires uniformly sliced pulses; discretize first");
  return dt;
}

}  // namespace

ExpDerivative expm_directional(const Mat2& a, const Mat2& b) {
  ExpDerivative out;
  std::array<Mat2, 1> d;
  block_expm(a, std::array<Mat2, 1>{b}, out.exp, d);
  out.derivative = d[0];
  return out;
}

std::string_view parameterization_name(ControlParameterization p) {
  return p == ControlParameterization::PhaseOnly ? "phase_only" : "cartesian";
}

ControlParameterization parse_parameterization(std::string_view text) {
  if (text == "phase_only" || text == "PhaseOnly" || text == "phase") return ControlParameterization::PhaseOnly;
  if (text == "cartesian" || text == "Cartesian") return ControlParameterization::Cartesian;
  throw ValidationError("unknown parameterization '" + std::string(text) + "' (phase_only|cartesian)");
}

std::vector<double> controls_of(const PulseWaveform& pulse, ControlParameterization p) {
  const std::size_t n = pulse.segments.size();
  if (p == ControlParameterization::PhaseOnly) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = pulse.segments[k].phase;
    return out;
  }
  std::vector<double> out(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = pulse.segments[k];
    out[k] = s.rabi * std::cos(s.phase);
    out[n + k] = s.rabi * std::sin(s.phase);
  }
  return out;
}

PulseWaveform with_controls(const PulseWaveform& pulse, std::span<const double> controls,
                            ControlParameterization p) {
  const std::size_t n = pulse.segments.size();
  const std::size_t expected = p == ControlParameterization::PhaseOnly ? n : 2 * n;
  if (controls.size() != expected) {
    throw ValidationError(fmt::format("with_controls: expected {} controls, got {}", expected, controls.size()));
  }
  PulseWaveform out = pulse;
  for (std::size_t k = 0; k < n; ++k) {
    if (p == ControlParameterization::PhaseOnly) {
      out.segments[k].phase = controls[k];
    } else {
      out.segments[k].rabi = std::hypot(controls[k], controls[n + k]);
      out.segments[k].phase = std::atan2(controls[n + k], controls[k]);
    }
  }
  return out;
}

FidelityAndGradient fidelity_gradient(const PulseWaveform& pulse, const Ensemble& ensemble,
                                      FidelityKind kind, ControlParameterization p) {
  const double dt = require_uniform(pulse);
  ensemble.validate();
  const std::size_t n = pulse.segments.size();
  std::vector<double> c1(n), c2(n);
  for (std::size_t k = 0; k < n; ++k) {
    c1[k] = pulse.segments[k].rabi * std::cos(pulse.segments[k].phase);
    c2[k] = pulse.segments[k].rabi * std::sin(pulse.segments[k].phase);
  }

  const auto& members = ensemble.members;
  std::vector<MemberGradient> per_member(members.size());
  parallel_chunks(members.size(), 4, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) per_member[i] = member_gradient(c1, c2, dt, members[i], kind);
  });

  std::vector<double> g1(n, 0.0), g2(n, 0.0);
  FidelityAndGradient out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double w = members[i].weight;
    out.fidelity += w * per_member[i].fidelity;
    for (std::size_t k = 0; k < n; ++k) {
      g1[k] += w * per_member[i].d_c1[k];
      g2[k] += w * per_member[i].d_c2[k];
    }
  }

  if (p == ControlParameterization::Cartesian) {
    out.gradient = std::move(g1);
    out.gradient.insert(out.gradient.end(), g2.begin(), g2.end());
  } else {
    out.gradient.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& s = pulse.segments[k];
      out.gradient[k] = s.rabi * (std::cos(s.phase) * g2[k] - std::sin(s.phase) * g1[k]);
    }
  }
  return out;
}

PenaltyValue penalty(const PulseWaveform& pulse, const OptimizationConfig& config) {
  const double dt = require_uniform(pulse);
  const std::size_t n = pulse.segments.size();
  std::vector<double> c1(n), c2(n), g1(n, 0.0), g2(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    c1[k] = pulse.segments[k].rabi * std::cos(pulse.segments[k].phase);
    c2[k] = pulse.segments[k].rabi * std::sin(pulse.segments[k].phase);
  }

  PenaltyValue out;
  const double w_amp = config.penalty_amplitude_weight;
  if (w_amp > 0.0 && config.amplitude_cap > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const double rabi = pulse.segments[k].rabi;
      const double excess = rabi - config.amplitude_cap;
      if (excess <= 0.0) continue;
      out.value += w_amp * excess * excess * dt;
      const double d_rabi = 2.0 * w_amp * excess * dt;
      g1[k] += d_rabi * c1[k] / rabi;
      g2[k] += d_rabi * c2[k] / rabi;
    }
  }
  const double w_smooth = config.penalty_smoothness_weight;
  if (w_smooth > 0.0) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double d1 = c1[k + 1] - c1[k];
      const double d2 = c2[k + 1] - c2[k];
      out.value += w_smooth * (d1 * d1 + d2 * d2);
      g1[k + 1] += 2.0 * w_smooth * d1;
      g1[k] -= 2.0 * w_smooth * d1;
      g2[k + 1] += 2.0 * w_smooth * d2;
      g2[k] -= 2.0 * w_smooth * d2;
    }
  }

  if (config.parameterization == ControlParameterization::Cartesian) {
    out.gradient = std::move(g1);
    out.gradient.insert(out.gradient.end(), g2.begin(), g2.end());
  } else {
    // amplitude is fixed, so only the phase direction of the Cartesian gradient survives
    out.gradient.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.gradient[k] = c1[k] * g2[k] - c2[k] * g1[k];
  }
  return out;
}

PulseWaveform random_phase_pulse(double duration, double rabi, std::size_t n_slices,
                                 std::uint64_t seed) {
  PulseWaveform pulse = flat_pulse(duration, rabi, n_slices);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (auto& s : pulse.segments) s.phase = phase(rng);
  return pulse;
}

}  // namespace atomgrape
