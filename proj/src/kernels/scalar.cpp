#include <cmath>

#include "internal.hpp"

namespace atomgrape::kernels::detail {

// Per lane the running propagator is kept in SU(2) form [[a, b], [-b*, a*]];
// a segment with elements C, S has a = C*, b = -i S*.
void propagate_lanes_scalar(const LaneArgs& args) {
  for (std::size_t lane = 0; lane < args.n_lanes; ++lane) {
    const double delta = args.detuning[lane];
    const double scale = args.coupling_scale[lane];
    double ar = 1.0, ai = 0.0, br = 0.0, bi = 0.0;
    for (std::size_t k = 0; k < args.n_segments; ++k) {
      const double rabi = scale * args.rabi[k];
      const double eff = std::sqrt(rabi * rabi + delta * delta);
      if (eff == 0.0) continue;
      const double h = 0.5 * eff * args.duration[k];
      const double sn = std::sin(h);
      const double cs = std::cos(h);
      const double z = delta / eff * sn;
      const double m = rabi / eff * sn;
      // segment a = cs - i z; b = -i m e^{-i phi} = -m (sin phi + i cos phi)
      const double sar = cs, sai = -z;
      const double sbr = -m * args.sin_phase[k], sbi = -m * args.cos_phase[k];
      // a' = sa a - sb conj(b); b' = sa b + sb conj(a)
      const double nar = (sar * ar - sai * ai) - (sbr * br + sbi * bi);
      const double nai = (sar * ai + sai * ar) - (sbi * br - sbr * bi);
      const double nbr = (sar * br - sai * bi) + (sbr * ar + sbi * ai);
      const double nbi = (sar * bi + sai * br) + (sbi * ar - sbr * ai);
      ar = nar;
      ai = nai;
      br = nbr;
      bi = nbi;
    }
    // C = conj(a), S = -i conj(b)
    args.c_out[lane] = {ar, -ai};
    args.s_out[lane] = {-bi, -br};
  }
}

void sincos_scalar(const double* x, double* s, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

}  // namespace atomgrape::kernels::detail
