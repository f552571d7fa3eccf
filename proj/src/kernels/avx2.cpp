#include <immintrin.h>

#include "internal.hpp"

namespace atomgrape::kernels::detail {

namespace {

// Cephes-style sin/cos: reduction by multiples of pi/4 with a three-part
// Cody-Waite constant, then minimax polynomials on [-pi/4, pi/4].
constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;

constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                            2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                            8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                            -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                            -1.38888888888730564116e-3,  4.16666666666665929218e-2};

inline __m256d poly5(__m256d x, const double (&c)[6]) {
  __m256d r = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(c[i]));
  return r;
}

inline void sincos_pd(__m256d x, __m256d& sin_out, __m256d& cos_out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d input_sign = _mm256_and_pd(x, sign_mask);
  const __m256d ax = _mm256_andnot_pd(sign_mask, x);

  // octant index y, rounded up to even, and j = y mod 8
  __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d odd = _mm256_sub_pd(y, _mm256_mul_pd(two, _mm256_floor_pd(_mm256_mul_pd(y, half))));
  y = _mm256_add_pd(y, odd);
  const __m256d eighth = _mm256_set1_pd(0.125);
  const __m256d j = _mm256_sub_pd(y, _mm256_mul_pd(_mm256_set1_pd(8.0), _mm256_floor_pd(_mm256_mul_pd(y, eighth))));

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  // sin-type and cos-type polynomial values on the reduced argument
  const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly5(zz, kSin), z);
  const __m256d pc = _mm256_add_pd(
      _mm256_fnmadd_pd(half, zz, _mm256_set1_pd(1.0)),
      _mm256_mul_pd(_mm256_mul_pd(zz, zz), poly5(zz, kCos)));

  const __m256d j2 = _mm256_cmp_pd(j, two, _CMP_EQ_OQ);
  const __m256d j4 = _mm256_cmp_pd(j, _mm256_set1_pd(4.0), _CMP_EQ_OQ);
  const __m256d j6 = _mm256_cmp_pd(j, _mm256_set1_pd(6.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(j2, j6);

  __m256d s = _mm256_blendv_pd(ps, pc, swap);
  __m256d c = _mm256_blendv_pd(pc, ps, swap);

  // sin is negative for octants 4 and 6, cos for octants 2 and 4
  const __m256d sin_neg = _mm256_and_pd(_mm256_or_pd(j4, j6), sign_mask);
  const __m256d cos_neg = _mm256_and_pd(_mm256_or_pd(j2, j4), sign_mask);
  s = _mm256_xor_pd(s, _mm256_xor_pd(sin_neg, input_sign));
  c = _mm256_xor_pd(c, cos_neg);
  sin_out = s;
  cos_out = c;
}

}  // namespace

void propagate_lanes_avx2(const LaneArgs& args) {
  constexpr std::size_t kWidth = 4;
  const std::size_t full = args.n_lanes - args.n_lanes % kWidth;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  for (std::size_t lane = 0; lane < full; lane += kWidth) {
    const __m256d delta = _mm256_loadu_pd(args.detuning + lane);
    const __m256d scale = _mm256_loadu_pd(args.coupling_scale + lane);
    const __m256d delta2 = _mm256_mul_pd(delta, delta);
    __m256d ar = one, ai = zero, br = zero, bi = zero;

    for (std::size_t k = 0; k < args.n_segments; ++k) {
      const __m256d rabi = _mm256_mul_pd(scale, _mm256_set1_pd(args.rabi[k]));
      const __m256d eff = _mm256_sqrt_pd(_mm256_fmadd_pd(rabi, rabi, delta2));
      const __m256d live = _mm256_cmp_pd(eff, zero, _CMP_GT_OQ);
      const __m256d inv = _mm256_and_pd(_mm256_div_pd(one, eff), live);
      __m256d sn, cs;
      sincos_pd(_mm256_mul_pd(_mm256_mul_pd(half, eff), _mm256_set1_pd(args.duration[k])), sn, cs);
      // Lanes with zero field evolve trivially: cs = 1, sn = 0.
      cs = _mm256_blendv_pd(one, cs, live);
      sn = _mm256_and_pd(sn, live);

      const __m256d z = _mm256_mul_pd(_mm256_mul_pd(delta, inv), sn);
      const __m256d m = _mm256_mul_pd(_mm256_mul_pd(rabi, inv), sn);
      const __m256d sar = cs;
      const __m256d sai = _mm256_sub_pd(zero, z);
      const __m256d sbr = _mm256_mul_pd(_mm256_sub_pd(zero, m), _mm256_set1_pd(args.sin_phase[k]));
      const __m256d sbi = _mm256_mul_pd(_mm256_sub_pd(zero, m), _mm256_set1_pd(args.cos_phase[k]));

      const __m256d nar = _mm256_sub_pd(_mm256_fmsub_pd(sar, ar, _mm256_mul_pd(sai, ai)),
                                        _mm256_fmadd_pd(sbr, br, _mm256_mul_pd(sbi, bi)));
      const __m256d nai = _mm256_sub_pd(_mm256_fmadd_pd(sar, ai, _mm256_mul_pd(sai, ar)),
                                        _mm256_fmsub_pd(sbi, br, _mm256_mul_pd(sbr, bi)));
      const __m256d nbr = _mm256_add_pd(_mm256_fmsub_pd(sar, br, _mm256_mul_pd(sai, bi)),
                                        _mm256_fmadd_pd(sbr, ar, _mm256_mul_pd(sbi, ai)));
      const __m256d nbi = _mm256_add_pd(_mm256_fmadd_pd(sar, bi, _mm256_mul_pd(sai, br)),
                                        _mm256_fmsub_pd(sbi, ar, _mm256_mul_pd(sbr, ai)));
      ar = nar;
      ai = nai;
      br = nbr;
      bi = nbi;
    }

    alignas(32) double a_re[kWidth], a_im[kWidth], b_re[kWidth], b_im[kWidth];
    _mm256_store_pd(a_re, ar);
    _mm256_store_pd(a_im, ai);
    _mm256_store_pd(b_re, br);
    _mm256_store_pd(b_im, bi);
    for (std::size_t i = 0; i < kWidth; ++i) {
      args.c_out[lane + i] = {a_re[i], -a_im[i]};
      args.s_out[lane + i] = {-b_im[i], -b_re[i]};
    }
  }

  if (full < args.n_lanes) {
    LaneArgs tail = args;
    tail.detuning += full;
    tail.coupling_scale += full;
    tail.c_out += full;
    tail.s_out += full;
    tail.n_lanes = args.n_lanes - full;
    propagate_lanes_scalar(tail);
  }
}

void sincos_avx2(const double* x, double* s, double* c, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos_pd(_mm256_loadu_pd(x + i), vs, vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  if (i < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double bs[4], bc[4];
    for (std::size_t k = i; k < n; ++k) buf[k - i] = x[k];
    __m256d vs, vc;
    sincos_pd(_mm256_load_pd(buf), vs, vc);
    _mm256_store_pd(bs, vs);
    _mm256_store_pd(bc, vc);
    for (std::size_t k = i; k < n; ++k) {
      s[k] = bs[k - i];
      c[k] = bc[k - i];
    }
  }
}

}  // namespace atomgrape::kernels::detail
