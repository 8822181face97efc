//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

/// Default relative tolerance.
pub const REL_TOL: f64 = 1e-10;
/// Default cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 4096;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// One 15-point Kronrod panel: (integral, error estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`.
///
/// Bisects the panel with the largest error estimate until the total
/// estimate falls below `max(rel_tol * |I|, 1e-15 * scale)`. Exceeding
/// `max_intervals` is an error.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut panels: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&f, a, b);
    panels.push((a, b, v, e));
    let mut evaluations = 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let abs_floor = 1e-15 * panels.iter().map(|p| p.2.abs()).sum::<f64>().max(1e-300);
        if !total.is_finite() {
            return Err(Error::Quadrature { a, b, error: f64::INFINITY });
        }
        if err <= (rel_tol * total.abs()).max(abs_floor) {
            return Ok(Quadrature { value: total, error: err, evaluations });
        }
        if panels.len() >= max_intervals {
            return Err(Error::Quadrature { a, b, error: err });
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (pa, pb, _, _) = panels.swap_remove(i);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(Error::Quadrature { a, b, error: err });
        }
        let (v1, e1) = gk15(&f, pa, mid);
        let (v2, e2) = gk15(&f, mid, pb);
        evaluations += 30;
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// [`integrate`] with the default tolerance and interval cap.
pub fn integrate_default<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<Quadrature> {
    integrate(f, a, b, REL_TOL, MAX_INTERVALS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let q = integrate_default(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0).unwrap();
        assert!((q.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn smooth_periodic() {
        let q = integrate_default(|t| 1.0 / (2.0 + t.cos()), 0.0, 2.0 * PI).unwrap();
        assert!((q.value - 2.0 * PI / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reversed_interval() {
        let q = integrate_default(f64::exp, 1.0, 0.0).unwrap();
        assert!((q.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn singular_integrand_fails_loudly() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10, 64);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
