//! Small float toolbox: adaptive Gauss–Kronrod quadrature, a bracketing
//! root finder and a least-squares line fit.

#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

// 15-point Kronrod extension of the 7-point Gauss–Legendre rule on [−1, 1].
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
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// (Kronrod estimate, |Kronrod − Gauss|) on [a, b].
pub fn gauss_kronrod_15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Globally adaptive bisection on the interval with the largest error
/// estimate until the summed estimate drops below `abs_tol`.
pub fn integrate_adaptive(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64, max_intervals: usize) -> Integral {
    let (v, e) = gauss_kronrod_15(&mut f, a, b);
    let mut pieces: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if error <= abs_tol || pieces.len() >= max_intervals {
            // sum small pieces first
            let mut values: Vec<f64> = pieces.iter().map(|p| p.2).collect();
            values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
            return Integral { value: values.iter().sum(), error, intervals: pieces.len() };
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod_15(&mut f, lo, mid);
        let (v2, e2) = gauss_kronrod_15(&mut f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Root of `f` in [a, b] given f(a) < 0 ≤ f(b) (or the reverse), by the
/// Illinois variant of regula falsi with a bisection safeguard. Stops when
/// the bracket is below `rel_tol` relative to its larger endpoint.
pub fn bracketed_root(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0i8;
    for iteration in 0..200 {
        let width = (b - a).abs();
        if width <= rel_tol * a.abs().max(b.abs()) || width == 0.0 {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        // every third step bisect, and whenever the secant leaves the bracket
        if iteration % 3 == 2 || !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc < 0.0) == (fa < 0.0) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

/// Least-squares slope and intercept of y against x.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_integrates_polynomials_exactly() {
        let (v, e) = gauss_kronrod_15(&mut |x: f64| x.powi(10) - 3.0 * x * x, 0.0, 2.0);
        assert!((v - (2f64.powi(11) / 11.0 - 8.0)).abs() < 1e-11);
        assert!(e < 1e-10);
    }

    #[test]
    fn adaptive_handles_sharp_features() {
        let r = integrate_adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 500);
        let exact = 2.0 * libm::atan(1.0 / 1e-2) / 1e-2;
        assert!((r.value - exact).abs() < 1e-8, "{} vs {}", r.value, exact);
    }

    #[test]
    fn root_of_cubic() {
        let r = bracketed_root(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15);
        assert!((r - libm::cbrt(2.0)).abs() < 1e-14);
        let r = bracketed_root(|x: f64| libm::sin(x), 3.0, 3.3, 1e-15);
        assert!((r - core::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn line_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let (m, c) = fit_line(&xs, &ys);
        assert!((m - 2.5).abs() < 1e-14 && (c + 1.0).abs() < 1e-14);
    }
}
