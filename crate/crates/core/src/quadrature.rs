//! Trapezoid rules: the fixed uniform rule used for energies and an
//! adaptive rule for time integrals of disturbances.

/// Composite trapezoid over uniformly spaced samples.
pub fn trapezoid_uniform(samples: impl IntoIterator<Item = f64>, h: f64) -> f64 {
    let mut it = samples.into_iter();
    let Some(first) = it.next() else {
        return 0.0;
    };
    let mut sum = 0.5 * first;
    let mut last = first;
    let mut count = 1usize;
    for v in it {
        sum += v;
        last = v;
        count += 1;
    }
    if count == 1 {
        return 0.0;
    }
    sum -= 0.5 * last;
    h * sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub integral: f64,
    /// Largest integrand value among the points the rule evaluated.
    pub max_sample: f64,
    pub evaluations: usize,
}

const MIN_LEVEL: u32 = 4;
const MAX_LEVEL: u32 = 30;
/// Absolute tolerance per unit length, used only when the preliminary
/// estimate is zero.
const ABS_FLOOR: f64 = 1e-15;

/// Adaptive trapezoid on `[a, b]`. Each interval is bisected until the
/// Richardson error estimate `|T_fine - T_coarse| / 3` falls under its share
/// of `rel_tol * |I|`, where `I` is a preliminary estimate of the whole
/// integral. At least `2^MIN_LEVEL` panels are always used so that
/// oscillating integrands are not sampled only at their zeros.
pub fn adaptive_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Quadrature {
    if b <= a {
        let fa = f(a);
        return Quadrature {
            integral: 0.0,
            max_sample: fa,
            evaluations: 1,
        };
    }
    let n0 = 1usize << MIN_LEVEL;
    let h0 = (b - a) / n0 as f64;
    let xs: Vec<f64> = (0..=n0)
        .map(|i| if i == n0 { b } else { a + i as f64 * h0 })
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut q = Quadrature {
        integral: 0.0,
        max_sample: fs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        evaluations: fs.len(),
    };
    let rough = trapezoid_uniform(fs.iter().copied(), h0).abs();
    let total_tol = if rough > 0.0 {
        rel_tol * rough
    } else {
        ABS_FLOOR * (b - a)
    };
    for i in 0..n0 {
        let tol = total_tol * (xs[i + 1] - xs[i]) / (b - a);
        q.integral += refine(
            &f,
            xs[i],
            xs[i + 1],
            fs[i],
            fs[i + 1],
            tol,
            MIN_LEVEL,
            &mut q,
        );
    }
    q
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    tol: f64,
    level: u32,
    q: &mut Quadrature,
) -> f64 {
    let m = 0.5 * (a + b);
    let fm = f(m);
    q.evaluations += 1;
    q.max_sample = q.max_sample.max(fm);
    let coarse = 0.5 * (b - a) * (fa + fb);
    let fine = 0.25 * (b - a) * (fa + 2.0 * fm + fb);
    if (fine - coarse).abs() / 3.0 <= tol || level >= MAX_LEVEL {
        return fine;
    }
    refine(f, a, m, fa, fm, 0.5 * tol, level + 1, q)
        + refine(f, m, b, fm, fb, 0.5 * tol, level + 1, q)
}
