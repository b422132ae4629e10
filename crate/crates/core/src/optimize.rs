//! One-dimensional search primitives shared by the grid refiners and the
//! CHSH multistart.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`. Returns `(x, f(x))` for
/// the best point evaluated, endpoints included.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = [(a, f(a)), (b, f(b))]
        .into_iter()
        .fold((a, f64::NEG_INFINITY), pick_max);

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    best = pick_max(best, (x1, f1));
    best = pick_max(best, (x2, f2));
    best
}

/// Maximizes a `2π`-periodic function: a uniform scan of `scan` points
/// picks the best cell, then golden-section refines within one cell on
/// either side.
pub fn periodic_max(f: impl Fn(f64) -> f64, scan: usize, tol: f64) -> (f64, f64) {
    let step = std::f64::consts::TAU / scan as f64;
    let (x0, _) = (0..scan)
        .map(|k| {
            let x = k as f64 * step;
            (x, f(x))
        })
        .fold((0.0, f64::NEG_INFINITY), pick_max);
    let (x, fx) = golden_section_max(&f, x0 - step, x0 + step, tol);
    (x.rem_euclid(std::f64::consts::TAU), fx)
}

fn pick_max(best: (f64, f64), candidate: (f64, f64)) -> (f64, f64) {
    if candidate.1 > best.1 {
        candidate
    } else {
        best
    }
}
