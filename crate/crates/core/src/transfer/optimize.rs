//! One-dimensional maximization: uniform grid scan followed by golden-section
//! refinement around the best grid point.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Maximizes `f` on `[lo, hi]`. Points where `f` returns `None` (or a
/// non-finite value) are skipped. Returns `None` when no grid point is valid.
pub fn maximize<F: FnMut(f64) -> Option<f64>>(mut f: F, lo: f64, hi: f64, grid: usize) -> Option<Maximum> {
    assert!(grid >= 2 && hi >= lo);
    let mut eval = |x: f64| f(x).filter(|v| v.is_finite());
    let step = (hi - lo) / (grid - 1) as f64;
    let xs: Vec<f64> = (0..grid).map(|i| if i + 1 == grid { hi } else { lo + step * i as f64 }).collect();
    let vals: Vec<Option<f64>> = xs.iter().map(|&x| eval(x)).collect();
    let mut evaluations = grid;
    let (best_i, best_v) = vals.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).fold(
        None,
        |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((i, v)),
        },
    )?;
    let mut best = Maximum { x: xs[best_i], value: best_v, evaluations };
    if hi == lo {
        return Some(best);
    }
    let mut a = xs[best_i.saturating_sub(1)];
    let mut b = xs[(best_i + 1).min(grid - 1)];
    let score = |v: Option<f64>| v.unwrap_or(f64::NEG_INFINITY);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = score(eval(c));
    let mut fd = score(eval(d));
    evaluations += 2;
    while (b - a) > 1e-13 * (a.abs() + b.abs()).max(1e-300) && evaluations < 400 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = score(eval(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = score(eval(d));
        }
        evaluations += 1;
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.value {
            best.x = x;
            best.value = v;
        }
    }
    best.evaluations = evaluations;
    Some(best)
}
