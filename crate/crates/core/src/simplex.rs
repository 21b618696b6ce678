//! Dense exact-rational simplex for `max c·x` subject to `A x <= b`, `x >= 0`
//! with `b >= 0`, so the slack basis is feasible from the start.

use num::{BigRational, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Unbounded,
}

/// Solves the program with Bland's rule, which cannot cycle.
pub(crate) fn maximize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    debug_assert!(b.iter().all(|v| !v.is_negative()));
    // Row i: [A | I | b]; the objective row stores reduced costs and -z.
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r = a[i].clone();
            r.resize(n, BigRational::zero());
            r.extend((0..m).map(|j| if i == j { one() } else { BigRational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<BigRational> = c.to_vec();
    obj.resize(width + 1, BigRational::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..width).find(|&j| obj[j].is_positive()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, r) in rows.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[width] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let piv = rows[pr][enter].clone();
        for v in rows[pr].iter_mut() {
            *v /= &piv;
        }
        let pivot_row = rows[pr].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != pr && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = rows[i][width].clone();
        }
    }
    LpOutcome::Optimal { value: -obj[width].clone(), x }
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}
