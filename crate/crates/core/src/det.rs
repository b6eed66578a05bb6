//! Determinants of matrices with truncated-series entries.
//!
//! The workhorse is Bareiss-style fraction-free elimination: every division
//! is by a previous pivot and is exact in the series ring, so no spurious
//! truncation error is introduced beyond the tracked guaranteed order.  When
//! a pivot acquires positive valuation the exact divisions still go through,
//! but each one costs reliable orders at the low end; for small matrices
//! (dim <= 4) we switch to plain cofactor expansion instead, which is
//! division-free.  A memoized Laplace expansion over column subsets is kept
//! as an independent oracle for tests.

use crate::series::{Rat, SeriesError, SeriesK, Var};
use num_traits::One;

/// Dense square matrix of series.
#[derive(Clone, Debug)]
pub struct SeriesMatrix {
    pub dim: usize,
    pub entries: Vec<SeriesK>, // row-major
}

impl SeriesMatrix {
    pub fn from_fn<F>(dim: usize, mut f: F) -> Result<Self, SeriesError>
    where
        F: FnMut(usize, usize) -> Result<SeriesK, SeriesError>,
    {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j)?);
            }
        }
        Ok(SeriesMatrix { dim, entries })
    }

    #[cfg(feature = "parallel")]
    pub fn from_fn_par<F>(dim: usize, f: F) -> Result<Self, SeriesError>
    where
        F: Fn(usize, usize) -> Result<SeriesK, SeriesError> + Sync,
    {
        use rayon::prelude::*;
        let entries: Result<Vec<_>, _> = (0..dim * dim)
            .into_par_iter()
            .map(|idx| f(idx / dim, idx % dim))
            .collect();
        Ok(SeriesMatrix { dim, entries: entries? })
    }

    pub fn at(&self, i: usize, j: usize) -> &SeriesK {
        &self.entries[i * self.dim + j]
    }

    fn min_order(&self) -> i64 {
        self.entries.iter().map(|e| e.order).min().unwrap_or(0)
    }
}

/// Determinant by the strategy described in the module docs.
pub fn det_series(m: &SeriesMatrix) -> Result<SeriesK, SeriesError> {
    let order = m.min_order();
    if m.dim == 0 {
        return Ok(SeriesK::one(order, Var::K));
    }
    if m.dim == 1 {
        return Ok(m.entries[0].clone());
    }
    // Peek at whether elimination can keep valuation-0 pivots (with row
    // swaps); otherwise fall back for small dims.
    match det_bareiss(m) {
        Ok(d) => Ok(d),
        Err(SeriesError::DivisionByZero) | Err(SeriesError::OrderExhausted(_)) if m.dim <= 4 => {
            det_cofactor(m)
        }
        other => other,
    }
}

/// Fraction-free elimination with row pivoting on minimal valuation.
fn det_bareiss(m: &SeriesMatrix) -> Result<SeriesK, SeriesError> {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut sign = Rat::one();
    let mut prev = SeriesK::one(m.min_order(), Var::K);
    for k in 0..n - 1 {
        // choose the pivot row with minimal valuation in column k
        let mut best: Option<(usize, i64)> = None;
        for r in k..n {
            let e = &a[r * n + k];
            if e.is_zero() {
                continue;
            }
            if best.is_none_or(|(_, v)| e.valuation < v) {
                best = Some((r, e.valuation));
            }
        }
        let (pr, pv) = best.ok_or(SeriesError::DivisionByZero)?;
        if pv > 0 && n <= 4 {
            // exact, but cheap cofactor expansion is both simpler and loses
            // no low-end orders here
            return Err(SeriesError::OrderExhausted(pv));
        }
        if pr != k {
            for c in 0..n {
                a.swap(k * n + c, pr * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a[i * n + j].mul(&pivot) - a[i * n + k].mul(&a[k * n + j]);
                a[i * n + j] = num.div(&prev)?;
            }
        }
        for i in (k + 1)..n {
            a[i * n + k] = SeriesK::zero(a[i * n + k].order, Var::K);
        }
        prev = pivot;
    }
    Ok(a[(n - 1) * n + (n - 1)].scale(&sign))
}

/// Division-free cofactor expansion along the first row.
pub fn det_cofactor(m: &SeriesMatrix) -> Result<SeriesK, SeriesError> {
    fn go(n: usize, full: usize, rows: &[usize], cols: &mut Vec<usize>, e: &[SeriesK]) -> SeriesK {
        let order = e.iter().map(|x| x.order).min().unwrap_or(0);
        if rows.is_empty() {
            return SeriesK::one(order, Var::K);
        }
        let r = rows[0];
        let rest = &rows[1..];
        let mut acc = SeriesK::zero(i64::MAX / 4, Var::K);
        for (pos, &c) in cols.clone().iter().enumerate() {
            let entry = &e[r * full + c];
            let mut sub_cols: Vec<usize> = cols.clone();
            sub_cols.remove(pos);
            let minor = go(n, full, rest, &mut sub_cols, e);
            let term = entry.mul(&minor);
            let term = if pos % 2 == 0 { term } else { -term };
            acc = acc + term;
        }
        acc
    }
    let rows: Vec<usize> = (0..m.dim).collect();
    let mut cols: Vec<usize> = (0..m.dim).collect();
    Ok(go(m.dim, m.dim, &rows, &mut cols, &m.entries))
}

/// The two symmetric-Toeplitz factor blocks obtained by Wilf's column/row
/// reduction of `det[A_{|i-j|}]`, returned as (plus-block, minus-block)
/// determinants whose product is the full determinant.
pub fn wilf_factor(elements: &[SeriesK]) -> Result<(SeriesK, SeriesK), SeriesError> {
    let n = elements.len();
    if n < 2 {
        return Err(SeriesError::Other("wilf_factor needs dim >= 2".into()));
    }
    let order = elements.iter().map(|e| e.order).min().unwrap_or(0);
    let a = |i: usize, j: usize| elements[i.abs_diff(j)].clone();
    // columns 0..n-1; subtract column j from column n-1-j for the lower half,
    // then add row n-1-j to row j: block triangularizes the matrix.
    let mut mat: Vec<Vec<SeriesK>> = (0..n)
        .map(|i| (0..n).map(|j| a(i, j)).collect())
        .collect();
    let half = n / 2;
    for j in 0..half {
        let jj = n - 1 - j;
        for i in 0..n {
            let d = mat[i][jj].clone() - &mat[i][j];
            mat[i][jj] = d;
        }
    }
    for i in 0..half {
        let ii = n - 1 - i;
        for j in 0..n {
            let s = mat[i][j].clone() + &mat[ii][j];
            mat[i][j] = s;
        }
    }
    let top = n - half; // ceil(n/2)
    let zero_check = (0..top).all(|i| (top..n).all(|j| mat[i][j].is_zero()))
        || (top..n).all(|i| (0..top).all(|j| mat[i][j].is_zero()));
    if !zero_check {
        return Err(SeriesError::Other("wilf reduction did not block-triangularize".into()));
    }
    let block = |r0: usize, r1: usize| -> Result<SeriesK, SeriesError> {
        let dim = r1 - r0;
        let sm = SeriesMatrix::from_fn(dim, |i, j| Ok(mat[r0 + i][r0 + j].truncated(order)))?;
        det_series(&sm)
    };
    let plus = block(0, top)?;
    let minus = block(top, n)?;
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, rat_i};
    use proptest::prelude::*;

    fn consts(vals: &[i64], order: i64) -> Vec<SeriesK> {
        vals.iter().map(|&v| SeriesK::constant(rat_i(v), order, Var::K)).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_on_constants() {
        let e = consts(&[2, 3, 5, 7, 11, 13, 17, 19, 23], 8);
        let m = SeriesMatrix { dim: 3, entries: e };
        let b = det_series(&m).unwrap();
        let c = det_cofactor(&m).unwrap();
        assert!(b.agrees_with(&c));
        // 2(11*23-13*19) - 3(7*23-13*17) + 5(7*19-11*17)
        assert_eq!(b.coeff(0), rat_i(2 * (11 * 23 - 13 * 19) - 3 * (7 * 23 - 13 * 17) + 5 * (7 * 19 - 11 * 17)));
    }

    #[test]
    fn singular_leading_pivot_falls_back() {
        // a00 = 0 forces the fallback path
        let order = 10;
        let z = SeriesK::zero(order, Var::K);
        let k = SeriesK::monomial(rat_i(1), 1, order, Var::K);
        let one = SeriesK::one(order, Var::K);
        let m = SeriesMatrix { dim: 2, entries: vec![z, k.clone(), k, one] };
        let d = det_series(&m).unwrap();
        assert_eq!(d.coeff(2), rat_i(-1));
    }

    #[test]
    fn wilf_two_by_two() {
        // D2 = (A0 - A1)(A0 + A1)
        let a0 = SeriesK::from_coeffs(0, vec![rat_i(1), rat(1, 3)], 9, Var::K);
        let a1 = SeriesK::from_coeffs(0, vec![rat(1, 2), rat_i(2)], 9, Var::K);
        let (p, mi) = wilf_factor(&[a0.clone(), a1.clone()]).unwrap();
        let m = SeriesMatrix { dim: 2, entries: vec![a0.clone(), a1.clone(), a1.clone(), a0.clone()] };
        let d = det_series(&m).unwrap();
        assert!(p.mul(&mi).agrees_with(&d));
        assert!(p.agrees_with(&(a0.clone() + a1.clone())) || p.agrees_with(&(a0.clone() - a1.clone())));
    }

    fn arb_entry() -> impl Strategy<Value = SeriesK> {
        prop::collection::vec((-9i64..10, 1i64..5), 0..4).prop_map(|pairs| {
            let coeffs: Vec<Rat> = pairs.into_iter().map(|(n, d)| rat(n, d)).collect();
            SeriesK::from_coeffs(0, coeffs, 10, Var::K)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn row_swap_flips_sign(e in prop::collection::vec(arb_entry(), 9)) {
            let m = SeriesMatrix { dim: 3, entries: e.clone() };
            let mut swapped = e;
            for c in 0..3 {
                swapped.swap(c, 3 + c);
            }
            let ms = SeriesMatrix { dim: 3, entries: swapped };
            let d1 = det_cofactor(&m).unwrap();
            let d2 = det_cofactor(&ms).unwrap();
            prop_assert!(d1.agrees_with(&-d2));
        }

        #[test]
        fn block_diagonal_multiplies(a in prop::collection::vec(arb_entry(), 4),
                                     b in prop::collection::vec(arb_entry(), 4)) {
            // det(diag(A, B)) = det A det B for 2x2 blocks
            let z = SeriesK::zero(10, Var::K);
            let mut e = Vec::new();
            for i in 0..4 {
                for j in 0..4 {
                    e.push(match (i < 2, j < 2) {
                        (true, true) => a[i * 2 + j].clone(),
                        (false, false) => b[(i - 2) * 2 + (j - 2)].clone(),
                        _ => z.clone(),
                    });
                }
            }
            let m = SeriesMatrix { dim: 4, entries: e };
            let d = det_cofactor(&m).unwrap();
            let da = det_cofactor(&SeriesMatrix { dim: 2, entries: a }).unwrap();
            let db = det_cofactor(&SeriesMatrix { dim: 2, entries: b }).unwrap();
            prop_assert!(d.agrees_with(&da.mul(&db)));
        }

        #[test]
        fn bareiss_agrees_with_cofactor(e in prop::collection::vec(arb_entry(), 16)) {
            let m = SeriesMatrix { dim: 4, entries: e };
            let b = det_series(&m);
            let c = det_cofactor(&m).unwrap();
            if let Ok(b) = b {
                prop_assert!(b.agrees_with(&c), "bareiss {b} vs cofactor {c}");
            }
        }

        #[test]
        fn wilf_equals_full_determinant(e in prop::collection::vec(arb_entry(), 5)) {
            for n in 2..=5usize {
                let els = &e[..n];
                let m = SeriesMatrix::from_fn(n, |i, j| Ok(els[i.abs_diff(j)].clone())).unwrap();
                let d = det_cofactor(&m).unwrap();
                let (p, mi) = wilf_factor(els).unwrap();
                prop_assert!(p.mul(&mi).agrees_with(&d), "n={n}");
            }
        }
    }
}
