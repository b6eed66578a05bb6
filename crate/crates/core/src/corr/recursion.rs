//! Table filler for the coupled quadratic difference equations.
//!
//! The three relations hold on the octant 0 <= M < N with C = low-temperature
//! table, C_d = high-temperature table over the same formal variable k,
//! weighted by s_h^2 = -k^2, s_v^2 = -1, s_v s_h = k:
//!
//! * R1:  -k^2 [Ch(M,N)^2 - Ch(M,N-1) Ch(M,N+1)]
//!            + [Cl(M,N)^2 - Cl(M-1,N) Cl(M+1,N)] = 0
//! * R2:     - [Ch(M,N)^2 - Ch(M-1,N) Ch(M+1,N)]
//!            + [Cl(M,N)^2 - Cl(M,N-1) Cl(M,N+1)] = 0
//! * R3:   k [Ch(M,N) Ch(M+1,N+1) - Ch(M,N+1) Ch(M+1,N)]
//!          - [Cl(M,N) Cl(M+1,N+1) - Cl(M,N+1) Cl(M+1,N)] = 0
//!
//! At M = 0 the index M - 1 is reflected to 1 (the correlations are even in
//! M).  Instances centered on or below the diagonal are excluded: checked
//! against the determinant routes they pick up inhomogeneous terms there,
//! starting with the instance touching the origin where C(0,0) = 1 is a
//! degenerate point of the underlying quadratic identities.
//!
//! Seeds are row 0 and the main diagonal of both tables from the determinant
//! routes, plus the identically-zero high-temperature entries at M + N odd.
//! Every interior entry then falls to relations that are linear in a single
//! remaining unknown; a small Gaussian elimination over the series field is
//! kept as a fallback for coupled clusters.

use super::{corr_diag, corr_row, Regime, RecursionTable};
use crate::series::{Rat, SeriesError, SeriesK, Var};
use std::collections::{BTreeMap, BTreeSet};

/// (table, M, N); table 0 is low temperature, 1 is high.
type Key = (u8, i64, i64);

/// One product term `c * k^pow * entry(a) * entry(b)`.
#[derive(Clone, Debug)]
struct Term {
    c: i64,
    pow: i64,
    a: Key,
    b: Key,
}

fn t(c: i64, pow: i64, a: Key, b: Key) -> Term {
    Term { c, pow, a, b }
}

/// A relation instance: sum of terms equal to zero.
#[derive(Clone, Debug)]
struct Relation {
    id: usize,
    m: i64,
    n: i64,
    terms: Vec<Term>,
}

fn relations(max_m: i64, max_n: i64) -> Vec<Relation> {
    // Entries are even in M, so the M = 0 instances reflect M - 1 to 1.
    let l = |m: i64, n: i64| (0u8, m.abs(), n.abs());
    let h = |m: i64, n: i64| (1u8, m.abs(), n.abs());
    let in_range = |rel: &Relation| {
        rel.terms
            .iter()
            .flat_map(|t| [t.a, t.b])
            .all(|(_, m, n)| m <= max_m && n <= max_n && m <= n)
    };
    let mut out = Vec::new();
    for m in 0..=max_m {
        for n in (m + 1)..=max_n {
            let candidates = [
                Relation {
                    id: 1,
                    m,
                    n,
                    terms: vec![
                        t(-1, 2, h(m, n), h(m, n)),
                        t(1, 2, h(m, n - 1), h(m, n + 1)),
                        t(1, 0, l(m, n), l(m, n)),
                        t(-1, 0, l(m - 1, n), l(m + 1, n)),
                    ],
                },
                Relation {
                    id: 2,
                    m,
                    n,
                    terms: vec![
                        t(-1, 0, h(m, n), h(m, n)),
                        t(1, 0, h(m - 1, n), h(m + 1, n)),
                        t(1, 0, l(m, n), l(m, n)),
                        t(-1, 0, l(m, n - 1), l(m, n + 1)),
                    ],
                },
                Relation {
                    id: 3,
                    m,
                    n,
                    terms: vec![
                        t(1, 1, h(m, n), h(m + 1, n + 1)),
                        t(-1, 1, h(m, n + 1), h(m + 1, n)),
                        t(-1, 0, l(m, n), l(m + 1, n + 1)),
                        t(1, 0, l(m, n + 1), l(m + 1, n)),
                    ],
                },
            ];
            out.extend(candidates.into_iter().filter(in_range));
        }
    }
    out
}

struct Fill {
    known: BTreeMap<Key, SeriesK>,
    order: i64,
}

impl Fill {
    fn get(&self, k: &Key) -> Option<&SeriesK> {
        self.known.get(k)
    }

    /// View a relation as a linear equation in its unknown entries.
    /// Returns None if some term has two unknown factors.
    fn linearize(&self, rel: &Relation) -> Option<(BTreeMap<Key, SeriesK>, SeriesK)> {
        let mut coeffs: BTreeMap<Key, SeriesK> = BTreeMap::new();
        let mut rhs = SeriesK::zero(self.order, Var::K);
        for term in &rel.terms {
            let va = self.get(&term.a);
            let vb = self.get(&term.b);
            let c = Rat::from_integer(term.c.into());
            match (va, vb) {
                (Some(a), Some(b)) => {
                    rhs = rhs - a.mul(b).mul_monomial(&c, term.pow);
                }
                (Some(a), None) => {
                    let w = a.mul_monomial(&c, term.pow);
                    let e = coeffs
                        .entry(term.b)
                        .or_insert_with(|| SeriesK::zero(self.order, Var::K));
                    *e = e.clone() + w;
                }
                (None, Some(b)) => {
                    let w = b.mul_monomial(&c, term.pow);
                    let e = coeffs
                        .entry(term.a)
                        .or_insert_with(|| SeriesK::zero(self.order, Var::K));
                    *e = e.clone() + w;
                }
                (None, None) => return None,
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Some((coeffs, rhs))
    }
}

/// Gaussian elimination over the series field for a small component.
fn solve_component(
    vars: &[Key],
    eqs: &[(BTreeMap<Key, SeriesK>, SeriesK)],
    order: i64,
) -> Result<Option<BTreeMap<Key, SeriesK>>, SeriesError> {
    let n = vars.len();
    let mut rows: Vec<(Vec<SeriesK>, SeriesK)> = eqs
        .iter()
        .map(|(c, r)| {
            (
                vars.iter()
                    .map(|v| c.get(v).cloned().unwrap_or_else(|| SeriesK::zero(order, Var::K)))
                    .collect(),
                r.clone(),
            )
        })
        .collect();
    let mut used = vec![false; rows.len()];
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (col, row)
    for col in 0..n {
        // pivot: unused row whose entry in `col` has minimal valuation
        let mut pivot: Option<(usize, i64)> = None;
        for (ri, (row, _)) in rows.iter().enumerate() {
            if used[ri] || row[col].is_zero() {
                continue;
            }
            let v = row[col].valuation;
            if pivot.is_none_or(|(_, pv)| v < pv) {
                pivot = Some((ri, v));
            }
        }
        let Some((pi, _)) = pivot else { return Ok(None) };
        used[pi] = true;
        pivot_rows.push((col, pi));
        let (prow, prhs) = rows[pi].clone();
        for (ri, (row, rhs)) in rows.iter_mut().enumerate() {
            if used[ri] || row[col].is_zero() {
                continue;
            }
            let f = row[col].div(&prow[col])?;
            for c in 0..n {
                row[c] = row[c].clone() - f.mul(&prow[c]);
            }
            *rhs = rhs.clone() - f.mul(&prhs);
        }
    }
    let mut solved: Vec<Option<SeriesK>> = vec![None; n];
    for &(col, ri) in pivot_rows.iter().rev() {
        let (row, rhs) = &rows[ri];
        let mut acc = rhs.clone();
        for c in (col + 1)..n {
            if !row[c].is_zero() {
                let x = solved[c].as_ref().expect("later columns already solved");
                acc = acc - row[c].mul(x);
            }
        }
        solved[col] = Some(acc.div(&row[col])?);
    }
    let mut out = BTreeMap::new();
    for (i, v) in vars.iter().enumerate() {
        out.insert(*v, solved[i].take().expect("all columns solved"));
    }
    Ok(Some(out))
}

/// Fill both tables on the octant `0 <= M <= min(max_m, N)`, `N <= max_n`,
/// through k-order `order`, and report the residual of every
/// fully-determined relation instance.
pub fn corr_recursion_table(
    max_m: i64,
    max_n: i64,
    order: i64,
) -> Result<RecursionTable, SeriesError> {
    if max_m < 0 || max_n < 1 || max_m > max_n {
        return Err(SeriesError::Other(
            "recursion table wants 0 <= max_m <= max_n, max_n >= 1".into(),
        ));
    }
    let work = order + 4 * (max_m + max_n) + 8;
    let mut fill = Fill { known: BTreeMap::new(), order: work };
    for n in 0..=max_n {
        fill.known.insert((0, 0, n), corr_row(n, Regime::LowT, work)?.series);
        fill.known.insert((1, 0, n), corr_row(n, Regime::HighT, work)?.series);
    }
    for d in 0..=max_m {
        fill.known.insert((0, d, d), corr_diag(d, Regime::LowT, work)?.series);
        fill.known.insert((1, d, d), corr_diag(d, Regime::HighT, work)?.series);
    }
    let mut targets: Vec<Key> = Vec::new();
    for m in 0..=max_m {
        for n in m..=max_n {
            targets.push((0, m, n));
            targets.push((1, m, n));
            if (m + n) % 2 == 1 {
                fill.known.insert((1, m, n), SeriesK::zero(work, Var::K));
            }
        }
    }

    let rels = relations(max_m, max_n);
    loop {
        let mut progress = false;
        // single-unknown pass
        for rel in &rels {
            let Some((coeffs, rhs)) = fill.linearize(rel) else { continue };
            if coeffs.len() == 1 {
                let (key, coeff) = coeffs.into_iter().next().unwrap();
                fill.known.insert(key, rhs.div(&coeff)?);
                progress = true;
            }
        }
        if progress {
            continue;
        }
        if targets.iter().all(|k| fill.known.contains_key(k)) {
            break;
        }
        // stalled: gather linear equations with >= 2 unknowns and try to solve
        // a connected component with at least as many equations as unknowns
        let mut pending: Vec<(BTreeMap<Key, SeriesK>, SeriesK)> = Vec::new();
        for rel in &rels {
            if let Some((coeffs, rhs)) = fill.linearize(rel) {
                if coeffs.len() >= 2 {
                    pending.push((coeffs, rhs));
                }
            }
        }
        let mut remaining: Vec<usize> = (0..pending.len()).collect();
        let mut solved_any = false;
        while let Some(&start) = remaining.first() {
            let mut comp_eqs = vec![start];
            let mut comp_vars: BTreeSet<Key> = pending[start].0.keys().copied().collect();
            loop {
                let before = comp_eqs.len();
                for &i in &remaining {
                    if comp_eqs.contains(&i) {
                        continue;
                    }
                    if pending[i].0.keys().any(|k| comp_vars.contains(k)) {
                        comp_eqs.push(i);
                        comp_vars.extend(pending[i].0.keys().copied());
                    }
                }
                if comp_eqs.len() == before {
                    break;
                }
            }
            remaining.retain(|i| !comp_eqs.contains(i));
            if comp_eqs.len() >= comp_vars.len() {
                let vars: Vec<Key> = comp_vars.into_iter().collect();
                let eqs: Vec<_> = comp_eqs.iter().map(|&i| pending[i].clone()).collect();
                if let Some(sol) = solve_component(&vars, &eqs, work)? {
                    for (k, v) in sol {
                        fill.known.insert(k, v);
                    }
                    solved_any = true;
                    break;
                }
            }
        }
        if !solved_any {
            let missing: Vec<Key> = targets
                .iter()
                .filter(|k| !fill.known.contains_key(k))
                .copied()
                .collect();
            return Err(SeriesError::Other(format!(
                "recursion fill stalled; undetermined entries: {missing:?}"
            )));
        }
    }

    // residual report on every fully-known instance
    let mut residuals = Vec::new();
    for rel in &rels {
        let mut acc = SeriesK::zero(work, Var::K);
        let mut complete = true;
        for term in &rel.terms {
            match (fill.get(&term.a), fill.get(&term.b)) {
                (Some(a), Some(b)) => {
                    acc = acc + a.mul(b).mul_monomial(&Rat::from_integer(term.c.into()), term.pow);
                }
                _ => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            residuals.push((rel.id, rel.m, rel.n, acc.truncated(order)));
        }
    }

    let mut low = BTreeMap::new();
    let mut high = BTreeMap::new();
    for ((table, m, n), s) in fill.known {
        let s = s.truncated(order);
        if table == 0 {
            low.insert((m, n), s);
        } else {
            high.insert((m, n), s);
        }
    }
    Ok(RecursionTable { order, low, high, residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::{builtin_fixtures, corr_fw, elliptic_poly_eval};

    #[test]
    fn recursion_agrees_with_fw() {
        let tab = corr_recursion_table(4, 4, 14).unwrap();
        for m in 0..=4i64 {
            for n in m..=4i64 {
                let fw_l = corr_fw(m, n, Regime::LowT, 14).unwrap().series;
                assert!(
                    tab.low[&(m, n)].agrees_with(&fw_l),
                    "low ({m},{n})\n  rec {}\n  fw  {}",
                    tab.low[&(m, n)],
                    fw_l
                );
                if (m + n) % 2 == 0 {
                    let fw_h = corr_fw(m, n, Regime::HighT, 14).unwrap().series;
                    assert!(
                        tab.high[&(m, n)].agrees_with(&fw_h),
                        "high ({m},{n})\n  rec {}\n  fw  {}",
                        tab.high[&(m, n)],
                        fw_h
                    );
                } else {
                    assert!(tab.high[&(m, n)].is_zero(), "high ({m},{n}) should vanish");
                }
            }
        }
    }

    #[test]
    fn recursion_residuals_vanish() {
        let tab = corr_recursion_table(3, 4, 12).unwrap();
        assert!(!tab.residuals.is_empty());
        for (id, m, n, r) in &tab.residuals {
            assert!(r.is_zero(), "relation {id} at ({m},{n}): residual {r}");
        }
    }

    #[test]
    fn recursion_matches_closed_forms() {
        let tab = corr_recursion_table(2, 3, 16).unwrap();
        let fixtures = builtin_fixtures();
        for key in [(1i64, 2i64, Regime::LowT), (1, 3, Regime::LowT), (1, 3, Regime::HighT)] {
            let poly = &fixtures[&(key.0, key.1, key.2, false)];
            let want = elliptic_poly_eval(poly, 16).unwrap();
            let got = match key.2 {
                Regime::LowT => &tab.low[&(key.0, key.1)],
                Regime::HighT => &tab.high[&(key.0, key.1)],
            };
            assert!(got.agrees_with(&want), "{key:?}\n  rec {got}\n  want {want}");
        }
    }
}
