//! Boundary analysis at t = 0 for the Okamoto canonical equation: the four
//! branches of analytic solutions, their resonances where a free constant
//! enters, and the matching of the correlation series onto a branch through
//! the one-parameter (lambda) extension.

use crate::painleve::{h_from_series, okamoto_residual, okamoto_shift, OdeFamily};
use crate::series::{rat, Rat, SeriesError, SeriesK, Var};
use num_traits::{One, Zero};

/// Seed pair `(c0, c1)` of branch `1..=4`; `None` when the `c1` denominator
/// vanishes.
pub fn branch_seed(branch: usize, np: &[Rat; 4]) -> Option<(Rat, Rat)> {
    let [n1, n2, n3, n4] = np;
    let p12 = n1 * n2;
    let p34 = n3 * n4;
    let (c0, c1_num, c1_den) = match branch {
        1 => (
            (-&p12 - &p34 + (n1 + n2) * (n3 + n4)) / Rat::from_integer(2.into()),
            (n1 + n2) * &p34 - &p12 * (n3 + n4),
            n1 + n2 - n3 - n4,
        ),
        2 => (
            (&p12 + &p34 + (n1 - n2) * (n3 - n4)) / Rat::from_integer(2.into()),
            (n1 - n2) * &p34 - &p12 * (n3 - n4),
            -n1 + n2 + n3 - n4,
        ),
        3 => (
            (&p12 + &p34 - (n1 - n2) * (n3 - n4)) / Rat::from_integer(2.into()),
            (n1 - n2) * &p34 + &p12 * (n3 - n4),
            -n1 + n2 - n3 + n4,
        ),
        4 => (
            (-&p12 - &p34 - (n1 + n2) * (n3 + n4)) / Rat::from_integer(2.into()),
            (n1 + n2) * &p34 + &p12 * (n3 + n4),
            n1 + n2 + n3 + n4,
        ),
        _ => panic!("branch index must be 1..=4"),
    };
    if c1_den.is_zero() {
        return None;
    }
    Some((c0, c1_num / c1_den))
}

/// Analytic branch solution `h = sum c_n t^n` together with its resonance
/// structure.
#[derive(Clone, Debug)]
pub struct BranchSolution {
    pub coeffs: Vec<Rat>,
    /// Orders at which the recursion left the coefficient free.
    pub resonances: Vec<usize>,
    /// Orders where the lowest equation had two roots and the hint chose one.
    pub ambiguities: Vec<usize>,
    /// First order at which the recursion is obstructed (no solution), if any.
    pub obstruction: Option<usize>,
}

impl BranchSolution {
    /// The solution as a series in k-units (t = k^2).
    pub fn series(&self, order_k: i64) -> SeriesK {
        let mut s = SeriesK::zero(order_k, Var::K);
        for (i, c) in self.coeffs.iter().enumerate() {
            s = s + SeriesK::monomial(c.clone(), 2 * i as i64, order_k, Var::K);
        }
        s
    }
}

/// Resonance order of branch `1..=4`: the coefficient `c_r` left free by the
/// recursion sits at `r = |B| + 1`, with `B` the branch combination of the
/// parameters.  `None` when `B` is not a nonzero integer.
pub fn resonance_index(branch: usize, np: &[Rat; 4]) -> Option<usize> {
    let [n1, n2, n3, n4] = np;
    let b = match branch {
        1 => n1 + n2 - n3 - n4,
        2 => n1 - n2 - n3 + n4,
        3 => n1 - n2 + n3 - n4,
        4 => n1 + n2 + n3 + n4,
        _ => panic!("branch index must be 1..=4"),
    };
    if !b.is_integer() || b.is_zero() {
        return None;
    }
    let r: i64 = b.to_integer().try_into().ok()?;
    Some(r.unsigned_abs() as usize + 1)
}

fn residual_series(np: &[Rat; 4], coeffs: &[Rat], order_k: i64) -> SeriesK {
    let mut h = SeriesK::zero(order_k, Var::K);
    for (i, c) in coeffs.iter().enumerate() {
        h = h + SeriesK::monomial(c.clone(), 2 * i as i64, order_k, Var::K);
    }
    let hp = crate::painleve::dt(&h);
    let hpp = crate::painleve::dt(&hp);
    let t = SeriesK::monomial(Rat::one(), 2, order_k - 4, Var::K);
    okamoto_residual(np, &t, &h.truncated(order_k - 4), &hp.truncated(order_k - 4), &hpp)
}

fn val(s: &SeriesK) -> i64 {
    if s.is_zero() {
        i64::MAX
    } else {
        s.valuation
    }
}

/// Solve the Okamoto equation order by order with the analytic ansatz
/// `h = c0 + c1 t + ...`.
///
/// Each step splits the residual's dependence on the new coefficient `c_n`
/// into its linear and higher-degree parts (the residual is cubic in `h`).
/// When the lowest equation is linear in `c_n`, one division determines it.
/// A quadratic lowest equation with two roots is a branch point: the linear
/// polynomial `c0 + c1 t` is always an exact solution (the residual of a
/// linear `h` is constant in `t`), and the second root starts the nontrivial
/// solution through the same seeds.  With `nontrivial` set the solver takes
/// the second root on its own; otherwise the choice — and any coefficient the
/// lowest equations cannot fix (a resonance) — is taken from `free`.  An
/// inhomogeneity below every order reachable by the remaining coefficients
/// is an obstruction: no analytic continuation exists.
pub fn solve_analytic(
    np: &[Rat; 4],
    c0: &Rat,
    c1: &Rat,
    order_t: usize,
    nontrivial: bool,
    mut free: impl FnMut(usize) -> Rat,
) -> Result<BranchSolution, SeriesError> {
    let mut coeffs = vec![c0.clone(), c1.clone()];
    let mut resonances = Vec::new();
    let mut ambiguities = Vec::new();
    let mut obstruction = None;
    let work = 2 * (order_t as i64 + 5);
    let two = Rat::from_integer(2.into());
    for n in 2..=order_t {
        // four probe values split the cubic dependence on c_n by degree
        let mut probe = coeffs.clone();
        probe.push(Rat::zero());
        probe.push(Rat::zero());
        let mut f = Vec::with_capacity(4);
        for v in 0..4i64 {
            probe[n] = Rat::from_integer(v.into());
            f.push(residual_series(np, &probe, work));
        }
        probe[n] = Rat::zero();
        probe[n + 1] = Rat::one();
        let ahead = &residual_series(np, &probe, work) - &f[0];
        probe[n] = Rat::one();
        // bilinear c_n c_{n+1} term: around degenerate backgrounds the next
        // coefficient can reach a low order only through this cross term
        let cross = &(&residual_series(np, &probe, work) - &f[1]) - &ahead;
        let d2a = &(&f[2] - &f[1]) - &(&f[1] - &f[0]);
        let d2b = &(&f[3] - &f[2]) - &(&f[2] - &f[1]);
        let a3 = (&d2b - &d2a).scale(&rat(1, 6));
        let a2 = (&d2a - &a3.scale(&rat(6, 1))).scale(&rat(1, 2));
        let a1 = &(&(&f[1] - &f[0]) - &a3) - &a2;
        let (pl, pnl) = (val(&a1), val(&a2).min(val(&a3)));
        let (pb, pf) = (val(&f[0]), val(&ahead).min(val(&cross)));
        if pl == i64::MAX && pnl == i64::MAX && pf == i64::MAX {
            return Err(SeriesError::Other(format!(
                "order {n}: residual insensitive to the next two coefficients"
            )));
        }
        let pa = pl.min(pnl);
        if pb < pa.min(pf) {
            obstruction = Some(n);
            break;
        }
        if pa >= pf {
            // the lowest usable equation involves the next coefficient too
            resonances.push(n);
            coeffs.push(free(n));
            continue;
        }
        // lowest determining equation at t^pa, cubic in c_n
        let (q3, q2, q1, q0) = (a3.coeff(pa), a2.coeff(pa), a1.coeff(pa), f[0].coeff(pa));
        if !q3.is_zero() {
            // degenerate background: the lowest equation mixes c_n with later
            // coefficients, so it cannot be solved in isolation
            ambiguities.push(n);
            coeffs.push(free(n));
            continue;
        }
        if q2.is_zero() {
            coeffs.push(-q0 / q1);
            continue;
        }
        let disc = &q1 * &q1 - Rat::from_integer(4.into()) * &q2 * &q0;
        let sq = crate::painleve::sqrt_rat(&disc).ok_or_else(|| {
            SeriesError::Other(format!("order {n}: irrational determining equation"))
        })?;
        if sq.is_zero() {
            coeffs.push(-q1 / (&two * &q2));
            continue;
        }
        // two roots, two analytic continuations through the same coefficients
        let den = &two * &q2;
        let r1 = (&sq - &q1) / &den;
        let r2 = (-&sq - &q1) / &den;
        ambiguities.push(n);
        if nontrivial && q0.is_zero() {
            // leave the exact-linear-solution root, take the other branch
            coeffs.push(if r1.is_zero() { r2 } else { r1 });
        } else {
            coeffs.push(free(n));
        }
    }
    Ok(BranchSolution { coeffs, resonances, ambiguities, obstruction })
}

/// `h`-series of a correlation under the family shift, as t-coefficients.
pub fn h_coeffs_from_corr(
    family: OdeFamily,
    m: i64,
    n: i64,
    corr: &SeriesK,
    order_t: usize,
) -> Result<Vec<Rat>, SeriesError> {
    let (a, b) = okamoto_shift(family, m, n);
    let h = h_from_series(corr, &a, &b)?;
    if h.valuation < 0 {
        return Err(SeriesError::Other("h not analytic at t = 0".into()));
    }
    Ok((0..=order_t as i64).map(|i| h.coeff(2 * i)).collect())
}

/// Which analytic branch a correlation family sits on.
pub fn branch_of(family: OdeFamily) -> usize {
    match family {
        OdeFamily::Low | OdeFamily::Diagonal => 1, // cases 1 and 4 coincide here
        OdeFamily::HighEven | OdeFamily::HighOdd => 2,
    }
}

/// Match the correlation `h`-series onto its analytic branch: check the seed
/// pair, check the full Okamoto residual vanishes, then run the branch
/// recursion taking every free constant from the correlation itself and
/// require every determined coefficient to agree.
pub fn match_branch(
    family: OdeFamily,
    m: i64,
    n: i64,
    corr: &SeriesK,
    order_t: usize,
) -> Result<BranchSolution, SeriesError> {
    let np = crate::painleve::okamoto_params(family, m, n);
    let hc = h_coeffs_from_corr(family, m, n, corr, order_t)?;
    let branch = branch_of(family);
    let (c0, c1) = branch_seed(branch, &np)
        .ok_or_else(|| SeriesError::Other("degenerate branch seed".into()))?;
    if c0 != hc[0] || c1 != hc[1] {
        return Err(SeriesError::Other(format!(
            "seed mismatch: branch ({c0}, {c1}) vs correlation ({}, {})",
            hc[0], hc[1]
        )));
    }
    let res = crate::painleve::okamoto_residual_series(family, m, n, corr)?;
    if !res.is_zero() {
        return Err(SeriesError::Other(format!(
            "Okamoto residual nonzero from k^{}",
            res.valuation
        )));
    }
    let sol = solve_analytic(&np, &c0, &c1, order_t, false, |k| hc[k].clone())?;
    if let Some(n0) = sol.obstruction {
        return Err(SeriesError::Other(format!("obstruction at order {n0}")));
    }
    for (i, (a, b)) in sol.coeffs.iter().zip(hc.iter()).enumerate() {
        if a != b {
            return Err(SeriesError::Other(format!(
                "coefficient {i} differs: branch {a} vs correlation {b}"
            )));
        }
    }
    Ok(sol)
}

/// `h`-series of the zero-parameter closed-form solution that seeds each
/// correlation branch: the linear polynomial for the low-temperature family,
/// a gauge-irrelevant prefactor times `t^{N/2} 2F1` for the two
/// high-temperature families.
pub fn lambda_zero_h(
    family: OdeFamily,
    m: i64,
    n: i64,
    order_k: i64,
) -> Result<SeriesK, SeriesError> {
    let (a, b) = okamoto_shift(family, m, n);
    match family {
        // the (1-t)^{1/4} factor contributes t/4 on top of the a t + b shift
        OdeFamily::Low | OdeFamily::Diagonal => Ok(SeriesK::from_coeffs(
            0,
            vec![b, Rat::zero(), a + rat(1, 4)],
            order_k,
            Var::K,
        )),
        OdeFamily::HighEven | OdeFamily::HighOdd => {
            let odd = matches!(family, OdeFamily::HighOdd);
            let sh = if odd { 0 } else { 1 };
            let spec = crate::special::Hyp2F1Spec::new(
                rat(n - m + sh, 2),
                rat(n + m + sh, 2),
                rat(n + 1, 1),
            );
            let hyp = crate::special::hyp2f1_series(&spec, order_k.div_euclid(2))?;
            let quarter = crate::special::sqrt_one_minus_t(order_k)
                .pow_rational(&rat(if odd { -1 } else { 1 }, 2))?;
            let c0 = hyp.mul(&quarter).mul_monomial(&Rat::one(), n);
            h_from_series(&c0, &a, &b)
        }
    }
}

/// Okamoto residual of an `h`-series given directly.
pub fn okamoto_residual_of_h(np: &[Rat; 4], h: &SeriesK) -> SeriesK {
    let (h0, hp, hpp) = crate::painleve::jet(h);
    let t = SeriesK::monomial(Rat::one(), 2, hpp.order, Var::K);
    okamoto_residual(np, &t, &h0, &hp, &hpp)
}

/// The signed coefficient `P` in the low-temperature expansion
/// `C = (1-t)^{1/4} [1 + P t^{N+1} + O(t^{N+2})]`; in the one-parameter
/// extension the resonant coefficient is `c_{N+1} = -(N+1) P lambda^2`.
pub fn lambda_coefficient_low(corr: &SeriesK, n: i64) -> Result<Rat, SeriesError> {
    let quarter = crate::special::sqrt_one_minus_t(corr.order)
        .pow_rational(&crate::series::rat(1, 2))?;
    let reduced = corr.div(&quarter)?;
    if reduced.coeff(0) != Rat::one() {
        return Err(SeriesError::Other("series does not start at 1".into()));
    }
    for p in 1..(2 * (n + 1)) {
        if !reduced.coeff(p).is_zero() {
            return Err(SeriesError::Other(format!("unexpected term at k^{p}")));
        }
    }
    Ok(reduced.coeff(2 * (n + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::{corr_fw, Regime};
    use crate::series::rat;

    #[test]
    fn low_seeds_match_closed_form() {
        // c0 = -(N^2 - M^2 - sbar)/8, c1 = -M^2/4 for cases 1 and 4
        for (m, n) in [(0i64, 1i64), (1, 2), (2, 3), (1, 3), (2, 2)] {
            let np = crate::painleve::okamoto_params(OdeFamily::Low, m, n);
            let sb = if (m + n) % 2 == 0 { 2 } else { 0 };
            let want0 = rat(-(2 * (n * n - m * m) - sb), 16);
            let want1 = rat(-m * m, 4);
            for branch in [1, 4] {
                let (c0, c1) = branch_seed(branch, &np).unwrap();
                assert_eq!(c0, want0, "branch {branch} ({m},{n})");
                assert_eq!(c1, want1, "branch {branch} ({m},{n})");
            }
        }
    }

    #[test]
    fn high_seeds_match_closed_form() {
        for (m, n) in [(0i64, 2i64), (1, 3), (2, 4)] {
            let np = crate::painleve::okamoto_params(OdeFamily::HighEven, m, n);
            let (c0, c1) = branch_seed(2, &np).unwrap();
            assert_eq!(c0, rat(m * m - n * n - 1, 8) - rat(n, 2));
            assert_eq!(c1, rat(n, 4) * rat(n + 1 - m * m, n + 1));
        }
        for (m, n) in [(0i64, 1i64), (1, 2), (0, 3)] {
            let np = crate::painleve::okamoto_params(OdeFamily::HighOdd, m, n);
            let (c0, c1) = branch_seed(2, &np).unwrap();
            assert_eq!(c0, rat(m * m - n * n, 8) - rat(n, 2));
            assert_eq!(c1, rat(n * n - 1 - (m * m - 1) * n, 4 * (n + 1)));
        }
    }

    #[test]
    fn generic_parameters_recursion_is_linear() {
        let np = [rat(1, 3), rat(1, 5), rat(2, 7), rat(-3, 11)];
        for branch in 1..=4usize {
            let (c0, c1) = branch_seed(branch, &np).unwrap();
            for nontrivial in [false, true] {
                let sol =
                    solve_analytic(&np, &c0, &c1, 8, nontrivial, |_| rat(0, 1)).unwrap();
                assert!(sol.resonances.is_empty(), "branch {branch}");
                assert_eq!(sol.obstruction, None, "branch {branch}");
                if !nontrivial {
                    // the hint 0 continues the exact linear solution
                    assert!(sol.coeffs[2..].iter().all(|c| c.is_zero()));
                } else {
                    assert!(!sol.coeffs[2].is_zero(), "branch {branch}");
                }
                let r = residual_series(&np, &sol.coeffs, 24).truncated(17);
                assert!(r.is_zero(), "branch {branch}: residual {r:?}");
            }
        }
    }

    #[test]
    fn integer_combination_halts_recursion() {
        // B1 = 2 and B4 = 3 are integers, B2 and B3 are not
        let np = [rat(1, 1), rat(3, 2), rat(1, 3), rat(1, 6)];
        for (branch, special) in [(1usize, Some(3usize)), (2, None), (3, None), (4, Some(4))] {
            assert_eq!(resonance_index(branch, &np), special, "branch {branch}");
            let (c0, c1) = branch_seed(branch, &np).unwrap();
            // the nontrivial continuation hits the resonance, if any
            let sol = solve_analytic(&np, &c0, &c1, 6, true, |_| rat(0, 1)).unwrap();
            let first = sol.resonances.first().copied().or(sol.obstruction);
            assert_eq!(first, special, "branch {branch}");
        }
    }

    #[test]
    fn low_branch_matches_and_resonates() {
        for (m, n) in [(0i64, 1i64), (1, 2), (0, 3), (2, 3)] {
            let np = crate::painleve::okamoto_params(OdeFamily::Low, m, n);
            // cases 1 and 4 coincide and resonate at N+1
            assert_eq!(resonance_index(1, &np), Some(n as usize + 1));
            assert_eq!(resonance_index(4, &np), Some(n as usize + 1));
            let c = corr_fw(m, n, Regime::LowT, 2 * n + 16).unwrap().series;
            let hc = h_coeffs_from_corr(OdeFamily::Low, m, n, &c, n as usize + 2).unwrap();
            for k in 2..=n as usize {
                assert!(hc[k].is_zero(), "({m},{n}) c_{k}");
            }
            assert!(!hc[n as usize + 1].is_zero(), "({m},{n}) resonant coefficient");
            // the linear truncation is itself an exact solution
            let h0 = lambda_zero_h(OdeFamily::Low, m, n, 24).unwrap();
            assert!(okamoto_residual_of_h(&np, &h0).is_zero(), "({m},{n})");
            match_branch(OdeFamily::Low, m, n, &c, n as usize + 3).unwrap();
        }
    }

    #[test]
    fn high_branch_matches_and_resonates() {
        for (m, n, fam) in [
            (0i64, 2i64, OdeFamily::HighEven),
            (1, 3, OdeFamily::HighEven),
            (1, 2, OdeFamily::HighOdd),
            (0, 3, OdeFamily::HighOdd),
        ] {
            let np = crate::painleve::okamoto_params(fam, m, n);
            assert_eq!(resonance_index(2, &np), Some(n as usize + 2), "({m},{n})");
            let order = 2 * n + 18;
            let c = corr_fw(m, n, Regime::HighT, order).unwrap().series;
            let h = crate::painleve::h_from_series(
                &c,
                &crate::painleve::okamoto_shift(fam, m, n).0,
                &crate::painleve::okamoto_shift(fam, m, n).1,
            )
            .unwrap();
            // the hypergeometric closed form solves the equation and agrees
            // with the correlation exactly up to the resonance
            let h0 = lambda_zero_h(fam, m, n, order).unwrap();
            let r0 = okamoto_residual_of_h(&np, &h0).truncated(order - 8);
            assert!(r0.is_zero(), "({m},{n}): {r0:?}");
            let diff = &h - &h0;
            assert_eq!(diff.valuation, 2 * (n + 2), "({m},{n})");
            match_branch(fam, m, n, &c, n as usize + 3).unwrap();
        }
    }

    #[test]
    fn high_even_lambda_coefficients() {
        let cases = [
            (0i64, 2i64, rat(3, 1 << 14)),
            (1, 3, rat(9, 1 << 18)),
            (0, 4, rat(5, 1 << 20)),
        ];
        for (m, n, want) in cases {
            let order = 2 * n + 12;
            let c = corr_fw(m, n, Regime::HighT, order).unwrap().series;
            let quarter = crate::special::sqrt_one_minus_t(order)
                .pow_rational(&rat(1, 2))
                .unwrap();
            let u = c
                .div(&quarter)
                .unwrap()
                .mul_monomial(&crate::series::Rat::one(), -n);
            let k1 = u.coeff(0);
            let spec = crate::special::Hyp2F1Spec::new(
                rat(n - m + 1, 2),
                rat(n + m + 1, 2),
                rat(n + 1, 1),
            );
            let hyp = crate::special::hyp2f1_series(&spec, u.order / 2).unwrap();
            let v = &u.scale(&(crate::series::Rat::one() / &k1)) - &hyp.truncated(u.order);
            assert_eq!(v.valuation, 2 * (n + 2), "({m},{n})");
            assert_eq!(v.coeff(2 * (n + 2)), want, "({m},{n})");
        }
    }

    #[test]
    fn lambda_coefficients_low() {
        let cases = [
            (0i64, 1i64, rat(-1, 64)),
            (0, 2, rat(1, 256)),
            (1, 2, rat(-1, 256)),
            (0, 3, rat(-9, 16384)),
            (1, 3, rat(15, 16384)),
        ];
        for (m, n, want) in cases {
            let c = corr_fw(m, n, Regime::LowT, 2 * n + 8).unwrap().series;
            let p = lambda_coefficient_low(&c, n).unwrap();
            assert_eq!(p, want, "({m},{n})");
            // resonant coefficient of the matched branch is -(N+1) P
            let sol =
                match_branch(OdeFamily::Low, m, n, &c, n as usize + 2).unwrap();
            assert_eq!(sol.coeffs[n as usize + 1], rat(-(n + 1), 1) * &p);
        }
    }
}
