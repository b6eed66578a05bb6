//! End-to-end verification suite: ten numbered criteria covering printed
//! series, closed-form fixtures, route equivalence, the four ODE families,
//! Cosgrove/Okamoto classification, factorizations, boundary-condition
//! branches, hypergeometric identities, symmetries, and negative controls.
//!
//! Every check is an exact equality of truncated rational series; a criterion
//! passes only when every sub-check holds identically.

use crate::boundary::{
    branch_seed, lambda_coefficient_low, match_branch, resonance_index, solve_analytic,
};
use crate::corr::{
    builtin_fixtures, corr_diag, corr_fw, corr_recursion_table, corr_row, elliptic_poly_eval,
    Regime,
};
use crate::det::{det_series, wilf_factor, SeriesMatrix};
use crate::painleve::{
    cosgrove_fit, cosgrove_to_okamoto, jet, kw_dual_power, kw_involution_check, ode_residual,
    ode_residual_series, okamoto_class, okamoto_params, okamoto_residual_series, sigma_from_corr,
    OdeFamily,
};
use crate::series::{rat, rat_i, Rat, SeriesError, SeriesK, Var};
use crate::special::{
    elliptic_e, elliptic_k, matrix_element, verify_hypergeometric_identities, ElementCtx,
    MatrixElementFamily,
};
use num_traits::{One, Zero};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub ok: bool,
    /// One message per failed sub-check (empty when `ok`).
    pub details: Vec<String>,
}

fn run<F>(index: usize, name: &'static str, body: F) -> CriterionReport
where
    F: FnOnce(&mut Vec<String>) -> Result<(), SeriesError>,
{
    let mut details = Vec::new();
    let ok = match body(&mut details) {
        Ok(()) => details.is_empty(),
        Err(e) => {
            details.push(format!("error: {e}"));
            false
        }
    };
    CriterionReport { index, name, ok, details }
}

fn check(details: &mut Vec<String>, cond: bool, msg: impl FnOnce() -> String) {
    if !cond {
        details.push(msg());
    }
}

fn tmon(c: Rat, t_pow: i64, order: i64) -> SeriesK {
    SeriesK::monomial(c, 2 * t_pow, order, Var::K)
}

fn one_minus_t(order: i64) -> SeriesK {
    SeriesK::from_coeffs(0, vec![rat_i(1), rat_i(0), rat_i(-1)], order, Var::K)
}

/// Criterion 1: the printed small-k series of the high-temperature C(0,2),
/// both in the k variable and after the quadratic change of variable
/// k = 2 alpha / (1 + alpha^2).
pub fn criterion_1() -> CriterionReport {
    run(1, "printed series reproduction", |d| {
        let c = corr_row(2, Regime::HighT, 18)?.series;
        let want_k: [(i64, Rat); 7] = [
            (2, rat(1, 8)),
            (4, rat(1, 16)),
            (6, rat(39, 1024)),
            (8, rat(53, 2048)),
            (10, rat(1235, 65536)),
            (12, rat(1887, 131072)),
            (14, rat(382291, 33554432)),
        ];
        for (p, w) in &want_k {
            let got = c.coeff(*p);
            check(d, &got == w, || format!("k^{p}: got {got}, want {w}"));
        }
        // alpha substitution
        let g = SeriesK::monomial(rat(2, 1), 1, 18, Var::K)
            .div(&SeriesK::from_coeffs(0, vec![Rat::one(), Rat::zero(), Rat::one()], 18, Var::K))?;
        let ca = c.compose(&g)?;
        let want_a: [(i64, Rat); 7] = [
            (2, rat(1, 2)),
            (6, rat(-1, 16)),
            (10, rat(-1, 64)),
            (14, rat(-13, 2048)),
            (4, Rat::zero()),
            (8, Rat::zero()),
            (12, Rat::zero()),
        ];
        for (p, w) in &want_a {
            let got = ca.coeff(*p);
            check(d, &got == w, || format!("alpha^{p}: got {got}, want {w}"));
        }
        Ok(())
    })
}

/// Verify the two column-correlation closed forms C(2,0), C(3,0) against the
/// quadratic recursion extended below the diagonal.  The odd sub-diagonal
/// high-temperature entries are imaginary; writing them as i times a rational
/// series keeps the whole cascade rational.  Returns one message per failed
/// step.
fn below_diagonal_cascade(order: i64, d: &mut Vec<String>) -> Result<(), SeriesError> {
    let fx = builtin_fixtures();
    let f20 = elliptic_poly_eval(&fx[&(2, 0, Regime::LowT, false)], order)?;
    let f30 = elliptic_poly_eval(&fx[&(3, 0, Regime::LowT, false)], order)?;
    let low = |m: i64, n: i64| corr_fw(m, n, Regime::LowT, order).map(|c| c.series);
    let high = |m: i64, n: i64| corr_fw(m, n, Regime::HighT, order).map(|c| c.series);
    let k = SeriesK::monomial(Rat::one(), 1, order, Var::K);
    let k2 = SeriesK::monomial(Rat::one(), 2, order, Var::K);
    let u = one_minus_t(order).pow_rational(&rat(1, 2))?; // C(1,0) low
    let (l01, l11, l12, l22) = (low(0, 1)?, low(1, 1)?, low(1, 2)?, low(2, 2)?);
    let (h11, h22) = (high(1, 1)?, high(2, 2)?);
    // C(1,0) = sqrt(1-t), doubly determined
    let u_a = (&l11.mul(&l11) - &h11.mul(&h11)).div(&l12)?;
    check(d, u_a.agrees_with(&u), || "C(1,0) from R2(1,1) is not sqrt(1-t)".into());
    let corner = &(&l11 - &l01.mul(&u)) - &k.mul(&h11);
    check(d, corner.is_zero(), || "corner identity for C(1,0) fails".into());
    // g = -i Ch(1,0) from R1(1,0) with the C(2,0) closed form; the exact
    // square root existing is itself a consistency check
    let g2 = (&f20 - &(k2.mul(&h11.mul(&h11)) + u.mul(&u))).div(&k2)?;
    let g = g2.pow_rational(&rat(1, 2))?;
    // Ch(2,0) from R2(1,0), Cl(2,1) from R3(1,1) (cross-checked by R1(1,1)),
    // w = -i Ch(2,1) from R3(1,0)
    let hc20 = &(l11.mul(&l11) - u.mul(&u)) - &g2;
    let c21 = (&l11.mul(&l22) - &k.mul(&h11).mul(&h22)).div(&l12)?;
    let r11 = &l11.mul(&l11) - &(l01.mul(&c21) + k2.mul(&h11.mul(&h11)));
    check(d, r11.is_zero(), || "R1(1,1) cross-check of C(2,1) fails".into());
    let w = (&(l11.mul(&f20) - u.mul(&c21)).div(&k)? - &h11.mul(&hc20)).div(&g)?;
    // R1(2,0) predicts C(3,0)
    let c30 = (&f20.mul(&f20) - &k2.mul(&(hc20.mul(&hc20) + w.mul(&w)))).div(&u)?;
    check(d, c30.agrees_with(&f30), || "C(3,0) closed form differs from recursion".into());
    // closure: R2(2,0), R2(2,1), R1(2,1) determine the remaining entries and
    // R3(2,0) must then vanish identically
    let h30g = (&(hc20.mul(&hc20) - f20.mul(&f20)) + &c21.mul(&c21))
        .div(&g)?
        .scale(&-Rat::one());
    let h31 = (&(f20.mul(&l22) - c21.mul(&c21)) - &w.mul(&w)).div(&h11)?;
    let c31 = (&c21.mul(&c21) + &k2.mul(&(w.mul(&w) + hc20.mul(&h22)))).div(&l11)?;
    let lhs = k.mul(&(&hc20.mul(&h31) + &w.mul(&h30g)));
    let rhs = &f20.mul(&c31) - &c21.mul(&c30);
    check(d, (&lhs - &rhs).is_zero(), || "R3(2,0) closure fails".into());
    Ok(())
}

/// Criterion 2: every closed-form fixture equals a computed route through
/// order 24.
pub fn criterion_2() -> CriterionReport {
    run(2, "closed-form fixtures", |d| {
        let order = 24;
        for ((m, n, regime, tilde), poly) in &builtin_fixtures() {
            if m > n {
                continue; // handled by the below-diagonal cascade
            }
            let want = elliptic_poly_eval(poly, order)?;
            let got = corr_fw(*m, *n, *regime, order)?;
            check(d, got.tilde == *tilde, || {
                format!("({m},{n},{regime:?}) tilde flag mismatch")
            });
            check(d, got.series.agrees_with(&want), || {
                format!("({m},{n},{regime:?},{tilde}) fixture differs from determinant route")
            });
        }
        below_diagonal_cascade(order, d)?;
        Ok(())
    })
}

/// Criterion 3: the row/diagonal Toeplitz, general-determinant, and quadratic
/// recursion routes agree for all 0 <= M <= N <= 5 in both regimes through
/// order 20, and the odd high-temperature correlations vanish through
/// order 30.
pub fn criterion_3() -> CriterionReport {
    run(3, "route equivalence", |d| {
        let order = 20;
        let rt = corr_recursion_table(5, 5, order)?;
        for (id, m, n, r) in &rt.residuals {
            check(d, r.is_zero(), || format!("recursion residual R{id}({m},{n}) nonzero"));
        }
        for m in 0..=5i64 {
            for n in m..=5i64 {
                let fl = corr_fw(m, n, Regime::LowT, order)?.series;
                let fh = corr_fw(m, n, Regime::HighT, order)?.series;
                check(d, rt.low[&(m, n)].agrees_with(&fl), || {
                    format!("low ({m},{n}): recursion vs determinant differ")
                });
                if (m + n) % 2 == 0 {
                    check(d, rt.high[&(m, n)].agrees_with(&fh), || {
                        format!("high ({m},{n}): recursion vs determinant differ")
                    });
                } else {
                    check(d, rt.high[&(m, n)].is_zero(), || {
                        format!("high ({m},{n}): recursion entry should vanish")
                    });
                }
                if m == 0 {
                    let row_low = corr_row(n, Regime::LowT, order)?.series;
                    check(d, row_low.agrees_with(&fl), || {
                        format!("low (0,{n}): row vs determinant differ")
                    });
                    if n % 2 == 0 {
                        let row_high = corr_row(n, Regime::HighT, order)?.series;
                        check(d, row_high.agrees_with(&fh), || {
                            format!("high (0,{n}): row vs determinant differ")
                        });
                    }
                }
                if m == n {
                    for (regime, f) in [(Regime::LowT, &fl), (Regime::HighT, &fh)] {
                        let diag = corr_diag(n, regime, order)?.series;
                        check(d, diag.agrees_with(f), || {
                            format!("{regime:?} ({n},{n}): diagonal vs determinant differ")
                        });
                    }
                }
            }
        }
        for n in [1i64, 3, 5] {
            let c = corr_row(n, Regime::HighT, 30)?;
            check(d, c.series.is_zero() && !c.tilde, || {
                format!("high (0,{n}) should vanish identically through order 30")
            });
        }
        Ok(())
    })
}

/// The equation family governing `C(M,N)` in the given regime.
pub fn family_for(m: i64, n: i64, regime: Regime) -> OdeFamily {
    match regime {
        Regime::LowT => OdeFamily::Low,
        Regime::HighT => {
            if (m + n) % 2 == 0 {
                OdeFamily::HighEven
            } else {
                OdeFamily::HighOdd
            }
        }
    }
}

/// Criterion 4: the sigma-form residuals of all four equation families
/// vanish through order 24 for 0 <= M <= N <= 6, including the reduction of
/// the diagonal case to the Jimbo-Miwa equation.
pub fn criterion_4() -> CriterionReport {
    run(4, "ODE verification sweep", |d| {
        let order = 24;
        for m in 0..=6i64 {
            for n in m..=6i64 {
                for regime in [Regime::LowT, Regime::HighT] {
                    let c = corr_fw(m, n, regime, order)?.series;
                    let fam = family_for(m, n, regime);
                    let r = ode_residual_series(fam, m, n, &c)?;
                    check(d, r.is_zero(), || {
                        format!("{fam:?} ({m},{n}) residual nonzero from k^{}", r.valuation)
                    });
                    let ro = okamoto_residual_series(fam, m, n, &c)?;
                    check(d, ro.is_zero(), || {
                        format!("{fam:?} ({m},{n}) Okamoto residual nonzero")
                    });
                    if m == n {
                        // Jimbo-Miwa reduction; the sigma convention matches
                        // the regime (low shift for T < Tc)
                        let sig = match regime {
                            Regime::LowT => sigma_from_corr(&c, OdeFamily::Low)?,
                            Regime::HighT => sigma_from_corr(&c, OdeFamily::Diagonal)?,
                        };
                        let (s0, sp, spp) = jet(&sig);
                        let t = SeriesK::monomial(Rat::one(), 2, spp.order, Var::K);
                        let rd = ode_residual(OdeFamily::Diagonal, m, n, &t, &s0, &sp, &spp);
                        check(d, rd.is_zero(), || {
                            format!("Diagonal ({n},{n}) {regime:?} residual nonzero")
                        });
                    }
                }
            }
        }
        Ok(())
    })
}

/// Criterion 5: the Cosgrove-parameter fit recovers each family with at
/// least 6 surplus consistent orders, and maps to the canonical Okamoto
/// parameter class.
pub fn criterion_5() -> CriterionReport {
    run(5, "Cosgrove/Okamoto round-trip", |d| {
        let order = 30;
        for m in 0..=4i64 {
            for n in m..=4i64 {
                if m == 0 && n == 0 {
                    continue; // C(0,0) = 1 has a degenerate (constant) sigma
                }
                for regime in [Regime::LowT, Regime::HighT] {
                    let c = corr_fw(m, n, regime, order)?.series;
                    let fam = family_for(m, n, regime);
                    let sigma = sigma_from_corr(&c, fam)?;
                    let Some(fit) = cosgrove_fit(&sigma)? else {
                        check(d, false, || format!("{fam:?} ({m},{n}): fit failed"));
                        continue;
                    };
                    check(d, fit.surplus >= 6, || {
                        format!("{fam:?} ({m},{n}): surplus {} < 6", fit.surplus)
                    });
                    let Some(cls) = cosgrove_to_okamoto(&fit.c) else {
                        check(d, false, || {
                            format!("{fam:?} ({m},{n}): quartic does not split")
                        });
                        continue;
                    };
                    let want = okamoto_class(&okamoto_params(fam, m, n));
                    check(d, cls == want, || {
                        format!("{fam:?} ({m},{n}): recovered class differs")
                    });
                }
            }
        }
        Ok(())
    })
}

/// The four factors of the odd row correlation C(0,5) as series.
pub fn c05_factors(order: i64) -> Result<[SeriesK; 4], SeriesError> {
    let e = elliptic_e(order / 2 + 1).truncated(order);
    let k = elliptic_k(order / 2 + 1).truncated(order);
    let t = tmon(Rat::one(), 1, order);
    let one = SeriesK::one(order, Var::K);
    let omt = one_minus_t(order);
    let f1 = (&t.scale(&rat_i(2)) - &one).mul(&e) + omt.mul(&k);
    let f2 = &(&one + &t).mul(&e) - &omt.mul(&k);
    let f3 = (&t - &one.scale(&rat_i(2))).mul(&e) + omt.mul(&k).scale(&rat_i(2));
    let f4 = (&e.mul(&e).scale(&rat_i(3))
        + &(&t - &one.scale(&rat_i(2))).mul(&e).mul(&k).scale(&rat_i(2)))
        + omt.mul(&k).mul(&k);
    Ok([f1, f2, f3, f4])
}

/// Criterion 6: the four-factor structure of C(0,5), the per-factor Okamoto
/// equations, and the symmetric-Toeplitz split identity.
pub fn criterion_6() -> CriterionReport {
    run(6, "factorization", |d| {
        let order = 20;
        let work = order + 16;
        let fs = c05_factors(work)?;
        // product reproduces the correlation up to the stated constant
        let c05 = corr_row(5, Regime::LowT, order)?.series;
        let prod = fs[0].mul(&fs[1]).mul(&fs[2]).mul(&fs[3]);
        let pref = one_minus_t(work).pow_rational(&rat(1, 2))?.mul_monomial(&Rat::one(), -12);
        let recon = prod.mul(&pref).scale(&rat(256, 81)).truncated(order);
        check(d, c05.agrees_with(&recon), || {
            "C(0,5) != 256/81 (1-t)^{1/2} t^{-6} f1 f2 f3 f4".into()
        });
        // each factor's h satisfies the Okamoto equation with n = (1, 3/2, -1/2, 0)
        let np = [rat_i(1), rat(3, 2), rat(-1, 2), Rat::zero()];
        let nn = 5i64;
        let shifts = [
            (rat_i(-(nn * nn + 3)) / rat_i(16), rat_i(nn * nn + 3) / rat_i(32)),
            (rat_i(-(nn * nn - 1)) / rat_i(16), rat_i(nn * nn + 3) / rat_i(32)),
            (rat_i(-(nn * nn - 1)) / rat_i(16), rat_i(nn * nn - 5) / rat_i(32)),
            (rat_i(-(nn * nn - 5)) / rat_i(16), rat_i(nn * nn - 5) / rat_i(32)),
        ];
        for (i, (f, (a, b))) in fs.iter().zip(shifts.iter()).enumerate() {
            let h = crate::painleve::h_from_series(&f.truncated(2 * order), a, b)?;
            let r = crate::boundary::okamoto_residual_of_h(&np, &h).truncated(2 * order - 8);
            check(d, r.is_zero(), || format!("factor f{} Okamoto residual nonzero", i + 1));
        }
        // Wilf split of the odd-separation symmetric Toeplitz determinants
        for (m, n) in [(1i64, 2i64), (0, 3), (1, 4), (0, 5)] {
            let sep = n - m;
            let dim = n as usize;
            let ctx = ElementCtx::fw(sep);
            let mut els = Vec::with_capacity(dim);
            for idx in 0..dim as i64 {
                let a = matrix_element(MatrixElementFamily::FwOdd, idx, &ctx, order)?;
                let am = matrix_element(MatrixElementFamily::FwOdd, -idx, &ctx, order)?;
                check(d, a.agrees_with(&am), || {
                    format!("({m},{n}): element {idx} not symmetric")
                });
                els.push(a);
            }
            let full = det_series(&SeriesMatrix::from_fn(dim, |i, j| {
                Ok(els[i.abs_diff(j)].clone())
            })?)?;
            let (p, q) = wilf_factor(&els)?;
            check(d, p.mul(&q).agrees_with(&full), || {
                format!("({m},{n}): Wilf product differs from determinant")
            });
        }
        Ok(())
    })
}

/// Criterion 7: boundary-condition branch membership, resonance locations,
/// and the one-parameter extension coefficients.
pub fn criterion_7() -> CriterionReport {
    run(7, "boundary recursion", |d| {
        let low_cases: [(i64, i64, Rat); 5] = [
            (0, 1, rat(-1, 64)),
            (0, 2, rat(1, 256)),
            (1, 2, rat(-1, 256)),
            (0, 3, rat(-9, 16384)),
            (1, 3, rat(15, 16384)),
        ];
        for (m, n, p) in &low_cases {
            let (m, n) = (*m, *n);
            let order_k = (2 * (n + 1) + 10).max(20);
            let c = corr_fw(m, n, Regime::LowT, order_k)?.series;
            let sol = match match_branch(OdeFamily::Low, m, n, &c, (n + 4) as usize) {
                Ok(s) => s,
                Err(e) => {
                    check(d, false, || format!("low ({m},{n}): {e}"));
                    continue;
                }
            };
            let np = okamoto_params(OdeFamily::Low, m, n);
            for b in [1usize, 4] {
                check(d, resonance_index(b, &np) == Some((n + 1) as usize), || {
                    format!("low ({m},{n}): branch {b} resonance not at {}", n + 1)
                });
                check(d, branch_seed(b, &np).is_some(), || {
                    format!("low ({m},{n}): branch {b} seed degenerate")
                });
            }
            check(d, sol.resonances.contains(&((n + 1) as usize)), || {
                format!("low ({m},{n}): no free constant at order {}", n + 1)
            });
            for j in 2..=n as usize {
                check(d, sol.coeffs[j].is_zero(), || {
                    format!("low ({m},{n}): c_{j} should vanish")
                });
            }
            let want = -rat_i(n + 1) * p;
            check(d, sol.coeffs[(n + 1) as usize] == want, || {
                format!("low ({m},{n}): resonant coefficient != -(N+1) lambda^2 value")
            });
            let lam = lambda_coefficient_low(&c, n)?;
            check(d, &lam == p, || format!("low ({m},{n}): lambda^2 coefficient {lam} != {p}"));
        }
        for (m, n) in [(0i64, 2i64), (1, 3), (0, 4)] {
            let order_k = 2 * (n + 2) + 12;
            let c = corr_fw(m, n, Regime::HighT, order_k)?.series;
            let np = okamoto_params(OdeFamily::HighEven, m, n);
            check(d, resonance_index(2, &np) == Some((n + 2) as usize), || {
                format!("high ({m},{n}): branch 2 resonance not at {}", n + 2)
            });
            match match_branch(OdeFamily::HighEven, m, n, &c, (n + 5) as usize) {
                Ok(sol) => {
                    check(d, sol.resonances.contains(&((n + 2) as usize)), || {
                        format!("high ({m},{n}): no free constant at order {}", n + 2)
                    });
                    check(d, sol.obstruction.is_none(), || {
                        format!("high ({m},{n}): unexpected obstruction")
                    });
                }
                Err(e) => check(d, false, || format!("high ({m},{n}): {e}")),
            }
        }
        Ok(())
    })
}

/// Criterion 8: the hypergeometric identity suites, including the reduction
/// of the special complete elliptic integral of the third kind, all hold
/// exactly through order 30.
pub fn criterion_8() -> CriterionReport {
    run(8, "identity suites", |d| {
        let checks = verify_hypergeometric_identities(30)?;
        check(d, checks.len() >= 38, || {
            format!("only {} identities checked", checks.len())
        });
        for c in &checks {
            check(d, c.ok, || format!("identity {} fails", c.name));
        }
        Ok(())
    })
}

/// Criterion 9: the sigma shift maps low-temperature solutions onto the
/// swapped high-temperature equation, and the t -> 1/t dual transformation
/// fixes every family (weight 0) at generic rational points.
pub fn criterion_9() -> CriterionReport {
    run(9, "symmetry checks", |d| {
        for (m, n) in [(0i64, 2i64), (1, 3), (2, 4)] {
            let c = corr_fw(m, n, Regime::LowT, 18)?.series;
            let s = sigma_from_corr(&c, OdeFamily::Low)?;
            let dd = rat(n * n - m * m, 4);
            let shift =
                SeriesK::from_coeffs(0, vec![-dd.clone(), Rat::zero(), dd.clone()], 18, Var::K);
            let (s0, sp, spp) = jet(&(&s + &shift));
            let t = SeriesK::monomial(Rat::one(), 2, spp.order, Var::K);
            let r = ode_residual(OdeFamily::HighEven, n, m, &t, &s0, &sp, &spp);
            check(d, r.is_zero(), || {
                format!("involution ({m},{n}): transformed sigma fails swapped equation")
            });
            check(d, kw_involution_check(m, n, 20), || {
                format!("involution ({m},{n}): random-point identity fails")
            });
        }
        for (fam, m, n) in [
            (OdeFamily::Low, 1i64, 2i64),
            (OdeFamily::Diagonal, 2, 2),
            (OdeFamily::HighEven, 1, 3),
            (OdeFamily::HighOdd, 1, 2),
        ] {
            check(d, kw_dual_power(fam, m, n, 20) == Some(0), || {
                format!("{fam:?} ({m},{n}): dual transformation not weight 0")
            });
        }
        Ok(())
    })
}

/// Criterion 10: perturbed inputs must fail, at the order the perturbation
/// enters, and an inconsistent boundary seed must surface as an obstruction.
pub fn criterion_10() -> CriterionReport {
    run(10, "negative controls", |d| {
        // perturb a correlation at t^6: the sigma-form residual must become
        // nonzero at t^{7} (low family) resp. t^{5} (high family)
        let c = corr_fw(0, 2, Regime::LowT, 20)?.series;
        let bad = &c + &tmon(rat(1, 7), 6, 20);
        let r = ode_residual_series(OdeFamily::Low, 0, 2, &bad)?;
        check(d, !r.is_zero(), || "perturbed low series passed the ODE".into());
        if !r.is_zero() {
            check(d, r.valuation == 14, || {
                format!("perturbed low residual starts at k^{}, expected k^14", r.valuation)
            });
        }
        let ch = corr_fw(0, 2, Regime::HighT, 20)?.series;
        let badh = &ch + &tmon(rat(-1, 5), 6, 20);
        let rh = ode_residual_series(OdeFamily::HighEven, 0, 2, &badh)?;
        check(d, !rh.is_zero(), || "perturbed high series passed the ODE".into());
        if !rh.is_zero() {
            check(d, rh.valuation == 10, || {
                format!("perturbed high residual starts at k^{}, expected k^10", rh.valuation)
            });
        }
        // a seed off the branch produces a nonzero obstruction immediately
        let np = okamoto_params(OdeFamily::Low, 0, 1);
        let (c0, c1) = branch_seed(1, &np).expect("seed");
        let sol = solve_analytic(&np, &c0, &(&c1 + rat_i(1)), 8, false, |_| Rat::zero())?;
        check(d, sol.obstruction.is_some(), || {
            "inconsistent seed not reported as an obstruction".into()
        });
        Ok(())
    })
}

/// Run all ten criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
