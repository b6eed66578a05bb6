//! Sigma-form nonlinear ODE families for the correlations, the Cosgrove
//! normal form with its reduction to the Okamoto canonical equation, and the
//! Kramers-Wannier-type symmetries of the ODE families.
//!
//! Everything is exact: series residuals are checked coefficient by
//! coefficient, the Cosgrove parameter fit is an exact linear solve with a
//! consistency surplus, and the symmetry checks evaluate the defining
//! polynomials at generic rational points.

use crate::series::{rat, rat_i, Rat, SeriesError, SeriesK, Var};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// The four ODE families: the diagonal equation (parameter N), the
/// low-temperature family, the high-temperature even family, and the
/// high-temperature odd family for the tilde correlations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OdeFamily {
    #[serde(rename = "diagonal")]
    Diagonal,
    #[serde(rename = "low")]
    Low,
    #[serde(rename = "high-even")]
    HighEven,
    #[serde(rename = "high-odd")]
    HighOdd,
}

/// Ring interface shared by exact rationals and truncated series, so each
/// ODE polynomial is written down exactly once.
pub trait RingElem: Clone {
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_scale(&self, c: &Rat) -> Self;
    /// A constant with the same shape metadata as `self`.
    fn r_const(&self, c: &Rat) -> Self;
}

impl RingElem for Rat {
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_scale(&self, c: &Rat) -> Self {
        self * c
    }
    fn r_const(&self, c: &Rat) -> Self {
        c.clone()
    }
}

impl RingElem for SeriesK {
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_scale(&self, c: &Rat) -> Self {
        self.scale(c)
    }
    fn r_const(&self, c: &Rat) -> Self {
        SeriesK::constant(c.clone(), self.order, self.var)
    }
}

fn sbar(m: i64, n: i64) -> Rat {
    if (m + n) % 2 == 0 {
        Rat::one()
    } else {
        Rat::zero()
    }
}

/// Residual of the family ODE at the point `(t, sigma, sigma', sigma'')`;
/// identically zero on solutions.
pub fn ode_residual<T: RingElem>(family: OdeFamily, m: i64, n: i64, t: &T, s: &T, sp: &T, spp: &T) -> T {
    let one = t.r_const(&Rat::one());
    let m2 = rat_i(m * m);
    let n2 = rat_i(n * n);
    // t sigma' - sigma, (t-1) sigma' - sigma, t(t-1) sigma''
    let a = t.r_mul(sp).r_sub(s);
    let b = t.r_sub(&one).r_mul(sp).r_sub(s);
    let tt = t.r_mul(&t.r_sub(&one)).r_mul(spp);
    let tt2 = tt.r_mul(&tt);
    match family {
        OdeFamily::Diagonal => {
            // (t(t-1)s'')^2 = N^2 B^2 - 4 s' (B - 1/4) A
            let rhs = b
                .r_mul(&b)
                .r_scale(&n2)
                .r_sub(&sp.r_mul(&b.r_sub(&t.r_const(&rat(1, 4)))).r_mul(&a).r_scale(&rat_i(4)));
            tt2.r_sub(&rhs)
        }
        OdeFamily::Low => {
            let sb = sbar(m, n);
            tt2.r_add(&sp.r_mul(&a).r_mul(&b).r_scale(&rat_i(4)))
                .r_sub(&a.r_mul(&a).r_scale(&m2))
                .r_sub(&sp.r_mul(sp).r_scale(&n2))
                .r_add(&sp.r_mul(&a).r_scale(&(&m2 + &n2 - sb)))
        }
        OdeFamily::HighEven => {
            let d = &n2 - &m2;
            tt2.r_add(&sp.r_mul(&a).r_mul(&b).r_scale(&rat_i(4)))
                .r_sub(&a.r_mul(&a).r_scale(&m2))
                .r_add(&sp.r_mul(&a).r_scale(&(&n2 + &m2 - Rat::one())))
                .r_sub(&sp.r_mul(sp).r_scale(&n2))
                .r_sub(&a.r_scale(&(&d * rat(1, 4))))
                .r_sub(&sp.r_scale(&(&d * rat(1, 4))))
                .r_sub(&t.r_const(&(&d * &d * rat(1, 16))))
        }
        OdeFamily::HighOdd => {
            let d = &n2 - &m2;
            tt2.r_add(&sp.r_mul(&a).r_mul(&b).r_scale(&rat_i(4)))
                .r_sub(&a.r_mul(&a).r_scale(&m2))
                .r_add(&sp.r_mul(&a).r_scale(&(&n2 + &m2 - rat_i(2))))
                .r_sub(&sp.r_mul(sp).r_scale(&n2))
                .r_sub(&a.r_scale(&((&d - Rat::one()) * rat(1, 4))))
                .r_sub(&sp.r_scale(&((&d + Rat::one()) * rat(1, 4))))
                .r_sub(&t.r_const(&(&d * &d * rat(1, 16))))
                .r_add(&t.r_const(&((&m2 + &n2 - Rat::one()) * rat(1, 8))))
        }
    }
}

/// Residual of the six-parameter Cosgrove-Scoufis equation at a point.
pub fn cosgrove_residual<T: RingElem>(c: &[Rat; 6], t: &T, y: &T, yp: &T, ypp: &T) -> T {
    let one = t.r_const(&Rat::one());
    let a = t.r_mul(yp).r_sub(y); // t y' - y
    let tt = t.r_mul(&t.r_sub(&one)).r_mul(ypp);
    let inner = yp
        .r_mul(&a)
        .r_mul(&a)
        .r_sub(&yp.r_mul(yp).r_mul(&a))
        .r_add(&a.r_mul(&a).r_scale(&c[0]))
        .r_add(&yp.r_mul(&a).r_scale(&c[1]))
        .r_add(&yp.r_mul(yp).r_scale(&c[2]))
        .r_add(&a.r_scale(&c[3]))
        .r_add(&yp.r_scale(&c[4]))
        .r_add(&t.r_const(&c[5]));
    tt.r_mul(&tt).r_add(&inner.r_scale(&rat_i(4)))
}

/// Residual of the Okamoto canonical equation with parameters `n1..n4`.
pub fn okamoto_residual<T: RingElem>(np: &[Rat; 4], t: &T, h: &T, hp: &T, hpp: &T) -> T {
    let one = t.r_const(&Rat::one());
    let prod: Rat = np.iter().product();
    let tt = t.r_mul(&t.r_sub(&one)).r_mul(hpp);
    let first = hp.r_mul(&tt).r_mul(&tt);
    let two_t_m1 = t.r_scale(&rat_i(2)).r_sub(&one);
    let mid = hp
        .r_mul(&h.r_scale(&rat_i(2)).r_sub(&two_t_m1.r_mul(hp)))
        .r_add(&t.r_const(&prod));
    let mut last = one.clone();
    for ni in np {
        last = last.r_mul(&hp.r_add(&t.r_const(&(ni * ni))));
    }
    first.r_add(&mid.r_mul(&mid)).r_sub(&last)
}

/// `t * d/dt log c` in k-units, valid for series of either parity.
pub fn t_dlog(c: &SeriesK) -> Result<SeriesK, SeriesError> {
    let v = c.valuation;
    let u = c.mul_monomial(&Rat::one(), -v);
    let mut d = u.dlog_dt()?;
    d.var = Var::K;
    // t dlog c = v/2 + t u'/u
    Ok(d.mul_monomial(&Rat::one(), 2) + SeriesK::constant(rat(v, 2), d.order + 2, Var::K))
}

/// `t (t-1) d/dt log c  + a t + b` in k-units.
pub fn h_from_series(c: &SeriesK, a: &Rat, b: &Rat) -> Result<SeriesK, SeriesError> {
    let td = t_dlog(c)?;
    let tm1 = SeriesK::from_coeffs(0, vec![-Rat::one(), Rat::zero(), Rat::one()], td.order, Var::K);
    Ok(tm1.mul(&td)
        + SeriesK::monomial(a.clone(), 2, td.order, Var::K)
        + SeriesK::constant(b.clone(), td.order, Var::K))
}

/// The sigma variable of the family: `t (t-1) d/dt log c - shift` with
/// shift `t/4` for the low-temperature family and `1/4` otherwise.
pub fn sigma_from_corr(c: &SeriesK, family: OdeFamily) -> Result<SeriesK, SeriesError> {
    let (a, b) = match family {
        OdeFamily::Low => (rat(-1, 4), Rat::zero()),
        OdeFamily::Diagonal | OdeFamily::HighEven | OdeFamily::HighOdd => (Rat::zero(), rat(-1, 4)),
    };
    h_from_series(c, &a, &b)
}

/// d/dt in k-units (t = k^2); valid for even-support series.
pub fn dt(s: &SeriesK) -> SeriesK {
    let mut d = s.deriv_k().mul_monomial(&rat(1, 2), -1);
    d.var = Var::K;
    d
}

/// Triple `(sigma, sigma', sigma'')` in k-units.
pub fn jet(s: &SeriesK) -> (SeriesK, SeriesK, SeriesK) {
    let sp = dt(s);
    let spp = dt(&sp);
    (s.clone(), sp, spp)
}

/// Residual series of the family ODE applied to a correlation series.
pub fn ode_residual_series(
    family: OdeFamily,
    m: i64,
    n: i64,
    corr: &SeriesK,
) -> Result<SeriesK, SeriesError> {
    let sigma = sigma_from_corr(corr, family)?;
    let (s, sp, spp) = jet(&sigma);
    let t = SeriesK::monomial(Rat::one(), 2, spp.order, Var::K);
    Ok(ode_residual(family, m, n, &t, &s, &sp, &spp))
}

/// Report of the exact linear solve for the Cosgrove parameters.
#[derive(Clone, Debug)]
pub struct CosgroveFit {
    pub c: [Rat; 6],
    /// Equations beyond the six needed that the solution also satisfies.
    pub surplus: usize,
}

/// Fit `c5..c10` so that the Cosgrove equation annihilates `y`; exact linear
/// solve over the coefficient equations with a consistency surplus.
pub fn cosgrove_fit(y: &SeriesK) -> Result<Option<CosgroveFit>, SeriesError> {
    let (y0, yp, ypp) = jet(y);
    let t = SeriesK::monomial(Rat::one(), 2, ypp.order, Var::K);
    let one = SeriesK::one(ypp.order, Var::K);
    let a = t.mul(&yp) - y0.clone();
    let tt = t.mul(&(t.clone() - one.clone())).mul(&ypp);
    let base = tt.mul(&tt) + (yp.mul(&a).mul(&a) - yp.mul(&yp).mul(&a)).scale(&rat_i(4));
    let cols = [
        a.mul(&a).scale(&rat_i(4)),
        yp.mul(&a).scale(&rat_i(4)),
        yp.mul(&yp).scale(&rat_i(4)),
        a.scale(&rat_i(4)),
        yp.scale(&rat_i(4)),
        one.scale(&rat_i(4)),
    ];
    let lo = cols.iter().map(|s| s.valuation).chain([base.valuation]).min().unwrap();
    let hi = cols.iter().map(|s| s.order).chain([base.order]).min().unwrap();
    // Gaussian elimination on the 6-unknown system, one equation per power.
    let mut rows: Vec<(Vec<Rat>, Rat)> = (lo..=hi)
        .map(|p| (cols.iter().map(|s| s.coeff(p)).collect(), -base.coeff(p)))
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in 0..6 {
        let Some(pi) = (0..rows.len()).find(|&ri| !used[ri] && !rows[ri].0[col].is_zero()) else {
            return Ok(None); // under-determined
        };
        used[pi] = true;
        pivots.push((col, pi));
        let (prow, prhs) = rows[pi].clone();
        for (ri, (row, rhs)) in rows.iter_mut().enumerate() {
            if used[ri] || row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &prow[col];
            for c in 0..6 {
                row[c] = &row[c] - &(&f * &prow[c]);
            }
            *rhs = &*rhs - &(&f * &prhs);
        }
    }
    // consistency: every non-pivot row must be fully eliminated
    let mut surplus = 0usize;
    for (ri, (row, rhs)) in rows.iter().enumerate() {
        if used[ri] {
            continue;
        }
        if row.iter().any(|c| !c.is_zero()) || !rhs.is_zero() {
            return Ok(None);
        }
        surplus += 1;
    }
    let mut c = [(); 6].map(|_| Rat::zero());
    for &(col, ri) in pivots.iter().rev() {
        let (row, rhs) = &rows[ri];
        let mut acc = rhs.clone();
        for j in (col + 1)..6 {
            acc = &acc - &(&row[j] * &c[j]);
        }
        c[col] = &acc / &row[col];
    }
    Ok(Some(CosgroveFit { c, surplus }))
}

/// Canonical invariant of an Okamoto parameter set under permutations and
/// even sign changes: the sorted squares plus the product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkamotoClass {
    pub squares: [Rat; 4],
    pub product: Rat,
}

pub fn okamoto_class(np: &[Rat; 4]) -> OkamotoClass {
    let mut squares = np.clone().map(|x| &x * &x);
    squares.sort();
    OkamotoClass { squares, product: np.iter().product() }
}

/// Rational roots (with multiplicity) of a monic quartic
/// `z^4 + p3 z^3 + p2 z^2 + p1 z + p0`; None if it does not split.
fn quartic_rational_roots(p: &[Rat; 4]) -> Option<[Rat; 4]> {
    let mut coeffs: Vec<Rat> = vec![p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), Rat::one()];
    let mut roots = Vec::new();
    while coeffs.len() > 1 {
        let deg = coeffs.len() - 1;
        // candidates r = num/den with num | numerator(c0), den | numerator(lead)
        // after clearing denominators
        let mut lcm = BigInt::one();
        for c in &coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> =
            coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        if ints[0].is_zero() {
            roots.push(Rat::zero());
            coeffs.remove(0);
            continue;
        }
        let c0 = ints[0].abs();
        let cl = ints[deg].abs();
        let mut found = None;
        'outer: for num in divisors(&c0) {
            for den in divisors(&cl) {
                for sgn in [1i64, -1] {
                    let cand = Rat::new(&num * BigInt::from(sgn), den.clone());
                    let mut val = Rat::zero();
                    for c in coeffs.iter().rev() {
                        val = &val * &cand + c;
                    }
                    if val.is_zero() {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
        }
        let r = found?;
        // synthetic division by (z - r)
        let mut quot = vec![Rat::zero(); deg];
        let mut carry = Rat::zero();
        for i in (0..deg).rev() {
            carry = &coeffs[i + 1] + &(&carry * &r);
            quot[i] = carry.clone();
        }
        roots.push(r);
        coeffs = quot;
    }
    roots.try_into().ok()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // n is small in practice (products of squared quarter-integers)
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out
}

/// Reduce Cosgrove parameters to an Okamoto class: shift away `c5, c6`, read
/// off the elementary symmetric functions of the squared parameters, and
/// split the quartic over the rationals.
pub fn cosgrove_to_okamoto(c: &[Rat; 6]) -> Option<OkamotoClass> {
    let [c5, c6, c7, c8, c9, c10] = c.clone();
    let a = -&c5;
    let b = &c6 * rat(1, 2) + &c5;
    let t7 = &c7 + &b;
    let t8 = &c8 - &(&a * &b) * rat_i(2) - &a * &a - &(&b * &c5) * rat_i(2) + &a * &c6;
    let t9 = &c9 + &b * &b + &(&a * &b) * rat_i(2) - &b * &c6 + &(&a * &c7) * rat_i(2);
    let t10 = &c10 + &(&a * &b) * &b + &(&a * &a) * &b + &(&b * &b) * &c5 - &(&a * &b) * &c6
        + &(&a * &a) * &c7
        - &b * &c8
        + &a * &c9;
    // elementary symmetric functions of n_i^2
    let e1 = &t7 * rat_i(-4);
    let e2 = &t9 * rat_i(-4) - &t8 * rat_i(2);
    let e3 = &t10 * rat_i(-4);
    let e4 = &t8 * &t8;
    let roots = quartic_rational_roots(&[e4, -e3, e2, -e1])?;
    let mut squares = [(); 4].map(|_| Rat::zero());
    for (i, z) in roots.iter().enumerate() {
        if z.is_negative() {
            return None;
        }
        squares[i] = z.clone();
        // must be the square of a rational
        let n = sqrt_rat(z)?;
        let _ = n;
    }
    squares.sort();
    Some(OkamotoClass { squares, product: -&t8 })
}

pub(crate) fn sqrt_rat(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// The `h`-shift `(a, b)` with `h = t(t-1) d/dt log c + a t + b` for each
/// correlation family, and the Okamoto parameters it satisfies.
pub fn okamoto_shift(family: OdeFamily, m: i64, n: i64) -> (Rat, Rat) {
    let m2 = m * m;
    let n2 = n * n;
    match family {
        OdeFamily::Low | OdeFamily::Diagonal => {
            let sb = if (m + n) % 2 == 0 { 2 } else { 0 };
            (rat(-(m2 + 1), 4), rat(-(2 * (n2 - m2) - sb), 16))
        }
        OdeFamily::HighEven => (rat(-m2, 4), rat(-(n2 - m2 + 1), 8)),
        OdeFamily::HighOdd => (rat(-m2, 4), rat(-(n2 - m2), 8)),
    }
}

pub fn okamoto_params(family: OdeFamily, m: i64, n: i64) -> [Rat; 4] {
    match family {
        OdeFamily::Low | OdeFamily::Diagonal => {
            let sb = if (m + n) % 2 == 0 { 1 } else { 0 };
            [rat(n - sb, 2), rat(n + sb, 2), rat(m, 2), rat(-m, 2)]
        }
        OdeFamily::HighEven => [rat(m - 1, 2), rat(m + 1, 2), rat(n, 2), rat(-n, 2)],
        OdeFamily::HighOdd => [rat(m - 1, 2), rat(m + 1, 2), rat(n + 1, 2), rat(-(n - 1), 2)],
    }
}

/// Okamoto residual of a correlation series under the family shift.
pub fn okamoto_residual_series(
    family: OdeFamily,
    m: i64,
    n: i64,
    corr: &SeriesK,
) -> Result<SeriesK, SeriesError> {
    let (a, b) = okamoto_shift(family, m, n);
    let h = h_from_series(corr, &a, &b)?;
    let (h0, hp, hpp) = jet(&h);
    let t = SeriesK::monomial(Rat::one(), 2, hpp.order, Var::K);
    Ok(okamoto_residual(&okamoto_params(family, m, n), &t, &h0, &hp, &hpp))
}

/// `h` built from the determinant tau function,
/// `h = t(t-1) d/dt ln( t^{(n1n2+n3n4)/2} (1-t)^{(n1n2-n3n4)/2} tau )` with
/// `tau = (1-t)^{-MN/2} D_N`; the two power factors contribute
/// `p (t-1) + q t` with `p, q` the two half-products.
pub fn h_from_tau(d_n: &SeriesK, m: i64, n: i64, family: OdeFamily) -> Result<SeriesK, SeriesError> {
    let np = okamoto_params(family, m, n);
    let p = &(&np[0] * &np[1]) + &(&np[2] * &np[3]);
    let q = &(&np[0] * &np[1]) - &(&np[2] * &np[3]);
    let p = p * rat(1, 2);
    let q = q * rat(1, 2);
    let tau = d_n.mul(&crate::special::sqrt_one_minus_t(d_n.order).powi(-(m * n))?);
    let base = h_from_series(&tau, &Rat::zero(), &Rat::zero())?;
    let order = base.order;
    let lin = SeriesK::from_coeffs(0, vec![-&p, Rat::zero(), &p + &q], order, Var::K);
    Ok(base + lin)
}

fn rand_rat(rng: &mut SmallRng) -> Rat {
    let num = rng.gen_range(-40i64..=40);
    let den = rng.gen_range(1i64..=17);
    rat(num, den)
}

/// Check that replacing `(t, s, s', s'') -> (1/t, s/t, s - t s', t^3 s'')`
/// maps the family polynomial at `(M,N)` to the one at `(N,M)` up to an
/// overall power of `t`.  Verified at `trials` generic rational points;
/// returns the discovered power.
pub fn kw_dual_power(family: OdeFamily, m: i64, n: i64, trials: usize) -> Option<i64> {
    let mut rng = SmallRng::seed_from_u64(0x1ce0_c0de ^ (m as u64) << 8 ^ n as u64);
    let mut power: Option<i64> = None;
    let mut done = 0usize;
    while done < trials {
        let t = rand_rat(&mut rng);
        if t.is_zero() || t.is_one() {
            continue;
        }
        let s = rand_rat(&mut rng);
        let sp = rand_rat(&mut rng);
        let spp = rand_rat(&mut rng);
        let rhs = ode_residual(family, m, n, &t, &s, &sp, &spp);
        if rhs.is_zero() {
            continue;
        }
        let ti = Rat::one() / &t;
        let lhs = ode_residual(
            family,
            n,
            m,
            &ti,
            &(&s / &t),
            &(&s - &(&t * &sp)),
            &(&t * &t * &t * &spp),
        );
        let ratio = &lhs / &rhs;
        let w = match power {
            Some(w) => w,
            None => {
                let found = (-8..=8).find(|w| t_pow(&t, *w) == ratio)?;
                power = Some(found);
                found
            }
        };
        if t_pow(&t, w) != ratio {
            return None;
        }
        done += 1;
    }
    power
}

fn t_pow(t: &Rat, w: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..w.unsigned_abs() {
        acc = &acc * t;
    }
    if w < 0 {
        Rat::one() / acc
    } else {
        acc
    }
}

/// Check that the shift `sigma -> sigma + (N^2 - M^2)/4 (t-1)` maps the
/// low-temperature polynomial at `(M,N)` to the high-even one at `(N,M)`;
/// exact equality at `trials` generic rational points.
pub fn kw_involution_check(m: i64, n: i64, trials: usize) -> bool {
    let mut rng = SmallRng::seed_from_u64(0xfeed_beef ^ (m as u64) << 8 ^ n as u64);
    let d = rat(n * n - m * m, 4);
    for _ in 0..trials {
        let t = rand_rat(&mut rng);
        let s = rand_rat(&mut rng);
        let sp = rand_rat(&mut rng);
        let spp = rand_rat(&mut rng);
        let lhs = ode_residual(
            OdeFamily::HighEven,
            n,
            m,
            &t,
            &(&s + &(&d * &(&t - Rat::one()))),
            &(&sp + &d),
            &spp,
        );
        let rhs = ode_residual(OdeFamily::Low, m, n, &t, &s, &sp, &spp);
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::{corr_fw, Regime};

    #[test]
    fn low_family_annihilates_correlations() {
        for (m, n) in [(0i64, 1i64), (1, 2), (2, 3), (1, 3), (2, 2)] {
            let c = corr_fw(m, n, Regime::LowT, 24).unwrap().series;
            let r = ode_residual_series(OdeFamily::Low, m, n, &c).unwrap();
            assert!(r.is_zero(), "low ({m},{n}): {r}");
        }
    }

    #[test]
    fn high_families_annihilate_correlations() {
        for (m, n) in [(0i64, 2i64), (1, 3), (2, 2), (0, 4)] {
            let c = corr_fw(m, n, Regime::HighT, 24).unwrap().series;
            let r = ode_residual_series(OdeFamily::HighEven, m, n, &c).unwrap();
            assert!(r.is_zero(), "high even ({m},{n}): {r}");
        }
        for (m, n) in [(0i64, 1i64), (1, 2), (0, 3), (2, 3)] {
            let c = corr_fw(m, n, Regime::HighT, 24).unwrap().series;
            let r = ode_residual_series(OdeFamily::HighOdd, m, n, &c).unwrap();
            assert!(r.is_zero(), "high odd ({m},{n}): {r}");
        }
    }

    #[test]
    fn diagonal_reduction() {
        // at M = N the low family residual agrees with the diagonal equation
        let mut rng = SmallRng::seed_from_u64(7);
        for _ in 0..25 {
            let t = rand_rat(&mut rng);
            let s = rand_rat(&mut rng);
            let sp = rand_rat(&mut rng);
            let spp = rand_rat(&mut rng);
            for nn in 0..4i64 {
                let a = ode_residual(OdeFamily::Low, nn, nn, &t, &s, &sp, &spp);
                let b = ode_residual(OdeFamily::Diagonal, nn, nn, &t, &s, &sp, &spp);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn cosgrove_fit_low12() {
        let c = corr_fw(1, 2, Regime::LowT, 30).unwrap().series;
        let sigma = sigma_from_corr(&c, OdeFamily::Low).unwrap();
        let fit = cosgrove_fit(&sigma).unwrap().expect("fit");
        assert_eq!(fit.c[0], rat(-1, 4)); // c5 = -M^2/4
        assert_eq!(fit.c[1], rat(5, 4)); // c6 = (M^2+N^2-sbar)/4 with sbar=0
        assert_eq!(fit.c[2], rat(-1, 1)); // c7 = -N^2/4
        assert_eq!(fit.c[3], Rat::zero());
        assert_eq!(fit.c[4], Rat::zero());
        assert_eq!(fit.c[5], Rat::zero());
        assert!(fit.surplus >= 6, "surplus {}", fit.surplus);
        let cls = cosgrove_to_okamoto(&fit.c).expect("okamoto");
        assert_eq!(cls, okamoto_class(&okamoto_params(OdeFamily::Low, 1, 2)));
    }

    #[test]
    fn okamoto_residuals_vanish() {
        for (fam, m, n, reg) in [
            (OdeFamily::Low, 0i64, 2i64, Regime::LowT),
            (OdeFamily::Low, 1, 2, Regime::LowT),
            (OdeFamily::HighEven, 1, 3, Regime::HighT),
            (OdeFamily::HighOdd, 1, 2, Regime::HighT),
        ] {
            let c = corr_fw(m, n, reg, 24).unwrap().series;
            let r = okamoto_residual_series(fam, m, n, &c).unwrap();
            assert!(r.is_zero(), "{fam:?} ({m},{n}): {r}");
        }
    }

    #[test]
    fn kw_symmetries() {
        for fam in [OdeFamily::Low, OdeFamily::HighEven, OdeFamily::HighOdd] {
            assert_eq!(kw_dual_power(fam, 1, 2, 20), Some(0), "{fam:?}");
        }
        assert!(kw_involution_check(1, 3, 20));
    }
}
