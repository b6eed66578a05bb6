//! Truncated Laurent series in the modulus variable `k` with exact
//! `BigRational` coefficients.
//!
//! Everything downstream (hypergeometric sums, Toeplitz determinants, the
//! sigma-form residuals) is built on this one type.  A series is stored as
//!
//! ```text
//!     a(k) = sum_{i = valuation}^{order} coeffs[i - valuation] * k^i
//! ```
//!
//! together with a *guaranteed order*: coefficients beyond `order` are
//! unknown, not zero.  Arithmetic propagates the guaranteed order
//! pessimistically, so equality of two series is always a statement about the
//! common reliable window.
//!
//! Expansions that are naturally series in `t = k^2` are carried in `k`-units
//! throughout (a `t`-order `p` corresponds to a `k`-order `2p + 1`); the
//! [`Var`] tag records whether a series is known to have even support so that
//! it may be re-indexed in `t` on output.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact scalar used everywhere.
pub type Rat = BigRational;

/// Build a rational from an integer pair, mostly for tests and tables.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_i(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
pub fn pochhammer(a: &Rat, n: u32) -> Rat {
    let mut p = Rat::one();
    let mut x = a.clone();
    for _ in 0..n {
        p *= &x;
        x += Rat::one();
    }
    p
}

/// Generalized binomial coefficient C(e, n) for rational e.
pub fn binom_rat(e: &Rat, n: u32) -> Rat {
    let mut p = Rat::one();
    let mut x = e.clone();
    for i in 0..n {
        p *= &x;
        p /= Rat::from(BigInt::from(i as i64 + 1));
        x -= Rat::one();
    }
    p
}

/// Ordinary binomial coefficient as a rational.
pub fn binom_u(n: u32, m: u32) -> Rat {
    if m > n {
        return Rat::zero();
    }
    binom_rat(&rat_i(n as i64), m)
}

/// Errors from series arithmetic.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series that vanishes to its full guaranteed order")]
    DivisionByZero,
    #[error("rational power needs unit leading coefficient, found {0}")]
    NonUnitLeading(String),
    #[error("rational power {0} of k^{1} is not a Laurent monomial")]
    FractionalValuation(String, i64),
    #[error("composition target must have positive valuation")]
    BadComposition,
    #[error("series has odd k-support, refusing t-indexed output")]
    OddSupport,
    #[error("truncation order exhausted (order {0})")]
    OrderExhausted(i64),
    #[error("{0}")]
    Other(String),
}

/// Variable tag: `K` for a general series in k, `T` for one known to be a
/// series in t = k^2 (even support only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Var {
    #[serde(rename = "k")]
    K,
    #[serde(rename = "t")]
    T,
}

/// Truncated Laurent series, the canonical zero being an empty coefficient
/// vector with `valuation == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesK {
    pub var: Var,
    pub valuation: i64,
    pub order: i64,
    pub coeffs: Vec<Rat>,
}

impl SeriesK {
    /// The zero series, reliable through `order`.
    pub fn zero(order: i64, var: Var) -> Self {
        SeriesK { var, valuation: order + 1, order, coeffs: Vec::new() }
    }

    /// The constant one.
    pub fn one(order: i64, var: Var) -> Self {
        Self::monomial(Rat::one(), 0, order, var)
    }

    /// `c * k^pow`, reliable through `order`.
    pub fn monomial(c: Rat, pow: i64, order: i64, var: Var) -> Self {
        if c.is_zero() || pow > order {
            return Self::zero(order, var);
        }
        SeriesK { var, valuation: pow, order, coeffs: vec![c] }
    }

    pub fn constant(c: Rat, order: i64, var: Var) -> Self {
        Self::monomial(c, 0, order, var)
    }

    /// Build from an explicit coefficient run starting at `valuation`;
    /// normalizes (strips leading/trailing zeros, clips to `order`).
    pub fn from_coeffs(valuation: i64, coeffs: Vec<Rat>, order: i64, var: Var) -> Self {
        let mut s = SeriesK { var, valuation, order, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        // clip beyond order
        let max_len = (self.order - self.valuation + 1).max(0) as usize;
        self.coeffs.truncate(max_len);
        // strip leading zeros
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
        // strip trailing zeros (representation only; order is unchanged)
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.valuation = self.order + 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `k^pow` (zero outside the stored run; caller must stay
    /// within the guaranteed order).
    pub fn coeff(&self, pow: i64) -> Rat {
        if pow < self.valuation || pow > self.order {
            return Rat::zero();
        }
        let idx = (pow - self.valuation) as usize;
        self.coeffs.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    /// True if every known coefficient sits on an even power.
    pub fn has_even_support(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || (self.valuation + i as i64) % 2 == 0)
    }

    /// Re-tag as a t-series if the support is even; no-op otherwise.
    pub fn retag_even(mut self) -> Self {
        if self.has_even_support() {
            self.var = Var::T;
        }
        self
    }

    /// Lower the guaranteed order (raising is never sound).
    pub fn truncated(&self, order: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(order);
        s.normalize();
        s
    }

    /// Multiply by `c * k^pow`.
    pub fn mul_monomial(&self, c: &Rat, pow: i64) -> Self {
        if c.is_zero() {
            return Self::zero(self.order + pow, self.var);
        }
        let mut s = self.clone();
        s.valuation += pow;
        s.order += pow;
        for x in &mut s.coeffs {
            *x *= c;
        }
        s.normalize();
        s
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul_monomial(c, 0)
    }

    /// k -> -k.
    pub fn flip_sign_var(&self) -> Self {
        let mut s = self.clone();
        for (i, x) in s.coeffs.iter_mut().enumerate() {
            if (s.valuation + i as i64).rem_euclid(2) == 1 {
                *x = -x.clone();
            }
        }
        s
    }

    fn add_impl(&self, other: &Self, sub: bool) -> Self {
        let order = self.order.min(other.order);
        let var = if self.var == other.var { self.var } else { Var::K };
        if self.is_zero() && other.is_zero() {
            return Self::zero(order, var);
        }
        let val = self
            .valuation
            .min(other.valuation)
            .min(order + 1);
        let len = (order - val + 1).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let p = val + i as i64;
            let b = other.coeff(p);
            *c = if sub { self.coeff(p) - b } else { self.coeff(p) + b };
        }
        Self::from_coeffs(val, coeffs, order, var)
    }

    /// Cauchy product; the result order is the pessimistic
    /// `min(a.order + b.valuation, b.order + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Self {
        let var = if self.var == other.var { self.var } else { Var::K };
        if self.is_zero() || other.is_zero() {
            // 0 * b is zero, reliable wherever a perturbation of the zero
            // factor could not yet contribute.
            let order = (self.order + other.valuation).min(other.order + self.valuation);
            return Self::zero(order, var);
        }
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        let val = self.valuation + other.valuation;
        let len = (order - val + 1).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let pa = self.valuation + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = pa + other.valuation + j as i64;
                if p > order {
                    break;
                }
                let idx = (p - val) as usize;
                coeffs[idx] += a * b;
            }
        }
        Self::from_coeffs(val, coeffs, order, var)
    }

    /// Exact division; errors if the divisor vanishes identically to its
    /// guaranteed order.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        if other.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let var = if self.var == other.var { self.var } else { Var::K };
        let dv = other.valuation;
        // order of the quotient: perturbing the numerator at n.order+1 moves
        // the quotient at n.order+1-dv; perturbing the denominator at
        // d.order+1 moves it at n.valuation + d.order + 1 - 2 dv.
        let order = (self.order - dv).min(self.valuation + other.order - 2 * dv);
        if self.is_zero() {
            return Ok(Self::zero(order, var));
        }
        let val = self.valuation - dv;
        let len = (order - val + 1).max(0) as usize;
        let d0 = &other.coeffs[0];
        let mut coeffs: Vec<Rat> = Vec::with_capacity(len);
        for i in 0..len {
            let p = val + i as i64;
            let mut acc = self.coeff(p + dv);
            for (j, q) in coeffs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let dp = p - (val + j as i64) + dv;
                let d = other.coeff(dp);
                if !d.is_zero() {
                    acc -= q * &d;
                }
            }
            coeffs.push(acc / d0);
        }
        Ok(Self::from_coeffs(val, coeffs, order, var))
    }

    /// Integer power via repeated multiplication (negative through `div`).
    pub fn powi(&self, e: i64) -> Result<Self, SeriesError> {
        if e == 0 {
            return Ok(Self::one(self.order, self.var));
        }
        let base = if e < 0 {
            Self::one(self.order, self.var).div(self)?
        } else {
            self.clone()
        };
        let mut acc = base.clone();
        for _ in 1..e.abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `a^e` for rational `e`.  Requires the leading coefficient to be 1 (the
    /// monomial part `k^(v e)` must land on an integer power); the branch is
    /// the one equal to 1 at the expansion point.
    pub fn pow_rational(&self, e: &Rat) -> Result<Self, SeriesError> {
        if self.is_zero() {
            if e.is_zero() {
                return Ok(Self::one(self.order, self.var));
            }
            if e.is_positive() {
                return Ok(Self::zero(self.order, self.var));
            }
            return Err(SeriesError::DivisionByZero);
        }
        let lead = &self.coeffs[0];
        if !lead.is_one() {
            return Err(SeriesError::NonUnitLeading(lead.to_string()));
        }
        let shifted = Rat::from(BigInt::from(self.valuation)) * e;
        if !shifted.is_integer() {
            return Err(SeriesError::FractionalValuation(e.to_string(), self.valuation));
        }
        let new_val: i64 = {
            let b = shifted.to_integer();
            i64::try_from(b).map_err(|_| SeriesError::Other("power overflow".into()))?
        };
        // u := a / k^v - 1 has positive valuation; (1+u)^e by finite binomial.
        let u = {
            let mut s = self.clone();
            s.valuation = 0;
            s.order -= self.valuation;
            let ord = s.order;
            s - Self::one(ord, self.var)
        };
        let order = u.order;
        let mut acc = Self::one(order, self.var);
        if !u.is_zero() {
            let uval = u.valuation.max(1);
            let mut upow = Self::one(order, self.var);
            let mut n: u32 = 0;
            while (n as i64 + 1) * uval <= order {
                n += 1;
                upow = upow.mul(&u);
                let c = binom_rat(e, n);
                if !c.is_zero() {
                    acc = acc + upow.scale(&c);
                }
            }
        }
        let mut out = acc;
        out.valuation += new_val;
        out.order += new_val;
        out.normalize();
        Ok(out)
    }

    /// d/dk.
    pub fn deriv_k(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.order - 1, self.var);
        }
        let order = self.order - 1;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let p = self.valuation + i as i64;
            coeffs.push(c * Rat::from(BigInt::from(p)));
        }
        Self::from_coeffs(self.valuation - 1, coeffs, order, Var::K)
    }

    /// d/dt of an even series, using d/dt = (1/2k) d/dk; stays in k-units.
    pub fn deriv_t(&self) -> Result<Self, SeriesError> {
        if !self.has_even_support() {
            return Err(SeriesError::OddSupport);
        }
        let d = self.deriv_k();
        let mut s = d.mul_monomial(&rat(1, 2), -1);
        s.var = Var::T;
        Ok(s)
    }

    /// Logarithmic t-derivative `(d/dt) log a = a'(t)/a(t)` in k-units.
    pub fn dlog_dt(&self) -> Result<Self, SeriesError> {
        let num = self.deriv_t()?;
        num.div(self)
    }

    /// Substitute `k -> g(k)` where `g` has positive valuation.  Negative
    /// powers of `g` are handled through series division.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if g.is_zero() || g.valuation < 1 {
            return Err(SeriesError::BadComposition);
        }
        // Two error sources: truncation of self at its own order (enters at
        // g-valuation * (order+1) in k), and truncation of g (enters through
        // the chain rule, worst for the most negative power of self).
        let w = g.valuation;
        let from_self = w * (self.order + 1) - 1;
        let from_g = if self.valuation < 0 {
            g.order + w * (self.valuation - 1)
        } else {
            g.order
        };
        let order = from_self.min(from_g);
        let var = Var::K;
        let mut acc = Self::zero(order, var);
        // nonnegative part by Horner from the top
        if !self.is_zero() && self.order >= self.valuation.max(0) {
            let top = self.order;
            let low = self.valuation.max(0);
            let mut horner = Self::constant(self.coeff(top), order, var);
            let mut p = top;
            while p > low {
                p -= 1;
                horner = horner.mul(g);
                horner = horner + Self::constant(self.coeff(p), order, var);
            }
            if low > 0 {
                horner = horner.mul(&g.powi(low)?);
            }
            acc = acc + horner;
        }
        // negative part in powers of 1/g
        if self.valuation < 0 {
            let ginv = Self::one(order, var).div(g)?;
            let mut gpow = ginv.clone();
            let mut p: i64 = -1;
            while p >= self.valuation {
                let c = self.coeff(p);
                if !c.is_zero() {
                    acc = acc + gpow.scale(&c);
                }
                p -= 1;
                if p >= self.valuation {
                    gpow = gpow.mul(&ginv);
                }
            }
        }
        let mut out = acc;
        out.order = out.order.min(order);
        out.normalize();
        Ok(out)
    }

    /// Equality of all coefficients up to the common guaranteed order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        let lo = self.valuation.min(other.valuation);
        (lo..=order).all(|p| self.coeff(p) == other.coeff(p))
    }

    /// The difference restricted to the common window; zero iff `agrees_with`.
    pub fn residual_against(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }
}

impl Add for SeriesK {
    type Output = SeriesK;
    fn add(self, rhs: SeriesK) -> SeriesK {
        self.add_impl(&rhs, false)
    }
}

impl<'a> Add<&'a SeriesK> for &'a SeriesK {
    type Output = SeriesK;
    fn add(self, rhs: &SeriesK) -> SeriesK {
        self.add_impl(rhs, false)
    }
}

impl Sub for SeriesK {
    type Output = SeriesK;
    fn sub(self, rhs: SeriesK) -> SeriesK {
        self.add_impl(&rhs, true)
    }
}

impl Add<&SeriesK> for SeriesK {
    type Output = SeriesK;
    fn add(self, rhs: &SeriesK) -> SeriesK {
        self.add_impl(rhs, false)
    }
}

impl Sub<&SeriesK> for SeriesK {
    type Output = SeriesK;
    fn sub(self, rhs: &SeriesK) -> SeriesK {
        self.add_impl(rhs, true)
    }
}

impl<'a> Sub<&'a SeriesK> for &'a SeriesK {
    type Output = SeriesK;
    fn sub(self, rhs: &SeriesK) -> SeriesK {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a SeriesK> for &'a SeriesK {
    type Output = SeriesK;
    fn mul(self, rhs: &SeriesK) -> SeriesK {
        SeriesK::mul(self, rhs)
    }
}

impl Neg for SeriesK {
    type Output = SeriesK;
    fn neg(self) -> SeriesK {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for SeriesK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(k^{})", self.order + 1);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.valuation + i as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})k^{}", c, p)?;
        }
        write!(f, " + O(k^{})", self.order + 1)
    }
}

/// Serialized shape: variable tag, valuation and order in units of the tag's
/// variable, coefficients as exact `num/den` strings.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    var: Var,
    valuation: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for SeriesK {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let repr = match self.var {
            Var::K => SeriesRepr {
                var: Var::K,
                valuation: self.valuation,
                order: self.order,
                coeffs: (self.valuation..=self.order.min(self.valuation + self.coeffs.len() as i64 - 1))
                    .map(|p| self.coeff(p).to_string())
                    .collect(),
            },
            Var::T => {
                if !self.has_even_support() {
                    return Err(serde::ser::Error::custom(SeriesError::OddSupport.to_string()));
                }
                let tv = self.valuation.div_euclid(2);
                let to = self.order.div_euclid(2);
                let coeffs = if self.is_zero() {
                    Vec::new()
                } else {
                    (tv..=to).map(|p| self.coeff(2 * p).to_string()).collect()
                };
                SeriesRepr {
                    var: Var::T,
                    valuation: if self.is_zero() { to + 1 } else { tv },
                    order: to,
                    coeffs,
                }
            }
        };
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SeriesK {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(de)?;
        let parse = |s: &String| -> Result<Rat, D::Error> {
            s.parse::<Rat>().map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))
        };
        let coeffs = repr.coeffs.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let (val, ord, coeffs) = match repr.var {
            Var::K => (repr.valuation, repr.order, coeffs),
            Var::T => {
                let mut spread = Vec::with_capacity(coeffs.len() * 2);
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        spread.push(Rat::zero());
                    }
                    spread.push(c.clone());
                }
                (repr.valuation * 2, repr.order * 2 + 1, spread)
            }
        };
        Ok(SeriesK::from_coeffs(val, coeffs, ord, repr.var))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geom(order: i64) -> SeriesK {
        // 1/(1-k)
        let coeffs = vec![Rat::one(); (order + 1) as usize];
        SeriesK::from_coeffs(0, coeffs, order, Var::K)
    }

    #[test]
    fn quarter_root_of_one_minus_t() {
        // (1-t)^{1/4} with t = k^2
        let one_minus_t = SeriesK::from_coeffs(0, vec![rat_i(1), rat_i(0), rat_i(-1)], 20, Var::T);
        let s = one_minus_t.pow_rational(&rat(1, 4)).unwrap();
        assert_eq!(s.coeff(0), rat_i(1));
        assert_eq!(s.coeff(2), rat(-1, 4));
        assert_eq!(s.coeff(4), rat(-3, 32));
        assert_eq!(s.coeff(6), rat(-7, 128));
        assert!(s.has_even_support());
    }

    #[test]
    fn geometric_inverse() {
        let order = 12;
        let one_minus_k = SeriesK::from_coeffs(0, vec![rat_i(1), rat_i(-1)], order, Var::K);
        let g = SeriesK::one(order, Var::K).div(&one_minus_k).unwrap();
        assert!(g.agrees_with(&geom(order)));
        let back = g.mul(&one_minus_k);
        assert!(back.agrees_with(&SeriesK::one(order, Var::K)));
    }

    #[test]
    fn dlog_of_one_minus_t() {
        // d/dt log(1-t) = -1/(1-t) = -(1 + t + t^2 + ...)
        let one_minus_t = SeriesK::from_coeffs(0, vec![rat_i(1), rat_i(0), rat_i(-1)], 21, Var::T);
        let d = one_minus_t.dlog_dt().unwrap();
        for p in 0..=8 {
            assert_eq!(d.coeff(2 * p), rat_i(-1), "t^{p}");
        }
    }

    #[test]
    fn laurent_division_tracks_valuation() {
        // (k^2 + k^3) / k^{-1} = k^3 + k^4
        let a = SeriesK::from_coeffs(2, vec![rat_i(1), rat_i(1)], 10, Var::K);
        let b = SeriesK::monomial(rat_i(1), -1, 10, Var::K);
        let q = a.div(&b).unwrap();
        assert_eq!(q.valuation, 3);
        assert_eq!(q.coeff(3), rat_i(1));
        assert_eq!(q.coeff(4), rat_i(1));
    }

    #[test]
    fn pow_rational_rejects_fractional_monomial() {
        let a = SeriesK::monomial(rat_i(1), 1, 10, Var::K);
        assert!(matches!(a.pow_rational(&rat(1, 2)), Err(SeriesError::FractionalValuation(_, _))));
        let b = SeriesK::from_coeffs(0, vec![rat_i(2)], 10, Var::K);
        assert!(matches!(b.pow_rational(&rat(1, 2)), Err(SeriesError::NonUnitLeading(_))));
    }

    #[test]
    fn compose_linear_scaling() {
        // substitute k -> 2k in 1/(1-k): expect 1/(1-2k)
        let g = SeriesK::monomial(rat_i(2), 1, 10, Var::K);
        let c = geom(10).compose(&g).unwrap();
        for p in 0..=8 {
            assert_eq!(c.coeff(p), rat_i(1i64 << p));
        }
    }

    #[test]
    fn json_round_trip_k_and_t() {
        let a = SeriesK::from_coeffs(-2, vec![rat(3, 2), rat_i(0), rat(-1, 7)], 6, Var::K);
        let j = serde_json::to_string(&a).unwrap();
        let b: SeriesK = serde_json::from_str(&j).unwrap();
        assert!(a.agrees_with(&b));
        assert_eq!(a.valuation, b.valuation);

        let t = SeriesK::from_coeffs(0, vec![rat_i(1), rat_i(0), rat(-1, 4)], 9, Var::T);
        let j = serde_json::to_string(&t).unwrap();
        assert!(j.contains("\"var\":\"t\""));
        let u: SeriesK = serde_json::from_str(&j).unwrap();
        assert_eq!(u.coeff(2), rat(-1, 4));
        assert!(u.has_even_support());
    }

    #[test]
    fn serialize_t_tag_with_odd_support_fails() {
        let mut a = SeriesK::from_coeffs(1, vec![rat_i(1)], 5, Var::K);
        a.var = Var::T;
        assert!(serde_json::to_string(&a).is_err());
    }

    fn arb_series(max_terms: usize) -> impl Strategy<Value = SeriesK> {
        (
            -3i64..4,
            prop::collection::vec((-20i64..20, 1i64..12), 0..max_terms),
        )
            .prop_map(|(val, pairs)| {
                let coeffs: Vec<Rat> = pairs.into_iter().map(|(n, d)| rat(n, d)).collect();
                SeriesK::from_coeffs(val, coeffs, 14, Var::K)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            let ab_c = (&a + &b).mul(&c);
            let ac_bc = a.mul(&c) + b.mul(&c);
            prop_assert!(ab_c.agrees_with(&ac_bc));
            prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
            let assoc_l = a.mul(&b).mul(&c);
            let assoc_r = a.mul(&b.mul(&c));
            prop_assert!(assoc_l.agrees_with(&assoc_r));
        }

        #[test]
        fn div_inverts_mul(a in arb_series(6), b in arb_series(6)) {
            prop_assume!(!b.is_zero());
            let q = a.mul(&b).div(&b).unwrap();
            prop_assert!(q.agrees_with(&a));
        }

        #[test]
        fn rational_pow_consistent(a in arb_series(5), p in 1i64..4, q in 1i64..4) {
            prop_assume!(!a.is_zero());
            // force unit leading coefficient
            let lead = a.coeffs[0].clone();
            let a = a.scale(&(Rat::one() / lead));
            prop_assume!((a.valuation * p) % q == 0);
            let e = rat(p, q);
            let lhs = a.pow_rational(&e).unwrap().powi(q).unwrap();
            let rhs = a.powi(p).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn dlog_is_additive(a in arb_series(5), b in arb_series(5)) {
            // restrict to even-support units so the t-derivative exists
            let to_even = |s: &SeriesK| {
                let mut sq = s.mul(s);
                sq = sq.mul(&sq.flip_sign_var());
                SeriesK::one(s.order, Var::K) + sq.mul_monomial(&Rat::one(), 2)
            };
            let (ae, be) = (to_even(&a), to_even(&b));
            let lhs = ae.mul(&be).dlog_dt().unwrap();
            let rhs = ae.dlog_dt().unwrap() + be.dlog_dt().unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }
}
