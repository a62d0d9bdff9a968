//! Truncated Laurent series in one distinguished variable.
//!
//! This is the carrier of the slope-line expansions: substituting
//! (a₁,a₂) = (s, c·s) turns every equivariant weight into a multiple of s,
//! and fixed-point factors become Laurent series in s over Q(c).
//!
//! Validity is tracked as an absolute window: coefficients of exponents
//! `< upper` are correct, everything above is unknown. Exact values (no
//! truncation) use a large sentinel bound, in the style of a polynomial with
//! infinite order. Binary operations propagate the window in the usual way
//! (`min` for addition, `min(lowᵃ+upᵇ, lowᵇ+upᵃ)` for multiplication).
//!
//! The distinguished variable is kept implicit; callers name it only when
//! rendering.

use super::{Coeff, QQ};

/// Validity bound used for exact (untruncated) values.
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
pub struct LaurentSeries<R: Coeff> {
    /// Exponent of `coeffs[0]`; meaningful only when `coeffs` is nonempty.
    lowest: i64,
    /// Dense coefficients starting at `lowest`; trimmed of zero ends.
    coeffs: Vec<R>,
    /// Exponents `< upper` are trustworthy.
    upper: i64,
}

fn sat(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

impl<R: Coeff> LaurentSeries<R> {
    pub fn zero() -> Self {
        LaurentSeries { lowest: 0, coeffs: Vec::new(), upper: EXACT }
    }

    pub fn from_coeff(c: R) -> Self {
        Self::monomial(0, c)
    }

    pub fn one() -> Self {
        Self::from_coeff(R::one())
    }

    pub fn monomial(exp: i64, c: R) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentSeries { lowest: exp, coeffs: vec![c], upper: EXACT }
        }
    }

    /// Build from an explicit coefficient list starting at `lowest`.
    pub fn from_coeffs(lowest: i64, coeffs: Vec<R>, upper: i64) -> Self {
        let mut s = LaurentSeries { lowest, coeffs, upper };
        s.trim();
        s
    }

    fn trim(&mut self) {
        // Drop junk at/above the validity bound, then trim zero ends.
        if self.upper < EXACT {
            let keep = (self.upper - self.lowest).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.first().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.remove(0);
            self.lowest += 1;
        }
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.lowest = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn upper(&self) -> i64 {
        self.upper
    }

    pub fn lowest_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lowest)
        }
    }

    /// Effective lowest exponent for window bookkeeping (∞ for zero).
    fn low_eff(&self) -> i64 {
        self.lowest_exponent().unwrap_or(EXACT)
    }

    /// Coefficient of the given exponent; panics if outside the window.
    pub fn coeff(&self, exp: i64) -> R {
        assert!(exp < self.upper, "Laurent coefficient {exp} beyond validity bound {}", self.upper);
        if exp < self.lowest || exp >= self.lowest + self.coeffs.len() as i64 {
            R::zero()
        } else {
            self.coeffs[(exp - self.lowest) as usize].clone()
        }
    }

    pub fn constant_term(&self) -> R {
        self.coeff(0)
    }

    /// True when the principal part (negative exponents) is nonzero.
    pub fn has_pole(&self) -> bool {
        self.lowest_exponent().map(|l| l < 0).unwrap_or(false)
    }

    /// Restrict the validity window.
    pub fn with_upper(mut self, upper: i64) -> Self {
        self.upper = self.upper.min(upper);
        self.trim();
        self
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let upper = self.upper.min(rhs.upper);
        if self.is_zero() {
            return rhs.clone().with_upper(upper);
        }
        if rhs.is_zero() {
            return self.clone().with_upper(upper);
        }
        let lowest = self.lowest.min(rhs.lowest);
        let top = (self.lowest + self.coeffs.len() as i64)
            .max(rhs.lowest + rhs.coeffs.len() as i64)
            .min(upper);
        let mut coeffs = Vec::new();
        for e in lowest..top {
            let mut v = R::zero();
            if e >= self.lowest && e < self.lowest + self.coeffs.len() as i64 {
                v = v.add(&self.coeffs[(e - self.lowest) as usize]);
            }
            if e >= rhs.lowest && e < rhs.lowest + rhs.coeffs.len() as i64 {
                v = v.add(&rhs.coeffs[(e - rhs.lowest) as usize]);
            }
            coeffs.push(v);
        }
        Self::from_coeffs(lowest, coeffs, upper)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let upper = sat(self.low_eff(), rhs.upper).min(sat(rhs.low_eff(), self.upper));
        if self.is_zero() || rhs.is_zero() {
            let mut z = Self::zero();
            z.upper = upper;
            return z;
        }
        let lowest = self.lowest + rhs.lowest;
        let len = ((self.coeffs.len() + rhs.coeffs.len() - 1) as i64).min(upper - lowest).max(0);
        let mut coeffs = vec![R::zero(); len as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let k = i + j;
                if (k as i64) >= len {
                    break;
                }
                coeffs[k] = coeffs[k].add(&a.mul(b));
            }
        }
        Self::from_coeffs(lowest, coeffs, upper)
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.iter_mut() {
            *v = v.mul(c);
        }
        out.trim();
        out
    }

    pub fn scale_rat(&self, r: &QQ) -> Self {
        self.scale(&R::from_rat(r))
    }

    /// Multiplicative inverse; requires a nonzero leading unit coefficient.
    pub fn inv(&self) -> Option<Self> {
        let l = self.lowest_exponent()?;
        let c = self.coeffs[0].inv()?;
        if self.upper >= EXACT && self.coeffs.len() == 1 {
            // Exact monomial: exact inverse.
            return Some(Self::monomial(-l, c));
        }
        assert!(
            self.upper < EXACT,
            "inverting an exact non-monomial Laurent series: set a validity window first"
        );
        // f = c·s^l (1 + g); invert the unit part by the geometric series.
        let rel_len = self.upper - l;
        // The unit part is known relative to s⁰ up to rel_len; the inverse is
        // valid on the same relative window, i.e. absolutely up to rel_len − l.
        let mut inv_rel = vec![R::zero(); rel_len.max(1) as usize];
        inv_rel[0] = c.clone();
        for n in 1..rel_len as usize {
            // coefficient of sⁿ in 1/unit: −c⁻¹ Σ_{k=1..n} unit_k · inv_{n−k}
            let mut acc = R::zero();
            for k in 1..=n {
                if k < self.coeffs.len() {
                    let unit_k = self.coeffs[k].mul(&c); // normalized unit coeff
                    acc = acc.add(&unit_k.mul(&inv_rel[n - k]));
                }
            }
            // inv_rel already carries the factor c, so no extra division here.
            inv_rel[n] = acc.neg();
        }
        // The inverse's unit part is valid on the same relative window, so the
        // absolute validity bound sits at rel_len − l.
        Some(Self::from_coeffs(-l, inv_rel, rel_len - l))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// exp(μ·s) as a Laurent (in fact Taylor) series valid below `upper`.
    pub fn exp_linear(mu: &R, upper: i64) -> Self {
        let mut coeffs = Vec::new();
        let mut term = R::one();
        let mut n: i64 = 0;
        while n < upper.max(0) {
            coeffs.push(term.clone());
            n += 1;
            term = term.mul(mu).scale(&super::qq(1, n));
        }
        Self::from_coeffs(0, coeffs, upper)
    }

    /// 1 − exp(μ·s).
    pub fn one_minus_exp(mu: &R, upper: i64) -> Self {
        Self::one().sub(&Self::exp_linear(mu, upper))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.lowest + i as i64, c))
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| match e {
                0 => format!("{c:?}"),
                1 => format!("({c:?})*{var}"),
                _ => format!("({c:?})*{var}^{e}"),
            })
            .collect();
        parts.join(" + ")
    }
}

/// Structural equality on the overlapping validity window. Only stored
/// coefficient ranges are scanned; everything else in the window is zero by
/// construction.
impl<R: Coeff> PartialEq for LaurentSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        let upper = self.upper.min(other.upper);
        let low = self.low_eff().min(other.low_eff());
        let top = (self.lowest + self.coeffs.len() as i64)
            .max(other.lowest + other.coeffs.len() as i64)
            .min(upper);
        (low..top).all(|e| self.coeff(e) == other.coeff(e))
    }
}

impl<R: Coeff> Coeff for LaurentSeries<R> {
    fn zero() -> Self {
        LaurentSeries::zero()
    }
    fn one() -> Self {
        LaurentSeries::one()
    }
    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        LaurentSeries::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        LaurentSeries::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        LaurentSeries::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        LaurentSeries::inv(self)
    }
    fn from_rat(r: &QQ) -> Self {
        LaurentSeries::from_coeff(R::from_rat(r))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{qi, qq, RatC};
    use super::*;

    #[test]
    fn constant_term_examples() {
        // s⁻¹ + 2 + 3s → 2.
        let f = LaurentSeries::from_coeffs(-1, vec![qi(1), qi(2), qi(3)], EXACT);
        assert_eq!(f.constant_term(), qi(2));
        assert!(f.has_pole());
        assert_eq!(LaurentSeries::<super::super::QQ>::zero().constant_term(), qi(0));
    }

    #[test]
    fn mul_window_bookkeeping() {
        // (s⁻¹)·(s + s²+…) valid below s³ → 1 + s valid below s².
        let a = LaurentSeries::monomial(-1, qi(1));
        let b = LaurentSeries::from_coeffs(1, vec![qi(1), qi(1)], 3);
        let p = a.mul(&b);
        assert_eq!(p.upper(), 2);
        assert_eq!(p.coeff(0), qi(1));
        assert_eq!(p.coeff(1), qi(1));
    }

    #[test]
    fn inversion_roundtrip() {
        // 1/(1 − e^s) has leading term −s⁻¹.
        let f = LaurentSeries::<super::super::QQ>::one_minus_exp(&qi(1), 8);
        let inv = f.inv().unwrap();
        assert_eq!(inv.lowest_exponent(), Some(-1));
        assert_eq!(inv.coeff(-1), qi(-1));
        // Bernoulli: 1/(e^s−1) = s⁻¹ − 1/2 + s/12 − …, so our sign flips.
        assert_eq!(inv.coeff(0), qq(1, 2));
        assert_eq!(f.mul(&inv), LaurentSeries::one());
    }

    #[test]
    fn slope_line_double_pole() {
        // 1/((e^s−1)(1−e^{cs})) over Q(c): s⁻² coefficient is −1/c.
        let c = RatC::c();
        let e1 = LaurentSeries::<RatC>::exp_linear(&RatC::one(), 8)
            .sub(&LaurentSeries::one());
        let e2 = LaurentSeries::<RatC>::one_minus_exp(&c, 8);
        let f = e1.mul(&e2).inv().unwrap();
        let inv_c = c.inv().unwrap();
        assert_eq!(f.coeff(-2), inv_c.neg());
        // Constant term: Bernoulli expansion of both factors gives
        // (1/s − 1/2 + s/12)·(−1/(cs))(1 + cs/2 + c²s²/6)⁻¹ …; verified
        // against an independent product expansion.
        let g1 = LaurentSeries::<RatC>::exp_linear(&RatC::one(), 8)
            .sub(&LaurentSeries::one())
            .inv()
            .unwrap();
        let g2 = LaurentSeries::<RatC>::one_minus_exp(&c, 8).inv().unwrap();
        assert_eq!(f.constant_term(), g1.mul(&g2).constant_term());
    }

    #[test]
    fn division_recovers_dividend() {
        let a = LaurentSeries::from_coeffs(-2, vec![qi(3), qi(1), qi(4)], 6);
        let b = LaurentSeries::from_coeffs(1, vec![qi(2), qi(5)], 9);
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
    }
}
