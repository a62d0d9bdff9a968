//! Normalized rational-function fields Q(q,t) and Q(c).
//!
//! Fractions are reduced by a full polynomial gcd and then scaled so the
//! denominator has coprime integer coefficients with positive lex-leading
//! coefficient. That makes the representation canonical, so equality is
//! structural; cross-multiplication equality is kept as a property test.

use std::collections::BTreeMap;
use std::marker::PhantomData;
use std::sync::Arc;

use num_traits::Signed;

use super::poly::{c_vars, qt_vars};
use super::{Coeff, MultiPoly, QQ};

/// A compile-time variable list, so `Coeff::zero()` needs no runtime context.
pub trait VarSet: Clone + Copy + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn vars() -> Arc<[String]>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QTVars;
impl VarSet for QTVars {
    fn vars() -> Arc<[String]> {
        qt_vars()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVar;
impl VarSet for CVar {
    fn vars() -> Arc<[String]> {
        c_vars()
    }
}

/// Rational functions over Q in the variables given by `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<V: VarSet> {
    num: MultiPoly,
    den: MultiPoly,
    _v: PhantomData<V>,
}

/// The coefficient field of the master partition function.
pub type RatQT = RationalFunction<QTVars>;
/// The coefficient field of the symbolic slope line.
pub type RatC = RationalFunction<CVar>;

impl<V: VarSet> RationalFunction<V> {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RationalFunction { num, den, _v: PhantomData };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(V::vars());
            return;
        }
        // Fast path: constant denominators need no gcd.
        if self.den.is_constant() {
            let d = self.den.constant_value().unwrap();
            self.num = self.num.scale(&(super::qi(1) / &d));
            self.den = MultiPoly::one(V::vars());
            return;
        }
        let g = MultiPoly::gcd(&self.num, &self.den);
        if !g.is_constant() {
            self.num = self.num.div_exact(&g).expect("gcd divides numerator");
            self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        }
        // Scale so the denominator is integer-primitive with a positive
        // lex-leading coefficient.
        let mut gamma = self.den.rational_content();
        if self.den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            gamma = -gamma;
        }
        let inv = super::qi(1) / gamma;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction { num: p, den: MultiPoly::one(V::vars()), _v: PhantomData }
    }

    pub fn constant(c: QQ) -> Self {
        Self::from_poly(MultiPoly::constant(V::vars(), c))
    }

    /// The i-th variable of the field.
    pub fn gen(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(V::vars(), i))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Adams substitution: every field variable x ↦ xⁿ.
    pub fn adams(&self, n: u32) -> Self {
        RationalFunction::new(self.num.adams(n), self.den.adams(n))
    }

    /// Substitute x ↦ 1/x for the variable with index `var`.
    pub fn subst_recip(&self, var: usize) -> Self {
        let m = self.num.degree(var).max(self.den.degree(var));
        let flip = |p: &MultiPoly| {
            let mut out = MultiPoly::zero(V::vars());
            for (e, c) in p.terms() {
                let mut e2 = e.clone();
                e2[var] = m - e[var];
                out = out.add(&MultiPoly::monomial(V::vars(), e2, c.clone()));
            }
            out
        };
        RationalFunction::new(flip(&self.num), flip(&self.den))
    }

    /// Evaluate at a rational point; `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[QQ]) -> Option<QQ> {
        let d = self.den.eval(point);
        if num_traits::Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    /// Cross-multiplication equality (used by property tests; normal equality
    /// is structural thanks to canonical reduction).
    pub fn eq_cross(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn render(&self) -> String {
        if self.den.is_constant() && self.den.constant_value().map(|c| num_traits::One::is_one(&c)).unwrap_or(false) {
            self.num.render()
        } else {
            format!("({}) / ({})", self.num.render(), self.den.render())
        }
    }
}

impl RatC {
    /// The slope variable c.
    pub fn c() -> Self {
        Self::gen(0)
    }

    /// Affine form a + b·c as an element of Q(c).
    pub fn linear(a: QQ, b: QQ) -> Self {
        Self::from_poly(
            MultiPoly::constant(c_vars(), a).add(&MultiPoly::monomial(c_vars(), vec![1], b)),
        )
    }

    /// Decompose as a Laurent polynomial in c, i.e. require the (canonical)
    /// denominator to be a monomial γ·c^j. Returns exponent ↦ coefficient.
    pub fn as_laurent_in_c(&self) -> Option<BTreeMap<i64, QQ>> {
        if self.num.is_zero() {
            return Some(BTreeMap::new());
        }
        if self.den.num_terms() != 1 {
            return None;
        }
        let (de, dc) = self.den.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let j = de[0] as i64;
        let mut out = BTreeMap::new();
        for (e, c) in self.num.terms() {
            out.insert(e[0] as i64 - j, c / &dc);
        }
        Some(out)
    }

    /// The value as a constant rational, if it is one.
    pub fn as_constant(&self) -> Option<QQ> {
        if self.den.is_constant() {
            let d = self.den.constant_value().unwrap();
            self.num.constant_value().map(|n| n / d)
        } else {
            None
        }
    }
}

impl RatQT {
    pub fn q() -> Self {
        Self::gen(0)
    }
    pub fn t() -> Self {
        Self::gen(1)
    }
    pub fn as_constant(&self) -> Option<QQ> {
        if self.den.is_constant() {
            let d = self.den.constant_value().unwrap();
            self.num.constant_value().map(|n| n / d)
        } else {
            None
        }
    }
}

impl<V: VarSet> Coeff for RationalFunction<V> {
    fn zero() -> Self {
        Self::from_poly(MultiPoly::zero(V::vars()))
    }
    fn one() -> Self {
        Self::from_poly(MultiPoly::one(V::vars()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        // Common-denominator fast path (frequent: both polynomial, or
        // accumulation over a shared denominator).
        if self.den == rhs.den {
            return RationalFunction::new(self.num.add(&rhs.num), self.den.clone());
        }
        RationalFunction::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        RationalFunction::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone(), _v: PhantomData }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RationalFunction::new(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rat(r: &QQ) -> Self {
        Self::constant(r.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{qi, qq};
    use super::*;

    #[test]
    fn reduction_is_canonical() {
        let q = RatQT::q();
        let t = RatQT::t();
        let one = RatQT::one();
        // (q² − t²)/(q − t) reduces to q + t.
        let a = q.mul(&q).sub(&t.mul(&t));
        let b = q.sub(&t);
        let r = a.mul(&b.inv().unwrap());
        assert_eq!(r, q.add(&t));
        assert!(r.is_polynomial());
        let _ = one;
    }

    #[test]
    fn denominator_sign_convention() {
        // 1/(t − q): canonical denominator has positive lex-leading (q) term,
        // so it is stored as (−1)/(q − t).
        let r = RatQT::t().sub(&RatQT::q()).inv().unwrap();
        assert!(r.denom().leading().unwrap().1 > &qi(0));
        assert_eq!(r.mul(&RatQT::t().sub(&RatQT::q())), RatQT::one());
    }

    #[test]
    fn adams_and_recip() {
        let q = RatQT::q();
        let t = RatQT::t();
        let f = RatQT::one().sub(&q.mul(&t));
        assert_eq!(f.adams(2), RatQT::one().sub(&q.mul(&q).mul(&t).mul(&t)));
        // t → 1/t on (1 − t): becomes (t − 1)·(−1)/t = (1 − t)/t ... checked
        // by evaluating at t = 2: 1 − 1/2 = 1/2.
        let g = RatQT::one().sub(&t).subst_recip(1);
        assert_eq!(g.eval(&[qi(7), qi(2)]).unwrap(), qq(1, 2));
    }

    #[test]
    fn laurent_in_c() {
        // (1 + 2c²)/(3c) → c⁻¹/3 + 2c/3.
        let c = RatC::c();
        let f = RatC::one()
            .add(&c.mul(&c).mul(&RatC::constant(qi(2))))
            .mul(&c.mul(&RatC::constant(qi(3))).inv().unwrap());
        let m = f.as_laurent_in_c().unwrap();
        assert_eq!(m[&-1], qq(1, 3));
        assert_eq!(m[&1], qq(2, 3));
        // 1/(1+c) is not a Laurent polynomial in c.
        assert!(RatC::one().add(&c).inv().unwrap().as_laurent_in_c().is_none());
    }
}
