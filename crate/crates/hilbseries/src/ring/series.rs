//! Truncated multivariate power series over an exact coefficient ring.
//!
//! Truncation is a per-variable box (the paper's checks fix w-order and
//! z-order independently), with an optional total-degree cap on top for the
//! computations that are bounded by total degree. Binary operations take the
//! per-variable minimum of the two truncation boxes. Terms live in a
//! `BTreeMap`, so iteration and serialization order is lexicographic.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Coeff, RingError, QQ};

/// The truncation data of a series: named variables, per-variable orders
/// (inclusive: exponents ≤ order are retained), optional total-degree cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesShape {
    pub vars: Arc<[String]>,
    pub orders: Vec<u32>,
    pub total_cap: Option<u32>,
}

impl SeriesShape {
    pub fn new(vars: &[&str], orders: &[u32]) -> Self {
        assert_eq!(vars.len(), orders.len());
        SeriesShape {
            vars: Arc::from(vars.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            orders: orders.to_vec(),
            total_cap: None,
        }
    }

    pub fn with_total_cap(mut self, cap: u32) -> Self {
        self.total_cap = Some(cap);
        self
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> usize {
        self.vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("no variable {name} in series shape"))
    }

    fn admits(&self, exp: &[u32]) -> bool {
        exp.iter().zip(&self.orders).all(|(e, o)| e <= o)
            && self.total_cap.map(|c| exp.iter().sum::<u32>() <= c).unwrap_or(true)
    }

    fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "series in different variables");
        let orders = self.orders.iter().zip(&other.orders).map(|(a, b)| *a.min(b)).collect();
        let total_cap = match (self.total_cap, other.total_cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        SeriesShape { vars: self.vars.clone(), orders, total_cap }
    }

    /// An upper bound on the total degree of any retained term.
    pub fn degree_bound(&self) -> u32 {
        let box_sum: u32 = self.orders.iter().sum();
        self.total_cap.map(|c| c.min(box_sum)).unwrap_or(box_sum)
    }
}

/// A truncated power series with coefficients in `R`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries<R: Coeff> {
    shape: SeriesShape,
    terms: BTreeMap<Vec<u32>, R>,
}

impl<R: Coeff> PartialEq for TruncatedSeries<R> {
    /// Two series are equal iff all retained coefficients agree (compared on
    /// the common truncation box).
    fn eq(&self, other: &Self) -> bool {
        let shape = self.shape.meet(&other.shape);
        let keys: std::collections::BTreeSet<&Vec<u32>> =
            self.terms.keys().chain(other.terms.keys()).filter(|e| shape.admits(e)).collect();
        keys.into_iter().all(|e| self.coeff(e) == other.coeff(e))
    }
}

impl<R: Coeff> TruncatedSeries<R> {
    pub fn zero(shape: SeriesShape) -> Self {
        TruncatedSeries { shape, terms: BTreeMap::new() }
    }

    pub fn constant(shape: SeriesShape, c: R) -> Self {
        let mut s = Self::zero(shape);
        s.insert(vec![0; s.shape.nvars()], c);
        s
    }

    pub fn one(shape: SeriesShape) -> Self {
        Self::constant(shape, R::one())
    }

    /// The named variable as a series.
    pub fn var(shape: SeriesShape, name: &str) -> Self {
        let i = shape.var_index(name);
        let mut exp = vec![0; shape.nvars()];
        exp[i] = 1;
        Self::monomial(shape, exp, R::one())
    }

    pub fn monomial(shape: SeriesShape, exp: Vec<u32>, c: R) -> Self {
        let mut s = Self::zero(shape);
        s.insert(exp, c);
        s
    }

    pub fn shape(&self) -> &SeriesShape {
        &self.shape
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> R {
        self.terms.get(exp).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&vec![0; self.shape.nvars()])
    }

    pub(crate) fn insert(&mut self, exp: Vec<u32>, c: R) {
        if !self.shape.admits(&exp) {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, c);
        }
    }

    fn insert_add(&mut self, exp: Vec<u32>, c: R) {
        if c.is_zero() || !self.shape.admits(&exp) {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.shape.meet(&rhs.shape));
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.shape.meet(&rhs.shape));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if out.shape.admits(&exp) {
                    out.insert_add(exp, ca.mul(cb));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.shape.clone());
        for (e, v) in &self.terms {
            out.insert_add(e.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, r: &QQ) -> Self {
        self.scale(&R::from_rat(r))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.shape.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Self, RingError> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(RingError::NonUnitConstantTerm)?;
        // f = c0(1 + h) ⇒ 1/f = c0⁻¹ Σ (−h)ᵏ.
        let h_neg = Self::constant(self.shape.clone(), c0)
            .sub(self)
            .scale(&c0_inv);
        let bound = self.shape.degree_bound();
        let mut acc = Self::one(self.shape.clone());
        let mut pw = Self::one(self.shape.clone());
        for _ in 0..bound {
            pw = pw.mul(&h_neg);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// log f for f with constant term 1.
    pub fn log(&self) -> Result<Self, RingError> {
        if !self.constant_term().is_one() {
            return Err(RingError::BadConstantTerm { expected: "1" });
        }
        let h = self.sub(&Self::one(self.shape.clone()));
        let bound = self.shape.degree_bound();
        let mut acc = Self::zero(self.shape.clone());
        let mut pw = Self::one(self.shape.clone());
        for k in 1..=bound.max(1) {
            pw = pw.mul(&h);
            if pw.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pw.scale_rat(&super::qq(sign, k as i64)));
        }
        Ok(acc)
    }

    /// exp g for g with constant term 0.
    pub fn exp(&self) -> Result<Self, RingError> {
        if !self.constant_term().is_zero() {
            return Err(RingError::BadConstantTerm { expected: "0" });
        }
        let bound = self.shape.degree_bound();
        let mut acc = Self::one(self.shape.clone());
        let mut term = Self::one(self.shape.clone());
        for k in 1..=bound.max(1) {
            term = term.mul(self).scale_rat(&super::qq(1, k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// f^α for rational α, requiring constant term 1.
    pub fn pow_rat(&self, alpha: &QQ) -> Result<Self, RingError> {
        self.log()?.scale_rat(alpha).exp()
    }

    /// Composition f(g) for univariate f; g must have zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, RingError> {
        assert_eq!(self.shape.nvars(), 1, "compose requires a univariate outer series");
        if !g.constant_term().is_zero() {
            return Err(RingError::NonzeroConstantTerm);
        }
        let order = self.shape.orders[0];
        // Horner from the top order down.
        let mut acc = TruncatedSeries::zero(g.shape.clone());
        for d in (0..=order).rev() {
            acc = acc.mul(g);
            let c = self.coeff(&[d]);
            if !c.is_zero() {
                acc = acc.add(&TruncatedSeries::constant(g.shape.clone(), c));
            }
        }
        Ok(acc)
    }

    /// Compositional inverse of a univariate f = c·x + … with c a unit,
    /// by fixed-point iteration g ← (x − (f − c·x)(g))/c.
    pub fn compositional_inverse(&self) -> Result<Self, RingError> {
        assert_eq!(self.shape.nvars(), 1);
        let c = self.coeff(&[1]);
        let c_inv = c.inv().ok_or(RingError::NonUnitLinearTerm)?;
        if !self.constant_term().is_zero() {
            return Err(RingError::NonUnitLinearTerm);
        }
        let order = self.shape.orders[0];
        let x = Self::var(self.shape.clone(), &self.shape.vars[0].clone());
        let tail = self.sub(&x.scale(&c));
        let mut g = x.scale(&c_inv);
        for _ in 0..order {
            g = x.sub(&tail.compose(&g)?).scale(&c_inv);
        }
        Ok(g)
    }

    /// The theta operator x·d/dx for the named variable; exact under
    /// truncation (the paper's D_w, D_z act this way on (w,z)-series).
    pub fn theta(&self, var: &str) -> Self {
        let i = self.shape.var_index(var);
        let mut out = Self::zero(self.shape.clone());
        for (e, c) in &self.terms {
            let k = e[i];
            if k > 0 {
                out.insert_add(e.clone(), c.scale(&super::qi(k as i64)));
            }
        }
        out
    }

    /// Plain derivative d/dx; the truncation order in that variable drops by 1.
    pub fn deriv(&self, var: &str) -> Self {
        let i = self.shape.var_index(var);
        let mut shape = self.shape.clone();
        shape.orders[i] = shape.orders[i].saturating_sub(1);
        let mut out = Self::zero(shape);
        for (e, c) in &self.terms {
            let k = e[i];
            if k > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.insert_add(e2, c.scale(&super::qi(k as i64)));
            }
        }
        out
    }

    /// Substitute a series for every variable: result = self(images…).
    /// All images must share one shape, and each must have zero constant term
    /// unless the corresponding variable never occurs.
    pub fn substitute(&self, images: &[Self]) -> Self {
        assert_eq!(images.len(), self.shape.nvars());
        let target = images
            .first()
            .map(|s| s.shape.clone())
            .unwrap_or_else(|| self.shape.clone());
        let mut powers: Vec<Vec<Self>> = images
            .iter()
            .map(|im| vec![Self::one(im.shape.clone()), im.clone()])
            .collect();
        let mut out = Self::zero(target.clone());
        for (e, c) in &self.terms {
            let mut term = Self::constant(target.clone(), c.clone());
            for (i, &ex) in e.iter().enumerate() {
                if ex == 0 {
                    continue;
                }
                while powers[i].len() <= ex as usize {
                    let last = powers[i].last().unwrap().clone();
                    powers[i].push(last.mul(&images[i]));
                }
                term = term.mul(&powers[i][ex as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-embed into a larger variable set: `var_map[i]` is the index in
    /// `target` of this series' i-th variable.
    pub fn embed(&self, target: SeriesShape, var_map: &[usize]) -> Self {
        assert_eq!(var_map.len(), self.shape.nvars());
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut exp = vec![0; out.shape.nvars()];
            for (i, &ex) in e.iter().enumerate() {
                exp[var_map[i]] += ex;
            }
            out.insert_add(exp, c.clone());
        }
        out
    }

    /// The coefficient of `var^k` as a series in the remaining variables.
    pub fn coeff_of(&self, var: &str, k: u32) -> Self {
        let i = self.shape.var_index(var);
        let vars: Vec<&str> = self
            .shape
            .vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.as_str())
            .collect();
        let orders: Vec<u32> = self
            .shape
            .orders
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &o)| o)
            .collect();
        let mut shape = SeriesShape::new(&vars, &orders);
        shape.total_cap = self.shape.total_cap;
        let mut out = Self::zero(shape);
        for (e, c) in &self.terms {
            if e[i] == k {
                let exp: Vec<u32> =
                    e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                out.insert_add(exp, c.clone());
            }
        }
        out
    }

    /// Evaluate the series at a named variable = 0 (drop the variable).
    pub fn at_zero(&self, var: &str) -> Self {
        self.coeff_of(var, 0)
    }

    /// Project onto a smaller truncation box.
    pub fn truncated(&self, shape: SeriesShape) -> Self {
        let mut out = Self::zero(shape);
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    /// Map coefficients into another ring.
    pub fn map_coeff<S: Coeff>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        let mut out = TruncatedSeries::zero(self.shape.clone());
        for (e, c) in &self.terms {
            out.insert_add(e.clone(), f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{qi, qq, QQ};
    use super::*;

    fn sh(vars: &[&str], orders: &[u32]) -> SeriesShape {
        SeriesShape::new(vars, orders)
    }

    fn y4() -> SeriesShape {
        sh(&["y"], &[4])
    }

    #[test]
    fn invert_geometric() {
        // (1−y)⁻¹ at order 4 → 1+y+y²+y³+y⁴.
        let one = TruncatedSeries::<QQ>::one(y4());
        let f = one.sub(&TruncatedSeries::var(y4(), "y"));
        let inv = f.invert().unwrap();
        for k in 0..=4 {
            assert_eq!(inv.coeff(&[k]), qi(1));
        }
        assert_eq!(f.mul(&inv), one);
    }

    #[test]
    fn invert_two_vars() {
        // (1−u−v)⁻¹ at orders (2,2): coefficient of uv is 2.
        let shape = sh(&["u", "v"], &[2, 2]);
        let f = TruncatedSeries::<QQ>::one(shape.clone())
            .sub(&TruncatedSeries::var(shape.clone(), "u"))
            .sub(&TruncatedSeries::var(shape.clone(), "v"));
        let inv = f.invert().unwrap();
        assert_eq!(inv.coeff(&[1, 1]), qi(2));
        assert_eq!(f.mul(&inv), TruncatedSeries::one(shape));
    }

    #[test]
    fn log_mercator_and_exp_roundtrip() {
        let shape = sh(&["y"], &[3]);
        let f = TruncatedSeries::<QQ>::one(shape.clone()).sub(&TruncatedSeries::var(shape.clone(), "y"));
        let l = f.log().unwrap();
        assert_eq!(l.coeff(&[1]), qi(-1));
        assert_eq!(l.coeff(&[2]), qq(-1, 2));
        assert_eq!(l.coeff(&[3]), qq(-1, 3));
        assert_eq!(l.exp().unwrap(), f);

        let shape2 = sh(&["u", "v"], &[3, 3]);
        let g = TruncatedSeries::<QQ>::one(shape2.clone())
            .sub(&TruncatedSeries::var(shape2.clone(), "u"))
            .sub(&TruncatedSeries::var(shape2, "v"));
        assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn log_requires_unit_constant() {
        let f = TruncatedSeries::<QQ>::var(y4(), "y");
        assert_eq!(f.log(), Err(RingError::BadConstantTerm { expected: "1" }));
        assert!(TruncatedSeries::<QQ>::one(y4()).exp().is_err());
    }

    #[test]
    fn compose_basic() {
        // f = log(1−y) composed with g = wz² starts with −wz².
        let f = TruncatedSeries::<QQ>::one(sh(&["y"], &[3]))
            .sub(&TruncatedSeries::var(sh(&["y"], &[3]), "y"))
            .log()
            .unwrap();
        let wz = sh(&["w", "z"], &[3, 6]);
        let g = TruncatedSeries::var(wz.clone(), "w").mul(&TruncatedSeries::var(wz.clone(), "z").pow(2));
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.coeff(&[1, 2]), qi(-1));
        assert_eq!(fg.coeff(&[2, 4]), qq(-1, 2));
    }

    #[test]
    fn compositional_inverse_chern_substitution() {
        // f = y(1−2y) inverts to w + 2w² + 8w³ + … (k=3 Chern substitution).
        let shape = sh(&["y"], &[4]);
        let y = TruncatedSeries::<QQ>::var(shape.clone(), "y");
        let f = y.sub(&y.pow(2).scale_rat(&qi(2)));
        let g = f.compositional_inverse().unwrap();
        assert_eq!(g.coeff(&[1]), qi(1));
        assert_eq!(g.coeff(&[2]), qi(2));
        assert_eq!(g.coeff(&[3]), qi(8));
        assert_eq!(f.compose(&g).unwrap(), y);

        // f = −y(1−y)³ inverts to −w + 3w² − 15w³ + … (k=3 Verlinde).
        let om = TruncatedSeries::<QQ>::one(shape.clone()).sub(&y);
        let f2 = y.neg().mul(&om.pow(3));
        let g2 = f2.compositional_inverse().unwrap();
        assert_eq!(g2.coeff(&[1]), qi(-1));
        assert_eq!(g2.coeff(&[2]), qi(3));
        assert_eq!(g2.coeff(&[3]), qi(-15));
    }

    #[test]
    fn theta_and_deriv() {
        let shape = sh(&["w", "z"], &[2, 2]);
        let f = TruncatedSeries::<QQ>::var(shape.clone(), "w").mul(&TruncatedSeries::var(shape.clone(), "z")).scale_rat(&qi(5));
        assert_eq!(f.theta("w"), f);
        assert_eq!(f.deriv("w").coeff(&[0, 1]), qi(5));
    }

    #[test]
    fn substitute_and_embed() {
        // y ↦ wz² via substitute.
        let y_shape = sh(&["y"], &[2]);
        let wz = sh(&["w", "z"], &[2, 4]);
        let y = TruncatedSeries::<QQ>::var(y_shape, "y");
        let img = TruncatedSeries::var(wz.clone(), "w").mul(&TruncatedSeries::var(wz.clone(), "z").pow(2));
        let s = y.pow(2).substitute(&[img]);
        assert_eq!(s.coeff(&[2, 4]), qi(1));

        let w_only = TruncatedSeries::<QQ>::var(sh(&["w"], &[2]), "w");
        let emb = w_only.embed(wz, &[0]);
        assert_eq!(emb.coeff(&[1, 0]), qi(1));
    }

    #[test]
    fn total_cap_prunes() {
        let shape = sh(&["u", "v"], &[3, 3]).with_total_cap(3);
        let u = TruncatedSeries::<QQ>::var(shape.clone(), "u");
        let v = TruncatedSeries::var(shape, "v");
        let p = u.add(&v).pow(4);
        assert!(p.is_zero());
    }
}
