//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are keyed by exponent tuples in a `BTreeMap`, so iteration order is
//! lexicographic and deterministic. Only the handful of variable sets the
//! engine needs ever occur (`(q,t)` for Macdonald work, `(c)` for the slope
//! line), so the gcd is implemented for any number of variables by recursion
//! on the main variable but is only exercised for one and two.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::QQ;

/// A sparse polynomial over Q with named variables.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Vec<u32>, QQ>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: QQ) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: Arc<[String]>) -> Self {
        MultiPoly::constant(vars, QQ::one())
    }

    /// The i-th variable as a polynomial.
    pub fn var(vars: Arc<[String]>, i: usize) -> Self {
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        MultiPoly::monomial(vars, exp, QQ::one())
    }

    pub fn monomial(vars: Arc<[String]>, exp: Vec<u32>, c: QQ) -> Self {
        assert_eq!(exp.len(), vars.len());
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<QQ> {
        if self.is_zero() {
            Some(QQ::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, exp: &[u32]) -> QQ {
        self.terms.get(exp).cloned().unwrap_or_else(QQ::zero)
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn insert_add(&mut self, exp: Vec<u32>, c: QQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.vars.len(), rhs.vars.len());
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
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
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.vars.len(), rhs.vars.len());
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_add(exp, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, r: &QQ) -> Self {
        if r.is_zero() {
            return MultiPoly::zero(self.vars.clone());
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * r;
        }
        out
    }

    /// Raise every exponent by the factor n (the Adams substitution x ↦ xⁿ).
    pub fn adams(&self, n: u32) -> Self {
        let mut out = MultiPoly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            out.terms.insert(e.iter().map(|&x| x * n).collect(), c.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = MultiPoly::one(self.vars.clone());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, point: &[QQ]) -> QQ {
        let mut acc = QQ::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &ex) in e.iter().enumerate() {
                for _ in 0..ex {
                    term = term * &point[i];
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Lex-leading (exponent, coefficient) pair.
    pub fn leading(&self) -> Option<(&Vec<u32>, &QQ)> {
        self.terms.iter().next_back()
    }

    /// Positive rational γ such that self/γ has coprime integer coefficients.
    pub fn rational_content(&self) -> QQ {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            QQ::one()
        } else {
            QQ::new(num_gcd, den_lcm)
        }
    }

    /// Exact division; `None` when rhs does not divide self.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.vars.clone());
        let (lead_e, lead_c) = {
            let (e, c) = rhs.leading().unwrap();
            (e.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.leading().unwrap();
                (e.clone(), c.clone())
            };
            if re.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = rc / &lead_c;
            let t = MultiPoly::monomial(self.vars.clone(), qe, qc);
            rem = rem.sub(&t.mul(rhs));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Coefficients of self viewed as univariate in `var`, keyed by degree;
    /// the returned polynomials do not involve `var`.
    fn uni_coeffs(&self, var: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[var];
            let mut e2 = e.clone();
            e2[var] = 0;
            out.entry(d)
                .or_insert_with(|| MultiPoly::zero(self.vars.clone()))
                .insert_add(e2, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    fn from_uni(vars: Arc<[String]>, var: usize, coeffs: &BTreeMap<u32, MultiPoly>) -> Self {
        let mut out = MultiPoly::zero(vars);
        for (&d, p) in coeffs {
            for (e, c) in &p.terms {
                let mut e2 = e.clone();
                e2[var] += d;
                out.insert_add(e2, c.clone());
            }
        }
        out
    }

    /// Content with respect to `var`: gcd of the univariate coefficients.
    fn content_wrt(&self, var: usize) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.vars.clone());
        for (_, p) in self.uni_coeffs(var) {
            acc = MultiPoly::gcd(&acc, &p);
            if acc.is_constant() && !acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Pseudo-remainder of self by rhs with respect to `var`, normalized up to
    /// content (only used by the gcd, which works modulo associates). The
    /// remainder is reduced by its content after every elimination step to
    /// keep coefficient growth linear instead of exponential.
    fn prem(&self, rhs: &Self, var: usize) -> MultiPoly {
        let db = rhs.degree(var);
        let ub = rhs.uni_coeffs(var);
        let lb = ub[&db].clone();
        let mut rem = self.clone();
        loop {
            if rem.is_zero() {
                return rem;
            }
            let da = rem.degree(var);
            if da < db {
                return rem;
            }
            let la = rem.uni_coeffs(var)[&da].clone();
            // rem ← lb·rem − la·x^{da−db}·rhs, which strictly drops the degree.
            let mut shift = BTreeMap::new();
            shift.insert(da - db, la);
            let shifted = MultiPoly::from_uni(self.vars.clone(), var, &shift).mul(rhs);
            rem = rem.mul(&lb).sub(&shifted);
            assert!(rem.degree(var) < da || rem.is_zero(), "pseudo-division failed to reduce degree");
            if !rem.is_zero() {
                let cont = rem.content_wrt(var);
                if !cont.is_constant() {
                    rem = rem.div_exact(&cont).expect("content divides");
                }
                rem = rem.scale(&(QQ::one() / rem.rational_content()));
            }
        }
    }

    /// Normalize so the lex-leading coefficient is 1 (used for gcd output).
    fn monic_lex(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = QQ::one() / c;
                self.scale(&inv)
            }
        }
    }

    /// Dense univariate coefficient list in `var`; requires the polynomial to
    /// involve no other variable.
    fn to_uni_vec(&self, var: usize) -> Vec<QQ> {
        let mut out = vec![QQ::zero(); self.degree(var) as usize + 1];
        for (e, c) in &self.terms {
            debug_assert!(e.iter().enumerate().all(|(v, &x)| v == var || x == 0));
            out[e[var] as usize] = c.clone();
        }
        out
    }

    fn from_uni_vec(vars: Arc<[String]>, var: usize, coeffs: &[QQ]) -> Self {
        let mut out = MultiPoly::zero(vars);
        for (d, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; out.vars.len()];
                e[var] = d as u32;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    /// Substitute `val` for `param`, returning the dense coefficient list of
    /// the result as a univariate polynomial in `main` (all other variables
    /// must be absent).
    fn eval_param(&self, main: usize, param: usize, val: &QQ) -> Vec<QQ> {
        let mut out = vec![QQ::zero(); self.degree(main) as usize + 1];
        for (e, c) in &self.terms {
            let mut pw = QQ::one();
            for _ in 0..e[param] {
                pw = pw * val;
            }
            out[e[main] as usize] = &out[e[main] as usize] + c * pw;
        }
        out
    }

    /// Polynomial gcd over Q, normalized monic in lex order.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic_lex();
        }
        if b.is_zero() {
            return a.monic_lex();
        }
        if a.is_constant() || b.is_constant() {
            return MultiPoly::one(a.vars.clone());
        }
        let present: Vec<usize> =
            (0..a.nvars()).filter(|&v| a.degree(v) > 0 || b.degree(v) > 0).collect();
        match present.len() {
            1 => {
                let v = present[0];
                let g = uni_gcd(a.to_uni_vec(v), b.to_uni_vec(v));
                MultiPoly::from_uni_vec(a.vars.clone(), v, &g).monic_lex()
            }
            2 => {
                if let Some(g) = Self::gcd_bivar(a, b, present[0], present[1]) {
                    return g;
                }
                Self::gcd_prs(a, b)
            }
            _ => Self::gcd_prs(a, b),
        }
    }

    /// Bivariate gcd by evaluation at the parameter variable and Lagrange
    /// interpolation (with a divisibility check, so a `Some` answer is always
    /// correct); `None` only if the point budget runs out, which falls back to
    /// the pseudo-remainder route.
    fn gcd_bivar(a: &Self, b: &Self, x: usize, y: usize) -> Option<Self> {
        // Split off contents with respect to the main variable: these are
        // univariate in y and recurse into the fast branch.
        let ca = a.content_wrt(x);
        let cb = b.content_wrt(x);
        let gc = MultiPoly::gcd(&ca, &cb);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        if pa.degree(x) == 0 || pb.degree(x) == 0 {
            // One primitive part is free of x, hence coprime to the other
            // (which is primitive in x); only the contents share a factor.
            return Some(gc.monic_lex());
        }
        let la = pa.uni_coeffs(x).remove(&pa.degree(x)).expect("leading coefficient");
        let lb = pb.uni_coeffs(x).remove(&pb.degree(x)).expect("leading coefficient");
        let gamma = MultiPoly::gcd(&la, &lb);
        let needed = (pa.degree(y).min(pb.degree(y)) + gamma.degree(y) + 1) as usize;

        let mut points: Vec<QQ> = Vec::new();
        let mut images: Vec<Vec<QQ>> = Vec::new();
        let mut min_deg = usize::MAX;
        let mut next = 0i64;
        let mut tried = 0usize;
        while images.len() < needed {
            tried += 1;
            if tried > needed + 64 {
                return None;
            }
            // Points 0, 1, −1, 2, −2, …
            let t0 = qq_from(next);
            next = if next > 0 { -next } else { -next + 1 };
            let la0 = eval_uni(&la.to_uni_vec(y), &t0);
            let lb0 = eval_uni(&lb.to_uni_vec(y), &t0);
            if la0.is_zero() || lb0.is_zero() {
                continue;
            }
            let g0 = uni_gcd(pa.eval_param(x, y, &t0), pb.eval_param(x, y, &t0));
            let d = g0.len() - 1;
            if d == 0 {
                // Primitive parts are coprime.
                return Some(gc.monic_lex());
            }
            if d < min_deg {
                min_deg = d;
                points.clear();
                images.clear();
            } else if d > min_deg {
                continue; // unlucky evaluation point
            }
            let scale = eval_uni(&gamma.to_uni_vec(y), &t0);
            points.push(t0);
            images.push(g0.iter().map(|c| c * &scale).collect());
        }
        // Interpolate each x-coefficient as a polynomial in y.
        let mut h = MultiPoly::zero(a.vars.clone());
        for j in 0..=min_deg {
            let vals: Vec<QQ> = images.iter().map(|g| g[j].clone()).collect();
            let coeffs = lagrange(&points, &vals);
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let mut e = vec![0u32; a.nvars()];
                    e[x] = j as u32;
                    e[y] = k as u32;
                    h.insert_add(e, c.clone());
                }
            }
        }
        let hc = h.content_wrt(x);
        let g = h.div_exact(&hc).expect("content divides");
        if pa.div_exact(&g).is_some() && pb.div_exact(&g).is_some() {
            Some(gc.mul(&g).monic_lex())
        } else {
            None
        }
    }

    /// Primitive pseudo-remainder-sequence gcd (any number of variables);
    /// slow fallback.
    fn gcd_prs(a: &Self, b: &Self) -> Self {
        // Main variable: first variable occurring in either operand.
        let var = (0..a.nvars())
            .find(|&v| a.degree(v) > 0 || b.degree(v) > 0)
            .expect("nonconstant polynomial with no variable");
        if a.degree(var) == 0 {
            return MultiPoly::gcd(a, &b.content_wrt(var));
        }
        if b.degree(var) == 0 {
            return MultiPoly::gcd(&a.content_wrt(var), b);
        }
        let ca = a.content_wrt(var);
        let cb = b.content_wrt(var);
        let c = MultiPoly::gcd(&ca, &cb);
        let mut pa = a.div_exact(&ca).expect("content divides");
        let mut pb = b.div_exact(&cb).expect("content divides");
        if pa.degree(var) < pb.degree(var) {
            std::mem::swap(&mut pa, &mut pb);
        }
        loop {
            let r = pa.prem(&pb, var);
            if r.is_zero() {
                let prim = pb.div_exact(&pb.content_wrt(var)).expect("content divides");
                return c.mul(&prim).monic_lex();
            }
            if r.degree(var) == 0 {
                // Coprime in the main variable.
                return c.monic_lex();
            }
            pa = pb;
            pb = r.div_exact(&r.content_wrt(var)).expect("content divides");
        }
    }

    /// Canonical display string, e.g. `1 - 2*q*t + q^2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(abs.to_string());
            }
            for (v, &ex) in e.iter().enumerate() {
                if ex == 1 {
                    factors.push(self.vars[v].clone());
                } else if ex > 1 {
                    factors.push(format!("{}^{}", self.vars[v], ex));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn qq_from(n: i64) -> QQ {
    QQ::from(BigInt::from(n))
}

/// Horner evaluation of a dense univariate polynomial.
fn eval_uni(coeffs: &[QQ], x: &QQ) -> QQ {
    let mut acc = QQ::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Clear denominators and divide by the integer content.
fn uni_to_primitive_z(a: &[QQ]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in a {
        lcm = lcm.lcm(c.denom());
    }
    let mut out: Vec<BigInt> = a.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &out {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in out.iter_mut() {
            *c = &*c / &g;
        }
    }
    out
}

fn trim_z(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Monic gcd of dense univariate polynomials over Q, via a primitive
/// pseudo-remainder sequence over Z (integer gcds are far cheaper than
/// normalizing big rationals at every step).
fn uni_gcd(a: Vec<QQ>, b: Vec<QQ>) -> Vec<QQ> {
    let mut a = uni_to_primitive_z(&a);
    let mut b = uni_to_primitive_z(&b);
    trim_z(&mut a);
    trim_z(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // Pseudo-remainder of a by b, reduced to its primitive part.
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap().clone();
            let shift = a.len() - b.len();
            for c in a.iter_mut() {
                *c = &*c * &lb;
            }
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = &a[shift + i] - &(&f * c);
            }
            trim_z(&mut a);
            let mut g = BigInt::zero();
            for c in &a {
                g = g.gcd(c);
            }
            if !g.is_zero() && !g.is_one() {
                for c in a.iter_mut() {
                    *c = &*c / &g;
                }
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.is_empty() {
        return vec![];
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| QQ::new(c.clone(), lead.clone())).collect()
}

/// Lagrange interpolation: the unique polynomial of degree < points.len()
/// through (points[i], values[i]), as dense coefficients.
fn lagrange(points: &[QQ], values: &[QQ]) -> Vec<QQ> {
    let n = points.len();
    let mut out = vec![QQ::zero(); n];
    for i in 0..n {
        // Build ∏_{j≠i} (x − x_j) / (x_i − x_j) incrementally.
        let mut basis = vec![QQ::zero(); n];
        basis[0] = QQ::one();
        let mut deg = 0usize;
        let mut denom = QQ::one();
        for (j, xj) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            // Multiply by (x − x_j).
            for k in (0..=deg).rev() {
                let c = basis[k].clone();
                basis[k + 1] = &basis[k + 1] + &c;
                basis[k] = -(c * xj);
            }
            deg += 1;
            denom = denom * (&points[i] - xj);
        }
        let f = &values[i] / denom;
        for k in 0..=deg {
            out[k] = &out[k] + &(&basis[k] * &f);
        }
    }
    out
}

/// Shared variable lists for the two polynomial rings the engine uses.
pub fn qt_vars() -> Arc<[String]> {
    use std::sync::OnceLock;
    static V: OnceLock<Arc<[String]>> = OnceLock::new();
    V.get_or_init(|| Arc::from(vec!["q".to_string(), "t".to_string()])).clone()
}

pub fn c_vars() -> Arc<[String]> {
    use std::sync::OnceLock;
    static V: OnceLock<Arc<[String]>> = OnceLock::new();
    V.get_or_init(|| Arc::from(vec!["c".to_string()])).clone()
}

#[cfg(test)]
mod tests {
    use super::super::{qi, qq};
    use super::*;

    fn q() -> MultiPoly {
        MultiPoly::var(qt_vars(), 0)
    }
    fn t() -> MultiPoly {
        MultiPoly::var(qt_vars(), 1)
    }
    fn one() -> MultiPoly {
        MultiPoly::one(qt_vars())
    }

    #[test]
    fn arithmetic_basics() {
        let p = q().add(&t());
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(&[1, 1]), qi(2));
        assert_eq!(sq.coeff(&[2, 0]), qi(1));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn div_exact_roundtrip() {
        let a = q().add(&t()).mul(&q().sub(&one()));
        let b = q().sub(&one());
        assert_eq!(a.div_exact(&b).unwrap(), q().add(&t()));
        assert!(a.add(&one()).div_exact(&b).is_none());
    }

    #[test]
    fn gcd_bivariate() {
        // gcd((q−t)(q+t), (q−t)(q−1)) = q − t (up to normalization).
        let d = q().sub(&t());
        let a = d.mul(&q().add(&t()));
        let b = d.mul(&q().sub(&one()));
        let g = MultiPoly::gcd(&a, &b);
        assert!(a.div_exact(&g).is_some());
        assert!(b.div_exact(&g).is_some());
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn gcd_coprime() {
        let g = MultiPoly::gcd(&q().add(&one()), &t().add(&one()));
        assert!(g.is_constant());
    }

    #[test]
    fn content_and_render() {
        let p = q().scale(&qi(4)).add(&t().scale(&qq(2, 3)));
        assert_eq!(p.rational_content(), qq(2, 3));
        assert_eq!(q().sub(&one()).render(), "-1 + q");
    }
}
