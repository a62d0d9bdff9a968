//! Symmetric functions over Q(q,t), plethysm, and modified Macdonald
//! polynomials H̃_μ, together with the identity verifier suite (Cauchy kernel,
//! the H̃_μ[X+1] expansion, Macdonald–Koornwinder duality).
//!
//! Symmetric functions are stored in the power-sum basis with coefficients in
//! Q(q,t); monomial ↔ power-sum conversion goes through an expansion in n
//! variables and one exact matrix inversion per degree. H̃_μ is built by
//! Gram–Schmidt orthogonalization of the monomial basis under the (q,t) Hall
//! pairing, normalization to the integral form, and the plethystic
//! modification; the verifier suite is the correctness contract for the
//! construction. All caches are write-once per key and thread-safe.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde_json::json;
use thiserror::Error;

use crate::partition::{enumerate_partitions, partitions_up_to, Partition};
use crate::report::CheckReport;
use crate::ring::{linalg, qi, qt_vars, Coeff, MultiPoly, RatQT, SeriesShape, TruncatedSeries, QQ};

/// Default cap on |μ| for H̃_μ; coefficient growth in Q(q,t) is the binding
/// constraint.
pub const DEFAULT_MAX_WEIGHT: u32 = 6;

/// Configured weight cap (env `HILBSERIES_MAX_WEIGHT` overrides the default).
pub fn max_weight() -> u32 {
    std::env::var("HILBSERIES_MAX_WEIGHT")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_WEIGHT)
}

#[derive(Debug, Error)]
pub enum MacdonaldError {
    #[error("partition weight {weight} exceeds the configured maximum {max}")]
    WeightTooLarge { weight: u32, max: u32 },
    #[error("plethystic exponential requires an alphabet without constant term")]
    ConstantTermPresent,
}

// --- small helpers in Q(q,t) ------------------------------------------------

/// The monomial q^i t^j as a rational function.
pub fn qt_mono(i: u32, j: u32) -> RatQT {
    RatQT::from_poly(MultiPoly::monomial(qt_vars(), vec![i, j], qi(1)))
}

/// Lift a polynomial in q,t into the field.
pub fn poly_rf(p: &MultiPoly) -> RatQT {
    RatQT::from_poly(p.clone())
}

/// 1 − q^i t^j.
fn one_minus_qt(i: u32, j: u32) -> RatQT {
    RatQT::one().sub(&qt_mono(i, j))
}

// --- symmetric functions in the power-sum basis ------------------------------

/// A symmetric function, expanded in the power-sum basis p_λ with coefficients
/// in Q(q,t); homogeneous components of degree > `max_degree` are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct SymFunc {
    terms: BTreeMap<Partition, RatQT>,
    max_degree: u32,
}

impl SymFunc {
    pub fn zero(max_degree: u32) -> Self {
        SymFunc { terms: BTreeMap::new(), max_degree }
    }

    pub fn one(max_degree: u32) -> Self {
        let mut s = Self::zero(max_degree);
        s.terms.insert(Partition::empty(), RatQT::one());
        s
    }

    /// The power sum p_n.
    pub fn p(n: u32, max_degree: u32) -> Self {
        let mut s = Self::zero(max_degree);
        if n <= max_degree {
            s.terms.insert(Partition::new(vec![n]), RatQT::one());
        }
        s
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn coeff(&self, lambda: &Partition) -> RatQT {
        self.terms.get(lambda).cloned().unwrap_or_else(RatQT::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &RatQT)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, lambda: Partition, c: RatQT) {
        if c.is_zero() || lambda.weight() > self.max_degree {
            return;
        }
        let entry = self.terms.entry(lambda);
        match entry {
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
        let mut out = self.clone();
        out.max_degree = self.max_degree.max(rhs.max_degree);
        for (l, c) in &rhs.terms {
            out.insert_add(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&RatQT::one().neg()))
    }

    pub fn scale(&self, c: &RatQT) -> Self {
        if c.is_zero() {
            return Self::zero(self.max_degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.max_degree.max(rhs.max_degree));
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                let mut parts: Vec<u32> = la.parts().to_vec();
                parts.extend_from_slice(lb.parts());
                parts.sort_unstable_by(|a, b| b.cmp(a));
                out.insert_add(Partition::new(parts), ca.mul(cb));
            }
        }
        out
    }

    /// Apply a map to every coefficient (used by the plethystic modification).
    pub fn map_coeff(&self, f: impl Fn(&Partition, &RatQT) -> RatQT) -> Self {
        let mut out = Self::zero(self.max_degree);
        for (l, c) in &self.terms {
            out.insert_add(l.clone(), f(l, c));
        }
        out
    }
}

// --- monomial ↔ power-sum conversion ----------------------------------------

struct PBasisTable {
    /// Partitions of n in the enumeration order (reverse-lex).
    parts: Vec<Partition>,
    /// Row j: the power-sum coefficients of the monomial symmetric function
    /// m_{parts[j]}.
    m_in_p: Vec<Vec<QQ>>,
}

fn p_table(n: u32) -> Arc<PBasisTable> {
    static CACHE: Mutex<Option<HashMap<u32, Arc<PBasisTable>>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some(t) = cache.get(&n) {
        return t.clone();
    }
    let parts = enumerate_partitions(n);
    let k = parts.len();
    let nv = n.max(1) as usize;
    let vars: Arc<[String]> = Arc::from((0..nv).map(|i| format!("x{i}")).collect::<Vec<_>>());
    let psum = |d: u32| {
        let mut acc = MultiPoly::zero(vars.clone());
        for i in 0..nv {
            let mut e = vec![0u32; nv];
            e[i] = d;
            acc = acc.add(&MultiPoly::monomial(vars.clone(), e, qi(1)));
        }
        acc
    };
    // M[i][j] = coefficient of m_{parts[j]} in p_{parts[i]}, read off the
    // expansion in n variables (enough variables to be faithful in degree n).
    let mut m = vec![vec![qi(0); k]; k];
    for (i, lam) in parts.iter().enumerate() {
        let p = lam.parts().iter().fold(MultiPoly::one(vars.clone()), |acc, &d| acc.mul(&psum(d)));
        for (j, mu) in parts.iter().enumerate() {
            let mut exp = vec![0u32; nv];
            for (idx, &part) in mu.parts().iter().enumerate() {
                exp[idx] = part;
            }
            m[i][j] = p.coeff(&exp);
        }
    }
    // m_μ = Σ_i c_i p_{λ_i} solves Mᵀ c = e_μ, so the c's are columns of
    // (Mᵀ)⁻¹.
    let mt: Vec<Vec<QQ>> = (0..k).map(|i| (0..k).map(|j| m[j][i].clone()).collect()).collect();
    let inv = linalg::invert(&mt).expect("power sums form a basis");
    let m_in_p: Vec<Vec<QQ>> =
        (0..k).map(|j| (0..k).map(|i| inv[i][j].clone()).collect()).collect();
    let t = Arc::new(PBasisTable { parts, m_in_p });
    cache.insert(n, t.clone());
    t
}

/// The monomial symmetric function m_μ in the power-sum basis.
pub fn monomial_sym(mu: &Partition) -> SymFunc {
    let n = mu.weight();
    let table = p_table(n);
    let j = table.parts.iter().position(|p| p == mu).expect("partition of its own weight");
    let mut out = SymFunc::zero(n);
    for (i, lam) in table.parts.iter().enumerate() {
        let c = &table.m_in_p[j][i];
        out.insert_add(lam.clone(), RatQT::constant(c.clone()));
    }
    out
}

// --- Hall pairing and the Macdonald basis ------------------------------------

/// ⟨p_λ, p_λ⟩ = z_λ ∏ᵢ (1−q^{λᵢ})/(1−t^{λᵢ}); the basis is orthogonal.
fn hall_norm(lambda: &Partition) -> RatQT {
    let mut acc = RatQT::constant(lambda.z_factor());
    for &part in lambda.parts() {
        acc = acc.mul(&one_minus_qt(part, 0)).mul(&one_minus_qt(0, part).inv().unwrap());
    }
    acc
}

/// The (q,t) Hall pairing in the power-sum basis.
pub fn hall_pairing(f: &SymFunc, g: &SymFunc) -> RatQT {
    let mut acc = RatQT::zero();
    for (l, cf) in f.terms() {
        let cg = g.coeff(l);
        if !cg.is_zero() {
            acc = acc.add(&cf.mul(&cg).mul(&hall_norm(l)));
        }
    }
    acc
}

/// Macdonald P_μ for all |μ| = n, Gram–Schmidt over ascending lex order (a
/// linear extension of dominance starting at (1ⁿ)).
fn macdonald_p_basis(n: u32) -> Arc<Vec<(Partition, SymFunc)>> {
    static CACHE: Mutex<Option<HashMap<u32, Arc<Vec<(Partition, SymFunc)>>>>> = Mutex::new(None);
    {
        let mut guard = CACHE.lock().unwrap();
        if let Some(t) = guard.get_or_insert_with(HashMap::new).get(&n) {
            return t.clone();
        }
    }
    let mut order = enumerate_partitions(n);
    order.reverse();
    let mut basis: Vec<(Partition, SymFunc)> = Vec::with_capacity(order.len());
    for mu in order {
        let mut v = monomial_sym(&mu);
        for (_, p) in &basis {
            let c = hall_pairing(&v, p).mul(&hall_pairing(p, p).inv().expect("nonzero norm"));
            v = v.sub(&p.scale(&c));
        }
        basis.push((mu, v));
    }
    let t = Arc::new(basis);
    let mut guard = CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(n, t.clone());
    t
}

/// Macdonald P_μ (monic on m_μ, orthogonal under the Hall pairing).
pub fn macdonald_p(mu: &Partition) -> SymFunc {
    let basis = macdonald_p_basis(mu.weight());
    basis.iter().find(|(l, _)| l == mu).map(|(_, f)| f.clone()).expect("partition present")
}

/// Integral form J_μ = P_μ · ∏_□ (1 − q^a t^{l+1}).
pub fn integral_j(mu: &Partition) -> SymFunc {
    let mut c = RatQT::one();
    for b in mu.box_stats() {
        c = c.mul(&one_minus_qt(b.a, b.l + 1));
    }
    macdonald_p(mu).scale(&c)
}

/// Modified Macdonald polynomial H̃_μ[X;q,t]: apply t ↦ t⁻¹ to the
/// coefficients of J_μ, the plethysm X ↦ X/(1 − t⁻¹) (i.e. p_n picks up
/// 1/(1 − t⁻ⁿ)), and the normalization t^{n(μ)}.
pub fn modified_macdonald(mu: &Partition) -> Result<SymFunc, MacdonaldError> {
    let weight = mu.weight();
    let max = max_weight();
    if weight > max {
        return Err(MacdonaldError::WeightTooLarge { weight, max });
    }
    static CACHE: Mutex<Option<HashMap<Partition, SymFunc>>> = Mutex::new(None);
    {
        let mut guard = CACHE.lock().unwrap();
        if let Some(h) = guard.get_or_insert_with(HashMap::new).get(mu) {
            return Ok(h.clone());
        }
    }
    let j = integral_j(mu);
    let tnorm = qt_mono(0, mu.n_stat());
    let h = j.map_coeff(|lam, c| {
        let mut out = tnorm.mul(&c.subst_recip(1));
        for &part in lam.parts() {
            // 1/(1 − t⁻ⁿ) = tⁿ/(tⁿ − 1).
            let tn = qt_mono(0, part);
            out = out.mul(&tn.mul(&tn.sub(&RatQT::one()).inv().unwrap()));
        }
        out
    });
    let mut guard = CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(mu.clone(), h.clone());
    Ok(h)
}

// --- alphabets and plethystic evaluation -------------------------------------

/// A formal alphabet: a finite sum of terms γ(q,t)·x^e in the series
/// variables of `shape`, with γ ∈ Q(q,t). The n-th Adams substitution raises
/// every variable (q, t and the series variables alike) to the n-th power.
#[derive(Clone, Debug)]
pub struct Alphabet {
    shape: SeriesShape,
    entries: Vec<(RatQT, Vec<u32>)>,
}

impl Alphabet {
    pub fn new(shape: SeriesShape) -> Self {
        Alphabet { shape, entries: Vec::new() }
    }

    /// An alphabet with no series variables (scalar evaluations like D_μ).
    pub fn scalar() -> Self {
        Alphabet::new(SeriesShape::new(&[], &[]))
    }

    /// The sum of all series variables of the shape.
    pub fn of_vars(shape: SeriesShape) -> Self {
        let mut a = Alphabet::new(shape.clone());
        for i in 0..shape.nvars() {
            let mut e = vec![0u32; shape.nvars()];
            e[i] = 1;
            a.push(RatQT::one(), e);
        }
        a
    }

    pub fn shape(&self) -> &SeriesShape {
        &self.shape
    }

    pub fn push(&mut self, coef: RatQT, exps: Vec<u32>) {
        assert_eq!(exps.len(), self.shape.nvars());
        if !coef.is_zero() {
            self.entries.push((coef, exps));
        }
    }

    /// Add the named variable with coefficient γ.
    pub fn push_var(&mut self, coef: RatQT, name: &str) {
        let mut e = vec![0u32; self.shape.nvars()];
        e[self.shape.var_index(name)] = 1;
        self.push(coef, e);
    }

    pub fn entries(&self) -> impl Iterator<Item = &(RatQT, Vec<u32>)> {
        self.entries.iter()
    }

    /// Whether a term free of series variables is present.
    pub fn has_constant(&self) -> bool {
        self.entries.iter().any(|(_, e)| e.iter().all(|&x| x == 0))
    }

    pub fn scale(&self, c: &RatQT) -> Self {
        let mut out = self.clone();
        out.entries.retain(|_| !c.is_zero());
        for (coef, _) in out.entries.iter_mut() {
            *coef = coef.mul(c);
        }
        out
    }

    /// Concatenate two alphabets over the same shape (formal sum).
    pub fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.entries.extend(rhs.entries.iter().cloned());
        out
    }

    /// p_n of the alphabet, as a truncated series over Q(q,t).
    pub fn power_sum(&self, n: u32) -> TruncatedSeries<RatQT> {
        let mut s = TruncatedSeries::zero(self.shape.clone());
        for (coef, exps) in &self.entries {
            let e: Vec<u32> = exps.iter().map(|&x| x * n).collect();
            s = s.add(&TruncatedSeries::monomial(self.shape.clone(), e, coef.adams(n)));
        }
        s
    }
}

/// Plethystic evaluation F[A]: p_n ↦ A with all variables raised to the n-th
/// power, extended multiplicatively and linearly.
pub fn plethystic_evaluate(f: &SymFunc, a: &Alphabet) -> TruncatedSeries<RatQT> {
    let mut psums: HashMap<u32, TruncatedSeries<RatQT>> = HashMap::new();
    let mut acc = TruncatedSeries::zero(a.shape().clone());
    for (lam, c) in f.terms() {
        let mut term = TruncatedSeries::constant(a.shape().clone(), c.clone());
        for &part in lam.parts() {
            let p = psums.entry(part).or_insert_with(|| a.power_sum(part));
            term = term.mul(p);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Evaluate at an alphabet without series variables, yielding a scalar.
pub fn plethystic_evaluate_scalar(f: &SymFunc, a: &Alphabet) -> RatQT {
    assert_eq!(a.shape().nvars(), 0, "scalar evaluation needs a variable-free alphabet");
    plethystic_evaluate(f, a).constant_term()
}

/// Plethystic exponential pExp[A] = exp(Σ_{n≥1} p_n[A]/n).
pub fn plethystic_exp(a: &Alphabet) -> Result<TruncatedSeries<RatQT>, MacdonaldError> {
    if a.has_constant() {
        return Err(MacdonaldError::ConstantTermPresent);
    }
    let bound = a.shape().degree_bound();
    let mut s = TruncatedSeries::zero(a.shape().clone());
    for n in 1..=bound.max(0) {
        s = s.add(&a.power_sum(n).scale_rat(&crate::ring::qq(1, n as i64)));
    }
    Ok(s.exp().expect("no constant term"))
}

/// The alphabet D_μ(q,t) = −1 + (1−q)(1−t)B_μ as a signed sum of q,t
/// monomials (no series variables).
pub fn d_alphabet(mu: &Partition) -> Alphabet {
    let d = crate::partition::stat_d(mu);
    let mut a = Alphabet::scalar();
    for (e, c) in d.terms() {
        a.push(RatQT::from_poly(MultiPoly::monomial(qt_vars(), e.clone(), c.clone())), vec![]);
    }
    a
}

// --- verifier suite -----------------------------------------------------------

pub(crate) fn render_exp(vars: &[String], exp: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(exp)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("·")
    }
}

/// Check the degree-(n,n) component of the Cauchy identity
/// pExp[−XY/((1−q)(1−t))] = Σ_λ H̃_λ[X]H̃_λ[Y]/N_λ, expanded in n variables
/// per alphabet. The left side is expanded through its power-sum form
/// Σ_{|λ|=n} p_λ[X]p_λ[Y]/z_λ · ∏ᵢ(−1/((1−q^{λᵢ})(1−t^{λᵢ}))).
pub fn verify_cauchy(n: u32) -> CheckReport {
    let params = json!({ "n": n });
    let nv = n.max(1) as usize;
    let xnames: Vec<String> = (1..=nv).map(|i| format!("x{i}")).collect();
    let ynames: Vec<String> = (1..=nv).map(|i| format!("y{i}")).collect();
    let xrefs: Vec<&str> = xnames.iter().map(|s| s.as_str()).collect();
    let yrefs: Vec<&str> = ynames.iter().map(|s| s.as_str()).collect();
    let shape_x = SeriesShape::new(&xrefs, &vec![n; nv]).with_total_cap(n);
    let shape_y = SeriesShape::new(&yrefs, &vec![n; nv]).with_total_cap(n);
    let ax = Alphabet::of_vars(shape_x.clone());
    let ay = Alphabet::of_vars(shape_y.clone());

    type Tensor = BTreeMap<(Vec<u32>, Vec<u32>), RatQT>;
    let accumulate = |map: &mut Tensor,
                          fx: &TruncatedSeries<RatQT>,
                          fy: &TruncatedSeries<RatQT>,
                          c: &RatQT| {
        for (ex, cx) in fx.terms() {
            for (ey, cy) in fy.terms() {
                let key = (ex.clone(), ey.clone());
                let add = cx.mul(cy).mul(c);
                let cur = map.get(&key).cloned().unwrap_or_else(RatQT::zero).add(&add);
                if cur.is_zero() {
                    map.remove(&key);
                } else {
                    map.insert(key, cur);
                }
            }
        }
    };

    let mut lhs: Tensor = BTreeMap::new();
    let mut rhs: Tensor = BTreeMap::new();
    for lam in enumerate_partitions(n) {
        // Right side: H̃_λ[X]·H̃_λ[Y]/N_λ.
        let h = match modified_macdonald(&lam) {
            Ok(h) => h,
            Err(e) => return CheckReport::fail("cauchy", params, e.to_string()),
        };
        let hx = plethystic_evaluate(&h, &ax);
        let hy = plethystic_evaluate(&h, &ay);
        let ninv = poly_rf(&crate::partition::stat_n(&lam)).inv().expect("N_λ ≠ 0");
        accumulate(&mut rhs, &hx, &hy, &ninv);
        // Left side: power-sum expansion of the kernel.
        let mut c = RatQT::constant(qi(1) / lam.z_factor());
        for &part in lam.parts() {
            c = c.mul(
                &one_minus_qt(part, 0).mul(&one_minus_qt(0, part)).inv().unwrap().neg(),
            );
        }
        let px = lam
            .parts()
            .iter()
            .fold(TruncatedSeries::one(shape_x.clone()), |acc, &d| acc.mul(&ax.power_sum(d)));
        let py = lam
            .parts()
            .iter()
            .fold(TruncatedSeries::one(shape_y.clone()), |acc, &d| acc.mul(&ay.power_sum(d)));
        accumulate(&mut lhs, &px, &py, &c);
    }
    let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).cloned().collect();
    for key in keys {
        let l = lhs.get(&key).cloned().unwrap_or_else(RatQT::zero);
        let r = rhs.get(&key).cloned().unwrap_or_else(RatQT::zero);
        if l != r {
            return CheckReport::fail(
                "cauchy",
                params,
                format!(
                    "coefficient of {}·{}: kernel gives {}, Macdonald sum gives {}",
                    render_exp(&xnames, &key.0),
                    render_exp(&ynames, &key.1),
                    l.render(),
                    r.render()
                ),
            );
        }
    }
    CheckReport::pass("cauchy", params)
}

/// Check H̃_μ[X+1] = pExp[X/((1−q)(1−t))]·Σ_λ (−1)^{|λ|}H̃_λ[X]H̃_λ[D_μ]/(T_λN_λ)
/// through total X-degree `cap` (the λ-sum truncated at |λ| ≤ cap).
pub fn verify_garsia_tesler(mu: &Partition, cap: u32) -> CheckReport {
    let params = json!({ "mu": mu, "cap": cap });
    let nv = cap.max(1) as usize;
    let names: Vec<String> = (1..=nv).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let shape = SeriesShape::new(&refs, &vec![cap; nv]).with_total_cap(cap);
    let ax = Alphabet::of_vars(shape.clone());

    let hmu = match modified_macdonald(mu) {
        Ok(h) => h,
        Err(e) => return CheckReport::fail("garsia-tesler", params, e.to_string()),
    };
    // X + 1.
    let mut axp1 = ax.clone();
    axp1.push(RatQT::one(), vec![0; nv]);
    let lhs = plethystic_evaluate(&hmu, &axp1);

    let m_inv = one_minus_qt(1, 0).mul(&one_minus_qt(0, 1)).inv().unwrap();
    let pexp = plethystic_exp(&ax.scale(&m_inv)).expect("no constant term");
    let dmu = d_alphabet(mu);
    let mut sum = TruncatedSeries::zero(shape.clone());
    for lam in partitions_up_to(cap) {
        let h = match modified_macdonald(&lam) {
            Ok(h) => h,
            Err(e) => return CheckReport::fail("garsia-tesler", params, e.to_string()),
        };
        let sign = if lam.weight() % 2 == 0 { RatQT::one() } else { RatQT::one().neg() };
        let scalar = plethystic_evaluate_scalar(&h, &dmu);
        let tn = poly_rf(&crate::partition::stat_t(&lam))
            .mul(&poly_rf(&crate::partition::stat_n(&lam)));
        let coef = sign.mul(&scalar).mul(&tn.inv().expect("T_λN_λ ≠ 0"));
        sum = sum.add(&plethystic_evaluate(&h, &ax).scale(&coef));
    }
    let rhs = pexp.mul(&sum);
    let diff = lhs.sub(&rhs);
    let first = diff.terms().next().map(|(e, c)| (e.clone(), c.clone()));
    match first {
        None => CheckReport::pass("garsia-tesler", params),
        Some((e, c)) => CheckReport::fail(
            "garsia-tesler",
            params,
            format!("coefficient of {} differs by {}", render_exp(&names, &e), c.render()),
        ),
    }
}

/// Check Macdonald–Koornwinder duality,
/// H̃_ν[1+uD_μ]/∏_{□∈ν}(1−uT_□) = H̃_μ[1+uD_ν]/∏_{□∈μ}(1−uT_□), as an identity
/// of rational functions in u (cross-multiplied), together with its u→∞ limit
/// (−1)^{|ν|}H̃_ν[D_μ]/T_ν = (−1)^{|μ|}H̃_μ[D_ν]/T_μ.
pub fn verify_koornwinder(mu: &Partition, nu: &Partition) -> CheckReport {
    let params = json!({ "mu": mu, "nu": nu });
    let order = mu.weight() + nu.weight() + 1;
    let shape = SeriesShape::new(&["u"], &[order]);

    let side = |top: &Partition, bottom: &Partition| -> Result<
        (TruncatedSeries<RatQT>, TruncatedSeries<RatQT>),
        MacdonaldError,
    > {
        // Numerator H̃_top[1 + u·D_bottom]: alphabet 1 + u·(monomials of D).
        let h = modified_macdonald(top)?;
        let mut a = Alphabet::new(shape.clone());
        a.push(RatQT::one(), vec![0]);
        for (c, _) in d_alphabet(bottom).entries() {
            a.push(c.clone(), vec![1]);
        }
        let num = plethystic_evaluate(&h, &a);
        // Denominator ∏_{□∈top}(1 − u q^c t^r).
        let mut den = TruncatedSeries::one(shape.clone());
        for b in top.box_stats() {
            let factor = TruncatedSeries::one(shape.clone())
                .sub(&TruncatedSeries::monomial(shape.clone(), vec![1], qt_mono(b.c, b.r)));
            den = den.mul(&factor);
        }
        Ok((num, den))
    };
    let (lnum, lden) = match side(nu, mu) {
        Ok(v) => v,
        Err(e) => return CheckReport::fail("koornwinder", params, e.to_string()),
    };
    let (rnum, rden) = match side(mu, nu) {
        Ok(v) => v,
        Err(e) => return CheckReport::fail("koornwinder", params, e.to_string()),
    };
    // Cross-multiplied comparison is exact: all four factors are polynomials
    // in u of degree ≤ |μ|+|ν| < order.
    let diff = lnum.mul(&rden).sub(&rnum.mul(&lden));
    if let Some((e, c)) = diff.terms().next() {
        return CheckReport::fail(
            "koornwinder",
            params,
            format!("cross-multiplied u^{} coefficient differs by {}", e[0], c.render()),
        );
    }
    // Limit identity.
    let scalar = |top: &Partition, bottom: &Partition| -> Result<RatQT, MacdonaldError> {
        let h = modified_macdonald(top)?;
        let v = plethystic_evaluate_scalar(&h, &d_alphabet(bottom));
        let sign = if top.weight() % 2 == 0 { RatQT::one() } else { RatQT::one().neg() };
        Ok(sign.mul(&v).mul(&poly_rf(&crate::partition::stat_t(top)).inv().unwrap()))
    };
    match (scalar(nu, mu), scalar(mu, nu)) {
        (Ok(l), Ok(r)) if l == r => CheckReport::pass("koornwinder", params),
        (Ok(l), Ok(r)) => CheckReport::fail(
            "koornwinder",
            params,
            format!("u→∞ limit differs: {} vs {}", l.render(), r.render()),
        ),
        (Err(e), _) | (_, Err(e)) => CheckReport::fail("koornwinder", params, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::qq;

    fn u_shape(order: u32) -> SeriesShape {
        SeriesShape::new(&["u"], &[order])
    }

    /// H̃_μ[1−u] as a polynomial in u.
    fn h_at_one_minus_u(mu: &Partition) -> TruncatedSeries<RatQT> {
        let mut a = Alphabet::new(u_shape(mu.weight() + 1));
        a.push(RatQT::one(), vec![0]);
        a.push(RatQT::one().neg(), vec![1]);
        plethystic_evaluate(&modified_macdonald(mu).unwrap(), &a)
    }

    #[test]
    fn monomial_conversion_roundtrip() {
        // m_(2,1) = p₂p₁ − p₃ ... sanity via known expansions.
        let m21 = monomial_sym(&Partition::new(vec![2, 1]));
        assert_eq!(m21.coeff(&Partition::new(vec![2, 1])), RatQT::one());
        assert_eq!(m21.coeff(&Partition::new(vec![3])), RatQT::one().neg());
        // e₂ = m_(1,1) = (p₁² − p₂)/2.
        let e2 = monomial_sym(&Partition::new(vec![1, 1]));
        assert_eq!(e2.coeff(&Partition::new(vec![1, 1])), RatQT::constant(qq(1, 2)));
        assert_eq!(e2.coeff(&Partition::new(vec![2])), RatQT::constant(qq(-1, 2)));
    }

    #[test]
    fn plethysm_basics() {
        // p₁[w+z] = w+z; p₂[w−z] = w²−z².
        let shape = SeriesShape::new(&["w", "z"], &[2, 2]);
        let mut a = Alphabet::new(shape.clone());
        a.push_var(RatQT::one(), "w");
        a.push_var(RatQT::one(), "z");
        let p1 = plethystic_evaluate(&SymFunc::p(1, 2), &a);
        assert_eq!(
            p1,
            TruncatedSeries::var(shape.clone(), "w").add(&TruncatedSeries::var(shape.clone(), "z"))
        );
        let mut b = Alphabet::new(shape.clone());
        b.push_var(RatQT::one(), "w");
        b.push_var(RatQT::one().neg(), "z");
        let p2 = plethystic_evaluate(&SymFunc::p(2, 2), &b);
        assert_eq!(p2.coeff(&[2, 0]), RatQT::one());
        assert_eq!(p2.coeff(&[0, 2]), RatQT::one().neg());
        assert_eq!(p2.coeff(&[1, 1]), RatQT::zero());
        // e₂[z₁+z₂] = z₁z₂.
        let zshape = SeriesShape::new(&["z1", "z2"], &[2, 2]);
        let e2 = monomial_sym(&Partition::new(vec![1, 1]));
        let az = Alphabet::of_vars(zshape.clone());
        assert_eq!(
            plethystic_evaluate(&e2, &az),
            TruncatedSeries::monomial(zshape, vec![1, 1], RatQT::one())
        );
    }

    #[test]
    fn pexp_basics() {
        // pExp[x] to order 3 is the geometric series.
        let shape = SeriesShape::new(&["x"], &[3]);
        let a = Alphabet::of_vars(shape.clone());
        let g = plethystic_exp(&a).unwrap();
        for k in 0..=3 {
            assert_eq!(g.coeff(&[k]), RatQT::one());
        }
        // pExp[−x] = 1 − x.
        let neg = a.scale(&RatQT::one().neg());
        let h = plethystic_exp(&neg).unwrap();
        assert_eq!(h.coeff(&[0]), RatQT::one());
        assert_eq!(h.coeff(&[1]), RatQT::one().neg());
        assert_eq!(h.coeff(&[2]), RatQT::zero());
        assert_eq!(g.mul(&h), TruncatedSeries::one(shape));
        // pExp[x+y] = 1/((1−x)(1−y)).
        let shape2 = SeriesShape::new(&["x", "y"], &[2, 2]);
        let a2 = Alphabet::of_vars(shape2.clone());
        let g2 = plethystic_exp(&a2).unwrap();
        let gx = TruncatedSeries::one(shape2.clone())
            .sub(&TruncatedSeries::var(shape2.clone(), "x"))
            .invert()
            .unwrap();
        let gy = TruncatedSeries::one(shape2.clone())
            .sub(&TruncatedSeries::var(shape2.clone(), "y"))
            .invert()
            .unwrap();
        assert_eq!(g2, gx.mul(&gy));
        // Constant terms are rejected.
        let mut bad = Alphabet::new(SeriesShape::new(&["x"], &[2]));
        bad.push(RatQT::q(), vec![0]);
        assert!(matches!(plethystic_exp(&bad), Err(MacdonaldError::ConstantTermPresent)));
    }

    #[test]
    fn modified_macdonald_degree_one() {
        let h = modified_macdonald(&Partition::new(vec![1])).unwrap();
        assert_eq!(h, SymFunc::p(1, 1));
    }

    #[test]
    fn macdonald_at_one_minus_u() {
        // H̃_μ[1−u] = ∏_□ (1 − u q^c t^r) for |μ| ≤ 4 (weight 5 in the
        // integration suite).
        for n in 0..=4u32 {
            for mu in enumerate_partitions(n) {
                let got = h_at_one_minus_u(&mu);
                let shape = u_shape(n + 1);
                let mut want = TruncatedSeries::one(shape.clone());
                for b in mu.box_stats() {
                    want = want.mul(&TruncatedSeries::one(shape.clone()).sub(
                        &TruncatedSeries::monomial(shape.clone(), vec![1], qt_mono(b.c, b.r)),
                    ));
                }
                assert_eq!(got, want, "μ = {:?}", mu.parts());
            }
        }
    }

    #[test]
    fn macdonald_at_single_variable() {
        // H̃_μ[w] = w^{|μ|}.
        for n in 1..=4u32 {
            for mu in enumerate_partitions(n) {
                let shape = SeriesShape::new(&["w"], &[n]);
                let a = Alphabet::of_vars(shape.clone());
                let got = plethystic_evaluate(&modified_macdonald(&mu).unwrap(), &a);
                assert_eq!(
                    got,
                    TruncatedSeries::monomial(shape, vec![n], RatQT::one()),
                    "μ = {:?}",
                    mu.parts()
                );
            }
        }
    }

    #[test]
    fn cauchy_small() {
        for n in 1..=3 {
            let r = verify_cauchy(n);
            assert!(r.pass, "n = {n}: {:?}", r.first_discrepancy);
        }
    }

    #[test]
    fn garsia_tesler_small() {
        for mu in [Partition::empty(), Partition::new(vec![1]), Partition::new(vec![2])] {
            let r = verify_garsia_tesler(&mu, 2);
            assert!(r.pass, "μ = {:?}: {:?}", mu.parts(), r.first_discrepancy);
        }
    }

    #[test]
    fn koornwinder_small() {
        let pairs = [
            (vec![1], vec![1]),
            (vec![2], vec![1]),
            (vec![2], vec![1, 1]),
        ];
        for (m, n) in pairs {
            let mu = Partition::new(m);
            let nu = Partition::new(n);
            let r = verify_koornwinder(&mu, &nu);
            assert!(r.pass, "μ = {:?}, ν = {:?}: {:?}", mu.parts(), nu.parts(), r.first_discrepancy);
        }
    }
}
