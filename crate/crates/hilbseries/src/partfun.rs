//! The master partition function Ω and its Chern/Verlinde specializations.
//!
//! Ω is computed as a brute-force sum over partitions, either with exact
//! coefficients in Q(q,t) (for the functional equation and palindromicity
//! checks) or on the slope line t₁ = s, t₂ = c·s with coefficients that are
//! Laurent series in s over Q(c) (for the logarithm expansion H_{d₁,d₂} and
//! everything downstream of it). A two-variable Laurent expansion in (t₁,t₂)
//! is ill-defined, so the slope line is the faithful realization: the s^d
//! coefficient of log Ω is a Laurent polynomial in c of the form
//! Σ_{d₁+d₂=d} c^{d₂} H_{d₁,d₂}, and components are read off as
//! c-coefficients. Numeric slopes are kept as a cross-check.

use std::collections::BTreeMap;

use serde_json::json;
use thiserror::Error;

use crate::macdonald::{
    self, modified_macdonald, plethystic_evaluate, plethystic_exp, poly_rf, qt_mono, render_exp,
    Alphabet, MacdonaldError,
};
use crate::partition::{partitions_up_to, stat_n, stat_t, Partition};
use crate::report::CheckReport;
use crate::ring::{
    bernoulli, qi, qq, Coeff, LaurentSeries, RatC, RatQT, SeriesShape, TruncatedSeries, QQ,
};

/// Errors raised by the slope-line machinery.
#[derive(Debug, Error)]
pub enum PartfunError {
    #[error("slope line degenerates: the tangent-weight form {form} vanishes")]
    DegenerateSlope { form: String },
    #[error("component ({d1},{d2}) needs the s^{needed} coefficient, valid only below s^{have}")]
    InsufficientCap { d1: i64, d2: i64, needed: i64, have: i64 },
    #[error("coefficient of {monomial} is not a Laurent polynomial in the slope parameter")]
    IrregularCoefficient { monomial: String },
    #[error(transparent)]
    Macdonald(#[from] MacdonaldError),
}

// --- exact master partition function ------------------------------------------

/// Shape of one Ω computation: k numerator (z-type) and m denominator (y-type)
/// arguments, truncated at wOrder in w and zOrder in each of them.
#[derive(Clone, Debug)]
pub struct OmegaSpec {
    pub k: usize,
    pub m: usize,
    pub w_order: u32,
    pub z_order: u32,
}

impl OmegaSpec {
    pub fn new(k: usize, w_order: u32, z_order: u32) -> Self {
        OmegaSpec { k, m: 0, w_order, z_order }
    }

    pub fn with_denominator(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    /// Series variables (w, z₁,…,z_k, y₁,…,y_m) with their truncation orders.
    pub fn shape(&self) -> SeriesShape {
        let mut vars = vec!["w".to_string()];
        vars.extend((1..=self.k).map(|i| format!("z{i}")));
        vars.extend((1..=self.m).map(|j| format!("y{j}")));
        let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let mut orders = vec![self.w_order];
        orders.extend(std::iter::repeat(self.z_order).take(self.k + self.m));
        SeriesShape::new(&refs, &orders)
    }
}

/// 1/((1−q)(1−t)) in Q(q,t).
fn qt_measure_inv() -> RatQT {
    let f = RatQT::one().sub(&RatQT::q()).mul(&RatQT::one().sub(&RatQT::t()));
    f.inv().expect("(1−q)(1−t) ≠ 0")
}

/// Ω(w; z₁,…,z_k; y₁,…,y_m; q,t) =
/// Σ_λ w^{|λ|} ∏_□ [∏ᵢ(1−q^c t^r zᵢ) / ∏ⱼ(1−q^c t^r yⱼ)] / N_λ(q,t).
pub fn omega_master(spec: &OmegaSpec) -> TruncatedSeries<RatQT> {
    let shape = spec.shape();
    let nv = shape.nvars();
    let mut acc = TruncatedSeries::zero(shape.clone());
    for lam in partitions_up_to(spec.w_order) {
        let mut wexp = vec![0u32; nv];
        wexp[0] = lam.weight();
        let ninv = poly_rf(&stat_n(&lam)).inv().expect("N_λ ≠ 0");
        let mut term = TruncatedSeries::monomial(shape.clone(), wexp, ninv);
        if term.is_zero() {
            continue;
        }
        for b in lam.box_stats() {
            let e = qt_mono(b.c, b.r);
            for i in 0..spec.k {
                let mut exp = vec![0u32; nv];
                exp[1 + i] = 1;
                let f = TruncatedSeries::one(shape.clone())
                    .sub(&TruncatedSeries::monomial(shape.clone(), exp, e.clone()));
                term = term.mul(&f);
            }
            for j in 0..spec.m {
                let mut exp = vec![0u32; nv];
                exp[1 + spec.k + j] = 1;
                let f = TruncatedSeries::one(shape.clone())
                    .sub(&TruncatedSeries::monomial(shape.clone(), exp, e.clone()));
                term = term.mul(&f.invert().expect("unit constant term"));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// ∏_{|λ| ≤ wOrder} N_λ: every coefficient denominator of Ω divides this.
pub fn omega_denominator_bound(w_order: u32) -> crate::ring::MultiPoly {
    partitions_up_to(w_order)
        .iter()
        .fold(crate::ring::MultiPoly::one(crate::ring::qt_vars()), |acc, lam| {
            acc.mul(&stat_n(lam))
        })
}

/// The μ-truncated right side of the functional equation:
/// pExp[−(w+Σz)/((1−q)(1−t))] · Σ_{|μ|≤cap} (−1)^{|μ|} H̃_μ[w+1] H̃_μ[Σz] T_μ/N_μ.
fn functional_rhs(spec: &OmegaSpec, cap: u32) -> Result<TruncatedSeries<RatQT>, MacdonaldError> {
    assert_eq!(spec.m, 0, "the functional equation is stated for m = 0");
    let shape = spec.shape();
    let nv = shape.nvars();
    let minus_measure = qt_measure_inv().neg();
    let mut a = Alphabet::new(shape.clone());
    let mut wexp = vec![0u32; nv];
    wexp[0] = 1;
    a.push(minus_measure.clone(), wexp.clone());
    for i in 0..spec.k {
        let mut exp = vec![0u32; nv];
        exp[1 + i] = 1;
        a.push(minus_measure.clone(), exp);
    }
    let pexp = plethystic_exp(&a)?;
    let mut sum = TruncatedSeries::zero(shape.clone());
    for mu in partitions_up_to(cap) {
        let h = modified_macdonald(&mu)?;
        let mut aw = Alphabet::new(shape.clone());
        aw.push(RatQT::one(), vec![0u32; nv]);
        aw.push(RatQT::one(), wexp.clone());
        let hw = plethystic_evaluate(&h, &aw);
        let mut az = Alphabet::new(shape.clone());
        for i in 0..spec.k {
            let mut exp = vec![0u32; nv];
            exp[1 + i] = 1;
            az.push(RatQT::one(), exp);
        }
        let hz = plethystic_evaluate(&h, &az);
        let sign = if mu.weight() % 2 == 0 { RatQT::one() } else { RatQT::one().neg() };
        let coef = sign
            .mul(&poly_rf(&stat_t(&mu)))
            .mul(&poly_rf(&stat_n(&mu)).inv().expect("N_μ ≠ 0"));
        sum = sum.add(&hw.mul(&hz).scale(&coef));
    }
    Ok(pexp.mul(&sum))
}

/// Drop monomials whose total z-degree (variables 1..=k) exceeds `z_order`.
fn truncate_total_z(
    s: &TruncatedSeries<RatQT>,
    k: usize,
    z_order: u32,
) -> TruncatedSeries<RatQT> {
    let mut out = TruncatedSeries::zero(s.shape().clone());
    for (e, c) in s.terms() {
        if e[1..=k].iter().sum::<u32>() <= z_order {
            out.insert(e.clone(), c.clone());
        }
    }
    out
}

/// Compare Ω against its Macdonald-sum expansion coefficientwise in Q(q,t),
/// on monomials of w-degree ≤ wOrder and total z-degree ≤ zOrder. On that
/// range the μ-sum truncated at |μ| ≤ zOrder is exact, by homogeneity of
/// H̃_μ[Σz]; stability is cross-checked by incrementing the cap once when the
/// weight budget allows it.
pub fn verify_functional_equation(k: usize, w_order: u32, z_order: u32) -> CheckReport {
    let params = json!({ "k": k, "wOrder": w_order, "zOrder": z_order });
    let spec = OmegaSpec::new(k, w_order, z_order);
    let cap = z_order;
    let lhs = truncate_total_z(&omega_master(&spec), k, z_order);
    let rhs = match functional_rhs(&spec, cap) {
        Ok(r) => truncate_total_z(&r, k, z_order),
        Err(e) => return CheckReport::fail("omega-identity", params, e.to_string()),
    };
    let diff = lhs.sub(&rhs);
    if let Some((e, c)) = diff.terms().next() {
        return CheckReport::fail(
            "omega-identity",
            params,
            format!(
                "coefficient of {} differs by {}",
                render_exp(&spec.shape().vars, e),
                c.render()
            ),
        );
    }
    if cap + 1 <= macdonald::max_weight() {
        if let Ok(r2) = functional_rhs(&spec, cap + 1) {
            if truncate_total_z(&r2, k, z_order) != rhs {
                return CheckReport::fail(
                    "omega-identity",
                    params,
                    "μ-sum not stable under incrementing the cap".to_string(),
                );
            }
        }
    }
    CheckReport::pass("omega-identity", params)
}

/// Check that Ω̃ = pExp[(w+Σz)/((1−q)(1−t))]·Ω has z-coefficients that are
/// polynomials in w of degree ≤ the total z-degree, invariant under
/// (w; z) → (w⁻¹; wz).
pub fn verify_palindromic(k: usize, w_order: u32, z_order: u32) -> CheckReport {
    let params = json!({ "k": k, "wOrder": w_order, "zOrder": z_order });
    let spec = OmegaSpec::new(k, w_order, z_order);
    let shape = spec.shape();
    let nv = shape.nvars();
    let om = omega_master(&spec);
    let measure = qt_measure_inv();
    let mut a = Alphabet::new(shape.clone());
    let mut wexp = vec![0u32; nv];
    wexp[0] = 1;
    a.push(measure.clone(), wexp);
    for i in 0..spec.k {
        let mut exp = vec![0u32; nv];
        exp[1 + i] = 1;
        a.push(measure.clone(), exp);
    }
    let pexp = match plethystic_exp(&a) {
        Ok(p) => p,
        Err(e) => return CheckReport::fail("omega-palindromic", params, e.to_string()),
    };
    let omt = pexp.mul(&om);
    for (e, c) in omt.terms() {
        let j = e[0];
        let d: u32 = e[1..].iter().sum();
        if j > d {
            return CheckReport::fail(
                "omega-palindromic",
                params,
                format!(
                    "coefficient of {} is {}: w-degree exceeds the z-degree {d}",
                    render_exp(&shape.vars, e),
                    c.render()
                ),
            );
        }
        // The involution sends w^j z^α to w^{|α|−j} z^α; compare where the
        // mirrored exponent is inside the truncation box.
        if d <= w_order {
            let mut e2 = e.clone();
            e2[0] = d - j;
            if omt.coeff(&e2) != *c {
                return CheckReport::fail(
                    "omega-palindromic",
                    params,
                    format!(
                        "coefficients of {} and {} differ",
                        render_exp(&shape.vars, e),
                        render_exp(&shape.vars, &e2)
                    ),
                );
            }
        }
    }
    CheckReport::pass("omega-palindromic", params)
}

// --- slope line -----------------------------------------------------------------

/// The slope line (t₁, t₂) = (s, c·s): c symbolic in Q(c) or a fixed rational.
#[derive(Clone, Debug)]
pub enum SlopeLine {
    Symbolic,
    Numeric(QQ),
}

impl SlopeLine {
    /// The pair (t₁/s, t₂/s) as elements of Q(c).
    pub fn tau(&self) -> (RatC, RatC) {
        let t2 = match self {
            SlopeLine::Symbolic => RatC::c(),
            SlopeLine::Numeric(c0) => RatC::constant(c0.clone()),
        };
        (RatC::one(), t2)
    }
}

/// A truncated series in the ambient variables (w, z's, v's, …) whose
/// coefficients are Laurent series in s over Q(c).
pub type SlopeSeries = TruncatedSeries<LaurentSeries<RatC>>;

fn rc(n: i64) -> RatC {
    RatC::constant(qi(n))
}

fn form_check(label: String, f: &RatC) -> Result<(), PartfunError> {
    if f.is_zero() {
        Err(PartfunError::DegenerateSlope { form: label })
    } else {
        Ok(())
    }
}

/// The two tangent-weight forms of a box, (a+1)τ₁ − l·τ₂ and (l+1)τ₂ − a·τ₁,
/// checked to be nonzero on the line.
fn box_forms(b: &crate::partition::BoxStats, tau1: &RatC, tau2: &RatC) -> Result<(RatC, RatC), PartfunError> {
    let f1 = rc(b.a as i64 + 1).mul(tau1).sub(&rc(b.l as i64).mul(tau2));
    let f2 = rc(b.l as i64 + 1).mul(tau2).sub(&rc(b.a as i64).mul(tau1));
    form_check(format!("({}+1)t1 - {}t2", b.a, b.l), &f1)?;
    form_check(format!("({}+1)t2 - {}t1", b.l, b.a), &f2)?;
    Ok((f1, f2))
}

/// (e^{x·s} − e^{y·s}) / ((x−y)·s): a unit series from s⁰ with polynomial
/// coefficients hₖ(x,y)/(k+1)!, where hₖ = Σᵢ xⁱy^(k−i).
fn exp_diff_reduced(x: &RatC, y: &RatC, upper: i64) -> LaurentSeries<RatC> {
    let mut coeffs = Vec::new();
    let mut h = RatC::one();
    let mut ypow = RatC::one();
    let mut fact = qi(1);
    for k in 0..upper.max(1) {
        coeffs.push(h.mul(&RatC::constant(qi(1) / &fact)));
        ypow = ypow.mul(y);
        h = x.mul(&h).add(&ypow);
        fact = fact * qi(k + 2);
    }
    LaurentSeries::from_coeffs(0, coeffs, upper)
}

/// exp of a slope series whose Laurent constant term has positive lowest
/// s-exponent; the exponential of the constant part is summed within `upper`.
pub fn exp_slope(v: &SlopeSeries, upper: i64) -> SlopeSeries {
    let c0 = v.constant_term().with_upper(upper);
    assert!(
        c0.lowest_exponent().map(|l| l >= 1).unwrap_or(true),
        "exp of a slope series needs a positive-order constant term"
    );
    let mut e0 = LaurentSeries::one().with_upper(upper);
    let mut t = LaurentSeries::one().with_upper(upper);
    for n in 1..=upper.max(1) {
        t = t.mul(&c0).scale_rat(&qq(1, n));
        if t.is_zero() {
            break;
        }
        e0 = e0.add(&t);
    }
    let rest = v.sub(&TruncatedSeries::constant(v.shape().clone(), v.constant_term()));
    rest.exp().expect("zero constant term").scale(&e0)
}

/// Ω on the slope line q = e^{τ₁s}, t = e^{τ₂s}: numer/denom are the z- and
/// y-type arguments as slope series. The coefficient of wⁿ·(…) is valid below
/// s^{s_upper − 2n} (tapered windows: a weight-n term only ever multiplies
/// complementary factors with poles of order ≤ 2(wOrder − n)); callers that
/// need a uniform window W pass s_upper = W + 2·wOrder.
pub fn omega_master_slope(
    shape: &SeriesShape,
    numer: &[SlopeSeries],
    denom: &[SlopeSeries],
    tau1: &RatC,
    tau2: &RatC,
    s_upper: i64,
) -> Result<SlopeSeries, PartfunError> {
    let w_idx = shape.var_index("w");
    let w_order = shape.orders[w_idx];
    let mut acc = TruncatedSeries::zero(shape.clone());
    for lam in partitions_up_to(w_order) {
        let n = lam.weight();
        let upper = s_upper;
        // N_λ(e^{τ₁s}, e^{τ₂s}) = (−1)ⁿ·(∏f₁f₂)·s²ⁿ·(unit series); the unit
        // part keeps polynomial coefficients so only one true rational
        // function — the scalar — is ever formed.
        let mut den_red = LaurentSeries::<RatC>::one().with_upper(upper);
        let mut scalar = RatC::one();
        for b in lam.box_stats() {
            let (f1, f2) = box_forms(&b, tau1, tau2)?;
            let (x1, y1) = (rc(b.a as i64 + 1).mul(tau1), rc(b.l as i64).mul(tau2));
            let (x2, y2) = (rc(b.a as i64).mul(tau1), rc(b.l as i64 + 1).mul(tau2));
            den_red = den_red
                .mul(&exp_diff_reduced(&x1, &y1, upper))
                .mul(&exp_diff_reduced(&x2, &y2, upper));
            scalar = scalar.mul(&f1).mul(&f2);
        }
        if n % 2 == 1 {
            scalar = scalar.neg();
        }
        let unit = LaurentSeries::monomial(-2 * (n as i64), RatC::one())
            .mul(&den_red.inv().expect("unit reduced denominator"));
        let mut wexp = vec![0u32; shape.nvars()];
        wexp[w_idx] = n;
        let mut term = TruncatedSeries::monomial(shape.clone(), wexp, unit);
        if term.is_zero() {
            continue;
        }
        for b in lam.box_stats() {
            let ebox = LaurentSeries::exp_linear(
                &rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2)),
                upper,
            );
            for z in numer {
                term = term.mul(&TruncatedSeries::one(shape.clone()).sub(&z.scale(&ebox)));
            }
            for y in denom {
                let f = TruncatedSeries::one(shape.clone()).sub(&y.scale(&ebox));
                term = term.mul(&f.invert().expect("unit constant term"));
            }
        }
        let scale = LaurentSeries::monomial(0, scalar.inv().expect("nonzero forms"));
        acc = acc.add(&term.scale(&scale));
    }
    Ok(acc)
}

/// Ω^C on the slope line: per box, ∏ᵢ(1+vᵢ−(cτ₁+rτ₂)s) / [∏ⱼ(1+xⱼ−…) ·
/// ((a+1)τ₁−lτ₂)((l+1)τ₂−aτ₁)s²], with v's and x's given as slope series.
pub fn omega_chern_slope(
    shape: &SeriesShape,
    numer: &[SlopeSeries],
    denom: &[SlopeSeries],
    tau1: &RatC,
    tau2: &RatC,
    s_upper: i64,
) -> Result<SlopeSeries, PartfunError> {
    let w_idx = shape.var_index("w");
    let w_order = shape.orders[w_idx];
    let mut acc = TruncatedSeries::zero(shape.clone());
    for lam in partitions_up_to(w_order) {
        let n = lam.weight();
        let upper = s_upper;
        let mut den_scalar = RatC::one();
        for b in lam.box_stats() {
            let (f1, f2) = box_forms(&b, tau1, tau2)?;
            den_scalar = den_scalar.mul(&f1).mul(&f2);
        }
        let coef = LaurentSeries::monomial(-2 * n as i64, RatC::one());
        let mut wexp = vec![0u32; shape.nvars()];
        wexp[w_idx] = n;
        let mut term = TruncatedSeries::monomial(shape.clone(), wexp, coef);
        if term.is_zero() {
            continue;
        }
        for b in lam.box_stats() {
            let wt = LaurentSeries::monomial(1, rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2)));
            let base = TruncatedSeries::constant(
                shape.clone(),
                LaurentSeries::one().with_upper(upper).sub(&wt),
            );
            for v in numer {
                term = term.mul(&base.add(v));
            }
            for x in denom {
                term = term.mul(&base.add(x).invert().expect("unit constant term"));
            }
        }
        let scale = LaurentSeries::monomial(0, den_scalar.inv().expect("nonzero form"));
        acc = acc.add(&term.scale(&scale));
    }
    Ok(acc)
}

/// Ω^V on the slope line: per box, e^{Σvᵢ − k(cτ₁+rτ₂)s} /
/// (1−e^{(−(a+1)τ₁+lτ₂)s})(1−e^{(−(l+1)τ₂+aτ₁)s}). Only the net rank and the
/// sum of the weights enter, so they are the arguments.
pub fn omega_verlinde_slope(
    shape: &SeriesShape,
    net_rank: i64,
    v_sum: &SlopeSeries,
    tau1: &RatC,
    tau2: &RatC,
    s_upper: i64,
) -> Result<SlopeSeries, PartfunError> {
    let w_idx = shape.var_index("w");
    let w_order = shape.orders[w_idx];
    let mut acc = TruncatedSeries::zero(shape.clone());
    for lam in partitions_up_to(w_order) {
        let n = lam.weight();
        let upper = s_upper;
        // (1−e^{−f·s}) = f·s·(unit series); keep the unit parts polynomial and
        // fold the scalar ∏f₁f₂ in once at the end.
        let mut den_red = LaurentSeries::<RatC>::one().with_upper(upper);
        let mut scalar = RatC::one();
        let mut kbsum = RatC::zero();
        let zero = RatC::zero();
        for b in lam.box_stats() {
            let (f1, f2) = box_forms(&b, tau1, tau2)?;
            den_red = den_red
                .mul(&exp_diff_reduced(&zero, &f1.neg(), upper))
                .mul(&exp_diff_reduced(&zero, &f2.neg(), upper));
            scalar = scalar.mul(&f1).mul(&f2);
            kbsum = kbsum.add(&rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2)));
        }
        let unit = LaurentSeries::monomial(-2 * (n as i64), RatC::one())
            .mul(&den_red.inv().expect("unit reduced denominator"));
        let mut wexp = vec![0u32; shape.nvars()];
        wexp[w_idx] = n;
        let mut term = TruncatedSeries::monomial(shape.clone(), wexp, unit);
        if term.is_zero() {
            continue;
        }
        // e^{n·Σvᵢ − k·Σ_□(cτ₁+rτ₂)s} across all boxes at once.
        let mut expo = TruncatedSeries::zero(shape.clone());
        for _ in 0..n {
            expo = expo.add(v_sum);
        }
        let shift = LaurentSeries::monomial(1, kbsum.mul(&rc(net_rank)).neg());
        expo = expo.add(&TruncatedSeries::constant(shape.clone(), shift));
        term = term.mul(&exp_slope(&expo, upper));
        let scale = LaurentSeries::monomial(0, scalar.inv().expect("nonzero forms"));
        acc = acc.add(&term.scale(&scale));
    }
    Ok(acc)
}

/// Shape (w, v₁,…,v_k) for the specialized partition functions.
fn v_shape(k: usize, w_order: u32, v_order: u32) -> SeriesShape {
    let mut vars = vec!["w".to_string()];
    vars.extend((1..=k).map(|i| format!("v{i}")));
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut orders = vec![w_order];
    orders.extend(std::iter::repeat(v_order).take(k));
    SeriesShape::new(&refs, &orders)
}

/// Ω^C(w; v₁,…,v_k) with the v's carried as series variables.
pub fn omega_chern(
    k: usize,
    w_order: u32,
    v_order: u32,
    slope: &SlopeLine,
    s_upper: i64,
) -> Result<SlopeSeries, PartfunError> {
    let (tau1, tau2) = slope.tau();
    let shape = v_shape(k, w_order, v_order);
    let vs: Vec<SlopeSeries> =
        (1..=k).map(|i| TruncatedSeries::var(shape.clone(), &format!("v{i}"))).collect();
    omega_chern_slope(&shape, &vs, &[], &tau1, &tau2, s_upper)
}

/// Ω^V(w; v₁,…,v_k) with the v's carried as series variables.
pub fn omega_verlinde(
    k: usize,
    w_order: u32,
    v_order: u32,
    slope: &SlopeLine,
    s_upper: i64,
) -> Result<SlopeSeries, PartfunError> {
    let (tau1, tau2) = slope.tau();
    let shape = v_shape(k, w_order, v_order);
    let mut v_sum = TruncatedSeries::zero(shape.clone());
    for i in 1..=k {
        v_sum = v_sum.add(&TruncatedSeries::var(shape.clone(), &format!("v{i}")));
    }
    omega_verlinde_slope(&shape, k as i64, &v_sum, &tau1, &tau2, s_upper)
}

// --- the logarithm and its components -------------------------------------------

/// One component of the expansion log Ω(…; e^{t₁}, e^{t₂}) =
/// Σ_{d₁,d₂ ≥ −1} H_{d₁,d₂} t₁^{d₁} t₂^{d₂}.
#[derive(Clone, Debug)]
pub struct HComponent {
    pub d1: i64,
    pub d2: i64,
    /// Power series in (w, z₁,…,z_k) over Q.
    pub series: TruncatedSeries<QQ>,
}

impl HComponent {
    /// H_{d₁,d₂,k}(w,z): all z-arguments set equal to one variable z. Complete
    /// only up to the common per-variable z-order.
    pub fn equal_z(&self) -> TruncatedSeries<QQ> {
        let shape = self.series.shape();
        let w_idx = shape.var_index("w");
        let z_order =
            shape.orders.iter().enumerate().filter(|&(i, _)| i != w_idx).map(|(_, &o)| o).min();
        let target = SeriesShape::new(&["w", "z"], &[shape.orders[w_idx], z_order.unwrap_or(0)]);
        let var_map: Vec<usize> =
            (0..shape.nvars()).map(|i| if i == w_idx { 0 } else { 1 }).collect();
        self.series.embed(target, &var_map)
    }
}

/// log Ω on the symbolic slope line, with enough s-window to read every
/// coefficient below s^{s_order + 1}.
pub fn log_omega_symbolic(
    shape: &SeriesShape,
    numer: &[SlopeSeries],
    denom: &[SlopeSeries],
    s_order: i64,
) -> Result<SlopeSeries, PartfunError> {
    let w_order = shape.orders[shape.var_index("w")] as i64;
    let upper = s_order + 1 + 2 * w_order;
    let om = omega_master_slope(shape, numer, denom, &RatC::one(), &RatC::c(), upper)?;
    Ok(om.log().expect("unit constant term"))
}

/// Read H_{d₁,d₂} off a symbolic-slope logarithm: the s^{d₁+d₂} coefficient
/// of each monomial is a Laurent polynomial Σ c^{d₂'} H_{d₁',d₂'} with
/// d₁'+d₂' = d₁+d₂ and both indices ≥ −1.
pub fn read_h(
    log_omega: &SlopeSeries,
    d1: i64,
    d2: i64,
) -> Result<TruncatedSeries<QQ>, PartfunError> {
    assert!(d1 >= -1 && d2 >= -1, "components exist only for d1, d2 ≥ −1");
    let d = d1 + d2;
    let shape = log_omega.shape().clone();
    let mut out = TruncatedSeries::zero(shape.clone());
    for (e, l) in log_omega.terms() {
        if l.upper() <= d {
            return Err(PartfunError::InsufficientCap { d1, d2, needed: d + 1, have: l.upper() });
        }
        let cd = l.coeff(d);
        let map = cd.as_laurent_in_c().ok_or_else(|| PartfunError::IrregularCoefficient {
            monomial: render_exp(&shape.vars, e),
        })?;
        for &ec in map.keys() {
            if ec < -1 || d - ec < -1 {
                return Err(PartfunError::IrregularCoefficient {
                    monomial: render_exp(&shape.vars, e),
                });
            }
        }
        if let Some(v) = map.get(&d2) {
            out.insert(e.clone(), v.clone());
        }
    }
    Ok(out)
}

/// H_{d₁,d₂}(w; z₁,…,z_k) from log Ω on the symbolic slope line.
pub fn extract_h(
    d1: i64,
    d2: i64,
    k: usize,
    w_order: u32,
    z_order: u32,
) -> Result<HComponent, PartfunError> {
    let spec = OmegaSpec::new(k, w_order, z_order);
    let shape = spec.shape();
    let zs: Vec<SlopeSeries> =
        (1..=k).map(|i| TruncatedSeries::var(shape.clone(), &format!("z{i}"))).collect();
    let log = log_omega_symbolic(&shape, &zs, &[], d1 + d2)?;
    Ok(HComponent { d1, d2, series: read_h(&log, d1, d2)? })
}

/// m^e in Q for integer e of either sign.
fn mpow(m: i64, e: i64) -> QQ {
    let mut acc = qi(1);
    for _ in 0..e.unsigned_abs() {
        acc = acc * qi(m);
    }
    if e < 0 {
        qi(1) / acc
    } else {
        acc
    }
}

fn factorial(n: i64) -> QQ {
    let mut acc = qi(1);
    for i in 2..=n {
        acc = acc * qi(i);
    }
    acc
}

/// Check that H̃_{d₁,d₂} = H_{d₁,d₂} + B_{d₁+1}B_{d₂+1}/((d₁+1)!(d₂+1)!) ·
/// (Li_{1−d₁−d₂}(w) + Σᵢ Li_{1−d₁−d₂}(zᵢ)) is palindromic in w for each fixed
/// z-monomial.
pub fn verify_symmetry_theorem(
    d1: i64,
    d2: i64,
    k: usize,
    w_order: u32,
    z_order: u32,
) -> CheckReport {
    let params = json!({ "d1": d1, "d2": d2, "k": k, "wOrder": w_order, "zOrder": z_order });
    let h = match extract_h(d1, d2, k, w_order, z_order) {
        Ok(h) => h,
        Err(e) => return CheckReport::fail("symmetry-theorem", params, e.to_string()),
    };
    let corr = bernoulli((d1 + 1) as usize) * bernoulli((d2 + 1) as usize)
        / (factorial(d1 + 1) * factorial(d2 + 1));
    // Coefficients of H̃ indexed by (w-exponent, z-exponents).
    let mut coeffs: BTreeMap<(u32, Vec<u32>), QQ> = BTreeMap::new();
    for (e, c) in h.series.terms() {
        coeffs.insert((e[0], e[1..].to_vec()), c.clone());
    }
    let mut bump = |key: (u32, Vec<u32>), v: QQ| {
        let entry = coeffs.entry(key).or_insert_with(|| qi(0));
        *entry = entry.clone() + v;
    };
    // Li_{1−d₁−d₂}(x) has x^m coefficient m^{d₁+d₂−1}.
    for m in 1..=w_order {
        bump((m, vec![0; k]), corr.clone() * mpow(m as i64, d1 + d2 - 1));
    }
    for i in 0..k {
        for m in 1..=z_order {
            let mut z = vec![0u32; k];
            z[i] = m;
            bump((0, z), corr.clone() * mpow(m as i64, d1 + d2 - 1));
        }
    }
    let shape = h.series.shape().clone();
    let value = |j: i64, z: &[u32]| -> QQ {
        if j < 0 {
            return qi(0);
        }
        coeffs.get(&(j as u32, z.to_vec())).cloned().unwrap_or_else(|| qi(0))
    };
    for ((j, z), c) in &coeffs {
        let d: u32 = z.iter().sum();
        let mirror = d as i64 - *j as i64;
        if mirror > w_order as i64 {
            continue; // mirrored exponent outside the truncation box
        }
        if value(mirror, z) != *c {
            let mut e = vec![*j];
            e.extend_from_slice(z);
            return CheckReport::fail(
                "symmetry-theorem",
                params,
                format!(
                    "coefficient of {} breaks palindromicity (z-degree {d})",
                    render_exp(&shape.vars, &e)
                ),
            );
        }
    }
    CheckReport::pass("symmetry-theorem", params)
}

/// Regularity: (1−e^{t₁})(1−e^{t₂})·log Ω on the slope line has no s-pole.
pub fn verify_regularity(k: usize, w_order: u32, z_order: u32, slope: &SlopeLine) -> CheckReport {
    let params = json!({ "k": k, "wOrder": w_order, "zOrder": z_order, "slope": format!("{slope:?}") });
    let spec = OmegaSpec::new(k, w_order, z_order);
    let shape = spec.shape();
    let zs: Vec<SlopeSeries> =
        (1..=k).map(|i| TruncatedSeries::var(shape.clone(), &format!("z{i}"))).collect();
    let (tau1, tau2) = slope.tau();
    let upper = 2 + 2 * w_order as i64;
    let om = match omega_master_slope(&shape, &zs, &[], &tau1, &tau2, upper) {
        Ok(o) => o,
        Err(e) => return CheckReport::fail("regularity", params, e.to_string()),
    };
    let lg = om.log().expect("unit constant term");
    let g = LaurentSeries::one_minus_exp(&tau1, upper).mul(&LaurentSeries::one_minus_exp(&tau2, upper));
    for (e, c) in lg.terms() {
        let p = c.mul(&g);
        if p.lowest_exponent().map(|l| l < 0).unwrap_or(false) {
            return CheckReport::fail(
                "regularity",
                params,
                format!(
                    "(1−e^{{t1}})(1−e^{{t2}})·log Ω has an s-pole at {}",
                    render_exp(&shape.vars, e)
                ),
            );
        }
    }
    CheckReport::pass("regularity", params)
}

/// Cross-check the symbolic component separation against numeric slopes: the
/// s^d coefficient at slope c₀ must equal Σ_{d₁+d₂=d} c₀^{d₂} H_{d₁,d₂}.
pub fn verify_slope_independence(
    k: usize,
    w_order: u32,
    z_order: u32,
    d_max: i64,
    slopes: &[QQ],
) -> CheckReport {
    let params = json!({ "k": k, "wOrder": w_order, "zOrder": z_order, "dMax": d_max });
    let spec = OmegaSpec::new(k, w_order, z_order);
    let shape = spec.shape();
    let zs: Vec<SlopeSeries> =
        (1..=k).map(|i| TruncatedSeries::var(shape.clone(), &format!("z{i}"))).collect();
    let log_sym = match log_omega_symbolic(&shape, &zs, &[], d_max) {
        Ok(l) => l,
        Err(e) => return CheckReport::fail("slope-independence", params, e.to_string()),
    };
    let mut components: BTreeMap<(i64, i64), TruncatedSeries<QQ>> = BTreeMap::new();
    for d1 in -1..=(d_max + 1) {
        for d2 in -1..=(d_max + 1) {
            if d1 + d2 > d_max {
                continue;
            }
            match read_h(&log_sym, d1, d2) {
                Ok(s) => {
                    components.insert((d1, d2), s);
                }
                Err(e) => return CheckReport::fail("slope-independence", params, e.to_string()),
            }
        }
    }
    let upper = d_max + 1 + 2 * w_order as i64;
    for c0 in slopes {
        let (tau1, tau2) = SlopeLine::Numeric(c0.clone()).tau();
        let om = match omega_master_slope(&shape, &zs, &[], &tau1, &tau2, upper) {
            Ok(o) => o,
            Err(e) => return CheckReport::fail("slope-independence", params, e.to_string()),
        };
        let lg = om.log().expect("unit constant term");
        for (e, l) in lg.terms() {
            for d in -2..=d_max {
                if l.upper() <= d {
                    return CheckReport::fail(
                        "slope-independence",
                        params,
                        format!("numeric window too small at slope {c0}"),
                    );
                }
                let got = match l.coeff(d).as_constant() {
                    Some(v) => v,
                    None => {
                        return CheckReport::fail(
                            "slope-independence",
                            params,
                            format!("non-constant coefficient at numeric slope {c0}"),
                        )
                    }
                };
                let mut want = qi(0);
                for ((d1, d2), s) in &components {
                    if d1 + d2 != d {
                        continue;
                    }
                    let h = s.coeff(e);
                    if !num_traits::Zero::is_zero(&h) {
                        // c₀^{d₂} for d₂ of either sign.
                        let p = if *d2 >= 0 {
                            let mut acc = qi(1);
                            for _ in 0..*d2 {
                                acc = acc * c0;
                            }
                            acc
                        } else {
                            let mut acc = qi(1);
                            for _ in 0..(-d2) {
                                acc = acc * c0;
                            }
                            qi(1) / acc
                        };
                        want = want + p * h;
                    }
                }
                if got != want {
                    return CheckReport::fail(
                        "slope-independence",
                        params,
                        format!(
                            "s^{d} coefficient of {} at slope {c0}: numeric {got}, symbolic {want}",
                            render_exp(&shape.vars, e)
                        ),
                    );
                }
            }
        }
    }
    CheckReport::pass("slope-independence", params)
}

// --- term-by-term ε-limits Ω → Ω^C, Ω^V -------------------------------------------

/// Laurent series in ε whose coefficients are Laurent series in s over Q(c).
type EpsSeries = LaurentSeries<LaurentSeries<RatC>>;

fn eps_const(c: LaurentSeries<RatC>) -> EpsSeries {
    EpsSeries::from_coeff(c)
}

/// The λ-term (without w^{|λ|}) of Ω(−wε^{2−k}(1+ε)^k; e^{−εv}/(1+ε); e^{εt₁},e^{εt₂}).
fn chern_master_term_eps(
    lam: &Partition,
    nus: &[RatC],
    tau1: &RatC,
    tau2: &RatC,
    eps_up: i64,
) -> Result<EpsSeries, PartfunError> {
    let n = lam.weight() as i64;
    let k = nus.len() as i64;
    let sign = if n % 2 == 0 { LaurentSeries::one() } else { LaurentSeries::one().neg() };
    let one_plus_eps =
        EpsSeries::from_coeffs(0, vec![LaurentSeries::one(), LaurentSeries::one()], crate::ring::EXACT);
    let mut term = EpsSeries::monomial((2 - k) * n, sign).mul(&one_plus_eps.pow((k * n) as u32));
    let inv_one_plus = one_plus_eps.with_upper(eps_up).inv().expect("unit constant term");
    for b in lam.box_stats() {
        let wt = rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2));
        for nu in nus {
            let e = EpsSeries::exp_linear(&LaurentSeries::monomial(1, wt.sub(nu)), eps_up);
            term = term.mul(&EpsSeries::one().sub(&e.mul(&inv_one_plus)));
        }
        box_forms(&b, tau1, tau2)?;
        let g1 = EpsSeries::exp_linear(&LaurentSeries::monomial(1, rc(b.a as i64 + 1).mul(tau1)), eps_up)
            .sub(&EpsSeries::exp_linear(&LaurentSeries::monomial(1, rc(b.l as i64).mul(tau2)), eps_up));
        let g2 = EpsSeries::exp_linear(&LaurentSeries::monomial(1, rc(b.a as i64).mul(tau1)), eps_up)
            .sub(&EpsSeries::exp_linear(&LaurentSeries::monomial(1, rc(b.l as i64 + 1).mul(tau2)), eps_up));
        term = term
            .mul(&g1.inv().expect("nondegenerate"))
            .mul(&g2.inv().expect("nondegenerate"));
    }
    Ok(term)
}

/// The λ-term (without w^{|λ|}) of Ω^C at the same weights.
fn chern_limit_term(
    lam: &Partition,
    nus: &[RatC],
    tau1: &RatC,
    tau2: &RatC,
) -> Result<LaurentSeries<RatC>, PartfunError> {
    let mut t = LaurentSeries::one();
    for b in lam.box_stats() {
        let wt = rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2));
        for nu in nus {
            t = t.mul(&LaurentSeries::one().add(&LaurentSeries::monomial(1, nu.sub(&wt))));
        }
        let (f1, f2) = box_forms(&b, tau1, tau2)?;
        t = t.mul(&LaurentSeries::monomial(-2, f1.mul(&f2).inv().expect("nonzero form")));
    }
    Ok(t)
}

/// The λ-term (without w^{|λ|}) of
/// Ω((−1)^k w ε^{k+1}; ε⁻¹e^{v₁},…,ε⁻¹e^{v_k}, ε⁻¹; e^{−t₁}, e^{−t₂}).
fn verlinde_master_term_eps(
    lam: &Partition,
    nus: &[RatC],
    tau1: &RatC,
    tau2: &RatC,
    s_up: i64,
) -> Result<EpsSeries, PartfunError> {
    let n = lam.weight() as i64;
    let k = nus.len() as i64;
    let sign = if (k * n) % 2 == 0 { LaurentSeries::one() } else { LaurentSeries::one().neg() };
    let mut term = EpsSeries::monomial((k + 1) * n, sign);
    for b in lam.box_stats() {
        let wt = rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2));
        for nu in nus {
            let x = LaurentSeries::exp_linear(&nu.sub(&wt), s_up);
            term = term.mul(&EpsSeries::one().sub(&EpsSeries::monomial(-1, x)));
        }
        let x0 = LaurentSeries::exp_linear(&wt.neg(), s_up);
        term = term.mul(&EpsSeries::one().sub(&EpsSeries::monomial(-1, x0)));
        box_forms(&b, tau1, tau2)?;
        let g1 = LaurentSeries::exp_linear(&rc(b.a as i64 + 1).mul(tau1).neg(), s_up)
            .sub(&LaurentSeries::exp_linear(&rc(b.l as i64).mul(tau2).neg(), s_up));
        let g2 = LaurentSeries::exp_linear(&rc(b.a as i64).mul(tau1).neg(), s_up)
            .sub(&LaurentSeries::exp_linear(&rc(b.l as i64 + 1).mul(tau2).neg(), s_up));
        term = term
            .mul(&eps_const(g1).inv().expect("nondegenerate"))
            .mul(&eps_const(g2).inv().expect("nondegenerate"));
    }
    Ok(term)
}

/// The λ-term (without w^{|λ|}) of Ω^V at the same weights.
fn verlinde_limit_term(
    lam: &Partition,
    nus: &[RatC],
    tau1: &RatC,
    tau2: &RatC,
    s_up: i64,
) -> Result<LaurentSeries<RatC>, PartfunError> {
    let k = rc(nus.len() as i64);
    let mut vsum = RatC::zero();
    for nu in nus {
        vsum = vsum.add(nu);
    }
    let mut t = LaurentSeries::one().with_upper(s_up);
    for b in lam.box_stats() {
        let wt = rc(b.c as i64).mul(tau1).add(&rc(b.r as i64).mul(tau2));
        t = t.mul(&LaurentSeries::exp_linear(&vsum.sub(&k.mul(&wt)), s_up));
        let (f1, f2) = box_forms(&b, tau1, tau2)?;
        t = t
            .mul(&LaurentSeries::one_minus_exp(&f1.neg(), s_up).inv().expect("nondegenerate"))
            .mul(&LaurentSeries::one_minus_exp(&f2.neg(), s_up).inv().expect("nondegenerate"));
    }
    Ok(t)
}

/// Check the term-by-term ε-limits Ω → Ω^C and Ω → Ω^V per partition of
/// weight ≤ cap, with symbolic ε and generic rational v-weights.
pub fn verify_specialization_limits(k: usize, cap: u32, slope: &SlopeLine) -> CheckReport {
    let params = json!({ "k": k, "cap": cap, "slope": format!("{slope:?}") });
    let (tau1, tau2) = slope.tau();
    let nus: Vec<RatC> = (0..k).map(|j| rc(2 * j as i64 + 3)).collect();
    let s_up = 6 + 4 * cap as i64;
    let eps_up = 4 * cap as i64 + 4;
    for lam in partitions_up_to(cap) {
        let run = |label: &str,
                   master: Result<EpsSeries, PartfunError>,
                   limit: Result<LaurentSeries<RatC>, PartfunError>|
         -> Option<String> {
            let m = match master {
                Ok(m) => m,
                Err(e) => return Some(format!("{label}: {e}")),
            };
            let l = match limit {
                Ok(l) => l,
                Err(e) => return Some(format!("{label}: {e}")),
            };
            if m.lowest_exponent().map(|e| e < 0).unwrap_or(false) {
                return Some(format!(
                    "{label}: λ = {:?} term has a pole in ε (order {})",
                    lam.parts(),
                    m.lowest_exponent().unwrap()
                ));
            }
            if m.coeff(0) != l {
                return Some(format!(
                    "{label}: ε → 0 limit differs from the specialized term at λ = {:?}",
                    lam.parts()
                ));
            }
            None
        };
        if let Some(msg) = run(
            "chern",
            chern_master_term_eps(&lam, &nus, &tau1, &tau2, eps_up),
            chern_limit_term(&lam, &nus, &tau1, &tau2),
        ) {
            return CheckReport::fail("specialization-limits", params, msg);
        }
        if let Some(msg) = run(
            "verlinde",
            verlinde_master_term_eps(&lam, &nus, &tau1, &tau2, s_up),
            verlinde_limit_term(&lam, &nus, &tau1, &tau2, s_up),
        ) {
            return CheckReport::fail("specialization-limits", params, msg);
        }
    }
    CheckReport::pass("specialization-limits", params)
}

/// Structural fact: the Verlinde limit depends on the v's only through their
/// sum. Verified on the master ε-limit side, where the individual v's enter.
pub fn verify_verlinde_sum_dependence(cap: u32, slope: &SlopeLine) -> CheckReport {
    let params = json!({ "cap": cap, "slope": format!("{slope:?}") });
    let (tau1, tau2) = slope.tau();
    let a = [rc(1), rc(3)];
    let b = [rc(2), rc(2)];
    let s_up = 6 + 4 * cap as i64;
    for lam in partitions_up_to(cap) {
        let ta = match verlinde_master_term_eps(&lam, &a, &tau1, &tau2, s_up) {
            Ok(t) => t,
            Err(e) => return CheckReport::fail("verlinde-sum-dependence", params, e.to_string()),
        };
        let tb = match verlinde_master_term_eps(&lam, &b, &tau1, &tau2, s_up) {
            Ok(t) => t,
            Err(e) => return CheckReport::fail("verlinde-sum-dependence", params, e.to_string()),
        };
        if ta.coeff(0) != tb.coeff(0) {
            return CheckReport::fail(
                "verlinde-sum-dependence",
                params,
                format!("limits differ for equal Σv at λ = {:?}", lam.parts()),
            );
        }
    }
    CheckReport::pass("verlinde-sum-dependence", params)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1/((q−1)(1−t)) as a rational function.
    fn single_box_weight() -> RatQT {
        RatQT::q().sub(&RatQT::one()).mul(&RatQT::one().sub(&RatQT::t())).inv().unwrap()
    }

    #[test]
    fn omega_master_low_terms() {
        // k = 1: w⁰ → 1, w¹-row → (1−z)/((q−1)(1−t)).
        let om = omega_master(&OmegaSpec::new(1, 2, 2));
        assert_eq!(om.coeff(&[0, 0]), RatQT::one());
        assert_eq!(om.coeff(&[1, 0]), single_box_weight());
        assert_eq!(om.coeff(&[1, 1]), single_box_weight().neg());
        // k = 0: w¹ → 1/((q−1)(1−t)).
        let om0 = omega_master(&OmegaSpec::new(0, 1, 0));
        assert_eq!(om0.coeff(&[1]), single_box_weight());
        // One y-argument mirrors one z-argument in the denominator:
        // w¹-row → 1/((q−1)(1−t)) · (1 + y + y² + …).
        let omy = omega_master(&OmegaSpec::new(0, 1, 2).with_denominator(1));
        assert_eq!(omy.coeff(&[1, 1]), single_box_weight());
        assert_eq!(omy.coeff(&[1, 2]), single_box_weight());
    }

    #[test]
    fn omega_master_denominators_divide() {
        let w_order = 3;
        let om = omega_master(&OmegaSpec::new(1, w_order, 1));
        let bound = omega_denominator_bound(w_order);
        for (e, c) in om.terms() {
            assert!(
                bound.div_exact(c.denom()).is_some(),
                "denominator at {e:?} does not divide ∏ N_λ"
            );
        }
    }

    #[test]
    fn functional_equation_small() {
        for (k, wo, zo) in [(1usize, 2u32, 2u32), (2, 2, 2), (0, 3, 0)] {
            let r = verify_functional_equation(k, wo, zo);
            assert!(r.pass, "k={k}: {:?}", r.first_discrepancy);
        }
    }

    #[test]
    fn palindromic_small() {
        let r = verify_palindromic(1, 2, 2);
        assert!(r.pass, "{:?}", r.first_discrepancy);
        // k = 0: the z-free part of Ω̃ is the constant 1.
        let r0 = verify_palindromic(0, 2, 0);
        assert!(r0.pass, "{:?}", r0.first_discrepancy);
        // Explicit z¹ row: degree ≤ 1 in w with the w⁰ and w¹ entries swapped
        // under the involution, i.e. equal.
        let spec = OmegaSpec::new(1, 2, 2);
        let om = omega_master(&spec);
        let measure = qt_measure_inv();
        let mut a = Alphabet::new(spec.shape());
        a.push(measure.clone(), vec![1, 0]);
        a.push(measure, vec![0, 1]);
        let omt = plethystic_exp(&a).unwrap().mul(&om);
        assert_eq!(omt.coeff(&[2, 1]), RatQT::zero());
        assert_eq!(omt.coeff(&[0, 1]), omt.coeff(&[1, 1]));
    }

    #[test]
    fn chern_and_verlinde_leading_terms() {
        // Ω^C w¹ term, k = 0: 1/(t₁t₂) on the line = 1/(c·s²).
        let c_inv = RatC::c().inv().unwrap();
        let chern = omega_chern(0, 1, 0, &SlopeLine::Symbolic, 3).unwrap();
        assert_eq!(chern.coeff(&[1]).coeff(-2), c_inv);
        // k = 1 with v carried: the v⁰ part agrees.
        let chern1 = omega_chern(1, 1, 1, &SlopeLine::Symbolic, 3).unwrap();
        assert_eq!(chern1.coeff(&[1, 0]).coeff(-2), c_inv);
        // Ω^V w¹ term, k = 0: 1/((1−e^{−s})(1−e^{−cs})).
        let verl = omega_verlinde(0, 1, 0, &SlopeLine::Symbolic, 4).unwrap();
        let want = LaurentSeries::one_minus_exp(&RatC::one().neg(), 8)
            .mul(&LaurentSeries::one_minus_exp(&RatC::c().neg(), 8))
            .inv()
            .unwrap();
        assert_eq!(verl.coeff(&[1]), want);
        // k = 1 at v = 0 equals the k = 0 answer.
        let verl1 = omega_verlinde(1, 1, 1, &SlopeLine::Symbolic, 4).unwrap();
        assert_eq!(verl1.coeff(&[1, 0]), want);
    }

    #[test]
    fn specialization_limits_small() {
        for k in 0..=2usize {
            let r = verify_specialization_limits(k, 2, &SlopeLine::Symbolic);
            assert!(r.pass, "k={k}: {:?}", r.first_discrepancy);
        }
        // Numeric slope (negative slopes never degenerate a weight form).
        let r = verify_specialization_limits(1, 2, &SlopeLine::Numeric(qq(-3, 2)));
        assert!(r.pass, "{:?}", r.first_discrepancy);
    }

    #[test]
    fn verlinde_depends_only_on_weight_sum() {
        let r = verify_verlinde_sum_dependence(3, &SlopeLine::Symbolic);
        assert!(r.pass, "{:?}", r.first_discrepancy);
    }

    #[test]
    fn extract_h_polylog_rows() {
        // H_{−1,−1}(w,0) = −Li₃(w) and H_{−1,−1}(0,z) = 0.
        let h = extract_h(-1, -1, 1, 3, 2).unwrap();
        for m in 1..=3i64 {
            assert_eq!(h.series.coeff(&[m as u32, 0]), qq(-1, m * m * m));
        }
        for m in 1..=2u32 {
            assert_eq!(h.series.coeff(&[0, m]), qi(0));
        }
        // H_{−1,0}(w,0) = ½Li₂(w).
        let h10 = extract_h(-1, 0, 1, 3, 1).unwrap();
        for m in 1..=3i64 {
            assert_eq!(h10.series.coeff(&[m as u32, 0]), qq(1, 2 * m * m));
        }
        // equal_z collapses the z-arguments onto one variable.
        let hz = h.equal_z();
        assert_eq!(hz.coeff(&[1, 0]), qi(-1));
    }

    #[test]
    fn symmetry_theorem_small() {
        for (d1, d2, k, wo, zo) in
            [(-1i64, -1i64, 1usize, 3u32, 3u32), (0, 0, 2, 2, 2), (-1, 1, 3, 2, 2)]
        {
            let r = verify_symmetry_theorem(d1, d2, k, wo, zo);
            assert!(r.pass, "(d1,d2,k)=({d1},{d2},{k}): {:?}", r.first_discrepancy);
        }
    }

    #[test]
    fn regularity_small() {
        for slope in [
            SlopeLine::Symbolic,
            SlopeLine::Numeric(qi(-2)),
            SlopeLine::Numeric(qq(-1, 2)),
            SlopeLine::Numeric(qq(7, 3)),
        ] {
            let r = verify_regularity(1, 3, 2, &slope);
            assert!(r.pass, "{slope:?}: {:?}", r.first_discrepancy);
        }
    }

    #[test]
    fn slope_independence_small() {
        let r = verify_slope_independence(1, 2, 2, 1, &[qi(-2), qi(-3), qi(-5)]);
        assert!(r.pass, "{:?}", r.first_discrepancy);
    }

    #[test]
    fn degenerate_slope_detected() {
        // Slope 0 kills the form (l+1)t₂ − a·t₁ at the single box.
        let err = omega_chern(0, 1, 0, &SlopeLine::Numeric(qi(0)), 2);
        assert!(matches!(err, Err(PartfunError::DegenerateSlope { .. })));
        // Slope 1 kills (a+1)t₁ − l·t₂ at a = 0, l = 1 (partition (1,1)).
        let err2 = omega_chern(0, 2, 0, &SlopeLine::Numeric(qi(1)), 2);
        assert!(matches!(err2, Err(PartfunError::DegenerateSlope { .. })));
    }
}
