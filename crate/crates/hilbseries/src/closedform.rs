//! Lagrange-inversion machinery, branch power sums, the B₃ product formula,
//! the α/β/γ binomial sums, and the product-formula evaluator for B₄.
//!
//! Conventions. Throughout, r ≥ 0 is the rank parameter and the B-family is
//! read off in the variable y through t = −y(1−y)^{r²−1} (the A-family through
//! x = −y(1−ry)^{r−1}). The branches αᵢ(y), i = 1..r−1, invert
//! f(x) = ((x^{1/2}−x^{−1/2})/(x^{r/2}−x^{−r/2}))² = x^{r−1}+…; their
//! symmetric functions are rational, so every product over branches is
//! computed inside Q[[y]] via power sums and root-of-unity filtering on
//! exponents — no cyclotomic numbers are ever materialized. B₃ = B₄ = 1 for
//! r ∈ {0, 1}, where the branch products are empty.

use serde_json::json;
use thiserror::Error;

use crate::report::CheckReport;
use crate::ring::{qi, qq, RingError, SeriesShape, TruncatedSeries, QQ};
use crate::universal::{
    bin, central_bracket, extract_universal, interpolate, ipow, poly_eval, Flavor, UniversalError,
};

/// Errors raised by the closed-form machinery.
#[derive(Debug, Error)]
pub enum ClosedformError {
    #[error("square root needs constant term 1, found {constant}")]
    SquareRootObstruction { constant: String },
    #[error("eighth root needs constant term 1, found {constant}")]
    RootObstruction { constant: String },
    #[error("Laurent input must be y^{{-m}}·(1 + …): unit constant term is {constant}")]
    LeadingTermNotOne { constant: String },
    #[error("needs truncation order {needed}, have {have}")]
    TruncationTooSmall { needed: u32, have: u32 },
    #[error("coefficient of y^{n} fails the degree bound under interpolation in r")]
    SymbolicDegree { n: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

/// Univariate shape in the named variable.
fn uni(var: &str, order: u32) -> SeriesShape {
    SeriesShape::new(&[var], &[order])
}

// --- Lagrange inversion ---------------------------------------------------------

/// exp(Σ_{n≥1} uⁿ/n·(Fⁿ)|_{y⁰}) for the Laurent series F = y^{−m}·unit with
/// unit(0) = 1; this equals ∏ᵢ gᵢ(u)/u over the m branches gᵢ of the inverse
/// of 1/F. Returned as a series in u truncated at `order`.
pub fn lagrange_exp_log(
    m: u32,
    unit: &TruncatedSeries<QQ>,
    order: u32,
) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    assert!(m >= 1, "lagrange_exp_log needs a pole y^-m with m >= 1");
    let c0 = unit.coeff(&[0]);
    if c0 != qi(1) {
        return Err(ClosedformError::LeadingTermNotOne { constant: c0.to_string() });
    }
    let have = unit.shape().orders[0];
    let needed = m * order;
    if have < needed {
        return Err(ClosedformError::TruncationTooSmall { needed, have });
    }
    let shape = uni("u", order);
    let mut expo = TruncatedSeries::zero(shape.clone());
    let mut pw = TruncatedSeries::one(unit.shape().clone());
    for n in 1..=order {
        // (Fⁿ)|_{y⁰} = [y^{mn}] unitⁿ.
        pw = pw.mul(unit);
        let c = pw.coeff(&[m * n]);
        if !num_traits::Zero::is_zero(&c) {
            expo.insert(vec![n], c / qi(n as i64));
        }
    }
    Ok(expo.exp()?)
}

// --- branch systems -------------------------------------------------------------

/// The branch system of f(x) = ((x^{1/2}−x^{−1/2})/(x^{r/2}−x^{−r/2}))²:
/// g inverts f^{1/(r−1)} and αᵢ(y) = g(ζⁱ y^{1/(r−1)}) for ζ a primitive
/// (r−1)-th root of unity. Only g is stored; the αᵢ are reached through their
/// power sums, where the root-of-unity filter keeps exponents divisible by
/// r−1 and P_j(0) = 0.
#[derive(Clone, Debug)]
pub struct BranchSystem {
    pub r: i64,
    /// Inverse of f^{1/(r−1)}, as a series in the auxiliary variable s = y^{1/(r−1)}.
    pub g: TruncatedSeries<QQ>,
}

impl BranchSystem {
    /// Build the system with g truncated at s-order (r−1)·yOrder.
    pub fn new(r: i64, y_order: u32) -> Result<Self, ClosedformError> {
        assert!(r >= 2, "branches exist for r >= 2");
        let so = (r - 1) as u32 * y_order;
        let shape = uni("s", so);
        let one = TruncatedSeries::one(shape.clone());
        let s = TruncatedSeries::var(shape, "s");
        // f(s) = s^{r−1}·((1−s)/(1−s^r))², so f^{1/(r−1)} = s·unit^{1/(r−1)}.
        let unit = one.sub(&s).pow(2).mul(&one.sub(&s.pow(r as u32)).invert()?.pow(2));
        let f1 = s.mul(&unit.pow_rat(&qq(1, r - 1))?);
        Ok(BranchSystem { r, g: f1.compositional_inverse()? })
    }

    /// P_j(y) = Σᵢ αᵢ(y)^j for j = 1..jMax: expand g^j = Σ c_e s^e and keep
    /// (r−1)·c_e at y^{e/(r−1)} when (r−1) | e.
    pub fn power_sums(&self, j_max: u32, y_order: u32) -> Vec<TruncatedSeries<QQ>> {
        let rm1 = (self.r - 1) as u32;
        let mut out = Vec::with_capacity(j_max as usize);
        let mut gp = TruncatedSeries::one(self.g.shape().clone());
        for _ in 1..=j_max {
            gp = gp.mul(&self.g);
            let mut p = TruncatedSeries::zero(uni("y", y_order));
            for (e, c) in gp.terms() {
                if e[0] % rm1 == 0 && e[0] / rm1 <= y_order {
                    p.insert(vec![e[0] / rm1], c * qi(self.r - 1));
                }
            }
            out.push(p);
        }
        out
    }
}

/// The power sums P_1..P_jMax of the branch system at rank r.
pub fn branch_power_sums(
    r: i64,
    j_max: u32,
    y_order: u32,
) -> Result<Vec<TruncatedSeries<QQ>>, ClosedformError> {
    Ok(BranchSystem::new(r, y_order)?.power_sums(j_max, y_order))
}

// --- the B₃ series --------------------------------------------------------------

/// B₃(−y(1−y)^{r²−1}) by the exponential formula:
/// (1−y)^{−r/2}·exp(−Σ_{n≥1} yⁿ/(2n)·((x^r−x^{−r})/(x−x⁻¹))^{2n}|_{x⁰}).
pub fn b3_exp_formula(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    assert!(r >= 0);
    let shape = uni("y", y_order);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape.clone(), "y");
    let mut expo = TruncatedSeries::zero(shape);
    for n in 1..=y_order {
        expo.insert(vec![n], -central_bracket(r + 1, n) / qi(2 * n as i64));
    }
    Ok(one.sub(&y).pow_rat(&qq(-r, 2))?.mul(&expo.exp()?))
}

/// B₃(−y(1−y)^{r²−1}) by the branch product formula: the square root with
/// constant term 1 of y/((1−y)^r·∏ᵢ αᵢ(y)), the product coming from Lagrange
/// inversion of 1/f. Returns 1 directly for r ∈ {0, 1}.
pub fn b3_product(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    assert!(r >= 0);
    let shape = uni("y", y_order);
    if r <= 1 {
        return Ok(TruncatedSeries::one(shape));
    }
    // 1/f = x^{1−r}·((1−x^r)/(1−x))², so ∏αᵢ(y)/y = exp(Σ yⁿ/n·((1/f)ⁿ)|_{x⁰}).
    let xo = (r - 1) as u32 * y_order;
    let xshape = uni("x", xo);
    let one_x = TruncatedSeries::one(xshape.clone());
    let x = TruncatedSeries::var(xshape, "x");
    let unit = one_x.sub(&x.pow(r as u32)).pow(2).mul(&one_x.sub(&x).invert()?.pow(2));
    let prod = lagrange_exp_log((r - 1) as u32, &unit, y_order)?.embed(shape.clone(), &[0]);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    let b3_sq = one.sub(&y).pow(r as u32).mul(&prod).invert()?;
    let c0 = b3_sq.coeff(&[0]);
    if c0 != qi(1) {
        return Err(ClosedformError::SquareRootObstruction { constant: c0.to_string() });
    }
    Ok(b3_sq.pow_rat(&qq(1, 2))?)
}

// --- the binomial formula for B₄ ------------------------------------------------

/// The three finite binomial sums feeding log B₄ at weight n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialTriple {
    pub alpha: QQ,
    pub beta: QQ,
    pub gamma: QQ,
}

/// α_n, β_n, γ_n at integer rank r; all sums run over nonnegative integers
/// and binom(·, j) follows the generalized convention (0 for j < 0).
pub fn binomial_triples(n: u32, r: i64) -> BinomialTriple {
    let n = n as i64;
    assert!(n >= 1);
    let sign = |j: i64| if j % 2 == 0 { qi(1) } else { qi(-1) };

    // α_n = Σ_{i≤⌊n/2⌋} Σ_{j+k=n+2i} (−1)^j binom(kr+n−1, 2n−1) binom(2n, j).
    let mut alpha = qi(0);
    for i in 0..=n / 2 {
        for j in 0..=n + 2 * i {
            let k = n + 2 * i - j;
            alpha = alpha + sign(j) * bin(k * r + n - 1, 2 * n - 1) * bin(2 * n, j);
        }
    }

    // β_n: two inner blocks over k+l = n with k, l > 0.
    let mut beta = qi(0);
    for k in 1..n {
        let l = n - k;
        let mut inner = qi(0);
        for i in 0..k {
            for j in 0..l {
                let mut esum = qi(0);
                for e in 1..=2 * l {
                    esum = esum
                        + qi(e)
                            * bin((r + 1) * l - j * r, 2 * l - e)
                            * bin((r + 1) * k - i * r, 2 * k + e);
                }
                inner = inner + sign(i + j) * bin(2 * k, i) * bin(2 * l, j) * esum;
            }
            for j in l..=(2 * l).min(n - i - 1) {
                inner = inner
                    + sign(i + j)
                        * bin(2 * k, i)
                        * bin(2 * l, j)
                        * (qi((j * k - l * i) * r) / qi(n))
                        * bin((r + 1) * n - r * (i + j) - 1, 2 * n - 1);
            }
        }
        beta = beta + inner / qi(k * l);
    }

    // γ_n: a-weighted product of two bracketed sums, over k+l = n with k, l > 0.
    let mut gamma = qi(0);
    for k in 1..n {
        let l = n - k;
        let mut inner = qi(0);
        for a in 0..=k.min(l) {
            let mut s1 = qi(0);
            for i in 0..=k - a {
                let j = k - a - i;
                s1 = s1 + sign(i) * bin(r * j + k - 1, 2 * k - 1) * bin(2 * k, i);
            }
            let mut s2 = qi(0);
            for i in 0..=a + l {
                let j = a + l - i;
                s2 = s2 + sign(i) * bin(r * j + l - 1, 2 * l - 1) * bin(2 * l, i);
            }
            inner = inner + qi(a) * s1 * s2;
        }
        gamma = gamma + inner / qi(k * l);
    }

    BinomialTriple { alpha, beta, gamma }
}

/// Coefficient of yⁿ in log B₄(−y(1−y)^{r²−1}):
/// (4rα_n − r² − 3r^{2n} − 2nβ_n − 2nr²γ_n)/(8n).
fn b4_log_coeff(n: u32, r: i64) -> QQ {
    let t = binomial_triples(n, r);
    let nn = qi(n as i64);
    let r2n = num_traits::pow::pow(qi(r), 2 * n as usize);
    let num =
        qi(4 * r) * t.alpha - qi(r * r) - qi(3) * r2n - qi(2) * &nn * t.beta
            - qi(2 * r * r) * &nn * t.gamma;
    num / (qi(8) * nn)
}

/// B₄(−y(1−y)^{r²−1}) from the binomial formula, as a series in y.
pub fn b4_binomial(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    assert!(r >= 0);
    let mut expo = TruncatedSeries::zero(uni("y", y_order));
    for n in 1..=y_order {
        expo.insert(vec![n], b4_log_coeff(n, r));
    }
    Ok(expo.exp()?)
}

/// Coefficients of B₄(−y(1−y)^{r²−1}) as polynomials in r (ascending powers),
/// for n = 0..=yOrder: interpolate through r = 0..=2n+2 and validate the
/// degree bound 2n+2 at the extra node r = 2n+3.
pub fn b4_binomial_symbolic(y_order: u32) -> Result<Vec<Vec<QQ>>, ClosedformError> {
    let series: Vec<TruncatedSeries<QQ>> = (0..=2 * y_order as i64 + 3)
        .map(|r| b4_binomial(r, y_order))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(y_order as usize + 1);
    for n in 0..=y_order {
        let values: Vec<QQ> = series.iter().map(|s| s.coeff(&[n])).collect();
        let p = interpolate(&values[..2 * n as usize + 3]);
        let probe = 2 * n as i64 + 3;
        if poly_eval(&p, &qi(probe)) != values[probe as usize] {
            return Err(ClosedformError::SymbolicDegree { n });
        }
        out.push(p);
    }
    Ok(out)
}

// --- the conjectural product formula for B₄ -------------------------------------

/// B₄(−y(1−y)^{r²−1}) from the conjectural product formula
/// (G₄G₃^r)⁸ = (1−r²y)³/(1−y)^{3r²}·(∏_{i,j}(1−αᵢαⱼ)·∏_{i≠j}(1−αᵢ^rαⱼ^r))²,
/// with both double products expanded through power sums:
/// log ∏_{i,j}(1−αᵢαⱼ) = −Σ_n P_n²/n and
/// log ∏_{i≠j}(1−αᵢ^rαⱼ^r) = −Σ_n (P_{rn}² − P_{2rn})/n.
/// Returns 1 directly for the degenerate ranks r ∈ {0, 1}.
pub fn b4_conjecture(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    assert!(r >= 0);
    let shape = uni("y", y_order);
    if r <= 1 {
        return Ok(TruncatedSeries::one(shape));
    }
    // αᵢ has y-valuation 1/(r−1), so P_j vanishes below y^{yOrder} once
    // j > (r−1)·yOrder; that bound covers every index used by both products.
    let j_max = (r - 1) as u32 * y_order;
    let p = BranchSystem::new(r, y_order)?.power_sums(j_max, y_order);
    let mut log_prod = TruncatedSeries::zero(shape.clone());
    for n in 1..=j_max as usize {
        log_prod = log_prod.sub(&p[n - 1].mul(&p[n - 1]).scale(&qq(1, n as i64)));
    }
    for n in 1.. {
        let rn = r as usize * n;
        if rn > j_max as usize {
            break;
        }
        let mut term = p[rn - 1].mul(&p[rn - 1]);
        if 2 * rn <= j_max as usize {
            // P_{2rn} vanishes below y^{yOrder} when 2rn exceeds jMax.
            term = term.sub(&p[2 * rn - 1]);
        }
        log_prod = log_prod.sub(&term.scale(&qq(1, n as i64)));
    }
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    let eighth = one
        .sub(&y.scale(&qi(r * r)))
        .pow(3)
        .mul(&one.sub(&y).pow((3 * r * r) as u32).invert()?)
        .mul(&log_prod.scale(&qi(2)).exp()?);
    let c0 = eighth.coeff(&[0]);
    if c0 != qi(1) {
        return Err(ClosedformError::RootObstruction { constant: c0.to_string() });
    }
    let g4g3r = eighth.pow_rat(&qq(1, 8))?;
    Ok(g4g3r.mul(&ipow(&b3_product(r, y_order)?, -r)?))
}

// --- closed forms of the A- and B-families --------------------------------------

/// The Chern-side substitution argument x = −y(1−ry)^{r−1}, as a series in y.
pub fn chern_arg(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    let shape = uni("y", y_order);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    Ok(y.neg().mul(&ipow(&one.sub(&y.scale(&qi(r))), r - 1)?))
}

/// The Verlinde-side substitution argument t = −y(1−y)^{r²−1}, as a series in y.
pub fn verlinde_arg(r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    let shape = uni("y", y_order);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    Ok(y.neg().mul(&ipow(&one.sub(&y), r * r - 1)?))
}

/// A_i(x) as a series in y (i ≤ 3): A₀ = (1−y)^{r+1}/(1−ry),
/// A₁ = (1−ry)/(1−y)^r, A₂ = (1−ry)^{2r}/((1−y)^{r²}(1−r²y)), A₃ = B₃.
pub fn closed_form_a(i: usize, r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    let shape = uni("y", y_order);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    let ym = |c: i64| one.sub(&y.scale(&qi(c)));
    match i {
        0 => Ok(ipow(&ym(1), r + 1)?.mul(&ym(r).invert()?)),
        1 => Ok(ym(r).mul(&ipow(&ym(1), -r)?)),
        2 => Ok(ipow(&ym(r), 2 * r)?.mul(&ipow(&ym(1), -r * r)?).mul(&ym(r * r).invert()?)),
        3 => b3_exp_formula(r, y_order),
        _ => panic!("closed forms exist for A₀..A₃"),
    }
}

/// B_i(t) as a series in y (1 ≤ i ≤ 3): B₁ = 1−y, B₂ = (1−y)^{r²}/(1−r²y),
/// B₃ the exponential formula.
pub fn closed_form_b(i: usize, r: i64, y_order: u32) -> Result<TruncatedSeries<QQ>, ClosedformError> {
    let shape = uni("y", y_order);
    let one = TruncatedSeries::one(shape.clone());
    let y = TruncatedSeries::var(shape, "y");
    match i {
        1 => Ok(one.sub(&y)),
        2 => Ok(one.sub(&y).pow((r * r) as u32).mul(&one.sub(&y.scale(&qi(r * r))).invert()?)),
        3 => b3_exp_formula(r, y_order),
        _ => panic!("closed forms exist for B₁..B₃"),
    }
}

// --- localization comparators ---------------------------------------------------

/// B₃ and B₄ from the localization extraction at rank r, pulled back to y by
/// composing with t = −y(1−y)^{r²−1}.
pub fn b34_localization(
    r: i64,
    y_order: u32,
) -> Result<(TruncatedSeries<QQ>, TruncatedSeries<QQ>), ClosedformError> {
    let bundle = extract_universal(Flavor::Verlinde, r + 1, y_order, 0)?;
    let t = verlinde_arg(r, y_order)?;
    let pull = |log_b: &TruncatedSeries<QQ>| -> Result<TruncatedSeries<QQ>, ClosedformError> {
        Ok(log_b.embed(uni("y", y_order), &[0]).compose(&t)?.exp()?)
    };
    Ok((pull(&bundle.log_g[3])?, pull(&bundle.log_g[4])?))
}

// --- verifiers ------------------------------------------------------------------

fn compare(
    identity: &str,
    params: serde_json::Value,
    pairs: &[(&str, &TruncatedSeries<QQ>, &TruncatedSeries<QQ>)],
) -> CheckReport {
    for (label, lhs, rhs) in pairs {
        if lhs != rhs {
            return CheckReport::fail(
                identity,
                params.clone(),
                format!("{label}: {:?} != {:?}", lhs, rhs),
            );
        }
    }
    CheckReport::pass(identity, params)
}

/// Triple agreement for B₃: exponential formula, branch product formula, and
/// the localization extraction, all as series in y through y^{yOrder}.
pub fn verify_b3(r: i64, y_order: u32) -> CheckReport {
    let identity = "b3-product-formula";
    let params = json!({ "r": r, "yOrder": y_order });
    let run = || -> Result<CheckReport, ClosedformError> {
        let exp_form = b3_exp_formula(r, y_order)?;
        let product = b3_product(r, y_order)?;
        let (loc, _) = b34_localization(r, y_order)?;
        Ok(compare(
            identity,
            params.clone(),
            &[
                ("product vs exp formula", &product, &exp_form),
                ("localization vs exp formula", &loc, &exp_form),
            ],
        ))
    };
    run().unwrap_or_else(|e| CheckReport::fail(identity, params, e.to_string()))
}

/// The B₄ conjecture: binomial formula vs branch product formula at `y_order`,
/// and both vs the localization extraction at `loc_order` when given.
pub fn verify_bconj(r: i64, y_order: u32, loc_order: Option<u32>) -> CheckReport {
    let identity = "bconj";
    let params = json!({ "r": r, "yOrder": y_order, "locOrder": loc_order });
    let run = || -> Result<CheckReport, ClosedformError> {
        let binomial = b4_binomial(r, y_order)?;
        let conjecture = b4_conjecture(r, y_order)?;
        let mut parts =
            vec![compare(identity, params.clone(), &[("conjecture vs binomial", &conjecture, &binomial)])];
        if let Some(lo) = loc_order {
            let (_, loc) = b34_localization(r, lo)?;
            let short = b4_binomial(r, lo)?;
            parts.push(compare(identity, params.clone(), &[("localization vs binomial", &loc, &short)]));
        }
        Ok(CheckReport::combine(identity, params.clone(), &parts))
    };
    run().unwrap_or_else(|e| CheckReport::fail(identity, params, e.to_string()))
}

/// The rational closed forms A₀, A₁, A₂, B₁, B₂ against the localization
/// extraction at rank r, through w^{wOrder}.
pub fn verify_known_series(r: i64, w_order: u32) -> CheckReport {
    let identity = "known-series";
    let params = json!({ "r": r, "wOrder": w_order });
    let run = || -> Result<CheckReport, ClosedformError> {
        let wshape = uni("w", w_order);
        // y(w): invert the substitution argument, then read it in the w shape.
        let y_of = |arg: &TruncatedSeries<QQ>| -> Result<TruncatedSeries<QQ>, RingError> {
            Ok(arg.compositional_inverse()?.embed(wshape.clone(), &[0]))
        };
        let y_c = y_of(&chern_arg(r, w_order)?)?;
        let y_v = y_of(&verlinde_arg(r, w_order)?)?;
        let chern = extract_universal(Flavor::Chern, r + 1, w_order, 0)?;
        let verlinde = extract_universal(Flavor::Verlinde, r + 1, w_order, 0)?;
        let mut parts = Vec::new();
        for (label, idx, closed, y_w, bundle) in [
            ("A0", 0, closed_form_a(0, r, w_order)?, &y_c, &chern),
            ("A1", 1, closed_form_a(1, r, w_order)?, &y_c, &chern),
            ("A2", 2, closed_form_a(2, r, w_order)?, &y_c, &chern),
            ("B1", 1, closed_form_b(1, r, w_order)?, &y_v, &verlinde),
            ("B2", 2, closed_form_b(2, r, w_order)?, &y_v, &verlinde),
        ] {
            let expected = closed.log()?.compose(y_w)?;
            parts.push(compare(identity, params.clone(), &[(label, &bundle.log_g[idx], &expected)]));
        }
        Ok(CheckReport::combine(identity, params.clone(), &parts))
    };
    run().unwrap_or_else(|e| CheckReport::fail(identity, params, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_u(order: u32) -> TruncatedSeries<QQ> {
        TruncatedSeries::one(uni("u", order))
    }

    #[test]
    fn lagrange_trivial_poles() {
        // F = y⁻¹: every (Fⁿ)|_{y⁰} vanishes, so the product side is 1.
        let unit = TruncatedSeries::one(uni("y", 6));
        assert_eq!(lagrange_exp_log(1, &unit, 6).unwrap(), one_u(6));
        // F = y⁻² exactly: the two branches are ±√u·(1+…), product/u = 1.
        let unit2 = TruncatedSeries::one(uni("y", 12));
        assert_eq!(lagrange_exp_log(2, &unit2, 6).unwrap(), one_u(6));
    }

    #[test]
    fn lagrange_inverse1_contract() {
        // F = y⁻¹(1−y)⁻¹; g inverts 1/F = y(1−y); check g(u)/u = exp side.
        let shape = uni("y", 7);
        let one = TruncatedSeries::one(shape.clone());
        let y = TruncatedSeries::var(shape.clone(), "y");
        let unit = one.sub(&y).invert().unwrap();
        let lhs = lagrange_exp_log(1, &unit, 6).unwrap();
        let g = y.mul(&one.sub(&y)).compositional_inverse().unwrap();
        let mut g_over_u = TruncatedSeries::zero(uni("u", 6));
        for (e, c) in g.terms() {
            if e[0] >= 1 && e[0] - 1 <= 6 {
                g_over_u.insert(vec![e[0] - 1], c.clone());
            }
        }
        assert_eq!(lhs, g_over_u);
        // The constant terms themselves are central binomials binom(2n−1, n).
        assert_eq!(lhs.log().unwrap().coeff(&[4]), bin(7, 4) / qi(4));
    }

    #[test]
    fn branch_power_sums_r2() {
        // r = 2: the single branch inverts f(x) = x/(1+x)² = x − 2x² + 3x³ − …
        let p1 = branch_power_sums(2, 1, 6).unwrap().pop().unwrap();
        let shape = uni("y", 6);
        let one = TruncatedSeries::one(shape.clone());
        let y = TruncatedSeries::var(shape, "y");
        let f = y.mul(&one.add(&y).pow(2).invert().unwrap());
        assert_eq!(p1, f.compositional_inverse().unwrap());
        assert_eq!(p1.coeff(&[1]), qi(1));
        assert_eq!(p1.coeff(&[2]), qi(2));
    }

    #[test]
    fn branch_power_sums_r3_explicit_branches() {
        // r = 3: two branches g(±s) with y = s²; the filter must reproduce
        // g(s)^j + g(−s)^j, whose odd s-powers cancel.
        let bs = BranchSystem::new(3, 4).unwrap();
        let s = TruncatedSeries::var(bs.g.shape().clone(), "s");
        let gm = bs.g.substitute(&[s.neg()]);
        let sums = bs.power_sums(4, 4);
        for j in 1..=4u32 {
            let explicit = bs.g.pow(j).add(&gm.pow(j));
            let mut in_y = TruncatedSeries::zero(uni("y", 4));
            for (e, c) in explicit.terms() {
                assert_eq!(e[0] % 2, 0, "odd s-power survives in P_{j}");
                if e[0] / 2 <= 4 {
                    in_y.insert(vec![e[0] / 2], c.clone());
                }
            }
            assert_eq!(sums[j as usize - 1], in_y);
        }
    }

    #[test]
    fn b3_oracles() {
        // r = 2: B₃(−y(1−y)³) = (1 + √(1−4y))/(2(1−y)).
        let shape = uni("y", 8);
        let one = TruncatedSeries::one(shape.clone());
        let y = TruncatedSeries::var(shape, "y");
        let sqrt = one.sub(&y.scale(&qi(4))).pow_rat(&qq(1, 2)).unwrap();
        let closed = one.add(&sqrt).scale(&qq(1, 2)).mul(&one.sub(&y).invert().unwrap());
        assert_eq!(b3_product(2, 8).unwrap(), closed);
        // Exponential formula and product formula agree; r ≤ 1 degenerates to 1.
        assert_eq!(b3_product(2, 8).unwrap(), b3_exp_formula(2, 8).unwrap());
        assert_eq!(b3_product(3, 8).unwrap(), b3_exp_formula(3, 8).unwrap());
        for r in 0..=1 {
            assert_eq!(b3_product(r, 5).unwrap(), TruncatedSeries::one(uni("y", 5)));
            assert_eq!(b3_exp_formula(r, 5).unwrap(), TruncatedSeries::one(uni("y", 5)));
        }
    }

    #[test]
    fn binomial_triples_degenerate_ranks() {
        // The k+l = 1 sum is empty.
        assert_eq!(binomial_triples(1, 5).gamma, qi(0));
        // log B₄ vanishes identically at r ∈ {0, 1}.
        for r in 0..=1 {
            for n in 1..=10 {
                assert_eq!(b4_log_coeff(n, r), qi(0), "log B4 coefficient at n={n}, r={r}");
            }
        }
        assert_eq!(b4_binomial(0, 6).unwrap(), TruncatedSeries::one(uni("y", 6)));
        assert_eq!(b4_binomial(1, 6).unwrap(), TruncatedSeries::one(uni("y", 6)));
    }

    #[test]
    fn b4_symbolic_interpolation() {
        let sym = b4_binomial_symbolic(3).unwrap();
        for r in [2i64, 5] {
            let series = b4_binomial(r, 3).unwrap();
            for (n, p) in sym.iter().enumerate() {
                assert_eq!(poly_eval(p, &qi(r)), series.coeff(&[n as u32]));
            }
        }
    }

    #[test]
    fn b4_conjecture_matches_binomial() {
        assert_eq!(b4_conjecture(2, 6).unwrap(), b4_binomial(2, 6).unwrap());
        assert_eq!(b4_conjecture(3, 4).unwrap(), b4_binomial(3, 4).unwrap());
        assert_eq!(b4_conjecture(0, 5).unwrap(), TruncatedSeries::one(uni("y", 5)));
    }

    #[test]
    fn substitution_arguments() {
        let a = chern_arg(2, 4).unwrap();
        assert_eq!(a.coeff(&[1]), qi(-1));
        assert_eq!(a.coeff(&[2]), qi(2));
        let shape = uni("y", 5);
        let one = TruncatedSeries::one(shape.clone());
        let y = TruncatedSeries::var(shape, "y");
        assert_eq!(closed_form_b(1, 2, 5).unwrap(), one.sub(&y));
    }
}
