//! Partitions of natural numbers and the box statistics feeding every
//! partition sum.
//!
//! Boxes are indexed by zero-based (column c, row r); for a box of λ the arm
//! is a = λ_r − c − 1 and the leg is l = λ′_c − r − 1.

use serde::{Deserialize, Serialize};

use crate::ring::{MultiPoly, QQ};
use crate::ring::qi;

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

/// Zero-based box statistics of one box of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxStats {
    pub c: u32,
    pub r: u32,
    pub a: u32,
    pub l: u32,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts: Vec<u32> = parts.into();
        parts.retain(|&p| p > 0);
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing");
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut conj = vec![0u32; cols];
        for &p in &self.parts {
            for item in conj.iter_mut().take(p as usize) {
                *item += 1;
            }
        }
        Partition { parts: conj }
    }

    /// n(λ) = Σ (i−1)·λ_i (rows weighted by zero-based row index).
    pub fn n_stat(&self) -> u32 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// z_λ = ∏ iᵐⁱ mᵢ! over part multiplicities.
    pub fn z_factor(&self) -> QQ {
        let mut z = qi(1);
        let mut i = 0;
        while i < self.parts.len() {
            let v = self.parts[i];
            let mut m = 0i64;
            while i < self.parts.len() && self.parts[i] == v {
                m += 1;
                i += 1;
            }
            for j in 1..=m {
                z = z * qi(v as i64) * qi(j);
            }
        }
        z
    }

    /// One `BoxStats` entry per box, column-major within each row.
    pub fn box_stats(&self) -> Vec<BoxStats> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight() as usize);
        for (r, &row_len) in self.parts.iter().enumerate() {
            for c in 0..row_len {
                let a = row_len - c - 1;
                let l = conj.parts[c as usize] - r as u32 - 1;
                out.push(BoxStats { c, r: r as u32, a, l });
            }
        }
        out
    }
}

/// All partitions of n, each exactly once, in reverse-lexicographic order
/// (so `[n]` first and `[1,…,1]` last). The order is part of the output
/// contract: serialized artifacts depend on it.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: current.clone() });
            return;
        }
        let hi = remaining.min(max_part);
        for p in (1..=hi).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n.max(1), &mut current, &mut out);
    out
}

/// All partitions of weight 0..=n, in weight order then reverse-lex.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(enumerate_partitions).collect()
}

/// N_λ(q,t) = ∏_□ (q^{a+1} − t^l)(q^a − t^{l+1}).
pub fn stat_n(lambda: &Partition) -> MultiPoly {
    let vars = crate::ring::qt_vars();
    let mut acc = MultiPoly::one(vars.clone());
    for b in lambda.box_stats() {
        let f1 = MultiPoly::monomial(vars.clone(), vec![b.a + 1, 0], qi(1))
            .sub(&MultiPoly::monomial(vars.clone(), vec![0, b.l], qi(1)));
        let f2 = MultiPoly::monomial(vars.clone(), vec![b.a, 0], qi(1))
            .sub(&MultiPoly::monomial(vars.clone(), vec![0, b.l + 1], qi(1)));
        acc = acc.mul(&f1).mul(&f2);
    }
    acc
}

/// B_λ(q,t) = Σ_□ q^c t^r.
pub fn stat_b(lambda: &Partition) -> MultiPoly {
    let vars = crate::ring::qt_vars();
    let mut acc = MultiPoly::zero(vars.clone());
    for b in lambda.box_stats() {
        acc = acc.add(&MultiPoly::monomial(vars.clone(), vec![b.c, b.r], qi(1)));
    }
    acc
}

/// T_λ(q,t) = q^{n(λ′)} t^{n(λ)}.
pub fn stat_t(lambda: &Partition) -> MultiPoly {
    let vars = crate::ring::qt_vars();
    MultiPoly::monomial(vars, vec![lambda.conjugate().n_stat(), lambda.n_stat()], qi(1))
}

/// D_λ(q,t) = −1 + (1−q)(1−t)·B_λ.
pub fn stat_d(lambda: &Partition) -> MultiPoly {
    let vars = crate::ring::qt_vars();
    let one = MultiPoly::one(vars.clone());
    let q = MultiPoly::var(vars.clone(), 0);
    let t = MultiPoly::var(vars.clone(), 1);
    one.sub(&q).mul(&one.sub(&t)).mul(&stat_b(lambda)).sub(&one)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent partition count via Euler's pentagonal-number recurrence.
    fn pentagonal_count(n: usize) -> i64 {
        let mut p = vec![0i64; n + 1];
        p[0] = 1;
        for m in 1..=n {
            let mut acc = 0i64;
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 as usize > m {
                    break;
                }
                let sign = if k % 2 == 0 { -1 } else { 1 };
                acc += sign * p[m - g1 as usize];
                if g2 as usize <= m {
                    acc += sign * p[m - g2 as usize];
                }
                k += 1;
            }
            p[m] = acc;
        }
        p[n]
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(10).len(), 42);
        for n in 0..=12u32 {
            assert_eq!(enumerate_partitions(n).len() as i64, pentagonal_count(n as usize));
        }
    }

    #[test]
    fn enumeration_order_reverse_lex() {
        let got: Vec<Vec<u32>> =
            enumerate_partitions(4).into_iter().map(|p| p.parts).collect();
        assert_eq!(got, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn box_stats_examples() {
        assert_eq!(
            Partition::new(vec![1]).box_stats(),
            vec![BoxStats { c: 0, r: 0, a: 0, l: 0 }]
        );
        let s21 = Partition::new(vec![2, 1]).box_stats();
        assert!(s21.contains(&BoxStats { c: 0, r: 0, a: 1, l: 1 }));
        assert!(s21.contains(&BoxStats { c: 1, r: 0, a: 0, l: 0 }));
        assert!(s21.contains(&BoxStats { c: 0, r: 1, a: 0, l: 0 }));
        // (3,1): box (0,0) has arm 2, leg 1.
        let s31 = Partition::new(vec![3, 1]).box_stats();
        let b00 = s31.iter().find(|b| b.c == 0 && b.r == 0).unwrap();
        assert_eq!((b00.a, b00.l), (2, 1));
    }

    #[test]
    fn conjugation_symmetry() {
        for n in 0..=8u32 {
            for lam in enumerate_partitions(n) {
                let conj = lam.conjugate();
                let mut flipped: Vec<BoxStats> = lam
                    .box_stats()
                    .into_iter()
                    .map(|b| BoxStats { c: b.r, r: b.c, a: b.l, l: b.a })
                    .collect();
                let mut cs = conj.box_stats();
                flipped.sort_by_key(|b| (b.c, b.r));
                cs.sort_by_key(|b| (b.c, b.r));
                assert_eq!(flipped, cs);
            }
        }
    }

    #[test]
    fn stats_single_box() {
        use crate::ring::qt_vars;
        let lam = Partition::new(vec![1]);
        let vars = qt_vars();
        let q = MultiPoly::var(vars.clone(), 0);
        let t = MultiPoly::var(vars.clone(), 1);
        let one = MultiPoly::one(vars.clone());
        assert_eq!(stat_n(&lam), q.sub(&one).mul(&one.sub(&t)));
        assert_eq!(stat_b(&lam), one);
        assert_eq!(stat_t(&lam), one);
        // D = −q − t + qt.
        assert_eq!(stat_d(&lam), q.neg().sub(&t).add(&q.mul(&t)));
    }

    #[test]
    fn stats_two_one() {
        use crate::ring::qt_vars;
        let lam = Partition::new(vec![2, 1]);
        let vars = qt_vars();
        let q = MultiPoly::var(vars.clone(), 0);
        let t = MultiPoly::var(vars.clone(), 1);
        let one = MultiPoly::one(vars.clone());
        assert_eq!(stat_b(&lam), one.add(&q).add(&t));
        assert_eq!(stat_t(&lam), q.mul(&t));
        // N = (q²−t)(q−t²)(q−1)²(1−t)² — wait: boxes (0,0),(1,0),(0,1) give
        // (q²−t)(q−t²)·(q−1)(1−t)·(q−1)(1−t).
        let expected = q
            .mul(&q)
            .sub(&t)
            .mul(&q.sub(&t.mul(&t)))
            .mul(&q.sub(&one).pow(2))
            .mul(&one.sub(&t).pow(2));
        assert_eq!(stat_n(&lam), expected);
    }

    #[test]
    fn symmetry_invariants() {
        // N, B, T transform under conjugation by swapping q and t; checked by
        // evaluation at a generic rational point.
        use crate::ring::qq;
        let pt = [qq(3, 2), qq(5, 7)];
        let swapped = [pt[1].clone(), pt[0].clone()];
        for n in 0..=8u32 {
            for lam in enumerate_partitions(n) {
                let conj = lam.conjugate();
                assert_eq!(stat_n(&lam).eval(&pt), stat_n(&conj).eval(&swapped));
                assert_eq!(stat_b(&lam).eval(&pt), stat_b(&conj).eval(&swapped));
                assert_eq!(stat_t(&lam).eval(&pt), stat_t(&conj).eval(&swapped));
                assert!(!stat_n(&lam).is_zero());
            }
        }
    }

    #[test]
    fn arm_column_sums() {
        for n in 0..=10u32 {
            for lam in enumerate_partitions(n) {
                let stats = lam.box_stats();
                let asum: u32 = stats.iter().map(|b| b.a).sum();
                let csum: u32 = stats.iter().map(|b| b.c).sum();
                let lsum: u32 = stats.iter().map(|b| b.l).sum();
                let rsum: u32 = stats.iter().map(|b| b.r).sum();
                assert_eq!(asum, csum);
                assert_eq!(lsum, rsum);
            }
        }
    }

    #[test]
    fn z_factor_values() {
        use crate::ring::qi;
        assert_eq!(Partition::empty().z_factor(), qi(1));
        assert_eq!(Partition::new(vec![1, 1]).z_factor(), qi(2));
        assert_eq!(Partition::new(vec![2]).z_factor(), qi(2));
        assert_eq!(Partition::new(vec![2, 1, 1]).z_factor(), qi(4));
        assert_eq!(Partition::new(vec![3, 3]).z_factor(), qi(18));
    }
}
