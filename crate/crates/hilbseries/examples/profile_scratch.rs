//! Scratch timing for the closedform verifiers.

use std::time::Instant;

use hilbseries::closedform::{b4_binomial, b4_conjecture, verify_b3, verify_bconj, verify_known_series};

fn main() {
    for r in [2i64, 3] {
        let t0 = Instant::now();
        let rep = verify_known_series(r, 4);
        eprintln!("known-series r={r} w4: pass={} {:?} in {:?}", rep.pass, rep.first_discrepancy, t0.elapsed());
    }
    for r in [2i64, 3] {
        let t0 = Instant::now();
        let rep = verify_b3(r, 8);
        eprintln!("b3 r={r} y8: pass={} {:?} in {:?}", rep.pass, rep.first_discrepancy, t0.elapsed());
    }
    for (r, lo) in [(2i64, 6u32), (3, 5)] {
        let t0 = Instant::now();
        let rep = verify_bconj(r, 12, Some(lo));
        eprintln!("bconj r={r} y12 loc{lo}: pass={} {:?} in {:?}", rep.pass, rep.first_discrepancy, t0.elapsed());
    }
    let t0 = Instant::now();
    let ok = b4_binomial(4, 12).unwrap() == b4_conjecture(4, 12).unwrap();
    eprintln!("bconj r=4 y12 (no loc): pass={ok} in {:?}", t0.elapsed());
}
