//! Bound formulas for maximum minimal blocking sets and the harness that
//! checks them against the brute-force oracles.
//!
//! The bounds grow as exponent towers, so everything is arbitrary
//! precision. `beta(2, t)` already overflows 64 bits for t = 4.

use num_bigint::BigUint;
use serde::Serialize;

use crate::decomposition::bed_value;
use crate::error::{CoreError, Result};
use crate::graph::Graph;
use crate::oracle::mmbs_graph;
use crate::treedepth::treedepth_exact;

/// Bit-size guard: exponents beyond this cannot be materialized.
const MAX_SHIFT_BITS: u64 = 1 << 31;

/// Tower bound on minimal blocking sets as a function of the elimination
/// parameter: `beta(0) = 1`, `beta(x) = 2^(t * beta(x-1))`.
pub fn beta(lambda: usize, t: usize) -> Result<BigUint> {
    assert!(t >= 3);
    let mut value = BigUint::from(1u32);
    for _ in 0..lambda {
        let exp = value * t;
        let bits: u64 = exp.try_into().map_err(|_| CoreError::CapExceeded {
            what: "tower-bound exponent bits",
            got: usize::MAX,
            cap: MAX_SHIFT_BITS as usize,
        })?;
        if bits > MAX_SHIFT_BITS {
            return Err(CoreError::CapExceeded {
                what: "tower-bound exponent bits",
                got: bits as usize,
                cap: MAX_SHIFT_BITS as usize,
            });
        }
        value = BigUint::from(1u32) << bits;
    }
    Ok(value)
}

/// Chunk-size bound `c(lambda, t) = (t-1) * beta(lambda, t)`.
pub fn chunk_bound(lambda: usize, t: usize) -> Result<BigUint> {
    Ok(beta(lambda, t)? * (t - 1))
}

/// Degree of the kernel-size polynomial:
/// `delta(lambda, t) = (t-1) * (2c(lambda,t) + 2)^lambda`.
pub fn kernel_degree(lambda: usize, t: usize) -> Result<BigUint> {
    let c = chunk_bound(lambda, t)?;
    let base = c * 2u32 + 2u32;
    let mut acc = BigUint::from(1u32);
    for _ in 0..lambda {
        acc *= &base;
        if acc.bits() > MAX_SHIFT_BITS {
            return Err(CoreError::CapExceeded {
                what: "kernel-degree bits",
                got: acc.bits() as usize,
                cap: MAX_SHIFT_BITS as usize,
            });
        }
    }
    Ok(acc * (t - 1))
}

/// The three bound values for a parameter pair, bundled.
#[derive(Debug, Clone, Serialize)]
pub struct BoundParams {
    pub lambda: usize,
    pub t: usize,
    pub beta: BigUint,
    pub chunk_bound: BigUint,
    pub kernel_degree: BigUint,
}

impl BoundParams {
    pub fn new(lambda: usize, t: usize) -> Result<Self> {
        Ok(BoundParams {
            lambda,
            t,
            beta: beta(lambda, t)?,
            chunk_bound: chunk_bound(lambda, t)?,
            kernel_degree: kernel_degree(lambda, t)?,
        })
    }
}

/// Treedepth-based bound on minimal blocking sets: `eta^eta * 2^(eta^2)`.
pub fn td_mmbs_bound(eta: usize) -> BigUint {
    let e = BigUint::from(eta);
    let mut pow = BigUint::from(1u32);
    for _ in 0..eta {
        pow *= &e;
    }
    pow << (eta * eta)
}

/// Is `beta(lambda, t) >= threshold`? Walks up the tower and short-circuits
/// as soon as the (monotonically growing) value crosses the threshold, so
/// astronomically large towers are never materialized.
pub fn beta_dominates(lambda: usize, t: usize, threshold: &BigUint) -> bool {
    let mut value = BigUint::from(1u32);
    if value >= *threshold {
        return true;
    }
    for _ in 0..lambda {
        // exponents stay small here: the loop exits as soon as the value
        // reaches the (small) threshold
        let Ok(exp): std::result::Result<u64, _> = (&value * t).try_into() else {
            // the next tower level has more bits than any representable
            // threshold, so it certainly dominates
            return true;
        };
        value = BigUint::from(1u32) << exp;
        if value >= *threshold {
            return true;
        }
    }
    false
}

/// All measured and bound values for one graph, plus the verdict. The tower
/// bound is reported explicitly only when it is small enough to print.
#[derive(Debug, Clone, Serialize)]
pub struct MmbsBoundReport {
    pub mmbs: usize,
    pub bed: usize,
    pub treedepth: usize,
    pub beta_of_bed: Option<BigUint>,
    pub td_bound: BigUint,
    pub pass: bool,
}

/// Computes the exact maximum minimal blocking set, the elimination
/// parameter, and the treedepth, and checks both upper bounds.
pub fn verify_mmbs_bounds(g: &Graph, t: usize) -> Result<MmbsBoundReport> {
    let mmbs = mmbs_graph(g, t)?;
    if !mmbs.exact {
        return Err(CoreError::CapExceeded {
            what: "mmbs search budget",
            got: 0,
            cap: 0,
        });
    }
    let bed = bed_value(g, t, g.n())?.value;
    let (td, _) = treedepth_exact(g)?;
    // materialize the tower only while it is printable
    let beta_of_bed = if bed <= 2 { beta(bed, t).ok() } else { None };
    let td_bound = td_mmbs_bound(td);
    let m = BigUint::from(mmbs.value);
    let pass = beta_dominates(bed, t, &m) && m <= td_bound;
    Ok(MmbsBoundReport {
        mmbs: mmbs.value,
        bed,
        treedepth: td,
        beta_of_bed,
        td_bound,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_values() {
        assert_eq!(beta(0, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(beta(1, 3).unwrap(), BigUint::from(8u32));
        assert_eq!(beta(1, 4).unwrap(), BigUint::from(16u32));
        assert_eq!(beta(2, 3).unwrap(), BigUint::from(1u32) << 24);
        assert_eq!(beta(2, 4).unwrap(), BigUint::from(1u32) << 64);
    }

    #[test]
    fn chunk_bound_values() {
        assert_eq!(chunk_bound(1, 3).unwrap(), BigUint::from(16u32));
        assert_eq!(chunk_bound(0, 5).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn kernel_degree_values() {
        // (t-1) * (2c+2)^lambda with c = 16: 2 * 34 = 68
        assert_eq!(kernel_degree(1, 3).unwrap(), BigUint::from(68u32));
        assert_eq!(kernel_degree(0, 3).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn td_bound_values() {
        assert_eq!(td_mmbs_bound(1), BigUint::from(2u32));
        assert_eq!(td_mmbs_bound(2), BigUint::from(64u32));
        assert_eq!(td_mmbs_bound(3), BigUint::from(13824u32));
    }

    #[test]
    fn bound_report_on_small_graphs() {
        let r = verify_mmbs_bounds(&Graph::complete(3), 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.bed, 1);
        assert!(BigUint::from(r.mmbs) <= r.beta_of_bed.unwrap());

        let r = verify_mmbs_bounds(&Graph::path(5), 3).unwrap();
        assert!(r.pass);
        assert!(r.mmbs <= 1, "t-clique-free graphs block with one element");

        let r = verify_mmbs_bounds(&Graph::complete(4), 3).unwrap();
        assert!(r.pass);
    }
}
