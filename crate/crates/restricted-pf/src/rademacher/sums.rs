use rayon::prelude::*;

use super::farey::{farey, SubsetTag};
use super::qcoef::{q_auto, q_exact, QValue, EXACT_CAP};
use crate::error::Result;
use crate::numkit::APComplex;

/// Σ_{h/k ∈ subset} Q_{hkσ}(N). Elements are computed in parallel and added in ascending (k, h)
/// order, so the result does not depend on the thread count.
pub fn subset_sum(tag: SubsetTag, sigma: i64, n: i64, prec: u32) -> Result<APComplex> {
    let members = tag.members(n);
    let vals: Vec<Result<QValue>> = members.par_iter().map(|f| q_auto(f.h, f.k, sigma, n, prec)).collect();
    let mut acc = APComplex::zero(prec);
    for v in vals {
        acc += v?.value;
    }
    Ok(acc)
}

/// Σ over all of F_N; exact recursion while N ≤ the cap.
pub fn zero_sum(n: i64, sigma: i64, prec: u32) -> Result<APComplex> {
    let fr = farey(n);
    let vals: Vec<Result<QValue>> = fr
        .par_iter()
        .map(|f| if n <= EXACT_CAP { q_exact(f.h, f.k, sigma, n, prec) } else { q_auto(f.h, f.k, sigma, n, prec) })
        .collect();
    let mut acc = APComplex::zero(prec);
    for v in vals {
        acc += v?.value;
    }
    Ok(acc)
}
