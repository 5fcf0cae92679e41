use crate::error::{Error, Result};
use crate::fp_linalg::{rank, FpMatrix};

/// dim IⁱM for i = 0, 1, … until the chain stabilizes, where I acts on M
/// through the nilpotent matrix `x`.
pub fn power_dims(x: &FpMatrix) -> Result<Vec<usize>> {
    let d = x.rows();
    if x.cols() != d {
        return Err(Error::InvalidInput("x must be square".into()));
    }
    let mut dims = vec![d];
    let mut pow = FpMatrix::identity(x.p(), d);
    loop {
        pow = x.mul(&pow);
        let r = rank(&pow);
        if r == *dims.last().expect("nonempty") {
            break;
        }
        dims.push(r);
    }
    if *dims.last().expect("nonempty") != 0 {
        return Err(Error::InvalidInput("x is not nilpotent".into()));
    }
    Ok(dims)
}

/// If IⁱM/I^{i+1}M ≅ F_p for i < n and IⁿM = I^{n+1}M, then IⁿM = 0 by
/// Nakayama and #M = pⁿ. Checks the hypotheses, then the conclusion.
pub fn main_lemma_check(x: &FpMatrix, n: usize) -> Result<bool> {
    let dims = power_dims(x)?;
    let at = |i: usize| dims.get(i).copied().unwrap_or(0);
    for i in 0..n {
        if at(i) - at(i + 1) != 1 {
            return Err(Error::HypothesisFailed(format!("graded piece {i} is not one-dimensional")));
        }
    }
    if at(n) != at(n + 1) {
        return Err(Error::HypothesisFailed(format!("the filtration does not stabilize at {n}")));
    }
    Ok(x.rows() == n && at(n) == 0)
}
