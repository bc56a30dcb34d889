use crate::cp::{check_cpstar, CPStarMorphism};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RcpReport {
    /// Every matrix entry is a nonnegative real.
    pub really_positive: bool,
    pub completely_positive: bool,
    pub really_cp: bool,
}

/// Completely positive with a nonnegative real matrix. Entries are read in
/// the bases the objects are given in, so pass algebras in standard form.
pub fn really_cp_check(f: &CPStarMorphism, tol: f64) -> Result<RcpReport> {
    let really_positive = f.map.data().iter().all(|x| x.im.abs() <= tol && x.re >= -tol);
    let completely_positive = check_cpstar(f, tol)?.is_cp();
    Ok(RcpReport { really_positive, completely_positive, really_cp: really_positive && completely_positive })
}
