//! Composition checks for truncated inverses and the Jacobian-side report.

use serde::{Deserialize, Serialize};

use super::{jacobian_det, map_of_algebra, PolyMap, PolyMapError};
use crate::algebra::{engel_index, yagzhev_index, yagzhev_window_top, MultilinearAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AutomorphismStatus {
    /// Both compositions are the identity exactly.
    Exact,
    /// Both compositions agree with the identity through the bound only.
    TruncatedOk,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub status: AutomorphismStatus,
    pub degree_bound: usize,
    /// `F∘G − Id` through the bound, one string per coordinate.
    pub residual_f_after_g: Vec<String>,
    /// `G∘F − Id` through the bound.
    pub residual_g_after_f: Vec<String>,
    /// Whether some discarded term above the bound is nonzero.
    pub discarded_nonzero: bool,
}

/// Composes `F∘G` and `G∘F`, compares with the identity through total
/// degree `degree_bound`, and reports whether the discarded parts vanish.
pub fn verify_automorphism(f: &PolyMap, g: &PolyMap, degree_bound: usize) -> Result<AutomorphismReport, PolyMapError> {
    if f.n() != g.n() {
        return Err(PolyMapError::Input(format!("maps of sizes {} and {}", f.n(), g.n())));
    }
    let bound = u32::try_from(degree_bound).map_err(|_| PolyMapError::Input("degree bound too large".into()))?;
    let fg = f.compose(g)?.sub(&PolyMap::identity(g.vars()))?;
    let gf = g.compose(f)?.sub(&PolyMap::identity(f.vars()))?;
    let fg_low = fg.truncate(bound);
    let gf_low = gf.truncate(bound);
    let discarded_nonzero = fg_low != fg || gf_low != gf;
    let status = if !fg_low.is_zero() || !gf_low.is_zero() {
        AutomorphismStatus::Fail
    } else if discarded_nonzero {
        AutomorphismStatus::TruncatedOk
    } else {
        AutomorphismStatus::Exact
    };
    let show = |m: &PolyMap| m.coords().iter().map(ToString::to_string).collect();
    Ok(AutomorphismReport {
        status,
        degree_bound,
        residual_f_after_g: show(&fg_low),
        residual_g_after_f: show(&gf_low),
        discarded_nonzero,
    })
}

/// `d·(d(p−1)+1)` when the Yagzhev index `p ≤ p_max` is found.
pub fn default_truncation(alg: &MultilinearAlgebra, p_max: usize) -> Option<usize> {
    let d = alg.arity();
    yagzhev_index(alg, p_max)
        .index
        .map(|p| d * yagzhev_window_top(d, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JacobianVerdict {
    Pass,
    Fail,
    /// No Yagzhev index within the bound, so nothing is asserted.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianCheckReport {
    pub d: usize,
    pub yagzhev_index: Option<usize>,
    pub engel_bound: Option<usize>,
    pub engel_index: Option<usize>,
    /// `(d−1)(n−1)+1 ≤ d(d−1)·floor((p−2)/(d−1))+1`, when both indices exist.
    pub degree_inequality: Option<bool>,
    /// Determinant of the Jacobian of `Id − H`, reported, not asserted.
    pub jacobian_det: String,
    pub jacobian_det_is_one: bool,
    pub verdict: JacobianVerdict,
}

/// Finds the Yagzhev index `p ≤ p_max`, then requires Engel nilpotence
/// within `d·floor((p−2)/(d−1)) + 1`.
pub fn jacobian_theorem_check(alg: &MultilinearAlgebra, p_max: usize) -> JacobianCheckReport {
    let d = alg.arity();
    let f = map_of_algebra(alg);
    let det = jacobian_det(&f);
    let jacobian_det_is_one = det.as_constant().is_some_and(|c| c == crate::exactmath::rat(1));
    let p = yagzhev_index(alg, p_max).index;
    let (engel_bound, engel, inequality, verdict) = match p {
        None => (None, None, None, JacobianVerdict::Inconclusive),
        Some(p) => {
            let floor = (p - 2) / (d - 1);
            let bound = d * floor + 1;
            let n = engel_index(alg, bound).index;
            let inequality = n.map(|n| (d - 1) * (n - 1) <= d * (d - 1) * floor);
            let verdict = if n.is_some() {
                JacobianVerdict::Pass
            } else {
                JacobianVerdict::Fail
            };
            (Some(bound), n, inequality, verdict)
        }
    };
    JacobianCheckReport {
        d,
        yagzhev_index: p,
        engel_bound,
        engel_index: engel,
        degree_inequality: inequality,
        jacobian_det: det.to_string(),
        jacobian_det_is_one,
        verdict,
    }
}
