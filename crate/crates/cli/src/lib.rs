//! Command implementations behind the `multinil` binary.
//!
//! Each command returns an [`Outcome`]: an exit status, a text rendering and
//! one JSON document. Everything but the `timing` field of a document is a
//! deterministic function of the inputs.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use multinil::algebra::{engel_index, gerstenhaber_index, yagzhev_index, MultilinearAlgebra, NilReport};
use multinil::exactmath::det;
use multinil::formats::{emit_json, parse_algebra, parse_map, FormatError, MapDoc};
use multinil::freenil::{
    theorem_engel_bound, verify_binary_claim, verify_main_theorem, FreeNilError, TheoremReport, Timing, Verdict,
    VerifyOptions,
};
use multinil::polymap::{
    default_truncation, formal_inverse, jacobian, jacobian_theorem_check, map_of_algebra, polarize,
    split_identity_minus, verify_automorphism, AutomorphismReport, AutomorphismStatus, JacobianCheckReport,
    JacobianVerdict, PolyMap, PolyMapError,
};

/// Process exit status; the numeric values are a stable contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Fail = 1,
    InputError = 2,
    ResourceCap = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn of_verdict(v: Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Ok,
            Verdict::Fail => Status::Fail,
            Verdict::NotAttempted => Status::ResourceCap,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
    pub document: String,
}

/// Parse, validation and bad-parameter failures; all exit with status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    File { path: String, source: Box<FormatError> },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

impl From<PolyMapError> for CliError {
    fn from(e: PolyMapError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FreeNilError> for CliError {
    fn from(e: FreeNilError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_algebra(path: &Path) -> Result<MultilinearAlgebra, CliError> {
    parse_algebra(&read(path)?).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source: Box::new(source),
    })
}

pub fn load_map(path: &Path) -> Result<PolyMap, CliError> {
    parse_map(&read(path)?).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source: Box::new(source),
    })
}

fn timed<T>(label: &str, timing: &mut Vec<Timing>, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timing.push(Timing {
        check: label.into(),
        wall_time_us: start.elapsed().as_micros() as u64,
    });
    out
}

/// The serialized name of a unit enum variant.
fn label<T: Serialize>(v: T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn show(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |n| n.to_string())
}

#[derive(Clone, Copy, Debug)]
pub struct CheckBounds {
    pub engel_max: usize,
    pub yagzhev_max: usize,
    pub gerst_max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub arity: usize,
    pub dim: usize,
    pub engel: Option<usize>,
    pub yagzhev: Option<usize>,
    pub gerstenhaber: Option<usize>,
    /// `engel ≤ d·floor((p−2)/(d−1)) + 1` when both indices were found.
    pub engel_within_theorem_bound: Option<bool>,
    pub details: Vec<NilReport>,
    pub timing: Vec<Timing>,
}

pub fn check(alg: &MultilinearAlgebra, bounds: CheckBounds) -> Result<Outcome, CliError> {
    if bounds.engel_max < 1 || bounds.gerst_max < 1 || bounds.yagzhev_max < 2 {
        return Err(CliError::Input(
            "bounds must satisfy engel-max ≥ 1, gerst-max ≥ 1, yagzhev-max ≥ 2".into(),
        ));
    }
    let mut timing = Vec::new();
    let start = Instant::now();
    let (engel, (yagzhev, gerst)) = rayon::join(
        || engel_index(alg, bounds.engel_max),
        || {
            rayon::join(
                || yagzhev_index(alg, bounds.yagzhev_max),
                || gerstenhaber_index(alg, bounds.gerst_max),
            )
        },
    );
    timing.push(Timing {
        check: "indices".into(),
        wall_time_us: start.elapsed().as_micros() as u64,
    });
    let d = alg.arity();
    let within = match (engel.index, yagzhev.index) {
        (Some(n), Some(p)) => Some(n <= theorem_engel_bound(d, p)),
        _ => None,
    };
    let report = CheckReport {
        command: "check".into(),
        arity: d,
        dim: alg.dim(),
        engel: engel.index,
        yagzhev: yagzhev.index,
        gerstenhaber: gerst.index,
        engel_within_theorem_bound: within,
        details: vec![engel, yagzhev, gerst],
        timing,
    };
    let mut text = format!("algebra: arity {}, dimension {}\n", report.arity, report.dim);
    for r in &report.details {
        let _ = write!(text, "  {:<13} {}", label(r.kind), show(r.index));
        match (&r.window, &r.witness) {
            (Some((lo, hi)), _) => {
                let _ = writeln!(text, "  (window {lo}..{hi})");
            }
            (None, Some(w)) => {
                let _ = writeln!(text, "  (not within {}; {w})", r.bound);
            }
            (None, None) => {
                let _ = writeln!(text, "  (not within {})", r.bound);
            }
        }
    }
    if let Some(ok) = within {
        let _ = writeln!(text, "  engel within theorem bound: {ok}");
    }
    Ok(Outcome {
        status: Status::Ok,
        text,
        document: emit_json(&report),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvertReport {
    pub command: String,
    pub n: usize,
    /// Degree of `H` in `F = Id − H`; absent when `H = 0`.
    pub h_degree: Option<u32>,
    pub degree_bound: usize,
    /// `"user"`, `"yagzhev-window"` or `"identity"`.
    pub degree_source: String,
    pub inverse: MapDoc,
    pub verification: AutomorphismReport,
    pub timing: Vec<Timing>,
}

/// Truncated inverse of `F = Id − H` and its composition check. Without
/// `degree`, the bound comes from the Yagzhev window of the polarized `H`.
pub fn invert(f: &PolyMap, degree: Option<usize>, p_max: usize) -> Result<(Outcome, PolyMap), CliError> {
    let h = split_identity_minus(f)?;
    let (bound, source) = match (degree, &h) {
        (Some(0), _) => return Err(CliError::Input("--degree must be at least 1".into())),
        (Some(b), _) => (b, "user"),
        (None, None) => (1, "identity"),
        (None, Some(h)) => {
            let alg = polarize(h)?;
            let b = default_truncation(&alg, p_max).ok_or_else(|| {
                CliError::Input(format!(
                    "no Yagzhev index up to {p_max}; give the truncation degree with --degree"
                ))
            })?;
            (b, "yagzhev-window")
        }
    };
    let mut timing = Vec::new();
    let g = timed("inverse", &mut timing, || formal_inverse(f, bound))?;
    let verification = timed("verification", &mut timing, || verify_automorphism(f, &g, bound))?;
    let status = match verification.status {
        AutomorphismStatus::Fail => Status::Fail,
        _ => Status::Ok,
    };
    let report = InvertReport {
        command: "invert".into(),
        n: f.n(),
        h_degree: h.as_ref().map(|h| h.degree()),
        degree_bound: bound,
        degree_source: source.into(),
        inverse: MapDoc::from_map(&g),
        verification,
        timing,
    };
    let mut text = String::new();
    let _ = writeln!(text, "inverse through degree {bound} ({source}):");
    for (i, c) in g.coords().iter().enumerate() {
        let _ = writeln!(text, "  G{} = {c}", i + 1);
    }
    let v = &report.verification;
    let _ = writeln!(
        text,
        "verification: {}{}",
        label(v.status),
        if v.discarded_nonzero { " (terms above the bound are nonzero)" } else { "" }
    );
    Ok((
        Outcome {
            status,
            text,
            document: emit_json(&report),
        },
        g,
    ))
}

/// Either `d, p` or the binary claim.
#[derive(Clone, Copy, Debug)]
pub enum TheoremTarget {
    Instance { d: usize, p: usize },
    BinaryClaim,
}

pub fn verify_theorem(target: TheoremTarget, opts: &VerifyOptions) -> Result<Outcome, CliError> {
    if opts.max_basis_trees < 1 {
        return Err(CliError::Input("the basis cap must be at least 1".into()));
    }
    let report = match target {
        TheoremTarget::Instance { d, p } => {
            if d < 2 || p < 2 {
                return Err(CliError::Input(format!("need d ≥ 2 and p ≥ 2, got d = {d}, p = {p}")));
            }
            verify_main_theorem(d, p, opts)?
        }
        TheoremTarget::BinaryClaim => verify_binary_claim(opts)?,
    };
    Ok(Outcome {
        status: Status::of_verdict(report.verdict),
        text: theorem_text(&report),
        document: emit_json(&report),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::NotAttempted => "NOT ATTEMPTED",
    }
}

fn theorem_text(r: &TheoremReport) -> String {
    let mut text = String::new();
    let _ = write!(text, "{}: d = {}", r.check, r.d);
    if let Some(p) = r.p {
        let _ = write!(text, ", p = {p}");
    }
    if let Some(n) = r.n {
        let _ = write!(text, ", n = {n}");
    }
    let _ = writeln!(text, ", generators T_j for j in {:?}", r.generators);
    for c in &r.records {
        let _ = write!(
            text,
            "  [{}] {}: degree {}, dimension {}",
            verdict_name(c.verdict),
            c.check,
            c.degree,
            c.space_dim
        );
        if let Some(rank) = c.ideal_rank {
            let _ = write!(text, ", ideal rank {rank}");
        }
        if let Some(digest) = &c.certificate_digest {
            let _ = write!(text, ", certificate {}", &digest[..16.min(digest.len())]);
        }
        if let Some(detail) = &c.detail {
            let _ = write!(text, " ({detail})");
        }
        text.push('\n');
    }
    if let Some(m) = &r.minimality_probe {
        let _ = writeln!(
            text,
            "  minimality probe: {}-Engel element {} the ideal at degree {}",
            m.n,
            if m.member { "lies in" } else { "is not in" },
            m.degree
        );
    }
    let total: u64 = r.timing.iter().map(|t| t.wall_time_us).sum();
    let _ = writeln!(text, "verdict: {} ({:.3} s)", verdict_name(r.verdict), total as f64 / 1e6);
    text
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub command: String,
    pub n: usize,
    pub matrix: Vec<Vec<String>>,
    pub det: String,
    pub det_is_one: bool,
    /// Engel bound check on the polarized algebra, when `F = Id − H` with
    /// `H` homogeneous.
    pub theorem: Option<JacobianCheckReport>,
}

pub enum JacobianInput {
    Algebra(MultilinearAlgebra),
    Map(PolyMap),
}

pub fn jacobian_report(input: JacobianInput, p_max: usize) -> Result<Outcome, CliError> {
    if p_max < 2 {
        return Err(CliError::Input("--p-max must be at least 2".into()));
    }
    let (f, alg) = match input {
        JacobianInput::Algebra(alg) => (map_of_algebra(&alg), Some(alg)),
        JacobianInput::Map(f) => {
            let alg = split_identity_minus(&f).ok().flatten().map(|h| polarize(&h)).transpose()?;
            (f, alg)
        }
    };
    let j = jacobian(&f);
    let dj = det(&j).map_err(|e| CliError::Input(e.to_string()))?;
    let theorem = alg.map(|a| jacobian_theorem_check(&a, p_max));
    let matrix: Vec<Vec<String>> = (0..j.nrows())
        .map(|r| (0..j.ncols()).map(|c| j.get(r, c).to_string()).collect())
        .collect();
    let report = JacobianReport {
        command: "jacobian".into(),
        n: f.n(),
        det_is_one: dj.as_constant().is_some_and(|c| c == multinil::exactmath::rat(1)),
        det: dj.to_string(),
        matrix,
        theorem,
    };
    let mut text = String::from("J_F =\n");
    for row in &report.matrix {
        let _ = writeln!(text, "  [{}]", row.join(", "));
    }
    let _ = writeln!(text, "det J_F = {}", report.det);
    let mut status = Status::Ok;
    if let Some(t) = &report.theorem {
        let _ = writeln!(
            text,
            "yagzhev index {}, engel index {}, theorem bound {}: {}",
            show(t.yagzhev_index),
            show(t.engel_index),
            show(t.engel_bound),
            label(t.verdict)
        );
        if t.verdict == JacobianVerdict::Fail {
            status = Status::Fail;
        }
    }
    Ok(Outcome {
        status,
        text,
        document: emit_json(&report),
    })
}
