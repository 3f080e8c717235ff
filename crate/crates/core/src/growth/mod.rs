//! Growth rates of endomorphisms.
//!
//! `K_m = max_i |α^m(s_i)|` is submultiplicative, so `K_m^{1/m}` converges to
//! its infimum, the growth rate. [`km_table`] computes `K_1..K_M` exactly and
//! reports two readings of the limit:
//!
//! * `inf_bound`, the minimum of `K_m^{1/m}` over the computed prefix. The
//!   infimum over a prefix is at least the infimum over all `m`, so this is an
//!   upper bound on the growth rate.
//! * `ratio_estimate`, the geometric mean of the one-step ratios
//!   `K_{m+1}/K_m` over the last even-length window of at most `M/2` steps.
//!   It converges much faster than the roots when `K_m ≈ c·λ^m`, and the
//!   even window absorbs period-two oscillation.
//!
//! Abelian kinds also have an exact path, [`gr_exact_abelian`], through the
//! spectral radius.

mod distortion;
mod exact;
mod probe;

pub use distortion::{distortion_certificate, distortion_rate, CertificateRow, DistortionRate};
pub use exact::{evaluate, gr_exact_abelian, has_exact_path, gr_nilpotent, gr_power_check, Evaluation, EvaluationMethod, NilpotentReport};
pub use probe::{extension_bound_check, hr_probe, ExtensionReport, HrOutcome, HrVerdict, DEFAULT_HR_M, DEFAULT_MARGIN};

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::group::{Element, Group, LengthFunction, LengthMode};
use crate::matrix::ln_abs;
use crate::oracle::{enumerate_ball, BfsOptions};
use crate::par::Execution;

/// Which length function produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthKind {
    Exact,
    Quasi,
    Bfs { radius: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ExactSpectral,
    KmSequence(LengthKind),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Status {
    /// `spread` is the gap between the full-window and half-window ratio estimates.
    Converged { spread: f64 },
    /// The length oracle ran out of range; only `K_1..K_valid_m` are reliable.
    Truncated { valid_m: usize },
    /// Some `K_m = 0`: the map is eventually trivial and the growth rate is 0.
    Trivial,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ExactSpectral => write!(f, "exact_spectral"),
            Method::KmSequence(LengthKind::Exact) => write!(f, "km_sequence(exact)"),
            Method::KmSequence(LengthKind::Quasi) => write!(f, "km_sequence(quasi)"),
            Method::KmSequence(LengthKind::Bfs { radius }) => write!(f, "km_sequence(bfs, radius {radius})"),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Converged { spread } => write!(f, "converged (spread {})", fmt_real(*spread)),
            Status::Truncated { valid_m } => write!(f, "truncated (valid up to m = {valid_m})"),
            Status::Trivial => write!(f, "trivial"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    /// `K_1..K_M`.
    pub k: Vec<BigInt>,
    /// `K_m^{1/m}`, with `0^{1/m} = 0`.
    pub roots: Vec<f64>,
    pub inf_bound: f64,
    pub ratio_estimate: f64,
    pub method: Method,
    pub status: Status,
}

/// `x^{1/m}` computed in log space; `0` maps to `0`.
pub fn root(x: &BigInt, m: usize) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        (ln_abs(x) / m as f64).exp()
    }
}

/// Geometric mean of one-step ratios over the last even window of at most `len/2` steps.
pub fn ratio_estimate(k: &[BigInt]) -> f64 {
    window_estimate(k, window(k.len()))
}

fn window(len: usize) -> usize {
    let half = len / 2;
    if half >= 2 {
        half - half % 2
    } else {
        half
    }
}

fn window_estimate(k: &[BigInt], w: usize) -> f64 {
    let Some(last) = k.last() else { return 0.0 };
    if last.is_zero() {
        return 0.0;
    }
    if w == 0 {
        // a single term: K_1 itself
        return root(last, k.len());
    }
    let first = &k[k.len() - 1 - w];
    ((ln_abs(last) - ln_abs(first)) / w as f64).exp()
}

impl GrowthEstimate {
    /// Builds the derived columns from `K_1..K_M`.
    pub fn from_table(k: Vec<BigInt>, method: Method, truncated: bool) -> Self {
        let roots: Vec<f64> = k.iter().enumerate().map(|(i, x)| root(x, i + 1)).collect();
        let inf_bound = roots.iter().copied().fold(f64::INFINITY, f64::min);
        let trivial = k.iter().any(Zero::is_zero);
        let ratio = if trivial { 0.0 } else { ratio_estimate(&k) };
        let status = if trivial {
            Status::Trivial
        } else if truncated {
            Status::Truncated { valid_m: k.len() }
        } else {
            let w = window(k.len());
            let spread = (ratio - window_estimate(&k, w / 2)).abs();
            Status::Converged { spread }
        };
        GrowthEstimate {
            inf_bound: if trivial { 0.0 } else if k.is_empty() { f64::NAN } else { inf_bound },
            ratio_estimate: ratio,
            roots,
            k,
            method,
            status,
        }
    }

    pub fn max_m(&self) -> usize {
        self.k.len()
    }

    /// TSV with columns `m`, `K_m`, `root`, `inf_bound`, `ratio_estimate`,
    /// where the last two are computed on the prefix `K_1..K_m`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("m\tK_m\troot\tinf_bound\tratio_estimate\n");
        let mut inf = f64::INFINITY;
        for (i, (k, r)) in self.k.iter().zip(&self.roots).enumerate() {
            inf = inf.min(*r);
            let prefix = &self.k[..=i];
            let est = if prefix.iter().any(Zero::is_zero) { 0.0 } else { ratio_estimate(prefix) };
            s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", i + 1, k, fmt_real(*r), fmt_real(inf), fmt_real(est)));
        }
        s
    }
}

/// Options for K_m tables.
#[derive(Clone, Copy, Debug, Default)]
pub struct KmOptions {
    pub execution: Execution,
    pub bfs: Option<BfsOptions>,
}

/// `K_1..K_M` under an explicit length function.
///
/// Orbits of distinct generators are computed independently. If the length
/// function reports an element out of range, the table stops at the last `m`
/// for which every generator was measured and the status is `Truncated`.
pub fn km_table_with(
    alpha: &Endomorphism,
    group: &Group,
    max_m: usize,
    length: &dyn LengthFunction,
    kind: LengthKind,
    execution: Execution,
) -> Result<GrowthEstimate> {
    if max_m == 0 {
        return Err(Error::InvalidArgument("max_m must be at least 1".into()));
    }
    alpha.validate(group)?;
    let gens = group.generators();
    let orbits: Vec<Result<(Vec<BigInt>, bool)>> = execution.map(&gens, |s| orbit_lengths(alpha, group, s, max_m, length));
    let mut valid = max_m;
    let mut columns = Vec::with_capacity(gens.len());
    for o in orbits {
        let (lengths, _) = o?;
        valid = valid.min(lengths.len());
        columns.push(lengths);
    }
    let k: Vec<BigInt> = (0..valid)
        .map(|m| columns.iter().map(|c| c[m].clone()).max().unwrap_or_else(BigInt::zero))
        .collect();
    if k.is_empty() {
        return Err(Error::OutOfRange { element: "α(s_i)".into(), radius: 0 });
    }
    Ok(GrowthEstimate::from_table(k, Method::KmSequence(kind), valid < max_m))
}

/// Lengths `|α^m(s)|` for `m = 1..`, stopping early at the first out-of-range element.
pub fn orbit_lengths(
    alpha: &Endomorphism,
    group: &Group,
    s: &Element,
    max_m: usize,
    length: &dyn LengthFunction,
) -> Result<(Vec<BigInt>, bool)> {
    let mut x = s.clone();
    let mut out = Vec::with_capacity(max_m);
    let id = group.identity();
    for _ in 0..max_m {
        x = alpha.apply(group, &x)?;
        match length.length(&x) {
            Ok(l) => out.push(l.value),
            Err(Error::OutOfRange { .. }) => return Ok((out, true)),
            Err(e) => return Err(e),
        }
        if x == id {
            // the orbit stays at the identity
            out.resize(max_m, BigInt::zero());
            break;
        }
    }
    Ok((out, false))
}

/// `K_1..K_M` with the length function chosen by the group's [`LengthMode`].
pub fn km_table(alpha: &Endomorphism, group: &Group, max_m: usize, options: KmOptions) -> Result<GrowthEstimate> {
    with_length(group, options, |length, kind| km_table_with(alpha, group, max_m, length, kind, options.execution))
}

/// Runs `f` with the length function selected by the group's mode, enumerating a ball if needed.
pub fn with_length<T>(
    group: &Group,
    options: KmOptions,
    f: impl FnOnce(&dyn LengthFunction, LengthKind) -> Result<T>,
) -> Result<T> {
    match *group.length_mode() {
        LengthMode::Exact => f(group, LengthKind::Exact),
        LengthMode::Quasi => f(group, LengthKind::Quasi),
        LengthMode::BfsOracle { radius } => {
            let census = enumerate_ball(group, radius, options.bfs.unwrap_or_default())?;
            f(&census, LengthKind::Bfs { radius })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::big;

    #[test]
    fn paper_example_table() {
        let z2 = Group::free_abelian(2);
        let a = Endomorphism::matrix(&[vec![0, 2], vec![1, 0]]).unwrap();
        let t = km_table(&a, &z2, 4, KmOptions::default()).unwrap();
        assert_eq!(t.k, vec![big(2), big(2), big(4), big(4)]);
        assert!((t.inf_bound - 2f64.sqrt()).abs() < 1e-12);
        assert!((t.roots[2] - 4f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let t = km_table(&a, &z2, 20, KmOptions::default()).unwrap();
        assert!((t.ratio_estimate - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn identity_and_trivial() {
        let f2 = Group::free(2);
        let id = Endomorphism::identity(&f2).unwrap();
        let t = km_table(&id, &f2, 5, KmOptions::default()).unwrap();
        assert_eq!(t.k, vec![big(1); 5]);
        assert_eq!(t.ratio_estimate, 1.0);
        let nil = Endomorphism::matrix(&[vec![0, 1], vec![0, 0]]).unwrap();
        let t = km_table(&nil, &Group::free_abelian(2), 5, KmOptions::default()).unwrap();
        assert_eq!(t.status, Status::Trivial);
        assert_eq!(t.ratio_estimate, 0.0);
    }

    #[test]
    fn fibonacci_ratio() {
        let f2 = Group::free(2);
        let fib = Endomorphism::words(&["ab", "a"], 2).unwrap();
        let t = km_table(&fib, &f2, 10, KmOptions::default()).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((t.ratio_estimate - golden).abs() < 0.02);
    }

    #[test]
    fn bfs_truncation() {
        let z2 = Group::free_abelian(2).with_length_mode(LengthMode::BfsOracle { radius: 10 });
        let a = Endomorphism::Matrix(crate::IntMatrix::diagonal(&[2, 3]));
        let t = km_table(&a, &z2, 6, KmOptions::default()).unwrap();
        assert_eq!(t.status, Status::Truncated { valid_m: 2 });
        assert_eq!(t.k, vec![big(3), big(9)]);
    }
}
