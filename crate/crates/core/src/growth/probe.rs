use num_bigint::BigInt;
use num_traits::Zero;

use super::{evaluate, orbit_lengths, ratio_estimate, root, with_length, KmOptions};
use crate::endo::{Endomorphism, Subgroup};
use crate::error::{Error, Result};
use crate::group::{Element, Group};

pub const DEFAULT_MARGIN: f64 = 0.05;
pub const DEFAULT_HR_M: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HrVerdict {
    In,
    Out,
    BoundaryUnknown,
}

/// Sampled evidence on whether an element's orbit grows at rate at most `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct HrOutcome {
    pub element: Element,
    pub r: f64,
    pub margin: f64,
    pub verdict: HrVerdict,
    /// Ratio estimate of the orbit growth; 0 for orbits that reach the identity.
    pub estimate: f64,
    /// `|α^m γ|^{1/m}` for the sampled `m`.
    pub roots: Vec<f64>,
}

/// Classifies `γ` against `H_r` from the orbit lengths `|α^m γ|`, `m ≤ M`.
///
/// `In` needs an estimate at most `r − margin`, `Out` at least `r + margin`.
/// Anything in between, or an orbit cut short by the length oracle, is
/// `BoundaryUnknown`.
pub fn hr_probe(
    alpha: &Endomorphism,
    group: &Group,
    gamma: &Element,
    r: f64,
    max_m: usize,
    margin: f64,
    options: KmOptions,
) -> Result<HrOutcome> {
    if r.is_nan() || r <= 1.0 {
        return Err(Error::InvalidArgument(format!("r must exceed 1, got {r}")));
    }
    if max_m < 4 {
        return Err(Error::InvalidArgument(format!("at least 4 orbit terms are needed, got {max_m}")));
    }
    if !group.contains(gamma) {
        return Err(Error::KindMismatch { expected: group.describe(), found: gamma.to_string() });
    }
    alpha.validate(group)?;
    let (lengths, truncated) = with_length(group, options, |len, _| orbit_lengths(alpha, group, gamma, max_m, len))?;
    let roots: Vec<f64> = lengths.iter().enumerate().map(|(i, x)| root(x, i + 1)).collect();
    let estimate = orbit_rate(&lengths);
    let verdict = if truncated && lengths.len() < 4 {
        HrVerdict::BoundaryUnknown
    } else if estimate <= r - margin {
        HrVerdict::In
    } else if estimate >= r + margin {
        HrVerdict::Out
    } else {
        HrVerdict::BoundaryUnknown
    };
    Ok(HrOutcome { element: gamma.clone(), r, margin, verdict, estimate, roots })
}

fn orbit_rate(lengths: &[BigInt]) -> f64 {
    match lengths.last() {
        None => f64::NAN,
        Some(x) if x.is_zero() => 0.0,
        // a zero inside the window would make the ratio meaningless
        Some(_) => {
            let start = lengths.iter().rposition(Zero::is_zero).map_or(0, |i| i + 1);
            ratio_estimate(&lengths[start..])
        }
    }
}

/// `GR(α)`, `GR(α|_H)` and `GR(α on Γ/H)` with the two inequalities between them.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionReport {
    pub full: f64,
    pub sub: f64,
    pub quotient: f64,
    pub tolerance: f64,
    /// `GR(α on Γ/H) ≤ GR(α)`.
    pub quotient_le_full: bool,
    /// `GR(α) ≤ max(GR(α|_H), GR(α on Γ/H))`.
    pub full_le_max: bool,
    /// `GR(α) = max(GR(α|_H), GR(α on Γ/H))`.
    pub equality: bool,
}

/// Evaluates both extension inequalities for an invariant normal subgroup.
///
/// Fails with `NotInvariant` when `α(H) ⊄ H`.
pub fn extension_bound_check(
    alpha: &Endomorphism,
    group: &Group,
    h: &Subgroup,
    max_m: usize,
    tolerance: f64,
    options: KmOptions,
) -> Result<ExtensionReport> {
    let (sub_group, sub_map) = alpha.restrict(group, h)?;
    let (quot_group, quot_map) = alpha.induce_on_quotient(group, h)?;
    let full = evaluate(alpha, group, max_m, options)?.value;
    let sub = evaluate(&sub_map, &sub_group, max_m, options)?.value;
    let quotient = evaluate(&quot_map, &quot_group, max_m, options)?.value;
    let max = sub.max(quotient);
    Ok(ExtensionReport {
        full,
        sub,
        quotient,
        tolerance,
        quotient_le_full: quotient <= full + tolerance,
        full_le_max: full <= max + tolerance,
        equality: (full - max).abs() <= tolerance,
    })
}
