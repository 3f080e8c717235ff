use super::{km_table, GrowthEstimate, KmOptions};
use crate::endo::Endomorphism;
use crate::error::{Error, Result};
use crate::group::{Group, GroupKind};
use crate::matrix::{IntMatrix, DEFAULT_TOLERANCE};

/// Exact growth rate on an abelian kind: the spectral radius of the matrix.
///
/// Finitely generated abelian quotients split as free part plus torsion. The
/// torsion subgroup is invariant, so the free block of the matrix is the map
/// on the torsion-free quotient. Torsion orbits are bounded, which gives
/// `max(ρ(free), 1)` unless α is eventually zero, where the rate is 0.
pub fn gr_exact_abelian(alpha: &Endomorphism, group: &Group) -> Result<f64> {
    alpha.validate(group)?;
    match (alpha, group.kind()) {
        (Endomorphism::Matrix(a), GroupKind::FreeAbelian { .. } | GroupKind::Sublattice(_)) => radius(a),
        (Endomorphism::Matrix(a), GroupKind::AbelianQuotient(q)) => {
            let f = q.free_rank();
            let idx: Vec<usize> = (0..f).collect();
            let rho = radius(&a.select(&idx, &idx))?;
            if rho >= 1.0 {
                return Ok(rho);
            }
            let steps = f as u32 + q.torsion_order().bits() as u32 + 1;
            let power = alpha.power(group, steps)?;
            Ok(if power.is_zero_map(group)? { 0.0 } else { 1.0 })
        }
        (Endomorphism::Words(images), GroupKind::Free { rank: 1 }) => {
            // a ↦ a^k
            Ok(images[0].letters().iter().map(|&l| l.signum()).sum::<i32>().abs() as f64)
        }
        (Endomorphism::Words(_), GroupKind::Free { rank: 0 }) => Ok(0.0),
        (Endomorphism::Product(x, y), GroupKind::DirectProduct(a, b)) if has_exact_path(group) => {
            Ok(gr_exact_abelian(x, a)?.max(gr_exact_abelian(y, b)?))
        }
        _ => Err(Error::Unsupported(format!("exact growth rate on {}", group.describe()))),
    }
}

/// Whether [`gr_exact_abelian`] can handle this group kind.
pub fn has_exact_path(group: &Group) -> bool {
    match group.kind() {
        GroupKind::DirectProduct(a, b) => has_exact_path(a) && has_exact_path(b),
        GroupKind::Free { rank } => *rank <= 1,
        _ => group.is_abelian(),
    }
}

fn radius(a: &IntMatrix) -> Result<f64> {
    if a.rows() == 0 {
        return Ok(0.0);
    }
    a.spectral_radius(DEFAULT_TOLERANCE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvaluationMethod {
    ExactSpectral,
    RatioEstimate,
}

/// A single growth-rate value and how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub method: EvaluationMethod,
    pub table: Option<GrowthEstimate>,
}

/// The exact value on abelian kinds, otherwise the ratio estimate of a `K_m` table.
pub fn evaluate(alpha: &Endomorphism, group: &Group, max_m: usize, options: KmOptions) -> Result<Evaluation> {
    if has_exact_path(group) {
        match gr_exact_abelian(alpha, group) {
            Ok(value) => return Ok(Evaluation { value, method: EvaluationMethod::ExactSpectral, table: None }),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let table = km_table(alpha, group, max_m, options)?;
    Ok(Evaluation { value: table.ratio_estimate, method: EvaluationMethod::RatioEstimate, table: Some(table) })
}

/// `(GR(αⁿ), GR(α)ⁿ)`, both through [`evaluate`].
pub fn gr_power_check(alpha: &Endomorphism, group: &Group, n: u32, max_m: usize, options: KmOptions) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let power = alpha.power(group, n)?;
    let lhs = evaluate(&power, group, max_m, options)?.value;
    let rhs = evaluate(alpha, group, max_m, options)?.value.powi(n as i32);
    Ok((lhs, rhs))
}

/// Layer values of a Heisenberg endomorphism and the two ways of combining them.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentReport {
    /// `GR` on `Γ_j/Γ_{j+1}` for `j = 1, 2`.
    pub layers: Vec<f64>,
    /// `max_j layer_j^{1/j}`.
    pub combined: f64,
    /// `max_j layer_j`.
    pub without_exponents: f64,
}

pub fn gr_nilpotent(alpha: &Endomorphism, group: &Group) -> Result<NilpotentReport> {
    if !matches!((alpha, group.kind()), (Endomorphism::Heisenberg { .. }, GroupKind::Heisenberg(_))) {
        return Err(Error::Unsupported(format!("nilpotent layers of {alpha} on {}", group.describe())));
    }
    let mut layers = Vec::with_capacity(2);
    for j in 1..=2 {
        let (layer, map) = alpha.on_layer(group, j)?;
        layers.push(gr_exact_abelian(&map, &layer)?);
    }
    let combined = layers.iter().enumerate().map(|(i, v)| v.powf(1.0 / (i + 1) as f64)).fold(0.0, f64::max);
    let without_exponents = layers.iter().copied().fold(0.0, f64::max);
    Ok(NilpotentReport { layers, combined, without_exponents })
}
