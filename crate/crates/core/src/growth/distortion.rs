use num_bigint::BigInt;

use super::{GrowthEstimate, LengthKind, Method};
use crate::error::{Error, Result};
use crate::matrix::DEFAULT_TOLERANCE;
use crate::oracle::DistortionProfile;
use crate::par::Execution;
use crate::products::SemidirectDescriptor;

/// The action growth of a semidirect product `Zʳ ⋊ Zˢ`.
///
/// `K_m` is the largest L1 length of `φ(q_{i₁})⋯φ(q_{i_m}) h` over words of
/// length `m` in the quotient generators and their inverses and over base
/// generators `h`. Since the quotient is abelian, such a word acts as
/// `φ(e)` for its exponent vector `e`, and the reachable `e` are those with
/// `‖e‖₁ ≤ m` and `‖e‖₁ ≡ m (mod 2)`. The L1 length of the worst base
/// generator is the largest column sum of `φ(e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionRate {
    pub k: Vec<BigInt>,
    /// `max` of the spectral radii of the generator actions and their inverses.
    pub k_exact: f64,
    pub estimate: GrowthEstimate,
    /// `k_exact^{1/2}`, the predicted limit of `ρ(n)^{1/n}`.
    pub sqrt_k: f64,
}

pub fn distortion_rate(desc: &SemidirectDescriptor, max_m: usize, execution: Execution) -> Result<DistortionRate> {
    if max_m == 0 {
        return Err(Error::InvalidArgument("max_m must be at least 1".into()));
    }
    let s = desc.quotient_rank();
    if s == 0 {
        return Err(Error::InvalidArgument("the quotient has no generators".into()));
    }
    let ms: Vec<usize> = (1..=max_m).collect();
    let k: Vec<BigInt> = execution
        .map(&ms, |&m| -> Result<BigInt> {
            let mut best = BigInt::from(0);
            for e in exponent_vectors(s, m) {
                let norm = desc.phi(&e)?.max_column_l1();
                if norm > best {
                    best = norm;
                }
            }
            Ok(best)
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let mut k_exact: f64 = 0.0;
    for i in 0..s {
        for inverse in [false, true] {
            k_exact = k_exact.max(desc.generator_action(i, inverse).spectral_radius(DEFAULT_TOLERANCE)?);
        }
    }
    let estimate = GrowthEstimate::from_table(k.clone(), Method::KmSequence(LengthKind::Exact), false);
    Ok(DistortionRate { k, k_exact, estimate, sqrt_k: k_exact.sqrt() })
}

/// All `e ∈ Zˢ` with `‖e‖₁ ≤ m` and `‖e‖₁ ≡ m (mod 2)`.
fn exponent_vectors(s: usize, m: usize) -> Vec<Vec<BigInt>> {
    fn rec(s: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == s {
            out.push(prefix.clone());
            return;
        }
        for x in -budget..=budget {
            prefix.push(x);
            rec(s, budget - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(s, m as i64, &mut Vec::with_capacity(s), &mut raw);
    raw.into_iter()
        .filter(|e| (m as i64 - e.iter().map(|x| x.abs()).sum::<i64>()) % 2 == 0)
        .map(|e| e.into_iter().map(BigInt::from).collect())
        .collect()
}

/// One row of the lower-bound check `ρ(2r+1) ≥ K_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRow {
    pub r: usize,
    pub rho: BigInt,
    pub k_r: BigInt,
    pub holds: bool,
}

/// Conjugating a base generator by a word of length `r` gives an element of
/// ambient length at most `2r+1` whose base length is the word's action on
/// it, so `ρ(2r+1) ≥ K_r` for every `r` covered by both tables.
pub fn distortion_certificate(profile: &DistortionProfile, rate: &DistortionRate) -> Vec<CertificateRow> {
    (1..=rate.k.len())
        .take_while(|r| 2 * r + 1 < profile.rho.len())
        .map(|r| {
            let rho = profile.rho[2 * r + 1].clone();
            let k_r = rate.k[r - 1].clone();
            CertificateRow { r, holds: rho >= k_r, rho, k_r }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{big, IntMatrix};

    fn cat_map() -> SemidirectDescriptor {
        SemidirectDescriptor::new(2, vec![IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()]).unwrap()
    }

    #[test]
    fn exponent_vector_counts() {
        assert_eq!(exponent_vectors(1, 3).len(), 4);
        // ‖e‖₁ ∈ {0, 2} in Z²: 1 + 8
        assert_eq!(exponent_vectors(2, 2).len(), 9);
    }

    #[test]
    fn cat_map_rate() {
        let r = distortion_rate(&cat_map(), 12, Execution::default()).unwrap();
        let golden_sq = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((r.k_exact - golden_sq).abs() < 1e-9);
        assert!((r.sqrt_k - golden_sq.sqrt()).abs() < 1e-9);
        // column sums of A^m are Fibonacci numbers F(2m+2)
        assert_eq!(&r.k[..4], &[big(3), big(8), big(21), big(55)]);
        assert!((r.estimate.ratio_estimate - golden_sq).abs() < 1e-3);
    }

    #[test]
    fn trivial_action() {
        let d = SemidirectDescriptor::new(2, vec![IntMatrix::identity(2)]).unwrap();
        let r = distortion_rate(&d, 5, Execution::Sequential).unwrap();
        assert!(r.k.iter().all(|k| *k == big(1)));
        assert!((r.k_exact - 1.0).abs() < 1e-12);
    }
}
