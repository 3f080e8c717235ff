//! Breadth-first enumeration of Cayley balls.
//!
//! Each BFS level is expanded from the previous one; neighbour generation
//! runs through [`Execution`] and insertion is sequential in frontier order,
//! so a census never depends on the execution mode.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind, LengthFunction, LengthValue};
use crate::matrix::l1_norm;
use crate::par::Execution;
use crate::products::SublatticeDescriptor;

pub const DEFAULT_BUDGET: usize = 5_000_000;
pub const BUDGET_ENV: &str = "ENDOGROW_BUDGET";

/// The element budget, overridable through `ENDOGROW_BUDGET`.
pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Compact hash key for a normal form, injective within one group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Key {
    Small(SmallVec<[i64; 6]>),
    Big(Element),
}

pub fn key_of(g: &Element) -> Key {
    let mut out = SmallVec::new();
    if pack(g, &mut out) {
        Key::Small(out)
    } else {
        Key::Big(g.clone())
    }
}

fn pack(g: &Element, out: &mut SmallVec<[i64; 6]>) -> bool {
    fn ints(xs: &[BigInt], out: &mut SmallVec<[i64; 6]>) -> bool {
        xs.iter().all(|x| x.to_i64().map(|v| out.push(v)).is_some())
    }
    match g {
        Element::Vector(v) => ints(v, out),
        Element::Word(w) => {
            out.extend(w.letters().iter().map(|&l| l as i64));
            true
        }
        Element::Heisenberg(t) => ints(&[t.a.clone(), t.b.clone(), t.c.clone()], out),
        Element::Semidirect { base, quotient } => ints(base, out) && ints(quotient, out),
        Element::Pair(a, b) => {
            let mark = out.len();
            out.push(0);
            if !pack(a, out) {
                return false;
            }
            out[mark] = (out.len() - mark - 1) as i64;
            pack(b, out)
        }
        Element::Syllables(s) => s.iter().all(|syl| {
            out.push(syl.factor as i64);
            let mark = out.len();
            out.push(0);
            let ok = pack(&syl.element, out);
            out[mark] = (out.len() - mark - 1) as i64;
            ok
        }),
    }
}

/// Exact word lengths on a ball around the identity.
#[derive(Clone, Debug)]
pub struct BallCensus {
    group: Group,
    requested_radius: u32,
    complete_radius: u32,
    counts: Vec<u64>,
    lengths: HashMap<Key, u32>,
}

impl BallCensus {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn requested_radius(&self) -> u32 {
        self.requested_radius
    }

    /// Largest radius whose ball was enumerated in full.
    pub fn complete_radius(&self) -> u32 {
        self.complete_radius
    }

    pub fn is_complete(&self) -> bool {
        self.complete_radius == self.requested_radius
    }

    /// `|B(n)|` for `n = 0..=complete_radius`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of stored elements, including any partial last level.
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Exact geodesic length of `g`, or `OutOfRange` if `g` is beyond the ball.
    pub fn exact_length(&self, g: &Element) -> Result<LengthValue> {
        if !self.group.contains(g) {
            return Err(Error::KindMismatch { expected: self.group.describe(), found: g.to_string() });
        }
        match self.lengths.get(&key_of(g)) {
            Some(&n) => Ok(LengthValue::exact(BigInt::from(n))),
            None => Err(Error::OutOfRange { element: g.to_string(), radius: self.complete_radius }),
        }
    }

    /// TSV with columns `radius`, `count`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("radius\tcount\n");
        for (n, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{n}\t{c}\n"));
        }
        s
    }
}

impl LengthFunction for BallCensus {
    fn length(&self, g: &Element) -> Result<LengthValue> {
        self.exact_length(g)
    }
}

/// Options for ball enumeration.
#[derive(Clone, Copy, Debug)]
pub struct BfsOptions {
    pub budget: usize,
    pub execution: Execution,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions { budget: budget_from_env(), execution: Execution::default() }
    }
}

/// Enumerates the ball of radius `radius`.
pub fn enumerate_ball(group: &Group, radius: u32, options: BfsOptions) -> Result<BallCensus> {
    enumerate_ball_with(group, radius, options, |_, _| {})
}

/// Enumerates the ball, calling `visit(g, |g|)` once per element in
/// discovery order (generator order within each frontier element).
pub fn enumerate_ball_with<F>(group: &Group, radius: u32, options: BfsOptions, mut visit: F) -> Result<BallCensus>
where
    F: FnMut(&Element, u32),
{
    let gens = group.symmetric_generators()?;
    let id = group.identity();
    let mut lengths: HashMap<Key, u32> = HashMap::new();
    lengths.insert(key_of(&id), 0);
    visit(&id, 0);
    let mut counts = vec![1u64];
    let mut frontier = vec![id];
    let mut complete_radius = 0;
    let chunk = 256;

    for n in 1..=radius {
        let seen = &lengths;
        let candidates: Vec<Result<(Key, Element)>> = options.execution.flat_map_chunks(&frontier, chunk, |part| {
            let mut out = Vec::with_capacity(part.len() * gens.len());
            for g in part {
                for s in &gens {
                    match group.multiply_unchecked(s, g) {
                        Ok(x) => {
                            let k = key_of(&x);
                            if !seen.contains_key(&k) {
                                out.push(Ok((k, x)));
                            }
                        }
                        Err(e) => out.push(Err(e)),
                    }
                }
            }
            out
        });
        let mut next = Vec::new();
        let mut exhausted = false;
        for c in candidates {
            let (k, x) = c?;
            if lengths.contains_key(&k) {
                continue;
            }
            if lengths.len() >= options.budget {
                exhausted = true;
                break;
            }
            lengths.insert(k, n);
            visit(&x, n);
            next.push(x);
        }
        if exhausted {
            break;
        }
        counts.push(lengths.len() as u64);
        complete_radius = n;
        frontier = next;
    }
    Ok(BallCensus { group: group.clone(), requested_radius: radius, complete_radius, counts, lengths })
}

/// Which subgroup a distortion profile measures, with its intrinsic length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistortionTarget {
    /// `Zʳ × {0}` inside `Zʳ ⋊ Zˢ`, measured by L1.
    SemidirectBase,
    /// A sublattice of a free abelian group, measured by L1 of its coordinates.
    Sublattice(SublatticeDescriptor),
}

impl DistortionTarget {
    fn intrinsic_length(&self, g: &Element) -> Option<BigInt> {
        match (self, g) {
            (DistortionTarget::SemidirectBase, Element::Semidirect { base, quotient }) => {
                quotient.iter().all(Zero::is_zero).then(|| l1_norm(base))
            }
            (DistortionTarget::Sublattice(l), Element::Vector(v)) => l.coordinates(v).map(|c| l1_norm(&c)),
            _ => None,
        }
    }
}

/// `ρ(0..=R)`: the largest intrinsic length of a subgroup element in the ambient ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionProfile {
    pub rho: Vec<BigInt>,
    pub requested_radius: u32,
}

impl DistortionProfile {
    pub fn is_complete(&self) -> bool {
        self.rho.len() as u32 == self.requested_radius + 1
    }

    /// TSV with columns `n`, `rho`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("n\trho\n");
        for (n, r) in self.rho.iter().enumerate() {
            s.push_str(&format!("{n}\t{r}\n"));
        }
        s
    }
}

pub fn distortion_profile(
    group: &Group,
    target: &DistortionTarget,
    radius: u32,
    options: BfsOptions,
) -> Result<DistortionProfile> {
    match (target, group.kind()) {
        (DistortionTarget::SemidirectBase, GroupKind::Semidirect(_)) => {}
        (DistortionTarget::Sublattice(l), GroupKind::FreeAbelian { rank }) if l.ambient_rank() == *rank => {}
        _ => {
            return Err(Error::Unsupported(format!("distortion of {target:?} in {}", group.describe())));
        }
    }
    let mut per_level = vec![BigInt::zero(); radius as usize + 1];
    let census = enumerate_ball_with(group, radius, options, |g, n| {
        if let Some(len) = target.intrinsic_length(g) {
            let slot = &mut per_level[n as usize];
            if len > *slot {
                *slot = len;
            }
        }
    })?;
    let mut rho = Vec::with_capacity(census.complete_radius() as usize + 1);
    let mut best = BigInt::zero();
    for level in per_level.into_iter().take(census.complete_radius() as usize + 1) {
        if level > best {
            best = level;
        }
        rho.push(best.clone());
    }
    Ok(DistortionProfile { rho, requested_radius: radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{HeisenbergGenerators, Triple};
    use crate::matrix::{big, IntMatrix};

    fn opts() -> BfsOptions {
        BfsOptions { budget: DEFAULT_BUDGET, execution: Execution::Sequential }
    }

    #[test]
    fn small_balls() {
        let z2 = enumerate_ball(&Group::free_abelian(2), 2, opts()).unwrap();
        assert_eq!(z2.counts(), &[1, 5, 13]);
        let f2 = enumerate_ball(&Group::free(2), 2, opts()).unwrap();
        assert_eq!(f2.counts(), &[1, 5, 17]);
        let zero = enumerate_ball(&Group::free(3), 0, opts()).unwrap();
        assert_eq!(zero.counts(), &[1]);
        assert_eq!(zero.len(), 1);
    }

    #[test]
    fn heisenberg_lengths() {
        let std = Group::heisenberg(HeisenbergGenerators::Standard).with_length_mode(crate::LengthMode::BfsOracle { radius: 4 });
        let c = enumerate_ball(&std, 4, opts()).unwrap();
        let y = Element::Heisenberg(Triple::new(0, 1, 0));
        assert_eq!(c.exact_length(&y).unwrap().value, big(1));
        let min = Group::heisenberg(HeisenbergGenerators::Minimal);
        let c = enumerate_ball(&min, 4, opts()).unwrap();
        assert_eq!(c.exact_length(&y).unwrap().value, big(4));
        let far = Element::Heisenberg(Triple::new(9, 0, 0));
        assert!(matches!(c.exact_length(&far), Err(Error::OutOfRange { radius: 4, .. })));
    }

    #[test]
    fn budget_truncates() {
        let c = enumerate_ball(&Group::free(2), 6, BfsOptions { budget: 20, execution: Execution::Sequential }).unwrap();
        assert_eq!(c.complete_radius(), 2);
        assert!(!c.is_complete());
        assert_eq!(c.counts(), &[1, 5, 17]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Group::heisenberg(HeisenbergGenerators::Minimal);
        let a = enumerate_ball(&g, 7, opts()).unwrap();
        let b = enumerate_ball(&g, 7, BfsOptions { budget: DEFAULT_BUDGET, execution: Execution::Parallel }).unwrap();
        assert_eq!(a.counts(), b.counts());
        assert_eq!(a.lengths, b.lengths);
    }

    #[test]
    fn distortion_examples() {
        let line = DistortionTarget::Sublattice(SublatticeDescriptor::new(IntMatrix::from_rows(&[vec![1], vec![0]]).unwrap()).unwrap());
        let p = distortion_profile(&Group::free_abelian(2), &line, 5, opts()).unwrap();
        assert_eq!(p.rho, (0..=5).map(big).collect::<Vec<_>>());
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let g = crate::products::semidirect(2, vec![a]).unwrap();
        let p = distortion_profile(&g, &DistortionTarget::SemidirectBase, 3, opts()).unwrap();
        assert_eq!(p.rho[0], big(0));
        assert!(p.rho[3] >= big(3));
    }
}
