//! Descriptors for composite groups: semidirect products of free abelian
//! groups, sublattices of `Zⁿ`, abelian quotients and polycyclic towers.
//!
//! The constructors [`direct_product`], [`free_product`], [`semidirect`],
//! [`sublattice`] and [`abelian_quotient`] return ready-to-use [`Group`]s.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind, LengthMode};
use crate::matrix::{IntMatrix, SmithForm};

/// `Zʳ ⋊_φ Zˢ`, with `φ(eᵢ)` given by one unimodular matrix per quotient generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemidirectDescriptor {
    base_rank: usize,
    action: Vec<IntMatrix>,
    inverse_action: Vec<IntMatrix>,
}

impl SemidirectDescriptor {
    pub fn new(base_rank: usize, action: Vec<IntMatrix>) -> Result<Self> {
        let mut inverse_action = Vec::with_capacity(action.len());
        for (i, a) in action.iter().enumerate() {
            if a.rows() != base_rank || a.cols() != base_rank {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix {i} is {}x{}, base rank is {base_rank}",
                    a.rows(),
                    a.cols()
                )));
            }
            inverse_action.push(a.inverse_unimodular().map_err(|_| {
                Error::NonUnimodular(format!("action matrix {i} = {a} is not invertible over the integers"))
            })?);
        }
        for i in 0..action.len() {
            for j in i + 1..action.len() {
                if action[i].mul(&action[j])? != action[j].mul(&action[i])? {
                    return Err(Error::NotHomomorphism(format!(
                        "action matrices {i} and {j} do not commute"
                    )));
                }
            }
        }
        Ok(SemidirectDescriptor { base_rank, action, inverse_action })
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn quotient_rank(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self) -> &[IntMatrix] {
        &self.action
    }

    /// `φ(±eᵢ)`.
    pub fn generator_action(&self, i: usize, inverse: bool) -> &IntMatrix {
        if inverse {
            &self.inverse_action[i]
        } else {
            &self.action[i]
        }
    }

    /// The matrix `φ(q) = Π Aᵢ^{qᵢ}`.
    pub fn phi(&self, q: &[BigInt]) -> Result<IntMatrix> {
        let mut m = IntMatrix::identity(self.base_rank);
        for (i, qi) in q.iter().enumerate() {
            let e = qi
                .abs()
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("quotient exponent {qi} too large")))?;
            let base = self.generator_action(i, qi.is_negative());
            m = m.mul(&base.pow(e)?)?;
        }
        Ok(m)
    }

    /// `φ(q)·h`.
    pub fn act(&self, q: &[BigInt], h: &[BigInt]) -> Result<Vec<BigInt>> {
        if q.iter().all(Zero::is_zero) {
            return Ok(h.to_vec());
        }
        self.phi(q)?.mul_vec(h)
    }

    /// True when every action matrix is a signed permutation, so the action
    /// preserves L1 length and word length is `|h|₁ + |q|₁`.
    pub fn is_isometric(&self) -> bool {
        self.action.iter().all(|a| {
            (0..a.cols()).all(|j| {
                let col = a.column(j);
                col.iter().filter(|x| !x.is_zero()).count() == 1 && col.iter().all(|x| x.abs() <= BigInt::one())
            })
        })
    }

    /// `(h,q)(h',q') = (h + φ(q)h', q + q')`.
    pub fn multiply(&self, h: &[BigInt], q: &[BigInt], h2: &[BigInt], q2: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let moved = self.act(q, h2)?;
        let base = h.iter().zip(&moved).map(|(x, y)| x + y).collect();
        let quot = q.iter().zip(q2).map(|(x, y)| x + y).collect();
        Ok((base, quot))
    }

    /// `(h,q)⁻¹ = (−φ(−q)h, −q)`.
    pub fn invert(&self, h: &[BigInt], q: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let neg_q: Vec<BigInt> = q.iter().map(|x| -x).collect();
        let moved = self.act(&neg_q, h)?;
        Ok((moved.into_iter().map(|x| -x).collect(), neg_q))
    }
}

/// Sublattice of `Zⁿ` spanned by independent columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SublatticeDescriptor {
    basis: IntMatrix,
    smith: SmithForm,
}

impl SublatticeDescriptor {
    pub fn new(basis: IntMatrix) -> Result<Self> {
        let smith = basis.smith_normal_form();
        if smith.rank() != basis.cols() {
            return Err(Error::DependentColumns);
        }
        Ok(SublatticeDescriptor { basis, smith })
    }

    /// Lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_rank: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        if gens.is_empty() {
            return SublatticeDescriptor::new(IntMatrix::zeros(ambient_rank, 0));
        }
        let b = IntMatrix::from_columns(ambient_rank, gens)?;
        let s = b.smith_normal_form();
        let u_inv = s.u.inverse_unimodular()?;
        let f = s.invariant_factors();
        let cols: Vec<Vec<BigInt>> = f
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| u_inv.column(i).into_iter().map(|x| x * d).collect())
            .collect();
        SublatticeDescriptor::new(IntMatrix::from_columns(ambient_rank, &cols)?)
    }

    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `|det|` of the basis; `None` when the index is infinite.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() < self.ambient_rank() {
            return None;
        }
        Some(self.basis.determinant().expect("square").abs())
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_rank() {
            return None;
        }
        if self.rank() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let s = &self.smith;
        let y = s.u.mul_vec(v).ok()?;
        let k = self.rank();
        let mut z = Vec::with_capacity(k);
        for (i, yi) in y.iter().enumerate() {
            if i < k {
                let (q, r) = yi.div_rem(&s.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                z.push(q);
            } else if !yi.is_zero() {
                return None;
            }
        }
        s.v.mul_vec(&z).ok()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// The ambient vector with the given coordinates.
    pub fn embed(&self, coords: &[BigInt]) -> Result<Vec<BigInt>> {
        self.basis.mul_vec(coords)
    }
}

/// `Zⁿ / L` in Smith coordinates: free coordinates first, then torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientData {
    lattice: SublatticeDescriptor,
    /// One per quotient coordinate; `0` marks a free coordinate.
    moduli: Vec<BigInt>,
    /// Rows map ambient vectors to quotient coordinates.
    projection: IntMatrix,
    /// Columns lift quotient generators back to `Zⁿ`.
    lift: IntMatrix,
}

impl QuotientData {
    pub fn new(lattice: SublatticeDescriptor) -> Result<Self> {
        let n = lattice.ambient_rank();
        let SmithForm { d, u, .. } = lattice.smith.clone();
        let u_inv = u.inverse_unimodular()?;
        let k = lattice.rank();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..n {
            if i >= k {
                free.push(i);
            } else if !d[(i, i)].is_one() {
                torsion.push(i);
            }
        }
        let order: Vec<usize> = free.iter().chain(&torsion).copied().collect();
        let moduli = order
            .iter()
            .map(|&i| if i < k { d[(i, i)].clone() } else { BigInt::zero() })
            .collect();
        let all: Vec<usize> = (0..n).collect();
        Ok(QuotientData {
            projection: u.select(&order, &all),
            lift: u_inv.select(&all, &order),
            lattice,
            moduli,
        })
    }

    pub fn lattice(&self) -> &SublatticeDescriptor {
        &self.lattice
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn dimension(&self) -> usize {
        self.moduli.len()
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|m| m.is_zero()).count()
    }

    /// Product of the torsion moduli.
    pub fn torsion_order(&self) -> BigInt {
        self.moduli.iter().filter(|m| !m.is_zero()).product()
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    pub fn lift(&self) -> &IntMatrix {
        &self.lift
    }

    /// Reduces torsion coordinates into `[0, d)`.
    pub fn normalize(&self, mut coords: Vec<BigInt>) -> Vec<BigInt> {
        for (x, m) in coords.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
        coords
    }

    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.normalize(self.projection.mul_vec(v)?))
    }

    /// Word length for the Smith generators: L1 on free coordinates,
    /// minimal absolute residue on torsion coordinates.
    pub fn length(&self, coords: &[BigInt]) -> BigInt {
        coords
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| {
                if m.is_zero() {
                    x.abs()
                } else {
                    let r = x.mod_floor(m);
                    let other = m - &r;
                    r.min(other)
                }
            })
            .sum()
    }
}

pub fn direct_product(a: Group, b: Group) -> Group {
    let mode = common_mode(&a, &b);
    Group::new(GroupKind::DirectProduct(Box::new(a), Box::new(b)), mode)
}

/// Free product of two factors, each free or infinite cyclic.
pub fn free_product(a: Group, b: Group) -> Result<Group> {
    for g in [&a, &b] {
        if !matches!(g.kind(), GroupKind::Free { .. } | GroupKind::FreeAbelian { rank: 1 }) {
            return Err(Error::Unsupported(format!(
                "free product factor must be free or infinite cyclic, got {}",
                g.describe()
            )));
        }
    }
    let mode = common_mode(&a, &b);
    Ok(Group::new(GroupKind::FreeProduct(Box::new(a), Box::new(b)), mode))
}

pub fn semidirect(base_rank: usize, action: Vec<IntMatrix>) -> Result<Group> {
    let d = SemidirectDescriptor::new(base_rank, action)?;
    let mode = if d.is_isometric() { LengthMode::Exact } else { LengthMode::BfsOracle { radius: 12 } };
    Ok(Group::new(GroupKind::Semidirect(Box::new(d)), mode))
}

/// The sublattice as a group in its own coordinates (intrinsic L1 length).
pub fn sublattice(basis: IntMatrix) -> Result<Group> {
    Ok(Group::new(GroupKind::Sublattice(SublatticeDescriptor::new(basis)?), LengthMode::Exact))
}

pub fn abelian_quotient(lattice: SublatticeDescriptor) -> Result<Group> {
    Ok(Group::new(GroupKind::AbelianQuotient(QuotientData::new(lattice)?), LengthMode::Exact))
}

fn common_mode(a: &Group, b: &Group) -> LengthMode {
    match (a.length_mode(), b.length_mode()) {
        (LengthMode::BfsOracle { radius }, _) | (_, LengthMode::BfsOracle { radius }) => {
            LengthMode::BfsOracle { radius: *radius }
        }
        (LengthMode::Quasi, _) | (_, LengthMode::Quasi) => LengthMode::Quasi,
        _ => LengthMode::Exact,
    }
}

/// Which subnormal series with cyclic factors a tower uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    /// `Zⁿ ⊃ ⟨e₁…e_{n−1}⟩ ⊃ … ⊃ ⟨e₁⟩ ⊃ 1`.
    CoordinateFlag { rank: usize },
    /// `Z ⋊ Z ⊃ Z ⊃ 1`.
    CyclicByCyclic,
}

/// A polycyclic group together with a series `1 = P_h ◁ … ◁ P₁ = Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycyclicTower {
    pub group: Group,
    pub series: Series,
}

impl PolycyclicTower {
    /// `Z ⋊ Z` with the quotient generator acting on the base by `sign = ±1`.
    pub fn cyclic_by_cyclic(sign: i64) -> Result<Self> {
        if sign.abs() != 1 {
            return Err(Error::NonUnimodular(format!("{sign}")));
        }
        Ok(PolycyclicTower {
            group: semidirect(1, vec![IntMatrix::diagonal(&[sign])])?,
            series: Series::CyclicByCyclic,
        })
    }

    pub fn free_abelian(rank: usize) -> Self {
        PolycyclicTower { group: Group::free_abelian(rank), series: Series::CoordinateFlag { rank } }
    }

    /// Number of cyclic factors.
    pub fn length(&self) -> usize {
        match self.series {
            Series::CoordinateFlag { rank } => rank,
            Series::CyclicByCyclic => 2,
        }
    }

    /// Whether `g` lies in `P_i` (1-based; `P₁ = Γ`).
    pub fn in_term(&self, i: usize, g: &Element) -> bool {
        match (&self.series, g) {
            (Series::CoordinateFlag { rank }, Element::Vector(v)) => {
                let keep = rank + 1 - i.min(rank + 1);
                v.iter().skip(keep).all(Zero::is_zero)
            }
            (Series::CyclicByCyclic, Element::Semidirect { base, quotient }) => match i {
                1 => true,
                2 => quotient.iter().all(Zero::is_zero),
                _ => base.iter().chain(quotient).all(Zero::is_zero),
            },
            _ => false,
        }
    }

    /// Generators of `P_i`, drawn from the group's generating set.
    pub fn term_generators(&self, i: usize) -> Vec<Element> {
        let gens = self.group.generators();
        gens.into_iter().filter(|g| self.in_term(i, g)).collect()
    }
}
