//! Endomorphisms: application, composition, powers, restriction to invariant
//! subgroups and induced maps on quotients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupKind, Syllable, Triple, Word};
use crate::matrix::IntMatrix;
use crate::products::{QuotientData, SublatticeDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endomorphism {
    /// Integer matrix on coordinate vectors (free abelian, sublattice or quotient kinds).
    Matrix(IntMatrix),
    /// Image word of each free generator.
    Words(Vec<Word>),
    /// `(a,b,c) ↦ (λa, λγb, γc)`.
    Heisenberg { lambda: BigInt, gamma: BigInt },
    /// Factor-preserving map on a direct or free product.
    Product(Box<Endomorphism>, Box<Endomorphism>),
    /// `(h, q) ↦ (B h, C q)` on `Zʳ ⋊ Zˢ`.
    Semidirect { base: IntMatrix, quotient: IntMatrix },
}

/// Subgroups and normal subgroups that restriction and quotients understand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Trivial,
    /// A sublattice of a free abelian group.
    Sublattice(SublatticeDescriptor),
    /// `Γ_j` of the lower central series.
    LowerCentral(u32),
    /// Left (`0`) or right (`1`) factor of a product.
    Factor(u8),
    /// The base `Zʳ` of a semidirect product.
    SemidirectBase,
}

impl Endomorphism {
    pub fn heisenberg(lambda: i64, gamma: i64) -> Self {
        Endomorphism::Heisenberg { lambda: BigInt::from(lambda), gamma: BigInt::from(gamma) }
    }

    pub fn matrix<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        Ok(Endomorphism::Matrix(IntMatrix::from_rows(rows)?))
    }

    /// Parses image words such as `["ab", "a"]`.
    pub fn words(images: &[&str], rank: usize) -> Result<Self> {
        Ok(Endomorphism::Words(images.iter().map(|s| Word::parse(s, rank)).collect::<Result<_>>()?))
    }

    pub fn identity(group: &Group) -> Result<Self> {
        Ok(match group.kind() {
            GroupKind::FreeAbelian { .. } | GroupKind::Sublattice(_) | GroupKind::AbelianQuotient(_) => {
                Endomorphism::Matrix(IntMatrix::identity(group.vector_dimension().unwrap_or(0)))
            }
            GroupKind::Free { rank } => Endomorphism::Words((0..*rank).map(Word::generator).collect()),
            GroupKind::Heisenberg(_) => Endomorphism::heisenberg(1, 1),
            GroupKind::DirectProduct(a, b) | GroupKind::FreeProduct(a, b) => {
                Endomorphism::Product(Box::new(Endomorphism::identity(a)?), Box::new(Endomorphism::identity(b)?))
            }
            GroupKind::Semidirect(d) => Endomorphism::Semidirect {
                base: IntMatrix::identity(d.base_rank()),
                quotient: IntMatrix::identity(d.quotient_rank()),
            },
        })
    }

    /// Checks that this map is a well-defined endomorphism of `group`.
    ///
    /// Matrix and Heisenberg maps are homomorphisms by construction; word
    /// maps on free groups likewise. Semidirect maps must intertwine the
    /// action, `B·Aᵢ = φ(C eᵢ)·B`, and quotient maps must preserve the
    /// relation lattice.
    pub fn validate(&self, group: &Group) -> Result<()> {
        let mismatch = || Error::KindMismatch { expected: group.describe(), found: self.to_string() };
        match (self, group.kind()) {
            (Endomorphism::Matrix(a), GroupKind::FreeAbelian { .. } | GroupKind::Sublattice(_)) => {
                let n = group.vector_dimension().unwrap_or(0);
                if a.rows() != n || a.cols() != n {
                    return Err(Error::DimensionMismatch(format!("{}x{} matrix on rank {n}", a.rows(), a.cols())));
                }
                Ok(())
            }
            (Endomorphism::Matrix(a), GroupKind::AbelianQuotient(q)) => {
                let n = q.dimension();
                if a.rows() != n || a.cols() != n {
                    return Err(Error::DimensionMismatch(format!("{}x{} matrix on {n} coordinates", a.rows(), a.cols())));
                }
                // d_j e_j must map to zero
                for (j, m) in q.moduli().iter().enumerate() {
                    if m.is_zero() {
                        continue;
                    }
                    let col: Vec<BigInt> = a.column(j).into_iter().map(|x| x * m).collect();
                    if q.normalize(col).iter().any(|x| !x.is_zero()) {
                        return Err(Error::NotHomomorphism(format!(
                            "column {j} does not respect the relation of order {m}"
                        )));
                    }
                }
                Ok(())
            }
            (Endomorphism::Words(images), GroupKind::Free { rank }) => {
                if images.len() != *rank {
                    return Err(Error::DimensionMismatch(format!("{} images for rank {rank}", images.len())));
                }
                if let Some(w) = images.iter().find(|w| w.max_generator() > *rank) {
                    return Err(Error::InvalidArgument(format!("image {w} uses a letter beyond rank {rank}")));
                }
                Ok(())
            }
            (Endomorphism::Heisenberg { .. }, GroupKind::Heisenberg(_)) => Ok(()),
            (Endomorphism::Product(x, y), GroupKind::DirectProduct(a, b) | GroupKind::FreeProduct(a, b)) => {
                x.validate(a)?;
                y.validate(b)
            }
            (Endomorphism::Semidirect { base, quotient }, GroupKind::Semidirect(d)) => {
                let (r, s) = (d.base_rank(), d.quotient_rank());
                if base.rows() != r || base.cols() != r || quotient.rows() != s || quotient.cols() != s {
                    return Err(Error::DimensionMismatch(format!(
                        "semidirect map blocks {}x{} and {}x{} for ranks {r}, {s}",
                        base.rows(),
                        base.cols(),
                        quotient.rows(),
                        quotient.cols()
                    )));
                }
                for i in 0..s {
                    let lhs = base.mul(&d.action()[i])?;
                    let rhs = d.phi(&quotient.column(i))?.mul(base)?;
                    if lhs != rhs {
                        return Err(Error::NotHomomorphism(format!(
                            "base map does not intertwine the action of quotient generator {i}"
                        )));
                    }
                }
                Ok(())
            }
            _ => Err(mismatch()),
        }
    }

    pub fn apply(&self, group: &Group, g: &Element) -> Result<Element> {
        if !group.contains(g) {
            return Err(Error::KindMismatch { expected: group.describe(), found: g.to_string() });
        }
        self.apply_unchecked(group, g)
    }

    pub(crate) fn apply_unchecked(&self, group: &Group, g: &Element) -> Result<Element> {
        Ok(match (self, group.kind(), g) {
            (Endomorphism::Matrix(a), GroupKind::AbelianQuotient(q), Element::Vector(v)) => {
                Element::Vector(q.normalize(a.mul_vec(v)?))
            }
            (Endomorphism::Matrix(a), _, Element::Vector(v)) => Element::Vector(a.mul_vec(v)?),
            (Endomorphism::Words(images), _, Element::Word(w)) => Element::Word(w.substitute(images)),
            (Endomorphism::Heisenberg { lambda, gamma }, _, Element::Heisenberg(t)) => {
                Element::Heisenberg(Triple { a: lambda * &t.a, b: lambda * gamma * &t.b, c: gamma * &t.c })
            }
            (Endomorphism::Product(x, y), GroupKind::DirectProduct(a, b), Element::Pair(u, v)) => {
                Element::Pair(Box::new(x.apply_unchecked(a, u)?), Box::new(y.apply_unchecked(b, v)?))
            }
            (Endomorphism::Product(x, y), GroupKind::FreeProduct(a, b), Element::Syllables(s)) => {
                let mut acc = group.identity();
                for syl in s {
                    let (map, factor) = if syl.factor == 0 { (x, a) } else { (y, b) };
                    let image = map.apply_unchecked(factor, &syl.element)?;
                    if image != factor.identity() {
                        let piece = Element::Syllables(vec![Syllable { factor: syl.factor, element: image }]);
                        acc = group.multiply(&acc, &piece)?;
                    }
                }
                acc
            }
            (Endomorphism::Semidirect { base, quotient }, _, Element::Semidirect { base: h, quotient: q }) => {
                Element::Semidirect { base: base.mul_vec(h)?, quotient: quotient.mul_vec(q)? }
            }
            _ => return Err(Error::KindMismatch { expected: self.to_string(), found: g.to_string() }),
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        Ok(match (self, other) {
            (Endomorphism::Matrix(a), Endomorphism::Matrix(b)) => Endomorphism::Matrix(a.mul(b)?),
            (Endomorphism::Words(a), Endomorphism::Words(b)) => {
                Endomorphism::Words(b.iter().map(|w| w.substitute(a)).collect())
            }
            (Endomorphism::Heisenberg { lambda: l1, gamma: g1 }, Endomorphism::Heisenberg { lambda: l2, gamma: g2 }) => {
                Endomorphism::Heisenberg { lambda: l1 * l2, gamma: g1 * g2 }
            }
            (Endomorphism::Product(a1, b1), Endomorphism::Product(a2, b2)) => {
                Endomorphism::Product(Box::new(a1.compose(a2)?), Box::new(b1.compose(b2)?))
            }
            (
                Endomorphism::Semidirect { base: b1, quotient: c1 },
                Endomorphism::Semidirect { base: b2, quotient: c2 },
            ) => Endomorphism::Semidirect { base: b1.mul(b2)?, quotient: c1.mul(c2)? },
            _ => {
                return Err(Error::KindMismatch { expected: self.to_string(), found: other.to_string() });
            }
        })
    }

    /// `selfⁿ` in the same representation; `n = 0` gives the identity of `group`.
    pub fn power(&self, group: &Group, n: u32) -> Result<Endomorphism> {
        let mut result = Endomorphism::identity(group)?;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.compose(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(result)
    }

    /// The restriction to an invariant subgroup, in the subgroup's own coordinates.
    pub fn restrict(&self, group: &Group, h: &Subgroup) -> Result<(Group, Endomorphism)> {
        match (h, self, group.kind()) {
            (Subgroup::Trivial, _, _) => Ok((Group::trivial(), Endomorphism::Matrix(IntMatrix::zeros(0, 0)))),
            (Subgroup::Sublattice(l), Endomorphism::Matrix(a), GroupKind::FreeAbelian { rank }) => {
                if l.ambient_rank() != *rank {
                    return Err(Error::DimensionMismatch(format!("lattice in Z^{} for Z^{rank}", l.ambient_rank())));
                }
                let mut cols = Vec::with_capacity(l.rank());
                for j in 0..l.rank() {
                    let image = a.mul_vec(&l.basis().column(j))?;
                    match l.coordinates(&image) {
                        Some(c) => cols.push(c),
                        None => return Err(not_invariant(j, &Element::Vector(image))),
                    }
                }
                let b = IntMatrix::from_columns(l.rank(), &cols)?;
                Ok((Group::new(GroupKind::Sublattice(l.clone()), *group.length_mode()), Endomorphism::Matrix(b)))
            }
            (Subgroup::LowerCentral(j), Endomorphism::Heisenberg { lambda, gamma }, GroupKind::Heisenberg(_)) => {
                let layer = group.lower_central_layer(*j)?;
                let map = match j {
                    1 => self.clone(),
                    2 => Endomorphism::Matrix(IntMatrix::diagonal(&[lambda * gamma])),
                    _ => Endomorphism::Matrix(IntMatrix::zeros(0, 0)),
                };
                Ok((layer.term, map))
            }
            (Subgroup::LowerCentral(j), _, _) if group.is_abelian() => {
                let layer = group.lower_central_layer(*j)?;
                let map = if *j == 1 { self.clone() } else { Endomorphism::Matrix(IntMatrix::zeros(0, 0)) };
                Ok((layer.term, map))
            }
            (Subgroup::Factor(i), Endomorphism::Product(x, y), GroupKind::DirectProduct(a, b) | GroupKind::FreeProduct(a, b)) => {
                Ok(if *i == 0 { ((**a).clone(), (**x).clone()) } else { ((**b).clone(), (**y).clone()) })
            }
            (Subgroup::SemidirectBase, Endomorphism::Semidirect { base, .. }, GroupKind::Semidirect(d)) => {
                Ok((Group::free_abelian(d.base_rank()), Endomorphism::Matrix(base.clone())))
            }
            _ => Err(Error::Unsupported(format!("restriction of {self} on {} to {h:?}", group.describe()))),
        }
    }

    /// The induced map on `Γ/H` for an invariant normal subgroup `H`.
    pub fn induce_on_quotient(&self, group: &Group, h: &Subgroup) -> Result<(Group, Endomorphism)> {
        match (h, self, group.kind()) {
            (Subgroup::Trivial, _, _) => Ok((group.clone(), self.clone())),
            (Subgroup::Sublattice(l), Endomorphism::Matrix(a), GroupKind::FreeAbelian { .. }) => {
                // invariance check doubles as the error path
                self.restrict(group, h)?;
                let q = QuotientData::new(l.clone())?;
                let induced = q.projection().mul(a)?.mul(q.lift())?;
                Ok((Group::new(GroupKind::AbelianQuotient(q), *group.length_mode()), Endomorphism::Matrix(induced)))
            }
            (Subgroup::LowerCentral(j), Endomorphism::Heisenberg { .. }, GroupKind::Heisenberg(_)) => match j {
                1 => Ok((Group::trivial(), Endomorphism::Matrix(IntMatrix::zeros(0, 0)))),
                2 => Ok((Group::free_abelian(2), self.abelianization()?)),
                3 => Ok((group.clone(), self.clone())),
                _ => Err(Error::Unsupported(format!("quotient by lower central term {j}"))),
            },
            (Subgroup::LowerCentral(j), _, _) if group.is_abelian() => match j {
                1 => Ok((Group::trivial(), Endomorphism::Matrix(IntMatrix::zeros(0, 0)))),
                _ => Ok((group.clone(), self.clone())),
            },
            (Subgroup::Factor(i), Endomorphism::Product(x, y), GroupKind::DirectProduct(a, b)) => {
                Ok(if *i == 0 { ((**b).clone(), (**y).clone()) } else { ((**a).clone(), (**x).clone()) })
            }
            (Subgroup::SemidirectBase, Endomorphism::Semidirect { quotient, .. }, GroupKind::Semidirect(d)) => {
                Ok((Group::free_abelian(d.quotient_rank()), Endomorphism::Matrix(quotient.clone())))
            }
            _ => Err(Error::Unsupported(format!("quotient of {} by {h:?} under {self}", group.describe()))),
        }
    }

    /// The map `Γ_j/Γ_{j+1}` → itself for a Heisenberg or abelian group.
    pub fn on_layer(&self, group: &Group, j: u32) -> Result<(Group, Endomorphism)> {
        match (self, group.kind()) {
            (Endomorphism::Heisenberg { lambda, gamma }, GroupKind::Heisenberg(_)) => match j {
                1 => Ok((Group::free_abelian(2), self.abelianization()?)),
                2 => Ok((Group::free_abelian(1), Endomorphism::Matrix(IntMatrix::diagonal(&[lambda * gamma])))),
                3 => Ok((Group::trivial(), Endomorphism::Matrix(IntMatrix::zeros(0, 0)))),
                _ => Err(Error::Unsupported(format!("Heisenberg layer {j}"))),
            },
            _ if group.is_abelian() => match j {
                1 => Ok((group.clone(), self.clone())),
                2 => Ok((Group::trivial(), Endomorphism::Matrix(IntMatrix::zeros(0, 0)))),
                _ => Err(Error::Unsupported(format!("abelian layer {j}"))),
            },
            _ => Err(Error::Unsupported(format!("layers of {}", group.describe()))),
        }
    }

    /// `diag(λ, γ)` on the `(a, c)` coordinates of `Γ/Γ₂ ≅ Z²`.
    pub fn abelianization(&self) -> Result<Endomorphism> {
        match self {
            Endomorphism::Heisenberg { lambda, gamma } => {
                Ok(Endomorphism::Matrix(IntMatrix::diagonal(&[lambda.clone(), gamma.clone()])))
            }
            _ => Err(Error::Unsupported(format!("abelianization of {self}"))),
        }
    }

    /// Checks `α(gh) = α(g)α(h)` on random products of generators.
    pub fn check_homomorphism<R: Rng + ?Sized>(&self, group: &Group, rng: &mut R, trials: usize, len: usize) -> Result<()> {
        for _ in 0..trials {
            let g = group.random_element(rng, len)?;
            let h = group.random_element(rng, len)?;
            let lhs = self.apply(group, &group.multiply(&g, &h)?)?;
            let rhs = group.multiply(&self.apply(group, &g)?, &self.apply(group, &h)?)?;
            if lhs != rhs {
                return Err(Error::NotHomomorphism(format!("α({g}·{h}) = {lhs} but α({g})·α({h}) = {rhs}")));
            }
        }
        Ok(())
    }

    /// Whether every image is the identity.
    pub fn is_zero_map(&self, group: &Group) -> Result<bool> {
        let id = group.identity();
        for g in group.generators() {
            if self.apply(group, &g)? != id {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity(&self, group: &Group) -> Result<bool> {
        Ok(self == &Endomorphism::identity(group)? || {
            let gens = group.generators();
            gens.iter().all(|g| self.apply(group, g).map(|x| &x == g).unwrap_or(false))
        })
    }
}

fn not_invariant(generator: usize, image: &Element) -> Error {
    Error::NotInvariant { generator, image: image.to_string() }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endomorphism::Matrix(a) => write!(f, "{a}"),
            Endomorphism::Words(ws) => {
                let parts: Vec<String> = ws
                    .iter()
                    .enumerate()
                    .map(|(i, w)| format!("{}->{w}", Word::generator(i)))
                    .collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            Endomorphism::Heisenberg { lambda, gamma } => write!(f, "phi(lambda={lambda}, gamma={gamma})"),
            Endomorphism::Product(a, b) => write!(f, "({a}) x ({b})"),
            Endomorphism::Semidirect { base, quotient } => write!(f, "(base {base}, quotient {quotient})"),
        }
    }
}

/// `n·I` on a rank-`n` free abelian group, or the rank-one multiplier `[m]`.
pub fn scalar(rank: usize, m: i64) -> Endomorphism {
    Endomorphism::Matrix(IntMatrix::diagonal(&vec![m; rank]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::HeisenbergGenerators;
    use crate::matrix::big;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[i64]) -> Element {
        Element::Vector(x.iter().map(|&a| big(a)).collect())
    }

    #[test]
    fn matrix_and_heisenberg_application() {
        let z2 = Group::free_abelian(2);
        let a = Endomorphism::matrix(&[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(a.apply(&z2, &v(&[1, 0])).unwrap(), v(&[0, 1]));
        assert_eq!(a.apply(&z2, &v(&[0, 1])).unwrap(), v(&[2, 0]));
        assert_eq!(a.power(&z2, 2).unwrap(), Endomorphism::Matrix(IntMatrix::diagonal(&[2, 2])));
        assert_eq!(a.power(&z2, 0).unwrap(), Endomorphism::identity(&z2).unwrap());
        let h = Group::heisenberg(HeisenbergGenerators::Standard);
        let phi = Endomorphism::heisenberg(2, 2);
        let img = phi.apply(&h, &Element::Heisenberg(Triple::new(1, 1, 1))).unwrap();
        assert_eq!(img, Element::Heisenberg(Triple::new(2, 4, 2)));
    }

    #[test]
    fn word_substitution_power() {
        let f2 = Group::free(2);
        let fib = Endomorphism::words(&["ab", "a"], 2).unwrap();
        assert_eq!(fib.power(&f2, 2).unwrap(), Endomorphism::words(&["aba", "ab"], 2).unwrap());
        fib.validate(&f2).unwrap();
    }

    #[test]
    fn restriction_and_quotients() {
        let z2 = Group::free_abelian(2);
        let a = Endomorphism::Matrix(IntMatrix::diagonal(&[2, 3]));
        let h = Subgroup::Sublattice(SublatticeDescriptor::new(IntMatrix::diagonal(&[2, 1])).unwrap());
        let (_, r) = a.restrict(&z2, &h).unwrap();
        assert_eq!(r, Endomorphism::Matrix(IntMatrix::diagonal(&[2, 3])));
        let (q, m) = a.induce_on_quotient(&z2, &h).unwrap();
        assert_eq!(q.describe(), "Z/2");
        assert_eq!(m.apply(&q, &v(&[1])).unwrap(), v(&[0]));
        let swap = Endomorphism::matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(swap.restrict(&z2, &h), Err(Error::NotInvariant { generator: 1, .. })));

        let heis = Group::heisenberg(HeisenbergGenerators::Standard);
        let phi = Endomorphism::heisenberg(2, 2);
        let (_, c) = phi.restrict(&heis, &Subgroup::LowerCentral(2)).unwrap();
        assert_eq!(c, Endomorphism::Matrix(IntMatrix::diagonal(&[4])));
        let (_, ab) = phi.induce_on_quotient(&heis, &Subgroup::LowerCentral(2)).unwrap();
        assert_eq!(ab, Endomorphism::Matrix(IntMatrix::diagonal(&[2, 2])));
        assert_eq!(
            Endomorphism::heisenberg(3, 5).abelianization().unwrap(),
            Endomorphism::Matrix(IntMatrix::diagonal(&[3, 5]))
        );
    }

    #[test]
    fn semidirect_compatibility() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let g = crate::products::semidirect(2, vec![a.clone()]).unwrap();
        let inner = Endomorphism::Semidirect { base: a, quotient: IntMatrix::identity(1) };
        inner.validate(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        inner.check_homomorphism(&g, &mut rng, 50, 6).unwrap();
        let bad = Endomorphism::Semidirect { base: IntMatrix::diagonal(&[2, 1]), quotient: IntMatrix::identity(1) };
        assert!(matches!(bad.validate(&g), Err(Error::NotHomomorphism(_))));
    }
}
