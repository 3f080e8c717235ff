//! Finitely generated groups with canonical normal forms.
//!
//! A [`Group`] pairs a [`GroupKind`] with a [`LengthMode`]. Elements are
//! [`Element`] values in normal form, so equality of elements is equality of
//! values. Generating sets are fixed per kind; [`Group::generators`] lists
//! them in order.

mod heisenberg;
mod word;

pub use heisenberg::Triple;
pub use word::Word;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::l1_norm;
use crate::products::{QuotientData, SemidirectDescriptor, SublatticeDescriptor};

/// Generating set used for the Heisenberg group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HeisenbergGenerators {
    /// `x = (1,0,0)`, `y = (0,1,0)`, `z = (0,0,1)`.
    #[default]
    Standard,
    /// `x = (1,0,0)`, `z = (0,0,1)`.
    Minimal,
}

/// How word lengths are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LengthMode {
    /// Closed-form word length; unavailable for kinds without one.
    #[default]
    Exact,
    /// Closed form where exact, otherwise a length equivalent up to constants.
    Quasi,
    /// Exact lengths read from a Cayley ball of the given radius.
    BfsOracle { radius: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Heisenberg(HeisenbergGenerators),
    DirectProduct(Box<Group>, Box<Group>),
    FreeProduct(Box<Group>, Box<Group>),
    Semidirect(Box<SemidirectDescriptor>),
    AbelianQuotient(QuotientData),
    Sublattice(SublatticeDescriptor),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    kind: GroupKind,
    length_mode: LengthMode,
}

/// One maximal block of a free-product normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    /// 0 for the left factor, 1 for the right.
    pub factor: u8,
    pub element: Element,
}

/// Normal-form group element. The variant is determined by the group kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Free abelian, sublattice coordinates, or quotient coordinates.
    Vector(Vec<BigInt>),
    Word(Word),
    Heisenberg(Triple),
    Pair(Box<Element>, Box<Element>),
    Semidirect { base: Vec<BigInt>, quotient: Vec<BigInt> },
    /// Alternating nontrivial syllables.
    Syllables(Vec<Syllable>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exactness {
    QuasiEquivalent,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LengthValue {
    pub value: BigInt,
    pub exactness: Exactness,
}

impl LengthValue {
    pub fn exact(value: BigInt) -> Self {
        LengthValue { value, exactness: Exactness::Exact }
    }

    pub fn quasi(value: BigInt) -> Self {
        LengthValue { value, exactness: Exactness::QuasiEquivalent }
    }
}

/// Anything that can assign lengths to group elements.
pub trait LengthFunction: Sync {
    fn length(&self, g: &Element) -> Result<LengthValue>;
}

/// `Γ_j` and `Γ_j / Γ_{j+1}` for a term of the lower central series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCentralLayer {
    pub j: u32,
    pub term: Group,
    pub quotient: Group,
    /// Elements of the ambient group generating `Γ_j`.
    pub term_generators: Vec<Element>,
}

impl Group {
    pub fn new(kind: GroupKind, length_mode: LengthMode) -> Self {
        Group { kind, length_mode }
    }

    pub fn free_abelian(rank: usize) -> Self {
        Group::new(GroupKind::FreeAbelian { rank }, LengthMode::Exact)
    }

    pub fn free(rank: usize) -> Self {
        Group::new(GroupKind::Free { rank }, LengthMode::Exact)
    }

    pub fn heisenberg(gens: HeisenbergGenerators) -> Self {
        Group::new(GroupKind::Heisenberg(gens), LengthMode::Quasi)
    }

    pub fn trivial() -> Self {
        Group::free_abelian(0)
    }

    pub fn with_length_mode(mut self, mode: LengthMode) -> Self {
        self.length_mode = mode;
        self
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn length_mode(&self) -> &LengthMode {
        &self.length_mode
    }

    pub fn is_abelian(&self) -> bool {
        match &self.kind {
            GroupKind::FreeAbelian { .. } | GroupKind::AbelianQuotient(_) | GroupKind::Sublattice(_) => true,
            GroupKind::Free { rank } => *rank <= 1,
            GroupKind::DirectProduct(a, b) => a.is_abelian() && b.is_abelian(),
            _ => false,
        }
    }

    /// Dimension of the coordinate vector for vector-valued kinds.
    pub fn vector_dimension(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => Some(*rank),
            GroupKind::AbelianQuotient(q) => Some(q.dimension()),
            GroupKind::Sublattice(l) => Some(l.rank()),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => format!("Z^{rank}"),
            GroupKind::Free { rank } => format!("F{rank}"),
            GroupKind::Heisenberg(HeisenbergGenerators::Standard) => "H3(x,y,z)".into(),
            GroupKind::Heisenberg(HeisenbergGenerators::Minimal) => "H3(x,z)".into(),
            GroupKind::DirectProduct(a, b) => format!("({} x {})", a.describe(), b.describe()),
            GroupKind::FreeProduct(a, b) => format!("({} * {})", a.describe(), b.describe()),
            GroupKind::Semidirect(d) => {
                let acts: Vec<String> = d.action().iter().map(ToString::to_string).collect();
                format!("Z^{} x| Z^{} by {}", d.base_rank(), d.quotient_rank(), acts.join(","))
            }
            GroupKind::AbelianQuotient(q) => {
                let parts: Vec<String> = q
                    .moduli()
                    .iter()
                    .map(|m| if m.is_zero() { "Z".to_string() } else { format!("Z/{m}") })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join(" x ")
                }
            }
            GroupKind::Sublattice(l) => format!("lattice {} in Z^{}", l.basis(), l.ambient_rank()),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => Element::Vector(vec![BigInt::zero(); *rank]),
            GroupKind::AbelianQuotient(q) => Element::Vector(vec![BigInt::zero(); q.dimension()]),
            GroupKind::Sublattice(l) => Element::Vector(vec![BigInt::zero(); l.rank()]),
            GroupKind::Free { .. } => Element::Word(Word::identity()),
            GroupKind::Heisenberg(_) => Element::Heisenberg(Triple::identity()),
            GroupKind::DirectProduct(a, b) => Element::Pair(Box::new(a.identity()), Box::new(b.identity())),
            GroupKind::FreeProduct(..) => Element::Syllables(Vec::new()),
            GroupKind::Semidirect(d) => Element::Semidirect {
                base: vec![BigInt::zero(); d.base_rank()],
                quotient: vec![BigInt::zero(); d.quotient_rank()],
            },
        }
    }

    /// The fixed generating set `s₁, …, s_n`.
    pub fn generators(&self) -> Vec<Element> {
        match &self.kind {
            GroupKind::FreeAbelian { rank } => unit_vectors(*rank),
            GroupKind::AbelianQuotient(q) => unit_vectors(q.dimension()),
            GroupKind::Sublattice(l) => unit_vectors(l.rank()),
            GroupKind::Free { rank } => (0..*rank).map(|i| Element::Word(Word::generator(i))).collect(),
            GroupKind::Heisenberg(scheme) => {
                let mut g = vec![Triple::new(1, 0, 0)];
                if *scheme == HeisenbergGenerators::Standard {
                    g.push(Triple::new(0, 1, 0));
                }
                g.push(Triple::new(0, 0, 1));
                g.into_iter().map(Element::Heisenberg).collect()
            }
            GroupKind::DirectProduct(a, b) => {
                let (ea, eb) = (a.identity(), b.identity());
                a.generators()
                    .into_iter()
                    .map(|g| Element::Pair(Box::new(g), Box::new(eb.clone())))
                    .chain(b.generators().into_iter().map(|g| Element::Pair(Box::new(ea.clone()), Box::new(g))))
                    .collect()
            }
            GroupKind::FreeProduct(a, b) => a
                .generators()
                .into_iter()
                .map(|g| Element::Syllables(vec![Syllable { factor: 0, element: g }]))
                .chain(
                    b.generators()
                        .into_iter()
                        .map(|g| Element::Syllables(vec![Syllable { factor: 1, element: g }])),
                )
                .collect(),
            GroupKind::Semidirect(d) => {
                let zq = vec![BigInt::zero(); d.quotient_rank()];
                let zh = vec![BigInt::zero(); d.base_rank()];
                let base = unit_vectors(d.base_rank()).into_iter().map(|e| match e {
                    Element::Vector(v) => Element::Semidirect { base: v, quotient: zq.clone() },
                    _ => unreachable!(),
                });
                let quot = unit_vectors(d.quotient_rank()).into_iter().map(|e| match e {
                    Element::Vector(v) => Element::Semidirect { base: zh.clone(), quotient: v },
                    _ => unreachable!(),
                });
                base.chain(quot).collect()
            }
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match &self.kind {
            GroupKind::Heisenberg(HeisenbergGenerators::Standard) => vec!["x".into(), "y".into(), "z".into()],
            GroupKind::Heisenberg(HeisenbergGenerators::Minimal) => vec!["x".into(), "z".into()],
            GroupKind::Free { rank } => (0..*rank).map(|i| Word::generator(i).to_string()).collect(),
            GroupKind::DirectProduct(a, b) | GroupKind::FreeProduct(a, b) => {
                let mut names: Vec<String> = a.generator_names().into_iter().map(|n| format!("L.{n}")).collect();
                names.extend(b.generator_names().into_iter().map(|n| format!("R.{n}")));
                names
            }
            GroupKind::Semidirect(d) => (0..d.base_rank())
                .map(|i| format!("h{}", i + 1))
                .chain((0..d.quotient_rank()).map(|i| format!("t{}", i + 1)))
                .collect(),
            _ => (0..self.generators().len()).map(|i| format!("e{}", i + 1)).collect(),
        }
    }

    /// Generators and their inverses, without duplicates or the identity,
    /// in generator order with each inverse right after its generator.
    pub fn symmetric_generators(&self) -> Result<Vec<Element>> {
        let id = self.identity();
        let mut out: Vec<Element> = Vec::new();
        for g in self.generators() {
            let inv = self.invert(&g)?;
            for x in [g, inv] {
                if x != id && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    /// Whether `g` is a well-formed normal form for this group.
    pub fn contains(&self, g: &Element) -> bool {
        match (&self.kind, g) {
            (GroupKind::FreeAbelian { rank }, Element::Vector(v)) => v.len() == *rank,
            (GroupKind::Sublattice(l), Element::Vector(v)) => v.len() == l.rank(),
            (GroupKind::AbelianQuotient(q), Element::Vector(v)) => {
                v.len() == q.dimension()
                    && v.iter().zip(q.moduli()).all(|(x, m)| m.is_zero() || (!x.is_negative() && x < m))
            }
            (GroupKind::Free { rank }, Element::Word(w)) => w.max_generator() <= *rank,
            (GroupKind::Heisenberg(_), Element::Heisenberg(_)) => true,
            (GroupKind::DirectProduct(a, b), Element::Pair(x, y)) => a.contains(x) && b.contains(y),
            (GroupKind::FreeProduct(a, b), Element::Syllables(s)) => {
                s.windows(2).all(|w| w[0].factor != w[1].factor)
                    && s.iter().all(|syl| {
                        let f = if syl.factor == 0 { a } else { b };
                        syl.factor <= 1 && f.contains(&syl.element) && syl.element != f.identity()
                    })
            }
            (GroupKind::Semidirect(d), Element::Semidirect { base, quotient }) => {
                base.len() == d.base_rank() && quotient.len() == d.quotient_rank()
            }
            _ => false,
        }
    }

    fn check(&self, g: &Element) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::KindMismatch { expected: self.describe(), found: g.to_string() })
        }
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        self.multiply_unchecked(g, h)
    }

    pub(crate) fn multiply_unchecked(&self, g: &Element, h: &Element) -> Result<Element> {
        Ok(match (&self.kind, g, h) {
            (GroupKind::AbelianQuotient(q), Element::Vector(x), Element::Vector(y)) => {
                Element::Vector(q.normalize(add(x, y)))
            }
            (_, Element::Vector(x), Element::Vector(y)) => Element::Vector(add(x, y)),
            (_, Element::Word(x), Element::Word(y)) => Element::Word(x.mul(y)),
            (_, Element::Heisenberg(x), Element::Heisenberg(y)) => Element::Heisenberg(x.mul(y)),
            (GroupKind::DirectProduct(a, b), Element::Pair(x1, y1), Element::Pair(x2, y2)) => Element::Pair(
                Box::new(a.multiply_unchecked(x1, x2)?),
                Box::new(b.multiply_unchecked(y1, y2)?),
            ),
            (GroupKind::FreeProduct(a, b), Element::Syllables(x), Element::Syllables(y)) => {
                Element::Syllables(syllable_product(a, b, x, y)?)
            }
            (
                GroupKind::Semidirect(d),
                Element::Semidirect { base: h1, quotient: q1 },
                Element::Semidirect { base: h2, quotient: q2 },
            ) => {
                let (base, quotient) = d.multiply(h1, q1, h2, q2)?;
                Element::Semidirect { base, quotient }
            }
            _ => {
                return Err(Error::KindMismatch { expected: self.describe(), found: format!("{g}, {h}") });
            }
        })
    }

    pub fn invert(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(match (&self.kind, g) {
            (GroupKind::AbelianQuotient(q), Element::Vector(x)) => {
                Element::Vector(q.normalize(x.iter().map(|v| -v).collect()))
            }
            (_, Element::Vector(x)) => Element::Vector(x.iter().map(|v| -v).collect()),
            (_, Element::Word(w)) => Element::Word(w.inverse()),
            (_, Element::Heisenberg(t)) => Element::Heisenberg(t.inverse()),
            (GroupKind::DirectProduct(a, b), Element::Pair(x, y)) => {
                Element::Pair(Box::new(a.invert(x)?), Box::new(b.invert(y)?))
            }
            (GroupKind::FreeProduct(a, b), Element::Syllables(s)) => {
                let mut out = Vec::with_capacity(s.len());
                for syl in s.iter().rev() {
                    let f = if syl.factor == 0 { a } else { b };
                    out.push(Syllable { factor: syl.factor, element: f.invert(&syl.element)? });
                }
                Element::Syllables(out)
            }
            (GroupKind::Semidirect(d), Element::Semidirect { base, quotient }) => {
                let (base, quotient) = d.invert(base, quotient)?;
                Element::Semidirect { base, quotient }
            }
            _ => unreachable!("checked above"),
        })
    }

    /// `g h g⁻¹ h⁻¹`.
    pub fn commutator(&self, g: &Element, h: &Element) -> Result<Element> {
        let gh = self.multiply(g, h)?;
        let gi = self.invert(g)?;
        let hi = self.invert(h)?;
        self.multiply(&self.multiply(&gh, &gi)?, &hi)
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Result<Element> {
        items.into_iter().try_fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    /// Evaluates a word in the generators (`Word` letters index [`Group::generators`]).
    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        let gens = self.generators();
        let mut acc = self.identity();
        for &l in w.letters() {
            let i = l.unsigned_abs() as usize - 1;
            let g = gens
                .get(i)
                .ok_or_else(|| Error::InvalidArgument(format!("letter {l} exceeds {} generators", gens.len())))?;
            let g = if l > 0 { g.clone() } else { self.invert(g)? };
            acc = self.multiply(&acc, &g)?;
        }
        Ok(acc)
    }

    /// Product of `len` generators or inverses chosen uniformly at random.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R, len: usize) -> Result<Element> {
        let gens = self.symmetric_generators()?;
        let mut acc = self.identity();
        if gens.is_empty() {
            return Ok(acc);
        }
        for _ in 0..len {
            acc = self.multiply_unchecked(&acc, &gens[rng.gen_range(0..gens.len())])?;
        }
        Ok(acc)
    }

    /// Closed-form length under this group's mode; `BfsOracle` mode needs a census.
    pub fn closed_form_length(&self, g: &Element) -> Result<LengthValue> {
        self.check(g)?;
        let allow_quasi = match self.length_mode {
            LengthMode::Exact => false,
            LengthMode::Quasi => true,
            LengthMode::BfsOracle { .. } => {
                return Err(Error::Unsupported(format!(
                    "{} uses BFS lengths; enumerate a ball first",
                    self.describe()
                )))
            }
        };
        self.length_inner(g, allow_quasi)
    }

    fn length_inner(&self, g: &Element, allow_quasi: bool) -> Result<LengthValue> {
        Ok(match (&self.kind, g) {
            (GroupKind::AbelianQuotient(q), Element::Vector(v)) => LengthValue::exact(q.length(v)),
            (_, Element::Vector(v)) => LengthValue::exact(l1_norm(v)),
            (_, Element::Word(w)) => LengthValue::exact(BigInt::from(w.len())),
            (GroupKind::Heisenberg(_), Element::Heisenberg(t)) => {
                if !allow_quasi {
                    return Err(Error::Unsupported(
                        "no closed-form Heisenberg word length; use quasi or BFS length".into(),
                    ));
                }
                LengthValue::quasi(t.quasi_length())
            }
            (GroupKind::DirectProduct(a, b), Element::Pair(x, y)) => {
                let (lx, ly) = (a.length_inner(x, allow_quasi)?, b.length_inner(y, allow_quasi)?);
                LengthValue { value: lx.value + ly.value, exactness: lx.exactness.min(ly.exactness) }
            }
            (GroupKind::FreeProduct(a, b), Element::Syllables(s)) => {
                let mut total = BigInt::zero();
                for syl in s {
                    let f = if syl.factor == 0 { a } else { b };
                    total += f.length_inner(&syl.element, allow_quasi)?.value;
                }
                LengthValue::exact(total)
            }
            (GroupKind::Semidirect(d), Element::Semidirect { base, quotient }) => {
                if !d.is_isometric() {
                    return Err(Error::Unsupported(
                        "semidirect product with a distorting action has no closed-form length; use BFS".into(),
                    ));
                }
                LengthValue::exact(l1_norm(base) + l1_norm(quotient))
            }
            _ => unreachable!("checked by caller"),
        })
    }

    /// `Γ_j` and `Γ_j/Γ_{j+1}`; Heisenberg (`j ≤ 3`) and abelian kinds (`j ≤ 2`).
    pub fn lower_central_layer(&self, j: u32) -> Result<LowerCentralLayer> {
        let unsupported = || Error::Unsupported(format!("lower central term {j} of {}", self.describe()));
        match &self.kind {
            GroupKind::Heisenberg(_) => match j {
                1 => Ok(LowerCentralLayer {
                    j,
                    term: self.clone(),
                    quotient: Group::free_abelian(2),
                    term_generators: self.generators(),
                }),
                2 => Ok(LowerCentralLayer {
                    j,
                    term: Group::free_abelian(1),
                    quotient: Group::free_abelian(1),
                    term_generators: vec![Element::Heisenberg(Triple::new(0, 1, 0))],
                }),
                3 => Ok(LowerCentralLayer {
                    j,
                    term: Group::trivial(),
                    quotient: Group::trivial(),
                    term_generators: Vec::new(),
                }),
                _ => Err(unsupported()),
            },
            _ if self.is_abelian() => match j {
                1 => Ok(LowerCentralLayer {
                    j,
                    term: self.clone(),
                    quotient: self.clone(),
                    term_generators: self.generators(),
                }),
                2 => Ok(LowerCentralLayer {
                    j,
                    term: Group::trivial(),
                    quotient: Group::trivial(),
                    term_generators: Vec::new(),
                }),
                _ => Err(unsupported()),
            },
            _ => Err(unsupported()),
        }
    }
}

impl LengthFunction for Group {
    fn length(&self, g: &Element) -> Result<LengthValue> {
        self.closed_form_length(g)
    }
}

fn unit_vectors(n: usize) -> Vec<Element> {
    (0..n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = BigInt::from(1);
            Element::Vector(v)
        })
        .collect()
}

fn add(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn syllable_product(a: &Group, b: &Group, x: &[Syllable], y: &[Syllable]) -> Result<Vec<Syllable>> {
    let mut out = x.to_vec();
    let mut rest = y.iter();
    for syl in rest.by_ref() {
        match out.last() {
            Some(last) if last.factor == syl.factor => {
                let f = if syl.factor == 0 { a } else { b };
                let merged = f.multiply_unchecked(&last.element, &syl.element)?;
                out.pop();
                if merged != f.identity() {
                    out.push(Syllable { factor: syl.factor, element: merged });
                    break;
                }
            }
            _ => {
                out.push(syl.clone());
                break;
            }
        }
    }
    out.extend(rest.cloned());
    Ok(out)
}

fn fmt_vec(f: &mut fmt::Formatter<'_>, v: &[BigInt]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) => fmt_vec(f, v),
            Element::Word(w) => write!(f, "{w}"),
            Element::Heisenberg(t) => write!(f, "{t}"),
            Element::Pair(a, b) => write!(f, "<{a}; {b}>"),
            Element::Semidirect { base, quotient } => {
                write!(f, "(")?;
                fmt_vec(f, base)?;
                write!(f, ",")?;
                fmt_vec(f, quotient)?;
                write!(f, ")")
            }
            Element::Syllables(s) => {
                if s.is_empty() {
                    return write!(f, "1");
                }
                for (i, syl) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}:{}", if syl.factor == 0 { "L" } else { "R" }, syl.element)?;
                }
                Ok(())
            }
        }
    }
}
