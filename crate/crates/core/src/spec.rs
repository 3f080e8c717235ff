//! JSON instance specifications.
//!
//! Every object carries a `"kind"` tag. Integers may be JSON numbers or
//! decimal strings, so entries beyond 64 bits round-trip exactly.
//!
//! ```json
//! {
//!   "group": {"kind": "free_abelian", "rank": 2},
//!   "endo": {"kind": "matrix", "rows": [[0, 2], [1, 0]]},
//!   "options": {"max_m": 20}
//! }
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::endo::{Endomorphism, Subgroup};
use crate::error::{Error, Result};
use crate::group::{Group, HeisenbergGenerators, LengthMode, Word};
use crate::matrix::IntMatrix;
use crate::products::{self, SemidirectDescriptor, SublatticeDescriptor};

/// An arbitrary-precision integer literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                v.trim().parse().map(Int).map_err(|_| E::custom(format!("invalid integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<i64> for Int {
    fn from(x: i64) -> Self {
        Int(x.into())
    }
}

pub type MatrixSpec = Vec<Vec<Int>>;

pub fn matrix_spec(m: &IntMatrix) -> MatrixSpec {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Int).collect()).collect()
}

pub fn small_matrix(rows: &[Vec<i64>]) -> MatrixSpec {
    rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorScheme {
    #[default]
    Standard,
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
    },
    Heisenberg {
        #[serde(default)]
        generators: GeneratorScheme,
    },
    DirectProduct {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    FreeProduct {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    /// `Z^base_rank ⋊ Z^s` with one action matrix per quotient generator.
    Semidirect {
        base_rank: usize,
        action: Vec<MatrixSpec>,
    },
    /// The sublattice spanned by the columns of `basis`.
    Sublattice {
        basis: MatrixSpec,
    },
    /// `Z^n` modulo the lattice spanned by the columns of `relations`.
    AbelianQuotient {
        relations: MatrixSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EndoSpec {
    Identity,
    Matrix {
        rows: MatrixSpec,
    },
    /// Images of the generators as words: `a`, `b`, … generators, `A`, `B`, … inverses.
    Words {
        images: Vec<String>,
    },
    Heisenberg {
        lambda: Int,
        gamma: Int,
    },
    Product {
        left: Box<EndoSpec>,
        right: Box<EndoSpec>,
    },
    Semidirect {
        base: MatrixSpec,
        quotient: MatrixSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubgroupSpec {
    Trivial,
    Sublattice { basis: MatrixSpec },
    LowerCentral { j: u32 },
    Factor { index: u8 },
    SemidirectBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthModeSpec {
    Exact,
    Quasi,
    Bfs,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_mode: Option<LengthModeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Exponent for power-law checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    /// Threshold for `H_r` probes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub group: GroupSpec,
    #[serde(default = "identity_spec")]
    pub endo: EndoSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
    #[serde(default)]
    pub options: OptionsSpec,
}

fn identity_spec() -> EndoSpec {
    EndoSpec::Identity
}

/// One entry of a verification suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub law: String,
    pub instance: InstanceSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckSpec>,
}

/// A parsed instance turned into descriptors.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub label: String,
    pub group: Group,
    pub endo: Endomorphism,
    pub subgroup: Option<Subgroup>,
    pub options: OptionsSpec,
}

/// Parses JSON, reporting line and column on syntax or shape errors.
pub fn parse_instance(text: &str) -> Result<InstanceSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_suite(text: &str) -> Result<SuiteSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("spec values serialize")
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{path}: {msg}")),
        other => Error::Parse(format!("{path}: {other}")),
    }
}

fn build_matrix(path: &str, rows: &MatrixSpec) -> Result<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    if rows.is_empty() {
        return Err(Error::Parse(format!("{path}: empty matrix")));
    }
    IntMatrix::from_rows(&rows).map_err(|e| at(path, e))
}

impl GroupSpec {
    pub fn build(&self, path: &str) -> Result<Group> {
        Ok(match self {
            GroupSpec::FreeAbelian { rank } => Group::free_abelian(*rank),
            GroupSpec::Free { rank } => Group::free(*rank),
            GroupSpec::Heisenberg { generators } => Group::heisenberg(match generators {
                GeneratorScheme::Standard => HeisenbergGenerators::Standard,
                GeneratorScheme::Minimal => HeisenbergGenerators::Minimal,
            }),
            GroupSpec::DirectProduct { left, right } => {
                products::direct_product(left.build(&format!("{path}.left"))?, right.build(&format!("{path}.right"))?)
            }
            GroupSpec::FreeProduct { left, right } => {
                products::free_product(left.build(&format!("{path}.left"))?, right.build(&format!("{path}.right"))?)
                    .map_err(|e| at(path, e))?
            }
            GroupSpec::Semidirect { base_rank, action } => {
                let mats = action
                    .iter()
                    .enumerate()
                    .map(|(i, m)| build_matrix(&format!("{path}.action[{i}]"), m))
                    .collect::<Result<Vec<_>>>()?;
                products::semidirect(*base_rank, mats).map_err(|e| at(path, e))?
            }
            GroupSpec::Sublattice { basis } => {
                products::sublattice(build_matrix(&format!("{path}.basis"), basis)?).map_err(|e| at(path, e))?
            }
            GroupSpec::AbelianQuotient { relations } => {
                let lat = SublatticeDescriptor::new(build_matrix(&format!("{path}.relations"), relations)?)
                    .map_err(|e| at(path, e))?;
                products::abelian_quotient(lat).map_err(|e| at(path, e))?
            }
        })
    }
}

impl EndoSpec {
    pub fn build(&self, path: &str, group: &Group) -> Result<Endomorphism> {
        let alpha = self.build_raw(path, group)?;
        alpha.validate(group).map_err(|e| at(path, e))?;
        Ok(alpha)
    }

    fn build_raw(&self, path: &str, group: &Group) -> Result<Endomorphism> {
        use crate::group::GroupKind;
        Ok(match self {
            EndoSpec::Identity => Endomorphism::identity(group).map_err(|e| at(path, e))?,
            EndoSpec::Matrix { rows } => Endomorphism::Matrix(build_matrix(&format!("{path}.rows"), rows)?),
            EndoSpec::Words { images } => {
                let rank = match group.kind() {
                    GroupKind::Free { rank } => *rank,
                    _ => return Err(Error::Parse(format!("{path}: word images need a free group"))),
                };
                let words = images
                    .iter()
                    .enumerate()
                    .map(|(i, w)| Word::parse(w, rank).map_err(|e| at(&format!("{path}.images[{i}]"), e)))
                    .collect::<Result<Vec<_>>>()?;
                Endomorphism::Words(words)
            }
            EndoSpec::Heisenberg { lambda, gamma } => {
                Endomorphism::Heisenberg { lambda: lambda.0.clone(), gamma: gamma.0.clone() }
            }
            EndoSpec::Product { left, right } => {
                let (a, b) = match group.kind() {
                    GroupKind::DirectProduct(a, b) | GroupKind::FreeProduct(a, b) => (a, b),
                    _ => return Err(Error::Parse(format!("{path}: product map needs a product group"))),
                };
                Endomorphism::Product(
                    Box::new(left.build_raw(&format!("{path}.left"), a)?),
                    Box::new(right.build_raw(&format!("{path}.right"), b)?),
                )
            }
            EndoSpec::Semidirect { base, quotient } => Endomorphism::Semidirect {
                base: build_matrix(&format!("{path}.base"), base)?,
                quotient: build_matrix(&format!("{path}.quotient"), quotient)?,
            },
        })
    }
}

impl SubgroupSpec {
    pub fn build(&self, path: &str) -> Result<Subgroup> {
        Ok(match self {
            SubgroupSpec::Trivial => Subgroup::Trivial,
            SubgroupSpec::Sublattice { basis } => Subgroup::Sublattice(
                SublatticeDescriptor::new(build_matrix(&format!("{path}.basis"), basis)?).map_err(|e| at(path, e))?,
            ),
            SubgroupSpec::LowerCentral { j } => Subgroup::LowerCentral(*j),
            SubgroupSpec::Factor { index } => {
                if *index > 1 {
                    return Err(Error::Parse(format!("{path}.index: factor index must be 0 or 1")));
                }
                Subgroup::Factor(*index)
            }
            SubgroupSpec::SemidirectBase => Subgroup::SemidirectBase,
        })
    }
}

impl InstanceSpec {
    pub fn new(group: GroupSpec, endo: EndoSpec) -> Self {
        InstanceSpec { label: None, group, endo, subgroup: None, options: OptionsSpec::default() }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_subgroup(mut self, h: SubgroupSpec) -> Self {
        self.subgroup = Some(h);
        self
    }

    pub fn with_options(mut self, options: OptionsSpec) -> Self {
        self.options = options;
        self
    }

    pub fn build(&self) -> Result<Instance> {
        let mut group = self.group.build("group")?;
        match self.options.length_mode {
            None => {}
            Some(LengthModeSpec::Exact) => group = group.with_length_mode(LengthMode::Exact),
            Some(LengthModeSpec::Quasi) => group = group.with_length_mode(LengthMode::Quasi),
            Some(LengthModeSpec::Bfs) => {
                let radius = self.options.radius.unwrap_or(12);
                group = group.with_length_mode(LengthMode::BfsOracle { radius });
            }
        }
        let endo = self.endo.build("endo", &group)?;
        let subgroup = self.subgroup.as_ref().map(|h| h.build("subgroup")).transpose()?;
        if let Some(t) = self.options.tolerance {
            if t.is_nan() || t < 0.0 {
                return Err(Error::Parse(format!("options.tolerance: must be nonnegative, got {t}")));
            }
        }
        if self.options.max_m == Some(0) {
            return Err(Error::Parse("options.max_m: must be at least 1".into()));
        }
        let label = self.label.clone().unwrap_or_else(|| format!("{}, alpha = {endo}", group.describe()));
        Ok(Instance { label, group, endo, subgroup, options: self.options.clone() })
    }
}

/// A semidirect descriptor from a built group, if it is one.
pub fn semidirect_descriptor(group: &Group) -> Option<&SemidirectDescriptor> {
    match group.kind() {
        crate::group::GroupKind::Semidirect(d) => Some(d),
        _ => None,
    }
}
