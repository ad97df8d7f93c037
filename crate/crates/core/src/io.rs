//! JSON formats for data and reports.
//!
//! Groups are read from a Cayley table, permutation generators in cycle
//! notation, or a named family, and always written back as a table.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::datum::{NormTorusDatum, SubgroupPair};
use crate::error::{Error, Result};
use crate::group::{permutation_from_cycles, FiniteGroup, Subgroup};

/// `{"num": .., "den": ..}`; integers outside `i64` become decimal strings.
pub fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson::from(q).serialize(s)
}

pub fn serialize_opt_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    q.as_ref().map(RationalJson::from).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        x.to_i64().map_or_else(|| JsonInt::Big(x.to_string()), JsonInt::Small)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: JsonInt,
    pub den: JsonInt,
}

impl From<&BigRational> for RationalJson {
    fn from(q: &BigRational) -> Self {
        RationalJson { num: q.numer().into(), den: q.denom().into() }
    }
}

/// How a group may be written in a datum file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Table { order: usize, table: Vec<Vec<usize>> },
    Permutations { degree: usize, permutation_generators: Vec<Vec<Vec<usize>>> },
    Family { family: String, #[serde(default)] n: Option<u64>, #[serde(default)] factors: Vec<GroupJson> },
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupJson::Table { order, table } => {
                if table.len() != *order {
                    return Err(Error::domain("table has the wrong number of rows"));
                }
                FiniteGroup::from_table(table.clone())
            }
            GroupJson::Permutations { degree, permutation_generators } => {
                let gens = permutation_generators
                    .iter()
                    .map(|cycles| permutation_from_cycles(*degree, cycles))
                    .collect::<Result<Vec<_>>>()?;
                FiniteGroup::from_permutations(*degree, &gens)
            }
            GroupJson::Family { family, n, factors } => {
                let need = || n.ok_or_else(|| Error::domain(format!("family {family} needs n")));
                match family.as_str() {
                    "cyclic" => FiniteGroup::cyclic(need()? as usize),
                    "dihedral" => FiniteGroup::dihedral(need()? as usize),
                    "quaternion8" => Ok(FiniteGroup::quaternion8()),
                    "units_mod" => FiniteGroup::units_mod(need()?),
                    "product" => {
                        let gs = factors.iter().map(|f| f.build()).collect::<Result<Vec<_>>>()?;
                        FiniteGroup::direct_product(&gs.iter().collect::<Vec<_>>())
                    }
                    other => Err(Error::domain(format!("unknown group family {other}"))),
                }
            }
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson::Table { order: g.order(), table: g.table_rows() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    #[serde(rename = "Ntilde")]
    pub ntilde: Vec<usize>,
}

/// The datum file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumJson {
    pub group: GroupJson,
    pub pairs: Vec<PairJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota: Option<usize>,
    #[serde(default)]
    pub decomposition_groups: Vec<Vec<usize>>,
    #[serde(default)]
    pub include_all_cyclic: bool,
    #[serde(default)]
    pub declared_complete: bool,
}

fn subgroup_of(g: &FiniteGroup, elements: &[usize], what: &str) -> Result<Subgroup> {
    if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
        return Err(Error::domain(format!("{what} lists element {x} outside the group")));
    }
    Ok(g.subgroup_generated(elements))
}

impl DatumJson {
    /// Subgroups are the closures of the listed elements.
    pub fn build(&self) -> Result<NormTorusDatum> {
        let g = self.group.build()?;
        let pairs = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok(SubgroupPair {
                    h: subgroup_of(&g, &p.h, &format!("pair {i} H"))?,
                    ntilde: subgroup_of(&g, &p.ntilde, &format!("pair {i} Ntilde"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let decomposition = self
            .decomposition_groups
            .iter()
            .enumerate()
            .map(|(k, d)| subgroup_of(&g, d, &format!("decomposition group {k}")))
            .collect::<Result<Vec<_>>>()?;
        NormTorusDatum::new(g, pairs, self.iota, decomposition, self.include_all_cyclic, self.declared_complete)
    }

    pub fn from_datum(d: &NormTorusDatum) -> Self {
        DatumJson {
            group: GroupJson::from_group(d.group()),
            pairs: d
                .pairs()
                .iter()
                .map(|p| PairJson { h: p.h.elements().to_vec(), ntilde: p.ntilde.elements().to_vec() })
                .collect(),
            iota: d.iota(),
            decomposition_groups: d.decomposition_groups().iter().map(|s| s.elements().to_vec()).collect(),
            include_all_cyclic: d.include_all_cyclic(),
            declared_complete: d.declared_complete(),
        }
    }
}

pub fn parse_datum(text: &str) -> Result<NormTorusDatum> {
    let json: DatumJson = serde_json::from_str(text).map_err(|e| Error::domain("malformed datum JSON").with_context(e.to_string()))?;
    json.build()
}

/// Pretty JSON with a trailing newline; stable for identical inputs.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn datum_to_json(d: &NormTorusDatum) -> String {
    to_canonical_json(&DatumJson::from_datum(d))
}
