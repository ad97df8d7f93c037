//! The input to every Tamagawa computation: a group with marked subgroup pairs
//! and a set of decomposition groups.

use std::collections::BTreeSet;

use crate::abelian::relative_abelianization;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// One factor `K_i` of the étale algebra: `H` fixes `K_i`, `Ñ ⊇ H` fixes `E_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPair {
    pub h: Subgroup,
    pub ntilde: Subgroup,
}

/// `(G, [(H_i, Ñ_i)], 𝒟)` plus the CM involution when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormTorusDatum {
    group: FiniteGroup,
    pairs: Vec<SubgroupPair>,
    iota: Option<usize>,
    decomposition_groups: Vec<Subgroup>,
    include_all_cyclic: bool,
    declared_complete: bool,
}

/// Which fast-path hypotheses hold, per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastPathFlags {
    pub normal_ntilde: Vec<bool>,
    /// `H_i ⊴ Ñ_i` with `Ñ_i/H_i` abelian.
    pub abelian_n: Vec<bool>,
    pub cyclic_n: Vec<bool>,
}

impl FastPathFlags {
    pub fn all_hold(&self) -> bool {
        self.normal_ntilde.iter().chain(&self.abelian_n).chain(&self.cyclic_n).all(|&b| b)
    }
}

impl NormTorusDatum {
    pub fn new(
        group: FiniteGroup,
        pairs: Vec<SubgroupPair>,
        iota: Option<usize>,
        decomposition_groups: Vec<Subgroup>,
        include_all_cyclic: bool,
        declared_complete: bool,
    ) -> Result<Self> {
        let n = group.order();
        let valid = |s: &Subgroup| {
            s.elements().iter().all(|&x| x < n)
                && s.contains(group.identity())
                && s.elements().iter().all(|&a| s.elements().iter().all(|&b| s.contains(group.mul(a, b))))
        };
        for (i, p) in pairs.iter().enumerate() {
            if !valid(&p.h) || !valid(&p.ntilde) {
                return Err(Error::domain("pair subgroup is not a subgroup").with_context(format!("pair {i}")));
            }
            if !p.h.is_subset_of(&p.ntilde) {
                return Err(Error::domain("H is not contained in Ñ").with_context(format!("pair {i}")));
            }
        }
        if let Some((k, _)) = decomposition_groups.iter().enumerate().find(|(_, d)| !valid(d)) {
            return Err(Error::domain("decomposition group is not a subgroup").with_context(format!("entry {k}")));
        }
        if let Some(t) = iota {
            if t >= n || t == group.identity() || group.mul(t, t) != group.identity() || !group.is_central(t) {
                return Err(Error::domain("iota must be a central element of order 2"));
            }
            for (i, p) in pairs.iter().enumerate() {
                if p.ntilde.order() != 2 * p.h.order() || !p.ntilde.contains(t) || p.h.contains(t) {
                    return Err(Error::domain("CM pair needs Ñ = H·⟨iota⟩ with [Ñ : H] = 2")
                        .with_context(format!("pair {i}")));
                }
            }
        }
        Ok(NormTorusDatum { group, pairs, iota, decomposition_groups, include_all_cyclic, declared_complete })
    }

    /// A CM field: one pair `H ⊂ H·⟨ι⟩`.
    pub fn cm_field(
        group: FiniteGroup,
        h: Subgroup,
        iota: usize,
        decomposition_groups: Vec<Subgroup>,
        include_all_cyclic: bool,
        declared_complete: bool,
    ) -> Result<Self> {
        let mut gens = h.elements().to_vec();
        gens.push(iota);
        let ntilde = group.subgroup_generated(&gens);
        Self::new(group, vec![SubgroupPair { h, ntilde }], Some(iota), decomposition_groups, include_all_cyclic, declared_complete)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn pairs(&self) -> &[SubgroupPair] {
        &self.pairs
    }

    pub fn iota(&self) -> Option<usize> {
        self.iota
    }

    pub fn is_cm(&self) -> bool {
        self.iota.is_some()
    }

    /// The decomposition groups as supplied.
    pub fn decomposition_groups(&self) -> &[Subgroup] {
        &self.decomposition_groups
    }

    pub fn include_all_cyclic(&self) -> bool {
        self.include_all_cyclic
    }

    pub fn declared_complete(&self) -> bool {
        self.declared_complete
    }

    /// Same datum with a different decomposition set.
    pub fn with_decomposition_groups(&self, groups: Vec<Subgroup>, include_all_cyclic: bool, declared_complete: bool) -> Self {
        NormTorusDatum { decomposition_groups: groups, include_all_cyclic, declared_complete, ..self.clone() }
    }

    /// `𝒟` as used by every computation: the supplied groups, every cyclic
    /// subgroup when requested, and `⟨ι⟩` for CM data; one representative per
    /// conjugacy class, sorted.
    pub fn effective_decomposition_set(&self) -> Vec<Subgroup> {
        let g = &self.group;
        let mut set: BTreeSet<Subgroup> = self.decomposition_groups.iter().map(|d| g.canonical_conjugate(d)).collect();
        if self.include_all_cyclic {
            set.extend(g.cyclic_subgroups_up_to_conjugacy());
        }
        if let Some(t) = self.iota {
            set.insert(g.canonical_conjugate(&g.subgroup_generated(&[t])));
        }
        set.into_iter().collect()
    }

    /// `|N_i| = [Ñ_i : H_i]`.
    pub fn n_orders(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.ntilde.order() / p.h.order()).collect()
    }

    pub fn fast_path_flags(&self) -> Result<FastPathFlags> {
        let mut flags = FastPathFlags { normal_ntilde: vec![], abelian_n: vec![], cyclic_n: vec![] };
        for p in &self.pairs {
            flags.normal_ntilde.push(self.group.is_normal(&p.ntilde));
            let nab = relative_abelianization(&self.group, &p.ntilde, &p.h)?;
            flags.abelian_n.push(nab.group().order() as usize * p.h.order() == p.ntilde.order());
            flags.cyclic_n.push(nab.group().is_cyclic());
        }
        Ok(flags)
    }
}
