#![allow(dead_code)]

pub mod corpus;
pub mod transfer;

use tamagawa::{FiniteGroup, NormTorusDatum, Subgroup, SubgroupPair};

/// `⟨x, y | x^m = 1, y² = x^t, y x y⁻¹ = x^r⟩` of order `2m`, elements
/// `x^a y^e ↦ a + m·e`. Needs `r² ≡ 1` and `r·t ≡ t (mod m)`.
pub fn metacyclic(m: usize, r: usize, t: usize) -> FiniteGroup {
    let mut rows = vec![vec![0; 2 * m]; 2 * m];
    for (i, row) in rows.iter_mut().enumerate() {
        let (a, e) = (i % m, i / m);
        for (j, cell) in row.iter_mut().enumerate() {
            let (b, f) = (j % m, j / m);
            // x^a y^e x^b y^f = x^{a + r^e b} y^{e+f}
            let mut exp = a + if e == 1 { r * b } else { b };
            let mut ey = e + f;
            if ey == 2 {
                exp += t;
                ey = 0;
            }
            *cell = exp % m + m * ey;
        }
    }
    FiniteGroup::from_table(rows).unwrap()
}

/// Dicyclic of order `4n`: `Q8` for `n = 2`, `Q16` for `n = 4`.
pub fn dicyclic(n: usize) -> FiniteGroup {
    metacyclic(2 * n, 2 * n - 1, n)
}

pub fn semidihedral16() -> FiniteGroup {
    metacyclic(8, 3, 0)
}

pub fn modular16() -> FiniteGroup {
    metacyclic(8, 5, 0)
}

pub fn perms(degree: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
    let gens: Vec<Vec<usize>> = gens
        .iter()
        .map(|cycles| {
            let cycles: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
            tamagawa::group::permutation_from_cycles(degree, &cycles).unwrap()
        })
        .collect();
    FiniteGroup::from_permutations(degree, &gens).unwrap()
}

pub fn s4() -> FiniteGroup {
    perms(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]])
}

pub fn a4() -> FiniteGroup {
    perms(4, &[&[&[0, 1, 2]], &[&[0, 1], &[2, 3]]])
}

pub fn cyc(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).unwrap()
}

pub fn dih(n: usize) -> FiniteGroup {
    FiniteGroup::dihedral(n).unwrap()
}

pub fn prod(gs: &[&FiniteGroup]) -> FiniteGroup {
    FiniteGroup::direct_product(gs).unwrap()
}

/// Named groups of order at most `max_order`.
pub fn group_corpus(max_order: usize) -> Vec<(String, FiniteGroup)> {
    let q8 = FiniteGroup::quaternion8();
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    for n in 2..=max_order {
        out.push((format!("C{n}"), cyc(n)));
    }
    for n in 3..=max_order / 2 {
        out.push((format!("D{n}"), dih(n)));
    }
    for n in 2..=max_order / 4 {
        out.push((format!("Dic{n}"), dicyclic(n)));
    }
    let mut push = |name: &str, g: FiniteGroup| out.push((name.to_string(), g));
    push("C2xC2", prod(&[&cyc(2), &cyc(2)]));
    push("C2^3", prod(&[&cyc(2), &cyc(2), &cyc(2)]));
    push("C2^4", prod(&[&cyc(2), &cyc(2), &cyc(2), &cyc(2)]));
    push("C4xC2", prod(&[&cyc(4), &cyc(2)]));
    push("C4xC4", prod(&[&cyc(4), &cyc(4)]));
    push("C4xC2xC2", prod(&[&cyc(4), &cyc(2), &cyc(2)]));
    push("C6xC2", prod(&[&cyc(6), &cyc(2)]));
    push("C3xC3", prod(&[&cyc(3), &cyc(3)]));
    push("C8xC2", prod(&[&cyc(8), &cyc(2)]));
    push("Q8xC2", prod(&[&q8, &cyc(2)]));
    push("D4xC2", prod(&[&dih(4), &cyc(2)]));
    push("D3xC3", prod(&[&dih(3), &cyc(3)]));
    push("SD16", semidihedral16());
    push("M16", modular16());
    push("A4", a4());
    push("S4", s4());
    push("A4xC2", prod(&[&a4(), &cyc(2)]));
    push("Q8xC4", prod(&[&q8, &cyc(4)]));
    push("Q8xC2xC2", prod(&[&q8, &cyc(2), &cyc(2)]));
    push("D4xC4", prod(&[&dih(4), &cyc(4)]));
    push("C2^5", prod(&[&cyc(2), &cyc(2), &cyc(2), &cyc(2), &cyc(2)]));
    out.retain(|(_, g)| g.order() <= max_order);
    out
}

/// Every subgroup, found as joins of cyclic subgroups.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let cyclic = g.cyclic_subgroups();
    let mut found: Vec<Subgroup> = vec![g.trivial_subgroup()];
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                let j = g.join(s, c);
                if !found.contains(&j) {
                    found.push(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by_key(|s| (s.order(), s.elements().to_vec()));
    found
}

/// Central involutions.
pub fn central_involutions(g: &FiniteGroup) -> Vec<usize> {
    (0..g.order()).filter(|&x| x != g.identity() && g.mul(x, x) == g.identity() && g.is_central(x)).collect()
}

/// The Galois CM datum `(G, H = 1, Ñ = ⟨ι⟩)` with only cyclic decomposition
/// groups.
pub fn galois_cm(g: &FiniteGroup, iota: usize) -> NormTorusDatum {
    NormTorusDatum::cm_field(g.clone(), g.trivial_subgroup(), iota, vec![], true, false).unwrap()
}

pub fn norm_datum(g: &FiniteGroup, pairs: &[(Subgroup, Subgroup)], dec: Vec<Subgroup>) -> NormTorusDatum {
    let pairs = pairs.iter().map(|(h, n)| SubgroupPair { h: h.clone(), ntilde: n.clone() }).collect();
    NormTorusDatum::new(g.clone(), pairs, None, dec, true, false).unwrap()
}
