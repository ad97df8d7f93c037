//! Transfer properties as reusable checks; each panics on the first
//! counterexample and returns how many cases it covered.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tamagawa::abelian::{abelianization, subgroup_abelianization};
use tamagawa::group::{product_index, Side};
use tamagawa::transfer::{
    canonical_section, relative_transfer, transfer, transfer_cyclic_double_coset, transfer_element,
    transfer_element_right, transfer_surjectivity_check, transfer_with_section,
};
use tamagawa::{FiniteGroup, Subgroup};

use super::{all_subgroups, cyc, dih, group_corpus, prod};

fn random_section(g: &FiniteGroup, h: &Subgroup, side: Side, rng: &mut ChaCha8Rng) -> Vec<usize> {
    g.cosets(h, side).iter().map(|c| c[rng.gen_range(0..c.len())]).collect()
}

/// `(G, H)` with `|G| ≤ 32` and `2 ≤ [G:H] ≤ 16`, drawn with a fixed seed
/// and always including non-normal `H` in non-abelian `G`.
pub fn instances(count: usize) -> Vec<(String, FiniteGroup, Subgroup)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a3);
    let mut pool = Vec::new();
    for (name, g) in group_corpus(32) {
        if g.order() < 4 {
            continue;
        }
        for h in all_subgroups(&g) {
            let index = g.order() / h.order();
            if (2..=16).contains(&index) {
                pool.push((name.clone(), g.clone(), h));
            }
        }
    }
    let (mut twisted, mut rest): (Vec<_>, Vec<_>) = pool.into_iter().partition(|(_, g, h)| !g.is_normal(h));
    twisted.shuffle(&mut rng);
    rest.shuffle(&mut rng);
    let mut out: Vec<_> = twisted.into_iter().take(count / 3).collect();
    out.extend(rest.into_iter().take(count - out.len()));
    out
}

pub fn section_independence(n_instances: usize, n_sections: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut cases = 0;
    for (name, g, h) in instances(n_instances) {
        let gab = abelianization(&g);
        let hab = subgroup_abelianization(&g, &h);
        let reference = transfer(&g, &h).unwrap();
        for _ in 0..n_sections {
            let sec = random_section(&g, &h, Side::Left, &mut rng);
            let v = transfer_with_section(&g, &h, &sec, &gab, &hab).unwrap();
            assert_eq!(v, reference, "{name}, |H| = {}", h.order());
            cases += 1;
        }
    }
    cases
}

pub fn right_coset_agreement(n_instances: usize, n_sections: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut cases = 0;
    for (name, g, h) in instances(n_instances) {
        let gab = abelianization(&g);
        let hab = subgroup_abelianization(&g, &h);
        let ver = transfer(&g, &h).unwrap();
        for _ in 0..n_sections {
            let sec = random_section(&g, &h, Side::Right, &mut rng);
            for x in 0..g.order() {
                let right = hab.project(transfer_element_right(&g, &h, &sec, x));
                assert_eq!(right, ver.apply(&gab.project(x)), "{name}, x = {x}");
                cases += 1;
            }
        }
    }
    cases
}

/// `Ver_{G1×G2, H1×H2}(g1, g2) = (Ver(g1)^{[G2:H2]}, Ver(g2)^{[G1:H1]})`.
pub fn product_formula() -> usize {
    let small = [cyc(2), cyc(3), cyc(4), prod(&[&cyc(2), &cyc(2)]), dih(3), dih(4), FiniteGroup::quaternion8()];
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut cases = 0;
    for (i, g1) in small.iter().enumerate() {
        for g2 in &small[i..] {
            let subs1 = all_subgroups(g1);
            let subs2 = all_subgroups(g2);
            let g = prod(&[g1, g2]);
            let orders = [g1.order(), g2.order()];
            for _ in 0..4 {
                let h1 = subs1.choose(&mut rng).unwrap();
                let h2 = subs2.choose(&mut rng).unwrap();
                let (i1, i2) = (g1.order() / h1.order(), g2.order() / h2.order());
                let el: Vec<usize> =
                    h1.elements().iter().flat_map(|&a| h2.elements().iter().map(move |&b| product_index(&orders, &[a, b]))).collect();
                let h = g.subgroup_from_elements(&el).unwrap();
                let hab = subgroup_abelianization(&g, &h);
                let sec = canonical_section(&g, &h, Side::Left);
                let sec1 = canonical_section(g1, h1, Side::Left);
                let sec2 = canonical_section(g2, h2, Side::Left);
                for a in 0..g1.order() {
                    for b in 0..g2.order() {
                        let x = product_index(&orders, &[a, b]);
                        let lhs = transfer_element(&g, &h, &sec, x);
                        let v1 = g1.pow(transfer_element(g1, h1, &sec1, a), i2 as i64);
                        let v2 = g2.pow(transfer_element(g2, h2, &sec2, b), i1 as i64);
                        let rhs = product_index(&orders, &[v1, v2]);
                        assert_eq!(hab.project(lhs), hab.project(rhs), "({a}, {b}) in {}×{}", g1.order(), g2.order());
                        cases += 1;
                    }
                }
            }
        }
    }
    cases
}

/// For normal `H`: `Ver(h) = ∏_{x ∈ G/H} x h x⁻¹` in `H^{ab}`.
pub fn norm_compatibility(max_order: usize) -> usize {
    let mut cases = 0;
    for (name, g) in group_corpus(max_order) {
        for h in all_subgroups(&g).into_iter().filter(|h| g.is_normal(h)) {
            let hab = subgroup_abelianization(&g, &h);
            let sec = canonical_section(&g, &h, Side::Left);
            for &y in h.elements() {
                let norm = sec.iter().fold(g.identity(), |acc, &x| g.mul(acc, g.conj(x, y)));
                assert_eq!(hab.project(transfer_element(&g, &h, &sec, y)), hab.project(norm), "{name}");
                cases += 1;
            }
        }
    }
    cases
}

/// `π ∘ Ver_{G,H} = Ver_{G/K,H/K} ∘ π` for `K ⊴ G` inside `H`.
pub fn functoriality(max_order: usize) -> usize {
    let mut cases = 0;
    for (name, g) in group_corpus(max_order) {
        let subs = all_subgroups(&g);
        for k in subs.iter().filter(|k| k.order() > 1 && g.is_normal(k)) {
            let (q, pi) = g.quotient(k).unwrap();
            for h in subs.iter().filter(|h| k.is_subset_of(h)) {
                let img: Vec<usize> = h.elements().iter().map(|&x| pi.apply(x)).collect();
                let hq = q.subgroup_from_elements(&img).unwrap();
                let hab = subgroup_abelianization(&q, &hq);
                let sec = canonical_section(&g, h, Side::Left);
                let secq = canonical_section(&q, &hq, Side::Left);
                for x in 0..g.order() {
                    let lhs = pi.apply(transfer_element(&g, h, &sec, x));
                    let rhs = transfer_element(&q, &hq, &secq, pi.apply(x));
                    assert_eq!(hab.project(lhs), hab.project(rhs), "{name}, |K| = {}, |H| = {}", k.order(), h.order());
                    cases += 1;
                }
            }
        }
    }
    cases
}

/// Relative transfer equals the projected transfer, and for cyclic `Ñ/H`
/// also the double-coset evaluation.
pub fn relative_and_double_coset(max_order: usize) -> usize {
    let mut cases = 0;
    for (name, g) in group_corpus(max_order) {
        let gab = abelianization(&g);
        let subs = all_subgroups(&g);
        for n in &subs {
            let nab = subgroup_abelianization(&g, n);
            let ver = transfer(&g, n).unwrap();
            for h in subs.iter().filter(|h| h.is_subset_of(n) && n.elements().iter().all(|&x| g.conjugate(h, x) == **h)) {
                let rel = relative_transfer(&g, n, h).unwrap();
                let rab = tamagawa::abelian::relative_abelianization(&g, n, h).unwrap();
                let cyclic = rab.group().is_cyclic() && rab.group().order() as usize * h.order() == n.order();
                for x in 0..g.order() {
                    let v = rel.apply(&gab.project(x));
                    // lift Ver_{G,Ñ}(x) back to Ñ through a preimage, then push to Ñ/H
                    let full = ver.apply(&gab.project(x));
                    let elt = (0..g.order()).filter(|&y| n.contains(y)).find(|&y| nab.project(y) == full).unwrap();
                    assert_eq!(v, rab.project(elt), "{name}");
                    if cyclic {
                        assert_eq!(transfer_cyclic_double_coset(&g, n, h, x).unwrap(), v, "{name}, x = {x}");
                    }
                    cases += 1;
                }
            }
        }
    }
    cases
}

pub struct SylowTally {
    pub cases: usize,
    pub onto: usize,
    /// `(group, p)` where onto-ness and Sylow cyclicity disagree.
    pub mismatches: Vec<(String, usize)>,
    pub central_mismatches: usize,
}

/// Onto-ness of `Ver_{G,N}` against Sylow cyclicity over every normal `N`
/// of prime order; non-central `N` must give the zero map.
pub fn surjectivity_vs_sylow(max_order: usize) -> SylowTally {
    let mut t = SylowTally { cases: 0, onto: 0, mismatches: Vec::new(), central_mismatches: 0 };
    for (name, g) in group_corpus(max_order) {
        for n in all_subgroups(&g) {
            let p = n.order();
            if p < 2 || (2..p).any(|d| p % d == 0) || !g.is_normal(&n) {
                continue;
            }
            let ver = transfer(&g, &n).unwrap();
            let surjective = ver.is_surjective();
            let central = n.elements().iter().all(|&x| g.is_central(x));
            assert_eq!(transfer_surjectivity_check(&g, &n).unwrap(), surjective);
            if !central {
                assert!(ver.is_zero(), "{name}, |N| = {p}");
            }
            if surjective != g.is_cyclic(&g.sylow(p).unwrap()) {
                t.mismatches.push((name.clone(), p));
                t.central_mismatches += central as usize;
            }
            t.cases += 1;
            t.onto += surjective as usize;
        }
    }
    t
}
