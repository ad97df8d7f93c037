//! Data with `|G| ≤ 16` for oracle/engine comparison.

use tamagawa::fields::{cyclotomic, q8_landau};
use tamagawa::torus::product_datum;
use tamagawa::{FiniteGroup, NormTorusDatum};

use super::{cyc, dicyclic, dih, galois_cm, norm_datum, prod};

pub fn imaginary_quadratic() -> NormTorusDatum {
    galois_cm(&cyc(2), 1)
}

/// `(G, H = 1, ι)` for a handful of Galois CM fields, then the families
/// and products.
pub fn oracle_corpus() -> Vec<(String, NormTorusDatum)> {
    let mut out: Vec<(String, NormTorusDatum)> = Vec::new();
    let mut push = |name: &str, d: NormTorusDatum| out.push((name.to_string(), d));

    push("imaginary quadratic", imaginary_quadratic());

    // (a, b) ↦ 2a + b, so ι = (1, 1) = 3
    let v4 = prod(&[&cyc(2), &cyc(2)]);
    push("biquadratic", galois_cm(&v4, 3));
    let h = v4.subgroup_generated(&[1]);
    push(
        "imaginary quadratic inside biquadratic",
        NormTorusDatum::cm_field(v4.clone(), h, 3, vec![], true, false).unwrap(),
    );

    push("cyclic quartic", galois_cm(&cyc(4), 2));
    push("cyclic sextic", galois_cm(&cyc(6), 3));
    push("cyclic octic", galois_cm(&cyc(8), 4));
    let c4c2 = prod(&[&cyc(4), &cyc(2)]);
    push("C4xC2, iota in C4", galois_cm(&c4c2, 4));
    push("C4xC2, iota = (2, 1)", galois_cm(&c4c2, 5));

    for n in [5, 8, 12, 15, 16, 20, 21, 24] {
        push(&format!("cyclotomic {n}"), cyclotomic(n).unwrap().datum);
    }

    for (p, q) in [(5, 181), (5, 21), (17, 69), (17, 613)] {
        push(&format!("Q8 ({p}, {q})"), q8_landau(p, q).unwrap().datum);
    }
    push("Q8 cyclic decomposition", galois_cm(&FiniteGroup::quaternion8(), 1));

    let d4 = dih(4);
    push("D4 Galois", galois_cm(&d4, 2));
    // H = ⟨s⟩ is not normal; Ñ = ⟨s, r²⟩ is
    push(
        "D4 quartic",
        NormTorusDatum::cm_field(d4.clone(), d4.subgroup_generated(&[4]), 2, vec![], true, false).unwrap(),
    );
    push("D6 Galois", galois_cm(&dih(6), 3));
    // y² = x³ in Dic3 = ⟨x, y⟩ with x of order 6
    push("Dic3 Galois", galois_cm(&dicyclic(3), 3));

    let iq = imaginary_quadratic();
    let c4 = galois_cm(&cyc(4), 2);
    let q8 = q8_landau(5, 181).unwrap().datum;
    push("product iq x iq", product_datum(&[iq.clone(), iq.clone()], &[]).unwrap());
    push("product iq x cyclic quartic", product_datum(&[iq.clone(), c4.clone()], &[]).unwrap());
    push("product cyclic quartic x cyclic quartic", product_datum(&[c4.clone(), c4], &[]).unwrap());
    push("product Q8 x iq", product_datum(&[q8, iq], &[]).unwrap());

    let z6 = cyc(6);
    let two = z6.subgroup_generated(&[3]);
    let three = z6.subgroup_generated(&[2]);
    push("coprime C3 x C2 (non-CM)", norm_datum(&z6, &[(two, z6.whole()), (three, z6.whole())], vec![]));
    push("norm-one cyclic quartic (non-CM)", norm_datum(&cyc(4), &[(cyc(4).trivial_subgroup(), cyc(4).whole())], vec![]));
    out
}
