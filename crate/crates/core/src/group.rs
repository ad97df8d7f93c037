//! Finite groups stored as dense Cayley tables.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Largest group order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 512;

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`. `table[g * order + h]` is `g·h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Which side a coset multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `gS`
    Left,
    /// `Sg`
    Right,
}

/// A subgroup, stored as the strictly increasing list of its elements.
///
/// The parent group is not stored; every operation that needs it takes the
/// group as an argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// A homomorphism between two tabled groups, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    images: Vec<usize>,
}

impl GroupHom {
    /// Checks `images[g·h] = images[g]·images[h]` exhaustively.
    pub fn new(domain: &FiniteGroup, codomain: &FiniteGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() || images.iter().any(|&x| x >= codomain.order()) {
            return Err(Error::domain("homomorphism image array has the wrong shape"));
        }
        for g in 0..domain.order() {
            for h in 0..domain.order() {
                if images[domain.mul(g, h)] != codomain.mul(images[g], images[h]) {
                    return Err(Error::domain("map is not a homomorphism")
                        .with_context(format!("fails at ({g}, {h})")));
                }
            }
        }
        Ok(GroupHom { images })
    }

    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

impl FiniteGroup {
    /// Builds and validates a group from table rows.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::domain("Cayley table is not square"));
        }
        Self::from_flat(order, rows.into_iter().flatten().collect())
    }

    fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("group order must be positive"));
        }
        if order > MAX_ORDER {
            return Err(Error::domain(format!("group order {order} exceeds the cap {MAX_ORDER}")));
        }
        debug_assert_eq!(table.len(), order * order);
        // Latin square.
        let mut seen = vec![false; order];
        for g in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..order {
                let x = table[g * order + h];
                if x >= order || seen[x] {
                    return Err(Error::domain("Cayley table is not a Latin square")
                        .with_context(format!("row {g}")));
                }
                seen[x] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..order {
                let x = table[h * order + g];
                if seen[x] {
                    return Err(Error::domain("Cayley table is not a Latin square")
                        .with_context(format!("column {g}")));
                }
                seen[x] = true;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] == g && table[g * order + e] == g))
            .ok_or_else(|| Error::domain("Cayley table has no identity element"))?;
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    let lhs = table[ab * order + c];
                    let rhs = table[a * order + table[b * order + c]];
                    if lhs != rhs {
                        return Err(Error::domain("Cayley table is not associative")
                            .with_context(format!("failing triple ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inverses = vec![0; order];
        for g in 0..order {
            inverses[g] = (0..order).find(|&h| table[g * order + h] == identity).unwrap();
        }
        Ok(FiniteGroup { order, table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("cyclic group needs n >= 1"));
        }
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push((a + b) % n);
            }
        }
        Self::from_flat(n, table)
    }

    /// Dihedral group of order `2n`. Element `k + n·e` is `r^k s^e`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dihedral group needs n >= 1"));
        }
        let order = 2 * n;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, e) = (x % n, x / n);
            for y in 0..order {
                let (b, f) = (y % n, y / n);
                let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                table.push(k + n * ((e + f) % 2));
            }
        }
        Self::from_flat(order, table)
    }

    /// Quaternion group. Indices: 0 → 1, 1 → −1, 2 → i, 3 → −i, 4 → j, 5 → −j, 6 → k, 7 → −k.
    pub fn quaternion8() -> Self {
        // unit products as (sign flip, unit) with units 0=1, 1=i, 2=j, 3=k
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut table = Vec::with_capacity(64);
        for x in 0..8 {
            for y in 0..8 {
                let (flip, u) = UNIT[x / 2][y / 2];
                let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ flip;
                table.push(2 * u + usize::from(neg));
            }
        }
        Self::from_flat(8, table).expect("quaternion table is valid")
    }

    /// Multiplicative group of residues coprime to `n`, indexed in increasing
    /// residue order (see [`unit_residues`]).
    pub fn units_mod(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("units_mod needs n >= 1"));
        }
        let res = unit_residues(n);
        if res.len() > MAX_ORDER {
            return Err(Error::domain(format!("units_mod({n}) has order above {MAX_ORDER}")));
        }
        let pos = |r: u64| res.binary_search(&r).unwrap();
        let mut table = Vec::with_capacity(res.len() * res.len());
        for &a in &res {
            for &b in &res {
                table.push(pos((a as u128 * b as u128 % n as u128) as u64));
            }
        }
        Self::from_flat(res.len(), table)
    }

    /// Direct product with elements in row-major order: the tuple
    /// `(g_1, …, g_r)` has index `((g_1·|G_2| + g_2)·|G_3| + g_3)…`.
    pub fn direct_product(factors: &[&FiniteGroup]) -> Result<Self> {
        let order = factors.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.order()));
        let order = match order {
            Some(o) if o <= MAX_ORDER => o,
            _ => return Err(Error::domain(format!("direct product exceeds order {MAX_ORDER}"))),
        };
        let split = |mut x: usize| -> Vec<usize> {
            let mut parts = vec![0; factors.len()];
            for (k, f) in factors.iter().enumerate().rev() {
                parts[k] = x % f.order();
                x /= f.order();
            }
            parts
        };
        let comps: Vec<Vec<usize>> = (0..order).map(split).collect();
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let mut idx = 0;
                for (k, f) in factors.iter().enumerate() {
                    idx = idx * f.order() + f.mul(comps[x][k], comps[y][k]);
                }
                table.push(idx);
            }
        }
        Self::from_flat(order, table)
    }

    /// Closure of permutations given in image form (`perm[i]` is the image of
    /// `i`). Elements are indexed in lexicographic order of their image
    /// arrays, so the identity is element 0. Products compose right to left:
    /// `(σ·τ)(i) = σ(τ(i))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        for p in gens {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::domain("generator is not a permutation of the stated degree"));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut set = BTreeSet::new();
        set.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if set.insert(y.clone()) {
                    if set.len() > MAX_ORDER {
                        return Err(Error::domain(format!(
                            "permutation group has order above {MAX_ORDER}"
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = set.into_iter().collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for s in &elems {
            for t in &elems {
                let st: Vec<usize> = (0..degree).map(|i| s[t[i]]).collect();
                table.push(elems.binary_search(&st).unwrap());
            }
        }
        Self::from_flat(n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// `g^k` for any integer `k`.
    pub fn pow(&self, g: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.element_order(g)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `x·g·x⁻¹`
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn is_central(&self, g: usize) -> bool {
        (0..self.order).all(|x| self.mul(x, g) == self.mul(g, x))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect() }
    }

    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        Subgroup { elements: (0..self.order).filter(|&g| inside[g]).collect() }
    }

    /// Accepts an element list only if it already is a subgroup.
    pub fn subgroup_from_elements(&self, elements: &[usize]) -> Result<Subgroup> {
        if elements.iter().any(|&g| g >= self.order) {
            return Err(Error::domain("subgroup element index out of range"));
        }
        let s = self.subgroup_generated(elements);
        let mut given: Vec<usize> = elements.to_vec();
        given.sort_unstable();
        given.dedup();
        if given != s.elements {
            return Err(Error::domain("element list is not closed under multiplication")
                .with_context(format!("{elements:?}")));
        }
        Ok(s)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = a.elements.iter().chain(&b.elements).copied().collect();
        self.subgroup_generated(&gens)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup { elements: a.elements.iter().copied().filter(|&g| b.contains(g)).collect() }
    }

    pub fn conjugate(&self, s: &Subgroup, x: usize) -> Subgroup {
        let mut elements: Vec<usize> = s.elements.iter().map(|&g| self.conj(x, g)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        (0..self.order).all(|x| s.elements.iter().all(|&g| s.contains(self.conj(x, g))))
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        let elements = (0..self.order)
            .filter(|&x| s.elements.iter().all(|&g| s.contains(self.conj(x, g))))
            .collect();
        Subgroup { elements }
    }

    /// Lexicographically least member of the conjugacy class of `s`.
    pub fn canonical_conjugate(&self, s: &Subgroup) -> Subgroup {
        (0..self.order).map(|x| self.conjugate(s, x)).min().unwrap()
    }

    /// Cosets of `s`, each sorted, listed in order of their least element.
    pub fn cosets(&self, s: &Subgroup, side: Side) -> Vec<Vec<usize>> {
        let mut taken = vec![false; self.order];
        let mut out = Vec::with_capacity(self.order / s.order());
        for g in 0..self.order {
            if taken[g] {
                continue;
            }
            let mut c: Vec<usize> = s
                .elements
                .iter()
                .map(|&h| match side {
                    Side::Left => self.mul(g, h),
                    Side::Right => self.mul(h, g),
                })
                .collect();
            c.sort_unstable();
            for &x in &c {
                taken[x] = true;
            }
            out.push(c);
        }
        out
    }

    /// For every element, the position of its coset in [`Self::cosets`].
    pub fn coset_index(&self, s: &Subgroup, side: Side) -> Vec<usize> {
        let mut idx = vec![0; self.order];
        for (k, c) in self.cosets(s, side).iter().enumerate() {
            for &x in c {
                idx[x] = k;
            }
        }
        idx
    }

    pub fn index_of(&self, s: &Subgroup) -> usize {
        self.order / s.order()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut taken = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if taken[g] {
                continue;
            }
            let cls: BTreeSet<usize> = (0..self.order).map(|x| self.conj(x, g)).collect();
            for &c in &cls {
                taken[c] = true;
            }
            out.push(cls.into_iter().collect());
        }
        out
    }

    pub fn center(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).filter(|&g| self.is_central(g)).collect() }
    }

    /// The derived subgroup `[G, G]`.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut comms = BTreeSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                comms.insert(self.mul(self.mul(a, b), self.inv(self.mul(b, a))));
            }
        }
        self.subgroup_generated(&comms.into_iter().collect::<Vec<_>>())
    }

    /// Derived subgroup of a subgroup, as a subgroup of `self`.
    pub fn commutator_of(&self, s: &Subgroup) -> Subgroup {
        let mut comms = BTreeSet::new();
        for &a in &s.elements {
            for &b in &s.elements {
                comms.insert(self.mul(self.mul(a, b), self.inv(self.mul(b, a))));
            }
        }
        self.subgroup_generated(&comms.into_iter().collect::<Vec<_>>())
    }

    pub fn is_cyclic(&self, s: &Subgroup) -> bool {
        s.elements.iter().any(|&g| self.element_order(g) == s.order())
    }

    /// Every distinct cyclic subgroup, sorted.
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let set: BTreeSet<Subgroup> = (0..self.order).map(|g| self.subgroup_generated(&[g])).collect();
        set.into_iter().collect()
    }

    /// One representative (the lexicographically least conjugate) per
    /// conjugacy class of cyclic subgroups, trivial subgroup included.
    pub fn cyclic_subgroups_up_to_conjugacy(&self) -> Vec<Subgroup> {
        let set: BTreeSet<Subgroup> =
            self.cyclic_subgroups().iter().map(|s| self.canonical_conjugate(s)).collect();
        set.into_iter().collect()
    }

    /// A Sylow `p`-subgroup, grown one step at a time inside normalizers.
    pub fn sylow(&self, p: usize) -> Result<Subgroup> {
        if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if !self.order.is_multiple_of(p) {
            return Err(Error::domain(format!("{p} does not divide |G| = {}", self.order)));
        }
        let mut full = 1;
        while self.order.is_multiple_of(full * p) {
            full *= p;
        }
        let is_p_power = |mut n: usize| {
            while n.is_multiple_of(p) {
                n /= p;
            }
            n == 1
        };
        let p_elements: Vec<usize> =
            (0..self.order).filter(|&g| is_p_power(self.element_order(g))).collect();
        let mut s = self.trivial_subgroup();
        while s.order() < full {
            let norm = self.normalizer(&s);
            let x = p_elements
                .iter()
                .copied()
                .find(|&g| norm.contains(g) && !s.contains(g))
                .expect("a p-subgroup below Sylow order has a p-element in its normalizer");
            let mut gens = s.elements.clone();
            gens.push(x);
            s = self.subgroup_generated(&gens);
        }
        Ok(s)
    }

    /// `s` as a group in its own right; element `k` of the result is
    /// `s.elements()[k]`.
    pub fn subgroup_as_group(&self, s: &Subgroup) -> FiniteGroup {
        let n = s.order();
        let mut table = Vec::with_capacity(n * n);
        for &a in &s.elements {
            for &b in &s.elements {
                table.push(s.elements.binary_search(&self.mul(a, b)).unwrap());
            }
        }
        FiniteGroup::from_flat(n, table).expect("a subgroup table is a group")
    }

    /// `G/N` for normal `N`; cosets are numbered by least element.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        if !self.is_normal(n) {
            return Err(Error::domain("quotient by a non-normal subgroup"));
        }
        let cosets = self.cosets(n, Side::Left);
        let idx = self.coset_index(n, Side::Left);
        let m = cosets.len();
        let mut table = Vec::with_capacity(m * m);
        for a in &cosets {
            for b in &cosets {
                table.push(idx[self.mul(a[0], b[0])]);
            }
        }
        let q = FiniteGroup::from_flat(m, table)?;
        let hom = GroupHom { images: idx };
        Ok((q, hom))
    }
}

/// Components of a direct-product element, for factor orders `orders`.
pub fn product_components(orders: &[usize], mut x: usize) -> Vec<usize> {
    let mut parts = vec![0; orders.len()];
    for (k, &n) in orders.iter().enumerate().rev() {
        parts[k] = x % n;
        x /= n;
    }
    parts
}

/// Inverse of [`product_components`].
pub fn product_index(orders: &[usize], parts: &[usize]) -> usize {
    orders.iter().zip(parts).fold(0, |acc, (&n, &p)| acc * n + p)
}

/// Residues in `1..n` coprime to `n`, increasing; `[0]` for `n = 1`.
pub fn unit_residues(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&r| num_integer::gcd(r, n) == 1).collect()
}

/// A permutation in image form from disjoint or overlapping cycles, composed
/// right to left.
pub fn permutation_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    for cyc in cycles.iter().rev() {
        if cyc.iter().any(|&i| i >= degree) {
            return Err(Error::domain("cycle entry exceeds the degree"));
        }
        let mut c = vec![usize::MAX; degree];
        for (k, &i) in cyc.iter().enumerate() {
            if c[i] != usize::MAX {
                return Err(Error::domain("cycle repeats a point"));
            }
            c[i] = cyc[(k + 1) % cyc.len()];
        }
        for x in perm.iter_mut() {
            if c[*x] != usize::MAX {
                *x = c[*x];
            }
        }
    }
    Ok(perm)
}
