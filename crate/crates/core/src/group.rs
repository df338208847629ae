//! Finite l-groups given by dense multiplication tables, with conjugacy
//! structure, and verified automorphisms of l-power order (the action of
//! the procyclic factor on `H`; the minimal `m` with `Γ^{l^m}` central is
//! read off the automorphism order).

use thiserror::Error;

use crate::arith::lpow_exponent;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {0} is not a power of {1}")]
    OrderNotLPower(u64, u64),
    #[error("abelian invariant {0} is not a power of {1} greater than 1")]
    BadInvariant(u64, u64),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("preset '{name}' does not match the prime {l}")]
    PresetPrimeMismatch { name: String, l: u64 },
    #[error("multiplication table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("multiplication table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("images do not extend to a well-defined map (conflict at element {0})")]
    InconsistentImages(usize),
    #[error("generating set does not generate (element {0} unreached)")]
    NotGenerating(usize),
    #[error("map is not a homomorphism (fails at ({0}, {1}))")]
    NotHomomorphism(usize, usize),
    #[error("map is not bijective")]
    NotBijective,
    #[error("automorphism order {order} is not a power of {l}; G would not be pro-{l}")]
    OrderNotLPowerAut { order: u64, l: u64 },
    #[error("image word references undefined generator g{0}")]
    UndefinedGenerator(usize),
}

/// How to build the finite l-group `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// Direct product of cyclic groups of the given l-power orders.
    Abelian(Vec<u64>),
    /// Explicit multiplication table (entries are element indices).
    Table(Vec<Vec<usize>>),
    /// Named construction; `heisenberg_<l>` is the extraspecial group of
    /// order `l^3` and exponent `l`.
    Preset(String),
}

impl GroupSpec {
    /// Group order implied by the spec, before any table is materialised.
    pub fn order(&self, l: u64) -> u64 {
        match self {
            GroupSpec::Abelian(inv) => inv.iter().product::<u64>().max(1),
            GroupSpec::Table(rows) => rows.len() as u64,
            GroupSpec::Preset(_) => l * l * l,
        }
    }
}

/// A finite l-group with its full multiplication table and class data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLGroup {
    prime: u64,
    order: u64,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    element_orders: Vec<u64>,
    exponent: u64,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteLGroup {
    /// Builds and fully verifies a group from a spec.
    pub fn build(l: u64, spec: &GroupSpec) -> Result<Self, GroupError> {
        let table = match spec {
            GroupSpec::Abelian(invariants) => {
                for &inv in invariants {
                    match lpow_exponent(l, inv) {
                        Some(k) if k >= 1 => {}
                        _ => return Err(GroupError::BadInvariant(inv, l)),
                    }
                }
                abelian_table(invariants)
            }
            GroupSpec::Table(rows) => rows.clone(),
            GroupSpec::Preset(name) => {
                let stripped = name.strip_prefix("heisenberg").map(|rest| {
                    rest.strip_prefix('_')
                        .map(|digits| digits.parse::<u64>().ok())
                        .unwrap_or(Some(l))
                });
                match stripped {
                    Some(Some(named_l)) if named_l == l => heisenberg_table(l as usize),
                    Some(Some(_)) | Some(None) => {
                        return Err(GroupError::PresetPrimeMismatch {
                            name: name.clone(),
                            l,
                        })
                    }
                    None => return Err(GroupError::UnknownPreset(name.clone())),
                }
            }
        };
        let generators = match spec {
            GroupSpec::Abelian(invariants) => abelian_generators(invariants),
            GroupSpec::Table(_) => Vec::new(),
            GroupSpec::Preset(_) => heisenberg_generators(l as usize),
        };
        Self::from_table(l, table, generators)
    }

    fn from_table(
        l: u64,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::MalformedTable);
        }
        if lpow_exponent(l, n as u64).is_none() {
            return Err(GroupError::OrderNotLPower(n as u64, l));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(GroupError::MalformedTable);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(GroupError::NoInverse(x))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut element_orders = vec![0u64; n];
        for x in 0..n {
            let mut y = x;
            let mut k = 1u64;
            while y != identity {
                y = table[y][x];
                k += 1;
            }
            element_orders[x] = k;
        }
        let exponent = element_orders.iter().copied().max().unwrap_or(1);
        debug_assert!(lpow_exponent(l, exponent).is_some());

        // Conjugation orbits; representatives are the least indices and
        // classes are listed by representative.
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut orbit: Vec<usize> = (0..n)
                .map(|g| table[table[g][x]][inverses[g]])
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                class_of[y] = idx;
            }
            classes.push(orbit);
        }

        let mut generators = generators;
        if generators.is_empty() && n > 1 {
            generators = minimal_generating_set(&table, identity);
        }

        Ok(FiniteLGroup {
            prime: l,
            order: n as u64,
            table,
            identity,
            inverses,
            element_orders,
            exponent,
            classes,
            class_of,
            generators,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverses[x]
    }

    pub fn element_order(&self, x: usize) -> u64 {
        self.element_orders[x]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent written as `l^E`.
    pub fn exponent_exp(&self) -> u32 {
        lpow_exponent(self.prime, self.exponent).expect("exponent divides the l-power order")
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_representative(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    /// Class of the inverses of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of[self.inverses[self.classes[c][0]]]
    }

    /// Indices of the distinguished generating set (empty for the trivial group).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn power(&self, x: usize, k: u64) -> usize {
        let o = self.element_orders[x];
        let mut k = k % o;
        let mut acc = self.identity;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.table[acc][base];
            }
            base = self.table[base][base];
            k >>= 1;
        }
        acc
    }

    /// Evaluates a word `Π gen_i^{e_i}` given as (generator index, exponent).
    pub fn evaluate_word(&self, word: &[(usize, i64)]) -> Result<usize, GroupError> {
        let mut acc = self.identity;
        for &(gi, exp) in word {
            let g = *self
                .generators
                .get(gi)
                .ok_or(GroupError::UndefinedGenerator(gi + 1))?;
            let o = self.element_orders[g] as i64;
            let e = exp.rem_euclid(o) as u64;
            acc = self.table[acc][self.power(g, e)];
        }
        Ok(acc)
    }

    /// Commutator subgroup, as a sorted list of element indices.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let n = self.order as usize;
        let mut in_set = vec![false; n];
        in_set[self.identity] = true;
        let mut members = vec![self.identity];
        for a in 0..n {
            for b in 0..n {
                let c = self.table[self.table[self.table[a][b]][self.inverses[a]]][self.inverses[b]];
                if !in_set[c] {
                    in_set[c] = true;
                    members.push(c);
                }
            }
        }
        // close under multiplication
        loop {
            let mut added = false;
            let snapshot = members.clone();
            for &x in &snapshot {
                for &y in &snapshot {
                    let z = self.table[x][y];
                    if !in_set[z] {
                        in_set[z] = true;
                        members.push(z);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        members.sort_unstable();
        members
    }
}

fn abelian_table(invariants: &[u64]) -> Vec<Vec<usize>> {
    let n: u64 = invariants.iter().product::<u64>().max(1);
    let n = n as usize;
    let radices: Vec<usize> = invariants.iter().map(|&x| x as usize).collect();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut t = Vec::with_capacity(radices.len());
        for &r in radices.iter().rev() {
            t.push(idx % r);
            idx /= r;
        }
        t.reverse();
        t
    };
    let encode = |tuple: &[usize]| -> usize {
        let mut idx = 0usize;
        for (d, &r) in tuple.iter().zip(radices.iter()) {
            idx = idx * r + d;
        }
        idx
    };
    let mut table = vec![vec![0usize; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        let ti = decode(i);
        for (j, cell) in row.iter_mut().enumerate() {
            let tj = decode(j);
            let sum: Vec<usize> = ti
                .iter()
                .zip(tj.iter())
                .zip(radices.iter())
                .map(|((a, b), &r)| (a + b) % r)
                .collect();
            *cell = encode(&sum);
        }
    }
    table
}

fn abelian_generators(invariants: &[u64]) -> Vec<usize> {
    let radices: Vec<usize> = invariants.iter().map(|&x| x as usize).collect();
    let mut gens = Vec::with_capacity(radices.len());
    for i in 0..radices.len() {
        let mut stride = 1usize;
        for &r in radices[i + 1..].iter() {
            stride *= r;
        }
        gens.push(stride);
    }
    gens
}

/// Upper unitriangular 3x3 matrices over `F_l`: element `(a, b, c)` encoded
/// base `l`, with `(a,b,c)·(a',b',c') = (a+a', b+b', c+c'+a·b')`.
fn heisenberg_table(l: usize) -> Vec<Vec<usize>> {
    let n = l * l * l;
    let decode = |idx: usize| (idx / (l * l), (idx / l) % l, idx % l);
    let encode = |a: usize, b: usize, c: usize| (a * l + b) * l + c;
    let mut table = vec![vec![0usize; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        let (a1, b1, c1) = decode(i);
        for (j, cell) in row.iter_mut().enumerate() {
            let (a2, b2, c2) = decode(j);
            *cell = encode((a1 + a2) % l, (b1 + b2) % l, (c1 + c2 + a1 * b2) % l);
        }
    }
    table
}

fn heisenberg_generators(l: usize) -> Vec<usize> {
    // x = (1,0,0), y = (0,1,0)
    vec![l * l, l]
}

fn minimal_generating_set(table: &[Vec<usize>], identity: usize) -> Vec<usize> {
    let n = table.len();
    let mut gens: Vec<usize> = Vec::new();
    let mut reached = vec![false; n];
    reached[identity] = true;
    let mut count = 1usize;
    while count < n {
        let next = (0..n).find(|&x| !reached[x]).expect("unreached element");
        gens.push(next);
        // close the reached set under multiplication by everything reached
        let mut frontier = vec![next];
        reached[next] = true;
        count += 1;
        while let Some(x) = frontier.pop() {
            for y in 0..n {
                if !reached[y] {
                    continue;
                }
                for z in [table[x][y], table[y][x]] {
                    if !reached[z] {
                        reached[z] = true;
                        count += 1;
                        frontier.push(z);
                    }
                }
            }
        }
    }
    gens
}

/// A verified automorphism of `H` of l-power order `l^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAutomorphism {
    permutation: Vec<usize>,
    order: u64,
    order_exp: u32,
}

impl GroupAutomorphism {
    /// Builds the automorphism from images of the group's generating set,
    /// extending along products and rejecting inconsistencies.
    pub fn from_generator_images(
        group: &FiniteLGroup,
        images: &[(usize, usize)],
    ) -> Result<Self, GroupError> {
        let n = group.order() as usize;
        let mut map = vec![usize::MAX; n];
        map[group.identity()] = group.identity();
        for &(gen_idx, image) in images {
            let g = *group
                .generators()
                .get(gen_idx)
                .ok_or(GroupError::UndefinedGenerator(gen_idx + 1))?;
            if map[g] != usize::MAX && map[g] != image {
                return Err(GroupError::InconsistentImages(g));
            }
            map[g] = image;
        }
        // generators without an explicit image are fixed
        for &g in group.generators() {
            if map[g] == usize::MAX {
                map[g] = g;
            }
        }
        loop {
            let mut changed = false;
            for x in 0..n {
                if map[x] == usize::MAX {
                    continue;
                }
                for y in 0..n {
                    if map[y] == usize::MAX {
                        continue;
                    }
                    let xy = group.mul(x, y);
                    let img = group.mul(map[x], map[y]);
                    if map[xy] == usize::MAX {
                        map[xy] = img;
                        changed = true;
                    } else if map[xy] != img {
                        return Err(GroupError::InconsistentImages(xy));
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(unreached) = map.iter().position(|&x| x == usize::MAX) {
            return Err(GroupError::NotGenerating(unreached));
        }
        Self::from_permutation(group, map)
    }

    /// Builds the automorphism from an explicit permutation of element indices.
    pub fn from_permutation(
        group: &FiniteLGroup,
        permutation: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let n = group.order() as usize;
        if permutation.len() != n || permutation.iter().any(|&x| x >= n) {
            return Err(GroupError::NotBijective);
        }
        let mut seen = vec![false; n];
        for &x in &permutation {
            if seen[x] {
                return Err(GroupError::NotBijective);
            }
            seen[x] = true;
        }
        for x in 0..n {
            for y in 0..n {
                if permutation[group.mul(x, y)] != group.mul(permutation[x], permutation[y]) {
                    return Err(GroupError::NotHomomorphism(x, y));
                }
            }
        }
        // order by iterated composition
        let mut current = permutation.clone();
        let mut order = 1u64;
        while (0..n).any(|x| current[x] != x) {
            current = (0..n).map(|x| permutation[current[x]]).collect();
            order += 1;
        }
        let order_exp = lpow_exponent(group.prime(), order)
            .ok_or(GroupError::OrderNotLPowerAut {
                order,
                l: group.prime(),
            })?;
        Ok(GroupAutomorphism {
            permutation,
            order,
            order_exp,
        })
    }

    pub fn identity(group: &FiniteLGroup) -> Self {
        GroupAutomorphism {
            permutation: (0..group.order() as usize).collect(),
            order: 1,
            order_exp: 0,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.permutation[x]
    }

    /// `γ^j(x)` for any integer power (negative powers via the order).
    pub fn apply_power(&self, x: usize, j: i64) -> usize {
        let j = j.rem_euclid(self.order as i64) as u64;
        let mut y = x;
        for _ in 0..j {
            y = self.permutation[y];
        }
        y
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The `m` with `l^m` the automorphism order (so `Γ^{l^m}` is central).
    pub fn order_exp(&self) -> u32 {
        self.order_exp
    }

    /// Permutation induced on conjugacy classes.
    pub fn class_permutation(&self, group: &FiniteLGroup) -> Vec<usize> {
        (0..group.class_count())
            .map(|c| group.class_of(self.apply(group.class_representative(c))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_nine() {
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.class_count(), 9);
        assert!(g.classes().iter().all(|c| c.len() == 1));
        assert_eq!(g.exponent(), 9);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![])).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.class_count(), 1);
        assert_eq!(g.exponent(), 1);
    }

    #[test]
    fn heisenberg_3_classes() {
        let g = FiniteLGroup::build(3, &GroupSpec::Preset("heisenberg_3".into())).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 3);
        assert_eq!(g.class_count(), 11);
        // Oracle: brute-force conjugation orbits directly on the table.
        let mut sizes: Vec<usize> = (0..g.class_count()).map(|c| g.class_size(c)).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 1, 3, 3, 3, 3, 3, 3, 3, 3]);
        let mut brute = std::collections::BTreeSet::new();
        for x in 0..27 {
            let mut orbit: Vec<usize> = (0..27)
                .map(|a| g.mul(g.mul(a, x), g.inverse(a)))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            brute.insert(orbit);
        }
        assert_eq!(brute.len(), 11);
    }

    #[test]
    fn class_equation_consistency() {
        for spec in [
            GroupSpec::Abelian(vec![27]),
            GroupSpec::Abelian(vec![9, 3]),
            GroupSpec::Preset("heisenberg_3".into()),
        ] {
            let g = FiniteLGroup::build(3, &spec).unwrap();
            let total: usize = (0..g.class_count()).map(|c| g.class_size(c)).sum();
            assert_eq!(total as u64, g.order());
            for c in 0..g.class_count() {
                assert_eq!(g.order() % g.class_size(c) as u64, 0);
            }
            // singleton classes = centre; nontrivial for l-groups
            let center = g.classes().iter().filter(|c| c.len() == 1).count();
            assert!(center > 1 || g.order() == 1);
        }
    }

    #[test]
    fn automorphism_h_to_h4_on_c9() {
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap();
        let h = g.generators()[0];
        let aut =
            GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 4))]).unwrap();
        assert_eq!(aut.order(), 3);
        assert_eq!(aut.order_exp(), 1);
    }

    #[test]
    fn identity_automorphism_has_order_one() {
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap();
        let h = g.generators()[0];
        let aut = GroupAutomorphism::from_generator_images(&g, &[(0, h)]).unwrap();
        assert_eq!(aut.order(), 1);
        assert_eq!(aut.order_exp(), 0);
    }

    #[test]
    fn h_to_h2_is_rejected() {
        // Oracle: the order of 2 mod 9 is 6, not a 3-power.
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap();
        let h = g.generators()[0];
        let err = GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 2))])
            .unwrap_err();
        assert_eq!(err, GroupError::OrderNotLPowerAut { order: 6, l: 3 });
    }

    #[test]
    fn automorphism_permutes_classes() {
        let g = FiniteLGroup::build(3, &GroupSpec::Preset("heisenberg_3".into())).unwrap();
        let aut = GroupAutomorphism::identity(&g);
        let perm = aut.class_permutation(&g);
        assert_eq!(perm, (0..g.class_count()).collect::<Vec<_>>());
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(matches!(
            FiniteLGroup::build(3, &GroupSpec::Abelian(vec![6])),
            Err(GroupError::BadInvariant(6, 3))
        ));
        assert!(matches!(
            FiniteLGroup::build(3, &GroupSpec::Table(vec![vec![0, 1], vec![1, 0]])),
            Err(GroupError::OrderNotLPower(2, 3))
        ));
        // broken table of l-power size: constant rows are not a group
        let rows = vec![vec![0usize; 3]; 3];
        assert!(FiniteLGroup::build(3, &GroupSpec::Table(rows)).is_err());
    }

    #[test]
    fn derived_subgroup_of_heisenberg_is_center() {
        let g = FiniteLGroup::build(3, &GroupSpec::Preset("heisenberg_3".into())).unwrap();
        let der = g.derived_subgroup();
        assert_eq!(der.len(), 3);
        for &x in &der {
            assert_eq!(g.class_size(g.class_of(x)), 1);
        }
    }
}
