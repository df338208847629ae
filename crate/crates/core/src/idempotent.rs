//! Group-algebra arithmetic over cyclotomic coefficients and the central
//! idempotents `e(η)`, `ε(η)`, `e_χ` and the component idempotent
//! `e = Σ_{j<v} ε(η^{γ^j})`.
//!
//! Elements live in `(QΓ_0)[H]` with the `Γ_0`-coordinate suppressed:
//! coefficients are exact cyclotomic numbers acting as γ-fixed scalars.
//! Conjugation by `γ^j` is the basis relabelling `h ↦ γ^{-j}(h)`; with the
//! conjugate-character convention `η^γ = η ∘ γ` this is the orientation for
//! which `ε(η)^{γ^j} = ε(η^{γ^j})` holds for every `j`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::arith::units_mod_lpow;
use crate::chartab::Character;
use crate::clifford::ComponentDescriptor;
use crate::cyclotomic::{CyclotomicNumber, GaloisElement, Rational};
use crate::group::{FiniteLGroup, GroupAutomorphism};

/// An element of the group algebra of `H` with cyclotomic coefficients.
/// Absent keys are zero; explicit zeros are never stored.
#[derive(Debug, Clone)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteLGroup>,
    coeffs: BTreeMap<usize, CyclotomicNumber>,
}

impl GroupAlgebraElement {
    pub fn zero(group: Arc<FiniteLGroup>) -> Self {
        GroupAlgebraElement {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element `h`.
    pub fn basis(group: Arc<FiniteLGroup>, h: usize) -> Self {
        let l = group.prime();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(h, CyclotomicNumber::one(l, 0));
        GroupAlgebraElement { group, coeffs }
    }

    /// The algebra identity.
    pub fn one(group: Arc<FiniteLGroup>) -> Self {
        let id = group.identity();
        Self::basis(group, id)
    }

    pub fn group(&self) -> &Arc<FiniteLGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, CyclotomicNumber> {
        &self.coeffs
    }

    pub fn coeff(&self, h: usize) -> Option<&CyclotomicNumber> {
        self.coeffs.get(&h)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn set_coeff(&mut self, h: usize, value: CyclotomicNumber) {
        if value.is_zero() {
            self.coeffs.remove(&h);
        } else {
            self.coeffs.insert(h, value);
        }
    }

    fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group == other.group
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_group(other), "group algebra mismatch");
        let mut out = self.clone();
        for (&h, c) in &other.coeffs {
            let v = match out.coeffs.get(&h) {
                Some(existing) => existing.add(c),
                None => c.clone(),
            };
            out.set_coeff(h, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.group.clone());
        for (&h, c) in &self.coeffs {
            out.set_coeff(h, c.scale(s));
        }
        out
    }

    /// Convolution product along the multiplication table.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_group(other), "group algebra mismatch");
        let g = &self.group;
        let mut acc: BTreeMap<usize, CyclotomicNumber> = BTreeMap::new();
        for (&x, cx) in &self.coeffs {
            for (&y, cy) in &other.coeffs {
                let prod = cx.mul(cy);
                if prod.is_zero() {
                    continue;
                }
                let key = g.mul(x, y);
                match acc.get_mut(&key) {
                    Some(existing) => existing.add_assign(&prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        GroupAlgebraElement {
            group: self.group.clone(),
            coeffs: acc,
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Centrality via commutation with every basis element.
    pub fn is_central(&self) -> bool {
        let n = self.group.order() as usize;
        (0..n).all(|x| {
            let b = Self::basis(self.group.clone(), x);
            b.mul(self) == self.mul(&b)
        })
    }

    /// True iff every coefficient is a rational number.
    pub fn has_rational_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.conductor() == 0)
    }

    /// Conjugation by `γ^j`: transports the coefficient at `h` to `γ^{-j}(h)`.
    pub fn gamma_conjugate(&self, gamma: &GroupAutomorphism, j: i64) -> Self {
        let mut out = Self::zero(self.group.clone());
        for (&h, c) in &self.coeffs {
            out.set_coeff(gamma.apply_power(h, -j), c.clone());
        }
        out
    }
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.coeffs == other.coeffs
    }
}

impl Eq for GroupAlgebraElement {}

/// `e(η) = (η(1)/|H|) Σ_h η(h⁻¹) h`, the central primitive idempotent of
/// the η-isotypic component over a splitting field.
pub fn e_idem(group: &Arc<FiniteLGroup>, eta: &Character) -> GroupAlgebraElement {
    let n = group.order();
    let scalar = Rational::from_integer(eta.degree().into())
        / Rational::from_integer(n.into());
    let mut out = GroupAlgebraElement::zero(group.clone());
    for h in 0..n as usize {
        let value = eta.value(group.class_of(group.inverse(h)));
        out.set_coeff(h, value.scale(&scalar));
    }
    out
}

/// `ε(η) = Σ_{σ ∈ Gal} e(η^σ)`: the rational central primitive idempotent
/// of the Wedderburn component of `(QΓ_0)[H]` over η's Galois orbit.
pub fn eps_idem(group: &Arc<FiniteLGroup>, eta: &Character) -> GroupAlgebraElement {
    let l = group.prime();
    let e_eta = eta.conductor_exp();
    let mut acc = GroupAlgebraElement::zero(group.clone());
    for k in units_mod_lpow(l, e_eta) {
        let sigma = GaloisElement::new(l, e_eta, if e_eta == 0 { 1 } else { k })
            .expect("unit exponent");
        let twisted = eta.galois_twist(&sigma);
        acc = acc.add(&e_idem(group, &twisted));
    }
    acc
}

/// `e_χ = Σ_{j=0}^{w-1} e(η^{γ^j})`: γ-stable idempotent over one γ-orbit.
pub fn e_chi(
    group: &Arc<FiniteLGroup>,
    gamma: &GroupAutomorphism,
    eta: &Character,
    w: u64,
) -> GroupAlgebraElement {
    let mut acc = GroupAlgebraElement::zero(group.clone());
    let class_perm = gamma.class_permutation(group);
    let mut values: Vec<CyclotomicNumber> = eta.values().to_vec();
    for _ in 0..w {
        let twisted = Character::new(eta.degree(), values.clone());
        acc = acc.add(&e_idem(group, &twisted));
        values = (0..group.class_count())
            .map(|c| values[class_perm[c]].clone())
            .collect();
    }
    acc
}

/// The component idempotent `e = Σ_{j=0}^{v-1} ε(η^{γ^j})`.
pub fn component_idempotent(
    group: &Arc<FiniteLGroup>,
    gamma: &GroupAutomorphism,
    table: &crate::chartab::CharacterTable,
    descriptor: &ComponentDescriptor,
) -> GroupAlgebraElement {
    let eta = table.character(descriptor.rep_index);
    let class_perm = gamma.class_permutation(group);
    let mut acc = GroupAlgebraElement::zero(group.clone());
    let mut values: Vec<CyclotomicNumber> = eta.values().to_vec();
    for _ in 0..descriptor.invariants.v {
        let twisted = Character::new(eta.degree(), values.clone());
        acc = acc.add(&eps_idem(group, &twisted));
        values = (0..group.class_count())
            .map(|c| values[class_perm[c]].clone())
            .collect();
    }
    acc
}

/// True iff every coefficient denominator divides `|H|` (the common
/// denominator of the power-basis coordinates is their lcm).
pub fn denominators_divide_group_order(x: &GroupAlgebraElement) -> bool {
    let n = num_bigint::BigInt::from(x.group().order());
    x.coeffs()
        .values()
        .all(|c| (&n % c.denominator()).is_zero() || c.denominator().is_one())
}

use num_traits::Zero as _;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::cyclotomic::{rat, rat_frac};
    use crate::group::GroupSpec;

    fn c9() -> Arc<FiniteLGroup> {
        Arc::new(FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap())
    }

    fn c3() -> Arc<FiniteLGroup> {
        Arc::new(FiniteLGroup::build(3, &GroupSpec::Abelian(vec![3])).unwrap())
    }

    #[test]
    fn ring_identities() {
        let g = c9();
        let h = GroupAlgebraElement::basis(g.clone(), 1);
        let one = GroupAlgebraElement::one(g.clone());
        // x · 1 = x
        let x = h.add(&one.scale(&rat_frac(2, 3)));
        assert_eq!(x.mul(&one), x);
        // h · h^8 = 1
        let h8 = GroupAlgebraElement::basis(g.clone(), 8);
        assert_eq!(h.mul(&h8), one);
        // (1 + h)(1 - h) = 1 - h²
        let lhs = one.add(&h).mul(&one.sub(&h));
        let h2 = GroupAlgebraElement::basis(g.clone(), 2);
        assert_eq!(lhs, one.sub(&h2));
    }

    #[test]
    fn trivial_character_idempotent_is_average() {
        let g = c9();
        let table = character_table(&g).unwrap();
        let triv = table
            .characters()
            .iter()
            .find(|c| c.values().iter().all(|v| v == &CyclotomicNumber::one(3, 2)))
            .unwrap();
        let e = e_idem(&g, triv);
        for h in 0..9 {
            assert_eq!(e.coeff(h).unwrap().as_rational(), Some(rat_frac(1, 9)));
        }
        assert!(e.is_idempotent());
        assert!(e.is_central());
    }

    #[test]
    fn c3_idempotent_matches_formula() {
        // Oracle: plug η(h) = ζ3 into the formula; e(η) = (1/3)(1 + ζ3²h + ζ3h²).
        let g = c3();
        let table = character_table(&g).unwrap();
        let z3 = CyclotomicNumber::root_of_unity(3, 1, 1);
        let eta = table
            .characters()
            .iter()
            .find(|c| c.value(g.class_of(1)) == &z3)
            .unwrap();
        let e = e_idem(&g, eta);
        let third = rat_frac(1, 3);
        assert_eq!(e.coeff(0).unwrap(), &CyclotomicNumber::from_rational(3, 1, third.clone()));
        assert_eq!(e.coeff(1).unwrap(), &z3.mul(&z3).scale(&third));
        assert_eq!(e.coeff(2).unwrap(), &z3.scale(&third));
        assert!(e.is_idempotent());
    }

    #[test]
    fn full_idempotent_system() {
        for (l, spec) in [
            (3, GroupSpec::Abelian(vec![9])),
            (3, GroupSpec::Abelian(vec![3, 3])),
        ] {
            let g = Arc::new(FiniteLGroup::build(l, &spec).unwrap());
            let table = character_table(&g).unwrap();
            let idems: Vec<_> = table.characters().iter().map(|c| e_idem(&g, c)).collect();
            let mut sum = GroupAlgebraElement::zero(g.clone());
            for (i, a) in idems.iter().enumerate() {
                assert!(a.is_idempotent());
                assert!(a.is_central());
                assert!(denominators_divide_group_order(a));
                for (j, b) in idems.iter().enumerate() {
                    if i != j {
                        assert!(a.mul(b).is_zero());
                    }
                }
                sum = sum.add(a);
            }
            assert_eq!(sum, GroupAlgebraElement::one(g.clone()));
        }
    }

    #[test]
    fn eps_is_rational_sum_of_orbit() {
        // Oracle: e(η) + e(η²) expanded for C3: (1/3)(2 - h - h²).
        let g = c3();
        let table = character_table(&g).unwrap();
        let z3 = CyclotomicNumber::root_of_unity(3, 1, 1);
        let eta = table
            .characters()
            .iter()
            .find(|c| c.value(g.class_of(1)) == &z3)
            .unwrap();
        let eps = eps_idem(&g, eta);
        assert!(eps.has_rational_coeffs());
        assert_eq!(eps.coeff(0).unwrap().as_rational(), Some(rat_frac(2, 3)));
        assert_eq!(eps.coeff(1).unwrap().as_rational(), Some(rat_frac(-1, 3)));
        assert_eq!(eps.coeff(2).unwrap().as_rational(), Some(rat_frac(-1, 3)));
        assert!(eps.is_idempotent());

        // trivial character: ε = e
        let triv = table
            .characters()
            .iter()
            .find(|c| c.conductor_exp() == 0)
            .unwrap();
        assert_eq!(eps_idem(&g, triv), e_idem(&g, triv));
    }

    #[test]
    fn eps_rational_for_heisenberg() {
        // Galois-invariance check coefficientwise, for every character.
        let g = Arc::new(
            FiniteLGroup::build(3, &GroupSpec::Preset("heisenberg_3".into())).unwrap(),
        );
        let table = character_table(&g).unwrap();
        for ch in table.characters() {
            let eps = eps_idem(&g, ch);
            assert!(eps.has_rational_coeffs());
            assert!(eps.is_idempotent());
            assert!(denominators_divide_group_order(&eps));
        }
    }

    #[test]
    fn gamma_conjugation_rules() {
        let g = c9();
        let h = g.generators()[0];
        let gamma =
            GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 4))]).unwrap();
        let table = character_table(&g).unwrap();
        let gen_class = g.class_of(h);

        let x = GroupAlgebraElement::basis(g.clone(), 1)
            .add(&GroupAlgebraElement::basis(g.clone(), 5).scale(&rat(2)));
        // j = 0 is the identity
        assert_eq!(x.gamma_conjugate(&gamma, 0), x);
        // ring automorphism
        let y = GroupAlgebraElement::basis(g.clone(), 2);
        assert_eq!(
            x.mul(&y).gamma_conjugate(&gamma, 1),
            x.gamma_conjugate(&gamma, 1).mul(&y.gamma_conjugate(&gamma, 1))
        );

        // ε(η)^γ = ε(η^γ), both sides computed independently, for every η
        // (and e(η)^γ = e(η^γ) since each Galois orbit is γ-permuted).
        let class_perm = gamma.class_permutation(&g);
        for ch in table.characters() {
            let lhs = eps_idem(&g, ch).gamma_conjugate(&gamma, 1);
            let twisted_vals: Vec<CyclotomicNumber> = (0..g.class_count())
                .map(|c| ch.value(class_perm[c]).clone())
                .collect();
            let rhs = eps_idem(&g, &Character::new(ch.degree(), twisted_vals));
            assert_eq!(lhs, rhs);

            // paper example: ζ9-characters have ε(η)^{γ^v} = ε(η) with v = 1
            if ch.conductor_exp() == 2 {
                let eps = eps_idem(&g, ch);
                assert_eq!(eps.gamma_conjugate(&gamma, 1), eps);
            }
        }
        let _ = gen_class;
        let _ = table;
    }

    #[test]
    fn component_idempotents_for_paper_example() {
        let g = c9();
        let h = g.generators()[0];
        let gamma =
            GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 4))]).unwrap();
        let table = character_table(&g).unwrap();
        let dec = crate::clifford::decompose(&g, &gamma, &table).unwrap();
        let idems: Vec<_> = dec
            .components
            .iter()
            .map(|c| component_idempotent(&g, &gamma, &table, c))
            .collect();
        let mut sum = GroupAlgebraElement::zero(g.clone());
        for (i, e) in idems.iter().enumerate() {
            assert!(e.is_idempotent());
            assert!(e.has_rational_coeffs());
            assert_eq!(e.gamma_conjugate(&gamma, 1), *e, "component idempotent is γ-stable");
            assert!(denominators_divide_group_order(e));
            for (j, f) in idems.iter().enumerate() {
                if i != j {
                    assert!(e.mul(f).is_zero());
                }
            }
            sum = sum.add(e);
        }
        assert_eq!(sum, GroupAlgebraElement::one(g.clone()));

        // the ζ9 component has v = 1, so e = ε(η)
        let skew = dec.components.iter().position(|c| c.schur_index == 3).unwrap();
        let eta = table.character(dec.components[skew].rep_index);
        assert_eq!(idems[skew], eps_idem(&g, eta));
    }

    #[test]
    fn e_chi_is_gamma_stable_idempotent() {
        let g = c9();
        let h = g.generators()[0];
        let gamma =
            GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 4))]).unwrap();
        let table = character_table(&g).unwrap();
        let dec = crate::clifford::decompose(&g, &gamma, &table).unwrap();
        for c in &dec.components {
            let eta = table.character(c.rep_index);
            let echi = e_chi(&g, &gamma, eta, c.invariants.w);
            assert!(echi.is_idempotent());
            assert_eq!(echi.gamma_conjugate(&gamma, 1), echi);
        }
    }

    #[test]
    fn trivial_group_component_idempotent_is_one() {
        let g = Arc::new(FiniteLGroup::build(3, &GroupSpec::Abelian(vec![])).unwrap());
        let gamma = GroupAutomorphism::identity(&g);
        let table = character_table(&g).unwrap();
        let dec = crate::clifford::decompose(&g, &gamma, &table).unwrap();
        let e = component_idempotent(&g, &gamma, &table, &dec.components[0]);
        assert_eq!(e, GroupAlgebraElement::one(g.clone()));
    }
}
