//! Orbit invariants and Wedderburn component descriptors.
//!
//! For each irreducible `η` of `H` the procyclic action gives the orbit
//! length `w` (the restriction multiplicity pattern), the minimal positive
//! `v` with `η^{γ^v}` Galois-conjugate to `η`, the cyclic group
//! `G_0 = ⟨σ_v⟩` of order `w/v`, and the fixed field `L` of conductor
//! `l^{e_η - r}` where `l^r = w/v`. Components of `QG` are indexed by the
//! combined `⟨γ⟩ × Gal` orbits; the component over `η` has `χ(1) = w·η(1)`,
//! Schur index `s = w/v`, matrix size `χ(1)/s`, centre `Q^L Γ^w`, and for
//! `s > 1` a cyclic-algebra presentation with maximal subfield of conductor
//! `l^{e_η}` and distinguished unit `γ^w`.

use thiserror::Error;

use crate::arith::{lpow_exponent, phi_lpow, pow_u64, primitive_root_mod_lpow, units_mod_lpow};
use crate::chartab::{CharTabError, CharacterTable};
use crate::cyclotomic::{CyclotomicNumber, GaloisElement};
use crate::group::{FiniteLGroup, GroupAutomorphism};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error(transparent)]
    CharTab(#[from] CharTabError),
    #[error("orbit invariant violated: {0} (defect)")]
    InvariantViolated(&'static str),
}

/// Clifford-theoretic invariants of the orbit of one irreducible `η`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInvariants {
    /// γ-orbit length of η.
    pub w: u64,
    /// Minimal positive j with `η^{γ^j}` Galois-conjugate to η.
    pub v: u64,
    /// Order of `G_0 = ⟨σ_v⟩`, always `w/v`.
    pub g0_order: u64,
    /// Galois element with `η^{σ_v} = η^{γ^v}` (identity when w = v).
    pub sigma_v: GaloisElement,
    /// Conductor exponent of `L = Q_l(η)^{G_0}`, equal to `e_η - r`.
    pub l_conductor_exp: u32,
}

/// Cyclic-algebra presentation of the skew field underlying a component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkewFieldPresentation {
    /// Trivial Schur index; the component is a full matrix ring over its centre.
    Split,
    /// `(Q^{Q_l(ζ_{l^max})} Γ^w / Q^L Γ^w, σ_v, γ^w)`.
    Cyclic {
        max_subfield_conductor_exp: u32,
        base_conductor_exp: u32,
        base_gamma_power: u64,
        galois_generator: GaloisElement,
        /// The distinguished unit is `γ^w`; this records `w`.
        unit_gamma_power: u64,
    },
}

/// One Wedderburn component of `QG`, described by its combined orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDescriptor {
    /// Least table index in the combined orbit (the representative η).
    pub rep_index: usize,
    /// Sorted table indices of the full `⟨γ⟩ × Gal` orbit.
    pub orbit: Vec<usize>,
    pub eta_degree: u64,
    pub eta_conductor_exp: u32,
    pub invariants: OrbitInvariants,
    /// `χ(1) = w · η(1)`.
    pub chi_degree: u64,
    /// Schur index `s = w/v`.
    pub schur_index: u64,
    /// `n = χ(1)/s`.
    pub matrix_size: u64,
    /// Centre `Q^L Γ^{w}`: conductor exponent of L and the power w.
    pub center_conductor_exp: u32,
    pub center_gamma_power: u64,
    pub skew_field: SkewFieldPresentation,
    /// Dimension over `QΓ_0`: `l^m · v · η(1)² · φ(l^{e_η})`.
    pub dim_over_q_gamma0: u64,
}

/// The full decomposition of `QG` at the finite layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// `l^m` is the automorphism order; `Γ^{l^m}` is central.
    pub m: u32,
    pub components: Vec<ComponentDescriptor>,
}

impl Decomposition {
    /// `Σ dim_over_QΓ0`, which must equal `l^m · |H|`.
    pub fn total_dimension(&self) -> u64 {
        self.components.iter().map(|c| c.dim_over_q_gamma0).sum()
    }
}

/// `η^γ`: the conjugate character `c ↦ η(class of γ(rep c))`, identified
/// against the canonical table.
pub fn gamma_act_char(
    table: &CharacterTable,
    group: &FiniteLGroup,
    gamma: &GroupAutomorphism,
    index: usize,
) -> Result<usize, CliffordError> {
    let class_perm = gamma.class_permutation(group);
    let ch = table.character(index);
    let values: Vec<CyclotomicNumber> = (0..group.class_count())
        .map(|c| ch.value(class_perm[c]).clone())
        .collect();
    table
        .find(&values)
        .ok_or(CliffordError::CharTab(CharTabError::ImageNotInTable))
}

/// Permutation of table indices induced by γ.
pub fn gamma_permutation(
    table: &CharacterTable,
    group: &FiniteLGroup,
    gamma: &GroupAutomorphism,
) -> Result<Vec<usize>, CliffordError> {
    (0..table.len())
        .map(|i| gamma_act_char(table, group, gamma, i))
        .collect()
}

/// Permutation of table indices induced by a Galois element at the ambient level.
pub fn galois_permutation(
    table: &CharacterTable,
    sigma: &GaloisElement,
) -> Result<Vec<usize>, CliffordError> {
    (0..table.len())
        .map(|i| {
            let twisted = table.character(i).galois_twist(sigma);
            table
                .find(twisted.values())
                .ok_or(CliffordError::CharTab(CharTabError::ImageNotInTable))
        })
        .collect()
}

fn orbit_of(start: usize, perms: &[&[usize]]) -> Vec<usize> {
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(x) = stack.pop() {
        for perm in perms {
            let y = perm[x];
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Computes `w`, `v`, `σ_v`, `G_0` and the conductor of `L` for the
/// character at `index`.
pub fn orbit_invariants(
    table: &CharacterTable,
    group: &FiniteLGroup,
    gamma: &GroupAutomorphism,
    index: usize,
) -> Result<OrbitInvariants, CliffordError> {
    let l = group.prime();
    let gamma_perm = gamma_permutation(table, group, gamma)?;
    let eta = table.character(index);
    let e_eta = eta.conductor_exp();

    // w = least j ≥ 1 with η^{γ^j} = η
    let mut w = 1u64;
    let mut cur = gamma_perm[index];
    while cur != index {
        cur = gamma_perm[cur];
        w += 1;
    }

    // Galois orbit of η at its own conductor level
    let galois_orbit: std::collections::BTreeSet<usize> = if e_eta == 0 {
        std::iter::once(index).collect()
    } else {
        let gen = primitive_root_mod_lpow(l, e_eta);
        let sigma = GaloisElement::new(l, e_eta, gen).expect("primitive root is a unit");
        let perm = galois_permutation(table, &sigma)?;
        orbit_of(index, &[&perm]).into_iter().collect()
    };

    // v = least j ≥ 1 with η^{γ^j} in the Galois orbit (j = w always qualifies)
    let mut v = 0u64;
    let mut cur = index;
    for j in 1..=w {
        cur = gamma_perm[cur];
        if galois_orbit.contains(&cur) {
            v = j;
            break;
        }
    }
    if v == 0 || w % v != 0 {
        return Err(CliffordError::InvariantViolated("v does not divide w"));
    }
    let g0_order = w / v;
    let r = lpow_exponent(l, g0_order)
        .ok_or(CliffordError::InvariantViolated("w/v is not an l-power"))?;
    if r > 0 && e_eta < r + 1 {
        return Err(CliffordError::InvariantViolated("G_0 exceeds the l-part of Gal"));
    }

    // σ_v solved from η^{σ} = η^{γ^v}, value by value
    let target: Vec<CyclotomicNumber> = {
        let class_perm = gamma.class_permutation(group);
        let mut perm_v: Vec<usize> = (0..group.class_count()).collect();
        for _ in 0..v {
            perm_v = perm_v.iter().map(|&c| class_perm[c]).collect();
        }
        (0..group.class_count())
            .map(|c| eta.value(perm_v[c]).clone())
            .collect()
    };
    let sigma_v = units_mod_lpow(l, e_eta)
        .into_iter()
        .filter_map(|k| GaloisElement::new(l, e_eta, k).ok())
        .find(|s| {
            (0..group.class_count()).all(|c| s.apply(eta.value(c)) == target[c])
        })
        .ok_or(CliffordError::InvariantViolated(
            "no Galois element matches η^{γ^v}",
        ))?;

    // G_0 = ⟨σ_v⟩ must be the unique order-l^r subgroup {k ≡ 1 mod l^{e-r}}
    let mut g0: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    let mut s = GaloisElement::identity(l, e_eta);
    loop {
        g0.insert(s.exponent());
        s = s.compose(&sigma_v);
        if s.is_identity() && g0.contains(&s.exponent()) {
            break;
        }
    }
    if g0.len() as u64 != g0_order {
        return Err(CliffordError::InvariantViolated("|⟨σ_v⟩| differs from w/v"));
    }
    if e_eta > 0 {
        let modulus = pow_u64(l, e_eta - r);
        let expected: std::collections::BTreeSet<u64> = units_mod_lpow(l, e_eta)
            .into_iter()
            .filter(|k| k % modulus == 1 % modulus)
            .collect();
        if g0 != expected {
            return Err(CliffordError::InvariantViolated(
                "G_0 is not {k ≡ 1 mod l^{e-r}}",
            ));
        }
    }

    Ok(OrbitInvariants {
        w,
        v,
        g0_order,
        sigma_v,
        l_conductor_exp: e_eta - r,
    })
}

/// Partitions the table into combined orbits and assembles one descriptor
/// per component, in table order of the representatives.
pub fn decompose(
    group: &FiniteLGroup,
    gamma: &GroupAutomorphism,
    table: &CharacterTable,
) -> Result<Decomposition, CliffordError> {
    let l = group.prime();
    let m = gamma.order_exp();
    let gamma_perm = gamma_permutation(table, group, gamma)?;
    let level = table.value_level();
    let galois_perm = if level == 0 {
        (0..table.len()).collect::<Vec<usize>>()
    } else {
        let gen = primitive_root_mod_lpow(l, level);
        galois_permutation(table, &GaloisElement::new(l, level, gen).unwrap())?
    };

    let mut assigned = vec![false; table.len()];
    let mut components = Vec::new();
    for rep in 0..table.len() {
        if assigned[rep] {
            continue;
        }
        let orbit = orbit_of(rep, &[&gamma_perm, &galois_perm]);
        for &i in &orbit {
            assigned[i] = true;
        }
        let eta = table.character(rep);
        let inv = orbit_invariants(table, group, gamma, rep)?;
        let e_eta = eta.conductor_exp();
        let chi_degree = inv.w * eta.degree();
        let schur_index = inv.g0_order;
        let matrix_size = chi_degree / schur_index;
        if orbit.len() as u64 != inv.v * phi_lpow(l, e_eta) {
            return Err(CliffordError::InvariantViolated(
                "orbit size is not v·φ(l^{e_η})",
            ));
        }
        let dim = pow_u64(l, m) * inv.v * eta.degree() * eta.degree() * phi_lpow(l, e_eta);
        // two routes to the dimension must agree:
        // χ(1)²·φ(l^{e_η - r})·(l^m / w) = l^m·v·η(1)²·φ(l^{e_η})
        let lhs = chi_degree * chi_degree * phi_lpow(l, inv.l_conductor_exp)
            * (pow_u64(l, m) / inv.w);
        if lhs != dim {
            return Err(CliffordError::InvariantViolated(
                "dimension formulas disagree",
            ));
        }
        let skew_field = if schur_index == 1 {
            SkewFieldPresentation::Split
        } else {
            SkewFieldPresentation::Cyclic {
                max_subfield_conductor_exp: e_eta,
                base_conductor_exp: inv.l_conductor_exp,
                base_gamma_power: inv.w,
                galois_generator: inv.sigma_v,
                unit_gamma_power: inv.w,
            }
        };
        components.push(ComponentDescriptor {
            rep_index: rep,
            orbit,
            eta_degree: eta.degree(),
            eta_conductor_exp: e_eta,
            chi_degree,
            schur_index,
            matrix_size,
            center_conductor_exp: inv.l_conductor_exp,
            center_gamma_power: inv.w,
            skew_field,
            dim_over_q_gamma0: dim,
            invariants: inv,
        });
    }

    let dec = Decomposition { m, components };
    if dec.total_dimension() != pow_u64(l, m) * group.order() {
        return Err(CliffordError::InvariantViolated(
            "component dimensions do not sum to l^m·|H|",
        ));
    }
    Ok(dec)
}
