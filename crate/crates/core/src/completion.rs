//! Completion metadata of component centres `Q^L Γ^w` at height-1 primes.
//!
//! The completed centre is a two-dimensional local field: Laurent series
//! over `L` at `(T)`, Laurent series over the degree-`[L:Q_l]·d` extension
//! at an irreducible distinguished `(f)` of degree `d`, and the standard
//! double-series field `L{{T}}` at `(ℓ)`. Cohomological dimension is 3 in
//! every case; `SK₁` is trivial away from `(ℓ)` and open at `(ℓ)`. At `(ℓ)`
//! a component with Schur index `s > 1` completes to a skew field of the
//! same index, totally ramified of degree `s` with commutative residue of
//! degree `s`; the computable witness is `N(1-ζ) = unit · (1-ξ)` with the
//! unit of valuation 0.

use thiserror::Error;

use crate::arith::phi_lpow;
use crate::clifford::ComponentDescriptor;
use crate::cyclotomic::{CycloError, CyclotomicNumber, Valuation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompletionError {
    #[error("invalid prime kind: distinguished polynomial degree must be >= 1")]
    BadDegree,
    #[error("norm witness failed: {0}")]
    WitnessFailed(&'static str),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Height-1 prime of the centre's Iwasawa lattice `o_L[[T]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeKind {
    /// The prime `(T)`.
    T,
    /// `(f)` for an irreducible distinguished polynomial of this degree.
    DistinguishedPoly { degree: u64 },
    /// The prime `(ℓ)` above `l`.
    Ell,
}

/// Completed centre, as a symbolic classification tag with degree data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletedCenter {
    /// `E((X))` for a p-adic field `E` of the given degree over `Q_l`.
    LaurentSeries { residue_degree_over_ql: u64 },
    /// The standard two-dimensional field `L{{T}}`.
    DoubleSeries { l_conductor_exp: u32 },
}

/// First residue field of the completed centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueField {
    /// Characteristic-0 local field of the given degree over `Q_l`.
    Local { degree_over_ql: u64 },
    /// `F_l((T̄))`.
    LaurentOverFl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sk1Flag {
    Trivial,
    Unknown,
}

/// Completion data of the skew field at `(ℓ)` when the Schur index exceeds 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletedSkewField {
    /// Schur index, preserved under completion.
    pub index: u64,
    /// Ramification index over the completed centre; equals the index.
    pub ramification: u64,
    /// Degree of the (commutative) residue skew field over `F_l((T̄))`.
    pub residue_degree: u64,
    /// Defining polynomial of the residue extension `N̄`: `X^s - (1+T)`.
    pub defining_polynomial: String,
    /// Valuation of the unit in `N(1-ζ) = unit·(1-ξ)`; 0 once verified.
    pub witness_unit_valuation: i64,
}

/// Completion descriptor of one component centre at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionDescriptor {
    pub prime: PrimeKind,
    pub completed_center: CompletedCenter,
    pub residue_field: ResidueField,
    /// Cohomological dimension of the completed centre; always 3.
    pub cd: u32,
    pub sk1: Sk1Flag,
    pub skew_field: Option<CompletedSkewField>,
}

/// Derives the completion descriptor; pure in `(component, prime_kind)`.
pub fn completion_descriptor(
    component: &ComponentDescriptor,
    prime: PrimeKind,
) -> Result<CompletionDescriptor, CompletionError> {
    let l = component_prime(component);
    let l_degree = phi_lpow(l, component.center_conductor_exp);
    match prime {
        PrimeKind::T => Ok(CompletionDescriptor {
            prime,
            completed_center: CompletedCenter::LaurentSeries {
                residue_degree_over_ql: l_degree,
            },
            residue_field: ResidueField::Local {
                degree_over_ql: l_degree,
            },
            cd: 3,
            sk1: Sk1Flag::Trivial,
            skew_field: None,
        }),
        PrimeKind::DistinguishedPoly { degree } => {
            if degree == 0 {
                return Err(CompletionError::BadDegree);
            }
            Ok(CompletionDescriptor {
                prime,
                completed_center: CompletedCenter::LaurentSeries {
                    residue_degree_over_ql: l_degree * degree,
                },
                residue_field: ResidueField::Local {
                    degree_over_ql: l_degree * degree,
                },
                cd: 3,
                sk1: Sk1Flag::Trivial,
                skew_field: None,
            })
        }
        PrimeKind::Ell => {
            let s = component.schur_index;
            let skew_field = if s > 1 {
                let unit_val = norm_witness_unit_valuation(component)?;
                if unit_val != 0 {
                    return Err(CompletionError::WitnessFailed(
                        "unit in N(1-ζ) = unit·(1-ξ) has nonzero valuation",
                    ));
                }
                Some(CompletedSkewField {
                    index: s,
                    ramification: s,
                    residue_degree: s,
                    defining_polynomial: format!("X^{s} - (1+T)"),
                    witness_unit_valuation: unit_val,
                })
            } else {
                None
            };
            Ok(CompletionDescriptor {
                prime,
                completed_center: CompletedCenter::DoubleSeries {
                    l_conductor_exp: component.center_conductor_exp,
                },
                residue_field: ResidueField::LaurentOverFl,
                cd: 3,
                sk1: Sk1Flag::Unknown,
                skew_field,
            })
        }
    }
}

fn component_prime(component: &ComponentDescriptor) -> u64 {
    component.invariants.sigma_v.prime()
}

/// Valuation of `N_{Q(ζ)/Q(ξ)}(1-ζ) / (1-ξ)` where `ζ` has conductor
/// exponent `e_η` and `ξ = ζ^{l^r}`; exact, and 0 when the extension is
/// totally ramified as claimed.
pub fn norm_witness_unit_valuation(
    component: &ComponentDescriptor,
) -> Result<i64, CompletionError> {
    let l = component_prime(component);
    let e = component.eta_conductor_exp;
    let target = component.center_conductor_exp;
    let one_minus_zeta =
        CyclotomicNumber::one(l, e).sub(&CyclotomicNumber::root_of_unity(l, e, 1));
    let norm = one_minus_zeta.rel_norm(target)?;
    let one_minus_xi =
        CyclotomicNumber::one(l, target).sub(&CyclotomicNumber::root_of_unity(l, target, 1));
    let unit = norm.div(&one_minus_xi)?;
    match unit.l_valuation() {
        Valuation::Finite(v) => Ok(v),
        Valuation::Infinite => Err(CompletionError::WitnessFailed("norm vanished")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::clifford::decompose;
    use crate::group::{FiniteLGroup, GroupAutomorphism, GroupSpec};

    fn paper_example() -> crate::clifford::Decomposition {
        let g = FiniteLGroup::build(3, &GroupSpec::Abelian(vec![9])).unwrap();
        let h = g.generators()[0];
        let gamma =
            GroupAutomorphism::from_generator_images(&g, &[(0, g.power(h, 4))]).unwrap();
        let table = character_table(&g).unwrap();
        decompose(&g, &gamma, &table).unwrap()
    }

    #[test]
    fn skew_component_at_ell() {
        let dec = paper_example();
        let skew = dec.components.iter().find(|c| c.schur_index == 3).unwrap();
        let d = completion_descriptor(skew, PrimeKind::Ell).unwrap();
        assert_eq!(d.cd, 3);
        assert_eq!(d.sk1, Sk1Flag::Unknown);
        assert_eq!(d.residue_field, ResidueField::LaurentOverFl);
        assert_eq!(
            d.completed_center,
            CompletedCenter::DoubleSeries { l_conductor_exp: 1 }
        );
        let sf = d.skew_field.unwrap();
        assert_eq!(sf.index, 3);
        assert_eq!(sf.ramification, 3);
        assert_eq!(sf.residue_degree, 3);
        assert_eq!(sf.defining_polynomial, "X^3 - (1+T)");
        assert_eq!(sf.witness_unit_valuation, 0);
        // e·f = s²
        assert_eq!(sf.ramification * sf.residue_degree, 9);
    }

    #[test]
    fn any_component_at_t() {
        let dec = paper_example();
        for c in &dec.components {
            let d = completion_descriptor(c, PrimeKind::T).unwrap();
            assert_eq!(d.cd, 3);
            assert_eq!(d.sk1, Sk1Flag::Trivial);
            let deg = phi_lpow(3, c.center_conductor_exp);
            assert_eq!(
                d.residue_field,
                ResidueField::Local { degree_over_ql: deg }
            );
            assert!(d.skew_field.is_none());
        }
    }

    #[test]
    fn degree_one_distinguished_matches_t() {
        // f = T has degree 1, so the residue data coincides with the (T) case.
        let dec = paper_example();
        let trivial = dec
            .components
            .iter()
            .find(|c| c.center_conductor_exp == 0)
            .unwrap();
        let at_f = completion_descriptor(
            trivial,
            PrimeKind::DistinguishedPoly { degree: 1 },
        )
        .unwrap();
        assert_eq!(
            at_f.residue_field,
            ResidueField::Local { degree_over_ql: 1 }
        );
        let at_t = completion_descriptor(trivial, PrimeKind::T).unwrap();
        assert_eq!(at_f.residue_field, at_t.residue_field);
        assert_eq!(at_f.cd, 3);
        assert_eq!(at_f.sk1, Sk1Flag::Trivial);
    }

    #[test]
    fn witness_is_exact() {
        // N(1-ζ9) = 1-ζ3 exactly, so the unit is 1.
        let dec = paper_example();
        let skew = dec.components.iter().find(|c| c.schur_index == 3).unwrap();
        assert_eq!(norm_witness_unit_valuation(skew).unwrap(), 0);
    }

    #[test]
    fn bad_degree_rejected() {
        let dec = paper_example();
        assert_eq!(
            completion_descriptor(
                &dec.components[0],
                PrimeKind::DistinguishedPoly { degree: 0 }
            ),
            Err(CompletionError::BadDegree)
        );
    }
}
