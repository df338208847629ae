//! Orchestration: build the group and automorphism, compute the character
//! table and the decomposition, derive completion descriptors, run the
//! verification suites and assemble the report.

use std::sync::Arc;

use qg_core::arith::{lpow_exponent, phi_lpow, pow_u64};
use qg_core::chartab::{character_table, class_mult_coefficients, CharacterTable};
use qg_core::clifford::{decompose, orbit_invariants, Decomposition};
use qg_core::completion::{
    completion_descriptor, CompletedCenter, CompletionDescriptor, PrimeKind, ResidueField,
    Sk1Flag,
};
use qg_core::cyclotomic::{CyclotomicNumber, GaloisElement, Rational};
use qg_core::group::{FiniteLGroup, GroupAutomorphism};
use qg_core::idempotent::{
    component_idempotent, denominators_divide_group_order, e_chi, e_idem, eps_idem,
    GroupAlgebraElement,
};
use qg_core::series::{
    norm_order_certificate, recompose, unit_reduction_check, uniformizer,
    weierstrass_prepare, NormOrderVerdict, TruncatedSeries,
};

use crate::doc::Diagnostic;
use crate::input::{InputDocument, PrimeSpec, VerifyLevel};
use crate::report::{
    cyclotomic_literal, CompletionReport, ComponentReport, InputEcho, Report,
    SkewCompletionReport, SkewFieldReport, SuiteReport,
};

/// Largest group for which the exact idempotent suites run by default.
const IDEMPOTENT_SUITE_CAP: u64 = 27;

pub fn run(doc: &InputDocument) -> Result<Report, Vec<Diagnostic>> {
    let group = Arc::new(doc.build_group().map_err(|d| vec![d])?);
    let gamma = doc.build_gamma(&group).map_err(|d| vec![d])?;
    let table = character_table(&group).map_err(|e| vec![Diagnostic::new(0, e.to_string())])?;
    let dec = decompose(&group, &gamma, &table)
        .map_err(|e| vec![Diagnostic::new(0, e.to_string())])?;

    let mut components = Vec::with_capacity(dec.components.len());
    for (index, c) in dec.components.iter().enumerate() {
        let mut completions = Vec::new();
        for prime in &doc.options.primes {
            let kind = match prime {
                PrimeSpec::T => PrimeKind::T,
                PrimeSpec::Ell => PrimeKind::Ell,
                PrimeSpec::F(coeffs) => PrimeKind::DistinguishedPoly {
                    degree: coeffs.len() as u64,
                },
            };
            let desc = completion_descriptor(c, kind)
                .map_err(|e| vec![Diagnostic::new(0, e.to_string())])?;
            completions.push(completion_report(prime, &desc));
        }
        let eta = table.character(c.rep_index);
        components.push(ComponentReport {
            index,
            representative: c.rep_index,
            orbit: c.orbit.clone(),
            eta_degree: c.eta_degree,
            eta_conductor_exp: c.eta_conductor_exp,
            w: c.invariants.w,
            v: c.invariants.v,
            g0_order: c.invariants.g0_order,
            sigma_exponent: c.invariants.sigma_v.exponent(),
            sigma_conductor_exp: c.invariants.sigma_v.conductor_exp(),
            chi_degree: c.chi_degree,
            schur_index: c.schur_index,
            matrix_size: c.matrix_size,
            center_conductor_exp: c.center_conductor_exp,
            center_gamma_power: c.center_gamma_power,
            dim_over_qgamma0: c.dim_over_q_gamma0,
            skew_field: match &c.skew_field {
                qg_core::clifford::SkewFieldPresentation::Split => SkewFieldReport::Split,
                qg_core::clifford::SkewFieldPresentation::Cyclic {
                    max_subfield_conductor_exp,
                    ..
                } => SkewFieldReport::Cyclic {
                    max_subfield_conductor_exp: *max_subfield_conductor_exp,
                },
            },
            character_values: eta.values().iter().map(cyclotomic_literal).collect(),
            completions,
        });
    }

    let mut verification = vec![
        suite_class_structure(&group, &gamma),
        suite_character_degrees(&group, &table),
        suite_character_orthogonality(&group, &table),
        suite_dimension_accounting(&group, &dec),
        suite_g0_identification(&group, &gamma, &table, &dec),
        suite_roquette(&group, &dec),
        suite_idempotents(&group, &gamma, &table, &dec),
    ];
    if doc.options.verify == VerifyLevel::Full {
        verification.push(suite_norm_order_certificates(&group, &dec));
        verification.push(suite_weierstrass(&group, &dec, doc.options.series_precision));
    }

    Ok(Report {
        input: InputEcho {
            l: doc.l,
            group: doc.group_echo(),
            gamma: doc.gamma_echo(),
            series_precision: doc.options.series_precision,
            verify: doc.options.verify.as_str().to_string(),
            primes: doc.options.primes.iter().map(|p| p.canonical()).collect(),
            max_order: doc.options.max_order,
        },
        m: dec.m,
        group_order: group.order(),
        group_exponent: group.exponent(),
        class_count: group.class_count(),
        class_sizes: (0..group.class_count()).map(|c| group.class_size(c)).collect(),
        components,
        verification,
    })
}

fn completion_report(prime: &PrimeSpec, desc: &CompletionDescriptor) -> CompletionReport {
    let center = match &desc.completed_center {
        CompletedCenter::LaurentSeries {
            residue_degree_over_ql,
        } => format!("laurent(residue_degree={residue_degree_over_ql})"),
        CompletedCenter::DoubleSeries { l_conductor_exp } => {
            format!("double_series(conductor_exp={l_conductor_exp})")
        }
    };
    let residue = match &desc.residue_field {
        ResidueField::Local { degree_over_ql } => format!("local(degree={degree_over_ql})"),
        ResidueField::LaurentOverFl => "laurent_over_fl".to_string(),
    };
    CompletionReport {
        prime: prime.canonical(),
        center,
        residue,
        cd: desc.cd,
        sk1: match desc.sk1 {
            Sk1Flag::Trivial => "trivial".to_string(),
            Sk1Flag::Unknown => "unknown".to_string(),
        },
        skew: desc.skew_field.as_ref().map(|sk| SkewCompletionReport {
            index: sk.index,
            ramification: sk.ramification,
            residue_degree: sk.residue_degree,
            defining_polynomial: sk.defining_polynomial.clone(),
            witness_unit_valuation: sk.witness_unit_valuation,
        }),
    }
}

fn check(conditions: Vec<(bool, String)>, name: &str) -> SuiteReport {
    for (ok, witness) in conditions {
        if !ok {
            return SuiteReport::fail(name, witness);
        }
    }
    SuiteReport::pass(name)
}

fn suite_class_structure(group: &FiniteLGroup, gamma: &GroupAutomorphism) -> SuiteReport {
    let mut conds = Vec::new();
    let total: usize = (0..group.class_count()).map(|c| group.class_size(c)).sum();
    conds.push((
        total as u64 == group.order(),
        format!("class sizes sum to {total}, group order is {}", group.order()),
    ));
    for c in 0..group.class_count() {
        conds.push((
            group.order() % group.class_size(c) as u64 == 0,
            format!("class {c} size does not divide the group order"),
        ));
    }
    let center = group
        .classes()
        .iter()
        .filter(|orbit| orbit.len() == 1)
        .count();
    conds.push((
        group.order() == 1 || center > 1,
        "centre of a nontrivial l-group must be nontrivial".to_string(),
    ));
    // automorphism permutes classes; the induced permutation order divides
    // the automorphism order
    let perm = gamma.class_permutation(group);
    let mut sorted = perm.clone();
    sorted.sort_unstable();
    conds.push((
        sorted == (0..group.class_count()).collect::<Vec<_>>(),
        "gamma does not permute the conjugacy classes".to_string(),
    ));
    let mut order = 1u64;
    let mut current = perm.clone();
    while current.iter().enumerate().any(|(i, &x)| x != i) {
        current = current.iter().map(|&x| perm[x]).collect();
        order += 1;
    }
    conds.push((
        gamma.order() % order == 0,
        format!(
            "induced class permutation order {order} does not divide gamma order {}",
            gamma.order()
        ),
    ));
    check(conds, "class_structure")
}

fn suite_character_degrees(group: &FiniteLGroup, table: &CharacterTable) -> SuiteReport {
    let mut conds = Vec::new();
    conds.push((
        table.len() == group.class_count(),
        format!(
            "{} characters for {} classes",
            table.len(),
            group.class_count()
        ),
    ));
    let sum: u64 = table.characters().iter().map(|c| c.degree() * c.degree()).sum();
    conds.push((
        sum == group.order(),
        format!("sum of squared degrees is {sum}, group order is {}", group.order()),
    ));
    for ch in table.characters() {
        conds.push((
            lpow_exponent(group.prime(), ch.degree()).is_some(),
            format!("degree {} is not an l-power", ch.degree()),
        ));
        conds.push((
            ch.conductor_exp() <= group.exponent_exp(),
            "character values leave Q(zeta_{exp H})".to_string(),
        ));
    }
    let linear = table.characters().iter().filter(|c| c.degree() == 1).count() as u64;
    let abelianization = group.order() / group.derived_subgroup().len() as u64;
    conds.push((
        linear == abelianization,
        format!("{linear} linear characters, |H/[H,H]| = {abelianization}"),
    ));
    // class-algebra consistency law
    let constants = class_mult_coefficients(group);
    let r = group.class_count();
    for i in 0..r {
        for j in 0..r {
            let total: u64 = (0..r)
                .map(|k| constants[i][j][k] * group.class_size(k) as u64)
                .sum();
            conds.push((
                total == (group.class_size(i) * group.class_size(j)) as u64,
                format!("structure constants are inconsistent at ({i}, {j})"),
            ));
        }
    }
    check(conds, "character_degrees")
}

fn suite_character_orthogonality(
    group: &FiniteLGroup,
    table: &CharacterTable,
) -> SuiteReport {
    let mut conds = Vec::new();
    conds.push((
        table.first_orthogonality_holds(group),
        "first orthogonality fails".to_string(),
    ));
    conds.push((
        table.second_orthogonality_holds(group),
        "second orthogonality fails".to_string(),
    ));
    check(conds, "character_orthogonality")
}

fn suite_dimension_accounting(group: &FiniteLGroup, dec: &Decomposition) -> SuiteReport {
    let l = group.prime();
    let mut conds = Vec::new();
    let expected = pow_u64(l, dec.m) * group.order();
    let total = dec.total_dimension();
    conds.push((
        total == expected,
        format!("component dimensions sum to {total}, expected {expected}"),
    ));
    for c in &dec.components {
        conds.push((
            c.chi_degree * c.chi_degree == c.schur_index * c.schur_index * c.matrix_size * c.matrix_size,
            format!("chi(1)^2 != s^2 n^2 for component at {}", c.rep_index),
        ));
        conds.push((
            c.orbit.len() as u64 == c.invariants.v * phi_lpow(l, c.eta_conductor_exp),
            format!("orbit size mismatch for component at {}", c.rep_index),
        ));
        let lhs = c.chi_degree
            * c.chi_degree
            * phi_lpow(l, c.center_conductor_exp)
            * (pow_u64(l, dec.m) / c.invariants.w);
        conds.push((
            lhs == c.dim_over_q_gamma0,
            format!("dimension routes disagree for component at {}", c.rep_index),
        ));
    }
    check(conds, "dimension_accounting")
}

fn suite_g0_identification(
    group: &FiniteLGroup,
    gamma: &GroupAutomorphism,
    table: &CharacterTable,
    dec: &Decomposition,
) -> SuiteReport {
    let l = group.prime();
    let mut conds = Vec::new();
    for c in &dec.components {
        // independent recomputation of the invariants
        match orbit_invariants(table, group, gamma, c.rep_index) {
            Ok(inv) => {
                conds.push((
                    inv == c.invariants,
                    format!("recomputed invariants differ at {}", c.rep_index),
                ));
                conds.push((
                    inv.g0_order == inv.w / inv.v,
                    format!("|G_0| != w/v at {}", c.rep_index),
                ));
            }
            Err(e) => conds.push((false, format!("invariants failed at {}: {e}", c.rep_index))),
        }
        // eta^{sigma_v} = eta^{gamma^v}, value by value on every class
        let eta = table.character(c.rep_index);
        let class_perm = gamma.class_permutation(group);
        let mut perm_v: Vec<usize> = (0..group.class_count()).collect();
        for _ in 0..c.invariants.v {
            perm_v = perm_v.iter().map(|&x| class_perm[x]).collect();
        }
        let sigma = c.invariants.sigma_v;
        let matches = (0..group.class_count())
            .all(|cls| sigma.apply(eta.value(cls)) == *eta.value(perm_v[cls]));
        conds.push((
            matches,
            format!("eta^sigma_v != eta^gamma^v at {}", c.rep_index),
        ));
        // G_0 = ⟨sigma_v⟩ equals {k ≡ 1 mod l^{e-r}}
        let e_eta = c.eta_conductor_exp;
        if e_eta > 0 {
            let r = lpow_exponent(l, c.invariants.g0_order).unwrap_or(u32::MAX);
            let mut generated = std::collections::BTreeSet::new();
            let mut s = GaloisElement::identity(l, e_eta);
            for _ in 0..c.invariants.g0_order {
                generated.insert(s.exponent());
                s = s.compose(&sigma);
            }
            let modulus = pow_u64(l, e_eta - r);
            let expected: std::collections::BTreeSet<u64> =
                qg_core::arith::units_mod_lpow(l, e_eta)
                    .into_iter()
                    .filter(|k| k % modulus == 1 % modulus)
                    .collect();
            conds.push((
                generated == expected,
                format!("G_0 is not the congruence subgroup at {}", c.rep_index),
            ));
        }
    }
    check(conds, "g0_identification")
}

fn suite_roquette(group: &FiniteLGroup, dec: &Decomposition) -> SuiteReport {
    let mut conds = Vec::new();
    for c in &dec.components {
        if c.invariants.w == 1 {
            conds.push((
                c.schur_index == 1,
                format!("w = 1 but s = {} at {}", c.schur_index, c.rep_index),
            ));
        }
        conds.push((
            lpow_exponent(group.prime(), c.schur_index).is_some(),
            format!("s = {} is not an l-power at {}", c.schur_index, c.rep_index),
        ));
        conds.push((
            c.chi_degree % c.schur_index == 0,
            format!("s does not divide chi(1) at {}", c.rep_index),
        ));
    }
    check(conds, "roquette_degeneration")
}

fn suite_idempotents(
    group: &Arc<FiniteLGroup>,
    gamma: &GroupAutomorphism,
    table: &CharacterTable,
    dec: &Decomposition,
) -> SuiteReport {
    if group.order() > IDEMPOTENT_SUITE_CAP {
        return SuiteReport::skipped(
            "idempotents",
            format!(
                "group order {} exceeds the idempotent-suite cap {}",
                group.order(),
                IDEMPOTENT_SUITE_CAP
            ),
        );
    }
    let mut conds = Vec::new();
    let idems: Vec<GroupAlgebraElement> = table
        .characters()
        .iter()
        .map(|ch| e_idem(group, ch))
        .collect();
    let mut sum = GroupAlgebraElement::zero(group.clone());
    for (i, a) in idems.iter().enumerate() {
        conds.push((a.is_idempotent(), format!("e(eta_{i}) is not idempotent")));
        conds.push((a.is_central(), format!("e(eta_{i}) is not central")));
        conds.push((
            denominators_divide_group_order(a),
            format!("e(eta_{i}) has denominators not dividing |H|"),
        ));
        for (j, b) in idems.iter().enumerate() {
            if i < j {
                conds.push((
                    a.mul(b).is_zero(),
                    format!("e(eta_{i})·e(eta_{j}) != 0"),
                ));
            }
        }
        sum = sum.add(a);
    }
    conds.push((
        sum == GroupAlgebraElement::one(group.clone()),
        "sum of e(eta) is not 1".to_string(),
    ));
    for (i, ch) in table.characters().iter().enumerate() {
        let eps = eps_idem(group, ch);
        conds.push((
            eps.has_rational_coeffs(),
            format!("eps(eta_{i}) has irrational coefficients"),
        ));
        conds.push((eps.is_idempotent(), format!("eps(eta_{i}) is not idempotent")));
    }
    let components: Vec<GroupAlgebraElement> = dec
        .components
        .iter()
        .map(|c| component_idempotent(group, gamma, table, c))
        .collect();
    let mut sum = GroupAlgebraElement::zero(group.clone());
    for (i, e) in components.iter().enumerate() {
        conds.push((e.is_idempotent(), format!("component idempotent {i} not idempotent")));
        conds.push((
            e.gamma_conjugate(gamma, 1) == *e,
            format!("component idempotent {i} is not gamma-stable"),
        ));
        conds.push((
            e.has_rational_coeffs(),
            format!("component idempotent {i} has irrational coefficients"),
        ));
        conds.push((
            denominators_divide_group_order(e),
            format!("component idempotent {i} has denominators not dividing |H|"),
        ));
        for (j, f) in components.iter().enumerate() {
            if i < j {
                conds.push((
                    e.mul(f).is_zero(),
                    format!("component idempotents {i}, {j} not orthogonal"),
                ));
            }
        }
        sum = sum.add(e);
    }
    conds.push((
        sum == GroupAlgebraElement::one(group.clone()),
        "component idempotents do not sum to 1".to_string(),
    ));
    // e_chi per component is gamma-stable and idempotent
    for c in &dec.components {
        let eta = table.character(c.rep_index);
        let echi = e_chi(group, gamma, eta, c.invariants.w);
        conds.push((
            echi.is_idempotent() && echi.gamma_conjugate(gamma, 1) == echi,
            format!("e_chi misbehaves at {}", c.rep_index),
        ));
    }
    check(conds, "idempotents")
}

fn suite_norm_order_certificates(group: &FiniteLGroup, dec: &Decomposition) -> SuiteReport {
    let l = group.prime();
    let mut conds = Vec::new();
    for c in dec.components.iter().filter(|c| c.schur_index > 1) {
        let e = c.eta_conductor_exp;
        let r = lpow_exponent(l, c.schur_index).expect("s is an l-power");
        for t in 0..=r {
            match norm_order_certificate(l, e, r, t) {
                Ok(cert) => {
                    let expected = if t < r {
                        NormOrderVerdict::Obstructed
                    } else {
                        NormOrderVerdict::Representable
                    };
                    conds.push((
                        cert.verdict == expected,
                        format!("certificate verdict wrong at (l={l}, e={e}, r={r}, t={t})"),
                    ));
                    let lr = pow_u64(l, r);
                    conds.push((
                        cert.trace_values[0].as_rational()
                            == Some(Rational::from_integer(lr.into())),
                        format!("Tr(1) != l^r at (e={e}, r={r})"),
                    ));
                    conds.push((
                        cert.trace_values[1..].iter().all(|v| v.is_zero()),
                        format!("Tr(zeta^i) != 0 at (e={e}, r={r})"),
                    ));
                }
                Err(err) => conds.push((false, format!("certificate failed: {err}"))),
            }
        }
    }
    check(conds, "norm_order_certificates")
}

fn suite_weierstrass(
    group: &FiniteLGroup,
    dec: &Decomposition,
    precision: usize,
) -> SuiteReport {
    let l = group.prime();
    let mut conds = Vec::new();
    for c in dec.components.iter().filter(|c| c.schur_index > 1) {
        let e = c.eta_conductor_exp;
        let s = c.schur_index;
        let r = lpow_exponent(l, s).expect("s is an l-power");
        // (1+T)^s - 1 is distinguished of degree s after preparation
        let m = precision.max(s as usize + 2);
        let one_plus_t = TruncatedSeries::one_plus_t(l, 0, m);
        let minus_one = TruncatedSeries::one(l, 0, m).scale(&CyclotomicNumber::from_rational(
            l,
            0,
            Rational::from_integer((-1i64).into()),
        ));
        let f = one_plus_t.pow(s).and_then(|p| p.add(&minus_one));
        match f {
            Ok(f) => match weierstrass_prepare(&f) {
                Ok(prep) => {
                    conds.push((
                        prep.mu == 0 && prep.lambda() == s as usize,
                        format!("preparation of (1+T)^{s} - 1 gave mu={}, lambda={}", prep.mu, prep.lambda()),
                    ));
                    match recompose(prep.mu, &prep.distinguished, &prep.unit) {
                        Ok(back) => conds.push((
                            back == f,
                            format!("recomposition of (1+T)^{s} - 1 differs"),
                        )),
                        Err(err) => conds.push((false, format!("recompose failed: {err}"))),
                    }
                }
                Err(err) => conds.push((false, format!("preparation failed: {err}"))),
            },
            Err(err) => conds.push((false, format!("series arithmetic failed: {err}"))),
        }
        // (T + ell)·(1 + zeta T) at the component's maximal-subfield level
        let ell = uniformizer(l, e);
        let zeta = CyclotomicNumber::root_of_unity(l, e, 1);
        let mut tpe = vec![CyclotomicNumber::zero(l, e); precision];
        tpe[0] = ell.clone();
        tpe[1] = CyclotomicNumber::one(l, e);
        let mut unit = vec![CyclotomicNumber::zero(l, e); precision];
        unit[0] = CyclotomicNumber::one(l, e);
        unit[1] = zeta.clone();
        let product = TruncatedSeries::new(l, e, tpe)
            .and_then(|a| Ok((a, TruncatedSeries::new(l, e, unit)?)))
            .and_then(|(a, b)| a.mul(&b));
        match product {
            Ok(f) => match weierstrass_prepare(&f) {
                Ok(prep) => {
                    conds.push((
                        prep.mu == 0 && prep.lambda() == 1,
                        format!(
                            "preparation of (T+ell)(1+zeta T) gave mu={}, lambda={}",
                            prep.mu,
                            prep.lambda()
                        ),
                    ));
                    match recompose(prep.mu, &prep.distinguished, &prep.unit) {
                        Ok(back) => conds.push((
                            back == f,
                            "recomposition of (T+ell)(1+zeta T) differs".to_string(),
                        )),
                        Err(err) => conds.push((false, format!("recompose failed: {err}"))),
                    }
                }
                Err(err) => conds.push((false, format!("preparation failed: {err}"))),
            },
            Err(err) => conds.push((false, format!("series arithmetic failed: {err}"))),
        }
        // the unit-reduction obstruction: 1 + zeta T cannot norm to (1+T)^{l^t}
        let mut uc = vec![CyclotomicNumber::zero(l, e); precision];
        uc[0] = CyclotomicNumber::one(l, e);
        uc[1] = zeta;
        if let Ok(f) = TruncatedSeries::new(l, e, uc) {
            for t in 0..=r {
                match unit_reduction_check(&f, e - r, t) {
                    Ok(chk) => conds.push((
                        chk.verdict == NormOrderVerdict::Obstructed
                            && chk.linear_trace.is_zero(),
                        format!("unit reduction of 1 + zeta T not obstructed at t={t}"),
                    )),
                    Err(err) => conds.push((false, format!("unit reduction failed: {err}"))),
                }
            }
        }
    }
    check(conds, "weierstrass_roundtrip")
}
