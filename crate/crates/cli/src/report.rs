//! The report: every component descriptor, per-component completion data,
//! and the verification summary. The machine form is a stable-field-order
//! block document whose byte layout is part of the contract; it parses
//! back to an equal `Report`.

use qg_core::cyclotomic::CyclotomicNumber;

use crate::doc::{self, Block, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputEcho {
    pub l: u64,
    pub group: String,
    pub gamma: String,
    pub series_precision: usize,
    pub verify: String,
    pub primes: Vec<String>,
    pub max_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skipped,
}

impl SuiteStatus {
    fn as_str(&self) -> &'static str {
        match self {
            SuiteStatus::Pass => "pass",
            SuiteStatus::Fail => "fail",
            SuiteStatus::Skipped => "skipped",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(SuiteStatus::Pass),
            "fail" => Some(SuiteStatus::Fail),
            "skipped" => Some(SuiteStatus::Skipped),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub status: SuiteStatus,
    pub witness: Option<String>,
}

impl SuiteReport {
    pub fn pass(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            status: SuiteStatus::Pass,
            witness: None,
        }
    }

    pub fn fail(name: &str, witness: String) -> Self {
        SuiteReport {
            name: name.to_string(),
            status: SuiteStatus::Fail,
            witness: Some(witness),
        }
    }

    pub fn skipped(name: &str, witness: String) -> Self {
        SuiteReport {
            name: name.to_string(),
            status: SuiteStatus::Skipped,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkewFieldReport {
    Split,
    Cyclic { max_subfield_conductor_exp: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewCompletionReport {
    pub index: u64,
    pub ramification: u64,
    pub residue_degree: u64,
    pub defining_polynomial: String,
    pub witness_unit_valuation: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionReport {
    pub prime: String,
    pub center: String,
    pub residue: String,
    pub cd: u32,
    pub sk1: String,
    pub skew: Option<SkewCompletionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub index: usize,
    pub representative: usize,
    pub orbit: Vec<usize>,
    pub eta_degree: u64,
    pub eta_conductor_exp: u32,
    pub w: u64,
    pub v: u64,
    pub g0_order: u64,
    pub sigma_exponent: u64,
    pub sigma_conductor_exp: u32,
    pub chi_degree: u64,
    pub schur_index: u64,
    pub matrix_size: u64,
    pub center_conductor_exp: u32,
    pub center_gamma_power: u64,
    pub dim_over_qgamma0: u64,
    pub skew_field: SkewFieldReport,
    pub character_values: Vec<String>,
    pub completions: Vec<CompletionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub input: InputEcho,
    pub m: u32,
    pub group_order: u64,
    pub group_exponent: u64,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    pub components: Vec<ComponentReport>,
    pub verification: Vec<SuiteReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.verification
            .iter()
            .all(|s| s.status != SuiteStatus::Fail)
    }

    /// Machine-readable form with stable field order; byte-exact contract.
    pub fn to_machine_text(&self) -> String {
        let mut root = Block::new("");
        let mut report = Block::new("qg-report");
        report.push_scalar("format_version", "1");

        let mut input = Block::new("input");
        input.push_scalar("l", self.input.l.to_string());
        input.push_scalar("group", self.input.group.clone());
        input.push_scalar("gamma", self.input.gamma.clone());
        input.push_scalar("series_precision", self.input.series_precision.to_string());
        input.push_scalar("verify", self.input.verify.clone());
        input.push_list("primes", self.input.primes.clone());
        input.push_scalar("max_order", self.input.max_order.to_string());
        report.push_block(input);

        report.push_scalar("m", self.m.to_string());
        report.push_scalar("group_order", self.group_order.to_string());
        report.push_scalar("group_exponent", self.group_exponent.to_string());
        report.push_scalar("class_count", self.class_count.to_string());
        report.push_list(
            "class_sizes",
            self.class_sizes.iter().map(|x| x.to_string()).collect(),
        );
        report.push_scalar("component_count", self.components.len().to_string());

        for c in &self.components {
            let mut cb = Block::new("component");
            cb.push_scalar("index", c.index.to_string());
            cb.push_scalar("representative", c.representative.to_string());
            cb.push_list("orbit", c.orbit.iter().map(|x| x.to_string()).collect());
            cb.push_scalar("eta_degree", c.eta_degree.to_string());
            cb.push_scalar("eta_conductor_exp", c.eta_conductor_exp.to_string());
            cb.push_scalar("w", c.w.to_string());
            cb.push_scalar("v", c.v.to_string());
            cb.push_scalar("g0_order", c.g0_order.to_string());
            cb.push_scalar("sigma_exponent", c.sigma_exponent.to_string());
            cb.push_scalar("sigma_conductor_exp", c.sigma_conductor_exp.to_string());
            cb.push_scalar("chi_degree", c.chi_degree.to_string());
            cb.push_scalar("schur_index", c.schur_index.to_string());
            cb.push_scalar("matrix_size", c.matrix_size.to_string());
            cb.push_scalar("center_conductor_exp", c.center_conductor_exp.to_string());
            cb.push_scalar("center_gamma_power", c.center_gamma_power.to_string());
            cb.push_scalar("dim_over_qgamma0", c.dim_over_qgamma0.to_string());
            match &c.skew_field {
                SkewFieldReport::Split => cb.push_scalar("skew_field", "split"),
                SkewFieldReport::Cyclic {
                    max_subfield_conductor_exp,
                } => {
                    cb.push_scalar("skew_field", "cyclic");
                    cb.push_scalar(
                        "max_subfield_conductor_exp",
                        max_subfield_conductor_exp.to_string(),
                    );
                }
            }
            cb.push_list("character_values", c.character_values.clone());
            for comp in &c.completions {
                let mut xb = Block::new("completion");
                xb.push_scalar("prime", comp.prime.clone());
                xb.push_scalar("center", comp.center.clone());
                xb.push_scalar("residue", comp.residue.clone());
                xb.push_scalar("cd", comp.cd.to_string());
                xb.push_scalar("sk1", comp.sk1.clone());
                if let Some(sk) = &comp.skew {
                    xb.push_scalar("skew_index", sk.index.to_string());
                    xb.push_scalar("skew_ramification", sk.ramification.to_string());
                    xb.push_scalar("skew_residue_degree", sk.residue_degree.to_string());
                    xb.push_scalar(
                        "skew_defining_polynomial",
                        doc::quote(&sk.defining_polynomial),
                    );
                    xb.push_scalar(
                        "witness_unit_valuation",
                        sk.witness_unit_valuation.to_string(),
                    );
                }
                cb.push_block(xb);
            }
            report.push_block(cb);
        }

        let mut vb = Block::new("verification");
        for s in &self.verification {
            let mut sb = Block::new("suite");
            sb.push_scalar("name", s.name.clone());
            sb.push_scalar("status", s.status.as_str());
            if let Some(w) = &s.witness {
                sb.push_scalar("witness", doc::quote(w));
            }
            vb.push_block(sb);
        }
        report.push_block(vb);

        root.push_block(report);
        doc::emit(&root)
    }

    /// Parses a machine report back; inverse of `to_machine_text`.
    pub fn from_machine_text(text: &str) -> Result<Report, Vec<Diagnostic>> {
        let root = doc::parse(text)?;
        let report = root
            .block("qg-report")
            .ok_or_else(|| vec![Diagnostic::new(0, "missing qg-report block")])?;
        let get = |b: &Block, key: &str| -> Result<String, Vec<Diagnostic>> {
            b.get_scalar(key)
                .map(|s| s.to_string())
                .ok_or_else(|| vec![Diagnostic::new(b.line, format!("missing key '{key}'"))])
        };
        let get_num = |b: &Block, key: &str| -> Result<u64, Vec<Diagnostic>> {
            get(b, key)?
                .parse::<u64>()
                .map_err(|_| vec![Diagnostic::new(b.line, format!("bad integer '{key}'"))])
        };

        let input_block = report
            .block("input")
            .ok_or_else(|| vec![Diagnostic::new(0, "missing input block")])?;
        let input = InputEcho {
            l: get_num(input_block, "l")?,
            group: get(input_block, "group")?,
            gamma: get(input_block, "gamma")?,
            series_precision: get_num(input_block, "series_precision")? as usize,
            verify: get(input_block, "verify")?,
            primes: input_block
                .get_list("primes")
                .map(|v| v.to_vec())
                .unwrap_or_default(),
            max_order: get_num(input_block, "max_order")?,
        };

        let class_sizes: Result<Vec<usize>, _> = report
            .get_list("class_sizes")
            .unwrap_or(&[])
            .iter()
            .map(|s| s.parse::<usize>())
            .collect();
        let class_sizes =
            class_sizes.map_err(|_| vec![Diagnostic::new(0, "bad class_sizes")])?;

        let mut components = Vec::new();
        for cb in report.blocks("component") {
            let orbit: Result<Vec<usize>, _> = cb
                .get_list("orbit")
                .unwrap_or(&[])
                .iter()
                .map(|s| s.parse::<usize>())
                .collect();
            let skew_field = match get(cb, "skew_field")?.as_str() {
                "split" => SkewFieldReport::Split,
                "cyclic" => SkewFieldReport::Cyclic {
                    max_subfield_conductor_exp: get_num(cb, "max_subfield_conductor_exp")?
                        as u32,
                },
                other => {
                    return Err(vec![Diagnostic::new(
                        cb.line,
                        format!("unknown skew_field '{other}'"),
                    )])
                }
            };
            let mut completions = Vec::new();
            for xb in cb.blocks("completion") {
                let skew = if xb.get_scalar("skew_index").is_some() {
                    Some(SkewCompletionReport {
                        index: get_num(xb, "skew_index")?,
                        ramification: get_num(xb, "skew_ramification")?,
                        residue_degree: get_num(xb, "skew_residue_degree")?,
                        defining_polynomial: doc::unquote(&get(
                            xb,
                            "skew_defining_polynomial",
                        )?)
                        .map_err(|e| vec![Diagnostic::new(xb.line, e)])?,
                        witness_unit_valuation: get(xb, "witness_unit_valuation")?
                            .parse::<i64>()
                            .map_err(|_| {
                                vec![Diagnostic::new(xb.line, "bad witness valuation")]
                            })?,
                    })
                } else {
                    None
                };
                completions.push(CompletionReport {
                    prime: get(xb, "prime")?,
                    center: get(xb, "center")?,
                    residue: get(xb, "residue")?,
                    cd: get_num(xb, "cd")? as u32,
                    sk1: get(xb, "sk1")?,
                    skew,
                });
            }
            components.push(ComponentReport {
                index: get_num(cb, "index")? as usize,
                representative: get_num(cb, "representative")? as usize,
                orbit: orbit.map_err(|_| vec![Diagnostic::new(cb.line, "bad orbit")])?,
                eta_degree: get_num(cb, "eta_degree")?,
                eta_conductor_exp: get_num(cb, "eta_conductor_exp")? as u32,
                w: get_num(cb, "w")?,
                v: get_num(cb, "v")?,
                g0_order: get_num(cb, "g0_order")?,
                sigma_exponent: get_num(cb, "sigma_exponent")?,
                sigma_conductor_exp: get_num(cb, "sigma_conductor_exp")? as u32,
                chi_degree: get_num(cb, "chi_degree")?,
                schur_index: get_num(cb, "schur_index")?,
                matrix_size: get_num(cb, "matrix_size")?,
                center_conductor_exp: get_num(cb, "center_conductor_exp")? as u32,
                center_gamma_power: get_num(cb, "center_gamma_power")?,
                dim_over_qgamma0: get_num(cb, "dim_over_qgamma0")?,
                skew_field,
                character_values: cb
                    .get_list("character_values")
                    .map(|v| v.to_vec())
                    .unwrap_or_default(),
                completions,
            });
        }

        let mut verification = Vec::new();
        if let Some(vb) = report.block("verification") {
            for sb in vb.blocks("suite") {
                let witness = match sb.get_scalar("witness") {
                    Some(w) => {
                        Some(doc::unquote(w).map_err(|e| vec![Diagnostic::new(sb.line, e)])?)
                    }
                    None => None,
                };
                let status_text = get(sb, "status")?;
                verification.push(SuiteReport {
                    name: get(sb, "name")?,
                    status: SuiteStatus::parse(&status_text).ok_or_else(|| {
                        vec![Diagnostic::new(sb.line, "unknown suite status")]
                    })?,
                    witness,
                });
            }
        }

        Ok(Report {
            input,
            m: get_num(report, "m")? as u32,
            group_order: get_num(report, "group_order")?,
            group_exponent: get_num(report, "group_exponent")?,
            class_count: get_num(report, "class_count")? as usize,
            class_sizes,
            components,
            verification,
        })
    }

    /// Human-readable form; deterministic but not part of the byte contract.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "QG structure report: l = {}, group {} (order {}, exponent {}), gamma {}",
            self.input.l, self.input.group, self.group_order, self.group_exponent, self.input.gamma
        );
        let _ = writeln!(
            out,
            "m = {} (Gamma^(l^m) is central), {} classes, {} Wedderburn components",
            self.m, self.class_count, self.components.len()
        );
        let _ = writeln!(out);
        for c in &self.components {
            let skew = match &c.skew_field {
                SkewFieldReport::Split => "split".to_string(),
                SkewFieldReport::Cyclic {
                    max_subfield_conductor_exp,
                } => format!(
                    "cyclic skew field, maximal subfield Q_l(zeta_{{l^{}}}), sigma k={}, unit gamma^{}",
                    max_subfield_conductor_exp, c.sigma_exponent, c.center_gamma_power
                ),
            };
            let _ = writeln!(
                out,
                "component {}: eta degree {} (conductor exp {}), orbit size {}",
                c.index,
                c.eta_degree,
                c.eta_conductor_exp,
                c.orbit.len()
            );
            let _ = writeln!(
                out,
                "  w = {}, v = {}, chi(1) = {}, Schur index s = {}, n = {}",
                c.w, c.v, c.chi_degree, c.schur_index, c.matrix_size
            );
            let _ = writeln!(
                out,
                "  center Q^L Gamma^{} with L of conductor exp {}; dim over QGamma_0 = {}",
                c.center_gamma_power, c.center_conductor_exp, c.dim_over_qgamma0
            );
            let _ = writeln!(out, "  {skew}");
            for comp in &c.completions {
                let skew_note = match &comp.skew {
                    Some(sk) => format!(
                        "; completed skew field: index {}, e = {}, residue degree {} ({}), witness unit valuation {}",
                        sk.index,
                        sk.ramification,
                        sk.residue_degree,
                        sk.defining_polynomial,
                        sk.witness_unit_valuation
                    ),
                    None => String::new(),
                };
                let _ = writeln!(
                    out,
                    "  completion at ({}): center {}, residue {}, cd = {}, SK1 {}{}",
                    comp.prime, comp.center, comp.residue, comp.cd, comp.sk1, skew_note
                );
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "verification ({}):", self.input.verify);
        for s in &self.verification {
            match &s.witness {
                Some(w) => {
                    let _ = writeln!(out, "  {:<28} {} ({})", s.name, s.status.as_str(), w);
                }
                None => {
                    let _ = writeln!(out, "  {:<28} {}", s.name, s.status.as_str());
                }
            }
        }
        out
    }
}

/// Serialises an exact cyclotomic value as `e<k>:[c0, c1, ...]`.
pub fn cyclotomic_literal(value: &CyclotomicNumber) -> String {
    let coeffs: Vec<String> = value
        .to_rationals()
        .iter()
        .map(|r| r.to_string())
        .collect();
    format!("e{}:[{}]", value.conductor_exp(), coeffs.join(","))
}

/// Emits a machine-readable diagnostics document.
pub fn diagnostics_to_machine_text(diags: &[Diagnostic]) -> String {
    let mut root = Block::new("");
    let mut block = Block::new("qg-diagnostics");
    block.push_scalar("count", diags.len().to_string());
    for d in diags {
        let mut db = Block::new("diagnostic");
        db.push_scalar("line", d.line.to_string());
        db.push_scalar("message", doc::quote(&d.message));
        block.push_block(db);
    }
    root.push_block(block);
    doc::emit(&root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        Report {
            input: InputEcho {
                l: 3,
                group: "abelian[9]".into(),
                gamma: "g1 -> g1^4".into(),
                series_precision: 16,
                verify: "full".into(),
                primes: vec!["T".into(), "ell".into()],
                max_order: 729,
            },
            m: 1,
            group_order: 9,
            group_exponent: 9,
            class_count: 9,
            class_sizes: vec![1; 9],
            components: vec![ComponentReport {
                index: 0,
                representative: 0,
                orbit: vec![0, 3, 6],
                eta_degree: 1,
                eta_conductor_exp: 2,
                w: 3,
                v: 1,
                g0_order: 3,
                sigma_exponent: 4,
                sigma_conductor_exp: 2,
                chi_degree: 3,
                schur_index: 3,
                matrix_size: 1,
                center_conductor_exp: 1,
                center_gamma_power: 3,
                dim_over_qgamma0: 18,
                skew_field: SkewFieldReport::Cyclic {
                    max_subfield_conductor_exp: 2,
                },
                character_values: vec!["e0:[1]".into(), "e2:[0,1,0,0,0,0]".into()],
                completions: vec![CompletionReport {
                    prime: "ell".into(),
                    center: "double_series(conductor_exp=1)".into(),
                    residue: "laurent_over_fl".into(),
                    cd: 3,
                    sk1: "unknown".into(),
                    skew: Some(SkewCompletionReport {
                        index: 3,
                        ramification: 3,
                        residue_degree: 3,
                        defining_polynomial: "X^3 - (1+T)".into(),
                        witness_unit_valuation: 0,
                    }),
                }],
            }],
            verification: vec![
                SuiteReport::pass("character_orthogonality"),
                SuiteReport::skipped("idempotents", "example".into()),
            ],
        }
    }

    #[test]
    fn machine_roundtrip() {
        let report = sample_report();
        let text = report.to_machine_text();
        let parsed = Report::from_machine_text(&text).unwrap();
        assert_eq!(parsed, report);
        // byte-stable re-emission
        assert_eq!(parsed.to_machine_text(), text);
    }

    #[test]
    fn text_form_mentions_key_facts() {
        let text = sample_report().to_text();
        assert!(text.contains("Schur index s = 3"));
        assert!(text.contains("cd = 3"));
    }

    #[test]
    fn diagnostics_document() {
        let diags = vec![Diagnostic::new(2, "l must be odd")];
        let text = diagnostics_to_machine_text(&diags);
        assert!(text.contains("qg-diagnostics"));
        assert!(text.contains("l must be odd"));
    }
}
