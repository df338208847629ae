//! The input document: prime, group spec, automorphism spec and options.
//!
//! Parsing is total: every syntactic or semantic problem is reported as a
//! positioned diagnostic. Semantic validation includes building the group
//! and the automorphism, so ill-defined gammas (wrong order, not a
//! homomorphism) surface here.

use qg_core::arith::is_prime;
use qg_core::group::{FiniteLGroup, GroupAutomorphism, GroupSpec};

use crate::doc::{self, Block, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaSpec {
    Identity,
    /// Images of generators `g1..gk`, as words in the generators.
    Images(Vec<(usize, Vec<(usize, i64)>)>),
    Permutation(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl VerifyLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerifyLevel::Fast => "fast",
            VerifyLevel::Full => "full",
        }
    }
}

/// Height-1 prime requested for the completion report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSpec {
    T,
    Ell,
    /// Monic distinguished polynomial, given by its lower coefficients
    /// `c_0..c_{d-1}` (so the degree is the coefficient count).
    F(Vec<i64>),
}

impl PrimeSpec {
    pub fn canonical(&self) -> String {
        match self {
            PrimeSpec::T => "T".to_string(),
            PrimeSpec::Ell => "ell".to_string(),
            PrimeSpec::F(cs) => format!(
                "f({})",
                cs.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub series_precision: usize,
    pub verify: VerifyLevel,
    pub primes: Vec<PrimeSpec>,
    pub max_order: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            series_precision: 16,
            verify: VerifyLevel::Fast,
            primes: vec![PrimeSpec::T, PrimeSpec::Ell],
            max_order: 729,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub l: u64,
    pub group: GroupSpec,
    pub gamma: GammaSpec,
    pub options: Options,
}

impl InputDocument {
    /// Canonical one-line echo of the group spec.
    pub fn group_echo(&self) -> String {
        match &self.group {
            GroupSpec::Abelian(inv) => format!(
                "abelian[{}]",
                inv.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            GroupSpec::Table(rows) => format!("table[{}]", rows.len()),
            GroupSpec::Preset(name) => format!("preset:{name}"),
        }
    }

    /// Canonical one-line echo of the gamma spec.
    pub fn gamma_echo(&self) -> String {
        match &self.gamma {
            GammaSpec::Identity => "identity".to_string(),
            GammaSpec::Images(images) => images
                .iter()
                .map(|(g, word)| format!("g{} -> {}", g + 1, word_to_string(word)))
                .collect::<Vec<_>>()
                .join("; "),
            GammaSpec::Permutation(perm) => format!(
                "permutation[{}]",
                perm.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }

    /// Builds the verified group; the size cap is enforced first.
    pub fn build_group(&self) -> Result<FiniteLGroup, Diagnostic> {
        let order = self.group.order(self.l);
        if order > self.options.max_order {
            return Err(Diagnostic::new(
                0,
                format!(
                    "group order {order} exceeds the size cap {}",
                    self.options.max_order
                ),
            ));
        }
        FiniteLGroup::build(self.l, &self.group)
            .map_err(|e| Diagnostic::new(0, e.to_string()))
    }

    /// Builds the verified automorphism for a built group.
    pub fn build_gamma(&self, group: &FiniteLGroup) -> Result<GroupAutomorphism, Diagnostic> {
        match &self.gamma {
            GammaSpec::Identity => Ok(GroupAutomorphism::identity(group)),
            GammaSpec::Images(images) => {
                let mut resolved = Vec::with_capacity(images.len());
                for (gen_idx, word) in images {
                    let image = group
                        .evaluate_word(word)
                        .map_err(|e| Diagnostic::new(0, e.to_string()))?;
                    resolved.push((*gen_idx, image));
                }
                GroupAutomorphism::from_generator_images(group, &resolved)
                    .map_err(|e| Diagnostic::new(0, e.to_string()))
            }
            GammaSpec::Permutation(perm) => {
                GroupAutomorphism::from_permutation(group, perm.clone())
                    .map_err(|e| Diagnostic::new(0, e.to_string()))
            }
        }
    }
}

pub fn word_to_string(word: &[(usize, i64)]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter()
        .map(|(g, e)| {
            if *e == 1 {
                format!("g{}", g + 1)
            } else {
                format!("g{}^{}", g + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Parses and semantically validates an input document.
pub fn parse_input(text: &str) -> Result<InputDocument, Vec<Diagnostic>> {
    let root = doc::parse(text)?;
    let mut diags = Vec::new();

    let l = match root.get_scalar("l") {
        Some(s) => match s.parse::<u64>() {
            Ok(l) if l % 2 == 1 && is_prime(l) => l,
            Ok(l) if l == 2 => {
                diags.push(Diagnostic::new(line_of(&root, "l"), "l must be odd"));
                0
            }
            Ok(_) => {
                diags.push(Diagnostic::new(
                    line_of(&root, "l"),
                    "l must be an odd prime",
                ));
                0
            }
            Err(_) => {
                diags.push(Diagnostic::new(
                    line_of(&root, "l"),
                    "l must be an integer",
                ));
                0
            }
        },
        None => {
            diags.push(Diagnostic::new(0, "missing required key 'l'"));
            0
        }
    };

    let group = match root.block("group") {
        Some(b) => parse_group(b, l, &mut diags),
        None => {
            diags.push(Diagnostic::new(0, "missing required block 'group'"));
            None
        }
    };

    let gamma = match root.block("gamma") {
        Some(b) => parse_gamma(b, &mut diags),
        None => Some(GammaSpec::Identity),
    };

    let options = match root.block("options") {
        Some(b) => parse_options(b, l, &mut diags),
        None => Some(Options::default()),
    };

    if !diags.is_empty() {
        return Err(diags);
    }
    let docu = InputDocument {
        l,
        group: group.expect("group present when no diagnostics"),
        gamma: gamma.expect("gamma present when no diagnostics"),
        options: options.expect("options present when no diagnostics"),
    };

    // semantic validation: the group and the automorphism must build
    let mut semantic = Vec::new();
    match docu.build_group() {
        Ok(group) => {
            if let Err(d) = docu.build_gamma(&group) {
                semantic.push(d);
            }
        }
        Err(d) => semantic.push(d),
    }
    if semantic.is_empty() {
        Ok(docu)
    } else {
        Err(semantic)
    }
}

fn line_of(block: &Block, key: &str) -> usize {
    block
        .keys()
        .find(|(_, k, _)| *k == key)
        .map(|(line, _, _)| line)
        .unwrap_or(0)
}

fn parse_group(b: &Block, l: u64, diags: &mut Vec<Diagnostic>) -> Option<GroupSpec> {
    match b.get_scalar("kind") {
        Some("abelian") => {
            let Some(items) = b.get_list("invariants") else {
                diags.push(Diagnostic::new(b.line, "abelian group requires 'invariants'"));
                return None;
            };
            let mut invariants = Vec::new();
            for item in items {
                match item.parse::<u64>() {
                    Ok(x) => invariants.push(x),
                    Err(_) => {
                        diags.push(Diagnostic::new(
                            line_of(b, "invariants"),
                            format!("invariant '{item}' is not an integer"),
                        ));
                        return None;
                    }
                }
            }
            if l > 1 {
                for &inv in &invariants {
                    if qg_core::arith::lpow_exponent(l, inv).map_or(true, |k| k == 0) {
                        diags.push(Diagnostic::new(
                            line_of(b, "invariants"),
                            format!("invariant {inv} is not a power of {l} greater than 1"),
                        ));
                    }
                }
            }
            Some(GroupSpec::Abelian(invariants))
        }
        Some("preset") => match b.get_scalar("name") {
            Some(name) => Some(GroupSpec::Preset(name.to_string())),
            None => {
                diags.push(Diagnostic::new(b.line, "preset group requires 'name'"));
                None
            }
        },
        Some("table") => {
            let Some(size) = b.get_scalar("size").and_then(|s| s.parse::<usize>().ok())
            else {
                diags.push(Diagnostic::new(b.line, "table group requires integer 'size'"));
                return None;
            };
            let mut rows = Vec::with_capacity(size);
            for i in 0..size {
                let key = format!("row{i}");
                let Some(items) = b.get_list(&key) else {
                    diags.push(Diagnostic::new(b.line, format!("missing '{key}'")));
                    return None;
                };
                let mut row = Vec::with_capacity(size);
                for item in items {
                    match item.parse::<usize>() {
                        Ok(x) => row.push(x),
                        Err(_) => {
                            diags.push(Diagnostic::new(
                                line_of(b, &key),
                                format!("entry '{item}' is not an index"),
                            ));
                            return None;
                        }
                    }
                }
                rows.push(row);
            }
            Some(GroupSpec::Table(rows))
        }
        Some(other) => {
            diags.push(Diagnostic::new(
                line_of(b, "kind"),
                format!("unknown group kind '{other}' (expected abelian, preset or table)"),
            ));
            None
        }
        None => {
            diags.push(Diagnostic::new(b.line, "group block requires 'kind'"));
            None
        }
    }
}

fn parse_gamma(b: &Block, diags: &mut Vec<Diagnostic>) -> Option<GammaSpec> {
    if let Some(items) = b.get_list("permutation") {
        let mut perm = Vec::with_capacity(items.len());
        for item in items {
            match item.parse::<usize>() {
                Ok(x) => perm.push(x),
                Err(_) => {
                    diags.push(Diagnostic::new(
                        line_of(b, "permutation"),
                        format!("permutation entry '{item}' is not an index"),
                    ));
                    return None;
                }
            }
        }
        return Some(GammaSpec::Permutation(perm));
    }
    let mut images = Vec::new();
    for (line, key, value) in b.keys() {
        let Some(gen_idx) = key
            .strip_prefix('g')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&n| n >= 1)
        else {
            diags.push(Diagnostic::new(
                line,
                format!("unknown gamma key '{key}' (expected g1, g2, ... or 'permutation')"),
            ));
            continue;
        };
        let Some(word_text) = value.scalar() else {
            diags.push(Diagnostic::new(line, "generator image must be a word"));
            continue;
        };
        match parse_word(word_text) {
            Ok(word) => images.push((gen_idx - 1, word)),
            Err(msg) => diags.push(Diagnostic::new(line, msg)),
        }
    }
    if images.is_empty() {
        Some(GammaSpec::Identity)
    } else {
        Some(GammaSpec::Images(images))
    }
}

/// Words are `*`-separated factors `gN` or `gN^k` (k may be negative);
/// `1` and `e` denote the identity.
pub fn parse_word(text: &str) -> Result<Vec<(usize, i64)>, String> {
    let text = text.trim();
    if text == "1" || text == "e" {
        return Ok(Vec::new());
    }
    let mut word = Vec::new();
    for factor in text.split('*') {
        let factor = factor.trim();
        let rest = factor
            .strip_prefix('g')
            .ok_or_else(|| format!("cannot parse word factor '{factor}'"))?;
        let (gen, exp) = match rest.split_once('^') {
            Some((g, e)) => (
                g.parse::<usize>()
                    .map_err(|_| format!("bad generator in '{factor}'"))?,
                e.parse::<i64>()
                    .map_err(|_| format!("bad exponent in '{factor}'"))?,
            ),
            None => (
                rest.parse::<usize>()
                    .map_err(|_| format!("bad generator in '{factor}'"))?,
                1,
            ),
        };
        if gen == 0 {
            return Err("generators are numbered from g1".to_string());
        }
        word.push((gen - 1, exp));
    }
    Ok(word)
}

fn parse_options(b: &Block, l: u64, diags: &mut Vec<Diagnostic>) -> Option<Options> {
    let mut options = Options::default();
    for (line, key, value) in b.keys() {
        match key {
            "series_precision" => match value.scalar().and_then(|s| s.parse::<usize>().ok()) {
                Some(m) if m >= 2 => options.series_precision = m,
                _ => diags.push(Diagnostic::new(
                    line,
                    "series_precision must be an integer >= 2",
                )),
            },
            "verify" => match value.scalar() {
                Some("fast") => options.verify = VerifyLevel::Fast,
                Some("full") => options.verify = VerifyLevel::Full,
                _ => diags.push(Diagnostic::new(line, "verify must be 'fast' or 'full'")),
            },
            "max_order" => match value.scalar().and_then(|s| s.parse::<u64>().ok()) {
                Some(cap) if cap >= 1 => options.max_order = cap,
                _ => diags.push(Diagnostic::new(line, "max_order must be a positive integer")),
            },
            "primes" => match value.list() {
                Some(items) => {
                    let mut primes = Vec::new();
                    for item in items {
                        match parse_prime_spec(item, l) {
                            Ok(p) => primes.push(p),
                            Err(msg) => diags.push(Diagnostic::new(line, msg)),
                        }
                    }
                    options.primes = primes;
                }
                None => diags.push(Diagnostic::new(line, "primes must be a list")),
            },
            other => diags.push(Diagnostic::new(line, format!("unknown option '{other}'"))),
        }
    }
    Some(options)
}

/// Parses a comma-separated prime list such as `T,ell,f(0,3,3)`.
pub fn parse_prime_spec_list(text: &str, l: u64) -> Result<Vec<PrimeSpec>, String> {
    doc::split_top_level(text)?
        .into_iter()
        .map(|item| parse_prime_spec(&item, l))
        .collect()
}

/// `T`, `ell`, or `f(c0, c1, ..., c_{d-1})` for a monic distinguished
/// polynomial of degree `d`. Distinguishedness requires `l | c_i`; the
/// degree-1 case is always irreducible, and higher degrees must be
/// Eisenstein (`v_l(c_0) = 1`) so irreducibility is certified.
pub fn parse_prime_spec(text: &str, l: u64) -> Result<PrimeSpec, String> {
    let text = text.trim();
    match text {
        "T" => return Ok(PrimeSpec::T),
        "ell" | "l" => return Ok(PrimeSpec::Ell),
        _ => {}
    }
    let inner = text
        .strip_prefix("f(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("unknown prime '{text}' (expected T, ell or f(...))"))?;
    let coeffs: Result<Vec<i64>, _> = doc::split_top_level(inner)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|s| s.trim().parse::<i64>())
        .collect();
    let coeffs = coeffs.map_err(|_| "f(...) coefficients must be integers".to_string())?;
    if coeffs.is_empty() {
        return Err("f(...) needs at least one coefficient".to_string());
    }
    let li = l as i64;
    if coeffs.iter().any(|c| c % li != 0) {
        return Err(format!(
            "f is not distinguished: every lower coefficient must be divisible by {l}"
        ));
    }
    let degree = coeffs.len();
    if degree == 1 {
        return Ok(PrimeSpec::F(coeffs)); // linear distinguished, irreducible
    }
    let c0 = coeffs[0];
    if c0 == 0 || c0 % (li * li) == 0 {
        return Err(
            "cannot certify irreducibility of f: give T, a linear factor, or an \
             Eisenstein polynomial (v_l(c0) = 1)"
                .to_string(),
        );
    }
    Ok(PrimeSpec::F(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER_DOC: &str = "\
l: 3
group {
  kind: abelian
  invariants: [9]
}
gamma {
  g1: g1^4
}
options {
  verify: full
  primes: [T, ell]
}
";

    #[test]
    fn paper_document_parses() {
        let docu = parse_input(PAPER_DOC).unwrap();
        assert_eq!(docu.l, 3);
        assert_eq!(docu.group, GroupSpec::Abelian(vec![9]));
        assert_eq!(
            docu.gamma,
            GammaSpec::Images(vec![(0, vec![(0, 4)])])
        );
        assert_eq!(docu.options.verify, VerifyLevel::Full);
        assert_eq!(docu.group_echo(), "abelian[9]");
        assert_eq!(docu.gamma_echo(), "g1 -> g1^4");
    }

    #[test]
    fn even_l_is_rejected() {
        let text = PAPER_DOC.replace("l: 3", "l: 2");
        let errs = parse_input(&text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("l must be odd")));
    }

    #[test]
    fn bad_gamma_order_is_rejected() {
        // order of 2 mod 9 is 6, not a 3-power
        let text = PAPER_DOC.replace("g1: g1^4", "g1: g1^2");
        let errs = parse_input(&text).unwrap_err();
        assert!(
            errs.iter()
                .any(|d| d.message.contains("order 6") && d.message.contains("pro-3")),
            "got: {errs:?}"
        );
    }

    #[test]
    fn missing_gamma_is_identity() {
        let text = "l: 3\ngroup {\n  kind: abelian\n  invariants: [3]\n}\n";
        let docu = parse_input(text).unwrap();
        assert_eq!(docu.gamma, GammaSpec::Identity);
    }

    #[test]
    fn undefined_generator_is_rejected() {
        let text = PAPER_DOC.replace("g1: g1^4", "g2: g1^4");
        let errs = parse_input(&text).unwrap_err();
        assert!(errs
            .iter()
            .any(|d| d.message.contains("undefined generator")));
    }

    #[test]
    fn prime_specs() {
        assert_eq!(parse_prime_spec("T", 3).unwrap(), PrimeSpec::T);
        assert_eq!(parse_prime_spec("ell", 3).unwrap(), PrimeSpec::Ell);
        assert_eq!(
            parse_prime_spec("f(0)", 3).unwrap(),
            PrimeSpec::F(vec![0])
        );
        assert_eq!(
            parse_prime_spec("f(3, 9)", 3).unwrap(),
            PrimeSpec::F(vec![3, 9])
        );
        // not distinguished
        assert!(parse_prime_spec("f(1)", 3).is_err());
        // reducible: (c0 = 0, degree 2) is T·(T + c1)
        assert!(parse_prime_spec("f(0, 3)", 3).is_err());
        // not certified Eisenstein
        assert!(parse_prime_spec("f(9, 3)", 3).is_err());
    }

    #[test]
    fn size_cap_is_enforced() {
        let text = "l: 3\ngroup {\n  kind: abelian\n  invariants: [3, 3, 3, 3, 3, 3, 3]\n}\n";
        let errs = parse_input(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("size cap")));
    }

    #[test]
    fn words() {
        assert_eq!(parse_word("1").unwrap(), vec![]);
        assert_eq!(parse_word("g1^4").unwrap(), vec![(0, 4)]);
        assert_eq!(
            parse_word("g1*g2^-2").unwrap(),
            vec![(0, 1), (1, -2)]
        );
        assert!(parse_word("h^2").is_err());
    }
}
