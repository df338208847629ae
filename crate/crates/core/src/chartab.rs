//! Exact irreducible character tables of finite l-groups.
//!
//! The table is computed by splitting the class algebra over a prime field
//! `F_p` with `p ≡ 1 (mod exp H)` and `p > 2|H|` (simultaneous eigenvectors
//! of the class-multiplication matrices), then lifting eigenvalue data to
//! exact cyclotomic values by root-of-unity multiplicities. The lifted
//! table is independent of the choice of `p`; the output order is the
//! canonical sort by degree, then lexicographically by values.

use thiserror::Error;

use crate::arith::{inv_mod, is_prime, lpow_exponent, order_mod, pow_mod};
use crate::cyclotomic::{CyclotomicNumber, GaloisElement, Rational, value_field_conductor};
use crate::group::FiniteLGroup;
use num_traits::Zero;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharTabError {
    #[error("class algebra failed to split into one-dimensional eigenspaces (defect)")]
    SplitFailed,
    #[error("lifted degree data is inconsistent (defect)")]
    DegreeDefect,
    #[error("character image under the automorphism is not in the table (defect)")]
    ImageNotInTable,
}

/// Exact class function data of one irreducible character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    degree: u64,
    values: Vec<CyclotomicNumber>,
    conductor_exp: u32,
}

impl Character {
    pub fn new(degree: u64, values: Vec<CyclotomicNumber>) -> Self {
        let conductor_exp = value_field_conductor(&values);
        Character {
            degree,
            values,
            conductor_exp,
        }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Value on class `c`.
    pub fn value(&self, c: usize) -> &CyclotomicNumber {
        &self.values[c]
    }

    pub fn values(&self) -> &[CyclotomicNumber] {
        &self.values
    }

    /// Conductor exponent `e_η` of the value field `Q_l(η)`.
    pub fn conductor_exp(&self) -> u32 {
        self.conductor_exp
    }

    /// Applies a Galois element to every value.
    pub fn galois_twist(&self, sigma: &GaloisElement) -> Character {
        Character::new(
            self.degree,
            self.values.iter().map(|v| sigma.apply(v)).collect(),
        )
    }
}

/// The canonical table of irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    characters: Vec<Character>,
    value_level: u32,
}

impl CharacterTable {
    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.characters[i]
    }

    /// Conductor exponent of `Q(ζ_{exp H})`, the level all values live at.
    pub fn value_level(&self) -> u32 {
        self.value_level
    }

    /// Index of the character with the given values, if present.
    pub fn find(&self, values: &[CyclotomicNumber]) -> Option<usize> {
        self.characters
            .iter()
            .position(|ch| ch.values() == values)
    }

    /// First orthogonality: `(1/|H|) Σ_c |C_c| η(c) η'(c̄) = [η = η']`,
    /// with `c̄` the inverse class. Exact.
    pub fn first_orthogonality_holds(&self, group: &FiniteLGroup) -> bool {
        let l = group.prime();
        let e = self.value_level;
        let order = Rational::from_integer(group.order().into());
        for (s, a) in self.characters.iter().enumerate() {
            for (t, b) in self.characters.iter().enumerate() {
                let mut acc = CyclotomicNumber::zero(l, e);
                for c in 0..group.class_count() {
                    let size = crate::cyclotomic::rat(group.class_size(c) as i64);
                    let term = a.value(c).mul(b.value(group.inverse_class(c)));
                    acc.add_assign(&term.scale(&size));
                }
                let expected = if s == t { order.clone() } else { Rational::zero() };
                match acc.as_rational() {
                    Some(r) if r == expected => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Second orthogonality: `Σ_η η(c_i) η(c̄_j) = [i = j]·|H|/|C_i|`. Exact.
    pub fn second_orthogonality_holds(&self, group: &FiniteLGroup) -> bool {
        let l = group.prime();
        let e = self.value_level;
        for i in 0..group.class_count() {
            for j in 0..group.class_count() {
                let mut acc = CyclotomicNumber::zero(l, e);
                let jbar = group.inverse_class(j);
                for ch in &self.characters {
                    acc.add_assign(&ch.value(i).mul(ch.value(jbar)));
                }
                let expected = if i == j {
                    Rational::from_integer(group.order().into())
                        / Rational::from_integer((group.class_size(i) as u64).into())
                } else {
                    Rational::zero()
                };
                match acc.as_rational() {
                    Some(r) if r == expected => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Class-algebra structure constants: `a[i][j][k]` counts pairs
/// `(x, y) ∈ C_i × C_j` with `xy` equal to the fixed representative of `C_k`.
pub fn class_mult_coefficients(group: &FiniteLGroup) -> Vec<Vec<Vec<u64>>> {
    let r = group.class_count();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let zk = group.class_representative(k);
        for i in 0..r {
            for &x in &group.classes()[i] {
                let j = group.class_of(group.mul(group.inverse(x), zk));
                a[i][j][k] += 1;
            }
        }
    }
    a
}

/// Least prime `p ≡ 1 (mod exp H)` with `p > 2|H|`.
fn lifting_prime(group: &FiniteLGroup) -> u64 {
    let m = group.exponent();
    let mut p = m + 1;
    loop {
        if p > 2 * group.order() && (p - 1) % m == 0 && is_prime(p) {
            return p;
        }
        p += m;
    }
}

pub fn character_table(group: &FiniteLGroup) -> Result<CharacterTable, CharTabError> {
    character_table_with_prime(group, lifting_prime(group))
}

/// Same computation over an explicitly chosen prime; the output is proven
/// independent of the choice and this entry point exists to test that.
pub fn character_table_with_prime(
    group: &FiniteLGroup,
    p: u64,
) -> Result<CharacterTable, CharTabError> {
    assert!((p - 1) % group.exponent() == 0 && p > 2 * group.order() && is_prime(p));
    let r = group.class_count();
    let constants = class_mult_coefficients(group);
    let omegas = split_class_algebra(&constants, r, p)?;

    // degrees from the first orthogonality relation mod p
    let inv_class: Vec<usize> = (0..r).map(|c| group.inverse_class(c)).collect();
    let class_sizes: Vec<u64> = (0..r).map(|c| group.class_size(c) as u64).collect();
    let isqrt = (1..).take_while(|d| d * d <= group.order()).last().unwrap_or(1);
    let mut lifted: Vec<Character> = Vec::with_capacity(r);
    let exponent = group.exponent();
    let level = group.exponent_exp();
    let l = group.prime();
    let z = primitive_root_of_unity(p, exponent);

    // class-power maps: class of rep(c)^v
    let power_class: Vec<Vec<usize>> = (0..r)
        .map(|c| {
            let g = group.class_representative(c);
            let o = group.element_order(g);
            (0..o).map(|v| group.class_of(group.power(g, v))).collect()
        })
        .collect();

    for omega in &omegas {
        let mut s = 0u64;
        for i in 0..r {
            s = (s + omega[i] * omega[inv_class[i]] % p * inv_mod(class_sizes[i] % p, p)) % p;
        }
        if s == 0 {
            return Err(CharTabError::DegreeDefect);
        }
        let d_sq = group.order() % p * inv_mod(s, p) % p;
        let degree = (1..=isqrt)
            .find(|&d| d * d % p == d_sq)
            .ok_or(CharTabError::DegreeDefect)?;
        // mod-p character values
        let chi_p: Vec<u64> = (0..r)
            .map(|i| degree % p * omega[i] % p * inv_mod(class_sizes[i] % p, p) % p)
            .collect();
        // exact lift class by class
        let mut values = Vec::with_capacity(r);
        for c in 0..r {
            let o = group.element_order(group.class_representative(c));
            let eps = pow_mod(z, exponent / o, p);
            let inv_o = inv_mod(o % p, p);
            let mut value = CyclotomicNumber::zero(l, level);
            let mut total = 0u64;
            for u in 0..o {
                let mut acc = 0u64;
                for (v, &pc) in power_class[c].iter().enumerate() {
                    let shift = (o - (u * v as u64) % o) % o;
                    acc = (acc + chi_p[pc] * pow_mod(eps, shift, p)) % p;
                }
                let mult = acc * inv_o % p;
                total += mult;
                if mult > 0 {
                    let exact_root =
                        CyclotomicNumber::root_of_unity(l, level, (exponent / o) * u);
                    value.add_assign(&exact_root.scale(&crate::cyclotomic::rat(mult as i64)));
                }
            }
            if total != degree {
                return Err(CharTabError::DegreeDefect);
            }
            values.push(value);
        }
        let ch = Character::new(degree, values);
        if ch.value(group.class_of(group.identity())).as_rational()
            != Some(Rational::from_integer(degree.into()))
        {
            return Err(CharTabError::DegreeDefect);
        }
        if lpow_exponent(l, degree).is_none() {
            return Err(CharTabError::DegreeDefect);
        }
        lifted.push(ch);
    }

    lifted.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| compare_values(a.values(), b.values(), level))
    });
    Ok(CharacterTable {
        characters: lifted,
        value_level: level,
    })
}

/// Lexicographic comparison of value vectors at a common level.
fn compare_values(
    a: &[CyclotomicNumber],
    b: &[CyclotomicNumber],
    level: u32,
) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let (xu, yu) = (x.coerce_up(level), y.coerce_up(level));
        for (cx, cy) in xu.to_rationals().into_iter().zip(yu.to_rationals()) {
            match cx.cmp(&cy) {
                std::cmp::Ordering::Equal => {}
                other => return other,
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// Smallest primitive root mod `p`, raised to `(p-1)/m`: a primitive
/// `m`-th root of unity in `F_p`.
fn primitive_root_of_unity(p: u64, m: u64) -> u64 {
    debug_assert_eq!((p - 1) % m, 0);
    let w = (2..p)
        .find(|&w| order_mod(w, p) == p - 1)
        .expect("prime fields have primitive roots");
    pow_mod(w, (p - 1) / m, p)
}

// ---- F_p linear algebra -------------------------------------------------

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a * b) % p))
        .collect()
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = (out[i][j] + x * b[k][j]) % p;
            }
        }
    }
    out
}

/// Reduced row echelon form; returns pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= rows.len() {
            break;
        }
        let Some(sel) = (row..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(row, sel);
        let inv = inv_mod(rows[row][col], p);
        for x in rows[row].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != row && rows[i][col] != 0 {
                let f = rows[i][col];
                for j in 0..ncols {
                    let sub = f * rows[row][j] % p;
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    rows.truncate(row);
    pivots
}

/// Basis of the kernel of a square matrix over `F_p`.
fn nullspace(mat: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut rows: Vec<Vec<u64>> = mat.to_vec();
    let pivots = rref(&mut rows, p);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - rows[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Faddeev–LeVerrier characteristic polynomial over `F_p` (requires `p > n`).
fn char_poly(mat: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = mat.len();
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut work = mat.to_vec();
    for k in 1..=n {
        let tr = (0..n).fold(0u64, |acc, i| (acc + work[i][i]) % p);
        let c = (p - tr * inv_mod(k as u64 % p, p) % p) % p;
        coeffs[n - k] = c;
        if k < n {
            let mut shifted = work.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = (row[i] + c) % p;
            }
            work = mat_mul(mat, &shifted, p);
        }
    }
    coeffs
}

fn poly_roots(coeffs: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| {
            let mut acc = 0u64;
            for &c in coeffs.iter().rev() {
                acc = (acc * x + c) % p;
            }
            acc == 0
        })
        .collect()
}

/// Splits `F_p^r` under the commuting class matrices into the `r` common
/// eigenlines and returns, per line, the eigenvalue tuple `ω(K_i)`.
fn split_class_algebra(
    constants: &[Vec<Vec<u64>>],
    r: usize,
    p: u64,
) -> Result<Vec<Vec<u64>>, CharTabError> {
    let matrix_for = |i: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for j in 0..r {
            for k in 0..r {
                m[k][j] = constants[i][j][k] % p;
            }
        }
        m
    };

    let mut subspaces: Vec<Vec<Vec<u64>>> = vec![{
        let mut id = vec![vec![0u64; r]; r];
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = 1;
        }
        id
    }];
    for i in 1..r {
        if subspaces.iter().all(|u| u.len() == 1) {
            break;
        }
        let m = matrix_for(i);
        let mut next = Vec::with_capacity(subspaces.len());
        for basis in subspaces.into_iter() {
            let dim = basis.len();
            if dim <= 1 {
                next.push(basis);
                continue;
            }
            let mut rows = basis;
            let pivots = rref(&mut rows, p);
            // restriction of M to the subspace in the RREF coordinates
            let mut action = vec![vec![0u64; dim]; dim];
            for (s, b) in rows.iter().enumerate() {
                let w = mat_vec(&m, b, p);
                for (t, &pc) in pivots.iter().enumerate() {
                    action[t][s] = w[pc];
                }
                // invariance check
                let mut recon = vec![0u64; r];
                for (t, br) in rows.iter().enumerate() {
                    for (j, x) in recon.iter_mut().enumerate() {
                        *x = (*x + action[t][s] * br[j]) % p;
                    }
                }
                if recon != w {
                    return Err(CharTabError::SplitFailed);
                }
            }
            let poly = char_poly(&action, p);
            let mut split_total = 0usize;
            for lambda in poly_roots(&poly, p) {
                let mut shifted = action.clone();
                for (t, row) in shifted.iter_mut().enumerate() {
                    row[t] = (row[t] + p - lambda) % p;
                }
                let kernel = nullspace(&shifted, p);
                if kernel.is_empty() {
                    continue;
                }
                let mut sub_rows: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|coords| {
                        let mut v = vec![0u64; r];
                        for (t, &c) in coords.iter().enumerate() {
                            if c != 0 {
                                for (j, x) in v.iter_mut().enumerate() {
                                    *x = (*x + c * rows[t][j]) % p;
                                }
                            }
                        }
                        v
                    })
                    .collect();
                rref(&mut sub_rows, p);
                split_total += sub_rows.len();
                next.push(sub_rows);
            }
            if split_total != dim {
                return Err(CharTabError::SplitFailed);
            }
        }
        subspaces = next;
    }
    if subspaces.len() != r || subspaces.iter().any(|u| u.len() != 1) {
        return Err(CharTabError::SplitFailed);
    }

    let mut omegas = Vec::with_capacity(r);
    for line in &subspaces {
        let v = &line[0];
        let j = v.iter().position(|&x| x != 0).expect("nonzero basis vector");
        let inv = inv_mod(v[j], p);
        let mut omega = Vec::with_capacity(r);
        for i in 0..r {
            let w = mat_vec(&matrix_for(i), v, p);
            omega.push(w[j] * inv % p);
        }
        omegas.push(omega);
    }
    Ok(omegas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::rat;
    use crate::group::GroupSpec;

    fn build(l: u64, spec: GroupSpec) -> FiniteLGroup {
        FiniteLGroup::build(l, &spec).unwrap()
    }

    #[test]
    fn structure_constants_trivial() {
        let g = build(3, GroupSpec::Abelian(vec![]));
        let a = class_mult_coefficients(&g);
        assert_eq!(a[0][0][0], 1);
    }

    #[test]
    fn structure_constants_cyclic_convolution() {
        // C9: a_{ijk} = 1 iff i + j ≡ k mod 9 (classes are the elements
        // h^0..h^8; class index = element power by construction order)
        let g = build(3, GroupSpec::Abelian(vec![9]));
        let a = class_mult_coefficients(&g);
        for i in 0..9 {
            for j in 0..9 {
                for k in 0..9 {
                    let expect = u64::from((i + j) % 9 == k);
                    assert_eq!(a[i][j][k], expect);
                }
            }
        }
    }

    #[test]
    fn structure_constants_counting_law() {
        // Oracle consistency law: Σ_k a_{ijk}|C_k| = |C_i||C_j|.
        let g = build(3, GroupSpec::Preset("heisenberg_3".into()));
        let a = class_mult_coefficients(&g);
        let r = g.class_count();
        for i in 0..r {
            for j in 0..r {
                let total: u64 = (0..r).map(|k| a[i][j][k] * g.class_size(k) as u64).sum();
                assert_eq!(total, (g.class_size(i) * g.class_size(j)) as u64);
            }
        }
    }

    #[test]
    fn c9_table_matches_abelian_duality() {
        // Oracle: the nine linear characters η_k(h^a) = ζ9^{ka}.
        let g = build(3, GroupSpec::Abelian(vec![9]));
        let table = character_table(&g).unwrap();
        assert_eq!(table.len(), 9);
        let mut expected: Vec<Vec<CyclotomicNumber>> = (0..9u64)
            .map(|k| {
                (0..9u64)
                    .map(|a| CyclotomicNumber::root_of_unity(3, 2, k * a))
                    .collect()
            })
            .collect();
        for ch in table.characters() {
            assert_eq!(ch.degree(), 1);
            let pos = expected.iter().position(|vals| vals == ch.values());
            assert!(pos.is_some(), "character not of duality form");
            expected.remove(pos.unwrap());
        }
        assert!(expected.is_empty());
        assert!(table.first_orthogonality_holds(&g));
        assert!(table.second_orthogonality_holds(&g));
    }

    #[test]
    fn trivial_group_table() {
        let g = build(3, GroupSpec::Abelian(vec![]));
        let table = character_table(&g).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.character(0).degree(), 1);
    }

    #[test]
    fn heisenberg_degrees() {
        // Σ deg² = 27 over 11 classes forces nine 1's and two 3's.
        let g = build(3, GroupSpec::Preset("heisenberg_3".into()));
        let table = character_table(&g).unwrap();
        assert_eq!(table.len(), 11);
        let mut degrees: Vec<u64> = table.characters().iter().map(|c| c.degree()).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3]);
        assert!(table.first_orthogonality_holds(&g));
        assert!(table.second_orthogonality_holds(&g));
    }

    #[test]
    fn degree_squares_sum_to_order() {
        for spec in [
            GroupSpec::Abelian(vec![27]),
            GroupSpec::Abelian(vec![9, 3]),
            GroupSpec::Abelian(vec![3, 3, 3]),
            GroupSpec::Preset("heisenberg_3".into()),
        ] {
            let g = build(3, spec);
            let table = character_table(&g).unwrap();
            let sum: u64 = table.characters().iter().map(|c| c.degree() * c.degree()).sum();
            assert_eq!(sum, g.order());
            // number of linear characters = |H / [H,H]|
            let linear = table.characters().iter().filter(|c| c.degree() == 1).count();
            assert_eq!(linear as u64, g.order() / g.derived_subgroup().len() as u64);
        }
    }

    #[test]
    fn table_is_independent_of_lifting_prime() {
        let g = build(3, GroupSpec::Preset("heisenberg_3".into()));
        // default is 61; 103 and 193 also satisfy p ≡ 1 mod 3, p > 54
        let t1 = character_table_with_prime(&g, 61).unwrap();
        let t2 = character_table_with_prime(&g, 103).unwrap();
        let t3 = character_table_with_prime(&g, 193).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1, t3);
    }

    #[test]
    fn identity_class_value_is_degree() {
        let g = build(3, GroupSpec::Abelian(vec![9, 3]));
        let table = character_table(&g).unwrap();
        let idc = g.class_of(g.identity());
        for ch in table.characters() {
            assert_eq!(
                ch.value(idc).as_rational(),
                Some(Rational::from_integer(ch.degree().into()))
            );
        }
    }

    #[test]
    fn conjugation_is_galois_minus_one() {
        // η(c^{-1}) = σ_{-1}(η(c)) for every character and class.
        let g = build(3, GroupSpec::Preset("heisenberg_3".into()));
        let table = character_table(&g).unwrap();
        let e = table.value_level();
        let m = crate::arith::pow_u64(3, e);
        let conj = GaloisElement::new(3, e, m - 1).unwrap();
        for ch in table.characters() {
            for c in 0..g.class_count() {
                assert_eq!(ch.value(g.inverse_class(c)), &conj.apply(ch.value(c)));
            }
        }
    }

    #[test]
    fn heisenberg_cubic_values() {
        // Degree-3 characters vanish off the centre and take 3ζ3^j there.
        let g = build(3, GroupSpec::Preset("heisenberg_3".into()));
        let table = character_table(&g).unwrap();
        for ch in table.characters().iter().filter(|c| c.degree() == 3) {
            for c in 0..g.class_count() {
                if g.class_size(c) == 1 {
                    let v = ch.value(c);
                    assert!(!v.is_zero());
                } else {
                    assert!(ch.value(c).is_zero());
                }
            }
            assert_eq!(ch.conductor_exp(), 1);
        }
        let three = CyclotomicNumber::from_rational(3, 1, rat(3));
        let z3 = CyclotomicNumber::root_of_unity(3, 1, 1);
        let cubics: Vec<_> = table
            .characters()
            .iter()
            .filter(|c| c.degree() == 3)
            .collect();
        assert_eq!(cubics.len(), 2);
        // the two cubics differ by ζ3 ↦ ζ3² on the centre
        let center_classes: Vec<usize> = (0..g.class_count())
            .filter(|&c| g.class_size(c) == 1 && c != g.class_of(g.identity()))
            .collect();
        assert_eq!(center_classes.len(), 2);
        let vals: Vec<&CyclotomicNumber> = center_classes
            .iter()
            .map(|&c| cubics[0].value(c))
            .collect();
        let expect_a = three.mul(&z3);
        let expect_b = three.mul(&z3.mul(&z3));
        assert!(
            (*vals[0] == expect_a && *vals[1] == expect_b)
                || (*vals[0] == expect_b && *vals[1] == expect_a)
        );
    }
}
