//! Exact arithmetic in l-power cyclotomic fields `Q(ζ_{l^e})`, together with
//! the Galois action of `(Z/l^e)^*`, relative traces and norms between
//! levels, and the l-adic valuation normalised by `v(1 - ζ_{l^e}) = 1`.
//!
//! Elements are stored in the power basis `{ζ^i : 0 ≤ i < φ(l^e)}` modulo
//! `Φ_{l^e}(X) = Σ_{j=0}^{l-1} X^{j·l^{e-1}}`, always fully reduced, so two
//! values are equal iff their representations are. Internally a value is an
//! integer coefficient vector over a single positive denominator; keeping
//! one denominator per value instead of one per coefficient keeps gcd work
//! out of the convolution inner loops. `e = 0` means `Q`. Conductors are
//! never shrunk implicitly; `value_field_conductor` is the explicit shrink.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{gcd, phi_lpow, pow_u64, units_mod_lpow};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// l-adic valuation of a nonzero integer.
fn int_l_valuation(l: u64, x: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let l = BigInt::from(l);
    let mut v = 0i64;
    let mut n = x.abs();
    loop {
        let (q, r) = n.div_rem(&l);
        if r.is_zero() {
            n = q;
            v += 1;
        } else {
            break;
        }
    }
    Some(v)
}

/// l-adic valuation of a nonzero rational.
pub fn rational_l_valuation(l: u64, x: &Rational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_l_valuation(l, x.numer()).unwrap() - int_l_valuation(l, x.denom()).unwrap())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("operands live over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {k} is not a unit modulo {l}^{e}")]
    NotAUnit { l: u64, e: u32, k: u64 },
    #[error("element does not lie in the level-{target} subfield")]
    NotInSubfield { target: u32 },
    #[error("target level {target} exceeds element level {level}")]
    LevelTooHigh { target: u32, level: u32 },
}

/// Value of the l-adic valuation normalised by `v(1 - ζ_{l^e}) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v >= 0,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

/// Exact element of `Q(ζ_{l^e})` in the reduced power basis.
#[derive(Debug, Clone)]
pub struct CyclotomicNumber {
    prime: u64,
    cond_exp: u32,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl CyclotomicNumber {
    /// The zero of `Q(ζ_{l^e})`.
    pub fn zero(l: u64, e: u32) -> Self {
        CyclotomicNumber {
            prime: l,
            cond_exp: e,
            numer: vec![BigInt::zero(); phi_lpow(l, e) as usize],
            denom: BigInt::one(),
        }
    }

    /// The one of `Q(ζ_{l^e})`.
    pub fn one(l: u64, e: u32) -> Self {
        Self::from_rational(l, e, Rational::one())
    }

    /// A rational constant embedded at level `e`.
    pub fn from_rational(l: u64, e: u32, value: Rational) -> Self {
        let mut z = Self::zero(l, e);
        z.numer[0] = value.numer().clone();
        z.denom = value.denom().clone();
        z
    }

    /// `ζ_{l^e}^k`, reduced. `k` is taken modulo `l^e`.
    pub fn root_of_unity(l: u64, e: u32, k: u64) -> Self {
        if e == 0 {
            return Self::one(l, 0);
        }
        let modulus = pow_u64(l, e);
        let mut dense = vec![BigInt::zero(); modulus as usize];
        dense[(k % modulus) as usize] = BigInt::one();
        Self::from_dense(l, e, dense, BigInt::one())
    }

    /// Builds an element from rational coefficients on the power basis
    /// (length must be `φ(l^e)`).
    pub fn from_coeffs(l: u64, e: u32, coeffs: Vec<Rational>) -> Self {
        assert_eq!(
            coeffs.len() as u64,
            phi_lpow(l, e),
            "coefficient vector must have length phi(l^e)"
        );
        let mut denom = BigInt::one();
        for c in &coeffs {
            denom = denom.lcm(c.denom());
        }
        let numer = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        let mut out = CyclotomicNumber {
            prime: l,
            cond_exp: e,
            numer,
            denom,
        };
        out.normalize();
        out
    }

    /// All coefficients as rationals, in power-basis order.
    pub fn to_rationals(&self) -> Vec<Rational> {
        self.numer
            .iter()
            .map(|n| BigRational::new(n.clone(), self.denom.clone()))
            .collect()
    }

    /// Coefficient `i` of the power basis, as a rational.
    pub fn coeff_rational(&self, i: usize) -> Rational {
        BigRational::new(self.numer[i].clone(), self.denom.clone())
    }

    /// The common positive denominator of the power-basis coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Integer numerators over the common denominator.
    pub fn numerators(&self) -> &[BigInt] {
        &self.numer
    }

    /// Canonical form: positive denominator coprime to the numerator content.
    fn normalize(&mut self) {
        if self.denom.is_negative() {
            self.denom = -std::mem::take(&mut self.denom);
            for n in self.numer.iter_mut() {
                *n = -std::mem::take(n);
            }
        }
        let mut g = self.denom.clone();
        for n in &self.numer {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            self.denom /= &g;
            for n in self.numer.iter_mut() {
                *n /= &g;
            }
        }
        if self.numer.iter().all(|n| n.is_zero()) {
            self.denom = BigInt::one();
        }
    }

    /// Reduces a dense exponent vector (length `l^e`, exponents mod `l^e`)
    /// to the power basis. Uses `ζ^{(l-1)l^{e-1}} = -Σ_{j<l-1} ζ^{j·l^{e-1}}`.
    fn from_dense(l: u64, e: u32, mut dense: Vec<BigInt>, denom: BigInt) -> Self {
        if e == 0 {
            assert_eq!(dense.len(), 1);
            let mut out = CyclotomicNumber {
                prime: l,
                cond_exp: 0,
                numer: dense,
                denom,
            };
            out.normalize();
            return out;
        }
        let modulus = pow_u64(l, e) as usize;
        let phi = phi_lpow(l, e) as usize;
        let block = pow_u64(l, e - 1) as usize;
        assert_eq!(dense.len(), modulus);
        for i in phi..modulus {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut dense[i]);
            let s = i - phi; // i = (l-1)*block + s
            for j in 0..(l - 1) as usize {
                dense[s + j * block] -= &c;
            }
        }
        dense.truncate(phi);
        let mut out = CyclotomicNumber {
            prime: l,
            cond_exp: e,
            numer: dense,
            denom,
        };
        out.normalize();
        out
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn conductor_exp(&self) -> u32 {
        self.cond_exp
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.numer[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.numer[0].clone(), self.denom.clone()))
        } else {
            None
        }
    }

    fn assert_same_prime(&self, other: &Self) {
        assert_eq!(
            self.prime, other.prime,
            "cyclotomic operands must share the prime l"
        );
    }

    /// Rewrites the element at a higher level via `ζ_{l^{e}} = ζ_{l^{e'}}^{l^{e'-e}}`.
    /// The image of the reduced basis is again reduced, so this is a plain
    /// monomial relabelling.
    pub fn coerce_up(&self, e_new: u32) -> Self {
        assert!(e_new >= self.cond_exp, "coerce_up cannot lower the level");
        if e_new == self.cond_exp {
            return self.clone();
        }
        let stride = pow_u64(self.prime, e_new - self.cond_exp) as usize;
        let mut out = Self::zero(self.prime, e_new);
        for (i, c) in self.numer.iter().enumerate() {
            if !c.is_zero() {
                out.numer[i * stride] = c.clone();
            }
        }
        out.denom = self.denom.clone();
        out
    }

    /// Brings two operands to their common (maximal) level.
    pub fn unify(a: &Self, b: &Self) -> (Self, Self) {
        a.assert_same_prime(b);
        let e = a.cond_exp.max(b.cond_exp);
        (a.coerce_up(e), b.coerce_up(e))
    }

    /// True iff the element lies in `Q(ζ_{l^{target}})`. Membership is read
    /// off the reduced support: the level-`target` power basis maps to the
    /// exponents divisible by `l^{e-target}`.
    pub fn lies_in_level(&self, target: u32) -> bool {
        if target >= self.cond_exp {
            return true;
        }
        let stride = pow_u64(self.prime, self.cond_exp - target) as usize;
        self.numer
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % stride == 0)
    }

    /// Rewrites the element at a lower level, failing if it does not lie there.
    pub fn coerce_down(&self, target: u32) -> Result<Self, CycloError> {
        if target >= self.cond_exp {
            return Ok(self.coerce_up(target));
        }
        if !self.lies_in_level(target) {
            return Err(CycloError::NotInSubfield { target });
        }
        let stride = pow_u64(self.prime, self.cond_exp - target) as usize;
        let mut out = Self::zero(self.prime, target);
        for (i, c) in self.numer.iter().enumerate() {
            if !c.is_zero() {
                out.numer[i / stride] = c.clone();
            }
        }
        out.denom = self.denom.clone();
        Ok(out)
    }

    /// Smallest `e'` with the element in `Q(ζ_{l^{e'}})`.
    pub fn conductor(&self) -> u32 {
        (0..=self.cond_exp)
            .find(|&ep| self.lies_in_level(ep))
            .expect("lies_in_level(self.cond_exp) is trivially true")
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let mut out = a.clone();
        out.add_assign_same_level(&b);
        out
    }

    /// In-place addition; operands may differ in level.
    pub fn add_assign(&mut self, other: &Self) {
        self.assert_same_prime(other);
        if other.cond_exp == self.cond_exp {
            let b = other.clone();
            self.add_assign_same_level(&b);
        } else {
            *self = self.add(other);
        }
    }

    fn add_assign_same_level(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.denom == other.denom {
            for (x, y) in self.numer.iter_mut().zip(other.numer.iter()) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            let g = self.denom.gcd(&other.denom);
            let scale_self = &other.denom / &g;
            let scale_other = &self.denom / &g;
            for (x, y) in self.numer.iter_mut().zip(other.numer.iter()) {
                *x = &*x * &scale_self + y * &scale_other;
            }
            self.denom = &self.denom * &scale_self;
        }
        self.normalize();
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.numer.iter_mut() {
            *c = -std::mem::take(c);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.numer.iter_mut() {
            *c = &*c * s.numer();
        }
        out.denom = &out.denom * s.denom();
        out.normalize();
        out
    }

    /// Exact product; convolution on nonzero terms followed by canonical
    /// reduction mod `Φ_{l^e}`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let l = a.prime;
        let e = a.cond_exp;
        if e == 0 {
            let mut out = CyclotomicNumber {
                prime: l,
                cond_exp: 0,
                numer: vec![&a.numer[0] * &b.numer[0]],
                denom: &a.denom * &b.denom,
            };
            out.normalize();
            return out;
        }
        let modulus = pow_u64(l, e) as usize;
        let mut dense = vec![BigInt::zero(); modulus];
        for (i, ci) in a.numer.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.numer.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                dense[(i + j) % modulus] += ci * cj;
            }
        }
        Self::from_dense(l, e, dense, &a.denom * &b.denom)
    }

    /// Multiplicative inverse via the full Galois conjugate product: the
    /// norm down to `Q` is the rational `a · Π_{σ≠1} a^σ`.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.cond_exp == 0 {
            return Ok(Self::from_rational(
                self.prime,
                0,
                BigRational::new(self.denom.clone(), self.numer[0].clone()),
            ));
        }
        let mut cofactor = Self::one(self.prime, self.cond_exp);
        for k in units_mod_lpow(self.prime, self.cond_exp) {
            if k == 1 {
                continue;
            }
            let sigma = GaloisElement::new(self.prime, self.cond_exp, k)
                .expect("units_mod_lpow yields units");
            cofactor = cofactor.mul(&sigma.apply(self));
        }
        let norm = self
            .mul(&cofactor)
            .as_rational()
            .expect("full Galois norm is rational");
        if norm.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(self.prime, self.cond_exp);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Relative trace down to level `target`: the sum over the Galois
    /// elements fixing `Q(ζ_{l^{target}})`.
    pub fn rel_trace(&self, target: u32) -> Result<Self, CycloError> {
        let coset = self.relative_coset(target)?;
        let mut acc = Self::zero(self.prime, self.cond_exp);
        for sigma in coset {
            acc.add_assign(&sigma.apply(self));
        }
        acc.coerce_down(target)
    }

    /// Relative norm down to level `target`: the product over the same coset.
    pub fn rel_norm(&self, target: u32) -> Result<Self, CycloError> {
        let coset = self.relative_coset(target)?;
        let mut acc = Self::one(self.prime, self.cond_exp);
        for sigma in coset {
            acc = acc.mul(&sigma.apply(self));
        }
        acc.coerce_down(target)
    }

    /// Galois elements of `Q(ζ_{l^e})` fixing `Q(ζ_{l^{target}})`:
    /// `k ≡ 1 mod l^{target}` (all units when `target = 0`).
    fn relative_coset(&self, target: u32) -> Result<Vec<GaloisElement>, CycloError> {
        if target > self.cond_exp {
            return Err(CycloError::LevelTooHigh {
                target,
                level: self.cond_exp,
            });
        }
        let l = self.prime;
        let e = self.cond_exp;
        let modulus = if target == 0 { 1 } else { pow_u64(l, target) };
        Ok(units_mod_lpow(l, e)
            .into_iter()
            .filter(|&k| {
                if e == 0 {
                    true
                } else {
                    k % modulus == 1 % modulus
                }
            })
            .map(|k| GaloisElement::new(l, e, k).expect("unit exponent"))
            .collect())
    }

    /// l-adic valuation normalised by `v(1 - ζ_{l^e}) = 1`, computed as the
    /// plain l-adic valuation of the absolute norm. `v(l) = φ(l^e)`.
    pub fn l_valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let denom_val = int_l_valuation(self.prime, &self.denom).unwrap();
        let phi = phi_lpow(self.prime, self.cond_exp) as i64;
        // integral part: norm of the numerator vector
        let integral = CyclotomicNumber {
            prime: self.prime,
            cond_exp: self.cond_exp,
            numer: self.numer.clone(),
            denom: BigInt::one(),
        };
        let norm = integral
            .rel_norm(0)
            .expect("norm to level 0 always exists")
            .as_rational()
            .expect("level-0 values are rational");
        let numer_val = rational_l_valuation(self.prime, &norm).expect("nonzero norm");
        Valuation::Finite(numer_val - phi * denom_val)
    }

    /// Fast nonnegativity test for the valuation: when the denominator is
    /// prime to `l` the element is integral at `l` and no norm is needed.
    pub fn valuation_nonnegative(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if int_l_valuation(self.prime, &self.denom) == Some(0) {
            return true;
        }
        self.l_valuation().is_nonnegative()
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        let (a, b) = Self::unify(self, other);
        a.numer == b.numer && a.denom == b.denom
    }
}

impl Eq for CyclotomicNumber {}

/// Smallest `e'` such that every value lies in `Q(ζ_{l^{e'}})`.
pub fn value_field_conductor(values: &[CyclotomicNumber]) -> u32 {
    values.iter().map(|v| v.conductor()).max().unwrap_or(0)
}

/// An element of `G(Q(ζ_{l^e})/Q) ≅ (Z/l^e)^*`, acting by `ζ ↦ ζ^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaloisElement {
    prime: u64,
    cond_exp: u32,
    exponent: u64,
}

impl GaloisElement {
    pub fn new(l: u64, e: u32, k: u64) -> Result<Self, CycloError> {
        if e == 0 {
            return Ok(GaloisElement {
                prime: l,
                cond_exp: 0,
                exponent: 0,
            });
        }
        let m = pow_u64(l, e);
        let k = k % m;
        if gcd(k, l) != 1 {
            return Err(CycloError::NotAUnit { l, e, k });
        }
        Ok(GaloisElement {
            prime: l,
            cond_exp: e,
            exponent: k,
        })
    }

    pub fn identity(l: u64, e: u32) -> Self {
        Self::new(l, e, 1).expect("1 is a unit")
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn conductor_exp(&self) -> u32 {
        self.cond_exp
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_identity(&self) -> bool {
        self.cond_exp == 0 || self.exponent == 1
    }

    /// Composition is multiplication of exponents mod `l^e`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime);
        assert_eq!(self.cond_exp, other.cond_exp);
        if self.cond_exp == 0 {
            return *self;
        }
        let m = pow_u64(self.prime, self.cond_exp);
        GaloisElement {
            prime: self.prime,
            cond_exp: self.cond_exp,
            exponent: self.exponent * other.exponent % m,
        }
    }

    /// Applies the automorphism; when the value lives at a lower level the
    /// action restricts by reading `k` modulo the value's conductor.
    pub fn apply(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.prime, a.prime, "galois element over a different prime");
        let e = a.cond_exp;
        if e == 0 {
            return a.clone();
        }
        let modulus = pow_u64(a.prime, e) as usize;
        let k = (self.exponent % modulus as u64) as usize;
        let mut dense = vec![BigInt::zero(); modulus];
        for (i, c) in a.numer.iter().enumerate() {
            if !c.is_zero() {
                dense[i * k % modulus] += c;
            }
        }
        CyclotomicNumber::from_dense(a.prime, e, dense, a.denom.clone())
    }
}
