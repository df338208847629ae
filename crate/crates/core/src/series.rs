//! Truncated power series over the valuation ring of `Q(ζ_{l^e})`,
//! Weierstrass preparation, coefficientwise Galois norms, and the
//! norm-order certificates behind the Schur-index computation.
//!
//! Coefficients are exact elements of the valuation ring (cyclotomic
//! numbers of nonnegative valuation), never l-adically truncated; only the
//! `T`-precision is finite. The identification in force is `γ^w ↔ 1 + T`.

use thiserror::Error;

use crate::arith::pow_u64;
use crate::cyclotomic::{CycloError, CyclotomicNumber, Rational, Valuation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series live over different coefficient fields")]
    FieldMismatch,
    #[error("coefficient {index} has negative valuation {valuation}")]
    CoefficientNotIntegral { index: usize, valuation: i64 },
    #[error("series is zero at the working precision")]
    ZeroSeries,
    #[error("distinguished degree not detectable: lambda >= precision {precision}")]
    InsufficientPrecision { precision: usize },
    #[error("constant term is not a unit of the valuation ring")]
    NotAUnit,
    #[error("invalid parameters: {0}")]
    BadParams(&'static str),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Element of `o[[T]]` to finite `T`-precision `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    prime: u64,
    cond_exp: u32,
    coeffs: Vec<CyclotomicNumber>,
}

impl TruncatedSeries {
    /// Builds a series, checking that every coefficient lies in the
    /// valuation ring.
    pub fn new(
        l: u64,
        e: u32,
        coeffs: Vec<CyclotomicNumber>,
    ) -> Result<Self, SeriesError> {
        assert!(!coeffs.is_empty(), "precision must be at least 1");
        let coeffs: Vec<CyclotomicNumber> =
            coeffs.iter().map(|c| c.coerce_up(e)).collect();
        for (index, c) in coeffs.iter().enumerate() {
            if !c.valuation_nonnegative() {
                let v = c.l_valuation().finite().expect("negative implies finite");
                return Err(SeriesError::CoefficientNotIntegral {
                    index,
                    valuation: v,
                });
            }
        }
        Ok(TruncatedSeries {
            prime: l,
            cond_exp: e,
            coeffs,
        })
    }

    /// Internal constructor for coefficients already known integral.
    fn from_checked(l: u64, e: u32, coeffs: Vec<CyclotomicNumber>) -> Self {
        TruncatedSeries {
            prime: l,
            cond_exp: e,
            coeffs,
        }
    }

    pub fn zero(l: u64, e: u32, precision: usize) -> Self {
        Self::from_checked(l, e, vec![CyclotomicNumber::zero(l, e); precision])
    }

    pub fn one(l: u64, e: u32, precision: usize) -> Self {
        let mut s = Self::zero(l, e, precision);
        s.coeffs[0] = CyclotomicNumber::one(l, e);
        s
    }

    /// `1 + T`, the image of `γ^w`.
    pub fn one_plus_t(l: u64, e: u32, precision: usize) -> Self {
        let mut s = Self::one(l, e, precision);
        if precision > 1 {
            s.coeffs[1] = CyclotomicNumber::one(l, e);
        }
        s
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn conductor_exp(&self) -> u32 {
        self.cond_exp
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &CyclotomicNumber {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        assert!(precision >= 1 && precision <= self.coeffs.len());
        Self::from_checked(
            self.prime,
            self.cond_exp,
            self.coeffs[..precision].to_vec(),
        )
    }

    fn unify(a: &Self, b: &Self) -> Result<(Self, Self), SeriesError> {
        if a.prime != b.prime {
            return Err(SeriesError::FieldMismatch);
        }
        let e = a.cond_exp.max(b.cond_exp);
        let m = a.precision().min(b.precision());
        let lift = |s: &Self| {
            Self::from_checked(
                s.prime,
                e,
                s.coeffs[..m].iter().map(|c| c.coerce_up(e)).collect(),
            )
        };
        Ok((lift(a), lift(b)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let (mut a, b) = Self::unify(self, other)?;
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            x.add_assign(y);
        }
        Ok(a)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = Self::unify(self, other)?;
        let m = a.precision();
        let mut out = Self::zero(a.prime, a.cond_exp, m);
        for (i, ci) in a.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in b.coeffs.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                if cj.is_zero() {
                    continue;
                }
                out.coeffs[i + j].add_assign(&ci.mul(cj));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &CyclotomicNumber) -> Self {
        Self::from_checked(
            self.prime,
            self.cond_exp,
            self.coeffs.iter().map(|c| c.mul(s)).collect(),
        )
    }

    pub fn pow(&self, n: u64) -> Result<Self, SeriesError> {
        let mut acc = Self::one(self.prime, self.cond_exp, self.precision());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a unit series (valuation-0 constant term), to the same
    /// precision; coefficients stay in the valuation ring.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.l_valuation() != Valuation::Finite(0) {
            return Err(SeriesError::NotAUnit);
        }
        let c0_inv = c0.inverse()?;
        let m = self.precision();
        let mut out = Self::zero(self.prime, self.cond_exp, m);
        out.coeffs[0] = c0_inv.clone();
        for k in 1..m {
            let mut acc = CyclotomicNumber::zero(self.prime, self.cond_exp);
            for j in 1..=k {
                acc.add_assign(&self.coeffs[j].mul(&out.coeffs[k - j]));
            }
            out.coeffs[k] = acc.neg().mul(&c0_inv);
        }
        Ok(out)
    }

    /// Galois norm down to level `target`: the coefficientwise-conjugate
    /// product over the relative coset, truncated.
    pub fn galois_norm(&self, target: u32) -> Result<TruncatedSeries, SeriesError> {
        if target > self.cond_exp {
            return Err(SeriesError::BadParams("target level above series level"));
        }
        let l = self.prime;
        let e = self.cond_exp;
        let m = self.precision();
        let mut acc = Self::one(l, e, m);
        let count = if e == 0 {
            1
        } else {
            pow_u64(l, e - target)
        };
        let modulus = pow_u64(l, e.max(1));
        let step = if target == 0 { 1 } else { pow_u64(l, target) };
        let mut applied = 0u64;
        let mut k = 1u64;
        while applied < count {
            if e == 0 {
                acc = acc.mul(self)?;
                applied += 1;
                continue;
            }
            if k % l != 0 {
                let sigma = crate::cyclotomic::GaloisElement::new(l, e, k)?;
                let conj = Self::from_checked(
                    l,
                    e,
                    self.coeffs.iter().map(|c| sigma.apply(c)).collect(),
                );
                acc = acc.mul(&conj)?;
                applied += 1;
            }
            k += step;
            if k >= modulus {
                break;
            }
        }
        let coeffs: Result<Vec<CyclotomicNumber>, CycloError> = acc
            .coeffs
            .iter()
            .map(|c| c.coerce_down(target))
            .collect();
        Ok(Self::from_checked(l, target, coeffs?))
    }
}

/// The uniformizer at level `e`: `1 - ζ_{l^e}` (the prime `l` itself at `e = 0`).
pub fn uniformizer(l: u64, e: u32) -> CyclotomicNumber {
    if e == 0 {
        CyclotomicNumber::from_rational(l, 0, Rational::from_integer(l.into()))
    } else {
        CyclotomicNumber::one(l, e).sub(&CyclotomicNumber::root_of_unity(l, e, 1))
    }
}

/// Result of Weierstrass preparation `f = ℓ^mu · F · u (mod T^M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparationResult {
    /// Power of the uniformizer factored out of all coefficients.
    pub mu: u32,
    /// Monic polynomial of degree `lambda` with lower coefficients of
    /// positive valuation; length `lambda + 1`.
    pub distinguished: Vec<CyclotomicNumber>,
    /// Unit series, same precision as the input.
    pub unit: TruncatedSeries,
}

impl PreparationResult {
    pub fn lambda(&self) -> usize {
        self.distinguished.len() - 1
    }
}

/// Weierstrass preparation at finite `T`-precision, exact in coefficients.
///
/// Extracts the maximal `ℓ^mu`, locates `lambda` (least index of a
/// valuation-0 coefficient), and solves the Weierstrass division
/// `T^lambda = q·g - r` exactly over the coefficient field; the output
/// satisfies `ℓ^mu·F·u ≡ f (mod T^M)` identically.
pub fn weierstrass_prepare(f: &TruncatedSeries) -> Result<PreparationResult, SeriesError> {
    let l = f.prime();
    let e = f.conductor_exp();
    let m = f.precision();
    if f.is_zero() {
        return Err(SeriesError::ZeroSeries);
    }
    let mu = f
        .coeffs()
        .iter()
        .filter_map(|c| c.l_valuation().finite())
        .min()
        .expect("nonzero series has a finite valuation") as u32;
    let ell = uniformizer(l, e);
    let ell_mu_inv = ell.pow(mu as u64).inverse()?;
    let g: Vec<CyclotomicNumber> = f.coeffs().iter().map(|c| c.mul(&ell_mu_inv)).collect();
    let lambda = g
        .iter()
        .position(|c| c.l_valuation() == Valuation::Finite(0))
        .ok_or(SeriesError::InsufficientPrecision { precision: m })?;
    if lambda >= m {
        return Err(SeriesError::InsufficientPrecision { precision: m });
    }
    if lambda == 0 {
        // g is already a unit series: F = 1 and the unit is g itself.
        return Ok(PreparationResult {
            mu,
            distinguished: vec![CyclotomicNumber::one(l, e)],
            unit: TruncatedSeries::from_checked(l, e, g),
        });
    }

    // Solve A q = e_0 where A[k][i] = g_{lambda + k - i}; the matrix is a
    // unit perturbation of the triangular g_lambda system, so it is
    // invertible over the field and q lands in the valuation ring.
    let dim = m - lambda;
    let zero = CyclotomicNumber::zero(l, e);
    let mut aug: Vec<Vec<CyclotomicNumber>> = (0..dim)
        .map(|k| {
            let mut row: Vec<CyclotomicNumber> = (0..dim)
                .map(|i| {
                    let idx = lambda as i64 + k as i64 - i as i64;
                    if idx >= 0 && (idx as usize) < m {
                        g[idx as usize].clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect();
            row.push(if k == 0 {
                CyclotomicNumber::one(l, e)
            } else {
                zero.clone()
            });
            row
        })
        .collect();
    let q = solve_field_system(&mut aug)?;

    // F = (q·g mod T^M): monic of degree lambda with small lower part.
    let q_series = TruncatedSeries::from_checked(l, e, {
        let mut qc = q.clone();
        qc.resize(m, zero.clone());
        qc
    });
    let g_series = TruncatedSeries::from_checked(l, e, g);
    let qg = q_series.mul(&g_series)?;
    debug_assert!(qg.coeff(lambda) == &CyclotomicNumber::one(l, e));
    debug_assert!((lambda + 1..m).all(|i| qg.coeff(i).is_zero()));
    let mut distinguished: Vec<CyclotomicNumber> =
        qg.coeffs()[..=lambda].to_vec();
    distinguished[lambda] = CyclotomicNumber::one(l, e);
    for (i, c) in distinguished[..lambda].iter().enumerate() {
        match c.l_valuation() {
            Valuation::Infinite => {}
            Valuation::Finite(v) if v >= 1 => {}
            Valuation::Finite(v) => {
                debug_assert!(false, "coefficient {i} of F has valuation {v}");
            }
        }
    }

    let unit = q_series.invert_unit()?;

    Ok(PreparationResult {
        mu,
        distinguished,
        unit,
    })
}

/// `ℓ^mu · F · u` at the unit's precision.
pub fn recompose(
    mu: u32,
    distinguished: &[CyclotomicNumber],
    unit: &TruncatedSeries,
) -> Result<TruncatedSeries, SeriesError> {
    let l = unit.prime();
    let e = unit.conductor_exp();
    let m = unit.precision();
    let mut fc = distinguished.to_vec();
    fc.resize(m.max(fc.len()), CyclotomicNumber::zero(l, e));
    fc.truncate(m);
    let f_series = TruncatedSeries::from_checked(l, e, fc);
    let ell_mu = uniformizer(l, e).pow(mu as u64);
    Ok(f_series.mul(unit)?.scale(&ell_mu))
}

/// Gaussian elimination over `Q(ζ_{l^e})` on an augmented system.
fn solve_field_system(
    aug: &mut [Vec<CyclotomicNumber>],
) -> Result<Vec<CyclotomicNumber>, SeriesError> {
    let n = aug.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(SeriesError::BadParams("singular Weierstrass system"))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].inverse()?;
        for x in aug[col][col..].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=n {
                    let sub = factor.mul(&aug[col][c]);
                    aug[r][c] = aug[r][c].sub(&sub);
                }
            }
        }
    }
    Ok((0..n).map(|r| aug[r][n].clone()).collect())
}

/// Verdict of the norm-order certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrderVerdict {
    Representable,
    Obstructed,
}

/// Trace-lattice certificate for the order of `γ^w` in the norm quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormOrderCertificate {
    pub l: u64,
    pub e: u32,
    pub r: u32,
    pub t: u32,
    /// `Tr(ζ^i)` from level `e` to `e - r`, for `0 ≤ i < l^r`.
    pub trace_values: Vec<CyclotomicNumber>,
    pub verdict: NormOrderVerdict,
}

/// Computes the trace image of the power basis `{ζ^i}_{0 ≤ i < l^r}` from
/// level `e` down to `e - r`: `Tr(1) = l^r` and `Tr(ζ^i) = 0` otherwise, so
/// the trace lattice is `l^r · o` and `(1+T)^{l^t}` is not a relative norm
/// for `t < r`. This pins the order of `γ^w` and hence the Schur index.
pub fn norm_order_certificate(
    l: u64,
    e: u32,
    r: u32,
    t: u32,
) -> Result<NormOrderCertificate, SeriesError> {
    if e == 0 && r != 0 {
        return Err(SeriesError::BadParams("r must be 0 when e = 0"));
    }
    if e >= 1 && r > e - 1 {
        return Err(SeriesError::BadParams("r must satisfy r <= e - 1"));
    }
    let lr = pow_u64(l, r);
    let mut trace_values = Vec::with_capacity(lr as usize);
    for i in 0..lr {
        let zi = CyclotomicNumber::root_of_unity(l, e, i);
        let tr = zi.rel_trace(e - r)?;
        let expected = if i == 0 {
            CyclotomicNumber::from_rational(l, e - r, Rational::from_integer(lr.into()))
        } else {
            CyclotomicNumber::zero(l, e - r)
        };
        if tr != expected {
            return Err(SeriesError::BadParams("trace lattice defect"));
        }
        trace_values.push(tr);
    }
    let verdict = if t < r {
        NormOrderVerdict::Obstructed
    } else {
        NormOrderVerdict::Representable
    };
    Ok(NormOrderCertificate {
        l,
        e,
        r,
        t,
        trace_values,
        verdict,
    })
}

/// Extracted data of the unit-reduction step: if `N(f) = (1+T)^{l^t}` then
/// the constant term has relative norm 1 and the linear coefficient (after
/// normalising the constant term to 1) has relative trace `l^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitReductionCheck {
    pub constant_norm: CyclotomicNumber,
    pub linear_trace: CyclotomicNumber,
    pub verdict: NormOrderVerdict,
}

pub fn unit_reduction_check(
    f: &TruncatedSeries,
    target: u32,
    t: u32,
) -> Result<UnitReductionCheck, SeriesError> {
    let c0 = f.coeff(0);
    if c0.l_valuation() != Valuation::Finite(0) {
        return Err(SeriesError::NotAUnit);
    }
    let constant_norm = c0.rel_norm(target)?;
    let c1 = if f.precision() > 1 {
        f.coeff(1).clone()
    } else {
        CyclotomicNumber::zero(f.prime(), f.conductor_exp())
    };
    let normalized = c1.div(c0)?;
    let linear_trace = normalized.rel_trace(target)?;
    let lt = CyclotomicNumber::from_rational(
        f.prime(),
        target,
        Rational::from_integer(pow_u64(f.prime(), t).into()),
    );
    let one = CyclotomicNumber::one(f.prime(), target);
    let verdict = if constant_norm == one && linear_trace == lt {
        NormOrderVerdict::Representable
    } else {
        NormOrderVerdict::Obstructed
    };
    Ok(UnitReductionCheck {
        constant_norm,
        linear_trace,
        verdict,
    })
}
