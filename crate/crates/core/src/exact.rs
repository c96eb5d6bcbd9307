//! Exact scalars: Gaussian rationals and elements of a real number field
//! `Q(α)` given by a monic minimal polynomial, plus fraction-free rank.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations needed by exact verification and elimination.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Exact division; `o` must be nonzero.
    fn div(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn int(n: i64) -> Self {
        GaussRat { re: rat(n), im: BigRational::zero() }
    }

    pub fn complex_int(re: i64, im: i64) -> Self {
        GaussRat { re: rat(re), im: rat(im) }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Parses `p/q`, decimals, `i`, `a+bi`, `-3i`, `2-1/2i`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::InvalidInput("empty scalar".into()));
        }
        if let Some(body) = t.strip_suffix('i') {
            // split at the last sign that is not the leading one and not part of an exponent
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            let (re, im) = match split {
                Some(k) => (parse_real(&body[..k])?, parse_imag(&body[k..])?),
                None => (BigRational::zero(), parse_imag(body)?),
            };
            Ok(GaussRat { re, im })
        } else {
            Ok(GaussRat { re: parse_real(&t)?, im: BigRational::zero() })
        }
    }
}

fn parse_imag(s: &str) -> Result<BigRational> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_real(s),
    }
}

/// Parses an exact rational from `p`, `p/q` or a finite decimal like `-1.25e-3`.
pub fn parse_real(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse number {s:?}"));
    let s = s.strip_prefix('+').unwrap_or(s);
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..scale.unsigned_abs() {
        if scale > 0 {
            value *= &ten;
        } else {
            value /= &ten;
        }
    }
    Ok(if neg { -value } else { value })
}

impl Scalar for GaussRat {
    fn zero_like(&self) -> Self {
        GaussRat::zero()
    }
    fn one_like(&self) -> Self {
        GaussRat::one()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        let p = Scalar::mul(self, &o.conj());
        GaussRat { re: p.re / &n, im: p.im / n }
    }
    fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                Scalar::add(self, o)
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                Scalar::sub(self, o)
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                Scalar::mul(self, o)
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                Scalar::sub(&self.zero_like(), self)
            }
        }
    };
}
forward_ops!(GaussRat);
forward_ops!(AlgNum);

/// Real number field `Q[x]/(p)` with a distinguished real root of `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    /// Monic minimal polynomial, coefficients from constant term upward.
    pub minpoly: Vec<BigRational>,
    /// Isolating interval of the chosen real root.
    pub interval: (BigRational, BigRational),
    pub root: f64,
}

impl NumberField {
    /// `minpoly` low-to-high integer coefficients (monic); the root is
    /// refined by bisection inside `interval`.
    pub fn new(minpoly: &[i64], interval: (BigRational, BigRational)) -> Result<Arc<Self>> {
        if minpoly.last() != Some(&1) || minpoly.len() < 2 {
            return Err(Error::InvalidInput("minimal polynomial must be monic of degree >= 1".into()));
        }
        let coeffs: Vec<BigRational> = minpoly.iter().map(|&c| rat(c)).collect();
        let eval = |x: &BigRational| coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        let (mut lo, mut hi) = interval.clone();
        let (flo, fhi) = (eval(&lo), eval(&hi));
        if flo.is_zero() || fhi.is_zero() || flo.is_positive() == fhi.is_positive() {
            return Err(Error::InvalidInput("interval does not isolate a sign change".into()));
        }
        let two = rat(2);
        for _ in 0..80 {
            let mid = (&lo + &hi) / &two;
            let fm = eval(&mid);
            if fm.is_positive() == flo.is_positive() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = rat_to_f64(&((&lo + &hi) / two));
        Ok(Arc::new(NumberField { minpoly: coeffs, interval, root }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// `|p(root)|` evaluated in floating point.
    pub fn root_residual(&self) -> f64 {
        self.minpoly
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * self.root + rat_to_f64(c))
            .abs()
    }

    pub fn element(self: &Arc<Self>, coeffs: &[BigRational]) -> AlgNum {
        AlgNum::reduce(self, coeffs.to_vec())
    }

    pub fn int(self: &Arc<Self>, n: i64) -> AlgNum {
        self.element(&[rat(n)])
    }

    pub fn gen(self: &Arc<Self>) -> AlgNum {
        self.element(&[rat(0), rat(1)])
    }
}

/// Element of a [`NumberField`], kept reduced (degree below the field degree).
#[derive(Clone)]
pub struct AlgNum {
    pub coeffs: Vec<BigRational>,
    pub field: Arc<NumberField>,
}

impl PartialEq for AlgNum {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl AlgNum {
    fn reduce(field: &Arc<NumberField>, mut c: Vec<BigRational>) -> AlgNum {
        let k = field.degree();
        while c.len() > k {
            let top = c.pop().expect("nonempty");
            let shift = c.len() - k;
            for (i, m) in field.minpoly[..k].iter().enumerate() {
                c[shift + i] -= &top * m;
            }
        }
        c.resize(k, BigRational::zero());
        AlgNum { coeffs: c, field: field.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * self.field.root + rat_to_f64(c))
    }

    fn inverse(&self) -> AlgNum {
        // solve (self * y) = 1 via the multiplication matrix over Q
        let k = self.field.degree();
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let mut e = vec![BigRational::zero(); k];
            e[j] = BigRational::one();
            let basis = AlgNum { coeffs: e, field: self.field.clone() };
            cols.push(Scalar::mul(self, &basis).coeffs);
        }
        let mut m: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..k).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for c in 0..k {
            let p = (c..k).find(|&r| !m[r][c].is_zero()).expect("nonzero element is invertible");
            m.swap(c, p);
            let piv = m[c][c].clone();
            for x in m[c].iter_mut() {
                *x /= &piv;
            }
            for r in 0..k {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let pivot_row = m[c].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        AlgNum { coeffs: m.into_iter().map(|row| row[k].clone()).collect(), field: self.field.clone() }
    }
}

impl Scalar for AlgNum {
    fn zero_like(&self) -> Self {
        self.field.int(0)
    }
    fn one_like(&self) -> Self {
        self.field.int(1)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        AlgNum { coeffs: c, field: self.field.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        AlgNum { coeffs: c, field: self.field.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut c = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        AlgNum::reduce(&self.field, c)
    }
    fn div(&self, o: &Self) -> Self {
        Scalar::mul(self, &o.inverse())
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Hermitian inner product `Σ conj(u_i) v_i`.
pub fn inner<S: Scalar>(u: &[S], v: &[S]) -> S {
    let mut acc = u[0].zero_like();
    for (a, b) in u.iter().zip(v) {
        acc = acc.add(&a.conj().mul(b));
    }
    acc
}

/// Rank of the matrix whose rows are `rows`, by fraction-free (Bareiss)
/// elimination.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m[0].len();
    let mut prev = m[0][0].one_like();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let num = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = num.div(&prev);
            }
            m[i][c] = m[i][c].zero_like();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_scalars() {
        assert_eq!(GaussRat::parse("3/4").unwrap(), GaussRat::new(BigRational::new(3.into(), 4.into()), rat(0)));
        assert_eq!(GaussRat::parse("1+2i").unwrap(), GaussRat::complex_int(1, 2));
        assert_eq!(GaussRat::parse("-i").unwrap(), GaussRat::complex_int(0, -1));
        assert_eq!(GaussRat::parse("2-1/2i").unwrap().im, BigRational::new((-1).into(), 2.into()));
        assert_eq!(GaussRat::parse("0.25").unwrap().re, BigRational::new(1.into(), 4.into()));
        assert_eq!(GaussRat::parse("1e2").unwrap(), GaussRat::int(100));
        assert!(GaussRat::parse("abc").is_err());
        assert!(GaussRat::parse("1/0").is_err());
    }

    #[test]
    fn rank_examples() {
        let v = |a: &[i64]| a.iter().map(|&x| GaussRat::int(x)).collect::<Vec<_>>();
        assert_eq!(rank(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]), 3);
        assert_eq!(rank(&[v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 0, 1])]), 2);
        assert_eq!(rank(&[v(&[0, 0, 0])]), 0);
        let w = vec![GaussRat::complex_int(0, 1), GaussRat::int(1)];
        let w2 = vec![GaussRat::int(-1), GaussRat::complex_int(0, 1)];
        assert_eq!(rank(&[w, w2]), 1);
    }

    #[test]
    fn cubic_field() {
        let k = NumberField::new(&[-2, 1, -3, 1], (rat(2), rat(3))).unwrap();
        assert!((k.root - 2.89329).abs() < 1e-5);
        assert!(k.root_residual() < 1e-9);
        let x = k.gen();
        let x3 = Scalar::mul(&Scalar::mul(&x, &x), &x);
        let p = Scalar::add(&Scalar::sub(&Scalar::add(&Scalar::sub(&x3, &Scalar::mul(&k.int(3), &Scalar::mul(&x, &x))), &x), &k.int(2)), &k.int(0));
        assert!(p.is_zero());
        let inv = Scalar::div(&k.int(1), &x);
        assert!((inv.to_f64() * k.root - 1.0).abs() < 1e-12);
    }
}
