//! Exact coefficients: the cyclotomic field ℚ(ζ_N) and polynomials in the
//! coideal parameters c₁,…,c_n over it.
//!
//! A [`CycNum`] stores an integer coefficient vector in the power basis
//! 1, ζ, …, ζ^{φ(N)−1} together with a positive common denominator. Products
//! are reduced modulo the monic integer polynomial Φ_N, so numerators stay
//! integral.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parking_lot::RwLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("context mismatch: cyclotomic order {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("context mismatch: {0} parameters vs {1}")]
    ArityMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot invert a non-constant parameter polynomial")]
    NotConstant,
    #[error("malformed cyclotomic literal {0:?}: {1}")]
    Parse(String, String),
}

/// Reduction data for one cyclotomic order.
struct CycField {
    phi: usize,
    /// Φ_N as integer coefficients, lowest degree first, monic.
    poly: Vec<BigInt>,
}

static FIELDS: LazyLock<RwLock<BTreeMap<u32, Arc<CycField>>>> = LazyLock::new(|| RwLock::new(BTreeMap::new()));
static ROOTS: LazyLock<RwLock<BTreeMap<(u32, u32), CycNum>>> = LazyLock::new(|| RwLock::new(BTreeMap::new()));

fn poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // Exact division of integer polynomials with monic divisor.
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    quot
}

/// The N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    field(n).poly.clone()
}

fn field(n: u32) -> Arc<CycField> {
    if let Some(f) = FIELDS.read().get(&n) {
        return f.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let sub = field(d);
            num = poly_divexact(&num, &sub.poly);
        }
    }
    let phi = num.len() - 1;
    let f = Arc::new(CycField { phi, poly: num });
    FIELDS.write().insert(n, f.clone());
    f
}

/// Euler's totient of N, the dimension of ℚ(ζ_N).
pub fn totient(n: u32) -> usize {
    field(n).phi
}

/// Element of ℚ(ζ_N) in the power basis, stored as integer numerators over a
/// positive common denominator in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    ord: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(ord: u32) -> CycNum {
        let phi = totient(ord);
        CycNum { ord, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn one(ord: u32) -> CycNum {
        CycNum::from_int(ord, 1)
    }

    pub fn from_int(ord: u32, v: i64) -> CycNum {
        let mut z = CycNum::zero(ord);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_rational(ord: u32, v: BigRational) -> CycNum {
        let mut z = CycNum::zero(ord);
        z.num[0] = v.numer().clone();
        z.den = v.denom().clone();
        z.normalize();
        z
    }

    /// Builds an element from rational power-basis coordinates of length φ(N).
    pub fn from_coeffs(ord: u32, coeffs: &[BigRational]) -> CycNum {
        let phi = totient(ord);
        assert_eq!(coeffs.len(), phi, "coefficient vector must have length φ(N)");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut z = CycNum { ord, num, den };
        z.normalize();
        z
    }

    pub fn ord(&self) -> u32 {
        self.ord
    }

    /// Rational power-basis coordinates.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    fn check(&self, other: &CycNum) {
        assert_eq!(self.ord, other.ord, "cyclotomic order mismatch");
    }

    pub fn scale_int(&self, k: i64) -> CycNum {
        let mut r = self.clone();
        let k = BigInt::from(k);
        for c in &mut r.num {
            *c *= &k;
        }
        r.normalize();
        r
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Φ_N.
    pub fn inverse(&self) -> Result<CycNum, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNum::from_rational(self.ord, r.recip()));
        }
        let f = field(self.ord);
        let to_q = |v: &[BigInt]| -> Vec<BigRational> { v.iter().map(|c| BigRational::from(c.clone())).collect() };
        // Invariant: s·a ≡ r0 and t·a ≡ r1 modulo Φ_N.
        let mut r0 = to_q(&f.poly);
        let mut r1 = to_q(&self.num);
        let mut s0: Vec<BigRational> = vec![BigRational::zero()];
        let mut s1: Vec<BigRational> = vec![BigRational::from(self.den.clone())];
        trim(&mut r1);
        while !(r1.len() == 1) {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            trim(&mut r1);
            if r1.len() == 1 && r1[0].is_zero() {
                unreachable!("Φ_N is irreducible, so a nonzero element has trivial gcd");
            }
        }
        let c = r1[0].clone();
        let mut coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        coeffs.resize(f.phi, BigRational::zero());
        // s1 may have degree ≥ φ; reduce through the integer table.
        let z = reduce_rational(self.ord, &coeffs);
        Ok(z)
    }

    pub fn pow(&self, e: i64) -> CycNum {
        if e < 0 {
            return self.inverse().expect("power of zero with negative exponent").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = CycNum::one(self.ord);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Parses integer or rational combinations of powers of `z`, e.g. `"-z^4+1"`,
    /// `"1/2*z^3 - 2z"`, `"z^-1"`.
    pub fn parse(ord: u32, text: &str) -> Result<CycNum, ScalarError> {
        let err = |m: &str| ScalarError::Parse(text.to_string(), m.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty literal"));
        }
        let mut acc = CycNum::zero(ord);
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                // allow a negative exponent directly after '^'
                i += 1;
                if i < bytes.len() && bytes[i] == b'-' && bytes[i - 1] == b'^' {
                    i += 1;
                }
            }
            let term = &s[start..i];
            if term.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef_str, pow_str) = match term.find('z') {
                Some(p) => (&term[..p], Some(&term[p + 1..])),
                None => (term, None),
            };
            let coef_str = coef_str.trim_end_matches('*');
            let coef = if coef_str.is_empty() {
                BigRational::one()
            } else if let Some((a, b)) = coef_str.split_once('/') {
                let a: BigInt = a.parse().map_err(|_| err("bad numerator"))?;
                let b: BigInt = b.parse().map_err(|_| err("bad denominator"))?;
                if b.is_zero() {
                    return Err(err("zero denominator"));
                }
                BigRational::new(a, b)
            } else {
                BigRational::from(coef_str.parse::<BigInt>().map_err(|_| err("bad coefficient"))?)
            };
            let exp: i64 = match pow_str {
                None => 0,
                Some("") => 1,
                Some(p) => {
                    let p = p.strip_prefix('^').ok_or_else(|| err("expected '^' after z"))?;
                    let p = p.trim_start_matches('(').trim_end_matches(')');
                    p.parse().map_err(|_| err("bad exponent"))?
                }
            };
            let c = CycNum::from_rational(ord, coef * BigRational::from(BigInt::from(sign)));
            acc = &acc + &(&c * &make_root(ord, exp));
        }
        Ok(acc)
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut r = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        r[i] -= x;
    }
    trim(&mut r);
    r
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b[db].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..rem.len() - db).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        quot[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn reduce_rational(ord: u32, coeffs: &[BigRational]) -> CycNum {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let mut z = CycNum { ord, num: reduce_int(ord, num), den };
    z.normalize();
    z
}

/// Reduces an integer coefficient vector of any length modulo Φ_N.
fn reduce_int(ord: u32, mut v: Vec<BigInt>) -> Vec<BigInt> {
    let f = field(ord);
    let phi = f.phi;
    if v.len() <= phi {
        v.resize(phi, BigInt::zero());
        return v;
    }
    // Fold high degrees down with x^N = 1 first, then the table.
    let n = ord as usize;
    if v.len() > n {
        for k in (n..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if !c.is_zero() {
                v[k % n] += c;
            }
        }
        v.truncate(n);
    }
    for k in (phi..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[k]);
        for j in 0..phi {
            if !f.poly[j].is_zero() {
                v[k - phi + j] -= &c * &f.poly[j];
            }
        }
    }
    v.truncate(phi);
    v
}

/// ζ_N^k reduced modulo Φ_N.
pub fn make_root(n: u32, k: i64) -> CycNum {
    assert!(n >= 1, "cyclotomic order must be positive");
    let k = k.rem_euclid(n as i64) as u32;
    if let Some(z) = ROOTS.read().get(&(n, k)) {
        return z.clone();
    }
    let mut v = vec![BigInt::zero(); k as usize + 1];
    v[k as usize] = BigInt::one();
    let z = CycNum { ord: n, num: reduce_int(n, v), den: BigInt::one() };
    ROOTS.write().insert((n, k), z.clone());
    z
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        self.check(o);
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect();
            let mut r = CycNum { ord: self.ord, num, den: self.den.clone() };
            r.normalize();
            r
        } else {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
            let mut r = CycNum { ord: self.ord, num, den: &self.den * &o.den };
            r.normalize();
            r
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        self + &(-o)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return CycNum::zero(self.ord);
        }
        let phi = self.num.len();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut r = CycNum { ord: self.ord, num: reduce_int(self.ord, prod), den: &self.den * &o.den };
        r.normalize();
        r
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { ord: self.ord, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(self, o: CycNum) -> CycNum {
        &self + &o
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, o: CycNum) -> CycNum {
        &self - &o
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, o: CycNum) -> CycNum {
        &self * &o
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a_str = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            match k {
                0 => write!(f, "{}", a_str)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a_str)?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Polynomial in c₁,…,c_n with coefficients in ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ord: u32,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, CycNum>,
}

impl Scalar {
    pub fn zero(ord: u32, nvars: usize) -> Scalar {
        Scalar { ord, nvars, terms: BTreeMap::new() }
    }

    pub fn one(ord: u32, nvars: usize) -> Scalar {
        Scalar::constant(CycNum::one(ord), nvars)
    }

    pub fn from_int(ord: u32, nvars: usize, v: i64) -> Scalar {
        Scalar::constant(CycNum::from_int(ord, v), nvars)
    }

    pub fn constant(c: CycNum, nvars: usize) -> Scalar {
        let mut terms = BTreeMap::new();
        let ord = c.ord();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Scalar { ord, nvars, terms }
    }

    /// The parameter c_i (zero-based index).
    pub fn var(ord: u32, nvars: usize, i: usize) -> Scalar {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, CycNum::one(ord));
        Scalar { ord, nvars, terms }
    }

    pub fn monomial(c: CycNum, exps: Vec<u32>) -> Scalar {
        let ord = c.ord();
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Scalar { ord, nvars, terms }
    }

    pub fn ord(&self) -> u32 {
        self.ord
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CycNum)> {
        self.terms.iter()
    }

    /// Total degree in the parameters; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The value if the polynomial is constant in the parameters.
    pub fn as_constant(&self) -> Option<CycNum> {
        match self.terms.len() {
            0 => Some(CycNum::zero(self.ord)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn compatible(&self, o: &Scalar) -> Result<(), ScalarError> {
        if self.ord != o.ord {
            return Err(ScalarError::OrderMismatch(self.ord, o.ord));
        }
        if self.nvars != o.nvars {
            return Err(ScalarError::ArityMismatch(self.nvars, o.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.compatible(o)?;
        let mut r = self.clone();
        r.add_assign_unchecked(o);
        Ok(r)
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        self.compatible(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Scalar::zero(self.ord, self.nvars));
        }
        let mut terms: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let p = ca * cb;
                match terms.get_mut(&e) {
                    Some(v) => *v = &*v + &p,
                    None => {
                        terms.insert(e, p);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(Scalar { ord: self.ord, nvars: self.nvars, terms })
    }

    fn add_assign_unchecked(&mut self, o: &Scalar) {
        for (e, c) in &o.terms {
            match self.terms.get_mut(e) {
                Some(v) => {
                    let s = &*v + c;
                    if s.is_zero() {
                        self.terms.remove(e);
                    } else {
                        *v = s;
                    }
                }
                None => {
                    self.terms.insert(e.clone(), c.clone());
                }
            }
        }
    }

    pub fn scale(&self, c: &CycNum) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(self.ord, self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        Scalar { ord: self.ord, nvars: self.nvars, terms }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = Scalar::one(self.ord, self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a nonzero constant.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        let c = self.as_constant().ok_or(ScalarError::NotConstant)?;
        Ok(Scalar::constant(c.inverse()?, self.nvars))
    }

    /// Substitutes numeric values for all parameters.
    pub fn eval(&self, values: &[CycNum]) -> CycNum {
        assert_eq!(values.len(), self.nvars);
        let mut acc = CycNum::zero(self.ord);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k as i64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes Scalars (over a possibly different parameter count) for the parameters.
    pub fn substitute(&self, images: &[Scalar]) -> Scalar {
        assert_eq!(images.len(), self.nvars);
        let nv = images.first().map_or(self.nvars, |s| s.nvars);
        let mut acc = Scalar::zero(self.ord, nv);
        for (e, c) in &self.terms {
            let mut t = Scalar::constant(c.clone(), nv);
            for (v, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = &t * &v.pow(k);
                }
            }
            acc.add_assign_unchecked(&t);
        }
        acc
    }

    /// Whether `self = u · other` for a nonzero constant u; returns u.
    pub fn proportional_to(&self, other: &Scalar) -> Option<CycNum> {
        let (e, c) = self.terms.iter().next()?;
        let d = other.terms.get(e)?;
        let u = c * &d.inverse().ok()?;
        if &other.scale(&u) == self {
            Some(u)
        } else {
            None
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar context mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.try_add(&-o).expect("scalar context mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar context mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { ord: self.ord, nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.compatible(o).expect("scalar context mismatch");
        self.add_assign_unchecked(o);
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl fmt::Display for Scalar {
    /// Monomials in descending total degree, ties broken so that c₁ powers come first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("c{}", i + 1) } else { format!("c{}^{}", i + 1, k) })
                .collect();
            if mono.is_empty() {
                write!(f, "({})", c)?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({})*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Rational number as a primitive integer if it fits.
pub fn small_int(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

impl serde::Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn roots_reduce() {
        assert_eq!(make_root(4, 2), CycNum::from_int(4, -1));
        assert_eq!(make_root(3, 2).coeffs(), vec![q(-1), q(-1)]);
        assert!(make_root(12, 12).is_one());
        assert!(make_root(7, 0).is_one());
        assert_eq!(make_root(5, -1), make_root(5, 4));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let p = |n| cyclotomic_polynomial(n).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(p(1), vec![-1, 1]);
        assert_eq!(p(4), vec![1, 0, 1]);
        assert_eq!(p(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(p(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(totient(24), 8);
    }

    #[test]
    fn root_orders() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 12, 24] {
            for k in 0..n as i64 {
                let z = make_root(n, k);
                let ord = n / num_integer::gcd(n, k as u32).max(1);
                let ord = if k == 0 { 1 } else { ord };
                assert!(z.pow(ord as i64).is_one());
                for d in 1..ord {
                    assert!(!z.pow(d as i64).is_one(), "ζ_{n}^{k} has order {ord}");
                }
            }
        }
    }

    #[test]
    fn scalar_examples() {
        let z3 = Scalar::constant(make_root(3, 1), 2);
        let z3sq = Scalar::constant(make_root(3, 2), 2);
        assert!((&z3 * &z3sq).is_one());
        let c1 = Scalar::var(3, 2, 0);
        let c2 = Scalar::var(3, 2, 1);
        let p = &c1 * &c2;
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.terms().next().unwrap().0, &vec![1, 1]);
        let s = &(&Scalar::one(3, 2) + &z3) + &z3sq;
        assert!(s.is_zero());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Scalar::one(3, 2);
        let b = Scalar::one(4, 2);
        assert_eq!(a.try_add(&b), Err(ScalarError::OrderMismatch(3, 4)));
        let c = Scalar::one(3, 1);
        assert_eq!(a.try_mul(&c), Err(ScalarError::ArityMismatch(2, 1)));
    }

    #[test]
    fn simple_inverses() {
        assert_eq!(make_root(7, 3).inverse().unwrap(), make_root(7, -3));
        assert_eq!(CycNum::from_int(5, -1).inverse().unwrap(), CycNum::from_int(5, -1));
        assert_eq!(CycNum::zero(5).inverse(), Err(ScalarError::DivisionByZero));
    }

    /// Independent oracle: solve (multiplication-by-a matrix)·x = e₀ by Gauss–Jordan.
    fn inverse_oracle(a: &CycNum) -> Vec<BigRational> {
        let n = a.ord();
        let phi = totient(n);
        let mut cols = Vec::new();
        for j in 0..phi {
            cols.push((a * &make_root(n, j as i64)).coeffs());
        }
        // augmented matrix rows i: [M[i][j] | δ_{i0}]
        let mut m: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { q(1) } else { q(0) });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !m[r][col].is_zero()).unwrap();
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in &mut m[col] {
                *x = &*x / &p;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pr = m[col].clone();
                    for (x, y) in m[r].iter_mut().zip(pr) {
                        *x = &*x - &(&f * &y);
                    }
                }
            }
        }
        m.into_iter().map(|row| row[phi].clone()).collect()
    }

    #[test]
    fn inverse_of_one_plus_zeta12_matches_oracle() {
        let a = &CycNum::one(12) + &make_root(12, 1);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.coeffs(), inverse_oracle(&a));
        assert!((&a * &inv).is_one());
        assert_eq!(inv.to_string(), "z^2-z^3");
    }

    #[test]
    fn parse_literals() {
        let a = CycNum::parse(24, "-z^4+1").unwrap();
        assert_eq!(a, &CycNum::one(24) - &make_root(24, 4));
        assert_eq!(CycNum::parse(5, "z^-1").unwrap(), make_root(5, 4));
        assert_eq!(CycNum::parse(5, "3/2*z - 2z^2").unwrap().to_string(), "3/2*z-2*z^2");
        assert!(CycNum::parse(5, "2y").is_err());
        assert!(CycNum::parse(5, "").is_err());
        for s in ["1+z", "-z^3", "1/3-z^2", "z^7"] {
            let v = CycNum::parse(8, s).unwrap();
            assert_eq!(CycNum::parse(8, &v.to_string()).unwrap(), v);
        }
    }

    fn arb_cyc(n: u32) -> impl Strategy<Value = CycNum> {
        let phi = totient(n);
        prop::collection::vec((-5i64..=5, 1i64..=3), phi).prop_map(move |v| {
            let c: Vec<BigRational> = v.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect();
            CycNum::from_coeffs(n, &c)
        })
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        prop::collection::vec((arb_cyc(12), 0u32..3, 0u32..3), 0..4).prop_map(|ts| {
            let mut s = Scalar::zero(12, 2);
            for (c, a, b) in ts {
                s += &Scalar::monomial(c, vec![a, b]);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn cyc_ring_axioms(a in arb_cyc(12), b in arb_cyc(12), c in arb_cyc(12)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn cyc_inverse_property(a in arb_cyc(24)) {
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }

        #[test]
        fn root_power_order(n in 1u32..30, k in -40i64..40) {
            let z = make_root(n, k);
            let g = num_integer::gcd(n as i64, k.rem_euclid(n as i64));
            let ord = if g == 0 { 1 } else { n as i64 / g };
            prop_assert!(z.pow(ord).is_one());
        }

        #[test]
        fn scalar_ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
