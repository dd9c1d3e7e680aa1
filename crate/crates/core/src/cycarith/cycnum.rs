use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::intpoly::cyclotomic_poly;
use super::rational::{parse_rational, render_rational, Rational};
use super::{divisors, euler_phi, gcd, lcm, units_mod};

/// `e^{2 i pi a / d}` with `a / d` in lowest terms and `0 <= a < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    a: u64,
    d: u64,
}

impl RootOfUnity {
    pub fn new(a: i64, d: u64) -> Self {
        assert!(d >= 1);
        let a = a.rem_euclid(d as i64) as u64;
        let g = gcd(a, d);
        let (a, d) = if a == 0 { (0, 1) } else { (a / g, d / g) };
        RootOfUnity { a, d }
    }

    pub fn exponent(&self) -> u64 {
        self.a
    }

    pub fn order(&self) -> u64 {
        self.d
    }

    /// Exponent of this root over a multiple `m` of its order.
    pub fn exponent_over(&self, m: u64) -> u64 {
        assert!(m % self.d == 0);
        self.a * (m / self.d)
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let m = lcm(self.d, other.d);
        RootOfUnity::new((self.exponent_over(m) + other.exponent_over(m)) as i64, m)
    }

    pub fn inverse(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.a as i64), self.d)
    }

    pub fn to_cycnum(&self) -> CycNum {
        CycNum::zeta(self.d, self.a as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.d) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, d) => write!(f, "z{d}"),
            (a, d) => write!(f, "z{d}^{a}"),
        }
    }
}

/// Power-basis reduction data for one conductor: the reduced vector of `zeta^k`, `k < n`.
struct Basis {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

fn basis(n: u64) -> Arc<Basis> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&n) {
        return b.clone();
    }
    let phi = euler_phi(n) as usize;
    let poly = cyclotomic_poly(n);
    let low: Vec<i64> =
        poly.coeffs()[..phi].iter().map(|c| c.to_i64().expect("cyclotomic coefficient fits i64")).collect();
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by zeta, then reduce zeta^phi = -sum low_i zeta^i
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * low[i];
            }
        }
    }
    let b = Arc::new(Basis { phi, powers });
    cache.lock().unwrap().insert(n, b.clone());
    b
}

/// Element of `Q(zeta_n)` in the power basis `1, zeta_n, ..., zeta_n^{phi(n)-1}`.
#[derive(Clone, Debug)]
pub struct CycNum {
    n: u64,
    c: Vec<Rational>,
}

impl CycNum {
    pub fn zero(n: u64) -> Self {
        CycNum { n, c: vec![Rational::zero(); euler_phi(n) as usize] }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rational_in(Rational::one(), n)
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNum { n: 1, c: vec![q] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational_in(q: Rational, n: u64) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = q;
        z
    }

    /// `zeta_n^k`, any integer `k`.
    pub fn zeta(n: u64, k: i64) -> Self {
        let b = basis(n);
        let v = &b.powers[k.rem_euclid(n as i64) as usize];
        CycNum { n, c: v.iter().map(|x| Rational::from_integer(BigInt::from(*x))).collect() }
    }

    /// Builds from power-basis coordinates; `coeffs.len()` must equal `phi(n)`.
    pub fn from_coeffs(n: u64, coeffs: Vec<Rational>) -> Option<Self> {
        (coeffs.len() == euler_phi(n) as usize).then_some(CycNum { n, c: coeffs })
    }

    /// `sum_k m_k zeta_n^k` from an exponent-indexed vector of length `n`.
    pub fn from_exponent_counts(n: u64, counts: &[Rational]) -> Self {
        let b = basis(n);
        let mut out = vec![Rational::zero(); b.phi];
        for (k, m) in counts.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (i, x) in b.powers[k % n as usize].iter().enumerate() {
                if *x != 0 {
                    out[i] += m * Rational::from_integer(BigInt::from(*x));
                }
            }
        }
        CycNum { n, c: out }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The rational value, if this element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        self.c[1..].iter().all(|x| x.is_zero()).then(|| self.c[0].clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Image in `Q(zeta_m)` for a multiple `m` of the conductor.
    pub fn embed(&self, m: u64) -> CycNum {
        assert!(m % self.n == 0, "embedding target must be a multiple of the conductor");
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as i64;
        let mut counts = vec![Rational::zero(); m as usize];
        for (i, x) in self.c.iter().enumerate() {
            counts[(i as i64 * step) as usize % m as usize] += x;
        }
        CycNum::from_exponent_counts(m, &counts)
    }

    /// Both operands in `Q(zeta_lcm)`.
    pub fn unify(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let m = lcm(a.n, b.n);
        (a.embed(m), b.embed(m))
    }

    pub fn add_ref(&self, other: &CycNum) -> CycNum {
        if self.n != other.n {
            let (a, b) = CycNum::unify(self, other);
            return a.add_ref(&b);
        }
        CycNum { n: self.n, c: self.c.iter().zip(&other.c).map(|(x, y)| x + y).collect() }
    }

    pub fn sub_ref(&self, other: &CycNum) -> CycNum {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> CycNum {
        CycNum { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, q: &Rational) -> CycNum {
        CycNum { n: self.n, c: self.c.iter().map(|x| x * q).collect() }
    }

    pub fn mul_ref(&self, other: &CycNum) -> CycNum {
        if self.n != other.n {
            let (a, b) = CycNum::unify(self, other);
            return a.mul_ref(&b);
        }
        let phi = self.c.len();
        if phi == 1 {
            return CycNum { n: self.n, c: vec![&self.c[0] * &other.c[0]] };
        }
        let mut raw = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let b = basis(self.n);
        let mut out: Vec<Rational> = raw[..phi].to_vec();
        for (k, r) in raw.iter().enumerate().skip(phi) {
            if r.is_zero() {
                continue;
            }
            for (i, x) in b.powers[k % self.n as usize].iter().enumerate() {
                if *x != 0 {
                    out[i] += r * Rational::from_integer(BigInt::from(*x));
                }
            }
        }
        CycNum { n: self.n, c: out }
    }

    /// Integer power; negative exponents need an invertible element.
    pub fn pow(&self, e: i64) -> CycNum {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut out = CycNum::one(self.n);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul_ref(&sq);
            }
            sq = sq.mul_ref(&sq);
            k >>= 1;
        }
        out
    }

    /// The Galois automorphism `zeta_n -> zeta_n^k`, `k` coprime to `n`.
    pub fn galois(&self, k: i64) -> CycNum {
        assert!(gcd(k.rem_euclid(self.n as i64) as u64, self.n) == 1 || self.n == 1);
        let mut counts = vec![Rational::zero(); self.n as usize];
        for (i, x) in self.c.iter().enumerate() {
            counts[(i as i64 * k).rem_euclid(self.n as i64) as usize] += x;
        }
        CycNum::from_exponent_counts(self.n, &counts)
    }

    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let mut p = CycNum::one(self.n);
        for k in units_mod(self.n) {
            p = p.mul_ref(&self.galois(k as i64));
        }
        p.to_rational().expect("norm is rational")
    }

    pub fn inv(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        let mut others = CycNum::one(self.n);
        for k in units_mod(self.n) {
            if k != 1 {
                others = others.mul_ref(&self.galois(k as i64));
            }
        }
        let nm = self.mul_ref(&others).to_rational().expect("norm is rational");
        Some(others.scale(&(Rational::one() / nm)))
    }

    /// Same element written over the smallest conductor that contains it.
    pub fn minimal(&self) -> CycNum {
        for m in divisors(self.n) {
            if m == self.n {
                break;
            }
            let fixed =
                units_mod(self.n).into_iter().filter(|k| k % m == 1 % m).all(|k| self.galois(k as i64) == *self);
            if fixed {
                if let Some(y) = self.solve_in_subfield(m) {
                    return y;
                }
            }
        }
        self.clone()
    }

    fn solve_in_subfield(&self, m: u64) -> Option<CycNum> {
        let pm = euler_phi(m) as usize;
        let cols: Vec<CycNum> = (0..pm).map(|i| CycNum::zeta(m, i as i64).embed(self.n)).collect();
        let rows = self.c.len();
        // augmented system rows x (pm + 1)
        let mut a: Vec<Vec<Rational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c.c[r].clone()).collect();
                row.push(self.c[r].clone());
                row
            })
            .collect();
        let mut piv_cols = Vec::new();
        let mut r = 0;
        for col in 0..pm {
            let Some(p) = (r..rows).find(|i| !a[*i][col].is_zero()) else { continue };
            a.swap(r, p);
            let inv = Rational::one() / a[r][col].clone();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..=pm {
                        let v = &a[r][j] * &f;
                        a[i][j] -= v;
                    }
                }
            }
            piv_cols.push(col);
            r += 1;
        }
        if a[r..].iter().any(|row| !row[pm].is_zero()) {
            return None;
        }
        let mut y = vec![Rational::zero(); pm];
        for (i, col) in piv_cols.iter().enumerate() {
            y[*col] = a[i][pm].clone();
        }
        let out = CycNum { n: m, c: y };
        (out.embed(self.n) == *self).then_some(out)
    }

    /// Floating-point value, for diagnostics only.
    pub fn eval_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, x) in self.c.iter().enumerate() {
            let v = x.to_f64().unwrap_or(f64::NAN);
            let t = 2.0 * std::f64::consts::PI * i as f64 / self.n as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }

    /// If this element is a root of unity, which one.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let n = if self.n % 2 == 1 { 2 * self.n } else { self.n };
        let me = self.embed(n);
        (0..n).find(|k| CycNum::zeta(n, *k as i64) == me).map(|k| RootOfUnity::new(k as i64, n))
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            self.c == other.c
        } else {
            let (a, b) = CycNum::unify(self, other);
            a.c == b.c
        }
    }
}

impl Eq for CycNum {}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$inner(rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let neg = x.is_negative();
            let mag = x.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mag_s = render_rational(&mag);
            match i {
                0 => write!(f, "{mag_s}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_s}*")?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.n)?;
                    } else {
                        write!(f, "z{}^{}", self.n, i)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumWire {
    conductor: u64,
    coefficients: Vec<String>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycNumWire { conductor: self.n, coefficients: self.c.iter().map(render_rational).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = CycNumWire::deserialize(d)?;
        if w.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let coeffs = w
            .coefficients
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let phi = euler_phi(w.conductor) as usize;
        CycNum::from_coeffs(w.conductor, coeffs)
            .ok_or_else(|| D::Error::custom(format!("conductor {} needs {} coefficients", w.conductor, phi)))
    }
}

#[cfg(test)]
mod tests {
    use super::super::rational::{rat, rat_frac};
    use super::*;

    fn u7() -> CycNum {
        CycNum::zeta(7, 1) + CycNum::zeta(7, 2) + CycNum::zeta(7, 4)
    }

    #[test]
    fn u7_norm_is_two() {
        assert_eq!(u7().mul_ref(&u7().conj()), CycNum::from_int(2));
        // minimal polynomial X^2 + X + 2
        let s = u7();
        assert!((&(&s * &s) + &s + CycNum::from_int(2)).is_zero());
    }

    #[test]
    fn zeta6_squared_reduces_to_zeta3() {
        let z = CycNum::zeta(6, 1);
        let sq = (&z * &z).minimal();
        assert_eq!(sq.conductor(), 3);
        assert_eq!(sq.coefficients(), CycNum::zeta(3, 1).coefficients());
    }

    #[test]
    fn u16_square() {
        let u = CycNum::zeta(16, 1) + CycNum::zeta(16, 3) + CycNum::zeta(16, 5) + CycNum::zeta(16, 7);
        let sqrt2 = CycNum::zeta(8, 1) + CycNum::zeta(8, 7);
        assert_eq!(&sqrt2 * &sqrt2, CycNum::from_int(2));
        let target = -(CycNum::from_int(4) + sqrt2.scale(&rat(2)));
        assert_eq!(&u * &u, target);
    }

    #[test]
    fn inverse_and_minimal() {
        let x = CycNum::zeta(12, 1) + CycNum::from_rational(rat_frac(1, 3));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(CycNum::zeta(4, 2).minimal().to_rational(), Some(rat(-1)));
        let j = CycNum::zeta(3, 1).embed(12);
        assert_eq!(j.minimal().conductor(), 3);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(RootOfUnity::new(2, 6), RootOfUnity::new(1, 3));
        assert_eq!(RootOfUnity::new(6, 6).order(), 1);
        assert_eq!(CycNum::zeta(6, 2).as_root_of_unity(), Some(RootOfUnity::new(1, 3)));
        assert_eq!(CycNum::from_int(-1).as_root_of_unity(), Some(RootOfUnity::new(1, 2)));
    }

    #[test]
    fn serde_roundtrip() {
        let x = CycNum::zeta(5, 3).scale(&rat_frac(-2, 7));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"conductor\":5"));
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycNum>(r#"{"conductor":5,"coefficients":["1"]}"#).is_err());
    }
}
