use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cycnum::CycNum;
use super::intpoly::IntPoly;
use super::lcm;
use super::rational::{render_rational, Rational};

/// Polynomial with coefficients in one cyclotomic field, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycPoly {
    n: u64,
    coeffs: Vec<CycNum>,
}

impl CycPoly {
    /// Coefficients are embedded into the lcm of their conductors.
    pub fn new(coeffs: Vec<CycNum>) -> Self {
        let n = coeffs.iter().fold(1, |m, c| lcm(m, c.conductor()));
        let mut p = CycPoly { n, coeffs: coeffs.iter().map(|c| c.embed(n)).collect() };
        p.trim();
        p
    }

    pub fn one() -> Self {
        CycPoly::new(vec![CycNum::from_int(1)])
    }

    /// `X - r`.
    pub fn linear(r: &CycNum) -> Self {
        CycPoly::new(vec![-r.clone(), CycNum::one(r.conductor())])
    }

    /// `prod (X - r)` over the given roots.
    pub fn from_roots(roots: &[CycNum]) -> Self {
        roots.iter().fold(CycPoly::one(), |acc, r| acc.mul(&CycPoly::linear(r)))
    }

    pub fn from_int_poly(p: &IntPoly) -> Self {
        CycPoly::new(p.coeffs().iter().map(|c| CycNum::from_rational(Rational::from_integer(c.clone()))).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    fn embed(&self, m: u64) -> CycPoly {
        CycPoly { n: m, coeffs: self.coeffs.iter().map(|c| c.embed(m)).collect() }
    }

    pub fn mul(&self, other: &CycPoly) -> CycPoly {
        let m = lcm(self.n, other.n);
        let (a, b) = (self.embed(m), other.embed(m));
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return CycPoly { n: m, coeffs: Vec::new() };
        }
        let mut out = vec![CycNum::zero(m); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
            }
        }
        let mut p = CycPoly { n: m, coeffs: out };
        p.trim();
        p
    }

    pub fn conj(&self) -> CycPoly {
        CycPoly { n: self.n, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero(lcm(self.n, x.conductor()));
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Synthetic division by `X - r`: `(quotient, remainder)`.
    pub fn div_linear(&self, r: &CycNum) -> (CycPoly, CycNum) {
        let m = lcm(self.n, r.conductor());
        let p = self.embed(m);
        let r = r.embed(m);
        if p.coeffs.is_empty() {
            return (p, CycNum::zero(m));
        }
        let mut q = vec![CycNum::zero(m); p.coeffs.len() - 1];
        let mut carry = CycNum::zero(m);
        for k in (0..p.coeffs.len()).rev() {
            let v = p.coeffs[k].add_ref(&carry.mul_ref(&r));
            if k == 0 {
                return (CycPoly { n: m, coeffs: q }, v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &CycNum) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        while p.degree().is_some_and(|d| d > 0) {
            let (q, rem) = p.div_linear(r);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// The integer polynomial, when every coefficient is a rational integer.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.coeffs.iter().map(|c| c.to_integer()).collect::<Option<Vec<_>>>().map(IntPoly::new)
    }

    /// Renders with coefficients written over a quadratic field.
    pub fn render_over(&self, field: QuadField) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = field.render_term(c, i);
            parts.push((neg, body));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (neg, body)) in parts.into_iter().enumerate() {
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        s
    }
}

impl fmt::Display for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})X")?,
                _ => write!(f, "({c})X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The two imaginary quadratic fields used for characteristic polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum QuadField {
    /// `Q(j)`, `j = e^{2 i pi / 3}`.
    Qj,
    /// `Q(u7)`, `u7 = zeta7 + zeta7^2 + zeta7^4 = (-1 + i sqrt 7) / 2`.
    Qu7,
}

impl QuadField {
    /// Conductor of the smallest cyclotomic field containing it.
    pub fn conductor(self) -> u64 {
        match self {
            QuadField::Qj => 3,
            QuadField::Qu7 => 7,
        }
    }

    /// Galois group of `Q(zeta_c) / K`, as residues mod the conductor `c`.
    pub fn fixing_subgroup(self) -> Vec<u64> {
        match self {
            QuadField::Qj => vec![1],
            QuadField::Qu7 => vec![1, 2, 4],
        }
    }

    pub fn generator(self) -> CycNum {
        match self {
            QuadField::Qj => CycNum::zeta(3, 1),
            QuadField::Qu7 => CycNum::zeta(7, 1) + CycNum::zeta(7, 2) + CycNum::zeta(7, 4),
        }
    }

    pub fn generator_name(self) -> &'static str {
        match self {
            QuadField::Qj => "j",
            QuadField::Qu7 => "u7",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadField::Qj => "Q(j)",
            QuadField::Qu7 => "Q(u7)",
        }
    }

    pub fn parse(s: &str) -> Option<QuadField> {
        match s {
            "Q(j)" | "Qj" | "j" => Some(QuadField::Qj),
            "Q(u7)" | "Qu7" | "u7" => Some(QuadField::Qu7),
            _ => None,
        }
    }

    /// Coordinates `(a, b)` with `x = a + b g`, if `x` lies in the field.
    pub fn coords(self, x: &CycNum) -> Option<(Rational, Rational)> {
        let g = self.generator();
        let (x, g) = CycNum::unify(x, &g);
        let idx = (1..g.coefficients().len()).find(|i| !g.coefficients()[*i].is_zero())?;
        let b = &x.coefficients()[idx] / &g.coefficients()[idx];
        let a = &x.coefficients()[0] - &b * &g.coefficients()[0];
        let back = CycNum::from_rational(a.clone()).add_ref(&g.scale(&b));
        (back == x).then_some((a, b))
    }

    /// `(is_negative, body)` for the term `c X^i`.
    fn render_term(self, c: &CycNum, i: usize) -> (bool, String) {
        let xpow = match i {
            0 => String::new(),
            1 => "X".into(),
            _ => format!("X^{i}"),
        };
        let g = self.generator_name();
        let Some((a, b)) = self.coords(c) else {
            return (false, format!("({c}){xpow}"));
        };
        let gbar = self.generator().conj();
        let gbar_name = format!("{g}bar");
        let named = if *c == self.generator() {
            Some((false, g.to_string()))
        } else if *c == -self.generator() {
            Some((true, g.to_string()))
        } else if *c == gbar {
            Some((false, gbar_name.clone()))
        } else if *c == -gbar.clone() {
            Some((true, gbar_name.clone()))
        } else {
            None
        };
        if let Some((neg, s)) = named {
            return (neg, format!("{s}{xpow}"));
        }
        if b.is_zero() {
            let neg = a.is_negative();
            let mag = a.abs();
            let body = if mag.is_one() && i > 0 { xpow } else { format!("{}{xpow}", render_rational(&mag)) };
            return (neg, body);
        }
        let inner = {
            let mut s = String::new();
            if !a.is_zero() {
                s.push_str(&render_rational(&a));
                s.push_str(if b.is_negative() { " - " } else { " + " });
                let mb = b.abs();
                if !mb.is_one() {
                    s.push_str(&render_rational(&mb));
                    s.push('*');
                }
            } else {
                if b.is_negative() {
                    s.push('-');
                }
                let mb = b.abs();
                if !mb.is_one() {
                    s.push_str(&render_rational(&mb));
                    s.push('*');
                }
            }
            s.push_str(g);
            s
        };
        (false, format!("({inner}){xpow}"))
    }
}

/// The two Gauss-period cubics whose product is `Phi_7`, in the order
/// `(X^3 - u7bar X^2 + u7 X - 1, X^3 - u7 X^2 + u7bar X - 1)`.
///
/// The first has roots `zeta7^3, zeta7^5, zeta7^6`; the second `zeta7, zeta7^2, zeta7^4`.
pub fn factor_phi7_over_qu7() -> (CycPoly, CycPoly) {
    let roots = |ks: [i64; 3]| -> Vec<CycNum> { ks.iter().map(|k| CycNum::zeta(7, *k)).collect() };
    (CycPoly::from_roots(&roots([3, 5, 6])), CycPoly::from_roots(&roots([1, 2, 4])))
}

#[cfg(test)]
mod tests {
    use super::super::intpoly::cyclotomic_poly;
    use super::*;

    #[test]
    fn phi7_split() {
        let (a, b) = factor_phi7_over_qu7();
        let u = QuadField::Qu7.generator();
        let ubar = u.conj();
        let expect_a = CycPoly::new(vec![CycNum::from_int(-1), u.clone(), -ubar.clone(), CycNum::from_int(1)]);
        let expect_b = CycPoly::new(vec![CycNum::from_int(-1), ubar, -u, CycNum::from_int(1)]);
        assert_eq!(a, expect_a);
        assert_eq!(b, expect_b);
        assert_eq!(a.mul(&b).to_int_poly().unwrap(), cyclotomic_poly(7));
        assert_eq!(b.render_over(QuadField::Qu7), "X^3 - u7X^2 + u7barX - 1");
        assert_eq!(a.render_over(QuadField::Qu7), "X^3 - u7barX^2 + u7X - 1");
        for k in 1..7 {
            let z = CycNum::zeta(7, k);
            let in_b = [1, 2, 4].contains(&k);
            assert_eq!(b.eval(&z).is_zero(), in_b);
            assert_eq!(a.eval(&z).is_zero(), !in_b);
        }
    }

    #[test]
    fn coefficients_lie_in_qu7() {
        let (a, _) = factor_phi7_over_qu7();
        for c in a.coeffs() {
            assert!(QuadField::Qu7.coords(c).is_some());
        }
        assert!(QuadField::Qu7.coords(&CycNum::zeta(7, 1)).is_none());
    }

    #[test]
    fn root_multiplicity_counts() {
        let j = CycNum::zeta(3, 1);
        let p = CycPoly::from_roots(&[j.clone(), j.clone(), CycNum::from_int(1)]);
        assert_eq!(p.root_multiplicity(&j), 2);
        assert_eq!(p.root_multiplicity(&CycNum::from_int(1)), 1);
        assert_eq!(p.root_multiplicity(&j.conj()), 0);
    }
}
