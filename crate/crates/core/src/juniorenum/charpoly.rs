use std::fmt;

use num_integer::Integer;

use crate::cycarith::{euler_phi, units_mod, CycNum, CycPoly, QuadField, RootOfUnity};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharpolyError {
    #[error("unsupported dimension {0}; expected 3 to 6")]
    UnsupportedDimension(usize),
    #[error("order constraint must be positive")]
    ZeroOrder,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharpolyConstraints {
    pub det_one: bool,
    pub needs_eigenvalue_one: bool,
    /// Exact multiplicative order of the matrix.
    pub order: Option<u64>,
    /// Some root in this list must occur at least twice. Ignored when empty.
    pub repeated_eigenvalue_among: Vec<RootOfUnity>,
}

/// An irreducible factor of `Phi_d` over the field: the roots `zeta_d^a` for `a` in one orbit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldFactor {
    pub d: u64,
    pub exponents: Vec<u64>,
}

impl FieldFactor {
    pub fn degree(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_full_cyclotomic(&self) -> bool {
        self.degree() as u64 == euler_phi(self.d)
    }

    pub fn roots(&self) -> Vec<RootOfUnity> {
        self.exponents.iter().map(|a| RootOfUnity::new(*a as i64, self.d)).collect()
    }

    pub fn poly(&self) -> CycPoly {
        let roots: Vec<CycNum> = self.exponents.iter().map(|a| CycNum::zeta(self.d, *a as i64)).collect();
        CycPoly::from_roots(&roots)
    }
}

/// A product of field factors with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePoly {
    pub field: QuadField,
    pub factors: Vec<(FieldFactor, u32)>,
}

impl AdmissiblePoly {
    pub fn poly(&self) -> CycPoly {
        self.factors.iter().fold(CycPoly::one(), |acc, (f, m)| {
            let p = f.poly();
            (0..*m).fold(acc, |a, _| a.mul(&p))
        })
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(f, m)| f.degree() * *m as usize).sum()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().fold(1, |o, (f, _)| o.lcm(&f.d))
    }

    pub fn eigenvalues(&self) -> Vec<RootOfUnity> {
        let mut out: Vec<RootOfUnity> =
            self.factors.iter().flat_map(|(f, m)| (0..*m).flat_map(move |_| f.roots())).collect();
        out.sort();
        out
    }
}

impl fmt::Display for AdmissiblePoly {
    /// Complete sets of conjugate factors are written as `Phi_d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(String, bool, u32)> = Vec::new();
        let mut i = 0;
        while i < self.factors.len() {
            let d = self.factors[i].0.d;
            let group: Vec<&(FieldFactor, u32)> = self.factors[i..].iter().take_while(|(g, _)| g.d == d).collect();
            i += group.len();
            let covered: usize = group.iter().map(|(g, _)| g.degree()).sum();
            let k = if covered as u64 == euler_phi(d) { group.iter().map(|(_, m)| *m).min().unwrap_or(0) } else { 0 };
            if k > 0 {
                terms.push((format!("Phi_{d}"), true, k));
            }
            for (g, m) in group {
                if *m > k {
                    terms.push((g.poly().render_over(self.field), false, m - k));
                }
            }
        }
        let several = terms.len() > 1;
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(body, plain, m)| {
                let body = if !plain && (several || m > 1) { format!("({body})") } else { body };
                if m > 1 {
                    format!("{body}^{m}")
                } else {
                    body
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Irreducible factors over the field of every `Phi_d` of degree at most `max_deg`.
pub fn field_factors(field: QuadField, max_deg: usize) -> Vec<FieldFactor> {
    let c = field.conductor();
    let fix = field.fixing_subgroup();
    let mut out = Vec::new();
    // a factor has degree at least phi(d) / 2
    for d in (1..).take_while(|d| *d <= 4 * (max_deg as u64 + 1).pow(2)) {
        if euler_phi(d) > 2 * max_deg as u64 {
            continue;
        }
        let l = d.lcm(&c);
        let h: Vec<u64> = units_mod(l).into_iter().filter(|k| fix.contains(&(k % c))).collect();
        let mut left: Vec<u64> = units_mod(d).into_iter().map(|a| a % d).collect();
        while let Some(&a) = left.first() {
            let mut orbit: Vec<u64> = h.iter().map(|k| a * k % d).collect();
            orbit.sort_unstable();
            orbit.dedup();
            left.retain(|x| !orbit.contains(x));
            if orbit.len() <= max_deg {
                out.push(FieldFactor { d, exponents: orbit });
            }
        }
    }
    out.sort();
    out
}

/// Every monic degree-`m` product of field-irreducible cyclotomic factors
/// meeting the constraints.
pub fn admissible_charpolys(
    m: usize,
    field: QuadField,
    constraints: &CharpolyConstraints,
) -> Result<Vec<AdmissiblePoly>, CharpolyError> {
    if !(3..=6).contains(&m) {
        return Err(CharpolyError::UnsupportedDimension(m));
    }
    if constraints.order == Some(0) {
        return Err(CharpolyError::ZeroOrder);
    }
    let factors = field_factors(field, m);
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(factors: &[FieldFactor], start: usize, left: usize, chosen: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        if left == 0 {
            emit(chosen);
            return;
        }
        for i in start..factors.len() {
            if factors[i].degree() <= left {
                chosen.push(i);
                go(factors, i, left - factors[i].degree(), chosen, emit);
                chosen.pop();
            }
        }
    }
    let mut emit = |idx: &[usize]| {
        let mut grouped: Vec<(FieldFactor, u32)> = Vec::new();
        for i in idx {
            match grouped.last_mut() {
                Some((f, k)) if *f == factors[*i] => *k += 1,
                _ => grouped.push((factors[*i].clone(), 1)),
            }
        }
        let p = AdmissiblePoly { field, factors: grouped };
        if admits(&p, constraints) {
            out.push(p);
        }
    };
    go(&factors, 0, m, &mut chosen, &mut emit);
    Ok(out)
}

fn admits(p: &AdmissiblePoly, c: &CharpolyConstraints) -> bool {
    let eig = p.eigenvalues();
    if c.det_one {
        let det = eig.iter().fold(RootOfUnity::new(0, 1), |acc, r| acc.mul(r));
        if det.order() != 1 {
            return false;
        }
    }
    if c.needs_eigenvalue_one && !eig.iter().any(|r| r.order() == 1) {
        return false;
    }
    if c.order.is_some_and(|o| p.order() != o) {
        return false;
    }
    if !c.repeated_eigenvalue_among.is_empty()
        && !c.repeated_eigenvalue_among.iter().any(|r| eig.iter().filter(|x| *x == r).count() >= 2)
    {
        return false;
    }
    true
}
