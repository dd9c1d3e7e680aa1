use std::collections::VecDeque;

use super::{CatalogEntry, CatalogError, GeneratorSpec};
use crate::matgroup::FiniteGroup;

/// Product of generators, by index, left to right. The empty word is the identity.
pub type Word = Vec<usize>;

fn eval(g: &FiniteGroup, gens: &[usize], w: &[usize]) -> Result<usize, CatalogError> {
    w.iter().try_fold(0, |acc, &i| {
        gens.get(i)
            .map(|&s| g.mul(acc, s))
            .ok_or_else(|| CatalogError::InvalidAction(format!("generator index {i} out of range")))
    })
}

/// Extends generator images to a map on the whole group; `None` unless it is a homomorphism.
fn extend(
    g: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
    mut target_mul: impl FnMut(usize, usize) -> usize,
    target_identity: usize,
) -> Option<Vec<usize>> {
    let n = g.order();
    let mut phi = vec![usize::MAX; n];
    phi[0] = target_identity;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (s, img) in gens.iter().zip(images) {
            let y = g.mul(x, *s);
            let v = target_mul(phi[x], *img);
            if phi[y] == usize::MAX {
                phi[y] = v;
                queue.push_back(y);
            } else if phi[y] != v {
                return None;
            }
        }
    }
    Some(phi)
}

/// Left-regular permutations of the given elements.
fn regular_perms(g: &FiniteGroup, elems: &[usize]) -> Vec<Vec<usize>> {
    elems.iter().map(|&x| (0..g.order()).map(|y| g.mul(x, y)).collect()).collect()
}

fn entry(name: String, order: u64, perms: Vec<Vec<usize>>) -> CatalogEntry {
    CatalogEntry { name, generators: GeneratorSpec::Perm(perms), expected_order: Some(order), tags: vec![] }
}

fn perm_generators(e: &CatalogEntry, cap: usize) -> Result<Vec<Vec<usize>>, CatalogError> {
    match &e.generators {
        GeneratorSpec::Perm(ps) => Ok(ps.clone()),
        GeneratorSpec::Matrix(_) => {
            let (g, gens) = e.group_with_generators(cap)?;
            Ok(regular_perms(&g, &gens))
        }
    }
}

/// `Z_n` as an `n`-cycle; `Z_1` is the trivial permutation of one point.
pub fn cyclic(n: usize) -> CatalogEntry {
    let n = n.max(1);
    entry(format!("Z{n}"), n as u64, vec![(0..n).map(|i| (i + 1) % n).collect()])
}

/// Generators of both factors acting on disjoint point sets.
pub fn direct(a: &CatalogEntry, b: &CatalogEntry, cap: usize) -> Result<CatalogEntry, CatalogError> {
    let pa = perm_generators(a, cap)?;
    let pb = perm_generators(b, cap)?;
    let (da, db) = (pa[0].len(), pb[0].len());
    let mut gens: Vec<Vec<usize>> = pa.iter().map(|p| p.iter().copied().chain(da..da + db).collect()).collect();
    gens.extend(pb.iter().map(|p| (0..da).chain(p.iter().map(|x| x + da)).collect()));
    let order = (a.group(cap)?.order() * b.group(cap)?.order()) as u64;
    Ok(entry(format!("{}x{}", a.name, b.name), order, gens))
}

/// `A ⋊ B`, where `action[i]` lists the images of `A`'s generators, as words, under `B`'s
/// generator `i`. The images must define automorphisms and the assignment a homomorphism
/// `B -> Aut(A)`. Elements are pairs `(x, y)` with `(x1, y1)(x2, y2) = (x1 y1(x2), y1 y2)`.
pub fn semidirect(
    a: &CatalogEntry,
    b: &CatalogEntry,
    action: &[Vec<Word>],
    cap: usize,
) -> Result<CatalogEntry, CatalogError> {
    let (ga, sa) = a.group_with_generators(cap)?;
    let (gb, sb) = b.group_with_generators(cap)?;
    if action.len() != sb.len() {
        return Err(CatalogError::InvalidAction(format!(
            "{} images for {} generators of {}",
            action.len(),
            sb.len(),
            b.name
        )));
    }
    let (na, nb) = (ga.order(), gb.order());
    if na * nb > cap {
        return Err(CatalogError::InvalidAction(format!("order {} exceeds the cap {cap}", na * nb)));
    }
    let mut autos = Vec::with_capacity(sb.len());
    for (i, words) in action.iter().enumerate() {
        if words.len() != sa.len() {
            return Err(CatalogError::InvalidAction(format!(
                "generator {i} of {}: {} images for {} generators",
                b.name,
                words.len(),
                sa.len()
            )));
        }
        let images = words.iter().map(|w| eval(&ga, &sa, w)).collect::<Result<Vec<_>, _>>()?;
        let phi = extend(&ga, &sa, &images, |x, y| ga.mul(x, y), 0).ok_or_else(|| {
            CatalogError::InvalidAction(format!("generator {i} of {}: images do not define a homomorphism", b.name))
        })?;
        let mut seen = vec![false; na];
        if phi.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
            return Err(CatalogError::InvalidAction(format!("generator {i} of {}: not bijective", b.name)));
        }
        autos.push(phi);
    }
    // homomorphism B -> Aut(A), automorphisms stored as element maps of A
    let mut maps: Vec<Vec<usize>> = vec![(0..na).collect()];
    let mut index = std::collections::HashMap::from([(maps[0].clone(), 0usize)]);
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&x| p[x]).collect() };
    let hom = extend(
        &gb,
        &sb,
        &(0..autos.len()).map(|i| i + 1).collect::<Vec<_>>(),
        |m, s| {
            let c = compose(&maps[m], &autos[s - 1]);
            let next = maps.len();
            *index.entry(c.clone()).or_insert_with(|| {
                maps.push(c);
                next
            })
        },
        0,
    );
    let hom =
        hom.ok_or_else(|| CatalogError::InvalidAction(format!("the action is not a homomorphism from {}", b.name)))?;
    let n = na * nb;
    let mut table = vec![0u32; n * n];
    for x1 in 0..na {
        for y1 in 0..nb {
            let act = &maps[hom[y1]];
            for x2 in 0..na {
                let x = ga.mul(x1, act[x2]);
                for y2 in 0..nb {
                    table[(x1 * nb + y1) * n + x2 * nb + y2] = (x * nb + gb.mul(y1, y2)) as u32;
                }
            }
        }
    }
    let g = FiniteGroup::from_table(n, table).map_err(|e| CatalogError::InvalidAction(e.to_string()))?;
    let gens: Vec<usize> = sa.iter().map(|&x| x * nb).chain(sb.iter().copied()).collect();
    Ok(entry(format!("{}sd{}", a.name, b.name), n as u64, regular_perms(&g, &gens)))
}

/// Generalized quaternion group of order `2^k >= 8`: `a` of order `m = 2^(k-1)`, `b^2 = a^(m/2)`,
/// `b a b^-1 = a^-1`. Generators are `a` then `b`.
pub fn quaternion(order: usize) -> Result<CatalogEntry, CatalogError> {
    if order < 8 || !order.is_power_of_two() {
        return Err(CatalogError::InvalidAction(format!("quaternion order {order} is not a power of 2 at least 8")));
    }
    let m = order / 2;
    // element a^i b^e has index i + m e
    let mul = |x: usize, y: usize| -> usize {
        let (i, e) = (x % m, x / m);
        let (j, f) = (y % m, y / m);
        // b^e a^j = a^{(-1)^e j} b^e
        let j2 = if e == 1 { (m - j) % m } else { j };
        let mut k = (i + j2) % m;
        let mut s = e + f;
        if s == 2 {
            k = (k + m / 2) % m;
            s = 0;
        }
        k + m * s
    };
    let table: Vec<u32> = (0..order).flat_map(|x| (0..order).map(move |y| mul(x, y) as u32)).collect();
    let g = FiniteGroup::from_table(order, table).map_err(|e| CatalogError::InvalidAction(e.to_string()))?;
    Ok(entry(format!("Q{order}"), order as u64, regular_perms(&g, &[1, m])))
}

/// `SL(2, 3)` on the eight nonzero vectors of `F_3^2`.
pub fn sl23() -> CatalogEntry {
    let vecs: Vec<(usize, usize)> = (0..9).map(|c| (c % 3, c / 3)).filter(|v| *v != (0, 0)).collect();
    let act = |m: [[usize; 2]; 2]| -> Vec<usize> {
        vecs.iter()
            .map(|&(x, y)| {
                let w = ((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3);
                vecs.iter().position(|v| *v == w).expect("nonzero image")
            })
            .collect()
    };
    entry("SL23".into(), 24, vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])])
}

/// `SL(3, 2)` on the seven points of the Fano plane `Z/7` with lines `{0,1,3} + t`.
pub fn sl32() -> CatalogEntry {
    let shift: Vec<usize> = (0..7).map(|x| (x + 1) % 7).collect();
    let double: Vec<usize> = (0..7).map(|x| 2 * x % 7).collect();
    let third = vec![0, 1, 4, 3, 2, 6, 5];
    entry("SL32".into(), 168, vec![shift, double, third])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_generators_preserve_lines() {
        let lines: Vec<Vec<usize>> = (0..7)
            .map(|t| {
                let mut l: Vec<usize> = [0, 1, 3].iter().map(|x| (x + t) % 7).collect();
                l.sort_unstable();
                l
            })
            .collect();
        let GeneratorSpec::Perm(ps) = sl32().generators else { unreachable!() };
        for p in ps {
            for l in &lines {
                let mut img: Vec<usize> = l.iter().map(|x| p[*x]).collect();
                img.sort_unstable();
                assert!(lines.contains(&img), "{p:?} moves {l:?}");
            }
        }
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let z7 = cyclic(7);
        let z3 = cyclic(3);
        let z2 = cyclic(2);
        // a -> a^3 has order 6, so it does not define an action of Z3
        assert!(matches!(semidirect(&z7, &z3, &[vec![vec![0, 0, 0]]], 10_000), Err(CatalogError::InvalidAction(_))));
        // a -> 1 is not injective
        assert!(matches!(semidirect(&z7, &z2, &[vec![vec![]]], 10_000), Err(CatalogError::InvalidAction(_))));
        assert!(matches!(semidirect(&z7, &z2, &[], 10_000), Err(CatalogError::InvalidAction(_))));
        assert!(quaternion(12).is_err());
    }

    #[test]
    fn quaternion_has_one_involution() {
        for n in [8, 16, 32] {
            let g = quaternion(n).unwrap().group(1000).unwrap();
            assert_eq!(g.order(), n);
            assert_eq!(g.fingerprint().involutions, 1);
            assert!(!g.is_abelian());
        }
    }
}
