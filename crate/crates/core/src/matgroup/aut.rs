use std::collections::VecDeque;

use num_integer::Integer;

use super::{FiniteGroup, MatgroupError};

/// Spanning tree of the Cayley graph over `gens` in BFS order: `(y, parent * |gens| + generator)`.
fn word_tree(g: &FiniteGroup, gens: &[usize]) -> Vec<(usize, usize)> {
    let n = g.order();
    let mut tree = vec![(usize::MAX, usize::MAX); n];
    tree[0] = (0, 0);
    let mut order = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (gi, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if tree[y].0 == usize::MAX {
                tree[y] = (x, gi);
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    order.iter().skip(1).map(|&y| (y, tree[y].0 * gens.len() + tree[y].1)).collect()
}

/// Extends generator images along the tree and checks that the result is a bijective homomorphism.
fn extend(g: &FiniteGroup, gens: &[usize], images: &[usize], tree: &[(usize, usize)]) -> Option<Vec<usize>> {
    let n = g.order();
    let k = gens.len();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    for &(y, code) in tree {
        let (x, gi) = (code / k, code % k);
        phi[y] = g.mul(phi[x], images[gi]);
    }
    if phi.contains(&usize::MAX) {
        return None;
    }
    let mut hit = vec![false; n];
    for &v in &phi {
        if std::mem::replace(&mut hit[v], true) {
            return None;
        }
    }
    for x in 0..n {
        for (gi, &s) in gens.iter().enumerate() {
            if phi[g.mul(x, s)] != g.mul(phi[x], images[gi]) {
                return None;
            }
        }
    }
    Some(phi)
}

fn perm_order(phi: &[usize]) -> u64 {
    let mut seen = vec![false; phi.len()];
    let mut o = 1u64;
    for s in 0..phi.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = phi[x];
            len += 1;
        }
        o = o.lcm(&len);
    }
    o
}

/// Calls `visit` on every automorphism, as an element permutation, until it returns `true`.
///
/// Images of the greedy generating set are chosen among elements of equal order and
/// class size; each partial assignment is checked on the subgroup its prefix generates.
pub fn for_each_automorphism(
    g: &FiniteGroup,
    cap: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<bool, MatgroupError> {
    if g.order() > cap {
        return Err(MatgroupError::CapExceeded(cap));
    }
    let gens = g.generating_set();
    if gens.is_empty() {
        return Ok(visit(&[0]));
    }
    let sig = |x: usize| (g.elem_order(x), g.conjugacy_classes()[g.class_of(x)].size());
    let candidates: Vec<Vec<usize>> =
        gens.iter().map(|&s| (0..g.order()).filter(|&y| sig(y) == sig(s)).collect()).collect();
    let trees: Vec<Vec<(usize, usize)>> = (1..=gens.len()).map(|k| word_tree(g, &gens[..k])).collect();
    let subgroups: Vec<Vec<usize>> = (1..=gens.len()).map(|k| g.generated(&gens[..k])).collect();
    let mut images = Vec::with_capacity(gens.len());
    search(g, &gens, &candidates, &trees, &subgroups, &mut images, &mut visit)
}

fn search(
    g: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    trees: &[Vec<(usize, usize)>],
    subgroups: &[Vec<usize>],
    images: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool, MatgroupError> {
    let k = images.len();
    if k == gens.len() {
        let tree = &trees[k - 1];
        return Ok(match extend(g, gens, images, tree) {
            Some(phi) => visit(&phi),
            None => false,
        });
    }
    for &y in &candidates[k] {
        images.push(y);
        if partial_ok(g, &gens[..=k], images, &trees[k], &subgroups[k]) {
            if search(g, gens, candidates, trees, subgroups, images, visit)? {
                return Ok(true);
            }
        }
        images.pop();
    }
    Ok(false)
}

/// The prefix map is a well-defined injective homomorphism on the subgroup it generates.
fn partial_ok(g: &FiniteGroup, gens: &[usize], images: &[usize], tree: &[(usize, usize)], sub: &[usize]) -> bool {
    let n = g.order();
    let k = gens.len();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    for &(y, code) in tree {
        let (x, gi) = (code / k, code % k);
        phi[y] = g.mul(phi[x], images[gi]);
    }
    let mut hit = vec![false; n];
    for &x in sub {
        if std::mem::replace(&mut hit[phi[x]], true) {
            return false;
        }
        for (gi, &s) in gens.iter().enumerate() {
            if phi[g.mul(x, s)] != g.mul(phi[x], images[gi]) {
                return false;
            }
        }
    }
    true
}

/// Whether `Aut(G)` has an element of order `k`, i.e. an automorphism whose order `k` divides.
pub fn has_automorphism_of_order(g: &FiniteGroup, k: u64, cap: usize) -> Result<bool, MatgroupError> {
    for_each_automorphism(g, cap, |phi| perm_order(phi) % k == 0)
}

/// `|Aut(G)|` by full enumeration.
pub fn automorphism_count(g: &FiniteGroup, cap: usize) -> Result<u64, MatgroupError> {
    let mut count = 0;
    for_each_automorphism(g, cap, |_| {
        count += 1;
        false
    })?;
    Ok(count)
}

/// Order of the automorphism given as an element permutation.
pub fn automorphism_order(phi: &[usize]) -> u64 {
    perm_order(phi)
}
