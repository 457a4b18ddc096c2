//! Oracles shared by the integration tests. None of them calls the resolver or the
//! group arithmetic they are used to check.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use adamsplit::steenrod::{adem_reduce, admissible_basis};

// ---------------------------------------------------------------------------
// dense GF(2) helpers

fn rank_u8(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) {
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] == 1 {
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// resolution of F2 over the exterior algebra on one class of degree 1

/// `dim Ext^{s,t}` of F2 over `Λ(x)`, `|x| = 1`, by a dense minimal resolution.
///
/// A free module over `Λ(x)` with generators in degrees `g` has basis `g` and `x·g`.
pub fn exterior_ext_dims(s_max: usize, t_max: i32) -> BTreeMap<(usize, i32), usize> {
    let mut dims = BTreeMap::new();
    // target: list of (generator degree) of the previous free module, or None for F2
    let mut prev_gens: Option<Vec<i32>> = None;
    // previous differential: for each generator, its image as a vector over the basis of
    // the module below in that degree; we only keep the matrices of d in each degree
    let mut prev_d: BTreeMap<i32, Vec<Vec<u8>>> = BTreeMap::new();
    for s in 0..=s_max {
        let mut gens: Vec<i32> = Vec::new();
        let mut images: Vec<Vec<u8>> = Vec::new();
        let mut d_here: BTreeMap<i32, Vec<Vec<u8>>> = BTreeMap::new();
        for t in 0..=t_max {
            // basis of the target in degree t
            let tgt_basis: Vec<(usize, bool)> = match &prev_gens {
                None => {
                    if t == 0 {
                        vec![(0, false)]
                    } else {
                        vec![]
                    }
                }
                Some(pg) => basis_in(pg, t),
            };
            // cycles in the target in degree t
            let cycles: Vec<Vec<u8>> = match &prev_gens {
                None => (0..tgt_basis.len())
                    .map(|i| {
                        let mut v = vec![0u8; tgt_basis.len()];
                        v[i] = 1;
                        v
                    })
                    .collect(),
                Some(_) => kernel_u8(prev_d.get(&t).cloned().unwrap_or_default(), tgt_basis.len()),
            };
            // images of existing generators times x or 1 in degree t
            let mut rows: Vec<Vec<u8>> = Vec::new();
            for (g, &deg) in gens.iter().enumerate() {
                if deg == t {
                    rows.push(images[g].clone());
                } else if deg + 1 == t {
                    rows.push(times_x(&prev_gens, deg, &images[g], &tgt_basis));
                }
            }
            let mut r = rank_u8(&rows);
            for z in cycles {
                let mut trial = rows.clone();
                trial.push(z.clone());
                let r2 = rank_u8(&trial);
                if r2 > r {
                    gens.push(t);
                    images.push(z.clone());
                    rows = trial;
                    r = r2;
                }
            }
            d_here.insert(t, rows);
        }
        for &g in &gens {
            *dims.entry((s, g)).or_insert(0) += 1;
        }
        prev_gens = Some(gens);
        prev_d = d_here;
    }
    dims
}

/// Basis of a free `Λ(x)` module in degree `t`: `(generator, has_x)`.
fn basis_in(gens: &[i32], t: i32) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for (g, &d) in gens.iter().enumerate() {
        if d == t {
            out.push((g, false));
        } else if d + 1 == t {
            out.push((g, true));
        }
    }
    out
}

fn times_x(prev_gens: &Option<Vec<i32>>, deg: i32, v: &[u8], tgt_basis: &[(usize, bool)]) -> Vec<u8> {
    let mut out = vec![0u8; tgt_basis.len()];
    let Some(pg) = prev_gens else {
        return out;
    };
    let src_basis = basis_in(pg, deg);
    for (i, &(g, has_x)) in src_basis.iter().enumerate() {
        if v[i] == 1 && !has_x {
            let j = tgt_basis.iter().position(|&b| b == (g, true)).unwrap();
            out[j] ^= 1;
        }
    }
    out
}

/// Left kernel of the row matrix `rows` (rows are images of basis vectors).
fn kernel_u8(rows: Vec<Vec<u8>>, n: usize) -> Vec<Vec<u8>> {
    let cols = rows.first().map_or(0, |r| r.len());
    // augment each row with an identity block and eliminate on the image part
    let mut m: Vec<Vec<u8>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            let mut id = vec![0u8; n];
            id[i] = 1;
            r.extend(id);
            r
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) {
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] == 1 {
                    let pivot = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
    }
    m[rank..].iter().map(|r| r[cols..].to_vec()).collect()
}

// ---------------------------------------------------------------------------
// Steenrod algebra oracles

/// Number of partitions of `d` into parts `2^i - 1`, which is `dim A_d`.
pub fn dim_a_by_partitions(d: usize) -> usize {
    let mut ways = vec![0usize; d + 1];
    ways[0] = 1;
    let mut part = 1;
    while part <= d {
        for x in part..=d {
            ways[x] += ways[x - part];
        }
        part = 2 * part + 1;
    }
    ways[d]
}

/// Degrees `1..=max` in which `A` has indecomposables, computed as `dim A_d` minus the
/// rank of all products of positive-degree basis elements.
pub fn indecomposable_degrees(max: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for d in 1..=max {
        let basis = admissible_basis(d);
        let index: BTreeMap<Vec<u32>, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.exponents().to_vec(), i))
            .collect();
        let mut rows = Vec::new();
        for i in 1..d {
            for a in admissible_basis(i) {
                for b in admissible_basis(d - i) {
                    let mut word = a.exponents().to_vec();
                    word.extend_from_slice(b.exponents());
                    let mut row = vec![0u8; basis.len()];
                    for term in adem_reduce(&word).terms() {
                        row[index[term.exponents()]] ^= 1;
                    }
                    rows.push(row);
                }
            }
        }
        if rank_u8(&rows) < basis.len() {
            out.push(d);
        }
    }
    out
}

pub type Poly = BTreeSet<Vec<u32>>;

fn binom2(n: u32, k: u32) -> bool {
    k <= n && (k & !n) == 0
}

/// `Sq^i` on a polynomial in `F2[x_1, …, x_k]` with `|x_j| = 1`, by the Cartan formula.
pub fn sq_poly(i: u32, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for mono in p {
        let mut partial: Vec<(Vec<u32>, u32)> = vec![(Vec::new(), 0)];
        for &a in mono {
            let mut next = Vec::new();
            for (m, used) in &partial {
                for j in 0..=a.min(i - used) {
                    if binom2(a, j) {
                        let mut m2 = m.clone();
                        m2.push(a + j);
                        next.push((m2, used + j));
                    }
                }
            }
            partial = next;
        }
        for (m, used) in partial {
            if used == i && !out.insert(m.clone()) {
                out.remove(&m);
            }
        }
    }
    out
}

/// Applies a word `Sq^{a_1} ⋯ Sq^{a_r}` (rightmost first).
pub fn word_on_poly(word: &[u32], p: &Poly) -> Poly {
    word.iter().rev().fold(p.clone(), |acc, &i| sq_poly(i, &acc))
}

// ---------------------------------------------------------------------------
// integer homology of finite abelian groups via the normalized bar complex

/// All isomorphism types of abelian groups of order `n`, as lists of prime-power orders.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn partitions(e: u32, max: u32) -> Vec<Vec<u32>> {
        if e == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=e.min(max)).rev() {
            for mut rest in partitions(e - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += 1;
    }
    let mut groups: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factors {
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(e, e) {
                let mut h = g.clone();
                h.extend(part.iter().map(|&k| p.pow(k)));
                next.push(h);
            }
        }
        groups = next;
    }
    groups
}

/// Diagonal entries (absolute values, nonzero) of an integer matrix after unimodular
/// row and column operations, sorted so that each divides the next.
pub fn invariant_factors(mut a: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut top = 0;
    loop {
        // pivot with the smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize, i64)> = None;
        for r in top..rows {
            for c in top..cols {
                let v = a[r][c].abs();
                if v != 0 && best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((r, c, v));
                    if v == 1 {
                        break;
                    }
                }
            }
            if matches!(best, Some((_, _, 1))) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        a.swap(top, pr);
        for row in a.iter_mut() {
            row.swap(top, pc);
        }
        let mut clean = false;
        while !clean {
            clean = true;
            let p = a[top][top];
            for r in top + 1..rows {
                let q = a[r][top] / p;
                if q != 0 {
                    let pivot_row = a[top].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x -= q * y;
                    }
                }
                if a[r][top] != 0 {
                    clean = false;
                }
            }
            for c in top + 1..cols {
                let q = a[top][c] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        let y = row[top];
                        row[c] -= q * y;
                    }
                }
                if a[top][c] != 0 {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in the pivot row or column to the corner
                let mut best = (top, top, a[top][top].abs());
                for r in top + 1..rows {
                    let v = a[r][top].abs();
                    if v != 0 && v < best.2 {
                        best = (r, top, v);
                    }
                }
                for c in top + 1..cols {
                    let v = a[top][c].abs();
                    if v != 0 && v < best.2 {
                        best = (top, c, v);
                    }
                }
                a.swap(top, best.0);
                for row in a.iter_mut() {
                    row.swap(top, best.1);
                }
            }
        }
        out.push(a[top][top].abs());
        top += 1;
        if top >= rows || top >= cols {
            break;
        }
    }
    // normalize to a divisibility chain
    let mut primes: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    for &d in &out {
        let mut m = d;
        let mut p = 2;
        while m > 1 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                primes.entry(p).or_default().push(e);
            }
            p += 1;
        }
    }
    let ones = out.iter().filter(|&&d| d == 1).count();
    let mut chain = vec![1i64; out.len() - ones];
    let len = chain.len();
    for (p, mut es) in primes {
        es.sort_unstable();
        for (k, e) in es.into_iter().rev().enumerate() {
            chain[len - 1 - k] *= p.pow(e);
        }
    }
    let mut all = vec![1; ones];
    all.extend(chain);
    all
}

/// `H_2(G; Z)` for `G = ⊕ Z/m_i`, returned as the multiset of prime-power orders of its
/// cyclic summands, computed from the normalized bar complex.
pub fn schur_multiplier(orders: &[u64]) -> Vec<u64> {
    let n: usize = orders.iter().product::<u64>() as usize;
    let decode = |mut x: usize| -> Vec<u64> {
        let mut out = Vec::with_capacity(orders.len());
        for &m in orders {
            out.push((x % m as usize) as u64);
            x /= m as usize;
        }
        out
    };
    let encode = |v: &[u64]| -> usize {
        let mut x = 0usize;
        for (i, &m) in orders.iter().enumerate().rev() {
            x = x * m as usize + v[i] as usize;
        }
        x
    };
    let mul = |a: usize, b: usize| -> usize {
        let (va, vb) = (decode(a), decode(b));
        let v: Vec<u64> = va
            .iter()
            .zip(&vb)
            .zip(orders)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        encode(&v)
    };
    let nz = n - 1; // non-identity elements 1..n
    let idx2 = |a: usize, b: usize| (a - 1) * nz + (b - 1);
    // d3 : C3 -> C2, rows indexed by C3 generators
    let mut d3 = vec![vec![0i64; nz * nz]; nz * nz * nz];
    for a in 1..n {
        for b in 1..n {
            for c in 1..n {
                let row = &mut d3[((a - 1) * nz + (b - 1)) * nz + (c - 1)];
                let mut add = |x: usize, y: usize, s: i64| {
                    if x != 0 && y != 0 {
                        row[idx2(x, y)] += s;
                    }
                };
                add(b, c, 1);
                add(mul(a, b), c, -1);
                add(a, mul(b, c), 1);
                add(a, b, -1);
            }
        }
    }
    // d2 : C2 -> C1
    let mut d2 = vec![vec![0i64; nz]; nz * nz];
    for a in 1..n {
        for b in 1..n {
            let row = &mut d2[idx2(a, b)];
            row[b - 1] += 1;
            let ab = mul(a, b);
            if ab != 0 {
                row[ab - 1] -= 1;
            }
            row[a - 1] += 1;
        }
    }
    let f3 = invariant_factors(d3);
    let f2 = invariant_factors(d2);
    let rank3 = f3.len();
    let rank2 = f2.len();
    let free = nz * nz - rank2 - rank3;
    assert_eq!(free, 0, "H2 of a finite group is finite");
    let mut out = Vec::new();
    for d in f3.into_iter().filter(|&d| d > 1) {
        let mut m = d as u64;
        let mut p = 2;
        while m > 1 {
            let mut q = 1;
            while m.is_multiple_of(p) {
                m /= p;
                q *= p;
            }
            if q > 1 {
                out.push(q);
            }
            p += 1;
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// second implementation of the splitting-range optimizer

fn h_closed(s: i64) -> i64 {
    if s <= 0 {
        return 0;
    }
    let full = s / 8;
    let r = s % 8;
    4 * full + [0, 1, 2, 2, 3, 3, 3, 3][r as usize]
}

/// Scans `k` from `n` down to `0` without early exit and keeps the last maximum, so the
/// reported `k` is the smallest maximizer.
pub fn optimize_scan(n: i64, star_offset: i64, ddag_offset: i64) -> (i64, i64) {
    let mut best = (i128::MIN, -1);
    for k in (0..=n).rev() {
        let star = (1i128 << h_closed(n - k + star_offset).min(120)) - 1;
        let dag = (3 * n - k) as i128;
        let ddag = (2 * (h_closed(n) - h_closed(n - k)) + 2 * n + ddag_offset) as i128;
        let m = star.min(dag).min(ddag);
        if m >= best.0 {
            best = (m, k);
        }
    }
    (best.0.min(i64::MAX as i128) as i64, best.1)
}
