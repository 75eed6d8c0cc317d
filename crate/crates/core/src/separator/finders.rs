use std::collections::VecDeque;

use super::{SeparatorError, SeparatorFinder, SeparatorResult};
use crate::graph::{Skeleton, VertexId};

pub(super) const EXHAUSTIVE_MAX: usize = 60;

/// Local relabelling of a vertex subset: `local[g]` is the index of global
/// vertex `g` in `verts`, or `usize::MAX` if absent.
struct Induced<'a> {
    skel: &'a Skeleton,
    verts: &'a [VertexId],
    local: Vec<usize>,
}

impl<'a> Induced<'a> {
    fn new(skel: &'a Skeleton, verts: &'a [VertexId]) -> Self {
        let mut local = vec![usize::MAX; skel.n()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        Self { skel, verts, local }
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.skel.neighbors(self.verts[i]).iter().filter_map(|&g| {
            let l = self.local[g];
            (l != usize::MAX).then_some(l)
        })
    }

    /// Connected components among local vertices with `keep[i]`; each sorted,
    /// ordered by smallest member.
    fn components(&self, keep: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.verts.len()];
        let mut comps = Vec::new();
        for start in 0..self.verts.len() {
            if !keep[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for v in self.neighbors(u) {
                    if keep[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn globals(&self, locals: impl IntoIterator<Item = usize>) -> Vec<VertexId> {
        locals.into_iter().map(|i| self.verts[i]).collect()
    }
}

/// Names the side holding the smallest vertex `part_a`.
fn orient(mut a: Vec<VertexId>, mut b: Vec<VertexId>) -> (Vec<VertexId>, Vec<VertexId>) {
    a.sort_unstable();
    b.sort_unstable();
    match (a.first(), b.first()) {
        (Some(x), Some(y)) if y < x => (b, a),
        (None, Some(_)) => (b, a),
        _ => (a, b),
    }
}

/// Greedy largest-first packing of component sizes into two bins.
fn greedy_pack(sizes: &[usize], mut left: usize, mut right: usize) -> (Vec<bool>, usize) {
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&x, &y| sizes[y].cmp(&sizes[x]).then(x.cmp(&y)));
    let mut to_left = vec![false; sizes.len()];
    for i in order {
        if left <= right {
            left += sizes[i];
            to_left[i] = true;
        } else {
            right += sizes[i];
        }
    }
    (to_left, left.max(right))
}

pub(super) fn exhaustive(
    skel: &Skeleton,
    verts: &[VertexId],
    finder: &SeparatorFinder,
) -> Result<SeparatorResult, SeparatorError> {
    let n = verts.len();
    if n > EXHAUSTIVE_MAX {
        return Err(SeparatorError::TooLargeForExhaustive {
            n,
            max: EXHAUSTIVE_MAX,
        });
    }
    let ind = Induced::new(skel, verts);
    let adj: Vec<u64> = (0..n)
        .map(|i| ind.neighbors(i).fold(0u64, |m, j| m | 1 << j))
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let limit = finder.part_limit(n);
    let mut examined = 0u64;

    for size in 0..=n {
        // best: (max side, sep mask, side-a mask)
        let mut best: Option<(usize, u64, u64)> = None;
        let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
        loop {
            examined += 1;
            if examined > finder.exhaustive_budget {
                return Err(SeparatorError::BudgetExceeded(finder.exhaustive_budget));
            }
            let comps = mask_components(&adj, full & !mask);
            if let Some((max_side, side_a)) = best_split(&comps, limit) {
                if best.is_none_or(|(m, _, _)| max_side < m) {
                    best = Some((max_side, mask, side_a));
                }
            }
            if size == 0 || size == n {
                break;
            }
            // Gosper's hack: next mask with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            let next = (((r ^ mask) >> 2) / c) | r;
            if next > full || next.count_ones() as usize != size {
                break;
            }
            mask = next;
        }
        if let Some((_, sep, side_a)) = best {
            let rest = full & !sep;
            let bits = |m: u64| (0..n).filter(move |&i| m >> i & 1 == 1);
            let (a, b) = orient(ind.globals(bits(side_a)), ind.globals(bits(rest & !side_a)));
            return Ok(SeparatorResult::new(skel.n(), ind.globals(bits(sep)), a, b));
        }
    }
    Err(SeparatorError::NoBalancedSeparator {
        n,
        lambda: finder.lambda,
    })
}

fn mask_components(adj: &[u64], mut rest: u64) -> Vec<u64> {
    let mut comps = Vec::new();
    while rest != 0 {
        let mut comp = rest & rest.wrapping_neg();
        let mut frontier = comp;
        while frontier != 0 {
            let mut grow = 0u64;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= adj[i];
            }
            frontier = grow & rest & !comp;
            comp |= frontier;
        }
        rest &= !comp;
        comps.push(comp);
    }
    comps
}

/// Most balanced two-way grouping of components by subset-sum DP.
/// Returns the larger side's size and the mask of one side.
fn best_split(comps: &[u64], limit: usize) -> Option<(usize, u64)> {
    let sizes: Vec<usize> = comps.iter().map(|c| c.count_ones() as usize).collect();
    let total: usize = sizes.iter().sum();
    if sizes.iter().any(|&s| s > limit) {
        return None;
    }
    let mut layers: Vec<u128> = vec![1];
    for &s in &sizes {
        let prev = *layers.last().expect("non-empty");
        layers.push(prev | prev << s);
    }
    let reachable = *layers.last().expect("non-empty");
    let target = (0..=total / 2).rev().find(|&s| reachable >> s & 1 == 1)?;
    let max_side = total - target;
    if max_side > limit {
        return None;
    }
    let mut side = 0u64;
    let mut s = target;
    for k in (0..sizes.len()).rev() {
        if layers[k] >> s & 1 == 0 {
            side |= comps[k];
            s -= sizes[k];
        }
    }
    Some((max_side, side))
}

pub(super) fn grid(
    skel: &Skeleton,
    verts: &[VertexId],
    rows: usize,
    cols: usize,
) -> Result<SeparatorResult, SeparatorError> {
    if rows * cols != skel.n() {
        return Err(SeparatorError::GridShape {
            rows,
            cols,
            n: skel.n(),
        });
    }
    let coords: Vec<(usize, usize)> = verts.iter().map(|&v| (v / cols, v % cols)).collect();
    let (r0, r1) = min_max(coords.iter().map(|c| c.0));
    let (c0, c1) = min_max(coords.iter().map(|c| c.1));
    let (h, w) = (r1 - r0 + 1, c1 - c0 + 1);

    // Column-major and row-major linear orders over the bounding box. A window
    // of `stride` consecutive positions separates earlier from later positions
    // for 4-neighbour grid edges.
    let orders = [
        (h, coords.iter().map(|&(r, c)| (c - c0) * h + (r - r0)).collect::<Vec<_>>()),
        (w, coords.iter().map(|&(r, c)| (r - r0) * w + (c - c0)).collect::<Vec<_>>()),
    ];
    let span = h * w;
    let mut best: Option<((usize, usize, usize), usize, usize)> = None;
    for (oi, (stride, pos)) in orders.iter().enumerate() {
        let mut prefix = vec![0usize; span + 1];
        for &p in pos {
            prefix[p + 1] += 1;
        }
        for i in 0..span {
            prefix[i + 1] += prefix[i];
        }
        let stride = (*stride).min(span);
        for k in 0..=span - stride {
            let left = prefix[k];
            let sep = prefix[k + stride] - prefix[k];
            let right = verts.len() - left - sep;
            let key = (left.max(right), sep, oi);
            if best.is_none_or(|(b, _, _)| key < b) {
                best = Some((key, oi, k));
            }
        }
    }
    let (_, oi, k) = best.expect("non-empty vertex set");
    let (stride, pos) = &orders[oi];
    let (mut sep, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for (&v, &p) in verts.iter().zip(pos) {
        if p < k {
            a.push(v);
        } else if p < k + stride {
            sep.push(v);
        } else {
            b.push(v);
        }
    }
    let (a, b) = orient(a, b);
    Ok(SeparatorResult::new(skel.n(), sep, a, b))
}

fn min_max(it: impl Iterator<Item = usize>) -> (usize, usize) {
    it.fold((usize::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn bfs_levels_from(ind: &Induced<'_>, keep: &[bool], start: usize) -> Vec<Vec<usize>> {
    let mut level = vec![usize::MAX; keep.len()];
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([start]);
    level[start] = 0;
    while let Some(u) = queue.pop_front() {
        if levels.len() <= level[u] {
            levels.push(Vec::new());
        }
        levels[level[u]].push(u);
        for v in ind.neighbors(u) {
            if keep[v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    levels
}

pub(super) fn bfs_levels(
    skel: &Skeleton,
    verts: &[VertexId],
    finder: &SeparatorFinder,
) -> Result<SeparatorResult, SeparatorError> {
    let n = verts.len();
    let ind = Induced::new(skel, verts);
    let limit = finder.part_limit(n);
    let comps = ind.components(&vec![true; n]);
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();

    let (to_left, max_side) = greedy_pack(&sizes, 0, 0);
    if max_side <= limit {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (comp, left) in comps.iter().zip(to_left) {
            if left { &mut a } else { &mut b }.extend(ind.globals(comp.iter().copied()));
        }
        let (a, b) = orient(a, b);
        return Ok(SeparatorResult::new(skel.n(), vec![], a, b));
    }

    let big = (0..comps.len())
        .max_by(|&x, &y| sizes[x].cmp(&sizes[y]).then(y.cmp(&x)))
        .expect("at least one component");
    let mut keep = vec![false; n];
    for &v in &comps[big] {
        keep[v] = true;
    }
    // Pseudo-peripheral start: farthest vertex from the smallest member.
    let first = bfs_levels_from(&ind, &keep, comps[big][0]);
    let far = *first.last().and_then(|l| l.iter().min()).expect("non-empty");
    let levels = bfs_levels_from(&ind, &keep, far);
    let h = levels.len();
    let mut prefix = vec![0usize; h + 1];
    for (i, l) in levels.iter().enumerate() {
        prefix[i + 1] = prefix[i] + l.len();
    }
    let others: Vec<&Vec<usize>> = (0..comps.len()).filter(|&c| c != big).map(|c| &comps[c]).collect();
    let mut level_of = vec![usize::MAX; n];
    for (i, l) in levels.iter().enumerate() {
        for &v in l {
            level_of[v] = i;
        }
    }

    // Pieces left after removing levels [start, start + width): the prefix
    // (connected through the BFS root), each component beyond the window, and
    // the other components of the input.
    let pieces = |start: usize, width: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if start > 0 {
            out.push(levels[..start].concat());
        }
        let beyond: Vec<bool> = (0..n)
            .map(|v| level_of[v] != usize::MAX && level_of[v] >= start + width)
            .collect();
        out.extend(ind.components(&beyond));
        out.extend(others.iter().map(|c| (*c).clone()));
        out
    };

    // key: (separator size, larger side, start level, width)
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for width in 1..=h {
        for start in 0..=h - width {
            let sep = prefix[start + width] - prefix[start];
            if best.is_some_and(|k| sep > k.0) {
                continue;
            }
            let sizes: Vec<usize> = pieces(start, width).iter().map(Vec::len).collect();
            let (_, max_side) = greedy_pack(&sizes, 0, 0);
            if max_side > limit {
                continue;
            }
            let key = (sep, max_side, start, width);
            if best.is_none_or(|k| key < k) {
                best = Some(key);
            }
        }
    }
    let (_, _, start, width) = best.ok_or(SeparatorError::NoBalancedSeparator {
        n,
        lambda: finder.lambda,
    })?;
    let sep: Vec<VertexId> = ind.globals(levels[start..start + width].iter().flatten().copied());
    let pieces = pieces(start, width);
    let sizes: Vec<usize> = pieces.iter().map(Vec::len).collect();
    let (placement, _) = greedy_pack(&sizes, 0, 0);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (piece, left) in pieces.iter().zip(placement) {
        if left { &mut a } else { &mut b }.extend(ind.globals(piece.iter().copied()));
    }
    let (a, b) = orient(a, b);
    Ok(SeparatorResult::new(skel.n(), sep, a, b))
}
