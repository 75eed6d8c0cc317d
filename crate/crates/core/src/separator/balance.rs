use super::{SeparatorError, SeparatorFinder, SeparatorResult};
use crate::graph::{Skeleton, VertexId, VertexSubset};

/// Loop state `(A_i, B_i, C_i, D_i)` of the rebalancing procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceStep {
    pub a: VertexSubset,
    pub b: VertexSubset,
    pub c: VertexSubset,
    pub d: VertexSubset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceOutcome {
    /// Final `(C, A, B)` with `|A| <= |B|`.
    pub separator: SeparatorResult,
    /// States from the initial `A = B = C = {}`, `D = verts` to the final `D = {}`.
    pub steps: Vec<BalanceStep>,
}

/// Turns a ratio-`lambda` separator finder into a separator whose parts hold
/// at most half of `verts` each, by repeatedly splitting the leftover set `D`
/// and appending the smaller half to the lighter side.
pub fn balance_to_half(
    skel: &Skeleton,
    verts: &[VertexId],
    finder: &SeparatorFinder,
) -> Result<BalanceOutcome, SeparatorError> {
    let n = skel.n();
    let subset = |v: &[VertexId]| VertexSubset::new(v.iter().copied(), n).expect("vertex in range");
    let mut d: Vec<VertexId> = verts.to_vec();
    d.sort_unstable();
    d.dedup();
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    let mut steps = vec![BalanceStep {
        a: subset(&a),
        b: subset(&b),
        c: subset(&c),
        d: subset(&d),
    }];

    while !d.is_empty() {
        let split = finder.find(skel, &d)?;
        let (small, large) = if split.part_a.len() <= split.part_b.len() {
            (split.part_a, split.part_b)
        } else {
            (split.part_b, split.part_a)
        };
        if large.len() >= d.len() {
            return Err(SeparatorError::NoProgress(d.len()));
        }
        let mut x = a;
        x.extend(small.iter());
        x.sort_unstable();
        if x.len() <= b.len() {
            a = x;
        } else {
            a = std::mem::replace(&mut b, x);
        }
        c.extend(split.sep.iter());
        c.sort_unstable();
        d = large.into_vec();
        steps.push(BalanceStep {
            a: subset(&a),
            b: subset(&b),
            c: subset(&c),
            d: subset(&d),
        });
    }
    Ok(BalanceOutcome {
        separator: SeparatorResult::new(n, c, a, b),
        steps,
    })
}

/// Moves separator vertices that touch only one side into that side, and
/// separator vertices touching neither side into the smaller part (ties to
/// `part_a`). Afterwards every separator vertex has neighbours in both parts.
pub fn make_doubly_incident(skel: &Skeleton, split: &SeparatorResult) -> SeparatorResult {
    let n = skel.n();
    // 0 = separator, 1 = A, 2 = B, 3 = elsewhere
    let mut side = vec![3u8; n];
    for v in split.sep.iter() {
        side[v] = 0;
    }
    for v in split.part_a.iter() {
        side[v] = 1;
    }
    for v in split.part_b.iter() {
        side[v] = 2;
    }
    let mut sep: Vec<VertexId> = split.sep.as_slice().to_vec();
    let (mut size_a, mut size_b) = (split.part_a.len(), split.part_b.len());
    let touches = |side: &[u8], v: VertexId| {
        let nb = skel.neighbors(v);
        (nb.iter().any(|&u| side[u] == 1), nb.iter().any(|&u| side[u] == 2))
    };

    loop {
        let mut moved = false;
        for &v in &sep {
            match touches(&side, v) {
                (true, false) => {
                    side[v] = 1;
                    size_a += 1;
                    moved = true;
                }
                (false, true) => {
                    side[v] = 2;
                    size_b += 1;
                    moved = true;
                }
                _ => {}
            }
        }
        if !moved {
            let isolated = sep.iter().copied().find(|&v| touches(&side, v) == (false, false));
            match isolated {
                Some(v) if size_a <= size_b => {
                    side[v] = 1;
                    size_a += 1;
                }
                Some(v) => {
                    side[v] = 2;
                    size_b += 1;
                }
                None => break,
            }
        }
        sep.retain(|&v| side[v] == 0);
    }

    let collect = |s: u8| {
        split
            .sep
            .iter()
            .chain(split.part_a.iter())
            .chain(split.part_b.iter())
            .filter(|&v| side[v] == s)
            .collect::<Vec<_>>()
    };
    SeparatorResult::new(n, collect(0), collect(1), collect(2))
}

#[cfg(test)]
mod tests {
    use super::super::SeparatorStrategy;
    use super::*;

    fn finder() -> SeparatorFinder {
        SeparatorFinder::new(SeparatorStrategy::Exhaustive, 2.0 / 3.0).unwrap()
    }

    #[test]
    fn p4_balances_to_two_each() {
        let p4 = Skeleton::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let out = balance_to_half(&p4, &[0, 1, 2, 3], &finder()).unwrap();
        let s = &out.separator;
        assert!(s.part_a.len() <= 2 && s.part_b.len() <= 2);
        assert!(s.part_a.len() <= s.part_b.len());
        assert!(s.is_separator_of(&p4, &[0, 1, 2, 3]));
    }

    #[test]
    fn initial_state_is_everything_undecided() {
        let p4 = Skeleton::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let out = balance_to_half(&p4, &[0, 1, 2, 3], &finder()).unwrap();
        let first = &out.steps[0];
        assert!(first.a.is_empty() && first.b.is_empty() && first.c.is_empty());
        assert_eq!(first.d.as_slice(), &[0, 1, 2, 3]);
        assert!(out.steps.last().unwrap().d.is_empty());
    }

    #[test]
    fn single_vertex_goes_to_separator() {
        let one = Skeleton::from_edges(1, []).unwrap();
        let out = balance_to_half(&one, &[0], &finder()).unwrap();
        assert_eq!(out.separator.sep.as_slice(), &[0]);
        assert!(out.separator.part_a.is_empty() && out.separator.part_b.is_empty());
    }

    #[test]
    fn star_centre_stays() {
        let star = Skeleton::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let split = SeparatorResult::new(5, vec![0], vec![1, 2], vec![3, 4]);
        assert_eq!(make_doubly_incident(&star, &split), split);
    }

    #[test]
    fn one_sided_vertex_moves() {
        // 0-1-2 with 3 hanging off 0; sep {1, 3}: 3 touches only A
        let skel = Skeleton::from_edges(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let split = SeparatorResult::new(4, vec![1, 3], vec![0], vec![2]);
        let out = make_doubly_incident(&skel, &split);
        assert_eq!(out.sep.as_slice(), &[1]);
        assert_eq!(out.part_a.as_slice(), &[0, 3]);
        assert_eq!(out.part_b.as_slice(), &[2]);
    }

    #[test]
    fn isolated_vertex_goes_to_smaller_part() {
        let skel = Skeleton::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        let split = SeparatorResult::new(5, vec![2], vec![0, 1], vec![3]);
        let out = make_doubly_incident(&skel, &split);
        assert!(out.sep.is_empty());
        assert_eq!(out.part_b.as_slice(), &[2, 3]);
        let tie = SeparatorResult::new(5, vec![2], vec![0, 1], vec![3, 4]);
        let out = make_doubly_incident(&skel, &tie);
        assert_eq!(out.part_a.as_slice(), &[0, 1, 2]);
    }
}
