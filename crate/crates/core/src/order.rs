//! Linear orders on `{0..n-1}` and order patterns of tuples.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// A linear order given by its ascending enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LinearOrder {
    ascending: Vec<usize>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ascending: Vec<usize>) -> Result<Self> {
        let n = ascending.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in ascending.iter().enumerate() {
            if x >= n || pos[x] != usize::MAX {
                return Err(Error::InvalidOrder(format!("{ascending:?} is not a permutation of 0..{n}")));
            }
            pos[x] = i;
        }
        Ok(LinearOrder { ascending, pos })
    }

    /// `0 < 1 < ... < n-1`.
    pub fn natural(n: usize) -> Self {
        LinearOrder {
            ascending: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    /// Parses `2,0,1` (commas or whitespace).
    pub fn parse(text: &str) -> Result<Self> {
        let items = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidOrder(format!("`{s}` is not an element")))
            })
            .collect::<Result<Vec<_>>>()?;
        LinearOrder::new(items)
    }

    pub fn len(&self) -> usize {
        self.ascending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ascending.is_empty()
    }

    pub fn ascending(&self) -> &[usize] {
        &self.ascending
    }

    /// Rank of `x`: the number of elements below it.
    pub fn position(&self, x: usize) -> usize {
        self.pos[x]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.pos[a] < self.pos[b]
    }

    pub fn reverse(&self) -> LinearOrder {
        let ascending: Vec<usize> = self.ascending.iter().rev().copied().collect();
        let n = ascending.len();
        LinearOrder {
            pos: self.pos.iter().map(|&p| n - 1 - p).collect(),
            ascending,
        }
    }

    /// The order as a structure over the signature `</2`.
    pub fn to_structure(&self) -> Structure {
        let n = self.len();
        let mut s = Structure::empty(Arc::new(Signature::order()), n).expect("order table fits");
        for i in 0..n {
            for j in i + 1..n {
                s.insert(0, &[self.ascending[i], self.ascending[j]]).expect("elements in range");
            }
        }
        s
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.ascending.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Equality-and-order type of a tuple: entry `j` holds the number of
/// distinct tuple values strictly below entry `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Pattern(pub Vec<u8>);

impl Pattern {
    pub fn ranks(&self) -> &[u8] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Pairs of equal positions, the equality part of the type.
    pub fn equalities(&self) -> Vec<(usize, usize)> {
        let r = &self.0;
        let mut out = Vec::new();
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                if r[i] == r[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Every pattern of the given arity realizable on a domain of `n` elements, sorted.
    pub fn all(arity: usize, n: usize) -> Vec<Pattern> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; arity];
        fill(&mut cur, 0, n.min(arity), &mut out);
        out.sort();
        out
    }
}

fn fill(cur: &mut Vec<u8>, at: usize, max_values: usize, out: &mut Vec<Pattern>) {
    if at == cur.len() {
        let mut seen: Vec<u8> = cur.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.iter().enumerate().all(|(i, &v)| v as usize == i) {
            out.push(Pattern(cur.clone()));
        }
        return;
    }
    for v in 0..max_values {
        cur[at] = v as u8;
        fill(cur, at + 1, max_values, out);
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// Rank vector of `t` under `x`.
pub fn tuple_pattern(t: &[usize], x: &LinearOrder) -> Result<Pattern> {
    if let Some(&e) = t.iter().find(|&&e| e >= x.len()) {
        return Err(Error::OutOfRange {
            element: e,
            size: x.len(),
        });
    }
    Ok(pattern_unchecked(t, |e| x.position(e)))
}

/// Rank vector of `t` given the position of each entry.
pub(crate) fn pattern_unchecked(t: &[usize], pos: impl Fn(usize) -> usize) -> Pattern {
    let p: Vec<usize> = t.iter().map(|&e| pos(e)).collect();
    let ranks = p
        .iter()
        .map(|&a| {
            let mut below: Vec<usize> = p.iter().copied().filter(|&b| b < a).collect();
            below.sort_unstable();
            below.dedup();
            below.len() as u8
        })
        .collect();
    Pattern(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_vectors() {
        let x = LinearOrder::natural(6);
        assert_eq!(tuple_pattern(&[5, 2, 5], &x).unwrap().0, vec![1, 0, 1]);
        assert_eq!(tuple_pattern(&[1, 3, 4], &x).unwrap().0, vec![0, 1, 2]);
        assert_eq!(tuple_pattern(&[2, 2, 2], &x).unwrap().0, vec![0, 0, 0]);
        assert!(tuple_pattern(&[6], &x).is_err());
        let rev = x.reverse();
        assert_eq!(tuple_pattern(&[1, 3, 4], &rev).unwrap().0, vec![2, 1, 0]);
    }

    #[test]
    fn realizable_patterns() {
        // ordered set partitions: 1, 3, 13
        assert_eq!(Pattern::all(1, 5).len(), 1);
        assert_eq!(Pattern::all(2, 5).len(), 3);
        assert_eq!(Pattern::all(3, 5).len(), 13);
        assert_eq!(Pattern::all(3, 2).len(), 7);
    }

    #[test]
    fn orders() {
        let x = LinearOrder::new(vec![2, 0, 1]).unwrap();
        assert_eq!(x.position(2), 0);
        assert!(x.less(0, 1) && !x.less(1, 2));
        assert_eq!(x.reverse().reverse(), x);
        assert_eq!(x.reverse().ascending(), &[1, 0, 2]);
        assert!(LinearOrder::new(vec![0, 0]).is_err());
        assert_eq!(LinearOrder::parse("2, 0,1").unwrap(), x);
        let s = x.to_structure();
        assert_eq!(s.tuples(0), vec![vec![0, 1], vec![2, 0], vec![2, 1]]);
    }
}
