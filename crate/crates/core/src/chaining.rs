//! Chaining linear orders: the test, enumeration of all of them, the
//! classification of the resulting set and transport along isomorphisms.
//!
//! An order `X` chains `Y` when every partial bijection preserving `X` preserves
//! every relation of `Y`. Two tuples are mapped onto each other by such a
//! partial bijection exactly when they have the same order pattern (the map
//! sending the values of one tuple to the values of the other, in order, is
//! order preserving and well defined precisely then). So `X` chains `Y` iff
//! membership in each relation is constant on every pattern class.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso::Bijection;
use crate::order::{pattern_unchecked, LinearOrder, Pattern};
use crate::structure::Structure;

/// Default size cap for [`enumerate_chaining_orders`].
pub const DEFAULT_CHAIN_CAP: usize = 9;

/// Two tuples of one pattern on which a relation disagrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternConflict {
    pub symbol: String,
    pub pattern: Pattern,
    pub member: Vec<usize>,
    pub non_member: Vec<usize>,
}

impl From<PatternConflict> for Error {
    fn from(c: PatternConflict) -> Error {
        Error::MixedPattern {
            symbol: c.symbol,
            pattern: c.pattern.0,
            member: c.member,
            non_member: c.non_member,
        }
    }
}

fn check_size(y: &Structure, x: &LinearOrder) -> Result<()> {
    if y.size() != x.len() {
        return Err(Error::InvalidOrder(format!(
            "order on {} elements for a structure of size {}",
            x.len(),
            y.size()
        )));
    }
    Ok(())
}

/// Membership of each pattern class, with the first tuple seen in it.
pub(crate) type PatternTable = HashMap<Pattern, (bool, Vec<usize>)>;

/// Accepted and rejected pattern classes of every relation under `x`, or
/// the first conflict in symbol order and lexicographic tuple order.
pub(crate) fn pattern_tables(y: &Structure, x: &LinearOrder) -> std::result::Result<Vec<PatternTable>, PatternConflict> {
    let n = y.size();
    let mut tables = Vec::with_capacity(y.signature().len());
    for (sym, s) in y.signature().symbols().iter().enumerate() {
        let mut table: HashMap<Pattern, (bool, Vec<usize>)> = HashMap::new();
        for t in (0..s.arity).map(|_| 0..n).multi_cartesian_product() {
            let member = y.contains(sym, &t);
            let p = pattern_unchecked(&t, |e| x.position(e));
            match table.get(&p) {
                Some((m, first)) if *m != member => {
                    let (member, non_member) = if *m { (first.clone(), t) } else { (t, first.clone()) };
                    return Err(PatternConflict {
                        symbol: s.name.clone(),
                        pattern: p,
                        member,
                        non_member,
                    });
                }
                Some(_) => {}
                None => {
                    table.insert(p, (member, t));
                }
            }
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Whether `x` chains `y`, with a conflicting pair of tuples when it does not.
pub fn chains(y: &Structure, x: &LinearOrder) -> Result<std::result::Result<(), PatternConflict>> {
    check_size(y, x)?;
    Ok(pattern_tables(y, x).map(|_| ()))
}

/// Shorthand for `chains(..)?.is_ok()`.
pub fn is_chaining(y: &Structure, x: &LinearOrder) -> Result<bool> {
    Ok(chains(y, x)?.is_ok())
}

/// The set of chaining orders of a structure, sorted lexicographically by
/// ascending enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSet {
    pub size: usize,
    pub orders: Vec<LinearOrder>,
}

impl ChainSet {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn contains(&self, x: &LinearOrder) -> bool {
        self.orders.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &LinearOrder> {
        self.orders.iter()
    }
}

pub fn enumerate_chaining_orders(y: &Structure) -> Result<ChainSet> {
    enumerate_chaining_orders_capped(y, DEFAULT_CHAIN_CAP)
}

/// All chaining orders, by extending prefixes of the ascending enumeration.
///
/// When the element `e` is appended, every tuple over the placed elements that
/// mentions `e` gets its final pattern. A prefix is abandoned as soon as some
/// pattern class of some relation holds a member and a non-member; such a
/// conflict persists in every extension, so no chaining order is lost.
pub fn enumerate_chaining_orders_capped(y: &Structure, cap: usize) -> Result<ChainSet> {
    let n = y.size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "structure size for chain enumeration",
            value: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(ChainSet {
            size: 0,
            orders: vec![LinearOrder::natural(0)],
        });
    }
    let parts: Vec<Vec<LinearOrder>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut search = PrefixSearch::new(y);
            if search.push(first) {
                search.run()
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut orders: Vec<LinearOrder> = parts.into_iter().flatten().collect();
    orders.sort();
    Ok(ChainSet { size: n, orders })
}

struct PrefixSearch<'a> {
    y: &'a Structure,
    placed: Vec<usize>,
    pos: Vec<usize>,
    tables: Vec<HashMap<Pattern, bool>>,
    undo: Vec<(usize, Pattern)>,
    found: Vec<LinearOrder>,
}

impl<'a> PrefixSearch<'a> {
    fn new(y: &'a Structure) -> Self {
        let n = y.size();
        PrefixSearch {
            y,
            placed: Vec::with_capacity(n),
            pos: vec![usize::MAX; n],
            tables: vec![HashMap::new(); y.signature().len()],
            undo: Vec::new(),
            found: Vec::new(),
        }
    }

    /// Places `e` above the current prefix; false (and nothing placed) on conflict.
    fn push(&mut self, e: usize) -> bool {
        let mark = self.undo.len();
        self.pos[e] = self.placed.len();
        self.placed.push(e);
        let placed = self.placed.clone();
        for sym in 0..self.y.signature().len() {
            let arity = self.y.arity(sym);
            for t in (0..arity).map(|_| placed.iter().copied()).multi_cartesian_product() {
                if !t.contains(&e) {
                    continue;
                }
                let member = self.y.contains(sym, &t);
                let p = pattern_unchecked(&t, |v| self.pos[v]);
                match self.tables[sym].get(&p) {
                    Some(&m) if m != member => {
                        self.pop(mark);
                        return false;
                    }
                    Some(_) => {}
                    None => {
                        self.tables[sym].insert(p.clone(), member);
                        self.undo.push((sym, p));
                    }
                }
            }
        }
        true
    }

    fn pop(&mut self, mark: usize) {
        for (sym, p) in self.undo.drain(mark..) {
            self.tables[sym].remove(&p);
        }
        let e = self.placed.pop().unwrap();
        self.pos[e] = usize::MAX;
    }

    fn run(mut self) -> Vec<LinearOrder> {
        self.extend();
        self.found
    }

    fn extend(&mut self) {
        let n = self.y.size();
        if self.placed.len() == n {
            self.found.push(LinearOrder::new(self.placed.clone()).expect("placed elements are distinct"));
            return;
        }
        for e in 0..n {
            if self.pos[e] != usize::MAX {
                continue;
            }
            let mark = self.undo.len();
            if self.push(e) {
                self.extend();
                self.pop(mark);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrichotomyCase {
    Constant,
    CutReversal,
    Kernel,
    NoneOfThese,
}

/// `witness = prefix + middle + suffix`, with the prefix and suffix freely permutable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelData {
    pub prefix: Vec<usize>,
    pub middle: Vec<usize>,
    pub suffix: Vec<usize>,
    /// The middle block is empty.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrichotomyReport {
    pub case: TrichotomyCase,
    pub orders: usize,
    pub witness: Option<LinearOrder>,
    pub kernel: Option<KernelData>,
}

/// `{F+I, I*+F*}` over every cut `X = I+F`.
pub fn cut_reversal_closure(x: &LinearOrder) -> BTreeSet<LinearOrder> {
    let a = x.ascending();
    let mut out = BTreeSet::new();
    for i in 0..=a.len() {
        let (init, fin) = a.split_at(i);
        let rotated: Vec<usize> = fin.iter().chain(init).copied().collect();
        let flipped: Vec<usize> = init.iter().rev().chain(fin.iter().rev()).copied().collect();
        out.insert(LinearOrder::new(rotated).unwrap());
        out.insert(LinearOrder::new(flipped).unwrap());
    }
    out
}

/// Orders `pi_K + M + pi_H` and their reverses, `pi_K`, `pi_H` ranging over all orders of the blocks.
pub fn kernel_family(prefix: &[usize], middle: &[usize], suffix: &[usize]) -> BTreeSet<LinearOrder> {
    let mut out = BTreeSet::new();
    for pk in prefix.iter().copied().permutations(prefix.len()) {
        for ph in suffix.iter().copied().permutations(suffix.len()) {
            let a: Vec<usize> = pk.iter().chain(middle).chain(&ph).copied().collect();
            let x = LinearOrder::new(a).unwrap();
            out.insert(x.reverse());
            out.insert(x);
        }
    }
    out
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Matches a chain set against the three shapes: every order, the
/// cut-and-reverse closure of one order, or a freely permutable prefix and
/// suffix around a fixed middle (with reversal). Shapes that fit nothing are
/// reported as such.
pub fn classify_chain_set(y: &Structure, l: &ChainSet) -> Result<TrichotomyReport> {
    if l.size != y.size() {
        return Err(Error::InvalidOrder(format!(
            "chain set on {} elements for a structure of size {}",
            l.size,
            y.size()
        )));
    }
    if l.is_empty() {
        return Err(Error::EmptyChainSet);
    }
    let n = l.size;
    let count = l.len();
    let mk = |case, witness, kernel| TrichotomyReport {
        case,
        orders: count,
        witness,
        kernel,
    };
    if count == factorial(n) {
        return Ok(mk(TrichotomyCase::Constant, None, None));
    }
    let members: BTreeSet<LinearOrder> = l.orders.iter().cloned().collect();
    if count <= 2 * n {
        for x in &l.orders {
            if cut_reversal_closure(x) == members {
                return Ok(mk(TrichotomyCase::CutReversal, Some(x.clone()), None));
            }
        }
    }
    let z = &l.orders[0];
    let a = z.ascending();
    for k in (0..=n).rev().filter(|&k| k != 1) {
        for h in (0..=n - k).rev().filter(|&h| h != 1) {
            let base = factorial(k) * factorial(h);
            if count < base || count > 2 * base {
                continue;
            }
            let (prefix, rest) = a.split_at(k);
            let (middle, suffix) = rest.split_at(rest.len() - h);
            if kernel_family(prefix, middle, suffix) == members {
                let mut p = prefix.to_vec();
                let mut s = suffix.to_vec();
                p.sort_unstable();
                s.sort_unstable();
                let kernel = KernelData {
                    prefix: p,
                    middle: middle.to_vec(),
                    suffix: s,
                    degenerate: middle.is_empty(),
                };
                return Ok(mk(TrichotomyCase::Kernel, Some(z.clone()), Some(kernel)));
            }
        }
    }
    Ok(mk(TrichotomyCase::NoneOfThese, None, None))
}

/// Pulls an order on the domain of `Y` back along `f: Z -> Y`.
pub fn transport_order(f: &Bijection, x: &LinearOrder) -> Result<LinearOrder> {
    if f.len() != x.len() {
        return Err(Error::InvalidBijection(format!(
            "bijection on {} elements for an order on {}",
            f.len(),
            x.len()
        )));
    }
    let inv = f.inverse();
    LinearOrder::new(x.ascending().iter().map(|&y| inv.apply(y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::parse_structure;

    fn s(text: &str) -> Structure {
        parse_structure(text).unwrap().structure
    }

    fn triangle() -> Structure {
        s("signature R/2\ndomain 3\nR: (0,1) (1,2) (2,0)\n")
    }

    fn cyclic4() -> Structure {
        s("signature S/3\ndomain 4\nS: (0,1,2) (1,2,0) (2,0,1) (0,1,3) (1,3,0) (3,0,1) (0,2,3) (2,3,0) (3,0,2) (1,2,3) (2,3,1) (3,1,2)\n")
    }

    fn naive(y: &Structure) -> Vec<LinearOrder> {
        (0..y.size())
            .permutations(y.size())
            .map(|p| LinearOrder::new(p).unwrap())
            .filter(|x| is_chaining(y, x).unwrap())
            .collect()
    }

    #[test]
    fn triangle_has_no_chaining_order() {
        let t = triangle();
        for p in (0..3).permutations(3) {
            let x = LinearOrder::new(p).unwrap();
            let c = chains(&t, &x).unwrap().unwrap_err();
            assert!(t.contains(0, &c.member) && !t.contains(0, &c.non_member));
        }
        assert!(enumerate_chaining_orders(&t).unwrap().is_empty());
    }

    #[test]
    fn empty_relations_are_chained_by_everything() {
        let y = s("signature R/2 P/1\ndomain 4\n");
        let l = enumerate_chaining_orders(&y).unwrap();
        assert_eq!(l.len(), 24);
        assert_eq!(classify_chain_set(&y, &l).unwrap().case, TrichotomyCase::Constant);
    }

    #[test]
    fn cyclic_order_on_four() {
        let y = cyclic4();
        let l = enumerate_chaining_orders(&y).unwrap();
        assert_eq!(l.orders, naive(&y));
        assert_eq!(l.len(), 8);
        let r = classify_chain_set(&y, &l).unwrap();
        assert_eq!(r.case, TrichotomyCase::CutReversal);
        assert_eq!(r.witness, Some(l.orders[0].clone()));
    }

    #[test]
    fn single_order_and_reverse_is_a_kernel() {
        let y = LinearOrder::natural(4).to_structure();
        let l = enumerate_chaining_orders(&y).unwrap();
        // `<` itself is chained only by the order it describes and its reverse
        assert_eq!(l.len(), 2);
        let r = classify_chain_set(&y, &l).unwrap();
        assert_eq!(r.case, TrichotomyCase::Kernel);
        let k = r.kernel.unwrap();
        assert!(k.prefix.is_empty() && k.suffix.is_empty() && !k.degenerate);
    }

    #[test]
    fn free_end_blocks() {
        let y = s("signature R/2\ndomain 4\n");
        let family = kernel_family(&[1, 0], &[3], &[2]);
        assert_eq!(family.len(), 4);
        let l = ChainSet {
            size: 4,
            orders: family.into_iter().collect(),
        };
        let r = classify_chain_set(&y, &l).unwrap();
        assert_eq!(r.case, TrichotomyCase::Kernel);
        let k = r.kernel.unwrap();
        // a one-element end block is the same as none
        assert_eq!((k.prefix, k.middle, k.suffix), (vec![0, 1], vec![3, 2], vec![]));
        assert!(!k.degenerate);
    }

    #[test]
    fn classification_errors() {
        let t = triangle();
        let l = enumerate_chaining_orders(&t).unwrap();
        assert_eq!(classify_chain_set(&t, &l), Err(Error::EmptyChainSet));
        let big = s("signature R/2\ndomain 10\n");
        assert!(matches!(enumerate_chaining_orders(&big), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn transport_along_relabeling() {
        let y = cyclic4();
        let f = Bijection::new(vec![2, 0, 3, 1]).unwrap();
        // z = f^{-1}(y): relabel y by f^{-1}, so f is an isomorphism z -> y
        let z = y.relabel(f.inverse().as_slice()).unwrap();
        let ly = enumerate_chaining_orders(&y).unwrap();
        let lz = enumerate_chaining_orders(&z).unwrap();
        let mut pulled: Vec<LinearOrder> = ly.iter().map(|x| transport_order(&f, x).unwrap()).collect();
        pulled.sort();
        assert_eq!(pulled, lz.orders);
        let id = Bijection::identity(4);
        assert_eq!(transport_order(&id, &ly.orders[0]).unwrap(), ly.orders[0]);
        assert!(transport_order(&Bijection::identity(3), &ly.orders[0]).is_err());
    }
}
