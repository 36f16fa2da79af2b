//! Isomorphism search, canonical codes and ages.
//!
//! Both the isomorphism search and the canonical labelling assign domain
//! elements one at a time. After `k+1` elements are placed, the tuples whose
//! largest entry is `k` are fully determined, so they are checked (or
//! appended to the code) as one block. The blocks are precomputed per
//! `(size, arity)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{restrict_sorted, Signature, Structure};

/// Default size cap for [`canonical_code`].
pub const DEFAULT_CANON_CAP: usize = 10;

/// A bijection between two domains of equal size: `i` maps to `forward[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Bijection {
    forward: Vec<usize>,
}

impl Bijection {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut seen = vec![false; n];
        for &x in &forward {
            if x >= n || seen[x] {
                return Err(Error::InvalidBijection(format!(
                    "{forward:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Bijection { forward })
    }

    pub fn identity(n: usize) -> Self {
        Bijection {
            forward: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.forward.len()];
        for (i, &x) in self.forward.iter().enumerate() {
            inv[x] = i;
        }
        Bijection { forward: inv }
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn after(&self, first: &Bijection) -> Bijection {
        Bijection {
            forward: first.forward.iter().map(|&x| self.forward[x]).collect(),
        }
    }
}

/// Tuples over `{0..=k}` containing `k`, in lexicographic order, for every `k < n`.
pub(crate) struct Blocks {
    pub arity: usize,
    /// `blocks[k]` holds the flattened tuples of block `k`.
    pub blocks: Vec<Vec<usize>>,
}

impl Blocks {
    fn build(n: usize, arity: usize) -> Blocks {
        let mut blocks = Vec::with_capacity(n);
        for k in 0..n {
            let mut flat = Vec::new();
            for t in (0..arity).map(|_| 0..=k).multi_cartesian_product() {
                if t.contains(&k) {
                    flat.extend_from_slice(&t);
                }
            }
            blocks.push(flat);
        }
        Blocks { arity, blocks }
    }

    pub fn block(&self, k: usize) -> impl Iterator<Item = &[usize]> {
        self.blocks[k].chunks_exact(self.arity)
    }
}

thread_local! {
    static BLOCK_CACHE: RefCell<HashMap<(usize, usize), Rc<Blocks>>> = RefCell::new(HashMap::new());
}

pub(crate) fn blocks(n: usize, arity: usize) -> Rc<Blocks> {
    BLOCK_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry((n, arity))
            .or_insert_with(|| Rc::new(Blocks::build(n, arity)))
            .clone()
    })
}

fn same_signature(a: &Structure, b: &Structure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!(
            "`{}` vs `{}`",
            a.signature(),
            b.signature()
        )));
    }
    Ok(())
}

/// Per-element counts that any isomorphism must preserve: for each symbol and
/// position, how many member tuples carry the element there, plus whether the
/// constant tuple `(x,...,x)` is a member.
fn vertex_invariants(s: &Structure) -> Vec<Vec<u32>> {
    let n = s.size();
    let width: usize = s.signature().symbols().iter().map(|x| x.arity + 1).sum();
    let mut inv = vec![vec![0u32; width]; n];
    let mut offset = 0;
    for sym in 0..s.signature().len() {
        let arity = s.arity(sym);
        for idx in s.member_indices(sym) {
            let t = s.decode(idx, arity);
            for (j, &x) in t.iter().enumerate() {
                inv[x][offset + j] += 1;
            }
            if t.iter().all(|&x| x == t[0]) {
                inv[t[0]][offset + arity] += 1;
            }
        }
        offset += arity + 1;
    }
    inv
}

/// Finds the lexicographically least isomorphism from `a` onto `b`, if any.
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Result<Option<Bijection>> {
    same_signature(a, b)?;
    Ok(isomorphism_unchecked(a, b))
}

pub(crate) fn isomorphism_unchecked(a: &Structure, b: &Structure) -> Option<Bijection> {
    let n = a.size();
    if n != b.size() {
        return None;
    }
    let symbols = a.signature().len();
    if (0..symbols).any(|s| a.tuple_count(s) != b.tuple_count(s)) {
        return None;
    }
    let inv_a = vertex_invariants(a);
    let inv_b = vertex_invariants(b);
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let blocks: Vec<Rc<Blocks>> = (0..symbols).map(|s| blocks(n, a.arity(s))).collect();
    let mut search = IsoSearch {
        a,
        b,
        inv_a,
        inv_b,
        blocks,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if search.extend(0) {
        Some(Bijection { forward: search.map })
    } else {
        None
    }
}

struct IsoSearch<'a> {
    a: &'a Structure,
    b: &'a Structure,
    inv_a: Vec<Vec<u32>>,
    inv_b: Vec<Vec<u32>>,
    blocks: Vec<Rc<Blocks>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, k: usize) -> bool {
        let n = self.a.size();
        if k == n {
            return true;
        }
        for c in 0..n {
            if self.used[c] || self.inv_a[k] != self.inv_b[c] {
                continue;
            }
            self.map[k] = c;
            if self.block_consistent(k) {
                self.used[c] = true;
                if self.extend(k + 1) {
                    return true;
                }
                self.used[c] = false;
            }
        }
        self.map[k] = usize::MAX;
        false
    }

    fn block_consistent(&self, k: usize) -> bool {
        self.blocks.iter().enumerate().all(|(sym, blocks)| {
            blocks.block(k).all(|t| {
                self.a.contains_index(sym, self.a.index(t))
                    == self.b.contains_index(sym, self.b.index_mapped(t, &self.map))
            })
        })
    }
}

/// A byte string identifying a structure up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

/// Canonical code with the default size cap.
pub fn canonical_code(a: &Structure) -> Result<CanonicalCode> {
    canonical_code_capped(a, DEFAULT_CANON_CAP)
}

pub fn canonical_code_capped(a: &Structure, cap: usize) -> Result<CanonicalCode> {
    Ok(canonical_form_capped(a, cap)?.0)
}

/// The canonical code together with the canonically relabeled structure.
pub fn canonical_form(a: &Structure) -> Result<(CanonicalCode, Structure)> {
    canonical_form_capped(a, DEFAULT_CANON_CAP)
}

pub fn canonical_form_capped(a: &Structure, cap: usize) -> Result<(CanonicalCode, Structure)> {
    if a.size() > cap {
        return Err(Error::CapExceeded {
            what: "structure size for canonical code",
            value: a.size(),
            cap,
        });
    }
    let (bits, labels) = minimal_bits(a);
    let mut to_label = vec![0; a.size()];
    for (label, &v) in labels.iter().enumerate() {
        to_label[v] = label;
    }
    let canon = a.relabel(&to_label).expect("labels form a permutation");
    Ok((encode(a.signature(), a.size(), &bits), canon))
}

fn encode(sig: &Signature, n: usize, bits: &[bool]) -> CanonicalCode {
    let mut out = Vec::new();
    out.extend_from_slice(&(n as u32).to_be_bytes());
    out.push(sig.len() as u8);
    for s in sig.symbols() {
        out.push(s.arity as u8);
        out.push(s.name.len() as u8);
        out.extend_from_slice(s.name.as_bytes());
    }
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 0x80 >> i;
            }
        }
        out.push(byte);
    }
    CanonicalCode(out)
}

/// Rebuilds the canonical representative from a code produced for `sig`.
pub fn structure_from_code(sig: &Arc<Signature>, code: &CanonicalCode) -> Result<Structure> {
    let bytes = code.as_bytes();
    let bad = || Error::InvalidSpec("malformed canonical code".into());
    if bytes.len() < 5 {
        return Err(bad());
    }
    let n = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as usize;
    let header = encode(sig, n, &[]);
    if !bytes.starts_with(header.as_bytes()) {
        return Err(bad());
    }
    let payload = &bytes[header.as_bytes().len()..];
    let bit = |i: usize| payload.get(i / 8).map(|b| (b >> (7 - i % 8)) & 1 == 1);
    let mut s = Structure::empty(sig.clone(), n)?;
    let all_blocks: Vec<Rc<Blocks>> = sig.symbols().iter().map(|x| blocks(n, x.arity)).collect();
    let mut pos = 0;
    for k in 0..n {
        for (sym, b) in all_blocks.iter().enumerate() {
            for t in b.block(k) {
                if bit(pos).ok_or_else(bad)? {
                    let idx = s.index(t);
                    s.set_index(sym, idx, true);
                }
                pos += 1;
            }
        }
    }
    Ok(s)
}

/// Lexicographically minimal block-ordered bit string over all relabelings,
/// and the labelling (label -> element) that realises it.
fn minimal_bits(a: &Structure) -> (Vec<bool>, Vec<usize>) {
    let n = a.size();
    let blocks: Vec<Rc<Blocks>> = (0..a.signature().len()).map(|s| blocks(n, a.arity(s))).collect();
    let mut ends = Vec::with_capacity(n);
    let mut total = 0;
    for k in 0..n {
        total += blocks.iter().map(|b| b.blocks[k].len() / b.arity).sum::<usize>();
        ends.push(total);
    }
    // Interchangeable elements: the transposition (u w) is an automorphism.
    // Only worth computing when the factorial gets large.
    let twins = if n >= 7 {
        let mut t = vec![vec![false; n]; n];
        let mut perm: Vec<usize> = (0..n).collect();
        for u in 0..n {
            for w in u + 1..n {
                perm.swap(u, w);
                let ok = a.preserved_by(&perm);
                perm.swap(u, w);
                t[u][w] = ok;
                t[w][u] = ok;
            }
        }
        Some(t)
    } else {
        None
    };
    let mut search = CanonSearch {
        a,
        blocks,
        ends,
        twins,
        labels: Vec::with_capacity(n),
        used: vec![false; n],
        cur: Vec::with_capacity(total),
        best: None,
        best_labels: Vec::new(),
    };
    search.descend();
    (search.best.unwrap_or_default(), search.best_labels)
}

struct CanonSearch<'a> {
    a: &'a Structure,
    blocks: Vec<Rc<Blocks>>,
    ends: Vec<usize>,
    twins: Option<Vec<Vec<bool>>>,
    labels: Vec<usize>,
    used: Vec<bool>,
    cur: Vec<bool>,
    best: Option<Vec<bool>>,
    best_labels: Vec<usize>,
}

impl CanonSearch<'_> {
    fn descend(&mut self) {
        let n = self.a.size();
        let k = self.labels.len();
        if k == n {
            if self.best.as_ref().is_none_or(|b| self.cur < *b) {
                self.best = Some(self.cur.clone());
                self.best_labels = self.labels.clone();
            }
            return;
        }
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            if let Some(twins) = &self.twins {
                if tried.iter().any(|&u| twins[u][v]) {
                    continue;
                }
            }
            tried.push(v);
            self.labels.push(v);
            self.used[v] = true;
            let start = self.cur.len();
            for (sym, b) in self.blocks.iter().enumerate() {
                for t in b.block(k) {
                    let bit = self
                        .a
                        .contains_index(sym, self.a.index_mapped(t, &self.labels));
                    self.cur.push(bit);
                }
            }
            let end = self.ends[k];
            let worse = self
                .best
                .as_ref()
                .is_some_and(|b| self.cur[..end] > b[..end]);
            if !worse {
                self.descend();
            }
            self.cur.truncate(start);
            self.used[v] = false;
            self.labels.pop();
        }
    }
}

/// Isomorphism classes of `m`-element induced substructures for every `m` in `1..=k`.
pub fn age(y: &Structure, k: usize) -> Result<BTreeMap<usize, BTreeSet<CanonicalCode>>> {
    age_capped(y, k, DEFAULT_CANON_CAP)
}

pub fn age_capped(
    y: &Structure,
    k: usize,
    cap: usize,
) -> Result<BTreeMap<usize, BTreeSet<CanonicalCode>>> {
    if k == 0 || k > y.size() {
        return Err(Error::OutOfBounds(format!(
            "age depth {k} must lie in 1..={}",
            y.size()
        )));
    }
    let mut out = BTreeMap::new();
    for m in 1..=k {
        let mut classes = BTreeSet::new();
        for subset in (0..y.size()).combinations(m) {
            let sub = restrict_sorted(y, &subset);
            classes.insert(canonical_code_capped(&sub, cap)?);
        }
        out.insert(m, classes);
    }
    Ok(out)
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

    fn transitive3() -> Structure {
        s("signature R/2\ndomain 3\nR: (0,1) (0,2) (1,2)\n")
    }

    #[test]
    fn triangle_and_its_rotation_are_isomorphic() {
        let t = triangle();
        let rotated = t.relabel(&[1, 2, 0]).unwrap();
        let f = find_isomorphism(&t, &rotated).unwrap().unwrap();
        assert_eq!(t.relabel(f.as_slice()).unwrap(), rotated);
        // the rotation is an automorphism, so the least witness is the identity
        assert_eq!(f, Bijection::identity(3));
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let a = s("signature R/2\ndomain 3\nR: (0,1)\n");
        let b = s("signature R/2\ndomain 3\nR: (2,1)\n");
        let f = find_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(f.as_slice(), &[2, 1, 0]);
        assert_eq!(a.relabel(f.as_slice()).unwrap(), b);
    }

    #[test]
    fn triangle_is_not_transitive() {
        // exhaust all six bijections by hand
        let t = triangle();
        let tt = transitive3();
        let by_hand = (0..3)
            .permutations(3)
            .any(|p| t.relabel(&p).unwrap() == tt);
        assert!(!by_hand);
        assert_eq!(find_isomorphism(&t, &tt).unwrap(), None);
    }

    #[test]
    fn self_isomorphism_is_identity() {
        let t = transitive3();
        assert_eq!(find_isomorphism(&t, &t).unwrap(), Some(Bijection::identity(3)));
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = triangle();
        let b = s("signature S/2\ndomain 3\n");
        assert!(matches!(find_isomorphism(&a, &b), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn canonical_codes_separate_classes() {
        let t = triangle();
        assert_eq!(canonical_code(&t).unwrap(), canonical_code(&t.relabel(&[2, 0, 1]).unwrap()).unwrap());
        assert_ne!(canonical_code(&t).unwrap(), canonical_code(&transitive3()).unwrap());
        let p = s("signature R/2\ndomain 1\nR: (0,0)\n");
        let q = s("signature R/2\ndomain 1\nR: (0,0)\n");
        assert_eq!(canonical_code(&p).unwrap(), canonical_code(&q).unwrap());
        let r = s("signature R/2\ndomain 1\n");
        assert_ne!(canonical_code(&p).unwrap(), canonical_code(&r).unwrap());
    }

    #[test]
    fn canonical_cap() {
        let big = Structure::empty(Signature::parse("R/2").unwrap(), 11).unwrap();
        assert!(matches!(canonical_code(&big), Err(Error::CapExceeded { .. })));
        assert!(canonical_code_capped(&big, 11).is_ok());
    }

    #[test]
    fn canonical_form_round_trips_through_code() {
        let t = triangle();
        let (code, canon) = canonical_form(&t).unwrap();
        assert!(find_isomorphism(&t, &canon).unwrap().is_some());
        let sig = t.signature_arc().clone();
        assert_eq!(structure_from_code(&sig, &code).unwrap(), canon);
    }

    #[test]
    fn ages() {
        let ages = age(&triangle(), 3).unwrap();
        assert!(ages.values().all(|c| c.len() == 1));

        let one_edge = s("signature R/2\ndomain 3\nR: (0,1)\n");
        assert_eq!(age(&one_edge, 2).unwrap()[&2].len(), 2);

        let empty = s("signature R/2\ndomain 4\n");
        assert!(age(&empty, 4).unwrap().values().all(|c| c.len() == 1));

        assert!(age(&empty, 5).is_err());
        assert!(age(&empty, 0).is_err());
    }

    #[test]
    fn large_symmetric_structures_canonise_quickly() {
        let empty = Structure::empty(Signature::parse("R/2 S/3").unwrap(), 10).unwrap();
        let code = canonical_code(&empty).unwrap();
        let shuffled = empty.relabel(&[3, 1, 4, 0, 5, 9, 2, 6, 8, 7]).unwrap();
        assert_eq!(code, canonical_code(&shuffled).unwrap());
    }

    #[test]
    fn bijection_algebra() {
        let f = Bijection::new(vec![2, 0, 1]).unwrap();
        assert_eq!(f.inverse().after(&f), Bijection::identity(3));
        assert!(Bijection::new(vec![0, 0]).is_err());
    }
}
