//! Isomorphism classes of all structures of a given size over a signature.
//!
//! Classes of size `n` are grown from the classes of size `n-1`: the new
//! element `n-1` is attached in every possible way (one bit per tuple that
//! mentions it) and the results are deduplicated by canonical code. Every
//! `n`-element structure arises this way from its substructure on `0..n-1`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::iso::{blocks, canonical_code_capped, structure_from_code, CanonicalCode};
use crate::structure::{Signature, Structure};

/// Bounds on class enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassLimits {
    /// Largest number of classes kept at any size.
    pub max_classes: usize,
    /// Largest number of labeled candidates examined at one size.
    pub max_candidates: u64,
}

impl Default for ClassLimits {
    fn default() -> Self {
        ClassLimits {
            max_classes: 512,
            max_candidates: 1 << 16,
        }
    }
}

/// Number of tuples over `{0..n-1}` that mention `n-1`, summed over the signature.
pub fn new_cells(sig: &Signature, n: usize) -> u32 {
    if n == 0 {
        return 0;
    }
    sig.symbols()
        .iter()
        .map(|s| (n.pow(s.arity as u32) - (n - 1).pow(s.arity as u32)) as u32)
        .sum()
}

/// Labeled candidates examined when growing from `classes` classes of size `n-1`.
pub fn candidate_count(sig: &Signature, n: usize, classes: usize) -> Option<u64> {
    let bits = new_cells(sig, n);
    if bits >= 63 {
        return None;
    }
    (classes as u64).checked_mul(1u64 << bits)
}

/// One canonical representative per isomorphism class of `n`-element
/// structures, sorted by canonical code.
pub fn isomorphism_classes(
    sig: &Arc<Signature>,
    n: usize,
    limits: ClassLimits,
) -> Result<Vec<(CanonicalCode, Structure)>> {
    let mut level = vec![{
        let empty = Structure::empty(sig.clone(), 0)?;
        (canonical_code_capped(&empty, usize::MAX)?, empty)
    }];
    for m in 1..=n {
        let candidates = candidate_count(sig, m, level.len()).ok_or(Error::CapExceeded {
            what: "labeled candidates",
            value: usize::MAX,
            cap: limits.max_candidates as usize,
        })?;
        if candidates > limits.max_candidates {
            return Err(Error::CapExceeded {
                what: "labeled candidates",
                value: candidates as usize,
                cap: limits.max_candidates as usize,
            });
        }
        let codes = extend_level(m, &level)?;
        if codes.len() > limits.max_classes {
            return Err(Error::CapExceeded {
                what: "isomorphism classes",
                value: codes.len(),
                cap: limits.max_classes,
            });
        }
        level = codes
            .into_iter()
            .map(|c| {
                let s = structure_from_code(sig, &c)?;
                Ok((c, s))
            })
            .collect::<Result<_>>()?;
    }
    Ok(level)
}

/// Canonical codes of all one-point extensions of `level` (structures of size `m-1`).
pub(crate) fn extend_level(
    m: usize,
    level: &[(CanonicalCode, Structure)],
) -> Result<BTreeSet<CanonicalCode>> {
    let per_rep: Vec<Result<BTreeSet<CanonicalCode>>> = level
        .par_iter()
        .map(|(_, base)| {
            let grown = grow(base, m)?;
            let cells = attach_cells(&grown, m);
            let mut out = BTreeSet::new();
            let mut s = grown;
            for mask in 0u64..(1u64 << cells.len()) {
                for (bit, &(sym, idx)) in cells.iter().enumerate() {
                    s.set_index(sym, idx, mask >> bit & 1 == 1);
                }
                out.insert(canonical_code_capped(&s, usize::MAX)?);
            }
            Ok(out)
        })
        .collect();
    let mut all = BTreeSet::new();
    for r in per_rep {
        all.extend(r?);
    }
    Ok(all)
}

/// Copy of `base` on a domain of size `m`, the last element unrelated.
fn grow(base: &Structure, m: usize) -> Result<Structure> {
    let mut s = Structure::empty(base.signature_arc().clone(), m)?;
    for sym in 0..base.signature().len() {
        for t in base.tuples(sym) {
            s.insert(sym, &t)?;
        }
    }
    Ok(s)
}

/// `(symbol, table index)` of every tuple mentioning element `m-1`.
fn attach_cells(s: &Structure, m: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for sym in 0..s.signature().len() {
        let b = blocks(m, s.arity(sym));
        for t in b.block(m - 1) {
            cells.push((sym, s.index(t)));
        }
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(spec: &str, n: usize) -> usize {
        let sig = Arc::new(Signature::parse(spec).unwrap());
        let limits = ClassLimits {
            max_classes: 10_000,
            max_candidates: 1 << 20,
        };
        isomorphism_classes(&sig, n, limits).unwrap().len()
    }

    #[test]
    fn digraphs_with_loops() {
        // 1, 2, 10, 104, 3044
        assert_eq!(classes("R/2", 0), 1);
        assert_eq!(classes("R/2", 1), 2);
        assert_eq!(classes("R/2", 2), 10);
        assert_eq!(classes("R/2", 3), 104);
    }

    #[test]
    fn unary_predicates() {
        // n+1 classes for one predicate, multisets of the 4 point types for two
        assert_eq!(classes("P/1", 4), 5);
        assert_eq!(classes("P/1 Q/1", 2), 10);
    }

    #[test]
    fn caps_are_enforced() {
        let sig = Arc::new(Signature::parse("R/2").unwrap());
        assert!(isomorphism_classes(&sig, 4, ClassLimits::default()).is_err());
        let sig = Arc::new(Signature::parse("S/3").unwrap());
        assert!(matches!(
            isomorphism_classes(&sig, 3, ClassLimits::default()),
            Err(Error::CapExceeded { .. })
        ));
    }
}
