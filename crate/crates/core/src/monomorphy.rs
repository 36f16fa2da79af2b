//! k-monomorphy, full monomorphy, reduct checks and the empirical threshold sweep.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{candidate_count, extend_level};
use crate::error::{Error, Result};
use crate::iso::{canonical_code_capped, isomorphism_unchecked, structure_from_code, CanonicalCode, DEFAULT_CANON_CAP};
use crate::structure::{restrict_sorted, Signature, Structure, StructureReport};

/// Verdict for one substructure size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KVerdict {
    pub k: usize,
    pub monomorphic: bool,
    /// Number of isomorphism classes among the `k`-element substructures.
    pub classes: usize,
    /// The first `k`-subset and the first one not isomorphic to it.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomorphyReport {
    pub size: usize,
    pub monomorphic: bool,
    pub levels: Vec<KVerdict>,
}

impl MonomorphyReport {
    pub fn level(&self, k: usize) -> Option<&KVerdict> {
        self.levels.get(k.checked_sub(1)?)
    }
}

/// Decides whether all `k`-element induced substructures are isomorphic.
pub fn is_k_monomorphic(y: &Structure, k: usize) -> Result<KVerdict> {
    if k == 0 || k > y.size() {
        return Err(Error::OutOfBounds(format!("k = {k} must lie in 1..={}", y.size())));
    }
    let subsets: Vec<Vec<usize>> = (0..y.size()).combinations(k).collect();
    let (classes, first_other) = if k <= DEFAULT_CANON_CAP {
        let codes: Vec<CanonicalCode> = subsets
            .par_iter()
            .map(|h| canonical_code_capped(&restrict_sorted(y, h), usize::MAX))
            .collect::<Result<_>>()?;
        let distinct: BTreeSet<&CanonicalCode> = codes.iter().collect();
        (distinct.len(), codes.iter().position(|c| *c != codes[0]))
    } else {
        let subs: Vec<Structure> = subsets.iter().map(|h| restrict_sorted(y, h)).collect();
        let mut reps: Vec<&Structure> = Vec::new();
        for s in &subs {
            if !reps.iter().any(|r| isomorphism_unchecked(r, s).is_some()) {
                reps.push(s);
            }
        }
        let first_other = subs.iter().position(|s| isomorphism_unchecked(&subs[0], s).is_none());
        (reps.len(), first_other)
    };
    Ok(KVerdict {
        k,
        monomorphic: classes == 1,
        classes,
        witness: first_other.map(|i| (subsets[0].clone(), subsets[i].clone())),
    })
}

/// Verdicts for every `k` in `1..=size`.
pub fn is_monomorphic(y: &Structure) -> Result<MonomorphyReport> {
    let levels = (1..=y.size()).map(|k| is_k_monomorphic(y, k)).collect::<Result<Vec<_>>>()?;
    Ok(MonomorphyReport {
        size: y.size(),
        monomorphic: levels.iter().all(|l| l.monomorphic),
        levels,
    })
}

/// Default cap on the number of symbols for [`check_reducts`].
pub const DEFAULT_REDUCT_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductVerdict {
    pub symbols: Vec<String>,
    pub monomorphic: bool,
    pub witness: Option<(usize, Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductCheck {
    pub monomorphic: bool,
    pub witness: Option<(usize, Vec<usize>, Vec<usize>)>,
    pub reducts: Vec<ReductVerdict>,
    /// False only when the structure is monomorphic but some reduct is not.
    pub agreement: bool,
}

fn first_witness(r: &MonomorphyReport) -> Option<(usize, Vec<usize>, Vec<usize>)> {
    r.levels
        .iter()
        .find_map(|l| l.witness.clone().map(|(a, b)| (l.k, a, b)))
}

pub fn check_reducts(y: &Structure) -> Result<ReductCheck> {
    check_reducts_capped(y, DEFAULT_REDUCT_CAP)
}

/// Monomorphy of every nonempty reduct, in order of the symbol bitmask.
pub fn check_reducts_capped(y: &Structure, max_symbols: usize) -> Result<ReductCheck> {
    let count = y.signature().len();
    if count > max_symbols {
        return Err(Error::CapExceeded {
            what: "symbols for the reduct check",
            value: count,
            cap: max_symbols,
        });
    }
    let whole = is_monomorphic(y)?;
    let mut reducts = Vec::new();
    for mask in 1u32..(1 << count) {
        let idx: Vec<usize> = (0..count).filter(|&i| mask >> i & 1 == 1).collect();
        let r = is_monomorphic(&y.reduct(&idx))?;
        reducts.push(ReductVerdict {
            symbols: idx.iter().map(|&i| y.signature().symbols()[i].name.clone()).collect(),
            monomorphic: r.monomorphic,
            witness: first_witness(&r),
        });
    }
    let agreement = !whole.monomorphic || reducts.iter().all(|r| r.monomorphic);
    Ok(ReductCheck {
        monomorphic: whole.monomorphic,
        witness: first_witness(&whole),
        reducts,
        agreement,
    })
}

/// Settings for [`frasnay_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Largest number of labeled candidates enumerated exhaustively at one size.
    pub exhaustive_limit: u64,
    /// Labeled structures drawn per size once exhaustive enumeration is out of reach.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            exhaustive_limit: 1 << 22,
            samples: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SizeMode {
    Exhaustive { classes: usize },
    Sampled { seed: u64, draws: usize, classes: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSize {
    pub size: usize,
    #[serde(flatten)]
    pub mode: SizeMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub structure: StructureReport,
    /// Sizes `k` at which the structure is `k`-monomorphic.
    pub monomorphic_at: Vec<usize>,
    pub first_failure: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub m: usize,
    pub count: usize,
    pub first: Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdVariant {
    /// Least `m` not refuted by any examined structure of size above `m`.
    pub m: usize,
    /// True when no examined structure has size above `m`.
    pub vacuous: bool,
    pub eliminated: Vec<Elimination>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub arity: usize,
    pub max_size: usize,
    pub sizes: Vec<SweepSize>,
    /// `m`-monomorphic implies monomorphic.
    pub m_only: ThresholdVariant,
    /// `k`-monomorphic for every `k <= m` implies monomorphic.
    pub up_to_m: ThresholdVariant,
}

struct Profile {
    size: usize,
    code: CanonicalCode,
    /// Bit `k` set when the structure is `k`-monomorphic, for `k` in `1..=size`.
    mask: u64,
}

impl Profile {
    fn full(&self) -> u64 {
        ((1u64 << self.size) - 1) << 1
    }

    fn monomorphic(&self) -> bool {
        self.mask == self.full()
    }
}

fn profile(s: &Structure, code: CanonicalCode) -> Result<Profile> {
    let n = s.size();
    let mut mask = 1u64 << n;
    for k in 1..n {
        let mut first: Option<CanonicalCode> = None;
        let mut mono = true;
        for h in (0..n).combinations(k) {
            let c = canonical_code_capped(&restrict_sorted(s, &h), usize::MAX)?;
            match &first {
                None => first = Some(c),
                Some(f) if *f != c => {
                    mono = false;
                    break;
                }
                Some(_) => {}
            }
        }
        if mono {
            mask |= 1 << k;
        }
    }
    Ok(Profile { size: n, code, mask })
}

/// Empirical probe of the monomorphy threshold for one relation of the given arity.
///
/// Every structure examined has size in `1..=max_size`. For a candidate `m`
/// only structures of size greater than `m` are tested, since a structure of
/// size `m` is trivially `m`-monomorphic. Sizes are enumerated exhaustively up
/// to isomorphism while the candidate count stays within the limit, and
/// sampled with a seeded ChaCha8 generator beyond it.
pub fn frasnay_sweep(arity: usize, max_size: usize, options: SweepOptions) -> Result<SweepReport> {
    if arity == 0 || max_size == 0 {
        return Err(Error::Infeasible("arity and max size must be positive".into()));
    }
    if max_size > 16 {
        return Err(Error::Infeasible(format!("max size {max_size} is above 16")));
    }
    let sig = Arc::new(Signature::new([("R", arity)])?);
    let mut sizes = Vec::new();
    let mut profiles: Vec<Profile> = Vec::new();
    let mut level: Option<Vec<(CanonicalCode, Structure)>> = Some(vec![{
        let e = Structure::empty(sig.clone(), 0)?;
        (canonical_code_capped(&e, usize::MAX)?, e)
    }]);
    for n in 1..=max_size {
        let feasible = level
            .as_ref()
            .and_then(|l| candidate_count(&sig, n, l.len()))
            .is_some_and(|c| c <= options.exhaustive_limit);
        let codes: Vec<CanonicalCode> = if feasible {
            let codes = extend_level(n, level.as_ref().unwrap())?;
            sizes.push(SweepSize {
                size: n,
                mode: SizeMode::Exhaustive { classes: codes.len() },
            });
            codes.into_iter().collect()
        } else {
            let codes = sample_classes(&sig, n, options)?;
            sizes.push(SweepSize {
                size: n,
                mode: SizeMode::Sampled {
                    seed: options.seed,
                    draws: options.samples,
                    classes: codes.len(),
                },
            });
            codes
        };
        let reps: Vec<(CanonicalCode, Structure)> = codes
            .into_par_iter()
            .map(|c| {
                let s = structure_from_code(&sig, &c)?;
                Ok((c, s))
            })
            .collect::<Result<_>>()?;
        let mut level_profiles: Vec<Profile> = reps
            .par_iter()
            .map(|(c, s)| profile(s, c.clone()))
            .collect::<Result<_>>()?;
        level_profiles.sort_by(|a, b| a.code.cmp(&b.code));
        profiles.extend(level_profiles);
        level = if feasible { Some(reps) } else { None };
    }
    let m_only = threshold(&sig, max_size, &profiles, |p, m| p.mask >> m & 1 == 1)?;
    let up_to_m = threshold(&sig, max_size, &profiles, |p, m| {
        let low = ((1u64 << m) - 1) << 1;
        p.mask & low == low
    })?;
    Ok(SweepReport {
        arity,
        max_size,
        sizes,
        m_only,
        up_to_m,
    })
}

fn threshold(
    sig: &Arc<Signature>,
    max_size: usize,
    profiles: &[Profile],
    hypothesis: impl Fn(&Profile, usize) -> bool,
) -> Result<ThresholdVariant> {
    let mut eliminated = Vec::new();
    for m in 1..=max_size {
        let bad: Vec<&Profile> = profiles
            .iter()
            .filter(|p| p.size > m && hypothesis(p, m) && !p.monomorphic())
            .collect();
        if bad.is_empty() {
            return Ok(ThresholdVariant {
                m,
                vacuous: !profiles.iter().any(|p| p.size > m),
                eliminated,
            });
        }
        let p = bad[0];
        let s = structure_from_code(sig, &p.code)?;
        let monomorphic_at: Vec<usize> = (1..=p.size).filter(|&k| p.mask >> k & 1 == 1).collect();
        let first_failure = (1..=p.size).find(|&k| p.mask >> k & 1 == 0).unwrap();
        eliminated.push(Elimination {
            m,
            count: bad.len(),
            first: Counterexample {
                structure: s.report(),
                monomorphic_at,
                first_failure,
            },
        });
    }
    unreachable!("a structure of size max_size is never tested against m = max_size")
}

fn sample_classes(sig: &Arc<Signature>, n: usize, options: SweepOptions) -> Result<Vec<CanonicalCode>> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let cells = n.pow(sig.symbols()[0].arity as u32);
    let mut draws = Vec::with_capacity(options.samples);
    for _ in 0..options.samples {
        let bits: Vec<bool> = (0..cells).map(|_| rng.next_u64() >> 63 == 1).collect();
        draws.push(bits);
    }
    let codes: BTreeSet<CanonicalCode> = draws
        .par_iter()
        .map(|bits| {
            let mut s = Structure::empty(sig.clone(), n)?;
            for (i, &b) in bits.iter().enumerate() {
                s.set_index(0, i, b);
            }
            canonical_code_capped(&s, usize::MAX)
        })
        .collect::<Result<_>>()?;
    Ok(codes.into_iter().collect())
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

    #[test]
    fn triangle_is_monomorphic() {
        let r = is_monomorphic(&triangle()).unwrap();
        assert!(r.monomorphic);
        assert_eq!(r.levels.len(), 3);
        assert!(r.levels.iter().all(|l| l.classes == 1 && l.witness.is_none()));
    }

    #[test]
    fn one_edge_witness() {
        let y = s("signature R/2\ndomain 3\nR: (0,1)\n");
        let v = is_k_monomorphic(&y, 2).unwrap();
        assert!(!v.monomorphic);
        assert_eq!(v.classes, 2);
        assert_eq!(v.witness, Some((vec![0, 1], vec![0, 2])));
        assert!(is_k_monomorphic(&y, 3).unwrap().monomorphic);
        assert!(is_k_monomorphic(&y, 0).is_err());
        assert!(is_k_monomorphic(&y, 4).is_err());
    }

    #[test]
    fn linear_orders_are_monomorphic() {
        let y = s("signature </2\ndomain 5\n<: (0,1) (0,2) (0,3) (0,4) (1,2) (1,3) (1,4) (2,3) (2,4) (3,4)\n");
        assert!(is_monomorphic(&y).unwrap().monomorphic);
    }

    #[test]
    fn reducts_of_two_orders() {
        // two linear orders whose union is not monomorphic
        let y = s("signature R/2 S/2\ndomain 3\nR: (0,1) (0,2) (1,2)\nS: (1,2) (1,0) (2,0)\n");
        let c = check_reducts(&y).unwrap();
        assert!(!c.monomorphic);
        assert!(c.witness.is_some());
        assert_eq!(c.reducts.len(), 3);
        assert!(c.reducts.iter().take(2).all(|r| r.monomorphic));
        assert!(c.agreement);
        assert!(check_reducts(&triangle()).unwrap().agreement);
    }

    #[test]
    fn reduct_cap() {
        let y = s("signature A/1 B/1 C/1 D/1 F/1\ndomain 1\n");
        assert!(matches!(check_reducts(&y), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn unary_threshold_is_one() {
        let r = frasnay_sweep(1, 4, SweepOptions::default()).unwrap();
        assert_eq!(r.m_only.m, 1);
        assert!(!r.m_only.vacuous);
        assert!(r.m_only.eliminated.is_empty());
    }

    #[test]
    fn sampling_is_seeded() {
        let opts = SweepOptions {
            exhaustive_limit: 0,
            samples: 200,
            seed: 7,
        };
        let a = frasnay_sweep(2, 3, opts).unwrap();
        let b = frasnay_sweep(2, 3, opts).unwrap();
        assert_eq!(a, b);
        assert!(matches!(a.sizes[2].mode, SizeMode::Sampled { seed: 7, .. }));
    }
}
