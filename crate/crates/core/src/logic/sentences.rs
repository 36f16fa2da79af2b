//! Sentences expressing "every `n`-element substructure is isomorphic to `K`"
//! and "the structure is `n`-monomorphic".

use itertools::Itertools;

use super::formula::{Formula, Var};
use super::translate::permute_formula;
use crate::classes::{isomorphism_classes, ClassLimits};
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

/// Default bound on `|K|` for the permutation disjunction.
pub const DEFAULT_PHI_CAP: usize = 6;

/// The diagram of `K` over `v0..v{n-1}`: `~v_k = v_l` for `k < l`, then every
/// relation literal, symbols in signature order and argument tuples in
/// lexicographic order.
pub fn build_alpha(k: &Structure) -> Result<Formula> {
    let n = k.size();
    if n == 0 {
        return Err(Error::EmptyStructure);
    }
    let mut lits = Vec::new();
    for (a, b) in (0..n as Var).tuple_combinations() {
        lits.push(Formula::not(Formula::eq(a, b)));
    }
    for (sym, s) in k.signature().symbols().iter().enumerate() {
        for t in (0..s.arity).map(|_| 0..n).multi_cartesian_product() {
            let atom = Formula::atom(s.name.clone(), t.iter().map(|&x| x as Var).collect());
            lits.push(if k.contains(sym, &t) { atom } else { Formula::not(atom) });
        }
    }
    Ok(Formula::and(lits))
}

/// Disjunction of the alphas permuted by every element of `Sym(n)`.
/// Holds of an injective tuple iff the substructure it spans is isomorphic to `K`.
pub fn build_phi(k: &Structure) -> Result<Formula> {
    build_phi_capped(k, DEFAULT_PHI_CAP)
}

pub fn build_phi_capped(k: &Structure, cap: usize) -> Result<Formula> {
    let n = k.size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "size of K for the permutation disjunction",
            value: n,
            cap,
        });
    }
    let alpha = build_alpha(k)?;
    let disjuncts = (0..n)
        .permutations(n)
        .map(|p| permute_formula(&alpha, &p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Formula::or(disjuncts))
}

/// `A v0 ... A v{n-1} (~(distinct) | phi)`: every `n`-element substructure is isomorphic to `K`.
pub fn build_psi(k: &Structure) -> Result<Formula> {
    build_psi_capped(k, DEFAULT_PHI_CAP)
}

pub fn build_psi_capped(k: &Structure, cap: usize) -> Result<Formula> {
    let n = k.size();
    let phi = build_phi_capped(k, cap)?;
    let body = if n == 1 {
        phi
    } else {
        let distinct = Formula::and(
            (0..n as Var)
                .tuple_combinations()
                .map(|(a, b)| Formula::not(Formula::eq(a, b))),
        );
        Formula::Or(vec![Formula::not(distinct), phi])
    };
    Ok((0..n as Var).rev().fold(body, |f, v| Formula::forall(v, f)))
}

/// Disjunction of `psi^K` over one `K` per isomorphism class of `n`-element
/// structures, ordered by canonical code: the structure is `n`-monomorphic.
pub fn build_psi_n(sig: &Signature, n: usize) -> Result<Formula> {
    build_psi_n_capped(sig, n, ClassLimits::default(), DEFAULT_PHI_CAP)
}

pub fn build_psi_n_capped(sig: &Signature, n: usize, limits: ClassLimits, phi_cap: usize) -> Result<Formula> {
    if n == 0 {
        return Err(Error::OutOfBounds("psi_n needs n >= 1".into()));
    }
    if n > phi_cap {
        return Err(Error::CapExceeded {
            what: "size of K for the permutation disjunction",
            value: n,
            cap: phi_cap,
        });
    }
    let classes = isomorphism_classes(&std::sync::Arc::new(sig.clone()), n, limits)?;
    let disjuncts = classes
        .iter()
        .map(|(_, k)| build_psi_capped(k, phi_cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(Formula::or(disjuncts))
}
