//! Syntactic transformations: variable permutation, replacement of relation
//! atoms by order definitions, and merging of duplicate relations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::formula::{Formula, Var};
use super::parser::parse_formula;
use crate::error::{Error, Result};
use crate::structure::{check_permutation, Signature, Structure, ORDER_SYMBOL};

/// Capture-avoiding simultaneous substitution of free variables.
pub fn substitute(phi: &Formula, map: &dyn Fn(Var) -> Var) -> Formula {
    let mut fresh = phi.max_var().map_or(0, |m| m + 1);
    for v in phi.free_vars() {
        fresh = fresh.max(map(v) + 1);
    }
    subst(phi, &|v| map(v), &mut fresh)
}

fn subst(phi: &Formula, map: &dyn Fn(Var) -> Var, fresh: &mut Var) -> Formula {
    match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Eq(a, b) => Formula::Eq(map(*a), map(*b)),
        Formula::Atom { symbol, args } => Formula::Atom {
            symbol: symbol.clone(),
            args: args.iter().map(|&v| map(v)).collect(),
        },
        Formula::Not(f) => Formula::not(subst(f, map, fresh)),
        Formula::And(fs) => Formula::And(fs.iter().map(|f| subst(f, map, fresh)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| subst(f, map, fresh)).collect()),
        Formula::Forall(v, f) | Formula::Exists(v, f) => {
            let universal = matches!(phi, Formula::Forall(..));
            let bound = *v;
            // the bound variable must not collide with the image of a free variable
            let captured = f.free_vars().into_iter().any(|w| w != bound && map(w) == bound);
            let target = if captured {
                let t = *fresh;
                *fresh += 1;
                t
            } else {
                bound
            };
            let inner = move |w: Var| if w == bound { target } else { map(w) };
            let body = subst(f, &inner, fresh);
            if universal {
                Formula::forall(target, body)
            } else {
                Formula::exists(target, body)
            }
        }
    }
}

/// Replaces every free `v_k` by `v_{perm[k]}`.
pub fn permute_formula(phi: &Formula, perm: &[usize]) -> Result<Formula> {
    check_permutation(perm, perm.len())?;
    let n = perm.len() as Var;
    if let Some(&v) = phi.free_vars().iter().find(|&&v| v >= n) {
        return Err(Error::VariableOutOfRange { var: v, bound: n });
    }
    Ok(substitute(phi, &|v| if v < n { perm[v as usize] as Var } else { v }))
}

/// Quantifier-free order formulas, one per symbol of a target signature.
/// The formula for a symbol of arity `k` speaks about `v0..v{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDefinitions {
    signature: Arc<Signature>,
    formulas: Vec<Formula>,
}

impl OrderDefinitions {
    pub fn new(signature: impl Into<Arc<Signature>>, formulas: Vec<Formula>) -> Result<Self> {
        let signature = signature.into();
        if formulas.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} definitions for {} symbols",
                formulas.len(),
                signature.len()
            )));
        }
        for (sym, f) in signature.symbols().iter().zip(&formulas) {
            if !f.is_quantifier_free() {
                return Err(Error::NotQuantifierFree(sym.name.clone()));
            }
            if let Some((found, _)) = f.symbols().into_iter().find(|(s, a)| s != ORDER_SYMBOL || *a != 2) {
                return Err(Error::NotOrderFormula {
                    symbol: sym.name.clone(),
                    found,
                });
            }
            if let Some(&v) = f.free_vars().iter().find(|&&v| v as usize >= sym.arity) {
                return Err(Error::VariableOutOfRange {
                    var: v,
                    bound: sym.arity as Var,
                });
            }
        }
        Ok(OrderDefinitions { signature, formulas })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.signature.index_of(name).map(|i| &self.formulas[i])
    }

    /// Parses a definitions file:
    ///
    /// ```text
    /// signature S/3
    /// S := (v0<v1<v2 | v2<v1<v0)
    /// ```
    ///
    /// Lines starting with `patterns` are accepted and ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut signature: Option<Signature> = None;
        let mut defs: BTreeMap<usize, Formula> = BTreeMap::new();
        let perr = |line: usize, message: String| Error::Parse { line, message };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("patterns") {
                continue;
            }
            if let Some(rest) = line.strip_prefix("signature") {
                if signature.is_some() {
                    return Err(perr(line_no, "second `signature` line".into()));
                }
                signature = Some(Signature::parse(rest).map_err(|e| perr(line_no, e.to_string()))?);
                continue;
            }
            let sig = signature
                .as_ref()
                .ok_or_else(|| perr(line_no, "definitions must follow a `signature` line".into()))?;
            let (name, body) = line
                .split_once(":=")
                .ok_or_else(|| perr(line_no, "expected `<symbol> := <formula>`".into()))?;
            let name = name.trim();
            let idx = sig
                .index_of(name)
                .ok_or_else(|| perr(line_no, format!("unknown symbol `{name}`")))?;
            if defs.contains_key(&idx) {
                return Err(perr(line_no, format!("`{name}` is defined twice")));
            }
            let f = parse_formula(body, &Signature::order()).map_err(|e| perr(line_no, e.to_string()))?;
            defs.insert(idx, f);
        }
        let sig = signature.ok_or_else(|| perr(1, "missing `signature` line".into()))?;
        let mut formulas = Vec::with_capacity(sig.len());
        for (i, s) in sig.symbols().iter().enumerate() {
            formulas.push(defs.remove(&i).ok_or_else(|| Error::MissingDefinition(s.name.clone()))?);
        }
        OrderDefinitions::new(sig, formulas)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("signature {}\n", self.signature);
        for (s, f) in self.signature.symbols().iter().zip(&self.formulas) {
            out.push_str(&format!("{} := {}\n", s.name, f));
        }
        out
    }
}

/// Replaces each relation atom `R(v_{k0},...)` by the definition of `R`
/// with `v_j` renamed to `v_{kj}`. Equalities, connectives and quantifiers
/// are kept.
pub fn star_translate(phi: &Formula, defs: &OrderDefinitions) -> Result<Formula> {
    match phi {
        Formula::True | Formula::False | Formula::Eq(..) => Ok(phi.clone()),
        Formula::Atom { symbol, args } => {
            let def = defs.get(symbol).ok_or_else(|| Error::MissingDefinition(symbol.clone()))?;
            let arity = defs.signature.arity_of(symbol).unwrap();
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            // definitions are quantifier-free, so plain renaming is capture-free
            Ok(substitute(def, &|v| args[v as usize]))
        }
        Formula::Not(f) => Ok(Formula::not(star_translate(f, defs)?)),
        Formula::And(fs) => Ok(Formula::And(
            fs.iter().map(|f| star_translate(f, defs)).collect::<Result<_>>()?,
        )),
        Formula::Or(fs) => Ok(Formula::Or(
            fs.iter().map(|f| star_translate(f, defs)).collect::<Result<_>>()?,
        )),
        Formula::Forall(v, f) => Ok(Formula::forall(*v, star_translate(f, defs)?)),
        Formula::Exists(v, f) => Ok(Formula::exists(*v, star_translate(f, defs)?)),
    }
}

/// Renaming of symbols onto representatives of equal-extension classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTranslation {
    representative: BTreeMap<String, String>,
}

impl SymbolTranslation {
    /// Representative name for `symbol`; unknown names are returned unchanged.
    pub fn representative<'a>(&'a self, symbol: &'a str) -> &'a str {
        self.representative.get(symbol).map_or(symbol, String::as_str)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.representative.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn translate(&self, phi: &Formula) -> Formula {
        match phi {
            Formula::Atom { symbol, args } => Formula::Atom {
                symbol: self.representative(symbol).to_string(),
                args: args.clone(),
            },
            Formula::Not(f) => Formula::not(self.translate(f)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| self.translate(f)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| self.translate(f)).collect()),
            Formula::Forall(v, f) => Formula::forall(*v, self.translate(f)),
            Formula::Exists(v, f) => Formula::exists(*v, self.translate(f)),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub structure: Structure,
    pub translation: SymbolTranslation,
    /// Groups of merged symbols, representative first.
    pub classes: Vec<Vec<String>>,
}

/// Merges symbols of equal arity and equal extension onto the
/// least-indexed one and returns the reduct plus the formula translation.
pub fn reduce_duplicate_relations(y: &Structure) -> Reduction {
    let symbols = y.signature().symbols();
    let mut rep_of = vec![0usize; symbols.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..symbols.len() {
        let found = reps
            .iter()
            .copied()
            .find(|&r| symbols[r].arity == symbols[i].arity && y.same_extension(r, i));
        rep_of[i] = found.unwrap_or(i);
        if found.is_none() {
            reps.push(i);
        }
    }
    let representative = symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (s.name.clone(), symbols[rep_of[i]].name.clone()))
        .collect();
    let classes = reps
        .iter()
        .map(|&r| {
            (0..symbols.len())
                .filter(|&i| rep_of[i] == r)
                .map(|i| symbols[i].name.clone())
                .collect()
        })
        .collect();
    Reduction {
        structure: y.reduct(&reps),
        translation: SymbolTranslation { representative },
        classes,
    }
}

/// Variables occurring in `phi`, free or bound.
pub fn all_vars(phi: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_vars(phi, &mut out);
    out
}

fn collect_vars(phi: &Formula, out: &mut BTreeSet<Var>) {
    match phi {
        Formula::True | Formula::False => {}
        Formula::Eq(a, b) => {
            out.insert(*a);
            out.insert(*b);
        }
        Formula::Atom { args, .. } => out.extend(args.iter().copied()),
        Formula::Not(f) => collect_vars(f, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| collect_vars(f, out)),
        Formula::Forall(v, f) | Formula::Exists(v, f) => {
            out.insert(*v);
            collect_vars(f, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{eval, parse_formula, Assignment};
    use crate::structure::parse_structure;

    fn sig(s: &str) -> Signature {
        Signature::parse(s).unwrap()
    }

    #[test]
    fn swap_arguments() {
        let s = sig("R/2");
        let f = parse_formula("R(v0,v1)", &s).unwrap();
        assert_eq!(permute_formula(&f, &[1, 0]).unwrap(), parse_formula("R(v1,v0)", &s).unwrap());
        assert_eq!(permute_formula(&f, &[0, 1]).unwrap(), f);
    }

    #[test]
    fn three_cycle_by_hand() {
        let s = sig("R/2");
        let f = parse_formula("(v0 = v2 & R(v1,v0))", &s).unwrap();
        let g = permute_formula(&f, &[1, 2, 0]).unwrap();
        assert_eq!(g, parse_formula("(v1 = v0 & R(v2,v1))", &s).unwrap());
    }

    #[test]
    fn free_variable_out_of_range() {
        let f = Formula::eq(0, 3);
        assert!(matches!(permute_formula(&f, &[1, 0]), Err(Error::VariableOutOfRange { var: 3, .. })));
        assert!(permute_formula(&f, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn substitution_avoids_capture() {
        let s = sig("R/2");
        // v0 -> v1 must not be captured by the binder E v1
        let f = parse_formula("E v1 R(v0,v1)", &s).unwrap();
        let g = permute_formula(&f, &[1, 0]).unwrap();
        assert_eq!(g, parse_formula("E v2 R(v1,v2)", &s).unwrap());
        let y = parse_structure("signature R/2\ndomain 2\nR: (1,0)\n").unwrap().structure;
        for a in 0..2 {
            for b in 0..2 {
                let lhs = eval(&y, &g, &Assignment::from_slice(&[a, b])).unwrap();
                let rhs = eval(&y, &f, &Assignment::from_slice(&[b, a])).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    fn order_defs(spec: &str, bodies: &[&str]) -> OrderDefinitions {
        let formulas = bodies
            .iter()
            .map(|b| parse_formula(b, &Signature::order()).unwrap())
            .collect();
        OrderDefinitions::new(sig(spec), formulas).unwrap()
    }

    #[test]
    fn star_translation_examples() {
        let defs = order_defs("R/2", &["v0 < v1"]);
        let s = sig("R/2");
        let f = parse_formula("R(v0,v1)", &s).unwrap();
        assert_eq!(star_translate(&f, &defs).unwrap(), Formula::less(0, 1));
        let f = parse_formula("R(v2,v0)", &s).unwrap();
        assert_eq!(star_translate(&f, &defs).unwrap(), Formula::less(2, 0));

        let betw = order_defs("S/3", &["(v0<v1<v2 | v2<v1<v0)"]);
        let f = parse_formula("E v1 S(v0,v1,v2)", &sig("S/3")).unwrap();
        let expected = parse_formula("E v1 (v0<v1<v2 | v2<v1<v0)", &Signature::order()).unwrap();
        assert_eq!(star_translate(&f, &betw).unwrap(), expected);
    }

    #[test]
    fn definitions_are_validated() {
        let quantified = parse_formula("E v2 v0 < v2", &Signature::order()).unwrap();
        assert!(matches!(
            OrderDefinitions::new(sig("R/2"), vec![quantified]),
            Err(Error::NotQuantifierFree(_))
        ));
        let wide = parse_formula("v0 < v2", &Signature::order()).unwrap();
        assert!(OrderDefinitions::new(sig("R/2"), vec![wide]).is_err());
        let foreign = Formula::atom("R", vec![0, 1]);
        assert!(OrderDefinitions::new(sig("R/2"), vec![foreign]).is_err());

        let defs = order_defs("R/2", &["v0 < v1"]);
        let missing = Formula::atom("S", vec![0]);
        assert!(matches!(star_translate(&missing, &defs), Err(Error::MissingDefinition(_))));
    }

    #[test]
    fn definitions_text_round_trip() {
        let defs = order_defs("S/3 U/1", &["(v0<v1<v2 | v2<v1<v0)", "v0 = v0"]);
        let again = OrderDefinitions::parse(&defs.to_text()).unwrap();
        assert_eq!(defs, again);
        assert!(matches!(
            OrderDefinitions::parse("signature R/2 U/1\nR := v0 < v1\n"),
            Err(Error::MissingDefinition(_))
        ));
    }

    #[test]
    fn duplicate_relations_merge() {
        let y = parse_structure("signature R1/2 R2/2 P/1\ndomain 3\nR1: (0,1)\nR2: (0,1)\nP: (2)\n")
            .unwrap()
            .structure;
        let red = reduce_duplicate_relations(&y);
        assert_eq!(red.structure.signature().to_string(), "R1/2 P/1");
        assert_eq!(red.translation.representative("R2"), "R1");
        let f = parse_formula("E v1 R2(v0,v1)", y.signature()).unwrap();
        assert_eq!(
            red.translation.translate(&f),
            parse_formula("E v1 R1(v0,v1)", red.structure.signature()).unwrap()
        );
        assert_eq!(red.classes, vec![vec!["R1".to_string(), "R2".to_string()], vec!["P".to_string()]]);
    }

    #[test]
    fn distinct_relations_reduce_to_identity() {
        let y = parse_structure("signature R1/2 R2/2\ndomain 2\nR1: (0,1)\nR2: (1,0)\n")
            .unwrap()
            .structure;
        let red = reduce_duplicate_relations(&y);
        assert_eq!(red.structure, y);
        assert!(red.translation.pairs().all(|(a, b)| a == b));
    }

    #[test]
    fn equal_extensions_of_different_arity_stay_apart() {
        // both empty, but unary vs binary
        let y = parse_structure("signature P/1 R/2\ndomain 2\n").unwrap().structure;
        assert_eq!(reduce_duplicate_relations(&y).structure, y);
    }
}
