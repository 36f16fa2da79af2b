//! Quantifier-free definitions over a linear order: synthesis from a chained
//! structure and the converse construction of a structure from definitions.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::chaining::pattern_tables;
use crate::error::{Error, Result};
use crate::logic::{eval_unchecked, Formula, OrderDefinitions, Var};
use crate::order::{LinearOrder, Pattern};
use crate::structure::{Signature, Structure};

pub use crate::order::tuple_pattern;

impl Pattern {
    /// Conjunction fixing, for every pair of positions, exactly one of `<`, `=`, `>`.
    pub fn describe(&self) -> Formula {
        let r = &self.0;
        let mut atoms = Vec::new();
        for i in 0..r.len() {
            for j in i + 1..r.len() {
                let (a, b) = (i as Var, j as Var);
                atoms.push(match r[i].cmp(&r[j]) {
                    std::cmp::Ordering::Less => Formula::less(a, b),
                    std::cmp::Ordering::Equal => Formula::eq(a, b),
                    std::cmp::Ordering::Greater => Formula::less(b, a),
                });
            }
        }
        Formula::and(atoms)
    }
}

/// Definition of one relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationDefinition {
    pub symbol: String,
    pub arity: usize,
    /// Sorted.
    pub patterns: Vec<Pattern>,
    #[serde(serialize_with = "as_text")]
    pub formula: Formula,
    /// Membership depends on the equality type alone, so every order chains the relation.
    pub constant: bool,
}

fn as_text<S: serde::Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QFDefinition {
    #[serde(skip)]
    pub signature: Arc<Signature>,
    pub relations: Vec<RelationDefinition>,
}

impl QFDefinition {
    pub fn to_definitions(&self) -> OrderDefinitions {
        OrderDefinitions::new(
            self.signature.clone(),
            self.relations.iter().map(|r| r.formula.clone()).collect(),
        )
        .expect("rendered formulas are order formulas")
    }

    /// Definitions file followed by the pattern lists.
    pub fn to_text(&self) -> String {
        let mut out = self.to_definitions().to_text();
        for r in &self.relations {
            out.push_str(&format!("patterns {}:", r.symbol));
            for p in &r.patterns {
                out.push_str(&format!(" {p}"));
            }
            out.push('\n');
        }
        out
    }
}

fn render(patterns: &[Pattern]) -> Formula {
    Formula::or(patterns.iter().map(Pattern::describe))
}

/// Whether the accepted set is a union of equality types among the patterns realizable on `n` elements.
fn is_constant(arity: usize, n: usize, accepted: &BTreeSet<Pattern>) -> bool {
    let all = Pattern::all(arity, n);
    all.iter().all(|p| {
        all.iter()
            .filter(|q| q.equalities() == p.equalities())
            .all(|q| accepted.contains(q) == accepted.contains(p))
    })
}

/// Reads off, for each relation, the patterns of its member tuples under `x`.
pub fn synthesize_definition(y: &Structure, x: &LinearOrder) -> Result<QFDefinition> {
    if y.size() != x.len() {
        return Err(Error::InvalidOrder(format!(
            "order on {} elements for a structure of size {}",
            x.len(),
            y.size()
        )));
    }
    let tables = pattern_tables(y, x)?;
    let relations = y
        .signature()
        .symbols()
        .iter()
        .zip(tables)
        .map(|(s, table)| {
            let accepted: BTreeSet<Pattern> = table.into_iter().filter(|(_, (m, _))| *m).map(|(p, _)| p).collect();
            let patterns: Vec<Pattern> = accepted.iter().cloned().collect();
            RelationDefinition {
                symbol: s.name.clone(),
                arity: s.arity,
                formula: render(&patterns),
                constant: is_constant(s.arity, y.size(), &accepted),
                patterns,
            }
        })
        .collect();
    Ok(QFDefinition {
        signature: y.signature_arc().clone(),
        relations,
    })
}

/// The structure whose relation `R` is the set of tuples satisfying the definition of `R` in `x`.
pub fn derive_structure(x: &LinearOrder, defs: &OrderDefinitions) -> Result<Structure> {
    let n = x.len();
    let order = x.to_structure();
    let mut out = Structure::empty(defs.signature().clone(), n)?;
    for (sym, (s, f)) in defs.signature().symbols().iter().zip(defs.formulas()).enumerate() {
        for t in (0..s.arity).map(|_| 0..n).multi_cartesian_product() {
            if eval_unchecked(&order, f, &t) {
                out.insert(sym, &t)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaining::is_chaining;
    use crate::logic::parse_order_formula;
    use crate::structure::parse_structure;

    fn defs(spec: &str, bodies: &[&str]) -> OrderDefinitions {
        OrderDefinitions::new(
            Signature::parse(spec).unwrap(),
            bodies.iter().map(|b| parse_order_formula(b).unwrap()).collect(),
        )
        .unwrap()
    }

    fn betweenness(n: usize) -> Structure {
        derive_structure(&LinearOrder::natural(n), &defs("S/3", &["(v0<v1<v2 | v2<v1<v0)"])).unwrap()
    }

    #[test]
    fn betweenness_patterns() {
        let y = betweenness(4);
        let d = synthesize_definition(&y, &LinearOrder::natural(4)).unwrap();
        let r = &d.relations[0];
        assert_eq!(r.patterns, vec![Pattern(vec![0, 1, 2]), Pattern(vec![2, 1, 0])]);
        assert!(!r.constant);
        assert_eq!(r.formula.to_string(), "((v0 < v1 & v0 < v2 & v1 < v2) | (v1 < v0 & v2 < v0 & v2 < v1))");
        assert_eq!(derive_structure(&LinearOrder::natural(4), &d.to_definitions()).unwrap(), y);
    }

    #[test]
    fn triangle_is_mixed() {
        let t = parse_structure("signature R/2\ndomain 3\nR: (0,1) (1,2) (2,0)\n").unwrap().structure;
        for p in (0..3).permutations(3) {
            let x = LinearOrder::new(p).unwrap();
            assert!(matches!(synthesize_definition(&t, &x), Err(Error::MixedPattern { .. })));
        }
    }

    #[test]
    fn empty_relation_is_false() {
        let y = parse_structure("signature R/2\ndomain 3\n").unwrap().structure;
        let d = synthesize_definition(&y, &LinearOrder::natural(3)).unwrap();
        assert_eq!(d.relations[0].formula, Formula::False);
        assert!(d.relations[0].constant);
    }

    #[test]
    fn cyclic_order_from_formula() {
        let x = LinearOrder::natural(5);
        let y = derive_structure(&x, &defs("C/3", &["(v0<v1<v2 | v1<v2<v0 | v2<v0<v1)"])).unwrap();
        assert_eq!(y.tuple_count(0), 30);
        assert!(y.contains(0, &[4, 0, 2]) && !y.contains(0, &[2, 0, 4]));
        assert!(is_chaining(&y, &x).unwrap());
    }

    #[test]
    fn trivial_definitions() {
        let x = LinearOrder::new(vec![2, 0, 1]).unwrap();
        let y = derive_structure(&x, &defs("R/2 P/1", &["false", "v0 = v0"])).unwrap();
        assert_eq!(y.tuple_count(0), 0);
        assert_eq!(y.tuple_count(1), 3);
        let d = synthesize_definition(&y, &x).unwrap();
        assert!(d.relations.iter().all(|r| r.constant));
        assert_eq!(d.relations[1].formula, Formula::True);
    }

    #[test]
    fn inequality_is_constant_order_is_not() {
        let x = LinearOrder::natural(3);
        let y = derive_structure(&x, &defs("E/2 L/2", &["~v0 = v1", "v0 < v1"])).unwrap();
        let d = synthesize_definition(&y, &x).unwrap();
        assert!(d.relations[0].constant);
        assert!(!d.relations[1].constant);
    }

    #[test]
    fn text_form_parses_back() {
        let y = betweenness(4);
        let d = synthesize_definition(&y, &LinearOrder::natural(4)).unwrap();
        let text = d.to_text();
        assert!(text.contains("patterns S: (0,1,2) (2,1,0)"));
        assert_eq!(OrderDefinitions::parse(&text).unwrap(), d.to_definitions());
    }
}
