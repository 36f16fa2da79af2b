use std::collections::BTreeSet;
use std::fmt;

use crate::structure::ORDER_SYMBOL;

/// Variable index: `Var(3)` is `v3`.
pub type Var = u32;

/// First-order formulas over a relational signature.
///
/// `And` and `Or` always hold at least two operands when built through the
/// constructors or the parser; the empty conjunction is `True` and the
/// empty disjunction is `False`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Var, Var),
    Atom { symbol: String, args: Vec<Var> },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Var, b: Var) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn atom(symbol: impl Into<String>, args: Vec<Var>) -> Formula {
        Formula::Atom {
            symbol: symbol.into(),
            args,
        }
    }

    pub fn less(a: Var, b: Var) -> Formula {
        Formula::atom(ORDER_SYMBOL, vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut v: Vec<Formula> = items.into_iter().collect();
        match v.len() {
            0 => Formula::True,
            1 => v.pop().unwrap(),
            _ => Formula::And(v),
        }
    }

    pub fn or(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut v: Vec<Formula> = items.into_iter().collect();
        match v.len() {
            0 => Formula::False,
            1 => v.pop().unwrap(),
            _ => Formula::Or(v),
        }
    }

    /// `a -> b`, desugared to `~a | b`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Or(vec![Formula::not(a), b])
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                for v in [a, b] {
                    if !bound.contains(v) {
                        out.insert(*v);
                    }
                }
            }
            Formula::Atom { args, .. } => {
                out.extend(args.iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom { .. } => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom { .. } => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0)
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Largest variable index occurring anywhere, bound or free.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Eq(a, b) => Some(*a.max(b)),
            Formula::Atom { args, .. } => args.iter().copied().max(),
            Formula::Not(f) => f.max_var(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().filter_map(Formula::max_var).max(),
            Formula::Forall(v, f) | Formula::Exists(v, f) => Some(f.max_var().map_or(*v, |m| m.max(*v))),
        }
    }

    /// Relation symbols used, with the argument counts they appear with.
    pub fn symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |s, args| {
            out.insert((s.to_string(), args.len()));
        });
        out
    }

    pub(crate) fn visit_atoms(&self, f: &mut impl FnMut(&str, &[Var])) {
        match self {
            Formula::Atom { symbol, args } => f(symbol, args),
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
            _ => {}
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom { .. } => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "v{a} = v{b}"),
            Formula::Atom { symbol, args } if symbol == ORDER_SYMBOL && args.len() == 2 => {
                write!(f, "v{} < v{}", args[0], args[1])
            }
            Formula::Atom { symbol, args } => {
                write!(f, "{symbol}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "v{a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(gs) => write_joined(f, gs, " & "),
            Formula::Or(gs) => write_joined(f, gs, " | "),
            Formula::Forall(v, g) => write!(f, "A v{v} {g}"),
            Formula::Exists(v, g) => write!(f, "E v{v} {g}"),
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, items: &[Formula], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, g) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{g}")?;
    }
    f.write_str(")")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_normalise() {
        assert_eq!(Formula::and(vec![]), Formula::True);
        assert_eq!(Formula::or(vec![]), Formula::False);
        assert_eq!(Formula::and(vec![Formula::eq(0, 1)]), Formula::eq(0, 1));
    }

    #[test]
    fn free_variables() {
        let f = Formula::forall(0, Formula::and(vec![Formula::eq(0, 1), Formula::atom("R", vec![2, 0])]));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert!(Formula::exists(0, Formula::eq(0, 0)).is_sentence());
        assert_eq!(f.quantifier_depth(), 1);
        assert_eq!(f.max_var(), Some(2));
    }

    #[test]
    fn display() {
        let f = Formula::or(vec![
            Formula::and(vec![Formula::less(0, 1), Formula::less(1, 2)]),
            Formula::not(Formula::atom("S", vec![2, 1, 0])),
        ]);
        assert_eq!(f.to_string(), "((v0 < v1 & v1 < v2) | ~S(v2,v1,v0))");
        assert_eq!(Formula::forall(1, Formula::True).to_string(), "A v1 true");
    }
}
