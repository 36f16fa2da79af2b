use std::collections::BTreeMap;

use super::formula::{Formula, Var};
use super::parser::check_against;
use crate::error::{Error, Result};
use crate::structure::Structure;

/// Values for variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    /// `v_i` is sent to `values[i]`.
    pub fn from_slice(values: &[usize]) -> Self {
        Assignment(values.iter().enumerate().map(|(i, &x)| (i as Var, x)).collect())
    }

    pub fn with(mut self, var: Var, value: usize) -> Self {
        self.0.insert(var, value);
        self
    }

    pub fn get(&self, var: Var) -> Option<usize> {
        self.0.get(&var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        self.0.iter().map(|(&v, &x)| (v, x))
    }
}

const UNSET: usize = usize::MAX;

/// Tarskian satisfaction `A |= phi[a]`.
///
/// Quantifiers range over the domain in ascending order; over an empty
/// domain `A` is true and `E` is false.
pub fn eval(a: &Structure, phi: &Formula, asg: &Assignment) -> Result<bool> {
    check_against(phi, a.signature()).map_err(|e| Error::SignatureMismatch(e.to_string()))?;
    for v in phi.free_vars() {
        match asg.get(v) {
            None => return Err(Error::UncoveredVariable(v)),
            Some(x) if x >= a.size() => {
                return Err(Error::OutOfRange {
                    element: x,
                    size: a.size(),
                })
            }
            Some(_) => {}
        }
    }
    let width = phi.max_var().map_or(0, |m| m as usize + 1);
    let mut env = vec![UNSET; width];
    for (v, x) in asg.iter() {
        if (v as usize) < width {
            env[v as usize] = x;
        }
    }
    let mut ev = Evaluator { a, env };
    Ok(ev.holds(phi))
}

/// Evaluation with a positional environment, skipping validation.
pub(crate) fn eval_unchecked(a: &Structure, phi: &Formula, values: &[usize]) -> bool {
    let width = phi.max_var().map_or(0, |m| m as usize + 1).max(values.len());
    let mut env = vec![UNSET; width];
    env[..values.len()].copy_from_slice(values);
    Evaluator { a, env }.holds(phi)
}

struct Evaluator<'a> {
    a: &'a Structure,
    env: Vec<usize>,
}

impl Evaluator<'_> {
    fn holds(&mut self, phi: &Formula) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(x, y) => self.env[*x as usize] == self.env[*y as usize],
            Formula::Atom { symbol, args } => {
                let sym = self
                    .a
                    .signature()
                    .index_of(symbol)
                    .expect("atoms were checked against the signature");
                let n = self.a.size();
                let idx = args.iter().fold(0, |acc, &v| acc * n + self.env[v as usize]);
                self.a.contains_index(sym, idx)
            }
            Formula::Not(f) => !self.holds(f),
            Formula::And(fs) => fs.iter().all(|f| self.holds(f)),
            Formula::Or(fs) => fs.iter().any(|f| self.holds(f)),
            Formula::Forall(v, f) => self.quantify(*v, f, true),
            Formula::Exists(v, f) => self.quantify(*v, f, false),
        }
    }

    fn quantify(&mut self, v: Var, body: &Formula, universal: bool) -> bool {
        let slot = v as usize;
        let saved = self.env[slot];
        let mut result = universal;
        for x in 0..self.a.size() {
            self.env[slot] = x;
            if self.holds(body) != universal {
                result = !universal;
                break;
            }
        }
        self.env[slot] = saved;
        result
    }
}
