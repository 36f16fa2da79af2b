//! Brute-force oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use monostruct_core::logic::{Formula, Var};
use monostruct_core::order::LinearOrder;
use monostruct_core::{Signature, Structure};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

pub fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) < p
}

pub fn sig(text: &str) -> Arc<Signature> {
    Arc::new(Signature::parse(text).unwrap())
}

/// Tuple lists in signature order.
pub fn relations(y: &Structure) -> Vec<Vec<Vec<usize>>> {
    (0..y.signature().len()).map(|s| y.tuples(s)).collect()
}

pub fn random_structure(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, n: usize, density: f64) -> Structure {
    let mut y = Structure::empty(sig.clone(), n).unwrap();
    for (i, s) in sig.symbols().iter().enumerate() {
        for t in (0..s.arity).map(|_| 0..n).multi_cartesian_product() {
            if coin(rng, density) {
                y.insert(i, &t).unwrap();
            }
        }
    }
    y
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, below(rng, i + 1));
    }
    p
}

/// `a` and `b` are isomorphic, by trying every permutation.
pub fn brute_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && brute_isomorphism(a, b).is_some()
}

pub fn brute_isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    let n = a.size();
    (0..n).permutations(n).find(|p| maps_onto(a, b, |x| p[x], n))
}

fn maps_onto(a: &Structure, b: &Structure, f: impl Fn(usize) -> usize, n: usize) -> bool {
    a.signature().symbols().iter().enumerate().all(|(i, s)| {
        (0..s.arity).map(|_| 0..n).multi_cartesian_product().all(|t| {
            let image: Vec<usize> = t.iter().map(|&x| f(x)).collect();
            a.contains(i, &t) == b.contains(i, &image)
        })
    })
}

/// The subset `h` of `y` (listed in order) induces a copy of `k` via some bijection.
pub fn subset_isomorphic(y: &Structure, h: &[usize], k: &Structure) -> bool {
    let n = k.size();
    (0..n).permutations(n).any(|p| {
        k.signature().symbols().iter().enumerate().all(|(i, s)| {
            (0..s.arity).map(|_| 0..n).multi_cartesian_product().all(|t| {
                let image: Vec<usize> = t.iter().map(|&x| h[p[x]]).collect();
                k.contains(i, &t) == y.contains(i, &image)
            })
        })
    })
}

/// All `|k|`-subsets of `y` induce copies of `k`.
pub fn all_subsets_isomorphic(y: &Structure, k: &Structure) -> bool {
    (0..y.size()).combinations(k.size()).all(|h| subset_isomorphic(y, &h, k))
}

/// All `k`-element substructures pairwise isomorphic.
pub fn brute_k_monomorphic(y: &Structure, k: usize) -> bool {
    let subsets: Vec<Vec<usize>> = (0..y.size()).combinations(k).collect();
    let first = &subsets[0];
    subsets.iter().all(|h| {
        (0..k).permutations(k).any(|p| {
            y.signature().symbols().iter().enumerate().all(|(i, s)| {
                (0..s.arity).map(|_| 0..k).multi_cartesian_product().all(|t| {
                    let a: Vec<usize> = t.iter().map(|&x| first[x]).collect();
                    let b: Vec<usize> = t.iter().map(|&x| h[p[x]]).collect();
                    y.contains(i, &a) == y.contains(i, &b)
                })
            })
        })
    })
}

pub fn brute_monomorphic(y: &Structure) -> bool {
    (1..=y.size()).all(|k| brute_k_monomorphic(y, k))
}

/// Order-isomorphic tuples agree on membership, checked pairwise over all tuples.
pub fn naive_chains(y: &Structure, x: &LinearOrder) -> bool {
    let n = y.size();
    let same_type = |a: &[usize], b: &[usize]| {
        (0..a.len()).all(|i| {
            (0..a.len()).all(|j| x.less(a[i], a[j]) == x.less(b[i], b[j]) && (a[i] == a[j]) == (b[i] == b[j]))
        })
    };
    y.signature().symbols().iter().enumerate().all(|(i, s)| {
        let tuples: Vec<Vec<usize>> = (0..s.arity).map(|_| 0..n).multi_cartesian_product().collect();
        tuples.iter().all(|a| {
            tuples
                .iter()
                .filter(|b| same_type(a, b))
                .all(|b| y.contains(i, a) == y.contains(i, b))
        })
    })
}

pub fn naive_chain_set(y: &Structure) -> Vec<LinearOrder> {
    let n = y.size();
    let mut out: Vec<LinearOrder> = (0..n)
        .permutations(n)
        .map(|p| LinearOrder::new(p).unwrap())
        .filter(|x| naive_chains(y, x))
        .collect();
    out.sort();
    out
}

/// Reference evaluator over a variable map.
pub fn brute_eval(y: &Structure, phi: &Formula, env: &mut HashMap<Var, usize>) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => env[a] == env[b],
        Formula::Atom { symbol, args } => {
            let i = y.signature().index_of(symbol).unwrap();
            let t: Vec<usize> = args.iter().map(|v| env[v]).collect();
            y.contains(i, &t)
        }
        Formula::Not(f) => !brute_eval(y, f, env),
        Formula::And(fs) => fs.iter().all(|f| brute_eval(y, f, env)),
        Formula::Or(fs) => fs.iter().any(|f| brute_eval(y, f, env)),
        Formula::Forall(v, f) | Formula::Exists(v, f) => {
            let saved = env.get(v).copied();
            let universal = matches!(phi, Formula::Forall(..));
            let mut result = universal;
            for a in 0..y.size() {
                env.insert(*v, a);
                if brute_eval(y, f, env) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(a) => env.insert(*v, a),
                None => env.remove(v),
            };
            result
        }
    }
}

pub fn brute_eval_at(y: &Structure, phi: &Formula, values: &[usize]) -> bool {
    let mut env: HashMap<Var, usize> = values.iter().enumerate().map(|(i, &a)| (i as Var, a)).collect();
    brute_eval(y, phi, &mut env)
}

/// Random formula with free variables among `v0..v{free-1}` and at most `depth` nested quantifiers.
pub struct FormulaGen<'a> {
    pub symbols: Vec<(&'a str, usize)>,
    pub free: u32,
    pub depth: usize,
    pub max_size: usize,
}

impl FormulaGen<'_> {
    pub fn from_signature(sig: &Signature, free: u32, depth: usize) -> FormulaGen<'_> {
        FormulaGen {
            symbols: sig.symbols().iter().map(|s| (s.name.as_str(), s.arity)).collect(),
            free,
            depth,
            max_size: 12,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Formula {
        let scope: Vec<Var> = (0..self.free).collect();
        let mut budget = self.max_size;
        self.node(rng, &scope, self.depth, &mut budget)
    }

    fn leaf(&self, rng: &mut ChaCha8Rng, scope: &[Var]) -> Formula {
        if scope.is_empty() {
            return if coin(rng, 0.5) { Formula::True } else { Formula::False };
        }
        let pick = |rng: &mut ChaCha8Rng| scope[below(rng, scope.len())];
        match below(rng, 10) {
            0 => Formula::True,
            1 => Formula::False,
            2 | 3 => Formula::eq(pick(rng), pick(rng)),
            _ => {
                let (name, arity) = self.symbols[below(rng, self.symbols.len())];
                Formula::atom(name, (0..arity).map(|_| pick(rng)).collect())
            }
        }
    }

    fn node(&self, rng: &mut ChaCha8Rng, scope: &[Var], depth: usize, budget: &mut usize) -> Formula {
        if *budget == 0 {
            return self.leaf(rng, scope);
        }
        *budget -= 1;
        match below(rng, 7) {
            0 | 1 => self.leaf(rng, scope),
            2 => Formula::not(self.node(rng, scope, depth, budget)),
            3 => Formula::And(vec![self.node(rng, scope, depth, budget), self.node(rng, scope, depth, budget)]),
            4 => Formula::Or(vec![self.node(rng, scope, depth, budget), self.node(rng, scope, depth, budget)]),
            _ if depth == 0 => self.leaf(rng, scope),
            k => {
                // either a fresh variable or one that shadows an enclosing one
                let v = if !scope.is_empty() && coin(rng, 0.3) {
                    scope[below(rng, scope.len())]
                } else {
                    scope.iter().max().map_or(0, |m| m + 1)
                };
                let mut inner = scope.to_vec();
                if !inner.contains(&v) {
                    inner.push(v);
                }
                let body = self.node(rng, &inner, depth - 1, budget);
                if k == 5 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
