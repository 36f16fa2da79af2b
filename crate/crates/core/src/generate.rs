//! Named example structures and seeded random ones.
//!
//! Random structures use `ChaCha8Rng::seed_from_u64(seed)`. Tuples are visited
//! symbol by symbol in lexicographic order; each one is a member when
//! `(next_u64() >> 11) * 2^-53 < density`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use itertools::Itertools;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::definability::derive_structure;
use crate::error::{Error, Result};
use crate::logic::{parse_order_formula, Formula, OrderDefinitions};
use crate::order::{LinearOrder, Pattern};
use crate::structure::{Signature, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Linear,
    Betweenness,
    Cyclic,
    Triangle,
    TransitiveTournament,
    Constant,
    Random,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 7] = [
        GeneratorKind::Linear,
        GeneratorKind::Betweenness,
        GeneratorKind::Cyclic,
        GeneratorKind::Triangle,
        GeneratorKind::TransitiveTournament,
        GeneratorKind::Constant,
        GeneratorKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Linear => "linear",
            GeneratorKind::Betweenness => "betweenness",
            GeneratorKind::Cyclic => "cyclic",
            GeneratorKind::Triangle => "triangle",
            GeneratorKind::TransitiveTournament => "transitive_tournament",
            GeneratorKind::Constant => "constant",
            GeneratorKind::Random => "random",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s.replace('-', "_"))
            .ok_or_else(|| Error::InvalidSpec(format!("unknown generator `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub size: usize,
    pub seed: u64,
    pub density: f64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, size: usize) -> Self {
        GeneratorSpec {
            kind,
            size,
            seed: 0,
            density: 0.5,
        }
    }

    pub fn random(size: usize, seed: u64, density: f64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Random,
            size,
            seed,
            density,
        }
    }
}

/// `(v0<v1<v2 | v2<v1<v0)`: `v1` lies between `v0` and `v2`.
pub fn betweenness_formula() -> Formula {
    parse_order_formula("(v0<v1<v2 | v2<v1<v0)").unwrap()
}

/// `(v0<v1<v2 | v1<v2<v0 | v2<v0<v1)`: the cyclic order read off a linear order.
pub fn cyclic_formula() -> Formula {
    parse_order_formula("(v0<v1<v2 | v1<v2<v0 | v2<v0<v1)").unwrap()
}

fn ternary(name: &str, f: Formula, n: usize) -> Result<Structure> {
    let defs = OrderDefinitions::new(Signature::new([(name, 3)])?, vec![f])?;
    derive_structure(&LinearOrder::natural(n), &defs)
}

pub fn generate(spec: &GeneratorSpec) -> Result<Structure> {
    let n = spec.size;
    if n == 0 {
        return Err(Error::InvalidSpec("size must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::InvalidSpec(format!("density {} is outside [0,1]", spec.density)));
    }
    let binary = |name: &str, keep: &dyn Fn(usize, usize) -> bool| -> Result<Structure> {
        let sig = Signature::new([(name, 2)])?;
        let pairs: Vec<Vec<usize>> = (0..n)
            .cartesian_product(0..n)
            .filter(|&(a, b)| keep(a, b))
            .map(|(a, b)| vec![a, b])
            .collect();
        Structure::from_tuples(sig, n, &[pairs])
    };
    match spec.kind {
        GeneratorKind::Linear => Ok(LinearOrder::natural(n).to_structure()),
        GeneratorKind::Betweenness => ternary("S", betweenness_formula(), n),
        GeneratorKind::Cyclic => ternary("S", cyclic_formula(), n),
        GeneratorKind::Triangle => {
            if n != 3 {
                return Err(Error::InvalidSpec(format!("the triangle has 3 elements, not {n}")));
            }
            binary("R", &|a, b| b == (a + 1) % 3)
        }
        GeneratorKind::TransitiveTournament => binary("R", &|a, b| a < b),
        GeneratorKind::Constant => binary("E", &|a, b| a != b),
        GeneratorKind::Random => random_structure(&Arc::new(Signature::new([("R", 2)])?), n, spec.seed, spec.density),
    }
}

/// Seeded random structure over any signature.
pub fn random_structure(sig: &Arc<Signature>, n: usize, seed: u64, density: f64) -> Result<Structure> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidSpec(format!("density {density} is outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Structure::empty(sig.clone(), n)?;
    for (sym, symbol) in sig.symbols().iter().enumerate() {
        for t in (0..symbol.arity).map(|_| 0..n).multi_cartesian_product() {
            if unit(&mut rng) < density {
                s.insert(sym, &t)?;
            }
        }
    }
    Ok(s)
}

/// Uniform in `[0,1)` from the top 53 bits.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded random order definitions: each realizable pattern is accepted with probability one half.
pub fn random_definitions(sig: &Arc<Signature>, n: usize, seed: u64) -> Result<OrderDefinitions> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let formulas = sig
        .symbols()
        .iter()
        .map(|s| {
            let accepted: Vec<Pattern> = Pattern::all(s.arity, n)
                .into_iter()
                .filter(|_| rng.next_u64() >> 63 == 1)
                .collect();
            Formula::or(accepted.iter().map(Pattern::describe))
        })
        .collect();
    OrderDefinitions::new(sig.clone(), formulas)
}

/// Seeded uniformly random linear order on `n` elements.
pub fn random_order(n: usize, seed: u64) -> LinearOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        a.swap(i, j);
    }
    LinearOrder::new(a).unwrap()
}

/// Whether reversing `x` is an automorphism of `y`.
pub fn reversal_automorphism_check(y: &Structure, x: &LinearOrder) -> Result<bool> {
    if y.size() != x.len() {
        return Err(Error::InvalidOrder(format!(
            "order on {} elements for a structure of size {}",
            x.len(),
            y.size()
        )));
    }
    let n = x.len();
    let mut map = vec![0; n];
    for (i, &e) in x.ascending().iter().enumerate() {
        map[e] = x.ascending()[n - 1 - i];
    }
    y.is_automorphism(&map)
}

/// Fixed corpus of small structures (sizes 1 to 5) used by tests and sweeps.
pub fn corpus() -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push(generate(&GeneratorSpec::new(GeneratorKind::Linear, n)).unwrap());
        out.push(generate(&GeneratorSpec::new(GeneratorKind::TransitiveTournament, n)).unwrap());
        out.push(generate(&GeneratorSpec::new(GeneratorKind::Constant, n)).unwrap());
    }
    for n in 3..=5 {
        out.push(generate(&GeneratorSpec::new(GeneratorKind::Betweenness, n)).unwrap());
        out.push(generate(&GeneratorSpec::new(GeneratorKind::Cyclic, n)).unwrap());
    }
    out.push(generate(&GeneratorSpec::new(GeneratorKind::Triangle, 3)).unwrap());
    for n in 2..=5 {
        for (seed, density) in [(1, 0.2), (2, 0.4), (3, 0.6), (4, 0.8)] {
            out.push(generate(&GeneratorSpec::random(n, seed + 10 * n as u64, density)).unwrap());
        }
    }
    let two = Arc::new(Signature::parse("P/1 R/2").unwrap());
    let dup = Arc::new(Signature::parse("R1/2 R2/2").unwrap());
    for n in 2..=5 {
        out.push(random_structure(&two, n, 100 + n as u64, 0.4).unwrap());
        let r = random_structure(&Arc::new(Signature::parse("R/2").unwrap()), n, 200 + n as u64, 0.5).unwrap();
        let tuples = r.tuples(0);
        out.push(Structure::from_tuples(dup.clone(), n, &[tuples.clone(), tuples]).unwrap());
    }
    let ternary = Arc::new(Signature::parse("T/3").unwrap());
    for n in 2..=5 {
        out.push(random_structure(&ternary, n, 300 + n as u64, 0.3).unwrap());
    }
    out.push(Structure::empty(Arc::new(Signature::parse("R/2").unwrap()), 4).unwrap());
    out
}
