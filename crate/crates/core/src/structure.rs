//! Finite relational structures over the domain `{0..n-1}`.
//!
//! Every relation is stored as a dense bit table indexed by the big-endian
//! base-`n` value of the tuple, so iterating set bits yields tuples in
//! lexicographic order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Name of the distinguished binary order symbol.
pub const ORDER_SYMBOL: &str = "<";

/// Largest relation table (in bits) a structure may allocate.
pub const MAX_TABLE_BITS: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

fn valid_name(name: &str) -> bool {
    if name == ORDER_SYMBOL {
        return true;
    }
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    // `v<digits>` is reserved for variables.
    !is_variable_name(name) && !matches!(name, "true" | "false")
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('v') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut out: Vec<Symbol> = Vec::new();
        for (name, arity) in symbols {
            let name = name.into();
            if !valid_name(&name) {
                return Err(Error::Signature(format!("`{name}` is not a valid symbol name")));
            }
            if arity == 0 {
                return Err(Error::Signature(format!("symbol `{name}` must have arity >= 1")));
            }
            if out.iter().any(|s| s.name == name) {
                return Err(Error::Signature(format!("duplicate symbol name `{name}`")));
            }
            if name == ORDER_SYMBOL && arity != 2 {
                return Err(Error::Signature("the order symbol `<` must be binary".into()));
            }
            out.push(Symbol { name, arity });
        }
        Ok(Signature { symbols: out })
    }

    /// The signature `{ < / 2 }` of linear orders.
    pub fn order() -> Self {
        Signature {
            symbols: vec![Symbol {
                name: ORDER_SYMBOL.to_string(),
                arity: 2,
            }],
        }
    }

    /// Parses a whitespace separated list such as `R/2 S/3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in text.split_whitespace() {
            let (name, arity) = item
                .rsplit_once('/')
                .ok_or_else(|| Error::Signature(format!("expected `<name>/<arity>`, got `{item}`")))?;
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::Signature(format!("bad arity in `{item}`")))?;
            pairs.push((name.to_string(), arity));
        }
        Signature::new(pairs)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|s| s.name == name).map(|s| s.arity)
    }

    pub fn has_order_symbol(&self) -> bool {
        self.arity_of(ORDER_SYMBOL) == Some(2)
    }

    /// The sub-signature made of the symbols at `indices`, kept in signature order.
    pub fn restrict(&self, indices: &[usize]) -> Signature {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Signature {
            symbols: idx.into_iter().map(|i| self.symbols[i].clone()).collect(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}/{}", s.name, s.arity)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Relation {
    arity: usize,
    bits: Vec<u64>,
}

impl Relation {
    fn empty(arity: usize, cells: usize) -> Self {
        Relation {
            arity,
            bits: vec![0; cells.div_ceil(64)],
        }
    }

    #[inline]
    fn get(&self, idx: usize) -> bool {
        (self.bits[idx >> 6] >> (idx & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, idx: usize, value: bool) {
        if value {
            self.bits[idx >> 6] |= 1 << (idx & 63);
        } else {
            self.bits[idx >> 6] &= !(1 << (idx & 63));
        }
    }

    fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }
}

/// A finite structure: a signature, a domain `{0..size-1}` and one tuple set per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Arc<Signature>,
    size: usize,
    relations: Vec<Relation>,
}

pub(crate) fn cell_count(size: usize, arity: usize) -> Result<usize> {
    let mut cells: usize = 1;
    for _ in 0..arity {
        cells = cells.checked_mul(size).filter(|&c| c <= MAX_TABLE_BITS).ok_or(Error::CapExceeded {
            what: "relation table size",
            value: usize::MAX,
            cap: MAX_TABLE_BITS,
        })?;
    }
    Ok(cells)
}

impl Structure {
    /// A structure with every relation empty.
    pub fn empty(signature: impl Into<Arc<Signature>>, size: usize) -> Result<Self> {
        let signature = signature.into();
        let relations = signature
            .symbols()
            .iter()
            .map(|s| Ok(Relation::empty(s.arity, cell_count(size, s.arity)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Structure {
            signature,
            size,
            relations,
        })
    }

    /// Builds a structure from per-symbol tuple lists (in signature order).
    pub fn from_tuples(
        signature: impl Into<Arc<Signature>>,
        size: usize,
        tuples: &[Vec<Vec<usize>>],
    ) -> Result<Self> {
        let mut s = Structure::empty(signature, size)?;
        if tuples.len() != s.signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} tuple lists given for {} symbols",
                tuples.len(),
                s.signature.len()
            )));
        }
        for (sym, list) in tuples.iter().enumerate() {
            for t in list {
                s.insert(sym, t)?;
            }
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.relations[symbol].arity
    }

    /// Table index of a tuple; entries must already be in range.
    #[inline]
    pub(crate) fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    #[inline]
    pub(crate) fn index_mapped(&self, tuple: &[usize], map: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.size + map[x])
    }

    pub(crate) fn decode(&self, mut idx: usize, arity: usize) -> Vec<usize> {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.size;
            idx /= self.size;
        }
        t
    }

    fn check_tuple(&self, symbol: usize, tuple: &[usize]) -> Result<()> {
        let sym = self
            .signature
            .symbols()
            .get(symbol)
            .ok_or_else(|| Error::UnknownSymbol(format!("#{symbol}")))?;
        if tuple.len() != sym.arity {
            return Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: tuple.len(),
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::OutOfRange {
                element: e,
                size: self.size,
            });
        }
        Ok(())
    }

    pub fn contains(&self, symbol: usize, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.relations[symbol].arity);
        self.relations[symbol].get(self.index(tuple))
    }

    #[inline]
    pub(crate) fn contains_index(&self, symbol: usize, idx: usize) -> bool {
        self.relations[symbol].get(idx)
    }

    #[inline]
    pub(crate) fn set_index(&mut self, symbol: usize, idx: usize, value: bool) {
        self.relations[symbol].set(idx, value)
    }

    pub fn insert(&mut self, symbol: usize, tuple: &[usize]) -> Result<()> {
        self.check_tuple(symbol, tuple)?;
        let idx = self.index(tuple);
        self.relations[symbol].set(idx, true);
        Ok(())
    }

    pub fn remove(&mut self, symbol: usize, tuple: &[usize]) -> Result<()> {
        self.check_tuple(symbol, tuple)?;
        let idx = self.index(tuple);
        self.relations[symbol].set(idx, false);
        Ok(())
    }

    /// Member tuples of `symbol` in lexicographic order.
    pub fn tuples(&self, symbol: usize) -> Vec<Vec<usize>> {
        let arity = self.relations[symbol].arity;
        self.relations[symbol]
            .iter_indices()
            .map(|i| self.decode(i, arity))
            .collect()
    }

    pub fn tuple_count(&self, symbol: usize) -> usize {
        self.relations[symbol].count()
    }

    pub(crate) fn member_indices(&self, symbol: usize) -> impl Iterator<Item = usize> + '_ {
        self.relations[symbol].iter_indices()
    }

    /// True when `symbol_a` and `symbol_b` have equal arity and equal extension.
    pub fn same_extension(&self, symbol_a: usize, symbol_b: usize) -> bool {
        self.relations[symbol_a] == self.relations[symbol_b]
    }

    /// The reduct to the symbols at `indices`.
    pub fn reduct(&self, indices: &[usize]) -> Structure {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Structure {
            signature: Arc::new(self.signature.restrict(&idx)),
            size: self.size,
            relations: idx.iter().map(|&i| self.relations[i].clone()).collect(),
        }
    }

    /// The same relations read over another signature with identical arities.
    pub fn with_signature(&self, signature: impl Into<Arc<Signature>>) -> Result<Structure> {
        let signature = signature.into();
        let arities: Vec<usize> = signature.symbols().iter().map(|s| s.arity).collect();
        let ours: Vec<usize> = self.relations.iter().map(|r| r.arity).collect();
        if arities != ours {
            return Err(Error::SignatureMismatch(format!(
                "cannot rename `{}` to `{}`",
                self.signature, signature
            )));
        }
        Ok(Structure {
            signature,
            size: self.size,
            relations: self.relations.clone(),
        })
    }

    /// Image of the structure under the bijection `map` (element `x` becomes `map[x]`).
    pub fn relabel(&self, map: &[usize]) -> Result<Structure> {
        check_permutation(map, self.size)?;
        let mut out = Structure::empty(self.signature.clone(), self.size)?;
        for sym in 0..self.relations.len() {
            let arity = self.relations[sym].arity;
            for idx in self.relations[sym].iter_indices() {
                let t = self.decode(idx, arity);
                let j = self.index_mapped(&t, map);
                out.relations[sym].set(j, true);
            }
        }
        Ok(out)
    }

    /// True when `map` is an automorphism.
    pub fn is_automorphism(&self, map: &[usize]) -> Result<bool> {
        check_permutation(map, self.size)?;
        Ok(self.preserved_by(map))
    }

    /// Assumes `map` is a permutation of the domain.
    pub(crate) fn preserved_by(&self, map: &[usize]) -> bool {
        (0..self.relations.len()).all(|sym| {
            let arity = self.relations[sym].arity;
            self.relations[sym].iter_indices().all(|idx| {
                let t = self.decode(idx, arity);
                self.relations[sym].get(self.index_mapped(&t, map))
            })
        })
    }

    /// Renders the structure in the line-oriented file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("signature");
        for s in self.signature.symbols() {
            out.push_str(&format!(" {}/{}", s.name, s.arity));
        }
        out.push('\n');
        out.push_str(&format!("domain {}\n", self.size));
        for (sym, s) in self.signature.symbols().iter().enumerate() {
            out.push_str(&s.name);
            out.push(':');
            for t in self.tuples(sym) {
                out.push_str(" (");
                out.push_str(&t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                out.push(')');
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable view used in reports.
    pub fn report(&self) -> StructureReport {
        StructureReport {
            signature: self.signature.symbols().to_vec(),
            size: self.size,
            relations: self
                .signature
                .symbols()
                .iter()
                .enumerate()
                .map(|(i, s)| (s.name.clone(), self.tuples(i)))
                .collect(),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.report().serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub signature: Vec<Symbol>,
    pub size: usize,
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

pub(crate) fn check_permutation(map: &[usize], n: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "expected {n} entries, got {}",
            map.len()
        )));
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return Err(Error::InvalidPermutation(format!("{map:?} is not a permutation of 0..{n}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Result of parsing a structure file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStructure {
    pub structure: Structure,
    /// External element names in domain order; `i`'s name for numeric domains.
    pub element_names: Vec<String>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the structure file format:
///
/// ```text
/// signature R/2 S/3
/// domain 3            # or: domain a b c
/// R: (0,1) (1,2) (2,0)
/// S:
/// ```
pub fn parse_structure(text: &str) -> Result<ParsedStructure> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (sig_line, header) = lines.next().ok_or_else(|| perr(1, "missing `signature` line"))?;
    let sig_text = header
        .strip_prefix("signature")
        .filter(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
        .ok_or_else(|| perr(sig_line, "expected `signature <name>/<arity> ...`"))?;
    let signature = Signature::parse(sig_text).map_err(|e| match e {
        Error::Signature(m) => perr(sig_line, m),
        other => other,
    })?;

    let (dom_line, dom) = lines.next().ok_or_else(|| perr(sig_line + 1, "missing `domain` line"))?;
    let dom_rest = dom
        .strip_prefix("domain")
        .filter(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
        .ok_or_else(|| perr(dom_line, "expected `domain <n>`"))?;
    let tokens: Vec<&str> = dom_rest.split_whitespace().collect();
    let names: Vec<String> = match tokens.as_slice() {
        [single] if single.parse::<usize>().is_ok() => {
            let n: usize = single.parse().unwrap();
            (0..n).map(|i| i.to_string()).collect()
        }
        _ => {
            let names: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
            for (i, name) in names.iter().enumerate() {
                if names[..i].contains(name) {
                    return Err(perr(dom_line, format!("duplicate element name `{name}`")));
                }
            }
            names
        }
    };
    let lookup: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let numeric = names.iter().enumerate().all(|(i, n)| *n == i.to_string());

    let mut structure = Structure::empty(signature, names.len()).map_err(|e| perr(dom_line, e.to_string()))?;
    for (line_no, line) in lines {
        let (name, body) = line
            .split_once(':')
            .ok_or_else(|| perr(line_no, "expected `<symbol>: (<e>,...) ...`"))?;
        let name = name.trim();
        let sym = structure
            .signature
            .index_of(name)
            .ok_or_else(|| perr(line_no, format!("unknown symbol `{name}`")))?;
        let arity = structure.arity(sym);
        let mut rest = body.trim();
        while !rest.is_empty() {
            let inner_end = rest
                .strip_prefix('(')
                .and_then(|r| r.find(')'))
                .ok_or_else(|| perr(line_no, format!("malformed tuple near `{rest}`")))?;
            let inner = &rest[1..=inner_end];
            rest = rest[inner_end + 2..].trim_start();
            let mut tuple = Vec::new();
            for item in inner.split(',') {
                let item = item.trim();
                let element = if numeric {
                    let e: usize = item
                        .parse()
                        .map_err(|_| perr(line_no, format!("`{item}` is not an element")))?;
                    if e >= names.len() {
                        return Err(perr(
                            line_no,
                            format!("element {e} is out of range for a domain of size {}", names.len()),
                        ));
                    }
                    e
                } else {
                    *lookup
                        .get(item)
                        .ok_or_else(|| perr(line_no, format!("unknown element `{item}`")))?
                };
                tuple.push(element);
            }
            if tuple.len() != arity {
                return Err(perr(
                    line_no,
                    format!("symbol `{name}` has arity {arity}, got a tuple of length {}", tuple.len()),
                ));
            }
            structure.insert(sym, &tuple).map_err(|e| perr(line_no, e.to_string()))?;
        }
    }
    Ok(ParsedStructure {
        structure,
        element_names: names,
    })
}

/// Induced substructure on `subset`, relabeled to `0..|subset|` in ascending element order.
pub fn induced_substructure(y: &Structure, subset: &[usize]) -> Result<Structure> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("subset must be nonempty".into()));
    }
    let mut h = subset.to_vec();
    h.sort_unstable();
    for w in h.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidSubset(format!("element {} listed twice", w[0])));
        }
    }
    if let Some(&e) = h.iter().find(|&&e| e >= y.size) {
        return Err(Error::InvalidSubset(format!(
            "element {e} is not in a domain of size {}",
            y.size
        )));
    }
    Ok(restrict_sorted(y, &h))
}

/// Induced substructure for an already sorted, duplicate-free, in-range subset.
pub(crate) fn restrict_sorted(y: &Structure, h: &[usize]) -> Structure {
    let m = h.len();
    let mut out = Structure::empty(y.signature.clone(), m).expect("substructure is no larger than its parent");
    for sym in 0..y.relations.len() {
        let arity = y.relations[sym].arity;
        let cells = m.pow(arity as u32);
        let mut local = vec![0usize; arity];
        for idx in 0..cells {
            let mut rest = idx;
            for slot in local.iter_mut().rev() {
                *slot = rest % m;
                rest /= m;
            }
            if y.relations[sym].get(y.index_mapped(&local, h)) {
                out.relations[sym].set(idx, true);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "signature R/2\ndomain 3\nR: (0,1) (1,2) (2,0)\n";

    #[test]
    fn parses_the_triangle() {
        let p = parse_structure(TRIANGLE).unwrap();
        let s = p.structure;
        assert_eq!(s.size(), 3);
        assert_eq!(s.tuples(0), vec![vec![0, 1], vec![1, 2], vec![2, 0]]);
        assert_eq!(p.element_names, vec!["0", "1", "2"]);
    }

    #[test]
    fn tuple_listing_order_is_irrelevant() {
        let a = parse_structure(TRIANGLE).unwrap().structure;
        let b = parse_structure("signature R/2\ndomain 3\nR: (2,0) (0,1)\nR: (1,2) (0,1)\n")
            .unwrap()
            .structure;
        assert_eq!(a, b);
    }

    #[test]
    fn empty_relation_structure() {
        let s = parse_structure("signature R/2\ndomain 3\n").unwrap().structure;
        assert_eq!(s.tuple_count(0), 0);
        assert_eq!(s.size(), 3);
    }

    #[test]
    fn comments_and_named_elements() {
        let text = "# a path\nsignature E/2\n\ndomain a b c  # three nodes\nE: (a,b) (b,c)\n";
        let p = parse_structure(text).unwrap();
        assert_eq!(p.element_names, vec!["a", "b", "c"]);
        assert_eq!(p.structure.tuples(0), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let arity = parse_structure("signature R/2\ndomain 3\nR: (0,1,2)\n").unwrap_err();
        assert!(matches!(arity, Error::Parse { line: 3, ref message } if message.contains("arity")));

        let range = parse_structure("signature R/2\ndomain 3\nR: (0,3)\n").unwrap_err();
        assert!(matches!(range, Error::Parse { line: 3, ref message } if message.contains("out of range")));

        let dup = parse_structure("signature R/2 R/1\ndomain 3\n").unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 1, ref message } if message.contains("duplicate")));

        let syntax = parse_structure("signature R/2\ndomain 3\nR: (0,1\n").unwrap_err();
        assert!(matches!(syntax, Error::Parse { line: 3, .. }));

        let unknown = parse_structure("signature R/2\n\ndomain 3\nS: (0,1)\n").unwrap_err();
        assert!(matches!(unknown, Error::Parse { line: 4, .. }));
    }

    #[test]
    fn text_round_trip() {
        let s = parse_structure(TRIANGLE).unwrap().structure;
        let again = parse_structure(&s.to_text()).unwrap().structure;
        assert_eq!(s, again);
    }

    #[test]
    fn order_symbol_in_header() {
        let s = parse_structure("signature </2\ndomain 2\n<: (0,1)\n").unwrap().structure;
        assert!(s.signature().has_order_symbol());
        assert!(Signature::parse("</3").is_err());
        assert!(Signature::parse("v1/2").is_err());
    }

    #[test]
    fn induced_substructures() {
        let t = parse_structure(TRIANGLE).unwrap().structure;
        assert_eq!(induced_substructure(&t, &[0, 1, 2]).unwrap(), t);
        let edge = induced_substructure(&t, &[0, 1]).unwrap();
        assert_eq!(edge.tuples(0), vec![vec![0, 1]]);
        // {0,2}: only (2,0) survives, relabeled to (1,0)
        let back = induced_substructure(&t, &[2, 0]).unwrap();
        assert_eq!(back.tuples(0), vec![vec![1, 0]]);

        let empty = parse_structure("signature R/2\ndomain 4\n").unwrap().structure;
        let sub = induced_substructure(&empty, &[1, 3]).unwrap();
        assert_eq!(sub.size(), 2);
        assert_eq!(sub.tuple_count(0), 0);

        assert!(induced_substructure(&t, &[]).is_err());
        assert!(induced_substructure(&t, &[0, 5]).is_err());
        assert!(induced_substructure(&t, &[1, 1]).is_err());
    }

    #[test]
    fn relabel_and_automorphisms() {
        let t = parse_structure(TRIANGLE).unwrap().structure;
        assert!(t.is_automorphism(&[1, 2, 0]).unwrap());
        assert!(!t.is_automorphism(&[1, 0, 2]).unwrap());
        let r = t.relabel(&[1, 0, 2]).unwrap();
        assert_eq!(r.tuples(0), vec![vec![0, 2], vec![1, 0], vec![2, 1]]);
        assert!(t.relabel(&[0, 0, 1]).is_err());
    }

    #[test]
    fn reducts_keep_signature_order() {
        let s = parse_structure("signature A/1 B/2 C/1\ndomain 2\nA: (0)\nC: (1)\n")
            .unwrap()
            .structure;
        let r = s.reduct(&[2, 0]);
        assert_eq!(r.signature().to_string(), "A/1 C/1");
        assert_eq!(r.tuples(1), vec![vec![1]]);
    }
}
