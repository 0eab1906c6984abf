//! Brute-force cross-checks on words: sliding block codes between edge
//! shifts, bounded verification of (eventual) conjugacies, and an
//! exhaustive search for small block maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::verdict::Verdict;

pub type Word = Vec<usize>;

/// The edge shift of a matrix: one symbol per edge, in row-major order of
/// `(from, to, multiplicity index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeShift {
    ends: Vec<(usize, usize)>,
    names: Vec<String>,
    /// Edges lying on bi-infinite paths.
    essential: Vec<bool>,
}

impl EdgeShift {
    pub fn new(a: &IntMatrix) -> Result<Self> {
        let count = edge_count(a)?;
        Self::with_names(a, (0..count).map(|k| format!("e{k}")).collect())
    }

    pub fn with_names(a: &IntMatrix, names: Vec<String>) -> Result<Self> {
        a.require_square("EdgeShift")?;
        a.check_adjacency()?;
        let n = a.dim();
        let mut ends = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = a.get(i, j).to_usize().ok_or_else(|| Error::BlockMap("edge count too large".into()))?;
                ends.extend(std::iter::repeat_n((i, j), c));
            }
        }
        if names.len() != ends.len() {
            return Err(Error::BlockMap(format!("{} names for {} edges", names.len(), ends.len())));
        }
        if names.iter().collect::<BTreeSet<_>>().len() != names.len() {
            return Err(Error::BlockMap("edge names repeat".into()));
        }
        // essential vertices: iteratively drop sources and sinks
        let mut alive = vec![true; n];
        loop {
            let mut out = vec![false; n];
            let mut inn = vec![false; n];
            for &(i, j) in &ends {
                if alive[i] && alive[j] {
                    out[i] = true;
                    inn[j] = true;
                }
            }
            let dead: Vec<usize> = (0..n).filter(|&v| alive[v] && !(out[v] && inn[v])).collect();
            if dead.is_empty() {
                break;
            }
            for v in dead {
                alive[v] = false;
            }
        }
        let essential = ends.iter().map(|&(i, j)| alive[i] && alive[j]).collect();
        Ok(EdgeShift { ends, names, essential })
    }

    pub fn symbols(&self) -> usize {
        self.ends.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn follows(&self, e: usize, f: usize) -> bool {
        self.ends[e].1 == self.ends[f].0
    }

    /// Allowed and extendable to a right-infinite path.
    pub fn is_allowed(&self, w: &[usize]) -> bool {
        w.iter().all(|&e| e < self.ends.len() && self.essential[e]) && w.windows(2).all(|p| self.follows(p[0], p[1]))
    }

    /// All allowed words of length `len`, lexicographic.
    pub fn words(&self, len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &out {
                for e in 0..self.ends.len() {
                    if self.essential[e] && w.last().is_none_or(|&l| self.follows(l, e)) {
                        let mut w2 = w.clone();
                        w2.push(e);
                        next.push(w2);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// One symbol per character when all names are single characters,
    /// otherwise whitespace-separated names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let single = self.names.iter().all(|n| n.chars().count() == 1);
        let tokens: Vec<String> = if single {
            text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        tokens.iter().map(|t| self.symbol(t).ok_or_else(|| Error::BlockMap(format!("unknown symbol `{t}`")))).collect()
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&e| self.names[e].as_str()).collect::<Vec<_>>().join(sep)
    }
}

fn edge_count(a: &IntMatrix) -> Result<usize> {
    a.entries().iter().map(|x| x.to_usize().ok_or_else(|| Error::BlockMap("edge count too large".into()))).sum()
}

/// A sliding block code. Output symbol `i` is `table[w[i - memory ..= i + anticipation]]`
/// where `anticipation = window - 1 - memory`; the first `memory` output
/// symbols come from `head[i]`, keyed by `w[0 ..= i + anticipation]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    pub window: usize,
    pub memory: usize,
    pub table: BTreeMap<Word, usize>,
    pub head: Vec<BTreeMap<Word, usize>>,
}

impl BlockMap {
    pub fn sliding(window: usize, table: BTreeMap<Word, usize>) -> Self {
        BlockMap { window, memory: 0, table, head: Vec::new() }
    }

    pub fn identity(shift: &EdgeShift) -> Self {
        Self::sliding(1, (0..shift.symbols()).map(|e| (vec![e], e)).collect())
    }

    pub fn anticipation(&self) -> usize {
        self.window - 1 - self.memory
    }

    fn validate(&self) -> Result<()> {
        if self.window == 0 || self.memory >= self.window {
            return Err(Error::BlockMap("need window >= 1 and memory < window".into()));
        }
        if self.head.len() != self.memory {
            return Err(Error::BlockMap(format!("{} head tables for memory {}", self.head.len(), self.memory)));
        }
        Ok(())
    }

    /// Image of a word; its length is `|w| - anticipation`.
    pub fn apply(&self, src: &EdgeShift, w: &[usize]) -> Result<Word> {
        self.validate()?;
        if !src.is_allowed(w) {
            return Err(Error::BlockMap(format!("`{}` is not allowed in the source", src.format_word(w))));
        }
        let ant = self.anticipation();
        let len = w.len().saturating_sub(ant);
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let (block, table) = if i < self.memory {
                (&w[..=i + ant], &self.head[i])
            } else {
                (&w[i - self.memory..=i + ant], &self.table)
            };
            let image = table
                .get(block)
                .ok_or_else(|| Error::BlockMap(format!("no image for block `{}`", src.format_word(block))))?;
            out.push(*image);
        }
        Ok(out)
    }

    pub fn to_json(&self, src: &EdgeShift, tgt: &EdgeShift) -> Value {
        let rows = |t: &BTreeMap<Word, usize>| -> Vec<Value> {
            t.iter()
                .map(|(b, &img)| {
                    let block: Vec<&str> = b.iter().map(|&e| src.names[e].as_str()).collect();
                    json!({ "block": block, "image": tgt.names[img] })
                })
                .collect()
        };
        json!({
            "window": self.window,
            "memory": self.memory,
            "table": rows(&self.table),
            "head": self.head.iter().map(|h| Value::Array(rows(h))).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, src: &EdgeShift, tgt: &EdgeShift) -> Result<Self> {
        let bad = |m: String| Error::BlockMap(m);
        let window = v.get("window").and_then(Value::as_u64).ok_or_else(|| bad("missing `window`".into()))? as usize;
        let memory = v.get("memory").and_then(Value::as_u64).unwrap_or(0) as usize;
        let read = |rows: &Value| -> Result<BTreeMap<Word, usize>> {
            let rows = rows.as_array().ok_or_else(|| bad("table must be an array".into()))?;
            let mut t = BTreeMap::new();
            for r in rows {
                let block = r
                    .get("block")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("row without `block`".into()))?
                    .iter()
                    .map(|s| {
                        let s = s.as_str().unwrap_or_default();
                        src.symbol(s).ok_or_else(|| bad(format!("unknown source symbol `{s}`")))
                    })
                    .collect::<Result<Word>>()?;
                let img = r.get("image").and_then(Value::as_str).unwrap_or_default();
                let img = tgt.symbol(img).ok_or_else(|| bad(format!("unknown target symbol `{img}`")))?;
                t.insert(block, img);
            }
            Ok(t)
        };
        let table = read(v.get("table").ok_or_else(|| bad("missing `table`".into()))?)?;
        let head = match v.get("head") {
            Some(Value::Array(hs)) => hs.iter().map(read).collect::<Result<_>>()?,
            _ => Vec::new(),
        };
        let m = BlockMap { window, memory, table, head };
        m.validate()?;
        Ok(m)
    }
}

pub fn apply_block_map(m: &BlockMap, src: &EdgeShift, w: &[usize]) -> Result<Word> {
    m.apply(src, w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedYes {
    /// Word length up to which the identities were checked.
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCounterexample {
    /// `image_not_allowed`, `shift_commutation`, `not_injective`,
    /// `not_surjective`, `not_inverse`, or `eventual_identity`.
    pub check: String,
    pub words: Vec<String>,
}

fn counterexample(check: &str, words: Vec<String>) -> Verdict<BoundedYes, OracleCounterexample> {
    Verdict::No(OracleCounterexample { check: check.into(), words })
}

/// Checks that a memoryless block map is a conjugacy of one-sided edge
/// shifts, on words of length up to `bound`. Injectivity is decided exactly
/// through the graph of pairs of paths with equal images.
pub fn verify_conjugacy(
    m: &BlockMap,
    src: &EdgeShift,
    tgt: &EdgeShift,
    bound: usize,
) -> Result<Verdict<BoundedYes, OracleCounterexample>> {
    m.validate()?;
    if m.memory != 0 {
        return Err(Error::BlockMap("conjugacy verification needs a map with memory 0".into()));
    }
    let k = m.window;
    if bound < k {
        return Err(Error::Precondition(format!("bound {bound} is shorter than the window {k}")));
    }
    for len in k..=bound {
        for w in src.words(len) {
            let img = match m.apply(src, &w) {
                Ok(img) => img,
                Err(_) => return Ok(counterexample("undefined_block", vec![src.format_word(&w)])),
            };
            if !tgt.is_allowed(&img) {
                return Ok(counterexample("image_not_allowed", vec![src.format_word(&w), tgt.format_word(&img)]));
            }
            if len > k && img[1..] != m.apply(src, &w[1..])?[..] {
                return Ok(counterexample("shift_commutation", vec![src.format_word(&w)]));
            }
        }
    }
    if let Some((x, y)) = injectivity_witness(m, src, bound)? {
        return Ok(counterexample("not_injective", vec![src.format_word(&x), src.format_word(&y)]));
    }
    let images: BTreeSet<Word> = src.words(bound).iter().map(|w| m.apply(src, w)).collect::<Result<_>>()?;
    for v in tgt.words(bound + 1 - k) {
        if !images.contains(&v) {
            return Ok(counterexample("not_surjective", vec![tgt.format_word(&v)]));
        }
    }
    Ok(Verdict::Yes(BoundedYes { bound }))
}

/// Two right-infinite paths with different first symbols and equal images,
/// shown by their length-`len` prefixes, if any exist.
fn injectivity_witness(m: &BlockMap, src: &EdgeShift, len: usize) -> Result<Option<(Word, Word)>> {
    let k = m.window;
    // states: pairs of allowed k-blocks with equal images
    let blocks = src.words(k);
    let image = |b: &Word| m.table.get(b).copied();
    let mut states: Vec<(Word, Word)> = Vec::new();
    for x in &blocks {
        for y in &blocks {
            if image(x).is_some() && image(x) == image(y) {
                states.push((x.clone(), y.clone()));
            }
        }
    }
    let index: HashMap<(Word, Word), usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let succ: Vec<Vec<usize>> = states
        .iter()
        .map(|(x, y)| {
            let mut out = Vec::new();
            for e in 0..src.symbols() {
                for f in 0..src.symbols() {
                    let mut x2 = x[1..].to_vec();
                    x2.push(e);
                    let mut y2 = y[1..].to_vec();
                    y2.push(f);
                    if let Some(&s) = index.get(&(x2, y2)) {
                        if src.follows(x[k - 1], e) && src.follows(y[k - 1], f) {
                            out.push(s);
                        }
                    }
                }
            }
            out
        })
        .collect();
    // states with an infinite forward path
    let mut alive = vec![true; states.len()];
    loop {
        let mut changed = false;
        for s in 0..states.len() {
            if alive[s] && !succ[s].iter().any(|&t| alive[t]) {
                alive[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let Some(start) = (0..states.len()).find(|&s| alive[s] && states[s].0[0] != states[s].1[0]) else {
        return Ok(None);
    };
    let (mut x, mut y) = states[start].clone();
    let mut cur = start;
    while x.len() < len {
        let next = *succ[cur].iter().find(|&&t| alive[t]).expect("alive state has an alive successor");
        x.push(*states[next].0.last().expect("nonempty"));
        y.push(*states[next].1.last().expect("nonempty"));
        cur = next;
    }
    Ok(Some((x, y)))
}

/// Checks `S^(d+1) h = S^d h S` and the same identity for `inverse`, plus
/// `inverse . h = id` and `h . inverse = id`, on words of length
/// `bound + d + window`.
pub fn verify_eventual_conjugacy_map(
    h: &BlockMap,
    inverse: &BlockMap,
    delay: usize,
    src: &EdgeShift,
    tgt: &EdgeShift,
    bound: usize,
) -> Result<Verdict<BoundedYes, OracleCounterexample>> {
    for (map, from, to) in [(h, src, tgt), (inverse, tgt, src)] {
        let len = bound + delay + map.window;
        for w in from.words(len) {
            let img = map.apply(from, &w)?;
            if !to.is_allowed(&img) {
                return Ok(counterexample("image_not_allowed", vec![from.format_word(&w), to.format_word(&img)]));
            }
            let tail = map.apply(from, &w[1..])?;
            if img.len() > delay + 1 && img[delay + 1..] != tail[delay..] {
                return Ok(counterexample("eventual_identity", vec![from.format_word(&w)]));
            }
        }
    }
    for (first, second, from, via) in [(h, inverse, src, tgt), (inverse, h, tgt, src)] {
        let len = bound + first.window + second.window;
        for w in from.words(len) {
            let back = second.apply(via, &first.apply(from, &w)?)?;
            if back[..] != w[..back.len()] {
                return Ok(counterexample("not_inverse", vec![from.format_word(&w)]));
            }
        }
    }
    Ok(Verdict::Yes(BoundedYes { bound }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_window: usize,
    pub max_alphabet: usize,
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_window: 3, max_alphabet: 8, node_budget: 5_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(BlockMap),
    /// Every memoryless block map with window up to the bound was rejected.
    NoneWithinWindow(usize),
    Exhausted(String),
}

/// Budget charged for each candidate that reaches the full verifier.
const VERIFY_COST: u64 = 256;

/// Exhaustive search for a memoryless block map `X_A -> X_B` with window
/// `1..=max_window` passing `verify_conjugacy` at `bound`.
pub fn search_block_maps(
    src: &EdgeShift,
    tgt: &EdgeShift,
    limits: SearchLimits,
    bound: usize,
) -> Result<SearchOutcome> {
    if src.symbols() > limits.max_alphabet || tgt.symbols() > limits.max_alphabet {
        return Ok(SearchOutcome::Exhausted(format!("alphabet larger than {}", limits.max_alphabet)));
    }
    let mut budget = limits.node_budget;
    for k in 1..=limits.max_window {
        let blocks = src.words(k);
        if blocks.is_empty() {
            break;
        }
        let pos: HashMap<&Word, usize> = blocks.iter().enumerate().map(|(i, b)| (b, i)).collect();
        // overlapping pairs (i, j): block j follows block i in some (k+1)-word
        let mut earlier_neighbours: Vec<Vec<(usize, bool)>> = vec![Vec::new(); blocks.len()];
        let mut overlaps = Vec::new();
        for w in src.words(k + 1) {
            let (i, j) = (pos[&w[..k].to_vec()], pos[&w[1..].to_vec()]);
            overlaps.push((i, j));
            if i < j {
                earlier_neighbours[j].push((i, true));
            } else {
                earlier_neighbours[i].push((j, false));
            }
        }
        let mut assign = vec![usize::MAX; blocks.len()];
        let mut found = None;
        let target_pairs: BTreeSet<(usize, usize)> = tgt.words(2).into_iter().map(|w| (w[0], w[1])).collect();
        let complete =
            assign_blocks(0, &blocks, &earlier_neighbours, tgt, &mut assign, &mut budget, &mut |assign, budget| {
                // a conjugacy hits every symbol and every 2-word of the target
                let pairs: BTreeSet<(usize, usize)> = overlaps.iter().map(|&(i, j)| (assign[i], assign[j])).collect();
                let symbols: BTreeSet<usize> = assign.iter().copied().collect();
                if symbols.len() < tgt.symbols() || pairs != target_pairs {
                    return false;
                }
                *budget = budget.saturating_sub(VERIFY_COST);
                let table = blocks.iter().cloned().zip(assign.iter().copied()).collect();
                let m = BlockMap::sliding(k, table);
                match verify_conjugacy(&m, src, tgt, bound.max(k)) {
                    Ok(v) if v.is_yes() => {
                        found = Some(m);
                        true
                    }
                    _ => false,
                }
            });
        if let Some(m) = found {
            return Ok(SearchOutcome::Found(m));
        }
        if !complete {
            return Ok(SearchOutcome::Exhausted(format!("node budget {} exhausted at window {k}", limits.node_budget)));
        }
    }
    Ok(SearchOutcome::NoneWithinWindow(limits.max_window))
}

/// Backtracking over block images; `neighbours[j]` lists earlier blocks `i`
/// overlapping `j`, with `true` when `i` precedes `j`. Returns `false` when
/// the search stopped early: a map was accepted or the budget ran out.
fn assign_blocks(
    j: usize,
    blocks: &[Word],
    neighbours: &[Vec<(usize, bool)>],
    tgt: &EdgeShift,
    assign: &mut Vec<usize>,
    budget: &mut u64,
    accept: &mut impl FnMut(&[usize], &mut u64) -> bool,
) -> bool {
    if j == blocks.len() {
        // stop the search once a map is accepted
        return !accept(assign, budget);
    }
    for s in 0..tgt.symbols() {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let ok = neighbours[j].iter().all(|&(i, before)| {
            if i == j {
                true
            } else if before {
                tgt.follows(assign[i], s)
            } else {
                tgt.follows(s, assign[i])
            }
        });
        if !ok {
            continue;
        }
        // self-overlap (e.g. a loop block) needs the image to follow itself
        if neighbours[j].iter().any(|&(i, _)| i == j) && !tgt.follows(s, s) {
            continue;
        }
        assign[j] = s;
        if !assign_blocks(j + 1, blocks, neighbours, tgt, assign, budget, accept) {
            return false;
        }
        assign[j] = usize::MAX;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix;

    fn named(a: &IntMatrix, names: &[&str]) -> EdgeShift {
        EdgeShift::with_names(a, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn table(src: &EdgeShift, tgt: &EdgeShift, rows: &[(&str, &str)]) -> BTreeMap<Word, usize> {
        rows.iter().map(|(b, i)| (src.parse_word(b).unwrap(), tgt.symbol(i).unwrap())).collect()
    }

    fn recoding() -> (EdgeShift, EdgeShift, BlockMap) {
        let a = named(&matrix![[1, 1], [2, 0]], &["e", "f", "g", "h"]);
        let c = named(&matrix![[1, 1, 0], [0, 0, 1], [2, 2, 0]], &["e1", "e2", "f1", "g1", "h1", "g2", "h2"]);
        let rows = [
            ("ee", "e1"),
            ("ef", "e2"),
            ("fg", "f1"),
            ("fh", "f1"),
            ("ge", "g1"),
            ("gf", "g2"),
            ("he", "h1"),
            ("hf", "h2"),
        ];
        let t = table(&a, &c, &rows);
        (a, c, BlockMap::sliding(2, t))
    }

    #[test]
    fn recoding_image_and_conjugacy() {
        let (a, c, h) = recoding();
        let w = a.parse_word("eefgefhf").unwrap();
        let img = h.apply(&a, &w).unwrap();
        assert_eq!(c.format_word(&img), "e1 e2 f1 g1 e2 f1 h2");
        assert!(verify_conjugacy(&h, &a, &c, 6).unwrap().is_yes());
    }

    #[test]
    fn identity_is_a_conjugacy() {
        let s = EdgeShift::new(&matrix![[1, 1], [1, 0]]).unwrap();
        assert!(verify_conjugacy(&BlockMap::identity(&s), &s, &s, 5).unwrap().is_yes());
    }

    #[test]
    fn collapsing_map_is_not_injective() {
        let two = EdgeShift::new(&matrix![[2]]).unwrap();
        let one = EdgeShift::new(&matrix![[1]]).unwrap();
        let m = BlockMap::sliding(1, BTreeMap::from([(vec![0], 0), (vec![1], 0)]));
        let no = verify_conjugacy(&m, &two, &one, 4).unwrap().no().unwrap();
        assert_eq!(no.check, "not_injective");
        assert_eq!(no.words.len(), 2);
    }

    #[test]
    fn missing_target_word_is_not_surjective() {
        let one = EdgeShift::new(&matrix![[1]]).unwrap();
        let two = EdgeShift::new(&matrix![[2]]).unwrap();
        let m = BlockMap::sliding(1, BTreeMap::from([(vec![0], 0)]));
        assert_eq!(verify_conjugacy(&m, &one, &two, 3).unwrap().no().unwrap().check, "not_surjective");
    }

    fn delayed_pair() -> (EdgeShift, EdgeShift, BlockMap, BlockMap) {
        let a = named(&matrix![[0, 2, 2], [1, 0, 0], [1, 0, 0]], &["a", "b", "c", "d", "e", "f"]);
        let b = named(&matrix![[0, 3, 1], [1, 0, 0], [1, 0, 0]], &["a'", "b'", "c'", "d'", "e'", "f'"]);
        let prime = |e: usize| e;
        let mut h = BTreeMap::new();
        for w in a.words(2) {
            h.insert(w.clone(), if w[0] == 2 { 4 } else { prime(w[1]) });
        }
        let head = BTreeMap::from_iter((0..6).map(|e| (vec![e], prime(e))));
        let mut g = BTreeMap::new();
        for w in b.words(2) {
            g.insert(w.clone(), if w[0] == 2 { 5 } else { w[1] });
        }
        let h = BlockMap { window: 2, memory: 1, table: h, head: vec![head.clone()] };
        let g = BlockMap { window: 2, memory: 1, table: g, head: vec![head] };
        (a, b, h, g)
    }

    #[test]
    fn delayed_conjugacy_needs_delay_one() {
        let (a, b, h, g) = delayed_pair();
        let w = a.parse_word("cfae").unwrap();
        assert_eq!(b.format_word(&h.apply(&a, &w).unwrap()), "c' e' a' e'");
        assert!(verify_eventual_conjugacy_map(&h, &g, 1, &a, &b, 5).unwrap().is_yes());
        let no = verify_eventual_conjugacy_map(&h, &g, 0, &a, &b, 5).unwrap().no().unwrap();
        assert_eq!(no.check, "eventual_identity");
    }

    #[test]
    fn conjugacy_is_an_eventual_conjugacy_with_no_delay() {
        let s = EdgeShift::new(&matrix![[1, 1], [1, 0]]).unwrap();
        let id = BlockMap::identity(&s);
        assert!(verify_eventual_conjugacy_map(&id, &id, 0, &s, &s, 5).unwrap().is_yes());
    }

    #[test]
    fn search_finds_recoding() {
        let (a, c, _) = recoding();
        match search_block_maps(&a, &c, SearchLimits { max_window: 2, ..Default::default() }, 6).unwrap() {
            SearchOutcome::Found(m) => assert!(verify_conjugacy(&m, &a, &c, 6).unwrap().is_yes()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn block_map_json_round_trip() {
        let (a, c, h) = recoding();
        assert_eq!(BlockMap::from_json(&h.to_json(&a, &c), &a, &c).unwrap(), h);
    }
}
