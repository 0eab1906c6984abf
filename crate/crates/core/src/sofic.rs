//! Sofic shifts presented by labelled graphs.
//!
//! Vertex sets are bitmasks, so presentations are limited to 64 vertices.
//! `I(x)` denotes the set of vertices at which a path labelled `x` starts.
//! The Krieger cover has one state per past set `P(x)`, `x` right-infinite,
//! and an edge `P(ax) -a-> P(x)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Word = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LabelledEdge {
    pub from: usize,
    pub to: usize,
    /// Index into the alphabet.
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    vertices: usize,
    alphabet: Vec<String>,
    edges: Vec<LabelledEdge>,
}

const MAX_VERTICES: usize = 64;

impl LabelledGraph {
    pub fn new(vertices: usize, alphabet: Vec<String>, edges: Vec<LabelledEdge>) -> Result<Self> {
        if vertices > MAX_VERTICES {
            return Err(Error::Graph(format!("at most {MAX_VERTICES} vertices are supported")));
        }
        if edges.is_empty() {
            return Err(Error::Graph("a labelled graph needs at least one edge".into()));
        }
        let distinct: BTreeSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::Graph("alphabet has repeated symbols".into()));
        }
        for e in &edges {
            if e.from >= vertices || e.to >= vertices {
                return Err(Error::Graph(format!("edge {}->{} has an endpoint out of range", e.from, e.to)));
            }
            if e.label >= alphabet.len() {
                return Err(Error::Graph(format!("edge {}->{} has an undeclared label", e.from, e.to)));
            }
        }
        Ok(LabelledGraph { vertices, alphabet, edges })
    }

    /// Builds a graph from `(from, to, label)` triples; the alphabet is the
    /// set of labels in order of first appearance.
    pub fn from_triples(vertices: usize, triples: &[(usize, usize, &str)]) -> Result<Self> {
        let mut alphabet: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for &(from, to, label) in triples {
            let idx = match alphabet.iter().position(|a| a == label) {
                Some(i) => i,
                None => {
                    alphabet.push(label.to_string());
                    alphabet.len() - 1
                }
            };
            edges.push(LabelledEdge { from, to, label: idx });
        }
        Self::new(vertices, alphabet, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[LabelledEdge] {
        &self.edges
    }

    /// Built-in presentations: `even-shift`, `odd-shift`, `golden-mean`, `full:N`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "even-shift" => Self::from_triples(2, &[(0, 0, "1"), (0, 1, "0"), (1, 0, "0")]),
            "odd-shift" => Self::from_triples(2, &[(0, 1, "0"), (0, 1, "1"), (1, 0, "0")]),
            "golden-mean" => Self::from_triples(2, &[(0, 0, "e"), (0, 1, "f"), (1, 0, "g")]),
            _ => {
                let n: usize = name
                    .strip_prefix("full:")
                    .and_then(|n| n.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
                let alphabet: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                let edges = (0..n).map(|label| LabelledEdge { from: 0, to: 0, label }).collect();
                Self::new(1, alphabet, edges)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> =
            self.edges.iter().map(|e| json!({ "from": e.from, "to": e.to, "label": self.alphabet[e.label] })).collect();
        json!({ "vertices": self.vertices, "alphabet": self.alphabet, "edges": edges })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Graph(m.to_string());
        let vertices = v.get("vertices").and_then(Value::as_u64).ok_or_else(|| bad("missing `vertices`"))? as usize;
        let edges_v = v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing `edges`"))?;
        let label_of = |x: &Value| -> Option<String> {
            match x {
                Value::String(s) => Some(s.clone()),
                Value::Number(n) => Some(n.to_string()),
                _ => None,
            }
        };
        let mut alphabet: Vec<String> = match v.get("alphabet") {
            Some(Value::Array(a)) => {
                a.iter().map(label_of).collect::<Option<_>>().ok_or_else(|| bad("bad alphabet"))?
            }
            Some(_) => return Err(bad("`alphabet` must be an array")),
            None => Vec::new(),
        };
        let declared = !alphabet.is_empty();
        let mut edges = Vec::new();
        for (k, e) in edges_v.iter().enumerate() {
            let field = |name: &str| e.get(name).and_then(Value::as_u64).map(|x| x as usize);
            let (Some(from), Some(to)) = (field("from"), field("to")) else {
                return Err(bad(&format!("edge {k} needs integer `from` and `to`")));
            };
            let label = e.get("label").and_then(label_of).ok_or_else(|| bad(&format!("edge {k} has no label")))?;
            let idx = match alphabet.iter().position(|a| *a == label) {
                Some(i) => i,
                None if declared => return Err(bad(&format!("edge {k} label `{label}` is not in the alphabet"))),
                None => {
                    alphabet.push(label);
                    alphabet.len() - 1
                }
            };
            edges.push(LabelledEdge { from, to, label: idx });
        }
        Self::new(vertices, alphabet, edges)
    }

    /// Parses a word: one character per symbol when every symbol is a single
    /// character, otherwise whitespace-separated symbols.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let single = self.alphabet.iter().all(|a| a.chars().count() == 1);
        let tokens: Vec<String> = if single {
            text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        } else {
            text.split_whitespace().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.alphabet
                    .iter()
                    .position(|a| a == t)
                    .ok_or_else(|| Error::Graph(format!("symbol `{t}` is not in the alphabet")))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        let sep = if self.alphabet.iter().all(|a| a.chars().count() == 1) { "" } else { " " };
        w.iter().map(|&a| self.alphabet[a].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// The essential part (vertices on bi-infinite paths) and, for each of
    /// its vertices, the original index. `None` when it is empty.
    pub fn essential(&self) -> Option<(LabelledGraph, Vec<usize>)> {
        let mut alive = vec![true; self.vertices];
        loop {
            let mut out = vec![false; self.vertices];
            let mut inn = vec![false; self.vertices];
            for e in &self.edges {
                if alive[e.from] && alive[e.to] {
                    out[e.from] = true;
                    inn[e.to] = true;
                }
            }
            let mut changed = false;
            for v in 0..self.vertices {
                if alive[v] && !(out[v] && inn[v]) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..self.vertices).filter(|&v| alive[v]).collect();
        if keep.is_empty() {
            return None;
        }
        let mut new_index = vec![usize::MAX; self.vertices];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| alive[e.from] && alive[e.to])
            .map(|e| LabelledEdge { from: new_index[e.from], to: new_index[e.to], label: e.label })
            .collect();
        let g = LabelledGraph { vertices: keep.len(), alphabet: self.alphabet.clone(), edges };
        Some((g, keep))
    }

    /// No vertex has two incoming edges with the same label.
    pub fn is_left_resolving(&self) -> bool {
        let set: BTreeSet<(usize, usize)> = self.edges.iter().map(|e| (e.to, e.label)).collect();
        set.len() == self.edges.len()
    }

    /// No vertex has two outgoing edges with the same label.
    pub fn is_right_resolving(&self) -> bool {
        let set: BTreeSet<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.label)).collect();
        set.len() == self.edges.len()
    }
}

/// Transition tables of a graph: `pre[a][v]` is the set of sources of
/// `a`-edges into `v`, `post[a][u]` the set of targets of `a`-edges from `u`.
struct Tables {
    n: usize,
    labels: usize,
    pre: Vec<Vec<u64>>,
    post: Vec<Vec<u64>>,
}

impl Tables {
    fn new(g: &LabelledGraph) -> Self {
        let (n, labels) = (g.vertices, g.alphabet.len());
        let mut pre = vec![vec![0u64; n]; labels];
        let mut post = vec![vec![0u64; n]; labels];
        for e in &g.edges {
            pre[e.label][e.to] |= 1 << e.from;
            post[e.label][e.from] |= 1 << e.to;
        }
        Tables { n, labels, pre, post }
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn apply(table: &[u64], set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            out |= table[v];
            s &= s - 1;
        }
        out
    }

    fn pre(&self, a: usize, set: u64) -> u64 {
        Self::apply(&self.pre[a], set)
    }

    fn post(&self, a: usize, set: u64) -> u64 {
        Self::apply(&self.post[a], set)
    }

    fn post_word(&self, w: &[usize], set: u64) -> u64 {
        w.iter().fold(set, |s, &a| self.post(a, s))
    }

    fn pre_word(&self, w: &[usize], set: u64) -> u64 {
        w.iter().rev().fold(set, |s, &a| self.pre(a, s))
    }
}

/// Deterministic automaton on vertex subsets under `step`, with Moore
/// classes of the language "nonempty after reading".
struct SubsetAutomaton {
    states: Vec<u64>,
    index: HashMap<u64, usize>,
    trans: Vec<Vec<Option<usize>>>,
    class: Vec<usize>,
}

impl SubsetAutomaton {
    fn build(roots: &[u64], labels: usize, step: impl Fn(usize, u64) -> u64) -> Self {
        let mut states = Vec::new();
        let mut index = HashMap::new();
        let mut queue = VecDeque::new();
        for &r in roots {
            if r != 0 && !index.contains_key(&r) {
                index.insert(r, states.len());
                states.push(r);
                queue.push_back(r);
            }
        }
        let mut trans: Vec<Vec<Option<usize>>> = Vec::new();
        while let Some(s) = queue.pop_front() {
            let mut row = Vec::with_capacity(labels);
            for a in 0..labels {
                let t = step(a, s);
                if t == 0 {
                    row.push(None);
                    continue;
                }
                let id = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    queue.push_back(t);
                    states.len() - 1
                });
                row.push(Some(id));
            }
            trans.push(row);
        }
        let class = moore_classes(&trans);
        SubsetAutomaton { states, index, trans, class }
    }

    fn class_of(&self, set: u64) -> Option<usize> {
        self.index.get(&set).map(|&i| self.class[i])
    }
}

/// Moore refinement of a complete-with-sink automaton where every state
/// accepts and a missing transition rejects.
fn moore_classes(trans: &[Vec<Option<usize>>]) -> Vec<usize> {
    let mut class = vec![0usize; trans.len()];
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let mut next = Vec::with_capacity(trans.len());
        for (s, row) in trans.iter().enumerate() {
            let sig: Vec<Option<usize>> = row.iter().map(|t| t.map(|t| class[t])).collect();
            let n = ids.len();
            next.push(*ids.entry((class[s], sig)).or_insert(n));
        }
        let before = class.iter().collect::<BTreeSet<_>>().len();
        if ids.len() == before {
            return next;
        }
        class = next;
    }
}

fn essential_tables(g: &LabelledGraph) -> Result<(LabelledGraph, Vec<usize>, Tables)> {
    let (e, map) = g.essential().ok_or_else(|| Error::Graph("the presented shift is empty".into()))?;
    let t = Tables::new(&e);
    Ok((e, map, t))
}

/// All words of length `0..=max_len` in the language, in length-lexicographic order.
pub fn language(g: &LabelledGraph, max_len: usize) -> BTreeSet<(usize, Word)> {
    let mut out = BTreeSet::new();
    out.insert((0, Vec::new()));
    let Some((e, _)) = g.essential() else {
        return out;
    };
    let t = Tables::new(&e);
    let mut frontier = vec![(Vec::new(), t.all())];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (w, set) in &frontier {
            for a in 0..t.labels {
                let s = t.post(a, *set);
                if s != 0 {
                    let mut w2: Word = w.clone();
                    w2.push(a);
                    out.insert((len, w2.clone()));
                    next.push((w2, s));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Language words as strings, for comparing presentations with different
/// label orders.
pub fn language_strings(g: &LabelledGraph, max_len: usize) -> BTreeSet<String> {
    language(g, max_len).into_iter().map(|(_, w)| g.format_word(&w)).collect()
}

/// `x = prefix . period^infinity` with `I(x)` the state's vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationCertificate {
    pub prefix: String,
    pub period: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverState {
    /// Vertex sets (original numbering) with this past set.
    pub subsets: Vec<Vec<usize>>,
    pub certificate: StabilizationCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub graph: LabelledGraph,
    pub states: Vec<CoverState>,
    /// For the Fischer cover, the synchronizing word used to locate it.
    pub sync_word: Option<String>,
}

impl Cover {
    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph.to_json(),
            "states": self.states,
            "sync_word": self.sync_word,
        })
    }
}

fn mask_to_vec(mask: u64, map: &[usize]) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).map(|v| map[v]).collect()
}

/// The Krieger cover before packaging: subsets grouped by past set.
struct KriegerData {
    tables: Tables,
    essential: LabelledGraph,
    map: Vec<usize>,
    /// Stable sets `I(x)`, ascending.
    stable: Vec<u64>,
    /// Certificate words per stable set.
    certs: HashMap<u64, (Word, Word)>,
    past: SubsetAutomaton,
    /// Past-set classes in state order, each with its stable sets.
    states: Vec<(usize, Vec<u64>)>,
}

const MAX_RELATIONS: usize = 500_000;

fn krieger_data(g: &LabelledGraph, extra_roots: &[u64]) -> Result<KriegerData> {
    let (essential, map, t) = essential_tables(g)?;
    let n = t.n;
    // Relation R_w: row u = set of ends of paths labelled w from u.
    let identity: Vec<u64> = (0..n).map(|u| 1u64 << u).collect();
    let mut rels: Vec<Vec<u64>> = vec![identity.clone()];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::from([(identity, 0)]);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut succ: Vec<Vec<Option<usize>>> = Vec::new();
    let mut i = 0;
    while i < rels.len() {
        let mut row = Vec::with_capacity(t.labels);
        for a in 0..t.labels {
            let next: Vec<u64> = rels[i].iter().map(|&r| t.post(a, r)).collect();
            if next.iter().all(|&r| r == 0) {
                row.push(None);
                continue;
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if rels.len() >= MAX_RELATIONS {
                        return Err(Error::Graph(format!("more than {MAX_RELATIONS} path relations")));
                    }
                    index.insert(next.clone(), rels.len());
                    rels.push(next);
                    parent.push(Some((i, a)));
                    rels.len() - 1
                }
            };
            row.push(Some(id));
        }
        succ.push(row);
        i += 1;
    }
    let dom = |r: &[u64]| r.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u64, |m, (u, _)| m | 1 << u);
    let doms: Vec<u64> = rels.iter().map(|r| dom(r)).collect();

    // Keep relations with an infinite path through relations of equal domain.
    let mut alive = vec![true; rels.len()];
    loop {
        let mut changed = false;
        for r in 0..rels.len() {
            if alive[r] && !succ[r].iter().flatten().any(|&s| alive[s] && doms[s] == doms[r]) {
                alive[r] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let word_to = |mut r: usize| {
        let mut w = Vec::new();
        while let Some((p, a)) = parent[r] {
            w.push(a);
            r = p;
        }
        w.reverse();
        w
    };
    let mut certs: HashMap<u64, (Word, Word)> = HashMap::new();
    for r in 0..rels.len() {
        if !alive[r] || certs.contains_key(&doms[r]) {
            continue;
        }
        // Walk inside the surviving equal-domain subgraph until a repeat.
        let mut path = vec![r];
        let mut labels: Word = Vec::new();
        let mut seen = HashMap::from([(r, 0usize)]);
        let mut cur = r;
        let cycle_start = loop {
            let (a, next) = succ[cur]
                .iter()
                .enumerate()
                .find_map(|(a, s)| s.filter(|&s| alive[s] && doms[s] == doms[r]).map(|s| (a, s)))
                .expect("surviving relation has a surviving successor");
            labels.push(a);
            if let Some(&pos) = seen.get(&next) {
                break pos;
            }
            seen.insert(next, path.len());
            path.push(next);
            cur = next;
        };
        let mut prefix = word_to(r);
        prefix.extend_from_slice(&labels[..cycle_start]);
        certs.insert(doms[r], (prefix, labels[cycle_start..].to_vec()));
    }
    let stable: Vec<u64> = certs.keys().copied().collect::<BTreeSet<_>>().into_iter().collect();

    let mut roots = stable.clone();
    roots.extend_from_slice(extra_roots);
    let past = SubsetAutomaton::build(&roots, t.labels, |a, s| t.pre(a, s));
    let mut states: Vec<(usize, Vec<u64>)> = Vec::new();
    for &s in &stable {
        let c = past.class_of(s).expect("root");
        match states.iter_mut().find(|(k, _)| *k == c) {
            Some((_, members)) => members.push(s),
            None => states.push((c, vec![s])),
        }
    }
    Ok(KriegerData { tables: t, essential, map, stable, certs, past, states })
}

impl KriegerData {
    fn state_of(&self, set: u64) -> Option<usize> {
        let c = self.past.class_of(set)?;
        self.states.iter().position(|(k, _)| *k == c)
    }

    /// The cover restricted to `keep` (state indices, ascending).
    fn cover(&self, keep: &[usize], sync_word: Option<String>) -> Result<Cover> {
        let t = &self.tables;
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut edges = BTreeSet::new();
        for &s in &self.stable {
            let to = self.state_of(s).expect("stable set has a state");
            for a in 0..t.labels {
                let p = t.pre(a, s);
                if p == 0 {
                    continue;
                }
                let from = self.state_of(p).expect("left extension of a stable set is stable");
                if let (Some(&f), Some(&g)) = (pos.get(&from), pos.get(&to)) {
                    edges.insert(LabelledEdge { from: f, to: g, label: a });
                }
            }
        }
        let graph = LabelledGraph::new(keep.len(), self.essential.alphabet.clone(), edges.into_iter().collect())?;
        let states = keep
            .iter()
            .map(|&s| {
                let members = &self.states[s].1;
                let (prefix, period) = &self.certs[&members[0]];
                CoverState {
                    subsets: members.iter().map(|&m| mask_to_vec(m, &self.map)).collect(),
                    certificate: StabilizationCertificate {
                        prefix: self.essential.format_word(prefix),
                        period: self.essential.format_word(period),
                    },
                }
            })
            .collect();
        Ok(Cover { graph, states, sync_word })
    }
}

/// The (left) Krieger cover.
pub fn krieger_cover(g: &LabelledGraph) -> Result<Cover> {
    let data = krieger_data(g, &[])?;
    let all: Vec<usize> = (0..data.states.len()).collect();
    data.cover(&all, None)
}

/// `I(prefix . period^infinity)` in the essential part, original numbering.
pub fn stable_set(g: &LabelledGraph, prefix: &[usize], period: &[usize]) -> Result<Vec<usize>> {
    let (_, map, t) = essential_tables(g)?;
    if period.is_empty() {
        return Err(Error::Precondition("period must be nonempty".into()));
    }
    let mut s = t.all();
    loop {
        let next = t.pre_word(period, s);
        if next == s {
            break;
        }
        s = next;
    }
    Ok(mask_to_vec(t.pre_word(prefix, s), &map))
}

/// Follower-set automaton of the essential part, rooted at the full vertex set.
struct Followers {
    t: Tables,
    auto: SubsetAutomaton,
}

impl Followers {
    fn new(t: Tables, extra: &[u64]) -> Self {
        let mut roots = vec![t.all()];
        roots.extend_from_slice(extra);
        let auto = SubsetAutomaton::build(&roots, t.labels, |a, s| t.post(a, s));
        Followers { t, auto }
    }

    fn class(&self, set: u64) -> usize {
        self.auto.class_of(set).expect("subset is in the automaton")
    }

    /// States reachable from the full vertex set.
    fn reachable(&self) -> Vec<usize> {
        let start = self.auto.index[&self.t.all()];
        let mut seen = vec![false; self.auto.states.len()];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            for s in self.auto.trans[order[i]].iter().flatten() {
                if !seen[*s] {
                    seen[*s] = true;
                    order.push(*s);
                }
            }
            i += 1;
        }
        order
    }

    /// Is `w` synchronizing: all nonempty `post_w(T)` over reachable `T`
    /// share one follower set?
    fn synchronizes(&self, w: &[usize]) -> bool {
        let target = self.t.post_word(w, self.t.all());
        if target == 0 {
            return false;
        }
        let c = self.class(target);
        self.reachable().into_iter().all(|s| {
            let p = self.t.post_word(w, self.auto.states[s]);
            p == 0 || self.auto.class_of(p) == Some(c)
        })
    }

    /// A shortest synchronizing word, by BFS over sets of follower classes.
    fn find_sync_word(&self, limit: usize) -> Option<Word> {
        let states: Vec<usize> = self.reachable();
        let start: BTreeSet<usize> = states.iter().copied().collect();
        let mut seen: HashMap<BTreeSet<usize>, ()> = HashMap::from([(start.clone(), ())]);
        let mut queue = VecDeque::from([(start, Vec::new())]);
        while let Some((set, w)) = queue.pop_front() {
            let classes: BTreeSet<usize> = set.iter().map(|&s| self.auto.class[s]).collect();
            if classes.len() == 1 {
                return Some(w);
            }
            for a in 0..self.t.labels {
                let next: BTreeSet<usize> = set.iter().filter_map(|&s| self.auto.trans[s][a]).collect();
                if next.is_empty() || seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= limit {
                    return None;
                }
                seen.insert(next.clone(), ());
                let mut w2 = w.clone();
                w2.push(a);
                queue.push_back((next, w2));
            }
        }
        None
    }
}

const SYNC_SEARCH_LIMIT: usize = 200_000;

/// The Fischer cover of an irreducible sofic shift: the part of the Krieger
/// cover on past sets of synchronizing sequences.
pub fn fischer_cover(g: &LabelledGraph) -> Result<Cover> {
    let (essential, _, t) = essential_tables(g)?;
    let probe = Followers::new(Tables::new(&essential), &[]);
    let u0 = probe
        .find_sync_word(SYNC_SEARCH_LIMIT)
        .ok_or_else(|| Error::Precondition("no synchronizing word found; the shift is not irreducible".into()))?;
    check_irreducible(&essential, &u0)?;
    let i_u0 = t.pre_word(&u0, t.all());
    let data = krieger_data(g, &[i_u0])?;
    let start = data.state_of(i_u0).expect("past set of a synchronizing word is a Krieger state");
    // Close under left extension: P(x) -> P(ax).
    let mut keep = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for &m in &data.states[s].1 {
            for a in 0..t.labels {
                let p = t.pre(a, m);
                if p != 0 {
                    let from = data.state_of(p).expect("stable");
                    if keep.insert(from) {
                        queue.push_back(from);
                    }
                }
            }
        }
    }
    let keep: Vec<usize> = keep.into_iter().collect();
    data.cover(&keep, Some(essential.format_word(&u0)))
}

/// Irreducibility of the presented shift, given a synchronizing word `u0`:
/// every word extends to one containing `u0`, and every word follows `u0`.
fn check_irreducible(essential: &LabelledGraph, u0: &[usize]) -> Result<()> {
    let t = Tables::new(essential);
    let after: u64 = {
        let f = Followers::new(Tables::new(essential), &[]);
        let start = f.t.post_word(u0, f.t.all());
        let probe = SubsetAutomaton::build(&[start], t.labels, |a, s| t.post(a, s));
        probe.states.iter().fold(0, |m, &s| m | s)
    };
    let f = Followers::new(t, &[after]);
    // (a) from every reachable follower state, some continuation reads u0
    let reach = f.reachable();
    let n = f.auto.states.len();
    let mut good: Vec<bool> = (0..n).map(|s| f.t.post_word(u0, f.auto.states[s]) != 0).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !good[s] && f.auto.trans[s].iter().flatten().any(|&x| good[x]) {
                good[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if reach.iter().any(|&s| !good[s]) {
        return Err(Error::Precondition(
            "the shift is not irreducible: some word cannot be followed by a synchronizing word".into(),
        ));
    }
    // (b) every allowed word occurs after u0
    if f.class(after) != f.class(f.t.all()) {
        return Err(Error::Precondition(
            "the shift is not irreducible: some word never follows a synchronizing word".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncCounterexample {
    pub nu: String,
    pub omega: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotSynchronizing {
    /// Shortest `(nu, omega)` with `nu w` and `w omega` allowed but
    /// `nu w omega` not; absent when longer than the bound.
    pub counterexample: Option<SyncCounterexample>,
}

/// Decides whether `w` is intrinsically synchronizing.
pub fn is_intrinsically_synchronizing(
    g: &LabelledGraph,
    w: &[usize],
    bound: usize,
) -> Result<crate::verdict::Verdict<(), NotSynchronizing>> {
    use crate::verdict::Verdict;
    let (essential, _, t) = essential_tables(g)?;
    let target = t.post_word(w, t.all());
    if target == 0 {
        return Err(Error::NotInLanguage);
    }
    let f = Followers::new(Tables::new(&essential), &[target]);
    if f.synchronizes(w) {
        return Ok(Verdict::Yes(()));
    }
    let c = f.class(target);
    // shortest nu, length-lexicographic, by BFS over follower states
    let start = f.auto.index[&t.all()];
    let mut seen = vec![false; f.auto.states.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([(start, Vec::new())]);
    let mut nu = None;
    while let Some((s, word)) = queue.pop_front() {
        let p = t.post_word(w, f.auto.states[s]);
        if p != 0 && f.auto.class_of(p) != Some(c) {
            nu = Some((word, p));
            break;
        }
        if word.len() >= bound {
            continue;
        }
        for a in 0..t.labels {
            if let Some(x) = f.auto.trans[s][a] {
                if !seen[x] {
                    seen[x] = true;
                    let mut w2: Word = word.clone();
                    w2.push(a);
                    queue.push_back((x, w2));
                }
            }
        }
    }
    let Some((nu, narrow)) = nu else {
        return Ok(Verdict::No(NotSynchronizing { counterexample: None }));
    };
    // shortest omega readable after w but not after nu w
    let mut seen = BTreeSet::from([(target, narrow)]);
    let mut queue = VecDeque::from([(target, narrow, Vec::new())]);
    while let Some((x, y, word)) = queue.pop_front() {
        if word.len() + nu.len() > bound {
            break;
        }
        for a in 0..t.labels {
            let (x2, y2) = (t.post(a, x), t.post(a, y));
            if x2 == 0 {
                continue;
            }
            let mut w2: Word = word.clone();
            w2.push(a);
            if y2 == 0 {
                if w2.len() + nu.len() > bound {
                    break;
                }
                let counterexample =
                    SyncCounterexample { nu: essential.format_word(&nu), omega: essential.format_word(&w2) };
                return Ok(Verdict::No(NotSynchronizing { counterexample: Some(counterexample) }));
            }
            if seen.insert((x2, y2)) {
                queue.push_back((x2, y2, w2));
            }
        }
    }
    Ok(Verdict::No(NotSynchronizing { counterexample: None }))
}

/// Is the word allowed in the presented shift?
pub fn is_allowed(g: &LabelledGraph, w: &[usize]) -> Result<bool> {
    let (_, _, t) = essential_tables(g)?;
    Ok(t.post_word(w, t.all()) != 0)
}

/// Checks `nu mu` and `mu omega` allowed while `nu mu omega` is not.
pub fn is_sync_counterexample(g: &LabelledGraph, nu: &[usize], mu: &[usize], omega: &[usize]) -> Result<bool> {
    let cat = |parts: &[&[usize]]| parts.concat();
    Ok(is_allowed(g, &cat(&[nu, mu]))? && is_allowed(g, &cat(&[mu, omega]))? && !is_allowed(g, &cat(&[nu, mu, omega]))?)
}

/// A vertex bijection `p` mapping the labelled edge multiset of `g` onto
/// that of `h` (labels compared by name).
pub fn labelled_isomorphism(g: &LabelledGraph, h: &LabelledGraph) -> Option<Vec<usize>> {
    if g.vertices != h.vertices || g.edges.len() != h.edges.len() {
        return None;
    }
    let count = |x: &LabelledGraph| {
        let mut m: BTreeMap<(usize, usize, String), usize> = BTreeMap::new();
        for e in &x.edges {
            *m.entry((e.from, e.to, x.alphabet[e.label].clone())).or_default() += 1;
        }
        m
    };
    let (cg, ch) = (count(g), count(h));
    let n = g.vertices;
    let edges_between = |m: &BTreeMap<(usize, usize, String), usize>, u: usize, v: usize| -> Vec<(String, usize)> {
        m.range((u, v, String::new())..)
            .take_while(|((a, b, _), _)| *a == u && *b == v)
            .map(|((_, _, l), c)| (l.clone(), *c))
            .collect()
    };
    let signature = |m: &BTreeMap<(usize, usize, String), usize>, v: usize| {
        let mut out: Vec<(String, usize)> = Vec::new();
        let mut inn: Vec<(String, usize)> = Vec::new();
        for ((a, b, l), c) in m {
            if *a == v {
                out.push((l.clone(), *c));
            }
            if *b == v {
                inn.push((l.clone(), *c));
            }
        }
        out.sort();
        inn.sort();
        (out, inn)
    };
    let sg: Vec<_> = (0..n).map(|v| signature(&cg, v)).collect();
    let sh: Vec<_> = (0..n).map(|v| signature(&ch, v)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        i: usize,
        n: usize,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == n {
            return true;
        }
        for j in 0..n {
            if !used[j] && ok(i, j, perm) {
                perm[i] = j;
                used[j] = true;
                if rec(i + 1, n, ok, perm, used) {
                    return true;
                }
                used[j] = false;
                perm[i] = usize::MAX;
            }
        }
        false
    }
    let ok = |i: usize, j: usize, perm: &[usize]| -> bool {
        sg[i] == sh[j]
            && edges_between(&cg, i, i) == edges_between(&ch, j, j)
            && (0..i).all(|k| {
                edges_between(&cg, i, k) == edges_between(&ch, j, perm[k])
                    && edges_between(&cg, k, i) == edges_between(&ch, perm[k], j)
            })
    };
    rec(0, n, &ok, &mut perm, &mut used).then_some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even() -> LabelledGraph {
        LabelledGraph::preset("even-shift").unwrap()
    }

    #[test]
    fn language_of_even_shift() {
        let g = even();
        let words = language_strings(&g, 4);
        assert!(words.contains("1001"));
        assert!(!words.contains("101"));
        assert!(words.contains(""));
        assert_eq!(language(&g, 0).len(), 1);
        let full = LabelledGraph::from_triples(1, &[(0, 0, "e"), (0, 0, "f")]).unwrap();
        assert_eq!(language(&full, 2).len(), 7);
    }

    #[test]
    fn even_shift_covers() {
        let g = even();
        let k = krieger_cover(&g).unwrap();
        assert_eq!(k.graph.vertices(), 3);
        assert_eq!(k.graph.edges().len(), 5);
        assert!(k.graph.is_left_resolving());
        assert!(!k.graph.is_right_resolving());
        let f = fischer_cover(&g).unwrap();
        assert_eq!(f.graph.vertices(), 2);
        assert!(labelled_isomorphism(&f.graph, &g).is_some());
        for s in &k.states {
            let prefix = g.parse_word(&s.certificate.prefix).unwrap();
            let period = g.parse_word(&s.certificate.period).unwrap();
            assert!(s.subsets.contains(&stable_set(&g, &prefix, &period).unwrap()));
        }
    }

    #[test]
    fn full_shift_covers() {
        let g = LabelledGraph::preset("full:2").unwrap();
        assert_eq!(krieger_cover(&g).unwrap().graph.vertices(), 1);
        assert_eq!(fischer_cover(&g).unwrap().graph.vertices(), 1);
    }

    #[test]
    fn synchronizing_words() {
        let g = even();
        let w = |s: &str| g.parse_word(s).unwrap();
        assert!(is_intrinsically_synchronizing(&g, &w("1"), 8).unwrap().is_yes());
        let no = is_intrinsically_synchronizing(&g, &w("000"), 8).unwrap().no().unwrap();
        let c = no.counterexample.unwrap();
        assert!(is_sync_counterexample(&g, &w(&c.nu), &w("000"), &w(&c.omega)).unwrap());
        assert!(is_sync_counterexample(&g, &w("01"), &w("000"), &w("10")).unwrap());
        assert!(matches!(is_intrinsically_synchronizing(&g, &w("101"), 8), Err(Error::NotInLanguage)));
        let full = LabelledGraph::preset("full:2").unwrap();
        assert!(is_intrinsically_synchronizing(&full, &[], 4).unwrap().is_yes());
    }

    #[test]
    fn reducible_shift_has_no_fischer_cover() {
        // two disjoint loops with different labels
        let g = LabelledGraph::from_triples(2, &[(0, 0, "a"), (1, 1, "b")]).unwrap();
        assert!(matches!(fischer_cover(&g), Err(Error::Precondition(_))));
        assert_eq!(krieger_cover(&g).unwrap().graph.vertices(), 2);
    }
}
