//! Undirected simple graphs, generators, the edge-list text format, and the
//! two message-sampling distributions.
//!
//! Adjacency is stored in compressed sparse row form: the neighbors of node
//! `u` are `targets[offsets[u]..offsets[u + 1]]`, sorted ascending. Every
//! undirected edge `{u, v}` therefore appears twice in `targets`, once per
//! direction, which is exactly the set of directed edges the protocol can
//! send over.

use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

/// How a single message `(sender, receiver)` is drawn at each tick.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SamplingMode {
    /// Sender uniform over all nodes, receiver uniform over the sender's
    /// neighbors.
    #[default]
    NodeUniform,
    /// Ordered pair uniform over all `2m` directed edges.
    EdgeUniform,
}

impl SamplingMode {
    pub fn label(self) -> &'static str {
        match self {
            SamplingMode::NodeUniform => "node-uniform",
            SamplingMode::EdgeUniform => "edge-uniform",
        }
    }
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node-uniform" => Ok(SamplingMode::NodeUniform),
            "edge-uniform" => Ok(SamplingMode::EdgeUniform),
            other => Err(Error::InvalidParameter(format!(
                "unknown sampling mode {other:?} (expected node-uniform or edge-uniform)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MessageEvent {
    pub sender: usize,
    pub receiver: usize,
}

impl MessageEvent {
    pub fn new(sender: usize, receiver: usize) -> Self {
        Self { sender, receiver }
    }
}

impl Graph {
    /// Builds a graph from undirected edges. Edge orientation is ignored;
    /// self-loops, duplicates and out-of-range ids are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one node".into(),
            ));
        }
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on node {u}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        for (u, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({}, {})",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Self::from_sorted_lists(lists))
    }

    fn from_sorted_lists(lists: Vec<Vec<usize>>) -> Self {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for list in lists {
            targets.extend(list);
            offsets.push(targets.len());
        }
        Self {
            n,
            offsets,
            targets,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of undirected edges `m`.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Number of directed edges `2m`.
    pub fn directed_edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Canonical edge list: pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Returns the same graph with node `u` renamed to `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {} for {} nodes",
                perm.len(),
                self.n
            )));
        }
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Self::from_edges(self.n, &edges)
    }

    /// Draws one message according to `mode`.
    pub fn sample_event<R: Rng + ?Sized>(
        &self,
        mode: SamplingMode,
        rng: &mut R,
    ) -> Result<MessageEvent> {
        if self.targets.is_empty() {
            return Err(Error::InvalidParameter(
                "cannot sample a message on a graph without edges".into(),
            ));
        }
        match mode {
            SamplingMode::NodeUniform => {
                let sender = rng.random_range(0..self.n);
                let receiver = *self
                    .neighbors(sender)
                    .choose(rng)
                    .ok_or(Error::IsolatedNode(sender))?;
                Ok(MessageEvent { sender, receiver })
            }
            SamplingMode::EdgeUniform => {
                let idx = rng.random_range(0..self.targets.len());
                // Last offset <= idx identifies the sender.
                let sender = self.offsets.partition_point(|&o| o <= idx) - 1;
                Ok(MessageEvent {
                    sender,
                    receiver: self.targets[idx],
                })
            }
        }
    }

    /// Exact probability of drawing `(sender, receiver)` under `mode`.
    pub fn event_probability(&self, mode: SamplingMode, sender: usize, receiver: usize) -> f64 {
        if !self.has_edge(sender, receiver) {
            return 0.0;
        }
        match mode {
            SamplingMode::NodeUniform => 1.0 / (self.n as f64 * self.degree(sender) as f64),
            SamplingMode::EdgeUniform => 1.0 / self.targets.len() as f64,
        }
    }

    /// Writes the edge-list text format: `"N M"` then one `"u v"` line per
    /// edge with `u < v`.
    pub fn save_edgelist<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "{} {}", self.n, self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(sink, "{u} {v}")?;
        }
        sink.flush()?;
        Ok(())
    }

    pub fn to_edgelist_string(&self) -> String {
        let mut buf = Vec::new();
        self.save_edgelist(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    pub fn load_edgelist<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                let fields = parse_pair(&line, 1)?;
                if fields.0 == 0 {
                    return Err(Error::Parse {
                        line: 1,
                        message: "node count must be positive".into(),
                    });
                }
                fields
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing header \"N M\"".into(),
                })
            }
        };

        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut read = 0;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line?;
            if read == m {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("more edges than the {m} declared in the header"),
                });
            }
            let (u, v) = parse_pair(&line, lineno)?;
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("node id out of range for {n} nodes"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("self-loop on node {u}"),
                });
            }
            if lists[u].contains(&v) {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("duplicate edge ({}, {})", u.min(v), u.max(v)),
                });
            }
            lists[u].push(v);
            lists[v].push(u);
            read += 1;
        }
        if read != m {
            return Err(Error::Parse {
                line: read + 2,
                message: format!("header declares {m} edges but only {read} were found"),
            });
        }
        for list in &mut lists {
            list.sort_unstable();
        }
        Ok(Self::from_sorted_lists(lists))
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let err = |message: String| Error::Parse {
        line: lineno,
        message,
    };
    let mut fields = line.split_ascii_whitespace();
    let mut next = || -> Result<usize> {
        let field = fields
            .next()
            .ok_or_else(|| err(format!("expected two integers, got {line:?}")))?;
        field
            .parse()
            .map_err(|_| err(format!("not a non-negative integer: {field:?}")))
    };
    let a = next()?;
    let b = next()?;
    if fields.next().is_some() {
        return Err(err(format!("expected two integers, got {line:?}")));
    }
    Ok((a, b))
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complete graph needs n >= 1".into(),
        ));
    }
    let lists = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).collect())
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

pub fn gen_chain(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("chain needs n >= 1".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Preferential attachment: a complete graph on `attach + 1` nodes, then each
/// new node links to `attach` distinct existing nodes drawn proportionally to
/// degree.
pub fn gen_barabasi_albert(n: usize, attach: usize, seed: u64) -> Result<Graph> {
    if attach == 0 || n <= attach {
        return Err(Error::InvalidParameter(format!(
            "Barabasi-Albert needs attach >= 1 and n > attach (got n={n}, attach={attach})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = attach + 1;
    let mut edges = Vec::with_capacity(core * attach / 2 + (n - core) * attach);
    // Each endpoint appears once per incident edge, so uniform draws from this
    // pool are degree-proportional.
    let mut pool = Vec::with_capacity(2 * edges.capacity());
    for u in 0..core {
        for v in u + 1..core {
            edges.push((u, v));
            pool.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(attach);
    for new in core..n {
        chosen.clear();
        while chosen.len() < attach {
            let candidate = pool[rng.random_range(0..pool.len())];
            if !chosen.contains(&candidate) {
                chosen.push(candidate);
            }
        }
        for &old in &chosen {
            edges.push((old, new));
            pool.extend([old, new]);
        }
    }
    Graph::from_edges(n, &edges)
}
