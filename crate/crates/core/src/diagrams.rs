//! (k,ℓ)-admissible Young diagrams, Bratteli diagrams and path-count
//! dimensions of the Hecke quotients H_n(k,ℓ).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Young diagram given by its (positive, weakly decreasing) row lengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct YoungDiagram(Vec<u32>);

impl YoungDiagram {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(rows));
        }
        Ok(YoungDiagram(rows))
    }

    pub fn empty() -> Self {
        YoungDiagram(Vec::new())
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.0.len()
    }

    /// λ_i (1-based), zero past the last row.
    pub fn row(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// At most k rows and λ_1 − λ_k ≤ ℓ − k.
    pub fn is_admissible(&self, k: usize, l: usize) -> bool {
        self.num_rows() <= k && (self.row(1) - self.row(k)) as usize <= l - k
    }

    /// Diagrams obtained by adding one box.
    pub fn add_box(&self) -> Vec<YoungDiagram> {
        let mut out = Vec::new();
        for i in 0..=self.0.len() {
            let current = self.0.get(i).copied().unwrap_or(0);
            let above = if i == 0 { u32::MAX } else { self.0[i - 1] };
            if current < above {
                let mut rows = self.0.clone();
                if i == rows.len() {
                    rows.push(1);
                } else {
                    rows[i] += 1;
                }
                out.push(YoungDiagram(rows));
            }
        }
        out
    }

    /// Removes all full columns of height k.
    pub fn reduced(&self, k: usize) -> YoungDiagram {
        if self.num_rows() < k {
            return self.clone();
        }
        let c = self.row(k);
        YoungDiagram(self.0.iter().map(|r| r - c).filter(|&r| r > 0).collect())
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn check_kl(k: usize, l: usize) -> Result<()> {
    if k == 0 || k >= l {
        return Err(Error::Unsupported(format!("need 1 <= k < l, got k={k}, l={l}")));
    }
    Ok(())
}

/// All partitions of `n` with at most `max_rows` rows, in reverse
/// lexicographic order.
fn partitions(n: u32, max_rows: usize) -> Vec<YoungDiagram> {
    fn go(rem: u32, max_part: u32, rows_left: usize, prefix: &mut Vec<u32>, out: &mut Vec<YoungDiagram>) {
        if rem == 0 {
            out.push(YoungDiagram(prefix.clone()));
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=rem.min(max_part)).rev() {
            prefix.push(p);
            go(rem - p, p, rows_left - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_rows, &mut Vec::new(), &mut out);
    out
}

/// All (k,ℓ)-admissible diagrams with `n` boxes.
pub fn admissible_diagrams(k: usize, l: usize, n: u32) -> Result<Vec<YoungDiagram>> {
    check_kl(k, l)?;
    Ok(partitions(n, k).into_iter().filter(|d| d.is_admissible(k, l)).collect())
}

/// One level of the Bratteli diagram of H_•(k,ℓ).
#[derive(Clone, Debug, Serialize)]
pub struct BratteliLevel {
    pub level: usize,
    /// Full admissible diagrams at this level.
    pub nodes: Vec<YoungDiagram>,
    /// Node labels: the diagrams themselves, or reduced modulo full columns.
    pub labels: Vec<YoungDiagram>,
    /// Number of admissible paths from the empty diagram.
    pub path_counts: Vec<u128>,
    /// Indices into the previous level's nodes, one list per node.
    pub parents: Vec<Vec<usize>>,
}

impl BratteliLevel {
    /// Σ pathCount², the dimension of H_level(k,ℓ).
    pub fn dimension(&self) -> u128 {
        self.path_counts.iter().map(|c| c * c).sum()
    }
}

/// Bratteli diagram levels 0..=levels. Edges add a single box and stay
/// within admissible diagrams.
pub fn bratteli(k: usize, l: usize, levels: usize, reduced: bool) -> Result<Vec<BratteliLevel>> {
    check_kl(k, l)?;
    let label = |d: &YoungDiagram| if reduced { d.reduced(k) } else { d.clone() };
    let root = YoungDiagram::empty();
    let mut out = vec![BratteliLevel {
        level: 0,
        labels: vec![label(&root)],
        nodes: vec![root],
        path_counts: vec![1],
        parents: vec![Vec::new()],
    }];
    for level in 1..=levels {
        let prev = out.last().expect("level 0 exists");
        let mut children: BTreeMap<YoungDiagram, (u128, Vec<usize>)> = BTreeMap::new();
        for (pi, (d, &count)) in prev.nodes.iter().zip(&prev.path_counts).enumerate() {
            for child in d.add_box().into_iter().filter(|c| c.is_admissible(k, l)) {
                let entry = children.entry(child).or_insert((0, Vec::new()));
                entry.0 = entry.0.checked_add(count).ok_or_else(|| Error::Unsupported("path count overflow".into()))?;
                entry.1.push(pi);
            }
        }
        // present nodes in descending (reverse lexicographic) order
        let mut nodes = Vec::new();
        let mut path_counts = Vec::new();
        let mut parents = Vec::new();
        for (d, (count, ps)) in children.into_iter().rev() {
            nodes.push(d);
            path_counts.push(count);
            parents.push(ps);
        }
        let labels = nodes.iter().map(label).collect();
        out.push(BratteliLevel { level, nodes, labels, path_counts, parents });
    }
    Ok(out)
}

/// dim H_n(k,ℓ) = Σ_λ (number of admissible paths to λ)².
pub fn hecke_dimension(k: usize, l: usize, n: usize) -> Result<u128> {
    let levels = bratteli(k, l, n, false)?;
    let last = &levels[n];
    last.path_counts
        .iter()
        .try_fold(0u128, |acc, c| acc.checked_add(c.checked_mul(*c)?))
        .ok_or_else(|| Error::Unsupported("dimension overflow".into()))
}

/// η = (1 − q^{1−k}) / ((1 + q)(1 − q^k)) at q = e^{2πi/ℓ}; only ℓ = 6 is
/// representable in Q(ζ).
pub fn eta(k: usize, l: usize) -> Result<Scalar> {
    check_kl(k, l)?;
    if l != 6 {
        return Err(Error::Unsupported(format!("q = e^(2πi/{l}) is not in Q(ζ_6)")));
    }
    let k = k as i64;
    let num = &Scalar::one() - &Scalar::qpow(1 - k);
    let den = &(&Scalar::one() + &Scalar::zeta()) * &(&Scalar::one() - &Scalar::qpow(k));
    num.checked_div(&den).map_err(|_| Error::Unsupported(format!("η undefined for k={k}: q^k = 1")))
}

/// A small undirected graph with labelled vertices.
#[derive(Clone, Debug, Serialize)]
pub struct LabelledGraph {
    pub labels: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl LabelledGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.labels.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn is_tree(&self) -> bool {
        let v = self.labels.len();
        if v == 0 || self.edges.len() != v - 1 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; v];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// For a tree with a single branch vertex, the sorted arm lengths
    /// hanging off it; for a path, `[len − 1]` measured from an end.
    pub fn arm_lengths(&self) -> Option<Vec<usize>> {
        if !self.is_tree() {
            return None;
        }
        let deg = self.degrees();
        let branch: Vec<usize> = (0..deg.len()).filter(|&x| deg[x] >= 3).collect();
        let adj = self.adjacency();
        match branch.as_slice() {
            [] => Some(vec![self.labels.len() - 1]),
            [c] => {
                let mut arms: Vec<usize> = adj[*c]
                    .iter()
                    .map(|&start| {
                        let (mut prev, mut cur, mut len) = (*c, start, 1);
                        while let Some(&next) = adj[cur].iter().find(|&&y| y != prev) {
                            prev = cur;
                            cur = next;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort_unstable();
                Some(arms)
            }
            _ => None,
        }
    }

    /// Name of the (finite or affine) simply-laced Dynkin diagram this tree
    /// is isomorphic to, when it is one with at most one branch vertex.
    pub fn dynkin_type(&self) -> Option<String> {
        let arms = self.arm_lengths()?;
        let v = self.labels.len();
        let name = match arms.as_slice() {
            [_] => format!("A{v}"),
            [1, 1, m] => format!("D{}", m + 3),
            [1, 2, 2] => "E6".into(),
            [1, 2, 3] => "E7".into(),
            [1, 2, 4] => "E8".into(),
            [2, 2, 2] => "E6^(1)".into(),
            [1, 3, 3] => "E7^(1)".into(),
            [1, 2, 5] => "E8^(1)".into(),
            [1, 1, 1, 1] => "D4^(1)".into(),
            _ => return None,
        };
        Some(name)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{l}\"];\n"));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  n{a} -- n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Bipartite inclusion graph between `level` and `level + 1`.
pub fn cut_graph(levels: &[BratteliLevel], level: usize) -> Result<LabelledGraph> {
    let (Some(lo), Some(hi)) = (levels.get(level), levels.get(level + 1)) else {
        return Err(Error::Unsupported(format!("cut ({level},{}) beyond built levels", level + 1)));
    };
    let offset = lo.nodes.len();
    let labels = lo.labels.iter().chain(&hi.labels).map(|d| d.to_string()).collect();
    let mut edges = Vec::new();
    for (ci, ps) in hi.parents.iter().enumerate() {
        for &p in ps {
            edges.push((p, offset + ci));
        }
    }
    edges.sort_unstable();
    Ok(LabelledGraph { labels, edges })
}

/// DOT rendering of a whole Bratteli diagram, one rank per level.
pub fn bratteli_dot(levels: &[BratteliLevel]) -> String {
    let mut s = String::from("graph bratteli {\n  rankdir=TB;\n");
    for lv in levels {
        s.push_str("  { rank=same;");
        for i in 0..lv.nodes.len() {
            s.push_str(&format!(" l{}_{};", lv.level, i));
        }
        s.push_str(" }\n");
        for (i, label) in lv.labels.iter().enumerate() {
            s.push_str(&format!("  l{}_{} [label=\"{}\\n{}\"];\n", lv.level, i, label, lv.path_counts[i]));
        }
        if lv.level > 0 {
            for (i, ps) in lv.parents.iter().enumerate() {
                for p in ps {
                    s.push_str(&format!("  l{}_{} -- l{}_{};\n", lv.level - 1, p, lv.level, i));
                }
            }
        }
    }
    s.push_str("}\n");
    s
}
