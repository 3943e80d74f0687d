//! Multiset comparison of complex spectra.
//!
//! Two multisets match at tolerance `tol` when a perfect bipartite matching
//! exists whose every pair lies within `tol`. A greedy nearest-pair matching
//! is tried first and then completed with Hopcroft-Karp augmenting paths on
//! the graph of pairs within `tol`; the reported worst distance is the
//! bottleneck-optimal one.

use std::collections::VecDeque;

use crate::fermion::{lex_cmp, SpectrumMultiset};
use crate::{Error, Result, C64};

/// How two values are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// `|a - b|`.
    Euclidean,
    /// `min(|a - b|, |a + b|)`, for quasi-energies whose sign is a convention.
    UpToSign,
}

impl Metric {
    pub fn distance(self, a: C64, b: C64) -> f64 {
        match self {
            Metric::Euclidean => (a - b).norm(),
            Metric::UpToSign => (a - b).norm().min((a + b).norm()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    /// `true` iff every element is paired within the tolerance.
    pub matched: bool,
    /// Largest pair distance in the reported matching. When `matched` this is
    /// the smallest achievable bottleneck distance.
    pub worst_distance: f64,
    /// Elements that could not be paired within the tolerance.
    pub unmatched: usize,
    pub tol: f64,
    pub size: usize,
}

/// Compares two spectra as multisets.
pub fn spectra_match(a: &SpectrumMultiset, b: &SpectrumMultiset, tol: f64) -> Result<MatchReport> {
    match_values(a.energies(), b.energies(), tol, Metric::Euclidean)
}

/// Compares two lists of complex values as multisets.
pub fn match_values(a: &[C64], b: &[C64], tol: f64, metric: Metric) -> Result<MatchReport> {
    if a.len() != b.len() {
        return Err(Error::CardinalityMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = a.len();
    if n == 0 {
        return Ok(MatchReport {
            matched: true,
            worst_distance: 0.0,
            unmatched: 0,
            tol,
            size: 0,
        });
    }

    let edges = candidate_edges(a, b, tol, metric);
    let graph = Graph::new(n, &edges, f64::INFINITY);
    let mut m = Matching::greedy(n, &edges);
    m.augment(&graph);

    if m.size() == n {
        let worst = bottleneck(n, &edges, &m);
        return Ok(MatchReport {
            matched: true,
            worst_distance: worst,
            unmatched: 0,
            tol,
            size: n,
        });
    }

    // Complete the matching greedily to report a finite worst distance.
    let unmatched = n - m.size();
    let mut worst = m.worst(&edges_by_pair(&edges));
    let free_a: Vec<usize> = (0..n).filter(|&i| m.a_to_b[i].is_none()).collect();
    let mut free_b: Vec<usize> = (0..n).filter(|&j| m.b_to_a[j].is_none()).collect();
    for i in free_a {
        let (pos, d) = free_b
            .iter()
            .enumerate()
            .map(|(pos, &j)| (pos, metric.distance(a[i], b[j])))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("free sides have equal size");
        free_b.swap_remove(pos);
        worst = worst.max(d);
    }
    Ok(MatchReport {
        matched: false,
        worst_distance: worst,
        unmatched,
        tol,
        size: n,
    })
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: usize,
    b: usize,
    d: f64,
}

/// All pairs within `tol`, found by sweeping `b` sorted by real part.
fn candidate_edges(a: &[C64], b: &[C64], tol: f64, metric: Metric) -> Vec<Edge> {
    let mut points: Vec<(C64, usize)> = b.iter().copied().zip(0..).collect();
    if metric == Metric::UpToSign {
        points.extend(b.iter().map(|&z| -z).zip(0..));
    }
    points.sort_by(|x, y| lex_cmp(&x.0, &y.0));
    let mut edges = Vec::new();
    for (i, &z) in a.iter().enumerate() {
        let lo = points.partition_point(|p| p.0.re < z.re - tol);
        for &(w, j) in points[lo..].iter().take_while(|p| p.0.re <= z.re + tol) {
            let d = (z - w).norm();
            if d <= tol {
                edges.push(Edge { a: i, b: j, d });
            }
        }
    }
    // with UpToSign both b_j and -b_j may be close; keep the nearer one
    edges.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)).then(x.d.total_cmp(&y.d)));
    edges.dedup_by(|later, first| later.a == first.a && later.b == first.b);
    edges.sort_by(|x, y| x.d.total_cmp(&y.d).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));
    edges
}

fn edges_by_pair(edges: &[Edge]) -> std::collections::HashMap<(usize, usize), f64> {
    edges.iter().map(|e| ((e.a, e.b), e.d)).collect()
}

struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(n: usize, edges: &[Edge], max_d: f64) -> Self {
        let mut adj = vec![Vec::new(); n];
        for e in edges.iter().filter(|e| e.d <= max_d) {
            adj[e.a].push(e.b);
        }
        Self { adj }
    }
}

struct Matching {
    a_to_b: Vec<Option<usize>>,
    b_to_a: Vec<Option<usize>>,
}

impl Matching {
    fn empty(n: usize) -> Self {
        Self {
            a_to_b: vec![None; n],
            b_to_a: vec![None; n],
        }
    }

    fn greedy(n: usize, edges: &[Edge]) -> Self {
        let mut m = Self::empty(n);
        for e in edges {
            if m.a_to_b[e.a].is_none() && m.b_to_a[e.b].is_none() {
                m.a_to_b[e.a] = Some(e.b);
                m.b_to_a[e.b] = Some(e.a);
            }
        }
        m
    }

    fn size(&self) -> usize {
        self.a_to_b.iter().filter(|x| x.is_some()).count()
    }

    fn worst(&self, dist: &std::collections::HashMap<(usize, usize), f64>) -> f64 {
        self.a_to_b
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| dist[&(i, j)]))
            .fold(0.0, f64::max)
    }

    /// Hopcroft-Karp: grows the matching to maximum size on `g`.
    fn augment(&mut self, g: &Graph) {
        let n = self.a_to_b.len();
        const INF: usize = usize::MAX;
        let mut dist = vec![INF; n];
        loop {
            // BFS layering from free left vertices.
            let mut queue = VecDeque::new();
            for i in 0..n {
                if self.a_to_b[i].is_none() {
                    dist[i] = 0;
                    queue.push_back(i);
                } else {
                    dist[i] = INF;
                }
            }
            let mut found = false;
            while let Some(i) = queue.pop_front() {
                for &j in &g.adj[i] {
                    match self.b_to_a[j] {
                        None => found = true,
                        Some(k) if dist[k] == INF => {
                            dist[k] = dist[i] + 1;
                            queue.push_back(k);
                        }
                        _ => {}
                    }
                }
            }
            if !found {
                break;
            }
            // DFS along layers, iteratively to avoid deep recursion.
            let mut next_edge = vec![0usize; n];
            for root in 0..n {
                if self.a_to_b[root].is_some() {
                    continue;
                }
                let mut stack = vec![root];
                while let Some(&i) = stack.last() {
                    if next_edge[i] >= g.adj[i].len() {
                        dist[i] = INF;
                        stack.pop();
                        continue;
                    }
                    let j = g.adj[i][next_edge[i]];
                    next_edge[i] += 1;
                    match self.b_to_a[j] {
                        None => {
                            // flip the alternating path recorded on the stack
                            let mut free_b = j;
                            while let Some(u) = stack.pop() {
                                let prev = self.a_to_b[u];
                                self.a_to_b[u] = Some(free_b);
                                self.b_to_a[free_b] = Some(u);
                                match prev {
                                    Some(p) => free_b = p,
                                    None => break,
                                }
                            }
                            break;
                        }
                        Some(k) if dist[k] == dist[i] + 1 => stack.push(k),
                        _ => {}
                    }
                }
            }
        }
    }
}

/// Smallest threshold at which a perfect matching exists, by bisection over
/// the sorted edge distances. `m` is a known perfect matching on all edges.
fn bottleneck(n: usize, edges: &[Edge], m: &Matching) -> f64 {
    // each left vertex needs at least its nearest candidate
    let mut nearest = vec![f64::INFINITY; n];
    for e in edges {
        nearest[e.a] = nearest[e.a].min(e.d);
    }
    let lower = nearest.iter().copied().fold(0.0, f64::max);
    let upper = m.worst(&edges_by_pair(edges));
    if upper <= lower {
        return upper;
    }
    let mut ds: Vec<f64> = edges.iter().map(|e| e.d).filter(|&d| d >= lower && d <= upper).collect();
    ds.dedup();
    let perfect_at = |t: f64| {
        let g = Graph::new(n, edges, t);
        let mut m = Matching::empty(n);
        m.augment(&g);
        m.size() == n
    };
    let (mut lo, mut hi) = (0usize, ds.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_at(ds[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    ds[lo]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::SpectrumOrigin;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn spectrum(v: &[C64]) -> SpectrumMultiset {
        SpectrumMultiset::new(v.to_vec(), SpectrumOrigin::FreeFermion)
    }

    #[test]
    fn identical_multisets() {
        let v = [c(1.0, 2.0), c(-1.0, 0.5), c(1.0, 2.0)];
        let r = spectra_match(&spectrum(&v), &spectrum(&v), 1e-12).unwrap();
        assert!(r.matched);
        assert_eq!(r.worst_distance, 0.0);
    }

    #[test]
    fn permutation_and_perturbation() {
        let a = [c(1.0, 0.0), c(2.0, 0.0)];
        let b = [c(2.0, 0.0), c(1.0 + 1e-12, 0.0)];
        let r = spectra_match(&spectrum(&a), &spectrum(&b), 1e-9).unwrap();
        assert!(r.matched);
        assert!(r.worst_distance <= 1.1e-12);
    }

    #[test]
    fn multiplicity_matters() {
        let a = [c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        let b = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)];
        let r = spectra_match(&spectrum(&a), &spectrum(&b), 1e-6).unwrap();
        assert!(!r.matched);
        assert_eq!(r.unmatched, 1);
        assert!((r.worst_distance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cardinality_mismatch_is_an_error() {
        let r = spectra_match(&spectrum(&[c(1.0, 0.0)]), &spectrum(&[]), 1e-6);
        assert!(matches!(r, Err(Error::CardinalityMismatch { .. })));
    }

    #[test]
    fn greedy_trap_is_repaired() {
        // greedy pairs a0-b0 (distance 0.1) and strands a1; the optimal
        // matching is a0-b1, a1-b0 with bottleneck 0.3
        let a = [c(0.0, 0.0), c(0.4, 0.0)];
        let b = [c(0.1, 0.0), c(-0.3, 0.0)];
        let r = match_values(&a, &b, 0.35, Metric::Euclidean).unwrap();
        assert!(r.matched);
        assert!((r.worst_distance - 0.3).abs() < 1e-12);
        let r = match_values(&a, &b, 0.25, Metric::Euclidean).unwrap();
        assert!(!r.matched);
    }

    #[test]
    fn bottleneck_is_optimal() {
        // a0-b0, a1-b1 costs 0.8; a0-b1, a1-b0 costs 0.2
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(0.8, 0.0), c(0.2, 0.0)];
        let r = match_values(&a, &b, 1.0, Metric::Euclidean).unwrap();
        assert!(r.matched);
        assert!((r.worst_distance - 0.2).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn up_to_sign_metric() {
        let a = [c(0.0, 1.0), c(2.0, 0.0)];
        let b = [c(1e-13, -1.0), c(2.0, 0.0)];
        assert!(match_values(&a, &b, 1e-9, Metric::UpToSign).unwrap().matched);
        assert!(!match_values(&a, &b, 1e-9, Metric::Euclidean).unwrap().matched);
    }
}
