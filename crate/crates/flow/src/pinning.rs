//! Pinnings: nested sequences of forced triangles hanging off the special edge `(0, n+1)`.

use std::collections::HashMap;
use std::fmt;

use flipwalk_core::catalan::catalan;
use flipwalk_core::{FlipChain, Rational, Triangle, Triangulation};
use num_traits::One;

use crate::error::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A valid pinning. The empty pinning stands for the whole polygon, whose single
/// frontier `(0, n+1)` is reported as the left one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pinning {
    pub n: usize,
    pub vertices: Vec<usize>,
}

/// The literal order-pattern condition: no `j < j' < j''` with `i_j` strictly between
/// `i_j'` and `i_j''`. Also requires distinct vertices in `1..=n`.
pub fn validate_pinning(seq: &[usize], n: usize) -> bool {
    if seq.iter().any(|&v| v == 0 || v > n) {
        return false;
    }
    for a in 0..seq.len() {
        if seq[a + 1..].contains(&seq[a]) {
            return false;
        }
        for b in a + 1..seq.len() {
            for c in b + 1..seq.len() {
                let (x, y, z) = (seq[a], seq[b], seq[c]);
                if (y < x && x < z) || (z < x && x < y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Builds the triangle list by attaching each new vertex to the unique pinned edge
/// facing it. Fails if some vertex lies in no free region.
pub fn induced_triangles(seq: &[usize], n: usize) -> Result<Vec<Triangle>, FlowError> {
    let mut tris: Vec<Triangle> = Vec::with_capacity(seq.len());
    let bad = || FlowError::InvalidPinning(format!("{seq:?} (n={n})"));
    for (idx, &v) in seq.iter().enumerate() {
        if v == 0 || v > n {
            return Err(bad());
        }
        if idx == 0 {
            tris.push(Triangle { a: 0, k: v, b: n + 1 });
            continue;
        }
        // free short sides of pinned triangles, i.e. those not used as the long side of another
        let mut host = None;
        for t in &tris {
            for (u, w) in [(t.a, t.k), (t.k, t.b)] {
                let used = tris.iter().any(|s| s.a == u && s.b == w);
                if !used && u < v && v < w {
                    host = Some((u, w));
                }
            }
        }
        let (u, w) = host.ok_or_else(bad)?;
        tris.push(Triangle { a: u, k: v, b: w });
    }
    Ok(tris)
}

impl Pinning {
    pub fn empty(n: usize) -> Self {
        Pinning { n, vertices: Vec::new() }
    }

    /// Accepts a sequence iff its triangles form a path in the dual tree starting at the
    /// root triangle; this agrees with [`validate_pinning`].
    pub fn new(n: usize, seq: &[usize]) -> Result<Self, FlowError> {
        if !validate_pinning(seq, n) {
            return Err(FlowError::InvalidPinning(format!("{seq:?} (n={n})")));
        }
        let p = Pinning { n, vertices: seq.to_vec() };
        let tris = induced_triangles(seq, n)?;
        // each triangle must hang off the previous one
        for w in tris.windows(2) {
            let (prev, next) = (w[0], w[1]);
            if !((next.a, next.b) == (prev.a, prev.k) || (next.a, next.b) == (prev.k, prev.b)) {
                return Err(FlowError::InvalidPinning(format!("{seq:?} branches (n={n})")));
            }
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// d(eta): the number of triangles.
    pub fn depth(&self) -> usize {
        self.vertices.len()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    pub fn triangles(&self) -> Vec<Triangle> {
        induced_triangles(&self.vertices, self.n).expect("validated on construction")
    }

    pub fn innermost(&self) -> Option<Triangle> {
        self.triangles().last().copied()
    }

    /// Frontier chords `(left, right)`; for the empty pinning the right chord is absent.
    pub fn frontier_chords(&self) -> (Option<(usize, usize)>, Option<(usize, usize)>) {
        match self.innermost() {
            None => (Some((0, self.n + 1)), None),
            Some(t) => (Some((t.a, t.k)), Some((t.k, t.b))),
        }
    }

    /// Vertices strictly inside the left and right frontier chords, increasing.
    pub fn frontier_sets(&self) -> (Vec<usize>, Vec<usize>) {
        let inside = |c: Option<(usize, usize)>| c.map(|(u, w)| (u + 1..w).collect()).unwrap_or_default();
        let (l, r) = self.frontier_chords();
        (inside(l), inside(r))
    }

    /// Frontier chord containing `j`, with its side.
    pub fn chord_of(&self, j: usize) -> Option<((usize, usize), Side)> {
        let (l, r) = self.frontier_chords();
        if let Some((u, w)) = l {
            if u < j && j < w {
                return Some(((u, w), Side::Left));
            }
        }
        if let Some((u, w)) = r {
            if u < j && j < w {
                return Some(((u, w), Side::Right));
            }
        }
        None
    }

    /// `j ~ eta`.
    pub fn adjacent(&self, j: usize) -> bool {
        self.chord_of(j).is_some()
    }

    pub fn extend(&self, j: usize) -> Result<Pinning, FlowError> {
        if !self.adjacent(j) {
            return Err(FlowError::NotAdjacent { j, pinning: self.to_string() });
        }
        let mut v = self.vertices.clone();
        v.push(j);
        Ok(Pinning { n: self.n, vertices: v })
    }

    pub fn parent(&self) -> Option<Pinning> {
        if self.vertices.is_empty() {
            return None;
        }
        Some(Pinning { n: self.n, vertices: self.vertices[..self.len() - 1].to_vec() })
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_state(&self, x: &Triangulation) -> bool {
        self.triangles().iter().all(|t| x.contains_triangle(t))
    }

    /// pi-hat(eta) = pi(Omega_eta), as a product of Catalan numbers of the free regions.
    pub fn measure(&self) -> Rational {
        if self.is_empty() {
            return Rational::one();
        }
        let tris = self.triangles();
        let mut num = num_bigint::BigInt::one();
        for (idx, t) in tris.iter().enumerate() {
            let next = tris.get(idx + 1);
            for (u, w) in [(t.a, t.k), (t.k, t.b)] {
                if next.is_some_and(|s| (s.a, s.b) == (u, w)) {
                    continue;
                }
                num *= catalan(w - u - 1);
            }
        }
        Rational::new(num, catalan(self.n))
    }

    /// pi-hat_eta(j) = pi(Omega_{eta j}) / pi(Omega_eta).
    pub fn conditional(&self, j: usize) -> Result<Rational, FlowError> {
        let ((u, w), _) =
            self.chord_of(j).ok_or_else(|| FlowError::NotAdjacent { j, pinning: self.to_string() })?;
        Ok(Rational::new(catalan(j - u - 1) * catalan(w - j - 1), catalan(w - u - 1)))
    }

    pub fn encode(&self) -> String {
        let v: Vec<String> = self.vertices.iter().map(|x| x.to_string()).collect();
        format!("({})", v.join(","))
    }
}

impl fmt::Display for Pinning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Every nonempty pinning of the polygon, in depth-first order with increasing vertices.
pub fn all_pinnings(n: usize) -> Vec<Pinning> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.extend(pinnings_from(n, i));
    }
    out
}

/// All pinnings whose first vertex is `i`.
pub fn pinnings_from(n: usize, i: usize) -> Vec<Pinning> {
    let mut out = Vec::new();
    let mut stack = vec![Pinning { n, vertices: vec![i] }];
    while let Some(p) = stack.pop() {
        let (l, r) = p.frontier_sets();
        for &v in r.iter().rev().chain(l.iter().rev()) {
            stack.push(p.extend(v).expect("frontier vertex"));
        }
        out.push(p);
    }
    out
}

/// Triangles of `x` with their dual-tree parent, in preorder, plus the root path (pinning)
/// ending at each triangle.
#[derive(Debug, Clone)]
pub struct StatePinnings {
    pub triangles: Vec<Triangle>,
    pub parent: Vec<Option<usize>>,
    pub paths: Vec<Vec<usize>>,
}

impl StatePinnings {
    pub fn of(x: &Triangulation) -> Self {
        let triangles = x.triangles();
        let mut parent = vec![None; triangles.len()];
        let mut paths: Vec<Vec<usize>> = vec![Vec::new(); triangles.len()];
        let pos: HashMap<(usize, usize), usize> = triangles.iter().enumerate().map(|(i, t)| ((t.a, t.b), i)).collect();
        for (i, t) in triangles.iter().enumerate() {
            if i == 0 {
                paths[0] = vec![t.k];
            }
            for side in [(t.a, t.k), (t.k, t.b)] {
                if let Some(&c) = pos.get(&side) {
                    parent[c] = Some(i);
                    let mut p = paths[i].clone();
                    p.push(triangles[c].k);
                    paths[c] = p;
                }
            }
        }
        StatePinnings { triangles, parent, paths }
    }

    /// Index of the triangle whose long side is the chord `(a, b)`.
    pub fn child_of_chord(&self, a: usize, b: usize) -> Option<usize> {
        self.triangles.iter().position(|t| t.a == a && t.b == b)
    }
}

/// For the transition that flips diagonal `d` of `x`: returns `(eta, s, t)` with
/// `x` in Omega_{eta s t} and the flipped state in Omega_{eta t s}. Here `eta` is
/// eta_xy, `s` is the apex of the parent triangle and `t` the apex of the child.
pub fn flip_pinning(x: &Triangulation, a: usize, b: usize) -> Result<(Pinning, usize, usize), FlowError> {
    let sp = StatePinnings::of(x);
    let c = sp.child_of_chord(a, b).ok_or(FlowError::Malformed(format!("({a},{b}) is not a diagonal of {x}")))?;
    let p = sp.parent[c].ok_or(FlowError::Malformed(format!("({a},{b}) is not a diagonal of {x}")))?;
    let path = &sp.paths[p];
    let eta = Pinning { n: x.n, vertices: path[..path.len() - 1].to_vec() };
    Ok((eta, sp.triangles[p].k, sp.triangles[c].k))
}

/// eta_xy for neighboring states of the chain.
pub fn eta_xy(chain: &FlipChain, x: usize, y: usize) -> Result<Pinning, FlowError> {
    if x == y {
        return Err(FlowError::NotAnEdge(x, y));
    }
    let d = flipped_diagonal(chain, x, y)?;
    Ok(flip_pinning(&chain.states[x], d.0, d.1)?.0)
}

/// d_x(eta_xy): depth of the child node of the dual-tree edge of the flipped diagonal,
/// with the root at depth 0. Equals |eta_xy| + 1.
pub fn pinning_depth_of_edge(x: &Triangulation, a: usize, b: usize) -> Result<usize, FlowError> {
    Ok(flip_pinning(x, a, b)?.0.len() + 1)
}

/// The diagonal of `x` removed by the transition `x -> y`.
pub fn flipped_diagonal(chain: &FlipChain, x: usize, y: usize) -> Result<(usize, usize), FlowError> {
    if !chain.neighbors[x].contains(&y) {
        return Err(FlowError::NotAnEdge(x, y));
    }
    let dy = &chain.states[y].diagonals;
    let d = chain.states[x].diagonals.iter().find(|d| !dy.contains(d)).expect("neighbors differ in one diagonal");
    Ok((d.a, d.b))
}

/// States of the chain grouped by the pinnings they contain (each state lies in exactly
/// `n` nonempty pinnings, one per triangle).
#[derive(Debug, Clone)]
pub struct PinningIndex {
    pub n: usize,
    pub members: HashMap<Vec<usize>, Vec<usize>>,
    pub per_state: Vec<StatePinnings>,
}

impl PinningIndex {
    pub fn build(chain: &FlipChain) -> Self {
        let mut members: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut per_state = Vec::with_capacity(chain.len());
        for (x, s) in chain.states.iter().enumerate() {
            let sp = StatePinnings::of(s);
            for p in &sp.paths {
                members.entry(p.clone()).or_default().push(x);
            }
            per_state.push(sp);
        }
        members.insert(Vec::new(), (0..chain.len()).collect());
        PinningIndex { n: chain.n, members, per_state }
    }

    /// Omega_eta as a sorted list of state indices.
    pub fn states(&self, eta: &[usize]) -> &[usize] {
        self.members.get(eta).map(|v| v.as_slice()).unwrap_or(&[])
    }
}
