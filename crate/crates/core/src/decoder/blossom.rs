//! Exact maximum-weight matching on general graphs (Edmonds' blossom
//! algorithm with Galil's O(n^3) dual bookkeeping), integer weights.
//!
//! Endpoint `p` of edge `k = p / 2` is vertex `edges[k].0` for even `p` and
//! `edges[k].1` for odd `p`; `p ^ 1` is the opposite endpoint.

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Free,
    S,
    T,
    /// Temporary mark while tracing alternating paths.
    Crumb,
}

struct Matcher<'a> {
    n: usize,
    edges: &'a [(usize, usize, i64)],
    max_cardinality: bool,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<Label>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(n: usize, edges: &'a [(usize, usize, i64)], max_cardinality: bool) -> Self {
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut neighbend = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut blossombase: Vec<usize> = (0..n).collect();
        blossombase.extend(std::iter::repeat_n(NONE, n));
        let mut dualvar = vec![maxweight; n];
        dualvar.extend(std::iter::repeat_n(0, n));
        Matcher {
            n,
            edges,
            max_cardinality,
            neighbend,
            mate: vec![NONE; n],
            label: vec![Label::Free; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![NONE; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase,
            blossomendps: vec![Vec::new(); 2 * n],
            bestedge: vec![NONE; 2 * n],
            blossombestedges: vec![None; 2 * n],
            unusedblossoms: (n..2 * n).rev().collect(),
            dualvar,
            allowedge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    #[inline]
    fn endpoint(&self, p: usize) -> usize {
        let e = &self.edges[p / 2];
        if p.is_multiple_of(2) {
            e.0
        } else {
            e.1
        }
    }

    #[inline]
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.leaves(t, out);
            }
        }
    }

    fn leaves_of(&self, b: usize) -> Vec<usize> {
        let mut v = Vec::new();
        self.leaves(b, &mut v);
        v
    }

    fn assign_label(&mut self, w: usize, t: Label, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == Label::Free && self.label[b] == Label::Free);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        match t {
            Label::S => {
                let leaves = self.leaves_of(b);
                self.queue.extend(leaves);
            }
            Label::T => {
                let base = self.blossombase[b];
                let mb = self.mate[base];
                debug_assert!(mb != NONE);
                self.assign_label(self.endpoint(mb), Label::S, mb ^ 1);
            }
            _ => unreachable!(),
        }
    }

    /// Traces back from `v` and `w` to find a new blossom's base, or NONE
    /// if the trees are distinct (augmenting path).
    fn scan_blossom(&mut self, mut v: usize, mut w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] == Label::Crumb {
                base = self.blossombase[b];
                break;
            }
            debug_assert!(self.label[b] == Label::S);
            path.push(b);
            self.label[b] = Label::Crumb;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint(self.labelend[b]);
                b = self.inblossom[v];
                debug_assert!(self.label[b] == Label::T);
                v = self.endpoint(self.labelend[b]);
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = Label::S;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom slots");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint(self.labelend[bv]);
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint(self.labelend[bw]);
            bw = self.inblossom[w];
        }
        debug_assert!(self.label[bb] == Label::S);
        self.label[b] = Label::S;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for leaf in self.leaves_of_path(&path) {
            if self.label[self.inblossom[leaf]] == Label::T {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        let mut bestedgeto = vec![NONE; 2 * self.n];
        for &sub in &path {
            let lists: Vec<Vec<usize>> = match self.blossombestedges[sub].take() {
                Some(list) => vec![list],
                None => self
                    .leaves_of(sub)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for list in lists {
                for k in list {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == Label::S
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.bestedge[sub] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = Some(best);
        self.blossomchilds[b] = path;
        self.blossomendps[b] = endps;
    }

    fn leaves_of_path(&self, path: &[usize]) -> Vec<usize> {
        let mut v = Vec::new();
        for &s in path {
            self.leaves(s, &mut v);
        }
        v
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.n {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.leaves_of(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == Label::T {
            let len = childs.len() as isize;
            let at = |j: isize| -> usize { j.rem_euclid(len) as usize };
            let entrychild = self.inblossom[self.endpoint(self.labelend[b] ^ 1)];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, usize) = if j & 1 == 1 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let endps = self.blossomendps[b].clone();
            let mut p = self.labelend[b];
            while j != 0 {
                let q = self.endpoint(p ^ 1);
                self.label[q] = Label::Free;
                let r = self.endpoint(endps[at(j - endptrick as isize)] ^ endptrick ^ 1);
                self.label[r] = Label::Free;
                self.assign_label(q, Label::T, p);
                self.allowedge[endps[at(j - endptrick as isize)] / 2] = true;
                j += jstep;
                p = endps[at(j - endptrick as isize)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[at(j)];
            let q = self.endpoint(p ^ 1);
            self.label[q] = Label::T;
            self.label[bv] = Label::T;
            self.labelend[q] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while childs[at(j)] != entrychild {
                let bv = childs[at(j)];
                if self.label[bv] == Label::S {
                    j += jstep;
                    continue;
                }
                let labeled = self
                    .leaves_of(bv)
                    .into_iter()
                    .find(|&v| self.label[v] != Label::Free);
                if let Some(v) = labeled {
                    debug_assert!(self.label[v] == Label::T);
                    self.label[v] = Label::Free;
                    let m = self.endpoint(self.mate[self.blossombase[bv]]);
                    self.label[m] = Label::Free;
                    self.assign_label(v, Label::T, self.labelend[v]);
                }
                j += jstep;
            }
        }
        self.label[b] = Label::Free;
        self.labelend[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len() as isize;
        let at = |j: isize| -> usize { j.rem_euclid(len) as usize };
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as isize;
        let (jstep, endptrick): (isize, usize) = if i & 1 == 1 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][at(j)];
            let p = self.blossomendps[b][at(j - endptrick as isize)] ^ endptrick;
            if t >= self.n {
                self.augment_blossom(t, self.endpoint(p));
            }
            j += jstep;
            let t = self.blossomchilds[b][at(j)];
            if t >= self.n {
                self.augment_blossom(t, self.endpoint(p ^ 1));
            }
            let (a, c) = (self.endpoint(p), self.endpoint(p ^ 1));
            self.mate[a] = p ^ 1;
            self.mate[c] = p;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert!(self.label[bs] == Label::S);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint(self.labelend[bs]);
                let bt = self.inblossom[t];
                debug_assert!(self.label[bt] == Label::T);
                s = self.endpoint(self.labelend[bt]);
                let j = self.endpoint(self.labelend[bt] ^ 1);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.n;
        for _ in 0..n {
            self.label.iter_mut().for_each(|l| *l = Label::Free);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            self.blossombestedges[n..]
                .iter_mut()
                .for_each(|e| *e = None);
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..n {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == Label::Free {
                    self.assign_label(v, Label::S, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    if augmented {
                        break;
                    }
                    debug_assert!(self.label[self.inblossom[v]] == Label::S);
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint(p);
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            match self.label[self.inblossom[w]] {
                                Label::Free => self.assign_label(w, Label::T, p ^ 1),
                                Label::S => {
                                    let base = self.scan_blossom(v, w);
                                    if base != NONE {
                                        self.add_blossom(base, k);
                                    } else {
                                        self.augment_matching(k);
                                        augmented = true;
                                        break;
                                    }
                                }
                                _ => {
                                    if self.label[w] == Label::Free {
                                        self.label[w] = Label::T;
                                        self.labelend[w] = p ^ 1;
                                    }
                                }
                            }
                        } else if self.label[self.inblossom[w]] == Label::S {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                                self.bestedge[b] = k;
                            }
                        } else if self.label[w] == Label::Free
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                        {
                            self.bestedge[w] = k;
                        }
                    }
                }
                if augmented {
                    break;
                }

                // dual adjustment
                let mut deltatype = 0u8;
                let mut delta = 0i64;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..n].iter().min().unwrap();
                }
                for v in 0..n {
                    if self.label[self.inblossom[v]] == Label::Free && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * n {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == Label::S
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b]);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if deltatype == 0 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == Label::T
                        && (deltatype == 0 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == 0 {
                    deltatype = 1;
                    delta = (*self.dualvar[..n].iter().min().unwrap()).max(0);
                }
                for v in 0..n {
                    match self.label[self.inblossom[v]] {
                        Label::S => self.dualvar[v] -= delta,
                        Label::T => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in n..2 * n {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            Label::S => self.dualvar[b] += delta,
                            Label::T => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == Label::Free {
                            i = j;
                        }
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        self.queue.push(i);
                    }
                    _ => self.expand_blossom(deltablossom, false),
                }
            }
            if !augmented {
                break;
            }
            for b in n..2 * n {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == Label::S
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        (0..n)
            .map(|v| {
                if self.mate[v] == NONE {
                    NONE
                } else {
                    self.endpoint(self.mate[v])
                }
            })
            .collect()
    }
}

/// Maximum-weight matching; with `max_cardinality` the maximum weight among
/// maximum-cardinality matchings. Returns `mate[v]`, `None` if unmatched.
/// Edges are `(u, v, weight)` with `u != v` and vertices `< n`.
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if edges.is_empty() {
        return vec![None; n];
    }
    Matcher::new(n, edges, max_cardinality)
        .run()
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// Minimum-weight perfect matching, or `None` if the graph has none.
pub fn min_weight_perfect_matching(n: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(Vec::new());
    }
    if n % 2 == 1 {
        return None;
    }
    let top = edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    let flipped: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, top - w)).collect();
    max_weight_matching(n, &flipped, true).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weight(edges: &[(usize, usize, i64)], mate: &[Option<usize>]) -> i64 {
        edges
            .iter()
            .filter(|&&(u, v, _)| mate[u] == Some(v))
            .map(|e| e.2)
            .sum()
    }

    /// Best weight over all matchings (optionally of maximum cardinality),
    /// by recursion over the lowest unmatched vertex.
    fn brute(n: usize, edges: &[(usize, usize, i64)], max_card: bool) -> (usize, i64) {
        fn go(
            v: usize,
            n: usize,
            used: &mut Vec<bool>,
            adj: &Vec<Vec<(usize, i64)>>,
            max_card: bool,
        ) -> (usize, i64) {
            if v == n {
                return (0, 0);
            }
            if used[v] {
                return go(v + 1, n, used, adj, max_card);
            }
            let mut best = go(v + 1, n, used, adj, max_card);
            used[v] = true;
            for &(u, w) in &adj[v] {
                if !used[u] {
                    used[u] = true;
                    let (c, s) = go(v + 1, n, used, adj, max_card);
                    let cand = (c + 1, s + w);
                    let better = if max_card {
                        cand.0 > best.0 || (cand.0 == best.0 && cand.1 > best.1)
                    } else {
                        cand.1 > best.1
                    };
                    if better {
                        best = cand;
                    }
                    used[u] = false;
                }
            }
            used[v] = false;
            best
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        go(0, n, &mut vec![false; n], &adj, max_card)
    }

    #[test]
    fn small_known_cases() {
        assert_eq!(
            max_weight_matching(2, &[(0, 1, 1)], false),
            vec![Some(1), Some(0)]
        );
        // path 0-1-2-3 with heavy middle edge
        let e = [(0, 1, 5), (1, 2, 11), (2, 3, 5)];
        assert_eq!(
            max_weight_matching(4, &e, false),
            vec![None, Some(2), Some(1), None]
        );
        assert_eq!(
            max_weight_matching(4, &e, true),
            vec![Some(1), Some(0), Some(3), Some(2)]
        );
    }

    #[test]
    fn blossom_cases() {
        // S-blossom then augment
        let e = [(0, 1, 8), (0, 2, 9), (1, 2, 10), (2, 3, 7)];
        assert_eq!(
            max_weight_matching(4, &e, false),
            vec![Some(1), Some(0), Some(3), Some(2)]
        );
        // nested blossoms, relabeling
        let e = [
            (0, 1, 19),
            (0, 2, 20),
            (0, 7, 8),
            (1, 2, 25),
            (1, 3, 18),
            (2, 4, 18),
            (3, 4, 13),
            (3, 6, 7),
            (4, 5, 7),
        ];
        let m = max_weight_matching(8, &e, false);
        assert_eq!(
            m,
            vec![
                Some(7),
                Some(2),
                Some(1),
                Some(6),
                Some(5),
                Some(4),
                Some(3),
                Some(0)
            ]
        );
        // expand a T-blossom
        let e = [
            (0, 1, 23),
            (0, 4, 22),
            (0, 5, 15),
            (1, 2, 25),
            (2, 3, 22),
            (3, 4, 25),
            (3, 7, 14),
            (4, 6, 13),
            (5, 8, 7),
        ];
        let m = max_weight_matching(9, &e, false);
        assert_eq!(weight(&e, &m), brute(9, &e, false).1);
    }

    #[test]
    fn perfect_matching_absent() {
        assert!(min_weight_perfect_matching(3, &[(0, 1, 1), (1, 2, 1)]).is_none());
        assert!(min_weight_perfect_matching(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn matches_brute_force(n in 2usize..11, seed in proptest::collection::vec((0usize..11, 0usize..11, 0i64..20), 1..30), card in any::<bool>()) {
            let mut edges: Vec<(usize, usize, i64)> = Vec::new();
            for (u, v, w) in seed {
                let (u, v) = (u % n, v % n);
                if u != v && !edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
                    edges.push((u, v, w));
                }
            }
            let mate = max_weight_matching(n, &edges, card);
            for v in 0..n {
                if let Some(u) = mate[v] {
                    prop_assert_eq!(mate[u], Some(v));
                    prop_assert!(edges.iter().any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)));
                }
            }
            let (bc, bw) = brute(n, &edges, card);
            prop_assert_eq!(weight(&edges, &mate), bw);
            if card {
                prop_assert_eq!(mate.iter().filter(|m| m.is_some()).count() / 2, bc);
            }
        }

        #[test]
        fn complete_graph_perfect_matching(n in 1usize..6, ws in proptest::collection::vec(1i64..15, 45)) {
            let n = 2 * n;
            let mut edges = Vec::new();
            let mut it = ws.into_iter().cycle();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v, it.next().unwrap()));
                }
            }
            let m = min_weight_perfect_matching(n, &edges).unwrap();
            let total: i64 = edges.iter().filter(|&&(u, v, _)| m[u] == v).map(|e| e.2).sum();
            let neg: Vec<_> = edges.iter().map(|&(u, v, w)| (u, v, -w + 100)).collect();
            let (_, best) = brute(n, &neg, true);
            prop_assert_eq!(total, 100 * n as i64 / 2 - best);
        }
    }
}
