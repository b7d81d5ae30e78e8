//! Exact maximum-weight matching (Edmonds' blossom algorithm with dual
//! variables, O(n³)), following the structure of Van Rantwijk's classic
//! implementation. Integer weights only, so optimality is exact.

const NONE: i64 = -1;

struct Matcher<'a> {
    edges: &'a [(usize, usize, i64)],
    nv: usize,
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<i64>,
    label: Vec<u8>,
    labelend: Vec<i64>,
    inblossom: Vec<usize>,
    blossomparent: Vec<i64>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<i64>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<i64>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

/// Index into a cyclic child list with Python-style negative indices.
fn at(len: usize, j: i64) -> usize {
    j.rem_euclid(len as i64) as usize
}

impl<'a> Matcher<'a> {
    fn new(nv: usize, edges: &'a [(usize, usize, i64)]) -> Self {
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut neighbend = vec![Vec::new(); nv];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nv];
        dualvar.extend(std::iter::repeat_n(0, nv));
        Matcher {
            edges,
            nv,
            endpoint,
            neighbend,
            mate: vec![NONE; nv],
            label: vec![0; 2 * nv],
            labelend: vec![NONE; 2 * nv],
            inblossom: (0..nv).collect(),
            blossomparent: vec![NONE; 2 * nv],
            blossomchilds: vec![Vec::new(); 2 * nv],
            blossombase: (0..nv as i64).chain(std::iter::repeat_n(NONE, nv)).collect(),
            blossomendps: vec![Vec::new(); 2 * nv],
            bestedge: vec![NONE; 2 * nv],
            blossombestedges: vec![None; 2 * nv],
            unusedblossoms: (nv..2 * nv).collect(),
            dualvar,
            allowedge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.leaves_into(b, &mut out);
        out
    }

    fn leaves_into(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nv {
            out.push(b);
            return;
        }
        for &t in &self.blossomchilds[b] {
            self.leaves_into(t, out);
        }
    }

    fn assign_label(&mut self, w: usize, t: u8, p: i64) {
        let b = self.inblossom[w];
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let mut q = std::mem::take(&mut self.queue);
            self.leaves_into(b, &mut q);
            self.queue = q;
        } else if t == 2 {
            let base = self.blossombase[b] as usize;
            let m = self.mate[base];
            debug_assert!(m >= 0);
            self.assign_label(self.endpoint[m as usize], 1, m ^ 1);
        }
    }

    fn scan_blossom(&mut self, mut v: i64, mut w: i64) -> i64 {
        let mut path = Vec::new();
        let mut base = NONE;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v as usize];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            path.push(b);
            self.label[b] = 5;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b] as usize] as i64;
                b = self.inblossom[v as usize];
                v = self.endpoint[self.labelend[b] as usize] as i64;
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base as i64;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b as i64;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b as i64;
            path.push(bv);
            endps.push(self.labelend[bv] as usize);
            v = self.endpoint[self.labelend[bv] as usize];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b as i64;
            path.push(bw);
            endps.push((self.labelend[bw] ^ 1) as usize);
            w = self.endpoint[self.labelend[bw] as usize];
            bw = self.inblossom[w];
        }
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        for v in self.leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
        let mut bestedgeto = vec![NONE; 2 * self.nv];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(l) => vec![l],
                None => self
                    .leaves(bv)
                    .into_iter()
                    .map(|v| self.neighbend[v].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj] as usize))
                    {
                        bestedgeto[bj] = k as i64;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        let list: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).map(|k| k as usize).collect();
        self.bestedge[b] = NONE;
        for &k in &list {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b] as usize) {
                self.bestedge[b] = k as i64;
            }
        }
        self.blossombestedges[b] = Some(list);
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nv {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            let len = childs.len();
            let entrychild = self.inblossom[self.endpoint[(self.labelend[b] ^ 1) as usize]];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as i64;
            let (jstep, endptrick): (i64, usize) = if j & 1 == 1 {
                j -= len as i64;
                (1, 0)
            } else {
                (-1, 1)
            };
            let endps = self.blossomendps[b].clone();
            let mut p = self.labelend[b] as usize;
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = endps[at(len, j - endptrick as i64)];
                self.label[self.endpoint[q ^ endptrick ^ 1]] = 0;
                self.assign_label(self.endpoint[p ^ 1], 2, p as i64);
                self.allowedge[q / 2] = true;
                j += jstep;
                p = endps[at(len, j - endptrick as i64)] ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = childs[at(len, j)];
            let e = self.endpoint[p ^ 1];
            self.label[e] = 2;
            self.label[bv] = 2;
            self.labelend[e] = p as i64;
            self.labelend[bv] = p as i64;
            self.bestedge[bv] = NONE;
            j += jstep;
            while childs[at(len, j)] != entrychild {
                let bv = childs[at(len, j)];
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let found = self.leaves(bv).into_iter().find(|&v| self.label[v] != 0);
                if let Some(v) = found {
                    self.label[v] = 0;
                    let m = self.mate[self.blossombase[bv] as usize];
                    self.label[self.endpoint[m as usize]] = 0;
                    self.assign_label(v, 2, self.labelend[v]);
                }
                j += jstep;
            }
        }
        self.label[b] = 0xff;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b as i64 {
            t = self.blossomparent[t] as usize;
        }
        if t >= self.nv {
            self.augment_blossom(t, v);
        }
        let len = self.blossomchilds[b].len();
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap();
        let mut j = i as i64;
        let (jstep, endptrick): (i64, usize) = if i & 1 == 1 {
            j -= len as i64;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.blossomchilds[b][at(len, j)];
            let p = self.blossomendps[b][at(len, j - endptrick as i64)] ^ endptrick;
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.blossomchilds[b][at(len, j)];
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = (p ^ 1) as i64;
            self.mate[self.endpoint[p ^ 1]] = p as i64;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        debug_assert_eq!(self.blossombase[b], v as i64);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                if bs >= self.nv {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p as i64;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs] as usize];
                let bt = self.inblossom[t];
                s = self.endpoint[self.labelend[bt] as usize];
                let j = self.endpoint[(self.labelend[bt] ^ 1) as usize];
                if bt >= self.nv {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = (self.labelend[bt] ^ 1) as usize;
            }
        }
    }

    fn run(&mut self, maxcardinality: bool) -> Vec<i64> {
        let nv = self.nv;
        for _ in 0..nv {
            self.label.iter_mut().for_each(|l| *l = 0);
            self.bestedge.iter_mut().for_each(|e| *e = NONE);
            for b in nv..2 * nv {
                self.blossombestedges[b] = None;
            }
            self.allowedge.iter_mut().for_each(|a| *a = false);
            self.queue.clear();
            for v in 0..nv {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while !augmented {
                    let Some(v) = self.queue.pop() else { break };
                    for idx in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][idx];
                        let k = p / 2;
                        let w = self.endpoint[p];
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
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, (p ^ 1) as i64);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v as i64, w as i64);
                                if base >= 0 {
                                    self.add_blossom(base as usize, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                self.label[w] = 2;
                                self.labelend[w] = (p ^ 1) as i64;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b] as usize) {
                                self.bestedge[b] = k as i64;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w] as usize))
                        {
                            self.bestedge[w] = k as i64;
                        }
                    }
                }
                if augmented {
                    break;
                }

                let mut deltatype = -1;
                let mut delta = 0i64;
                let mut deltaedge = 0usize;
                let mut deltablossom = 0usize;
                if !maxcardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..nv].iter().min().unwrap();
                }
                for v in 0..nv {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v] as usize);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v] as usize;
                        }
                    }
                }
                for b in 0..2 * nv {
                    if self.blossomparent[b] == NONE && self.label[b] == 1 && self.bestedge[b] != NONE {
                        let kslack = self.slack(self.bestedge[b] as usize);
                        debug_assert_eq!(kslack % 2, 0);
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b] as usize;
                        }
                    }
                }
                for b in nv..2 * nv {
                    if self.blossombase[b] >= 0
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    deltatype = 1;
                    delta = (*self.dualvar[..nv].iter().min().unwrap()).max(0);
                }

                for v in 0..nv {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in nv..2 * nv {
                    if self.blossombase[b] >= 0 && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
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
            for b in nv..2 * nv {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] >= 0
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        (0..nv)
            .map(|v| {
                if self.mate[v] >= 0 {
                    self.endpoint[self.mate[v] as usize] as i64
                } else {
                    NONE
                }
            })
            .collect()
    }
}

/// Maximum-weight matching on `nv` vertices; returns each vertex's mate.
/// With `maxcardinality`, the maximum-weight one among maximum-cardinality
/// matchings. Weights are doubled internally to keep all duals integral.
pub fn max_weight_matching(nv: usize, edges: &[(usize, usize, i64)], maxcardinality: bool) -> Vec<Option<usize>> {
    if nv == 0 {
        return Vec::new();
    }
    let doubled: Vec<(usize, usize, i64)> = edges.iter().map(|&(i, j, w)| (i, j, 2 * w)).collect();
    Matcher::new(nv, &doubled)
        .run(maxcardinality)
        .into_iter()
        .map(|m| (m >= 0).then_some(m as usize))
        .collect()
}

/// Minimum-weight perfect matching; `None` if no perfect matching exists.
pub fn min_weight_perfect_matching(nv: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    min_weight_perfect_matching_lazy(nv, edges, &[])
}

/// Minimum-weight perfect matching over `edges` ∪ `extra`, solved on `edges`
/// first. Extra edges with negative reduced cost under the optimal duals are
/// added and the problem re-solved until none is left, so the result is
/// optimal for the full edge set.
pub fn min_weight_perfect_matching_lazy(
    nv: usize,
    edges: &[(usize, usize, i64)],
    extra: &[(usize, usize, i64)],
) -> Option<Vec<usize>> {
    if nv == 0 {
        return Some(Vec::new());
    }
    let top = edges.iter().chain(extra).map(|e| e.2).max().unwrap_or(0) + 1;
    let flip = |&(i, j, w): &(usize, usize, i64)| (i, j, 2 * (top - w));
    let mut active: Vec<(usize, usize, i64)> = edges.iter().map(flip).collect();
    let mut pending: Vec<(usize, usize, i64)> = extra.iter().map(flip).collect();
    let mut chain_i = Vec::new();
    let mut chain_j = Vec::new();
    loop {
        let mut m = Matcher::new(nv, &active);
        let mate = m.run(true);
        if mate.iter().any(|&x| x < 0) {
            if pending.is_empty() {
                return None;
            }
            // The sparse graph lacks a perfect matching; solve the full one.
            active.append(&mut pending);
            continue;
        }
        let ancestors = |v: usize, out: &mut Vec<usize>| {
            out.clear();
            let mut b = v as i64;
            while b != NONE {
                out.push(b as usize);
                b = m.blossomparent[b as usize];
            }
        };
        let mut violated = Vec::new();
        pending.retain(|&(i, j, w)| {
            let mut s = m.dualvar[i] + m.dualvar[j] - 2 * w;
            ancestors(i, &mut chain_i);
            ancestors(j, &mut chain_j);
            for (bi, bj) in chain_i.iter().rev().zip(chain_j.iter().rev()) {
                if bi != bj {
                    break;
                }
                s += 2 * m.dualvar[*bi];
            }
            if s < 0 {
                violated.push((i, j, w));
                false
            } else {
                true
            }
        });
        if violated.is_empty() {
            return Some(mate.into_iter().map(|x| x as usize).collect());
        }
        active.append(&mut violated);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weight(edges: &[(usize, usize, i64)], mate: &[Option<usize>]) -> i64 {
        edges
            .iter()
            .filter(|&&(i, j, _)| mate[i] == Some(j))
            .map(|e| e.2)
            .sum()
    }

    /// Brute force over all matchings; returns (cardinality, weight) optimum.
    fn brute(nv: usize, edges: &[(usize, usize, i64)], maxcard: bool) -> (usize, i64) {
        fn rec(v: usize, used: &mut Vec<bool>, nv: usize, edges: &[(usize, usize, i64)], card: usize, w: i64, best: &mut Vec<(usize, i64)>) {
            if v == nv {
                best.push((card, w));
                return;
            }
            if used[v] {
                return rec(v + 1, used, nv, edges, card, w, best);
            }
            rec(v + 1, used, nv, edges, card, w, best);
            for &(a, b, wt) in edges {
                let u = if a == v { b } else if b == v { a } else { continue };
                if u > v && !used[u] {
                    used[u] = true;
                    used[v] = true;
                    rec(v + 1, used, nv, edges, card + 1, w + wt, best);
                    used[u] = false;
                    used[v] = false;
                }
            }
        }
        let mut all = Vec::new();
        rec(0, &mut vec![false; nv], nv, edges, 0, 0, &mut all);
        if maxcard {
            let c = all.iter().map(|x| x.0).max().unwrap();
            (c, all.iter().filter(|x| x.0 == c).map(|x| x.1).max().unwrap())
        } else {
            let w = all.iter().map(|x| x.1).max().unwrap();
            (0, w)
        }
    }

    #[test]
    fn small_known_cases() {
        assert_eq!(max_weight_matching(2, &[(0, 1, 1)], false), vec![Some(1), Some(0)]);
        let e = [(0, 1, 10), (1, 2, 11)];
        assert_eq!(max_weight_matching(3, &e, false), vec![None, Some(2), Some(1)]);
        // Classic blossom case.
        let e = [(0, 1, 8), (0, 2, 9), (1, 2, 10), (2, 3, 7)];
        let m = max_weight_matching(4, &e, true);
        assert_eq!(m, vec![Some(1), Some(0), Some(3), Some(2)]);
        let e = [(0, 1, 5), (1, 2, 1), (2, 3, 5), (0, 3, 1)];
        let m = min_weight_perfect_matching(4, &e).unwrap();
        assert_eq!(m, vec![3, 2, 1, 0]);
        assert!(min_weight_perfect_matching(3, &[(0, 1, 1), (1, 2, 1)]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn matches_brute_force(
            nv in 2usize..9,
            raw in proptest::collection::vec((0usize..9, 0usize..9, 0i64..20), 1..20),
            maxcard in any::<bool>(),
        ) {
            let mut edges: Vec<(usize, usize, i64)> = Vec::new();
            for (a, b, w) in raw {
                let (a, b) = (a % nv, b % nv);
                if a != b && !edges.iter().any(|e| (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a)) {
                    edges.push((a, b, w));
                }
            }
            prop_assume!(!edges.is_empty());
            let m = max_weight_matching(nv, &edges, maxcard);
            for v in 0..nv {
                if let Some(u) = m[v] {
                    prop_assert_eq!(m[u], Some(v));
                }
            }
            let (card, best) = brute(nv, &edges, maxcard);
            prop_assert_eq!(weight(&edges, &m), best);
            if maxcard {
                prop_assert_eq!(m.iter().filter(|x| x.is_some()).count() / 2, card);
            }
        }

        #[test]
        fn lazy_equals_full(
            half in 1usize..5,
            raw in proptest::collection::vec((0usize..10, 0usize..10, 0i64..30, any::<bool>()), 1..30),
        ) {
            let nv = 2 * half;
            let (mut core, mut extra): (Vec<(usize, usize, i64)>, Vec<(usize, usize, i64)>) = (Vec::new(), Vec::new());
            for (a, b, w, lazy) in raw {
                let (a, b) = (a % nv, b % nv);
                let seen = core.iter().chain(&extra).any(|e| (e.0 == a && e.1 == b) || (e.0 == b && e.1 == a));
                if a != b && !seen {
                    if lazy { extra.push((a, b, w)) } else { core.push((a, b, w)) }
                }
            }
            let all: Vec<_> = core.iter().chain(&extra).copied().collect();
            let full = min_weight_perfect_matching(nv, &all);
            let lazy = min_weight_perfect_matching_lazy(nv, &core, &extra);
            prop_assert_eq!(full.is_some(), lazy.is_some());
            if let (Some(f), Some(l)) = (full, lazy) {
                let w = |m: &[usize]| all.iter().filter(|e| m[e.0] == e.1).map(|e| e.2).sum::<i64>();
                for v in 0..nv {
                    prop_assert_eq!(l[l[v]], v);
                }
                prop_assert_eq!(w(&l), w(&f));
            }
        }
    }
}
