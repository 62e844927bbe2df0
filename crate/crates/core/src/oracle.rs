//! Brute-force enumeration of DWBC six-vertex configurations.
//!
//! Convention (arrows on the left, right, lower, upper edge of a vertex):
//!
//! | type | left | right | below | above | class |
//! |------|------|-------|-------|-------|-------|
//! | 1    | →    | →     | ↑     | ↑     | a     |
//! | 2    | ←    | ←     | ↓     | ↓     | a     |
//! | 3    | →    | →     | ↓     | ↓     | b     |
//! | 4    | ←    | ←     | ↑     | ↑     | b     |
//! | 5    | →    | ←     | ↓     | ↑     | c     |
//! | 6    | ←    | →     | ↑     | ↓     | c     |
//!
//! Only the class counts enter `Z_N`; swapping the a/b labels maps `x` to `-x`.

use std::collections::BTreeMap;

use dashu_int::UBig;
use dashu_ratio::RBig;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default enumeration cap; 7436 configurations at N = 6.
pub const DEFAULT_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum H {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum V {
    #[serde(rename = "U")]
    Up,
    #[serde(rename = "D")]
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightClass {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexType(u8);

const TABLE: [(H, H, V, V); 6] = [
    (H::Right, H::Right, V::Up, V::Up),
    (H::Left, H::Left, V::Down, V::Down),
    (H::Right, H::Right, V::Down, V::Down),
    (H::Left, H::Left, V::Up, V::Up),
    (H::Right, H::Left, V::Down, V::Up),
    (H::Left, H::Right, V::Up, V::Down),
];

impl VertexType {
    pub const ALL: [VertexType; 6] = [
        VertexType(1),
        VertexType(2),
        VertexType(3),
        VertexType(4),
        VertexType(5),
        VertexType(6),
    ];

    pub fn tag(self) -> u8 {
        self.0
    }

    pub fn class(self) -> WeightClass {
        match self.0 {
            1 | 2 => WeightClass::A,
            3 | 4 => WeightClass::B,
            _ => WeightClass::C,
        }
    }

    /// `(left, right, below, above)` arrows.
    pub fn arrows(self) -> (H, H, V, V) {
        TABLE[self.0 as usize - 1]
    }

    pub fn from_arrows(left: H, right: H, below: V, above: V) -> Option<Self> {
        TABLE
            .iter()
            .position(|&t| t == (left, right, below, above))
            .map(|i| VertexType(i as u8 + 1))
    }

    /// Two arrows point into the vertex and two out.
    pub fn satisfies_ice_rule(self) -> bool {
        let (l, r, b, a) = self.arrows();
        let inward = [l == H::Right, r == H::Left, b == V::Up, a == V::Down];
        inward.iter().filter(|&&v| v).count() == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    #[serde(rename = "N")]
    pub n: usize,
    /// `N` rows of `N + 1` edges; entry `[i][j]` sits left of vertex `(i, j)`.
    pub horizontal_edges: Vec<Vec<H>>,
    /// `N + 1` rows of `N` edges; entry `[i][j]` sits above vertex `(i, j)`.
    pub vertical_edges: Vec<Vec<V>>,
    /// `n_1..n_6`.
    pub counts: [usize; 6],
}

impl Configuration {
    pub fn vertex(&self, i: usize, j: usize) -> Option<VertexType> {
        VertexType::from_arrows(
            self.horizontal_edges[i][j],
            self.horizontal_edges[i][j + 1],
            self.vertical_edges[i + 1][j],
            self.vertical_edges[i][j],
        )
    }

    pub fn class_counts(&self) -> [usize; 3] {
        let c = &self.counts;
        [c[0] + c[1], c[2] + c[3], c[4] + c[5]]
    }

    /// Alternating sign matrix: type 6 ↦ +1, type 5 ↦ −1, otherwise 0.
    pub fn to_asm(&self) -> Vec<Vec<i8>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.vertex(i, j).map(VertexType::tag) {
                        Some(6) => 1,
                        Some(5) => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Ice rule everywhere, boundary conditions, and consistent counts.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let boundary = (0..n).all(|i| {
            self.horizontal_edges[i][0] == H::Left && self.horizontal_edges[i][n] == H::Right
        }) && (0..n).all(|j| {
            self.vertical_edges[0][j] == V::Down && self.vertical_edges[n][j] == V::Up
        });
        let mut counts = [0usize; 6];
        for i in 0..n {
            for j in 0..n {
                match self.vertex(i, j) {
                    Some(t) => counts[t.tag() as usize - 1] += 1,
                    None => return false,
                }
            }
        }
        boundary && counts == self.counts && counts.iter().sum::<usize>() == n * n
    }
}

struct Search {
    n: usize,
    h: Vec<Vec<H>>,
    v: Vec<Vec<V>>,
    counts: [usize; 6],
    out: Vec<Configuration>,
}

impl Search {
    fn new(n: usize) -> Self {
        let mut h = vec![vec![H::Left; n + 1]; n];
        for row in h.iter_mut() {
            row[n] = H::Right;
        }
        let mut v = vec![vec![V::Down; n]; n + 1];
        v[n] = vec![V::Up; n];
        Self { n, h, v, counts: [0; 6], out: Vec::new() }
    }

    /// Place vertex `(i, j)` given its left and upper edges, then recurse.
    fn step(&mut self, i: usize, j: usize) {
        let n = self.n;
        if j == n {
            // row finished: right boundary must point out
            if self.h[i][n] != H::Right {
                return;
            }
            if i + 1 == n {
                if self.v[n].iter().all(|&e| e == V::Up) {
                    self.out.push(Configuration {
                        n,
                        horizontal_edges: self.h.clone(),
                        vertical_edges: self.v.clone(),
                        counts: self.counts,
                    });
                }
                return;
            }
            self.step(i + 1, 0);
            return;
        }
        let left = self.h[i][j];
        let above = self.v[i][j];
        for t in VertexType::ALL {
            let (l, r, b, a) = t.arrows();
            if l != left || a != above {
                continue;
            }
            // last row: lower edges are the fixed boundary
            if i + 1 == n && b != V::Up {
                continue;
            }
            // last column: right edge is the fixed boundary
            if j + 1 == n && r != H::Right {
                continue;
            }
            let saved_r = self.h[i][j + 1];
            let saved_b = self.v[i + 1][j];
            self.h[i][j + 1] = r;
            self.v[i + 1][j] = b;
            self.counts[t.tag() as usize - 1] += 1;
            self.step(i, j + 1);
            self.counts[t.tag() as usize - 1] -= 1;
            self.h[i][j + 1] = saved_r;
            self.v[i + 1][j] = saved_b;
        }
    }
}

/// All DWBC configurations, refusing `n > cap`.
pub fn enumerate_configs_capped(n: usize, cap: usize) -> Result<Vec<Configuration>> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    // The top row has exactly one turning (type 6) vertex; split the search on
    // its column. Results are concatenated in column order.
    let parts: Vec<Vec<Configuration>> = (0..n)
        .into_par_iter()
        .map(|col| {
            let mut s = Search::new(n);
            let mut ok = true;
            for j in 0..n {
                let t = if j < col {
                    VertexType(2)
                } else if j == col {
                    VertexType(6)
                } else {
                    VertexType(3)
                };
                let (l, r, b, a) = t.arrows();
                ok &= l == s.h[0][j] && a == s.v[0][j];
                s.h[0][j + 1] = if j + 1 == n { H::Right } else { r };
                ok &= j + 1 < n || r == H::Right;
                s.v[1][j] = b;
                s.counts[t.tag() as usize - 1] += 1;
            }
            if !ok {
                return Vec::new();
            }
            if n == 1 {
                if s.v[1].iter().all(|&e| e == V::Up) {
                    s.out.push(Configuration {
                        n,
                        horizontal_edges: s.h.clone(),
                        vertical_edges: s.v.clone(),
                        counts: s.counts,
                    });
                }
            } else {
                s.step(1, 0);
            }
            s.out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

pub fn enumerate_configs(n: usize) -> Result<Vec<Configuration>> {
    enumerate_configs_capped(n, DEFAULT_CAP)
}

/// Number of configurations per class-count triple `(n_a, n_b, n_c)`.
pub fn class_histogram(configs: &[Configuration]) -> BTreeMap<[usize; 3], u64> {
    let mut m = BTreeMap::new();
    for c in configs {
        *m.entry(c.class_counts()).or_insert(0) += 1;
    }
    m
}

fn pow(r: &RBig, e: usize) -> RBig {
    RBig::from_parts(r.numerator().pow(e), r.denominator().pow(e))
}

/// `Σ a^{n_a} b^{n_b} c^{n_c}` over all DWBC configurations, exactly.
pub fn partition_bruteforce(n: usize, a: &RBig, b: &RBig, c: &RBig) -> Result<RBig> {
    partition_bruteforce_capped(n, a, b, c, DEFAULT_CAP)
}

pub fn partition_bruteforce_capped(
    n: usize,
    a: &RBig,
    b: &RBig,
    c: &RBig,
    cap: usize,
) -> Result<RBig> {
    for (name, w) in [("a", a), ("b", b), ("c", c)] {
        if *w <= RBig::ZERO {
            return Err(Error::Domain(format!("weight {name} must be positive")));
        }
    }
    let configs = enumerate_configs_capped(n, cap)?;
    Ok(weighted_sum(&class_histogram(&configs), a, b, c))
}

pub fn weighted_sum(hist: &BTreeMap<[usize; 3], u64>, a: &RBig, b: &RBig, c: &RBig) -> RBig {
    hist.iter().fold(RBig::ZERO, |acc, (&[na, nb, nc], &mult)| {
        acc + pow(a, na) * pow(b, nb) * pow(c, nc) * RBig::from(UBig::from(mult))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationRow {
    pub index: usize,
    pub counts: [usize; 6],
    pub n5_minus_n6: i64,
    pub n_c: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub rows: Vec<ConservationRow>,
    /// `n_5 - n_6` takes a single value over all configurations.
    pub constant: bool,
    pub n5_minus_n6: i64,
    /// `n_c mod 2` is the same for every configuration.
    pub nc_parity_constant: bool,
    pub nc_min: usize,
    pub nc_max: usize,
    /// Histogram of `(n_c - N)/2` (the number of −1 entries of the ASM).
    pub nc_offset_histogram: BTreeMap<usize, u64>,
}

pub fn conservation_report(n: usize) -> Result<ConservationReport> {
    let configs = enumerate_configs(n)?;
    let rows: Vec<ConservationRow> = configs
        .iter()
        .enumerate()
        .map(|(index, c)| ConservationRow {
            index,
            counts: c.counts,
            n5_minus_n6: c.counts[4] as i64 - c.counts[5] as i64,
            n_c: c.counts[4] + c.counts[5],
        })
        .collect();
    let first = rows[0].n5_minus_n6;
    let constant = rows.iter().all(|r| r.n5_minus_n6 == first);
    let parity = rows[0].n_c % 2;
    let mut hist = BTreeMap::new();
    for r in &rows {
        *hist.entry(r.n_c.saturating_sub(n) / 2).or_insert(0) += 1;
    }
    Ok(ConservationReport {
        n,
        constant,
        n5_minus_n6: first,
        nc_parity_constant: rows.iter().all(|r| r.n_c % 2 == parity),
        nc_min: rows.iter().map(|r| r.n_c).min().unwrap_or(0),
        nc_max: rows.iter().map(|r| r.n_c).max().unwrap_or(0),
        nc_offset_histogram: hist,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::parse_rational;
    use std::collections::BTreeSet;

    fn r(s: &str) -> RBig {
        parse_rational(s).unwrap()
    }

    /// Independent ASM generator: rows with partial sums in {0,1}, column
    /// partial sums in {0,1}, all line sums 1.
    fn asms(n: usize) -> Vec<Vec<Vec<i8>>> {
        fn rows(n: usize) -> Vec<Vec<i8>> {
            let mut out = Vec::new();
            let mut cur = vec![0i8; n];
            fn go(j: usize, s: i8, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
                if j == cur.len() {
                    if s == 1 {
                        out.push(cur.clone());
                    }
                    return;
                }
                for v in [-1i8, 0, 1] {
                    let t = s + v;
                    if (0..=1).contains(&t) {
                        cur[j] = v;
                        go(j + 1, t, cur, out);
                    }
                }
                cur[j] = 0;
            }
            go(0, 0, &mut cur, &mut out);
            out
        }
        let all = rows(n);
        let mut out = Vec::new();
        fn build(
            i: usize,
            n: usize,
            all: &[Vec<i8>],
            col: &mut Vec<i8>,
            acc: &mut Vec<Vec<i8>>,
            out: &mut Vec<Vec<Vec<i8>>>,
        ) {
            if i == n {
                if col.iter().all(|&c| c == 1) {
                    out.push(acc.clone());
                }
                return;
            }
            for row in all {
                if (0..n).all(|j| (0..=1).contains(&(col[j] + row[j]))) {
                    for j in 0..n {
                        col[j] += row[j];
                    }
                    acc.push(row.clone());
                    build(i + 1, n, all, col, acc, out);
                    acc.pop();
                    for j in 0..n {
                        col[j] -= row[j];
                    }
                }
            }
        }
        build(0, n, &all, &mut vec![0; n], &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn ice_rule_table() {
        for t in VertexType::ALL {
            assert!(t.satisfies_ice_rule(), "type {}", t.tag());
        }
        // exactly six of the sixteen arrow patterns obey the ice rule
        let mut n = 0;
        for l in [H::Left, H::Right] {
            for r in [H::Left, H::Right] {
                for b in [V::Up, V::Down] {
                    for a in [V::Up, V::Down] {
                        let inward = [l == H::Right, r == H::Left, b == V::Up, a == V::Down];
                        if inward.iter().filter(|&&v| v).count() == 2 {
                            n += 1;
                            assert!(VertexType::from_arrows(l, r, b, a).is_some());
                        }
                    }
                }
            }
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn single_vertex_is_c_type() {
        // brute force over the six types for N = 1 under DWBC
        let forced: Vec<_> = VertexType::ALL
            .into_iter()
            .filter(|t| t.arrows() == (H::Left, H::Right, V::Up, V::Down))
            .collect();
        assert_eq!(forced.len(), 1);
        assert_eq!(forced[0].class(), WeightClass::C);
        let c = enumerate_configs(1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].class_counts(), [0, 0, 1]);
    }

    #[test]
    fn counts_are_asm_numbers() {
        for (n, want) in [(1, 1), (2, 2), (3, 7), (4, 42), (5, 429)] {
            let c = enumerate_configs(n).unwrap();
            assert_eq!(c.len(), want, "N = {n}");
            assert!(c.iter().all(Configuration::is_valid));
        }
    }

    #[test]
    fn bijection_with_independent_asm_generator() {
        for n in 1..=5 {
            let from_configs: BTreeSet<_> =
                enumerate_configs(n).unwrap().iter().map(|c| c.to_asm()).collect();
            let direct: BTreeSet<_> = asms(n).into_iter().collect();
            assert_eq!(from_configs.len(), direct.len());
            assert_eq!(from_configs, direct, "N = {n}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_configs(7).unwrap_err(), Error::TooLarge { n: 7, cap: 6 });
        assert!(enumerate_configs_capped(3, 2).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let (a, b, c) = (r("3/7"), r("5/2"), r("11/3"));
        assert_eq!(partition_bruteforce(1, &a, &b, &c).unwrap(), c);
        let (one, two) = (r("1"), r("2"));
        assert_eq!(partition_bruteforce(2, &one, &one, &two).unwrap(), r("8"));
        assert_eq!(partition_bruteforce(3, &one, &one, &two).unwrap(), r("80"));
    }

    #[test]
    fn conservation_examples() {
        for n in [1, 2, 4] {
            let rep = conservation_report(n).unwrap();
            assert!(rep.constant);
            assert_eq!(rep.n5_minus_n6, -(n as i64));
            assert!(rep.nc_parity_constant);
        }
        assert_eq!(conservation_report(4).unwrap().rows.len(), 42);
    }

    #[test]
    fn configuration_json_round_trip() {
        let c = enumerate_configs(3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: Vec<Configuration> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
