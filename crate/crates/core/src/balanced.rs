//! Balanced zero-sum arrays on the `n`-torus `T_n` with values in `Z/n²`.
//!
//! An array is balanced when its `n²` values are exactly `0, …, n²-1`, and zero-sum
//! for a window `W` when every translate sum vanishes modulo `n²`. Cells of `T_n`
//! are numbered `k = i + n j`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::array::TorusArray;
use crate::error::{domain, Error, Result};
use crate::lattice::{punctured_square, Window};
use crate::modp::{howell_form, kernel, window_sums_mod};
use crate::ring::is_prime;

/// Array on `T_n` with entries in `0..n²`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ZnArray {
    n: usize,
    values: Vec<u32>,
}

impl ZnArray {
    /// Values in cell order `k = i + n j`, reduced modulo `n²`.
    pub fn new(n: usize, values: Vec<u32>) -> Result<Self> {
        if n < 2 || values.len() != n * n {
            return Err(Error::IncompatibleDims(format!("T_{n} needs {} values, got {}", n * n, values.len())));
        }
        let m = (n * n) as u32;
        Ok(ZnArray { n, values: values.into_iter().map(|v| v % m).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        (self.n * self.n) as u64
    }

    /// Values in cell order.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, i: i64, j: i64) -> u32 {
        let n = self.n as i64;
        self.values[(i.rem_euclid(n) + n * j.rem_euclid(n)) as usize]
    }

    pub fn to_torus(&self) -> TorusArray<u32> {
        TorusArray::new(self.n, self.n, self.values.clone()).expect("square")
    }
}

impl fmt::Display for ZnArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.values.iter().join(","))
    }
}

impl Serialize for ZnArray {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_torus().serialize(s)
    }
}

/// Whether the values are a permutation of `0..n²`.
pub fn is_balanced(a: &ZnArray) -> bool {
    let mut seen = vec![false; a.values.len()];
    a.values.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
}

/// Every translate sum of `W` on `T_n`, and both predicates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalancedCertificate {
    pub n: usize,
    pub modulus: u64,
    pub window: Vec<(i64, i64)>,
    pub array: ZnArray,
    /// `translate_sums[j][i]` is the window sum at translate `(i, j)`, reduced mod `n²`.
    pub translate_sums: Vec<Vec<u64>>,
    pub balanced: bool,
    pub zero_sum: bool,
}

pub fn certify(a: &ZnArray, w: &Window) -> BalancedCertificate {
    let sums = window_sums_mod(w, &a.to_torus(), a.modulus());
    let zero_sum = sums.values().iter().all(|&v| v == 0);
    BalancedCertificate {
        n: a.n,
        modulus: a.modulus(),
        window: w.points().iter().map(|p| (p.i1, p.i2)).collect(),
        array: a.clone(),
        translate_sums: sums.to_rows(),
        balanced: is_balanced(a),
        zero_sum,
    }
}

pub fn is_zero_sum(a: &ZnArray, w: &Window) -> bool {
    certify(a, w).zero_sum
}

fn s2_star() -> Window {
    punctured_square(2).expect("valid window")
}

/// The supports of the nine translates of `S(2)*` on `T_3`, as sorted cell triples in translate order.
pub fn support_triples() -> Vec<[usize; 3]> {
    let w = s2_star();
    (0..9)
        .map(|k| {
            let (i, j) = ((k % 3) as i64, (k / 3) as i64);
            let mut t: Vec<usize> = w
                .points()
                .iter()
                .map(|q| ((i + q.i1).rem_euclid(3) + 3 * (j + q.i2).rem_euclid(3)) as usize)
                .collect();
            t.sort_unstable();
            [t[0], t[1], t[2]]
        })
        .collect()
}

/// Formats a triple as in `134`.
pub fn triple_label(t: &[usize; 3]) -> String {
    t.iter().map(|c| c.to_string()).collect()
}

/// All balanced zero-sum arrays for `S(2)*` on `T_3` with `x₀ = 0`, by backtracking
/// with partial translate-sum pruning. Sorted lexicographically.
pub fn search_balanced_3torus() -> Vec<ZnArray> {
    let triples = support_triples();
    // Triples that become complete once cell `c` is assigned (cells are assigned in order).
    let closing: Vec<Vec<[usize; 3]>> = (0..9).map(|c| triples.iter().filter(|t| t[2] == c).copied().collect()).collect();

    fn dfs(x: &mut [u32; 9], used: &mut [bool; 9], cell: usize, closing: &[Vec<[usize; 3]>], out: &mut Vec<[u32; 9]>) {
        if cell == 9 {
            out.push(*x);
            return;
        }
        for v in 1..9u32 {
            if used[v as usize] {
                continue;
            }
            x[cell] = v;
            if closing[cell].iter().all(|t| t.iter().map(|&c| x[c]).sum::<u32>() % 9 == 0) {
                used[v as usize] = true;
                dfs(x, used, cell + 1, closing, out);
                used[v as usize] = false;
            }
        }
    }

    let mut found: Vec<[u32; 9]> = (1..9u32)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut x = [0u32; 9];
            let mut used = [false; 9];
            used[0] = true;
            used[first as usize] = true;
            x[1] = first;
            let mut out = Vec::new();
            if closing[1].iter().all(|t| t.iter().map(|&c| x[c]).sum::<u32>() % 9 == 0) {
                dfs(&mut x, &mut used, 2, &closing, &mut out);
            }
            out
        })
        .collect();
    found.sort();
    found.into_iter().map(|x| ZnArray::new(3, x.to_vec()).expect("nine values")).collect()
}

/// Independent oracle: filter all `8!` arrangements of `1..8` by both predicates.
pub fn brute_force_3torus() -> Vec<ZnArray> {
    let w = s2_star();
    let mut out: Vec<ZnArray> = (1..9u32)
        .permutations(8)
        .filter_map(|perm| {
            let a = ZnArray::new(3, std::iter::once(0).chain(perm).collect()).expect("nine values");
            let c = certify(&a, &w);
            (c.balanced && c.zero_sum).then_some(a)
        })
        .collect();
    out.sort();
    out
}

/// The twelve arrays as printed, in printed order.
pub const PRINTED_3TORUS: [[u32; 9]; 12] = [
    [0, 1, 2, 5, 3, 4, 7, 8, 6],
    [0, 1, 5, 2, 6, 7, 4, 8, 3],
    [0, 2, 1, 4, 3, 5, 8, 7, 6],
    [0, 2, 4, 1, 6, 8, 5, 7, 3],
    [0, 4, 2, 8, 6, 1, 7, 5, 3],
    [0, 4, 8, 2, 3, 7, 1, 5, 6],
    [0, 5, 1, 7, 6, 2, 8, 4, 3],
    [0, 5, 7, 1, 3, 8, 2, 4, 6],
    [0, 7, 5, 8, 3, 1, 4, 2, 6],
    [0, 7, 8, 5, 6, 4, 1, 2, 3],
    [0, 8, 4, 7, 3, 2, 5, 1, 6],
    [0, 8, 7, 4, 6, 5, 2, 1, 3],
];

/// Permutation of the cells of `T_3` fixing cell 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellPermutation {
    img: [u8; 9],
}

impl CellPermutation {
    pub fn identity() -> Self {
        CellPermutation { img: [0, 1, 2, 3, 4, 5, 6, 7, 8] }
    }

    /// From the bottom row of a two-line table: `images[k-1] = π(k)` for `k = 1..8`.
    pub fn from_two_line(images: [u8; 8]) -> Result<Self> {
        let mut img = [0u8; 9];
        img[1..].copy_from_slice(&images);
        let distinct: BTreeSet<u8> = images.iter().copied().collect();
        if distinct.len() != 8 || distinct.iter().any(|&v| !(1..=8).contains(&v)) {
            return domain(format!("{images:?} is not a permutation of 1..8"));
        }
        Ok(CellPermutation { img })
    }

    /// From disjoint cycles on `1..8`.
    pub fn from_cycles(cycles: &[&[u8]]) -> Result<Self> {
        let mut img = Self::identity().img;
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                img[a as usize] = cyc[(k + 1) % cyc.len()];
            }
        }
        let mut images = [0u8; 8];
        images.copy_from_slice(&img[1..]);
        Self::from_two_line(images)
    }

    pub fn image(&self, k: usize) -> usize {
        self.img[k] as usize
    }

    /// Bottom row of the two-line table.
    pub fn two_line(&self) -> [u8; 8] {
        let mut out = [0u8; 8];
        out.copy_from_slice(&self.img[1..]);
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut img = [0u8; 9];
        for (k, slot) in img.iter_mut().enumerate() {
            *slot = self.img[other.img[k] as usize];
        }
        CellPermutation { img }
    }

    pub fn inverse(&self) -> Self {
        let mut img = [0u8; 9];
        for k in 0..9 {
            img[self.img[k] as usize] = k as u8;
        }
        CellPermutation { img }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| self.compose(&acc))
    }

    pub fn order(&self) -> u32 {
        let mut q = *self;
        let mut k = 1;
        while q != Self::identity() {
            q = self.compose(&q);
            k += 1;
        }
        k
    }

    /// `(x₀, x₁, …, x₈) ↦ (x₀, x_{π⁻¹(1)}, …, x_{π⁻¹(8)})`.
    pub fn act(&self, a: &ZnArray) -> Result<ZnArray> {
        if a.n != 3 {
            return Err(Error::NotApplicable(format!("cell permutations act on T_3, not T_{}", a.n)));
        }
        let inv = self.inverse();
        ZnArray::new(3, (0..9).map(|k| a.values[inv.img[k] as usize]).collect())
    }

    /// `V(πx)`: the cell triples whose sums are the translate sums of `πx`, in translate order.
    pub fn value_triples(&self) -> Vec<[usize; 3]> {
        let inv = self.inverse();
        support_triples()
            .iter()
            .map(|t| {
                let mut u = t.map(|c| inv.image(c));
                u.sort_unstable();
                u
            })
            .collect()
    }
}

impl fmt::Display for CellPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.two_line().iter().join(","))
    }
}

/// The printed generator `p = (1 3 6 7 5 2)(4 8)`.
pub fn perm_p() -> CellPermutation {
    CellPermutation::from_two_line([3, 1, 6, 8, 2, 7, 5, 4]).expect("permutation")
}

/// The printed generator `q = (1 3)(2 6)(5 7)`.
pub fn perm_q() -> CellPermutation {
    CellPermutation::from_two_line([3, 6, 1, 4, 7, 2, 5, 8]).expect("permutation")
}

/// Closure of the generators under composition.
pub fn generate_group(gens: &[CellPermutation]) -> Vec<CellPermutation> {
    let mut seen = BTreeSet::from([CellPermutation::identity()]);
    let mut frontier = vec![CellPermutation::identity()];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h) {
                frontier.push(h);
            }
        }
    }
    seen.into_iter().collect()
}

/// Words `q^e p^k` expressing `a², …, a¹²` through `a¹`.
pub const PRINTED_WORDS: [(usize, u32, u32); 11] = [
    (2, 1, 1),
    (3, 1, 2),
    (4, 0, 1),
    (5, 1, 3),
    (6, 0, 2),
    (7, 0, 5),
    (8, 1, 0),
    (9, 0, 4),
    (10, 1, 5),
    (11, 1, 4),
    (12, 0, 3),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DihedralReport {
    pub order_p: u32,
    pub order_q: u32,
    pub qpq: [u8; 8],
    pub qpq_is_p_inverse: bool,
    pub group_order: usize,
    pub preserves_triples: bool,
    pub orbit_size: usize,
    pub stabilizer_size: usize,
    pub orbit_is_solution_set: bool,
    /// For each printed word, whether it sends `a¹` to the printed array.
    pub words: Vec<(String, bool)>,
    pub passed: bool,
}

pub fn dihedral_group_check() -> Result<DihedralReport> {
    let (p, q) = (perm_p(), perm_q());
    let qpq = q.compose(&p).compose(&q);
    let group = generate_group(&[p, q]);
    let triples: BTreeSet<[usize; 3]> = support_triples().into_iter().collect();
    let preserves = group.iter().all(|g| g.value_triples().into_iter().collect::<BTreeSet<_>>() == triples);
    let a1 = ZnArray::new(3, PRINTED_3TORUS[0].to_vec())?;
    let orbit: BTreeSet<ZnArray> = group.iter().map(|g| g.act(&a1)).collect::<Result<_>>()?;
    let stabilizer = group.iter().filter(|g| g.act(&a1).map(|b| b == a1).unwrap_or(false)).count();
    let solutions: BTreeSet<ZnArray> = search_balanced_3torus().into_iter().collect();
    let words = PRINTED_WORDS
        .iter()
        .map(|&(idx, e, k)| {
            let g = q.pow(e).compose(&p.pow(k));
            let label = format!("a{idx} = {}{}(a1)", if e == 1 { "q" } else { "" }, match k {
                0 => String::new(),
                1 => "p".into(),
                _ => format!("p^{k}"),
            });
            let ok = g.act(&a1).map(|b| b.values() == PRINTED_3TORUS[idx - 1]).unwrap_or(false);
            Ok((label, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let qpq_is_p_inverse = qpq == p.inverse() && q.compose(&q) == CellPermutation::identity();
    let mut report = DihedralReport {
        order_p: p.order(),
        order_q: q.order(),
        qpq: qpq.two_line(),
        qpq_is_p_inverse,
        group_order: group.len(),
        preserves_triples: preserves,
        orbit_size: orbit.len(),
        stabilizer_size: stabilizer,
        orbit_is_solution_set: orbit == solutions,
        words,
        passed: false,
    };
    report.passed = report.order_p == 6
        && report.order_q == 2
        && report.qpq == [2, 5, 1, 8, 7, 3, 6, 4]
        && report.qpq_is_p_inverse
        && report.group_order == 12
        && report.preserves_triples
        && report.orbit_size == 12
        && report.stabilizer_size == 1
        && report.orbit_is_solution_set
        && report.words.iter().all(|w| w.1);
    Ok(report)
}

/// Every permutation of cells `1..8` (fixing 0) that maps the support triples onto themselves.
pub fn hypergraph_automorphisms() -> Vec<CellPermutation> {
    let triples: BTreeSet<[usize; 3]> = support_triples().into_iter().collect();
    let mut out: Vec<CellPermutation> = (1..9u8)
        .permutations(8)
        .filter_map(|images| {
            let mut arr = [0u8; 8];
            arr.copy_from_slice(&images);
            let g = CellPermutation::from_two_line(arr).expect("permutation");
            let mapped: BTreeSet<[usize; 3]> = triples
                .iter()
                .map(|t| {
                    let mut u = t.map(|c| g.image(c));
                    u.sort_unstable();
                    u
                })
                .collect();
            (mapped == triples).then_some(g)
        })
        .collect();
    out.sort();
    out
}

/// `g_n(i, j) = (i - j) mod n`.
pub fn g_n(n: usize, i: i64, j: i64) -> u32 {
    (i - j).rem_euclid(n as i64) as u32
}

/// `f_n(i, j) = g_n(i, j) + n j`, checked to be balanced and zero-sum for `S(n-1)*`.
pub fn construct_fn(n: usize) -> Result<ZnArray> {
    if n < 3 {
        return domain(format!("f_n needs n >= 3, got {n}"));
    }
    let values = (0..n * n)
        .map(|k| {
            let (i, j) = ((k % n) as i64, (k / n) as i64);
            g_n(n, i, j) + (n as u32) * j as u32
        })
        .collect();
    let a = ZnArray::new(n, values)?;
    let c = certify(&a, &punctured_square(n as u32 - 1)?);
    if !(c.balanced && c.zero_sum) {
        return Err(Error::Verification(format!("f_{n} is not a balanced zero-sum array")));
    }
    Ok(a)
}

/// Checks of the line-sum identities behind the zero-sum property of `f_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofReport {
    pub n: usize,
    pub diagonal_constant: bool,
    pub row_value_sets: bool,
    pub horizontal_sums: bool,
    pub vertical_sums: bool,
    pub decomposition: bool,
    pub complement_sums: bool,
    pub window_sums: bool,
    pub parity: bool,
    pub passed: bool,
}

pub fn proof_identities_check(n: usize) -> Result<ProofReport> {
    let f = construct_fn(n)?;
    let ni = n as i64;
    let m = (n * n) as i64;
    let md = |v: i64| v.rem_euclid(m);
    let cells: Vec<(i64, i64)> = (0..ni).flat_map(|j| (0..ni).map(move |i| (i, j))).collect();
    let fv = |i: i64, j: i64| f.get(i, j) as i64;

    let diagonal_constant = cells.iter().all(|&(i, j)| g_n(n, i, j) == g_n(n, i + 1, j + 1));
    let row_value_sets = (0..ni).all(|j| {
        let set: BTreeSet<i64> = (0..ni).map(|i| fv(i, j)).collect();
        set == (ni * j..ni * j + ni).collect()
    });
    let h_sum = |j: i64| (0..ni).map(|i| fv(i, j)).sum::<i64>();
    let v_sum = |i: i64| (0..ni).map(|j| fv(i, j)).sum::<i64>();
    let horizontal_sums = (0..ni).all(|j| md(h_sum(j)) == md(ni * (ni - 1) / 2));
    let vertical_sums = (0..ni).all(|i| md(v_sum(i)) == md(ni * (ni - 1) / 2 + ni * ni * (ni - 1) / 2));

    // S(n-1)' = S(n-1)* + (1, 1); C_n is its complement.
    let window: BTreeSet<(i64, i64)> = punctured_square(n as u32 - 1)?
        .points()
        .iter()
        .map(|p| (p.i1 + 1, p.i2 + 1))
        .collect();
    let wrap = |(i, j): (i64, i64)| (i.rem_euclid(ni), j.rem_euclid(ni));
    let mut decomposition = true;
    let mut complement_sums = true;
    let mut window_sums = true;
    for &(i0, j0) in &cells {
        let shifted: BTreeSet<(i64, i64)> = window.iter().map(|&(a, b)| wrap((a + i0, b + j0))).collect();
        let complement: BTreeSet<(i64, i64)> = cells.iter().copied().filter(|c| !shifted.contains(c)).collect();
        let h: BTreeSet<(i64, i64)> = (0..ni).map(|i| (i, j0)).collect();
        let v: BTreeSet<(i64, i64)> = (0..ni).map(|j| (i0, j)).collect();
        let corner = wrap((i0 + 1, j0 + 1));
        let mut union: BTreeSet<(i64, i64)> = h.union(&v).copied().collect();
        union.insert(corner);
        let meet: Vec<_> = h.intersection(&v).copied().collect();
        decomposition &= union == complement && meet == vec![(i0, j0)] && !h.contains(&corner) && !v.contains(&corner);
        let c_sum: i64 = complement.iter().map(|&(i, j)| fv(i, j)).sum();
        let by_lines = h_sum(j0) + v_sum(i0) - fv(i0, j0) + fv(corner.0, corner.1);
        complement_sums &= md(c_sum) == md(by_lines) && md(c_sum) == md(ni * (ni - 1) * (ni + 2) / 2 + ni);
        let w_sum: i64 = shifted.iter().map(|&(i, j)| fv(i, j)).sum();
        window_sums &= md(w_sum) == md(m * (m - 1) / 2 - c_sum) && md(w_sum) == md(ni * ni * (ni + 1) * (ni - 2) / 2) && md(w_sum) == 0;
    }
    let parity = ((ni + 1) * (ni - 2)) % 2 == 0;
    let passed = diagonal_constant
        && row_value_sets
        && horizontal_sums
        && vertical_sums
        && decomposition
        && complement_sums
        && window_sums
        && parity;
    Ok(ProofReport {
        n,
        diagonal_constant,
        row_value_sets,
        horizontal_sums,
        vertical_sums,
        decomposition,
        complement_sums,
        window_sums,
        parity,
        passed,
    })
}

/// Proof that no balanced zero-sum array for `S(k)*` exists on `T_p`: reduction
/// modulo `p` of such an array would be a nonzero element of a zero kernel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonexistenceCertificate {
    pub p: u32,
    pub k: u32,
    pub rank: usize,
    pub kernel_dim: usize,
    pub argument: String,
}

pub fn nonexistence_certificate(p: u32, k: u32) -> Result<NonexistenceCertificate> {
    if p < 5 || !is_prime(p as u64) {
        return domain(format!("certificate needs a prime p >= 5, got {p}"));
    }
    if !(2..=p - 1).contains(&k) {
        return domain(format!("k must lie in 2..{}, got {k}", p - 1));
    }
    let report = kernel(k, p)?;
    if report.dimension != 0 {
        return Err(Error::NotApplicable(format!(
            "kernel of S({k})* on T_{p} over F_{p} has dimension {}",
            report.dimension
        )));
    }
    Ok(NonexistenceCertificate {
        p,
        k,
        rank: report.rank,
        kernel_dim: 0,
        argument: format!(
            "a balanced array takes every residue mod {p} exactly {p} times, so its reduction mod {p} is nonzero; \
             it would lie in the kernel of S({k})* on T_{p} over F_{p}, which has rank {} = {p}^2 and is zero",
            report.rank
        ),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeStatus {
    #[serde(rename = "FOUND")]
    Found,
    #[serde(rename = "EXHAUSTED-NONE")]
    ExhaustedNone,
    #[serde(rename = "BUDGET")]
    Budget,
}

impl fmt::Display for ProbeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeStatus::Found => "FOUND",
            ProbeStatus::ExhaustedNone => "EXHAUSTED-NONE",
            ProbeStatus::Budget => "BUDGET",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub k: u32,
    pub budget: u64,
    pub nodes: u64,
    pub status: ProbeStatus,
    /// Whether the whole search space was explored.
    pub exhausted: bool,
    pub solution_count: u64,
    /// The first solutions found, in search order (at most `KEPT_SOLUTIONS`).
    pub solutions: Vec<ZnArray>,
    /// Whether `f_n` was among the solutions visited (only checked for `k = n - 1`).
    pub contains_fn: bool,
    /// Whether `f_n` is a leaf of the full search tree, whether or not the budget reached it.
    pub fn_is_leaf: bool,
}

pub const KEPT_SOLUTIONS: usize = 64;

/// Values allowed at column `col` once every later column of `x` is fixed, in increasing order.
fn candidates(form: &[(usize, Vec<u64>)], pivot_row: &[Option<usize>], m: u64, x: &[u64], col: usize) -> Vec<u64> {
    match pivot_row[col] {
        None => (1..m).collect(),
        Some(r) => {
            let row = &form[r].1;
            let rhs = row[col + 1..].iter().zip(&x[col + 1..]).fold(0u64, |acc, (&a, &v)| (acc + a * v) % m);
            let rhs = (m - rhs) % m;
            let g = row[col];
            if rhs % g != 0 {
                return Vec::new();
            }
            let step = m / g;
            let base = (rhs / g) % step;
            let mut c: Vec<u64> = (0..g).map(|t| base + t * step).collect();
            c.sort_unstable();
            c
        }
    }
}

/// Budgeted search for balanced arrays on `T_n` that are zero-sum for `S(k)*`,
/// with value 0 fixed at the origin.
///
/// The translate-sum equations are brought to an echelon form over `Z/n²`; cells
/// are then assigned from the last echelon column down, each pivot cell being
/// restricted to the values its equation allows, and values already used are
/// skipped. A node is one tentative assignment of a value to a cell.
pub fn search_balanced(n: usize, k: u32, budget: u64) -> Result<ProbeReport> {
    if n < 3 || !(2..n as u32).contains(&k) {
        return domain(format!("need n >= 3 and 2 <= k <= n-1, got n={n}, k={k}"));
    }
    let m = (n * n) as u64;
    let w = punctured_square(k)?;
    let cols = n * n - 1;
    // Column c is cell c + 1; cell 0 holds 0 and drops out.
    let rows: Vec<Vec<u64>> = (0..n * n)
        .map(|t| {
            let (i, j) = ((t % n) as i64, (t / n) as i64);
            let mut row = vec![0u64; cols];
            for q in w.points() {
                let cell = ((i + q.i1).rem_euclid(n as i64) + n as i64 * (j + q.i2).rem_euclid(n as i64)) as usize;
                if cell != 0 {
                    row[cell - 1] = (row[cell - 1] + 1) % m;
                }
            }
            row
        })
        .collect();
    let form = howell_form(&rows, cols, m);
    let mut pivot_row: Vec<Option<usize>> = vec![None; cols];
    for (r, (c, _)) in form.rows.iter().enumerate() {
        pivot_row[*c] = Some(r);
    }

    struct State<'a> {
        m: u64,
        n: usize,
        form: &'a [(usize, Vec<u64>)],
        pivot_row: &'a [Option<usize>],
        x: Vec<u64>,
        used: Vec<bool>,
        nodes: u64,
        budget: u64,
        out_of_budget: bool,
        count: u64,
        kept: Vec<ZnArray>,
        window: &'a Window,
        target: Option<ZnArray>,
        target_seen: bool,
    }

    fn dfs(st: &mut State<'_>, col: usize) {
        let candidates = candidates(st.form, st.pivot_row, st.m, &st.x, col);
        for v in candidates {
            if st.used[v as usize] {
                continue;
            }
            if st.nodes >= st.budget {
                st.out_of_budget = true;
                return;
            }
            st.nodes += 1;
            st.x[col] = v;
            st.used[v as usize] = true;
            if col == 0 {
                let values: Vec<u32> = std::iter::once(0).chain(st.x.iter().map(|&v| v as u32)).collect();
                let a = ZnArray::new(st.n, values).expect("n² values");
                let c = certify(&a, st.window);
                assert!(c.balanced && c.zero_sum, "echelon search produced a non-solution");
                st.count += 1;
                st.target_seen |= st.target.as_ref() == Some(&a);
                if st.kept.len() < KEPT_SOLUTIONS {
                    st.kept.push(a);
                }
            } else {
                dfs(st, col - 1);
            }
            st.used[v as usize] = false;
            st.x[col] = 0;
            if st.out_of_budget {
                return;
            }
        }
    }

    let mut used = vec![false; m as usize];
    used[0] = true;
    let mut st = State {
        m,
        n,
        form: &form.rows,
        pivot_row: &pivot_row,
        x: vec![0; cols],
        used,
        nodes: 0,
        budget,
        out_of_budget: false,
        count: 0,
        kept: Vec::new(),
        window: &w,
        target: if k as usize == n - 1 { Some(construct_fn(n)?) } else { None },
        target_seen: false,
    };
    dfs(&mut st, cols - 1);
    let exhausted = !st.out_of_budget;
    let status = match (st.count > 0, exhausted) {
        (true, _) => ProbeStatus::Found,
        (false, true) => ProbeStatus::ExhaustedNone,
        (false, false) => ProbeStatus::Budget,
    };
    let contains_fn = st.target_seen;
    // Walk the branch that spells out f_n: every value must be offered at its column.
    let fn_is_leaf = match &st.target {
        Some(f) => {
            let fx: Vec<u64> = f.values()[1..].iter().map(|&v| v as u64).collect();
            let mut x = vec![0u64; cols];
            (0..cols).rev().all(|col| {
                let ok = candidates(&form.rows, &pivot_row, m, &x, col).contains(&fx[col]);
                x[col] = fx[col];
                ok
            })
        }
        None => false,
    };
    Ok(ProbeReport {
        n,
        k,
        budget,
        nodes: st.nodes,
        status,
        exhausted,
        solution_count: st.count,
        solutions: st.kept,
        contains_fn,
        fn_is_leaf,
    })
}

/// [`search_balanced`] restricted to composite `n`.
pub fn composite_probe(n: usize, k: u32, budget: u64) -> Result<ProbeReport> {
    if n < 4 || is_prime(n as u64) {
        return domain(format!("probe is for composite n, got {n}"));
    }
    search_balanced(n, k, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn printed(idx: usize) -> ZnArray {
        ZnArray::new(3, PRINTED_3TORUS[idx - 1].to_vec()).unwrap()
    }

    #[test]
    fn balanced_examples() {
        assert!(is_balanced(&printed(1)));
        assert!(!is_balanced(&ZnArray::new(3, vec![0; 9]).unwrap()));
        assert!(is_balanced(&construct_fn(4).unwrap()));
    }

    #[test]
    fn zero_sum_examples() {
        let c = certify(&printed(1), &s2_star());
        assert!(c.zero_sum);
        assert_eq!(c.translate_sums.len(), 3);
        assert!(c.translate_sums.iter().flatten().all(|&v| v == 0));
        let ones = certify(&ZnArray::new(3, vec![1; 9]).unwrap(), &s2_star());
        assert!(!ones.zero_sum);
        assert!(ones.translate_sums.iter().flatten().all(|&v| v == 3));
        assert!(is_zero_sum(&construct_fn(5).unwrap(), &punctured_square(4).unwrap()));
    }

    #[test]
    fn three_torus_search() {
        let found = search_balanced_3torus();
        assert_eq!(found.len(), 12);
        assert_eq!(found[0], printed(1));
        let listed: Vec<ZnArray> = (1..=12).map(printed).collect();
        assert_eq!(found, listed);
        assert!(found.iter().all(|a| is_balanced(a) && is_zero_sum(a, &s2_star())));
        let echelon = search_balanced(3, 2, u64::MAX).unwrap();
        let mut via_echelon = echelon.solutions.clone();
        via_echelon.sort();
        assert_eq!(via_echelon, found);
        assert!(echelon.contains_fn && echelon.fn_is_leaf && echelon.exhausted);
    }

    #[test]
    fn brute_force_oracle() {
        assert_eq!(brute_force_3torus(), search_balanced_3torus());
    }

    #[test]
    fn triples() {
        let t = support_triples();
        let labels: Vec<String> = t.iter().map(triple_label).collect();
        assert_eq!(labels, ["134", "245", "035", "467", "578", "368", "017", "128", "026"]);
        for c in 0..9 {
            assert_eq!(t.iter().filter(|tr| tr.contains(&c)).count(), 3);
        }
    }

    #[test]
    fn value_triples_match_printed_sets() {
        let vp: Vec<String> = perm_p().value_triples().iter().map(triple_label).collect();
        assert_eq!(vp, ["128", "578", "017", "368", "467", "134", "026", "245", "035"]);
        let vq: Vec<String> = perm_q().value_triples().iter().map(triple_label).collect();
        assert_eq!(vq, ["134", "467", "017", "245", "578", "128", "035", "368", "026"]);
    }

    #[test]
    fn permutation_action() {
        let a1 = printed(1);
        assert_eq!(perm_p().act(&a1).unwrap(), printed(4));
        assert_eq!(perm_q().act(&a1).unwrap(), printed(8));
        assert_eq!(CellPermutation::identity().act(&a1).unwrap(), a1);
        let (p, q) = (perm_p(), perm_q());
        let pq = p.compose(&q);
        assert_eq!(pq.act(&a1).unwrap(), p.act(&q.act(&a1).unwrap()).unwrap());
        assert!(p.act(&construct_fn(4).unwrap()).is_err());
        assert_eq!(CellPermutation::from_cycles(&[&[1, 3, 6, 7, 5, 2], &[4, 8]]).unwrap(), p);
        assert_eq!(CellPermutation::from_cycles(&[&[1, 3], &[2, 6], &[5, 7]]).unwrap(), q);
        assert!(CellPermutation::from_two_line([1, 1, 2, 3, 4, 5, 6, 7]).is_err());
    }

    #[test]
    fn dihedral() {
        let r = dihedral_group_check().unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.qpq, [2, 5, 1, 8, 7, 3, 6, 4]);
    }

    #[test]
    fn automorphisms() {
        let auts = hypergraph_automorphisms();
        let group = generate_group(&[perm_p(), perm_q()]);
        assert!(group.iter().all(|g| auts.contains(g)));
        assert_eq!(auts.len(), 12);
        let set: BTreeSet<_> = auts.iter().copied().collect();
        for a in &auts {
            assert!(set.contains(&a.inverse()));
            for b in &auts {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn fn_construction() {
        assert_eq!(construct_fn(3).unwrap(), printed(1));
        for n in 3..=12 {
            let f = construct_fn(n).unwrap();
            for j in 0..n as i64 {
                let row: BTreeSet<u32> = (0..n as i64).map(|i| f.get(i, j)).collect();
                let want: BTreeSet<u32> = (n as u32 * j as u32..n as u32 * (j as u32 + 1)).collect();
                assert_eq!(row, want);
            }
        }
        assert!(construct_fn(2).is_err());
    }

    #[test]
    fn proof_identities() {
        for n in 3..=8 {
            assert!(proof_identities_check(n).unwrap().passed, "n = {n}");
        }
    }

    #[test]
    fn certificates() {
        assert_eq!(nonexistence_certificate(5, 2).unwrap().kernel_dim, 0);
        assert!(nonexistence_certificate(5, 3).is_ok());
        assert!(matches!(nonexistence_certificate(5, 4), Err(Error::NotApplicable(_))));
        assert!(nonexistence_certificate(3, 2).is_err());
        assert!(nonexistence_certificate(9, 2).is_err());
    }

    #[test]
    fn echelon_search_agrees_with_certificates() {
        // No balanced arrays where the certificate applies.
        for k in 2..=3 {
            let r = search_balanced(5, k, u64::MAX).unwrap();
            assert_eq!(r.status, ProbeStatus::ExhaustedNone, "k = {k}");
        }
    }

    #[test]
    fn probe_n4() {
        let r = composite_probe(4, 3, u64::MAX).unwrap();
        assert_eq!(r.status, ProbeStatus::Found);
        assert!(r.exhausted && r.contains_fn && r.fn_is_leaf);
        let six = composite_probe(6, 5, 2000).unwrap();
        assert!(six.fn_is_leaf);
        assert_eq!(six.status, ProbeStatus::Found);
        assert!(r.solutions.iter().all(|a| is_balanced(a) && is_zero_sum(a, &punctured_square(3).unwrap())));
        let small = composite_probe(4, 2, 10).unwrap();
        assert!(small.nodes <= 10);
        assert!(composite_probe(5, 2, 10).is_err());
    }
}
