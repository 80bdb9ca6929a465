//! Seeded randomized invariant suites behind `tomofix verify`.
//!
//! Each suite draws its cases from its own ChaCha stream derived from the seed,
//! so results do not depend on the number of worker threads.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tomofix_core::array::delta_patch;
use tomofix_core::bounded::rational_basis;
use tomofix_core::polygrowth::{array_from_solution, operator_at, sol_space, Poly2};
use tomofix_core::spectra::square_zero_locus;
use tomofix_core::{
    delta, is_fixed, punctured_square, root_of_unity, square_window, CycElem, Fp, LatticePoint, Rect, Ring,
    TorusArray, Window, Zmod,
};

pub const DEFAULT_SEED: u64 = 20_250_601;

#[derive(Clone, Copy, Debug)]
pub struct SuiteSizes {
    pub ring_cases: usize,
    pub tree_cases: usize,
    pub step_cases: usize,
    pub basis_cases: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes { ring_cases: 500, tree_cases: 1000, step_cases: 20, basis_cases: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn run_suite(name: &str, cases: usize, seed: u64, mut case: impl FnMut(&mut ChaCha8Rng) -> Result<(), String>) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut first_failure = None;
    for k in 0..cases {
        if let Err(e) = case(&mut rng) {
            failures += 1;
            first_failure.get_or_insert_with(|| format!("case {k}: {e}"));
        }
    }
    SuiteResult { name: name.to_string(), cases, failures, first_failure }
}

fn random_window(rng: &mut ChaCha8Rng) -> Window {
    let mut pts = std::collections::BTreeSet::new();
    for _ in 0..rng.gen_range(1..6) {
        pts.insert((rng.gen_range(-2..=2), rng.gen_range(-2..=2)));
    }
    if rng.gen_bool(0.5) {
        pts.insert((0i64, 0i64));
    }
    Window::new(pts.into_iter().map(|(a, b)| LatticePoint::new(a, b))).expect("nonempty")
}

fn ensure(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// Linearity, translation equivariance, window-translation and the
/// fixed-point/kernel equivalence for one random case.
fn ring_case<R: Ring>(rng: &mut ChaCha8Rng, scalar: &impl Fn(&mut ChaCha8Rng) -> R) -> Result<(), String> {
    let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let w = random_window(rng);
    let a = TorusArray::new(n1, n2, (0..n1 * n2).map(|_| scalar(rng)).collect()).map_err(|e| e.to_string())?;
    let b = TorusArray::new(n1, n2, (0..n1 * n2).map(|_| scalar(rng)).collect()).map_err(|e| e.to_string())?;
    let c = scalar(rng);
    let k = LatticePoint::new(rng.gen_range(-5..=5), rng.gen_range(-5..=5));
    let sum = a.add(&b).map_err(|e| e.to_string())?;
    ensure(delta(&w, &sum) == delta(&w, &a).add(&delta(&w, &b)).map_err(|e| e.to_string())?, "additivity")?;
    ensure(delta(&w, &a.scale(&c)) == delta(&w, &a).scale(&c), "homogeneity")?;
    ensure(delta(&w, &a.translate(k)) == delta(&w, &a).translate(k), "equivariance")?;
    let neg = LatticePoint::new(-k.i1, -k.i2);
    ensure(delta(&w.translate(k), &a) == delta(&w, &a).translate(neg), "window translation")?;
    if let Ok(punct) = w.puncture() {
        let diff = delta(&w, &a).sub(&a).map_err(|e| e.to_string())?;
        ensure(diff == delta(&punct, &a), "Delta_W - id = Delta_W*")?;
        ensure(is_fixed(&w, &a) == delta(&punct, &a).is_zero(), "fixed iff kernel")?;
    }
    Ok(())
}

fn ring_suite<R: Ring>(name: &str, cases: usize, seed: u64, scalar: impl Fn(&mut ChaCha8Rng) -> R) -> SuiteResult {
    run_suite(name, cases, seed, |rng| ring_case(rng, &scalar))
}

#[derive(Clone, Debug)]
enum Expr {
    Int(i64),
    Root(u32, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn random(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.3) {
            return if rng.gen_bool(0.3) {
                Expr::Int(rng.gen_range(-3..=3))
            } else {
                let n = *[2u32, 3, 4, 5, 6, 8, 10, 12, 15].choose(rng).expect("nonempty");
                Expr::Root(n, rng.gen_range(0..30))
            };
        }
        let (a, b) = (Box::new(Expr::random(rng, depth - 1)), Box::new(Expr::random(rng, depth - 1)));
        match rng.gen_range(0..3) {
            0 => Expr::Add(a, b),
            1 => Expr::Sub(a, b),
            _ => Expr::Mul(a, b),
        }
    }

    fn exact(&self) -> Result<CycElem, String> {
        Ok(match self {
            Expr::Int(v) => CycElem::from_integer(*v),
            Expr::Root(n, k) => root_of_unity(*n, *k).map_err(|e| e.to_string())?,
            Expr::Add(a, b) => a.exact()?.try_add(&b.exact()?).map_err(|e| e.to_string())?,
            Expr::Sub(a, b) => a.exact()?.try_sub(&b.exact()?).map_err(|e| e.to_string())?,
            Expr::Mul(a, b) => a.exact()?.try_mul(&b.exact()?).map_err(|e| e.to_string())?,
        })
    }

    /// Floating-point value as `(re, im)`.
    fn approx(&self) -> (f64, f64) {
        match self {
            Expr::Int(v) => (*v as f64, 0.0),
            Expr::Root(n, k) => {
                let t = std::f64::consts::TAU * *k as f64 / *n as f64;
                (t.cos(), t.sin())
            }
            Expr::Add(a, b) => {
                let (x, y) = (a.approx(), b.approx());
                (x.0 + y.0, x.1 + y.1)
            }
            Expr::Sub(a, b) => {
                let (x, y) = (a.approx(), b.approx());
                (x.0 - y.0, x.1 - y.1)
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.approx(), b.approx());
                (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
            }
        }
    }
}

/// `e + pad · Σ_{k<n} ζ_n^k` equals `e`; exact zero agrees with the float value.
fn tree_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let e = Expr::random(rng, 4);
    let pad = Expr::random(rng, 2);
    let n = *[2u32, 3, 5, 7, 9, 12].choose(rng).expect("nonempty");
    let roots = (1..n as i64).fold(Expr::Root(n, 0), |acc, k| Expr::Add(Box::new(acc), Box::new(Expr::Root(n, k))));
    let v = e.exact()?;
    let padded = Expr::Add(Box::new(e.clone()), Box::new(Expr::Mul(Box::new(pad), Box::new(roots)))).exact()?;
    ensure(padded.try_sub(&v).map_err(|x| x.to_string())?.is_zero(), "padded - e is not zero")?;
    let (re, im) = e.approx();
    let mag = (re * re + im * im).sqrt();
    if v.is_zero() {
        ensure(mag < 1e-6 * (1.0 + mag), "exact zero but float value is not small")
    } else {
        let z = v.approx_complex();
        ensure(((z.re - re).powi(2) + (z.im - im).powi(2)).sqrt() < 1e-6 * (1.0 + mag), "float mismatch")?;
        ensure(z.norm() > 1e-12, "nonzero element evaluates to 0")
    }
}

/// Random polynomial solution at a random zero, synthesized on a 12x12 region.
fn step_e_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(2..=4u32);
    let w = square_window(n).and_then(|w| w.puncture()).map_err(|e| e.to_string())?;
    let locus = square_zero_locus(n).map_err(|e| e.to_string())?;
    let p = *locus.choose(rng).expect("nonempty locus");
    let op = operator_at(&w, &p).map_err(|e| e.to_string())?;
    let space = sol_space(&op, rng.gen_range(0..=3));
    let g = space.basis.iter().fold(Poly2::from_terms([]), |acc, b| {
        acc.add(&b.scale(&CycElem::from_integer(rng.gen_range(-3..=3))))
    });
    let (i0, j0) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
    let rect = Rect::new(i0, i0 + 11, j0, j0 + 11).map_err(|e| e.to_string())?;
    let a = array_from_solution(&w, &p, &g, rect).map_err(|e| e.to_string())?;
    let image = delta_patch(&w, &a).map_err(|e| e.to_string())?;
    ensure(image.values().iter().all(|v| v.is_zero()), "Delta_W* is not zero on the interior")
}

/// Random rational combination of the bounded basis for `S(3)` is fixed.
fn basis_case(rng: &mut ChaCha8Rng, arrays: &[TorusArray<BigRational>]) -> Result<(), String> {
    let (n1, n2) = arrays[0].dims();
    let mut acc = TorusArray::filled(n1, n2, BigRational::zero());
    for a in arrays {
        let c = BigRational::new(BigInt::from(rng.gen_range(-9..=9)), BigInt::from(rng.gen_range(1..=5)));
        acc = acc.add(&a.scale(&c)).map_err(|e| e.to_string())?;
    }
    let w = square_window(3).map_err(|e| e.to_string())?;
    ensure(is_fixed(&w, &acc), "combination is not fixed")?;
    ensure(delta(&punctured_square(3).map_err(|e| e.to_string())?, &acc).is_zero(), "not in kernel")
}

/// Runs every suite; suites run in parallel, each on its own stream.
pub fn run_suites(seed: u64, sizes: SuiteSizes) -> Vec<SuiteResult> {
    let jobs: Vec<Box<dyn Fn() -> SuiteResult + Send + Sync>> = vec![
        Box::new(move || ring_suite("laws over Z", sizes.ring_cases, seed, |r| BigInt::from(r.gen_range(-50..=50)))),
        Box::new(move || {
            ring_suite("laws over Q", sizes.ring_cases, seed.wrapping_add(1), |r| {
                BigRational::new(BigInt::from(r.gen_range(-30..=30)), BigInt::from(r.gen_range(1..=12)))
            })
        }),
        Box::new(move || {
            ring_suite("laws over Q(zeta)", sizes.ring_cases, seed.wrapping_add(2), |r| {
                let n = *[1u32, 3, 4, 5, 8, 12].choose(r).expect("nonempty");
                let root = root_of_unity(n, r.gen_range(0..12)).expect("small conductor");
                root * CycElem::from_integer(r.gen_range(-3..=3)) + CycElem::from_integer(r.gen_range(-2..=2))
            })
        }),
        Box::new(move || {
            ring_suite("laws over Z/9", sizes.ring_cases, seed.wrapping_add(3), |r| Zmod::<9>::new(r.gen_range(0..9)))
        }),
        Box::new(move || {
            ring_suite("laws over F_7", sizes.ring_cases, seed.wrapping_add(4), |r| Fp::<7>::new(r.gen_range(0..7)))
        }),
        Box::new(move || run_suite("canonical zero in Q(zeta)", sizes.tree_cases, seed.wrapping_add(5), tree_case)),
        Box::new(move || run_suite("step (E) soundness", sizes.step_cases, seed.wrapping_add(6), step_e_case)),
        Box::new(move || match rational_basis(3) {
            Ok(b) => run_suite("bounded basis combinations", sizes.basis_cases, seed.wrapping_add(7), |r| {
                basis_case(r, &b.arrays)
            }),
            Err(e) => SuiteResult {
                name: "bounded basis combinations".into(),
                cases: 0,
                failures: 1,
                first_failure: Some(e.to_string()),
            },
        }),
    ];
    jobs.par_iter().map(|job| job()).collect()
}

pub fn render(results: &[SuiteResult], seed: u64) -> String {
    let mut out = format!("seed {seed}\n");
    for r in results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:<28} {:>5} cases  {} failures", r.name, r.cases, r.failures));
        if let Some(f) = &r.first_failure {
            out.push_str(&format!("  first: {f}"));
        }
        out.push('\n');
    }
    out
}
