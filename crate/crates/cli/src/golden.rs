//! Catalogue of golden checks, grouped by module. `reproduce-paper` runs all of
//! them; the acceptance suite runs them group by group.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use tomofix_core::array::delta_patch;
use tomofix_core::balanced::{
    certify, composite_probe, construct_fn, dihedral_group_check, hypergraph_automorphisms, is_balanced,
    nonexistence_certificate, perm_p, perm_q, proof_identities_check, search_balanced_3torus, support_triples,
    triple_label, brute_force_3torus, g_n, ZnArray, PRINTED_3TORUS,
};
use tomofix_core::bounded::{
    bounded_basis, character_array, int_array, period_lattice, rational_basis, CharacterArray,
};
use tomofix_core::linalg::in_span;
use tomofix_core::modp::{
    group_det_check, kernel, reduce_rational_array, rref_mod_p, rep_matrix, theorem41_sweep, translate_generators,
    FpMatrix,
};
use tomofix_core::polygrowth::{
    apply, array_from_solution, dim_formula, f_minus, operator_at, shift_char_poly, sol_space, DiffOp2, Poly2,
};
use tomofix_core::spectra::{char_poly, square_zero_locus, zero_locus_oracle, LaurentPoly2, TorusPoint};
use tomofix_core::{
    delta, is_fixed, is_zero_sum, punctured_square, root_of_unity, square_window, CycElem, Error, Fp, LatticePoint,
    PatchArray, Rect, Result, TorusArray,
};

/// Module groups, in report order.
pub const GROUPS: [&str; 6] = ["core", "zero-locus", "bounded", "poly", "modp", "balanced"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

struct Collector {
    group: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn new(group: &'static str) -> Self {
        Collector { group, checks: Vec::new() }
    }

    /// Records a check; an `Err` counts as a failure with the error as detail.
    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check { group: self.group, name: name.into(), passed, detail });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(T, T)>) {
        self.check(name, || {
            let (got, want) = f()?;
            let ok = got == want;
            Ok((ok, if ok { String::new() } else { format!("got {got:?}, want {want:?}") }))
        });
    }
}

pub fn run_group(group: &str) -> Vec<Check> {
    match group {
        "core" => core_checks(),
        "zero-locus" => zero_locus_checks(),
        "bounded" => bounded_checks(),
        "poly" => poly_checks(),
        "modp" => modp_checks(),
        "balanced" => balanced_checks(),
        _ => Vec::new(),
    }
}

pub fn run_all() -> Vec<Check> {
    GROUPS.iter().flat_map(|g| run_group(g)).collect()
}

/// Text table, one line per check.
pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let line = format!("{status}  {:<10} {:<width$}  {}", c.group, c.name, c.detail);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    out
}

fn pts(v: &[(i64, i64)]) -> BTreeSet<(i64, i64)> {
    v.iter().copied().collect()
}

fn window_set(w: &tomofix_core::Window) -> BTreeSet<(i64, i64)> {
    w.points().iter().map(|p| (p.i1, p.i2)).collect()
}

fn z(n: u32, k: i64) -> CycElem {
    root_of_unity(n, k).expect("small conductor")
}

fn int(v: i64) -> CycElem {
    CycElem::from_integer(v)
}

fn ex21_b1() -> TorusArray<BigRational> {
    int_array(3, 3, |i, j| if (i - j).rem_euclid(3) == 0 { 2 } else { -1 })
}

fn ex21_b2() -> TorusArray<BigRational> {
    int_array(3, 3, |i, j| match (i - j).rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

fn core_checks() -> Vec<Check> {
    let mut c = Collector::new("core");
    c.eq("S(2) points", || Ok((window_set(&square_window(2)?), pts(&[(0, 0), (1, 0), (0, 1), (1, 1)]))));
    c.eq("S(2)* points", || Ok((window_set(&punctured_square(2)?), pts(&[(1, 0), (0, 1), (1, 1)]))));
    c.eq("S(2)* + (1,1)", || {
        Ok((window_set(&punctured_square(2)?.translate(LatticePoint::new(1, 1))), pts(&[(2, 1), (1, 2), (2, 2)])))
    });
    c.check("all-ones on T_5 is zero-sum for S(4)* over F_5", || {
        let ones = TorusArray::filled(5, 5, Fp::<5>::new(1));
        Ok((is_zero_sum(&punctured_square(4)?, &ones), String::new()))
    });
    c.check("all-ones on T_7 is zero-sum for S(6)* over F_7", || {
        let ones = TorusArray::filled(7, 7, Fp::<7>::new(1));
        Ok((is_zero_sum(&punctured_square(6)?, &ones), String::new()))
    });
    c.check("Delta_S(2)(b1) = b1 for the 2/-1 pattern", || {
        let b1 = ex21_b1();
        Ok((delta(&square_window(2)?, &b1) == b1 && is_fixed(&square_window(2)?, &b1), String::new()))
    });
    c.eq("z8^4 = -1", || Ok((z(8, 1).pow(4)?, int(-1))));
    c.checks
}

fn zero_locus_checks() -> Vec<Check> {
    let mut c = Collector::new("zero-locus");
    c.eq("m_S(2) = (1+x)(1+y)", || {
        let want = LaurentPoly2::from_terms([(0, 0), (1, 0), (0, 1), (1, 1)].map(|e| (e, BigInt::one())));
        Ok((char_poly(&square_window(2)?), want))
    });
    c.eq("m_S(2)* = x + y + xy", || {
        let want = LaurentPoly2::from_terms([(1, 0), (0, 1), (1, 1)].map(|e| (e, BigInt::one())));
        Ok((char_poly(&punctured_square(2)?), want))
    });
    c.check("m_S(2)* vanishes at (z3, z3^2)", || {
        Ok((char_poly(&punctured_square(2)?).eval(&TorusPoint::from_exponents(3, 1, 2)).is_zero(), String::new()))
    });
    c.check("m_S(3)* vanishes at (-1, -1)", || {
        Ok((char_poly(&punctured_square(3)?).eval(&TorusPoint::from_exponents(2, 1, 1)).is_zero(), String::new()))
    });
    c.eq("V for n = 2", || {
        Ok((square_zero_locus(2)?, vec![TorusPoint::from_exponents(3, 1, 2), TorusPoint::from_exponents(3, 2, 1)]))
    });
    c.eq("V for n = 3 (seven points, printed order)", || {
        let want = vec![
            TorusPoint::from_exponents(2, 1, 1),
            TorusPoint::from_exponents(4, 1, 3),
            TorusPoint::from_exponents(4, 3, 1),
            TorusPoint::from_exponents(8, 1, 3),
            TorusPoint::from_exponents(8, 3, 1),
            TorusPoint::from_exponents(8, 5, 7),
            TorusPoint::from_exponents(8, 7, 5),
        ];
        Ok((square_zero_locus(3)?, want))
    });
    for n in 2..=8 {
        c.check(format!("V for n = {n} equals the exhaustive oracle"), || {
            let (v, o) = (square_zero_locus(n)?, zero_locus_oracle(n)?);
            Ok((v == o, format!("{} points", v.len())))
        });
    }
    c.checks
}

fn bounded_checks() -> Vec<Check> {
    let mut c = Collector::new("bounded");
    c.check("character array at (z3, z3^2) is fixed for S(2)", || {
        let a = character_array(TorusPoint::from_exponents(3, 1, 2), (3, 3))?;
        let ok = a.array.get(1, 0) == &z(3, 1) && a.array.get(0, 1) == &z(3, 2);
        Ok((ok && is_fixed(&square_window(2)?, &a.array), String::new()))
    });
    c.check("character array at (-1, -1) is a +-1 checkerboard fixed for S(3)", || {
        let a = character_array(TorusPoint::from_exponents(2, 1, 1), (2, 2))?;
        let checker = TorusArray::from_fn(2, 2, |i, j| int(if (i + j) % 2 == 0 { 1 } else { -1 }));
        Ok((a.array == checker && is_fixed(&square_window(3)?, &a.array), String::new()))
    });
    c.eq("n = 2 gives 2 character arrays", || Ok((bounded_basis(2)?.len(), 2)));
    c.eq("n = 3 periods (2,0)/(0,2), (4,0)/(0,4) x2, (8,0)/(0,8) x4", || {
        let got: Vec<(LatticePoint, LatticePoint)> = bounded_basis(3)?.iter().map(period_lattice).collect();
        let want: Vec<(LatticePoint, LatticePoint)> = [2, 4, 4, 8, 8, 8, 8]
            .iter()
            .map(|&p| (LatticePoint::new(p, 0), LatticePoint::new(0, p)))
            .collect();
        Ok((got, want))
    });
    c.eq("period of (z8, z8^3) is (8,0)/(0,8)", || {
        let a = CharacterArray::minimal(TorusPoint::from_exponents(8, 1, 3))?;
        Ok((period_lattice(&a), (LatticePoint::new(8, 0), LatticePoint::new(0, 8))))
    });
    c.eq("period of (i, -i) is (4,0)/(0,4)", || {
        let a = CharacterArray::minimal(TorusPoint::from_exponents(4, 1, 3))?;
        Ok((period_lattice(&a), (LatticePoint::new(4, 0), LatticePoint::new(0, 4))))
    });
    c.check("n = 2 rational basis: b1 is 2/-1 by (i-j) mod 3", || {
        let b = rational_basis(2)?;
        Ok((b.arrays.len() == 2 && b.arrays[0] == ex21_b1(), String::new()))
    });
    c.check("n = 2: b2 (0/1/-1 by (i-j) mod 3) is in the rational span", || {
        let b = rational_basis(2)?;
        let vecs: Vec<Vec<BigRational>> = b.arrays.iter().map(|a| a.values().to_vec()).collect();
        Ok((in_span(&vecs, ex21_b2().values()), String::new()))
    });
    c.check("b1, b2 match the closed forms at all 9 residue classes and are fixed for S(2)", || {
        let (b1, b2) = (ex21_b1(), ex21_b2());
        let w = square_window(2)?;
        let a1 = character_array(TorusPoint::from_exponents(3, 1, 2), (3, 3))?.array;
        let a2 = character_array(TorusPoint::from_exponents(3, 2, 1), (3, 3))?.array;
        let d = z(3, 1) - z(3, 2);
        let mut ok = true;
        for j in 0..3 {
            for i in 0..3 {
                let s = a1.get(i, j).clone() + a2.get(i, j).clone();
                let t = (a1.get(i, j).clone() - a2.get(i, j).clone()).try_div(&d)?;
                ok &= s == CycElem::from_rational(b1.get(i, j)) && t == CycElem::from_rational(b2.get(i, j));
            }
        }
        Ok((ok && delta(&w, &b1) == b1 && delta(&w, &b2) == b2, String::new()))
    });
    c.check("n = 3: 7 rational arrays, third = T_(1,0)(second)", || {
        let b = rational_basis(3)?;
        let ok = b.arrays.len() == 7 && b.arrays[2] == b.arrays[1].translate(LatticePoint::new(1, 0));
        let w = square_window(3)?;
        Ok((ok && b.arrays.iter().all(|a| is_fixed(&w, a)), String::new()))
    });
    c.check("n = 3: averaged arrays b2..b7 lie in the rational span", || {
        let b = rational_basis(3)?;
        let (n1, n2) = b.dims;
        let chars: Vec<TorusArray<CycElem>> = square_zero_locus(3)?
            .into_iter()
            .map(|p| character_array(p, (n1, n2)).map(|c| c.array))
            .collect::<Result<_>>()?;
        let comb = |cs: &[(usize, CycElem)], den: i64| -> Result<TorusArray<CycElem>> {
            let mut acc = TorusArray::filled(n1, n2, int(0));
            for (k, coef) in cs {
                acc = acc.add(&chars[*k].scale(coef))?;
            }
            Ok(acc.scale(&int(1).try_div(&int(den))?))
        };
        let i = z(4, 1);
        let targets = vec![
            comb(&[(1, int(1)), (2, int(1))], 2)?,
            comb(&[(1, int(1)), (2, -int(1))], 1)?.scale(&int(1).try_div(&(int(2) * i))?),
            comb(&[(3, int(1)), (4, int(1)), (5, int(1)), (6, int(1))], 4)?,
            comb(&[(3, z(8, 1)), (4, z(8, 3)), (5, z(8, 5)), (6, z(8, 7))], 4)?,
            comb(&[(3, z(8, 2)), (4, z(8, 6)), (5, z(8, 2)), (6, z(8, 6))], 4)?,
            comb(&[(3, z(8, 3)), (4, z(8, 1)), (5, z(8, 7)), (6, z(8, 5))], 4)?,
        ];
        let vecs: Vec<Vec<BigRational>> = b.arrays.iter().map(|a| a.values().to_vec()).collect();
        let mut ok = true;
        for t in &targets {
            let rat: Option<Vec<BigRational>> = t.values().iter().map(|v| v.as_rational()).collect();
            ok &= rat.is_some_and(|r| in_span(&vecs, &r));
        }
        // b3 = T_(1,0) b2 and b5, b6, b7 = T_(-1,0), T_(-2,0), T_(-3,0) b4.
        ok &= targets[1] == targets[0].translate(LatticePoint::new(1, 0));
        for (k, s) in [(3, -1), (4, -2), (5, -3)] {
            ok &= targets[k] == targets[2].translate(LatticePoint::new(s, 0));
        }
        Ok((ok, String::new()))
    });
    c.checks
}

fn p1() -> TorusPoint {
    TorusPoint::from_exponents(3, 1, 2)
}

fn p2() -> TorusPoint {
    TorusPoint::from_exponents(3, 2, 1)
}

fn minus_one() -> TorusPoint {
    TorusPoint::from_exponents(2, 1, 1)
}

fn table_entries() -> [Poly2; 4] {
    let quad = |a: CycElem, b: CycElem| {
        Poly2::from_terms([((2, 0), a), ((1, 1), int(-2)), ((0, 2), b), ((1, 0), int(-2)), ((0, 1), int(-2))])
    };
    [
        Poly2::from_terms([((1, 0), z(3, 2)), ((0, 1), -z(3, 1))]),
        quad(z(3, 1), z(3, 2)),
        Poly2::from_terms([((1, 0), z(3, 1)), ((0, 1), -z(3, 2))]),
        quad(z(3, 2), z(3, 1)),
    ]
}

fn patch_zero(w: &tomofix_core::Window, a: &PatchArray<CycElem>) -> Result<bool> {
    Ok(delta_patch(w, a)?.values().iter().all(|v| v.is_zero()))
}

fn poly_checks() -> Vec<Check> {
    let mut c = Collector::new("poly");
    c.eq("shift of m_S(2)* at (z3, z3^2)", || {
        let want = Poly2::from_terms([((1, 0), -z(3, 1)), ((0, 1), -z(3, 2)), ((1, 1), int(1))]);
        Ok((shift_char_poly(&punctured_square(2)?, &p1())?, want))
    });
    c.eq("shift of m_S(2)* at (z3^2, z3)", || {
        let want = Poly2::from_terms([((1, 0), -z(3, 2)), ((0, 1), -z(3, 1)), ((1, 1), int(1))]);
        Ok((shift_char_poly(&punctured_square(2)?, &p2())?, want))
    });
    c.eq("D_p1 = z3 d1 + z3^2 d2 + d1 d2", || {
        let want = DiffOp2::from_terms([((1, 0), z(3, 1)), ((0, 1), z(3, 2)), ((1, 1), int(1))]);
        Ok((f_minus(&shift_char_poly(&punctured_square(2)?, &p1())?), want))
    });
    c.eq("D_(-1,-1) = (1 + d1 + d1^2)(1 + d2 + d2^2) - 1", || {
        let want: Vec<((u32, u32), CycElem)> =
            (0..3).flat_map(|a| (0..3).map(move |b| ((a, b), int(1)))).filter(|(s, _)| *s != (0, 0)).collect();
        Ok((operator_at(&punctured_square(3)?, &minus_one())?, DiffOp2::from_terms(want)))
    });
    c.check("D_(-1,-1) annihilates x - y and (x - y)^2 - (x + y)", || {
        let d = operator_at(&punctured_square(3)?, &minus_one())?;
        let g1 = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        let g2 = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        Ok((apply(&d, &g1).is_zero() && apply(&d, &g2).is_zero(), String::new()))
    });
    c.check("dim Sol(D_p1)_<=N = N + 1 for N = 0..10, by kernel and by formula", || {
        let d = operator_at(&punctured_square(2)?, &p1())?;
        let bad: Vec<u32> = (0..=10)
            .filter(|&n| sol_space(&d, n).dimension != n as usize + 1 || dim_formula(&d, n) != n as usize + 1)
            .collect();
        Ok((bad.is_empty(), if bad.is_empty() { String::new() } else { format!("fails at N = {bad:?}") }))
    });
    c.check("table entries (1)..(4) solve D_p1 / D_p2 and lie in the computed spaces", || {
        let [t1, t2, t3, t4] = table_entries();
        let mut ok = true;
        for (p, ts) in [(p1(), [&t1, &t2]), (p2(), [&t3, &t4])] {
            let d = operator_at(&punctured_square(2)?, &p)?;
            let basis: Vec<Vec<CycElem>> = sol_space(&d, 2).basis.iter().map(|g| g.to_vector(2)).collect();
            for t in ts {
                ok &= apply(&d, t).is_zero() && in_span(&basis, &t.to_vector(2));
            }
        }
        Ok((ok, String::new()))
    });
    c.check("x - y at (-1,-1) gives an integer array with Delta_S(3)* = 0 on a 12x12 region", || {
        let w = punctured_square(3)?;
        let g = Poly2::from_int_terms(&[((1, 0), 1), ((0, 1), -1)]);
        let a = array_from_solution(&w, &minus_one(), &g, Rect::new(0, 11, 0, 11)?)?;
        let integral = a.values().iter().all(|v| v.as_rational().is_some_and(|r| r.is_integer()));
        Ok((integral && patch_zero(&w, &a)?, String::new()))
    });
    c.check("(x - y)^2 - (x + y) at (-1,-1) gives an integer array in the kernel", || {
        let w = punctured_square(3)?;
        let g = Poly2::from_int_terms(&[((2, 0), 1), ((1, 1), -2), ((0, 2), 1), ((1, 0), -1), ((0, 1), -1)]);
        let a = array_from_solution(&w, &minus_one(), &g, Rect::new(0, 11, 0, 11)?)?;
        let integral = a.values().iter().all(|v| v.as_rational().is_some_and(|r| r.is_integer()));
        Ok((integral && patch_zero(&w, &a)?, String::new()))
    });
    c.check("recombinations b1..b4 of the table arrays stay in the kernel", || {
        let w = punctured_square(2)?;
        let rect = Rect::new(0, 11, 0, 11)?;
        let [t1, t2, t3, t4] = table_entries();
        let a = [
            array_from_solution(&w, &p1(), &t1, rect)?,
            array_from_solution(&w, &p1(), &t2, rect)?,
            array_from_solution(&w, &p2(), &t3, rect)?,
            array_from_solution(&w, &p2(), &t4, rect)?,
        ];
        let lin = |x: &PatchArray<CycElem>, cx: CycElem, y: &PatchArray<CycElem>, cy: CycElem| {
            PatchArray::from_fn(rect, |q| {
                cx.clone() * x.get(q).expect("in rect").clone() + cy.clone() * y.get(q).expect("in rect").clone()
            })
        };
        let half = int(1).try_div(&int(2))?;
        let c4 = int(1).try_div(&(int(6) * (int(2) * z(3, 1) + int(1))))?;
        let bs = [
            lin(&a[0], int(1), &a[1], int(1)),
            lin(&a[0], int(1), &a[1], int(-1)),
            lin(&a[2], half.clone(), &a[3], half),
            lin(&a[2], c4.clone(), &a[3], -c4),
        ];
        let mut ok = true;
        for b in &bs {
            ok &= patch_zero(&w, b)?;
        }
        Ok((ok, String::new()))
    });
    c.checks
}

pub const EX41_MATRIX: [[i64; 9]; 9] = [
    [0, 1, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 1, 1],
    [0, 0, 0, 1, 0, 0, 1, 0, 1],
    [1, 1, 0, 0, 0, 0, 0, 1, 0],
    [0, 1, 1, 0, 0, 0, 0, 0, 1],
    [1, 0, 1, 0, 0, 0, 1, 0, 0],
];

pub const EX41_RREF: [[i64; 9]; 9] = [
    [1, 0, 0, 0, 0, 0, 2, 2, 1],
    [0, 1, 0, 0, 0, 0, 1, 2, 2],
    [0, 0, 1, 0, 0, 0, 2, 1, 2],
    [0, 0, 0, 1, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 1, 1],
    [0; 9],
    [0; 9],
    [0; 9],
];

fn fp_matrix(rows: &[[i64; 9]; 9]) -> FpMatrix {
    FpMatrix::from_rows(3, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn modp_checks() -> Vec<Check> {
    let mut c = Collector::new("modp");
    c.eq("rep_matrix(2, 3) is the printed 9x9 matrix", || Ok((rep_matrix(2, 3)?, fp_matrix(&EX41_MATRIX))));
    c.eq("its RREF is the printed form, rank 6", || {
        let (r, piv) = rref_mod_p(&rep_matrix(2, 3)?);
        Ok(((r, piv.len()), (fp_matrix(&EX41_RREF), 6)))
    });
    c.check("kernel(2, 3) has dimension 3 and is generated by translates of one array", || {
        let k = kernel(2, 3)?;
        let gens = translate_generators(&k)?;
        Ok((k.dimension == 3 && !gens.is_empty(), format!("{} generators", gens.len())))
    });
    c.check("b1 mod 3 = 2(a1 + a2 + a3) and b2 mod 3 = a1 - a2 for a translate basis", || {
        let gens = translate_generators(&kernel(2, 3)?)?;
        let (r1, r2) = (reduce_rational_array(&ex21_b1(), 3)?, reduce_rational_array(&ex21_b2(), 3)?);
        let hit = gens.iter().any(|g| {
            let t = |s: i64| tomofix_core::modp::translate_mod(g, (s, 0));
            let (a1, a2, a3) = (t(0), t(1), t(2));
            let want1 = TorusArray::from_fn(3, 3, |i, j| {
                (2 * (a1.get(i, j) + a2.get(i, j) + a3.get(i, j))) % 3
            });
            let want2 = TorusArray::from_fn(3, 3, |i, j| (a1.get(i, j) + 3 - a2.get(i, j)) % 3);
            r1 == want1 && r2 == want2
        });
        Ok((hit, String::new()))
    });
    for p in [5, 7, 11, 13] {
        c.eq(format!("kernel(2, {p}) = 0"), || Ok((kernel(2, p)?.dimension, 0)));
    }
    c.check("kernel(4, 5) is nonzero and contains the all-ones array", || {
        let k = kernel(4, 5)?;
        let flat: Vec<Vec<u32>> = k.basis.iter().map(|a| a.values().to_vec()).collect();
        Ok((k.dimension >= 1 && tomofix_core::modp::in_span_mod_p(5, &flat, &[1; 25]), format!("dim {}", k.dimension)))
    });
    c.eq("group determinant (2, 5): direct and formula both 3", || {
        let g = group_det_check(2, 5)?;
        Ok(((g.direct, g.formula), (3, 3)))
    });
    c.eq("group determinant (4, 5): direct and formula both 0", || {
        let g = group_det_check(4, 5)?;
        Ok(((g.direct, g.formula), (0, 0)))
    });
    for p in [3, 5, 7, 11, 13] {
        c.check(format!("sweep p = {p}: dim 0 exactly for n <= p-2, det = n^2 - 1"), || {
            let rows = theorem41_sweep(p)?;
            let ok = rows.iter().all(|r| {
                let dim_ok = if r.n + 2 <= p { r.kernel_dim == 0 } else { r.kernel_dim > 0 };
                dim_ok && r.det == r.formula && r.formula as u64 == (r.n as u64 * r.n as u64 + p as u64 - 1) % p as u64
            });
            let dims: Vec<String> = rows.iter().map(|r| format!("{}:{}", r.n, r.kernel_dim)).collect();
            Ok((ok, format!("dims {}", dims.join(" "))))
        });
    }
    c.checks
}

fn printed(k: usize) -> Result<ZnArray> {
    ZnArray::new(3, PRINTED_3TORUS[k - 1].to_vec())
}

fn balanced_checks() -> Vec<Check> {
    let mut c = Collector::new("balanced");
    let s2 = || punctured_square(2);
    c.check("a1 is balanced and zero-sum for S(2)*, all 9 sums = 0 mod 9", || {
        let cert = certify(&printed(1)?, &s2()?);
        Ok((cert.balanced && cert.zero_sum && cert.translate_sums.iter().flatten().count() == 9, String::new()))
    });
    c.check("f_4 is balanced; f_5 is zero-sum for S(4)*", || {
        Ok((is_balanced(&construct_fn(4)?) && certify(&construct_fn(5)?, &punctured_square(4)?).zero_sum, String::new()))
    });
    c.check("search on T_3 returns the 12 printed arrays in order", || {
        let found = search_balanced_3torus();
        let want: Vec<ZnArray> = (1..=12).map(printed).collect::<Result<_>>()?;
        Ok((found == want, format!("{} arrays", found.len())))
    });
    c.check("8!-filter oracle returns the same 12 arrays", || {
        Ok((brute_force_3torus() == search_balanced_3torus(), String::new()))
    });
    c.check("support triples are 134 245 035 467 578 368 017 128 026", || {
        let labels: Vec<String> = support_triples().iter().map(triple_label).collect();
        Ok((labels == ["134", "245", "035", "467", "578", "368", "017", "128", "026"], labels.join(" ")))
    });
    c.check("V(px) = V(x) = V(qx) as sets of triples", || {
        let base: BTreeSet<[usize; 3]> = support_triples().into_iter().collect();
        let vp: BTreeSet<[usize; 3]> = perm_p().value_triples().into_iter().collect();
        let vq: BTreeSet<[usize; 3]> = perm_q().value_triples().into_iter().collect();
        Ok((vp == base && vq == base, String::new()))
    });
    c.eq("p(a1) = a4 and q(a1) = a8", || {
        let a1 = printed(1)?;
        Ok(((perm_p().act(&a1)?, perm_q().act(&a1)?), (printed(4)?, printed(8)?)))
    });
    c.check("dihedral group: orders 6/2, qpq = p^-1, |G| = 12, orbit = all 12, printed words", || {
        let r = dihedral_group_check()?;
        let bad: Vec<&str> = r.words.iter().filter(|w| !w.1).map(|w| w.0.as_str()).collect();
        Ok((r.passed, if bad.is_empty() { format!("qpq = {:?}", r.qpq) } else { format!("words failing: {bad:?}") }))
    });
    c.check("support-triple automorphisms contain p and q", || {
        let auts = hypergraph_automorphisms();
        Ok((auts.contains(&perm_p()) && auts.contains(&perm_q()), format!("{} automorphisms", auts.len())))
    });
    c.eq("f_3 = a1", || Ok((construct_fn(3)?, printed(1)?)));
    c.check("g_n is constant along diagonals and rows of f_n are [n j, n j + n - 1], n = 3..12", || {
        let mut ok = true;
        for n in 3..=12usize {
            let f = construct_fn(n)?;
            let ni = n as i64;
            for j in 0..ni {
                for i in 0..ni {
                    ok &= g_n(n, i, j) == g_n(n, i + 1, j + 1);
                }
                let row: BTreeSet<u32> = (0..ni).map(|i| f.get(i, j)).collect();
                ok &= row == (n as u32 * j as u32..n as u32 * (j as u32 + 1)).collect();
            }
        }
        Ok((ok, String::new()))
    });
    c.check("f_n is balanced and zero-sum for S(n-1)*, n = 3..32", || {
        let bad: Vec<usize> = (3..=32)
            .filter(|&n| match construct_fn(n) {
                Ok(f) => !(is_balanced(&f) && certify(&f, &punctured_square(n as u32 - 1).expect("n >= 3")).zero_sum),
                Err(_) => true,
            })
            .collect();
        Ok((bad.is_empty(), if bad.is_empty() { String::new() } else { format!("fails at {bad:?}") }))
    });
    c.check("n = 3: horizontal line sums are 3 mod 9", || {
        let f = construct_fn(3)?;
        Ok(((0..3).all(|j| (0..3).map(|i| f.get(i, j)).sum::<u32>() % 9 == 3), String::new()))
    });
    c.check("n = 4: every window sum of f_4 is n^2(n+1)(n-2)/2 = 80 = 0 mod 16", || {
        let cert = certify(&construct_fn(4)?, &punctured_square(3)?);
        let want = (16 * 5 * 2 / 2) % 16;
        Ok((cert.translate_sums.iter().flatten().all(|&v| v == want), String::new()))
    });
    c.check("line-sum identities and decomposition hold for n = 3..10", || {
        let bad: Vec<u32> = (3..=10)
            .filter(|&n| !proof_identities_check(n as usize).map(|r| r.passed).unwrap_or(false))
            .collect();
        Ok((bad.is_empty(), if bad.is_empty() { String::new() } else { format!("fails at {bad:?}") }))
    });
    for (p, k) in [(5, 2), (5, 3), (7, 2), (7, 3), (7, 4), (7, 5)] {
        c.check(format!("nonexistence certificate for p = {p}, S({k})*"), || {
            let cert = nonexistence_certificate(p, k)?;
            Ok((cert.kernel_dim == 0 && cert.rank == (p * p) as usize, String::new()))
        });
    }
    c.check("certificate not applicable for p = 5, S(4)* (kernel nonzero)", || {
        Ok((matches!(nonexistence_certificate(5, 4), Err(Error::NotApplicable(_))), String::new()))
    });
    c.check("probe n = 4, S(3)*: exhaustive, finds f_4", || {
        let r = composite_probe(4, 3, u64::MAX)?;
        Ok((r.exhausted && r.contains_fn, format!("{} {} arrays, {} nodes", r.status, r.solution_count, r.nodes)))
    });
    c.check("probe n = 6, S(5)*: finds arrays, f_6 is a leaf of the search tree", || {
        let r = composite_probe(6, 5, 2000)?;
        Ok((r.solution_count > 0 && r.fn_is_leaf, format!("{} within {} nodes", r.status, r.nodes)))
    });
    c.checks
}

/// Total and failing counts.
pub fn summary(checks: &[Check]) -> (usize, usize) {
    (checks.len(), checks.iter().filter(|c| !c.passed).count())
}

