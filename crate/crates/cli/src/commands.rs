use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use tomofix_core::balanced::{
    certify, composite_probe, construct_fn, dihedral_group_check, hypergraph_automorphisms,
    nonexistence_certificate, proof_identities_check, search_balanced_3torus, ZnArray,
};
use tomofix_core::bounded::rational_basis;
use tomofix_core::io::{render_display_grid, render_grid, AnyArray};
use tomofix_core::modp::{group_det_check, kernel, theorem41_sweep};
use tomofix_core::polygrowth::{array_from_solution, solution_report};
use tomofix_core::ring::format_rational;
use tomofix_core::spectra::{square_zero_locus, zero_locus_oracle};
use tomofix_core::{punctured_square, LatticePoint, Rect, Result, TorusArray};

use crate::{golden, verify, BalancedArgs, Cli, Command, Outcome};

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::ZeroLocus { .. } => "zero-locus",
        Command::BoundedBasis { .. } => "bounded-basis",
        Command::Poly { .. } => "poly",
        Command::Modp { .. } => "modp",
        Command::Balanced(_) => "balanced",
        Command::Verify { .. } => "verify",
        Command::ReproducePaper => "reproduce-paper",
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let r = match &cli.command {
        Command::ZeroLocus { n, oracle } => zero_locus(*n, *oracle, g.json),
        Command::BoundedBasis { n } => bounded(*n, g.json, g.grid),
        Command::Poly { n, point, degree, size } => poly(*n, *point, *degree, *size, g.json, g.grid),
        Command::Modp { n, p, sweep } => modp(*n, *p, *sweep, g.json, g.grid),
        Command::Balanced(args) => balanced(args, g.budget, g.json, g.grid),
        Command::Verify { ring_cases, tree_cases } => Ok(run_verify(g.seed, *ring_cases, *tree_cases, g.json)),
        Command::ReproducePaper => Ok(reproduce(g.json)),
    };
    r.unwrap_or_else(Outcome::from_error)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn zero_locus(n: u32, oracle: bool, json: bool) -> Result<Outcome> {
    let points = square_zero_locus(n)?;
    let agrees = if oracle { Some(zero_locus_oracle(n)? == points) } else { None };
    let out = if json {
        to_json(&points)
    } else {
        let mut s = format!("zero locus of m_S({n})*: {} points\n", points.len());
        for p in &points {
            writeln!(s, "{p}").unwrap();
        }
        if let Some(a) = agrees {
            writeln!(s, "oracle: {}", if a { "agrees" } else { "DISAGREES" }).unwrap();
        }
        s
    };
    Ok(match agrees {
        Some(false) => Outcome::failed(out, "tomofix: closed form and exhaustive enumeration disagree\n"),
        _ => Outcome::ok(out),
    })
}

fn rational_grid(a: &TorusArray<num_rational::BigRational>) -> String {
    render_grid(a, format_rational)
}

fn bounded(n: u32, json: bool, grid: bool) -> Result<Outcome> {
    let b = rational_basis(n)?;
    if json {
        let arrays: Vec<_> = b.arrays.iter().map(|a| AnyArray::Q(a.clone()).to_doc()).collect();
        return Ok(Outcome::ok(to_json(&json!({ "basis": b, "arrays": arrays }))));
    }
    let mut s = format!("S({n}): {} rational arrays on the {}x{} torus\n", b.arrays.len(), b.dims.0, b.dims.1);
    for (k, (a, ((orbit, shift), (p, q)))) in b.arrays.iter().zip(b.provenance.iter().zip(&b.periods)).enumerate() {
        let members: Vec<String> = b.orbits[*orbit].iter().map(|t| t.to_string()).collect();
        writeln!(
            s,
            "b{}  orbit {{{}}}  shift ({shift},0)  periods ({},{}) ({},{})",
            k + 1,
            members.join(", "),
            p.i1,
            p.i2,
            q.i1,
            q.i2
        )
        .unwrap();
        if grid {
            s.push_str(&rational_grid(a));
        }
    }
    Ok(Outcome::ok(s))
}

fn poly(n: u32, point: usize, degree: u32, size: usize, json: bool, grid: bool) -> Result<Outcome> {
    let w = punctured_square(n)?;
    let locus = square_zero_locus(n)?;
    let Some(p) = locus.get(point) else {
        return Ok(Outcome::usage(format!("tomofix: --point must be below {}\n", locus.len())));
    };
    let (_, space, report) = solution_report(&w, p, degree)?;
    let graded: Vec<Vec<String>> =
        (0..=degree).map(|d| space.graded_representatives(d).iter().map(|g| g.to_string()).collect()).collect();
    let consistent = report.dimension == report.formula;
    let out = if json {
        to_json(&json!({ "report": report, "graded": graded }))
    } else {
        let mut s = format!("point {p}\noperator {}\n", report.operator);
        writeln!(s, "dim Sol_<={degree}: kernel {}, formula {}", report.dimension, report.formula).unwrap();
        for (d, reps) in graded.iter().enumerate() {
            writeln!(s, "degree {d}: {}", if reps.is_empty() { "-".to_string() } else { reps.join("; ") }).unwrap();
        }
        if grid && size > 0 {
            let rect = Rect::new(0, size as i64 - 1, 0, size as i64 - 1)?;
            for (d, reps) in (0..=degree).map(|d| (d, space.graded_representatives(d))) {
                if let Some(g) = reps.first() {
                    let a = array_from_solution(&w, p, g, rect)?;
                    let t = TorusArray::from_fn(size, size, |i, j| {
                        a.get(LatticePoint::new(i, j)).expect("inside rect").clone()
                    });
                    writeln!(s, "array from the degree {d} solution {g} on [0,{}]^2:", size - 1).unwrap();
                    s.push_str(&render_display_grid(&t));
                }
            }
        }
        s
    };
    Ok(if consistent {
        Outcome::ok(out)
    } else {
        Outcome::failed(out, "tomofix: kernel dimension and formula disagree\n")
    })
}

fn modp(n: Option<u32>, p: u32, sweep: bool, json: bool, grid: bool) -> Result<Outcome> {
    if sweep {
        let rows = theorem41_sweep(p)?;
        let ok = rows.iter().all(|r| ((r.kernel_dim == 0) == (r.n + 2 <= p)) && r.det == r.formula);
        let out = if json {
            to_json(&rows)
        } else {
            let mut s = format!("p = {p}\n   n  kernel_dim  det  n^2-1 mod p\n");
            for r in &rows {
                writeln!(s, "{:>4}  {:>10}  {:>3}  {:>11}", r.n, r.kernel_dim, r.det, r.formula).unwrap();
            }
            s
        };
        return Ok(if ok { Outcome::ok(out) } else { Outcome::failed(out, "tomofix: sweep contradicts the theorem\n") });
    }
    let Some(n) = n else {
        return Ok(Outcome::usage("tomofix: modp needs --n or --sweep\n"));
    };
    let report = kernel(n, p)?;
    let det = group_det_check(n, p)?;
    if json {
        return Ok(Outcome::ok(to_json(&json!({ "kernel": report, "determinant": det }))));
    }
    let mut s = format!("S({n})* on T_{p} over F_{p}: rank {}, kernel dimension {}\n", report.rank, report.dimension);
    writeln!(s, "determinant {} (n^2 - 1 mod p = {})", det.direct, det.formula).unwrap();
    if grid {
        s.push_str("rref:\n");
        for r in report.rref.to_rows() {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(s, "{}", cells.join(" ")).unwrap();
        }
        for (k, b) in report.basis.iter().enumerate() {
            writeln!(s, "kernel basis {}:", k + 1).unwrap();
            s.push_str(&render_display_grid(b));
        }
    }
    Ok(if det.equal { Outcome::ok(s) } else { Outcome::failed(s, "tomofix: determinant mismatch\n") })
}

fn zn_grid(a: &ZnArray) -> String {
    render_display_grid(&a.to_torus())
}

fn balanced(args: &BalancedArgs, budget: u64, json: bool, grid: bool) -> Result<Outcome> {
    let modes = [args.search, args.fn_n.is_some(), args.probe.is_some(), args.certificate.is_some(), args.group];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return Ok(Outcome::usage(
            "tomofix: balanced needs exactly one of --search, --fn, --probe, --certificate, --group\n",
        ));
    }
    if args.search {
        if args.n.is_some_and(|n| n != 3) {
            return Ok(Outcome::usage("tomofix: --search is implemented for --n 3 only; use --probe for other n\n"));
        }
        let found = search_balanced_3torus();
        let w = punctured_square(2)?;
        if json {
            let certs: Vec<_> = found.iter().map(|a| certify(a, &w)).collect();
            return Ok(Outcome::ok(to_json(&certs)));
        }
        let mut s = String::new();
        for (k, a) in found.iter().enumerate() {
            writeln!(s, "a{:<3}{a}", k + 1).unwrap();
            if grid {
                s.push_str(&zn_grid(a));
            }
        }
        return Ok(Outcome::ok(s));
    }
    if let Some(n) = args.fn_n {
        let f = construct_fn(n)?;
        let cert = certify(&f, &punctured_square(n as u32 - 1)?);
        let proof = proof_identities_check(n)?;
        let ok = cert.balanced && cert.zero_sum && proof.passed;
        let out = if json {
            to_json(&json!({ "certificate": cert, "identities": proof }))
        } else {
            let mut s = format!("f_{n} = {f}\nbalanced: {}\nzero-sum for S({})*: {}\n", cert.balanced, n - 1, cert.zero_sum);
            writeln!(s, "line-sum identities: {}", if proof.passed { "hold" } else { "FAIL" }).unwrap();
            if grid {
                s.push_str(&zn_grid(&f));
            }
            s
        };
        return Ok(if ok { Outcome::ok(out) } else { Outcome::failed(out, "tomofix: f_n check failed\n") });
    }
    if let Some(n) = args.probe {
        let Some(k) = args.k else {
            return Ok(Outcome::usage("tomofix: --probe needs --k\n"));
        };
        let r = composite_probe(n, k, budget)?;
        if json {
            return Ok(Outcome::ok(to_json(&r)));
        }
        let mut s = format!("T_{n}, S({k})*, budget {budget}\nstatus {}\nnodes {}\n", r.status, r.nodes);
        writeln!(s, "exhausted {}\nsolutions {}", r.exhausted, r.solution_count).unwrap();
        if k as usize == n - 1 {
            writeln!(s, "f_{n} visited {}\nf_{n} in search tree {}", r.contains_fn, r.fn_is_leaf).unwrap();
        }
        for a in &r.solutions {
            writeln!(s, "{a}").unwrap();
            if grid {
                s.push_str(&zn_grid(a));
            }
        }
        return Ok(Outcome::ok(s));
    }
    if let Some(p) = args.certificate {
        let Some(k) = args.k else {
            return Ok(Outcome::usage("tomofix: --certificate needs --k\n"));
        };
        let c = nonexistence_certificate(p, k)?;
        let out = if json { to_json(&c) } else { format!("no balanced zero-sum array on T_{p} for S({k})*\n{}\n", c.argument) };
        return Ok(Outcome::ok(out));
    }
    let r = dihedral_group_check()?;
    let auts = hypergraph_automorphisms().len();
    let out = if json {
        to_json(&json!({ "dihedral": r, "automorphisms": auts }))
    } else {
        let mut s = format!("order(p) {}  order(q) {}  |<p,q>| {}\n", r.order_p, r.order_q, r.group_order);
        let qpq: Vec<String> = r.qpq.iter().map(|v| v.to_string()).collect();
        writeln!(s, "qpq = [{}]  equals p^-1: {}", qpq.join(","), r.qpq_is_p_inverse).unwrap();
        writeln!(s, "orbit of a1: {}  stabilizer: {}  orbit = solutions: {}", r.orbit_size, r.stabilizer_size, r.orbit_is_solution_set).unwrap();
        for (w, ok) in &r.words {
            writeln!(s, "{w}: {}", if *ok { "ok" } else { "FAIL" }).unwrap();
        }
        writeln!(s, "automorphisms of the support triples: {auts}").unwrap();
        s
    };
    Ok(if r.passed { Outcome::ok(out) } else { Outcome::failed(out, "tomofix: dihedral check failed\n") })
}

fn run_verify(seed: u64, ring_cases: usize, tree_cases: usize, json: bool) -> Outcome {
    let sizes = verify::SuiteSizes { ring_cases, tree_cases, ..Default::default() };
    let results = verify::run_suites(seed, sizes);
    let out = if json { to_json(&json!({ "seed": seed, "suites": results })) } else { verify::render(&results, seed) };
    if results.iter().all(|r| r.passed()) {
        Outcome::ok(out)
    } else {
        Outcome::failed(out, "tomofix: property suite failures\n")
    }
}

fn reproduce(json: bool) -> Outcome {
    let checks = golden::run_all();
    let out = if json { to_json(&checks) } else { golden::render_table(&checks) };
    let (_, failed) = golden::summary(&checks);
    if failed == 0 {
        Outcome::ok(out)
    } else {
        Outcome::failed(out, format!("tomofix: {failed} golden checks failed\n"))
    }
}
