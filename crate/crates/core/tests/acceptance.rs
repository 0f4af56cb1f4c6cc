//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use pointgb::aoe::{axis_of_evil, expand, reduce_basis, AoeOptions, FactoredBasisElement};
use pointgb::cemu::{cemu, PointSet};
use pointgb::exec::{map_ordered, Execution};
use pointgb::gen::{generate, GenSpec};
use pointgb::monomial::{is_order_ideal, minimal_generators_bruteforce, terms_of_degree, Term, TermSet};
use pointgb::poly::Polynomial;
use pointgb::potexp::{minimal_basis, minimal_basis_traced};
use pointgb::scalar::Field;
use pointgb::verify::{elimination_check, gb_certificate, moeller_gb, spoly_check};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Q: Field = Field::Rationals;

fn t(e: &[u32]) -> Term {
    Term::new(e.iter().copied())
}

fn terms(list: &[&[u32]]) -> Vec<Term> {
    list.iter().map(|e| t(e)).collect()
}

fn poly(nvars: usize, list: &[(i64, &[u32])]) -> Polynomial {
    Polynomial::from_terms(Q, nvars, list.iter().map(|(c, e)| (t(e), Q.from_i64(*c))))
}

fn worked_points() -> PointSet {
    PointSet::from_ints(
        Q,
        &[&[4, 0, 0], &[2, 1, 4], &[2, 4, 0], &[3, 0, 1], &[2, 1, 3], &[1, 3, 4], &[2, 4, 3], &[2, 4, 2], &[1, 0, 2]],
    )
    .unwrap()
}

/// Expected intermediate sets for one variable of one generator. Point
/// indices are 0-based.
struct Step {
    m: usize,
    n_m: Option<Vec<Term>>,
    d0: Vec<usize>,
    /// `(A, E, D)` per delta; an empty list means the loop is vacuous and
    /// `D` stays `D0`.
    deltas: Vec<(Vec<usize>, Vec<Term>, Vec<usize>)>,
}

fn check_step(e: &FactoredBasisElement, s: &Step) {
    let tr = e.variable_trace(s.m).unwrap_or_else(|| panic!("{}: no trace for x{}", e.tau, s.m));
    if let Some(n) = &s.n_m {
        let got: BTreeSet<Term> = tr.n_m.clone().unwrap().into_iter().collect();
        assert_eq!(got, n.iter().cloned().collect(), "{}: N_{}", e.tau, s.m);
    }
    assert_eq!(tr.survivors_before, s.d0, "{}: D_{}0", e.tau, s.m);
    let factors: Vec<_> = e.factors_for(s.m).collect();
    assert_eq!(factors.len(), s.deltas.len(), "{}: factor count for x{}", e.tau, s.m);
    for (k, (a, ee, d)) in s.deltas.iter().enumerate() {
        let f = factors[k];
        let mut ia = f.interpolation_set.clone();
        ia.sort();
        assert_eq!(&ia, a, "{}: A_{}{}", e.tau, s.m, k + 1);
        let es: BTreeSet<Term> = f.support.iter().cloned().collect();
        assert_eq!(es, ee.iter().cloned().collect(), "{}: E_{}{}", e.tau, s.m, k + 1);
        assert_eq!(&tr.survivors[k], d, "{}: D_{}{}", e.tau, s.m, k + 1);
    }
    if s.deltas.is_empty() {
        assert!(tr.survivors.is_empty(), "{}: vacuous loop for x{}", e.tau, s.m);
    }
}

fn criterion_1() {
    let x = worked_points();
    let e = cemu(&x).unwrap();

    let expected: [(Option<usize>, Option<usize>, [u32; 3]); 9] = [
        (None, None, [0, 0, 0]),
        (Some(1), Some(1), [1, 0, 0]),
        (Some(2), Some(2), [0, 1, 0]),
        // Antecedent 1 would collide with the image of P2; only P2 itself yields (2,0,0).
        (Some(1), Some(2), [2, 0, 0]),
        (Some(3), Some(2), [0, 0, 1]),
        (Some(1), Some(4), [3, 0, 0]),
        (Some(3), Some(3), [0, 1, 1]),
        (Some(3), Some(7), [0, 0, 2]),
        (Some(2), Some(6), [1, 1, 0]),
    ];
    for (k, (s, m, d)) in expected.iter().enumerate() {
        let step = &e.trace()[k];
        assert_eq!(step.sigma, *s, "sigma of P{}", k + 1);
        assert_eq!(step.antecedent.map(|a| a + 1), *m, "antecedent of P{}", k + 1);
        assert_eq!(e.phi(k), &t(d), "Phi(P{})", k + 1);
    }
    // Recursion sets of P7 and P9.
    assert_eq!(e.trace()[6].recursion_set, Some(vec![4, 6]));
    assert_eq!(e.trace()[8].recursion_set, Some(vec![2, 8]));

    let g = minimal_basis(&e.term_set(), 3).unwrap();
    let expected_g = terms(&[&[4, 0, 0], &[2, 1, 0], &[0, 2, 0], &[1, 0, 1], &[0, 1, 2], &[0, 0, 3]]);
    assert_eq!(g, expected_g.iter().cloned().collect::<TermSet>());

    let gb = axis_of_evil(&x, &e, &g, AoeOptions::default()).unwrap();
    let taus: Vec<Term> = gb.elements.iter().map(|el| el.tau.clone()).collect();
    assert_eq!(taus, expected_g);

    // Reference factors with integer coefficients, compared after making
    // both sides monic.
    let reference_factors: Vec<Vec<Polynomial>> = vec![
        vec![
            poly(3, &[(1, &[1, 0, 0]), (-4, &[0, 0, 0])]),
            poly(3, &[(1, &[1, 0, 0]), (-2, &[0, 0, 0])]),
            poly(3, &[(1, &[1, 0, 0]), (-3, &[0, 0, 0])]),
            poly(3, &[(1, &[1, 0, 0]), (-1, &[0, 0, 0])]),
        ],
        vec![
            poly(3, &[(1, &[1, 0, 0]), (-2, &[0, 0, 0])]),
            poly(3, &[(1, &[1, 0, 0]), (-1, &[0, 0, 0])]),
            poly(3, &[(1, &[0, 1, 0])]),
        ],
        vec![
            poly(3, &[(1, &[0, 1, 0]), (-4, &[1, 0, 0]), (4, &[0, 0, 0])]),
            poly(3, &[(2, &[0, 1, 0]), (-1, &[2, 0, 0]), (7, &[1, 0, 0]), (-12, &[0, 0, 0])]),
        ],
        vec![
            poly(3, &[(1, &[1, 0, 0]), (-2, &[0, 0, 0])]),
            poly(3, &[(6, &[0, 0, 1]), (-4, &[0, 1, 0]), (1, &[2, 0, 0]), (-1, &[1, 0, 0]), (-12, &[0, 0, 0])]),
        ],
        vec![
            poly(3, &[(1, &[0, 1, 0]), (-4, &[0, 0, 0])]),
            poly(3, &[(1, &[0, 0, 1]), (-3, &[0, 0, 0])]),
            poly(
                3,
                &[(6, &[0, 0, 1]), (-4, &[0, 1, 0]), (-5, &[3, 0, 0]), (41, &[2, 0, 0]), (-96, &[1, 0, 0]), (48, &[0, 0, 0])],
            ),
        ],
        vec![
            poly(3, &[(1, &[0, 0, 1]), (-2, &[0, 0, 0])]),
            poly(3, &[(1, &[0, 0, 1]), (-3, &[0, 0, 0])]),
            poly(
                3,
                &[(6, &[0, 0, 1]), (8, &[0, 1, 0]), (-5, &[3, 0, 0]), (35, &[2, 0, 0]), (-54, &[1, 0, 0]), (-24, &[0, 0, 0])],
            ),
        ],
    ];
    for (el, want) in gb.elements.iter().zip(&reference_factors) {
        let got: Vec<Polynomial> = el.factors.iter().map(|f| f.body.clone()).collect();
        let want: Vec<Polynomial> = want.iter().map(Polynomial::monic).collect();
        assert_eq!(got, want, "factors of {}", el.tau);
    }

    let all: Vec<usize> = (0..9).collect();
    let n_all = terms(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[2, 0, 0], &[0, 0, 1], &[3, 0, 0], &[0, 1, 1], &[0, 0, 2], &[1, 1, 0]]);
    let one = || t(&[0, 0, 0]);
    let x1 = || t(&[1, 0, 0]);
    let x1_2 = || t(&[2, 0, 0]);
    let x1_3 = || t(&[3, 0, 0]);
    let x2 = || t(&[0, 1, 0]);
    let x1x2 = || t(&[1, 1, 0]);
    let x3 = || t(&[0, 0, 1]);

    // m = 1: N_1, A_1 (in delta order) and B_1.
    let first: [(Vec<Term>, Vec<usize>, Vec<i64>); 6] = [
        (vec![one(), x1(), x1_2(), x1_3()], vec![0, 1, 3, 5], vec![4, 2, 3, 1]),
        (vec![one(), x1()], vec![2, 8], vec![2, 1]),
        (vec![], vec![], vec![]),
        (vec![one()], vec![4], vec![2]),
        (vec![], vec![], vec![]),
        (vec![], vec![], vec![]),
    ];
    for (el, (n1, a1, b1)) in gb.elements.iter().zip(&first) {
        let tr = el.variable_trace(1).unwrap();
        let got: BTreeSet<Term> = tr.n_m.clone().unwrap().into_iter().collect();
        assert_eq!(got, n1.iter().cloned().collect(), "{}: N_1", el.tau);
        let a: Vec<usize> = el.factors_for(1).flat_map(|f| f.interpolation_set.clone()).collect();
        assert_eq!(&a, a1, "{}: A_1", el.tau);
        let b: Vec<_> = b1.iter().map(|&v| Q.from_i64(v)).collect();
        assert_eq!(tr.projections, b, "{}: B_1", el.tau);
    }

    let n2_full = vec![one(), x1(), x1_2(), x1_3(), x2(), x1x2()];
    let e4 = vec![one(), x1(), x1_2(), x1_3(), x2()];
    let steps: [Vec<Step>; 6] = [
        vec![Step { m: 2, n_m: None, d0: vec![], deltas: vec![] }],
        vec![Step { m: 2, n_m: Some(n2_full.clone()), d0: vec![0, 3], deltas: vec![(vec![0, 3], vec![one(), x1()], vec![])] }],
        vec![Step {
            m: 2,
            n_m: Some(n2_full.clone()),
            d0: all.clone(),
            deltas: vec![
                (vec![2, 8], vec![one(), x1()], vec![0, 1, 3, 4, 5]),
                (vec![0, 1, 3, 5], vec![one(), x1(), x1_2(), x1_3()], vec![]),
            ],
        }],
        vec![
            Step { m: 2, n_m: Some(vec![one()]), d0: vec![0, 3, 5, 8], deltas: vec![] },
            Step {
                m: 3,
                n_m: Some(vec![one(), x1(), x2(), x1_2(), x3(), x1_3(), x1x2()]),
                d0: vec![0, 3, 5, 8],
                deltas: vec![(vec![0, 3, 5, 8], vec![one(), x1(), x1_2(), x2()], vec![])],
            },
        ],
        vec![
            Step { m: 2, n_m: Some(vec![one()]), d0: all.clone(), deltas: vec![(vec![7], vec![one()], vec![0, 1, 3, 4, 5, 8])] },
            Step {
                m: 3,
                n_m: Some(n_all.clone()),
                d0: vec![0, 1, 3, 4, 5, 8],
                deltas: vec![
                    (vec![4], vec![one()], vec![0, 1, 3, 5, 8]),
                    (vec![0, 1, 3, 5, 8], e4.clone(), vec![]),
                ],
            },
        ],
        vec![
            Step { m: 2, n_m: Some(vec![]), d0: all.clone(), deltas: vec![] },
            Step {
                m: 3,
                n_m: Some(n_all.clone()),
                d0: all.clone(),
                deltas: vec![
                    (vec![7], vec![one()], vec![0, 1, 2, 3, 4, 5, 6]),
                    (vec![4, 6], vec![one(), x2()], vec![0, 1, 2, 3, 5]),
                    (vec![0, 1, 2, 3, 5], e4.clone(), vec![]),
                ],
            },
        ],
    ];
    for (el, ss) in gb.elements.iter().zip(&steps) {
        for s in ss {
            check_step(el, s);
        }
    }
    assert!(gb_certificate(&gb, &x).unwrap().is_valid());
}

fn criterion_2() {
    // x, y, z read as x1, x2, x3.
    let n: TermSet = terms(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, 1], &[1, 0, 1], &[2, 0, 0], &[2, 0, 1]])
        .into_iter()
        .collect();
    let g = minimal_basis(&n, 3).unwrap();
    let want: TermSet = terms(&[&[1, 1, 0], &[0, 2, 0], &[0, 0, 2], &[3, 0, 0]]).into_iter().collect();
    assert_eq!(g, want);
}

fn criterion_3() {
    let x = worked_points();
    let gb = pointgb::factorize(&x, Execution::Sequential).unwrap();
    let reduced = reduce_basis(&gb.expanded()).unwrap();
    let oracle = moeller_gb(&x).reduced;
    assert_eq!(reduced, oracle);
    let reference = [
        "x1^4 - 10*x1^3 + 35*x1^2 - 50*x1 + 24",
        "x1^2*x2 - 3*x1*x2 + 2*x2",
        "x2^2 - 2*x1*x2 - x2 + 2*x1^3 - 16*x1^2 + 38*x1 - 24",
        "x1*x3 - 2*x3 - 2/3*x1*x2 + 4/3*x2 + 1/6*x1^3 - 1/2*x1^2 - 5/3*x1 + 4",
        "x2*x3^2 - 4*x3^2 - 7*x2*x3 + 28*x3 + 8/3*x1*x2 + 20/3*x2 - 16/3*x1^3 + 48*x1^2 - 344/3*x1 + 32",
        "x3^3 - 5*x3^2 + 8/3*x2*x3 - 14/3*x3 - 16/9*x1*x2 - 40/9*x2 + 73/9*x1^3 - 197/3*x1^2 + 1358/9*x1 - 72",
    ];
    let rendered: Vec<String> = reduced.iter().map(ToString::to_string).collect();
    assert_eq!(rendered, reference);
}

/// Checks every random-instance property on one point set.
fn check_instance(x: &PointSet, seed: u64) -> Result<(), String> {
    let n = x.nvars();
    let e = cemu(x).map_err(|err| err.to_string())?;
    let ensure = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_owned()) };

    ensure(e.len() == x.len(), "|N| != |X|")?;
    let nset = e.term_set();
    ensure(nset.len() == x.len(), "escalier terms not distinct")?;
    ensure(is_order_ideal(&nset), "escalier not an order ideal")?;
    for k in 1..x.len() {
        let p = cemu(&x.prefix(k)).unwrap();
        ensure(p.terms() == &e.terms()[..k], "prefix stability")?;
    }

    let (g, view) = minimal_basis_traced(&nset, n).map_err(|err| err.to_string())?;
    ensure(g == minimal_generators_bruteforce(&nset, n).unwrap(), "minimal basis != brute force")?;
    let h = nset.iter().map(Term::degree).max().unwrap();
    ensure(g.iter().all(|t| t.degree() <= h + 1), "generator above degree h+1")?;
    for (i, ((s, c), gi)) in view.slices.iter().zip(&view.expansions).zip(&view.generators).enumerate() {
        ensure(s.len() + c.len() + gi.len() == terms_of_degree(n, i as u32).len(), "degree slice count")?;
    }

    let gb = axis_of_evil(x, &e, &g, AoeOptions { validate: true, execution: Execution::Sequential })
        .map_err(|err| err.to_string())?;
    ensure(gb.leading_terms() == g, "leading terms != G")?;
    for el in &gb.elements {
        for m in 1..=n {
            ensure(el.factors_for(m).count() == el.tau.exp(m - 1) as usize, "factor count != exponent")?;
        }
        for f in &el.factors {
            let monic = f.body.leading_term().ok() == Some(&Term::var(n, f.m - 1)) && f.body.leading_coeff().unwrap().is_one();
            ensure(monic, "factor not monic in x_m")?;
        }
        let mut prev: Option<&Vec<usize>> = None;
        for tr in &el.trace {
            if let Some(p) = prev {
                ensure(&tr.survivors_before == p, "D_(m+1)0 != last D_m")?;
            }
            let mut cur = &tr.survivors_before;
            for (k, d) in tr.survivors.iter().enumerate() {
                let sub = |a: &[usize], b: &[usize]| a.iter().all(|i| b.contains(i));
                ensure(sub(d, cur), "D sets not monotone")?;
                let f = el.factors_for(tr.m).nth(k).unwrap();
                ensure(sub(&f.interpolation_set, cur), "A not within D")?;
                cur = d;
            }
            prev = Some(cur);
        }
        ensure(prev.is_none_or(Vec::is_empty), "points left over")?;
        // Factoring this generator alone gives the same element.
        let alone = axis_of_evil(x, &e, &[el.tau.clone()].into_iter().collect(), AoeOptions { validate: false, execution: Execution::Sequential })
            .map_err(|err| err.to_string())?;
        ensure(&alone.elements[0] == el, "per-generator factorization depends on the rest")?;
        ensure(expand(el, x.field(), n).leading_term().unwrap() == &el.tau, "expanded head != tau")?;
    }
    let cert = gb_certificate(&gb, x).map_err(|err| err.to_string())?;
    ensure(cert.is_valid(), "certificate fails")?;

    let reduced = reduce_basis(&gb.expanded()).map_err(|err| err.to_string())?;
    ensure(reduced == moeller_gb(x).reduced, "reduced basis != oracle")?;
    if n <= 3 && x.len() <= 12 {
        ensure(spoly_check(&reduced).passed(), "S-polynomial check")?;
    }
    for j in 1..=n {
        ensure(elimination_check(&reduced, x, j).unwrap().passed(), "elimination check")?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.shuffle(&mut rng);
    ensure(cemu(&x.permuted(&order)).unwrap().term_set() == nset, "escalier set depends on point order")?;
    Ok(())
}

fn criterion_4() {
    let seeds: Vec<u64> = (0..500).collect();
    let failures: Vec<String> = map_ordered(&seeds, Execution::Parallel, |&seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nvars = rng.gen_range(1..=4usize);
        let cap = 7usize.pow(nvars as u32).min(20);
        let points = rng.gen_range(1..=cap);
        let x = generate(Q, GenSpec { nvars, points, lo: 0, hi: 6, seed }).unwrap();
        check_instance(&x, seed).err().map(|e| format!("seed {seed} (n={nvars}, |X|={points}): {e}"))
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(failures.is_empty(), "{} instances failed, first: {}", failures.len(), failures[0]);
}

fn criterion_5() {
    for n in 1..=5usize {
        for d in 0..=8u32 {
            let ts = terms_of_degree(n, d);
            // C(n+d-1, n-1) by Pascal's rule.
            let mut row = vec![1u64];
            for _ in 0..(n + d as usize - 1) {
                let mut next = vec![1u64; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = row[i - 1] + row[i];
                }
                row = next;
            }
            assert_eq!(ts.len() as u64, row[n - 1], "n={n} d={d}");
            assert!(ts.iter().all(|t| t.degree() == d && t.nvars() == n));
            assert!(ts.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, fn(), Duration); 5] = [
        ("worked nine-point example", criterion_1, Duration::from_secs(1)),
        ("potential expansion example", criterion_2, Duration::from_millis(100)),
        ("reduced basis against oracle", criterion_3, Duration::from_secs(1)),
        ("500 random instances", criterion_4, Duration::from_secs(60)),
        ("term counts", criterion_5, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= *limit => "PASS".to_owned(),
            Ok(()) => format!("FAIL (over time limit {limit:?})"),
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL ({})", msg.replace('\n', " "))
            }
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {} [{name}]: {verdict} in {:.3}s", k + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
