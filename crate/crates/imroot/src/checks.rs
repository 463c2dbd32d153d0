//! Built-in regression driver: every published value the toolkit
//! reproduces, organized into named suites. Checks run against the
//! configured Cartan matrix, so running them with a mutated matrix makes
//! the matrix-specific assertions fail with a diff in the detail column
//! (a useful negative control).

use kmlie::algebra::Algebra;
use kmlie::cartan::{CartanMatrix, RootVector};
use kmlie::ratio::{fmt_q, q, qi, Q};
use kmlie::sl2;
use kmlie::so21::{self, So21Triple};
use kmlie::weights;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<String, String> {
    if got == want {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("computed {got:?}, expected {want:?}"))
    }
}

fn expect_q(got: &Q, want: Q) -> Result<String, String> {
    if *got == want {
        Ok(fmt_q(got))
    } else {
        Err(format!("computed {}, expected {}", fmt_q(got), fmt_q(&want)))
    }
}

type CheckFn = Box<dyn Fn(&Algebra) -> Result<String, String>>;

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    run: CheckFn,
}

pub fn all_suites() -> Vec<&'static str> {
    vec![
        "brackets",
        "forms",
        "multiplicities",
        "casimir",
        "kernels",
        "alpha11",
        "alpha23",
        "weight-tables",
        "hw",
        "real",
        "principal",
        "conjecture",
        "unirep",
    ]
}

fn fib_alpha11(alg: &Algebra) -> Result<So21Triple, String> {
    So21Triple::build_imaginary(
        alg,
        &RootVector::new(vec![1, 1]),
        &alg.e(&[1, 2]).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

fn fib_alpha23(alg: &Algebra) -> Result<So21Triple, String> {
    So21Triple::build_imaginary(
        alg,
        &RootVector::new(vec![2, 3]),
        &alg.e(&[2, 1, 2, 1, 2]).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

pub fn checks() -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let mut add = |suite: &'static str, name: &'static str, f: CheckFn| {
        out.push(Check { suite, name, run: f });
    };

    // ---------------- brackets ----------------
    add(
        "brackets",
        "e12-f21",
        Box::new(|alg| {
            let v = alg
                .bracket(&alg.e(&[1, 2]).unwrap(), &alg.f(&[2, 1]).unwrap())
                .map_err(|e| e.to_string())?;
            let want = alg.h(1).unwrap().scale(&qi(3)).add(&alg.h(2).unwrap().scale(&qi(3)));
            expect(v.to_string(), want.to_string())
        }),
    );
    add(
        "brackets",
        "e21212-f21212",
        Box::new(|alg| {
            let v = alg
                .bracket(
                    &alg.e(&[2, 1, 2, 1, 2]).unwrap(),
                    &alg.f(&[2, 1, 2, 1, 2]).unwrap(),
                )
                .map_err(|e| e.to_string())?;
            let want = alg
                .h(1)
                .unwrap()
                .scale(&qi(576))
                .add(&alg.h(2).unwrap().scale(&qi(864)));
            expect(v.to_string(), want.to_string())
        }),
    );
    add(
        "brackets",
        "e1212-f1212",
        Box::new(|alg| {
            let v = alg
                .bracket(&alg.e(&[1, 2, 1, 2]).unwrap(), &alg.f(&[1, 2, 1, 2]).unwrap())
                .map_err(|e| e.to_string())?;
            let want = alg
                .h(1)
                .unwrap()
                .scale(&qi(-96))
                .add(&alg.h(2).unwrap().scale(&qi(-96)));
            expect(v.to_string(), want.to_string())
        }),
    );
    add(
        "brackets",
        "f12-e1212-vanishes",
        Box::new(|alg| {
            let v = alg
                .bracket(&alg.f(&[1, 2]).unwrap(), &alg.e(&[1, 2, 1, 2]).unwrap())
                .map_err(|e| e.to_string())?;
            expect(v.is_zero(), true).map(|_| "0".into())
        }),
    );
    add(
        "brackets",
        "serre-relations-vanish",
        Box::new(|alg| {
            for i in 1..=alg.rank() {
                for j in 1..=alg.rank() {
                    if i != j {
                        let s = alg.serre_element(i, j).map_err(|e| e.to_string())?;
                        if !alg.is_zero_element(&s) {
                            return Err(format!("(ad e_{i})^(1-a) e_{j} nonzero"));
                        }
                    }
                }
            }
            Ok("all vanish".into())
        }),
    );

    // ---------------- forms ----------------
    add(
        "forms",
        "base-cases",
        Box::new(|alg| {
            let e1 = alg.e(&[1]).unwrap();
            let e2 = alg.e(&[2]).unwrap();
            expect_q(&alg.contravariant_form(&e1, &e1), qi(1))?;
            expect_q(&alg.contravariant_form(&e1, &e2), qi(0))?;
            let h1 = alg.h(1).unwrap();
            expect_q(
                &alg.contravariant_form(&h1, &h1),
                qi(alg.cartan().entry(0, 0)),
            )?;
            expect_q(&alg.bilinear_form(&e1, &alg.f(&[1]).unwrap()), qi(1))
        }),
    );
    add(
        "forms",
        "n-values",
        Box::new(|alg| {
            let e12 = alg.e(&[1, 2]).unwrap();
            expect_q(&alg.contravariant_form(&e12, &e12), qi(3))?;
            let e5 = alg.e(&[2, 1, 2, 1, 2]).unwrap();
            expect_q(&alg.contravariant_form(&e5, &e5), qi(288))?;
            let e4 = alg.e(&[1, 2, 1, 2]).unwrap();
            expect_q(&alg.contravariant_form(&e4, &e4), qi(48))
        }),
    );
    add(
        "forms",
        "adjointness-sample",
        Box::new(|alg| {
            // ([e_1, u], v) = (u, [f_1, v]) on a nontrivial pair
            let u = alg.e(&[2, 1, 2]).unwrap();
            let v = alg.e(&[1, 2, 1, 2]).unwrap();
            let lhs = alg.contravariant_form(&alg.bracket_raw(&alg.e(&[1]).unwrap(), &u), &v);
            let rhs = alg.contravariant_form(&u, &alg.bracket_raw(&alg.f(&[1]).unwrap(), &v));
            expect_q(&lhs, rhs)
        }),
    );

    // ---------------- multiplicities ----------------
    add(
        "multiplicities",
        "string-at-alpha2",
        Box::new(|alg| {
            // multiplicities {1,1,1,1} along alpha2 + m alpha1
            let ms: Vec<u64> = (0..4)
                .map(|m| alg.peterson_multiplicity_u64(&RootVector::new(vec![m, 1])))
                .collect();
            expect(ms, vec![1, 1, 1, 1]).map(|_| "1,1,1,1".into())
        }),
    );
    add(
        "multiplicities",
        "string-at-3alpha2",
        Box::new(|alg| {
            let ms: Vec<u64> = (1..=8)
                .map(|m| alg.peterson_multiplicity_u64(&RootVector::new(vec![m, 3])))
                .collect();
            expect(ms, vec![1, 2, 3, 4, 4, 3, 2, 1]).map(|_| "1,2,3,4,4,3,2,1".into())
        }),
    );
    add(
        "multiplicities",
        "gram-equals-peterson-h10",
        Box::new(|alg| {
            let bound = alg.max_exact_height().min(10);
            for h in 1..=bound {
                for n1 in 0..=h {
                    let rv = RootVector::new(vec![n1, h - n1]);
                    let gram = alg.root_multiplicity(&rv).map_err(|e| e.to_string())? as u64;
                    let pet = alg.peterson_multiplicity_u64(&rv);
                    if gram != pet {
                        return Err(format!("mismatch at {rv}: gram {gram} vs peterson {pet}"));
                    }
                }
            }
            Ok(format!("all roots up to height {bound}"))
        }),
    );

    // ---------------- casimir ----------------
    add(
        "casimir",
        "alpha11-simple-roots",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            for i in 1..=2usize {
                let v = t
                    .casimir_eigenvalue(alg, &alg.e(&[i]).unwrap())
                    .map_err(|e| e.to_string())?;
                expect_q(&v, q(-13, 4))?;
            }
            Ok("-13/4".into())
        }),
    );
    add(
        "casimir",
        "alpha11-singlet",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let v0 = alg.h(1).unwrap().sub(&alg.h(2).unwrap());
            let v = t.casimir_eigenvalue(alg, &v0).map_err(|e| e.to_string())?;
            expect_q(&v, qi(0))
        }),
    );
    add(
        "casimir",
        "alpha23-spectrum",
        Box::new(|alg| {
            let t = fib_alpha23(alg)?;
            let cases: Vec<(kmlie::LieElement, Q)> = vec![
                (alg.f(&[1]).unwrap(), q(-13, 20)),
                (alg.f(&[2]).unwrap(), q(-6, 5)),
                (alg.e(&[1]).unwrap(), q(-13, 20)),
                (alg.e(&[2]).unwrap(), q(-6, 5)),
                (alg.e(&[1, 2]).unwrap(), q(-13, 20)),
                (alg.e(&[2, 1, 2]).unwrap(), q(-13, 20)),
            ];
            for (x, want) in cases {
                let v = t.casimir_eigenvalue(alg, &x).map_err(|e| e.to_string())?;
                expect_q(&v, want)?;
            }
            Ok("-13/20 x4, -6/5 x2".into())
        }),
    );

    // ---------------- kernels ----------------
    add(
        "kernels",
        "head-at-2alpha",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let k = t
                .lowering_kernel(alg, &RootVector::new(vec![2, 2]))
                .map_err(|e| e.to_string())?;
            expect(k.vectors.len(), 1)?;
            expect_q(&k.nu, qi(2))?;
            let head = alg.e(&[1, 2, 1, 2]).unwrap();
            let omega = t.casimir_eigenvalue(alg, &head).map_err(|e| e.to_string())?;
            expect_q(&omega, qi(2))
        }),
    );
    add(
        "kernels",
        "heads-at-3alpha",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let k = t
                .lowering_kernel(alg, &RootVector::new(vec![3, 3]))
                .map_err(|e| e.to_string())?;
            expect(k.vectors.len(), 2)?;
            let l1 = alg
                .e(&[1, 2, 1, 2, 1, 2])
                .unwrap()
                .add(&alg.e(&[2, 1, 1, 2, 1, 2]).unwrap());
            let l2 = alg
                .e(&[1, 1, 2, 2, 1, 2])
                .unwrap()
                .add(&alg.e(&[2, 1, 1, 2, 1, 2]).unwrap().scale(&qi(3)));
            for l in [&l1, &l2] {
                if !alg.is_zero_element(&t.lower_raw(alg, l)) {
                    return Err(format!("{l} is not annihilated by the lowering operator"));
                }
                let omega = t.casimir_eigenvalue(alg, l).map_err(|e| e.to_string())?;
                expect_q(&omega, qi(6))?;
            }
            Ok("two heads with J3 = 3, Omega = 6".into())
        }),
    );
    add(
        "kernels",
        "head-at-3a1-2a2",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let beta = RootVector::new(vec![3, 2]);
            let k = t.lowering_kernel(alg, &beta).map_err(|e| e.to_string())?;
            expect(k.vectors.len(), 1)?;
            expect_q(&k.nu, q(5, 2))?;
            // span equality with 3 e[1,1,2,1,2] + 4 e[2,1,1,1,2] through
            // basis coordinates
            let head = alg
                .e(&[1, 1, 2, 1, 2])
                .unwrap()
                .scale(&qi(3))
                .add(&alg.e(&[2, 1, 1, 1, 2]).unwrap().scale(&qi(4)));
            let basis = alg.root_space_basis(&beta).map_err(|e| e.to_string())?;
            let kc = alg
                .express_in_basis(&k.vectors[0], &basis)
                .map_err(|e| e.to_string())?;
            let hc = alg.express_in_basis(&head, &basis).map_err(|e| e.to_string())?;
            let pivot = kc.iter().position(|c| !c.is_zero()).ok_or("zero kernel vector")?;
            let ratio = &hc[pivot] / &kc[pivot];
            for (a, b) in hc.iter().zip(&kc) {
                if *a != b * &ratio {
                    return Err("kernel is not the span of 3e[11212]+4e[21112]".into());
                }
            }
            let omega = t.casimir_eigenvalue(alg, &head).map_err(|e| e.to_string())?;
            expect_q(&omega, q(15, 4))
        }),
    );

    // ---------------- alpha11 adjoint report ----------------
    add(
        "alpha11",
        "adjoint-report",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let rep = so21::decompose_adjoint(alg, &t, 8, 4).map_err(|e| e.to_string())?;
            expect(rep.singlets, 1)?;
            expect(rep.singlet_witnesses.clone(), vec!["h1 - h2".to_string()])?;
            expect(rep.principal.len(), 2)?;
            for p in &rep.principal {
                expect(p.omega.clone(), Some(q(-13, 4)))?;
                expect(p.mult, 1)?;
            }
            if !rep.accounting_ok {
                return Err(format!("accounting failed: {:?}", rep.diagnostics));
            }
            let find = |root: Vec<i64>| {
                rep.discrete
                    .iter()
                    .find(|d| d.root.0 == root)
                    .map(|d| (d.s.clone(), d.mult))
            };
            expect(find(vec![2, 2]), Some((qi(2), 1)))?;
            expect(find(vec![3, 3]), Some((qi(3), 2)))?;
            expect(find(vec![3, 2]), Some((q(5, 2), 1)))?;
            expect(rep.complementary().len(), 0)?;
            Ok("1 singlet, 2 principal (Omega = -13/4), heads s = 2, 3, 5/2".into())
        }),
    );

    // ---------------- alpha23 adjoint report ----------------
    add(
        "alpha23",
        "adjoint-report",
        Box::new(|alg| {
            let t = fib_alpha23(alg)?;
            let rep = so21::decompose_adjoint(alg, &t, 8, 2).map_err(|e| e.to_string())?;
            expect(rep.singlets, 1)?;
            expect(rep.singlet_witnesses.clone(), vec!["h2".to_string()])?;
            expect(rep.principal.len(), 6)?;
            let mut omegas: Vec<Q> = rep
                .principal
                .iter()
                .map(|p| p.omega.clone().ok_or("unresolved Casimir block"))
                .collect::<Result<_, _>>()?;
            omegas.sort();
            let want = vec![
                q(-6, 5),
                q(-6, 5),
                q(-13, 20),
                q(-13, 20),
                q(-13, 20),
                q(-13, 20),
            ];
            if omegas != want {
                return Err(format!(
                    "Omega multiset {:?}",
                    omegas.iter().map(fmt_q).collect::<Vec<_>>()
                ));
            }
            if !rep.accounting_ok {
                return Err(format!("accounting failed: {:?}", rep.diagnostics));
            }
            expect(rep.complementary().len(), 0)?;
            Ok("singlet h2; six strings, Omega multiset {-13/20 x4, -6/5 x2}".into())
        }),
    );

    // ---------------- weight tables ----------------
    add(
        "weight-tables",
        "lambda1-columns",
        Box::new(|alg| {
            let lam = alg.cartan().fundamental_weights()[0].clone();
            let table = weights::weight_table(alg, &lam, 14).map_err(|e| e.to_string())?;
            let col: Vec<u64> = (0..=7).map(|n| table.mult_u64(&[n, n])).collect();
            expect(col, vec![1, 1, 2, 6, 17, 50, 151, 461])?;
            let col2: Vec<u64> = (0..=6).map(|n| table.mult_u64(&[n + 1, n])).collect();
            expect(col2, vec![1, 1, 3, 9, 26, 80, 246])?;
            Ok("both columns reproduced".into())
        }),
    );
    add(
        "weight-tables",
        "recursion-vs-freudenthal",
        Box::new(|alg| {
            let lam = alg.cartan().fundamental_weights()[0].clone();
            let rs = weights::weight_table(alg, &lam, 6).map_err(|e| e.to_string())?;
            let fr = weights::freudenthal_table(alg, &lam, 6).map_err(|e| e.to_string())?;
            if rs.offsets() != fr.offsets() {
                return Err("support sets differ".into());
            }
            for o in rs.offsets() {
                if rs.mult(&o) != fr.mult(&o) {
                    return Err(format!("mismatch at {o:?}"));
                }
            }
            Ok(format!("{} weights agree", rs.offsets().len()))
        }),
    );
    add(
        "weight-tables",
        "rho-shifts",
        Box::new(|alg| {
            let shifts = weights::rho_shifts(alg, 3);
            let mut got: Vec<Vec<i64>> = shifts.iter().map(|(_, s)| s.0.clone()).collect();
            got.sort();
            let mut want = vec![
                vec![0, 1],
                vec![1, 0],
                vec![1, 4],
                vec![4, 1],
                vec![4, 12],
                vec![12, 4],
            ];
            want.sort();
            expect(got, want).map(|_| "lengths 1..3".into())
        }),
    );

    // ---------------- highest-weight decomposition ----------------
    add(
        "hw",
        "lambda1-discrete-counts",
        Box::new(|alg| {
            let lam = alg.cartan().fundamental_weights()[0].clone();
            let t = fib_alpha11(alg)?;
            let table = weights::weight_table(alg, &lam, 14).map_err(|e| e.to_string())?;
            let dec = weights::decompose_hw(alg, &t, &table).map_err(|e| e.to_string())?;
            let central = dec
                .columns
                .iter()
                .find(|c| c.top_offset == vec![0, 0])
                .ok_or("missing central column")?;
            expect_q(&central.s_top, q(1, 2))?;
            let counts: Vec<u64> = central
                .counts
                .iter()
                .map(|c| c.to_u64().unwrap_or(u64::MAX))
                .collect();
            expect(counts, vec![1, 0, 1, 4, 11, 33, 101, 310])?;
            Ok("counts {1,0,1,4,11,33,101,310} at s = (2n+1)/2".into())
        }),
    );
    add(
        "hw",
        "heads",
        Box::new(|alg| {
            let t = fib_alpha11(alg)?;
            let lam1 = alg.cartan().fundamental_weights()[0].clone();
            let rho = alg.cartan().weyl_vector();
            expect_q(&weights::casimir_on_hw(alg, &t, &lam1), q(-1, 4))?;
            expect_q(&weights::casimir_on_hw(alg, &t, &rho), qi(0))?;
            expect_q(&(-t.nu_weight(alg, &lam1)), q(1, 2))?;
            expect_q(&(-t.nu_weight(alg, &rho)), qi(1))?;
            Ok("lambda1: s = 1/2, Omega = -1/4; rho: s = 1, Omega = 0".into())
        }),
    );

    // ---------------- real-root decomposition ----------------
    add(
        "real",
        "cartan-string",
        Box::new(|alg| {
            let t = So21Triple::build_real(
                alg,
                &RootVector::new(vec![1, 0]),
                &alg.e(&[1]).unwrap(),
            )
            .map_err(|e| e.to_string())?;
            let rep = so21::decompose_real_root(alg, &t, 8).map_err(|e| e.to_string())?;
            expect(
                rep.cartan_modules.clone().into_iter().collect::<Vec<_>>(),
                vec![(0, 1), (2, 1)],
            )?;
            expect(
                rep.cartan_trivial_witnesses.clone(),
                vec!["3 h1 + 2 h2".to_string()],
            )?;
            Ok("V(2) + V(0), trivial spanned by 3h1 + 2h2".into())
        }),
    );
    add(
        "real",
        "string-at-3alpha2",
        Box::new(|alg| {
            let t = So21Triple::build_real(
                alg,
                &RootVector::new(vec![1, 0]),
                &alg.e(&[1]).unwrap(),
            )
            .map_err(|e| e.to_string())?;
            let rep = so21::decompose_real_root(alg, &t, 8).map_err(|e| e.to_string())?;
            let s3 = rep
                .strings
                .iter()
                .find(|s| s.cells[0].0 .0 == vec![1, 3])
                .ok_or("missing string")?;
            expect(
                s3.modules.clone().into_iter().collect::<Vec<_>>(),
                vec![(1, 1), (3, 1), (5, 1), (7, 1)],
            )
            .map(|_| "V(7) + V(5) + V(3) + V(1)".into())
        }),
    );
    add(
        "real",
        "wedge-square-v3",
        Box::new(|_| {
            let w = sl2::wedge_square(3);
            expect(
                w.into_iter().collect::<Vec<_>>(),
                vec![(0, 1), (4, 1)],
            )
            .map(|_| "V(4) + V(0)".into())
        }),
    );

    // ---------------- principal so(2,1) ----------------
    add(
        "principal",
        "adjoint-report",
        Box::new(|alg| {
            let t = So21Triple::build_principal(alg).map_err(|e| e.to_string())?;
            let rep = so21::decompose_adjoint(alg, &t, 8, 4).map_err(|e| e.to_string())?;
            expect(rep.singlets, 0)?;
            expect(rep.principal.len(), alg.rank() - 1)?;
            for d in &rep.discrete {
                if !d.s.is_integer() || !d.s.is_positive() {
                    return Err(format!("non-integral discrete parameter {}", fmt_q(&d.s)));
                }
            }
            if !rep.accounting_ok {
                return Err(format!("accounting failed: {:?}", rep.diagnostics));
            }
            Ok(format!(
                "{} principal series, integral discrete parameters",
                rep.principal.len()
            ))
        }),
    );

    // ---------------- conjecture scans ----------------
    add(
        "conjecture",
        "published-roots-scan",
        Box::new(|alg| {
            // the two worked roots with their published witness words
            let alphas = vec![
                (
                    RootVector::new(vec![1, 1]),
                    alg.e(&[1, 2]).map_err(|e| e.to_string())?,
                ),
                (
                    RootVector::new(vec![2, 3]),
                    alg.e(&[2, 1, 2, 1, 2]).map_err(|e| e.to_string())?,
                ),
            ];
            let rep = so21::conjecture_scan(alg, &alphas, 8, 4).map_err(|e| e.to_string())?;
            if !rep.verdict_no_complementary {
                return Err("complementary series found".into());
            }
            Ok("no complementary series at the two worked roots".into())
        }),
    );
    add(
        "conjecture",
        "timelike-scan-h6",
        Box::new(|alg| {
            // full scan with lexicographic canonical witnesses; a
            // complementary label anywhere is reported as a failure with
            // the counterexample in the detail column
            let mut alphas = Vec::new();
            for (root, _) in alg.enumerate_roots(6) {
                if matches!(
                    alg.cartan().classify_norm(&root),
                    Ok(kmlie::NormClass::Timelike)
                ) {
                    let w = so21::canonical_witness(alg, &root).map_err(|e| e.to_string())?;
                    alphas.push((root, w));
                }
            }
            let rep = so21::conjecture_scan(alg, &alphas, 8, 4).map_err(|e| e.to_string())?;
            if !rep.verdict_no_complementary {
                let mut hits = Vec::new();
                for e in &rep.entries {
                    for (p, omega, class) in &e.continuous {
                        if *class == Some(sl2::ContinuousClass::Complementary) {
                            hits.push(format!(
                                "alpha {} witness {} p = {} Omega = {}",
                                e.alpha,
                                e.witness,
                                fmt_q(p),
                                omega.as_ref().map(fmt_q).unwrap_or("?".into())
                            ));
                        }
                    }
                }
                return Err(format!("complementary series found: {}", hits.join("; ")));
            }
            Ok(format!(
                "{} roots scanned, none complementary",
                rep.entries.len()
            ))
        }),
    );
    add(
        "conjecture",
        "rank2-m4-scan",
        Box::new(|_| {
            // fixed companion algebra regardless of the configured matrix
            let alg4 = Algebra::new(CartanMatrix::rank2(-4).expect("valid"));
            let alpha = RootVector::new(vec![1, 1]);
            let w = so21::canonical_witness(&alg4, &alpha).map_err(|e| e.to_string())?;
            let rep = so21::conjecture_scan(&alg4, &[(alpha, w)], 8, 4)
                .map_err(|e| e.to_string())?;
            if !rep.verdict_no_complementary {
                return Err("complementary series found".into());
            }
            Ok("no complementary series".into())
        }),
    );
    add(
        "conjecture",
        "classifier-negative-control",
        Box::new(|_| {
            expect(
                sl2::classify_continuous(&q(-1, 8)),
                sl2::ContinuousClass::Complementary,
            )
            .map(|_| "Omega = -1/8 flags complementary".into())
        }),
    );

    // ---------------- unirep ----------------
    add(
        "unirep",
        "quadrature-norms",
        Box::new(|_| {
            let m = unirep::models::DiscreteModel::new(2.0).map_err(|e| e.to_string())?;
            let grid = unirep::models::DiskGrid::new(96, 128);
            let n0 = grid
                .inner_uhp(m.s, |z| m.phi(0, z).unwrap(), |z| m.phi(0, z).unwrap())
                .re;
            for n in 1..=4u32 {
                let nn = grid
                    .inner_uhp(m.s, |z| m.phi(n, z).unwrap(), |z| m.phi(n, z).unwrap())
                    .re;
                let exact = m.norm_sq_ratio(n);
                let rel = ((nn / n0) - exact).abs() / exact;
                if rel > 1e-6 {
                    return Err(format!("norm ratio at n = {n} off by {rel:.2e}"));
                }
            }
            Ok("norm ratios match to 1e-6".into())
        }),
    );
    add(
        "unirep",
        "interior-unitarity",
        Box::new(|_| {
            let g = unirep::sl2_from_params(
                &unirep::GroupParams::new(num_complex::Complex64::new(0.04, -0.03), 0.7)
                    .unwrap(),
            );
            let u = unirep::group_matrix(unirep::Model::Disk { s: 2.0 }, &g, 32, 1e-8)
                .map_err(|e| e.to_string())?;
            Ok(format!("defect {:.2e} at range 32", u.defect))
        }),
    );
    add(
        "unirep",
        "cover-phases",
        Box::new(|_| {
            use unirep::cover::{cover_phase, PhaseClass};
            expect(cover_phase(5, 2, 1).unwrap().class, PhaseClass::MinusIdentity)?;
            expect(cover_phase(5, 2, 2).unwrap().class, PhaseClass::Identity)?;
            expect(cover_phase(1, 2, 2).unwrap().class, PhaseClass::Identity)?;
            expect(cover_phase(2, 1, 1).unwrap().class, PhaseClass::Identity)?;
            Ok("4 pi periodicity at half-integral s".into())
        }),
    );
    add(
        "unirep",
        "diffop-residuals",
        Box::new(|_| {
            let rep = unirep::diffops::check_discrete(2.0, 3);
            if rep.max() > 1e-8 {
                return Err(format!("max residual {:.2e}", rep.max()));
            }
            let repp = unirep::diffops::check_principal(12f64.sqrt(), &[0.0, 1.0, 0.5]);
            if repp.eigen.max(repp.ladder) > 1e-8 {
                return Err(format!("principal residual {:.2e}", repp.eigen.max(repp.ladder)));
            }
            Ok(format!("max residual {:.2e}", rep.max().max(repp.eigen)))
        }),
    );

    out
}

/// Runs all checks (optionally restricted to one suite) against the given
/// algebra and returns the results.
pub fn run(alg: &Algebra, suite: Option<&str>) -> Vec<CheckResult> {
    checks()
        .into_iter()
        .filter(|c| suite.is_none_or(|s| c.suite == s))
        .map(|c| {
            let outcome = (c.run)(alg);
            CheckResult {
                suite: c.suite,
                name: c.name,
                ok: outcome.is_ok(),
                detail: match outcome {
                    Ok(d) | Err(d) => d,
                },
            }
        })
        .collect()
}

/// Machine-readable summary for the `verify` subcommand.
pub fn summary_json(results: &[CheckResult]) -> serde_json::Value {
    json!({
        "version": 1,
        "passed": results.iter().filter(|r| r.ok).count(),
        "failed": results.iter().filter(|r| !r.ok).count(),
        "checks": results.iter().map(|r| json!({
            "suite": r.suite,
            "name": r.name,
            "ok": r.ok,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
    })
}
