//! End-to-end acceptance suite. Prints one line per criterion and exits
//! nonzero if any criterion fails or exceeds its time budget.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zlab_core::lie::{homogeneous_rank, restricted_power_expand};
use zlab_core::magnus::{epsilon, magnus_expand, tau_group_word};
use zlab_core::shuffle::infiltration;
use zlab_core::unitriangular::{binomial_equiv_check, verify_identities_with, verify_section6, Filtrations};
use zlab_core::words::{bracketing, check_hall_conditions, lyndon_words, necklace_count, BracketedWord};
use zlab_core::zassenhaus::{
    dimension_count, fundamental_matrix, h2_dimension, jump_set_equivalence, verify_shuffle_relations,
};
use zlab_core::{Alphabet, CoeffRing, FiniteUTGroup, GroupWord, LevelParams, ModRing, NcSeries, Word};

type Outcome = Result<String, String>;

fn w(s: &str) -> Word {
    s.parse().expect("valid word")
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn params(p: u64, n: u32, m: usize) -> Result<LevelParams, String> {
    LevelParams::new(p, n, m).map_err(|e| e.to_string())
}

fn identity_at_level_two() -> Outcome {
    for p in [2, 3, 5] {
        for m in [2, 3] {
            let fm = fundamental_matrix(&params(p, 2, m)?).map_err(|e| e.to_string())?;
            ensure(fm.is_identity(), format!("p={p} m={m} is not the identity"))?;
            ensure(fm.size() as u64 == m as u64 + necklace_count(m as u64, 2), "wrong size")?;
        }
    }
    Ok("6 matrices are identities".into())
}

fn single_entry_at_level_three() -> Outcome {
    let fm = fundamental_matrix(&params(3, 3, 3)?).map_err(|e| e.to_string())?;
    ensure(fm.size() == 11, format!("size {}", fm.size()))?;
    ensure(fm.is_upper_unitriangular(), "not unitriangular")?;
    let off = fm.off_diagonal();
    ensure(
        off == vec![(w("abc"), w("acb"), 2)],
        format!("off-diagonal entries {off:?}"),
    )?;
    Ok("11x11, single entry 2 at (abc, acb)".into())
}

fn identity_at_level_three_p2() -> Outcome {
    let fm = fundamental_matrix(&params(2, 3, 2)?).map_err(|e| e.to_string())?;
    let index: Vec<String> = fm.index.iter().map(Word::to_string).collect();
    ensure(index == ["a", "b", "ab", "aab", "abb"], format!("index {index:?}"))?;
    ensure(fm.is_identity(), "not the identity")?;
    Ok("5x5 identity over [a, b, ab, aab, abb]".into())
}

fn triangularity() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let ring = ModRing::new(p, 3).map_err(|e| e.to_string())?;
        for m in 1..=3 {
            let alphabet = Alphabet::new(m).map_err(|e| e.to_string())?;
            let lengths: BTreeSet<usize> = (1..=5).collect();
            for x in lyndon_words(alphabet, &lengths).map_err(|e| e.to_string())? {
                let tau = tau_group_word(&x, alphabet).map_err(|e| e.to_string())?;
                let lam = magnus_expand(&tau, ring, 5);
                for (v, c) in lam.terms() {
                    let ok = if v.is_empty() || *v == x { *c == 1 } else { *v > x };
                    ensure(ok, format!("p={p}: tau_{x} has coefficient {c} at {v}"))?;
                }
                ensure(
                    lam.coefficient(&x).map_err(|e| e.to_string())? == 1,
                    format!("missing {x}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} expansions, 0 violations"))
}

fn shuffle_relations() -> Outcome {
    let mut checked = 0;
    for (p, n, m) in [(2, 3, 2), (3, 3, 2), (5, 3, 2), (5, 4, 2), (3, 3, 3)] {
        let r = verify_shuffle_relations(&params(p, n, m)?).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("(p,n,m)=({p},{n},{m}): {:?}", r.violations))?;
        checked += r.checked;
    }
    Ok(format!("{checked} relations, 0 violations"))
}

fn random_word(rng: &mut ChaCha8Rng, m: usize) -> Word {
    let len = rng.gen_range(1..=3);
    Word::new((0..len).map(|_| rng.gen_range(0..m as u8)).collect()).expect("short word")
}

fn cfl_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let k = rng.gen_range(1..=3);
        let ring = ModRing::new(p, k).map_err(|e| e.to_string())?;
        let m = rng.gen_range(1..=3);
        let alphabet = Alphabet::new(m).map_err(|e| e.to_string())?;
        let len = rng.gen_range(0..=12);
        let factors = (0..len)
            .map(|_| (rng.gen_range(0..m as u8), if rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        let sigma = GroupWord::new(alphabet, factors).map_err(|e| e.to_string())?;
        let u = random_word(&mut rng, m);
        let v = random_word(&mut rng, m);
        let trunc = u.len() + v.len();
        let lam = magnus_expand(&sigma, ring, trunc);
        let inf = infiltration(&u, &v).map_err(|e| e.to_string())?;
        let inf = NcSeries::from_terms(
            ring,
            alphabet,
            trunc,
            inf.terms().map(|(x, c)| (x.clone(), ring.from_i64(*c))),
        )
        .map_err(|e| e.to_string())?;
        let lhs = ring.mul(
            &epsilon(&sigma, &u, ring).map_err(|e| e.to_string())?,
            &epsilon(&sigma, &v, ring).map_err(|e| e.to_string())?,
        );
        let rhs = lam.pairing(&inf).map_err(|e| e.to_string())?;
        ensure(
            lhs == rhs,
            format!("case {case}: sigma={sigma} u={u} v={v}: {lhs} != {rhs}"),
        )?;
    }
    Ok("200 random instances".into())
}

fn main_theorem() -> Outcome {
    let mut parts = Vec::new();
    for (p, n, m) in [(5, 3, 2), (5, 4, 2), (7, 3, 3), (7, 5, 2)] {
        let lp = params(p, n, m)?;
        let d = dimension_count(&lp).map_err(|e| e.to_string())?;
        ensure(d.holds(), format!("(p,n,m)=({p},{n},{m}): {d:?}"))?;
        let fm = fundamental_matrix(&lp).map_err(|e| e.to_string())?;
        ensure(fm.size() as u64 == h2_dimension(&lp), "matrix size differs")?;
        parts.push(format!("{}+{}={}", d.m, d.indec, d.h2));
    }
    Ok(parts.join(", "))
}

fn jump_sets() -> Outcome {
    for p in [2, 3, 5, 7] {
        for n in 1..=200 {
            ensure(
                jump_set_equivalence(n, p).map_err(|e| e.to_string())?,
                format!("n={n} p={p}"),
            )?;
        }
    }
    Ok("n <= 200, p in {2,3,5,7}".into())
}

fn section6() -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for p in [2, 3] {
        let r = verify_section6(p, 3, 1, 6, 4096).map_err(|e| e.to_string())?;
        ensure(r.passed(), format!("p={p}: {:?}", r.violations))?;
        checked += r.checked;
        skipped += r.skipped.len();
    }
    Ok(format!(
        "{checked} checks, 0 violations, {skipped} grid points above order 4096 skipped"
    ))
}

fn group_identities() -> Outcome {
    let mut checked = 0;
    for (i, p, j) in [(2, 2, 0), (2, 2, 1), (3, 2, 0), (2, 3, 0), (2, 3, 1)] {
        let g = FiniteUTGroup::new(i, p, j).map_err(|e| e.to_string())?;
        let mut f = Filtrations::new(&g, p).map_err(|e| e.to_string())?;
        for n in 1..=2 * p as u32 {
            let r = verify_identities_with(&mut f, n).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("{g} n={n}: {:?}", r.violations))?;
            checked += r.checked;
        }
    }
    Ok(format!("{checked} checks on 5 groups"))
}

fn binomials() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for j in 0..=4 {
            for jp in 1..=5 {
                for t in 1..=p.pow(jp).min(200) {
                    let ok = binomial_equiv_check(p, j, jp, t).map_err(|e| e.to_string())?;
                    ensure(ok, format!("p={p} j={j} j'={jp} t={t}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} grid points"))
}

fn lyndon_counts() -> Outcome {
    for m in 1..=3 {
        let alphabet = Alphabet::new(m).map_err(|e| e.to_string())?;
        for i in 1..=8 {
            let count = lyndon_words(alphabet, &BTreeSet::from([i]))
                .map_err(|e| e.to_string())?
                .len();
            ensure(
                count as u64 == necklace_count(m as u64, i as u32),
                format!("m={m} i={i}"),
            )?;
        }
        let all = lyndon_words(alphabet, &(1..=6).collect()).map_err(|e| e.to_string())?;
        let mut hall: Vec<BracketedWord> = all.iter().map(|x| bracketing(x).expect("Lyndon")).collect();
        // Hall order is the alphabetic order of foliages
        hall.sort_by(|a, b| zlab_core::words::compare_alp(&a.foliage(), &b.foliage()));
        ensure(
            check_hall_conditions(&hall, 6),
            format!("Hall conditions fail for m={m}"),
        )?;
    }
    Ok("counts for i <= 8, Hall conditions to length 6".into())
}

fn lie_ranks() -> Outcome {
    let alphabet = Alphabet::new(2).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for p in [2u64, 3, 5] {
        let field = ModRing::field(p).map_err(|e| e.to_string())?;
        for n in 1..=5usize {
            let mut family = Vec::new();
            let mut j = 0;
            while p.pow(j) as usize <= n {
                let pj = p.pow(j) as usize;
                if n % pj == 0 {
                    for x in lyndon_words(alphabet, &BTreeSet::from([n / pj])).map_err(|e| e.to_string())? {
                        let b = bracketing(&x).map_err(|e| e.to_string())?;
                        family.push(restricted_power_expand(j, &b, field, alphabet, n).map_err(|e| e.to_string())?);
                    }
                }
                j += 1;
            }
            let rank = homogeneous_rank(&family, n, p).map_err(|e| e.to_string())?;
            ensure(
                rank == family.len(),
                format!("p={p} n={n}: rank {rank} < {}", family.len()),
            )?;
            if p == 2 {
                sizes.push(family.len().to_string());
            }
        }
    }
    Ok(format!("independent; p=2 family sizes {}", sizes.join(",")))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "fundamental matrix n=2 is the identity",
            budget: secs(1),
            run: identity_at_level_two,
        },
        Criterion {
            name: "fundamental matrix n=3 p=3 m=3",
            budget: secs(5),
            run: single_entry_at_level_three,
        },
        Criterion {
            name: "fundamental matrix n=3 p=2 m=2",
            budget: secs(1),
            run: identity_at_level_three_p2,
        },
        Criterion {
            name: "triangularity of Magnus expansions",
            budget: secs(30),
            run: triangularity,
        },
        Criterion {
            name: "shuffle relations",
            budget: secs(60),
            run: shuffle_relations,
        },
        Criterion {
            name: "CFL identity",
            budget: secs(10),
            run: cfl_identity,
        },
        Criterion {
            name: "dimension count and Lyndon spanning",
            budget: secs(60),
            run: main_theorem,
        },
        Criterion {
            name: "jump set equivalence",
            budget: secs(1),
            run: jump_sets,
        },
        Criterion {
            name: "powers of unitriangular groups",
            budget: secs(120),
            run: section6,
        },
        Criterion {
            name: "Zassenhaus identities on finite groups",
            budget: secs(120),
            run: group_identities,
        },
        Criterion {
            name: "binomial divisibility lemma",
            budget: secs(5),
            run: binomials,
        },
        Criterion {
            name: "Lyndon counts and Hall conditions",
            budget: secs(5),
            run: lyndon_counts,
        },
        Criterion {
            name: "restricted Lie ranks",
            budget: secs(10),
            run: lie_ranks,
        },
    ];
    let mut failures = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget {:?}", c.budget)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} {:>2}. {} [{:.2?}] {}", k + 1, c.name, elapsed, detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
