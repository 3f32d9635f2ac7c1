//! End-to-end verification suite: ten criteria covering every component,
//! each reported with a pass flag, its runtime and a short detail line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{eval_at_angle, AlgebraElement, Coeff, GroupElement, RationalAngle, UnitriangularMatrix};
use crate::derivations::{alpha_both_ways, compose_from_parts, decompose, split_central, Derivation};
use crate::error::Result;
use crate::fredholm::{bott_projector, dirac_even_pairing, lattice_chern, odd_pairing, KClass, ModuleName};
use crate::group_structure::{
    brute_force_centralizer, classify_element, cyclic_cohomology_dim, group_cohomology, periodic_cyclic_dims,
    CentralizerCase, NgType,
};
use crate::kk::{
    check_duality, check_exactness, check_faithfulness, khomology_sequence, pv_ktheory_sequence, run_mutations,
    verify_tables, VerifyConfig,
};
use crate::sampling::{random_case_element, random_central, random_coeff, random_element, strip_central};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub odd_truncations: Vec<usize>,
    pub dirac_truncation: usize,
    pub chern_grids: Vec<usize>,
    pub bott_mass: f64,
    pub tol: f64,
    pub n_commutators: usize,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 20240917,
            odd_truncations: vec![32, 64, 128],
            dirac_truncation: 48,
            chern_grids: vec![16, 32, 64],
            bott_mass: 1.0,
            tol: 1e-8,
            n_commutators: 4,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub seconds: f64,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [&str; 10] = [
    "pairing tables",
    "Toeplitz index",
    "Dirac/Bott pairing",
    "derivation decomposition",
    "derivations kill W",
    "centralizers",
    "cohomology dimensions",
    "six-term exactness",
    "duality and faithfulness",
    "algebra oracles",
];

type Outcome = Result<(bool, String)>;

fn timed(id: usize, time_limit: Option<f64>, f: impl FnOnce() -> Outcome) -> CriterionResult {
    let start = Instant::now();
    let out = f();
    let seconds = start.elapsed().as_secs_f64();
    let (mut pass, mut detail) = match out {
        Ok(x) => x,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = time_limit {
        if seconds > limit {
            pass = false;
            detail = format!("{detail}; exceeded {limit}s");
        }
    }
    CriterionResult {
        id,
        name: CRITERIA[id - 1].to_string(),
        pass,
        seconds,
        detail,
    }
}

pub fn run(id: usize, cfg: &AcceptanceConfig) -> CriterionResult {
    match id {
        1 => timed(1, Some(60.0), || pairing_tables(cfg)),
        2 => timed(2, None, || toeplitz_index(cfg)),
        3 => timed(3, Some(120.0), || dirac_bott(cfg)),
        4 => timed(4, None, || derivation_round_trip(cfg)),
        5 => timed(5, None, || derivations_kill_w(cfg)),
        6 => timed(6, Some(30.0), || centralizers(cfg)),
        7 => timed(7, None, cohomology),
        8 => timed(8, None, exactness),
        9 => timed(9, None, duality),
        10 => timed(10, None, || algebra_oracles(cfg)),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run(id, cfg)).collect()
}

fn pairing_tables(cfg: &AcceptanceConfig) -> Outcome {
    let v = verify_tables(&VerifyConfig {
        odd_truncations: cfg.odd_truncations.clone(),
        n_commutators: cfg.n_commutators,
        tol: cfg.tol,
        ..VerifyConfig::default()
    })?;
    let bad: Vec<String> = v
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("<{},{}> stored {} computed {}", c.col, c.row, c.stored, c.computed))
        .collect();
    let detail = if bad.is_empty() {
        format!("{} entries recomputed", v.checks.len())
    } else {
        bad.join("; ")
    };
    Ok((v.pass, detail))
}

fn toeplitz_index(cfg: &AcceptanceConfig) -> Outcome {
    let r = odd_pairing(ModuleName::Z1prime, &KClass::V.quotient_image(), &cfg.odd_truncations, cfg.tol)?;
    let counts: Vec<String> = r
        .index
        .counts
        .iter()
        .map(|c| format!("N={}: {}-{}", c.truncation, c.kernel, c.cokernel))
        .collect();
    Ok((r.value == 1, format!("index {} ({})", r.value, counts.join(", "))))
}

fn dirac_bott(cfg: &AcceptanceConfig) -> Outcome {
    let mut values = Vec::new();
    for &g in &cfg.chern_grids {
        values.push(lattice_chern(&bott_projector(g, cfg.bott_mass)?)?.value);
    }
    let field = bott_projector(*cfg.chern_grids.first().unwrap_or(&16), cfg.bott_mass)?;
    let d = dirac_even_pairing(&field, cfg.dirac_truncation, cfg.n_commutators, 0.1)?;
    let pass = values.iter().all(|&v| v == 1) && d.value == 1 && cfg.dirac_truncation >= 48;
    Ok((
        pass,
        format!(
            "Chern {:?} on grids {:?}; trace pairing {} at N={} (spread {:.1e}, box {})",
            values, cfg.chern_grids, d.value, cfg.dirac_truncation, d.spread, d.box_size
        ),
    ))
}

/// Seeded `(z₁, z₂, x)` with every exponent in `[-5, 5]`.
fn random_parts(rng: &mut ChaCha8Rng) -> (AlgebraElement, AlgebraElement, AlgebraElement) {
    (random_central(rng, 5, 3), random_central(rng, 5, 3), random_element(rng, 5, 6))
}

fn derivation_round_trip(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = Vec::new();
    for i in 0..100 {
        let (z1, z2, x) = random_parts(&mut rng);
        let d = compose_from_parts(&z1, &z2, &x)?;
        match decompose(&d) {
            Ok(r) if r.z1 == z1 && r.z2 == z2 && r.x == strip_central(&x) && r.compose()? == d => {}
            Ok(_) => failures.push(format!("sample {i}: parts differ")),
            Err(e) => failures.push(format!("sample {i}: {e}")),
        }
    }
    let mut cells = 0;
    for i in 0..20 {
        let (z1, z2, x) = random_parts(&mut rng);
        let d = compose_from_parts(&z1, &z2, &x)?;
        let (_, _, residual) = split_central(&d);
        let (px, qx, rx) = x.max_abs_exponents();
        let (bp, bq) = (px + 1, qx + 1);
        let br = rx + bp * bq + 2;
        for p in -bp..=bp {
            for q in -bq..=bq {
                for r in -br..=br {
                    if let Some((from_a, from_b)) = alpha_both_ways(&residual, p, q, r) {
                        cells += 1;
                        let alpha = x.coeff_at(p, q, r);
                        if from_a != from_b || from_a != alpha {
                            failures.push(format!(
                                "derivation {i} cell ({p},{q},{r}): {from_a} vs {from_b}, x has {alpha}"
                            ));
                        }
                    }
                }
            }
        }
    }
    failures.truncate(5);
    let detail = if failures.is_empty() {
        format!("100 round trips exact; a/b sums agree on {cells} off-axis cells")
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty(), detail))
}

fn derivations_kill_w(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let w = AlgebraElement::w();
    let mut generated = Vec::new();
    for which in 1..=2 {
        generated.push(Derivation::canonical(which)?);
    }
    for _ in 0..100 {
        let (z1, z2, x) = random_parts(&mut rng);
        generated.push(compose_from_parts(&z1, &z2, &x)?);
    }
    let mut nonzero = 0;
    for d in &generated {
        if !d.is_consistent() || !d.apply(&w)?.is_zero() {
            nonzero += 1;
        }
    }

    // single coefficients that break consistency: a on the U-axis off p = 1,
    // a off-axis with p ≠ 1, b on the V-axis off q = 1, b off-axis with q ≠ 1
    let mut missed = Vec::new();
    let mut perturbations = 0;
    for d in generated.iter().take(20) {
        for _ in 0..4 {
            let c = random_coeff(&mut rng);
            let r = rng.gen_range(-5..=5);
            let pick = |rng: &mut ChaCha8Rng| loop {
                let v = rng.gen_range(-5..=5);
                if v != 1 {
                    break v;
                }
            };
            let other = rng.gen_range(-5..=5);
            let on_axis = rng.gen_bool(0.5);
            let mut bad = d.clone();
            if rng.gen_bool(0.5) {
                let g = GroupElement::new(pick(&mut rng), if on_axis { 0 } else { other }, r);
                bad.du.add_term(g, &c);
            } else {
                let g = GroupElement::new(if on_axis { 0 } else { other }, pick(&mut rng), r);
                bad.dv.add_term(g, &c);
            }
            perturbations += 1;
            if bad.check_consistency().pass {
                missed.push(format!("{:?}", (bad.du.to_string(), bad.dv.to_string())));
            }
        }
    }
    let pass = nonzero == 0 && missed.is_empty();
    Ok((
        pass,
        format!(
            "d(W) = 0 for {}/{} derivations; {}/{} perturbations flagged",
            generated.len() - nonzero,
            generated.len(),
            perturbations - missed.len(),
            perturbations
        ),
    ))
}

fn centralizers(cfg: &AcceptanceConfig) -> Outcome {
    const BOX: i64 = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xc3);
    let cases = [
        CentralizerCase::Case1,
        CentralizerCase::Case2,
        CentralizerCase::Case3,
        CentralizerCase::Case4a,
        CentralizerCase::Case4b,
        CentralizerCase::Identity,
    ];
    let mut seen = [0usize; 6];
    let mut failures = Vec::new();
    for i in 0..50 {
        // first round covers every case, then draw at random
        let k = if i < cases.len() { i } else { rng.gen_range(0..cases.len()) };
        let g = random_case_element(&mut rng, cases[k], BOX);
        let report = classify_element(g);
        if report.case != cases[k] {
            failures.push(format!("{g}: classified {:?}, expected {:?}", report.case, cases[k]));
            continue;
        }
        seen[k] += 1;
        let brute = brute_force_centralizer(g, BOX)?;
        let mut closed = Vec::new();
        for p in -BOX..=BOX {
            for q in -BOX..=BOX {
                for r in -BOX..=BOX {
                    let h = GroupElement::new(p, q, r);
                    if report.centralizes(h) {
                        closed.push(h);
                    }
                }
            }
        }
        if brute != closed {
            failures.push(format!("{g}: brute {} vs closed form {}", brute.len(), closed.len()));
        }
    }
    let covered = seen.iter().all(|&n| n > 0);
    let detail = if failures.is_empty() {
        format!("50 elements, per case {seen:?}, box {BOX}")
    } else {
        failures.join("; ")
    };
    Ok((failures.is_empty() && covered, detail))
}

fn cohomology() -> Outcome {
    let h3 = group_cohomology(NgType::H3).dims;
    let ranks: Vec<usize> = (0..8).map(|n| cyclic_cohomology_dim(n).finite_rank).collect();
    let countable: Vec<bool> = (0..8).map(|n| cyclic_cohomology_dim(n).countable_factor).collect();
    let periodic = periodic_cyclic_dims();
    let mut expected_ranks = vec![1, 2];
    expected_ranks.extend([3; 6]);
    let pass = h3 == [1, 2, 2, 1]
        && ranks == expected_ranks
        && countable.iter().enumerate().all(|(n, &c)| c == (n <= 2))
        && periodic == (3, 3);
    Ok((
        pass,
        format!("H*(H3) {h3:?}; HC ranks {ranks:?}; countable {countable:?}; periodic {periodic:?}"),
    ))
}

fn exactness() -> Outcome {
    let k = check_exactness(&pv_ktheory_sequence())?;
    let h = check_exactness(&khomology_sequence())?;
    let muts = run_mutations()?;
    let caught = muts.iter().filter(|m| m.pass).count();
    let pass = k.exact && h.exact && caught == muts.len() && muts.len() == 12;
    Ok((
        pass,
        format!(
            "K-theory failing nodes {:?}, K-homology failing nodes {:?}, mutations {}/{} at predicted nodes",
            k.failing_nodes(),
            h.failing_nodes(),
            caught,
            muts.len()
        ),
    ))
}

fn duality() -> Outcome {
    let d = check_duality();
    let f = check_faithfulness();
    let n = d.instances.len() + d.matrix_identities.len();
    let held = d.instances.iter().chain(&d.matrix_identities).filter(|c| c.pass).count();
    Ok((
        d.pass && f.even_determinant == 1 && f.odd_determinant == 1,
        format!(
            "{held}/{n} identities hold; det even {} odd {}",
            f.even_determinant, f.odd_determinant
        ),
    ))
}

fn algebra_oracles(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let mut g = || GroupElement::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        let (a, b) = (g(), g());
        let product = AlgebraElement::basis(a.p, a.q, a.r).mul(&AlgebraElement::basis(b.p, b.q, b.r));
        let m = UnitriangularMatrix::from_element(a).matmul(&UnitriangularMatrix::from_element(b));
        let expected = AlgebraElement::monomial(m.to_element(), Coeff::from_int(1));
        if product != expected || a.mul(b) != m.to_element() {
            mismatches += 1;
        }
    }

    let mut worst = 0.0f64;
    for (s, t) in [(0, 1), (1, 2), (1, 3), (2, 5)] {
        let theta = RationalAngle::new(s, t)?;
        for _ in 0..50 {
            let x = random_element(&mut rng, 4, 4);
            let y = random_element(&mut rng, 4, 4);
            let (ex, ey) = (eval_at_angle(&x, theta), eval_at_angle(&y, theta));
            let dev = [
                (eval_at_angle(&x.mul(&y), theta) - &ex * &ey).camax(),
                (eval_at_angle(&x.star(), theta) - ex.adjoint()).camax(),
                (eval_at_angle(&(&x + &y), theta) - (&ex + &ey)).camax(),
            ];
            worst = dev.into_iter().fold(worst, f64::max);
        }
        let one = eval_at_angle(&AlgebraElement::one(), theta);
        worst = worst.max((one - crate::algebra::ComplexMatrix::identity(t as usize, t as usize)).camax());
    }
    Ok((
        mismatches == 0 && worst <= 1e-12,
        format!("{mismatches} monomial mismatches in 1000; max *-homomorphism defect {worst:.1e}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let cfg = AcceptanceConfig::default();
        for id in [4, 5, 6, 7, 8, 9, 10] {
            let r = run(id, &cfg);
            assert!(r.pass, "{}", r.line());
        }
    }

    #[test]
    fn failure_line_format() {
        let r = timed(1, Some(0.0), || Ok((true, "ok".into())));
        assert!(!r.pass);
        assert!(r.line().starts_with("[FAIL]  1 pairing tables"));
    }
}
